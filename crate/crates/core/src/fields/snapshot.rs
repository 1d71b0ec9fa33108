//! Field snapshot files.
//!
//! First line (ASCII, space separated, newline terminated):
//!
//! ```text
//! dim nx [ny [nz]] spacing_1..spacing_dim origin_1..origin_dim components
//! ```
//!
//! The body lists every cell in row-major order (last axis fastest) with the
//! components of one cell adjacent. The binary body is IEEE-754 `f64`,
//! little-endian, no padding. The CSV body has one line per cell with
//! comma-separated components.

use std::io::{BufRead, BufReader, Read, Write};

use serde::{Deserialize, Serialize};

use super::grid::Grid;
use super::state::FluidState;
use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SnapshotFormat {
    Binary,
    Csv,
}

impl SnapshotFormat {
    pub fn extension(self) -> &'static str {
        match self {
            SnapshotFormat::Binary => "bin",
            SnapshotFormat::Csv => "csv",
        }
    }
}

pub fn header_line<T: Real>(grid: &Grid<T>, ncomp: usize) -> String {
    let mut parts = vec![grid.dim().to_string()];
    parts.extend(grid.cells().iter().map(|n| n.to_string()));
    parts.extend(grid.spacing().iter().map(|h| format!("{}", h.as_f64())));
    parts.extend(grid.origin().iter().map(|o| format!("{}", o.as_f64())));
    parts.push(ncomp.to_string());
    parts.join(" ")
}

pub fn write_snapshot<T: Real, W: Write>(
    mut w: W,
    grid: &Grid<T>,
    comps: &[&[T]],
    format: SnapshotFormat,
) -> Result<()> {
    if comps.iter().any(|c| c.len() != grid.len()) {
        return Err(Error::Shape("component length differs from cell count".into()));
    }
    writeln!(w, "{}", header_line(grid, comps.len()))?;
    match format {
        SnapshotFormat::Binary => {
            let mut buf = Vec::with_capacity(grid.len() * comps.len() * 8);
            for k in 0..grid.len() {
                for c in comps {
                    buf.extend_from_slice(&c[k].as_f64().to_le_bytes());
                }
            }
            w.write_all(&buf)?;
        }
        SnapshotFormat::Csv => {
            for k in 0..grid.len() {
                let row: Vec<String> = comps.iter().map(|c| format!("{}", c[k].as_f64())).collect();
                writeln!(w, "{}", row.join(","))?;
            }
        }
    }
    w.flush()?;
    Ok(())
}

/// Density followed by the velocity components.
pub fn write_state<T: Real, W: Write>(w: W, state: &FluidState<T>, format: SnapshotFormat) -> Result<()> {
    let mut comps: Vec<&[T]> = vec![&state.rho.values];
    comps.extend(state.u.comps.iter().map(|c| c.as_slice()));
    write_snapshot(w, &state.rho.grid, &comps, format)
}

/// A decoded snapshot; periodicity is not stored in the file and must be supplied.
#[derive(Clone, Debug, PartialEq)]
pub struct Snapshot {
    pub grid: Grid<f64>,
    pub comps: Vec<Vec<f64>>,
}

fn parse<F: std::str::FromStr>(tok: Option<&str>, what: &str) -> Result<F> {
    tok.ok_or_else(|| Error::Parse(format!("header ends before {what}")))?
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what}")))
}

pub fn read_snapshot<R: Read>(r: R, format: SnapshotFormat, periodic: bool) -> Result<Snapshot> {
    let mut reader = BufReader::new(r);
    let mut header = String::new();
    reader.read_line(&mut header)?;
    let mut toks = header.split_whitespace();
    let dim: usize = parse(toks.next(), "dim")?;
    if !(1..=3).contains(&dim) {
        return Err(Error::Parse(format!("dimension {dim}")));
    }
    let cells = (0..dim).map(|_| parse(toks.next(), "cell count")).collect::<Result<Vec<usize>>>()?;
    let spacing = (0..dim).map(|_| parse(toks.next(), "spacing")).collect::<Result<Vec<f64>>>()?;
    let origin = (0..dim).map(|_| parse(toks.next(), "origin")).collect::<Result<Vec<f64>>>()?;
    let ncomp: usize = parse(toks.next(), "component count")?;
    let grid = Grid::new(&cells, &spacing, &origin, &vec![periodic; dim])?;
    let n = grid.len();
    let mut comps = vec![Vec::with_capacity(n); ncomp];
    match format {
        SnapshotFormat::Binary => {
            let mut bytes = Vec::new();
            reader.read_to_end(&mut bytes)?;
            if bytes.len() != n * ncomp * 8 {
                return Err(Error::Parse(format!("expected {} bytes, found {}", n * ncomp * 8, bytes.len())));
            }
            for (i, chunk) in bytes.chunks_exact(8).enumerate() {
                let v = f64::from_le_bytes(chunk.try_into().expect("chunk of 8"));
                comps[i % ncomp].push(v);
            }
        }
        SnapshotFormat::Csv => {
            for line in reader.lines() {
                let line = line?;
                if line.trim().is_empty() {
                    continue;
                }
                let vals: Vec<&str> = line.split(',').collect();
                if vals.len() != ncomp {
                    return Err(Error::Parse(format!("row has {} values, expected {ncomp}", vals.len())));
                }
                for (c, v) in vals.iter().enumerate() {
                    comps[c].push(v.trim().parse().map_err(|_| Error::Parse(format!("bad value {v}")))?);
                }
            }
            if comps.iter().any(|c| c.len() != n) {
                return Err(Error::Parse("row count does not match grid".into()));
            }
        }
    }
    Ok(Snapshot { grid, comps })
}

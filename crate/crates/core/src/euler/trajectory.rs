//! Recorded runs, their CSV form and blow-up time extraction.

use std::io::Write;

use serde::Serialize;

use super::config::SolverConfig;
use crate::error::Result;
use crate::fields::FluidState;

/// Diagnostics after one step (the first row is the initial state).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SeriesRow {
    pub t: f64,
    pub dt: f64,
    pub max_grad_u: f64,
    pub mass: f64,
    pub momentum: Vec<f64>,
    /// F(t) = ∫ x·ρu.
    pub f: f64,
    /// M(t) = ∫ (ρ − ρ̄).
    pub m: f64,
    /// ∫ ρ|u|².
    pub kinetic: f64,
    /// ∫ (½ρ|u|² + P(ρ)).
    pub total_entropy: f64,
    pub entropy_production_max: f64,
    pub entropy_production_total: f64,
    pub floor_hits: usize,
}

#[derive(Clone, Debug)]
pub struct Trajectory<T> {
    /// Snapshot times, strictly increasing.
    pub times: Vec<f64>,
    pub states: Vec<FluidState<T>>,
    pub series: Vec<SeriesRow>,
    pub t_detect: Option<f64>,
    pub threshold: f64,
    pub initial_max_grad: f64,
    pub steps: usize,
    pub config: SolverConfig,
}

impl<T> Trajectory<T> {
    pub fn final_time(&self) -> f64 {
        self.series.last().map_or(0.0, |r| r.t)
    }

    pub fn max_entropy_production(&self) -> f64 {
        self.series.iter().skip(1).map(|r| r.entropy_production_max).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn floor_triggered(&self) -> bool {
        self.series.iter().any(|r| r.floor_hits > 0)
    }
}

/// One row per recorded step: t, max_grad_u, mass, momentum components, F, M,
/// then kinetic, total entropy and the entropy production columns.
pub fn write_series_csv<T, W: Write>(traj: &Trajectory<T>, mut w: W) -> Result<()> {
    let d = traj.series.first().map_or(0, |r| r.momentum.len());
    let mut header = vec!["t".to_string(), "max_grad_u".into(), "mass".into()];
    header.extend((0..d).map(|a| format!("momentum_{a}")));
    header.extend(
        ["F", "M", "kinetic", "total_entropy", "entropy_production_max", "entropy_production_total", "floor_hits"]
            .iter()
            .map(|s| s.to_string()),
    );
    writeln!(w, "{}", header.join(","))?;
    for r in &traj.series {
        let mut cols = vec![fmt(r.t), fmt(r.max_grad_u), fmt(r.mass)];
        cols.extend(r.momentum.iter().map(|&v| fmt(v)));
        cols.extend(
            [r.f, r.m, r.kinetic, r.total_entropy, r.entropy_production_max, r.entropy_production_total].map(fmt),
        );
        cols.push(r.floor_hits.to_string());
        writeln!(w, "{}", cols.join(","))?;
    }
    Ok(())
}

fn fmt(v: f64) -> String {
    format!("{v:.17e}")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlowupDetection {
    /// First threshold crossing, if any.
    pub t_detect: Option<f64>,
    /// Zero of the least-squares line through 1/ν(t) over the fit window.
    pub fit_t: f64,
    pub window: (f64, f64),
    pub samples: usize,
}

/// Fraction of the run maximum at which an undetected run counts as saturated.
pub const SATURATION: f64 = 0.95;

/// Pole fit on a sampled gradient history ν(t).
///
/// The window is the monotone growth segment ending at `end` (the threshold
/// crossing, or the first sample above [`SATURATION`] × the maximum),
/// restricted to ν ≥ ν(end)/10. Returns
/// `None` unless ν(end) ≥ 2ν(0) and at least three samples remain.
pub fn fit_pole(times: &[f64], nu: &[f64], end: Option<usize>) -> Option<BlowupDetection> {
    if times.len() != nu.len() || nu.len() < 3 {
        return None;
    }
    let end = end.unwrap_or_else(|| {
        // grid-limited runs saturate with small oscillations; stop at the
        // first sample within 5% of the maximum instead of the noisy peak
        let max = nu.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        nu.iter().position(|&v| v >= SATURATION * max).unwrap_or(0)
    });
    let nu_end = nu[end];
    if !(nu_end >= 2.0 * nu[0]) || !(nu_end > 0.0) {
        return None;
    }
    let floor = nu_end / 10.0;
    let mut start = end;
    while start > 0 && nu[start - 1] <= nu[start] && nu[start - 1] >= floor {
        start -= 1;
    }
    let n = end + 1 - start;
    if n < 3 {
        return None;
    }
    let (ts, ys): (Vec<f64>, Vec<f64>) = (start..=end).map(|i| (times[i], 1.0 / nu[i])).unzip();
    let tm = ts.iter().sum::<f64>() / n as f64;
    let ym = ys.iter().sum::<f64>() / n as f64;
    let sxy: f64 = ts.iter().zip(&ys).map(|(t, y)| (t - tm) * (y - ym)).sum();
    let sxx: f64 = ts.iter().map(|t| (t - tm) * (t - tm)).sum();
    if sxx == 0.0 {
        return None;
    }
    let slope = sxy / sxx;
    if !(slope < 0.0) {
        return None;
    }
    let intercept = ym - slope * tm;
    Some(BlowupDetection { t_detect: None, fit_t: -intercept / slope, window: (ts[0], ts[n - 1]), samples: n })
}

/// T_detect and the Riccati pole fit from the max|∇u| series.
pub fn detect_blowup<T>(traj: &Trajectory<T>) -> Option<BlowupDetection> {
    let times: Vec<f64> = traj.series.iter().map(|r| r.t).collect();
    let nu: Vec<f64> = traj.series.iter().map(|r| r.max_grad_u).collect();
    let end = traj.t_detect.map(|_| nu.len() - 1);
    fit_pole(&times, &nu, end).map(|mut d| {
        d.t_detect = traj.t_detect;
        d
    })
}

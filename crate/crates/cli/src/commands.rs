//! The five subcommands. Each writes `report.json` into the output directory
//! before returning, including on refusal or a failed verdict.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use blowup_lab::burgers::{burgers_blowup_time, burgers_field, CubicSampler, VelocitySampler};
use blowup_lab::criteria::{
    criteria_report, density_power, hm_smallness, nd_condition, prop23_epsilon, sideris_condition, sideris_functionals,
    support_condition, weighted_energy, CriteriaReport, ReportParams,
};
use blowup_lab::euler::{detect_blowup, run, write_series_csv, BlowupDetection, Trajectory};
use blowup_lab::fields::{gradient, write_snapshot, write_state, DiffMethod, FluidState, SnapshotFormat};
use blowup_lab::Real;
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{Command, ExperimentConfig, Theorem};
use crate::data::{build, DataInfo};
use crate::error::CliError;

/// What `main` prints after a successful command.
pub struct Outcome {
    pub summary: String,
}

pub fn execute<T: Real>(command: Command, cfg: &ExperimentConfig, out: &Path) -> Result<Outcome, CliError> {
    std::fs::create_dir_all(out)?;
    let (state, info) = build::<T>(cfg)?;
    match command {
        Command::GenData => gen_data(cfg, out, &state, &info),
        Command::Check => check(cfg, out, &state, &info),
        Command::Burgers => burgers(cfg, out, &state, &info),
        Command::Simulate => simulate(cfg, out, &state, &info),
        Command::VerifyTheorem => verify(cfg, out, &state, &info),
    }
}

fn write_json(path: &Path, v: &impl Serialize) -> Result<(), CliError> {
    let mut w = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut w, v)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn report(cfg: &ExperimentConfig, command: Command, info: &DataInfo, body: Value) -> Value {
    let mut v = json!({
        "command": command.name(),
        "version": env!("CARGO_PKG_VERSION"),
        "config": cfg,
        "data": info,
    });
    if let (Value::Object(m), Value::Object(b)) = (&mut v, body) {
        m.extend(b);
    }
    v
}

fn snapshot_name(i: usize, format: SnapshotFormat) -> String {
    format!("snapshot_{i:04}.{}", format.extension())
}

fn save_state<T: Real>(out: &Path, name: &str, state: &FluidState<T>, format: SnapshotFormat) -> Result<(), CliError> {
    let w = BufWriter::new(File::create(out.join(name))?);
    write_state(w, state, format)?;
    Ok(())
}

fn params(cfg: &ExperimentConfig) -> ReportParams {
    let c = &cfg.criteria;
    ReportParams {
        rho_bar: cfg.rho_bar,
        radius: c.radius,
        gamma: cfg.gamma,
        m: c.m,
        alpha: c.alpha,
        density_epsilon: c.density_epsilon,
        method: c.method,
    }
}

fn gen_data<T: Real>(
    cfg: &ExperimentConfig,
    out: &Path,
    state: &FluidState<T>,
    info: &DataInfo,
) -> Result<Outcome, CliError> {
    let name = snapshot_name(0, cfg.snapshot_format);
    save_state(out, &name, state, cfg.snapshot_format)?;
    write_json(&out.join("report.json"), &report(cfg, Command::GenData, info, json!({ "snapshot": name })))?;
    Ok(Outcome { summary: format!("wrote {} ({} cells, mass {:.6e})", name, state.grid().len(), info.mass) })
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn table(r: &CriteriaReport) -> String {
    let mut rows: Vec<(String, String, &str)> = Vec::new();
    match &r.sideris {
        Some(s) => {
            rows.push(("integral condition".into(), format!("lhs {:.4e} / rhs {:.4e}", s.lhs, s.rhs), yes(s.holds)))
        }
        None => rows.push(("integral condition".into(), "n/a (rho_bar = 0)".into(), "-")),
    }
    rows.push(("support".into(), format!("R = {}", r.params.radius), yes(r.support_ok)));
    rows.push(("negative definiteness".into(), format!("lambda_max {:.6e}", r.nd.lambda_max), yes(r.nd.found)));
    let h = &r.hm_smallness;
    rows.push((format!("H^{} smallness", h.m), format!("{:.4e} / {:.4e}", h.value, h.threshold), yes(h.holds)));
    let g = &r.grassin;
    rows.push(("G-1 regularity".into(), format!("sup |grad u0| {:.4e}", g.gradient_sup), yes(g.g1)));
    rows.push(("G-2 expansive".into(), format!("min form {:.4e}", g.min_quadratic_form), yes(g.g2)));
    rows.push(("G-3 support".into(), format!("min on supp {:.4e} (alpha {})", g.min_on_support, g.alpha), yes(g.g3)));
    rows.push((
        "density small".into(),
        format!("{:.4e} / {:.4e}", r.density_hm, r.params.density_epsilon),
        yes(r.density_small),
    ));
    let mut s = String::new();
    for (name, value, ok) in rows {
        s.push_str(&format!("{name:<24}{value:<44}{ok}\n"));
    }
    let verdict = serde_json::to_value(r.verdict).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    s.push_str(&format!("verdict: {verdict}"));
    s
}

fn check<T: Real>(
    cfg: &ExperimentConfig,
    out: &Path,
    state: &FluidState<T>,
    info: &DataInfo,
) -> Result<Outcome, CliError> {
    let r = criteria_report(&state.rho, &state.u, &params(cfg))?;
    write_json(&out.join("report.json"), &report(cfg, Command::Check, info, json!({ "criteria": r })))?;
    Ok(Outcome { summary: table(&r) })
}

fn burgers<T: Real>(
    cfg: &ExperimentConfig,
    out: &Path,
    state: &FluidState<T>,
    info: &DataInfo,
) -> Result<Outcome, CliError> {
    let g = state.grid();
    let method = cfg.burgers.method.unwrap_or_else(|| DiffMethod::auto(g));
    let verdict = burgers_blowup_time(&state.u, method)?;
    let sampler = CubicSampler::new(&state.u);
    let mut written = Vec::new();
    let mut skipped = Vec::new();
    for (i, &t) in cfg.burgers.times.iter().enumerate() {
        if !(t >= 0.0 && t < verdict.t_star) {
            skipped.push(t);
            continue;
        }
        let v = burgers_field(&sampler, T::lit(t), g)?;
        let name = snapshot_name(i, cfg.snapshot_format);
        let comps: Vec<&[T]> = v.comps.iter().map(|c| c.as_slice()).collect();
        write_snapshot(BufWriter::new(File::create(out.join(&name))?), g, &comps, cfg.snapshot_format)?;
        written.push(json!({ "t": t, "file": name }));
    }
    let body = json!({ "method": method, "burgers": verdict, "snapshots": written, "skipped_times": skipped });
    write_json(&out.join("report.json"), &report(cfg, Command::Burgers, info, body))?;
    let t = if verdict.blows_up { format!("{:.12e}", verdict.t_star) } else { "none".into() };
    Ok(Outcome { summary: format!("burgers t* = {t}") })
}

/// Runs the solver and writes `series.csv` and the stored snapshots.
fn simulate_to_disk<T: Real>(
    cfg: &ExperimentConfig,
    out: &Path,
    state: &FluidState<T>,
) -> Result<(Trajectory<T>, Value), CliError> {
    let traj = run(state, &cfg.solver).map_err(|e| CliError::Aborted(e.to_string()))?;
    let mut w = BufWriter::new(File::create(out.join("series.csv"))?);
    write_series_csv(&traj, &mut w)?;
    w.flush()?;
    let mut snaps = Vec::new();
    for (i, (s, &t)) in traj.states.iter().zip(&traj.times).enumerate() {
        let name = snapshot_name(i, cfg.snapshot_format);
        save_state(out, &name, s, cfg.snapshot_format)?;
        snaps.push(json!({ "t": t, "file": name }));
    }
    let detection = detect_blowup(&traj);
    let summary = json!({
        "steps": traj.steps,
        "final_time": traj.final_time(),
        "t_detect": traj.t_detect,
        // T_detect lags T* by the time max|∇u| needs to climb from grid
        // resolution to the threshold; fit_t removes most of that bias
        "threshold": traj.threshold,
        "threshold_mode": cfg.solver.threshold_mode,
        "initial_max_grad": traj.initial_max_grad,
        "detection": detection,
        "max_entropy_production": finite_or_null(traj.max_entropy_production()),
        "floor_triggered": traj.floor_triggered(),
        "snapshots": snaps,
    });
    Ok((traj, summary))
}

fn finite_or_null(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        Value::Null
    }
}

fn simulate<T: Real>(
    cfg: &ExperimentConfig,
    out: &Path,
    state: &FluidState<T>,
    info: &DataInfo,
) -> Result<Outcome, CliError> {
    let (traj, run_summary) = simulate_to_disk(cfg, out, state)?;
    write_json(&out.join("report.json"), &report(cfg, Command::Simulate, info, json!({ "run": run_summary })))?;
    let detected = match traj.t_detect {
        Some(t) => format!("blow-up detected at t = {t:.6}"),
        None => "no blow-up detected".into(),
    };
    Ok(Outcome { summary: format!("{} steps to t = {:.6}; {detected}", traj.steps, traj.final_time()) })
}

/// The run's lifespan estimate: the pole fit when available, else T_detect.
fn observed_lifespan(det: &Option<BlowupDetection>, t_detect: Option<f64>) -> Option<f64> {
    det.as_ref().map(|d| d.fit_t).or(t_detect)
}

fn theorem_name(t: Theorem) -> String {
    serde_json::to_value(t).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default()
}

fn verify<T: Real>(
    cfg: &ExperimentConfig,
    out: &Path,
    state: &FluidState<T>,
    info: &DataInfo,
) -> Result<Outcome, CliError> {
    let theorem = cfg.theorem.name.ok_or_else(|| CliError::Config("no theorem selected".into()))?;
    let name = theorem_name(theorem);
    let write = |body: Value| -> Result<(), CliError> {
        let mut b = json!({ "theorem": name });
        if let (Value::Object(m), Value::Object(extra)) = (&mut b, body) {
            m.extend(extra);
        }
        write_json(&out.join("report.json"), &report(cfg, Command::VerifyTheorem, info, b))
    };
    let refuse = |reason: String, hypotheses: Value| -> Result<Outcome, CliError> {
        write(json!({ "status": "refused", "reason": reason, "hypotheses": hypotheses }))?;
        Err(CliError::Refused(reason))
    };
    let checked = match theorem {
        Theorem::Integral => integral_hypotheses(cfg, state),
        Theorem::Lifespan => lifespan_hypotheses(cfg, state),
        Theorem::Smallness => smallness_hypotheses(cfg, state),
        Theorem::Global => global_hypotheses(cfg, state),
    }?;
    let hyp = match checked {
        Hypotheses::Refused { reason, detail } => return refuse(reason, detail),
        Hypotheses::Hold(h) => h,
    };
    let (traj, run_summary) = simulate_to_disk(cfg, out, state)?;
    let detection = detect_blowup(&traj);
    let observed = observed_lifespan(&detection, traj.t_detect);
    let th = &cfg.theorem;
    let (pass, reason, result) = match (theorem, &hyp) {
        (Theorem::Integral, _) => {
            let f = sideris_functionals(&traj, cfg.rho_bar, th.rate_tol, th.drift_tol);
            let pass = f.f_rate_ok && f.m_const_ok && !f.touches_boundary;
            let reason = if f.touches_boundary {
                "the solution reached the box boundary, so F(t) is truncated".to_string()
            } else {
                format!("F-rate margin {:.3e}, M drift {:.3e}", f.min_rate_margin, f.m_drift)
            };
            (pass, reason, json!({ "functionals": f }))
        }
        (Theorem::Lifespan | Theorem::Smallness, Checked::Lifespan { lambda_max, bound, extra }) => {
            let limit = bound * th.bound_factor;
            let pass = observed.is_some_and(|t| t <= limit);
            let reason = match observed {
                Some(t) => format!("observed lifespan {t:.6} against bound {bound:.6} × {}", th.bound_factor),
                None => format!("no blow-up observed up to t = {:.6}", traj.final_time()),
            };
            let mut r = json!({
                "lambda_max": lambda_max,
                "bound": bound,
                "bound_factor": th.bound_factor,
                "observed_lifespan": observed,
                "margin": observed.map(|t| limit - t),
            });
            if theorem == Theorem::Lifespan {
                r["a_posteriori"] = lifespan_smallness(&traj, *lambda_max, extra, cfg.gamma)?;
            }
            (pass, reason, r)
        }
        (Theorem::Global, _) => {
            let m = hyp.m();
            let sampler = CubicSampler::new(&state.u);
            let method = cfg.criteria.method.unwrap_or(DiffMethod::Central);
            match weighted_energy(&traj, &sampler, m, th.s, method) {
                Ok(w) => {
                    let pass = w.slope <= th.slope_tol;
                    let reason = format!("slope of log Γ(1+t)^a {:.4} against tolerance {}", w.slope, th.slope_tol);
                    (pass, reason, json!({ "weighted_energy": w, "slope_tol": th.slope_tol }))
                }
                Err(e) => (false, e.to_string(), json!({ "weighted_energy": Value::Null })),
            }
        }
        _ => unreachable!("hypothesis record does not match the theorem"),
    };
    let status = if pass { "pass" } else { "fail" };
    write(json!({
        "status": status,
        "reason": reason,
        "hypotheses": hyp.detail(),
        "result": result,
        "run": run_summary,
    }))?;
    if pass {
        Ok(Outcome { summary: format!("{name}: pass ({reason})") })
    } else {
        Err(CliError::Failed(format!("{name}: {reason}")))
    }
}

enum Hypotheses {
    Hold(Checked),
    Refused { reason: String, detail: Value },
}

enum Checked {
    Integral(Value),
    Lifespan { lambda_max: f64, bound: f64, extra: LifespanData },
    Global { detail: Value, m: usize },
}

impl Checked {
    fn detail(&self) -> Value {
        match self {
            Checked::Integral(v) | Checked::Global { detail: v, .. } => v.clone(),
            Checked::Lifespan { extra, .. } => extra.detail.clone(),
        }
    }

    fn m(&self) -> usize {
        match self {
            Checked::Global { m, .. } => *m,
            _ => 0,
        }
    }
}

/// Pieces of the lifespan condition known from the datum alone.
struct LifespanData {
    lambda0: f64,
    r: f64,
    detail: Value,
}

fn integral_hypotheses<T: Real>(cfg: &ExperimentConfig, state: &FluidState<T>) -> Result<Hypotheses, CliError> {
    if !(cfg.rho_bar > 0.0) {
        let reason = "the integral condition needs a positive background density rho_bar".to_string();
        return Ok(Hypotheses::Refused { reason, detail: Value::Null });
    }
    let (rho_bar, radius, gamma) = (T::lit(cfg.rho_bar), T::lit(cfg.criteria.radius), T::lit(cfg.gamma));
    let s = match sideris_condition(&state.rho, &state.u, rho_bar, radius, gamma) {
        Ok(s) => s,
        Err(e) => return Ok(Hypotheses::Refused { reason: e.to_string(), detail: Value::Null }),
    };
    let support = support_condition(&state.rho, &state.u, rho_bar, radius);
    let detail = json!({ "sideris": s, "support_ok": support });
    if !s.holds {
        let reason =
            format!("integral condition fails: lhs {:.6e} < rhs {:.6e} (ratio {:.4})", s.lhs, s.rhs, s.ratio());
        return Ok(Hypotheses::Refused { reason, detail });
    }
    if !support {
        let reason = "the data is not the background outside B_R or has negative mass excess".to_string();
        return Ok(Hypotheses::Refused { reason, detail });
    }
    Ok(Hypotheses::Hold(Checked::Integral(detail)))
}

fn lifespan_hypotheses<T: Real>(cfg: &ExperimentConfig, state: &FluidState<T>) -> Result<Hypotheses, CliError> {
    let method = cfg.criteria.method.unwrap_or_else(|| DiffMethod::auto(state.grid()));
    let nd = nd_condition(&state.u, method)?;
    if !nd.found {
        let reason = "no cell has a symmetric velocity gradient with a negative eigenvalue".to_string();
        return Ok(Hypotheses::Refused { reason, detail: json!({ "nd": nd }) });
    }
    // slope of u₀ along ξ₀ over the step r
    let r = cfg.theorem.r;
    let sampler = CubicSampler::new(&state.u);
    let x0: Vec<T> = nd.x0.iter().map(|&v| T::lit(v)).collect();
    let x1: Vec<T> = nd.x0.iter().zip(&nd.xi0).map(|(&x, &e)| T::lit(x + r * e)).collect();
    let (u0, u1) = (sampler.value(&x0), sampler.value(&x1));
    let diff: Vec<f64> = u1.iter().zip(&u0).map(|(a, b)| (*a - *b).as_f64()).collect();
    let along: f64 = diff.iter().zip(&nd.xi0).map(|(d, e)| d * e).sum();
    let lambda0 = -along / r;
    let ortho = diff.iter().zip(&nd.xi0).map(|(d, e)| (d - along * e).powi(2)).sum::<f64>().sqrt();
    let detail = json!({ "nd": nd, "lambda0": lambda0, "r": r, "orthogonal_part": ortho });
    if !(lambda0 > 0.0) {
        let reason = format!("u0(x0 + r xi0) - u0(x0) is not compressive along xi0 (lambda0 = {lambda0:.4e})");
        return Ok(Hypotheses::Refused { reason, detail });
    }
    if ortho > cfg.theorem.direction_tol * along.abs() {
        let reason = format!("u0(x0 + r xi0) - u0(x0) is not parallel to xi0 (orthogonal part {ortho:.3e})");
        return Ok(Hypotheses::Refused { reason, detail });
    }
    let lambda_max = nd.lambda_max;
    Ok(Hypotheses::Hold(Checked::Lifespan {
        lambda_max,
        bound: 1.0 / lambda_max,
        extra: LifespanData { lambda0, r, detail },
    }))
}

/// The smallness condition of the lifespan bound involves the solution on
/// [0, 1/λmax]; it is evaluated on the run and reported, not enforced.
fn lifespan_smallness<T: Real>(
    traj: &Trajectory<T>,
    lambda_max: f64,
    data: &LifespanData,
    gamma: f64,
) -> Result<Value, CliError> {
    let horizon = 1.0 / lambda_max;
    let big_m = traj.series.iter().filter(|r| r.t <= horizon).map(|r| r.max_grad_u).fold(0.0, f64::max);
    let coef = (gamma - 1.0) / (4.0 * gamma);
    let mut sup = 0.0f64;
    for (s, &t) in traj.states.iter().zip(&traj.times) {
        if t > horizon {
            break;
        }
        let f = density_power(&s.rho, s.gamma);
        let df = gradient(&f, DiffMethod::Central)?;
        for (k, v) in f.values.iter().enumerate() {
            let g = df.at(k);
            let norm = (g[0] * g[0] + g[1] * g[1] + g[2] * g[2]).sqrt();
            sup = sup.max(coef * (*v * norm).as_f64());
        }
    }
    let lhs = (lambda_max - data.lambda0).abs() + sup;
    let eps0 = if big_m > 0.0 { prop23_epsilon(data.lambda0, lambda_max, data.r, big_m).ok() } else { None };
    Ok(json!({
        "sup_grad_u": big_m,
        "sup_pi_grad_pi": sup,
        "lhs": lhs,
        "epsilon0": eps0,
        "holds": eps0.is_some_and(|e| lhs <= e),
    }))
}

fn smallness_hypotheses<T: Real>(cfg: &ExperimentConfig, state: &FluidState<T>) -> Result<Hypotheses, CliError> {
    let g = state.grid();
    let method = cfg.criteria.method.unwrap_or_else(|| DiffMethod::auto(g));
    let nd = nd_condition(&state.u, method)?;
    if !nd.found {
        let reason = "no cell has a symmetric velocity gradient with a negative eigenvalue".to_string();
        return Ok(Hypotheses::Refused { reason, detail: json!({ "nd": nd }) });
    }
    let m = cfg.criteria.m.unwrap_or_else(|| blowup_lab::criteria::min_sobolev_index(g.dim()));
    let hm = hm_smallness(&state.rho, &state.u, m, state.gamma, T::lit(nd.lambda_max), method)?;
    let detail = json!({ "nd": nd, "hm_smallness": hm });
    if !hm.holds {
        let reason = format!("H^{m} smallness fails: {:.6e} ≥ threshold {:.6e}", hm.value, hm.threshold);
        return Ok(Hypotheses::Refused { reason, detail });
    }
    let lambda_max = nd.lambda_max;
    Ok(Hypotheses::Hold(Checked::Lifespan {
        lambda_max,
        bound: 2.0 / lambda_max,
        extra: LifespanData { lambda0: lambda_max, r: 0.0, detail },
    }))
}

fn global_hypotheses<T: Real>(cfg: &ExperimentConfig, state: &FluidState<T>) -> Result<Hypotheses, CliError> {
    let p = params(cfg);
    let r = criteria_report(&state.rho, &state.u, &p)?;
    let g = &r.grassin;
    let m = r.hm_smallness.m;
    let detail = json!({ "grassin": g, "density_hm": r.density_hm, "density_epsilon": p.density_epsilon });
    let failed: Vec<&str> = [
        (!g.g1).then_some("G-1 (regularity)"),
        (!g.g2).then_some("G-2 (expansive gradient)"),
        (!g.g3).then_some("G-3 (density support)"),
        (!r.density_small).then_some("density smallness"),
    ]
    .into_iter()
    .flatten()
    .collect();
    if !failed.is_empty() {
        return Ok(Hypotheses::Refused { reason: format!("fails {}", failed.join(", ")), detail });
    }
    Ok(Hypotheses::Hold(Checked::Global { detail, m }))
}

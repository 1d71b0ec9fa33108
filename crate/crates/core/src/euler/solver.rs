//! Time stepping, the driver loop and per-step diagnostics.

use rayon::prelude::*;

use super::config::{SolverConfig, ThresholdMode};
use super::scheme::{axis_speeds, rhs, sound_speed, Cons};
use super::trajectory::{SeriesRow, Trajectory};
use crate::error::{Error, Result};
use crate::fields::{jacobian, DiffMethod, FluidState, Grid, ScalarField, VectorField};
use crate::scalar::Real;

/// max over cells of |u| + √γ ρ^{(γ−1)/2}.
pub fn max_wave_speed<T: Real>(state: &FluidState<T>) -> T {
    let g = state.grid();
    let gamma = state.gamma;
    (0..g.len())
        .into_par_iter()
        .map(|k| {
            let u = state.u.at(k);
            let speed = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
            speed + sound_speed(state.rho.values[k], gamma)
        })
        .reduce(T::zero, |a, b| a.max(b))
}

fn to_cons<T: Real>(state: &FluidState<T>) -> Cons<T> {
    let m = state.momentum();
    Cons { rho: state.rho.values.clone(), m: m.comps }
}

fn to_state<T: Real>(g: &Grid<T>, cons: &Cons<T>, gamma: T) -> FluidState<T> {
    let d = g.dim();
    let mut comps = vec![vec![T::zero(); g.len()]; d];
    for (a, c) in comps.iter_mut().enumerate() {
        c.par_iter_mut().enumerate().for_each(|(k, v)| {
            let r = cons.rho[k];
            *v = if r > T::zero() { cons.m[a][k] / r } else { T::zero() };
        });
    }
    FluidState {
        rho: ScalarField { grid: g.clone(), values: cons.rho.clone() },
        u: VectorField { grid: g.clone(), comps },
        gamma,
    }
}

/// dt = cfl / Σ_a (s_a / h_a); equals cfl·h / s in one dimension and keeps
/// the unsplit update a convex combination of one-dimensional ones.
fn stable_dt_cons<T: Real>(g: &Grid<T>, cons: &Cons<T>, gamma: T, cfl: T) -> T {
    let speeds = axis_speeds(g, cons, gamma);
    let rate: T = speeds.iter().zip(g.spacing()).map(|(&s, &h)| s / h).sum();
    if rate > T::zero() {
        cfl / rate
    } else {
        T::infinity()
    }
}

/// Largest time step accepted by [`step`].
pub fn stable_dt<T: Real>(state: &FluidState<T>, config: &SolverConfig) -> T {
    stable_dt_cons(state.grid(), &to_cons(state), state.gamma, T::lit(config.cfl))
}

/// Clamps 0 ≤ ρ < floor to (floor, 0); a density below −floor is an error.
fn apply_floor<T: Real>(cons: &mut Cons<T>, floor: T) -> Result<usize> {
    let mut hits = 0;
    for k in 0..cons.rho.len() {
        let r = cons.rho[k];
        if !r.is_finite() {
            return Err(Error::NonFinite(k));
        }
        if r < floor {
            if r < -floor {
                return Err(Error::NegativeDensity { cell: k, value: r.as_f64() });
            }
            cons.rho[k] = floor;
            for c in cons.m.iter_mut() {
                c[k] = T::zero();
            }
            hits += 1;
        }
    }
    Ok(hits)
}

fn cell_energy<T: Real>(cons: &Cons<T>, gamma: T) -> Vec<T> {
    (0..cons.rho.len()).into_par_iter().map(|k| cons.prim(k, gamma).e).collect()
}

pub(crate) struct Advanced<T> {
    pub cons: Cons<T>,
    pub production: Vec<T>,
    pub floor_hits: usize,
}

/// One SSP-RK2 step. The entropy production is
/// (E^{n+1} − E^n)/dt + ½(div G(U^n) + div G(U^{(1)})).
pub(crate) fn advance<T: Real>(
    g: &Grid<T>,
    u0: &Cons<T>,
    dt: T,
    gamma: T,
    config: &SolverConfig,
) -> Result<Advanced<T>> {
    let rec = config.reconstruction;
    let floor = T::lit(config.vacuum_floor);
    let d = g.dim();
    let half = T::lit(0.5);
    let combine = |base: &Cons<T>, l: &super::scheme::Rhs<T>| Cons {
        rho: base.rho.par_iter().zip(&l.drho).map(|(&a, &b)| a + dt * b).collect(),
        m: (0..d).map(|a| base.m[a].par_iter().zip(&l.dm[a]).map(|(&x, &y)| x + dt * y).collect()).collect(),
    };
    let l0 = rhs(g, u0, gamma, rec);
    let mut u1 = combine(u0, &l0);
    let mut hits = apply_floor(&mut u1, floor)?;
    let l1 = rhs(g, &u1, gamma, rec);
    let u2 = combine(&u1, &l1);
    let mut next = Cons {
        rho: u0.rho.par_iter().zip(&u2.rho).map(|(&a, &b)| half * (a + b)).collect(),
        m: (0..d).map(|a| u0.m[a].par_iter().zip(&u2.m[a]).map(|(&x, &y)| half * (x + y)).collect()).collect(),
    };
    hits += apply_floor(&mut next, floor)?;
    let e0 = cell_energy(u0, gamma);
    let e1 = cell_energy(&next, gamma);
    let inv = T::one() / dt;
    let production =
        (0..e0.len()).into_par_iter().map(|k| (e1[k] - e0[k]) * inv + half * (l0.div_g[k] + l1.div_g[k])).collect();
    Ok(Advanced { cons: next, production, floor_hits: hits })
}

fn check_dt<T: Real>(state: &FluidState<T>, dt: T, config: &SolverConfig) -> Result<()> {
    config.validate()?;
    state.validate()?;
    let max = stable_dt(state, config);
    if !(dt > T::zero()) || dt > max * (T::one() + T::lit(1e-12)) {
        return Err(Error::Cfl { dt: dt.as_f64(), max: max.as_f64() });
    }
    Ok(())
}

/// One accepted step from `state`; rejects dt above [`stable_dt`].
pub fn step<T: Real>(state: &FluidState<T>, dt: T, config: &SolverConfig) -> Result<FluidState<T>> {
    check_dt(state, dt, config)?;
    let g = state.grid();
    let adv = advance(g, &to_cons(state), dt, state.gamma, config)?;
    Ok(to_state(g, &adv.cons, state.gamma))
}

/// Cellwise residual of ∂_t[½ρ|u|² + P] + div[(½ρ|u|² + P + p)u] with the
/// scheme's numerical entropy flux; positive values violate admissibility.
/// `after` must be the result of [`step`] from `before` with this `dt`.
pub fn entropy_production<T: Real>(
    before: &FluidState<T>,
    after: &FluidState<T>,
    dt: T,
    config: &SolverConfig,
) -> Result<ScalarField<T>> {
    if !before.grid().same_shape(after.grid()) {
        return Err(Error::Shape("states live on different grids".into()));
    }
    check_dt(before, dt, config)?;
    let g = before.grid();
    let d = g.dim();
    let gamma = before.gamma;
    let c0 = to_cons(before);
    let l0 = rhs(g, &c0, gamma, config.reconstruction);
    let mut u1 = Cons {
        rho: c0.rho.iter().zip(&l0.drho).map(|(&a, &b)| a + dt * b).collect(),
        m: (0..d).map(|a| c0.m[a].iter().zip(&l0.dm[a]).map(|(&x, &y)| x + dt * y).collect()).collect(),
    };
    apply_floor(&mut u1, T::lit(config.vacuum_floor))?;
    let l1 = rhs(g, &u1, gamma, config.reconstruction);
    let e0 = cell_energy(&c0, gamma);
    let e1 = cell_energy(&to_cons(after), gamma);
    let half = T::lit(0.5);
    let values = (0..g.len()).map(|k| (e1[k] - e0[k]) / dt + half * (l0.div_g[k] + l1.div_g[k])).collect();
    ScalarField::new(g.clone(), values)
}

/// max over cells of the largest |∂_j u_i| (central differences).
pub fn max_velocity_gradient<T: Real>(u: &VectorField<T>) -> Result<T> {
    Ok(jacobian(u, DiffMethod::Central)?.max_abs())
}

fn series_row<T: Real>(
    g: &Grid<T>,
    cons: &Cons<T>,
    state: &FluidState<T>,
    t: f64,
    dt: f64,
    rho_bar: f64,
    adv: Option<&Advanced<T>>,
) -> Result<SeriesRow> {
    let d = g.dim();
    let vol = g.cell_volume().as_f64();
    let n = g.len();
    let gamma = state.gamma;
    let sums = (0..n)
        .into_par_iter()
        .map(|k| {
            let w = cons.prim(k, gamma);
            let x = g.center(k);
            let rho = w.rho.as_f64();
            let mut mom = [0.0; 3];
            let mut f = 0.0;
            let mut u2 = 0.0;
            for a in 0..d {
                let m = cons.m[a][k].as_f64();
                mom[a] = m;
                f += x[a].as_f64() * m;
                u2 += w.u[a].as_f64() * w.u[a].as_f64();
            }
            [rho, mom[0], mom[1], mom[2], f, rho * u2, w.e.as_f64(), rho - rho_bar]
        })
        .collect::<Vec<_>>()
        // summed in cell order so the series does not depend on the thread count
        .iter()
        .fold([0.0; 8], |a, b| std::array::from_fn(|i| a[i] + b[i]));
    let (prod_max, prod_total, hits) = match adv {
        Some(a) => {
            let mx = a.production.iter().fold(f64::NEG_INFINITY, |m, v| m.max(v.as_f64()));
            let tot: f64 = a.production.iter().map(|v| v.as_f64()).sum::<f64>() * vol;
            (mx, tot, a.floor_hits)
        }
        None => (0.0, 0.0, 0),
    };
    Ok(SeriesRow {
        t,
        dt,
        max_grad_u: max_velocity_gradient(&state.u)?.as_f64(),
        mass: sums[0] * vol,
        momentum: sums[1..1 + d].iter().map(|v| v * vol).collect(),
        f: sums[4] * vol,
        m: sums[7] * vol,
        kinetic: sums[5] * vol,
        total_entropy: sums[6] * vol,
        entropy_production_max: prod_max,
        entropy_production_total: prod_total,
        floor_hits: hits,
    })
}

/// Advances to `t_end`, stopping early once max|∇u| crosses the blow-up
/// threshold. Diagnostics are recorded every step, states every
/// `snapshot_stride` steps plus the first and last.
pub fn run<T: Real>(state0: &FluidState<T>, config: &SolverConfig) -> Result<Trajectory<T>> {
    config.validate()?;
    state0.validate()?;
    let g = state0.grid().clone();
    let gamma = state0.gamma;
    let mut cons = to_cons(state0);
    let g0 = max_velocity_gradient(&state0.u)?.as_f64();
    let threshold = match config.threshold_mode {
        ThresholdMode::Absolute => config.gradient_blowup_threshold,
        ThresholdMode::Relative if g0 > 0.0 => config.gradient_blowup_threshold * g0,
        ThresholdMode::Relative => config.gradient_blowup_threshold,
    };
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![state0.clone()],
        series: vec![series_row(&g, &cons, state0, 0.0, 0.0, config.rho_bar, None)?],
        t_detect: None,
        threshold,
        initial_max_grad: g0,
        steps: 0,
        config: config.clone(),
    };
    let cfl = T::lit(config.cfl);
    let mut t = 0.0f64;
    let mut last_state = state0.clone();
    while t < config.t_end && traj.steps < config.max_steps {
        let mut dt = stable_dt_cons(&g, &cons, gamma, cfl).as_f64();
        let remaining = config.t_end - t;
        if dt >= remaining {
            dt = remaining;
        }
        if !(dt > 0.0) || !dt.is_finite() {
            if dt.is_infinite() {
                // nothing moves: jump straight to the end
                dt = remaining;
            } else {
                break;
            }
        }
        let adv =
            advance(&g, &cons, T::lit(dt), gamma, config).map_err(|e| Error::AtTime { t, source: Box::new(e) })?;
        let t_new = if dt == remaining { config.t_end } else { t + dt };
        if !(t_new > t) {
            break;
        }
        t = t_new;
        traj.steps += 1;
        cons = adv.cons.clone();
        let state = to_state(&g, &cons, gamma);
        let row = series_row(&g, &cons, &state, t, dt, config.rho_bar, Some(&adv))?;
        let crossed = row.max_grad_u > threshold;
        traj.series.push(row);
        let done = crossed || t >= config.t_end || traj.steps >= config.max_steps;
        if traj.steps % config.snapshot_stride == 0 || done {
            traj.times.push(t);
            traj.states.push(state.clone());
        }
        last_state = state;
        if crossed {
            traj.t_detect = Some(t);
            break;
        }
    }
    if *traj.times.last().unwrap() < t {
        traj.times.push(t);
        traj.states.push(last_state);
    }
    Ok(traj)
}

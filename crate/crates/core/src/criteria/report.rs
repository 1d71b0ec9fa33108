//! Aggregated verdict over every hypothesis set.

use serde::{Deserialize, Serialize};

use super::grassin::{grassin_from_gradient, GrassinCheck};
use super::nd::{nd_from_gradient, NdRecord, SYMMETRY_TOL};
use super::sideris::{sideris_quantities, support_condition, SiderisCheck};
use super::smallness::{density_power, hm_smallness, HmSmallness};
use crate::error::Result;
use crate::fields::{jacobian, sobolev_norm_with, DiffMethod, ScalarField, VectorField};
use crate::scalar::Real;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    BlowupSideris,
    BlowupThm25,
    GlobalProp27,
    Undetermined,
}

/// Inputs that the data alone does not fix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ReportParams {
    pub rho_bar: f64,
    /// Support radius R of the integral condition.
    pub radius: f64,
    pub gamma: f64,
    /// Sobolev index; `None` picks the least admissible one.
    pub m: Option<usize>,
    pub alpha: f64,
    /// Smallness required of ‖ρ₀^{(γ−1)/2}‖_{H^m} for the global result, whose
    /// ε₀ is not explicit.
    pub density_epsilon: f64,
    pub method: Option<DiffMethod>,
}

impl Default for ReportParams {
    fn default() -> Self {
        Self { rho_bar: 1.0, radius: 1.0, gamma: 2.0, m: None, alpha: 0.5, density_epsilon: 1e-2, method: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CriteriaReport {
    /// `None` when ρ̄ = 0, where the integral condition does not apply.
    pub sideris: Option<SiderisCheck>,
    pub support_ok: bool,
    pub nd: NdRecord,
    pub hm_smallness: HmSmallness,
    pub grassin: GrassinCheck,
    pub density_hm: f64,
    pub density_small: bool,
    pub verdict: Verdict,
    pub params: ReportParams,
    pub method: DiffMethod,
}

/// Evaluates every condition on (ρ₀, u₀). The verdict takes the first
/// hypothesis set that holds in the order integral condition, smallness
/// with (ND), expansive data.
pub fn criteria_report<T: Real>(
    rho0: &ScalarField<T>,
    u0: &VectorField<T>,
    params: &ReportParams,
) -> Result<CriteriaReport> {
    let g = &rho0.grid;
    let method = params.method.unwrap_or_else(|| DiffMethod::auto(g));
    let m = params.m.unwrap_or_else(|| super::smallness::min_sobolev_index(g.dim()));
    let gamma = T::lit(params.gamma);
    let rho_bar = T::lit(params.rho_bar);
    let sideris = if params.rho_bar > 0.0 {
        Some(sideris_quantities(rho0, u0, rho_bar, T::lit(params.radius), gamma)?)
    } else {
        None
    };
    let support_ok = support_condition(rho0, u0, rho_bar, T::lit(params.radius));
    let grad = jacobian(u0, method)?;
    let nd = nd_from_gradient(&grad, T::lit(SYMMETRY_TOL));
    let hm = hm_smallness(rho0, u0, m, gamma, T::lit(nd.lambda_max), method)?;
    let grassin = grassin_from_gradient(rho0, u0, &grad, m, T::lit(params.alpha), method)?;
    let density_hm = sobolev_norm_with(&density_power(rho0, gamma), m, method)?.as_f64();
    let density_small = density_hm < params.density_epsilon;
    let verdict = if sideris.is_some_and(|s| s.holds) && support_ok {
        Verdict::BlowupSideris
    } else if nd.found && hm.holds {
        Verdict::BlowupThm25
    } else if grassin.g1 && grassin.g2 && grassin.g3 && density_small {
        Verdict::GlobalProp27
    } else {
        Verdict::Undetermined
    };
    Ok(CriteriaReport {
        sideris,
        support_ok,
        nd,
        hm_smallness: hm,
        grassin,
        density_hm,
        density_small,
        verdict,
        params: ReportParams { m: Some(m), method: Some(method), ..params.clone() },
        method,
    })
}

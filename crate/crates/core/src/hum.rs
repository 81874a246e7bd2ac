//! Exact controls by the Hilbert Uniqueness Method.
//!
//! With the control `F(t) = i 1_E(t) 1_ω e^{itΔ} φ0`, Duhamel's formula for
//! `i∂_t u + Δu = 1_{E×ω} F` gives `u(T) = e^{iTΔ}(u0 + 𝒜 φ0)` where
//! `𝒜 = ∫_E e^{-itΔ} 1_ω e^{itΔ} dt` is the observability Gramian acting on
//! coefficients. Hitting `u1` therefore means solving `𝒜 φ0 = w` with
//! `w = e^{-iTΔ}u1 − u0`.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{conjugate_gradient, eigenvalues, HermitianMatrix};
use crate::observability::{obs_gramian_from, DEGENERACY_FLOOR};
use crate::sets::{spatial_gramian, SpatialSet, TimeSet};
use crate::spectral::{ModelDescriptor, SpectralModel, StateCoeffs};

/// Iteration budget for conjugate gradients, in multiples of the dimension.
const CG_BUDGET: usize = 20;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ControlPlan {
    pub model: ModelDescriptor,
    pub omega: SpatialSet,
    pub time_set: TimeSet,
    pub horizon: f64,
    pub u0: StateCoeffs,
    pub u1: StateCoeffs,
    /// HUM minimizer; the control is `F = i 1_E 1_ω e^{itΔ} φ0`.
    pub phi0: StateCoeffs,
    /// Pulled-back mismatch `w_j = e^{iTλ_j}(u1)_j − (u0)_j`.
    pub w: StateCoeffs,
    /// `⟨𝒜φ0, φ0⟩ = ‖F‖²_{L²}`.
    pub cost: f64,
    pub iterations: usize,
    /// `‖𝒜φ0 − w‖ / ‖w‖`.
    pub residual: f64,
    pub tol: f64,
    pub converged: bool,
    /// CG exceeded the exact-arithmetic bound of `dim` steps.
    pub exceeded_dimension_bound: bool,
    pub lambda_min: f64,
    pub lambda_max: f64,
    /// `λ_max / λ_min` of the Gramian.
    pub kappa: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum HumOutcome {
    Controlled(Box<ControlPlan>),
    /// `λ_min(𝒜) ≤ 1e-14 ‖𝒜‖`.
    NotControllable { lambda_min: f64, lambda_max: f64 },
}

impl HumOutcome {
    pub fn plan(&self) -> Option<&ControlPlan> {
        match self {
            HumOutcome::Controlled(p) => Some(p),
            HumOutcome::NotControllable { .. } => None,
        }
    }
}

/// `w = e^{-iTΔ}(u1 − e^{iTΔ}u0)`, which vanishes bit-exactly when `u1`
/// is the free evolution of `u0`.
pub fn pulled_back_mismatch(model: &SpectralModel, horizon: f64, u0: &StateCoeffs, u1: &StateCoeffs) -> Result<StateCoeffs> {
    model.check(u1)?;
    let free = model.propagate(u0, horizon)?;
    let gap = StateCoeffs::from_vector(&u1.coeffs - free.coeffs);
    model.propagate(&gap, -horizon)
}

pub fn hum_solve(
    model: &SpectralModel,
    omega: &SpatialSet,
    e: &TimeSet,
    horizon: f64,
    u0: &StateCoeffs,
    u1: &StateCoeffs,
    tol: f64,
) -> Result<HumOutcome> {
    if !(horizon > 0.0) {
        return Err(Error::config(format!("horizon T = {horizon} must be positive")));
    }
    if !e.is_within(0.0, horizon) {
        return Err(Error::config(format!(
            "time set [{}, {}] is not contained in [0, {horizon}]",
            e.start(),
            e.end()
        )));
    }
    if !(tol > 0.0) {
        return Err(Error::config(format!("tolerance {tol} must be positive")));
    }
    let g = spatial_gramian(model, omega)?;
    let a = obs_gramian_from(model, &g, e)?;
    let ev = eigenvalues(&a);
    let (lambda_min, lambda_max) = (ev[0], ev[ev.len() - 1]);
    if lambda_min <= DEGENERACY_FLOOR * lambda_max {
        return Ok(HumOutcome::NotControllable { lambda_min, lambda_max });
    }
    let w = pulled_back_mismatch(model, horizon, u0, u1)?;
    let dim = model.dim();
    let cg = conjugate_gradient(&a.operator(), &w.coeffs, tol, CG_BUDGET * dim);
    let phi0 = StateCoeffs::from_vector(cg.solution);
    let cost = a.form(&phi0.coeffs);
    Ok(HumOutcome::Controlled(Box::new(ControlPlan {
        model: model.descriptor().clone(),
        omega: omega.clone(),
        time_set: e.clone(),
        horizon,
        u0: u0.clone(),
        u1: u1.clone(),
        phi0,
        w,
        cost,
        iterations: cg.iterations,
        residual: cg.relative_residual,
        tol,
        converged: cg.converged,
        exceeded_dimension_bound: cg.iterations > dim,
        lambda_min,
        lambda_max,
        kappa: lambda_max / lambda_min,
    })))
}

/// Final-state errors of a plan, recomputed along two independent routes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ControlVerification {
    /// Closed form `e^{iTΔ}(u0 + 𝒜φ0)` against `u1`, relative to `‖u1‖`.
    pub closed_form_error: f64,
    /// Simpson quadrature of the Duhamel integral against `u1`, relative to `‖u1‖`.
    pub quadrature_error: f64,
    pub panels: usize,
}

fn relative_gap(x: &DVector<Complex64>, target: &DVector<Complex64>) -> f64 {
    let diff = (x - target).norm();
    let scale = target.norm();
    if scale > 0.0 {
        diff / scale
    } else {
        diff
    }
}

/// `e^{iTΔ}u0` plus composite Simpson quadrature of the Duhamel term
/// `∫_E e^{i(T−t)Δ} 1_ω e^{itΔ} φ0 dt`, `panels` panels per interval.
fn duhamel_quadrature(model: &SpectralModel, g: &HermitianMatrix, plan: &ControlPlan, panels: usize) -> Result<StateCoeffs> {
    if panels < 2 || !panels.is_multiple_of(2) {
        return Err(Error::config(format!("Simpson panel count {panels} must be even and >= 2")));
    }
    let forced = |t: f64| -> Result<DVector<Complex64>> {
        let here = model.propagate(&plan.phi0, t)?;
        let observed = StateCoeffs::from_vector(g.apply(&here.coeffs));
        Ok(model.propagate(&observed, plan.horizon - t)?.coeffs)
    };
    let mut acc = DVector::<Complex64>::zeros(model.dim());
    for &(a, b) in plan.time_set.intervals() {
        let h = (b - a) / panels as f64;
        for i in 0..=panels {
            let w = if i == 0 || i == panels {
                1.0
            } else if i % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += forced(a + i as f64 * h)? * Complex64::new(w * h / 3.0, 0.0);
        }
    }
    let free = model.propagate(&plan.u0, plan.horizon)?;
    Ok(StateCoeffs::from_vector(free.coeffs + acc))
}

pub fn verify_control(model: &SpectralModel, plan: &ControlPlan, panels: usize) -> Result<ControlVerification> {
    if model.descriptor() != &plan.model {
        return Err(Error::config("plan was computed on a different model"));
    }
    model.check(&plan.phi0)?;
    let g = spatial_gramian(model, &plan.omega)?;
    let a = obs_gramian_from(model, &g, &plan.time_set)?;
    let pre = StateCoeffs::from_vector(&plan.u0.coeffs + a.apply(&plan.phi0.coeffs));
    let closed = model.propagate(&pre, plan.horizon)?;
    let quad = duhamel_quadrature(model, &g, plan, panels)?;
    Ok(ControlVerification {
        closed_form_error: relative_gap(&closed.coeffs, &plan.u1.coeffs),
        quadrature_error: relative_gap(&quad.coeffs, &plan.u1.coeffs),
        panels,
    })
}

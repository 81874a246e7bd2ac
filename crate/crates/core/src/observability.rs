//! Observability Gramians and the constants derived from them.
//!
//! For `u = Σ c_j e_j` the observed energy `∫_E ‖e^{itΔ}u‖²_{L²(ω)} dt`
//! expands to the form of `A[j,k] = T̂_E(λ_j − λ_k) G_ω[j,k]`, so every
//! constant on the truncated space is an extreme eigenvalue of a dense
//! Hermitian matrix.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigen_decomposition, eigenvalues, HermitianMatrix};
use crate::sets::{spatial_gramian, SpatialSet, TimeSet};
use crate::spectral::{ModelDescriptor, SpectralFilter, SpectralModel, StateCoeffs};

/// Relative floor below which a Gramian counts as degenerate.
pub const DEGENERACY_FLOOR: f64 = 1e-14;

/// Observability Gramian `A[j,k] = T̂_E(λ_j − λ_k) G_ω[j,k]`.
pub fn obs_gramian(model: &SpectralModel, omega: &SpatialSet, e: &TimeSet) -> Result<HermitianMatrix> {
    let g = spatial_gramian(model, omega)?;
    obs_gramian_from(model, &g, e)
}

/// Same as [`obs_gramian`] with a precomputed spatial Gramian.
pub fn obs_gramian_from(model: &SpectralModel, spatial: &HermitianMatrix, e: &TimeSet) -> Result<HermitianMatrix> {
    if spatial.dim() != model.dim() {
        return Err(Error::Shape {
            expected: model.dim(),
            got: spatial.dim(),
        });
    }
    let lam = model.eigenvalues();
    let g = spatial.matrix();
    let n = model.dim();
    let m = nalgebra::DMatrix::from_fn(n, n, |j, k| e.moment(lam[j] - lam[k]) * g[(j, k)]);
    Ok(HermitianMatrix::symmetrized(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObservabilityStatus {
    Observable,
    /// `λ_min(A) ≤ 1e-14 ‖A‖`.
    NotObservableAtTruncation,
}

/// Smallest eigenvalue of the Gramian, the constant `C = 1/λ_min` and the
/// state that attains it.
#[derive(Debug, Clone, Serialize)]
pub struct ObservabilityReport {
    pub status: ObservabilityStatus,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub obs_constant: Option<f64>,
    pub worst_state: StateCoeffs,
    pub model: ModelDescriptor,
    pub omega: SpatialSet,
    pub time_set: TimeSet,
    pub omega_measure: f64,
    pub time_measure: f64,
    pub cutoff: usize,
    pub dimension: usize,
}

pub fn obs_constant(model: &SpectralModel, omega: &SpatialSet, e: &TimeSet) -> Result<ObservabilityReport> {
    let a = obs_gramian(model, omega, e)?;
    let pairs = eigen_decomposition(&a);
    let lo = &pairs[0];
    let lambda_max = pairs[pairs.len() - 1].value;
    let lambda_min = lo.value.max(0.0);
    let observable = lo.value > DEGENERACY_FLOOR * lambda_max;
    Ok(ObservabilityReport {
        status: if observable {
            ObservabilityStatus::Observable
        } else {
            ObservabilityStatus::NotObservableAtTruncation
        },
        lambda_min,
        lambda_max,
        obs_constant: observable.then(|| 1.0 / lambda_min),
        // A v = μ v, so conj(v) minimizes Σ u_j A[j,k] conj(u_k)
        worst_state: StateCoeffs::from_vector(lo.vector.conjugate()),
        model: model.descriptor().clone(),
        omega: omega.clone(),
        time_set: e.clone(),
        omega_measure: omega.measure(),
        time_measure: e.measure(),
        cutoff: model.cutoff(),
        dimension: model.dim(),
    })
}

/// Composite Simpson evaluation of `∫_E ‖e^{itΔ}u‖²_{L²(ω)} dt` with
/// `panels` panels per interval of `E`; the spatial norm at each node is
/// the form of `G_ω`.
pub fn brute_force_functional(
    model: &SpectralModel,
    omega: &SpatialSet,
    e: &TimeSet,
    u: &StateCoeffs,
    panels: usize,
) -> Result<f64> {
    let g = spatial_gramian(model, omega)?;
    brute_force_functional_from(model, &g, e, u, panels)
}

pub fn brute_force_functional_from(
    model: &SpectralModel,
    spatial: &HermitianMatrix,
    e: &TimeSet,
    u: &StateCoeffs,
    panels: usize,
) -> Result<f64> {
    model.check(u)?;
    let integrand = |t: f64| -> Result<f64> { Ok(spatial.form(&model.propagate(u, t)?.coeffs)) };
    let mut total = 0.0;
    for &(a, b) in e.intervals() {
        total += simpson(a, b, panels, integrand)?;
    }
    Ok(total)
}

/// Composite Simpson rule; `panels` must be even and at least 2.
pub fn simpson<F>(a: f64, b: f64, panels: usize, mut f: F) -> Result<f64>
where
    F: FnMut(f64) -> Result<f64>,
{
    if panels < 2 || !panels.is_multiple_of(2) {
        return Err(Error::config(format!("Simpson panel count {panels} must be even and >= 2")));
    }
    let h = (b - a) / panels as f64;
    let mut acc = f(a)? + f(b)?;
    for i in 1..panels {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h)?;
    }
    Ok(acc * h / 3.0)
}

/// For each distinct eigenvalue, the smallest eigenvalue of `G_ω`
/// compressed to that eigenspace.
pub fn eigenspace_visibility(model: &SpectralModel, omega: &SpatialSet) -> Result<Vec<(f64, f64)>> {
    let g = spatial_gramian(model, omega)?;
    let modes = model.modes();
    let mut out = Vec::new();
    let mut start = 0;
    while start < modes.len() {
        let lam = modes[start].eigenvalue;
        let end = start + modes[start..].iter().take_while(|m| m.eigenvalue == lam).count();
        let idx: Vec<usize> = (start..end).collect();
        let vis = eigenvalues(&g.compress(&idx))[0].clamp(0.0, 1.0);
        out.push((lam, vis));
        start = end;
    }
    Ok(out)
}

/// Weak observability certificate on the window `(s − δ, s + δ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WeakCertificate {
    pub tau: f64,
    /// `μ(τ) = λ_min((2δ)^{-1} A_window + τ H_{-2})`.
    pub mu: f64,
    /// Constant in front of the averaged observation term, `1/μ`.
    pub constant: f64,
    /// Constant in front of the `H^{-2}` remainder, `τ/μ`.
    pub remainder_constant: f64,
}

pub fn weak_obs_certificate(
    model: &SpectralModel,
    omega: &SpatialSet,
    window: (f64, f64),
    tau: f64,
) -> Result<WeakCertificate> {
    let g = spatial_gramian(model, omega)?;
    weak_obs_certificate_from(model, &g, window, tau)
}

pub fn weak_obs_certificate_from(
    model: &SpectralModel,
    spatial: &HermitianMatrix,
    window: (f64, f64),
    tau: f64,
) -> Result<WeakCertificate> {
    let (lo, hi) = window;
    if !(hi > lo) {
        return Err(Error::config(format!("window ({lo}, {hi}) must have positive length")));
    }
    if !(tau > 0.0) {
        return Err(Error::config(format!("tau must be positive, got {tau}")));
    }
    let e = TimeSet::interval(lo, hi)?;
    let a = obs_gramian_from(model, spatial, &e)?.scale(1.0 / (hi - lo));
    let remainder: Vec<f64> = model
        .eigenvalues()
        .iter()
        .map(|l| tau * (1.0 + l).powi(-2))
        .collect();
    let mu = eigenvalues(&a.add_real_diagonal(&remainder))[0];
    Ok(WeakCertificate {
        tau,
        mu,
        constant: 1.0 / mu,
        remainder_constant: tau / mu,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilteredStatus {
    Ok,
    EmptyBand,
    Degenerate,
}

/// Band-filtered observability constant for one window and one `h`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FilteredConstant {
    pub status: FilteredStatus,
    pub s: f64,
    pub delta: f64,
    pub h: f64,
    pub band_size: usize,
    pub lambda_min: f64,
    pub constant: Option<f64>,
}

/// `C(δ, h) = 1/λ_min` of the averaged Gramian `(2δ)^{-1} A_{(s−δ, s+δ)}`
/// compressed to `span{e_j : h² λ_j ∈ [1, 2]}`.
pub fn filtered_obs_constant(
    model: &SpectralModel,
    omega: &SpatialSet,
    s: f64,
    delta: f64,
    h: f64,
) -> Result<FilteredConstant> {
    let g = spatial_gramian(model, omega)?;
    filtered_obs_constant_from(model, &g, s, delta, h)
}

pub fn filtered_obs_constant_from(
    model: &SpectralModel,
    spatial: &HermitianMatrix,
    s: f64,
    delta: f64,
    h: f64,
) -> Result<FilteredConstant> {
    if !(delta > 0.0) {
        return Err(Error::config(format!("delta must be positive, got {delta}")));
    }
    let filter = SpectralFilter::new(h)?;
    let band: Vec<usize> = model
        .modes()
        .iter()
        .enumerate()
        .filter(|(_, m)| filter.in_band(m.eigenvalue))
        .map(|(i, _)| i)
        .collect();
    let mut out = FilteredConstant {
        status: FilteredStatus::EmptyBand,
        s,
        delta,
        h,
        band_size: band.len(),
        lambda_min: 0.0,
        constant: None,
    };
    if band.is_empty() {
        return Ok(out);
    }
    let e = TimeSet::interval(s - delta, s + delta)?;
    let lam = model.eigenvalues();
    let g = spatial.matrix();
    let n = band.len();
    let m = nalgebra::DMatrix::from_fn(n, n, |r, c| {
        let (j, k) = (band[r], band[c]);
        e.moment(lam[j] - lam[k]) * g[(j, k)] / (2.0 * delta)
    });
    let ev = eigenvalues(&HermitianMatrix::symmetrized(m));
    let (lmin, lmax) = (ev[0], ev[ev.len() - 1]);
    out.lambda_min = lmin.max(0.0);
    if lmin > DEGENERACY_FLOOR * lmax {
        out.status = FilteredStatus::Ok;
        out.constant = Some(1.0 / lmin);
    } else {
        out.status = FilteredStatus::Degenerate;
    }
    Ok(out)
}

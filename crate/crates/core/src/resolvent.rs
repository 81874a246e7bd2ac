//! Resolvent-bound certificates, α-scans and the strip quasimodes that
//! obstruct `α(λ) → 0`.
//!
//! The certificate replaces the nonsmooth best constant in
//! `K‖u‖ ≤ s‖(λ+Δ)u‖ + ‖u‖_{L²(ω)}` by the quadratic relaxation
//! `B(λ, s)² = λ_min(s² D(λ)² + G_ω)`, `D(λ) = diag(λ − λ_j)`. Since
//! `(a+b)²/2 ≤ a² + b² ≤ (a+b)²`, the best constant lies in `[B/√2, B]`.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{eigen_decomposition, eigenvalues, exceeds, HermitianMatrix};
use crate::sets::{axis_gramian, spatial_gramian, SpatialSet};
use crate::special::bump;
use crate::spectral::{Family, SpectralModel, StateCoeffs};

/// Default resolvent level `K₀`.
pub const DEFAULT_K0: f64 = 0.3;
/// Default bisection ceiling for `s`.
pub const DEFAULT_S_MAX: f64 = 1e3;
/// Relative width at which the `s*` bisection stops.
pub const BISECTION_REL_WIDTH: f64 = 1e-3;
/// Truncation is adequate when `λ_max ≥ TRUNCATION_FACTOR · λ`.
pub const TRUNCATION_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TruncationStatus {
    Adequate,
    /// `λ_max < 4λ`: modes above the cutoff may matter.
    Inadequate,
}

fn truncation(lambda_max: f64, lambda: f64) -> TruncationStatus {
    if lambda_max >= TRUNCATION_FACTOR * lambda {
        TruncationStatus::Adequate
    } else {
        TruncationStatus::Inadequate
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResolventCertificate {
    pub lambda: f64,
    pub s: f64,
    /// `B = √λ_min(s² D(λ)² + G_ω)`.
    pub bound: f64,
    /// Unit state attaining `s²‖(λ+Δ)u‖² + ‖u‖²_ω = B²`.
    pub minimizer: StateCoeffs,
    pub truncation: TruncationStatus,
    pub truncation_margin: f64,
}

/// Operators of the form `s² D(λ)² + G` that an α-scan can bisect on.
pub trait CertificateOperator: Sync {
    fn lambda_max(&self) -> f64;

    /// `λ_min(s² D(λ)² + G)`.
    fn min_eigenvalue(&self, lambda: f64, s: f64) -> f64;

    /// Whether `s² D(λ)² + G − level·I` is positive definite.
    fn exceeds(&self, lambda: f64, s: f64, level: f64) -> bool;

    fn bound(&self, lambda: f64, s: f64) -> f64 {
        self.min_eigenvalue(lambda, s).max(0.0).sqrt()
    }
}

fn check_lambda_s(lambda: f64, s: f64) -> Result<()> {
    if !(lambda >= 1.0) {
        return Err(Error::config(format!("spectral parameter λ = {lambda} must be >= 1")));
    }
    if !(s >= 0.0 && s.is_finite()) {
        return Err(Error::config(format!("s = {s} must be nonnegative")));
    }
    Ok(())
}

fn shifted_squares(eigs: &[f64], lambda: f64, s: f64) -> Vec<f64> {
    eigs.iter().map(|l| (s * (lambda - l)).powi(2)).collect()
}

/// Dense certificate operator on an arbitrary model and observation set.
#[derive(Debug, Clone)]
pub struct DenseResolvent {
    eigenvalues: Vec<f64>,
    gram: HermitianMatrix,
}

impl DenseResolvent {
    pub fn new(model: &SpectralModel, omega: &SpatialSet) -> Result<Self> {
        Ok(DenseResolvent {
            eigenvalues: model.eigenvalues(),
            gram: spatial_gramian(model, omega)?,
        })
    }

    pub fn certificate(&self, lambda: f64, s: f64) -> Result<ResolventCertificate> {
        check_lambda_s(lambda, s)?;
        let m = self.gram.add_real_diagonal(&shifted_squares(&self.eigenvalues, lambda, s));
        let lo = eigen_decomposition(&m).swap_remove(0);
        Ok(ResolventCertificate {
            lambda,
            s,
            bound: lo.value.max(0.0).sqrt(),
            minimizer: StateCoeffs::from_vector(lo.vector.conjugate()),
            truncation: truncation(self.lambda_max(), lambda),
            truncation_margin: self.lambda_max() / lambda,
        })
    }

    pub fn gram(&self) -> &HermitianMatrix {
        &self.gram
    }
}

impl CertificateOperator for DenseResolvent {
    fn lambda_max(&self) -> f64 {
        self.eigenvalues.iter().copied().fold(0.0, f64::max)
    }

    fn min_eigenvalue(&self, lambda: f64, s: f64) -> f64 {
        let m = self.gram.add_real_diagonal(&shifted_squares(&self.eigenvalues, lambda, s));
        eigenvalues(&m)[0]
    }

    fn exceeds(&self, lambda: f64, s: f64, level: f64) -> bool {
        let m = self.gram.add_real_diagonal(&shifted_squares(&self.eigenvalues, lambda, s));
        exceeds(&m, level)
    }
}

/// `bound_certificate` on a freshly assembled dense operator.
pub fn bound_certificate(model: &SpectralModel, omega: &SpatialSet, lambda: f64, s: f64) -> Result<ResolventCertificate> {
    DenseResolvent::new(model, omega)?.certificate(lambda, s)
}

/// Certificate operator for the strip `a < x < b` on `torus2d`.
///
/// The strip's Gramian is `G_x ⊗ I`, so `s² D² + G` splits into one block
/// per `y`-frequency `m`: `s² diag(λ − p² − m²)² + G_x`.
#[derive(Debug, Clone)]
pub struct StripFibers {
    x_eigs: Vec<f64>,
    y_eigs: Vec<f64>,
    gx: HermitianMatrix,
    lambda_max: f64,
}

impl StripFibers {
    pub fn new(model: &SpectralModel, strip: (f64, f64)) -> Result<Self> {
        if model.family() != Family::Torus2d {
            return Err(Error::config("strip fibers need a torus2d model"));
        }
        // validates the strip against the domain
        SpatialSet::strip(model, strip.0, strip.1)?.validate(model)?;
        let (ax, ay) = (model.axes()[0], model.axes()[1]);
        let n = model.cutoff();
        Ok(StripFibers {
            x_eigs: ax.indices(n).iter().map(|&p| ax.eigenvalue(p)).collect(),
            y_eigs: ay.indices(n).iter().map(|&m| ay.eigenvalue(m)).collect(),
            gx: HermitianMatrix::symmetrized(axis_gramian(&ax, n, &[strip])),
            lambda_max: model.lambda_max(),
        })
    }

    pub fn x_gram(&self) -> &HermitianMatrix {
        &self.gx
    }

    fn block(&self, lambda: f64, s: f64, y_eig: f64) -> HermitianMatrix {
        let d: Vec<f64> = self
            .x_eigs
            .iter()
            .map(|p| (s * (lambda - p - y_eig)).powi(2))
            .collect();
        self.gx.add_real_diagonal(&d)
    }

    /// `s² min_p (λ − p² − m²)²`, a lower bound on the block's spectrum.
    fn block_floor(&self, lambda: f64, s: f64, y_eig: f64) -> f64 {
        self.x_eigs
            .iter()
            .map(|p| (s * (lambda - p - y_eig)).powi(2))
            .fold(f64::INFINITY, f64::min)
    }
}

impl CertificateOperator for StripFibers {
    fn lambda_max(&self) -> f64 {
        self.lambda_max
    }

    fn min_eigenvalue(&self, lambda: f64, s: f64) -> f64 {
        let mut best = f64::INFINITY;
        let mut order: Vec<(f64, f64)> = self
            .y_eigs
            .iter()
            .map(|&m| (self.block_floor(lambda, s, m), m))
            .collect();
        order.sort_by(|a, b| a.0.total_cmp(&b.0));
        for (floor, m) in order {
            if floor >= best {
                break;
            }
            best = best.min(eigenvalues(&self.block(lambda, s, m))[0]);
        }
        best
    }

    fn exceeds(&self, lambda: f64, s: f64, level: f64) -> bool {
        self.y_eigs
            .iter()
            .filter(|&&m| self.block_floor(lambda, s, m) <= level)
            .all(|&m| exceeds(&self.block(lambda, s, m), level))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScanStatus {
    Ok,
    /// `B(λ, s_max) < K₀`.
    Unreachable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphaScanRow {
    pub lambda: f64,
    /// Upper end of the final bisection bracket, so `B(λ, s*) ≥ K₀` holds.
    pub s_star: Option<f64>,
    pub status: ScanStatus,
    pub bound_at_s_star: Option<f64>,
    pub truncation_margin: f64,
}

/// `s*(λ) = min{s : B(λ, s) ≥ K₀}` for each `λ`, by bisection on `[0, s_max]`.
pub fn alpha_scan<O: CertificateOperator>(op: &O, lambdas: &[f64], k0: f64, s_max: f64) -> Result<Vec<AlphaScanRow>> {
    if !(k0 > 0.0 && k0 < 1.0) {
        return Err(Error::config(format!("K0 = {k0} outside (0, 1)")));
    }
    if !(s_max > 0.0 && s_max.is_finite()) {
        return Err(Error::config(format!("bisection ceiling {s_max} must be positive")));
    }
    for &l in lambdas {
        check_lambda_s(l, 0.0)?;
    }
    let level = k0 * k0;
    Ok(lambdas
        .par_iter()
        .map(|&lambda| {
            let margin = op.lambda_max() / lambda;
            let s_star = if op.exceeds(lambda, 0.0, level) {
                Some(0.0)
            } else if !op.exceeds(lambda, s_max, level) {
                None
            } else {
                let (mut lo, mut hi) = (0.0, s_max);
                while hi - lo > BISECTION_REL_WIDTH * hi {
                    let mid = 0.5 * (lo + hi);
                    if op.exceeds(lambda, mid, level) {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                Some(hi)
            };
            AlphaScanRow {
                lambda,
                s_star,
                status: if s_star.is_some() {
                    ScanStatus::Ok
                } else {
                    ScanStatus::Unreachable
                },
                bound_at_s_star: s_star.map(|s| op.bound(lambda, s)),
                truncation_margin: margin,
            }
        })
        .collect())
}

/// Smooth bump `χ(x) = bump(d(x, center)/half_width)` on a circle, with
/// `d` the signed periodic distance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BumpSpec {
    pub center: f64,
    pub half_width: f64,
    pub sharpness: f64,
}

/// Default sharpness of the strip bump; keeps the Fourier tail of the
/// default bump below `1e-12` at 64 modes per side.
pub const DEFAULT_SHARPNESS: f64 = 8.0;

impl BumpSpec {
    /// Centred in the arc complementary to `(a, b)`, covering 80% of it.
    pub fn default_for_strip(strip: (f64, f64), length: f64) -> Self {
        let (a, b) = strip;
        let arc = length - (b - a);
        BumpSpec {
            center: (b + 0.5 * arc).rem_euclid(length),
            half_width: 0.4 * arc,
            sharpness: DEFAULT_SHARPNESS,
        }
    }

    pub fn eval(&self, x: f64, length: f64) -> f64 {
        let d = (x - self.center + 0.5 * length).rem_euclid(length) - 0.5 * length;
        bump(d / self.half_width, self.sharpness)
    }

    /// Periodic distance from the centre to the closed interval `[a, b]`.
    fn distance_to(&self, a: f64, b: f64, length: f64) -> f64 {
        let c = self.center.rem_euclid(length);
        let inside = |x: f64| (x - a).rem_euclid(length) <= b - a;
        if inside(c) {
            return 0.0;
        }
        let pd = |x: f64| {
            let d = (c - x).rem_euclid(length);
            d.min(length - d)
        };
        pd(a).min(pd(b))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuasimodeReport {
    pub k: i64,
    pub lambda: f64,
    pub norm: f64,
    /// `‖(k² + Δ)u‖`.
    pub resolvent_residual: f64,
    pub omega_norm: f64,
    /// `‖(k² + Δ)u‖ / ‖u‖`.
    pub ratio: f64,
    /// `ℓ²` mass of `χ`'s Fourier coefficients beyond the cutoff, relative to `‖χ‖`.
    pub chi_tail: f64,
    /// `K₀‖u‖ / ‖(k² + Δ)u‖`, attached when `‖u‖_ω ≤ 1e-12 ‖u‖`.
    pub implied_alpha_lower_bound: Option<f64>,
}

/// Relative Fourier tail above which `χ` counts as unresolved.
pub const CHI_TAIL_TOL: f64 = 1e-10;
const CHI_QUADRATURE_NODES: usize = 1 << 14;

/// Fourier coefficients `∫ χ conj(e_p)` for `|p| ≤ n_max` on a circle of the
/// given length, by the periodic trapezoid rule.
pub fn bump_coefficients(chi: &BumpSpec, length: f64, n_max: usize) -> Vec<Complex64> {
    let q = CHI_QUADRATURE_NODES;
    let h = length / q as f64;
    let samples: Vec<(f64, f64)> = (0..q)
        .map(|i| {
            let x = i as f64 * h;
            (x, chi.eval(x, length))
        })
        .filter(|&(_, v)| v != 0.0)
        .collect();
    let scale = h / length.sqrt();
    let n = n_max as i64;
    (-n..=n)
        .into_par_iter()
        .map(|p| {
            let kappa = TAU * p as f64 / length;
            samples
                .iter()
                .map(|&(x, v)| Complex64::from_polar(v, -kappa * x))
                .sum::<Complex64>()
                * scale
        })
        .collect()
}

/// The state `χ(x) e^{iky}` in the model's basis together with `χ`'s
/// relative Fourier tail beyond the cutoff.
pub fn strip_quasimode_state(
    model: &SpectralModel,
    strip: (f64, f64),
    chi: &BumpSpec,
    k: i64,
) -> Result<(StateCoeffs, f64)> {
    if model.family() != Family::Torus2d {
        return Err(Error::config("strip quasimodes live on torus2d"));
    }
    let n = model.cutoff();
    if k.unsigned_abs() as usize > n {
        return Err(Error::config(format!("y-frequency {k} exceeds the cutoff {n}")));
    }
    let lx = model.axes()[0].length;
    if !(chi.half_width > 0.0 && chi.half_width <= 0.5 * lx && chi.sharpness > 0.0) {
        return Err(Error::config("bump half-width must lie in (0, L/2] with positive sharpness"));
    }
    let (a, b) = strip;
    if chi.distance_to(a, b, lx) < chi.half_width {
        return Err(Error::config(format!(
            "bump support (centre {}, half-width {}) overlaps the strip ({a}, {b})",
            chi.center, chi.half_width
        )));
    }
    let wide = bump_coefficients(chi, lx, 4 * n);
    let total: f64 = wide.iter().map(|c| c.norm_sqr()).sum();
    let tail: f64 = wide
        .iter()
        .enumerate()
        .filter(|(i, _)| i.abs_diff(4 * n) > n)
        .map(|(_, c)| c.norm_sqr())
        .sum();
    let rel_tail = (tail / total).sqrt();
    if rel_tail > CHI_TAIL_TOL {
        return Err(Error::config(format!(
            "x-truncation does not resolve the bump: relative tail {rel_tail:e} > {CHI_TAIL_TOL:e}"
        )));
    }
    let mut state = model.zero_state();
    for (p, c) in (-(n as i64)..=n as i64).zip(&wide[3 * n..=5 * n]) {
        let pos = model.position(&[p, k]).expect("mode inside the cutoff");
        state.coeffs[pos] = *c;
    }
    Ok((state, rel_tail))
}

pub fn strip_quasimode(
    model: &SpectralModel,
    strip: (f64, f64),
    chi: &BumpSpec,
    k: i64,
    k0: f64,
) -> Result<QuasimodeReport> {
    let (state, chi_tail) = strip_quasimode_state(model, strip, chi, k)?;
    let lambda = (k * k) as f64;
    let norm = state.l2_norm();
    let resolvent_residual = state
        .coeffs
        .iter()
        .zip(model.modes())
        .map(|(c, m)| ((lambda - m.eigenvalue) * c.norm()).powi(2))
        .sum::<f64>()
        .sqrt();
    // G_ω = G_x ⊗ I and the state sits in the single y-fiber k
    let fibers = StripFibers::new(model, strip)?;
    let n = model.cutoff() as i64;
    let xs = nalgebra::DVector::from_iterator(
        (2 * n + 1) as usize,
        (-n..=n).map(|p| state.coeffs[model.position(&[p, k]).expect("in cutoff")]),
    );
    let omega_norm = fibers.x_gram().form(&xs).max(0.0).sqrt();
    let ratio = resolvent_residual / norm;
    Ok(QuasimodeReport {
        k,
        lambda,
        norm,
        resolvent_residual,
        omega_norm,
        ratio,
        chi_tail,
        implied_alpha_lower_bound: (omega_norm <= 1e-12 * norm).then(|| k0 / ratio),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerLaw {
    pub exponent: f64,
    pub prefactor: f64,
    /// Root-mean-square residual of the fit in natural-log space.
    pub residual: f64,
}

/// Least-squares fit of `s = prefactor · λ^{exponent}` on log–log pairs.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<PowerLaw> {
    if points.len() < 3 {
        return Err(Error::Domain(format!(
            "power-law fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if points.iter().any(|&(l, s)| !(l > 0.0 && s > 0.0)) {
        return Err(Error::Domain("power-law fit needs positive coordinates".into()));
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("power-law fit needs distinct λ values".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - exponent * x).powi(2))
        .sum();
    Ok(PowerLaw {
        exponent,
        prefactor: intercept.exp(),
        residual: (sse / n).sqrt(),
    })
}

/// Full-matrix `λ_min` of `s² D² + G` for comparison with the fibered path.
pub fn dense_min_eigenvalue(gram: &HermitianMatrix, eigs: &[f64], lambda: f64, s: f64) -> f64 {
    eigenvalues(&gram.add_real_diagonal(&shifted_squares(eigs, lambda, s)))[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::ModelDescriptor;
    use std::f64::consts::PI;

    fn torus(n: usize) -> SpectralModel {
        SpectralModel::build(&ModelDescriptor::torus1d(n)).unwrap()
    }

    #[test]
    fn zero_s_full_domain_gives_one() {
        let m = torus(10);
        let c = bound_certificate(&m, &SpatialSet::full(&m), 20.0, 0.0).unwrap();
        assert!((c.bound - 1.0).abs() < 1e-12);
        assert_eq!(c.truncation, TruncationStatus::Adequate);
    }

    #[test]
    fn large_s_is_dominated_by_spectral_gap() {
        let m = torus(10);
        let omega = SpatialSet::intervals(&[(0.0, 1.0)]);
        let lambda = 30.5; // gap to 25 and 36 is 5.5
        let s = 1e4;
        let c = bound_certificate(&m, &omega, lambda, s).unwrap();
        assert!((c.bound / (s * 5.5) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn inadequate_truncation_is_flagged() {
        let m = torus(4);
        let c = bound_certificate(&m, &SpatialSet::full(&m), 10.0, 0.1).unwrap();
        assert_eq!(c.truncation, TruncationStatus::Inadequate);
        assert!(bound_certificate(&m, &SpatialSet::full(&m), 0.5, 0.1).is_err());
        assert!(bound_certificate(&m, &SpatialSet::full(&m), 2.0, -0.1).is_err());
    }

    #[test]
    fn minimizer_satisfies_rayleigh_identity() {
        let m = torus(12);
        let omega = SpatialSet::intervals(&[(0.0, PI)]);
        let op = DenseResolvent::new(&m, &omega).unwrap();
        let (lambda, s) = (20.0, 0.3);
        let c = op.certificate(lambda, s).unwrap();
        let u = &c.minimizer.coeffs;
        let d2: f64 = u
            .iter()
            .zip(m.eigenvalues())
            .map(|(z, l)| (s * (lambda - l)).powi(2) * z.norm_sqr())
            .sum();
        let total = d2 + op.gram().form(u);
        assert!((total - c.bound * c.bound).abs() < 1e-9);
    }

    #[test]
    fn scan_full_domain_is_zero() {
        let m = torus(20);
        let op = DenseResolvent::new(&m, &SpatialSet::full(&m)).unwrap();
        let rows = alpha_scan(&op, &[4.0, 9.0, 50.0], 0.9, 10.0).unwrap();
        assert!(rows.iter().all(|r| r.s_star == Some(0.0) && r.status == ScanStatus::Ok));
    }

    #[test]
    fn scan_needs_positive_s_above_visibility() {
        let m = torus(20);
        let omega = SpatialSet::intervals(&[(0.0, 1.0)]);
        let op = DenseResolvent::new(&m, &omega).unwrap();
        let floor = eigenvalues(op.gram())[0].max(0.0).sqrt();
        let rows = alpha_scan(&op, &[25.0], floor + 0.05, DEFAULT_S_MAX).unwrap();
        let r = &rows[0];
        let s = r.s_star.unwrap();
        assert!(s > 0.0);
        assert!(r.bound_at_s_star.unwrap() >= floor + 0.05 - 1e-12);
        // just below the bracket the level is missed
        assert!(!op.exceeds(25.0, s * (1.0 - 2.0 * BISECTION_REL_WIDTH), (floor + 0.05).powi(2)));
    }

    #[test]
    fn unreachable_level_is_reported() {
        // λ = 4 is an eigenvalue; its eigenspace sees only part of ω's mass
        let m = torus(10);
        let omega = SpatialSet::intervals(&[(0.0, 0.2)]);
        let op = DenseResolvent::new(&m, &omega).unwrap();
        let rows = alpha_scan(&op, &[4.0], 0.9, 1e3).unwrap();
        assert_eq!(rows[0].status, ScanStatus::Unreachable);
        assert_eq!(rows[0].s_star, None);
        assert!(alpha_scan(&op, &[4.0], 1.5, 1e3).is_err());
    }

    #[test]
    fn power_law_examples() {
        let pts: Vec<(f64, f64)> = [1.0f64, 4.0, 16.0, 100.0].iter().map(|&l| (l, l.powf(-0.5))).collect();
        let fit = fit_power_law(&pts).unwrap();
        assert!((fit.exponent + 0.5).abs() < 1e-12);
        assert!((fit.prefactor - 1.0).abs() < 1e-12);
        assert!(fit.residual < 1e-12);

        let fit = fit_power_law(&[(1.0, 3.0), (2.0, 3.0), (5.0, 3.0)]).unwrap();
        assert!(fit.exponent.abs() < 1e-12);

        assert!(matches!(fit_power_law(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]), Err(Error::Domain(_))));
        assert!(matches!(fit_power_law(&[(1.0, 1.0), (2.0, 1.0)]), Err(Error::Domain(_))));
    }

    #[test]
    fn bump_default_avoids_strip() {
        let chi = BumpSpec::default_for_strip((1.0, 2.0), TAU);
        assert!(chi.distance_to(1.0, 2.0, TAU) >= chi.half_width);
        for i in 0..1000 {
            let x = 1.0 + i as f64 / 1000.0;
            assert_eq!(chi.eval(x, TAU), 0.0);
        }
        assert_eq!(chi.eval(chi.center, TAU), 1.0);
    }

    #[test]
    fn overlapping_bump_rejected() {
        let m = SpectralModel::build(&ModelDescriptor::torus2d(8)).unwrap();
        let chi = BumpSpec {
            center: 2.5,
            half_width: 1.0,
            sharpness: 8.0,
        };
        let err = strip_quasimode(&m, (1.0, 2.0), &chi, 2, 0.3).unwrap_err();
        assert!(matches!(err, Error::Config(_)));
    }
}

//! Model manifolds with explicitly enumerated Laplace spectra.
//!
//! Every model is a product of one-dimensional factors (a circle or an
//! interval with Dirichlet/Neumann conditions), so eigenfunctions are
//! products of exponentials, sines or cosines and every operator that is a
//! function of the Laplacian acts diagonally on eigencoefficients.

use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::fmt;
use std::io::Write;

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::special::{band_profile, cos_integral, exp_integral};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    Torus1d,
    Torus2d,
    Rect1d,
    Rect2d,
}

impl Family {
    pub fn dimension(self) -> usize {
        match self {
            Family::Torus1d | Family::Rect1d => 1,
            Family::Torus2d | Family::Rect2d => 2,
        }
    }

    fn is_torus(self) -> bool {
        matches!(self, Family::Torus1d | Family::Torus2d)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::Torus1d => "torus1d",
            Family::Torus2d => "torus2d",
            Family::Rect1d => "rect1d",
            Family::Rect2d => "rect2d",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    None,
    Dirichlet,
    Neumann,
}

/// Serializable description of a model: `{family, boundary, extent, cutoff}`.
///
/// An empty `extent` selects the defaults (2π per circle, π per interval).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDescriptor {
    pub family: Family,
    pub boundary: Boundary,
    #[serde(default)]
    pub extent: Vec<f64>,
    pub cutoff: usize,
}

impl ModelDescriptor {
    pub fn new(family: Family, boundary: Boundary, cutoff: usize) -> Self {
        ModelDescriptor {
            family,
            boundary,
            extent: Vec::new(),
            cutoff,
        }
    }

    pub fn torus1d(cutoff: usize) -> Self {
        Self::new(Family::Torus1d, Boundary::None, cutoff)
    }

    pub fn torus2d(cutoff: usize) -> Self {
        Self::new(Family::Torus2d, Boundary::None, cutoff)
    }

    pub fn with_extent(mut self, extent: Vec<f64>) -> Self {
        self.extent = extent;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AxisKind {
    Periodic,
    Dirichlet,
    Neumann,
}

/// One coordinate factor of a product model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Axis {
    pub kind: AxisKind,
    pub length: f64,
    scale: f64,
}

impl Axis {
    pub fn new(kind: AxisKind, length: f64) -> Self {
        // x/x is exactly 1 in IEEE arithmetic, so default extents keep
        // integer eigenvalues exact.
        let scale = match kind {
            AxisKind::Periodic => TAU / length,
            AxisKind::Dirichlet | AxisKind::Neumann => PI / length,
        };
        Axis {
            kind,
            length,
            scale,
        }
    }

    pub fn indices(&self, cutoff: usize) -> Vec<i64> {
        let n = cutoff as i64;
        match self.kind {
            AxisKind::Periodic => (-n..=n).collect(),
            AxisKind::Dirichlet => (1..=n).collect(),
            AxisKind::Neumann => (0..=n).collect(),
        }
    }

    pub fn wavenumber(&self, j: i64) -> f64 {
        self.scale * j as f64
    }

    pub fn eigenvalue(&self, j: i64) -> f64 {
        let k = self.wavenumber(j);
        k * k
    }

    pub fn normalization(&self, j: i64) -> f64 {
        match self.kind {
            AxisKind::Periodic => 1.0 / self.length.sqrt(),
            AxisKind::Neumann if j == 0 => 1.0 / self.length.sqrt(),
            AxisKind::Dirichlet | AxisKind::Neumann => (2.0 / self.length).sqrt(),
        }
    }

    pub fn eval(&self, j: i64, x: f64) -> Complex64 {
        let c = self.normalization(j);
        let kx = self.wavenumber(j) * x;
        match self.kind {
            AxisKind::Periodic => Complex64::from_polar(c, kx),
            AxisKind::Dirichlet => Complex64::new(c * kx.sin(), 0.0),
            AxisKind::Neumann => Complex64::new(c * kx.cos(), 0.0),
        }
    }

    /// `∫_a^b e_j(x) conj(e_k(x)) dx` in closed form.
    pub fn interval_gram(&self, a: f64, b: f64, j: i64, k: i64) -> Complex64 {
        let cj = self.normalization(j);
        let ck = self.normalization(k);
        let (pj, pk) = (self.wavenumber(j), self.wavenumber(k));
        match self.kind {
            AxisKind::Periodic => exp_integral(a, b, pk - pj) * (cj * ck),
            AxisKind::Dirichlet => {
                let v = 0.5 * (cos_integral(a, b, pj - pk) - cos_integral(a, b, pj + pk));
                Complex64::new(cj * ck * v, 0.0)
            }
            AxisKind::Neumann => {
                let v = 0.5 * (cos_integral(a, b, pj - pk) + cos_integral(a, b, pj + pk));
                Complex64::new(cj * ck * v, 0.0)
            }
        }
    }
}

/// One row of the mode table.
#[derive(Debug, Clone, PartialEq)]
pub struct Mode {
    pub index: Vec<i64>,
    pub eigenvalue: f64,
    pub normalization: f64,
}

/// A compact model manifold with its truncated, sorted Laplace spectrum.
#[derive(Debug, Clone)]
pub struct SpectralModel {
    descriptor: ModelDescriptor,
    axes: Vec<Axis>,
    modes: Vec<Mode>,
    lookup: HashMap<Vec<i64>, usize>,
}

impl SpectralModel {
    pub fn build(descriptor: &ModelDescriptor) -> Result<Self> {
        let family = descriptor.family;
        let dim = family.dimension();
        let kind = match (family.is_torus(), descriptor.boundary) {
            (true, Boundary::None) => AxisKind::Periodic,
            (false, Boundary::Dirichlet) => AxisKind::Dirichlet,
            (false, Boundary::Neumann) => AxisKind::Neumann,
            (_, b) => {
                return Err(Error::config(format!(
                    "family {family} does not support boundary {b:?}"
                )))
            }
        };
        if descriptor.cutoff < 1 {
            return Err(Error::config("cutoff must be at least 1"));
        }
        let extent = if descriptor.extent.is_empty() {
            let side = if family.is_torus() { TAU } else { PI };
            vec![side; dim]
        } else {
            descriptor.extent.clone()
        };
        if extent.len() != dim {
            return Err(Error::config(format!(
                "extent has {} components, family {family} needs {dim}",
                extent.len()
            )));
        }
        if extent.iter().any(|&l| !(l > 0.0 && l.is_finite())) {
            return Err(Error::config("extent components must be positive"));
        }
        let axes: Vec<Axis> = extent.iter().map(|&l| Axis::new(kind, l)).collect();

        let per_axis: Vec<Vec<i64>> = axes.iter().map(|a| a.indices(descriptor.cutoff)).collect();
        let mut modes = Vec::new();
        let mut tuple = vec![0i64; dim];
        enumerate(&axes, &per_axis, 0, &mut tuple, &mut modes);
        modes.sort_by(|a, b| {
            a.eigenvalue
                .total_cmp(&b.eigenvalue)
                .then_with(|| a.index.cmp(&b.index))
        });
        let lookup = modes
            .iter()
            .enumerate()
            .map(|(i, m)| (m.index.clone(), i))
            .collect();

        Ok(SpectralModel {
            descriptor: ModelDescriptor {
                extent,
                ..descriptor.clone()
            },
            axes,
            modes,
            lookup,
        })
    }

    pub fn descriptor(&self) -> &ModelDescriptor {
        &self.descriptor
    }

    pub fn family(&self) -> Family {
        self.descriptor.family
    }

    pub fn cutoff(&self) -> usize {
        self.descriptor.cutoff
    }

    pub fn axes(&self) -> &[Axis] {
        &self.axes
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.modes.iter().map(|m| m.eigenvalue).collect()
    }

    pub fn lambda_max(&self) -> f64 {
        self.modes.last().map_or(0.0, |m| m.eigenvalue)
    }

    pub fn position(&self, index: &[i64]) -> Option<usize> {
        self.lookup.get(index).copied()
    }

    pub fn domain_measure(&self) -> f64 {
        self.axes.iter().map(|a| a.length).product()
    }

    pub fn zero_state(&self) -> StateCoeffs {
        StateCoeffs::zeros(self.dim())
    }

    /// Unit coefficient on the mode with the given index tuple.
    pub fn basis_state(&self, index: &[i64]) -> Result<StateCoeffs> {
        let pos = self
            .position(index)
            .ok_or_else(|| Error::config(format!("mode {index:?} is not in the truncated basis")))?;
        let mut s = self.zero_state();
        s.coeffs[pos] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    pub fn check(&self, state: &StateCoeffs) -> Result<()> {
        if state.len() != self.dim() {
            return Err(Error::Shape {
                expected: self.dim(),
                got: state.len(),
            });
        }
        Ok(())
    }

    /// `e^{itΔ}`: multiplies coefficient `j` by `e^{-itλ_j}`.
    pub fn propagate(&self, state: &StateCoeffs, t: f64) -> Result<StateCoeffs> {
        self.check(state)?;
        if t == 0.0 {
            return Ok(state.clone());
        }
        let coeffs = state
            .coeffs
            .iter()
            .zip(&self.modes)
            .map(|(c, m)| c * Complex64::from_polar(1.0, -t * m.eigenvalue))
            .collect::<Vec<_>>();
        Ok(StateCoeffs::new(coeffs))
    }

    /// Sobolev norm with weights `(1 + λ_j)^order`.
    pub fn norm(&self, state: &StateCoeffs, order: f64) -> Result<f64> {
        self.check(state)?;
        if order == 0.0 {
            return Ok(state.l2_norm());
        }
        let sq: f64 = state
            .coeffs
            .iter()
            .zip(&self.modes)
            .map(|(c, m)| (1.0 + m.eigenvalue).powf(order) * c.norm_sqr())
            .sum();
        Ok(sq.sqrt())
    }

    pub fn apply_filter(&self, state: &StateCoeffs, filter: &SpectralFilter) -> Result<StateCoeffs> {
        self.check(state)?;
        let coeffs = state
            .coeffs
            .iter()
            .zip(&self.modes)
            .map(|(c, m)| c * filter.weight(m.eigenvalue))
            .collect::<Vec<_>>();
        Ok(StateCoeffs::new(coeffs))
    }

    /// Pointwise values `Σ c_j e_j(x)`.
    pub fn evaluate(&self, state: &StateCoeffs, points: &[Vec<f64>]) -> Result<Vec<Complex64>> {
        self.check(state)?;
        points
            .iter()
            .map(|p| {
                self.check_point(p)?;
                Ok(state
                    .coeffs
                    .iter()
                    .zip(&self.modes)
                    .filter(|(c, _)| **c != Complex64::new(0.0, 0.0))
                    .map(|(c, m)| c * self.eigenfunction(&m.index, p))
                    .sum())
            })
            .collect()
    }

    pub fn eigenfunction(&self, index: &[i64], point: &[f64]) -> Complex64 {
        self.axes
            .iter()
            .zip(index.iter().zip(point))
            .map(|(ax, (&j, &x))| ax.eval(j, x))
            .product()
    }

    fn check_point(&self, p: &[f64]) -> Result<()> {
        let inside = p.len() == self.axes.len()
            && p
                .iter()
                .zip(&self.axes)
                .all(|(&x, a)| x.is_finite() && x >= 0.0 && x <= a.length);
        if inside {
            Ok(())
        } else {
            Err(Error::Range { point: p.to_vec() })
        }
    }

    /// Mode table as CSV: one `index_<axis>` column per coordinate, then
    /// the eigenvalue and normalization constant.
    pub fn write_mode_table<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let idx_cols: Vec<String> = (0..self.axes.len()).map(|i| format!("index_{i}")).collect();
        writeln!(out, "{},eigenvalue,normalization", idx_cols.join(","))?;
        for m in &self.modes {
            let idx: Vec<String> = m.index.iter().map(|j| j.to_string()).collect();
            writeln!(
                out,
                "{},{},{}",
                idx.join(","),
                fmt_f64(m.eigenvalue),
                fmt_f64(m.normalization)
            )?;
        }
        Ok(())
    }
}

fn enumerate(axes: &[Axis], per_axis: &[Vec<i64>], depth: usize, tuple: &mut Vec<i64>, out: &mut Vec<Mode>) {
    if depth == axes.len() {
        let eigenvalue = axes.iter().zip(tuple.iter()).map(|(a, &j)| a.eigenvalue(j)).sum();
        let normalization = axes
            .iter()
            .zip(tuple.iter())
            .map(|(a, &j)| a.normalization(j))
            .product();
        out.push(Mode {
            index: tuple.clone(),
            eigenvalue,
            normalization,
        });
        return;
    }
    for &j in &per_axis[depth] {
        tuple[depth] = j;
        enumerate(axes, per_axis, depth + 1, tuple, out);
    }
}

/// Coefficients of a state in a model's truncated eigenbasis.
///
/// Serializes as a flat array of interleaved real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct StateCoeffs {
    pub coeffs: DVector<Complex64>,
}

impl StateCoeffs {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        StateCoeffs {
            coeffs: DVector::from_vec(coeffs),
        }
    }

    pub fn from_vector(coeffs: DVector<Complex64>) -> Self {
        StateCoeffs { coeffs }
    }

    pub fn zeros(n: usize) -> Self {
        StateCoeffs {
            coeffs: DVector::zeros(n),
        }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.norm()
    }

    pub fn interleaved(&self) -> Vec<f64> {
        self.coeffs.iter().flat_map(|c| [c.re, c.im]).collect()
    }

    pub fn from_interleaved(values: &[f64]) -> Result<Self> {
        if !values.len().is_multiple_of(2) {
            return Err(Error::Shape {
                expected: values.len() + 1,
                got: values.len(),
            });
        }
        Ok(StateCoeffs::new(
            values
                .chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect(),
        ))
    }
}

impl Serialize for StateCoeffs {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.interleaved().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for StateCoeffs {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(deserializer)?;
        StateCoeffs::from_interleaved(&v).map_err(serde::de::Error::custom)
    }
}

/// Semiclassical band filter `φ(h² λ)` around frequencies `λ ≈ h^{-2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralFilter {
    h: f64,
}

impl SpectralFilter {
    pub fn new(h: f64) -> Result<Self> {
        if !(h > 0.0 && h.is_finite()) {
            return Err(Error::config(format!("filter parameter h must be positive, got {h}")));
        }
        Ok(SpectralFilter { h })
    }

    /// Filter centred on the spectral parameter `λ`, i.e. `h = λ^{-1/2}`.
    pub fn for_lambda(lambda: f64) -> Result<Self> {
        Self::new(lambda.powf(-0.5))
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn weight(&self, eigenvalue: f64) -> f64 {
        band_profile(self.h * self.h * eigenvalue)
    }

    /// Whether `h² λ` lies on the plateau `[1, 2]`.
    pub fn in_band(&self, eigenvalue: f64) -> bool {
        (1.0..=2.0).contains(&(self.h * self.h * eigenvalue))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn torus1d_spectrum() {
        let m = SpectralModel::build(&ModelDescriptor::torus1d(2)).unwrap();
        assert_eq!(m.eigenvalues(), vec![0.0, 1.0, 1.0, 4.0, 4.0]);
        let idx: Vec<i64> = m.modes().iter().map(|m| m.index[0]).collect();
        assert_eq!(idx, vec![0, -1, 1, -2, 2]);
    }

    #[test]
    fn rect1d_dirichlet_spectrum() {
        let d = ModelDescriptor::new(Family::Rect1d, Boundary::Dirichlet, 3);
        let m = SpectralModel::build(&d).unwrap();
        assert_eq!(m.eigenvalues(), vec![1.0, 4.0, 9.0]);
    }

    #[test]
    fn torus2d_spectrum() {
        let m = SpectralModel::build(&ModelDescriptor::torus2d(1)).unwrap();
        // enumerate j² + k² over |j|,|k| ≤ 1
        let mut expect: Vec<f64> = (-1i64..=1)
            .flat_map(|j| (-1i64..=1).map(move |k| (j * j + k * k) as f64))
            .collect();
        expect.sort_by(f64::total_cmp);
        assert_eq!(m.eigenvalues(), expect);
        assert_eq!(expect, vec![0.0, 1.0, 1.0, 1.0, 1.0, 2.0, 2.0, 2.0, 2.0]);
    }

    #[test]
    fn mode_counts() {
        let n = 5;
        let count = |f, b| SpectralModel::build(&ModelDescriptor::new(f, b, n)).unwrap().dim();
        assert_eq!(count(Family::Torus1d, Boundary::None), 2 * n + 1);
        assert_eq!(count(Family::Torus2d, Boundary::None), (2 * n + 1).pow(2));
        assert_eq!(count(Family::Rect1d, Boundary::Dirichlet), n);
        assert_eq!(count(Family::Rect1d, Boundary::Neumann), n + 1);
        assert_eq!(count(Family::Rect2d, Boundary::Neumann), (n + 1).pow(2));
    }

    #[test]
    fn unsupported_combinations_rejected() {
        for (f, b) in [
            (Family::Torus1d, Boundary::Dirichlet),
            (Family::Rect1d, Boundary::None),
            (Family::Rect2d, Boundary::None),
        ] {
            let err = SpectralModel::build(&ModelDescriptor::new(f, b, 3)).unwrap_err();
            assert!(matches!(err, Error::Config(_)));
        }
        let bad = ModelDescriptor::torus1d(0);
        assert!(matches!(SpectralModel::build(&bad), Err(Error::Config(_))));
        let bad = ModelDescriptor::torus1d(2).with_extent(vec![-1.0]);
        assert!(matches!(SpectralModel::build(&bad), Err(Error::Config(_))));
    }

    #[test]
    fn propagate_examples() {
        let m = SpectralModel::build(&ModelDescriptor::torus1d(2)).unwrap();
        let mut s = m.zero_state();
        s.coeffs[m.position(&[0]).unwrap()] = c(1.0, 0.0);
        s.coeffs[m.position(&[1]).unwrap()] = c(1.0, 0.0);
        assert_eq!(m.propagate(&s, 0.0).unwrap(), s);

        let out = m.propagate(&s, PI / 2.0).unwrap();
        let direct = Complex64::new(0.0, -PI / 2.0).exp();
        assert!((out.coeffs[m.position(&[1]).unwrap()] - direct).norm() < 1e-15);
        assert!((out.coeffs[m.position(&[1]).unwrap()] - c(0.0, -1.0)).norm() < 1e-15);
        assert_eq!(out.coeffs[m.position(&[0]).unwrap()], c(1.0, 0.0));

        let e1 = m.basis_state(&[1]).unwrap();
        let full = m.propagate(&e1, TAU).unwrap();
        assert!((full.coeffs[m.position(&[1]).unwrap()] - c(1.0, 0.0)).norm() < 1e-14);

        let wrong = StateCoeffs::zeros(3);
        assert!(matches!(m.propagate(&wrong, 1.0), Err(Error::Shape { .. })));
    }

    #[test]
    fn norm_examples() {
        let m = SpectralModel::build(&ModelDescriptor::torus1d(3)).unwrap();
        let e0 = m.basis_state(&[0]).unwrap();
        for order in [-2.0, 0.0, 1.5] {
            assert_eq!(m.norm(&e0, order).unwrap(), 1.0);
        }
        let e3 = m.basis_state(&[3]).unwrap();
        assert!((m.norm(&e3, -2.0).unwrap() - 0.1).abs() < 1e-16);

        let mut s = m.zero_state();
        s.coeffs[0] = c(3.0, 0.0);
        s.coeffs[1] = c(0.0, 4.0);
        assert_eq!(m.norm(&s, 0.0).unwrap(), 5.0);
    }

    #[test]
    fn filter_examples() {
        let m = SpectralModel::build(&ModelDescriptor::torus1d(4)).unwrap();
        let mut s = m.zero_state();
        for x in s.coeffs.iter_mut() {
            *x = c(1.0, 0.5);
        }
        let f1 = SpectralFilter::new(1.0).unwrap();
        let out = m.apply_filter(&s, &f1).unwrap();
        assert_eq!(out.coeffs[m.position(&[1]).unwrap()], c(1.0, 0.5));
        assert_eq!(out.coeffs[m.position(&[0]).unwrap()], c(0.0, 0.0));

        let f = SpectralFilter::new(0.5).unwrap();
        let out = m.apply_filter(&s, &f).unwrap();
        let scaled = out.coeffs[m.position(&[3]).unwrap()] / c(1.0, 0.5);
        assert!((scaled.re - band_profile(2.25)).abs() < 1e-15 && scaled.im.abs() < 1e-15);
        assert!(scaled.re > 0.0 && scaled.re < 1.0);

        assert!(SpectralFilter::new(0.0).is_err());
    }

    #[test]
    fn filter_plateau_and_support_on_every_mode() {
        let m = SpectralModel::build(&ModelDescriptor::torus2d(12)).unwrap();
        for h in [0.05, 0.1, 0.13, 0.3] {
            let f = SpectralFilter::new(h).unwrap();
            for mode in m.modes() {
                let z = h * h * mode.eigenvalue;
                let w = f.weight(mode.eigenvalue);
                if (1.0..=2.0).contains(&z) {
                    assert_eq!(w, 1.0);
                } else if z <= 0.5 || z >= 2.5 {
                    assert_eq!(w, 0.0);
                } else {
                    assert!((0.0..=1.0).contains(&w));
                }
            }
        }
    }

    #[test]
    fn evaluate_examples() {
        let m = SpectralModel::build(&ModelDescriptor::torus1d(3)).unwrap();
        let pts = vec![vec![0.0], vec![1.0], vec![TAU]];
        let z = m.evaluate(&m.zero_state(), &pts).unwrap();
        assert!(z.iter().all(|v| *v == c(0.0, 0.0)));

        let e0 = m.basis_state(&[0]).unwrap();
        for v in m.evaluate(&e0, &pts).unwrap() {
            assert!((v - c(1.0 / TAU.sqrt(), 0.0)).norm() < 1e-15);
        }

        let mut s = m.zero_state();
        s.coeffs[m.position(&[1]).unwrap()] = c(1.0, 0.0);
        s.coeffs[m.position(&[-1]).unwrap()] = c(1.0, 0.0);
        let v = m.evaluate(&s, &[vec![0.0]]).unwrap()[0];
        assert!((v - c(2.0 / TAU.sqrt(), 0.0)).norm() < 1e-15);

        assert!(matches!(
            m.evaluate(&s, &[vec![7.0]]),
            Err(Error::Range { .. })
        ));
        assert!(matches!(
            m.evaluate(&s, &[vec![1.0, 1.0]]),
            Err(Error::Range { .. })
        ));
    }

    #[test]
    fn descriptor_json() {
        let d: ModelDescriptor =
            serde_json::from_str(r#"{"family":"rect2d","boundary":"neumann","extent":[1.0,2.0],"cutoff":4}"#)
                .unwrap();
        let m = SpectralModel::build(&d).unwrap();
        assert_eq!(m.dim(), 25);
        assert!((m.domain_measure() - 2.0).abs() < 1e-15);
        let bad = serde_json::from_str::<ModelDescriptor>(
            r#"{"family":"torus1d","boundary":"none","cutoff":4,"color":1}"#,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn mode_table_csv() {
        let m = SpectralModel::build(&ModelDescriptor::torus1d(1)).unwrap();
        let mut buf = Vec::new();
        m.write_mode_table(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "index_0,eigenvalue,normalization");
        assert_eq!(lines.len(), 4);
        assert!(lines[1].starts_with("0,0.0000000000000000e0,"));
    }

    #[test]
    fn state_json_is_interleaved() {
        let s = StateCoeffs::new(vec![c(1.0, 2.0), c(-0.5, 0.0)]);
        let j = serde_json::to_string(&s).unwrap();
        assert_eq!(j, "[1.0,2.0,-0.5,0.0]");
        let back: StateCoeffs = serde_json::from_str(&j).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<StateCoeffs>("[1.0,2.0,3.0]").is_err());
    }
}

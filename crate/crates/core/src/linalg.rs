//! Dense Hermitian matrices and the small set of solvers the laboratory
//! needs: extreme eigenpairs, a definiteness test and conjugate gradients.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Relative tolerance for accepting a matrix as Hermitian.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Dense Hermitian matrix holding a Gram-type quadratic form.
///
/// Entries follow the Gram convention `H[j,k] = ⟨f_j, f_k⟩` (linear in the
/// first slot), so the form of a coefficient vector `u` is
/// `Σ u_j H[j,k] conj(u_k)` (see [`HermitianMatrix::form`]) and the
/// operator that realizes it on coefficients is `Hᵀ`
/// (see [`HermitianMatrix::apply`]).
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    m: DMatrix<Complex64>,
}

impl HermitianMatrix {
    /// Validates Hermitian symmetry to [`HERMITIAN_TOL`] relative to the
    /// largest entry, then symmetrizes exactly.
    pub fn new(m: DMatrix<Complex64>) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Contract(format!(
                "matrix is {}x{}, not square",
                m.nrows(),
                m.ncols()
            )));
        }
        let scale = m.iter().fold(0.0f64, |acc, z| acc.max(z.norm())).max(1.0);
        let asym = hermitian_defect(&m);
        if asym > HERMITIAN_TOL * scale {
            return Err(Error::Contract(format!(
                "matrix is not Hermitian: max |H - H*| = {asym:e}"
            )));
        }
        Ok(Self::symmetrized(m))
    }

    pub(crate) fn symmetrized(m: DMatrix<Complex64>) -> Self {
        let adj = m.adjoint();
        HermitianMatrix {
            m: (m + adj) * Complex64::new(0.5, 0.0),
        }
    }

    pub fn identity(n: usize) -> Self {
        HermitianMatrix {
            m: DMatrix::identity(n, n),
        }
    }

    pub fn from_real_diagonal(d: &[f64]) -> Self {
        let v = DVector::from_iterator(d.len(), d.iter().map(|&x| Complex64::new(x, 0.0)));
        HermitianMatrix {
            m: DMatrix::from_diagonal(&v),
        }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn max_abs(&self) -> f64 {
        self.m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }

    /// `Σ_{j,k} u_j H[j,k] conj(u_k)`, real for Hermitian `H`.
    pub fn form(&self, u: &DVector<Complex64>) -> f64 {
        let hu = &self.m * u.conjugate();
        u.dot(&hu).re
    }

    /// The coefficient-space operator whose quadratic form is [`Self::form`].
    pub fn apply(&self, u: &DVector<Complex64>) -> DVector<Complex64> {
        self.m.tr_mul(u)
    }

    /// Operator matrix `Hᵀ = conj(H)`.
    pub fn operator(&self) -> DMatrix<Complex64> {
        self.m.transpose()
    }

    pub fn scale(&self, factor: f64) -> Self {
        HermitianMatrix {
            m: &self.m * Complex64::new(factor, 0.0),
        }
    }

    pub fn add(&self, other: &HermitianMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::Shape {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(HermitianMatrix {
            m: &self.m + &other.m,
        })
    }

    pub fn add_real_diagonal(&self, d: &[f64]) -> Self {
        let mut m = self.m.clone();
        for (i, &x) in d.iter().enumerate() {
            m[(i, i)] += x;
        }
        HermitianMatrix { m }
    }

    /// Principal submatrix on the given indices.
    pub fn compress(&self, idx: &[usize]) -> Self {
        let n = idx.len();
        HermitianMatrix {
            m: DMatrix::from_fn(n, n, |r, c| self.m[(idx[r], idx[c])]),
        }
    }

    /// Conjugation `P H P*` by a diagonal of unit phases.
    pub fn conjugate_by_phases(&self, phases: &[Complex64]) -> Self {
        let n = self.dim();
        HermitianMatrix {
            m: DMatrix::from_fn(n, n, |r, c| phases[r] * self.m[(r, c)] * phases[c].conj()),
        }
    }

    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        (&self.m - &other.m).iter().fold(0.0, |acc, z| acc.max(z.norm()))
    }
}

fn hermitian_defect(m: &DMatrix<Complex64>) -> f64 {
    let n = m.nrows();
    let mut worst = 0.0f64;
    for r in 0..n {
        for c in r..n {
            worst = worst.max((m[(r, c)] - m[(c, r)].conj()).norm());
        }
    }
    worst
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub value: f64,
    pub vector: DVector<Complex64>,
}

/// All eigenvalues, ascending.
pub fn eigenvalues(h: &HermitianMatrix) -> Vec<f64> {
    let mut ev: Vec<f64> = h.m.clone().symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev
}

/// Full eigendecomposition, eigenpairs sorted by ascending eigenvalue.
pub fn eigen_decomposition(h: &HermitianMatrix) -> Vec<EigenPair> {
    let eig = SymmetricEigen::new(h.m.clone());
    let mut pairs: Vec<EigenPair> = eig
        .eigenvalues
        .iter()
        .enumerate()
        .map(|(i, &value)| EigenPair {
            value,
            vector: eig.eigenvectors.column(i).into_owned(),
        })
        .collect();
    pairs.sort_by(|a, b| a.value.total_cmp(&b.value));
    pairs
}

/// Smallest eigenpair `H v = μ v` with `‖v‖ = 1`.
pub fn smallest_eig(h: &HermitianMatrix) -> Result<EigenPair> {
    let scale = h.max_abs().max(1.0);
    let defect = hermitian_defect(&h.m);
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::Contract(format!(
            "matrix is not Hermitian: max |H - H*| = {defect:e}"
        )));
    }
    if h.dim() == 0 {
        return Err(Error::Contract("empty matrix has no eigenpairs".into()));
    }
    let eig = SymmetricEigen::new(h.m.clone());
    let (imin, &value) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty spectrum");
    let mut vector = eig.eigenvectors.column(imin).into_owned();
    let nrm = vector.norm();
    vector /= Complex64::new(nrm, 0.0);
    Ok(EigenPair { value, vector })
}

/// Spectral norm, i.e. the largest eigenvalue magnitude.
pub fn spectral_norm(h: &HermitianMatrix) -> f64 {
    eigenvalues(h).iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

/// Whether `H - shift·I` is positive definite, decided by a Cholesky
/// attempt (`H = L L*` with strictly positive real pivots).
pub fn exceeds(h: &HermitianMatrix, shift: f64) -> bool {
    let n = h.dim();
    // row-major lower factor so both inner products run over contiguous memory
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut d = h.m[(j, j)].re - shift;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > 0.0) {
            return false;
        }
        let pivot = d.sqrt();
        l[j * n + j] = Complex64::new(pivot, 0.0);
        for i in j + 1..n {
            let mut v = h.m[(i, j)];
            for k in 0..j {
                v -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = v / pivot;
        }
    }
    true
}

#[derive(Debug, Clone, PartialEq)]
pub struct CgOutcome {
    pub solution: DVector<Complex64>,
    pub iterations: usize,
    /// `‖b - M x‖ / ‖b‖` at exit (0 when `b = 0`).
    pub relative_residual: f64,
    pub converged: bool,
}

/// Conjugate gradients for `M x = b` with `M` Hermitian positive definite,
/// stopping once `‖b - M x‖ ≤ tol ‖b‖` or after `max_iter` steps. The
/// residual is recomputed from scratch every `dim` steps.
pub fn conjugate_gradient(
    m: &DMatrix<Complex64>,
    b: &DVector<Complex64>,
    tol: f64,
    max_iter: usize,
) -> CgOutcome {
    let n = b.len();
    let bnorm = b.norm();
    let mut x = DVector::<Complex64>::zeros(n);
    if bnorm == 0.0 {
        return CgOutcome {
            solution: x,
            iterations: 0,
            relative_residual: 0.0,
            converged: true,
        };
    }
    let mut r = b.clone();
    let mut p = r.clone();
    let mut rr = r.norm_squared();
    let mut iterations = 0;
    while iterations < max_iter {
        if rr.sqrt() <= tol * bnorm {
            break;
        }
        let mp = m * &p;
        let pmp = p.dotc(&mp).re;
        if pmp <= 0.0 {
            break;
        }
        let alpha = Complex64::new(rr / pmp, 0.0);
        x.axpy(alpha, &p, Complex64::new(1.0, 0.0));
        iterations += 1;
        if iterations % n.max(1) == 0 {
            r = b - m * &x;
        } else {
            r.axpy(-alpha, &mp, Complex64::new(1.0, 0.0));
        }
        let rr_new = r.norm_squared();
        let beta = Complex64::new(rr_new / rr, 0.0);
        p = &r + &p * beta;
        rr = rr_new;
    }
    let true_res = (b - m * &x).norm() / bnorm;
    CgOutcome {
        solution: x,
        iterations,
        relative_residual: true_res,
        converged: true_res <= tol,
    }
}

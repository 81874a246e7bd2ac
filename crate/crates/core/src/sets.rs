//! Measurable time sets `E ⊂ ℝ` and spatial sets `ω ⊂ M`, represented as
//! finite unions of intervals and axis-aligned cells so that every measure,
//! moment and Gram integral has a closed form.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io::fmt_f64;
use crate::linalg::HermitianMatrix;
use crate::special::exp_integral;
use crate::spectral::{Axis, AxisKind, SpectralModel};

/// Finite union of disjoint intervals, sorted, with positive total length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawTimeSet", deny_unknown_fields)]
pub struct TimeSet {
    intervals: Vec<(f64, f64)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTimeSet {
    intervals: Vec<(f64, f64)>,
}

impl TryFrom<RawTimeSet> for TimeSet {
    type Error = Error;

    fn try_from(raw: RawTimeSet) -> Result<Self> {
        TimeSet::from_intervals(&raw.intervals)
    }
}

impl TimeSet {
    /// Canonical form of a union of intervals: sorted, overlaps merged.
    pub fn from_intervals(intervals: &[(f64, f64)]) -> Result<Self> {
        for &(a, b) in intervals {
            if !(a.is_finite() && b.is_finite() && a < b) {
                return Err(Error::config(format!("interval ({a}, {b}) must satisfy a < b")));
            }
        }
        let mut sorted = intervals.to_vec();
        sorted.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.total_cmp(&y.1)));
        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(sorted.len());
        for (a, b) in sorted {
            match merged.last_mut() {
                Some(last) if a < last.1 => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        if merged.is_empty() {
            return Err(Error::empty("time set has no intervals"));
        }
        Ok(TimeSet { intervals: merged })
    }

    pub fn interval(a: f64, b: f64) -> Result<Self> {
        Self::from_intervals(&[(a, b)])
    }

    /// Smith–Volterra–Cantor set: stage `k` removes an open middle piece of
    /// length `ratio^k · |base|` from each of the `2^{k-1}` surviving intervals.
    pub fn fat_cantor(depth: u32, ratio: f64, base: (f64, f64)) -> Result<Self> {
        let (lo, hi) = base;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(Error::config("fat Cantor base must be a proper interval"));
        }
        if !(ratio > 0.0 && ratio < 0.5) {
            return Err(Error::config(format!("fat Cantor ratio {ratio} outside (0, 1/2)")));
        }
        if depth > 40 {
            return Err(Error::config("fat Cantor depth above 40 is not representable"));
        }
        if fat_cantor_removed(depth, ratio) >= 1.0 {
            return Err(Error::config(format!(
                "depth {depth} with ratio {ratio} removes the entire base"
            )));
        }
        let len = hi - lo;
        let mut intervals = vec![(lo, hi)];
        let mut gap = len;
        for _ in 1..=depth {
            gap *= ratio;
            let mut next = Vec::with_capacity(2 * intervals.len());
            for (a, b) in intervals {
                let mid = 0.5 * (a + b);
                next.push((a, mid - 0.5 * gap));
                next.push((mid + 0.5 * gap, b));
            }
            intervals = next;
        }
        Ok(TimeSet { intervals })
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|(a, b)| b - a).sum()
    }

    pub fn start(&self) -> f64 {
        self.intervals[0].0
    }

    pub fn end(&self) -> f64 {
        self.intervals[self.intervals.len() - 1].1
    }

    /// Membership in the closure of the set.
    pub fn contains(&self, s: f64) -> bool {
        let i = self.intervals.partition_point(|&(_, b)| b < s);
        i < self.intervals.len() && self.intervals[i].0 <= s
    }

    pub fn shifted(&self, c: f64) -> Self {
        TimeSet {
            intervals: self.intervals.iter().map(|&(a, b)| (a + c, b + c)).collect(),
        }
    }

    pub fn is_within(&self, lo: f64, hi: f64) -> bool {
        self.start() >= lo && self.end() <= hi
    }

    /// `T̂_E(θ) = ∫_E e^{-iθt} dt`.
    pub fn moment(&self, theta: f64) -> Complex64 {
        self.intervals
            .iter()
            .map(|&(a, b)| exp_integral(a, b, theta))
            .sum()
    }

    /// `|E ∩ [lo, hi]|` by interval arithmetic.
    pub fn measure_within(&self, lo: f64, hi: f64) -> f64 {
        let start = self.intervals.partition_point(|&(_, b)| b <= lo);
        self.intervals[start..]
            .iter()
            .take_while(|&&(a, _)| a < hi)
            .map(|&(a, b)| (b.min(hi) - a.max(lo)).max(0.0))
            .sum()
    }

    /// `f_n(s) = 1 - 2^{n-1} |E ∩ [s - 2^{-n}, s + 2^{-n}]|`, clamped to `[0, 1]`.
    pub fn density(&self, n: u32, s: f64) -> f64 {
        let half = (-(n as f64)).exp2();
        let inside = self.measure_within(s - half, s + half);
        (1.0 - inside / (2.0 * half)).clamp(0.0, 1.0)
    }

    pub fn density_profile(&self, n: u32, samples: &[f64]) -> Result<DensityProfile> {
        if n < 1 {
            return Err(Error::config("density depth n must be at least 1"));
        }
        Ok(DensityProfile {
            n,
            samples: samples.iter().map(|&s| (s, self.density(n, s))).collect(),
        })
    }

    /// Grid points of `E` (step `2^{-(n+3)}`, anchored at the left end of
    /// `E`) where `f_n(s) ≤ ε`. An empty result is a valid answer.
    pub fn egorov_points(&self, n: u32, eps: f64) -> Result<Vec<f64>> {
        if n < 1 {
            return Err(Error::config("density depth n must be at least 1"));
        }
        if !(eps > 0.0 && eps < 1.0) {
            return Err(Error::config(format!("epsilon {eps} outside (0, 1)")));
        }
        let step = (-((n + 3) as f64)).exp2();
        let lo = self.start();
        let count = ((self.end() - lo) / step).floor() as usize;
        Ok((0..=count)
            .map(|i| lo + i as f64 * step)
            .filter(|&s| self.contains(s) && self.density(n, s) <= eps)
            .collect())
    }
}

/// Total relative length removed by the first `depth` fat Cantor stages.
pub fn fat_cantor_removed(depth: u32, ratio: f64) -> f64 {
    (1..=depth)
        .map(|k| (k as f64 - 1.0).exp2() * ratio.powi(k as i32))
        .sum()
}

/// Samples of the density function `f_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub n: u32,
    pub samples: Vec<(f64, f64)>,
}

impl DensityProfile {
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "s,f_n")?;
        for &(s, f) in &self.samples {
            writeln!(out, "{},{}", fmt_f64(s), fmt_f64(f))?;
        }
        Ok(())
    }
}

/// A box: one interval per coordinate.
pub type Cell = Vec<(f64, f64)>;

/// Spatial observation set inside a model domain.
///
/// JSON: `{"cells": [[[x0,x1],[y0,y1]], ...]}` for a union of cells or
/// `{"factors": [[[a,b], ...], [[c,d], ...]]}` for a product of per-axis
/// interval unions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum SpatialSet {
    Cells(Vec<Cell>),
    Factors(Vec<Vec<(f64, f64)>>),
}

impl SpatialSet {
    /// One-dimensional union of intervals.
    pub fn intervals(list: &[(f64, f64)]) -> Self {
        SpatialSet::Cells(list.iter().map(|&iv| vec![iv]).collect())
    }

    pub fn full(model: &SpectralModel) -> Self {
        SpatialSet::Cells(vec![model.axes().iter().map(|a| (0.0, a.length)).collect()])
    }

    /// Strip `a < x < b` spanning the whole second coordinate.
    pub fn strip(model: &SpectralModel, a: f64, b: f64) -> Result<Self> {
        let axes = model.axes();
        if axes.len() != 2 {
            return Err(Error::config("a strip needs a two-dimensional model"));
        }
        Ok(SpatialSet::Factors(vec![vec![(a, b)], vec![(0.0, axes[1].length)]]))
    }

    /// Seeded union of `count` disjoint intervals of total length `measure`
    /// on a one-dimensional model. The domain is split into `count` equal
    /// slots and each slot receives one interval of random length and
    /// random offset.
    pub fn random_cells(model: &SpectralModel, count: usize, measure: f64, seed: u64) -> Result<Self> {
        let axes = model.axes();
        if axes.len() != 1 {
            return Err(Error::config("random cell unions are only generated on 1-D models"));
        }
        if count == 0 || !(measure > 0.0) {
            return Err(Error::empty("random cell union needs positive count and measure"));
        }
        let slot = axes[0].length / count as f64;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weights: Vec<f64> = (0..count).map(|_| 0.5 + rng.random::<f64>()).collect();
        let total: f64 = weights.iter().sum();
        let lengths: Vec<f64> = weights.iter().map(|w| measure * w / total).collect();
        if lengths.iter().any(|&l| l >= slot) {
            return Err(Error::config(format!(
                "measure {measure} too large for {count} cells in a domain of length {}",
                axes[0].length
            )));
        }
        let cells = lengths
            .iter()
            .enumerate()
            .map(|(i, &l)| {
                let a = i as f64 * slot + rng.random::<f64>() * (slot - l);
                vec![(a, a + l)]
            })
            .collect();
        Ok(SpatialSet::Cells(cells))
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            SpatialSet::Cells(cells) => cells.first().map(Vec::len),
            SpatialSet::Factors(f) => Some(f.len()),
        }
    }

    pub fn measure(&self) -> f64 {
        match self {
            SpatialSet::Cells(cells) => cells
                .iter()
                .map(|c| c.iter().map(|(a, b)| b - a).product::<f64>())
                .sum(),
            SpatialSet::Factors(f) => f
                .iter()
                .map(|ivs| ivs.iter().map(|(a, b)| b - a).sum::<f64>())
                .product(),
        }
    }

    /// Checks dimension, domain containment, disjointness and positive measure.
    pub fn validate(&self, model: &SpectralModel) -> Result<()> {
        let axes = model.axes();
        let inside = |iv: &(f64, f64), ax: &Axis| {
            let tol = 1e-12 * ax.length;
            iv.0.is_finite() && iv.1.is_finite() && iv.0 >= -tol && iv.1 <= ax.length + tol
        };
        match self {
            SpatialSet::Cells(cells) => {
                if cells.is_empty() {
                    return Err(Error::empty("spatial set has no cells"));
                }
                for cell in cells {
                    if cell.len() != axes.len() {
                        return Err(Error::config(format!(
                            "cell has {} coordinates, model has {}",
                            cell.len(),
                            axes.len()
                        )));
                    }
                    for (iv, ax) in cell.iter().zip(axes) {
                        if !(iv.0 <= iv.1) || !inside(iv, ax) {
                            return Err(Error::Range {
                                point: vec![iv.0, iv.1],
                            });
                        }
                    }
                }
                for (i, p) in cells.iter().enumerate() {
                    for q in &cells[i + 1..] {
                        let overlap: f64 = p
                            .iter()
                            .zip(q)
                            .map(|(x, y)| (x.1.min(y.1) - x.0.max(y.0)).max(0.0))
                            .product();
                        if overlap > 0.0 {
                            return Err(Error::config("spatial cells overlap"));
                        }
                    }
                }
            }
            SpatialSet::Factors(factors) => {
                if factors.len() != axes.len() {
                    return Err(Error::config(format!(
                        "product set has {} factors, model has {} coordinates",
                        factors.len(),
                        axes.len()
                    )));
                }
                for (ivs, ax) in factors.iter().zip(axes) {
                    let mut sorted = ivs.clone();
                    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
                    for iv in &sorted {
                        if !(iv.0 <= iv.1) || !inside(iv, ax) {
                            return Err(Error::Range {
                                point: vec![iv.0, iv.1],
                            });
                        }
                    }
                    if sorted.windows(2).any(|w| w[1].0 < w[0].1) {
                        return Err(Error::config("product factor intervals overlap"));
                    }
                }
            }
        }
        if !(self.measure() > 0.0) {
            return Err(Error::empty("spatial set has zero measure"));
        }
        Ok(())
    }
}

/// Position of index `j` in `axis.indices(cutoff)`.
pub(crate) fn axis_position(axis: &Axis, cutoff: usize, j: i64) -> usize {
    match axis.kind {
        AxisKind::Periodic => (j + cutoff as i64) as usize,
        AxisKind::Dirichlet => (j - 1) as usize,
        AxisKind::Neumann => j as usize,
    }
}

/// One-axis Gram matrix `∫_{∪ I} e_j conj(e_k)` over the axis' truncated indices.
pub fn axis_gramian(axis: &Axis, cutoff: usize, intervals: &[(f64, f64)]) -> DMatrix<Complex64> {
    let idx = axis.indices(cutoff);
    let n = idx.len();
    DMatrix::from_fn(n, n, |r, c| {
        intervals
            .iter()
            .map(|&(a, b)| axis.interval_gram(a, b, idx[r], idx[c]))
            .sum()
    })
}

/// `G_ω[j,k] = ∫_ω e_j conj(e_k)` in closed form.
pub fn spatial_gramian(model: &SpectralModel, omega: &SpatialSet) -> Result<HermitianMatrix> {
    omega.validate(model)?;
    let axes = model.axes();
    let cutoff = model.cutoff();
    // each term is a product of per-axis Gram matrices
    let terms: Vec<Vec<DMatrix<Complex64>>> = match omega {
        SpatialSet::Cells(cells) => cells
            .iter()
            .map(|cell| {
                cell.iter()
                    .zip(axes)
                    .map(|(&iv, ax)| axis_gramian(ax, cutoff, &[iv]))
                    .collect()
            })
            .collect(),
        SpatialSet::Factors(factors) => vec![factors
            .iter()
            .zip(axes)
            .map(|(ivs, ax)| axis_gramian(ax, cutoff, ivs))
            .collect()],
    };
    let pos: Vec<Vec<usize>> = model
        .modes()
        .iter()
        .map(|m| {
            m.index
                .iter()
                .zip(axes)
                .map(|(&j, ax)| axis_position(ax, cutoff, j))
                .collect()
        })
        .collect();
    let n = model.dim();
    let rows: Vec<Vec<Complex64>> = (0..n)
        .into_par_iter()
        .map(|r| {
            (0..n)
                .map(|c| {
                    terms
                        .iter()
                        .map(|term| {
                            term.iter()
                                .enumerate()
                                .map(|(a, mat)| mat[(pos[r][a], pos[c][a])])
                                .product::<Complex64>()
                        })
                        .sum()
                })
                .collect()
        })
        .collect();
    let m = DMatrix::from_fn(n, n, |r, c| rows[r][c]);
    Ok(HermitianMatrix::symmetrized(m))
}

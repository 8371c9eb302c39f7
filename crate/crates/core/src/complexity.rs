//! Rademacher and Gaussian averages of finite point sets.
//!
//! ```text
//! R(Y) = E sup_{y∈Y} Σ εᵢ yᵢ     εᵢ uniform on {−1, 1}
//! G(Y) = E sup_{y∈Y} Σ γᵢ yᵢ     γᵢ standard normal
//! ```
//!
//! `R` is computed exactly by enumerating all `2^n` sign vectors for
//! `n ≤ 20`. Both averages have Monte Carlo estimators that draw coefficient
//! vectors in antithetic pairs `(w, −w)`: each pair contributes
//! `(max_y ⟨w,y⟩ − min_y ⟨w,y⟩)/2`, the pair means are i.i.d., and the
//! standard error is computed over pairs. Pairing makes the estimators exactly
//! translation invariant, since `⟨w,c⟩` cancels within each pair.
//!
//! Draws are processed in fixed batches of [`PAIRS_PER_BATCH`] pairs, batch
//! `b` reading the stream `(seed, tag, b)`, and batch moments are merged in
//! batch order. Coefficient streams depend only on `n`, so two point sets of
//! the same dimension estimated under one seed see the same draws.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::numeric::{CompensatedSum, RunningStats};
use crate::points::PointSet;
use crate::rng::{self, StreamRng, StreamTag};

/// Largest dimension for exact sign enumeration.
pub const EXACT_DIMENSION_CAP: usize = 20;

/// Smallest accepted Monte Carlo draw count.
pub const MIN_DRAWS: usize = 100;

pub const PAIRS_PER_BATCH: usize = 2048;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ComplexityKind {
    Rademacher,
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum EstimateMethod {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ComplexityEstimate {
    pub kind: ComplexityKind,
    pub method: EstimateMethod,
    pub value: f64,
    /// Number of coefficient vectors drawn (Monte Carlo only).
    pub draws: Option<u64>,
    pub stderr: Option<f64>,
}

impl ComplexityEstimate {
    /// Standard error, zero for exact values.
    pub fn stderr_or_zero(&self) -> f64 {
        self.stderr.unwrap_or(0.0)
    }
}

/// Exact `R(Y)` by enumerating all sign vectors.
///
/// Coordinates are split into a low and a high half; partial inner products
/// for each half-pattern are tabulated once, so each of the `2^n` patterns
/// costs one addition per row.
pub fn rademacher_exact(y: &PointSet) -> Result<ComplexityEstimate> {
    check_nonempty(y)?;
    let n = y.dim();
    if n > EXACT_DIMENSION_CAP {
        return Err(Error::resource(format!(
            "exact Rademacher enumeration is capped at n = {EXACT_DIMENSION_CAP}, got n = {n}"
        )));
    }
    let rows = y.len();
    let lo_bits = n / 2;
    let hi_bits = n - lo_bits;
    let half_table = |offset: usize, bits: usize| -> Vec<f64> {
        let mut table = vec![0.0; (1usize << bits) * rows];
        for pattern in 0..(1usize << bits) {
            for (j, row) in y.rows().enumerate() {
                let mut acc = 0.0;
                for i in 0..bits {
                    let v = row[offset + i];
                    acc += if (pattern >> i) & 1 == 1 { v } else { -v };
                }
                table[pattern * rows + j] = acc;
            }
        }
        table
    };
    let lo = half_table(0, lo_bits);
    let hi = half_table(lo_bits, hi_bits);

    let mut total = CompensatedSum::new();
    for ph in 0..(1usize << hi_bits) {
        let hrow = &hi[ph * rows..(ph + 1) * rows];
        for pl in 0..(1usize << lo_bits) {
            let lrow = &lo[pl * rows..(pl + 1) * rows];
            let best = lrow.iter().zip(hrow).map(|(a, b)| a + b).fold(f64::NEG_INFINITY, f64::max);
            total.add(best);
        }
    }
    Ok(ComplexityEstimate {
        kind: ComplexityKind::Rademacher,
        method: EstimateMethod::Exact,
        value: total.value() / (1u64 << n) as f64,
        draws: None,
        stderr: None,
    })
}

pub fn rademacher_mc<E: Executor>(y: &PointSet, draws: usize, seed: u64, exec: &E) -> Result<ComplexityEstimate> {
    antithetic_estimate(y, draws, seed, ComplexityKind::Rademacher, exec)
}

pub fn gaussian_mc<E: Executor>(y: &PointSet, draws: usize, seed: u64, exec: &E) -> Result<ComplexityEstimate> {
    antithetic_estimate(y, draws, seed, ComplexityKind::Gaussian, exec)
}

/// `R(Y)` exactly when `n ≤ 20`, otherwise by Monte Carlo.
pub fn rademacher_auto<E: Executor>(y: &PointSet, draws: usize, seed: u64, exec: &E) -> Result<ComplexityEstimate> {
    if y.dim() <= EXACT_DIMENSION_CAP {
        rademacher_exact(y)
    } else {
        rademacher_mc(y, draws, seed, exec)
    }
}

fn check_nonempty(y: &PointSet) -> Result<()> {
    if y.is_empty() || y.dim() == 0 {
        Err(Error::domain("complexity averages need a nonempty point set"))
    } else {
        Ok(())
    }
}

fn antithetic_estimate<E: Executor>(
    y: &PointSet,
    draws: usize,
    seed: u64,
    kind: ComplexityKind,
    exec: &E,
) -> Result<ComplexityEstimate> {
    check_nonempty(y)?;
    if draws < MIN_DRAWS {
        return Err(Error::domain(format!("Monte Carlo needs at least {MIN_DRAWS} draws, got {draws}")));
    }
    let pairs = draws.div_ceil(2);
    let batches = pairs.div_ceil(PAIRS_PER_BATCH);
    let (tag, fill): (StreamTag, fn(&mut StreamRng, &mut [f64])) = match kind {
        ComplexityKind::Rademacher => (StreamTag::RADEMACHER, |r, w| rng::fill_signs(r, w)),
        ComplexityKind::Gaussian => (StreamTag::GAUSSIAN, |r, w| rng::fill_normals(r, w)),
    };
    let partials = exec.map_indexed(batches, |b| {
        let size = PAIRS_PER_BATCH.min(pairs - b * PAIRS_PER_BATCH);
        let mut stream = rng::stream(seed, tag, b as u64);
        let mut w = vec![0.0; y.dim()];
        let mut stats = RunningStats::new();
        for _ in 0..size {
            fill(&mut stream, &mut w);
            let (lo, hi) = extreme_projections(y, &w);
            stats.push(0.5 * (hi - lo));
        }
        stats
    });
    let mut stats = RunningStats::new();
    for p in &partials {
        stats.merge(p);
    }
    Ok(ComplexityEstimate {
        kind,
        method: EstimateMethod::MonteCarlo,
        value: stats.mean(),
        draws: Some(2 * pairs as u64),
        stderr: Some(stats.stderr()),
    })
}

/// `(min_y ⟨w,y⟩, max_y ⟨w,y⟩)`.
#[inline]
fn extreme_projections(y: &PointSet, w: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for row in y.rows() {
        let d: f64 = row.iter().zip(w).map(|(a, b)| a * b).sum();
        lo = lo.min(d);
        hi = hi.max(d);
    }
    (lo, hi)
}

/// Both comparison inequalities between `R` and `G` on one point set.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ComparisonReport {
    pub rademacher: ComplexityEstimate,
    pub gaussian: ComplexityEstimate,
    /// `√(π/2)·G − R`.
    pub upper_slack: f64,
    /// `3·ln(n)·R − G`.
    pub lower_slack: f64,
    /// Four combined standard errors of `upper_slack`.
    pub upper_tolerance: f64,
    /// Four combined standard errors of `lower_slack`.
    pub lower_tolerance: f64,
    pub upper_violated: bool,
    pub lower_violated: bool,
}

impl ComparisonReport {
    pub fn violated(&self) -> bool {
        self.upper_violated || self.lower_violated
    }
}

/// Checks `R ≤ √(π/2)·G` and `G ≤ 3 ln(n)·R` with `R` exact where enumerable
/// and `G` by Monte Carlo.
pub fn comparison_report<E: Executor>(y: &PointSet, draws: usize, seed: u64, exec: &E) -> Result<ComparisonReport> {
    let n = y.dim();
    if n < 2 {
        return Err(Error::domain("comparison inequalities need n >= 2"));
    }
    let r = rademacher_auto(y, draws, seed, exec)?;
    let g = gaussian_mc(y, draws, seed, exec)?;
    let root = libm::sqrt(core::f64::consts::FRAC_PI_2);
    let log_factor = 3.0 * libm::log(n as f64);
    let (sr, sg) = (r.stderr_or_zero(), g.stderr_or_zero());
    let upper_slack = root * g.value - r.value;
    let lower_slack = log_factor * r.value - g.value;
    let upper_tolerance = 4.0 * libm::hypot(sr, root * sg);
    let lower_tolerance = 4.0 * libm::hypot(log_factor * sr, sg);
    Ok(ComparisonReport {
        rademacher: r,
        gaussian: g,
        upper_slack,
        lower_slack,
        upper_tolerance,
        lower_tolerance,
        upper_violated: upper_slack < -upper_tolerance,
        lower_violated: lower_slack < -lower_tolerance,
    })
}

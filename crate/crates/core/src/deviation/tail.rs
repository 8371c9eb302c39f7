use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::function_class::{ProductLaw, SampleSpace};
use crate::rng::{self, StreamTag};

/// Largest grid of `x` values searched exhaustively for `‖Δ²‖∞`.
pub const DELTA_SEARCH_CAP: u64 = 1_000_000;

const REPLICAS_PER_BATCH: usize = 4096;

/// `Δ²(x) = Σ_k (max_y F(x with x_k=y) − min_y F(x with x_k=y))²` over a finite space.
pub fn delta_squared<F: Fn(&[f64]) -> f64>(space: &SampleSpace, func: F, x: &[f64]) -> Result<f64> {
    let support = finite_support(space)?;
    for &xi in x {
        if !space.contains(xi) {
            return Err(Error::domain(format!("coordinate {xi} lies outside the sample space")));
        }
    }
    let mut point = x.to_vec();
    Ok(delta_squared_at(support, &func, &mut point))
}

fn finite_support(space: &SampleSpace) -> Result<&[f64]> {
    space.support().ok_or_else(|| Error::domain("bounded differences are enumerated on finite sample spaces only"))
}

fn delta_squared_at<F: Fn(&[f64]) -> f64>(support: &[f64], func: &F, point: &mut [f64]) -> f64 {
    let mut total = 0.0;
    for k in 0..point.len() {
        let orig = point[k];
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for &y in support {
            point[k] = y;
            let v = func(point);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        point[k] = orig;
        total += (hi - lo) * (hi - lo);
    }
    total
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaSearch {
    /// Every point of `support^n`, up to [`DELTA_SEARCH_CAP`].
    Exhaustive,
    /// `count` uniform points of `support^n`; the result is a lower bound.
    Sampled { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DeltaSquaredSup {
    pub value: f64,
    pub lower_bound: bool,
    pub points_examined: u64,
}

/// `‖Δ²‖∞` over `support^n`.
pub fn delta_squared_sup<F: Fn(&[f64]) -> f64>(
    space: &SampleSpace,
    n: usize,
    func: F,
    search: DeltaSearch,
) -> Result<DeltaSquaredSup> {
    let support = finite_support(space)?;
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    match search {
        DeltaSearch::Exhaustive => {
            let total = u32::try_from(n)
                .ok()
                .and_then(|e| (support.len() as u64).checked_pow(e))
                .filter(|&t| t <= DELTA_SEARCH_CAP)
                .ok_or_else(|| {
                    Error::resource(format!(
                        "{}^{n} points exceed the exhaustive search cap of {DELTA_SEARCH_CAP}; request sampling",
                        support.len()
                    ))
                })?;
            let mut idx = vec![0usize; n];
            let mut point = vec![support[0]; n];
            let mut best: f64 = 0.0;
            for _ in 0..total {
                best = best.max(delta_squared_at(support, &func, &mut point));
                for (d, p) in idx.iter_mut().zip(point.iter_mut()) {
                    *d += 1;
                    if *d < support.len() {
                        *p = support[*d];
                        break;
                    }
                    *d = 0;
                    *p = support[0];
                }
            }
            Ok(DeltaSquaredSup { value: best, lower_bound: false, points_examined: total })
        }
        DeltaSearch::Sampled { count, seed } => {
            if count == 0 {
                return Err(Error::domain("sampled search needs at least one point"));
            }
            let mut point = vec![0.0; n];
            let mut best: f64 = 0.0;
            for i in 0..count {
                let mut stream = rng::stream(seed, StreamTag::DELTA_SEARCH, i as u64);
                for p in point.iter_mut() {
                    let j = ((rng::uniform(&mut stream) * support.len() as f64) as usize).min(support.len() - 1);
                    *p = support[j];
                }
                best = best.max(delta_squared_at(support, &func, &mut point));
            }
            Ok(DeltaSquaredSup { value: best, lower_bound: true, points_examined: count as u64 })
        }
    }
}

/// `n·L²`, the bounded-difference constant implied by a Lipschitz constant
/// `L` on `[0,1]^n`.
pub fn lipschitz_delta_squared_bound(n: usize, lipschitz: f64) -> f64 {
    n as f64 * lipschitz * lipschitz
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TailRow {
    pub t: f64,
    pub exceedances: u64,
    pub empirical: f64,
    /// `exp(−2t²/‖Δ²‖∞)`, capped at 1.
    pub bound: f64,
    /// Binomial standard error at the bound.
    pub stderr: f64,
    /// Empirical tail above the bound by more than four standard errors.
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct TailTable {
    pub expectation: f64,
    pub delta_sup: f64,
    pub replicas: u64,
    pub rows: Vec<TailRow>,
}

impl TailTable {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.violated).count()
    }
}

pub(crate) fn gaussian_type_bound(exponent_numerator: f64, denominator: f64, threshold: f64) -> f64 {
    if threshold <= 0.0 {
        1.0
    } else if denominator <= 0.0 {
        0.0
    } else {
        libm::exp(-exponent_numerator * threshold * threshold / denominator).min(1.0)
    }
}

/// Empirical `Pr{F(X) − E F > t}` against `exp(−2t²/‖Δ²‖∞)`.
///
/// Replicas run in batches of 4096, batch `b` reading stream `(seed, TAIL, b)`.
#[allow(clippy::too_many_arguments)]
pub fn tail_simulation<F, E>(
    law: &ProductLaw,
    func: F,
    expectation: f64,
    delta_sup: f64,
    t_grid: &[f64],
    replicas: usize,
    seed: u64,
    exec: &E,
) -> Result<TailTable>
where
    F: Fn(&[f64]) -> f64 + Sync,
    E: Executor,
{
    if replicas == 0 {
        return Err(Error::domain("tail simulation needs at least one replica"));
    }
    if !(expectation.is_finite() && delta_sup.is_finite() && delta_sup >= 0.0) {
        return Err(Error::domain("expectation and delta bound must be finite"));
    }
    if t_grid.iter().any(|t| !t.is_finite()) {
        return Err(Error::domain("t grid must be finite"));
    }
    let batches = replicas.div_ceil(REPLICAS_PER_BATCH);
    let partials = exec.map_indexed(batches, |b| {
        let size = REPLICAS_PER_BATCH.min(replicas - b * REPLICAS_PER_BATCH);
        let mut stream = rng::stream(seed, StreamTag::TAIL, b as u64);
        let mut counts = vec![0u64; t_grid.len()];
        for _ in 0..size {
            let x = law.sample_from(&mut stream);
            let dev = func(x.values()) - expectation;
            for (c, &t) in counts.iter_mut().zip(t_grid) {
                if dev > t {
                    *c += 1;
                }
            }
        }
        counts
    });
    let mut counts = vec![0u64; t_grid.len()];
    for part in &partials {
        for (acc, c) in counts.iter_mut().zip(part) {
            *acc += c;
        }
    }
    let rows = t_grid
        .iter()
        .zip(&counts)
        .map(|(&t, &exceedances)| {
            let bound = gaussian_type_bound(2.0, delta_sup, t);
            let empirical = exceedances as f64 / replicas as f64;
            let allowance = super::binomial_allowance(bound, replicas as u64);
            TailRow {
                t,
                exceedances,
                empirical,
                bound,
                stderr: allowance / 4.0,
                violated: empirical > bound + allowance,
            }
        })
        .collect();
    Ok(TailTable { expectation, delta_sup, replicas: replicas as u64, rows })
}

//! The coordinate-Lipschitz constant `L` and mixed-derivative constant `M`.
//!
//! ```text
//! L ≥ max_k ‖∂_k Φ‖∞
//! M ≥ √( Σ_k ‖ Σ_{l≠k} (∂_{lk} Φ)² ‖∞ )
//! ```
//!
//! Three routes produce them: closed forms carried by the statistic, bounds
//! derived from a U-statistic kernel's declared derivative suprema, and a
//! sampled finite-difference estimate. Only the first two are upper bounds;
//! the numeric route under-estimates suprema and is labelled accordingly.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::rng::{self, StreamTag};
use crate::statistics::{Kernel, Statistic};

/// Default central-difference step.
pub const DEFAULT_FD_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ConstantsMethod {
    ClosedForm,
    DerivedBound,
    NumericEstimate,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ConstantsReport {
    /// `L`.
    pub lipschitz: f64,
    /// `M`, in the per-coordinate form that the bound needs.
    pub mixed: f64,
    pub method: ConstantsMethod,
    /// Per-coordinate `‖∂_k Φ‖∞` values (or bounds).
    pub per_coordinate_lipschitz: Vec<f64>,
    /// Per-coordinate `‖Σ_{l≠k} (∂_{lk} Φ)²‖∞` values (or bounds).
    pub per_coordinate_mixed: Vec<f64>,
    /// `√(Σ_{k≠l} ‖∂_{lk} Φ‖∞²)`, the coarser sufficient condition.
    pub coarse_mixed: Option<f64>,
    /// `√‖Σ_{k≠l} (∂_{lk} Φ)²‖∞`. Reported only; never used for bounds.
    pub relaxed_mixed: Option<f64>,
    /// True when the values are sampled suprema, hence lower bounds.
    pub lower_bound: bool,
    pub probes: Option<usize>,
    pub fd_step: Option<f64>,
}

impl ConstantsReport {
    /// Whether the report may feed bound assembly without an override.
    pub fn is_upper_bound(&self) -> bool {
        !self.lower_bound
    }
}

/// Constants from the statistic's own closed form.
pub fn closed_form_constants<S: Statistic + ?Sized>(stat: &S) -> Result<ConstantsReport> {
    let c = stat
        .closed_form_constants()
        .ok_or_else(|| Error::unsupported(format!("statistic {} has no closed-form constants", stat.name())))?;
    let n = stat.arity();
    let per_mixed = c.mixed * c.mixed / n as f64;
    Ok(ConstantsReport {
        lipschitz: c.lipschitz,
        mixed: c.mixed,
        method: ConstantsMethod::ClosedForm,
        per_coordinate_lipschitz: vec![c.lipschitz; n],
        per_coordinate_mixed: vec![per_mixed; n],
        coarse_mixed: None,
        relaxed_mixed: None,
        lower_bound: false,
        probes: None,
        fd_step: None,
    })
}

/// Bounds for an order-`m` U-statistic on `n` points:
///
/// ```text
/// L = (m/n)·‖∂₁κ‖∞
/// |∂_{lk} Φ| ≤ m(m−1)/(n(n−1))·‖∂₁₂κ‖∞  for every l ≠ k
/// M = √(n(n−1))·that entry bound = m(m−1)/√(n(n−1))·‖∂₁₂κ‖∞
/// ```
///
/// The last line is the coarse sufficient condition applied to a uniform
/// entry bound, so it dominates the per-coordinate form.
pub fn u_statistic_constant_bounds(n: usize, kernel: &Kernel) -> Result<ConstantsReport> {
    let m = kernel.order();
    if m == 0 || m > n {
        return Err(Error::domain(format!("kernel order {m} must lie in 1..={n}")));
    }
    let sup_d1 = kernel
        .sup_d1()
        .ok_or_else(|| Error::unsupported("kernel declares no bound on its first partial derivative"))?;
    let lipschitz = m as f64 * sup_d1 / n as f64;
    let (mixed, entry) = if m == 1 {
        (0.0, 0.0)
    } else {
        let sup_d12 = kernel
            .sup_d12()
            .ok_or_else(|| Error::unsupported("kernel declares no bound on its mixed partial derivative"))?;
        let pairs = (n * (n - 1)) as f64;
        let weight = (m * (m - 1)) as f64;
        (weight * sup_d12 / libm::sqrt(pairs), weight * sup_d12 / pairs)
    };
    let per_mixed = (n - 1) as f64 * entry * entry;
    Ok(ConstantsReport {
        lipschitz,
        mixed,
        method: ConstantsMethod::DerivedBound,
        per_coordinate_lipschitz: vec![lipschitz; n],
        per_coordinate_mixed: vec![per_mixed; n],
        coarse_mixed: Some(mixed),
        relaxed_mixed: None,
        lower_bound: false,
        probes: None,
        fd_step: None,
    })
}

/// Central difference `∂_k Φ(s)` with step `h`; `s` is restored on return.
pub fn fd_partial<S: Statistic + ?Sized>(stat: &S, s: &mut [f64], k: usize, h: f64) -> f64 {
    let orig = s[k];
    s[k] = orig + h;
    let up = stat.evaluate(s);
    s[k] = orig - h;
    let down = stat.evaluate(s);
    s[k] = orig;
    (up - down) / (2.0 * h)
}

/// Central difference `∂_{lk} Φ(s)` for `l ≠ k`; `s` is restored on return.
pub fn fd_mixed<S: Statistic + ?Sized>(stat: &S, s: &mut [f64], l: usize, k: usize, h: f64) -> f64 {
    let (ol, ok) = (s[l], s[k]);
    let mut eval = |dl: f64, dk: f64| {
        s[l] = ol + dl;
        s[k] = ok + dk;
        stat.evaluate(s)
    };
    let pp = eval(h, h);
    let pm = eval(h, -h);
    let mp = eval(-h, h);
    let mm = eval(-h, -h);
    s[l] = ol;
    s[k] = ok;
    ((pp - pm) - (mp - mm)) / (4.0 * h * h)
}

/// Sampled finite-difference estimate of `(L, M)`.
///
/// Probe `p` is drawn uniformly from `[0,1]^n` on the stream
/// `(seed, PROBE_POINTS, p)`. For each `k`, the probe maximizing `|∂_k Φ|`
/// is then polished by one coordinate sweep that moves each entry to 0 or 1
/// when that increases `|∂_k Φ|`; for `Φ` of degree at most two this reaches
/// the vertex supremum. The report carries `lower_bound = true`.
pub fn estimate_constants_numeric<S: Statistic + ?Sized>(
    stat: &S,
    probes: usize,
    fd_step: f64,
    seed: u64,
) -> Result<ConstantsReport> {
    if probes == 0 {
        return Err(Error::domain("numeric constants need at least one probe"));
    }
    if !(1e-7..=1e-2).contains(&fd_step) {
        return Err(Error::domain(format!("finite-difference step {fd_step} outside [1e-7, 1e-2]")));
    }
    let n = stat.arity();
    let mut lip = vec![0.0f64; n];
    let mut row_max = vec![0.0f64; n];
    let mut entry_max = vec![0.0f64; n * n];
    let mut relaxed = 0.0f64;
    let mut s = vec![0.0; n];
    let mut row = vec![0.0; n];
    let mut best = vec![0.0; n * n];

    for p in 0..probes {
        let mut stream = rng::stream(seed, StreamTag::PROBE_POINTS, p as u64);
        for v in s.iter_mut() {
            *v = rng::uniform(&mut stream);
        }
        let non_finite =
            |what: &str, s: &[f64]| Error::Numeric(format!("non-finite {what} at probe {p}, coordinates {s:?}"));
        for (k, lip_k) in lip.iter_mut().enumerate() {
            let d = fd_partial(stat, &mut s, k, fd_step);
            if !d.is_finite() {
                return Err(non_finite("first partial", &s));
            }
            if libm::fabs(d) > *lip_k || p == 0 {
                *lip_k = libm::fabs(d);
                best[k * n..(k + 1) * n].copy_from_slice(&s);
            }
        }
        row.iter_mut().for_each(|r| *r = 0.0);
        for l in 0..n {
            for k in l + 1..n {
                let d = fd_mixed(stat, &mut s, l, k, fd_step);
                if !d.is_finite() {
                    return Err(non_finite("mixed partial", &s));
                }
                let sq = d * d;
                row[k] += sq;
                row[l] += sq;
                entry_max[l * n + k] = entry_max[l * n + k].max(sq);
            }
        }
        for k in 0..n {
            row_max[k] = row_max[k].max(row[k]);
        }
        relaxed = relaxed.max(row.iter().sum());
    }

    for (k, lip_k) in lip.iter_mut().enumerate() {
        let point = &mut best[k * n..(k + 1) * n];
        for j in 0..n {
            let mut kept = point[j];
            for v in [0.0, 1.0] {
                point[j] = v;
                let d = libm::fabs(fd_partial(stat, point, k, fd_step));
                if d.is_finite() && d > *lip_k {
                    *lip_k = d;
                    kept = v;
                }
                point[j] = kept;
            }
        }
    }

    let lipschitz = lip.iter().copied().fold(0.0, f64::max);
    let mixed = libm::sqrt(row_max.iter().sum());
    // Each unordered pair appears twice in the double sum over k ≠ l.
    let coarse = libm::sqrt(2.0 * entry_max.iter().sum::<f64>());
    Ok(ConstantsReport {
        lipschitz,
        mixed,
        method: ConstantsMethod::NumericEstimate,
        per_coordinate_lipschitz: lip,
        per_coordinate_mixed: row_max,
        coarse_mixed: Some(coarse),
        relaxed_mixed: Some(libm::sqrt(relaxed)),
        lower_bound: true,
        probes: Some(probes),
        fd_step: Some(fd_step),
    })
}

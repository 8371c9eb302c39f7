//! Nonlinear statistics `Φ: [0,1]^n → ℝ` and their analytic derivatives.
//!
//! The built-ins are the arithmetic mean, the sample variance, general
//! U-statistics over a symmetric kernel, and the signed class-separation
//! functional. Each reports the first partials `∂_k Φ` and mixed partials
//! `∂_{lk} Φ` in closed form where one exists; callers fall back to finite
//! differences otherwise (see [`crate::constants`]).

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::function_class::SignMatrix;
use crate::numeric::{binomial, CompensatedSum};

/// Largest number of m-subsets a U-statistic may enumerate per evaluation.
pub const U_STATISTIC_SUBSET_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum StatisticKind {
    Mean,
    SampleVariance,
    UStatistic,
    ClassSeparation,
    Custom,
}

/// Closed-form `(L, M)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClosedFormConstants {
    pub lipschitz: f64,
    pub mixed: f64,
}

/// A statistic of `n` real arguments.
///
/// `evaluate` must be total on `[0,1]^n`. When `partial` or `mixed_partial`
/// return values they must be exact derivatives; the test suite checks them
/// against central differences.
pub trait Statistic: Send + Sync {
    fn name(&self) -> &str;

    fn kind(&self) -> StatisticKind {
        StatisticKind::Custom
    }

    fn arity(&self) -> usize;

    fn evaluate(&self, s: &[f64]) -> f64;

    /// `∂_k Φ(s)`, when available in closed form.
    fn partial(&self, _k: usize, _s: &[f64]) -> Option<f64> {
        None
    }

    /// `∂_{lk} Φ(s)` for `l ≠ k`, when available in closed form.
    fn mixed_partial(&self, _l: usize, _k: usize, _s: &[f64]) -> Option<f64> {
        None
    }

    fn closed_form_constants(&self) -> Option<ClosedFormConstants> {
        None
    }

    /// `E Φ(S)` for independent coordinates with `E S_i = mean[i]` and
    /// `E S_i² = second[i]`, when `Φ` is a polynomial whose expectation only
    /// involves these moments.
    fn moment_expectation(&self, _mean: &[f64], _second: &[f64]) -> Option<f64> {
        None
    }
}

/// `Φ(s) = (1/n) Σ sᵢ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Mean {
    n: usize,
}

pub fn mean_statistic(n: usize) -> Result<Mean> {
    if n == 0 {
        return Err(Error::domain("mean needs n >= 1"));
    }
    Ok(Mean { n })
}

impl Statistic for Mean {
    fn name(&self) -> &str {
        "mean"
    }

    fn kind(&self) -> StatisticKind {
        StatisticKind::Mean
    }

    fn arity(&self) -> usize {
        self.n
    }

    fn evaluate(&self, s: &[f64]) -> f64 {
        let sum: CompensatedSum = s.iter().copied().collect();
        sum.value() / self.n as f64
    }

    fn partial(&self, _k: usize, _s: &[f64]) -> Option<f64> {
        Some(1.0 / self.n as f64)
    }

    fn mixed_partial(&self, _l: usize, _k: usize, _s: &[f64]) -> Option<f64> {
        Some(0.0)
    }

    fn closed_form_constants(&self) -> Option<ClosedFormConstants> {
        Some(ClosedFormConstants { lipschitz: 1.0 / self.n as f64, mixed: 0.0 })
    }

    fn moment_expectation(&self, mean: &[f64], _second: &[f64]) -> Option<f64> {
        Some(self.evaluate(mean))
    }
}

/// `Φ(s) = (1/(n(n−1))) Σ_{i<j} (sᵢ − sⱼ)²`.
#[derive(Debug, Clone, PartialEq)]
pub struct SampleVariance {
    n: usize,
}

pub fn sample_variance_statistic(n: usize) -> Result<SampleVariance> {
    if n < 2 {
        return Err(Error::domain("sample variance needs n >= 2"));
    }
    Ok(SampleVariance { n })
}

fn pair_normalizer(n: usize) -> f64 {
    (n * (n - 1)) as f64
}

/// `L = 2/n`, `M = 2/√(n(n−1))`, shared by the variance and class separation.
fn quadratic_pair_constants(n: usize) -> ClosedFormConstants {
    ClosedFormConstants { lipschitz: 2.0 / n as f64, mixed: 2.0 / libm::sqrt(pair_normalizer(n)) }
}

impl Statistic for SampleVariance {
    fn name(&self) -> &str {
        "variance"
    }

    fn kind(&self) -> StatisticKind {
        StatisticKind::SampleVariance
    }

    fn arity(&self) -> usize {
        self.n
    }

    fn evaluate(&self, s: &[f64]) -> f64 {
        // Σ_{i<j} (sᵢ − sⱼ)² = n Σ (sᵢ − s̄)²
        let n = self.n as f64;
        let mean = s.iter().copied().collect::<CompensatedSum>().value() / n;
        let ss: CompensatedSum = s.iter().map(|&v| (v - mean) * (v - mean)).collect();
        ss.value() / (n - 1.0)
    }

    fn partial(&self, k: usize, s: &[f64]) -> Option<f64> {
        let acc: CompensatedSum = s.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &si)| s[k] - si).collect();
        Some(2.0 * acc.value() / pair_normalizer(self.n))
    }

    fn mixed_partial(&self, _l: usize, _k: usize, _s: &[f64]) -> Option<f64> {
        Some(-2.0 / pair_normalizer(self.n))
    }

    fn closed_form_constants(&self) -> Option<ClosedFormConstants> {
        Some(quadratic_pair_constants(self.n))
    }

    fn moment_expectation(&self, mean: &[f64], second: &[f64]) -> Option<f64> {
        let mut acc = CompensatedSum::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                acc.add(second[i] + second[j] - 2.0 * mean[i] * mean[j]);
            }
        }
        Some(acc.value() / pair_normalizer(self.n))
    }
}

/// `Φ(s) = (1/(n(n−1))) Σ_{i<j} r_ij (sᵢ − sⱼ)²` for a sign matrix `r`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSeparation {
    labels: SignMatrix,
}

pub fn class_separation_statistic(n: usize, labels: SignMatrix) -> Result<ClassSeparation> {
    if labels.n() != n {
        return Err(Error::domain(format!("sign matrix has size {}, expected {n}", labels.n())));
    }
    if n < 2 {
        return Err(Error::domain("class separation needs n >= 2"));
    }
    Ok(ClassSeparation { labels })
}

impl ClassSeparation {
    pub fn labels(&self) -> &SignMatrix {
        &self.labels
    }
}

impl Statistic for ClassSeparation {
    fn name(&self) -> &str {
        "class-separation"
    }

    fn kind(&self) -> StatisticKind {
        StatisticKind::ClassSeparation
    }

    fn arity(&self) -> usize {
        self.labels.n()
    }

    fn evaluate(&self, s: &[f64]) -> f64 {
        let n = self.arity();
        let mut acc = CompensatedSum::new();
        for i in 0..n {
            for j in i + 1..n {
                let d = s[i] - s[j];
                acc.add(f64::from(self.labels.get(i, j)) * d * d);
            }
        }
        acc.value() / pair_normalizer(n)
    }

    fn partial(&self, k: usize, s: &[f64]) -> Option<f64> {
        let acc: CompensatedSum =
            (0..self.arity()).filter(|&i| i != k).map(|i| f64::from(self.labels.get(k, i)) * (s[k] - s[i])).collect();
        Some(2.0 * acc.value() / pair_normalizer(self.arity()))
    }

    fn mixed_partial(&self, l: usize, k: usize, _s: &[f64]) -> Option<f64> {
        Some(-2.0 * f64::from(self.labels.get(l, k)) / pair_normalizer(self.arity()))
    }

    fn closed_form_constants(&self) -> Option<ClosedFormConstants> {
        Some(quadratic_pair_constants(self.arity()))
    }

    fn moment_expectation(&self, mean: &[f64], second: &[f64]) -> Option<f64> {
        let n = self.arity();
        let mut acc = CompensatedSum::new();
        for i in 0..n {
            for j in i + 1..n {
                acc.add(f64::from(self.labels.get(i, j)) * (second[i] + second[j] - 2.0 * mean[i] * mean[j]));
            }
        }
        Some(acc.value() / pair_normalizer(n))
    }
}

/// Built-in kernel shapes.
#[derive(Debug, Clone, Copy)]
pub enum KernelKind {
    /// `κ(s) = s`, order 1.
    Identity,
    /// `κ ≡ value` of any order.
    Constant { order: usize, value: f64 },
    /// `κ(s, s') = (s − s')²/2`.
    HalfSquaredDifference,
    /// `κ(s₁, …, s_m) = s₁·…·s_m`.
    Product { order: usize },
    /// `κ(s, s') = −τ ln(e^{−s/τ} + e^{−s'/τ})`, a smooth minimum.
    SmoothMin { temperature: f64 },
    /// Caller-provided symmetric kernel.
    Custom { order: usize, eval: fn(&[f64]) -> f64 },
}

impl PartialEq for KernelKind {
    fn eq(&self, other: &Self) -> bool {
        use KernelKind::*;
        match (self, other) {
            (Identity, Identity) | (HalfSquaredDifference, HalfSquaredDifference) => true,
            (Constant { order: a, value: x }, Constant { order: b, value: y }) => a == b && x == y,
            (Product { order: a }, Product { order: b }) => a == b,
            (SmoothMin { temperature: a }, SmoothMin { temperature: b }) => a == b,
            (Custom { order: a, eval: f }, Custom { order: b, eval: g }) => a == b && core::ptr::fn_addr_eq(*f, *g),
            _ => false,
        }
    }
}

/// A symmetric kernel with user-declared derivative suprema.
#[derive(Debug, Clone, PartialEq)]
pub struct Kernel {
    kind: KernelKind,
    sup_d1: Option<f64>,
    sup_d12: Option<f64>,
}

impl Kernel {
    /// Kernel with its analytic suprema on `[0,1]^m` filled in where known.
    pub fn new(kind: KernelKind) -> Result<Self> {
        let (d1, d12) = match kind {
            KernelKind::Identity => (Some(1.0), Some(0.0)),
            KernelKind::Constant { order, value } => {
                if order == 0 || !value.is_finite() {
                    return Err(Error::domain("constant kernel needs order >= 1 and a finite value"));
                }
                (Some(0.0), Some(0.0))
            }
            KernelKind::HalfSquaredDifference => (Some(1.0), Some(1.0)),
            KernelKind::Product { order } => {
                if order == 0 {
                    return Err(Error::domain("product kernel needs order >= 1"));
                }
                (Some(1.0), Some(if order >= 2 { 1.0 } else { 0.0 }))
            }
            KernelKind::SmoothMin { temperature } => {
                if !(temperature.is_finite() && temperature > 0.0) {
                    return Err(Error::domain("smooth-min temperature must be positive"));
                }
                (Some(1.0), Some(0.25 / temperature))
            }
            KernelKind::Custom { order, .. } => {
                if order == 0 {
                    return Err(Error::domain("kernel order must be >= 1"));
                }
                (None, None)
            }
        };
        Ok(Kernel { kind, sup_d1: d1, sup_d12: d12 })
    }

    /// Replaces the declared suprema of `|∂₁κ|` and `|∂₁₂κ|`.
    pub fn with_bounds(mut self, sup_d1: Option<f64>, sup_d12: Option<f64>) -> Result<Self> {
        for v in [sup_d1, sup_d12].into_iter().flatten() {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::domain("kernel derivative bounds must be finite and nonnegative"));
            }
        }
        self.sup_d1 = sup_d1;
        self.sup_d12 = sup_d12;
        Ok(self)
    }

    pub fn kind(&self) -> KernelKind {
        self.kind
    }

    pub fn order(&self) -> usize {
        match self.kind {
            KernelKind::Identity => 1,
            KernelKind::HalfSquaredDifference | KernelKind::SmoothMin { .. } => 2,
            KernelKind::Constant { order, .. } | KernelKind::Product { order } | KernelKind::Custom { order, .. } => {
                order
            }
        }
    }

    pub fn sup_d1(&self) -> Option<f64> {
        self.sup_d1
    }

    pub fn sup_d12(&self) -> Option<f64> {
        self.sup_d12
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            KernelKind::Identity => "identity",
            KernelKind::Constant { .. } => "constant",
            KernelKind::HalfSquaredDifference => "half-squared-difference",
            KernelKind::Product { .. } => "product",
            KernelKind::SmoothMin { .. } => "smooth-min",
            KernelKind::Custom { .. } => "custom",
        }
    }

    pub fn evaluate(&self, args: &[f64]) -> f64 {
        match self.kind {
            KernelKind::Identity => args[0],
            KernelKind::Constant { value, .. } => value,
            KernelKind::HalfSquaredDifference => {
                let d = args[0] - args[1];
                0.5 * d * d
            }
            KernelKind::Product { .. } => args.iter().product(),
            KernelKind::SmoothMin { temperature } => {
                let (a, b) = (args[0], args[1]);
                a.min(b) - temperature * libm::log1p(libm::exp(-libm::fabs(a - b) / temperature))
            }
            KernelKind::Custom { eval, .. } => eval(args),
        }
    }

    /// `E κ(S₁, …, S_m)` for independent arguments from their first two moments,
    /// for kernels where that suffices.
    fn moment_expectation(&self, mean: &[f64], second: &[f64]) -> Option<f64> {
        match self.kind {
            KernelKind::Identity | KernelKind::Constant { .. } | KernelKind::Product { .. } => {
                Some(self.evaluate(mean))
            }
            KernelKind::HalfSquaredDifference => Some(0.5 * (second[0] + second[1]) - mean[0] * mean[1]),
            _ => None,
        }
    }
}

/// `Φ(s) = C(n,m)⁻¹ Σ_{i₁<…<i_m} κ(s_{i₁}, …, s_{i_m})`.
#[derive(Debug, Clone, PartialEq)]
pub struct UStatistic {
    n: usize,
    kernel: Kernel,
    subsets: u64,
    name: String,
}

pub fn u_statistic(n: usize, kernel: Kernel) -> Result<UStatistic> {
    let m = kernel.order();
    if m == 0 || m > n {
        return Err(Error::domain(format!("kernel order {m} must lie in 1..={n}")));
    }
    let subsets = binomial(n as u64, m as u64)
        .filter(|&c| c <= U_STATISTIC_SUBSET_CAP)
        .ok_or_else(|| Error::resource(format!("C({n}, {m}) exceeds the subset cap of {U_STATISTIC_SUBSET_CAP}")))?;
    let name = format!("u-statistic[{}]", kernel.name());
    Ok(UStatistic { n, kernel, subsets, name })
}

impl UStatistic {
    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    /// Visits every m-subset of `0..n` in lexicographic order.
    fn for_each_subset(&self, mut visit: impl FnMut(&[usize])) {
        let (n, m) = (self.n, self.kernel.order());
        let mut idx: Vec<usize> = (0..m).collect();
        loop {
            visit(&idx);
            let mut pos = m;
            while pos > 0 && idx[pos - 1] == n - m + pos - 1 {
                pos -= 1;
            }
            if pos == 0 {
                return;
            }
            idx[pos - 1] += 1;
            for j in pos..m {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }
}

impl Statistic for UStatistic {
    fn name(&self) -> &str {
        &self.name
    }

    fn kind(&self) -> StatisticKind {
        StatisticKind::UStatistic
    }

    fn arity(&self) -> usize {
        self.n
    }

    fn evaluate(&self, s: &[f64]) -> f64 {
        let mut args = vec![0.0; self.kernel.order()];
        let mut acc = CompensatedSum::new();
        self.for_each_subset(|idx| {
            for (a, &i) in args.iter_mut().zip(idx) {
                *a = s[i];
            }
            acc.add(self.kernel.evaluate(&args));
        });
        acc.value() / self.subsets as f64
    }

    fn moment_expectation(&self, mean: &[f64], second: &[f64]) -> Option<f64> {
        let m = self.kernel.order();
        let mut mu = vec![0.0; m];
        let mut sq = vec![0.0; m];
        self.kernel.moment_expectation(&mu, &sq)?;
        let mut acc = CompensatedSum::new();
        self.for_each_subset(|idx| {
            for (j, &i) in idx.iter().enumerate() {
                mu[j] = mean[i];
                sq[j] = second[i];
            }
            acc.add(self.kernel.moment_expectation(&mu, &sq).unwrap_or(f64::NAN));
        });
        Some(acc.value() / self.subsets as f64)
    }
}

/// Statistic composed with a class member: `x ↦ Φ(f(x))`.
pub fn compose<'a, S: Statistic + ?Sized>(
    stat: &'a S,
    class: &'a crate::function_class::FunctionClass,
    member: usize,
) -> impl Fn(&[f64]) -> f64 + Sync + 'a {
    move |x: &[f64]| {
        let s: Vec<f64> = x.iter().map(|&xi| class.eval(member, xi).unwrap_or(f64::NAN)).collect();
        stat.evaluate(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::function_class::make_class_separation_labels;
    use crate::rng::{self, StreamTag};

    fn random_points(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut r = rng::stream(seed, StreamTag::PROBE_POINTS, 0);
        (0..count).map(|_| (0..n).map(|_| rng::uniform(&mut r)).collect()).collect()
    }

    #[test]
    fn mean_examples() {
        let m = mean_statistic(4).unwrap();
        assert_eq!(m.evaluate(&[0.0, 1.0, 1.0, 0.0]), 0.5);
        assert_eq!(m.evaluate(&[0.37; 4]), 0.37);
        let m3 = mean_statistic(3).unwrap();
        assert!((m3.evaluate(&[0.1, 0.2, 0.6]) - 0.3).abs() < 1e-15);
        assert!(mean_statistic(0).is_err());
    }

    #[test]
    fn variance_examples() {
        let v = sample_variance_statistic(5).unwrap();
        assert_eq!(v.evaluate(&[0.4; 5]), 0.0);
        let v2 = sample_variance_statistic(2).unwrap();
        assert_eq!(v2.evaluate(&[0.0, 1.0]), 0.5);
        for (l, k) in [(0, 1), (3, 2), (4, 0)] {
            assert_eq!(v.mixed_partial(l, k, &[0.3; 5]), Some(-2.0 / 20.0));
        }
        assert!(sample_variance_statistic(1).is_err());
    }

    #[test]
    fn variance_matches_pairwise_definition() {
        for s in random_points(9, 50, 3) {
            let direct: f64 = (0..9)
                .flat_map(|i| (i + 1..9).map(move |j| (i, j)))
                .map(|(i, j)| (s[i] - s[j]) * (s[i] - s[j]))
                .sum::<f64>()
                / 72.0;
            let v = sample_variance_statistic(9).unwrap().evaluate(&s);
            assert!((v - direct).abs() < 1e-14);
        }
    }

    #[test]
    fn translation_behaviour() {
        let s = [0.0625, 0.25, 0.5, 0.125];
        let shifted: Vec<f64> = s.iter().map(|v| v + 0.25).collect();
        let m = mean_statistic(4).unwrap();
        assert_eq!(m.evaluate(&shifted), m.evaluate(&s) + 0.25);
        let v = sample_variance_statistic(4).unwrap();
        assert_eq!(v.evaluate(&shifted), v.evaluate(&s));
    }

    #[test]
    fn class_separation_examples() {
        let all_same = make_class_separation_labels(&[6]).unwrap();
        let cs = class_separation_statistic(6, all_same).unwrap();
        let var = sample_variance_statistic(6).unwrap();
        for s in random_points(6, 30, 5) {
            assert!((cs.evaluate(&s) - var.evaluate(&s)).abs() < 1e-15);
        }
        assert_eq!(cs.evaluate(&[0.3; 6]), 0.0);

        let split = class_separation_statistic(2, make_class_separation_labels(&[1, 1]).unwrap()).unwrap();
        assert_eq!(split.evaluate(&[0.0, 1.0]), -0.5);

        assert!(class_separation_statistic(3, make_class_separation_labels(&[1, 1]).unwrap()).is_err());
    }

    #[test]
    fn u_statistic_reductions() {
        let identity = u_statistic(5, Kernel::new(KernelKind::Identity).unwrap()).unwrap();
        let mean = mean_statistic(5).unwrap();
        let var_kernel = u_statistic(5, Kernel::new(KernelKind::HalfSquaredDifference).unwrap()).unwrap();
        let var = sample_variance_statistic(5).unwrap();
        let three = u_statistic(5, Kernel::new(KernelKind::Constant { order: 3, value: 3.0 }).unwrap()).unwrap();
        for s in random_points(5, 40, 9) {
            assert!((identity.evaluate(&s) - mean.evaluate(&s)).abs() < 1e-15);
            assert!((var_kernel.evaluate(&s) - var.evaluate(&s)).abs() < 1e-12);
            assert!((three.evaluate(&s) - 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn u_statistic_errors() {
        let k = Kernel::new(KernelKind::Product { order: 4 }).unwrap();
        assert!(matches!(u_statistic(3, k.clone()), Err(Error::Domain(_))));
        assert!(matches!(u_statistic(200, k), Err(Error::Resource(_))));
    }

    #[test]
    fn subsets_enumerated_lexicographically() {
        let u = u_statistic(5, Kernel::new(KernelKind::Product { order: 3 }).unwrap()).unwrap();
        let mut seen = Vec::new();
        u.for_each_subset(|idx| seen.push(idx.to_vec()));
        assert_eq!(seen.len(), 10);
        assert_eq!(seen[0], vec![0, 1, 2]);
        assert_eq!(seen[1], vec![0, 1, 3]);
        assert_eq!(seen[9], vec![2, 3, 4]);
        assert!(seen.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn smooth_min_is_symmetric_and_below_min() {
        let k = Kernel::new(KernelKind::SmoothMin { temperature: 0.1 }).unwrap();
        for (a, b) in [(0.1, 0.9), (0.5, 0.5), (1.0, 0.0)] {
            assert_eq!(k.evaluate(&[a, b]), k.evaluate(&[b, a]));
            assert!(k.evaluate(&[a, b]) <= f64::min(a, b));
        }
    }

    #[test]
    fn moment_expectations_agree_with_enumeration() {
        // Two-point coordinates with different laws: brute-force E Φ over 2^4 outcomes.
        let probs = [0.2, 0.5, 0.7, 0.9];
        let mean: Vec<f64> = probs.to_vec();
        let second: Vec<f64> = probs.to_vec();
        let stats: Vec<alloc::boxed::Box<dyn Statistic>> = vec![
            alloc::boxed::Box::new(mean_statistic(4).unwrap()),
            alloc::boxed::Box::new(sample_variance_statistic(4).unwrap()),
            alloc::boxed::Box::new(
                class_separation_statistic(4, make_class_separation_labels(&[1, 3]).unwrap()).unwrap(),
            ),
            alloc::boxed::Box::new(u_statistic(4, Kernel::new(KernelKind::Product { order: 2 }).unwrap()).unwrap()),
            alloc::boxed::Box::new(u_statistic(4, Kernel::new(KernelKind::HalfSquaredDifference).unwrap()).unwrap()),
        ];
        for stat in &stats {
            let mut brute = 0.0;
            for bits in 0u32..16 {
                let s: Vec<f64> = (0..4).map(|i| f64::from((bits >> i) & 1)).collect();
                let w: f64 = (0..4).map(|i| if s[i] == 1.0 { probs[i] } else { 1.0 - probs[i] }).product();
                brute += w * stat.evaluate(&s);
            }
            let m = stat.moment_expectation(&mean, &second).unwrap();
            assert!((m - brute).abs() < 1e-14, "{}: {m} vs {brute}", stat.name());
        }
        let smooth = u_statistic(4, Kernel::new(KernelKind::SmoothMin { temperature: 0.2 }).unwrap()).unwrap();
        assert!(smooth.moment_expectation(&mean, &second).is_none());
    }
}

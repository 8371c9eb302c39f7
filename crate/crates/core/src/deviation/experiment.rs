use alloc::format;
use alloc::vec::Vec;

use super::oracle::{check_compatible, ExpectationMethod, ExpectationOracle};
use crate::complexity::{gaussian_mc, rademacher_auto, ComplexityEstimate, ComplexityKind, EstimateMethod};
use crate::constants::ConstantsReport;
use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::function_class::{class_image, FunctionClass, ProductLaw, SampleVector};
use crate::numeric::RunningStats;
use crate::points::PointSet;
use crate::rng::{self, StreamTag};
use crate::statistics::{Statistic, StatisticKind};

/// Denominators of `ĉ` at or below this are treated as zero.
const C_HAT_DENOMINATOR_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct PsiValue {
    pub value: f64,
    /// First member attaining the supremum.
    pub argmax: usize,
}

/// `Ψ(x) = max_f (E Φ(f(X')) − Φ(f(x)))`.
pub fn psi<S: Statistic + ?Sized>(
    x: &SampleVector,
    class: &FunctionClass,
    stat: &S,
    oracle: &ExpectationOracle,
) -> Result<PsiValue> {
    if oracle.len() != class.len() {
        return Err(Error::domain(format!(
            "oracle holds {} values for a class of {} members",
            oracle.len(),
            class.len()
        )));
    }
    psi_from_image(&class_image(class, x)?, stat, oracle)
}

/// `Ψ` from a precomputed class image, one row per member.
pub fn psi_from_image<S: Statistic + ?Sized>(
    image: &PointSet,
    stat: &S,
    oracle: &ExpectationOracle,
) -> Result<PsiValue> {
    if image.len() != oracle.len() || image.is_empty() {
        return Err(Error::domain("image and oracle disagree on the class size"));
    }
    if image.dim() != stat.arity() {
        return Err(Error::domain("image dimension differs from the statistic's arity"));
    }
    let mut best = PsiValue { value: f64::NEG_INFINITY, argmax: 0 };
    for (m, row) in image.rows().enumerate() {
        let gap = oracle.values[m] - stat.evaluate(row);
        if gap > best.value {
            best = PsiValue { value: gap, argmax: m };
        }
    }
    if !best.value.is_finite() {
        return Err(Error::Numeric(format!("uniform deviation evaluated to {}", best.value)));
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BoundBreakdown {
    /// `c·(L+M)·eg`.
    pub complexity_term: f64,
    /// `L·√(n·ln(1/δ)/2)`.
    pub tail_term: f64,
    pub value: f64,
    /// `L·√(n·ln(1/δ)/4)`, the tail term with the extra halving.
    pub displayed_tail_term: f64,
    pub displayed_value: f64,
}

/// `B = c·(L+M)·eg + L·√(n·ln(1/δ)/2)`.
pub fn bound_value(lipschitz: f64, mixed: f64, eg: f64, c: f64, delta: f64, n: usize) -> Result<BoundBreakdown> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::domain(format!("c must be positive and finite, got {c}")));
    }
    for (name, v) in [("L", lipschitz), ("M", mixed), ("eg", eg)] {
        if !(v >= 0.0 && v.is_finite()) {
            return Err(Error::domain(format!("{name} must be finite and non-negative, got {v}")));
        }
    }
    if n == 0 {
        return Err(Error::domain("n must be positive"));
    }
    let log_term = n as f64 * libm::log(1.0 / delta);
    let complexity_term = c * (lipschitz + mixed) * eg;
    let tail_term = lipschitz * libm::sqrt(log_term / 2.0);
    let displayed_tail_term = lipschitz * libm::sqrt(log_term / 2.0 / 2.0);
    Ok(BoundBreakdown {
        complexity_term,
        tail_term,
        value: complexity_term + tail_term,
        displayed_tail_term,
        displayed_value: complexity_term + displayed_tail_term,
    })
}

/// [`bound_value`] from a constants report. Sampled (lower-bound) constants
/// are refused unless `allow_numeric` is set.
pub fn assemble_bound(
    constants: &ConstantsReport,
    eg: f64,
    c: f64,
    delta: f64,
    n: usize,
    allow_numeric: bool,
) -> Result<BoundBreakdown> {
    if constants.lower_bound && !allow_numeric {
        return Err(Error::Refused(
            "numerically estimated constants are lower bounds; an explicit override is required".into(),
        ));
    }
    bound_value(constants.lipschitz, constants.mixed, eg, c, delta, n)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviationSettings {
    pub c: f64,
    pub delta: f64,
    pub replications: usize,
    /// Gaussian coefficient draws per replication.
    pub gaussian_draws: usize,
    pub seed: u64,
    pub allow_numeric_constants: bool,
}

/// Minimum replication count for an experiment.
pub const MIN_REPLICATIONS: usize = 100;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ReplicationOutcome {
    pub psi: f64,
    pub argmax: usize,
    pub gaussian: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DeviationReport {
    pub n: usize,
    pub replications: Vec<ReplicationOutcome>,
    pub psi_mean: f64,
    pub psi_stderr: f64,
    /// Average over replications of the per-draw Gaussian average.
    pub eg_estimate: ComplexityEstimate,
    pub constants: ConstantsReport,
    pub oracle_method: ExpectationMethod,
    pub c_used: f64,
    pub delta: f64,
    pub bound: BoundBreakdown,
    pub violations: usize,
    pub violation_rate: f64,
    pub displayed_violation_rate: f64,
    /// `δ + 4·√(δ(1−δ)/replications)`.
    pub coverage_allowance: f64,
    pub coverage_ok: bool,
    /// `psi_mean / ((L+M)·eg)`, absent when the denominator vanishes.
    pub c_hat: Option<f64>,
    /// Ratio-estimator standard error of `ĉ`.
    pub c_hat_stderr: Option<f64>,
}

impl DeviationReport {
    pub fn psi_samples(&self) -> impl Iterator<Item = f64> + '_ {
        self.replications.iter().map(|r| r.psi)
    }

    /// `ĉ·(1 + k·relative stderr)`, i.e. `ĉ + k·se(ĉ)`.
    pub fn calibrated_c(&self, k: f64) -> Option<f64> {
        Some(self.c_hat? + k * self.c_hat_stderr?)
    }
}

/// Replicates `X`, records `Ψ(X)` and `G(F(X))`, and measures how often `Ψ`
/// exceeds the assembled bound.
///
/// Replication `r` samples from stream `(seed, SAMPLE, r)`; its Gaussian
/// average uses the derived seed `(seed, REPLICATION, r)`.
pub fn deviation_experiment<S, E>(
    law: &ProductLaw,
    class: &FunctionClass,
    stat: &S,
    oracle: &ExpectationOracle,
    constants: &ConstantsReport,
    settings: &DeviationSettings,
    exec: &E,
) -> Result<DeviationReport>
where
    S: Statistic + ?Sized,
    E: Executor,
{
    check_compatible(law, class, stat)?;
    if settings.replications < MIN_REPLICATIONS {
        return Err(Error::domain(format!(
            "at least {MIN_REPLICATIONS} replications are required, got {}",
            settings.replications
        )));
    }
    if oracle.len() != class.len() {
        return Err(Error::domain("oracle was built for a different class"));
    }
    // Fail fast on refused constants or bad parameters before any sampling.
    assemble_bound(constants, 0.0, settings.c, settings.delta, law.n(), settings.allow_numeric_constants)?;

    let outcomes = exec.map_indexed(settings.replications, |r| -> Result<ReplicationOutcome> {
        let mut stream = rng::stream(settings.seed, StreamTag::SAMPLE, r as u64);
        let x = law.sample_from(&mut stream);
        let image = class_image(class, &x)?;
        let p = psi_from_image(&image, stat, oracle)?;
        let g_seed = rng::derive_seed(settings.seed, StreamTag::REPLICATION, r as u64);
        let g = gaussian_mc(&image, settings.gaussian_draws, g_seed, &Sequential)?;
        Ok(ReplicationOutcome { psi: p.value, argmax: p.argmax, gaussian: g.value })
    });
    let replications = outcomes.into_iter().collect::<Result<Vec<_>>>()?;

    let psi_stats: RunningStats = replications.iter().map(|r| r.psi).collect();
    let g_stats: RunningStats = replications.iter().map(|r| r.gaussian).collect();
    let per_draw = 2 * settings.gaussian_draws.div_ceil(2);
    let eg_estimate = ComplexityEstimate {
        kind: ComplexityKind::Gaussian,
        method: EstimateMethod::MonteCarlo,
        value: g_stats.mean(),
        draws: Some((per_draw * settings.replications) as u64),
        stderr: Some(g_stats.stderr()),
    };
    let n = law.n();
    let bound = assemble_bound(
        constants,
        eg_estimate.value.max(0.0),
        settings.c,
        settings.delta,
        n,
        settings.allow_numeric_constants,
    )?;
    let count = replications.len() as f64;
    let violations = replications.iter().filter(|r| r.psi > bound.value).count();
    let displayed = replications.iter().filter(|r| r.psi > bound.displayed_value).count();
    let violation_rate = violations as f64 / count;
    let coverage_allowance = settings.delta + super::binomial_allowance(settings.delta, settings.replications as u64);

    let scale = constants.lipschitz + constants.mixed;
    let denominator = scale * eg_estimate.value;
    let (c_hat, c_hat_stderr) = if denominator > C_HAT_DENOMINATOR_FLOOR {
        let c_hat = psi_stats.mean() / denominator;
        // Linearized ratio residuals keep the correlation between Ψ and G.
        let resid: RunningStats =
            replications.iter().map(|r| (r.psi - c_hat * scale * r.gaussian) / denominator).collect();
        (Some(c_hat), Some(resid.stderr()))
    } else {
        (None, None)
    };

    Ok(DeviationReport {
        n,
        psi_mean: psi_stats.mean(),
        psi_stderr: psi_stats.stderr(),
        replications,
        eg_estimate,
        constants: constants.clone(),
        oracle_method: oracle.method,
        c_used: settings.c,
        delta: settings.delta,
        bound,
        violations,
        violation_rate,
        displayed_violation_rate: displayed as f64 / count,
        coverage_allowance,
        coverage_ok: violation_rate <= coverage_allowance,
        c_hat,
        c_hat_stderr,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymmetrizationSettings {
    pub replications: usize,
    /// Sign draws per replication when `n` exceeds the exact cap.
    pub rademacher_draws: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SymmetrizationReport {
    pub n: usize,
    pub replications: usize,
    pub psi_mean: f64,
    pub psi_stderr: f64,
    pub rademacher_mean: f64,
    pub rademacher_stderr: f64,
    pub rademacher_method: EstimateMethod,
    /// `(2/n)·rademacher_mean`.
    pub rhs: f64,
    /// Standard error of the per-replication difference `Ψ − (2/n)·R`.
    pub difference_stderr: f64,
    pub tolerance: f64,
    pub violated: bool,
}

/// Checks `E Ψ(X) ≤ (2/n)·E R(F(X))` for the arithmetic mean.
pub fn symmetrization_check_mean<S, E>(
    law: &ProductLaw,
    class: &FunctionClass,
    stat: &S,
    oracle: &ExpectationOracle,
    settings: &SymmetrizationSettings,
    exec: &E,
) -> Result<SymmetrizationReport>
where
    S: Statistic + ?Sized,
    E: Executor,
{
    if stat.kind() != StatisticKind::Mean {
        return Err(Error::domain(format!("symmetrization check needs the mean statistic, got {}", stat.name())));
    }
    check_compatible(law, class, stat)?;
    if settings.replications < 2 {
        return Err(Error::domain("at least two replications are required"));
    }
    let n = law.n();
    let outcomes = exec.map_indexed(settings.replications, |r| -> Result<(f64, ComplexityEstimate)> {
        let mut stream = rng::stream(settings.seed, StreamTag::SAMPLE, r as u64);
        let x = law.sample_from(&mut stream);
        let image = class_image(class, &x)?;
        let p = psi_from_image(&image, stat, oracle)?;
        let r_seed = rng::derive_seed(settings.seed, StreamTag::REPLICATION, r as u64);
        let rad = rademacher_auto(&image, settings.rademacher_draws, r_seed, &Sequential)?;
        Ok((p.value, rad))
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let scale = 2.0 / n as f64;
    let psi_stats: RunningStats = outcomes.iter().map(|o| o.0).collect();
    let rad_stats: RunningStats = outcomes.iter().map(|o| o.1.value).collect();
    let diff: RunningStats = outcomes.iter().map(|o| o.0 - scale * o.1.value).collect();
    let rhs = scale * rad_stats.mean();
    let tolerance = 4.0 * diff.stderr();
    Ok(SymmetrizationReport {
        n,
        replications: settings.replications,
        psi_mean: psi_stats.mean(),
        psi_stderr: psi_stats.stderr(),
        rademacher_mean: rad_stats.mean(),
        rademacher_stderr: rad_stats.stderr(),
        rademacher_method: outcomes[0].1.method,
        rhs,
        difference_stderr: diff.stderr(),
        tolerance,
        violated: psi_stats.mean() > rhs + tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constants::{closed_form_constants, estimate_constants_numeric};
    use crate::deviation::{expectation_oracle, ExpectationRequest};
    use crate::function_class::{CoordinateDistribution, Member, SampleSpace};
    use crate::statistics::{mean_statistic, sample_variance_statistic};
    use alloc::string::String;
    use alloc::vec;

    fn binary() -> SampleSpace {
        SampleSpace::finite(&[0.0, 1.0]).unwrap()
    }

    fn settings(replications: usize, seed: u64) -> DeviationSettings {
        DeviationSettings {
            c: 1.0,
            delta: 0.1,
            replications,
            gaussian_draws: 200,
            seed,
            allow_numeric_constants: false,
        }
    }

    #[test]
    fn bound_arithmetic() {
        let n = 16usize;
        let l = 2.0 / n as f64;
        let m = 2.0 / libm::sqrt((n * (n - 1)) as f64);
        let b = bound_value(l, m, 2.0, 1.0, 0.1, n).unwrap();
        let oracle = (l + m) * 2.0 + l * libm::sqrt(16.0 * libm::log(10.0) / 2.0);
        assert!((b.value - oracle).abs() < 1e-14);
        assert!((b.value - 1.0447).abs() < 5e-4);
        assert!(b.displayed_value < b.value);
    }

    #[test]
    fn degenerate_class_leaves_tail_term() {
        let b = bound_value(0.25, 0.0, 0.0, 3.0, 0.05, 8).unwrap();
        assert_eq!(b.value, 0.25 * libm::sqrt(8.0 * libm::log(20.0) / 2.0));
        assert_eq!(b.complexity_term, 0.0);
    }

    #[test]
    fn mean_bound_reproduces_rademacher_form() {
        for &(n, delta, r) in &[(10usize, 0.05, 1.7), (64, 0.1, 3.25), (1000, 0.01, 12.0)] {
            let b = bound_value(1.0 / n as f64, 0.0, r, 2.0, delta, n).unwrap();
            let intro = 2.0 / n as f64 * r + libm::sqrt(libm::log(1.0 / delta) / (2.0 * n as f64));
            assert!((b.value - intro).abs() <= 4.0 * f64::EPSILON * intro);
        }
    }

    #[test]
    fn bound_argument_checks() {
        assert!(bound_value(1.0, 0.0, 1.0, 1.0, 0.0, 4).is_err());
        assert!(bound_value(1.0, 0.0, 1.0, 1.0, 1.0, 4).is_err());
        assert!(bound_value(1.0, 0.0, 1.0, 0.0, 0.5, 4).is_err());
        assert!(bound_value(-1.0, 0.0, 1.0, 1.0, 0.5, 4).is_err());
    }

    #[test]
    fn numeric_constants_need_override() {
        let stat = sample_variance_statistic(5).unwrap();
        let est = estimate_constants_numeric(&stat, 20, 1e-4, 1).unwrap();
        assert!(matches!(assemble_bound(&est, 1.0, 1.0, 0.1, 5, false), Err(Error::Refused(_))));
        assert!(assemble_bound(&est, 1.0, 1.0, 0.1, 5, true).is_ok());
    }

    #[test]
    fn psi_on_point_mass_law_is_zero() {
        let law = ProductLaw::iid(binary(), CoordinateDistribution::PointMass { value: 1.0 }, 5).unwrap();
        let class = FunctionClass::random_tables(binary(), 6, 9).unwrap();
        let stat = sample_variance_statistic(5).unwrap();
        let oracle = expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).unwrap();
        let p = psi(&law.sample(3), &class, &stat, &oracle).unwrap();
        assert_eq!(p, PsiValue { value: 0.0, argmax: 0 });

        let report = deviation_experiment(
            &law,
            &class,
            &stat,
            &oracle,
            &closed_form_constants(&stat).unwrap(),
            &settings(100, 1),
            &Sequential,
        )
        .unwrap();
        assert_eq!(report.psi_mean, 0.0);
        assert_eq!(report.violation_rate, 0.0);
        if let Some(c_hat) = report.c_hat {
            assert_eq!(c_hat, 0.0);
        }
    }

    #[test]
    fn psi_matches_brute_force() {
        let law = ProductLaw::iid(binary(), CoordinateDistribution::Uniform, 6).unwrap();
        let class = FunctionClass::random_tables(binary(), 4, 21).unwrap();
        let stat = mean_statistic(6).unwrap();
        let oracle = expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).unwrap();
        for seed in 0..20 {
            let x = law.sample(seed);
            let got = psi(&x, &class, &stat, &oracle).unwrap();
            // Independent path: tables evaluated pointwise, expectations from
            // the average over both support points.
            let mut best = f64::NEG_INFINITY;
            for m in 0..class.len() {
                let f0 = class.eval(m, 0.0).unwrap();
                let f1 = class.eval(m, 1.0).unwrap();
                let plug: f64 = x.values().iter().map(|&xi| if xi == 0.0 { f0 } else { f1 }).sum::<f64>() / 6.0;
                best = best.max((f0 + f1) / 2.0 - plug);
            }
            assert!((got.value - best).abs() < 1e-12);
        }
    }

    #[test]
    fn singleton_psi_is_plain_deviation() {
        let law = ProductLaw::iid(binary(), CoordinateDistribution::Bernoulli { p: 0.3 }, 4).unwrap();
        let class = FunctionClass::new(binary(), vec![(String::from("id"), Member::identity())]).unwrap();
        let stat = mean_statistic(4).unwrap();
        let oracle = expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).unwrap();
        let x = SampleVector::from(vec![1.0, 0.0, 0.0, 1.0]);
        let p = psi(&x, &class, &stat, &oracle).unwrap();
        assert!((p.value - (0.3 - 0.5)).abs() < 1e-15);
    }

    #[test]
    fn psi_ties_report_first_label() {
        let class = FunctionClass::new(
            binary(),
            vec![(String::from("a"), Member::constant(0.5)), (String::from("b"), Member::constant(0.5))],
        )
        .unwrap();
        let law = ProductLaw::iid(binary(), CoordinateDistribution::Uniform, 3).unwrap();
        let stat = mean_statistic(3).unwrap();
        let oracle = expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).unwrap();
        assert_eq!(psi(&law.sample(1), &class, &stat, &oracle).unwrap().argmax, 0);
    }

    #[test]
    fn mean_deviation_shrinks_with_n() {
        let class = FunctionClass::random_tables(binary(), 6, 77).unwrap();
        let run = |n: usize| {
            let law = ProductLaw::iid(binary(), CoordinateDistribution::Uniform, n).unwrap();
            let stat = mean_statistic(n).unwrap();
            let oracle = expectation_oracle(&law, &class, &stat, ExpectationRequest::Moments, &Sequential).unwrap();
            deviation_experiment(
                &law,
                &class,
                &stat,
                &oracle,
                &closed_form_constants(&stat).unwrap(),
                &settings(400, 12),
                &Sequential,
            )
            .unwrap()
        };
        let small = run(16);
        let large = run(64);
        assert!(large.psi_mean <= small.psi_mean + 4.0 * libm::hypot(small.psi_stderr, large.psi_stderr));
        assert!(small.c_hat.is_some() && small.coverage_ok && large.coverage_ok);
    }

    #[test]
    fn degenerate_class_has_no_c_hat() {
        let law = ProductLaw::iid(binary(), CoordinateDistribution::Uniform, 8).unwrap();
        let class = FunctionClass::new(binary(), vec![(String::from("half"), Member::constant(0.5))]).unwrap();
        let stat = mean_statistic(8).unwrap();
        let oracle = expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).unwrap();
        let report = deviation_experiment(
            &law,
            &class,
            &stat,
            &oracle,
            &closed_form_constants(&stat).unwrap(),
            &settings(100, 3),
            &Sequential,
        )
        .unwrap();
        assert_eq!(report.eg_estimate.value, 0.0);
        assert_eq!(report.c_hat, None);
    }

    #[test]
    fn experiment_requires_enough_replications() {
        let law = ProductLaw::iid(binary(), CoordinateDistribution::Uniform, 4).unwrap();
        let class = FunctionClass::random_tables(binary(), 2, 2).unwrap();
        let stat = mean_statistic(4).unwrap();
        let oracle = expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).unwrap();
        let constants = closed_form_constants(&stat).unwrap();
        assert!(deviation_experiment(&law, &class, &stat, &oracle, &constants, &settings(99, 0), &Sequential).is_err());
    }

    #[test]
    fn symmetrization_checks() {
        let law = ProductLaw::iid(binary(), CoordinateDistribution::Uniform, 12).unwrap();
        let sym = SymmetrizationSettings { replications: 300, rademacher_draws: 1000, seed: 8 };
        let stat = mean_statistic(12).unwrap();
        for class in [
            FunctionClass::random_tables(binary(), 16, 4).unwrap(),
            FunctionClass::new(binary(), vec![(String::from("half"), Member::constant(0.5))]).unwrap(),
            FunctionClass::new(binary(), vec![(String::from("id"), Member::identity())]).unwrap(),
        ] {
            let oracle = expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).unwrap();
            let report = symmetrization_check_mean(&law, &class, &stat, &oracle, &sym, &Sequential).unwrap();
            assert!(!report.violated, "{report:?}");
            assert_eq!(report.rademacher_method, EstimateMethod::Exact);
        }
        let var = sample_variance_statistic(12).unwrap();
        let class = FunctionClass::random_tables(binary(), 2, 4).unwrap();
        let oracle = expectation_oracle(&law, &class, &var, ExpectationRequest::Exact, &Sequential).unwrap();
        assert!(matches!(
            symmetrization_check_mean(&law, &class, &var, &oracle, &sym, &Sequential),
            Err(Error::Domain(_))
        ));
    }
}

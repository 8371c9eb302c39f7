use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::function_class::{class_image, FunctionClass, ProductLaw};
use crate::numeric::{CompensatedSum, RunningStats};
use crate::rng::{self, StreamTag};
use crate::statistics::Statistic;

/// Largest product support that exact enumeration will visit.
pub const EXACT_ENUMERATION_CAP: u64 = 1_000_000;

const ENUMERATION_CHUNK: u64 = 4096;
const REPLICAS_PER_BATCH: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "kebab-case"))]
pub enum ExpectationMethod {
    /// Weighted sum over every point of the product support.
    ExactEnumeration,
    /// Closed form in the first two moments of each `f(Xᵢ)`.
    ExactMoments,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectationRequest {
    Exact,
    Moments,
    MonteCarlo {
        replicas: usize,
        seed: u64,
    },
    /// Enumeration when within the cap, else moments when the statistic
    /// supports them, else Monte Carlo.
    Auto {
        replicas: usize,
        seed: u64,
    },
}

/// Cached `E Φ(f(X'))` for every member of a class.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExpectationOracle {
    pub method: ExpectationMethod,
    pub replicas: Option<u64>,
    pub values: Vec<f64>,
    pub stderr: Option<Vec<f64>>,
}

impl ExpectationOracle {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

pub fn expectation_oracle<S, E>(
    law: &ProductLaw,
    class: &FunctionClass,
    stat: &S,
    request: ExpectationRequest,
    exec: &E,
) -> Result<ExpectationOracle>
where
    S: Statistic + ?Sized,
    E: Executor,
{
    check_compatible(law, class, stat)?;
    match request {
        ExpectationRequest::Exact => enumerate(law, class, stat, exec),
        ExpectationRequest::Moments => moments(law, class, stat),
        ExpectationRequest::MonteCarlo { replicas, seed } => monte_carlo(law, class, stat, replicas, seed, exec),
        ExpectationRequest::Auto { replicas, seed } => {
            if law.support_size().is_some_and(|s| s <= EXACT_ENUMERATION_CAP) {
                enumerate(law, class, stat, exec)
            } else {
                match moments(law, class, stat) {
                    Err(Error::Unsupported(_)) => monte_carlo(law, class, stat, replicas, seed, exec),
                    other => other,
                }
            }
        }
    }
}

pub(crate) fn check_compatible<S: Statistic + ?Sized>(law: &ProductLaw, class: &FunctionClass, stat: &S) -> Result<()> {
    if stat.arity() != law.n() {
        return Err(Error::domain(format!(
            "statistic {} has arity {}, law has n = {}",
            stat.name(),
            stat.arity(),
            law.n()
        )));
    }
    if class.space() != law.space() {
        return Err(Error::domain("class and law are defined on different sample spaces"));
    }
    Ok(())
}

/// Per-coordinate `(value, weight)` atoms.
type Atoms = Vec<Vec<(f64, f64)>>;
/// Member values at each coordinate's atoms: `[coordinate][atom][member]`.
type AtomValues = Vec<Vec<Vec<f64>>>;

fn atom_values(law: &ProductLaw, class: &FunctionClass) -> Result<(Atoms, AtomValues)> {
    let atoms = law.atoms().ok_or_else(|| Error::unsupported("exact expectations need discrete coordinate laws"))?;
    let values = atoms
        .iter()
        .map(|coord| {
            coord
                .iter()
                .map(|&(x, _)| (0..class.len()).map(|m| class.eval(m, x)).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((atoms, values))
}

fn enumerate<S, E>(law: &ProductLaw, class: &FunctionClass, stat: &S, exec: &E) -> Result<ExpectationOracle>
where
    S: Statistic + ?Sized,
    E: Executor,
{
    let (atoms, fvals) = atom_values(law, class)?;
    let total = law.support_size().unwrap_or(u64::MAX);
    if total > EXACT_ENUMERATION_CAP {
        return Err(Error::resource(format!(
            "product support has {total} points, above the enumeration cap of {EXACT_ENUMERATION_CAP}"
        )));
    }
    let n = law.n();
    let members = class.len();
    let radices: Vec<u64> = atoms.iter().map(|a| a.len() as u64).collect();
    let chunks = total.div_ceil(ENUMERATION_CHUNK) as usize;
    let partials = exec.map_indexed(chunks, |c| {
        let start = c as u64 * ENUMERATION_CHUNK;
        let end = (start + ENUMERATION_CHUNK).min(total);
        // Mixed-radix digits of `start`, coordinate 0 least significant.
        let mut idx = vec![0usize; n];
        let mut rest = start;
        for (d, &r) in idx.iter_mut().zip(&radices) {
            *d = (rest % r) as usize;
            rest /= r;
        }
        let mut sums = vec![CompensatedSum::new(); members];
        let mut s = vec![0.0; n];
        for _ in start..end {
            let weight: f64 = idx.iter().enumerate().map(|(i, &a)| atoms[i][a].1).product();
            for (m, sum) in sums.iter_mut().enumerate() {
                for (i, si) in s.iter_mut().enumerate() {
                    *si = fvals[i][idx[i]][m];
                }
                sum.add(weight * stat.evaluate(&s));
            }
            for (d, &r) in idx.iter_mut().zip(&radices) {
                *d += 1;
                if (*d as u64) < r {
                    break;
                }
                *d = 0;
            }
        }
        sums.iter().map(CompensatedSum::value).collect::<Vec<f64>>()
    });
    let mut sums = vec![CompensatedSum::new(); members];
    for part in &partials {
        for (acc, v) in sums.iter_mut().zip(part) {
            acc.add(*v);
        }
    }
    Ok(ExpectationOracle {
        method: ExpectationMethod::ExactEnumeration,
        replicas: None,
        values: sums.iter().map(CompensatedSum::value).collect(),
        stderr: None,
    })
}

fn moments<S: Statistic + ?Sized>(law: &ProductLaw, class: &FunctionClass, stat: &S) -> Result<ExpectationOracle> {
    let (atoms, fvals) = atom_values(law, class)?;
    let n = law.n();
    let mut values = Vec::with_capacity(class.len());
    for m in 0..class.len() {
        let mut first = vec![0.0; n];
        let mut second = vec![0.0; n];
        for (i, (coord, vals)) in atoms.iter().zip(&fvals).enumerate() {
            let mut a = CompensatedSum::new();
            let mut b = CompensatedSum::new();
            for (&(_, w), v) in coord.iter().zip(vals) {
                a.add(w * v[m]);
                b.add(w * v[m] * v[m]);
            }
            first[i] = a.value();
            second[i] = b.value();
        }
        let value = stat.moment_expectation(&first, &second).ok_or_else(|| {
            Error::unsupported(format!("statistic {} has no moment form for its expectation", stat.name()))
        })?;
        values.push(value);
    }
    Ok(ExpectationOracle { method: ExpectationMethod::ExactMoments, replicas: None, values, stderr: None })
}

fn monte_carlo<S, E>(
    law: &ProductLaw,
    class: &FunctionClass,
    stat: &S,
    replicas: usize,
    seed: u64,
    exec: &E,
) -> Result<ExpectationOracle>
where
    S: Statistic + ?Sized,
    E: Executor,
{
    if replicas < 2 {
        return Err(Error::domain("Monte Carlo expectations need at least two replicas"));
    }
    let batches = replicas.div_ceil(REPLICAS_PER_BATCH);
    let partials = exec.map_indexed(batches, |b| -> Result<Vec<RunningStats>> {
        let size = REPLICAS_PER_BATCH.min(replicas - b * REPLICAS_PER_BATCH);
        let mut stream = rng::stream(seed, StreamTag::EXPECTATION, b as u64);
        let mut stats = vec![RunningStats::new(); class.len()];
        for _ in 0..size {
            let x = law.sample_from(&mut stream);
            let image = class_image(class, &x)?;
            for (m, st) in stats.iter_mut().enumerate() {
                st.push(stat.evaluate(image.row(m)));
            }
        }
        Ok(stats)
    });
    let mut stats = vec![RunningStats::new(); class.len()];
    for part in partials {
        for (acc, p) in stats.iter_mut().zip(part?) {
            acc.merge(&p);
        }
    }
    Ok(ExpectationOracle {
        method: ExpectationMethod::MonteCarlo,
        replicas: Some(replicas as u64),
        values: stats.iter().map(RunningStats::mean).collect(),
        stderr: Some(stats.iter().map(RunningStats::stderr).collect()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;
    use crate::function_class::{CoordinateDistribution, Member, SampleSpace};
    use crate::statistics::{mean_statistic, sample_variance_statistic, u_statistic, Kernel, KernelKind};
    use alloc::string::String;

    fn binary() -> SampleSpace {
        SampleSpace::finite(&[0.0, 1.0]).unwrap()
    }

    #[test]
    fn point_mass_expectation_is_plugin_value() {
        let space = SampleSpace::finite(&[0.0, 0.5, 1.0]).unwrap();
        let law = ProductLaw::new(
            space.clone(),
            vec![
                CoordinateDistribution::PointMass { value: 0.5 },
                CoordinateDistribution::PointMass { value: 1.0 },
                CoordinateDistribution::PointMass { value: 0.0 },
            ],
        )
        .unwrap();
        let class = FunctionClass::random_tables(space, 4, 3).unwrap();
        let stat = sample_variance_statistic(3).unwrap();
        let oracle = expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).unwrap();
        let x = law.sample(0);
        let image = class_image(&class, &x).unwrap();
        for m in 0..class.len() {
            assert_eq!(oracle.values[m], stat.evaluate(image.row(m)));
        }
    }

    #[test]
    fn mean_expectation_is_linear() {
        let space = SampleSpace::finite(&[0.0, 0.25, 0.5, 1.0]).unwrap();
        let coords = vec![
            CoordinateDistribution::Weights { weights: vec![0.1, 0.2, 0.3, 0.4] },
            CoordinateDistribution::Uniform,
            CoordinateDistribution::Weights { weights: vec![0.5, 0.0, 0.0, 0.5] },
            CoordinateDistribution::Weights { weights: vec![0.0, 0.9, 0.1, 0.0] },
            CoordinateDistribution::Uniform,
        ];
        let law = ProductLaw::new(space.clone(), coords).unwrap();
        let class = FunctionClass::random_tables(space, 5, 17).unwrap();
        let stat = mean_statistic(5).unwrap();
        let oracle = expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).unwrap();
        let atoms = law.atoms().unwrap();
        for m in 0..class.len() {
            let linear: f64 =
                atoms.iter().map(|a| a.iter().map(|&(x, w)| w * class.eval(m, x).unwrap()).sum::<f64>()).sum::<f64>()
                    / 5.0;
            assert!((oracle.values[m] - linear).abs() < 1e-12);
        }
    }

    #[test]
    fn variance_exact_and_mc_agree() {
        let law = ProductLaw::iid(binary(), CoordinateDistribution::Uniform, 4).unwrap();
        let class = FunctionClass::new(binary(), vec![(String::from("id"), Member::identity())]).unwrap();
        let stat = sample_variance_statistic(4).unwrap();
        let exact = expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).unwrap();
        // Unbiasedness of the sample variance: E = Var(Bernoulli(1/2)) = 1/4.
        assert!((exact.values[0] - 0.25).abs() < 1e-15);
        let mc = expectation_oracle(
            &law,
            &class,
            &stat,
            ExpectationRequest::MonteCarlo { replicas: 100_000, seed: 5 },
            &Sequential,
        )
        .unwrap();
        let se = mc.stderr.as_ref().unwrap()[0];
        assert!((mc.values[0] - exact.values[0]).abs() <= 4.0 * se);
    }

    #[test]
    fn moments_match_enumeration() {
        let law = ProductLaw::iid(binary(), CoordinateDistribution::Bernoulli { p: 0.3 }, 6).unwrap();
        let class = FunctionClass::random_tables(binary(), 6, 2).unwrap();
        let stat = u_statistic(6, Kernel::new(KernelKind::HalfSquaredDifference).unwrap()).unwrap();
        let exact = expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).unwrap();
        let mom = expectation_oracle(&law, &class, &stat, ExpectationRequest::Moments, &Sequential).unwrap();
        for (a, b) in exact.values.iter().zip(&mom.values) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn auto_falls_back_by_capability() {
        let law = ProductLaw::iid(binary(), CoordinateDistribution::Uniform, 30).unwrap();
        let class = FunctionClass::random_tables(binary(), 2, 2).unwrap();
        let req = ExpectationRequest::Auto { replicas: 500, seed: 1 };
        let var = sample_variance_statistic(30).unwrap();
        assert_eq!(
            expectation_oracle(&law, &class, &var, req, &Sequential).unwrap().method,
            ExpectationMethod::ExactMoments
        );
        let smooth = u_statistic(30, Kernel::new(KernelKind::SmoothMin { temperature: 0.1 }).unwrap()).unwrap();
        assert_eq!(
            expectation_oracle(&law, &class, &smooth, req, &Sequential).unwrap().method,
            ExpectationMethod::MonteCarlo
        );
        assert!(matches!(
            expectation_oracle(&law, &class, &var, ExpectationRequest::Exact, &Sequential),
            Err(Error::Resource(_))
        ));
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let law = ProductLaw::iid(binary(), CoordinateDistribution::Uniform, 4).unwrap();
        let class = FunctionClass::random_tables(binary(), 2, 2).unwrap();
        let stat = mean_statistic(5).unwrap();
        assert!(expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential).is_err());
        let other =
            FunctionClass::new(SampleSpace::unit_interval(), vec![(String::from("id"), Member::identity())]).unwrap();
        let stat = mean_statistic(4).unwrap();
        assert!(expectation_oracle(&law, &other, &stat, ExpectationRequest::Exact, &Sequential).is_err());
    }

    #[test]
    fn continuous_laws_need_monte_carlo() {
        let law = ProductLaw::iid(SampleSpace::unit_interval(), CoordinateDistribution::Uniform, 3).unwrap();
        let class =
            FunctionClass::new(SampleSpace::unit_interval(), vec![(String::from("id"), Member::identity())]).unwrap();
        let stat = mean_statistic(3).unwrap();
        assert!(matches!(
            expectation_oracle(&law, &class, &stat, ExpectationRequest::Exact, &Sequential),
            Err(Error::Unsupported(_))
        ));
        let mc = expectation_oracle(
            &law,
            &class,
            &stat,
            ExpectationRequest::Auto { replicas: 20_000, seed: 4 },
            &Sequential,
        )
        .unwrap();
        assert_eq!(mc.method, ExpectationMethod::MonteCarlo);
        assert!((mc.values[0] - 0.5).abs() <= 4.0 * mc.stderr.unwrap()[0]);
    }
}

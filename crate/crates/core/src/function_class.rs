//! Sample spaces, product laws, finite function classes and their images.
//!
//! Spaces are either a finite set of labelled points in `[0,1]` or the unit
//! interval itself. Restricting to these keeps every supremum over the space
//! and every exact expectation computable.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::RngCore;

use crate::error::{Error, Result};
use crate::points::PointSet;
use crate::rng::{self, StreamTag};

/// Grid used to check parametric members on the unit interval.
const INTERVAL_CHECK_POINTS: usize = 1000;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "kebab-case"))]
pub enum SampleSpace {
    Finite { labels: Vec<String>, values: Vec<f64> },
    UnitInterval,
}

impl SampleSpace {
    /// Finite space labelled by the decimal rendering of each value.
    pub fn finite(values: &[f64]) -> Result<Self> {
        let labels = values.iter().map(|v| format!("{v}")).collect();
        Self::finite_labeled(labels, values.to_vec())
    }

    pub fn finite_labeled(labels: Vec<String>, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::domain("finite sample space needs at least one point"));
        }
        if labels.len() != values.len() {
            return Err(Error::domain("sample space labels and values differ in length"));
        }
        for (i, &v) in values.iter().enumerate() {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::domain(format!("support value {v} lies outside [0, 1]")));
            }
            if values[..i].contains(&v) {
                return Err(Error::domain(format!("support value {v} is repeated")));
            }
        }
        Ok(SampleSpace::Finite { labels, values })
    }

    pub fn unit_interval() -> Self {
        SampleSpace::UnitInterval
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, SampleSpace::Finite { .. })
    }

    /// Support values of a finite space.
    pub fn support(&self) -> Option<&[f64]> {
        match self {
            SampleSpace::Finite { values, .. } => Some(values),
            SampleSpace::UnitInterval => None,
        }
    }

    /// Index of `value` in a finite support (exact match).
    pub fn index_of(&self, value: f64) -> Option<usize> {
        self.support()?.iter().position(|&v| v == value)
    }

    pub fn contains(&self, value: f64) -> bool {
        match self {
            SampleSpace::Finite { values, .. } => values.contains(&value),
            SampleSpace::UnitInterval => (0.0..=1.0).contains(&value),
        }
    }
}

/// Law of one coordinate of the sample.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "kebab-case"))]
pub enum CoordinateDistribution {
    /// Probability vector over a finite support.
    Weights {
        weights: Vec<f64>,
    },
    /// Uniform over the finite support, or Lebesgue measure on `[0,1]`.
    Uniform,
    PointMass {
        value: f64,
    },
    /// Takes the value 1 with probability `p` and 0 otherwise.
    Bernoulli {
        p: f64,
    },
    /// Kumaraswamy(a, b) on `[0,1]`, a beta-like family with a closed-form
    /// quantile `(1 − (1 − u)^{1/b})^{1/a}`.
    Kumaraswamy {
        a: f64,
        b: f64,
    },
}

impl CoordinateDistribution {
    fn validate(&self, space: &SampleSpace) -> Result<()> {
        match (self, space) {
            (CoordinateDistribution::Weights { weights }, SampleSpace::Finite { values, .. }) => {
                if weights.len() != values.len() {
                    return Err(Error::domain(format!(
                        "{} weights for a support of {} points",
                        weights.len(),
                        values.len()
                    )));
                }
                if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    return Err(Error::domain("weights must be finite and nonnegative"));
                }
                let total: f64 = weights.iter().sum();
                if libm::fabs(total - 1.0) > 1e-12 {
                    return Err(Error::domain(format!("weights sum to {total}, not 1")));
                }
                Ok(())
            }
            (CoordinateDistribution::Weights { .. }, SampleSpace::UnitInterval) => {
                Err(Error::domain("weight vectors need a finite sample space"))
            }
            (CoordinateDistribution::Uniform, _) => Ok(()),
            (CoordinateDistribution::PointMass { value }, _) => {
                if space.contains(*value) {
                    Ok(())
                } else {
                    Err(Error::domain(format!("point mass at {value} lies outside the sample space")))
                }
            }
            (CoordinateDistribution::Bernoulli { p }, _) => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::domain(format!("Bernoulli parameter {p} outside [0, 1]")));
                }
                if !(space.contains(0.0) && space.contains(1.0)) {
                    return Err(Error::domain("Bernoulli coordinates need 0 and 1 in the sample space"));
                }
                Ok(())
            }
            (CoordinateDistribution::Kumaraswamy { a, b }, SampleSpace::UnitInterval) => {
                if a.is_finite() && b.is_finite() && *a > 0.0 && *b > 0.0 {
                    Ok(())
                } else {
                    Err(Error::domain("Kumaraswamy parameters must be positive"))
                }
            }
            (CoordinateDistribution::Kumaraswamy { .. }, SampleSpace::Finite { .. }) => {
                Err(Error::domain("Kumaraswamy coordinates need the unit interval"))
            }
        }
    }

    /// Atoms `(value, probability)` with positive probability, when the law is discrete.
    pub fn atoms(&self, space: &SampleSpace) -> Option<Vec<(f64, f64)>> {
        let atoms = match (self, space) {
            (CoordinateDistribution::Weights { weights }, SampleSpace::Finite { values, .. }) => {
                values.iter().copied().zip(weights.iter().copied()).collect()
            }
            (CoordinateDistribution::Uniform, SampleSpace::Finite { values, .. }) => {
                let w = 1.0 / values.len() as f64;
                values.iter().map(|&v| (v, w)).collect()
            }
            (CoordinateDistribution::PointMass { value }, _) => vec![(*value, 1.0)],
            (CoordinateDistribution::Bernoulli { p }, _) => vec![(0.0, 1.0 - p), (1.0, *p)],
            _ => return None,
        };
        Some(atoms.into_iter().filter(|&(_, w): &(f64, f64)| w > 0.0).collect())
    }

    pub fn sample<R: RngCore + ?Sized>(&self, space: &SampleSpace, rng: &mut R) -> f64 {
        match (self, space) {
            (CoordinateDistribution::Weights { weights }, SampleSpace::Finite { values, .. }) => {
                let u = rng::uniform(rng);
                let mut acc = 0.0;
                let mut last = 0;
                for (i, &w) in weights.iter().enumerate() {
                    if w <= 0.0 {
                        continue;
                    }
                    acc += w;
                    last = i;
                    if u < acc {
                        return values[i];
                    }
                }
                values[last]
            }
            (CoordinateDistribution::Uniform, SampleSpace::Finite { values, .. }) => {
                let idx = (rng::uniform(rng) * values.len() as f64) as usize;
                values[idx.min(values.len() - 1)]
            }
            (CoordinateDistribution::Uniform, SampleSpace::UnitInterval) => rng::uniform(rng),
            (CoordinateDistribution::PointMass { value }, _) => *value,
            (CoordinateDistribution::Bernoulli { p }, _) => {
                if rng::uniform(rng) < *p {
                    1.0
                } else {
                    0.0
                }
            }
            (CoordinateDistribution::Kumaraswamy { a, b }, _) => {
                let u = rng::uniform(rng);
                libm::pow(1.0 - libm::pow(1.0 - u, 1.0 / b), 1.0 / a)
            }
            (CoordinateDistribution::Weights { .. }, SampleSpace::UnitInterval) => {
                unreachable!("rejected by validation")
            }
        }
    }
}

/// Product of independent, not necessarily identical, coordinate laws.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProductLaw {
    space: SampleSpace,
    coordinates: Vec<CoordinateDistribution>,
}

impl ProductLaw {
    pub fn new(space: SampleSpace, coordinates: Vec<CoordinateDistribution>) -> Result<Self> {
        if coordinates.len() < 2 {
            return Err(Error::domain(format!("a product law needs n >= 2 coordinates, got {}", coordinates.len())));
        }
        for (i, c) in coordinates.iter().enumerate() {
            c.validate(&space).map_err(|e| match e {
                Error::Domain(m) => Error::Domain(format!("coordinate {i}: {m}")),
                other => other,
            })?;
        }
        Ok(ProductLaw { space, coordinates })
    }

    /// `n` independent copies of one coordinate law.
    pub fn iid(space: SampleSpace, coordinate: CoordinateDistribution, n: usize) -> Result<Self> {
        Self::new(space, vec![coordinate; n])
    }

    pub fn n(&self) -> usize {
        self.coordinates.len()
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn coordinates(&self) -> &[CoordinateDistribution] {
        &self.coordinates
    }

    /// Per-coordinate atoms, if every coordinate is discrete.
    pub fn atoms(&self) -> Option<Vec<Vec<(f64, f64)>>> {
        self.coordinates.iter().map(|c| c.atoms(&self.space)).collect()
    }

    /// Number of points in the support of the product law, saturating.
    pub fn support_size(&self) -> Option<u64> {
        let atoms = self.atoms()?;
        Some(atoms.iter().fold(1u64, |acc, a| acc.saturating_mul(a.len() as u64)))
    }

    /// Draws one sample from the stream `(seed, SAMPLE, 0)`.
    pub fn sample(&self, seed: u64) -> SampleVector {
        self.sample_from(&mut rng::stream(seed, StreamTag::SAMPLE, 0))
    }

    pub fn sample_from<R: RngCore + ?Sized>(&self, rng: &mut R) -> SampleVector {
        SampleVector(self.coordinates.iter().map(|c| c.sample(&self.space, rng)).collect())
    }
}

/// A point `x ∈ X^n`, stored by coordinate value.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SampleVector(pub Vec<f64>);

impl SampleVector {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl From<Vec<f64>> for SampleVector {
    fn from(v: Vec<f64>) -> Self {
        SampleVector(v)
    }
}

/// One member `f: X → [0,1]` of a function class.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(tag = "form", rename_all = "kebab-case"))]
pub enum Member {
    /// One value per support point of a finite space.
    Table { values: Vec<f64> },
    /// `x ↦ clamp((x − θ)/w, 0, 1)`.
    Threshold { theta: f64, width: f64 },
    /// `x ↦ clamp(a·x + b, 0, 1)`.
    AffineClipped { slope: f64, intercept: f64 },
}

impl Member {
    pub fn constant(c: f64) -> Self {
        Member::AffineClipped { slope: 0.0, intercept: c }
    }

    pub fn identity() -> Self {
        Member::AffineClipped { slope: 1.0, intercept: 0.0 }
    }

    fn eval_parametric(&self, x: f64) -> f64 {
        match *self {
            Member::Threshold { theta, width } => ((x - theta) / width).clamp(0.0, 1.0),
            Member::AffineClipped { slope, intercept } => (slope * x + intercept).clamp(0.0, 1.0),
            Member::Table { .. } => unreachable!("tables are resolved through the support"),
        }
    }

    fn validate(&self, space: &SampleSpace) -> Result<()> {
        match self {
            Member::Table { values } => {
                let support =
                    space.support().ok_or_else(|| Error::domain("lookup tables need a finite sample space"))?;
                if values.len() != support.len() {
                    return Err(Error::domain(format!(
                        "table has {} entries for a support of {} points",
                        values.len(),
                        support.len()
                    )));
                }
                if values.iter().any(|v| !(0.0..=1.0).contains(v)) {
                    return Err(Error::domain("table entries must lie in [0, 1]"));
                }
            }
            Member::Threshold { theta, width } => {
                if !(theta.is_finite() && width.is_finite() && *width > 0.0) {
                    return Err(Error::domain("threshold needs finite theta and positive width"));
                }
            }
            Member::AffineClipped { slope, intercept } => {
                if !(slope.is_finite() && intercept.is_finite()) {
                    return Err(Error::domain("affine member needs finite coefficients"));
                }
            }
        }
        // Range check over the whole support, or a grid on [0,1].
        let ok = match (self, space) {
            (Member::Table { .. }, _) => true,
            (_, SampleSpace::Finite { values, .. }) => {
                values.iter().all(|&x| (0.0..=1.0).contains(&self.eval_parametric(x)))
            }
            (_, SampleSpace::UnitInterval) => (0..INTERVAL_CHECK_POINTS).all(|i| {
                let x = i as f64 / (INTERVAL_CHECK_POINTS - 1) as f64;
                (0.0..=1.0).contains(&self.eval_parametric(x))
            }),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::domain("member leaves [0, 1] on the sample space"))
        }
    }
}

/// A finite, labelled class of functions on one sample space.
///
/// On finite spaces every member is materialized as a table over the support,
/// so evaluation is a lookup.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FunctionClass {
    space: SampleSpace,
    labels: Vec<String>,
    members: Vec<Member>,
    #[cfg_attr(feature = "serde", serde(skip))]
    resolved: Option<Vec<Vec<f64>>>,
}

impl FunctionClass {
    pub fn new(space: SampleSpace, members: Vec<(String, Member)>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::domain("function class needs at least one member"));
        }
        let mut labels: Vec<String> = Vec::with_capacity(members.len());
        let mut forms = Vec::with_capacity(members.len());
        for (label, member) in members {
            if labels.contains(&label) {
                return Err(Error::domain(format!("duplicate member label {label:?}")));
            }
            member.validate(&space).map_err(|e| match e {
                Error::Domain(m) => Error::Domain(format!("member {label:?}: {m}")),
                other => other,
            })?;
            labels.push(label);
            forms.push(member);
        }
        let resolved = space.support().map(|support| {
            forms
                .iter()
                .map(|m| match m {
                    Member::Table { values } => values.clone(),
                    p => support.iter().map(|&x| p.eval_parametric(x)).collect(),
                })
                .collect()
        });
        Ok(FunctionClass { space, labels, members: forms, resolved })
    }

    /// `count` tables with independent uniform entries, labelled `t0, t1, …`.
    pub fn random_tables(space: SampleSpace, count: usize, seed: u64) -> Result<Self> {
        let size = space.support().ok_or_else(|| Error::domain("random tables need a finite sample space"))?.len();
        let mut rng = rng::stream(seed, StreamTag::CLASS, 0);
        let members = (0..count)
            .map(|i| {
                let values = (0..size).map(|_| rng::uniform(&mut rng)).collect();
                (format!("t{i}"), Member::Table { values })
            })
            .collect();
        Self::new(space, members)
    }

    /// Threshold functions `clamp((x − θ)/width, 0, 1)` over a grid of `θ`.
    pub fn threshold_grid(space: SampleSpace, thetas: &[f64], width: f64) -> Result<Self> {
        let members = thetas
            .iter()
            .enumerate()
            .map(|(i, &theta)| (format!("theta{i}"), Member::Threshold { theta, width }))
            .collect();
        Self::new(space, members)
    }

    pub fn space(&self) -> &SampleSpace {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, member: usize) -> &str {
        &self.labels[member]
    }

    pub fn members(&self) -> &[Member] {
        &self.members
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Evaluates member `member` at `x`.
    pub fn eval(&self, member: usize, x: f64) -> Result<f64> {
        match &self.resolved {
            Some(tables) => {
                let idx = self.space.index_of(x).ok_or_else(|| outside(x))?;
                Ok(tables[member][idx])
            }
            None => {
                if !self.space.contains(x) {
                    return Err(outside(x));
                }
                Ok(self.members[member].eval_parametric(x))
            }
        }
    }

    /// Writes `(f(x₁), …, f(xₙ))` for one member into `out`.
    pub fn eval_vector(&self, member: usize, x: &SampleVector, out: &mut [f64]) -> Result<()> {
        for (o, &xi) in out.iter_mut().zip(x.values()) {
            *o = self.eval(member, xi)?;
        }
        Ok(())
    }
}

fn outside(x: f64) -> Error {
    Error::domain(format!("coordinate {x} lies outside the sample space"))
}

/// The image `F(x) = {(f(x₁), …, f(xₙ)) : f ∈ F}`, one row per member in class order.
pub fn class_image(class: &FunctionClass, x: &SampleVector) -> Result<PointSet> {
    if x.is_empty() {
        return Err(Error::domain("sample vector is empty"));
    }
    let n = x.len();
    let mut image = PointSet::new(n);
    let mut row = vec![0.0; n];
    match &class.resolved {
        Some(tables) => {
            let idx: Vec<usize> = x
                .values()
                .iter()
                .map(|&xi| class.space.index_of(xi).ok_or_else(|| outside(xi)))
                .collect::<Result<_>>()?;
            for table in tables {
                for (r, &i) in row.iter_mut().zip(&idx) {
                    *r = table[i];
                }
                image.push(&row)?;
            }
        }
        None => {
            for m in 0..class.len() {
                class.eval_vector(m, x, &mut row)?;
                image.push(&row)?;
            }
        }
    }
    Ok(image)
}

/// Symmetric `±1` matrix with `r_ij = 1` inside a group and `−1` across groups.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SignMatrix {
    n: usize,
    entries: Vec<i8>,
}

impl SignMatrix {
    /// Validates a row-major matrix; diagonal entries are ignored.
    pub fn new(n: usize, entries: Vec<i8>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::domain(format!("sign matrix needs {} entries, got {}", n * n, entries.len())));
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let v = entries[i * n + j];
                if v != 1 && v != -1 {
                    return Err(Error::domain(format!("r[{i}][{j}] = {v} is not ±1")));
                }
                if v != entries[j * n + i] {
                    return Err(Error::domain(format!("sign matrix is not symmetric at ({i}, {j})")));
                }
            }
        }
        Ok(SignMatrix { n, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i8 {
        self.entries[i * self.n + j]
    }
}

/// Builds the class-separation sign matrix for consecutive groups.
pub fn make_class_separation_labels(group_sizes: &[usize]) -> Result<SignMatrix> {
    if group_sizes.is_empty() {
        return Err(Error::domain("group size list is empty"));
    }
    if group_sizes.contains(&0) {
        return Err(Error::domain("group sizes must be positive"));
    }
    let group_of: Vec<usize> =
        group_sizes.iter().enumerate().flat_map(|(g, &size)| core::iter::repeat_n(g, size)).collect();
    let n = group_of.len();
    let mut entries = vec![1i8; n * n];
    for i in 0..n {
        for j in 0..n {
            if group_of[i] != group_of[j] {
                entries[i * n + j] = -1;
            }
        }
    }
    Ok(SignMatrix { n, entries })
}

impl core::fmt::Display for SampleSpace {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SampleSpace::Finite { values, .. } => write!(f, "finite({} points)", values.len()),
            SampleSpace::UnitInterval => f.write_str("[0, 1]"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary() -> SampleSpace {
        SampleSpace::finite(&[0.0, 1.0]).unwrap()
    }

    #[test]
    fn point_mass_law_is_degenerate() {
        let space = SampleSpace::finite(&[0.7]).unwrap();
        let law = ProductLaw::iid(space, CoordinateDistribution::Uniform, 3).unwrap();
        assert_eq!(law.sample(5).values(), &[0.7, 0.7, 0.7]);

        let law =
            ProductLaw::iid(SampleSpace::unit_interval(), CoordinateDistribution::PointMass { value: 0.7 }, 3).unwrap();
        assert_eq!(law.sample(11).values(), &[0.7, 0.7, 0.7]);
    }

    #[test]
    fn sampling_is_seed_deterministic() {
        let law = ProductLaw::iid(binary(), CoordinateDistribution::Uniform, 2).unwrap();
        let a = law.sample(99);
        assert_eq!(a, law.sample(99));
        assert!(a.values().iter().all(|v| *v == 0.0 || *v == 1.0));

        let wide = ProductLaw::iid(binary(), CoordinateDistribution::Uniform, 64).unwrap();
        assert_ne!(wide.sample(1), wide.sample(2));
    }

    #[test]
    fn law_validation() {
        let bad = ProductLaw::iid(binary(), CoordinateDistribution::Weights { weights: vec![0.5, 0.6] }, 3);
        assert!(matches!(bad, Err(Error::Domain(_))));
        assert!(ProductLaw::iid(binary(), CoordinateDistribution::Uniform, 1).is_err());
        assert!(ProductLaw::iid(binary(), CoordinateDistribution::Kumaraswamy { a: 2.0, b: 2.0 }, 3).is_err());
        assert!(ProductLaw::iid(
            SampleSpace::finite(&[0.0, 0.5]).unwrap(),
            CoordinateDistribution::Bernoulli { p: 0.3 },
            3
        )
        .is_err());
        assert!(SampleSpace::finite(&[]).is_err());
        assert!(SampleSpace::finite(&[0.2, 1.2]).is_err());
        assert!(SampleSpace::finite(&[0.2, 0.2]).is_err());
    }

    #[test]
    fn kumaraswamy_samples_stay_in_unit_interval() {
        let law =
            ProductLaw::iid(SampleSpace::unit_interval(), CoordinateDistribution::Kumaraswamy { a: 2.0, b: 5.0 }, 50)
                .unwrap();
        let x = law.sample(4);
        assert!(x.values().iter().all(|v| (0.0..=1.0).contains(v)));
    }

    #[test]
    fn image_of_constants_and_identity() {
        let class = FunctionClass::new(
            SampleSpace::unit_interval(),
            vec![("zero".into(), Member::constant(0.0)), ("one".into(), Member::constant(1.0))],
        )
        .unwrap();
        let image = class_image(&class, &SampleVector(vec![0.3, 0.1, 0.9])).unwrap();
        assert_eq!(image.row(0), &[0.0, 0.0, 0.0]);
        assert_eq!(image.row(1), &[1.0, 1.0, 1.0]);

        let id = FunctionClass::new(SampleSpace::unit_interval(), vec![("id".into(), Member::identity())]).unwrap();
        let image = class_image(&id, &SampleVector(vec![0.2, 0.9])).unwrap();
        assert_eq!(image.len(), 1);
        assert_eq!(image.row(0), &[0.2, 0.9]);
    }

    #[test]
    fn image_rejects_points_outside_space() {
        let class = FunctionClass::random_tables(binary(), 3, 1).unwrap();
        let err = class_image(&class, &SampleVector(vec![0.0, 0.5])).unwrap_err();
        assert!(matches!(err, Error::Domain(_)));
        let id = FunctionClass::new(SampleSpace::unit_interval(), vec![("id".into(), Member::identity())]).unwrap();
        assert!(class_image(&id, &SampleVector(vec![1.5])).is_err());
    }

    #[test]
    fn class_validation() {
        let space = binary();
        assert!(FunctionClass::new(space.clone(), vec![]).is_err());
        let dup = vec![("a".into(), Member::constant(0.1)), ("a".into(), Member::constant(0.2))];
        assert!(FunctionClass::new(space.clone(), dup).is_err());
        let bad_table = vec![("a".into(), Member::Table { values: vec![0.1, 1.1] })];
        assert!(FunctionClass::new(space.clone(), bad_table).is_err());
        let short_table = vec![("a".into(), Member::Table { values: vec![0.1] })];
        assert!(FunctionClass::new(space, short_table).is_err());
        let table_on_interval = vec![("a".into(), Member::Table { values: vec![0.1] })];
        assert!(FunctionClass::new(SampleSpace::unit_interval(), table_on_interval).is_err());
        assert!(FunctionClass::threshold_grid(SampleSpace::unit_interval(), &[0.5], 0.0).is_err());
    }

    #[test]
    fn threshold_members_evaluate_on_finite_support() {
        let space = SampleSpace::finite(&[0.0, 0.25, 0.5, 0.75, 1.0]).unwrap();
        let class = FunctionClass::threshold_grid(space, &[0.25], 0.5).unwrap();
        let image = class_image(&class, &SampleVector(vec![0.0, 0.5, 1.0])).unwrap();
        assert_eq!(image.row(0), &[0.0, 0.5, 1.0]);
    }

    #[test]
    fn separation_labels() {
        let one = make_class_separation_labels(&[4]).unwrap();
        assert!((0..4).all(|i| (0..4).all(|j| one.get(i, j) == 1)));

        let pair = make_class_separation_labels(&[1, 1]).unwrap();
        assert_eq!(pair.get(0, 1), -1);

        let r = make_class_separation_labels(&[2, 3]).unwrap();
        let negatives =
            (0..5).flat_map(|i| (0..5).map(move |j| (i, j))).filter(|&(i, j)| i != j && r.get(i, j) == -1).count();
        assert_eq!(negatives, 12);
        assert_eq!(r.get(0, 1), 1);
        assert_eq!(r.get(2, 4), 1);
        assert_eq!(r.get(1, 2), -1);

        assert!(make_class_separation_labels(&[]).is_err());
        assert!(make_class_separation_labels(&[2, 0]).is_err());
    }

    #[test]
    fn sign_matrix_validation() {
        assert!(SignMatrix::new(2, vec![1, -1, -1, 1]).is_ok());
        assert!(SignMatrix::new(2, vec![1, -1, 1, 1]).is_err());
        assert!(SignMatrix::new(2, vec![1, 0, 0, 1]).is_err());
        assert!(SignMatrix::new(2, vec![1, 1, 1]).is_err());
    }
}

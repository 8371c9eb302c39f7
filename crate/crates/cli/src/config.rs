//! Experiment configuration schema.
//!
//! Configs are TOML (or JSON) documents. Parameterized entries such as
//! coordinate laws, class members and kernels are flat tables with a `kind`
//! key plus optional parameters, so that every missing or misplaced parameter
//! can be reported at once by [`crate::plan::validate`].

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Complexity,
    Constants,
    Deviate,
    Tail,
    Probe,
    FullReport,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Complexity => "complexity",
            ExperimentKind::Constants => "constants",
            ExperimentKind::Deviate => "deviate",
            ExperimentKind::Tail => "tail",
            ExperimentKind::Probe => "probe",
            ExperimentKind::FullReport => "full-report",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub law: Option<LawSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<ClassSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statistic: Option<StatisticSpec>,
    #[serde(default)]
    pub constants: ConstantsSpec,
    #[serde(default)]
    pub expectation: ExpectationSpec,
    #[serde(default)]
    pub complexity: ComplexitySpec,
    #[serde(default)]
    pub deviation: DeviationSpec,
    #[serde(default)]
    pub tail: TailSpec,
    #[serde(default)]
    pub probe: ProbeSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawSpec {
    pub n: usize,
    pub space: SpaceSpec,
    /// Shared law of every coordinate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinate: Option<CoordinateSpec>,
    /// One law per coordinate; exclusive with `coordinate`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coordinates: Option<Vec<CoordinateSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceSpec {
    /// `finite` or `unit-interval`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoordinateSpec {
    /// `uniform`, `weights`, `point-mass`, `bernoulli` or `kumaraswamy`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSpec {
    /// `random-tables`, `threshold-grid` or `explicit`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    /// Seed for `random-tables`; defaults to the root seed.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub thetas: Option<Grid>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<MemberSpec>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberSpec {
    pub label: String,
    /// `table`, `threshold`, `affine-clipped`, `constant` or `identity`.
    pub form: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slope: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub intercept: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatisticSpec {
    /// `mean`, `variance`, `class-separation` or `u-statistic`.
    pub name: String,
    /// Arity; defaults to the law's `n`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Group sizes for `class-separation`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub groups: Option<Vec<usize>>,
    /// Explicit sign matrix for `class-separation`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<Vec<i8>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel: Option<KernelSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelSpec {
    /// `identity`, `constant`, `half-squared-difference`, `product` or `smooth-min`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temperature: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_d1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sup_d12: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ConstantsSpec {
    /// `auto`, `closed-form`, `derived-bound` or `numeric`.
    pub route: String,
    /// Permit numeric (lower-bound) constants in bound assembly.
    pub allow_numeric: bool,
    pub probes: usize,
    pub fd_step: f64,
    /// Also run the numeric estimator and check it stays below the route's values.
    pub cross_check: bool,
}

impl Default for ConstantsSpec {
    fn default() -> Self {
        ConstantsSpec {
            route: "auto".into(),
            allow_numeric: false,
            probes: 100,
            fd_step: unibound_core::constants::DEFAULT_FD_STEP,
            cross_check: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExpectationSpec {
    /// `auto`, `exact`, `moments` or `monte-carlo`.
    pub method: String,
    pub replicas: usize,
}

impl Default for ExpectationSpec {
    fn default() -> Self {
        ExpectationSpec { method: "auto".into(), replicas: 100_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ComplexitySpec {
    pub draws: usize,
    /// Any of `exact`, `rademacher-mc`, `gaussian-mc`; by default `exact` is
    /// included when the dimension allows it.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub methods: Option<Vec<String>>,
}

impl Default for ComplexitySpec {
    fn default() -> Self {
        ComplexitySpec { draws: 100_000, methods: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DeviationSpec {
    pub c: f64,
    pub delta: f64,
    pub replications: usize,
    pub gaussian_draws: usize,
    /// Run the symmetrization check (mean statistic only).
    pub symmetrization: bool,
    pub rademacher_draws: usize,
}

impl Default for DeviationSpec {
    fn default() -> Self {
        DeviationSpec {
            c: 1.0,
            delta: 0.1,
            replications: 1000,
            gaussian_draws: 2000,
            symmetrization: true,
            rademacher_draws: 2000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TailSpec {
    /// Member label; defaults to the first member.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub member: Option<String>,
    pub t_grid: Grid,
    pub replicas: usize,
    /// `auto`, `exhaustive`, `sampled` or `lipschitz`.
    pub delta_search: String,
    pub delta_samples: usize,
}

impl Default for TailSpec {
    fn default() -> Self {
        TailSpec {
            member: None,
            t_grid: Grid::Range { min: 0.0, max: 0.5, count: 10 },
            replicas: 100_000,
            delta_search: "auto".into(),
            delta_samples: 10_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ProbeSpec {
    /// `[f, g]` label pairs; defaults to the first two members.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pairs: Option<Vec<[String; 2]>>,
    pub s_grid: Grid,
    pub replicas: usize,
    /// Fixed points; sampled from the law when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub x_prime: Option<Vec<f64>>,
}

impl Default for ProbeSpec {
    fn default() -> Self {
        ProbeSpec {
            pairs: None,
            s_grid: Grid::Range { min: 0.0, max: 1.0, count: 8 },
            replicas: 100_000,
            x: None,
            x_prime: None,
        }
    }
}

/// An explicit list or an evenly spaced `(min, max, count)` range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Grid {
    List(Vec<f64>),
    Range { min: f64, max: f64, count: usize },
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        match self {
            Grid::List(v) => v.clone(),
            Grid::Range { min, max, count } => unibound_core::numeric::linspace(*min, *max, *count),
        }
    }
}

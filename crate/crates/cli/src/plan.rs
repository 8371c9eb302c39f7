//! Config loading, validation and construction of the domain objects.

use std::fmt;
use std::path::Path;

use serde::Serialize;
use unibound_core::complexity::{EXACT_DIMENSION_CAP, MIN_DRAWS};
use unibound_core::constants::{closed_form_constants, u_statistic_constant_bounds};
use unibound_core::deviation::{ExpectationRequest, DELTA_SEARCH_CAP, EXACT_ENUMERATION_CAP, MIN_REPLICATIONS};
use unibound_core::function_class::{
    make_class_separation_labels, CoordinateDistribution, FunctionClass, Member, ProductLaw, SampleSpace, SampleVector,
    SignMatrix,
};
use unibound_core::statistics::{
    class_separation_statistic, mean_statistic, sample_variance_statistic, u_statistic, Kernel, KernelKind, Statistic,
};
use unibound_core::Error as CoreError;

use crate::config::*;
use crate::error::CliError;

pub const STATISTICS: &[&str] = &["mean", "variance", "class-separation", "u-statistic"];
pub const KERNELS: &[&str] = &["identity", "constant", "half-squared-difference", "product", "smooth-min"];
pub const CLASS_KINDS: &[&str] = &["random-tables", "threshold-grid", "explicit"];
pub const MEMBER_FORMS: &[&str] = &["table", "threshold", "affine-clipped", "constant", "identity"];
pub const SPACES: &[&str] = &["finite", "unit-interval"];
pub const COORDINATES: &[&str] = &["uniform", "weights", "point-mass", "bernoulli", "kumaraswamy"];
pub const ROUTES: &[&str] = &["auto", "closed-form", "derived-bound", "numeric"];
pub const EXPECTATIONS: &[&str] = &["auto", "exact", "moments", "monte-carlo"];
pub const COMPLEXITY_METHODS: &[&str] = &["exact", "rademacher-mc", "gaussian-mc"];
pub const DELTA_SEARCHES: &[&str] = &["auto", "exhaustive", "sampled", "lipschitz"];
/// Largest class a config may request.
pub const MAX_CLASS_SIZE: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Severity {
    Config,
    Resource,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub field: String,
    pub message: String,
    pub severity: Severity,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.field, self.message)
    }
}

/// Reads a TOML or JSON config. A JSON result record is accepted too, in
/// which case its `config` echo is used.
pub fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let mut ignored = Vec::new();
    let parsed = if is_json {
        let mut value: serde_json::Value =
            serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))?;
        if value.get("artifact").is_some() {
            if let Some(echo) = value.get_mut("config") {
                value = echo.take();
            }
        }
        serde_ignored::deserialize(value, |p| ignored.push(p.to_string())).map_err(|e: serde_json::Error| e.to_string())
    } else {
        let value: toml::Table =
            text.parse().map_err(|e: toml::de::Error| CliError::Parse(format!("{}: {e}", path.display())))?;
        serde_ignored::deserialize(value, |p| ignored.push(p.to_string())).map_err(|e: toml::de::Error| e.to_string())
    };
    let config = parsed.map_err(|e| CliError::Parse(format!("{}: {}", path.display(), e.trim_end())))?;
    if !ignored.is_empty() {
        return Err(CliError::Invalid(
            ignored
                .into_iter()
                .map(|field| Violation { field, message: "unknown key".into(), severity: Severity::Config })
                .collect(),
        ));
    }
    Ok(config)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    ClosedForm,
    DerivedBound,
    Numeric,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaRoute {
    Exhaustive,
    Sampled,
    Lipschitz,
}

/// A validated config with its domain objects built.
pub struct Plan {
    /// The resolved config; re-running it reproduces the run.
    pub config: ExperimentConfig,
    pub law: Option<ProductLaw>,
    pub class: Option<FunctionClass>,
    pub statistic: Option<Box<dyn Statistic>>,
    pub kernel: Option<Kernel>,
    pub route: Option<Route>,
    pub allow_numeric: bool,
    pub expectation: ExpectationRequest,
    pub complexity_methods: Vec<String>,
    pub delta_route: Option<DeltaRoute>,
    pub tail_member: usize,
    pub probe_pairs: Vec<(usize, usize)>,
    pub probe_points: Option<(SampleVector, SampleVector)>,
}

struct Collector {
    violations: Vec<Violation>,
}

impl Collector {
    fn config(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation { field: field.into(), message: message.into(), severity: Severity::Config });
    }

    fn resource(&mut self, field: impl Into<String>, message: impl Into<String>) {
        self.violations.push(Violation { field: field.into(), message: message.into(), severity: Severity::Resource });
    }

    fn core(&mut self, field: &str, err: CoreError) {
        match err {
            CoreError::Resource(m) => self.resource(field, m),
            other => self.config(field, other.to_string()),
        }
    }

    fn one_of(&mut self, field: &str, what: &str, value: &str, allowed: &[&str]) -> bool {
        if allowed.contains(&value) {
            true
        } else {
            self.config(field, format!("unknown {what} \"{value}\"; supported: {}", allowed.join(", ")));
            false
        }
    }

    fn require<T: Copy>(&mut self, field: &str, value: Option<T>) -> Option<T> {
        if value.is_none() {
            self.config(field, "missing required parameter");
        }
        value
    }
}

fn needs(kind: ExperimentKind) -> (bool, bool, bool) {
    use ExperimentKind::*;
    // (law, class, statistic)
    match kind {
        Complexity => (true, true, false),
        Constants => (false, false, true),
        Deviate | Tail | Probe | FullReport => (true, true, true),
    }
}

fn uses_bound(kind: ExperimentKind) -> bool {
    matches!(kind, ExperimentKind::Deviate | ExperimentKind::Probe | ExperimentKind::FullReport)
}

/// Checks every field and builds the domain objects, reporting all
/// violations found.
pub fn validate(mut config: ExperimentConfig, override_numeric: bool) -> Result<Plan, Vec<Violation>> {
    let mut c = Collector { violations: Vec::new() };
    let kind = config.kind;
    let (need_law, need_class, need_stat) = needs(kind);

    if let Some(class) = config.class.as_mut() {
        if class.kind == "random-tables" && class.seed.is_none() {
            class.seed = Some(config.seed);
        }
    }
    if let (Some(stat), Some(law)) = (config.statistic.as_mut(), config.law.as_ref()) {
        if stat.n.is_none() {
            stat.n = Some(law.n);
        }
    }

    for (present, name, needed) in [
        (config.law.is_some(), "law", need_law),
        (config.class.is_some(), "class", need_class),
        (config.statistic.is_some(), "statistic", need_stat),
    ] {
        if needed && !present {
            c.config(name, format!("section is required for kind \"{}\"", kind.name()));
        }
    }

    let law = config.law.as_ref().and_then(|spec| build_law(&mut c, spec));
    let space = law.as_ref().map(|l| l.space().clone());
    let class = match (config.class.as_ref(), space.as_ref()) {
        (Some(spec), Some(space)) => build_class(&mut c, spec, space),
        (Some(_), None) if need_class => {
            c.config("class", "a class needs the law section for its sample space");
            None
        }
        _ => None,
    };
    let (statistic, kernel) = match config.statistic.as_ref() {
        Some(spec) => build_statistic(&mut c, spec),
        None => (None, None),
    };
    if let (Some(stat), Some(law)) = (statistic.as_ref(), law.as_ref()) {
        if stat.arity() != law.n() {
            c.config("statistic.n", format!("arity {} differs from law.n = {}", stat.arity(), law.n()));
        }
    }

    let allow_numeric = config.constants.allow_numeric || override_numeric;
    let route = check_constants(&mut c, &config, statistic.as_deref(), kernel.as_ref(), allow_numeric);
    let expectation = check_expectation(&mut c, &config, law.as_ref(), statistic.as_deref());
    let complexity_methods = check_complexity(&mut c, &config, law.as_ref());
    check_deviation(&mut c, &config.deviation);
    let (delta_route, tail_member) = check_tail(&mut c, &config, law.as_ref(), class.as_ref(), route, allow_numeric);
    let (probe_pairs, probe_points) = check_probe(&mut c, &config, law.as_ref(), class.as_ref());

    if !c.violations.is_empty() {
        return Err(c.violations);
    }
    Ok(Plan {
        config,
        law,
        class,
        statistic,
        kernel,
        route,
        allow_numeric,
        expectation,
        complexity_methods,
        delta_route,
        tail_member,
        probe_pairs,
        probe_points,
    })
}

fn build_space(c: &mut Collector, spec: &SpaceSpec) -> Option<SampleSpace> {
    if !c.one_of("law.space.kind", "sample space", &spec.kind, SPACES) {
        return None;
    }
    if spec.kind == "unit-interval" {
        if spec.values.is_some() || spec.labels.is_some() {
            c.config("law.space", "the unit interval takes no values or labels");
        }
        return Some(SampleSpace::unit_interval());
    }
    let values = match &spec.values {
        Some(v) => v.clone(),
        None => {
            c.config("law.space.values", "missing required parameter");
            return None;
        }
    };
    let built = match &spec.labels {
        Some(labels) => SampleSpace::finite_labeled(labels.clone(), values),
        None => SampleSpace::finite(&values),
    };
    built.map_err(|e| c.core("law.space", e)).ok()
}

fn build_coordinate(c: &mut Collector, field: &str, spec: &CoordinateSpec) -> Option<CoordinateDistribution> {
    if !c.one_of(&format!("{field}.kind"), "coordinate law", &spec.kind, COORDINATES) {
        return None;
    }
    let param = |c: &mut Collector, name: &str, v: Option<f64>| c.require(&format!("{field}.{name}"), v);
    Some(match spec.kind.as_str() {
        "uniform" => CoordinateDistribution::Uniform,
        "weights" => match &spec.weights {
            Some(w) => CoordinateDistribution::Weights { weights: w.clone() },
            None => {
                c.config(format!("{field}.weights"), "missing required parameter");
                return None;
            }
        },
        "point-mass" => CoordinateDistribution::PointMass { value: param(c, "value", spec.value)? },
        "bernoulli" => CoordinateDistribution::Bernoulli { p: param(c, "p", spec.p)? },
        _ => {
            let a = param(c, "a", spec.a);
            let b = param(c, "b", spec.b);
            CoordinateDistribution::Kumaraswamy { a: a?, b: b? }
        }
    })
}

fn build_law(c: &mut Collector, spec: &LawSpec) -> Option<ProductLaw> {
    if spec.n < 2 {
        c.config("law.n", format!("must be at least 2, got {}", spec.n));
    }
    let space = build_space(c, &spec.space);
    let coords: Option<Vec<CoordinateDistribution>> = match (&spec.coordinate, &spec.coordinates) {
        (Some(one), None) => build_coordinate(c, "law.coordinate", one).map(|d| vec![d; spec.n]),
        (None, Some(list)) => {
            if list.len() != spec.n {
                c.config("law.coordinates", format!("expected {} entries, got {}", spec.n, list.len()));
            }
            list.iter()
                .enumerate()
                .map(|(i, s)| build_coordinate(c, &format!("law.coordinates[{i}]"), s))
                .collect::<Vec<_>>()
                .into_iter()
                .collect()
        }
        _ => {
            c.config("law", "exactly one of `coordinate` or `coordinates` is required");
            None
        }
    };
    let (space, coords) = (space?, coords?);
    if spec.n < 2 || coords.len() != spec.n {
        return None;
    }
    ProductLaw::new(space, coords).map_err(|e| c.core("law", e)).ok()
}

fn build_member(c: &mut Collector, field: &str, spec: &MemberSpec) -> Option<(String, Member)> {
    if !c.one_of(&format!("{field}.form"), "member form", &spec.form, MEMBER_FORMS) {
        return None;
    }
    let param = |c: &mut Collector, name: &str, v: Option<f64>| c.require(&format!("{field}.{name}"), v);
    let member = match spec.form.as_str() {
        "table" => match &spec.values {
            Some(v) => Member::Table { values: v.clone() },
            None => {
                c.config(format!("{field}.values"), "missing required parameter");
                return None;
            }
        },
        "threshold" => {
            let theta = param(c, "theta", spec.theta);
            let width = param(c, "width", spec.width);
            Member::Threshold { theta: theta?, width: width? }
        }
        "affine-clipped" => {
            let slope = param(c, "slope", spec.slope);
            let intercept = param(c, "intercept", spec.intercept);
            Member::AffineClipped { slope: slope?, intercept: intercept? }
        }
        "constant" => Member::constant(param(c, "value", spec.value)?),
        _ => Member::identity(),
    };
    Some((spec.label.clone(), member))
}

fn build_class(c: &mut Collector, spec: &ClassSpec, space: &SampleSpace) -> Option<FunctionClass> {
    if !c.one_of("class.kind", "class", &spec.kind, CLASS_KINDS) {
        return None;
    }
    let built = match spec.kind.as_str() {
        "random-tables" => {
            let count = c.require("class.count", spec.count)?;
            if count > MAX_CLASS_SIZE {
                c.resource("class.count", format!("{count} members exceeds the cap of {MAX_CLASS_SIZE}"));
                return None;
            }
            FunctionClass::random_tables(space.clone(), count, spec.seed.unwrap_or_default())
        }
        "threshold-grid" => {
            let width = c.require("class.width", spec.width);
            let thetas = spec.thetas.as_ref().map(Grid::points);
            if thetas.is_none() {
                c.config("class.thetas", "missing required parameter");
            }
            FunctionClass::threshold_grid(space.clone(), &thetas?, width?)
        }
        _ => {
            let Some(members) = &spec.members else {
                c.config("class.members", "missing required parameter");
                return None;
            };
            let built: Vec<_> =
                members.iter().enumerate().map(|(i, m)| build_member(c, &format!("class.members[{i}]"), m)).collect();
            FunctionClass::new(space.clone(), built.into_iter().collect::<Option<Vec<_>>>()?)
        }
    };
    built.map_err(|e| c.core("class", e)).ok()
}

fn build_kernel(c: &mut Collector, spec: &KernelSpec) -> Option<Kernel> {
    if !c.one_of("statistic.kernel.kind", "kernel", &spec.kind, KERNELS) {
        return None;
    }
    let kind = match spec.kind.as_str() {
        "identity" => KernelKind::Identity,
        "half-squared-difference" => KernelKind::HalfSquaredDifference,
        "constant" => {
            let order = c.require("statistic.kernel.order", spec.order);
            let value = c.require("statistic.kernel.value", spec.value);
            KernelKind::Constant { order: order?, value: value? }
        }
        "product" => KernelKind::Product { order: c.require("statistic.kernel.order", spec.order)? },
        _ => KernelKind::SmoothMin { temperature: c.require("statistic.kernel.temperature", spec.temperature)? },
    };
    let mut kernel = Kernel::new(kind).map_err(|e| c.core("statistic.kernel", e)).ok()?;
    if spec.sup_d1.is_some() || spec.sup_d12.is_some() {
        let d1 = spec.sup_d1.or(kernel.sup_d1());
        let d12 = spec.sup_d12.or(kernel.sup_d12());
        kernel = kernel.with_bounds(d1, d12).map_err(|e| c.core("statistic.kernel", e)).ok()?;
    }
    Some(kernel)
}

fn build_statistic(c: &mut Collector, spec: &StatisticSpec) -> (Option<Box<dyn Statistic>>, Option<Kernel>) {
    if !c.one_of("statistic.name", "statistic", &spec.name, STATISTICS) {
        return (None, None);
    }
    let Some(n) = spec.n else {
        c.config("statistic.n", "missing; give statistic.n or a law section");
        return (None, None);
    };
    let wrap =
        |c: &mut Collector, r: unibound_core::Result<Box<dyn Statistic>>| r.map_err(|e| c.core("statistic", e)).ok();
    match spec.name.as_str() {
        "mean" => (wrap(c, mean_statistic(n).map(|s| Box::new(s) as Box<dyn Statistic>)), None),
        "variance" => (wrap(c, sample_variance_statistic(n).map(|s| Box::new(s) as Box<dyn Statistic>)), None),
        "class-separation" => {
            let labels: Option<SignMatrix> = match (&spec.groups, &spec.labels) {
                (Some(groups), None) => {
                    let sum: usize = groups.iter().sum();
                    if sum != n {
                        c.config("statistic.groups", format!("group sizes sum to {sum}, expected {n}"));
                        None
                    } else {
                        make_class_separation_labels(groups).map_err(|e| c.core("statistic.groups", e)).ok()
                    }
                }
                (None, Some(rows)) => {
                    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                        c.config("statistic.labels", format!("expected a {n}x{n} matrix"));
                        None
                    } else {
                        SignMatrix::new(n, rows.concat()).map_err(|e| c.core("statistic.labels", e)).ok()
                    }
                }
                _ => {
                    c.config("statistic", "class-separation needs exactly one of `groups` or `labels`");
                    None
                }
            };
            let stat = labels
                .and_then(|l| wrap(c, class_separation_statistic(n, l).map(|s| Box::new(s) as Box<dyn Statistic>)));
            (stat, None)
        }
        _ => {
            let Some(kspec) = &spec.kernel else {
                c.config("statistic.kernel", "u-statistic needs a kernel");
                return (None, None);
            };
            let Some(kernel) = build_kernel(c, kspec) else {
                return (None, None);
            };
            let stat = wrap(c, u_statistic(n, kernel.clone()).map(|s| Box::new(s) as Box<dyn Statistic>));
            (stat, Some(kernel))
        }
    }
}

fn check_constants(
    c: &mut Collector,
    config: &ExperimentConfig,
    stat: Option<&dyn Statistic>,
    kernel: Option<&Kernel>,
    allow_numeric: bool,
) -> Option<Route> {
    let spec = &config.constants;
    if spec.probes == 0 {
        c.config("constants.probes", "must be at least 1");
    }
    if !(1e-7..=1e-2).contains(&spec.fd_step) {
        c.config("constants.fd_step", format!("must lie in [1e-7, 1e-2], got {}", spec.fd_step));
    }
    if !c.one_of("constants.route", "constants route", &spec.route, ROUTES) {
        return None;
    }
    let stat = stat?;
    let n = stat.arity();
    let closed = closed_form_constants(stat).is_ok();
    let derived = kernel.is_some_and(|k| u_statistic_constant_bounds(n, k).is_ok());
    let route = match spec.route.as_str() {
        "closed-form" => {
            if !closed {
                c.config("constants.route", format!("statistic {} has no closed-form constants", stat.name()));
            }
            Route::ClosedForm
        }
        "derived-bound" => {
            if !derived {
                c.config(
                    "constants.route",
                    "derived bounds need a u-statistic whose kernel declares derivative bounds",
                );
            }
            Route::DerivedBound
        }
        "numeric" => Route::Numeric,
        _ if closed => Route::ClosedForm,
        _ if derived => Route::DerivedBound,
        _ => Route::Numeric,
    };
    if route == Route::Numeric && uses_bound(config.kind) && !allow_numeric {
        c.config(
            "constants.route",
            "numeric constants are sampled suprema (lower bounds) and are refused for bound assembly; \
             set constants.allow_numeric = true or pass --override-numeric-constants",
        );
    }
    Some(route)
}

fn check_expectation(
    c: &mut Collector,
    config: &ExperimentConfig,
    law: Option<&ProductLaw>,
    stat: Option<&dyn Statistic>,
) -> ExpectationRequest {
    let spec = &config.expectation;
    let seed = config.seed;
    let replicas = spec.replicas;
    let fallback = ExpectationRequest::Auto { replicas, seed };
    if !c.one_of("expectation.method", "expectation method", &spec.method, EXPECTATIONS) {
        return fallback;
    }
    let needed = matches!(config.kind, ExperimentKind::Deviate | ExperimentKind::Tail | ExperimentKind::FullReport);
    let mc_possible = || law.is_some_and(|l| l.support_size().is_none_or(|s| s > EXACT_ENUMERATION_CAP));
    let request = match spec.method.as_str() {
        "exact" => ExpectationRequest::Exact,
        "moments" => ExpectationRequest::Moments,
        "monte-carlo" => ExpectationRequest::MonteCarlo { replicas, seed },
        _ => fallback,
    };
    if !needed {
        return request;
    }
    let (Some(law), Some(stat)) = (law, stat) else {
        return request;
    };
    let moments_ok = law.atoms().is_some() && {
        let n = stat.arity();
        stat.moment_expectation(&vec![0.5; n], &vec![0.25; n]).is_some()
    };
    match request {
        ExpectationRequest::Exact => match law.support_size() {
            None => c.config("expectation.method", "exact enumeration needs a finite sample space"),
            Some(s) if s > EXACT_ENUMERATION_CAP => c.resource(
                "expectation.method",
                format!("exact enumeration would visit {s} points, above the cap of {EXACT_ENUMERATION_CAP}"),
            ),
            _ => {}
        },
        ExpectationRequest::Moments if !moments_ok => {
            c.config("expectation.method", format!("statistic {} has no moment form on this law", stat.name()))
        }
        ExpectationRequest::MonteCarlo { .. } if replicas < 2 => c.config("expectation.replicas", "must be at least 2"),
        ExpectationRequest::Auto { .. } if !moments_ok && mc_possible() && replicas < 2 => {
            c.config("expectation.replicas", "must be at least 2")
        }
        _ => {}
    }
    request
}

fn check_complexity(c: &mut Collector, config: &ExperimentConfig, law: Option<&ProductLaw>) -> Vec<String> {
    let spec = &config.complexity;
    if spec.draws < MIN_DRAWS {
        c.config("complexity.draws", format!("must be at least {MIN_DRAWS}, got {}", spec.draws));
    }
    let n = law.map_or(0, ProductLaw::n);
    let methods: Vec<String> = match &spec.methods {
        Some(m) => {
            if m.is_empty() {
                c.config("complexity.methods", "must name at least one method");
            }
            for (i, name) in m.iter().enumerate() {
                c.one_of(&format!("complexity.methods[{i}]"), "complexity method", name, COMPLEXITY_METHODS);
            }
            m.clone()
        }
        None => {
            let mut m = vec!["rademacher-mc".to_string(), "gaussian-mc".to_string()];
            if n <= EXACT_DIMENSION_CAP {
                m.insert(0, "exact".into());
            }
            m
        }
    };
    let relevant = matches!(config.kind, ExperimentKind::Complexity | ExperimentKind::FullReport);
    if relevant && n > EXACT_DIMENSION_CAP && methods.iter().any(|m| m == "exact") {
        c.resource(
            "complexity.methods",
            format!("exact enumeration needs n <= {EXACT_DIMENSION_CAP}, law has n = {n}"),
        );
    }
    methods
}

fn check_deviation(c: &mut Collector, spec: &DeviationSpec) {
    if !(spec.c > 0.0 && spec.c.is_finite()) {
        c.config("deviation.c", format!("must be positive and finite, got {}", spec.c));
    }
    if !(spec.delta > 0.0 && spec.delta < 1.0) {
        c.config("deviation.delta", format!("must lie in the open interval (0, 1), got {}", spec.delta));
    }
    if spec.replications < MIN_REPLICATIONS {
        c.config("deviation.replications", format!("must be at least {MIN_REPLICATIONS}, got {}", spec.replications));
    }
    for (field, v) in
        [("deviation.gaussian_draws", spec.gaussian_draws), ("deviation.rademacher_draws", spec.rademacher_draws)]
    {
        if v < MIN_DRAWS {
            c.config(field, format!("must be at least {MIN_DRAWS}, got {v}"));
        }
    }
}

fn check_grid(c: &mut Collector, field: &str, grid: &Grid) {
    if let Grid::Range { min, max, count } = grid {
        if *count == 0 || !(min.is_finite() && max.is_finite()) || min > max {
            c.config(field, "range needs finite min <= max and count >= 1");
        }
    }
    let points = grid.points();
    if points.is_empty() || points.iter().any(|t| !t.is_finite()) {
        c.config(field, "grid must be a non-empty list of finite values");
    }
}

fn check_tail(
    c: &mut Collector,
    config: &ExperimentConfig,
    law: Option<&ProductLaw>,
    class: Option<&FunctionClass>,
    route: Option<Route>,
    allow_numeric: bool,
) -> (Option<DeltaRoute>, usize) {
    let spec = &config.tail;
    check_grid(c, "tail.t_grid", &spec.t_grid);
    if spec.replicas == 0 {
        c.config("tail.replicas", "must be at least 1");
    }
    if spec.delta_samples == 0 {
        c.config("tail.delta_samples", "must be at least 1");
    }
    let mut member = 0;
    if let (Some(label), Some(class)) = (&spec.member, class) {
        match class.position(label) {
            Some(p) => member = p,
            None => c.config("tail.member", format!("no class member labelled \"{label}\"")),
        }
    }
    if !c.one_of("tail.delta_search", "delta search", &spec.delta_search, DELTA_SEARCHES) {
        return (None, member);
    }
    let relevant = matches!(config.kind, ExperimentKind::Tail | ExperimentKind::FullReport);
    let Some(law) = law else {
        return (None, member);
    };
    let grid = law
        .space()
        .support()
        .map(|s| u32::try_from(law.n()).ok().and_then(|e| (s.len() as u64).checked_pow(e)).unwrap_or(u64::MAX));
    let delta_route = match spec.delta_search.as_str() {
        "exhaustive" => DeltaRoute::Exhaustive,
        "sampled" => DeltaRoute::Sampled,
        "lipschitz" => DeltaRoute::Lipschitz,
        _ => match grid {
            Some(g) if g <= DELTA_SEARCH_CAP => DeltaRoute::Exhaustive,
            _ => DeltaRoute::Lipschitz,
        },
    };
    if relevant {
        match (delta_route, grid) {
            (DeltaRoute::Exhaustive | DeltaRoute::Sampled, None) => {
                c.config("tail.delta_search", "swing enumeration needs a finite sample space; use \"lipschitz\"")
            }
            (DeltaRoute::Exhaustive, Some(g)) if g > DELTA_SEARCH_CAP => c.resource(
                "tail.delta_search",
                format!("exhaustive search would visit {g} points, above the cap of {DELTA_SEARCH_CAP}"),
            ),
            (DeltaRoute::Lipschitz, _) if route == Some(Route::Numeric) && !allow_numeric => c.config(
                "tail.delta_search",
                "the lipschitz route needs upper-bound constants; numeric constants require an override",
            ),
            _ => {}
        }
    }
    (Some(delta_route), member)
}

fn check_point(c: &mut Collector, field: &str, law: &ProductLaw, x: &[f64]) -> Option<SampleVector> {
    if x.len() != law.n() {
        c.config(field, format!("expected {} coordinates, got {}", law.n(), x.len()));
        return None;
    }
    if let Some(bad) = x.iter().find(|v| !law.space().contains(**v)) {
        c.config(field, format!("coordinate {bad} lies outside the sample space"));
        return None;
    }
    Some(SampleVector::from(x.to_vec()))
}

type ProbeTargets = (Vec<(usize, usize)>, Option<(SampleVector, SampleVector)>);

fn check_probe(
    c: &mut Collector,
    config: &ExperimentConfig,
    law: Option<&ProductLaw>,
    class: Option<&FunctionClass>,
) -> ProbeTargets {
    let spec = &config.probe;
    check_grid(c, "probe.s_grid", &spec.s_grid);
    if spec.replicas == 0 {
        c.config("probe.replicas", "must be at least 1");
    }
    let relevant = matches!(config.kind, ExperimentKind::Probe | ExperimentKind::FullReport);
    let mut pairs = Vec::new();
    if let Some(class) = class {
        match &spec.pairs {
            Some(list) => {
                if list.is_empty() {
                    c.config("probe.pairs", "must list at least one pair");
                }
                for (i, [f, g]) in list.iter().enumerate() {
                    let field = format!("probe.pairs[{i}]");
                    match (class.position(f), class.position(g)) {
                        (Some(a), Some(b)) if a != b => pairs.push((a, b)),
                        (Some(_), Some(_)) => c.config(field, "a pair needs two distinct members"),
                        _ => c.config(field, format!("unknown member label in [{f}, {g}]")),
                    }
                }
            }
            None if class.len() >= 2 => pairs.push((0, 1)),
            None if relevant => c.config("probe.pairs", "the probe needs a class with at least two members"),
            None => {}
        }
    }
    let points = match (law, &spec.x, &spec.x_prime) {
        (Some(law), Some(x), Some(xp)) => {
            let a = check_point(c, "probe.x", law, x);
            let b = check_point(c, "probe.x_prime", law, xp);
            a.zip(b)
        }
        (_, None, None) => None,
        _ => {
            c.config("probe", "give both `x` and `x_prime`, or neither");
            None
        }
    };
    (pairs, points)
}

//! The experiment stages behind each config kind.

use std::time::Instant;

use serde_json::{json, Map, Value};
use unibound_core::complexity::{comparison_report, gaussian_mc, rademacher_exact, rademacher_mc, ComplexityEstimate};
use unibound_core::constants::{
    closed_form_constants, estimate_constants_numeric, u_statistic_constant_bounds, ConstantsReport,
};
use unibound_core::deviation::{
    delta_squared_sup, deviation_experiment, expectation_oracle, lipschitz_delta_squared_bound, process_probe,
    symmetrization_check_mean, tail_simulation, DeltaSearch, DeviationReport, DeviationSettings, ExpectationOracle,
    ProbeSettings, SymmetrizationSettings,
};
use unibound_core::function_class::{class_image, FunctionClass, ProductLaw};
use unibound_core::rng::{self, StreamTag};
use unibound_core::statistics::{compose, Statistic, StatisticKind};
use unibound_core::Executor;

use crate::config::ExperimentKind;
use crate::error::CliError;
use crate::output::{real, Check, Table, Timing};
use crate::plan::{DeltaRoute, Plan, Route};

/// Stream tag for the fixed points of the process probe.
const PROBE_SAMPLE: StreamTag = StreamTag::from_name(b"probex");

#[derive(Debug, Default)]
pub struct RunOutput {
    pub outputs: Map<String, Value>,
    pub table: Table,
    pub checks: Vec<Check>,
    pub summary: Vec<String>,
    pub timing: Vec<Timing>,
}

impl RunOutput {
    fn timed<T>(&mut self, stage: &str, f: impl FnOnce(&mut Self) -> Result<T, CliError>) -> Result<T, CliError> {
        let start = Instant::now();
        let out = f(self)?;
        self.timing.push(Timing { stage: stage.into(), seconds: start.elapsed().as_secs_f64() });
        Ok(out)
    }

    fn put(&mut self, key: &str, value: impl serde::Serialize) -> Result<(), CliError> {
        let v = serde_json::to_value(value).map_err(|e| CliError::Io(e.to_string()))?;
        self.outputs.insert(key.into(), v);
        Ok(())
    }
}

struct Parts<'a> {
    law: &'a ProductLaw,
    class: &'a FunctionClass,
    stat: &'a dyn Statistic,
}

fn parts(plan: &Plan) -> Parts<'_> {
    Parts {
        law: plan.law.as_ref().expect("validated plan has a law"),
        class: plan.class.as_ref().expect("validated plan has a class"),
        stat: plan.statistic.as_deref().expect("validated plan has a statistic"),
    }
}

pub fn execute<E: Executor>(plan: &Plan, exec: &E) -> Result<RunOutput, CliError> {
    let mut out = RunOutput::default();
    match plan.config.kind {
        ExperimentKind::Complexity => {
            out.table = complexity(plan, exec, &mut out)?;
        }
        ExperimentKind::Constants => {
            let (_, table) = constants(plan, &mut out)?;
            out.table = table;
        }
        ExperimentKind::Deviate => {
            let (k, _) = constants(plan, &mut out)?;
            let oracle = oracle(plan, exec, &mut out)?;
            out.table = deviate(plan, &k, &oracle, exec, &mut out)?;
        }
        ExperimentKind::Tail => {
            let k =
                if plan.delta_route == Some(DeltaRoute::Lipschitz) { Some(constants(plan, &mut out)?.0) } else { None };
            let oracle = oracle(plan, exec, &mut out)?;
            out.table = tail(plan, k.as_ref(), &oracle, exec, &mut out)?;
        }
        ExperimentKind::Probe => {
            let (k, _) = constants(plan, &mut out)?;
            out.table = probe(plan, &k, exec, &mut out)?;
        }
        ExperimentKind::FullReport => {
            let (k, t_constants) = constants(plan, &mut out)?;
            let t_complexity = complexity(plan, exec, &mut out)?;
            let oracle = oracle(plan, exec, &mut out)?;
            let t_deviate = deviate(plan, &k, &oracle, exec, &mut out)?;
            let t_tail = tail(plan, Some(&k), &oracle, exec, &mut out)?;
            let t_probe = probe(plan, &k, exec, &mut out)?;
            out.table = long_table(&[
                ("constants", &t_constants),
                ("complexity", &t_complexity),
                ("deviate", &t_deviate),
                ("tail", &t_tail),
                ("probe", &t_probe),
            ]);
        }
    }
    Ok(out)
}

/// Stacks tables in long form: one `(section, row, column, value)` line per cell.
fn long_table(sections: &[(&str, &Table)]) -> Table {
    let mut long = Table::new(&["section", "row", "column", "value"]);
    for (name, table) in sections {
        for (r, row) in table.rows.iter().enumerate() {
            for (col, value) in table.header.iter().zip(row) {
                long.push(vec![name.to_string(), r.to_string(), col.clone(), value.clone()]);
            }
        }
    }
    long
}

fn constants(plan: &Plan, out: &mut RunOutput) -> Result<(ConstantsReport, Table), CliError> {
    out.timed("constants", |out| {
        let stat = plan.statistic.as_deref().expect("validated plan has a statistic");
        let spec = &plan.config.constants;
        let seed = plan.config.seed;
        let report = match plan.route.expect("validated plan has a route") {
            Route::ClosedForm => closed_form_constants(stat)?,
            Route::DerivedBound => {
                u_statistic_constant_bounds(stat.arity(), plan.kernel.as_ref().expect("u-statistic kernel"))?
            }
            Route::Numeric => estimate_constants_numeric(stat, spec.probes, spec.fd_step, seed)?,
        };
        let cross = if report.method != unibound_core::constants::ConstantsMethod::NumericEstimate && spec.cross_check {
            let est = estimate_constants_numeric(stat, spec.probes, spec.fd_step, seed)?;
            let ok = est.lipschitz <= report.lipschitz + 1e-4 && est.mixed <= report.mixed + 1e-4;
            out.checks.push(Check::new(
                "constants-cross-check",
                ok,
                format!(
                    "sampled L={} M={} against L={} M={}",
                    real(est.lipschitz),
                    real(est.mixed),
                    real(report.lipschitz),
                    real(report.mixed)
                ),
            ));
            Some(est)
        } else {
            None
        };
        out.summary.push(format!(
            "constants ({:?}{}): L = {}, M = {}",
            report.method,
            if report.lower_bound { ", lower bounds" } else { "" },
            real(report.lipschitz),
            real(report.mixed)
        ));
        let mut table = Table::new(&["coordinate", "lipschitz", "mixed", "sampled_lipschitz", "sampled_mixed"]);
        for k in 0..stat.arity() {
            let (sl, sm) = match &cross {
                Some(est) => (real(est.per_coordinate_lipschitz[k]), real(est.per_coordinate_mixed[k])),
                None => (String::new(), String::new()),
            };
            table.push(vec![
                k.to_string(),
                real(report.per_coordinate_lipschitz[k]),
                real(report.per_coordinate_mixed[k]),
                sl,
                sm,
            ]);
        }
        out.put("constants", &report)?;
        if let Some(est) = &cross {
            out.put("constants_sampled", est)?;
        }
        Ok((report, table))
    })
}

fn complexity<E: Executor>(plan: &Plan, exec: &E, out: &mut RunOutput) -> Result<Table, CliError> {
    out.timed("complexity", |out| {
        let law = plan.law.as_ref().expect("validated plan has a law");
        let class = plan.class.as_ref().expect("validated plan has a class");
        let seed = plan.config.seed;
        let draws = plan.config.complexity.draws;
        let x = law.sample(seed);
        let image = class_image(class, &x)?;
        let mut estimates: Vec<(String, ComplexityEstimate)> = Vec::new();
        for method in &plan.complexity_methods {
            let est = match method.as_str() {
                "exact" => rademacher_exact(&image)?,
                "rademacher-mc" => rademacher_mc(&image, draws, seed, exec)?,
                _ => gaussian_mc(&image, draws, seed, exec)?,
            };
            out.summary.push(format!("complexity {method}: {} ± {}", real(est.value), real(est.stderr_or_zero())));
            estimates.push((method.clone(), est));
        }
        let find = |m: &str| estimates.iter().find(|e| e.0 == m).map(|e| e.1);
        if let (Some(exact), Some(mc)) = (find("exact"), find("rademacher-mc")) {
            let gap = (mc.value - exact.value).abs();
            let tol = 4.0 * mc.stderr_or_zero();
            out.checks.push(Check::new(
                "rademacher-mc-vs-exact",
                gap <= tol,
                format!("|mc − exact| = {} against 4·stderr = {}", real(gap), real(tol)),
            ));
        }
        let comparison = comparison_report(&image, draws, seed, exec)?;
        out.checks.push(Check::new(
            "complexity-comparisons",
            !comparison.violated(),
            format!(
                "R = {}, G = {}, slacks {} / {}",
                real(comparison.rademacher.value),
                real(comparison.gaussian.value),
                real(comparison.upper_slack),
                real(comparison.lower_slack)
            ),
        ));
        let mut table = Table::new(&["method", "kind", "value", "stderr", "draws"]);
        for (method, e) in &estimates {
            table.push(vec![
                method.clone(),
                format!("{:?}", e.kind).to_lowercase(),
                real(e.value),
                e.stderr.map(real).unwrap_or_default(),
                e.draws.map(|d| d.to_string()).unwrap_or_default(),
            ]);
        }
        out.put("sample", x.values())?;
        out.put(
            "complexity",
            estimates.iter().map(|(m, e)| json!({ "method": m, "estimate": e })).collect::<Vec<_>>(),
        )?;
        out.put("comparison", comparison)?;
        Ok(table)
    })
}

fn oracle<E: Executor>(plan: &Plan, exec: &E, out: &mut RunOutput) -> Result<ExpectationOracle, CliError> {
    out.timed("expectation", |out| {
        let p = parts(plan);
        let oracle = expectation_oracle(p.law, p.class, p.stat, plan.expectation, exec)?;
        out.summary.push(format!("expectations: {:?} over {} members", oracle.method, oracle.len()));
        let labelled: Vec<Value> = oracle
            .values
            .iter()
            .enumerate()
            .map(|(m, v)| {
                json!({
                    "label": p.class.label(m),
                    "value": v,
                    "stderr": oracle.stderr.as_ref().map(|s| s[m]),
                })
            })
            .collect();
        out.put("expectation", json!({ "method": oracle.method, "replicas": oracle.replicas, "members": labelled }))?;
        Ok(oracle)
    })
}

fn deviate<E: Executor>(
    plan: &Plan,
    constants: &ConstantsReport,
    oracle: &ExpectationOracle,
    exec: &E,
    out: &mut RunOutput,
) -> Result<Table, CliError> {
    out.timed("deviate", |out| {
        let p = parts(plan);
        let spec = &plan.config.deviation;
        let settings = DeviationSettings {
            c: spec.c,
            delta: spec.delta,
            replications: spec.replications,
            gaussian_draws: spec.gaussian_draws,
            seed: plan.config.seed,
            allow_numeric_constants: plan.allow_numeric,
        };
        let report = deviation_experiment(p.law, p.class, p.stat, oracle, constants, &settings, exec)?;
        summarize_deviation(&report, out);
        if p.stat.kind() == StatisticKind::Mean && spec.symmetrization {
            let sym = symmetrization_check_mean(
                p.law,
                p.class,
                p.stat,
                oracle,
                &SymmetrizationSettings {
                    replications: spec.replications,
                    rademacher_draws: spec.rademacher_draws,
                    seed: plan.config.seed,
                },
                exec,
            )?;
            out.checks.push(Check::new(
                "symmetrization",
                !sym.violated,
                format!(
                    "psi_mean = {} against (2/n)·R = {} + {}",
                    real(sym.psi_mean),
                    real(sym.rhs),
                    real(sym.tolerance)
                ),
            ));
            out.put("symmetrization", &sym)?;
        }
        let mut table =
            Table::new(&["replication", "psi", "argmax", "gaussian", "exceeds_bound", "exceeds_displayed_bound"]);
        for (r, o) in report.replications.iter().enumerate() {
            table.push(vec![
                r.to_string(),
                real(o.psi),
                p.class.label(o.argmax).to_string(),
                real(o.gaussian),
                (o.psi > report.bound.value).to_string(),
                (o.psi > report.bound.displayed_value).to_string(),
            ]);
        }
        let mut value = serde_json::to_value(&report).map_err(|e| CliError::Io(e.to_string()))?;
        if let Some(obj) = value.as_object_mut() {
            // Per-replication values live in the table.
            obj.remove("replications");
            obj.insert("calibrated_c".into(), json!(report.calibrated_c(3.0)));
        }
        out.put("deviation", value)?;
        Ok(table)
    })
}

fn summarize_deviation(report: &DeviationReport, out: &mut RunOutput) {
    let b = &report.bound;
    out.summary.push(format!(
        "bound B(delta={}, n={}) = {} (complexity {} + tail {}); displayed-tail variant {}",
        real(report.delta),
        report.n,
        real(b.value),
        real(b.complexity_term),
        real(b.tail_term),
        real(b.displayed_value)
    ));
    out.summary.push(format!(
        "psi_mean = {} ± {}, E G = {} ± {}",
        real(report.psi_mean),
        real(report.psi_stderr),
        real(report.eg_estimate.value),
        real(report.eg_estimate.stderr_or_zero())
    ));
    out.summary.push(match (report.c_hat, report.c_hat_stderr) {
        (Some(c), Some(se)) => format!("c_hat = {} ± {}", real(c), real(se)),
        _ => "c_hat: absent (zero denominator)".into(),
    });
    out.summary.push(format!(
        "violation rate = {} (allowance {}): {}; displayed-variant rate = {}",
        real(report.violation_rate),
        real(report.coverage_allowance),
        if report.coverage_ok { "within coverage" } else { "COVERAGE EXCEEDED" },
        real(report.displayed_violation_rate)
    ));
}

fn tail<E: Executor>(
    plan: &Plan,
    constants: Option<&ConstantsReport>,
    oracle: &ExpectationOracle,
    exec: &E,
    out: &mut RunOutput,
) -> Result<Table, CliError> {
    out.timed("tail", |out| {
        let p = parts(plan);
        let spec = &plan.config.tail;
        let member = plan.tail_member;
        let func = compose(p.stat, p.class, member);
        let n = p.law.n();
        let space = p.law.space();
        let (delta_sup, lower_bound, route) = match plan.delta_route.expect("validated plan has a delta route") {
            DeltaRoute::Exhaustive => {
                let d = delta_squared_sup(space, n, &func, DeltaSearch::Exhaustive)?;
                (d.value, d.lower_bound, "exhaustive")
            }
            DeltaRoute::Sampled => {
                let search = DeltaSearch::Sampled { count: spec.delta_samples, seed: plan.config.seed };
                let d = delta_squared_sup(space, n, &func, search)?;
                (d.value, d.lower_bound, "sampled")
            }
            DeltaRoute::Lipschitz => {
                let k = constants.expect("lipschitz route computes constants");
                (lipschitz_delta_squared_bound(n, k.lipschitz), k.lower_bound, "lipschitz")
            }
        };
        let grid = spec.t_grid.points();
        let expectation = oracle.values[member];
        let table =
            tail_simulation(p.law, &func, expectation, delta_sup, &grid, spec.replicas, plan.config.seed, exec)?;
        out.summary.push(format!(
            "tail for {}: ||Delta^2|| = {} ({route}), {} violations over {} thresholds",
            p.class.label(member),
            real(delta_sup),
            table.violations(),
            grid.len()
        ));
        out.checks.push(Check::new(
            "bounded-difference-tail",
            table.violations() == 0,
            format!("{} of {} thresholds above bound + 4·stderr", table.violations(), grid.len()),
        ));
        let mut csv = Table::new(&["t", "exceedances", "empirical", "bound", "stderr", "violated"]);
        for r in &table.rows {
            csv.push(vec![
                real(r.t),
                r.exceedances.to_string(),
                real(r.empirical),
                real(r.bound),
                real(r.stderr),
                r.violated.to_string(),
            ]);
        }
        out.put(
            "tail",
            json!({
                "member": p.class.label(member),
                "delta_route": route,
                "delta_lower_bound": lower_bound,
                "table": table,
            }),
        )?;
        Ok(csv)
    })
}

fn probe<E: Executor>(
    plan: &Plan,
    constants: &ConstantsReport,
    exec: &E,
    out: &mut RunOutput,
) -> Result<Table, CliError> {
    out.timed("probe", |out| {
        let p = parts(plan);
        let spec = &plan.config.probe;
        let seed = plan.config.seed;
        let grid = spec.s_grid.points();
        let mut csv =
            Table::new(&["pair", "f", "g", "d_fg", "s", "exceedances", "empirical", "bound", "stderr", "violated"]);
        let mut probes = Vec::new();
        for (i, &(f, g)) in plan.probe_pairs.iter().enumerate() {
            let (x, xp) = match &plan.probe_points {
                Some(pts) => pts.clone(),
                None => {
                    let i = i as u64;
                    (
                        p.law.sample_from(&mut rng::stream(seed, PROBE_SAMPLE, 2 * i)),
                        p.law.sample_from(&mut rng::stream(seed, PROBE_SAMPLE, 2 * i + 1)),
                    )
                }
            };
            let settings = ProbeSettings {
                s_grid: grid.clone(),
                replicas: spec.replicas,
                seed: rng::derive_seed(seed, StreamTag::SIGMA, i as u64),
            };
            let probe =
                process_probe(&x, &xp, p.class, f, g, p.stat, constants.lipschitz, constants.mixed, &settings, exec)?;
            for r in &probe.rows {
                csv.push(vec![
                    i.to_string(),
                    probe.f_label.clone(),
                    probe.g_label.clone(),
                    real(probe.d_fg),
                    real(r.s),
                    r.exceedances.to_string(),
                    real(r.empirical),
                    real(r.bound),
                    real(r.stderr),
                    r.violated.to_string(),
                ]);
            }
            out.summary.push(format!(
                "probe ({}, {}): d = {}, {} tail violations, mean Y_f = {} ± {}",
                probe.f_label,
                probe.g_label,
                real(probe.d_fg),
                probe.violations(),
                real(probe.mean_y_f),
                real(probe.stderr_y_f)
            ));
            probes.push(probe);
        }
        let violations: usize = probes.iter().map(|p| p.violations()).sum();
        out.checks.push(Check::new(
            "process-tail",
            violations == 0,
            format!("{violations} thresholds above bound + 4·stderr across {} pairs", probes.len()),
        ));
        let centred = probes.iter().all(|p| p.zero_mean_ok);
        out.checks.push(Check::new("process-zero-mean", centred, "|mean Y| <= 4·stderr for every member probed"));
        out.put("probe", &probes)?;
        Ok(csv)
    })
}

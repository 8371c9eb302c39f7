use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::tail::gaussian_type_bound;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::function_class::{FunctionClass, SampleVector};
use crate::numeric::RunningStats;
use crate::rng::{self, StreamTag};
use crate::statistics::Statistic;

const DRAWS_PER_BATCH: usize = 4096;

/// `Y(σ) = Φ(u) − Φ(v)` with `uᵢ = σᵢ·a + (1−σᵢ)·b` and `v` the swap, where
/// `a = f(xᵢ)`, `b = f(x'ᵢ)`. `u` and `v` are scratch buffers of length `n`.
pub fn process_value<S: Statistic + ?Sized>(
    stat: &S,
    fx: &[f64],
    fx_prime: &[f64],
    sigma: &[bool],
    u: &mut [f64],
    v: &mut [f64],
) -> f64 {
    for i in 0..sigma.len() {
        let (a, b) = if sigma[i] { (fx[i], fx_prime[i]) } else { (fx_prime[i], fx[i]) };
        u[i] = a;
        v[i] = b;
    }
    stat.evaluate(u) - stat.evaluate(v)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSettings {
    pub s_grid: Vec<f64>,
    pub replicas: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProbeRow {
    pub s: f64,
    pub exceedances: u64,
    pub empirical: f64,
    /// `exp(−s²/(8(M²+L²)d²))`, capped at 1.
    pub bound: f64,
    pub stderr: f64,
    pub violated: bool,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProcessProbe {
    pub f_label: String,
    pub g_label: String,
    pub x: Vec<f64>,
    pub x_prime: Vec<f64>,
    /// `d(f,g) = √(Σ (f(xᵢ)−g(xᵢ))² + (f(x'ᵢ)−g(x'ᵢ))²)`.
    pub d_fg: f64,
    pub lipschitz: f64,
    pub mixed: f64,
    pub replicas: u64,
    pub rows: Vec<ProbeRow>,
    pub mean_y_f: f64,
    pub stderr_y_f: f64,
    pub mean_y_g: f64,
    pub stderr_y_g: f64,
    /// Both `Y_f` and `Y_g` average to zero within four standard errors.
    pub zero_mean_ok: bool,
}

impl ProcessProbe {
    pub fn violations(&self) -> usize {
        self.rows.iter().filter(|r| r.violated).count()
    }
}

struct BatchTally {
    y_f: RunningStats,
    y_g: RunningStats,
    counts: Vec<u64>,
}

/// Samples `σ` uniformly on `{0,1}^n` and tabulates the tail of
/// `Z = Y_f(σ) − Y_g(σ)` against `exp(−s²/(8(M²+L²)d(f,g)²))`.
///
/// Draws run in batches of 4096, batch `b` reading stream `(seed, SIGMA, b)`.
#[allow(clippy::too_many_arguments)]
pub fn process_probe<S, E>(
    x: &SampleVector,
    x_prime: &SampleVector,
    class: &FunctionClass,
    f: usize,
    g: usize,
    stat: &S,
    lipschitz: f64,
    mixed: f64,
    settings: &ProbeSettings,
    exec: &E,
) -> Result<ProcessProbe>
where
    S: Statistic + ?Sized,
    E: Executor,
{
    let n = stat.arity();
    if x.len() != n || x_prime.len() != n {
        return Err(Error::domain(format!("x and x' must have length {n}")));
    }
    if f >= class.len() || g >= class.len() {
        return Err(Error::domain("member index out of range"));
    }
    if f == g {
        return Err(Error::domain("the probe needs two distinct members"));
    }
    if !(lipschitz >= 0.0 && mixed >= 0.0 && lipschitz.is_finite() && mixed.is_finite()) {
        return Err(Error::domain("L and M must be finite and non-negative"));
    }
    if settings.replicas == 0 {
        return Err(Error::domain("the probe needs at least one draw"));
    }
    if settings.s_grid.iter().any(|s| !s.is_finite()) {
        return Err(Error::domain("s grid must be finite"));
    }
    let eval = |m: usize, v: &SampleVector| -> Result<Vec<f64>> {
        let mut out = vec![0.0; n];
        class.eval_vector(m, v, &mut out)?;
        Ok(out)
    };
    let (fx, fxp, gx, gxp) = (eval(f, x)?, eval(f, x_prime)?, eval(g, x)?, eval(g, x_prime)?);
    let d_sq: f64 = (0..n).map(|i| (fx[i] - gx[i]) * (fx[i] - gx[i]) + (fxp[i] - gxp[i]) * (fxp[i] - gxp[i])).sum();
    let d_fg = libm::sqrt(d_sq);

    let grid = &settings.s_grid;
    let batches = settings.replicas.div_ceil(DRAWS_PER_BATCH);
    let partials = exec.map_indexed(batches, |b| {
        let size = DRAWS_PER_BATCH.min(settings.replicas - b * DRAWS_PER_BATCH);
        let mut stream = rng::stream(settings.seed, StreamTag::SIGMA, b as u64);
        let mut sigma = vec![false; n];
        let (mut u, mut v) = (vec![0.0; n], vec![0.0; n]);
        let mut tally = BatchTally { y_f: RunningStats::new(), y_g: RunningStats::new(), counts: vec![0; grid.len()] };
        for _ in 0..size {
            rng::fill_bits(&mut stream, &mut sigma);
            let yf = process_value(stat, &fx, &fxp, &sigma, &mut u, &mut v);
            let yg = process_value(stat, &gx, &gxp, &sigma, &mut u, &mut v);
            tally.y_f.push(yf);
            tally.y_g.push(yg);
            let z = yf - yg;
            for (c, &s) in tally.counts.iter_mut().zip(grid) {
                if z > s {
                    *c += 1;
                }
            }
        }
        tally
    });
    let mut y_f = RunningStats::new();
    let mut y_g = RunningStats::new();
    let mut counts = vec![0u64; grid.len()];
    for part in &partials {
        y_f.merge(&part.y_f);
        y_g.merge(&part.y_g);
        for (acc, c) in counts.iter_mut().zip(&part.counts) {
            *acc += c;
        }
    }
    if !(y_f.mean().is_finite() && y_g.mean().is_finite()) {
        return Err(Error::Numeric("process values are not finite".into()));
    }
    let scale = 8.0 * (mixed * mixed + lipschitz * lipschitz) * d_sq;
    let draws = settings.replicas as u64;
    let rows = grid
        .iter()
        .zip(&counts)
        .map(|(&s, &exceedances)| {
            let bound = gaussian_type_bound(1.0, scale, s);
            let empirical = exceedances as f64 / draws as f64;
            let allowance = super::binomial_allowance(bound, draws);
            ProbeRow {
                s,
                exceedances,
                empirical,
                bound,
                stderr: allowance / 4.0,
                violated: empirical > bound + allowance,
            }
        })
        .collect();
    let zero_mean_ok = y_f.mean().abs() <= 4.0 * y_f.stderr() && y_g.mean().abs() <= 4.0 * y_g.stderr();
    Ok(ProcessProbe {
        f_label: class.label(f).into(),
        g_label: class.label(g).into(),
        x: x.values().to_vec(),
        x_prime: x_prime.values().to_vec(),
        d_fg,
        lipschitz,
        mixed,
        replicas: draws,
        rows,
        mean_y_f: y_f.mean(),
        stderr_y_f: y_f.stderr(),
        mean_y_g: y_g.mean(),
        stderr_y_g: y_g.stderr(),
        zero_mean_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Sequential;
    use crate::function_class::{Member, SampleSpace};
    use crate::numeric::linspace;
    use crate::statistics::{mean_statistic, sample_variance_statistic};

    fn binary() -> SampleSpace {
        SampleSpace::finite(&[0.0, 1.0]).unwrap()
    }

    fn settings(grid: Vec<f64>, replicas: usize) -> ProbeSettings {
        ProbeSettings { s_grid: grid, replicas, seed: 31 }
    }

    #[test]
    fn coinciding_members_give_zero_process() {
        let class = FunctionClass::new(
            binary(),
            vec![
                (String::from("a"), Member::identity()),
                (String::from("b"), Member::Table { values: vec![0.0, 1.0] }),
            ],
        )
        .unwrap();
        let stat = sample_variance_statistic(4).unwrap();
        let x = SampleVector::from(vec![0.0, 1.0, 1.0, 0.0]);
        let xp = SampleVector::from(vec![1.0, 1.0, 0.0, 0.0]);
        let p = process_probe(&x, &xp, &class, 0, 1, &stat, 0.5, 0.4, &settings(vec![0.01, 0.5], 2000), &Sequential)
            .unwrap();
        assert_eq!(p.d_fg, 0.0);
        assert!(p.rows.iter().all(|r| r.exceedances == 0 && r.bound == 0.0 && !r.violated));
        assert!(p.zero_mean_ok);
    }

    #[test]
    fn mean_process_has_closed_form() {
        let n = 6;
        let stat = mean_statistic(n).unwrap();
        let fx = [0.1, 0.9, 0.3, 0.4, 0.0, 1.0];
        let fxp = [0.5, 0.2, 0.3, 0.8, 1.0, 0.6];
        let (mut u, mut v) = (vec![0.0; n], vec![0.0; n]);
        for pattern in 0u32..64 {
            let sigma: Vec<bool> = (0..n).map(|i| pattern >> i & 1 == 1).collect();
            let y = process_value(&stat, &fx, &fxp, &sigma, &mut u, &mut v);
            let want: f64 =
                (0..n).map(|i| (if sigma[i] { 1.0 } else { -1.0 }) * (fx[i] - fxp[i])).sum::<f64>() / n as f64;
            assert!((y - want).abs() < 1e-15);
        }
    }

    #[test]
    fn mean_process_centred() {
        let class = FunctionClass::random_tables(SampleSpace::finite(&[0.0, 0.5, 1.0]).unwrap(), 2, 6).unwrap();
        let stat = mean_statistic(8).unwrap();
        let x = SampleVector::from(vec![0.0, 0.5, 1.0, 1.0, 0.0, 0.5, 0.5, 1.0]);
        let xp = SampleVector::from(vec![1.0, 1.0, 0.0, 0.5, 0.0, 0.0, 1.0, 0.5]);
        let p = process_probe(
            &x,
            &xp,
            &class,
            0,
            1,
            &stat,
            0.125,
            0.0,
            &settings(linspace(0.0, 0.5, 6), 20_000),
            &Sequential,
        )
        .unwrap();
        assert!(p.zero_mean_ok, "{p:?}");
        assert_eq!(p.violations(), 0);
    }

    #[test]
    fn variance_tail_within_bound() {
        let n = 10;
        let class = FunctionClass::random_tables(binary(), 2, 40).unwrap();
        let stat = sample_variance_statistic(n).unwrap();
        let x = SampleVector::from(vec![0.0, 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0, 0.0]);
        let xp = SampleVector::from(vec![1.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0, 1.0, 1.0]);
        let m = 2.0 / libm::sqrt(90.0);
        let p =
            process_probe(&x, &xp, &class, 0, 1, &stat, 0.2, m, &settings(linspace(0.0, 1.0, 8), 20_000), &Sequential)
                .unwrap();
        assert_eq!(p.violations(), 0);
        assert!(p.zero_mean_ok);
        assert!(p.rows.windows(2).all(|w| w[1].empirical <= w[0].empirical && w[1].bound <= w[0].bound));
    }

    #[test]
    fn same_member_rejected() {
        let class = FunctionClass::random_tables(binary(), 2, 1).unwrap();
        let stat = mean_statistic(2).unwrap();
        let x = SampleVector::from(vec![0.0, 1.0]);
        assert!(process_probe(&x, &x, &class, 1, 1, &stat, 0.5, 0.0, &settings(vec![0.1], 10), &Sequential).is_err());
    }
}

//! The empirical-process harness.
//!
//! For a law of `X`, a class `F` and a statistic `Φ`, the harness computes the
//! expectations `E Φ(f(X'))`, the uniform deviation
//!
//! ```text
//! Ψ(X) = sup_{f∈F} (E Φ(f(X')) − Φ(f(X)))
//! ```
//!
//! over replicated draws of `X`, assembles the bound
//! `c·(L+M)·E G(F(X)) + L·√(n·ln(1/δ)/2)`, and measures how often `Ψ`
//! exceeds it. Two further probes check the concentration steps the bound
//! rests on: the bounded-difference tail of a fixed `Φ∘f`, and the tail of the
//! symmetrized process `Y_f(σ) − Y_g(σ)`.

mod experiment;
mod oracle;
mod probe;
mod tail;

pub use experiment::{
    assemble_bound, bound_value, deviation_experiment, psi, psi_from_image, symmetrization_check_mean, BoundBreakdown,
    DeviationReport, DeviationSettings, PsiValue, ReplicationOutcome, SymmetrizationReport, SymmetrizationSettings,
    MIN_REPLICATIONS,
};
pub use oracle::{expectation_oracle, ExpectationMethod, ExpectationOracle, ExpectationRequest, EXACT_ENUMERATION_CAP};
pub use probe::{process_probe, process_value, ProbeRow, ProbeSettings, ProcessProbe};
pub use tail::{
    delta_squared, delta_squared_sup, lipschitz_delta_squared_bound, tail_simulation, DeltaSearch, DeltaSquaredSup,
    TailRow, TailTable, DELTA_SEARCH_CAP,
};

/// Four binomial standard errors around a reference probability.
pub(crate) fn binomial_allowance(p: f64, trials: u64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    4.0 * libm::sqrt(p * (1.0 - p) / trials as f64)
}

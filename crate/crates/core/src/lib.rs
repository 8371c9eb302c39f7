//! Uniform deviation bounds for nonlinear statistics of samples.
//!
//! The crate evaluates statistics `Φ: [0,1]^n → ℝ` over the images of finite
//! function classes, derives their coordinate-Lipschitz constant `L` and
//! mixed-derivative constant `M`, estimates Rademacher and Gaussian averages
//! of point sets, and runs the replicated Monte Carlo harness that checks the
//! resulting bound
//!
//! ```text
//! B(δ, n) = c·(L + M)·E G(F(X)) + L·√(n·ln(1/δ)/2)
//! ```
//!
//! against simulated uniform deviations `Ψ(X) = sup_f (E Φ(f(X')) − Φ(f(X)))`.
//!
//! Everything here is `no_std` with `alloc`. Randomness is drawn from ChaCha8
//! streams derived from a single root seed (see [`rng`]), and every replicated
//! loop runs through an [`Executor`] so that callers can parallelize without
//! changing results.

#![no_std]
#![warn(missing_debug_implementations)]

extern crate alloc;

pub mod complexity;
pub mod constants;
pub mod deviation;
mod error;
pub mod exec;
pub mod function_class;
pub mod numeric;
pub mod points;
pub mod rng;
pub mod statistics;

pub use error::{Error, Result};
pub use exec::{Executor, Sequential};
pub use points::PointSet;

//! Exponential moments Ψ_k = ⟨e^{ikφ̂}⟩ of the canonical phase, estimated
//! directly from balanced-homodyne quadrature samples through integration
//! kernels K_k(x), and compared with the moments of the radially integrated
//! Q function seen by double homodyning.
//!
//! Module map:
//! - [`quantum_state`]: Fock-basis states, exact Ψ_k, p(φ) and quadrature densities.
//! - [`kernels`]: the kernels K_k(x), their tables and on-disk cache.
//! - [`simulator`]: seeded homodyne and double-homodyne event generators.
//! - [`estimator`]: Ψ̂_k with error bars, and phase statistics.
//! - [`config`], [`pipeline`]: the configuration file and the commands of the `canphase` binary.

pub mod config;
pub mod error;
pub mod estimator;
pub mod kernels;
pub mod pipeline;
pub mod quantum_state;
pub mod simulator;

pub use error::{Error, Result};

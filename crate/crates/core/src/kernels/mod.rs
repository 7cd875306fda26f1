//! Sampling kernels K_k(x) for the exponential phase moments.

pub mod cache;
pub mod eval;
pub mod kummer;
pub mod mixing;
pub mod quadrature;
pub mod table;

pub use cache::{load_or_build, CacheStatus};
pub use eval::{classical_log_slope, kernel_classical, kernel_even, kernel_odd, KernelEvaluator};
pub use kummer::kummer_phi;
pub use mixing::{mixing_density, MixingDensity, MixingSeries};
pub use table::{build_kernel_table, verify_integral_equation, KernelTable, TableParams};

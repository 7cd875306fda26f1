//! Estimators of the exponential phase moments and derived phase statistics.

pub mod moments;
pub mod output;
pub mod phase;
pub mod qfunction;

pub use moments::{sample_moments, with_negative_orders, KernelSet, MomentAccumulator, MomentEstimate};
pub use phase::{phase_stats, phase_stats_or_undefined, PhaseStats};
pub use qfunction::q_moments;

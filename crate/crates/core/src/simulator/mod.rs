//! Monte Carlo simulation of balanced and double homodyne measurements.

pub mod double;
pub mod homodyne;
pub mod schedule;

pub use double::{q_function, sample_double_homodyne, DoubleHomodyneDataset, HusimiQ, RejectionStats};
pub use homodyne::{allocate_events, inverse_cdf, sample_homodyne, HomodyneDataset, QuadratureModel, DEFAULT_X_POINTS};
pub use schedule::{equidistant_phases, AllocationStrategy, PhaseSchedule};

//! Truncated Fock-space states and the exact phase and quadrature
//! distributions they imply.

pub mod density;
pub mod fock;
pub mod hermite;
pub mod quadrature;

pub use density::{canonical_phase_pdf, exact_moments, mean_photon, phase_grid, Component, DensityMatrix};
pub use fock::{coherent_state, squeezed_coherent_state, FockVector};
pub use hermite::{hermite_psi, psi_sequence};
pub use quadrature::{quadrature_pdf, required_half_width, uniform_grid, HermiteBasis, QuadraturePdf};

//! Experiment configuration, read from a strict TOML file.
//!
//! ```toml
//! version = 1
//! seed = 1
//! fock_dim = 160
//! n_theta = 41
//! total_events = 6020
//! k_max = 6
//! output_dir = "out"
//! cache_dir = "kernel-cache"
//!
//! [state]
//! kind = "squeezed"          # "coherent" | "squeezed" | "fock"
//! alpha = { abs = 5.0, arg = 0.6 }
//! s = 6.0                    # quadrature-variance ratio e^{2r}
//!
//! [allocation]
//! strategy = "psi1-optimal"  # or "uniform"
//! min_events = 10
//! max_events = 800
//!
//! [kernels]
//! crossover_x = 10.0
//! spacing = 0.02
//! abs_tol = 1e-6
//! fit_from = 4.0
//!
//! [grids]
//! x_points = 4096
//! phase_points = 721
//! ```
//!
//! Unknown keys are rejected. `[kernels]` and `[grids]` may be omitted.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::kernels::table::{TableParams, MAX_TABLE_ORDER};
use crate::quantum_state::{coherent_state, squeezed_coherent_state, DensityMatrix, FockVector};
use crate::simulator::{AllocationStrategy, DEFAULT_X_POINTS};

pub const CONFIG_VERSION: u32 = 1;

/// Complex amplitude in polar form.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Polar {
    pub abs: f64,
    pub arg: f64,
}

impl Polar {
    pub fn to_complex(self) -> Complex64 {
        Complex64::from_polar(self.abs, self.arg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum StateSpec {
    Coherent {
        alpha: Polar,
    },
    /// Phase-squeezed coherent state; `s` > 1 narrows the phase.
    Squeezed {
        alpha: Polar,
        s: f64,
    },
    Fock {
        n: usize,
    },
}

impl StateSpec {
    pub fn label(&self) -> String {
        match self {
            Self::Coherent { alpha } => format!("coherent(alpha={}e^(i{}))", alpha.abs, alpha.arg),
            Self::Squeezed { alpha, s } => format!("squeezed(alpha={}e^(i{}),s={s})", alpha.abs, alpha.arg),
            Self::Fock { n } => format!("fock(n={n})"),
        }
    }

    pub fn build(&self, dim: usize) -> Result<DensityMatrix> {
        let v = match *self {
            Self::Coherent { alpha } => coherent_state(alpha.to_complex(), dim)?,
            Self::Squeezed { alpha, s } => squeezed_coherent_state(alpha.to_complex(), s, dim)?,
            Self::Fock { n } => FockVector::number(n, dim)?,
        };
        Ok(DensityMatrix::from_pure(&v))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridParams {
    /// Points of the quadrature grid used by the homodyne sampler.
    pub x_points: usize,
    /// Points of the phase grid on which p(φ) is written.
    pub phase_points: usize,
}

impl Default for GridParams {
    fn default() -> Self {
        Self {
            x_points: DEFAULT_X_POINTS,
            phase_points: 721,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub seed: u64,
    pub fock_dim: usize,
    pub n_theta: usize,
    pub total_events: usize,
    pub k_max: usize,
    pub output_dir: PathBuf,
    pub cache_dir: PathBuf,
    pub state: StateSpec,
    pub allocation: AllocationStrategy,
    #[serde(default)]
    pub kernels: TableParams,
    #[serde(default)]
    pub grids: GridParams,
}

fn config_error(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}

impl ExperimentConfig {
    /// The phase-squeezed reference experiment: α = 5e^{0.6i}, s = 6,
    /// 6020 events over 41 phases with counts clamped to [10, 800].
    pub fn reference() -> Self {
        Self {
            version: CONFIG_VERSION,
            seed: 1,
            fock_dim: 160,
            n_theta: 41,
            total_events: 6020,
            k_max: 6,
            output_dir: PathBuf::from("out"),
            cache_dir: PathBuf::from("kernel-cache"),
            state: StateSpec::Squeezed {
                alpha: Polar { abs: 5.0, arg: 0.6 },
                s: 6.0,
            },
            allocation: AllocationStrategy::reference(),
            kernels: TableParams::default(),
            grids: GridParams::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: Self = toml::from_str(text).map_err(|e| config_error(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| config_error(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| config_error(e.to_string()))
    }

    /// SHA-256 of the canonical TOML serialization, with the output and
    /// cache directories blanked so that it identifies the experiment only.
    pub fn hash(&self) -> Result<String> {
        let experiment = Self {
            output_dir: PathBuf::new(),
            cache_dir: PathBuf::new(),
            ..self.clone()
        };
        let digest = Sha256::digest(experiment.to_toml_string()?.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(config_error(format!(
                "config version {} unsupported (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        if !(2..=1024).contains(&self.fock_dim) {
            return Err(config_error(format!("fock_dim = {} outside 2..=1024", self.fock_dim)));
        }
        if self.n_theta == 0 {
            return Err(config_error("n_theta must be positive"));
        }
        if self.total_events < self.n_theta {
            return Err(config_error(format!(
                "total_events = {} leaves some of the {} LO phases empty",
                self.total_events, self.n_theta
            )));
        }
        if self.k_max == 0 || self.k_max > MAX_TABLE_ORDER as usize || self.k_max >= self.fock_dim {
            return Err(config_error(format!(
                "k_max = {} outside 1..={MAX_TABLE_ORDER} (and below fock_dim)",
                self.k_max
            )));
        }
        match self.state {
            StateSpec::Coherent { alpha } | StateSpec::Squeezed { alpha, .. }
                if !(alpha.abs >= 0.0 && alpha.abs.is_finite() && alpha.arg.is_finite()) =>
            {
                return Err(config_error(
                    "alpha needs a finite, nonnegative modulus and finite argument",
                ));
            }
            StateSpec::Squeezed { s, .. } if !(s > 0.0 && s.is_finite()) => {
                return Err(config_error(format!("squeeze parameter s = {s} must be positive")));
            }
            StateSpec::Fock { n } if n >= self.fock_dim => {
                return Err(config_error(format!(
                    "Fock state |{n}> does not fit in dimension {}",
                    self.fock_dim
                )));
            }
            _ => {}
        }
        if let AllocationStrategy::Psi1Optimal { min_events, max_events } = self.allocation {
            if min_events == 0 || min_events > max_events {
                return Err(config_error(format!(
                    "allocation clamps [{min_events}, {max_events}] invalid"
                )));
            }
        }
        self.kernels.validate().map_err(|e| config_error(e.to_string()))?;
        if self.grids.x_points < 16 || self.grids.phase_points < 2 {
            return Err(config_error("grids need x_points >= 16 and phase_points >= 2"));
        }
        Ok(())
    }
}

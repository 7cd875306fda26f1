//! Balanced homodyne detection: quadrature samples by inverse-CDF lookup.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{argument, Result};
use crate::quantum_state::{required_half_width, uniform_grid, DensityMatrix, HermiteBasis, QuadraturePdf};
use crate::simulator::schedule::{allocate_from_pdfs, equidistant_phases, AllocationStrategy, PhaseSchedule};

pub const DATASET_FORMAT_VERSION: u32 = 1;

/// Default number of points of the quadrature grid.
pub const DEFAULT_X_POINTS: usize = 4096;

/// p(x, ϑ_j) for every LO phase of an equidistant set, on one shared grid.
#[derive(Debug, Clone)]
pub struct QuadratureModel {
    pdfs: Vec<QuadraturePdf>,
}

impl QuadratureModel {
    /// Uses the grid ±(√(2D) + 5) with `x_points` points.
    pub fn new(rho: &DensityMatrix, n_theta: usize, x_points: usize) -> Result<Self> {
        let grid = uniform_grid(required_half_width(rho.dim()), x_points);
        Self::with_grid(rho, n_theta, &grid)
    }

    pub fn with_grid(rho: &DensityMatrix, n_theta: usize, x_grid: &[f64]) -> Result<Self> {
        if n_theta == 0 {
            return Err(argument("need at least one LO phase"));
        }
        let basis = HermiteBasis::new(rho.dim(), x_grid)?;
        let pdfs = equidistant_phases(n_theta)
            .into_par_iter()
            .map(|t| basis.quadrature_pdf(rho, t))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { pdfs })
    }

    pub fn pdfs(&self) -> &[QuadraturePdf] {
        &self.pdfs
    }

    pub fn n_theta(&self) -> usize {
        self.pdfs.len()
    }

    pub fn allocate(&self, total: usize, strategy: AllocationStrategy) -> Result<PhaseSchedule> {
        allocate_from_pdfs(total, &self.pdfs, strategy)
    }

    /// Draws `schedule.counts[j]` samples at phase j. Group j uses ChaCha8
    /// stream j of `seed`, so the result does not depend on scheduling.
    pub fn sample(&self, schedule: &PhaseSchedule, seed: u64, state_label: &str) -> Result<HomodyneDataset> {
        schedule.validate()?;
        if schedule.n_theta() != self.n_theta() {
            return Err(argument(format!(
                "schedule has {} phases, model has {}",
                schedule.n_theta(),
                self.n_theta()
            )));
        }
        let groups = self
            .pdfs
            .par_iter()
            .zip(&schedule.counts)
            .enumerate()
            .map(|(j, (pdf, &count))| {
                let mut rng = group_rng(seed, j as u64);
                (0..count).map(|_| inverse_cdf(pdf, rng.random::<f64>())).collect()
            })
            .collect();
        Ok(HomodyneDataset {
            format_version: DATASET_FORMAT_VERSION,
            state_label: state_label.to_string(),
            seed,
            thetas: schedule.thetas.clone(),
            counts: schedule.counts.clone(),
            groups,
        })
    }
}

pub(crate) fn group_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// x with CDF(x) = u, linear between grid points.
pub fn inverse_cdf(pdf: &QuadraturePdf, u: f64) -> f64 {
    let cdf = &pdf.cdf;
    let i = cdf.partition_point(|&c| c < u).clamp(1, cdf.len() - 1);
    let (c0, c1) = (cdf[i - 1], cdf[i]);
    let (x0, x1) = (pdf.x_grid[i - 1], pdf.x_grid[i]);
    if c1 > c0 {
        x0 + (x1 - x0) * ((u - c0) / (c1 - c0)).clamp(0.0, 1.0)
    } else {
        x1
    }
}

/// Grouped quadrature records {ϑ_j, [x]}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomodyneDataset {
    pub format_version: u32,
    pub state_label: String,
    pub seed: u64,
    pub thetas: Vec<f64>,
    pub counts: Vec<usize>,
    pub groups: Vec<Vec<f64>>,
}

impl HomodyneDataset {
    pub fn total_events(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    pub fn validate(&self) -> Result<()> {
        if self.format_version != DATASET_FORMAT_VERSION {
            return Err(argument(format!(
                "unsupported dataset format version {}",
                self.format_version
            )));
        }
        PhaseSchedule {
            thetas: self.thetas.clone(),
            counts: self.counts.clone(),
        }
        .validate()?;
        if self.groups.len() != self.counts.len() || self.groups.iter().zip(&self.counts).any(|(g, &c)| g.len() != c) {
            return Err(argument("dataset group sizes disagree with the recorded counts"));
        }
        if self.groups.iter().flatten().any(|x| !x.is_finite()) {
            return Err(argument("dataset contains non-finite samples"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let data: Self = serde_json::from_str(text)?;
        data.validate()?;
        Ok(data)
    }
}

/// Allocates `total` events over `thetas.len()` equidistant phases using
/// the default grid.
pub fn allocate_events(
    total: usize,
    rho: &DensityMatrix,
    n_theta: usize,
    strategy: AllocationStrategy,
) -> Result<PhaseSchedule> {
    QuadratureModel::new(rho, n_theta, DEFAULT_X_POINTS)?.allocate(total, strategy)
}

/// Simulates balanced homodyne data for `schedule` on the default grid.
pub fn sample_homodyne(rho: &DensityMatrix, schedule: &PhaseSchedule, seed: u64) -> Result<HomodyneDataset> {
    QuadratureModel::new(rho, schedule.n_theta(), DEFAULT_X_POINTS)?.sample(schedule, seed, "")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum_state::FockVector;

    #[test]
    fn inverse_cdf_endpoints() {
        let rho = DensityMatrix::from_pure(&FockVector::vacuum(4).unwrap());
        let model = QuadratureModel::new(&rho, 1, 1001).unwrap();
        let pdf = &model.pdfs()[0];
        assert_eq!(inverse_cdf(pdf, 0.0), pdf.x_grid[0]);
        assert!((inverse_cdf(pdf, 0.5)).abs() < 1e-9);
        assert!(inverse_cdf(pdf, 1.0) <= pdf.x_grid[pdf.x_grid.len() - 1]);
    }

    #[test]
    fn dataset_json_round_trip() {
        let rho = DensityMatrix::from_pure(&FockVector::number(1, 6).unwrap());
        let model = QuadratureModel::new(&rho, 5, 801).unwrap();
        let schedule = model.allocate(23, AllocationStrategy::Uniform).unwrap();
        let data = model.sample(&schedule, 9, "fock 1").unwrap();
        let back = HomodyneDataset::from_json(&data.to_json().unwrap()).unwrap();
        assert_eq!(back, data);
        let mut broken = data.clone();
        broken.groups[0].pop();
        assert!(HomodyneDataset::from_json(&broken.to_json().unwrap()).is_err());
    }
}

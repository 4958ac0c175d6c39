//! Novel breakfast generation.
//!
//! A multivariate normal is fitted to the taught presence vectors, sampled,
//! thresholded back to presence bits, and the resulting pseudo-LV is repaired
//! with the knowledge graph.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use crate::conceptspace::{Catalog, ObjectLv};
use crate::error::{Error, Result};
use crate::memory::EpisodicMemory;
use crate::rules::{self, KnowledgeGraph};

pub const COVARIANCE_JITTER: f64 = 1e-6;
pub const PRESENCE_THRESHOLD: f64 = 0.5;
pub const DEFAULT_MAX_ATTEMPTS: usize = 1000;

/// Eigenvalues above this (negative) bound are treated as rounding noise.
const PSD_TOLERANCE: f64 = -1e-9;

#[derive(Clone, Debug)]
pub struct GaussianModel {
    mu: DVector<f64>,
    sigma: DMatrix<f64>,
    /// Symmetric square root of `sigma`.
    root: DMatrix<f64>,
}

impl GaussianModel {
    /// Build from an explicit mean and covariance. `sigma` must be symmetric PSD.
    pub fn from_parts(mu: DVector<f64>, sigma: DMatrix<f64>) -> Result<Self> {
        let n = mu.len();
        if sigma.nrows() != n || sigma.ncols() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: sigma.nrows(),
            });
        }
        let eig = SymmetricEigen::new(sigma.clone());
        let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
        if n > 0 && (min < PSD_TOLERANCE || !min.is_finite()) {
            return Err(Error::FactorizationFailure(min));
        }
        let sqrt_vals = eig.eigenvalues.map(|v| v.max(0.0).sqrt());
        let root = &eig.eigenvectors * DMatrix::from_diagonal(&sqrt_vals) * eig.eigenvectors.transpose();
        Ok(Self { mu, sigma, root })
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    pub fn mu(&self) -> &DVector<f64> {
        &self.mu
    }

    pub fn sigma(&self) -> &DMatrix<f64> {
        &self.sigma
    }

    pub fn root(&self) -> &DMatrix<f64> {
        &self.root
    }
}

/// Mean and population covariance of the taught LVs, plus diagonal jitter.
pub fn fit_gaussian(memory: &EpisodicMemory, catalog: &Catalog) -> Result<GaussianModel> {
    fit_gaussian_with_jitter(memory, catalog, COVARIANCE_JITTER)
}

pub fn fit_gaussian_with_jitter(memory: &EpisodicMemory, catalog: &Catalog, jitter: f64) -> Result<GaussianModel> {
    if memory.is_empty() {
        return Err(Error::EmptyMemory);
    }
    let dim = catalog.len();
    let n = memory.len() as f64;
    let rows: Vec<DVector<f64>> = memory
        .lvs()
        .map(|lv| {
            catalog.check_dim(lv)?;
            Ok(DVector::from_iterator(dim, lv.bits().iter().map(|b| f64::from(u8::from(*b)))))
        })
        .collect::<Result<_>>()?;

    let mu = rows.iter().fold(DVector::zeros(dim), |acc, r| acc + r) / n;
    let mut sigma = DMatrix::zeros(dim, dim);
    for r in &rows {
        let d = r - &mu;
        sigma += &d * d.transpose();
    }
    sigma /= n;
    for i in 0..dim {
        sigma[(i, i)] += jitter;
    }
    GaussianModel::from_parts(mu, sigma)
}

#[derive(Clone, Debug)]
pub struct PseudoLv {
    pub lv: ObjectLv,
    pub raw_sample: DVector<f64>,
}

pub fn threshold(raw: &DVector<f64>) -> ObjectLv {
    ObjectLv::from_bits(raw.iter().map(|x| *x >= PRESENCE_THRESHOLD).collect())
}

pub fn sample_pseudo_lv<R: Rng + ?Sized>(model: &GaussianModel, rng: &mut R) -> PseudoLv {
    let z = DVector::from_iterator(model.dim(), (0..model.dim()).map(|_| rng.sample::<f64, _>(StandardNormal)));
    let raw_sample = &model.mu + &model.root * z;
    PseudoLv {
        lv: threshold(&raw_sample),
        raw_sample,
    }
}

/// Everything generation reads from the household.
#[derive(Clone, Copy)]
pub struct Creator<'a> {
    pub catalog: &'a Catalog,
    pub memory: &'a EpisodicMemory,
    pub graph: &'a KnowledgeGraph,
    pub model: &'a GaussianModel,
    pub max_attempts: usize,
}

impl Creator<'_> {
    /// Sample until a novel setup survives repair.
    pub fn create_breakfast<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ObjectLv> {
        if self.memory.is_empty() {
            return Err(Error::EmptyMemory);
        }
        for _ in 0..self.max_attempts {
            let pseudo = sample_pseudo_lv(self.model, rng);
            if !self.catalog.has_food(&pseudo.lv) || self.memory.contains_lv(&pseudo.lv) {
                continue;
            }
            let fixed = rules::fix(&pseudo.lv, self.graph, self.catalog)?;
            if self.memory.contains_lv(&fixed) {
                continue;
            }
            return Ok(fixed);
        }
        Err(Error::AttemptsExhausted(self.max_attempts))
    }

    fn food_sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<ObjectLv> {
        for _ in 0..self.max_attempts {
            let pseudo = sample_pseudo_lv(self.model, rng);
            if self.catalog.has_food(&pseudo.lv) {
                return Ok(pseudo.lv);
            }
        }
        Err(Error::AttemptsExhausted(self.max_attempts))
    }

    /// Run `n` raw generations and classify each one.
    pub fn simulate_batch<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<BatchStats> {
        if self.memory.is_empty() {
            return Err(Error::EmptyMemory);
        }
        let mut stats = BatchStats {
            requested: n,
            ..Default::default()
        };
        let mut seen = HashSet::new();
        for _ in 0..n {
            let lv = self.food_sample(rng)?;
            if self.memory.contains_lv(&lv) {
                stats.same_as_memory += 1;
                continue;
            }
            let invalid = !rules::validate(&lv, self.graph, self.catalog)?.valid;
            let fixed = if invalid {
                rules::fix(&lv, self.graph, self.catalog)?
            } else {
                lv
            };
            if self.memory.contains_lv(&fixed) {
                stats.same_as_memory += 1;
                continue;
            }
            if invalid {
                stats.invalid_before_fix += 1;
            }
            if seen.insert(fixed.clone()) {
                stats.distinct_new += 1;
                stats.outputs.push(fixed);
            } else {
                stats.duplicate_new += 1;
            }
        }
        Ok(stats)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BatchStats {
    pub requested: usize,
    pub same_as_memory: usize,
    pub invalid_before_fix: usize,
    pub duplicate_new: usize,
    pub distinct_new: usize,
    /// Distinct novel setups in order of first appearance.
    pub outputs: Vec<ObjectLv>,
}

/// Flat, diff-stable rendering of [`BatchStats`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatchReport {
    pub requested: usize,
    pub same_as_memory: usize,
    pub invalid_before_fix: usize,
    pub duplicate_new: usize,
    pub distinct_new: usize,
    pub outputs: Vec<Vec<String>>,
}

impl BatchReport {
    pub fn new(stats: &BatchStats, catalog: &Catalog) -> Result<Self> {
        let mut outputs = stats
            .outputs
            .iter()
            .map(|lv| catalog.decode(lv))
            .collect::<Result<Vec<_>>>()?;
        outputs.sort();
        Ok(Self {
            requested: stats.requested,
            same_as_memory: stats.same_as_memory,
            invalid_before_fix: stats.invalid_before_fix,
            duplicate_new: stats.duplicate_new,
            distinct_new: stats.distinct_new,
            outputs,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "requested: {}\nsame_as_memory: {}\ninvalid_before_fix: {}\nduplicate_new: {}\ndistinct_new: {}\n",
            self.requested, self.same_as_memory, self.invalid_before_fix, self.duplicate_new, self.distinct_new
        );
        for names in &self.outputs {
            out.push_str("  - ");
            out.push_str(&names.join(", "));
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::HouseholdRng;

    #[test]
    fn tiny_jitter_reproduces_binary_mean() {
        let mu = DVector::from_vec(vec![1.0, 0.0, 1.0, 0.0]);
        let model = GaussianModel::from_parts(mu, DMatrix::identity(4, 4) * 1e-12).unwrap();
        let mut rng = HouseholdRng::from_seed(3);
        for _ in 0..20 {
            assert_eq!(sample_pseudo_lv(&model, &mut rng).lv.bits(), [true, false, true, false]);
        }
    }

    #[test]
    fn root_squares_back_to_sigma() {
        let sigma = DMatrix::from_row_slice(2, 2, &[2.0, 0.5, 0.5, 1.0]);
        let model = GaussianModel::from_parts(DVector::zeros(2), sigma.clone()).unwrap();
        assert!((model.root() * model.root() - sigma).norm() < 1e-12);
        assert!((model.root() - model.root().transpose()).norm() < 1e-12);
    }

    #[test]
    fn indefinite_sigma_is_rejected() {
        let sigma = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert!(matches!(
            GaussianModel::from_parts(DVector::zeros(2), sigma),
            Err(Error::FactorizationFailure(_))
        ));
    }

    #[test]
    fn threshold_is_inclusive_at_half() {
        let lv = threshold(&DVector::from_vec(vec![0.5, 0.4999, 2.0, -1.0]));
        assert_eq!(lv.bits(), [true, false, true, false]);
    }
}

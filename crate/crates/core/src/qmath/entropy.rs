//! Shannon and von Neumann entropies, in bits.

use super::{DensityMatrix, HermitianMatrix, DENSITY_TOL};
use crate::error::{invalid, Result};

/// Entries below this are rejected; entries in `[-NEGATIVE_TOL, 0)` are clamped to zero.
pub const NEGATIVE_TOL: f64 = 1e-12;

/// A discrete probability vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbabilityDistribution {
    probs: Vec<f64>,
}

impl ProbabilityDistribution {
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(invalid("empty probability distribution"));
        }
        for p in probs.iter_mut() {
            if !p.is_finite() {
                return Err(invalid("probabilities must be finite"));
            }
            if *p < -NEGATIVE_TOL {
                return Err(invalid(format!("negative probability {p:.3e}")));
            }
            *p = p.max(0.0);
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > DENSITY_TOL {
            return Err(invalid(format!("probabilities sum to {sum}, expected 1")));
        }
        Ok(ProbabilityDistribution { probs })
    }

    pub(crate) fn from_trusted(probs: Vec<f64>) -> Self {
        ProbabilityDistribution {
            probs: probs.into_iter().map(|p| p.max(0.0)).collect(),
        }
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// `-Σ p log₂ p` with `0 log 0 = 0`. Inputs are clamped to `[0, 1]`.
pub fn entropy_bits(probs: &[f64]) -> f64 {
    probs
        .iter()
        .map(|&p| p.clamp(0.0, 1.0))
        .filter(|&p| p > 0.0)
        .map(|p| -p * p.log2())
        .sum()
}

/// `h(p) = -p log₂ p - (1-p) log₂ (1-p)`.
pub fn binary_entropy(p: f64) -> f64 {
    entropy_bits(&[p, 1.0 - p])
}

pub fn shannon_entropy(p: &ProbabilityDistribution) -> f64 {
    entropy_bits(&p.probs)
}

/// Entropy of the (clamped) spectrum of a Hermitian operator.
pub(crate) fn spectral_entropy(m: &HermitianMatrix) -> Result<f64> {
    Ok(entropy_bits(&m.eigenvalues()?))
}

pub fn von_neumann_entropy(rho: &DensityMatrix) -> Result<f64> {
    spectral_entropy(rho.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    #[test]
    fn shannon_values() {
        let h = |v: Vec<f64>| shannon_entropy(&ProbabilityDistribution::new(v).unwrap());
        assert_eq!(h(vec![1.0, 0.0]), 0.0);
        assert_abs_diff_eq!(h(vec![0.5, 0.5]), 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(h(vec![0.25; 4]), 2.0, epsilon = 1e-15);
    }

    #[test]
    fn rejects_negative_and_unnormalised() {
        assert!(ProbabilityDistribution::new(vec![1.1, -0.1]).is_err());
        assert!(ProbabilityDistribution::new(vec![0.5, 0.4]).is_err());
        let p = ProbabilityDistribution::new(vec![1.0 + 5e-13, -5e-13]).unwrap();
        assert_eq!(p.probs()[1], 0.0);
    }

    #[test]
    fn von_neumann_values() {
        let half = DensityMatrix::maximally_mixed(2).unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&half).unwrap(), 1.0, epsilon = 1e-14);
        let s = 0.6f64.sqrt();
        let t = 0.4f64.sqrt();
        let pure = DensityMatrix::pure(&[
            Complex64::new(s, 0.0),
            Complex64::new(0.0, t),
        ])
        .unwrap();
        assert_abs_diff_eq!(von_neumann_entropy(&pure).unwrap(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn diagonal_states_match_shannon() {
        let probs = [0.1, 0.2, 0.3, 0.4];
        let rho = DensityMatrix::from_diagonal(&probs).unwrap();
        let p = ProbabilityDistribution::new(probs.to_vec()).unwrap();
        assert_abs_diff_eq!(
            von_neumann_entropy(&rho).unwrap(),
            shannon_entropy(&p),
            epsilon = 1e-12
        );
    }
}

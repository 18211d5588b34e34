//! Log-quadratic fit `q_sc ≈ exp(a + b ν² + c ν⁴)` of the sudden-change curve.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sudden::sudden_change_point_closed_form;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitCoefficients {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl FitCoefficients {
    pub fn log_q(&self, nu2: f64) -> f64 {
        self.a + self.b * nu2 + self.c * nu2 * nu2
    }

    pub fn q(&self, nu2: f64) -> f64 {
        self.log_q(nu2).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentialFit {
    pub coefficients: FitCoefficients,
    /// `max |ln q - (a + b ν² + c ν⁴)|` over the fitted points.
    pub max_log_residual: f64,
    pub rms_log_residual: f64,
    /// `max |q - exp(a + b ν² + c ν⁴)|`.
    pub max_q_residual: f64,
}

/// Least-squares fit of `ln q = a + b ν² + c ν⁴` to `(ν², q)` points.
pub fn fit_exponential(points: &[(f64, f64)]) -> Result<ExponentialFit> {
    if points.iter().any(|&(x, q)| !x.is_finite() || !(q > 0.0 && q < 1.0)) {
        return Err(invalid("fit points need finite nu2 and q in (0, 1)"));
    }
    let mut xs: Vec<f64> = points.iter().map(|p| p.0).collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    if xs.len() < 3 {
        return Err(Error::RankDeficient(format!(
            "need at least 3 distinct nu2 values, got {}",
            xs.len()
        )));
    }

    let n = points.len();
    let design = DMatrix::from_fn(n, 3, |i, j| points[i].0.powi(j as i32));
    let rhs = DVector::from_iterator(n, points.iter().map(|p| p.1.ln()));
    let svd = design.svd(true, true);
    let sol = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::RankDeficient(e.to_string()))?;
    let coefficients = FitCoefficients {
        a: sol[0],
        b: sol[1],
        c: sol[2],
    };

    let log_res: Vec<f64> = points
        .iter()
        .map(|&(x, q)| q.ln() - coefficients.log_q(x))
        .collect();
    let max_log_residual = log_res.iter().map(|r| r.abs()).fold(0.0, f64::max);
    let rms_log_residual = (log_res.iter().map(|r| r * r).sum::<f64>() / n as f64).sqrt();
    let max_q_residual = points
        .iter()
        .map(|&(x, q)| (q - coefficients.q(x)).abs())
        .fold(0.0, f64::max);
    Ok(ExponentialFit {
        coefficients,
        max_log_residual,
        rms_log_residual,
        max_q_residual,
    })
}

/// Closed-form sudden-change points on `points` equally spaced couplings in `[lo, hi]`.
pub fn sudden_change_curve(lo: f64, hi: f64, points: usize, tol_q: f64) -> Result<Vec<(f64, f64)>> {
    if points < 2 || !(lo < hi) || !(lo > 0.0) {
        return Err(invalid("need 0 < lo < hi and at least 2 points"));
    }
    (0..points)
        .into_par_iter()
        .map(|i| {
            let nu2 = lo + (hi - lo) * i as f64 / (points - 1) as f64;
            Ok((nu2, sudden_change_point_closed_form(nu2, tol_q)?))
        })
        .collect()
}

/// Default coupling range and sampling for the sudden-change fit.
pub const DEFAULT_FIT_RANGE: (f64, f64) = (0.1, 2.5);
pub const DEFAULT_FIT_POINTS: usize = 25;

//! Sudden change of correlations and sudden death of entanglement.

use serde::{Deserialize, Serialize};

use super::roots::{bisect, golden_section_max};
use crate::correlations::{
    classical_correlation_two_side, discord_one_side, mutual_information,
    xstate_discord_closed_form, OptimizerSettings,
};
use crate::error::{invalid, Error, Result};
use crate::qmath::Subsystem;
use crate::unruh::{final_state, model_state, ModelParams};

/// Bracket used for the closed-form sudden-change root.
pub const SUDDEN_CHANGE_BRACKET: (f64, f64) = (1e-6, 1.0 - 1e-6);
pub const DEFAULT_TOL_Q: f64 = 1e-9;

/// `D₁(q) - D₂(q)` on the symmetric final state.
pub fn discord_branch_gap(q: f64, nu2: f64) -> Result<f64> {
    let cf = xstate_discord_closed_form(&final_state(q, nu2)?)?;
    Ok(cf.d1 - cf.d2)
}

/// Root of `D₁ = D₂` in `q` at fixed coupling, by bisection.
pub fn sudden_change_point_closed_form(nu2: f64, tol_q: f64) -> Result<f64> {
    if !(nu2 > 0.0) || !nu2.is_finite() {
        return Err(invalid(format!("nu2 must be > 0, got {nu2}")));
    }
    if !(tol_q > 0.0) {
        return Err(invalid("tol_q must be positive"));
    }
    let (lo, hi) = SUDDEN_CHANGE_BRACKET;
    let mut failure = None;
    let root = bisect(
        |q| match discord_branch_gap(q, nu2) {
            Ok(v) => v,
            Err(e) => {
                failure.get_or_insert(e);
                f64::NAN
            }
        },
        lo,
        hi,
        tol_q,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    root.ok_or(Error::NoSuddenChange { nu2, lo, hi })
}

/// Correlation curve whose kink the detector looks for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum KinkMeasure {
    /// Two-side quantum correlation `Q = I - K`.
    TwoSide,
    /// One-side discord measured on Alice.
    DiscordA,
    /// One-side discord measured on Rob.
    DiscordR,
}

impl KinkMeasure {
    pub fn evaluate(self, params: &ModelParams, opt: &OptimizerSettings) -> Result<f64> {
        let rho = model_state(params)?;
        match self {
            KinkMeasure::TwoSide => {
                Ok(mutual_information(&rho)? - classical_correlation_two_side(&rho, opt)?.value)
            }
            KinkMeasure::DiscordA => discord_one_side(&rho, Subsystem::A, opt),
            KinkMeasure::DiscordR => discord_one_side(&rho, Subsystem::R, opt),
        }
    }
}

/// Grid used by the kink detector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KinkSettings {
    pub grid_points: usize,
    pub q_lo: f64,
    pub q_hi: f64,
    /// Tolerance in `q` of the golden-section refinement.
    pub refine_tol_q: f64,
    /// A second difference must exceed this multiple of the median of its
    /// neighbours to count as a kink rather than smooth curvature.
    pub min_prominence: f64,
}

impl Default for KinkSettings {
    fn default() -> Self {
        KinkSettings {
            grid_points: 101,
            q_lo: 0.01,
            q_hi: 0.99,
            refine_tol_q: 1e-7,
            min_prominence: 5.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Kink {
    pub q: f64,
    /// Second difference at the coarse-grid peak.
    pub jump: f64,
    pub prominence: f64,
}

/// Locates the sudden-change point from a non-smooth point of `measure(q)`.
///
/// The curve is sampled on a uniform grid; the second difference that stands
/// out most against its neighbours brackets the kink, which is then refined by maximising
/// `|f(q+h) - 2f(q) + f(q-h)|` (a tent peaked at the kink) by golden section.
pub fn detect_kink(
    measure: KinkMeasure,
    nu2: f64,
    alpha: f64,
    kink: &KinkSettings,
    opt: &OptimizerSettings,
) -> Result<Kink> {
    if kink.grid_points < 101 {
        return Err(invalid(format!(
            "kink detection needs at least 101 grid points, got {}",
            kink.grid_points
        )));
    }
    if !(0.0..1.0).contains(&kink.q_lo) || !(kink.q_lo < kink.q_hi && kink.q_hi < 1.0) {
        return Err(invalid("kink grid must satisfy 0 <= q_lo < q_hi < 1"));
    }
    ModelParams::new(kink.q_lo, nu2, alpha)?;
    opt.validate()?;

    let n = kink.grid_points;
    let h = (kink.q_hi - kink.q_lo) / (n - 1) as f64;
    let f = |q: f64| measure.evaluate(&ModelParams { q, nu2, alpha }, opt);
    let values: Vec<f64> = (0..n)
        .map(|i| f(kink.q_lo + i as f64 * h))
        .collect::<Result<_>>()?;
    let second: Vec<f64> = values
        .windows(3)
        .map(|w| (w[2] - 2.0 * w[1] + w[0]).abs())
        .collect();
    let threshold = 10.0 * opt.refine_tol;
    let scores: Vec<f64> = (0..second.len()).map(|i| local_prominence(&second, i)).collect();
    let best = (0..second.len())
        .filter(|&i| second[i] > threshold)
        .max_by(|&a, &b| scores[a].total_cmp(&scores[b]));
    let Some(peak) = best.filter(|&i| scores[i] >= kink.min_prominence) else {
        let jump = best.map_or_else(|| second.iter().copied().fold(0.0, f64::max), |i| second[i]);
        return Err(Error::NoKinkDetected { jump, threshold });
    };
    let (jump, prominence) = (second[peak], scores[peak]);

    // `second[peak]` is centred on grid point peak + 1
    let centre = kink.q_lo + (peak + 1) as f64 * h;
    let lo = (centre - h).max(kink.q_lo + h);
    let hi = (centre + h).min(kink.q_hi - h);
    let mut failure = None;
    let q = golden_section_max(
        |x| {
            let r = (|| Ok::<f64, Error>((f(x + h)? - 2.0 * f(x)? + f(x - h)?).abs()))();
            r.unwrap_or_else(|e| {
                failure.get_or_insert(e);
                f64::NEG_INFINITY
            })
        },
        lo,
        hi,
        kink.refine_tol_q,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(Kink { q, jump, prominence })
}

const PROMINENCE_WINDOW: usize = 6;

/// `second[i]` over the median of `second[j]`, `2 <= |i - j| <= PROMINENCE_WINDOW`.
/// Neighbours at distance one are skipped since a kink between grid points
/// spreads over two adjacent entries.
fn local_prominence(second: &[f64], i: usize) -> f64 {
    let lo = i.saturating_sub(PROMINENCE_WINDOW);
    let hi = (i + PROMINENCE_WINDOW).min(second.len() - 1);
    let mut around: Vec<f64> = (lo..=hi).filter(|&j| j.abs_diff(i) >= 2).map(|j| second[j]).collect();
    around.sort_by(f64::total_cmp);
    let median = around[around.len() / 2];
    if median > 0.0 {
        second[i] / median
    } else {
        f64::INFINITY
    }
}

/// Sudden-change point from the kink of the two-side quantum correlation.
pub fn sudden_change_point_kink(
    nu2: f64,
    alpha: f64,
    grid_points: usize,
    opt: &OptimizerSettings,
) -> Result<f64> {
    let kink = KinkSettings {
        grid_points,
        ..KinkSettings::default()
    };
    Ok(detect_kink(KinkMeasure::TwoSide, nu2, alpha, &kink, opt)?.q)
}

/// `q_sd = (ν²/2 + √(1 + ν⁴/4))⁻²`, where the concurrence of the symmetric
/// final state vanishes.
pub fn sudden_death_q(nu2: f64) -> Result<f64> {
    if !(nu2 >= 0.0) || !nu2.is_finite() {
        return Err(invalid(format!("nu2 must be finite and >= 0, got {nu2}")));
    }
    let x = 0.5 * nu2;
    Ok((x + (1.0 + x * x).sqrt()).powi(-2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unruh::s_coefficients;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    #[test]
    fn closed_form_anchor() {
        let q = sudden_change_point_closed_form(0.4 * PI, DEFAULT_TOL_Q).unwrap();
        assert_abs_diff_eq!(q, 0.53925, epsilon = 5e-4);
    }

    #[test]
    fn closed_form_at_nu2_two() {
        let q = sudden_change_point_closed_form(2.0, DEFAULT_TOL_Q).unwrap();
        assert_abs_diff_eq!(q, 0.386, epsilon = 5e-3);
    }

    #[test]
    fn closed_form_rejects_zero_coupling() {
        assert!(sudden_change_point_closed_form(0.0, 1e-9).is_err());
    }

    #[test]
    fn weak_coupling_has_no_kink_or_approaches_one() {
        match sudden_change_point_closed_form(1e-9, 1e-9) {
            Err(Error::NoSuddenChange { .. }) => {}
            Ok(q) => assert!(q > 0.99, "q_sc = {q}"),
            Err(e) => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn sudden_death_values() {
        assert_eq!(sudden_death_q(0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(sudden_death_q(0.4 * PI).unwrap(), 0.30547, epsilon = 1e-5);
        assert!(sudden_death_q(1e8).unwrap() < 1e-15);
        assert!(sudden_death_q(-1.0).is_err());
    }

    #[test]
    fn sudden_death_zeroes_the_coherence_gap() {
        for nu2 in [0.1, 0.5, 0.4 * PI, 2.0, 3.0] {
            let q = sudden_death_q(nu2).unwrap();
            let s = s_coefficients(q, nu2).unwrap();
            assert!((s.s0 - (s.s1 * s.s2).sqrt()).abs() <= 1e-12);
        }
    }

    #[test]
    fn kink_rejects_short_grids() {
        let r = sudden_change_point_kink(0.4 * PI, 0.5, 50, &OptimizerSettings::default());
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }
}

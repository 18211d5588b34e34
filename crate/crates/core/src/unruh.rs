//! Alice–Rob states after Rob's detector has interacted with the field, and
//! the mappings from physical detector / black-hole parameters to `(q, ν²)`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::qmath::{DensityMatrix, HermitianMatrix};

/// Dimensionless model parameters.
///
/// * `q` – parametrized acceleration `exp(-2πΩ/a)`, in `[0, 1]`; `q = 1` is
///   only meaningful as the infinite-acceleration limit.
/// * `nu2` – effective coupling ν² ≥ 0.
/// * `alpha` – amplitude of `|0_A 1_R⟩` in the initial state
///   `α|0_A 1_R⟩ - β|1_A 0_R⟩`, with `β = √(1-α²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub q: f64,
    pub nu2: f64,
    pub alpha: f64,
}

impl ModelParams {
    pub fn new(q: f64, nu2: f64, alpha: f64) -> Result<Self> {
        let p = ModelParams { q, nu2, alpha };
        p.validate()?;
        Ok(p)
    }

    /// Symmetric initial state, α = 1/√2.
    pub fn symmetric(q: f64, nu2: f64) -> Result<Self> {
        Self::new(q, nu2, FRAC_1_SQRT_2)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.q.is_finite() || !(0.0..=1.0).contains(&self.q) {
            return Err(invalid(format!("q must lie in [0, 1], got {}", self.q)));
        }
        if !self.nu2.is_finite() || self.nu2 < 0.0 {
            return Err(invalid(format!("nu2 must be finite and >= 0, got {}", self.nu2)));
        }
        if !self.alpha.is_finite() || !(0.0..=1.0).contains(&self.alpha) {
            return Err(invalid(format!("alpha must lie in [0, 1], got {}", self.alpha)));
        }
        Ok(())
    }

    pub fn beta(&self) -> f64 {
        (1.0 - self.alpha * self.alpha).max(0.0).sqrt()
    }
}

/// Unruh–DeWitt detector parameters in natural units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalDetectorParams {
    /// Energy gap Ω.
    pub omega: f64,
    /// Proper acceleration a.
    pub accel: f64,
    /// Coupling amplitude ε.
    pub eps: f64,
    /// Interaction proper-time interval Δ.
    pub delta: f64,
    /// Spatial width κ of the detector profile.
    pub kappa: f64,
}

impl PhysicalDetectorParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.omega, self.accel, self.eps, self.delta, self.kappa];
        if all.iter().any(|x| !x.is_finite()) {
            return Err(invalid("detector parameters must be finite"));
        }
        if self.omega <= 0.0 {
            return Err(invalid(format!("omega must be > 0, got {}", self.omega)));
        }
        if self.delta <= 0.0 {
            return Err(invalid(format!("delta must be > 0, got {}", self.delta)));
        }
        if self.accel < 0.0 || self.eps < 0.0 || self.kappa < 0.0 {
            return Err(invalid("accel, eps and kappa must be >= 0"));
        }
        Ok(())
    }

    /// Conditions under which the closed-form final state is a poor
    /// approximation. These are warnings; the formulas stay evaluable.
    pub fn validity_warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.omega * self.delta <= 10.0 {
            w.push(format!(
                "omega*delta = {:.3} is not >> 1; the interaction time should greatly exceed 1/omega",
                self.omega * self.delta
            ));
        }
        if self.kappa * self.omega >= 0.1 {
            w.push(format!(
                "kappa*omega = {:.3} is not << 1; the detector should be well localised",
                self.kappa * self.omega
            ));
        }
        w
    }

    pub fn to_model(&self, alpha: f64) -> Result<ModelParams> {
        self.validate()?;
        ModelParams::new(
            parametrized_acceleration(self.omega, self.accel)?,
            effective_coupling(self),
            alpha,
        )
    }
}

/// A static observer at Schwarzschild radius `radius` outside a black hole of mass `mass`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchwarzschildConfig {
    pub mass: f64,
    pub radius: f64,
}

impl SchwarzschildConfig {
    pub fn new(mass: f64, radius: f64) -> Result<Self> {
        let c = SchwarzschildConfig { mass, radius };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.mass.is_finite() || self.mass <= 0.0 {
            return Err(invalid(format!("mass must be > 0, got {}", self.mass)));
        }
        if !self.radius.is_finite() || self.radius <= 2.0 * self.mass {
            return Err(invalid(format!(
                "radius {} must lie outside the horizon r = 2M = {}",
                self.radius,
                2.0 * self.mass
            )));
        }
        Ok(())
    }

    /// Redshift factor `V = √(1 - 2M/r)`.
    pub fn redshift_factor(&self) -> f64 {
        (1.0 - 2.0 * self.mass / self.radius).sqrt()
    }

    /// Surface gravity `1/(4M)`.
    pub fn surface_gravity(&self) -> f64 {
        0.25 / self.mass
    }
}

/// `q = exp(-2πΩ/a)`; `q = 0` at `a = 0`.
pub fn parametrized_acceleration(omega: f64, accel: f64) -> Result<f64> {
    if !omega.is_finite() || omega <= 0.0 {
        return Err(invalid(format!("omega must be > 0, got {omega}")));
    }
    if accel.is_nan() || accel < 0.0 {
        return Err(invalid(format!("acceleration must be >= 0, got {accel}")));
    }
    if accel == 0.0 {
        return Ok(0.0);
    }
    Ok((-2.0 * PI * omega / accel).exp())
}

/// `ν² = ε² Ω Δ / (2π) · exp(-Ω² κ²)`.
pub fn effective_coupling(p: &PhysicalDetectorParams) -> f64 {
    p.eps * p.eps * p.omega * p.delta / (2.0 * PI) * (-(p.omega * p.kappa).powi(2)).exp()
}

/// Weights of the symmetric final state: `diag(S₂, S₀, S₀, S₁)` with `-S₀`
/// coherence between `|1_A 0_R⟩` and `|0_A 1_R⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SCoefficients {
    pub s0: f64,
    pub s1: f64,
    pub s2: f64,
}

pub fn s_coefficients(q: f64, nu2: f64) -> Result<SCoefficients> {
    check_finite_q(q, nu2)?;
    let den = 2.0 * (1.0 - q) + nu2 * (1.0 + q);
    Ok(SCoefficients {
        s0: (1.0 - q) / den,
        s1: nu2 * q / den,
        s2: nu2 / den,
    })
}

fn check_finite_q(q: f64, nu2: f64) -> Result<()> {
    if !q.is_finite() || !(0.0..=1.0).contains(&q) {
        return Err(invalid(format!("q must lie in [0, 1), got {q}")));
    }
    if q >= 1.0 {
        return Err(Error::Domain(
            "q = 1 is the infinite-acceleration limit; use asymptotic_state".into(),
        ));
    }
    if !nu2.is_finite() || nu2 < 0.0 {
        return Err(invalid(format!("nu2 must be finite and >= 0, got {nu2}")));
    }
    Ok(())
}

fn real_matrix(entries: [f64; 16]) -> HermitianMatrix {
    let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    HermitianMatrix::from_raw(4, &c)
}

/// Final Alice–Rob state for the symmetric initial state `(|0_A 1_R⟩ - |1_A 0_R⟩)/√2`.
pub fn final_state(q: f64, nu2: f64) -> Result<DensityMatrix> {
    let SCoefficients { s0, s1, s2 } = s_coefficients(q, nu2)?;
    #[rustfmt::skip]
    let m = real_matrix([
        s2,  0.0, 0.0, 0.0,
        0.0, s0,  -s0, 0.0,
        0.0, -s0, s0,  0.0,
        0.0, 0.0, 0.0, s1,
    ]);
    DensityMatrix::new(m)
}

/// Final state for the initial state `α|0_A 1_R⟩ - β|1_A 0_R⟩`.
///
/// Rob's detector either stays put, de-excites from `|1_R⟩` with weight
/// `ν²/(1-q)`, or is excited from `|0_R⟩` with weight `ν² q/(1-q)`; tracing
/// out the emitted/absorbed quantum and multiplying by `(1-q)` gives
/// `diag(α²ν², β²(1-q), α²(1-q), β²ν²q)` with coherence `-αβ(1-q)`, divided by
/// `N = (1-q) + ν²(α² + β²q)`.
pub fn final_state_general(params: &ModelParams) -> Result<DensityMatrix> {
    params.validate()?;
    check_finite_q(params.q, params.nu2)?;
    let (q, nu2) = (params.q, params.nu2);
    let a2 = params.alpha * params.alpha;
    let beta = params.beta();
    let b2 = beta * beta;
    let norm = (1.0 - q) + nu2 * (a2 + b2 * q);
    if !(norm > 0.0) {
        return Err(Error::DegenerateInput(format!(
            "state normalisation vanishes for {params:?}"
        )));
    }
    let coh = -params.alpha * beta * (1.0 - q) / norm;
    #[rustfmt::skip]
    let m = real_matrix([
        a2 * nu2 / norm, 0.0, 0.0, 0.0,
        0.0, b2 * (1.0 - q) / norm, coh, 0.0,
        0.0, coh, a2 * (1.0 - q) / norm, 0.0,
        0.0, 0.0, 0.0, b2 * nu2 * q / norm,
    ]);
    DensityMatrix::new(m)
}

/// Infinite-acceleration limit `½|0_A 0_R⟩⟨0_A 0_R| + ½|1_A 1_R⟩⟨1_A 1_R|`.
pub fn asymptotic_state() -> DensityMatrix {
    DensityMatrix::from_trusted(real_matrix([
        0.5, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 0.0, //
        0.0, 0.0, 0.0, 0.5,
    ]))
}

/// The pure initial two-qubit state `α|0_A 1_R⟩ - β|1_A 0_R⟩`.
pub fn initial_state(alpha: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(invalid(format!("alpha must lie in [0, 1], got {alpha}")));
    }
    let beta = (1.0 - alpha * alpha).max(0.0).sqrt();
    let z = Complex64::new(0.0, 0.0);
    DensityMatrix::pure(&[
        z,
        Complex64::new(-beta, 0.0),
        Complex64::new(alpha, 0.0),
        z,
    ])
}

/// State for any valid parameters, including the `q = 1` limit: for ν² > 0
/// the limit is `α²|0_A 0_R⟩⟨..| + β²|1_A 1_R⟩⟨..|`, for ν² = 0 Rob never
/// interacts and the initial state survives.
pub fn model_state(params: &ModelParams) -> Result<DensityMatrix> {
    params.validate()?;
    if params.q < 1.0 {
        return final_state_general(params);
    }
    if params.nu2 == 0.0 {
        return initial_state(params.alpha);
    }
    let a2 = params.alpha * params.alpha;
    DensityMatrix::from_diagonal(&[a2, 0.0, 0.0, 1.0 - a2])
}

/// Proper acceleration of a static observer, `a = M / (r² √(1 - 2M/r))`.
pub fn static_observer_acceleration(cfg: &SchwarzschildConfig) -> Result<f64> {
    cfg.validate()?;
    Ok(cfg.mass / (cfg.radius * cfg.radius * cfg.redshift_factor()))
}

/// Local temperature `a / 2π` seen by the static observer.
pub fn local_temperature(cfg: &SchwarzschildConfig) -> Result<f64> {
    Ok(static_observer_acceleration(cfg)? / (2.0 * PI))
}

/// `q` for a detector of gap `omega` held static at `cfg.radius`.
pub fn schwarzschild_q(cfg: &SchwarzschildConfig, omega: f64) -> Result<f64> {
    parametrized_acceleration(omega, static_observer_acceleration(cfg)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn q_limits() {
        assert_eq!(parametrized_acceleration(1.0, 0.0).unwrap(), 0.0);
        let a = 2.0 * PI * 3.0 / 2f64.ln();
        assert_abs_diff_eq!(parametrized_acceleration(3.0, a).unwrap(), 0.5, epsilon = 1e-15);
        assert!(parametrized_acceleration(1.0, 1e12).unwrap() > 1.0 - 1e-10);
        assert!(parametrized_acceleration(0.0, 1.0).is_err());
        assert!(parametrized_acceleration(-1.0, 1.0).is_err());
    }

    #[test]
    fn coupling_values() {
        let base = PhysicalDetectorParams { omega: 1.0, accel: 1.0, eps: 1.0, delta: 2.0 * PI, kappa: 0.0 };
        assert_abs_diff_eq!(effective_coupling(&base), 1.0, epsilon = 1e-15);
        assert_eq!(effective_coupling(&PhysicalDetectorParams { eps: 0.0, ..base }), 0.0);

        let (omega, delta) = (2.0, 40.0);
        let eps = (0.4 * PI * 2.0 * PI / (omega * delta)).sqrt();
        let p = PhysicalDetectorParams { omega, accel: 1.0, eps, delta, kappa: 0.0 };
        assert_abs_diff_eq!(effective_coupling(&p), 0.4 * PI, epsilon = 1e-14);
    }

    #[test]
    fn validity_warnings_fire() {
        let p = PhysicalDetectorParams { omega: 1.0, accel: 1.0, eps: 0.1, delta: 5.0, kappa: 0.2 };
        assert_eq!(p.validity_warnings().len(), 2);
        let ok = PhysicalDetectorParams { delta: 100.0, kappa: 0.0, ..p };
        assert!(ok.validity_warnings().is_empty());
    }

    #[test]
    fn zero_coupling_gives_singlet() {
        for q in [0.0, 0.3, 0.99] {
            let s = s_coefficients(q, 0.0).unwrap();
            assert_eq!((s.s0, s.s1, s.s2), (0.5, 0.0, 0.0));
        }
    }

    #[test]
    fn figure_setting_coefficients() {
        // (1-q)/den etc. at q = 0.4, ν² = 0.4π; den = 1.2 + 0.4π·1.4
        let s = s_coefficients(0.4, 0.4 * PI).unwrap();
        assert_abs_diff_eq!(s.s0, 0.202751, epsilon = 1e-6);
        assert_abs_diff_eq!(s.s1, 0.169857, epsilon = 1e-6);
        assert_abs_diff_eq!(s.s2, 0.424641, epsilon = 1e-6);
        assert_abs_diff_eq!(2.0 * s.s0 + s.s1 + s.s2, 1.0, epsilon = 1e-15);
    }

    #[test]
    fn q_one_is_domain_error() {
        assert!(matches!(final_state(1.0, 0.5), Err(Error::Domain(_))));
        let p = ModelParams::new(1.0, 0.5, 0.3).unwrap();
        assert!(matches!(final_state_general(&p), Err(Error::Domain(_))));
    }

    #[test]
    fn general_reduces_to_symmetric() {
        for &(q, nu2) in &[(0.0, 0.0), (0.4, 0.4 * PI), (0.9, 3.0), (0.123, 0.01)] {
            let a = final_state(q, nu2).unwrap();
            let b = final_state_general(&ModelParams::symmetric(q, nu2).unwrap()).unwrap();
            assert!(a.matrix().max_abs_diff(b.matrix()) <= 1e-12);
        }
    }

    #[test]
    fn pure_product_when_alpha_extreme_and_no_coupling() {
        for alpha in [0.0, 1.0] {
            let rho = final_state_general(&ModelParams::new(0.4, 0.0, alpha).unwrap()).unwrap();
            let ev = rho.eigenvalues().unwrap();
            assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn asymptotic_limit() {
        let a = asymptotic_state();
        assert_eq!(a.matrix().diagonal_values(), vec![0.5, 0.0, 0.0, 0.5]);
        let near = final_state(1.0 - 1e-9, 0.4 * PI).unwrap();
        assert!(near.matrix().max_abs_diff(a.matrix()) <= 1e-6);
        let limit = model_state(&ModelParams::symmetric(1.0, 0.4 * PI).unwrap()).unwrap();
        assert!(limit.matrix().max_abs_diff(a.matrix()) < 1e-15);
        let singlet = model_state(&ModelParams::symmetric(1.0, 0.0).unwrap()).unwrap();
        assert!(singlet.matrix().max_abs_diff(final_state(0.5, 0.0).unwrap().matrix()) < 1e-15);
    }

    #[test]
    fn static_observer() {
        let cfg = SchwarzschildConfig::new(1.0, 4.0).unwrap();
        assert_abs_diff_eq!(
            static_observer_acceleration(&cfg).unwrap(),
            1.0 / (16.0 * 0.5f64.sqrt()),
            epsilon = 1e-15
        );
        assert!(SchwarzschildConfig::new(1.0, 2.0).is_err());
        assert!(SchwarzschildConfig::new(1.0, 1.5).is_err());
        let far = SchwarzschildConfig::new(1.0, 1e9).unwrap();
        assert!(static_observer_acceleration(&far).unwrap() < 1e-17);
        assert!(schwarzschild_q(&far, 1.0).unwrap() < 1e-300);
    }

    #[test]
    fn near_horizon_q() {
        let cfg = SchwarzschildConfig::new(1.0, 2.0 * (1.0 + 1e-6)).unwrap();
        let q = schwarzschild_q(&cfg, 1.0).unwrap();
        // a ≈ κ/V with V ≈ 1e-3, so q ≈ exp(-2π · 4e-3)
        assert_abs_diff_eq!(q, (-2.0 * PI * 4e-3f64).exp(), epsilon = 1e-4);
        assert_abs_diff_eq!(q, 0.9752, epsilon = 1e-4);
    }
}

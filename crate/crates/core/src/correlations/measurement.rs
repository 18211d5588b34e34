use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::qmath::HermitianMatrix;

/// A projective qubit measurement along the Bloch direction
/// `n = (sinθ cosφ, sinθ sinφ, cosθ)`, with projectors `(I ± n·σ)/2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochMeasurement {
    pub theta: f64,
    pub phi: f64,
}

impl BlochMeasurement {
    pub const Z: BlochMeasurement = BlochMeasurement { theta: 0.0, phi: 0.0 };
    pub const X: BlochMeasurement = BlochMeasurement { theta: PI / 2.0, phi: 0.0 };

    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&theta) {
            return Err(invalid(format!("theta must lie in [0, pi], got {theta}")));
        }
        if !(0.0..TAU).contains(&phi) {
            return Err(invalid(format!("phi must lie in [0, 2pi), got {phi}")));
        }
        Ok(BlochMeasurement { theta, phi })
    }

    /// Maps arbitrary angles onto a canonical representative. Directions
    /// `n` and `-n` give the same pair of projectors, so the result is taken
    /// on the upper hemisphere, with `φ = 0` at the pole.
    pub fn canonical(theta: f64, phi: f64) -> Self {
        let mut t = theta.rem_euclid(TAU);
        let mut p = phi;
        if t > PI {
            t = TAU - t;
            p += PI;
        }
        if t > PI / 2.0 {
            t = PI - t;
            p += PI;
        }
        p = p.rem_euclid(TAU);
        if t < 1e-15 {
            p = 0.0;
        }
        if (TAU - p) < 1e-15 {
            p = 0.0;
        }
        BlochMeasurement { theta: t, phi: p }
    }

    pub fn direction(&self) -> [f64; 3] {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        [st * cp, st * sp, ct]
    }

    /// Eigenkets `|+n⟩`, `|-n⟩`.
    pub fn kets(&self) -> [[Complex64; 2]; 2] {
        kets(self.theta, self.phi)
    }

    pub fn projectors(&self) -> [HermitianMatrix; 2] {
        let [plus, minus] = self.kets();
        [
            HermitianMatrix::outer(&plus).expect("2x2 projector"),
            HermitianMatrix::outer(&minus).expect("2x2 projector"),
        ]
    }
}

pub(crate) fn kets(theta: f64, phi: f64) -> [[Complex64; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let e = Complex64::from_polar(1.0, phi);
    [
        [Complex64::new(c, 0.0), e * s],
        [Complex64::new(s, 0.0), -e * c],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn projectors_match_bloch_form() {
        let m = BlochMeasurement::new(1.1, 4.0).unwrap();
        let n = m.direction();
        let [plus, minus] = m.projectors();
        for i in 0..2 {
            for j in 0..2 {
                let id = if i == j { 1.0 } else { 0.0 };
                let ns: Complex64 = (0..3).map(|k| HermitianMatrix::pauli(k).get(i, j) * n[k]).sum();
                let p = (Complex64::new(id, 0.0) + ns) * 0.5;
                let q = (Complex64::new(id, 0.0) - ns) * 0.5;
                assert!((plus.get(i, j) - p).norm() < 1e-15);
                assert!((minus.get(i, j) - q).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn canonical_identifies_antipodes() {
        let a = BlochMeasurement::canonical(2.5, 1.0);
        let b = BlochMeasurement::canonical(PI - 2.5, 1.0 + PI);
        assert_abs_diff_eq!(a.theta, b.theta, epsilon = 1e-14);
        assert_abs_diff_eq!(a.phi, b.phi, epsilon = 1e-14);
        assert!(a.theta <= PI / 2.0);
        assert_eq!(BlochMeasurement::canonical(TAU, 3.0), BlochMeasurement::Z);
        let d = BlochMeasurement::canonical(-0.3, 0.0).direction();
        let e = BlochMeasurement { theta: 0.3, phi: PI }.direction();
        for k in 0..3 {
            assert_abs_diff_eq!(d[k], e[k], epsilon = 1e-14);
        }
    }

    #[test]
    fn rejects_out_of_range() {
        assert!(BlochMeasurement::new(-0.1, 0.0).is_err());
        assert!(BlochMeasurement::new(0.1, TAU).is_err());
    }
}

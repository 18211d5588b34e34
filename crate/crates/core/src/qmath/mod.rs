//! Dense complex Hermitian algebra for one- and two-qubit operators.
//!
//! Two-qubit operators use the basis ordering
//! `{|0_A 0_R⟩, |1_A 0_R⟩, |0_A 1_R⟩, |1_A 1_R⟩}`, i.e. the flat index of a
//! product ket is `a + 2 r`: Alice's qubit varies fastest. Every module in
//! this crate shares that convention.

mod eigen;
mod entropy;

use std::fmt;
use std::ops::Index;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

pub use eigen::{hermitian_eigen, hermitian_eigenvalues, HermitianEigen};
pub use entropy::{
    binary_entropy, entropy_bits, shannon_entropy, von_neumann_entropy, ProbabilityDistribution,
};

pub type ComplexScalar = Complex64;

/// Maximum |m_ij - conj(m_ji)| accepted when building a [`HermitianMatrix`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Trace and positivity tolerance for [`DensityMatrix`].
pub const DENSITY_TOL: f64 = 1e-10;
/// Tolerance on the imaginary part of a density matrix trace.
pub const TRACE_IMAG_TOL: f64 = 1e-12;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Which qubit of the Alice–Rob pair an operation refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Subsystem {
    /// Alice, the inertial qubit.
    A,
    /// Rob, the accelerated qubit.
    R,
}

impl Subsystem {
    pub fn other(self) -> Self {
        match self {
            Subsystem::A => Subsystem::R,
            Subsystem::R => Subsystem::A,
        }
    }
}

impl fmt::Display for Subsystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subsystem::A => f.write_str("A"),
            Subsystem::R => f.write_str("R"),
        }
    }
}

impl FromStr for Subsystem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "a" | "alice" => Ok(Subsystem::A),
            "r" | "b" | "rob" => Ok(Subsystem::R),
            other => Err(invalid(format!("unknown subsystem label '{other}'"))),
        }
    }
}

/// A 2×2 or 4×4 Hermitian matrix stored row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HermitianMatrix {
    dim: usize,
    data: [Complex64; 16],
}

impl HermitianMatrix {
    /// Builds a matrix from row-major entries, rejecting non-finite or
    /// non-Hermitian input.
    pub fn new(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if dim != 2 && dim != 4 {
            return Err(invalid(format!("dimension must be 2 or 4, got {dim}")));
        }
        if entries.len() != dim * dim {
            return Err(invalid(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                entries.len()
            )));
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("matrix entries must be finite"));
        }
        let mut data = [ZERO; 16];
        data[..dim * dim].copy_from_slice(entries);
        let m = HermitianMatrix { dim, data };
        let dev = m.hermiticity_defect();
        if dev > HERMITIAN_TOL {
            return Err(invalid(format!("matrix is not Hermitian (defect {dev:.3e})")));
        }
        Ok(m)
    }

    pub fn from_real(dim: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<Complex64> = entries.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        Self::new(dim, &c)
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        let dim = diag.len();
        let mut entries = vec![ZERO; dim * dim];
        for (i, &d) in diag.iter().enumerate() {
            entries[i * dim + i] = Complex64::new(d, 0.0);
        }
        Self::new(dim, &entries)
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::diagonal(&vec![1.0; dim])
    }

    /// Projector `|v⟩⟨v|` (not normalised).
    pub fn outer(v: &[Complex64]) -> Result<Self> {
        let dim = v.len();
        let mut entries = vec![ZERO; dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = v[i] * v[j].conj();
            }
        }
        Self::new(dim, &entries)
    }

    /// Pauli matrices σx, σy, σz.
    pub fn pauli(axis: usize) -> Self {
        let i = Complex64::new(0.0, 1.0);
        let entries = match axis {
            0 => [ZERO, ONE, ONE, ZERO],
            1 => [ZERO, -i, i, ZERO],
            _ => [ONE, ZERO, ZERO, -ONE],
        };
        Self::from_raw(2, &entries)
    }

    /// Internal constructor for results of Hermiticity-preserving algebra.
    /// Symmetrises away rounding so the stored matrix is exactly Hermitian.
    pub(crate) fn from_raw(dim: usize, entries: &[Complex64]) -> Self {
        let mut data = [ZERO; 16];
        for i in 0..dim {
            for j in i..dim {
                let upper = entries[i * dim + j];
                let lower = entries[j * dim + i];
                let z = (upper + lower.conj()) * 0.5;
                data[i * dim + j] = if i == j { Complex64::new(z.re, 0.0) } else { z };
                data[j * dim + i] = data[i * dim + j].conj();
            }
        }
        HermitianMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    /// Row-major entries.
    pub fn entries(&self) -> &[Complex64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn diagonal_values(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.get(i, i).re).collect()
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= factor);
        out
    }

    /// True when every imaginary part is within `tol` of zero.
    pub fn is_real(&self, tol: f64) -> bool {
        self.entries().iter().all(|z| z.im.abs() <= tol)
    }

    pub fn max_abs_diff(&self, other: &HermitianMatrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.entries()
            .iter()
            .zip(other.entries())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex64]) -> Vec<Complex64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(self)
    }

    fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in i..self.dim {
                worst = worst.max((self.get(i, j) - self.get(j, i).conj()).norm());
            }
        }
        worst
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

/// A unit-trace, positive-semidefinite Hermitian operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix {
    matrix: HermitianMatrix,
}

impl DensityMatrix {
    /// Validates trace and positivity of `matrix`.
    pub fn new(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > DENSITY_TOL || tr.im.abs() > TRACE_IMAG_TOL {
            return Err(invalid(format!("density matrix trace is {tr}, expected 1")));
        }
        let min = matrix
            .eigenvalues()?
            .last()
            .copied()
            .unwrap_or(0.0);
        if min < -DENSITY_TOL {
            return Err(invalid(format!(
                "density matrix is not positive semidefinite (min eigenvalue {min:.3e})"
            )));
        }
        Ok(DensityMatrix { matrix })
    }

    /// Normalises a positive semidefinite matrix by its trace.
    pub fn normalized(matrix: HermitianMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::DegenerateInput(format!("cannot normalise matrix with trace {tr}")));
        }
        Self::new(matrix.scaled(1.0 / tr))
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(HermitianMatrix::diagonal(diag)?)
    }

    /// `|ψ⟩⟨ψ|` for a normalised state vector.
    pub fn pure(amplitudes: &[Complex64]) -> Result<Self> {
        Self::new(HermitianMatrix::outer(amplitudes)?)
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(HermitianMatrix::identity(dim)?.scaled(1.0 / dim as f64))
    }

    /// Wraps a matrix already known to be a state (output of state-preserving maps).
    pub(crate) fn from_trusted(matrix: HermitianMatrix) -> Self {
        DensityMatrix { matrix }
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.matrix.get(i, j)
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        self.matrix.eigenvalues()
    }
}

fn require_two_qubit(m: &HermitianMatrix, what: &str) -> Result<()> {
    if m.dim != 4 {
        return Err(invalid(format!("{what} requires a 4x4 operator, got {0}x{0}", m.dim)));
    }
    Ok(())
}

/// `a` acting on Alice, `b` on Rob, in the shared basis ordering
/// (`result[(a + 2r, a' + 2r')] = a[(a, a')] · b[(r, r')]`).
pub fn tensor_product(a: &HermitianMatrix, b: &HermitianMatrix) -> Result<HermitianMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(invalid(format!(
            "tensor product needs two 2x2 operators, got {}x{0} and {}x{1}",
            a.dim, b.dim
        )));
    }
    let mut out = [ZERO; 16];
    for r in 0..2 {
        for rp in 0..2 {
            for x in 0..2 {
                for xp in 0..2 {
                    out[(x + 2 * r) * 4 + (xp + 2 * rp)] = a.get(x, xp) * b.get(r, rp);
                }
            }
        }
    }
    Ok(HermitianMatrix::from_raw(4, &out))
}

pub fn tensor_product_states(a: &DensityMatrix, b: &DensityMatrix) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_trusted(tensor_product(&a.matrix, &b.matrix)?))
}

/// Reduced operator of the `keep` subsystem.
pub fn partial_trace_operator(m: &HermitianMatrix, keep: Subsystem) -> Result<HermitianMatrix> {
    require_two_qubit(m, "partial trace")?;
    let mut out = [ZERO; 4];
    for i in 0..2 {
        for j in 0..2 {
            out[i * 2 + j] = match keep {
                Subsystem::A => (0..2).map(|r| m.get(i + 2 * r, j + 2 * r)).sum(),
                Subsystem::R => (0..2).map(|x| m.get(x + 2 * i, x + 2 * j)).sum(),
            };
        }
    }
    Ok(HermitianMatrix::from_raw(2, &out))
}

pub fn partial_trace(rho: &DensityMatrix, keep: Subsystem) -> Result<DensityMatrix> {
    Ok(DensityMatrix::from_trusted(partial_trace_operator(&rho.matrix, keep)?))
}

/// Transposes the indices of subsystem `on`. The result is Hermitian but in
/// general not positive.
pub fn partial_transpose(m: &HermitianMatrix, on: Subsystem) -> Result<HermitianMatrix> {
    require_two_qubit(m, "partial transpose")?;
    let mut out = [ZERO; 16];
    for r in 0..2 {
        for rp in 0..2 {
            for x in 0..2 {
                for xp in 0..2 {
                    let (src_row, src_col) = match on {
                        Subsystem::A => (xp + 2 * r, x + 2 * rp),
                        Subsystem::R => (x + 2 * rp, xp + 2 * r),
                    };
                    out[(x + 2 * r) * 4 + (xp + 2 * rp)] = m.get(src_row, src_col);
                }
            }
        }
    }
    Ok(HermitianMatrix::from_raw(4, &out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn singlet() -> DensityMatrix {
        let s = std::f64::consts::FRAC_1_SQRT_2;
        DensityMatrix::pure(&[c(0.0), c(-s), c(s), c(0.0)]).unwrap()
    }

    #[test]
    fn identity_tensor_identity() {
        let i2 = HermitianMatrix::identity(2).unwrap();
        let i4 = tensor_product(&i2, &i2).unwrap();
        assert_eq!(i4, HermitianMatrix::identity(4).unwrap());
    }

    #[test]
    fn tensor_ordering_alice_fastest() {
        let p0 = HermitianMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let p1 = HermitianMatrix::diagonal(&[0.0, 1.0]).unwrap();
        // |0_A⟩⟨0_A| ⊗ |1_R⟩⟨1_R| is the third basis ket, |0_A 1_R⟩.
        let m = tensor_product(&p0, &p1).unwrap();
        assert_eq!(m.diagonal_values(), vec![0.0, 0.0, 1.0, 0.0]);

        let z = tensor_product(&HermitianMatrix::pauli(2), &HermitianMatrix::identity(2).unwrap())
            .unwrap();
        assert_eq!(z.diagonal_values(), vec![1.0, -1.0, 1.0, -1.0]);
    }

    #[test]
    fn tensor_rejects_wrong_dims() {
        let i4 = HermitianMatrix::identity(4).unwrap();
        let i2 = HermitianMatrix::identity(2).unwrap();
        assert!(matches!(tensor_product(&i4, &i2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn singlet_marginal_is_maximally_mixed() {
        let rho = singlet();
        for keep in [Subsystem::A, Subsystem::R] {
            let red = partial_trace(&rho, keep).unwrap();
            let half = DensityMatrix::maximally_mixed(2).unwrap();
            assert!(red.matrix().max_abs_diff(half.matrix()) < 1e-15);
        }
    }

    #[test]
    fn product_marginals() {
        let a = DensityMatrix::new(
            HermitianMatrix::new(2, &[c(0.7), Complex64::new(0.1, 0.2), Complex64::new(0.1, -0.2), c(0.3)])
                .unwrap(),
        )
        .unwrap();
        let b = DensityMatrix::from_diagonal(&[0.4, 0.6]).unwrap();
        let ab = tensor_product_states(&a, &b).unwrap();
        assert!(partial_trace(&ab, Subsystem::A).unwrap().matrix().max_abs_diff(a.matrix()) < 1e-15);
        assert!(partial_trace(&ab, Subsystem::R).unwrap().matrix().max_abs_diff(b.matrix()) < 1e-15);
    }

    #[test]
    fn singlet_partial_transpose_has_negative_half() {
        let pt = partial_transpose(singlet().matrix(), Subsystem::R).unwrap();
        let ev = pt.eigenvalues().unwrap();
        assert_abs_diff_eq!(*ev.last().unwrap(), -0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(pt.trace().re, 1.0, epsilon = 1e-12);
    }

    #[test]
    fn product_partial_transpose_is_psd() {
        let a = DensityMatrix::from_diagonal(&[0.2, 0.8]).unwrap();
        let b = DensityMatrix::maximally_mixed(2).unwrap();
        let ab = tensor_product_states(&a, &b).unwrap();
        for on in [Subsystem::A, Subsystem::R] {
            let ev = partial_transpose(ab.matrix(), on).unwrap().eigenvalues().unwrap();
            assert!(ev.iter().all(|&l| l >= -1e-14));
        }
    }

    #[test]
    fn density_rejects_bad_trace_and_negative_spectrum() {
        assert!(DensityMatrix::from_diagonal(&[0.5, 0.6]).is_err());
        assert!(DensityMatrix::from_diagonal(&[1.2, -0.2]).is_err());
        assert!(DensityMatrix::from_diagonal(&[1.0 + 5e-11, -5e-11]).is_ok());
    }

    #[test]
    fn non_hermitian_rejected() {
        let r = HermitianMatrix::new(2, &[c(1.0), c(0.5), c(0.4), c(0.0)]);
        assert!(matches!(r, Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn subsystem_labels() {
        assert_eq!("alice".parse::<Subsystem>().unwrap(), Subsystem::A);
        assert_eq!("R".parse::<Subsystem>().unwrap(), Subsystem::R);
        assert!(matches!("C".parse::<Subsystem>(), Err(Error::InvalidArgument(_))));
    }
}

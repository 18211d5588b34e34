//! Two-qubit entanglement monotones.

use nalgebra::Matrix4;
use num_complex::Complex64;

use super::xstate::x_state_entries;
use crate::error::{invalid, Result};
use crate::qmath::{hermitian_eigen, partial_transpose, DensityMatrix, HermitianMatrix, Subsystem};

/// `2 max{0, |ρ12| - √(ρ00 ρ33), |ρ03| - √(ρ11 ρ22)}` for real X states
/// (matrix positions in the shared basis ordering).
pub fn concurrence_xstate(rho: &DensityMatrix) -> Result<f64> {
    let e = x_state_entries(rho)?;
    let inner = e.c12.abs() - (e.p00.max(0.0) * e.p33.max(0.0)).sqrt();
    let outer = e.c03.abs() - (e.p11.max(0.0) * e.p22.max(0.0)).sqrt();
    Ok(2.0 * inner.max(outer).max(0.0))
}

/// Sum of the magnitudes of the negative eigenvalues of the partial transpose.
pub fn negativity(rho: &DensityMatrix) -> Result<f64> {
    let pt = partial_transpose(rho.matrix(), Subsystem::R)?;
    Ok(pt
        .eigenvalues()?
        .into_iter()
        .filter(|&l| l < 0.0)
        .fold(0.0, |acc, l| acc - l))
}

fn to_na(m: &HermitianMatrix) -> Matrix4<Complex64> {
    Matrix4::from_fn(|i, j| m.get(i, j))
}

/// Wootters concurrence for an arbitrary two-qubit state, from the spectrum
/// of `√ρ ρ̃ √ρ` with `ρ̃ = (σy⊗σy) ρ* (σy⊗σy)`.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    if rho.dim() != 4 {
        return Err(invalid("concurrence needs a two-qubit state"));
    }
    let eig = hermitian_eigen(rho.matrix())?;
    let mut sqrt_rho = Matrix4::<Complex64>::zeros();
    for (lambda, v) in eig.values.iter().zip(&eig.vectors) {
        let w = lambda.max(0.0).sqrt();
        for i in 0..4 {
            for j in 0..4 {
                sqrt_rho[(i, j)] += v[i] * v[j].conj() * w;
            }
        }
    }
    // σy⊗σy: anti-diagonal (-1, 1, 1, -1) in either product ordering.
    let yy = Matrix4::<Complex64>::from_fn(|i, j| {
        if i + j == 3 {
            let s = if i == 0 || i == 3 { -1.0 } else { 1.0 };
            Complex64::new(s, 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    let rho_na = to_na(rho.matrix());
    let tilde = yy * rho_na.map(|z| z.conj()) * yy;
    let prod = sqrt_rho * tilde * sqrt_rho;
    let entries: Vec<Complex64> = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| prod[(i, j)]).collect();
    let herm = HermitianMatrix::from_raw(4, &entries);
    let mut lambdas: Vec<f64> = herm.eigenvalues()?.into_iter().map(|m| m.max(0.0).sqrt()).collect();
    lambdas.sort_by(|a, b| b.total_cmp(a));
    Ok((lambdas[0] - lambdas[1] - lambdas[2] - lambdas[3]).max(0.0))
}

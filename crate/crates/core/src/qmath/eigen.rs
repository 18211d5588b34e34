//! Cyclic Jacobi eigensolver for small complex Hermitian matrices.
//!
//! Each rotation first removes the phase of the pivot `a_pq` with a diagonal
//! unitary, then applies the classic real Jacobi rotation that zeroes it.

use num_complex::Complex64;

use super::HermitianMatrix;
use crate::error::{Error, Result};

/// Convergence threshold on the off-diagonal Frobenius norm.
pub const OFF_DIAGONAL_TOL: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;

/// Eigenpairs sorted by descending eigenvalue. `vectors[k]` is the unit
/// eigenvector for `values[k]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: Vec<Vec<Complex64>>,
}

type Block = [[Complex64; 4]; 4];

fn off_diagonal_norm(a: &Block, n: usize) -> f64 {
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[i][j].norm_sqr();
            }
        }
    }
    s.sqrt()
}

pub fn hermitian_eigen(m: &HermitianMatrix) -> Result<HermitianEigen> {
    let n = m.dim();
    let zero = Complex64::new(0.0, 0.0);
    let mut a: Block = [[zero; 4]; 4];
    let mut v: Block = [[zero; 4]; 4];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = m.get(i, j);
        }
        v[i][i] = Complex64::new(1.0, 0.0);
    }

    let mut converged = off_diagonal_norm(&a, n) <= OFF_DIAGONAL_TOL;
    let mut sweeps = 0;
    while !converged && sweeps < MAX_SWEEPS {
        for p in 0..n - 1 {
            for q in p + 1..n {
                rotate(&mut a, &mut v, n, p, q);
            }
        }
        sweeps += 1;
        converged = off_diagonal_norm(&a, n) <= OFF_DIAGONAL_TOL;
    }
    if !converged {
        return Err(Error::Numeric(format!(
            "Jacobi eigensolver did not converge in {MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].re.total_cmp(&a[i][i].re));
    Ok(HermitianEigen {
        values: order.iter().map(|&k| a[k][k].re).collect(),
        vectors: order
            .iter()
            .map(|&k| (0..n).map(|i| v[i][k]).collect())
            .collect(),
    })
}

/// Real eigenvalues in descending order.
pub fn hermitian_eigenvalues(m: &HermitianMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.values)
}

fn rotate(a: &mut Block, v: &mut Block, n: usize, p: usize, q: usize) {
    let apq = a[p][q];
    let mag = apq.norm();
    if mag == 0.0 {
        return;
    }
    // a_pq = |a_pq| e^{iφ}; G = diag(1, e^{-iφ}) · R(c, s) on the (p, q) plane.
    let phase = apq / mag;
    let theta = (a[q][q].re - a[p][p].re) / (2.0 * mag);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    // A ← A G
    for row in a.iter_mut().take(n) {
        let (x, y) = (row[p], row[q]);
        row[p] = x * g_pp + y * g_qp;
        row[q] = x * g_pq + y * g_qq;
    }
    // A ← G^H A
    for k in 0..n {
        let (x, y) = (a[p][k], a[q][k]);
        a[p][k] = g_pp.conj() * x + g_qp.conj() * y;
        a[q][k] = g_pq.conj() * x + g_qq.conj() * y;
    }
    a[p][q] = Complex64::new(0.0, 0.0);
    a[q][p] = Complex64::new(0.0, 0.0);
    a[p][p].im = 0.0;
    a[q][q].im = 0.0;
    // V ← V G
    for row in v.iter_mut().take(n) {
        let (x, y) = (row[p], row[q]);
        row[p] = x * g_pp + y * g_qp;
        row[q] = x * g_pq + y * g_qq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(rng: &mut ChaCha8Rng, n: usize) -> HermitianMatrix {
        let mut e = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            e[i * n + i] = Complex64::new(rng.gen_range(-1.0..1.0), 0.0);
            for j in i + 1..n {
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                e[i * n + j] = z;
                e[j * n + i] = z.conj();
            }
        }
        HermitianMatrix::new(n, &e).unwrap()
    }

    #[test]
    fn scaled_identity() {
        let m = HermitianMatrix::identity(4).unwrap().scaled(0.25);
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), vec![0.25; 4]);
    }

    #[test]
    fn diagonal_sorted_descending() {
        let m = HermitianMatrix::diagonal(&[0.3, 0.7]).unwrap();
        assert_eq!(hermitian_eigenvalues(&m).unwrap(), vec![0.7, 0.3]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let ev = hermitian_eigenvalues(&HermitianMatrix::pauli(1)).unwrap();
        assert_abs_diff_eq!(ev[0], 1.0, epsilon = 1e-15);
        assert_abs_diff_eq!(ev[1], -1.0, epsilon = 1e-15);
    }

    #[test]
    fn residuals_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let n = if rng.gen_bool(0.5) { 2 } else { 4 };
            let m = random_hermitian(&mut rng, n);
            let eig = hermitian_eigen(&m).unwrap();
            for (lambda, vec) in eig.values.iter().zip(&eig.vectors) {
                let mv = m.apply(vec);
                let res: f64 = mv
                    .iter()
                    .zip(vec)
                    .map(|(x, y)| (x - y * *lambda).norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= 1e-10, "residual {res}");
            }
            for i in 0..n {
                for j in 0..n {
                    let dot: Complex64 = eig.vectors[i]
                        .iter()
                        .zip(&eig.vectors[j])
                        .map(|(x, y)| x.conj() * y)
                        .sum();
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((dot - expect).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn agrees_with_nalgebra_on_real_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..100 {
            let mut e = [0.0; 16];
            for i in 0..4 {
                for j in i..4 {
                    let x = rng.gen_range(-1.0..1.0);
                    e[i * 4 + j] = x;
                    e[j * 4 + i] = x;
                }
            }
            let ours = hermitian_eigenvalues(&HermitianMatrix::from_real(4, &e).unwrap()).unwrap();
            let na = nalgebra::Matrix4::from_row_slice(&e);
            let mut theirs: Vec<f64> = na.symmetric_eigenvalues().iter().copied().collect();
            theirs.sort_by(|a, b| b.total_cmp(a));
            for (a, b) in ours.iter().zip(&theirs) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-11);
            }
        }
    }
}

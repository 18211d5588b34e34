//! Total, classical and quantum correlations of a two-qubit state.
//!
//! * `I` – quantum mutual information `S(ρ_A) + S(ρ_R) - S(ρ_AR)`.
//! * `K` – two-side classical correlation: the classical mutual information
//!   of local projective measurements on both qubits, maximised.
//! * `Q = I - K` – two-side quantum correlation.
//! * `D` – one-side discord, measuring a single qubit, and `C = I - D`.
//!
//! All quantities are in bits.

mod entanglement;
mod measurement;
mod optimize;
mod xstate;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::qmath::{
    entropy_bits, partial_trace, von_neumann_entropy, DensityMatrix, ProbabilityDistribution,
    Subsystem,
};

pub use entanglement::{concurrence, concurrence_xstate, negativity};
pub use measurement::BlochMeasurement;
pub use optimize::OptimizerSettings;
pub use xstate::{
    x_state_entries, xstate_discord_closed_form, ClosedFormDiscord, DiscordBranch, XStateEntries,
};

/// Measurement outcomes below this probability do not contribute to the
/// post-measurement conditional entropy.
pub const MIN_OUTCOME_PROBABILITY: f64 = 1e-14;

/// Values in `[-NEGATIVE_CLAMP, 0)` are reported as zero.
pub const NEGATIVE_CLAMP: f64 = 1e-9;

/// Imaginary parts below this mark a state as real for the optimiser's
/// phase reduction.
const REAL_TOL: f64 = 1e-14;

type Rows = [[Complex64; 4]; 4];

fn rows(rho: &DensityMatrix) -> Result<Rows> {
    if rho.dim() != 4 {
        return Err(invalid(format!("expected a two-qubit state, got dimension {}", rho.dim())));
    }
    let mut r = [[Complex64::new(0.0, 0.0); 4]; 4];
    for (i, row) in r.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            *z = rho.get(i, j);
        }
    }
    Ok(r)
}

fn clamp_small_negative(x: f64) -> f64 {
    if x < 0.0 && x >= -NEGATIVE_CLAMP {
        0.0
    } else {
        x
    }
}

pub fn mutual_information(rho: &DensityMatrix) -> Result<f64> {
    rows(rho)?;
    let sa = von_neumann_entropy(&partial_trace(rho, Subsystem::A)?)?;
    let sr = von_neumann_entropy(&partial_trace(rho, Subsystem::R)?)?;
    let s = von_neumann_entropy(rho)?;
    Ok(clamp_small_negative(sa + sr - s))
}

/// `p[2i + j] = Tr[(Π_i^A ⊗ Π_j^R) ρ]` with `i, j ∈ {+, -}`.
fn joint_probs(r: &Rows, ka: &[[Complex64; 2]; 2], kr: &[[Complex64; 2]; 2]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for i in 0..2 {
        for j in 0..2 {
            let mut psi = [Complex64::new(0.0, 0.0); 4];
            for a in 0..2 {
                for b in 0..2 {
                    psi[a + 2 * b] = ka[i][a] * kr[j][b];
                }
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..4 {
                let row: Complex64 = (0..4).map(|l| r[k][l] * psi[l]).sum();
                acc += psi[k].conj() * row;
            }
            out[2 * i + j] = acc.re.max(0.0);
        }
    }
    out
}

pub fn measured_joint_distribution(
    rho: &DensityMatrix,
    on_a: &BlochMeasurement,
    on_r: &BlochMeasurement,
) -> Result<ProbabilityDistribution> {
    let r = rows(rho)?;
    Ok(ProbabilityDistribution::from_trusted(
        joint_probs(&r, &on_a.kets(), &on_r.kets()).to_vec(),
    ))
}

fn classical_mi(p: &[f64; 4]) -> f64 {
    let pa = [p[0] + p[1], p[2] + p[3]];
    let pr = [p[0] + p[2], p[1] + p[3]];
    entropy_bits(&pa) + entropy_bits(&pr) - entropy_bits(p)
}

/// `H(A) + H(R) - H(A, R)` of a 2×2 outcome table indexed `2i + j`.
pub fn classical_mutual_information(p: &ProbabilityDistribution) -> Result<f64> {
    let probs: [f64; 4] = p
        .probs()
        .try_into()
        .map_err(|_| invalid(format!("expected 4 joint outcomes, got {}", p.len())))?;
    Ok(classical_mi(&probs).max(0.0))
}

/// Maximiser of the two-side classical correlation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TwoSideOptimum {
    pub value: f64,
    pub on_a: BlochMeasurement,
    pub on_r: BlochMeasurement,
    pub evals: usize,
}

pub fn classical_correlation_two_side(
    rho: &DensityMatrix,
    opt: &OptimizerSettings,
) -> Result<TwoSideOptimum> {
    opt.validate()?;
    let r = rows(rho)?;
    let real = rho.matrix().is_real(REAL_TOL);
    let objective = |x: &[f64]| {
        let ka = measurement::kets(x[0], x[1]);
        let kr = measurement::kets(x[2], x[3]);
        classical_mi(&joint_probs(&r, &ka, &kr))
    };
    let best = optimize::maximize_angles(objective, 2, real, opt);
    // the computational basis is always a feasible point
    let zz = objective(&[0.0; 4]);
    let (value, on_a, on_r) = if zz >= best.value {
        (zz, BlochMeasurement::Z, BlochMeasurement::Z)
    } else {
        (
            best.value,
            BlochMeasurement { theta: best.x[0], phi: best.x[1] },
            BlochMeasurement { theta: best.x[2], phi: best.x[3] },
        )
    };
    Ok(TwoSideOptimum {
        value: value.max(0.0),
        on_a,
        on_r,
        evals: best.evals + 1,
    })
}

pub fn quantum_correlation_two_side(rho: &DensityMatrix, opt: &OptimizerSettings) -> Result<f64> {
    let i = mutual_information(rho)?;
    let k = classical_correlation_two_side(rho, opt)?.value;
    Ok(clamp_small_negative(i - k).max(0.0))
}

/// Eigenvalues of a 2×2 Hermitian block, in closed form.
fn entropy_2x2(m: &[[Complex64; 2]; 2]) -> f64 {
    let t = 0.5 * (m[0][0].re + m[1][1].re);
    let d = 0.5 * (m[0][0].re - m[1][1].re);
    let rad = (d * d + m[0][1].norm_sqr()).sqrt();
    entropy_bits(&[t + rad, t - rad])
}

/// `Σ_j p_j S(ρ_{other|j})` after measuring `measured` with kets `k`.
fn conditional_entropy(r: &Rows, measured: Subsystem, k: &[[Complex64; 2]; 2]) -> f64 {
    let mut total = 0.0;
    for ket in k {
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, z) in row.iter_mut().enumerate() {
                let mut acc = Complex64::new(0.0, 0.0);
                for s in 0..2 {
                    for t in 0..2 {
                        let (ri, rj) = match measured {
                            // measure R: other index is Alice's, a + 2r
                            Subsystem::R => (i + 2 * s, j + 2 * t),
                            Subsystem::A => (s + 2 * i, t + 2 * j),
                        };
                        acc += ket[s].conj() * r[ri][rj] * ket[t];
                    }
                }
                *z = acc;
            }
        }
        let p = m[0][0].re + m[1][1].re;
        if p < MIN_OUTCOME_PROBABILITY {
            continue;
        }
        for row in m.iter_mut() {
            for z in row.iter_mut() {
                *z /= p;
            }
        }
        total += p * entropy_2x2(&m);
    }
    total
}

/// Minimiser of the post-measurement conditional entropy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OneSideOptimum {
    pub discord: f64,
    pub measurement: BlochMeasurement,
    pub conditional_entropy: f64,
    pub evals: usize,
}

pub fn optimize_discord(
    rho: &DensityMatrix,
    measured: Subsystem,
    opt: &OptimizerSettings,
) -> Result<OneSideOptimum> {
    opt.validate()?;
    let r = rows(rho)?;
    let real = rho.matrix().is_real(REAL_TOL);
    let objective = |x: &[f64]| -conditional_entropy(&r, measured, &measurement::kets(x[0], x[1]));
    let best = optimize::maximize_angles(objective, 1, real, opt);
    let cond = -best.value;
    let s_measured = von_neumann_entropy(&partial_trace(rho, measured)?)?;
    let s_joint = von_neumann_entropy(rho)?;
    let discord = clamp_small_negative(s_measured - s_joint + cond);
    Ok(OneSideOptimum {
        discord,
        measurement: BlochMeasurement { theta: best.x[0], phi: best.x[1] },
        conditional_entropy: cond,
        evals: best.evals,
    })
}

/// One-side discord with projective measurements on `measured`.
pub fn discord_one_side(rho: &DensityMatrix, measured: Subsystem, opt: &OptimizerSettings) -> Result<f64> {
    Ok(optimize_discord(rho, measured, opt)?.discord)
}

/// `C = I - D` for measurements on `measured`.
pub fn classical_one_side(rho: &DensityMatrix, measured: Subsystem, opt: &OptimizerSettings) -> Result<f64> {
    let i = mutual_information(rho)?;
    let d = discord_one_side(rho, measured, opt)?;
    Ok(clamp_small_negative(i - d))
}

/// Every correlation quantifier of a two-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationReport {
    pub mutual_info: f64,
    pub classical_two_side: f64,
    pub quantum_two_side: f64,
    pub discord_on_r: f64,
    pub discord_on_a: f64,
    /// `I - D_R`.
    pub classical_one_side: f64,
    pub concurrence: f64,
    pub negativity: f64,
    pub optimal_angles: (BlochMeasurement, BlochMeasurement),
    pub optimizer_evals: usize,
}

pub fn correlation_report(rho: &DensityMatrix, opt: &OptimizerSettings) -> Result<CorrelationReport> {
    let mutual_info = mutual_information(rho)?;
    let k = classical_correlation_two_side(rho, opt)?;
    let d_r = optimize_discord(rho, Subsystem::R, opt)?;
    let d_a = optimize_discord(rho, Subsystem::A, opt)?;
    Ok(CorrelationReport {
        mutual_info,
        classical_two_side: k.value,
        quantum_two_side: mutual_info - k.value,
        discord_on_r: d_r.discord,
        discord_on_a: d_a.discord,
        classical_one_side: mutual_info - d_r.discord,
        concurrence: concurrence(rho)?,
        negativity: negativity(rho)?,
        optimal_angles: (k.on_a, k.on_r),
        optimizer_evals: k.evals + d_r.evals + d_a.evals,
    })
}

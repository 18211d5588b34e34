//! Closed-form discord for X states with equal middle populations.
//!
//! In the shared basis ordering such a state reads
//!
//! ```text
//! ⎡ ρ11  0    0    ρ14 ⎤
//! ⎢ 0    ρ22  ρ23  0   ⎥
//! ⎢ 0    ρ23  ρ22  0   ⎥
//! ⎣ ρ14  0    0    ρ33 ⎦
//! ```
//!
//! and the discord is `min{D₁, D₂}`, where `D₁` is attained by a
//! computational-basis measurement and `D₂` by an equatorial one, with
//! `Γ² = (ρ11 - ρ33)² + 4|ρ23 + ρ14|²`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmath::{binary_entropy, partial_trace, von_neumann_entropy, DensityMatrix, Subsystem};

/// Off-pattern entries and middle-population mismatch allowed by the pattern check.
pub const X_PATTERN_TOL: f64 = 1e-10;

/// Nonzero entries of a real X state, indexed as matrix positions
/// `(0,0) (1,1) (2,2) (3,3) (1,2) (0,3)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XStateEntries {
    pub p00: f64,
    pub p11: f64,
    pub p22: f64,
    pub p33: f64,
    pub c12: f64,
    pub c03: f64,
}

/// Extracts the X-pattern entries, failing if any other entry exceeds
/// [`X_PATTERN_TOL`] or any entry has an imaginary part beyond it.
pub fn x_state_entries(rho: &DensityMatrix) -> Result<XStateEntries> {
    if rho.dim() != 4 {
        return Err(Error::NotAnXState(format!("dimension {} is not 4", rho.dim())));
    }
    for i in 0..4 {
        for j in 0..4 {
            let z = rho.get(i, j);
            let on_pattern = i == j || i + j == 3;
            if !on_pattern && z.norm() > X_PATTERN_TOL {
                return Err(Error::NotAnXState(format!(
                    "entry ({i},{j}) = {z} outside the X pattern"
                )));
            }
            if z.im.abs() > X_PATTERN_TOL {
                return Err(Error::NotAnXState(format!("entry ({i},{j}) = {z} is not real")));
            }
        }
    }
    Ok(XStateEntries {
        p00: rho.get(0, 0).re,
        p11: rho.get(1, 1).re,
        p22: rho.get(2, 2).re,
        p33: rho.get(3, 3).re,
        c12: rho.get(1, 2).re,
        c03: rho.get(0, 3).re,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DiscordBranch {
    /// Computational-basis measurement is optimal.
    One,
    /// Equatorial measurement is optimal.
    Two,
}

impl DiscordBranch {
    pub fn index(self) -> u8 {
        match self {
            DiscordBranch::One => 1,
            DiscordBranch::Two => 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClosedFormDiscord {
    pub value: f64,
    pub branch: DiscordBranch,
    pub d1: f64,
    pub d2: f64,
    pub gamma: f64,
}

/// `x log₂(x / y)` with the `0 log 0 = 0` convention.
fn xlog(x: f64, ratio: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * ratio.log2()
    }
}

pub fn xstate_discord_closed_form(rho: &DensityMatrix) -> Result<ClosedFormDiscord> {
    let e = x_state_entries(rho)?;
    if (e.p11 - e.p22).abs() > X_PATTERN_TOL {
        return Err(Error::NotAnXState(format!(
            "middle populations differ: {} vs {}",
            e.p11, e.p22
        )));
    }
    let (r11, r22, r33) = (e.p00, 0.5 * (e.p11 + e.p22), e.p33);
    let base = von_neumann_entropy(&partial_trace(rho, Subsystem::A)?)? - von_neumann_entropy(rho)?;

    let d1 = base
        - xlog(r11, r11 / (r11 + r22))
        - xlog(r22, r22 * r22 / ((r11 + r22) * (r33 + r22)))
        - xlog(r33, r33 / (r33 + r22));

    let gamma = ((r11 - r33).powi(2) + 4.0 * (e.c12 + e.c03).powi(2)).sqrt().min(1.0);
    // -½(1+Γ)log[½(1+Γ)] - ½(1-Γ)log[½(1-Γ)] = h((1+Γ)/2)
    let d2 = base + binary_entropy(0.5 * (1.0 + gamma));

    let (value, branch) = if d1 <= d2 {
        (d1, DiscordBranch::One)
    } else {
        (d2, DiscordBranch::Two)
    };
    Ok(ClosedFormDiscord {
        value,
        branch,
        d1,
        d2,
        gamma,
    })
}

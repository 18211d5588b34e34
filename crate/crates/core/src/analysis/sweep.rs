//! One- and two-dimensional parameter sweeps of the correlation quantifiers.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::correlations::{
    classical_correlation_two_side, concurrence_xstate, discord_one_side, mutual_information,
    negativity, OptimizerSettings,
};
use crate::error::{invalid, Error, Result};
use crate::qmath::Subsystem;
use crate::unruh::{model_state, ModelParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepVariable {
    Q,
    Nu2,
    Alpha,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::Q => "q",
            SweepVariable::Nu2 => "nu2",
            SweepVariable::Alpha => "alpha",
        }
    }

    fn set(self, p: &mut ModelParams, value: f64) {
        match self {
            SweepVariable::Q => p.q = value,
            SweepVariable::Nu2 => p.nu2 = value,
            SweepVariable::Alpha => p.alpha = value,
        }
    }
}

impl fmt::Display for SweepVariable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SweepVariable {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "q" => Ok(SweepVariable::Q),
            "nu2" | "nu^2" => Ok(SweepVariable::Nu2),
            "alpha" => Ok(SweepVariable::Alpha),
            other => Err(invalid(format!("unknown sweep variable '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Quantity {
    /// Mutual information.
    I,
    /// Two-side classical correlation.
    K,
    /// Two-side quantum correlation.
    Q,
    DiscordA,
    DiscordR,
    /// One-side classical correlation `I - D_R`.
    C,
    Concurrence,
    Negativity,
}

impl Quantity {
    pub const ALL: [Quantity; 8] = [
        Quantity::I,
        Quantity::K,
        Quantity::Q,
        Quantity::DiscordA,
        Quantity::DiscordR,
        Quantity::C,
        Quantity::Concurrence,
        Quantity::Negativity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Quantity::I => "I",
            Quantity::K => "K",
            Quantity::Q => "Q",
            Quantity::DiscordA => "D_A",
            Quantity::DiscordR => "D_R",
            Quantity::C => "C",
            Quantity::Concurrence => "concurrence",
            Quantity::Negativity => "negativity",
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Quantity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        Quantity::ALL
            .into_iter()
            .find(|q| q.name().eq_ignore_ascii_case(t))
            .or(match t.to_ascii_lowercase().as_str() {
                "da" => Some(Quantity::DiscordA),
                "dr" => Some(Quantity::DiscordR),
                _ => None,
            })
            .ok_or_else(|| invalid(format!("unknown quantity '{t}'")))
    }
}

/// A uniformly sampled axis `lo, ..., hi` with `points` samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub variable: SweepVariable,
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        (0..n)
            .map(|i| {
                if i + 1 == n {
                    self.hi
                } else {
                    self.lo + (self.hi - self.lo) * i as f64 / (n - 1) as f64
                }
            })
            .collect()
    }

    fn validate(&self) -> Result<()> {
        if self.points < 2 {
            return Err(invalid(format!("axis {} needs at least 2 points", self.variable)));
        }
        if !(self.lo < self.hi) || !self.lo.is_finite() || !self.hi.is_finite() {
            return Err(invalid(format!("axis {} needs lo < hi", self.variable)));
        }
        let ok = match self.variable {
            SweepVariable::Q | SweepVariable::Alpha => self.lo >= 0.0 && self.hi <= 1.0,
            SweepVariable::Nu2 => self.lo >= 0.0,
        };
        if !ok {
            return Err(invalid(format!(
                "axis {} range [{}, {}] leaves its domain",
                self.variable, self.lo, self.hi
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    /// Outer axis.
    pub axis: Axis,
    /// Optional inner axis for two-dimensional grids (long format).
    pub second: Option<Axis>,
    /// Values of the variables that are not swept.
    pub fixed: ModelParams,
    pub quantities: Vec<Quantity>,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        self.axis.validate()?;
        if let Some(second) = &self.second {
            second.validate()?;
            if second.variable == self.axis.variable {
                return Err(invalid("the two sweep axes must differ"));
            }
        }
        if self.quantities.is_empty() {
            return Err(invalid("no quantities requested"));
        }
        self.fixed.validate()
    }

    pub fn variables(&self) -> Vec<SweepVariable> {
        std::iter::once(self.axis.variable)
            .chain(self.second.map(|a| a.variable))
            .collect()
    }

    fn grid(&self) -> Vec<Vec<f64>> {
        let outer = self.axis.values();
        match &self.second {
            None => outer.into_iter().map(|x| vec![x]).collect(),
            Some(inner) => {
                let inner = inner.values();
                outer
                    .iter()
                    .flat_map(|&x| inner.iter().map(move |&y| vec![x, y]))
                    .collect()
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    /// Values of the swept variables, in [`SweepSpec::variables`] order.
    pub coords: Vec<f64>,
    /// One value per requested quantity, or the error that stopped this row.
    pub values: std::result::Result<Vec<f64>, String>,
}

/// Requested quantities at one parameter point. Shared intermediate
/// results (I, K, D_R) are computed once.
pub fn evaluate_quantities(
    params: &ModelParams,
    quantities: &[Quantity],
    opt: &OptimizerSettings,
) -> Result<Vec<f64>> {
    let rho = model_state(params)?;
    let needs = |qs: &[Quantity]| quantities.iter().any(|q| qs.contains(q));
    let i = if needs(&[Quantity::I, Quantity::Q, Quantity::C]) {
        Some(mutual_information(&rho)?)
    } else {
        None
    };
    let k = if needs(&[Quantity::K, Quantity::Q]) {
        Some(classical_correlation_two_side(&rho, opt)?.value)
    } else {
        None
    };
    let d_r = if needs(&[Quantity::DiscordR, Quantity::C]) {
        Some(discord_one_side(&rho, Subsystem::R, opt)?)
    } else {
        None
    };
    quantities
        .iter()
        .map(|q| match q {
            Quantity::I => Ok(i.unwrap()),
            Quantity::K => Ok(k.unwrap()),
            Quantity::Q => Ok((i.unwrap() - k.unwrap()).max(0.0)),
            Quantity::DiscordA => discord_one_side(&rho, Subsystem::A, opt),
            Quantity::DiscordR => Ok(d_r.unwrap()),
            Quantity::C => Ok(i.unwrap() - d_r.unwrap()),
            Quantity::Concurrence => concurrence_xstate(&rho),
            Quantity::Negativity => negativity(&rho),
        })
        .collect()
}

/// Evaluates every grid point of `spec`. Rows keep grid order for any
/// `jobs`; a failing row carries its error instead of aborting the sweep.
pub fn run_sweep(spec: &SweepSpec, opt: &OptimizerSettings, jobs: Option<usize>) -> Result<Vec<SweepRow>> {
    spec.validate()?;
    opt.validate()?;
    let vars = spec.variables();
    let grid = spec.grid();
    let row = |coords: &Vec<f64>| {
        let mut params = spec.fixed;
        for (v, &x) in vars.iter().zip(coords) {
            v.set(&mut params, x);
        }
        SweepRow {
            coords: coords.clone(),
            values: evaluate_quantities(&params, &spec.quantities, opt).map_err(|e| e.to_string()),
        }
    };
    match jobs {
        Some(1) => Ok(grid.iter().map(row).collect()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Numeric(format!("thread pool: {e}")))?;
            Ok(pool.install(|| grid.par_iter().map(row).collect()))
        }
        None => Ok(grid.par_iter().map(row).collect()),
    }
}

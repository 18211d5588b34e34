//! Coarse-grid plus Nelder–Mead maximisation over measurement angles.

use std::cell::Cell;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::measurement::BlochMeasurement;
use crate::error::{invalid, Result};

/// Knobs for the measurement optimisation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerSettings {
    /// Grid points per polar angle in the coarse scan.
    pub coarse_grid_per_angle: usize,
    /// Simplex convergence threshold on the spread of objective values.
    pub refine_tol: f64,
    pub max_refine_iters: usize,
    /// Number of local refinements; a quarter of them (at least one when
    /// `restarts >= 2`) start from random directions instead of grid seeds.
    pub restarts: usize,
    pub seed: u64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        OptimizerSettings {
            coarse_grid_per_angle: 24,
            refine_tol: 1e-10,
            max_refine_iters: 500,
            restarts: 8,
            seed: 0,
        }
    }
}

impl OptimizerSettings {
    pub fn validate(&self) -> Result<()> {
        if self.coarse_grid_per_angle < 2 {
            return Err(invalid("coarse grid needs at least 2 points per angle"));
        }
        if !(self.refine_tol > 0.0) || !self.refine_tol.is_finite() {
            return Err(invalid("refine_tol must be positive"));
        }
        if self.max_refine_iters == 0 || self.restarts == 0 {
            return Err(invalid("max_refine_iters and restarts must be positive"));
        }
        Ok(())
    }

    fn random_starts(&self) -> usize {
        if self.restarts >= 2 {
            (self.restarts / 4).max(1)
        } else {
            0
        }
    }
}

/// Result of a maximisation: best point, its value, and objective evaluations spent.
#[derive(Debug, Clone)]
pub(crate) struct Optimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evals: usize,
}

/// Per-side angle grid. Real states get the x–z great circle (`φ = 0`),
/// which covers every in-plane direction up to sign; complex states get a
/// coarser full-sphere grid.
pub(crate) fn side_grid(settings: &OptimizerSettings, real: bool) -> Vec<(f64, f64)> {
    let g = settings.coarse_grid_per_angle;
    if real {
        (0..g).map(|k| (k as f64 * PI / g as f64, 0.0)).collect()
    } else {
        let m = (g / 2).max(4);
        let mut out = Vec::with_capacity(m * m);
        for k in 0..m {
            for l in 0..m {
                out.push((k as f64 * PI / m as f64, l as f64 * PI / m as f64));
            }
        }
        out
    }
}

/// Maximises `objective` over `sides` independent (θ, φ) pairs.
pub(crate) fn maximize_angles<F>(
    objective: F,
    sides: usize,
    real: bool,
    settings: &OptimizerSettings,
) -> Optimum
where
    F: Fn(&[f64]) -> f64,
{
    let evals = Cell::new(0usize);
    let f = |x: &[f64]| {
        evals.set(evals.get() + 1);
        objective(x)
    };

    let grid = side_grid(settings, real);
    let mut scored: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut idx = vec![0usize; sides];
    loop {
        let x: Vec<f64> = idx.iter().flat_map(|&i| [grid[i].0, grid[i].1]).collect();
        scored.push((f(&x), x));
        // odometer increment over the per-side grid
        let mut k = 0;
        while k < sides {
            idx[k] += 1;
            if idx[k] < grid.len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == sides {
            break;
        }
    }
    scored.sort_by(|a, b| b.0.total_cmp(&a.0));

    let n_random = settings.random_starts();
    let n_grid = settings.restarts - n_random;
    let spacing = PI / settings.coarse_grid_per_angle as f64;
    let mut starts: Vec<Vec<f64>> = Vec::new();
    for (_, x) in &scored {
        if starts.len() >= n_grid {
            break;
        }
        let separated = starts.iter().all(|s| angular_gap(s, x) > 1.5 * spacing);
        if separated {
            starts.push(x.clone());
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);
    for _ in 0..n_random {
        let x: Vec<f64> = (0..sides)
            .flat_map(|_| {
                let u: f64 = rng.gen();
                let theta = (1.0 - 2.0 * u).acos();
                let phi = rng.gen_range(0.0..2.0 * PI);
                [theta, phi]
            })
            .collect();
        starts.push(x);
    }

    let step = 0.5 * spacing;
    let mut candidates: Vec<(Vec<f64>, f64)> = vec![(scored[0].1.clone(), scored[0].0)];
    candidates.extend(starts.iter().map(|s| nelder_mead_max(&f, s, step, settings)));
    let top = candidates.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);

    // Ties (degenerate optima) go to the lexicographically smallest canonical angles.
    let (x, value) = candidates
        .into_iter()
        .filter(|c| c.1 >= top - TIE_TOL)
        .map(|(x, v)| (canonical_angles(&x), v))
        .min_by(|a, b| {
            a.0.iter()
                .zip(&b.0)
                .map(|(p, q)| p.total_cmp(q))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
        .expect("at least one candidate");
    Optimum {
        x,
        value,
        evals: evals.get(),
    }
}

const TIE_TOL: f64 = 1e-12;

fn canonical_angles(x: &[f64]) -> Vec<f64> {
    x.chunks(2)
        .flat_map(|c| {
            let m = BlochMeasurement::canonical(c[0], c[1]);
            [m.theta, m.phi]
        })
        .collect()
}

fn angular_gap(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| {
            let d = (x - y).rem_euclid(PI);
            d.min(PI - d)
        })
        .fold(0.0, f64::max)
}

/// Nelder–Mead maximisation, restarted up to twice from the converged point
/// with a fresh small simplex to guard against a collapsed simplex.
fn nelder_mead_max<F>(f: &F, start: &[f64], step: f64, settings: &OptimizerSettings) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    let (mut x, mut v) = nelder_mead_run(f, start, step, settings);
    for restart_step in [step * 1e-2, step * 1e-4] {
        let (x2, v2) = nelder_mead_run(f, &x, restart_step, settings);
        let improved = v2 - v > settings.refine_tol;
        if v2 > v {
            x = x2;
            v = v2;
        }
        if !improved {
            break;
        }
    }
    (x, v)
}

fn nelder_mead_run<F>(f: &F, start: &[f64], step: f64, settings: &OptimizerSettings) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> f64,
{
    const REFLECT: f64 = 1.0;
    const EXPAND: f64 = 2.0;
    const CONTRACT: f64 = 0.5;
    const SHRINK: f64 = 0.5;

    let n = start.len();
    // minimise the negated objective
    let g = |x: &[f64]| -f(x);
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), g(start)));
    for i in 0..n {
        let mut p = start.to_vec();
        p[i] += step;
        let v = g(&p);
        simplex.push((p, v));
    }

    for iter in 0..settings.max_refine_iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        if iter > n && spread <= settings.refine_tol * simplex[0].1.abs().max(1.0) {
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|k| simplex[..n].iter().map(|(p, _)| p[k]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let along = |t: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&worst.0)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };

        let xr = along(REFLECT);
        let fr = g(&xr);
        if fr < simplex[0].1 {
            let xe = along(EXPAND);
            let fe = g(&xe);
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }
        let (xc, fc) = if fr < worst.1 {
            let xc = along(CONTRACT);
            let fc = g(&xc);
            (xc, fc)
        } else {
            let xc = along(-CONTRACT);
            let fc = g(&xc);
            (xc, fc)
        };
        if fc < worst.1.min(fr) {
            simplex[n] = (xc, fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for (p, v) in simplex.iter_mut().skip(1) {
            for (pk, bk) in p.iter_mut().zip(&best) {
                *pk = bk + SHRINK * (*pk - bk);
            }
            *v = g(p);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, v) = simplex.swap_remove(0);
    (x, -v)
}

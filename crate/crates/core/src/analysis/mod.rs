//! Sudden change, sudden death, curve fits and parameter sweeps.

pub mod fit;
pub mod roots;
pub mod sudden;
pub mod sweep;

pub use fit::{
    fit_exponential, sudden_change_curve, ExponentialFit, FitCoefficients, DEFAULT_FIT_POINTS,
    DEFAULT_FIT_RANGE,
};
pub use sudden::{
    detect_kink, discord_branch_gap, sudden_change_point_closed_form, sudden_change_point_kink,
    sudden_death_q, Kink, KinkMeasure, KinkSettings, DEFAULT_TOL_Q, SUDDEN_CHANGE_BRACKET,
};
pub use sweep::{evaluate_quantities, run_sweep, Axis, Quantity, SweepRow, SweepSpec, SweepVariable};

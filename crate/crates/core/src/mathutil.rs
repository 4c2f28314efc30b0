//! Numerical checks of the sine inequalities the separation analysis rests on:
//! `a·sin t ≤ sin(a·t) ≤ √a·sin t` for `a ∈ (0, 1)`, the upper bound only on
//! `[0, π/4]`.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

/// Absolute slack allowed when comparing near-equal quantities.
pub const BOUND_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrigBoundReport {
    pub a: f64,
    pub t: f64,
    /// `a·sin t`
    pub lower: f64,
    /// `sin(a·t)`
    pub mid: f64,
    /// `√a·sin t`
    pub upper: f64,
    pub lower_holds: bool,
    /// `None` when `t > π/4`, where the upper bound is not claimed.
    pub upper_holds: Option<bool>,
}

impl TrigBoundReport {
    pub fn holds(&self) -> bool {
        self.lower_holds && self.upper_holds.unwrap_or(true)
    }
}

pub fn check_trig_bounds(a: f64, t: f64) -> TrigBoundReport {
    let sin_t = t.sin();
    let lower = a * sin_t;
    let mid = (a * t).sin();
    let upper = a.sqrt() * sin_t;
    TrigBoundReport {
        a,
        t,
        lower,
        mid,
        upper,
        lower_holds: lower <= mid + BOUND_TOLERANCE,
        upper_holds: (t <= FRAC_PI_4).then_some(mid <= upper + BOUND_TOLERANCE),
    }
}

/// Whether `sin θ ≤ a·sin t ⟹ θ ≤ a·t` holds at the given point.
///
/// Vacuously true when the premise fails.
pub fn angle_implication_holds(theta: f64, a: f64, t: f64) -> bool {
    theta.sin() > a * t.sin() + BOUND_TOLERANCE || theta <= a * t + BOUND_TOLERANCE
}

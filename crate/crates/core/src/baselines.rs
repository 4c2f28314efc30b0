//! Comparison strategies for deciding `p ≥ t` versus `p ≤ t'`, and the
//! dominant query-complexity terms of all three strategies.

use std::io::Write;

use log::warn;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{estimate_additive, EstimationConfig, EstimationMode, MAX_EPSILON};
use crate::separation::Decision;
use crate::sim::{DecisionAlgorithm, QueryLedger};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineVerdict {
    pub decision: Decision,
    pub ledger: QueryLedger,
    /// The empirical fraction or the amplitude estimate the decision used.
    pub statistic: f64,
}

fn check_thresholds(t: f64, t_prime: f64, delta: f64) -> Result<()> {
    if !(t_prime > 0.0 && t_prime < t && t < 1.0) {
        return Err(Error::domain(format!(
            "thresholds must satisfy 0 < t' < t < 1 (got t={t}, t'={t_prime})"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta={delta} must lie in (0, 1)")));
    }
    Ok(())
}

/// Hoeffding sample count `⌈ln(2/δ) / (2γ²)⌉` with `γ = (t - t')/2`.
pub fn hoeffding_samples(t: f64, t_prime: f64, delta: f64) -> u64 {
    let gamma = (t - t_prime) / 2.0;
    ((2.0 / delta).ln() / (2.0 * gamma * gamma)).ceil() as u64
}

/// Runs `A` repeatedly, measures each time, and accepts iff the fraction of
/// good outcomes is at least the midpoint `(t + t')/2`.
pub fn classical_repetition_decide<A, R>(
    alg: &A,
    t: f64,
    t_prime: f64,
    delta: f64,
    rng: &mut R,
) -> Result<BaselineVerdict>
where
    A: DecisionAlgorithm + ?Sized,
    R: Rng + ?Sized,
{
    check_thresholds(t, t_prime, delta)?;
    let samples = hoeffding_samples(t, t_prime, delta);
    let p = alg.success_probability();
    let good = (0..samples).filter(|_| rng.gen::<f64>() < p).count() as u64;
    let mut ledger = QueryLedger::new();
    alg.charge(&mut ledger, samples, 0);
    let fraction = good as f64 / samples as f64;
    Ok(BaselineVerdict {
        decision: decide(fraction >= (t + t_prime) / 2.0),
        ledger,
        statistic: fraction,
    })
}

/// One additive estimate with `ε = min((t - t')/2, 1/4)`, accepting iff
/// `p̃ ≥ (t + t')/2`.
pub fn estimation_only_decide<A, R>(
    alg: &A,
    t: f64,
    t_prime: f64,
    delta: f64,
    mode: EstimationMode,
    rng: &mut R,
) -> Result<BaselineVerdict>
where
    A: DecisionAlgorithm + ?Sized,
    R: Rng + ?Sized,
{
    check_thresholds(t, t_prime, delta)?;
    let epsilon = ((t - t_prime) / 2.0).min(MAX_EPSILON);
    let config = EstimationConfig::new(epsilon, delta)?;
    let outcome = estimate_additive(alg, &config, mode, rng)?;
    Ok(BaselineVerdict {
        decision: decide(outcome.p_tilde >= (t + t_prime) / 2.0),
        ledger: outcome.ledger,
        statistic: outcome.p_tilde,
    })
}

fn decide(accept: bool) -> Decision {
    if accept {
        Decision::Accept
    } else {
        Decision::Reject
    }
}

/// Dominant query terms at one `(ρ_y, ρ_n)` point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CurvePoint {
    pub rho_y: f64,
    pub rho_n: f64,
    /// `(1-ρ_y) / ((1-ρ_y) - ρ_n)`
    pub classical_term: f64,
    /// `1 / ((1-ρ_y) - ρ_n)`
    pub estimation_term: f64,
    /// `1 / (√(1-ρ_y) - √ρ_n)`
    pub separation_term: f64,
}

impl CurvePoint {
    /// `None` unless `0 ≤ ρ_n < 1 - ρ_y`, where all three terms are finite.
    pub fn new(rho_y: f64, rho_n: f64) -> Option<Self> {
        let yes = 1.0 - rho_y;
        if !(rho_n >= 0.0 && rho_n < yes) {
            return None;
        }
        let gap = yes - rho_n;
        Some(Self {
            rho_y,
            rho_n,
            classical_term: yes / gap,
            estimation_term: 1.0 / gap,
            separation_term: 1.0 / (yes.sqrt() - rho_n.sqrt()),
        })
    }
}

/// Evaluates the three terms on every grid point, skipping points where the
/// curves diverge.
pub fn query_curves(rho_y: f64, rho_n_grid: &[f64]) -> Vec<CurvePoint> {
    rho_n_grid
        .iter()
        .filter_map(|&rho_n| {
            let point = CurvePoint::new(rho_y, rho_n);
            if point.is_none() {
                warn!(
                    "skipping rho_n={rho_n}: requires rho_n < 1 - rho_y = {}",
                    1.0 - rho_y
                );
            }
            point
        })
        .collect()
}

/// `steps` evenly spaced values `i·max/steps` for `i = 0, …, steps - 1`.
pub fn rho_n_grid(rho_n_max: f64, steps: usize) -> Vec<f64> {
    (0..steps)
        .map(|i| rho_n_max * i as f64 / steps as f64)
        .collect()
}

/// Formats `x` with six significant digits.
pub fn format_significant(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    if !(-4..6).contains(&magnitude) {
        return format!("{x:.5e}");
    }
    let decimals = (5 - magnitude).max(0) as usize;
    let rounded = format!("{x:.decimals$}");
    // rounding can carry into a new digit (e.g. 9.999995 -> 10.00000)
    let carried: f64 = rounded.parse().expect("formatted float");
    if carried.abs().log10().floor() as i32 > magnitude {
        let decimals = (4 - magnitude).max(0) as usize;
        return format!("{x:.decimals$}");
    }
    rounded
}

/// Writes `rho_n,classical,estimation,separation` rows.
pub fn write_curves_csv<W: Write>(points: &[CurvePoint], writer: W) -> std::io::Result<()> {
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["rho_n", "classical", "estimation", "separation"])?;
    for p in points {
        csv.write_record([
            format_significant(p.rho_n),
            format_significant(p.classical_term),
            format_significant(p.estimation_term),
            format_significant(p.separation_term),
        ])?;
    }
    csv.flush()
}

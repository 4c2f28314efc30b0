//! Amplitude estimation with additive error.
//!
//! A single run of phase estimation on the Grover iterate returns
//! `p̃ = sin²(πy/2^m)`; with `2^m ≥ 3π/(2ε)` a run lands within `ε` of `p` with
//! probability at least `8/π²`, and the median of `R` runs drives the failure
//! probability down to `δ`.
//!
//! Two execution modes share the ledger accounting:
//! [`EstimationMode::Distribution`] samples the closed-form outcome law and
//! needs only `p`; [`EstimationMode::Statevector`] simulates the whole
//! phase-estimation circuit and serves as the reference for the first.

mod circuit;
mod distribution;

pub use circuit::{phase_estimation_distribution, MAX_CIRCUIT_QUBITS};
pub use distribution::{amp_est_distribution, estimate_from_outcome, MAX_PHASE_QUBITS};

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::amplification::angle_of;
use crate::error::{Error, Result};
use crate::rng::substream;
use crate::sim::{DecisionAlgorithm, QueryLedger};
use distribution::OutcomeSampler;

/// Largest additive accuracy the estimator accepts.
pub const MAX_EPSILON: f64 = 0.25;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EstimationMode {
    /// Sample the closed-form outcome law of phase estimation.
    #[default]
    Distribution,
    /// Simulate the phase-estimation circuit on the full statevector.
    Statevector,
}

/// Parameters of the additive-error median estimator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationConfig {
    pub epsilon: f64,
    pub delta: f64,
    /// Phase-register size `m`; the smallest with `2^m ≥ 3π/(2ε)`.
    pub phase_qubits: u32,
    /// Odd number of runs `R` whose median is returned.
    pub repetitions: u32,
}

impl EstimationConfig {
    pub fn new(epsilon: f64, delta: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon <= MAX_EPSILON) {
            return Err(Error::domain(format!(
                "accuracy epsilon={epsilon} must lie in (0, 1/4]"
            )));
        }
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::domain(format!("delta={delta} must lie in (0, 1)")));
        }
        let required = 3.0 * PI / (2.0 * epsilon);
        let mut phase_qubits = 1;
        while ((1u64 << phase_qubits) as f64) < required {
            phase_qubits += 1;
        }
        if phase_qubits > MAX_PHASE_QUBITS {
            return Err(Error::domain(format!(
                "epsilon={epsilon} needs {phase_qubits} phase qubits (limit {MAX_PHASE_QUBITS})"
            )));
        }
        Ok(Self {
            epsilon,
            delta,
            phase_qubits,
            repetitions: median_repetitions(delta),
        })
    }

    /// Replaces the repetition count, e.g. with a `Θ(ln 1/δ)` schedule.
    pub fn with_repetitions(mut self, repetitions: u32) -> Result<Self> {
        if repetitions == 0 || repetitions.is_multiple_of(2) {
            return Err(Error::domain(format!(
                "repetitions={repetitions} must be a positive odd integer"
            )));
        }
        self.repetitions = repetitions;
        Ok(self)
    }

    /// Calls to the estimated algorithm and its adjoint in one run:
    /// `2^m` forward (preparation plus one per iterate) and `2^m - 1` adjoint.
    pub fn calls_per_run(&self) -> u64 {
        (1u64 << (self.phase_qubits + 1)) - 1
    }

    /// `M`: calls made by one complete median estimate.
    pub fn calls_per_estimate(&self) -> u64 {
        self.repetitions as u64 * self.calls_per_run()
    }
}

/// `⌈7 (ln 1/δ)^{1/3}⌉` rounded up to an odd number, at least 3.
pub fn median_repetitions(delta: f64) -> u32 {
    let raw = (7.0 * (1.0 / delta).ln().cbrt()).ceil().max(1.0) as u32;
    let odd = if raw.is_multiple_of(2) { raw + 1 } else { raw };
    odd.max(3)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateOutcome {
    pub p_tilde: f64,
    /// Charges in units of the underlying base algorithm.
    pub ledger: QueryLedger,
    /// Calls to the estimated algorithm and its adjoint.
    pub invocations: u64,
}

/// Exact measurement distribution of the phase register.
pub fn outcome_distribution<A: DecisionAlgorithm + ?Sized>(
    alg: &A,
    m: u32,
    mode: EstimationMode,
) -> Result<Vec<f64>> {
    match mode {
        EstimationMode::Distribution => {
            amp_est_distribution(angle_of(alg.success_probability())?, m)
        }
        EstimationMode::Statevector => phase_estimation_distribution(alg, m),
    }
}

/// Draws the phase-register measurement `y` of one run, uncharged.
pub fn sample_outcome<A, R>(alg: &A, m: u32, mode: EstimationMode, rng: &mut R) -> Result<usize>
where
    A: DecisionAlgorithm + ?Sized,
    R: Rng + ?Sized,
{
    let sampler = OutcomeSampler::new(&outcome_distribution(alg, m, mode)?)?;
    Ok(sampler.sample(rng))
}

/// One run of amplitude estimation with an `m`-qubit phase register.
pub fn amp_est_once<A, R>(
    alg: &A,
    m: u32,
    mode: EstimationMode,
    rng: &mut R,
) -> Result<EstimateOutcome>
where
    A: DecisionAlgorithm + ?Sized,
    R: Rng + ?Sized,
{
    let y = sample_outcome(alg, m, mode, rng)?;
    let mut ledger = QueryLedger::new();
    charge_run(alg, m, &mut ledger);
    Ok(EstimateOutcome {
        p_tilde: estimate_from_outcome(y, m),
        ledger,
        invocations: (1u64 << (m + 1)) - 1,
    })
}

/// Median of `R` independent runs; `Pr[|p - p̃| ≥ ε] ≤ δ`.
///
/// Run `r` draws from substream `r` of a seed taken from `rng`.
pub fn estimate_additive<A, R>(
    alg: &A,
    config: &EstimationConfig,
    mode: EstimationMode,
    rng: &mut R,
) -> Result<EstimateOutcome>
where
    A: DecisionAlgorithm + ?Sized,
    R: Rng + ?Sized,
{
    let m = config.phase_qubits;
    let sampler = OutcomeSampler::new(&outcome_distribution(alg, m, mode)?)?;
    let base_seed: u64 = rng.gen();
    let mut estimates: Vec<f64> = (0..config.repetitions as u64)
        .map(|r| estimate_from_outcome(sampler.sample(&mut substream(base_seed, r)), m))
        .collect();
    estimates.sort_by(f64::total_cmp);

    let mut ledger = QueryLedger::new();
    for _ in 0..config.repetitions {
        charge_run(alg, m, &mut ledger);
    }
    Ok(EstimateOutcome {
        p_tilde: estimates[estimates.len() / 2],
        ledger,
        invocations: config.calls_per_estimate(),
    })
}

fn charge_run<A: DecisionAlgorithm + ?Sized>(alg: &A, m: u32, ledger: &mut QueryLedger) {
    let size = 1u64 << m;
    alg.charge(ledger, size, size - 1);
}

//! Amplitude separation: decide `p ≥ t` versus `p ≤ t'` with error at most `δ`.
//!
//! Writing `t = sin²τ` and `t' = β²t`, the procedure runs stages
//! `i = 0, …, s` with `s = ⌊log₃(π/4τ)⌋`. Stage `i` amplifies with
//! `k_i = (3^i - 1)/2` Grover iterations, estimates the amplified probability
//! to additive accuracy `ε'` with failure `δ/(1+s)`, and accepts as soon as
//! the estimate reaches `ε*`. For `θ ≥ τ` some stage lifts the angle into
//! `[3^s τ, 3π/4]`; for `sin θ ≤ β sin τ` every stage stays below
//! `sin²(3^s βτ)`, and `ε*` sits halfway between the two.

use std::f64::consts::PI;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::amplification::{tripling_schedule, Amplified};
use crate::error::{Error, Result};
use crate::estimation::{estimate_additive, EstimationConfig, EstimationMode, MAX_EPSILON};
use crate::sim::{DecisionAlgorithm, QueryLedger};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationConfig {
    pub t: f64,
    pub t_prime: f64,
    pub delta: f64,
    /// `β = √(t'/t)`, so that `t' = β²t`.
    pub beta: f64,
    /// `τ = arcsin √t`.
    pub tau: f64,
    /// Index of the last stage, `s`.
    pub stages: u32,
    pub delta_prime: f64,
    pub epsilon_prime: f64,
    pub epsilon_star: f64,
    /// `k_i` for `i = 0, …, s`.
    pub schedule: Vec<u64>,
    /// Estimator used at every stage; its accuracy is `min(ε', 1/4)`.
    pub estimation: EstimationConfig,
}

/// Derives every parameter of the procedure from `(t, t', δ)`.
pub fn derive_params(t: f64, t_prime: f64, delta: f64) -> Result<SeparationConfig> {
    if !(t > 0.0 && t <= 1.0) {
        return Err(Error::domain(format!("threshold t={t} must lie in (0, 1]")));
    }
    if !(t_prime >= 0.0 && t_prime < t) {
        return Err(Error::domain(format!(
            "threshold t'={t_prime} must satisfy 0 <= t' < t = {t}"
        )));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta={delta} must lie in (0, 1)")));
    }

    let beta = (t_prime / t).sqrt();
    let tau = t.sqrt().asin();
    let stages = stage_count(tau);
    let psi = 3f64.powi(stages as i32) * tau;
    let upper = psi.sin().powi(2);
    let lower = (beta * psi).sin().powi(2);
    let epsilon_prime = 0.5 * (upper - lower);
    let epsilon_star = 0.5 * (upper + lower);
    let delta_prime = delta / (1 + stages) as f64;
    let estimation = EstimationConfig::new(epsilon_prime.min(MAX_EPSILON), delta_prime)?;

    Ok(SeparationConfig {
        t,
        t_prime,
        delta,
        beta,
        tau,
        stages,
        delta_prime,
        epsilon_prime,
        epsilon_star,
        schedule: tripling_schedule(stages),
        estimation,
    })
}

/// Largest `s ≥ 0` with `3^s τ ≤ π/4`, i.e. `max(0, ⌊log₃(π/4τ)⌋)` without
/// floating-point logarithms.
fn stage_count(tau: f64) -> u32 {
    let mut s = 0;
    while 3f64.powi(s as i32 + 1) * tau <= PI / 4.0 {
        s += 1;
    }
    s
}

impl SeparationConfig {
    /// `ψ = 3^s τ`, the angle every yes-instance reaches at some stage.
    pub fn psi(&self) -> f64 {
        3f64.powi(self.stages as i32) * self.tau
    }

    /// Replaces the estimator's repetition count.
    pub fn with_estimator_repetitions(mut self, repetitions: u32) -> Result<Self> {
        self.estimation = self.estimation.with_repetitions(repetitions)?;
        Ok(self)
    }

    /// `½(1 + M)·3π/(8τ)` for an estimator making `M` calls per estimate.
    pub fn query_bound(&self, estimator_calls: u64) -> f64 {
        0.5 * (1.0 + estimator_calls as f64) * 3.0 * PI / (8.0 * self.tau)
    }

    /// The closed-form call count with every constant spelled out:
    /// `½ · 3π/(8 arcsin √t) · (1 + 7⌈36/(1-β)⌉ (ln((1+s)/δ))^{1/3})`.
    ///
    /// Reported for comparison only; it is not derived from this estimator's
    /// parameterization.
    pub fn closed_form_call_estimate(&self) -> f64 {
        let inner = 7.0
            * (36.0 / (1.0 - self.beta)).ceil()
            * ((1 + self.stages) as f64 / self.delta).ln().cbrt();
        0.5 * 3.0 * PI / (8.0 * self.tau) * (1.0 + inner)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decision {
    Accept,
    Reject,
}

impl Decision {
    pub fn is_accept(self) -> bool {
        matches!(self, Decision::Accept)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeparationVerdict {
    pub decision: Decision,
    /// Stage at which the estimate first reached `ε*`.
    pub accepting_stage: Option<u32>,
    pub ledger: QueryLedger,
    /// `M`, the calls made by each stage's estimator on its amplified algorithm.
    pub estimator_calls: u64,
    /// The estimate obtained at each executed stage.
    pub stage_estimates: Vec<f64>,
}

/// Runs the staged amplify-then-estimate procedure on `alg`.
///
/// Inputs violating the promise (`t' < p < t`) get whatever verdict the
/// thresholds produce.
pub fn separate<A, R>(
    alg: &A,
    config: &SeparationConfig,
    mode: EstimationMode,
    rng: &mut R,
) -> Result<SeparationVerdict>
where
    A: DecisionAlgorithm + ?Sized,
    R: Rng + ?Sized,
{
    let mut ledger = QueryLedger::new();
    let mut stage_estimates = Vec::with_capacity(config.schedule.len());
    let mut estimator_calls = 0;

    for (stage, &k) in config.schedule.iter().enumerate() {
        let amplified = Amplified::new(alg, k);
        let outcome = estimate_additive(&amplified, &config.estimation, mode, rng)?;
        ledger += outcome.ledger;
        estimator_calls = outcome.invocations;
        stage_estimates.push(outcome.p_tilde);
        if outcome.p_tilde >= config.epsilon_star {
            return Ok(SeparationVerdict {
                decision: Decision::Accept,
                accepting_stage: Some(stage as u32),
                ledger,
                estimator_calls,
                stage_estimates,
            });
        }
    }

    Ok(SeparationVerdict {
        decision: Decision::Reject,
        accepting_stage: None,
        ledger,
        estimator_calls,
        stage_estimates,
    })
}

//! Weight decision for Boolean functions.
//!
//! The basic circuit puts the `n` input qubits in uniform superposition and
//! writes `f(x)` into a fresh output qubit, so the output reads `|1⟩` with
//! probability `wt(f)/2^n`. Amplitude separation on that circuit decides
//! `wt(f) ≤ k₁` versus `wt(f) ≥ k₂`, and a binary search over a sorted list of
//! candidate weights pins down `wt(f)` exactly.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::EstimationMode;
use crate::separation::{derive_params, separate, Decision, SeparationVerdict};
use crate::sim::{
    apply_oracle_in_place, BooleanFunction, DecisionAlgorithm, QueryLedger, StateVector,
};

/// The weight-decision circuit for `f` on `n + 1` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct WdpAlgorithm {
    f: BooleanFunction,
}

pub fn build_wdp_algorithm(f: BooleanFunction) -> Result<WdpAlgorithm> {
    if f.n() == 0 {
        return Err(Error::domain(
            "weight decision needs at least one input bit",
        ));
    }
    Ok(WdpAlgorithm { f })
}

impl WdpAlgorithm {
    pub fn function(&self) -> &BooleanFunction {
        &self.f
    }

    fn output_qubit(&self) -> usize {
        self.f.n() as usize
    }
}

impl DecisionAlgorithm for WdpAlgorithm {
    fn num_qubits(&self) -> usize {
        self.f.n() as usize + 1
    }

    fn apply(&self, state: &mut StateVector) {
        for q in 0..self.f.n() as usize {
            state.hadamard(q);
        }
        apply_oracle_in_place(state, &self.f, self.output_qubit())
            .expect("register layout fixed at construction");
    }

    fn apply_adjoint(&self, state: &mut StateVector) {
        apply_oracle_in_place(state, &self.f, self.output_qubit())
            .expect("register layout fixed at construction");
        for q in 0..self.f.n() as usize {
            state.hadamard(q);
        }
    }

    fn is_good(&self, index: usize) -> bool {
        (index >> self.output_qubit()) & 1 == 1
    }

    /// Each call to the circuit or its inverse queries `U_f` once.
    fn charge(&self, ledger: &mut QueryLedger, forward: u64, adjoint: u64) {
        ledger.calls_a += forward;
        ledger.calls_a_dagger += adjoint;
        ledger.calls_uf += forward + adjoint;
    }

    fn success_probability(&self) -> f64 {
        self.f.weight() as f64 / self.f.domain_size() as f64
    }
}

/// A weight-decision instance whose promise has been checked.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightDecisionInstance {
    pub f: BooleanFunction,
    pub k1: u64,
    pub k2: u64,
    pub delta: f64,
}

impl WeightDecisionInstance {
    pub fn new(f: BooleanFunction, k1: u64, k2: u64, delta: f64) -> Result<Self> {
        check_thresholds(&f, k1, k2)?;
        let w = f.weight();
        if w > k1 && w < k2 {
            return Err(Error::domain(format!(
                "promise violated: wt(f)={w} lies strictly between k1={k1} and k2={k2}"
            )));
        }
        Ok(Self { f, k1, k2, delta })
    }

    pub fn solve<R: Rng + ?Sized>(
        &self,
        mode: EstimationMode,
        rng: &mut R,
    ) -> Result<SeparationVerdict> {
        solve_wdp(&self.f, self.k1, self.k2, self.delta, mode, rng)
    }
}

fn check_thresholds(f: &BooleanFunction, k1: u64, k2: u64) -> Result<()> {
    let size = f.domain_size() as u64;
    if k1 >= k2 {
        return Err(Error::domain(format!(
            "k1={k1} must be smaller than k2={k2}"
        )));
    }
    if k2 > size {
        return Err(Error::domain(format!("k2={k2} exceeds 2^n = {size}")));
    }
    Ok(())
}

/// Decides `wt(f) ≥ k₂` (accept) versus `wt(f) ≤ k₁` (reject) with error at
/// most `δ`, using `t = k₂/2^n` and `t' = k₁/2^n`.
pub fn solve_wdp<R: Rng + ?Sized>(
    f: &BooleanFunction,
    k1: u64,
    k2: u64,
    delta: f64,
    mode: EstimationMode,
    rng: &mut R,
) -> Result<SeparationVerdict> {
    check_thresholds(f, k1, k2)?;
    let size = f.domain_size() as f64;
    let config = derive_params(k2 as f64 / size, k1 as f64 / size, delta)?;
    let alg = build_wdp_algorithm(f.clone())?;
    separate(&alg, &config, mode, rng)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MwdpResult {
    pub weight: u64,
    /// Number of separation runs performed.
    pub as_calls: u32,
    pub ledger: QueryLedger,
}

/// `⌈log₂ k⌉`, the depth of the binary search over `k` candidates.
pub fn search_depth(k: usize) -> u32 {
    if k <= 1 {
        0
    } else {
        usize::BITS - (k - 1).leading_zeros()
    }
}

/// Finds `wt(f)` among strictly increasing candidate `weights`.
///
/// Each level compares the two middle candidates with separation at error
/// `δ/⌈log₂ k⌉`, where `k` is the length of the original list, and keeps the
/// half the verdict points to.
pub fn solve_mwdp<R: Rng + ?Sized>(
    f: &BooleanFunction,
    weights: &[u64],
    delta: f64,
    mode: EstimationMode,
    rng: &mut R,
) -> Result<MwdpResult> {
    validate_weights(weights, f.domain_size() as u64)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::domain(format!("delta={delta} must lie in (0, 1)")));
    }
    let alg = build_wdp_algorithm(f.clone())?;
    let size = f.domain_size() as f64;
    let level_delta = delta / search_depth(weights.len()).max(1) as f64;

    let (mut lo, mut hi) = (0usize, weights.len());
    let mut ledger = QueryLedger::new();
    let mut as_calls = 0;
    while hi - lo > 1 {
        // lower half is weights[lo..mid], upper half weights[mid..hi]
        let mid = lo + (hi - lo) / 2;
        let config = derive_params(
            weights[mid] as f64 / size,
            weights[mid - 1] as f64 / size,
            level_delta,
        )?;
        let verdict = separate(&alg, &config, mode, rng)?;
        ledger += verdict.ledger;
        as_calls += 1;
        match verdict.decision {
            Decision::Accept => lo = mid,
            Decision::Reject => hi = mid,
        }
    }

    Ok(MwdpResult {
        weight: weights[lo],
        as_calls,
        ledger,
    })
}

/// Checks `0 < w₁ < … < w_k < 2^n`.
pub fn validate_weights(weights: &[u64], domain_size: u64) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::domain("weight list is empty"));
    }
    if weights[0] == 0 {
        return Err(Error::domain("candidate weights must be positive"));
    }
    if let Some(w) = weights.windows(2).find(|w| w[0] >= w[1]) {
        return Err(Error::domain(format!(
            "weights must be strictly increasing ({} is followed by {})",
            w[0], w[1]
        )));
    }
    let last = *weights.last().expect("non-empty");
    if last >= domain_size {
        return Err(Error::domain(format!(
            "weight {last} must be smaller than 2^n = {domain_size}"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionClass {
    Constant,
    Balanced,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeutschJozsaVerdict {
    pub class: FunctionClass,
    pub ledger: QueryLedger,
}

/// Constant-versus-balanced via weight decision on `g(x) = f(x) ⊕ f(0)`:
/// `wt(g) = 0` for constant `f` and `2^(n-1)` for balanced `f`.
///
/// Reading `f(0)` costs one oracle call; `U_g` is `U_f` followed by a
/// classically controlled bit flip, so every call to the circuit for `g`
/// is one call to `U_f`.
pub fn deutsch_jozsa<R: Rng + ?Sized>(
    f: &BooleanFunction,
    delta: f64,
    mode: EstimationMode,
    rng: &mut R,
) -> Result<DeutschJozsaVerdict> {
    let g = f.shifted_by_origin();
    let half = (f.domain_size() / 2) as u64;
    let verdict = solve_wdp(&g, 0, half, delta, mode, rng)?;
    let mut ledger = verdict.ledger;
    ledger.calls_uf += 1;
    let class = match verdict.decision {
        Decision::Accept => FunctionClass::Balanced,
        Decision::Reject => FunctionClass::Constant,
    };
    Ok(DeutschJozsaVerdict { class, ledger })
}

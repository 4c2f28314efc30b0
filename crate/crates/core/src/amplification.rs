//! Amplitude amplification.
//!
//! The Grover iterate `Q = -A S₀ A† S_χ` rotates the success angle by `2θ`,
//! so `k` iterations on `A|0⟩` lift `sin²θ` to `sin²((2k+1)θ)`. Reflections are
//! applied as `O(2^q)` sign flips, never as matrices.

use crate::error::{Error, Result};
use crate::sim::{run_decision_algorithm, DecisionAlgorithm, QueryLedger, StateVector};

/// `θ ∈ [0, π/2]` with `p = sin²θ`.
pub fn angle_of(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::domain(format!("probability {p} is outside [0, 1]")));
    }
    Ok(p.sqrt().asin())
}

/// `k_i = (3^i - 1) / 2`, so that `2k_i + 1 = 3^i`.
pub fn tripling_schedule(stages: u32) -> Vec<u64> {
    (0..=stages).map(|i| (3u64.pow(i) - 1) / 2).collect()
}

/// The Grover iterate of a base algorithm.
#[derive(Debug, Clone, Copy)]
pub struct GroverIterate<A> {
    base: A,
}

impl<A: DecisionAlgorithm> GroverIterate<A> {
    pub fn new(base: A) -> Self {
        Self { base }
    }

    pub fn base(&self) -> &A {
        &self.base
    }

    /// Applies `Q` once, charging one call each to `A` and `A†`.
    pub fn apply(&self, state: &mut StateVector, ledger: &mut QueryLedger) {
        grover_step(&self.base, state);
        self.base.charge(ledger, 1, 1);
    }
}

/// `Q = -A S₀ A† S_χ`, uncharged.
///
/// The overall `-1` is kept: it is invisible to measurement but fixes the
/// eigenphases of `Q` at `±2θ`, which controlled applications expose.
pub(crate) fn grover_step<A: DecisionAlgorithm + ?Sized>(base: &A, state: &mut StateVector) {
    state.phase_flip_where(|i| base.is_good(i));
    base.apply_adjoint(state);
    state.phase_flip_where(|i| i == 0);
    base.apply(state);
    state.negate();
}

/// `Q† = -S_χ A S₀ A†`, uncharged.
pub(crate) fn grover_step_adjoint<A: DecisionAlgorithm + ?Sized>(
    base: &A,
    state: &mut StateVector,
) {
    base.apply_adjoint(state);
    state.phase_flip_where(|i| i == 0);
    base.apply(state);
    state.phase_flip_where(|i| base.is_good(i));
    state.negate();
}

/// `Q^k A|0⟩` after `k` Grover iterations. Charges `1 + k` calls to `A` and
/// `k` calls to `A†`.
pub fn amplify<A: DecisionAlgorithm + ?Sized>(
    alg: &A,
    k: u64,
    ledger: &mut QueryLedger,
) -> StateVector {
    let mut state = run_decision_algorithm(alg, ledger);
    let iterate = GroverIterate::new(alg);
    for _ in 0..k {
        iterate.apply(&mut state, ledger);
    }
    state
}

/// The algorithm `B = Q^k A`, itself a decision algorithm with the same good
/// projector and success probability `sin²((2k+1)θ)`.
///
/// Calls to `B` are charged to the base in base units: one `B` costs `1 + k`
/// calls to `A` and `k` to `A†`.
#[derive(Debug, Clone, Copy)]
pub struct Amplified<A> {
    base: A,
    iterations: u64,
}

impl<A: DecisionAlgorithm> Amplified<A> {
    pub fn new(base: A, iterations: u64) -> Self {
        Self { base, iterations }
    }

    pub fn iterations(&self) -> u64 {
        self.iterations
    }

    pub fn base(&self) -> &A {
        &self.base
    }
}

impl<A: DecisionAlgorithm> DecisionAlgorithm for Amplified<A> {
    fn num_qubits(&self) -> usize {
        self.base.num_qubits()
    }

    fn apply(&self, state: &mut StateVector) {
        self.base.apply(state);
        for _ in 0..self.iterations {
            grover_step(&self.base, state);
        }
    }

    fn apply_adjoint(&self, state: &mut StateVector) {
        for _ in 0..self.iterations {
            grover_step_adjoint(&self.base, state);
        }
        self.base.apply_adjoint(state);
    }

    fn is_good(&self, index: usize) -> bool {
        self.base.is_good(index)
    }

    fn charge(&self, ledger: &mut QueryLedger, forward: u64, adjoint: u64) {
        let k = self.iterations;
        self.base.charge(
            ledger,
            forward * (1 + k) + adjoint * k,
            forward * k + adjoint * (1 + k),
        );
    }

    fn success_probability(&self) -> f64 {
        let theta = self
            .base
            .success_probability()
            .clamp(0.0, 1.0)
            .sqrt()
            .asin();
        let amplified = ((2 * self.iterations + 1) as f64 * theta).sin();
        (amplified * amplified).clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{success_probability, AnalyticAlgorithm};
    use std::f64::consts::PI;

    fn amplified_p(p: f64, k: u64) -> (f64, QueryLedger) {
        let alg = AnalyticAlgorithm::new(p).unwrap();
        let mut ledger = QueryLedger::new();
        let state = amplify(&alg, k, &mut ledger);
        (success_probability(&state, |i| alg.is_good(i)), ledger)
    }

    #[test]
    fn angle_of_fixtures() {
        assert_eq!(angle_of(0.0).unwrap(), 0.0);
        assert!((angle_of(1.0).unwrap() - PI / 2.0).abs() < 1e-15);
        assert!((angle_of(0.25).unwrap() - PI / 6.0).abs() < 1e-15);
        assert!(angle_of(-0.1).is_err());
        assert!(angle_of(1.0 + 1e-9).is_err());
    }

    #[test]
    fn quarter_probability_amplifies_to_one() {
        let (p, ledger) = amplified_p(0.25, 1);
        assert!((p - 1.0).abs() < 1e-12);
        assert_eq!((ledger.calls_a, ledger.calls_a_dagger), (2, 1));
    }

    #[test]
    fn zero_iterations_is_identity_on_probability() {
        let (p, ledger) = amplified_p(0.37, 0);
        assert!((p - 0.37).abs() < 1e-14);
        assert_eq!((ledger.calls_a, ledger.calls_a_dagger), (1, 0));
    }

    #[test]
    fn one_tenth_after_one_iteration() {
        // sin²(3·arcsin√0.1) = 0.676 exactly (evaluated at 40 digits)
        let (p, _) = amplified_p(0.1, 1);
        assert!((p - 0.676).abs() < 1e-9);
    }

    #[test]
    fn adjoint_of_amplified_inverts_it() {
        let base = AnalyticAlgorithm::new(0.13).unwrap();
        let b = Amplified::new(base, 4);
        let mut state = StateVector::zero(1);
        b.apply(&mut state);
        b.apply_adjoint(&mut state);
        assert!((state.probability(0) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn amplified_charges_in_base_units() {
        let base = AnalyticAlgorithm::new(0.2).unwrap();
        let b = Amplified::new(base, 3);
        let mut ledger = QueryLedger::new();
        b.charge(&mut ledger, 2, 1);
        assert_eq!(ledger.calls_a, 2 * 4 + 3);
        assert_eq!(ledger.calls_a_dagger, 2 * 3 + 4);
    }

    #[test]
    fn schedule_is_powers_of_three() {
        for (i, k) in tripling_schedule(12).into_iter().enumerate() {
            assert_eq!(2 * k + 1, 3u64.pow(i as u32));
        }
    }
}

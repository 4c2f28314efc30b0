use super::ledger::QueryLedger;
use super::state::{success_probability, StateVector};
use crate::error::{Error, Result};

/// A bounded-error decision algorithm `A`, treated as a black box.
///
/// `A` is a unitary on `num_qubits` qubits applied to `|0…0⟩`; the algorithm
/// answers "yes" when the measured basis index satisfies [`is_good`].
/// Implementations apply the raw unitaries only. Query accounting goes through
/// [`charge`], which callers invoke once per logical call so that simulated and
/// distribution-sampled runs produce identical ledgers.
///
/// [`is_good`]: DecisionAlgorithm::is_good
/// [`charge`]: DecisionAlgorithm::charge
pub trait DecisionAlgorithm: Send + Sync {
    fn num_qubits(&self) -> usize;

    /// Applies `A` in place.
    fn apply(&self, state: &mut StateVector);

    /// Applies `A†` in place.
    fn apply_adjoint(&self, state: &mut StateVector);

    fn is_good(&self, index: usize) -> bool;

    /// Records `forward` calls to `A` and `adjoint` calls to `A†`.
    fn charge(&self, ledger: &mut QueryLedger, forward: u64, adjoint: u64) {
        ledger.calls_a += forward;
        ledger.calls_a_dagger += adjoint;
    }

    /// Exact success probability `p` of `A|0…0⟩`.
    ///
    /// The default simulates the preparation without charging a query.
    /// Implementations with a closed form override this so that
    /// distribution-mode estimation scales past statevector sizes.
    fn success_probability(&self) -> f64 {
        let mut state = StateVector::zero(self.num_qubits());
        self.apply(&mut state);
        success_probability(&state, |i| self.is_good(i))
    }
}

impl<T: DecisionAlgorithm + ?Sized> DecisionAlgorithm for &T {
    fn num_qubits(&self) -> usize {
        (**self).num_qubits()
    }
    fn apply(&self, state: &mut StateVector) {
        (**self).apply(state)
    }
    fn apply_adjoint(&self, state: &mut StateVector) {
        (**self).apply_adjoint(state)
    }
    fn is_good(&self, index: usize) -> bool {
        (**self).is_good(index)
    }
    fn charge(&self, ledger: &mut QueryLedger, forward: u64, adjoint: u64) {
        (**self).charge(ledger, forward, adjoint)
    }
    fn success_probability(&self) -> f64 {
        (**self).success_probability()
    }
}

/// Runs `A` on `|0…0⟩`, charging one call to `A`.
pub fn run_decision_algorithm<A: DecisionAlgorithm + ?Sized>(
    alg: &A,
    ledger: &mut QueryLedger,
) -> StateVector {
    let mut state = StateVector::zero(alg.num_qubits());
    alg.apply(&mut state);
    alg.charge(ledger, 1, 0);
    state
}

/// One-qubit algorithm `R_y(2θ)|0⟩` with `p = sin²θ` on outcome `|1⟩`.
///
/// Stands in for any algorithm whose success probability is known
/// analytically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticAlgorithm {
    p: f64,
    angle: f64,
}

impl AnalyticAlgorithm {
    pub fn new(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::domain(format!("probability {p} is outside [0, 1]")));
        }
        Ok(Self {
            p,
            angle: p.sqrt().asin(),
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

impl DecisionAlgorithm for AnalyticAlgorithm {
    fn num_qubits(&self) -> usize {
        1
    }

    fn apply(&self, state: &mut StateVector) {
        state.rotate_y(0, 2.0 * self.angle);
    }

    fn apply_adjoint(&self, state: &mut StateVector) {
        state.rotate_y(0, -2.0 * self.angle);
    }

    fn is_good(&self, index: usize) -> bool {
        index & 1 == 1
    }

    fn success_probability(&self) -> f64 {
        self.p
    }
}

//! Exact statevector simulation substrate.

mod algorithm;
mod function;
mod ledger;
mod state;

pub use algorithm::{run_decision_algorithm, AnalyticAlgorithm, DecisionAlgorithm};
pub use function::{BooleanFunction, MAX_INPUT_BITS};
pub use ledger::QueryLedger;
pub use state::{success_probability, StateVector, MAX_QUBITS, NORM_TOLERANCE};

use crate::error::{Error, Result};

/// `U_f : |x⟩|b⟩ ↦ |x⟩|b ⊕ f(x)⟩`, with `x` in the low `n` qubits and `b` on
/// `target`. Charges one oracle call.
pub fn apply_oracle(
    state: &StateVector,
    f: &BooleanFunction,
    target: usize,
    ledger: &mut QueryLedger,
) -> Result<StateVector> {
    let mut out = state.clone();
    apply_oracle_in_place(&mut out, f, target)?;
    ledger.calls_uf += 1;
    Ok(out)
}

/// Uncharged in-place form of [`apply_oracle`].
pub(crate) fn apply_oracle_in_place(
    state: &mut StateVector,
    f: &BooleanFunction,
    target: usize,
) -> Result<()> {
    let n = f.n() as usize;
    if state.num_qubits() < n + 1 {
        return Err(Error::config(format!(
            "oracle for a {n}-bit function needs at least {} qubits, state has {}",
            n + 1,
            state.num_qubits()
        )));
    }
    if target < n || target >= state.num_qubits() {
        return Err(Error::config(format!(
            "target qubit {target} must lie outside the input register [0, {n}) and inside the state"
        )));
    }
    let input_mask = (1usize << n) - 1;
    let bit = 1usize << target;
    let amps = state.amplitudes_mut();
    for i in 0..amps.len() {
        if i & bit == 0 && f.eval(i & input_mask) {
            amps.swap(i, i | bit);
        }
    }
    Ok(())
}

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::amplification::grover_step;
use crate::error::{Error, Result};
use crate::sim::{DecisionAlgorithm, StateVector};

/// Largest `m + q` the circuit simulation accepts.
pub const MAX_CIRCUIT_QUBITS: usize = 20;

/// Measurement distribution of the phase register after simulating the full
/// phase-estimation circuit on `m + q` qubits.
///
/// The phase register starts in `H^{⊗m}|0⟩`, qubit `j` controls `Q^{2^j}` on the
/// system register prepared as `A|0⟩`, and the inverse QFT is applied before
/// measurement. Since every control pattern is a phase-register basis state
/// `|x⟩`, the joint state is held as one system branch `Q^x A|0⟩` per `x`.
pub fn phase_estimation_distribution<A: DecisionAlgorithm + ?Sized>(
    alg: &A,
    m: u32,
) -> Result<Vec<f64>> {
    let q = alg.num_qubits();
    if m == 0 || m as usize + q > MAX_CIRCUIT_QUBITS {
        return Err(Error::domain(format!(
            "phase estimation on {m} + {q} qubits exceeds the {MAX_CIRCUIT_QUBITS}-qubit circuit limit"
        )));
    }
    let size = 1usize << m;
    let norm = 1.0 / (size as f64).sqrt();

    let mut prepared = StateVector::zero(q);
    alg.apply(&mut prepared);

    // branches[x] = Q^x A|0⟩ / √N
    let mut branches = Vec::with_capacity(size);
    let mut current = prepared;
    for x in 0..size {
        if x > 0 {
            grover_step(alg, &mut current);
        }
        branches.push(
            current
                .amplitudes()
                .iter()
                .map(|a| a * norm)
                .collect::<Vec<_>>(),
        );
    }

    // inverse QFT on the phase register, then marginalize over the system
    let dim = 1usize << q;
    let twiddle: Vec<Complex64> = (0..size)
        .map(|k| Complex64::from_polar(norm, -2.0 * PI * k as f64 / size as f64))
        .collect();
    let mut probs = vec![0.0; size];
    for s in 0..dim {
        for (y, prob) in probs.iter_mut().enumerate() {
            let amp: Complex64 = branches
                .iter()
                .enumerate()
                .map(|(x, branch)| branch[s] * twiddle[(x * y) % size])
                .sum();
            *prob += amp.norm_sqr();
        }
    }
    Ok(probs)
}

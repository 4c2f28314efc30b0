use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance used for every normalization check.
pub const NORM_TOLERANCE: f64 = 1e-10;

/// Largest register the simulator will allocate.
pub const MAX_QUBITS: usize = 26;

/// Dense vector of `2^num_qubits` complex amplitudes.
///
/// Basis index bit `q` is the state of qubit `q`; input registers live in the
/// low-order bits and the output qubit of a decision algorithm is the
/// highest-order bit.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// The all-zeros basis state `|0…0⟩`.
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        assert!(
            num_qubits <= MAX_QUBITS,
            "register of {num_qubits} qubits is too large"
        );
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self {
            num_qubits,
            amplitudes,
        }
    }

    /// Wraps raw amplitudes, checking the length is a power of two and the
    /// vector is normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::config(format!(
                "amplitude vector length {len} is not a power of two"
            )));
        }
        let state = Self {
            num_qubits: len.trailing_zeros() as usize,
            amplitudes,
        };
        state.check_normalized()?;
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    pub fn check_normalized(&self) -> Result<()> {
        let norm = self.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::Invariant(format!(
                "state norm {norm} deviates from 1 by more than {NORM_TOLERANCE}"
            )));
        }
        Ok(())
    }

    pub fn hadamard(&mut self, qubit: usize) {
        let bit = 1usize << qubit;
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let a = self.amplitudes[i];
                let b = self.amplitudes[i | bit];
                self.amplitudes[i] = (a + b) * h;
                self.amplitudes[i | bit] = (a - b) * h;
            }
        }
    }

    /// `R_y(angle)`: maps `|0⟩` to `cos(angle/2)|0⟩ + sin(angle/2)|1⟩`.
    pub fn rotate_y(&mut self, qubit: usize, angle: f64) {
        let bit = 1usize << qubit;
        let (s, c) = (angle / 2.0).sin_cos();
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                let a = self.amplitudes[i];
                let b = self.amplitudes[i | bit];
                self.amplitudes[i] = a * c - b * s;
                self.amplitudes[i | bit] = a * s + b * c;
            }
        }
    }

    pub fn pauli_x(&mut self, qubit: usize) {
        let bit = 1usize << qubit;
        for i in 0..self.amplitudes.len() {
            if i & bit == 0 {
                self.amplitudes.swap(i, i | bit);
            }
        }
    }

    /// Negates every amplitude whose index satisfies `predicate`.
    pub fn phase_flip_where(&mut self, predicate: impl Fn(usize) -> bool) {
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if predicate(i) {
                *a = -*a;
            }
        }
    }

    pub fn negate(&mut self) {
        for a in &mut self.amplitudes {
            *a = -*a;
        }
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }
}

/// Total probability mass on basis indices accepted by `projector`.
pub fn success_probability(state: &StateVector, projector: impl Fn(usize) -> bool) -> f64 {
    let p: f64 = state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(i, _)| projector(*i))
        .map(|(_, a)| a.norm_sqr())
        .sum();
    p.clamp(0.0, 1.0)
}

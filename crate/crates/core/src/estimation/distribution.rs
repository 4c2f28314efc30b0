use std::f64::consts::PI;

use rand::Rng;

use crate::error::{Error, Result};

/// Largest phase register the closed-form distribution will build.
pub const MAX_PHASE_QUBITS: u32 = 24;

/// Outcome law of phase estimation of the Grover iterate on `m` qubits.
///
/// The start state splits evenly over the eigenvectors with phases `±θ/π`,
/// so `Pr[y] = ½ F(ω - y/2^m) + ½ F(-ω - y/2^m)` with `F` the Fejér kernel
/// `|2^-m Σ_j e^{2πi j x}|²`.
pub fn amp_est_distribution(theta: f64, m: u32) -> Result<Vec<f64>> {
    if !(0.0..=PI / 2.0 + 1e-15).contains(&theta) {
        return Err(Error::domain(format!("angle {theta} is outside [0, π/2]")));
    }
    if m == 0 || m > MAX_PHASE_QUBITS {
        return Err(Error::domain(format!(
            "phase register size {m} is outside [1, {MAX_PHASE_QUBITS}]"
        )));
    }
    let size = 1usize << m;
    let omega = theta / PI;
    Ok((0..size)
        .map(|y| {
            let shift = y as f64 / size as f64;
            0.5 * (fejer(omega - shift, size) + fejer(-omega - shift, size))
        })
        .collect())
}

/// `|N^-1 Σ_{j<N} e^{2πi j x}|² = sin²(πNx) / (N² sin²(πx))`.
fn fejer(x: f64, size: usize) -> f64 {
    let x = x - x.round();
    let den = (PI * x).sin();
    if den.abs() < 1e-13 {
        return 1.0;
    }
    let num = (PI * size as f64 * x).sin();
    (num * num) / (den * den * (size * size) as f64)
}

/// `p̃ = sin²(πy / 2^m)`.
pub fn estimate_from_outcome(y: usize, m: u32) -> f64 {
    let s = (PI * y as f64 / (1u64 << m) as f64).sin();
    (s * s).clamp(0.0, 1.0)
}

/// Inverse-CDF sampler over a finite outcome distribution.
#[derive(Debug, Clone)]
pub(crate) struct OutcomeSampler {
    cumulative: Vec<f64>,
}

impl OutcomeSampler {
    pub(crate) fn new(masses: &[f64]) -> Result<Self> {
        let mut acc = 0.0;
        let cumulative: Vec<f64> = masses
            .iter()
            .map(|&p| {
                acc += p.max(0.0);
                acc
            })
            .collect();
        if (acc - 1.0).abs() > 1e-9 {
            return Err(Error::Invariant(format!(
                "outcome distribution sums to {acc}, not 1"
            )));
        }
        Ok(Self { cumulative })
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().expect("non-empty distribution");
        let u = rng.gen::<f64>() * total;
        let idx = self.cumulative.partition_point(|&c| c <= u);
        idx.min(self.cumulative.len() - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;
    use rand::SeedableRng;

    // Direct geometric sum, independent of the closed-form kernel.
    fn brute_force(theta: f64, m: u32) -> Vec<f64> {
        let size = 1usize << m;
        let omega = theta / PI;
        let amp = |w: f64, y: usize| -> f64 {
            let s: Complex64 = (0..size)
                .map(|j| {
                    Complex64::from_polar(1.0, 2.0 * PI * j as f64 * (w - y as f64 / size as f64))
                })
                .sum();
            (s / size as f64).norm_sqr()
        };
        (0..size)
            .map(|y| 0.5 * (amp(omega, y) + amp(-omega, y)))
            .collect()
    }

    #[test]
    fn certainty_cases() {
        for m in 1..=8 {
            let d = amp_est_distribution(0.0, m).unwrap();
            assert!((d[0] - 1.0).abs() < 1e-12);
            let d = amp_est_distribution(PI / 2.0, m).unwrap();
            assert!((d[1 << (m - 1)] - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_phase_collapses_to_conjugate_pair() {
        let d = amp_est_distribution(PI / 8.0, 3).unwrap();
        assert!((d[1] - 0.5).abs() < 1e-12);
        assert!((d[7] - 0.5).abs() < 1e-12);
        assert!((estimate_from_outcome(1, 3) - estimate_from_outcome(7, 3)).abs() < 1e-15);
    }

    #[test]
    fn half_bin_phase_has_full_support() {
        // ω = 1/16 on m = 3; values frozen from a 40-digit brute-force sum
        let expected = [
            0.410_533_474_517_002_82,
            0.230_577_899_827_591_64,
            0.036_611_652_351_681_56,
            0.019_422_100_172_408_356,
            0.016_243_220_779_634_06,
            0.019_422_100_172_408_356,
            0.036_611_652_351_681_56,
            0.230_577_899_827_591_64,
        ];
        let d = amp_est_distribution(PI / 16.0, 3).unwrap();
        for (got, want) in d.iter().zip(expected) {
            assert!((got - want).abs() < 1e-12, "{got} vs {want}");
        }
        assert!((d.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn closed_form_matches_direct_sum() {
        for m in 1..=7 {
            for step in 0..=40 {
                let theta = step as f64 * (PI / 2.0) / 40.0;
                let a = amp_est_distribution(theta, m).unwrap();
                let b = brute_force(theta, m);
                for (x, y) in a.iter().zip(&b) {
                    assert!((x - y).abs() < 1e-10);
                }
            }
        }
    }

    #[test]
    fn normalized_on_fine_grid() {
        for m in 1..=10 {
            for step in 0..=500 {
                let theta = step as f64 * (PI / 2.0) / 500.0;
                let total: f64 = amp_est_distribution(theta, m).unwrap().iter().sum();
                assert!((total - 1.0).abs() < 1e-12, "m={m} θ={theta}: {total}");
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(amp_est_distribution(-0.1, 3).is_err());
        assert!(amp_est_distribution(2.0, 3).is_err());
        assert!(amp_est_distribution(0.3, 0).is_err());
    }

    #[test]
    fn sampler_hits_only_supported_outcomes() {
        let sampler = OutcomeSampler::new(&[0.0, 0.5, 0.0, 0.5]).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let mut counts = [0usize; 4];
        for _ in 0..10_000 {
            counts[sampler.sample(&mut rng)] += 1;
        }
        assert_eq!(counts[0] + counts[2], 0);
        assert!((counts[1] as i64 - 5000).abs() < 300);
        assert!(OutcomeSampler::new(&[0.3, 0.3]).is_err());
    }
}

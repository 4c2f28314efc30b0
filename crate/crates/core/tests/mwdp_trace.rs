//! Multiple-weight decision checked against a direct transcription of the
//! recursive halving procedure.

use ampsep_core::rng::substream;
use ampsep_core::weight::search_depth;
use ampsep_core::{
    build_wdp_algorithm, derive_params, separate, solve_mwdp, BooleanFunction, DecisionAlgorithm,
    EstimationMode, QueryLedger,
};
use rand::Rng;

/// One separation call made by the reference recursion: `(t', t, accepted)`
/// with thresholds as weights.
type Step = (u64, u64, bool);

/// Recursive reference: split `[w_1..w_j]` at `m = ⌊j/2⌋`, test
/// `t = w_{m+1}/2^n` against `t' = w_m/2^n`, recurse into the half the
/// verdict selects.
fn reference<R: Rng>(
    alg: &dyn DecisionAlgorithm,
    n: u32,
    weights: &[u64],
    level_delta: f64,
    rng: &mut R,
    trace: &mut Vec<Step>,
    ledger: &mut QueryLedger,
) -> u64 {
    if weights.len() == 1 {
        return weights[0];
    }
    let m = weights.len() / 2;
    let size = (1u64 << n) as f64;
    let config = derive_params(
        weights[m] as f64 / size,
        weights[m - 1] as f64 / size,
        level_delta,
    )
    .unwrap();
    let verdict = separate(alg, &config, EstimationMode::Distribution, rng).unwrap();
    *ledger += verdict.ledger;
    let accepted = verdict.decision.is_accept();
    trace.push((weights[m - 1], weights[m], accepted));
    if accepted {
        reference(alg, n, &weights[m..], level_delta, rng, trace, ledger)
    } else {
        reference(alg, n, &weights[..m], level_delta, rng, trace, ledger)
    }
}

fn run_reference(
    f: &BooleanFunction,
    weights: &[u64],
    delta: f64,
    seed: u64,
) -> (u64, Vec<Step>, QueryLedger) {
    let alg = build_wdp_algorithm(f.clone()).unwrap();
    let level_delta = delta / search_depth(weights.len()).max(1) as f64;
    let mut trace = Vec::new();
    let mut ledger = QueryLedger::new();
    let w = reference(
        &alg,
        f.n(),
        weights,
        level_delta,
        &mut substream(seed, 0),
        &mut trace,
        &mut ledger,
    );
    (w, trace, ledger)
}

#[test]
fn three_of_eight_hand_trace() {
    let f = BooleanFunction::with_weight(3, 3, 11).unwrap();
    let weights = [1, 2, 3, 4];
    let (weight, trace, ledger) = run_reference(&f, &weights, 0.1, 1);
    // first call separates 3/8 from 2/8 and accepts, second 4/8 from 3/8 and rejects
    assert_eq!(trace, vec![(2, 3, true), (3, 4, false)]);
    assert_eq!(weight, 3);

    let r = solve_mwdp(
        &f,
        &weights,
        0.1,
        EstimationMode::Distribution,
        &mut substream(1, 0),
    )
    .unwrap();
    assert_eq!(r.weight, 3);
    assert_eq!(r.as_calls, 2);
    assert_eq!(r.ledger, ledger);
}

#[test]
fn matches_reference_on_random_instances() {
    let mut rng = substream(99, 0);
    for seed in 0..200u64 {
        let n = rng.gen_range(2..=6u32);
        let size = 1u64 << n;
        let k = rng.gen_range(1..=7usize).min(size as usize - 1);
        let mut weights = rand::seq::index::sample(&mut rng, size as usize - 1, k)
            .into_iter()
            .map(|w| w as u64 + 1)
            .collect::<Vec<_>>();
        weights.sort_unstable();
        let planted = weights[rng.gen_range(0..k)];
        let f = BooleanFunction::with_weight(n, planted, seed).unwrap();

        let (weight, trace, ledger) = run_reference(&f, &weights, 0.1, seed);
        let r = solve_mwdp(
            &f,
            &weights,
            0.1,
            EstimationMode::Distribution,
            &mut substream(seed, 0),
        )
        .unwrap();
        assert_eq!(
            r.weight, weight,
            "n={n} weights={weights:?} planted={planted}"
        );
        assert_eq!(r.as_calls as usize, trace.len());
        assert_eq!(r.ledger, ledger);
    }
}

#[test]
fn single_candidate_costs_nothing() {
    let f = BooleanFunction::with_weight(4, 5, 0).unwrap();
    let r = solve_mwdp(
        &f,
        &[5],
        0.1,
        EstimationMode::Distribution,
        &mut substream(0, 0),
    )
    .unwrap();
    assert_eq!(r.weight, 5);
    assert_eq!(r.as_calls, 0);
    assert_eq!(r.ledger, QueryLedger::new());
}

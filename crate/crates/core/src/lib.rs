//! Error reduction for bounded-error quantum decision algorithms, simulated
//! exactly on a classical statevector.
//!
//! The central procedure is [`separation::separate`]: given black-box access
//! to an algorithm `A` whose "yes" probability is either `≥ t` or `≤ t'`, it
//! amplifies `A` on a tripling schedule and estimates each amplified
//! probability, deciding with error at most `δ` using
//! `Õ(1/(√t - √t'))` calls to `A`. Around it sit
//!
//! * [`sim`]: statevectors, Boolean oracles, the [`DecisionAlgorithm`] trait
//!   and the [`QueryLedger`] every cost claim is measured in;
//! * [`amplification`]: the Grover iterate and `sin²θ ↦ sin²((2k+1)θ)`;
//! * [`estimation`]: amplitude estimation and the median-of-runs estimator
//!   with additive error;
//! * [`weight`]: weight decision and multiple-weight decision for Boolean
//!   functions;
//! * [`baselines`]: classical repetition, estimation-only decisions, and the
//!   dominant-term curves of all three strategies;
//! * [`mathutil`]: the sine inequalities the analysis relies on;
//! * [`experiment`]: reproducible batch runs and their JSON/CSV reports.

pub mod amplification;
pub mod baselines;
pub mod error;
pub mod estimation;
pub mod experiment;
pub mod mathutil;
pub mod rng;
pub mod separation;
pub mod sim;
pub mod weight;

pub use amplification::{amplify, angle_of, Amplified, GroverIterate};
pub use error::{Error, Result};
pub use estimation::{
    amp_est_distribution, amp_est_once, estimate_additive, EstimateOutcome, EstimationConfig,
    EstimationMode,
};
pub use separation::{derive_params, separate, Decision, SeparationConfig, SeparationVerdict};
pub use sim::{
    apply_oracle, run_decision_algorithm, success_probability, AnalyticAlgorithm, BooleanFunction,
    DecisionAlgorithm, QueryLedger, StateVector,
};
pub use weight::{build_wdp_algorithm, solve_mwdp, solve_wdp, MwdpResult, WdpAlgorithm};

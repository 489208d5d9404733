//! Simulator and analytic toolkit for a mixed-state ping-pong quantum secure
//! direct communication protocol.
//!
//! The crate is organized in four layers:
//!
//! * [`quantum`] — dense complex linear algebra for two- and four-dimensional
//!   states: bases, unitaries, projective measurement, tensor products,
//!   partial trace and Hermitian eigenvalues.
//! * [`info`] — closed-form information quantities: binary and von Neumann
//!   entropy, the Holevo bound, the eavesdropper's post-encoding spectrum and
//!   information bound, and the asymptotic survival probability.
//! * [`protocol`] — executable state machines for Alice, Bob and an optional
//!   eavesdropper, wired through a simulated quantum channel and a public
//!   classical channel, with full per-round transcripts.
//! * [`harness`] — seeded Monte Carlo experiment runner that estimates
//!   detection, decode-error and survival statistics and tabulates them
//!   against the closed forms.
//!
//! All randomness flows through explicitly seeded generators; identical seeds
//! reproduce identical transcripts byte for byte.

pub mod harness;
pub mod info;
pub mod protocol;
pub mod quantum;

pub use harness::{
    analytic_curve, empirical_mutual_information, run_trials, run_trials_full, run_trials_parallel,
    survival_curve, AnalyticCurveSpec, CurveKind, CurveTable, RateEstimate, TrialAggregate,
};
pub use info::{
    binary_entropy, eve_eigenvalues_closed_form, eve_encoded_density, eve_information_bound,
    holevo_chi, survival_probability, von_neumann_entropy, Bits, EveModelParams, SurvivalParams,
};
pub use protocol::{
    alice_source_ensemble, run_session, AttackStrategy, BasisPolicy, ClassicalMessage, MessageSpec,
    Mode, ProtocolConfig, RoundRecord, Transcript, Verdict,
};
pub use quantum::{
    basis_states, basis_vector, build_probe_unitary, encode_operator, tensor, Basis, DensityMatrix,
    Ensemble, EnsembleMember, Operator, PureState, QuantumError,
};

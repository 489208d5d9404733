//! Executable state machines for the two-party ping-pong protocol with an
//! optional eavesdropper.
//!
//! A session loops rounds: Alice prepares |0⟩ or |φ₀⟩ with probability 1/2
//! and sends the photon; Bob randomly picks message mode (encode a bit with I
//! or iσ_y and return the photon for Alice to decode) or control mode
//! (measure in the announced preparation basis and compare). A mismatch in
//! control mode aborts the session at once.
//!
//! The eavesdropper, when present, attacks the forward path before Bob's mode
//! choice is announced and measures on the return path after Bob's encoding.
//! In control rounds her ancilla is simply discarded together with the
//! sacrificed photon.
//!
//! The classical channel is an in-process ordered, reliable, authenticated
//! log attached to each round's record. Every draw comes from a single
//! ChaCha12 stream seeded from the config, so a (config, strategy, seed)
//! triple reproduces its transcript byte for byte.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::{
    basis_states, basis_vector, build_probe_unitary, encode_operator, tensor, Basis, Ensemble,
    EnsembleMember, Operator, PureState, QuantumError, TOL_ALGEBRAIC,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProtocolError {
    #[error("invalid protocol config: {0}")]
    InvalidConfig(String),
    #[error(
        "max_rounds = {max_rounds} exceeded with only {delivered_bits} message bits delivered"
    )]
    MaxRoundsExceeded {
        max_rounds: u64,
        delivered_bits: u64,
    },
    #[error("probe angle must lie in [0, π/2], got {0}")]
    ProbeAngleOutOfRange(f64),
    #[error("operation requires an active attack strategy")]
    NoAttackStrategy,
    #[error("eavesdropper side information does not match the strategy")]
    StrategyMismatch,
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// Per-round branch: encode-and-return vs measure-and-verify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Mode {
    Message,
    Control,
}

/// What Alice prepared this round. The protocol always prepares index 0 of
/// the chosen basis (|0⟩ or |φ₀⟩).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreparationRecord {
    pub basis: Basis,
    pub index: u8,
    pub round_id: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Abort,
}

/// One entry of the public classical channel.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type")]
pub enum ClassicalMessage {
    ControlAnnounce,
    BasisReveal { basis: Basis },
    OutcomeReveal { index: u8 },
    Verdict { verdict: Verdict },
    SessionEnd,
}

/// How the intercept-resend eavesdropper picks her measurement basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BasisPolicy {
    RandomBasis,
    Fixed(Basis),
}

/// The eavesdropper's strategy for a session.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum AttackStrategy {
    NoAttack,
    /// Entangle an ancilla via the probe unitary on the forward path, measure
    /// travel ⊗ ancilla after Bob's encoding on the return path.
    ProbeUnitary {
        theta: f64,
        probe_basis: Basis,
    },
    /// Measure the travel qubit in a guessed basis on the forward path and
    /// pass on the collapsed state; re-measure in the same basis on return.
    InterceptResend {
        policy: BasisPolicy,
    },
}

impl AttackStrategy {
    pub fn probe(theta: f64, probe_basis: Basis) -> Result<Self, ProtocolError> {
        if !(0.0..=std::f64::consts::FRAC_PI_2).contains(&theta) {
            return Err(ProtocolError::ProbeAngleOutOfRange(theta));
        }
        Ok(AttackStrategy::ProbeUnitary { theta, probe_basis })
    }

    pub fn intercept(policy: BasisPolicy) -> Self {
        AttackStrategy::InterceptResend { policy }
    }

    /// Exact per-control-round detection probability, averaged over Alice's
    /// preparation mixture, by enumeration of the outcome tree.
    ///
    /// This is what the survival-curve overlay uses for `d`: the probed-basis
    /// detection probability sin²θ conditions on the preparation basis, while
    /// the protocol mixes bases 50/50.
    pub fn enumerated_control_detection(&self) -> f64 {
        match self {
            AttackStrategy::NoAttack => 0.0,
            AttackStrategy::ProbeUnitary { theta, probe_basis } => {
                let u = build_probe_unitary(*theta, *probe_basis);
                let ancilla = basis_vector(Basis::B0, 0);
                let mut total = 0.0;
                for prep_basis in [Basis::B0, Basis::B1] {
                    let prep = basis_vector(prep_basis, 0);
                    let joint = u
                        .apply(&tensor(&prep, &ancilla).expect("qubit inputs"))
                        .expect("dimensions match");
                    let p = joint
                        .joint_born_probabilities(prep_basis, Basis::B0)
                        .expect("joint state has dimension 4");
                    total += 0.5 * (p[2] + p[3]);
                }
                total
            }
            AttackStrategy::InterceptResend { policy } => {
                let choices: Vec<(f64, Basis)> = match policy {
                    BasisPolicy::RandomBasis => vec![(0.5, Basis::B0), (0.5, Basis::B1)],
                    BasisPolicy::Fixed(basis) => vec![(1.0, *basis)],
                };
                let mut total = 0.0;
                for prep_basis in [Basis::B0, Basis::B1] {
                    let prep = basis_vector(prep_basis, 0);
                    for (weight, eve_basis) in &choices {
                        let collapse = prep
                            .born_probabilities(*eve_basis)
                            .expect("prep is a qubit");
                        for (outcome, p_outcome) in collapse.iter().enumerate() {
                            let resent = basis_vector(*eve_basis, outcome);
                            let p_detect = resent
                                .born_probabilities(prep_basis)
                                .expect("resent is a qubit")[1];
                            total += 0.5 * weight * p_outcome * p_detect;
                        }
                    }
                }
                total
            }
        }
    }
}

/// Eavesdropper state carried from the forward attack to the return path.
#[derive(Debug, Clone, PartialEq)]
pub enum EveSideInfo {
    Probe,
    Intercept { basis: Basis, outcome: u8 },
}

/// Result of the forward-path attack.
#[derive(Debug, Clone)]
pub struct ForwardResult {
    /// The state passed on to Bob: dimension 4 (travel ⊗ ancilla) for the
    /// probe attack, dimension 2 for intercept-resend.
    pub passed_on: PureState,
    pub side_info: EveSideInfo,
}

/// Everything recorded for one round.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoundRecord {
    pub round_id: u64,
    pub preparation: PreparationRecord,
    pub mode: Mode,
    pub bob_bit: Option<u8>,
    pub alice_decoded: Option<u8>,
    pub control_outcome: Option<u8>,
    pub verdict: Option<Verdict>,
    pub eve_guess: Option<u8>,
    pub eve_forward_outcome: Option<u8>,
    pub classical_log: Vec<ClassicalMessage>,
}

/// The message Bob transmits: a fixed bit string, or bits drawn per message
/// round from the configured priors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum MessageSpec {
    Fixed(String),
    Random(usize),
}

/// Session parameters. A fixed seed makes the whole run reproducible.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolConfig {
    c: f64,
    message: MessageSpec,
    p0: f64,
    p1: f64,
    seed: u64,
    max_rounds: u64,
}

impl ProtocolConfig {
    /// Builds a config with balanced encoding priors and a max-rounds budget
    /// generous enough that honest sessions never hit it.
    pub fn new(c: f64, message: MessageSpec, seed: u64) -> Result<Self, ProtocolError> {
        if !(c > 0.0 && c < 1.0) {
            return Err(ProtocolError::InvalidConfig(format!(
                "control-mode probability must satisfy 0 < c < 1, got {c}"
            )));
        }
        let bits = match &message {
            MessageSpec::Fixed(s) => {
                if s.is_empty() {
                    return Err(ProtocolError::InvalidConfig(
                        "message bit string must be nonempty".into(),
                    ));
                }
                if let Some(bad) = s.chars().find(|ch| *ch != '0' && *ch != '1') {
                    return Err(ProtocolError::InvalidConfig(format!(
                        "message bits must be '0' or '1', found {bad:?}"
                    )));
                }
                s.len()
            }
            MessageSpec::Random(n) => {
                if *n == 0 {
                    return Err(ProtocolError::InvalidConfig(
                        "random message length must be at least 1".into(),
                    ));
                }
                *n
            }
        };
        let max_rounds = 1_000 + (8.0 * bits as f64 / (1.0 - c)).ceil() as u64;
        Ok(Self {
            c,
            message,
            p0: 0.5,
            p1: 0.5,
            seed,
            max_rounds,
        })
    }

    /// Sets the encoding priors used when the message is `Random`.
    pub fn with_priors(mut self, p0: f64, p1: f64) -> Result<Self, ProtocolError> {
        if p0 < 0.0 || p1 < 0.0 || (p0 + p1 - 1.0).abs() > TOL_ALGEBRAIC {
            return Err(ProtocolError::InvalidConfig(format!(
                "encoding priors must be nonnegative and sum to 1, got p0 = {p0}, p1 = {p1}"
            )));
        }
        self.p0 = p0;
        self.p1 = p1;
        Ok(self)
    }

    pub fn with_max_rounds(mut self, max_rounds: u64) -> Result<Self, ProtocolError> {
        if max_rounds == 0 {
            return Err(ProtocolError::InvalidConfig(
                "max_rounds must be at least 1".into(),
            ));
        }
        self.max_rounds = max_rounds;
        Ok(self)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn control_probability(&self) -> f64 {
        self.c
    }

    pub fn message(&self) -> &MessageSpec {
        &self.message
    }

    pub fn message_len(&self) -> usize {
        match &self.message {
            MessageSpec::Fixed(s) => s.len(),
            MessageSpec::Random(n) => *n,
        }
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn max_rounds(&self) -> u64 {
        self.max_rounds
    }

    fn bit_at(&self, index: usize, rng: &mut impl Rng) -> u8 {
        match &self.message {
            MessageSpec::Fixed(s) => s.as_bytes()[index] - b'0',
            MessageSpec::Random(_) => {
                if rng.random::<f64>() < self.p1 {
                    1
                } else {
                    0
                }
            }
        }
    }
}

/// Full audit trail of one session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub rounds: Vec<RoundRecord>,
    pub aborted: bool,
    pub abort_round: Option<u64>,
    pub decoded_bits: String,
}

/// The mixed source Alice draws from: |0⟩ or |φ₀⟩, each with probability 1/2.
pub fn alice_source_ensemble() -> Ensemble {
    let (z0, _) = basis_states(Basis::B0);
    let (p0, _) = basis_states(Basis::B1);
    Ensemble::new(vec![
        (0.5, EnsembleMember::Pure(z0)),
        (0.5, EnsembleMember::Pure(p0)),
    ])
    .expect("source probabilities sum to 1")
}

/// Step 1: Alice picks B0 or B1 with probability 1/2 and prepares index 0 of
/// the chosen basis.
pub fn alice_prepare(rng: &mut impl Rng, round_id: u64) -> (PreparationRecord, PureState) {
    let basis = if rng.random::<f64>() < 0.5 {
        Basis::B0
    } else {
        Basis::B1
    };
    (
        PreparationRecord {
            basis,
            index: 0,
            round_id,
        },
        basis_vector(basis, 0),
    )
}

/// Step 3: Bob selects control mode with probability `c`.
pub fn bob_choose_mode(rng: &mut impl Rng, c: f64) -> Mode {
    debug_assert!(c > 0.0 && c < 1.0);
    if rng.random::<f64>() < c {
        Mode::Control
    } else {
        Mode::Message
    }
}

/// Step 4m, encoding half: applies I or iσ_y to the travel qubit. On a
/// dimension-4 state the operator acts on the travel slot only (op ⊗ I).
pub fn bob_encode(bit: u8, qubit: &PureState) -> Result<PureState, ProtocolError> {
    let op = encode_operator(bit);
    let lifted = if qubit.dim() == 4 {
        op.tensor(&Operator::identity(2)?)?
    } else {
        op
    };
    Ok(lifted.apply(qubit)?)
}

/// Step 4c: the two-bit public exchange and verification measurement.
///
/// Bob announces control mode, Alice reveals her basis, Bob measures in it
/// (for a dimension-4 state, the travel factor via the joint Born rule with
/// the ancilla discarded), reveals the outcome, and Alice issues the verdict:
/// pass iff the outcome index is 0.
pub fn run_control_round(
    prep: &PreparationRecord,
    qubit_at_bob: &PureState,
    rng: &mut impl Rng,
) -> Result<(u8, Verdict, Vec<ClassicalMessage>), ProtocolError> {
    let mut log = vec![
        ClassicalMessage::ControlAnnounce,
        ClassicalMessage::BasisReveal { basis: prep.basis },
    ];
    let outcome = if qubit_at_bob.dim() == 2 {
        let (index, _) = qubit_at_bob.measure_in_basis(prep.basis, rng)?;
        index as u8
    } else {
        let p = qubit_at_bob.joint_born_probabilities(prep.basis, Basis::B0)?;
        let p_travel_zero = p[0] + p[1];
        if rng.random::<f64>() < p_travel_zero {
            0
        } else {
            1
        }
    };
    log.push(ClassicalMessage::OutcomeReveal { index: outcome });
    let verdict = if outcome == prep.index {
        Verdict::Pass
    } else {
        Verdict::Abort
    };
    log.push(ClassicalMessage::Verdict { verdict });
    Ok((outcome, verdict, log))
}

/// Step 4m, decoding half: Alice measures the returned qubit in the basis she
/// prepared; the outcome index is the decoded bit.
pub fn alice_decode(
    qubit: &PureState,
    prep: &PreparationRecord,
    rng: &mut impl Rng,
) -> Result<u8, ProtocolError> {
    let (index, _) = qubit.measure_in_basis(prep.basis, rng)?;
    Ok(index as u8)
}

/// The forward-path attack. Requires an active strategy.
pub fn eve_forward(
    strategy: &AttackStrategy,
    qubit: &PureState,
    rng: &mut impl Rng,
) -> Result<ForwardResult, ProtocolError> {
    match strategy {
        AttackStrategy::NoAttack => Err(ProtocolError::NoAttackStrategy),
        AttackStrategy::ProbeUnitary { theta, probe_basis } => {
            let u = build_probe_unitary(*theta, *probe_basis);
            let joint = tensor(qubit, &basis_vector(Basis::B0, 0))?;
            Ok(ForwardResult {
                passed_on: u.apply(&joint)?,
                side_info: EveSideInfo::Probe,
            })
        }
        AttackStrategy::InterceptResend { policy } => {
            let basis = match policy {
                BasisPolicy::Fixed(basis) => *basis,
                BasisPolicy::RandomBasis => {
                    if rng.random::<f64>() < 0.5 {
                        Basis::B0
                    } else {
                        Basis::B1
                    }
                }
            };
            let (outcome, collapsed) = qubit.measure_in_basis(basis, rng)?;
            Ok(ForwardResult {
                passed_on: collapsed,
                side_info: EveSideInfo::Intercept {
                    basis,
                    outcome: outcome as u8,
                },
            })
        }
    }
}

/// The return-path measurement: Eve's guess at Bob's bit plus the travel
/// qubit she resends to Alice.
///
/// Probe: joint measurement of travel in the probe basis and ancilla in the
/// computational basis; outcomes (0,0) and (1,1) decode to bit 0, the mixed
/// pairs to bit 1; the post-measurement travel factor is resent.
/// Intercept-resend: re-measure in the forward basis; the guess is the XOR of
/// the two outcomes.
pub fn eve_backward(
    strategy: &AttackStrategy,
    returning: &PureState,
    side_info: &EveSideInfo,
    rng: &mut impl Rng,
) -> Result<(u8, PureState), ProtocolError> {
    match (strategy, side_info) {
        (AttackStrategy::NoAttack, _) => Err(ProtocolError::NoAttackStrategy),
        (AttackStrategy::ProbeUnitary { probe_basis, .. }, EveSideInfo::Probe) => {
            let (t, a, _) = returning.measure_joint(*probe_basis, Basis::B0, rng)?;
            let guess = u8::from(t != a);
            Ok((guess, basis_vector(*probe_basis, t)))
        }
        (AttackStrategy::InterceptResend { .. }, EveSideInfo::Intercept { basis, outcome }) => {
            let (second, collapsed) = returning.measure_in_basis(*basis, rng)?;
            Ok((second as u8 ^ outcome, collapsed))
        }
        _ => Err(ProtocolError::StrategyMismatch),
    }
}

/// Runs one full session: rounds until every message bit is delivered or a
/// control round aborts. Exceeding `max_rounds` before the message completes
/// is reported as an error.
pub fn run_session(
    config: &ProtocolConfig,
    strategy: &AttackStrategy,
) -> Result<Transcript, ProtocolError> {
    let mut rng = ChaCha12Rng::seed_from_u64(config.seed);
    let total_bits = config.message_len();
    let mut rounds: Vec<RoundRecord> = Vec::new();
    let mut decoded_bits = String::with_capacity(total_bits);
    let mut delivered = 0usize;
    let mut aborted = false;
    let mut abort_round = None;

    while delivered < total_bits {
        let round_id = rounds.len() as u64 + 1;
        if round_id > config.max_rounds {
            return Err(ProtocolError::MaxRoundsExceeded {
                max_rounds: config.max_rounds,
                delivered_bits: delivered as u64,
            });
        }

        let (preparation, fresh) = alice_prepare(&mut rng, round_id);

        let (at_bob, side_info, eve_forward_outcome) = if *strategy == AttackStrategy::NoAttack {
            (fresh, None, None)
        } else {
            let forward = eve_forward(strategy, &fresh, &mut rng)?;
            let outcome = match &forward.side_info {
                EveSideInfo::Intercept { outcome, .. } => Some(*outcome),
                EveSideInfo::Probe => None,
            };
            (forward.passed_on, Some(forward.side_info), outcome)
        };

        match bob_choose_mode(&mut rng, config.c) {
            Mode::Control => {
                let (control_outcome, verdict, classical_log) =
                    run_control_round(&preparation, &at_bob, &mut rng)?;
                rounds.push(RoundRecord {
                    round_id,
                    preparation,
                    mode: Mode::Control,
                    bob_bit: None,
                    alice_decoded: None,
                    control_outcome: Some(control_outcome),
                    verdict: Some(verdict),
                    eve_guess: None,
                    eve_forward_outcome,
                    classical_log,
                });
                if verdict == Verdict::Abort {
                    aborted = true;
                    abort_round = Some(round_id);
                    break;
                }
            }
            Mode::Message => {
                let bit = config.bit_at(delivered, &mut rng);
                let encoded = bob_encode(bit, &at_bob)?;
                let (eve_guess, returning) = match &side_info {
                    None => (None, encoded),
                    Some(info) => {
                        let (guess, resent) = eve_backward(strategy, &encoded, info, &mut rng)?;
                        (Some(guess), resent)
                    }
                };
                let decoded = alice_decode(&returning, &preparation, &mut rng)?;
                decoded_bits.push(char::from(b'0' + decoded));
                rounds.push(RoundRecord {
                    round_id,
                    preparation,
                    mode: Mode::Message,
                    bob_bit: Some(bit),
                    alice_decoded: Some(decoded),
                    control_outcome: None,
                    verdict: None,
                    eve_guess,
                    eve_forward_outcome,
                    classical_log: Vec::new(),
                });
                delivered += 1;
            }
        }
    }

    Ok(Transcript {
        rounds,
        aborted,
        abort_round,
        decoded_bits,
    })
}

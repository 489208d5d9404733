//! Closed-form information quantities: binary Shannon entropy, von Neumann
//! entropy, the Holevo bound, the eavesdropper's post-encoding spectrum and
//! information bound, and the asymptotic survival probability.
//!
//! Conventions: all entropies are in bits (log base 2), 0·log 0 = 0, and
//! eigenvalues within numerical noise below zero (≥ −1e-10) are clamped to
//! zero before taking logarithms.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::quantum::{DensityMatrix, Ensemble, TOL_ALGEBRAIC, TOL_PSD};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InfoError {
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("encoding priors must be nonnegative and sum to 1, got p0 = {p0}, p1 = {p1}")]
    BadPriors { p0: f64, p1: f64 },
    #[error("control-mode probability must satisfy 0 < c < 1, got {0}")]
    ControlProbabilityOutOfRange(f64),
    #[error("detection probability must lie in [0, 1/2], got {0}")]
    DetectionOutOfRange(f64),
    #[error("message length must be at least 1")]
    ZeroMessageBits,
}

/// A quantity measured in bits (log base 2). Nonnegative and finite.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Bits(f64);

impl Bits {
    /// Wraps a value, clamping numerical noise just below zero to exactly
    /// zero. Panics on NaN or a genuinely negative value.
    pub fn new(value: f64) -> Self {
        assert!(!value.is_nan(), "bit quantities cannot be NaN");
        assert!(value >= -1e-9, "bit quantities cannot be negative: {value}");
        Bits(value.max(0.0))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Bits> for f64 {
    fn from(b: Bits) -> f64 {
        b.0
    }
}

impl fmt::Display for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn plogp(p: f64) -> f64 {
    if p <= 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// Binary Shannon entropy −p log₂ p − (1−p) log₂ (1−p), with 0·log 0 = 0.
pub fn binary_entropy(p: f64) -> Result<Bits, InfoError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(InfoError::ProbabilityOutOfRange(p));
    }
    Ok(Bits::new(-plogp(p) - plogp(1.0 - p)))
}

/// Von Neumann entropy −Σ λᵢ log₂ λᵢ over the eigenvalues of ρ.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> Bits {
    let s: f64 = rho
        .eigenvalues()
        .iter()
        .map(|&lambda| {
            debug_assert!(lambda >= -TOL_PSD);
            -plogp(lambda.max(0.0))
        })
        .sum();
    Bits::new(s)
}

/// Holevo χ = S(Σ pᵢ ρᵢ) − Σ pᵢ S(ρᵢ), the upper bound on information
/// extractable from the ensemble by any measurement. Always ≥ 0.
pub fn holevo_chi(ensemble: &Ensemble) -> Bits {
    let mixture_entropy = von_neumann_entropy(&ensemble.density()).value();
    let average_entropy: f64 = ensemble
        .entries()
        .iter()
        .map(|(p, member)| p * von_neumann_entropy(&member.density()).value())
        .sum();
    Bits::new(mixture_entropy - average_entropy)
}

/// Eavesdropper model parameters: detection probability and Bob's encoding
/// priors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EveModelParams {
    d: f64,
    p0: f64,
    p1: f64,
}

impl EveModelParams {
    pub fn new(d: f64, p0: f64, p1: f64) -> Result<Self, InfoError> {
        if !(0.0..=1.0).contains(&d) {
            return Err(InfoError::ProbabilityOutOfRange(d));
        }
        if p0 < 0.0 || p1 < 0.0 || (p0 + p1 - 1.0).abs() > TOL_ALGEBRAIC {
            return Err(InfoError::BadPriors { p0, p1 });
        }
        Ok(Self { d, p0, p1 })
    }

    /// Convenience constructor with p1 = 1 − p0.
    pub fn with_prior(d: f64, p0: f64) -> Result<Self, InfoError> {
        Self::new(d, p0, 1.0 - p0)
    }

    pub fn detection(&self) -> f64 {
        self.d
    }

    pub fn p0(&self) -> f64 {
        self.p0
    }

    pub fn p1(&self) -> f64 {
        self.p1
    }
}

/// The travel-qubit state after the probe attack and Bob's encoding, in the
/// abstract orthonormal basis {|φ₀,e₀⟩, |φ₁,e₁⟩}:
///
/// ```text
/// [[ 1−d              √(d(1−d))·(p0−p1) ]
///  [ √(d(1−d))·(p0−p1)      d           ]]
/// ```
///
/// The attack amplitudes are taken real nonnegative (α = √(1−d), β = √d):
/// the off-diagonal depends on them only through |αβ| up to a phase, and
/// phases do not change the spectrum.
pub fn eve_encoded_density(params: &EveModelParams) -> DensityMatrix {
    use num_complex::Complex64;
    let d = params.d;
    let off = (d * (1.0 - d)).sqrt() * (params.p0 - params.p1);
    DensityMatrix::from_entries(
        2,
        vec![
            Complex64::new(1.0 - d, 0.0),
            Complex64::new(off, 0.0),
            Complex64::new(off, 0.0),
            Complex64::new(d, 0.0),
        ],
    )
    .expect("post-encoding matrix is a valid density matrix")
}

/// Closed-form eigenvalues of the post-encoding state, descending:
///
/// λ = 1/2 ± (1/2)·√(1 − (4d − 4d²)·[1 − (p0 − p1)²])
///
/// The square-root argument is clamped to [0, 1] against rounding.
pub fn eve_eigenvalues_closed_form(params: &EveModelParams) -> (f64, f64) {
    let d = params.d;
    let spread = params.p0 - params.p1;
    let arg = (1.0 - (4.0 * d - 4.0 * d * d) * (1.0 - spread * spread)).clamp(0.0, 1.0);
    let radius = 0.5 * arg.sqrt();
    (0.5 + radius, 0.5 - radius)
}

/// The eavesdropper's maximal information for balanced priors,
/// I(d) = H_bin(d).
pub fn eve_information_bound(d: f64) -> Result<Bits, InfoError> {
    binary_entropy(d)
}

/// Parameters of the asymptotic survival probability.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SurvivalParams {
    c: f64,
    d: f64,
    n: u64,
}

impl SurvivalParams {
    pub fn new(c: f64, d: f64, n: u64) -> Result<Self, InfoError> {
        if !(c > 0.0 && c < 1.0) {
            return Err(InfoError::ControlProbabilityOutOfRange(c));
        }
        if !(0.0..=0.5).contains(&d) {
            return Err(InfoError::DetectionOutOfRange(d));
        }
        if n == 0 {
            return Err(InfoError::ZeroMessageBits);
        }
        Ok(Self { c, d, n })
    }

    pub fn control_probability(&self) -> f64 {
        self.c
    }

    pub fn detection(&self) -> f64 {
        self.d
    }

    pub fn message_bits(&self) -> u64 {
        self.n
    }
}

pub(crate) fn survival_value(c: f64, d: f64, n: f64) -> f64 {
    (1.0 - c * d).powf(n / (1.0 - c))
}

/// Asymptotic probability that the eavesdropper is still undetected after
/// `n` message bits: p_n = (1 − c·d)^(n/(1−c)).
pub fn survival_probability(params: &SurvivalParams) -> f64 {
    survival_value(params.c, params.d, params.n as f64)
}

//! Minimal dense complex linear algebra for two- and four-dimensional quantum
//! states.
//!
//! The protocol needs exactly two Hilbert spaces: the travel qubit (dimension
//! 2) and travel ⊗ ancilla (dimension 4), so everything here is specialized to
//! those two sizes and rejects anything else at construction time.
//!
//! Index convention for dimension-4 vectors: amplitude index = 2·(travel
//! index) + (ancilla index), i.e. the travel qubit is the slow index. This is
//! used everywhere (tensor products, joint measurement, partial trace, probe
//! unitaries).
//!
//! Measurement draws are the only non-pure operations; they take the random
//! source explicitly. Post-measurement states are the basis vectors
//! themselves, with any global phase discarded: phases are unobservable
//! downstream and this keeps round records comparable across runs.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Tolerance for algebraic identities: normalization, hermiticity, trace,
/// unitarity, probability sums.
pub const TOL_ALGEBRAIC: f64 = 1e-12;
/// Slack below zero tolerated for eigenvalues of positive semidefinite input.
pub const TOL_PSD: f64 = 1e-10;
/// Convergence threshold for the iterative Hermitian eigensolver.
pub const EIGEN_TOL: f64 = 1e-12;

const FRAC_1_SQRT_2: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// Errors from constructing or combining states and operators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuantumError {
    #[error("unsupported dimension {0}: only 2 and 4 are modeled")]
    UnsupportedDim(usize),
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },
    #[error("expected dimension {expected}, got {got}")]
    WrongDim { expected: usize, got: usize },
    #[error("state is not normalized: squared norm is {norm_sq}")]
    NotNormalized { norm_sq: f64 },
    #[error("matrix is not Hermitian within tolerance")]
    NotHermitian,
    #[error("matrix trace {trace} is not 1 within tolerance")]
    BadTrace { trace: f64 },
    #[error("matrix is not positive semidefinite: eigenvalue {value}")]
    NotPositiveSemidefinite { value: f64 },
    #[error("ensemble probabilities must be nonnegative and sum to 1, got sum {sum}")]
    BadProbabilities { sum: f64 },
    #[error("ensemble is empty")]
    EmptyEnsemble,
}

fn check_dim(dim: usize) -> Result<(), QuantumError> {
    if dim == 2 || dim == 4 {
        Ok(())
    } else {
        Err(QuantumError::UnsupportedDim(dim))
    }
}

/// The two preparation/measurement bases of the protocol.
///
/// `B0` is the computational basis {|0⟩, |1⟩}; `B1` is the diagonal basis
/// {(|0⟩+|1⟩)/√2, (|0⟩−|1⟩)/√2}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    B0,
    B1,
}

impl Basis {
    fn amplitudes(self) -> [[Complex64; 2]; 2] {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
        match self {
            Basis::B0 => [[one, zero], [zero, one]],
            Basis::B1 => [[h, h], [h, -h]],
        }
    }
}

/// Returns the two orthonormal basis vectors of `basis`, in index order.
pub fn basis_states(basis: Basis) -> (PureState, PureState) {
    (basis_vector(basis, 0), basis_vector(basis, 1))
}

/// Returns basis vector `index` (0 or 1) of `basis`.
pub fn basis_vector(basis: Basis, index: usize) -> PureState {
    assert!(index < 2, "basis index must be 0 or 1");
    PureState::unchecked(basis.amplitudes()[index].to_vec())
}

/// A normalized pure state of dimension 2 (travel qubit) or 4
/// (travel ⊗ ancilla).
#[derive(Debug, Clone)]
pub struct PureState {
    amps: Vec<Complex64>,
}

impl PureState {
    /// Builds a state from amplitudes, checking dimension and normalization.
    pub fn new(amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        check_dim(amps.len())?;
        let norm_sq: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > TOL_ALGEBRAIC {
            return Err(QuantumError::NotNormalized { norm_sq });
        }
        Ok(Self { amps })
    }

    fn unchecked(amps: Vec<Complex64>) -> Self {
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amps[i]
    }

    /// Inner product ⟨self|other⟩.
    pub fn inner(&self, other: &Self) -> Result<Complex64, QuantumError> {
        if self.dim() != other.dim() {
            return Err(QuantumError::DimMismatch {
                left: self.dim(),
                right: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// The same physical state multiplied by the global phase e^{iφ}.
    pub fn phase_shifted(&self, phi: f64) -> Self {
        let phase = Complex64::from_polar(1.0, phi);
        Self::unchecked(self.amps.iter().map(|a| a * phase).collect())
    }

    /// Born probabilities of a projective measurement in `basis`
    /// (dimension-2 states only), normalized so the pair sums to 1.
    pub fn born_probabilities(&self, basis: Basis) -> Result<[f64; 2], QuantumError> {
        if self.dim() != 2 {
            return Err(QuantumError::WrongDim {
                expected: 2,
                got: self.dim(),
            });
        }
        let b = basis.amplitudes();
        let mut p = [0.0f64; 2];
        for (k, bk) in b.iter().enumerate() {
            let amp: Complex64 = bk.iter().zip(&self.amps).map(|(c, a)| c.conj() * a).sum();
            p[k] = amp.norm_sqr();
        }
        let total = p[0] + p[1];
        Ok([p[0] / total, p[1] / total])
    }

    /// Born probabilities over the four outcomes of a product-basis
    /// measurement on a dimension-4 state, indexed 2·travel + ancilla and
    /// normalized to sum to 1.
    pub fn joint_born_probabilities(
        &self,
        travel_basis: Basis,
        ancilla_basis: Basis,
    ) -> Result<[f64; 4], QuantumError> {
        if self.dim() != 4 {
            return Err(QuantumError::WrongDim {
                expected: 4,
                got: self.dim(),
            });
        }
        let bt = travel_basis.amplitudes();
        let ba = ancilla_basis.amplitudes();
        let mut p = [0.0f64; 4];
        for t in 0..2 {
            for a in 0..2 {
                let mut amp = Complex64::new(0.0, 0.0);
                for (tt, btt) in bt[t].iter().enumerate() {
                    for (aa, baa) in ba[a].iter().enumerate() {
                        amp += (btt * baa).conj() * self.amps[2 * tt + aa];
                    }
                }
                p[2 * t + a] = amp.norm_sqr();
            }
        }
        let total: f64 = p.iter().sum();
        for v in &mut p {
            *v /= total;
        }
        Ok(p)
    }

    /// Projective measurement of a dimension-2 state in `basis`.
    ///
    /// The outcome index is drawn with its Born probability; the
    /// post-measurement state is the basis vector itself.
    pub fn measure_in_basis(
        &self,
        basis: Basis,
        rng: &mut impl Rng,
    ) -> Result<(usize, PureState), QuantumError> {
        let p = self.born_probabilities(basis)?;
        let u: f64 = rng.random();
        let index = if u < p[0] { 0 } else { 1 };
        Ok((index, basis_vector(basis, index)))
    }

    /// Projective measurement of a dimension-4 state in the product basis
    /// `travel_basis ⊗ ancilla_basis`.
    ///
    /// Returns (travel index, ancilla index, post-measurement product state).
    pub fn measure_joint(
        &self,
        travel_basis: Basis,
        ancilla_basis: Basis,
        rng: &mut impl Rng,
    ) -> Result<(usize, usize, PureState), QuantumError> {
        let p = self.joint_born_probabilities(travel_basis, ancilla_basis)?;
        let u: f64 = rng.random();
        let mut acc = 0.0;
        let mut outcome = 3;
        for (k, pk) in p.iter().enumerate() {
            acc += pk;
            if u < acc {
                outcome = k;
                break;
            }
        }
        let t = outcome / 2;
        let a = outcome % 2;
        let post = tensor(
            &basis_vector(travel_basis, t),
            &basis_vector(ancilla_basis, a),
        )
        .expect("basis vectors have dimension 2");
        Ok((t, a, post))
    }
}

/// Kronecker product of two dimension-2 states, travel slot first
/// (slow index).
pub fn tensor(travel: &PureState, ancilla: &PureState) -> Result<PureState, QuantumError> {
    if travel.dim() != 2 {
        return Err(QuantumError::WrongDim {
            expected: 2,
            got: travel.dim(),
        });
    }
    if ancilla.dim() != 2 {
        return Err(QuantumError::WrongDim {
            expected: 2,
            got: ancilla.dim(),
        });
    }
    let mut amps = vec![Complex64::new(0.0, 0.0); 4];
    for t in 0..2 {
        for a in 0..2 {
            amps[2 * t + a] = travel.amplitude(t) * ancilla.amplitude(a);
        }
    }
    Ok(PureState::unchecked(amps))
}

/// A dense square operator of dimension 2 or 4, stored row-major.
#[derive(Debug, Clone)]
pub struct Operator {
    dim: usize,
    entries: Vec<Complex64>,
}

impl Operator {
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self, QuantumError> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(QuantumError::DimMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        Ok(Self { dim, entries })
    }

    pub fn identity(dim: usize) -> Result<Self, QuantumError> {
        check_dim(dim)?;
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            entries[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        Ok(Self { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    /// Matrix–vector product. Unitaries preserve the norm, so no
    /// renormalization is applied.
    pub fn apply(&self, state: &PureState) -> Result<PureState, QuantumError> {
        if self.dim != state.dim() {
            return Err(QuantumError::DimMismatch {
                left: self.dim,
                right: state.dim(),
            });
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim];
        for (i, o) in out.iter_mut().enumerate() {
            for j in 0..self.dim {
                *o += self.entry(i, j) * state.amplitude(j);
            }
        }
        Ok(PureState::unchecked(out))
    }

    pub fn adjoint(&self) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); self.dim * self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                entries[j * self.dim + i] = self.entry(i, j).conj();
            }
        }
        Self {
            dim: self.dim,
            entries,
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self, QuantumError> {
        if self.dim != other.dim {
            return Err(QuantumError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let n = self.dim;
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            for j in 0..n {
                let mut s = Complex64::new(0.0, 0.0);
                for k in 0..n {
                    s += self.entry(i, k) * other.entry(k, j);
                }
                entries[i * n + j] = s;
            }
        }
        Ok(Self { dim: n, entries })
    }

    /// Kronecker product of two dimension-2 operators (travel slot slow).
    pub fn tensor(&self, other: &Self) -> Result<Self, QuantumError> {
        if self.dim != 2 || other.dim != 2 {
            return Err(QuantumError::DimMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); 16];
        for i in 0..2 {
            for j in 0..2 {
                for k in 0..2 {
                    for l in 0..2 {
                        entries[(2 * i + k) * 4 + (2 * j + l)] =
                            self.entry(i, j) * other.entry(k, l);
                    }
                }
            }
        }
        Ok(Self { dim: 4, entries })
    }

    /// Max-norm distance of U†U from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let product = self
            .adjoint()
            .matmul(self)
            .expect("dimensions match by construction");
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let expected = if i == j { 1.0 } else { 0.0 };
                let diff = (product.entry(i, j) - Complex64::new(expected, 0.0)).norm();
                worst = worst.max(diff);
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_defect() < tol
    }
}

/// The encoding operator for one classical bit: bit 0 ↦ identity,
/// bit 1 ↦ iσ_y = |0⟩⟨1| − |1⟩⟨0|.
///
/// iσ_y flips within both protocol bases (up to an unobservable sign), which
/// is what makes decoding in the preparation basis exact.
pub fn encode_operator(bit: u8) -> Operator {
    assert!(bit <= 1, "encoded bit must be 0 or 1");
    if bit == 0 {
        Operator::identity(2).expect("dimension 2 is supported")
    } else {
        let zero = Complex64::new(0.0, 0.0);
        let one = Complex64::new(1.0, 0.0);
        Operator::from_entries(2, vec![zero, one, -one, zero]).expect("2x2 entries")
    }
}

/// Builds the eavesdropper's probe unitary on travel ⊗ ancilla.
///
/// With {|b₀⟩, |b₁⟩} the `probe_basis` vectors and the ancilla starting in
/// |0⟩, the two physically relevant columns are fixed to
///
/// ```text
/// U |b₀, 0⟩ = cos θ |b₀, 0⟩ + sin θ |b₁, 1⟩
/// U |b₁, 0⟩ = cos θ |b₁, 0⟩ + sin θ |b₀, 1⟩
/// ```
///
/// so the probed-basis detection probability is sin²θ. The action on the two
/// ancilla-|1⟩ input columns is completed deterministically: input columns are
/// taken in the order |b₀,1⟩, |b₁,1⟩, and each output column is the first
/// standard basis vector of C⁴ (in index order) with Gram–Schmidt residual of
/// norm > 1e-6 against the output columns fixed so far, normalized. Every
/// implementation of this rule produces the same matrix.
pub fn build_probe_unitary(theta: f64, probe_basis: Basis) -> Operator {
    let (b0, b1) = basis_states(probe_basis);
    let (e0, e1) = basis_states(Basis::B0);
    let (c, s) = (theta.cos(), theta.sin());

    let lincomb = |x: &PureState, wx: f64, y: &PureState, wy: f64| -> Vec<Complex64> {
        (0..4)
            .map(|i| x.amplitude(i) * wx + y.amplitude(i) * wy)
            .collect()
    };

    let v: [Vec<Complex64>; 4] = [
        tensor(&b0, &e0).expect("dim 2 inputs").amps,
        tensor(&b1, &e0).expect("dim 2 inputs").amps,
        tensor(&b0, &e1).expect("dim 2 inputs").amps,
        tensor(&b1, &e1).expect("dim 2 inputs").amps,
    ];

    let w0 = lincomb(
        &tensor(&b0, &e0).expect("dim 2"),
        c,
        &tensor(&b1, &e1).expect("dim 2"),
        s,
    );
    let w1 = lincomb(
        &tensor(&b1, &e0).expect("dim 2"),
        c,
        &tensor(&b0, &e1).expect("dim 2"),
        s,
    );
    let mut outputs: Vec<Vec<Complex64>> = vec![w0, w1];

    // Deterministic completion: canonical seeds are the standard basis
    // vectors of C^4 in index order.
    for _ in 2..4 {
        let mut chosen = None;
        for seed_idx in 0..4 {
            let mut cand = vec![Complex64::new(0.0, 0.0); 4];
            cand[seed_idx] = Complex64::new(1.0, 0.0);
            for w in &outputs {
                let overlap: Complex64 = w.iter().zip(&cand).map(|(a, b)| a.conj() * b).sum();
                for (ci, wi) in cand.iter_mut().zip(w) {
                    *ci -= overlap * wi;
                }
            }
            let norm: f64 = cand.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
            if norm > 1e-6 {
                for ci in &mut cand {
                    *ci /= norm;
                }
                chosen = Some(cand);
                break;
            }
        }
        outputs.push(chosen.expect("Gram-Schmidt completion always finds a seed"));
    }

    // U = sum_k |w_k><v_k|
    let mut entries = vec![Complex64::new(0.0, 0.0); 16];
    for k in 0..4 {
        for i in 0..4 {
            for j in 0..4 {
                entries[i * 4 + j] += outputs[k][i] * v[k][j].conj();
            }
        }
    }
    Operator::from_entries(4, entries).expect("4x4 entries")
}

/// A density matrix: Hermitian, unit trace, positive semidefinite, of
/// dimension 2 or 4.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    entries: Vec<Complex64>,
}

impl DensityMatrix {
    /// Validates hermiticity, unit trace and positive semidefiniteness
    /// (eigenvalues ≥ −1e-10).
    pub fn from_entries(dim: usize, entries: Vec<Complex64>) -> Result<Self, QuantumError> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(QuantumError::DimMismatch {
                left: dim * dim,
                right: entries.len(),
            });
        }
        for i in 0..dim {
            if entries[i * dim + i].im.abs() > TOL_ALGEBRAIC {
                return Err(QuantumError::NotHermitian);
            }
            for j in (i + 1)..dim {
                let diff = (entries[i * dim + j] - entries[j * dim + i].conj()).norm();
                if diff > TOL_ALGEBRAIC {
                    return Err(QuantumError::NotHermitian);
                }
            }
        }
        let trace: f64 = (0..dim).map(|i| entries[i * dim + i].re).sum();
        if (trace - 1.0).abs() > TOL_ALGEBRAIC {
            return Err(QuantumError::BadTrace { trace });
        }
        let rho = Self { dim, entries };
        if let Some(&lambda) = rho.eigenvalues().iter().find(|&&lambda| lambda < -TOL_PSD) {
            return Err(QuantumError::NotPositiveSemidefinite { value: lambda });
        }
        Ok(rho)
    }

    /// The projector |ψ⟩⟨ψ|.
    pub fn from_pure(state: &PureState) -> Self {
        let dim = state.dim();
        let mut entries = vec![Complex64::new(0.0, 0.0); dim * dim];
        for i in 0..dim {
            for j in 0..dim {
                entries[i * dim + j] = state.amplitude(i) * state.amplitude(j).conj();
            }
        }
        Self { dim, entries }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.dim + j]
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.entry(i, i).re).sum()
    }

    /// Eigenvalues sorted descending: the closed trace/determinant form for
    /// dimension 2, the iterative Jacobi solver for dimension 4.
    pub fn eigenvalues(&self) -> Vec<f64> {
        if self.dim == 2 {
            let (l1, l2) = closed_form_2x2(&self.entries);
            vec![l1, l2]
        } else {
            jacobi_eigenvalues(self.dim, &self.entries)
        }
    }

    /// Eigenvalues via the iterative Jacobi solver regardless of dimension.
    ///
    /// Exists so the dimension-2 closed form can be cross-checked against the
    /// iterative path.
    pub fn eigenvalues_iterative(&self) -> Vec<f64> {
        jacobi_eigenvalues(self.dim, &self.entries)
    }

    /// Traces out the ancilla slot of a dimension-4 matrix:
    /// (ρ_A)_{t,t'} = Σ_a ρ_{2t+a, 2t'+a}.
    pub fn partial_trace_ancilla(&self) -> Result<DensityMatrix, QuantumError> {
        if self.dim != 4 {
            return Err(QuantumError::WrongDim {
                expected: 4,
                got: self.dim,
            });
        }
        let mut entries = vec![Complex64::new(0.0, 0.0); 4];
        for t in 0..2 {
            for tp in 0..2 {
                let mut s = Complex64::new(0.0, 0.0);
                for a in 0..2 {
                    s += self.entry(2 * t + a, 2 * tp + a);
                }
                entries[t * 2 + tp] = s;
            }
        }
        DensityMatrix::from_entries(2, entries)
    }
}

/// One member of a preparation ensemble.
#[derive(Debug, Clone)]
pub enum EnsembleMember {
    Pure(PureState),
    Mixed(DensityMatrix),
}

impl EnsembleMember {
    pub fn dim(&self) -> usize {
        match self {
            EnsembleMember::Pure(s) => s.dim(),
            EnsembleMember::Mixed(r) => r.dim(),
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            EnsembleMember::Pure(s) => DensityMatrix::from_pure(s),
            EnsembleMember::Mixed(r) => r.clone(),
        }
    }
}

/// A finite ensemble {(pᵢ, ρᵢ)} with nonnegative probabilities summing to 1.
#[derive(Debug, Clone)]
pub struct Ensemble {
    entries: Vec<(f64, EnsembleMember)>,
}

impl Ensemble {
    pub fn new(entries: Vec<(f64, EnsembleMember)>) -> Result<Self, QuantumError> {
        if entries.is_empty() {
            return Err(QuantumError::EmptyEnsemble);
        }
        let sum: f64 = entries.iter().map(|(p, _)| p).sum();
        if entries.iter().any(|(p, _)| *p < 0.0) || (sum - 1.0).abs() > TOL_ALGEBRAIC {
            return Err(QuantumError::BadProbabilities { sum });
        }
        let dim = entries[0].1.dim();
        for (_, member) in &entries {
            if member.dim() != dim {
                return Err(QuantumError::DimMismatch {
                    left: dim,
                    right: member.dim(),
                });
            }
        }
        Ok(Self { entries })
    }

    pub fn entries(&self) -> &[(f64, EnsembleMember)] {
        &self.entries
    }

    /// The ensemble average Σ pᵢ ρᵢ.
    pub fn density(&self) -> DensityMatrix {
        let dim = self.entries[0].1.dim();
        let mut acc = vec![Complex64::new(0.0, 0.0); dim * dim];
        for (p, member) in &self.entries {
            let rho = member.density();
            for i in 0..dim {
                for j in 0..dim {
                    acc[i * dim + j] += rho.entry(i, j) * *p;
                }
            }
        }
        DensityMatrix::from_entries(dim, acc)
            .expect("convex mixture of density matrices is a density matrix")
    }
}

/// Eigenvalues of a Hermitian 2×2 matrix from trace and determinant,
/// descending.
fn closed_form_2x2(entries: &[Complex64]) -> (f64, f64) {
    let a = entries[0].re;
    let d = entries[3].re;
    let b = entries[1];
    let mid = 0.5 * (a + d);
    let radius = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
    (mid + radius, mid - radius)
}

/// Cyclic Jacobi eigensolver for Hermitian matrices, convergence at 1e-12 on
/// the largest off-diagonal modulus. Returns eigenvalues sorted descending.
fn jacobi_eigenvalues(dim: usize, entries: &[Complex64]) -> Vec<f64> {
    let mut a = entries.to_vec();
    let idx = |i: usize, j: usize| i * dim + j;

    for _sweep in 0..100 {
        let mut off = 0.0f64;
        for i in 0..dim {
            for j in (i + 1)..dim {
                off = off.max(a[idx(i, j)].norm());
            }
        }
        if off < EIGEN_TOL {
            break;
        }
        for p in 0..dim {
            for q in (p + 1)..dim {
                let apq = a[idx(p, q)];
                let mag = apq.norm();
                if mag == 0.0 {
                    continue;
                }
                let phase = apq / mag;
                let app = a[idx(p, p)].re;
                let aqq = a[idx(q, q)].re;
                let theta = 0.5 * (2.0 * mag).atan2(app - aqq);
                let (s, c) = theta.sin_cos();
                // Columns: col_p' = c·col_p + s·e^{-iφ}·col_q,
                //          col_q' = -s·e^{iφ}·col_p + c·col_q.
                for i in 0..dim {
                    let aip = a[idx(i, p)];
                    let aiq = a[idx(i, q)];
                    a[idx(i, p)] = aip * c + aiq * s * phase.conj();
                    a[idx(i, q)] = -aip * s * phase + aiq * c;
                }
                // Rows: row_p' = c·row_p + s·e^{iφ}·row_q,
                //       row_q' = -s·e^{-iφ}·row_p + c·row_q.
                for j in 0..dim {
                    let apj = a[idx(p, j)];
                    let aqj = a[idx(q, j)];
                    a[idx(p, j)] = apj * c + aqj * s * phase;
                    a[idx(q, j)] = -apj * s * phase.conj() + aqj * c;
                }
            }
        }
    }

    let mut eigs: Vec<f64> = (0..dim).map(|i| a[idx(i, i)].re).collect();
    eigs.sort_by(|x, y| y.partial_cmp(x).expect("eigenvalues are finite"));
    eigs
}

//! The parameterized three-qubit family built from Horodecki's 2 ⊗ 4 bound
//! entangled state.
//!
//! Starting from `χ` (NPT across A|BC), mixing in the noise projector
//! `P[φ^(b)]` gives `σ^(b)`, PPT across A|BC but NPT across the other two
//! cuts. Averaging over cyclic relabelings of the parties gives the
//! symmetric `η^(b)`, and a fixed rank-lowering correction turns that into
//! `h^(b)`. Normalizing `h^(b)` yields `ρ₂(b)`, which is PPT across all three
//! cuts once `b` is above roughly 0.817.
//!
//! Every operator has two routes: the constructive one (mixtures, party
//! relabelings and rank-one corrections) and the closed-form matrix in the
//! computational basis. Tests hold them to agree entrywise.

use num_complex::Complex64 as C64;
use thiserror::Error;
use crate::{
    hilbert::{ HilbertError, Operator, PartyDims, PartyPermutation, StateVector },
    linalg::{ self, ComplexMatrix, LinalgError },
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FamilyError {
    #[error("parameter b = {0} is outside [0, 1]")]
    BadParameter(f64),

    #[error("state index {0} is outside 1..=3")]
    BadIndex(usize),

    #[error(transparent)]
    Hilbert(#[from] HilbertError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type FamilyResult<T> = Result<T, FamilyError>;

fn qubits() -> PartyDims { PartyDims::uniform(2) }

fn e(k: usize) -> Vec<C64> {
    let mut v = vec![C64::new(0.0, 0.0); 8];
    v[k] = C64::new(1.0, 0.0);
    v
}

fn check_b(b: f64) -> FamilyResult<f64> {
    if (0.0..=1.0).contains(&b) {
        Ok(b)
    } else {
        Err(FamilyError::BadParameter(b))
    }
}

/// Constants appearing in `h^(b)` and in the closed-form matrices of
/// `ρ₂(b)`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct FamilyParams {
    pub b: f64,
    /// `b / (3(1+7b))`
    pub mu: f64,
    /// `(1+3b) / (6+42b)`
    pub nu: f64,
    /// `2b / (3(1+7b))`
    pub epsilon: f64,
    /// `b / (1+7b)`
    pub gamma: f64,
    /// `(1+3b) / (6(1+7b))`
    pub lambda: f64,
    /// `(1+5b) / (6(1+7b))`
    pub delta: f64,
    /// `(1+b) / (2(1+7b))`
    pub zeta: f64,
    /// `(2b + √(1−b²)) / (6(1+7b))`
    pub omega: f64,
    /// `(3+21b) / (3+17b)`, the normalization of `h^(b)`.
    pub theta: f64,
}

impl FamilyParams {
    pub fn new(b: f64) -> FamilyResult<Self> {
        let b = check_b(b)?;
        let s = 1.0 + 7.0 * b;
        Ok(Self {
            b,
            mu: b / (3.0 * s),
            nu: (1.0 + 3.0 * b) / (6.0 + 42.0 * b),
            epsilon: 2.0 * b / (3.0 * s),
            gamma: b / s,
            lambda: (1.0 + 3.0 * b) / (6.0 * s),
            delta: (1.0 + 5.0 * b) / (6.0 * s),
            zeta: (1.0 + b) / (2.0 * s),
            omega: (2.0 * b + (1.0 - b * b).sqrt()) / (6.0 * s),
            theta: (3.0 + 21.0 * b) / (3.0 + 17.0 * b),
        })
    }
}

/* Pure states ****************************************************************/

/// `|ψ¹⟩ = (|0,00⟩ + |1,01⟩)/√2`, `|ψ²⟩ = (|0,01⟩ + |1,10⟩)/√2`,
/// `|ψ³⟩ = (|0,10⟩ + |1,11⟩)/√2`.
pub fn psi_k(k: usize) -> FamilyResult<StateVector> {
    let (i, j) = match k {
        1 => (0, 5),
        2 => (1, 6),
        3 => (2, 7),
        _ => return Err(FamilyError::BadIndex(k)),
    };
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    amps[i] = C64::new(h, 0.0);
    amps[j] = C64::new(h, 0.0);
    Ok(StateVector::new(qubits(), amps)?)
}

/// `|φ^(b)⟩ = |1⟩ ⊗ (√((1+b)/2)|00⟩ + √((1−b)/2)|11⟩)`.
pub fn phi_b(b: f64) -> FamilyResult<StateVector> {
    let b = check_b(b)?;
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    amps[4] = C64::new(((1.0 + b) / 2.0).sqrt(), 0.0);
    amps[7] = C64::new(((1.0 - b) / 2.0).sqrt(), 0.0);
    Ok(StateVector::new(qubits(), amps)?)
}

/* Mixed states ***************************************************************/

/// `χ = (2/7) Σ P[ψⁱ] + (1/7) P[011]`.
pub fn chi() -> Operator {
    let p = |k| Operator::projector(&psi_k(k).expect("k in 1..=3"));
    let (p1, p2, p3) = (p(1), p(2), p(3));
    let p011 = Operator::projector(&StateVector::basis(qubits(), 0, 1, 1));
    Operator::combine(&[(2.0 / 7.0, &p1), (2.0 / 7.0, &p2), (2.0 / 7.0, &p3), (1.0 / 7.0, &p011)])
}

/// `σ^(b) = (7b/(7b+1)) χ + (1/(7b+1)) P[φ^(b)]`.
pub fn sigma_b(b: f64) -> FamilyResult<Operator> {
    let noise = Operator::projector(&phi_b(b)?);
    let s = 7.0 * b + 1.0;
    Ok(Operator::combine(&[(7.0 * b / s, &chi()), (1.0 / s, &noise)]))
}

/// Closed-form computational-basis matrix of `σ^(b)`.
pub fn sigma_b_matrix(b: f64) -> FamilyResult<Operator> {
    let b = check_b(b)?;
    let mut m = [[0.0; 8]; 8];
    for (i, j) in [(0, 0), (0, 5), (1, 1), (1, 6), (2, 2), (2, 7), (3, 3), (5, 0), (5, 5), (6, 1), (6, 6), (7, 2)] {
        m[i][j] = b;
    }
    m[4][4] = (1.0 + b) / 2.0;
    m[7][7] = (1.0 + b) / 2.0;
    m[4][7] = (1.0 - b * b).sqrt() / 2.0;
    m[7][4] = m[4][7];
    real_operator(&m, 1.0 / (7.0 * b + 1.0))
}

/// `η^(b) = (σ_ABC + σ_BCA + σ_CAB) / 3`, the cyclic average of `σ^(b)`.
pub fn eta_b(b: f64) -> FamilyResult<Operator> {
    let sigma = sigma_b(b)?;
    let cyc = PartyPermutation::cyclic();
    let once = sigma.permute_parties(&cyc);
    let twice = once.permute_parties(&cyc);
    let third = 1.0 / 3.0;
    Ok(Operator::combine(&[(third, &sigma), (third, &once), (third, &twice)]))
}

/// The six fixed real vectors of the rank-lowering correction.
pub fn fixed_vectors() -> [Vec<C64>; 6] {
    let add = |a: Vec<C64>, b: Vec<C64>| a.iter().zip(&b).map(|(x, y)| x + y).collect();
    [add(e(1), e(6)), add(e(2), e(5)), e(1), e(2), e(6), e(5)]
}

fn sym_outer(u: &[C64], v: &[C64]) -> ComplexMatrix {
    let uv = ComplexMatrix::outer(u, v).expect("same length");
    let vu = ComplexMatrix::outer(v, u).expect("same length");
    &uv + &vu
}

/// `h^(b) = η^(b) − μ(v₁v₁ᵀ + v₂v₂ᵀ) + ν(v₃v₄ᵀ + v₄v₃ᵀ) + ε(v₅v₆ᵀ + v₆v₅ᵀ)`.
pub fn h_b(b: f64) -> FamilyResult<Operator> {
    let p = FamilyParams::new(b)?;
    let [v1, v2, v3, v4, v5, v6] = fixed_vectors();
    let eta = eta_b(b)?;
    let mut m = eta.matrix().clone();
    m = &m - &(&ComplexMatrix::projector(&v1) + &ComplexMatrix::projector(&v2)).scale(p.mu);
    m = &m + &sym_outer(&v3, &v4).scale(p.nu);
    m = &m + &sym_outer(&v5, &v6).scale(p.epsilon);
    Ok(Operator::new(qubits(), m)?)
}

/// `ρ₂(b) = Θ h^(b)`.
pub fn rho2_b(b: f64) -> FamilyResult<Operator> {
    let p = FamilyParams::new(b)?;
    Ok(h_b(b)?.scale(p.theta))
}

/// Closed-form matrix of `ρ₂(b)` in terms of `Γ, Λ, Δ, ζ, Ω, Θ`.
pub fn rho2_matrix(b: f64) -> FamilyResult<Operator> {
    let FamilyParams { gamma: g, lambda: l, delta: d, zeta: z, omega: o, theta, .. } =
        FamilyParams::new(b)?;
    let t = g / 3.0;
    let m = [
        [g, 0., 0., t, 0., t, t, 0.],
        [0., l, l, 0., 0., 0., 0., o],
        [0., l, l, 0., 0., 0., 0., o],
        [t, 0., 0., g, t, 0., 0., 0.],
        [0., 0., 0., t, d, 0., 0., o],
        [t, 0., 0., 0., 0., 2. * t, 2. * t, 0.],
        [t, 0., 0., 0., 0., 2. * t, 2. * t, 0.],
        [0., o, o, 0., o, 0., 0., z],
    ];
    real_operator(&m, theta)
}

/// Closed-form matrix of `[ρ₂(b)]^{T_C}`.
pub fn rho2_ptc_matrix(b: f64) -> FamilyResult<Operator> {
    let FamilyParams { gamma: g, lambda: l, delta: d, zeta: z, omega: o, theta, .. } =
        FamilyParams::new(b)?;
    let t = g / 3.0;
    let m = [
        [g, 0., 0., l, 0., 0., t, 0.],
        [0., l, t, 0., t, 0., 0., o],
        [0., t, l, 0., 0., t, 0., 0.],
        [l, 0., 0., g, 0., 0., o, 0.],
        [0., t, 0., 0., d, 0., 0., 2. * t],
        [0., 0., t, 0., 0., 2. * t, o, 0.],
        [t, 0., 0., o, 0., o, 2. * t, 0.],
        [0., o, 0., 0., 2. * t, 0., 0., z],
    ];
    real_operator(&m, theta)
}

fn real_operator(m: &[[f64; 8]; 8], scale: f64) -> FamilyResult<Operator> {
    let flat: Vec<f64> = m.iter().flatten().map(|x| x * scale).collect();
    Ok(Operator::new(qubits(), ComplexMatrix::from_real(8, &flat)?)?)
}

/// The vector `u(b)` used to test the range of `[ρ₂(b)]^{T_C}`:
/// `(0, 0, b/(3+17b), 0, 0, 2b/(3+17b), (2b+√(1−b²))/(6+34b), 0)`.
pub fn witness_u(b: f64) -> FamilyResult<Vec<C64>> {
    let b = check_b(b)?;
    let s = 3.0 + 17.0 * b;
    Ok(linalg::real_vector(&[
        0.0,
        0.0,
        b / s,
        0.0,
        0.0,
        2.0 * b / s,
        (2.0 * b + (1.0 - b * b).sqrt()) / (2.0 * s),
        0.0,
    ]))
}

//! Range criterion across the AB|C cut for states whose party C is a qubit.
//!
//! If `ρ` is separable across AB|C it has a decomposition into product
//! vectors `ψ ⊗ φ` from its range, and the partially conjugated vectors
//! `ψ ⊗ φ*` then span the range of `ρ^{T_C}`. This module samples
//! `φ = (1,0)`, `(0,1)` and `(1,t)` over a grid of `t`, solves for every
//! `ψ ∈ C^{d1·d2}` with `ψ ⊗ φ ∈ range(ρ)`, and compares the span `W` of the
//! conjugated solutions against `range(ρ^{T_C})`.
//!
//! The check is one-sided: a vector of `range(ρ^{T_C})` outside `W` (or a
//! range vector outside the span of the product solutions) proves
//! inseparability; finding neither proves nothing.

use num_complex::Complex64 as C64;
use crate::{
    hilbert::{ Operator, Party },
    linalg::{ self, DEFAULT_RANK_TOL },
    family::FamilyError,
};

/// Residual below which a Gram-Schmidt remainder counts as zero in the
/// nullspace solve.
pub const NULLSPACE_TOL: f64 = 1e-9;

/// Relative residual above which a vector is declared outside `W`.
pub const VIOLATION_THRESHOLD: f64 = 1e-3;

/// A witness counts as lying in `range(ρ^{T_C})` below this residual.
pub const PT_RANGE_TOL: f64 = 1e-8;

/// Samples of the party-C factor `φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct TGrid {
    pub phis: Vec<[C64; 2]>,
}

impl TGrid {
    /// `(1,0)`, `(0,1)`, then `(1,t)` for a 15 × 15 complex grid with real
    /// and imaginary parts in `linspace(−3, 3)` (without `t = 0`) and 50
    /// interior points of `linspace(−5, 5, 52)`.
    pub fn standard() -> Self {
        let mut ts = Vec::new();
        let axis = linspace(-3.0, 3.0, 15);
        for &re in &axis {
            for &im in &axis {
                if re == 0.0 && im == 0.0 {
                    continue;
                }
                ts.push(C64::new(re, im));
            }
        }
        ts.extend(real_points());
        Self::with_endpoints(ts)
    }

    /// Endpoints plus the 50 real `t` values only. Over real `t` the
    /// conjugation `φ → φ*` is the identity, so this grid cannot see the
    /// non-holomorphic dependence on `t`; it is kept as a diagnostic.
    pub fn real_only() -> Self {
        Self::with_endpoints(real_points())
    }

    /// Endpoints plus `(1, t)` for each given `t`.
    pub fn with_endpoints(ts: Vec<C64>) -> Self {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let mut phis = vec![[one, zero], [zero, one]];
        phis.extend(ts.into_iter().map(|t| [one, t]));
        Self { phis }
    }

    pub fn len(&self) -> usize { self.phis.len() }

    pub fn is_empty(&self) -> bool { self.phis.is_empty() }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

fn real_points() -> Vec<C64> {
    let pts = linspace(-5.0, 5.0, 52);
    pts[1..51].iter().map(|&x| C64::new(x, 0.0)).collect()
}

/// Solutions `ψ` of `ψ ⊗ φ ∈ range(ρ)` for one `φ`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolutionFamily {
    pub phi: [C64; 2],
    /// Orthonormal basis of the solution space in `C^{d1·d2}`.
    pub basis: Vec<Vec<C64>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RangeCriterionVerdict {
    /// `true` only when the sampled span saturated and some vector was
    /// found outside it by more than `threshold`.
    pub violated: bool,
    /// Residual of the witness outside `W`.
    pub witness_residual: f64,
    /// Residual of the witness outside `range(ρ^{T_C})`.
    pub witness_pt_range_residual: f64,
    /// Largest residual of a `range(ρ)` basis vector outside the span of
    /// the (unconjugated) product solutions.
    pub range_residual: f64,
    pub range_dim: usize,
    pub pt_range_dim: usize,
    pub product_span_dim: usize,
    /// Dimension of `W`.
    pub sampled_span_dim: usize,
    /// Number of `φ` samples.
    pub t_samples: usize,
    /// Sample index after which `dim W` stopped growing.
    pub plateau_from: usize,
    /// `dim W` was stable over at least the second half of the samples.
    pub saturated: bool,
    pub threshold: f64,
    /// Solution families for `φ = (1,0)` and `φ = (0,1)`.
    pub endpoint_families: Vec<SolutionFamily>,
}

/// Solve `ψ ⊗ φ ∈ range(ρ)` given an orthonormal basis `kernel` of
/// `ker ρ`: `ψ` must be orthogonal to every `w_i` with
/// `w_i[a] = Σ_c n_i[a·2 + c] conj(φ_c)`.
fn solve_family(kernel: &[Vec<C64>], phi: [C64; 2], d_pair: usize)
    -> Result<Vec<Vec<C64>>, FamilyError>
{
    let constraints: Vec<Vec<C64>> = kernel.iter()
        .map(|n| (0..d_pair).map(|a| n[2 * a] * phi[0].conj() + n[2 * a + 1] * phi[1].conj()).collect())
        .collect();
    let mut basis = linalg::orthonormal_span(&constraints, NULLSPACE_TOL)?;
    let fixed = basis.len();
    for k in 0..d_pair {
        let mut e = vec![C64::new(0.0, 0.0); d_pair];
        e[k] = C64::new(1.0, 0.0);
        linalg::extend_span(&mut basis, &e, NULLSPACE_TOL)?;
    }
    Ok(basis.split_off(fixed))
}

fn kron2(psi: &[C64], phi: [C64; 2]) -> Vec<C64> {
    psi.iter().flat_map(|a| [a * phi[0], a * phi[1]]).collect()
}

/// Run the range criterion for `ρ` across AB|C.
///
/// `witness`, when given, is tested first (it must lie in
/// `range(ρ^{T_C})`). Without one, the basis vector of `range(ρ^{T_C})`
/// farthest from `W` is used.
pub fn range_criterion_ab_c(rho: &Operator, grid: &TGrid, witness: Option<&[C64]>)
    -> Result<RangeCriterionVerdict, RangeError>
{
    let dims = rho.dims();
    if dims.local(Party::C) != 2 {
        return Err(RangeError::NotQubitC(dims.local(Party::C)));
    }
    let d_pair = dims.local(Party::A) * dims.local(Party::B);

    let pt = rho.partial_transpose(Party::C);
    let pt_spec = pt.spectrum().map_err(FamilyError::from)?;
    if pt_spec.min() < -crate::ppt::DEFAULT_PSD_TOL {
        return Err(RangeError::NptAcrossCut(pt_spec.min()));
    }
    let spec = rho.spectrum().map_err(FamilyError::from)?;
    let range = spec.range_basis(DEFAULT_RANK_TOL);
    let kernel: Vec<Vec<C64>> = {
        let thresh = DEFAULT_RANK_TOL * spec.values.iter().map(|l| l.abs()).fold(1.0, f64::max);
        spec.values.iter()
            .enumerate()
            .filter(|(_, l)| l.abs() <= thresh)
            .map(|(k, _)| spec.vector(k))
            .collect()
    };
    let pt_range = pt_spec.range_basis(DEFAULT_RANK_TOL);

    let mut w: Vec<Vec<C64>> = Vec::new();
    let mut products: Vec<Vec<C64>> = Vec::new();
    let mut plateau_from = 0;
    let mut endpoint_families = Vec::new();
    for (k, &phi) in grid.phis.iter().enumerate() {
        let family = solve_family(&kernel, phi, d_pair)?;
        let phi_conj = [phi[0].conj(), phi[1].conj()];
        let mut grew = false;
        for psi in &family {
            linalg::extend_span(&mut products, &kron2(psi, phi), NULLSPACE_TOL)?;
            grew |= linalg::extend_span(&mut w, &kron2(psi, phi_conj), NULLSPACE_TOL)?;
        }
        if grew {
            plateau_from = k + 1;
        }
        if k < 2 {
            endpoint_families.push(SolutionFamily { phi, basis: family });
        }
    }
    let t_samples = grid.len();
    let saturated = plateau_from <= t_samples / 2;

    let range_residual = range.iter()
        .map(|v| linalg::residual_outside_span(v, &products))
        .collect::<Result<Vec<_>, _>>()
        .map_err(FamilyError::from)?
        .into_iter()
        .fold(0.0, f64::max);

    let (witness_residual, witness_pt_range_residual) = match witness {
        Some(u) => (
            linalg::residual_outside_span(u, &w).map_err(FamilyError::from)?,
            linalg::residual_outside_span(u, &pt_range).map_err(FamilyError::from)?,
        ),
        None => {
            let mut worst = 0.0;
            for v in &pt_range {
                worst = f64::max(worst, linalg::residual_outside_span(v, &w).map_err(FamilyError::from)?);
            }
            (worst, 0.0)
        },
    };

    let witness_hit = witness_pt_range_residual <= PT_RANGE_TOL && witness_residual > VIOLATION_THRESHOLD;
    let violated = saturated && (witness_hit || range_residual > VIOLATION_THRESHOLD);
    Ok(RangeCriterionVerdict {
        violated,
        witness_residual,
        witness_pt_range_residual,
        range_residual,
        range_dim: range.len(),
        pt_range_dim: pt_range.len(),
        product_span_dim: products.len(),
        sampled_span_dim: w.len(),
        t_samples,
        plateau_from,
        saturated,
        threshold: VIOLATION_THRESHOLD,
        endpoint_families,
    })
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum RangeError {
    #[error("party C has dimension {0}; the AB|C range check needs a qubit")]
    NotQubitC(usize),

    #[error("state is NPT across C|AB (lambda_min = {0:e}); range criterion unnecessary")]
    NptAcrossCut(f64),

    #[error(transparent)]
    Family(#[from] FamilyError),
}

impl From<linalg::LinalgError> for RangeError {
    fn from(e: linalg::LinalgError) -> Self { RangeError::Family(e.into()) }
}

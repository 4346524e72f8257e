//! Per-cut PPT checks and threshold location along a one-parameter family.

use serde::Serialize;
use crate::{
    hilbert::{ Cut, HilbertResult, Operator, Party },
    linalg::DEFAULT_RANK_TOL,
};

/// Default tolerance for PSD verdicts.
pub const DEFAULT_PSD_TOL: f64 = 1e-10;

/// Default bisection width.
pub const DEFAULT_B_TOL: f64 = 1e-10;

/// Points in the coarse scan that brackets roots before bisection.
pub const PRESCAN_POINTS: usize = 101;

#[derive(Copy, Clone, Debug, PartialEq, Serialize)]
pub struct CutPpt {
    #[serde(skip)]
    pub cut: Cut,
    /// Smallest eigenvalue of the partial transpose on the cut's singleton
    /// party.
    pub lmin: f64,
    pub ppt: bool,
    pub pt_rank: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PptReport {
    /// Ordered A|BC, B|CA, C|AB.
    pub cuts: [CutPpt; 3],
}

impl PptReport {
    pub fn all_ppt(&self) -> bool {
        self.cuts.iter().all(|c| c.ppt)
    }

    pub fn cut(&self, cut: Cut) -> &CutPpt {
        &self.cuts[cut.singleton().index()]
    }
}

/// Smallest eigenvalue of `ρ^{T_party}`.
pub fn lmin_pt(rho: &Operator, party: Party) -> HilbertResult<f64> {
    Ok(rho.partial_transpose(party).spectrum()?.min())
}

/// Partial-transpose spectra on all three cuts; a cut is PPT when
/// `λ_min >= -tol`.
pub fn ppt_report(rho: &Operator, tol: f64) -> HilbertResult<PptReport> {
    let one = |cut: Cut| -> HilbertResult<CutPpt> {
        let spec = rho.partial_transpose(cut.singleton()).spectrum()?;
        Ok(CutPpt {
            cut,
            lmin: spec.min(),
            ppt: spec.min() >= -tol,
            pt_rank: spec.rank(DEFAULT_RANK_TOL),
        })
    };
    Ok(PptReport { cuts: [one(Cut::A_BC)?, one(Cut::B_CA)?, one(Cut::C_AB)?] })
}

#[derive(Clone, Debug, PartialEq)]
pub enum Threshold {
    /// `λ_min` crosses zero at `b`; `bracket` is the prescan cell it was
    /// found in.
    Root { b: f64, bracket: (f64, f64), evaluations: usize },
    /// `λ_min` stays on one side of `-psd_tol` across the whole interval.
    NoSignChange { lmin_low: f64, lmin_high: f64 },
}

impl Threshold {
    pub fn root(&self) -> Option<f64> {
        match self {
            Threshold::Root { b, .. } => Some(*b),
            Threshold::NoSignChange { .. } => None,
        }
    }
}

/// Locate the PPT threshold of `family` on `party` inside `interval`.
///
/// A 101-point scan classifies each point as NPT (`λ_min < -psd_tol`) or
/// PSD. Among the cells where the classification flips, the one with the
/// largest `b` is refined by bisection on the sign of `λ_min` until the
/// bracket is narrower than `tol_b`. Classifying with a tolerance keeps
/// round-off around a PSD-with-kernel curve (λ_min ≈ ±1e-17) from being
/// read as a sign change.
pub fn ppt_threshold<F, E>(family: F, party: Party, interval: (f64, f64), tol_b: f64, psd_tol: f64)
    -> Result<Threshold, E>
where
    F: Fn(f64) -> Result<Operator, E>,
    E: From<crate::hilbert::HilbertError>,
{
    let (lo, hi) = interval;
    let mut evaluations = 0;
    let mut eval = |b: f64| -> Result<f64, E> {
        evaluations += 1;
        Ok(lmin_pt(&family(b)?, party)?)
    };
    let n = PRESCAN_POINTS;
    let grid: Vec<f64> = (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect();
    let mut values = Vec::with_capacity(n);
    for &b in &grid {
        values.push(eval(b)?);
    }
    let npt = |l: f64| l < -psd_tol;
    let cell = (1..n).rev().find(|&k| npt(values[k - 1]) != npt(values[k]));
    let Some(k) = cell else {
        return Ok(Threshold::NoSignChange {
            lmin_low: values.iter().copied().fold(f64::INFINITY, f64::min),
            lmin_high: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        });
    };
    let (mut a, mut b) = (grid[k - 1], grid[k]);
    // the NPT end is known negative; the other end may hold round-off
    let left_negative = npt(values[k - 1]);
    while b - a > tol_b {
        let mid = 0.5 * (a + b);
        if (eval(mid)? < 0.0) == left_negative {
            a = mid;
        } else {
            b = mid;
        }
    }
    Ok(Threshold::Root {
        b: 0.5 * (a + b),
        bracket: (grid[k - 1], grid[k]),
        evaluations,
    })
}

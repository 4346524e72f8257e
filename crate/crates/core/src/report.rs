//! Per-cut classification of a tripartite state.
//!
//! A report records PPT evidence on each cut and any proof that the state is
//! not biseparable across some cut. It never asserts separability: PPT is a
//! necessary condition only, and a range check that finds nothing proves
//! nothing.

use std::fmt;
use num_complex::Complex64 as C64;
use serde::Serialize;
use thiserror::Error;
use crate::{
    hilbert::{ Cut, HilbertError, Operator, Party },
    linalg::DEFAULT_RANK_TOL,
    ppt::{ self, CutPpt },
    range::{ self, RangeError, TGrid },
    upb::{ self, ProductSet, UpbError },
};

/// `ρ^{T_x} = ρ` is declared below this entrywise difference.
const PT_INVARIANCE_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CutsReport {
    #[serde(rename = "A_BC")]
    pub a_bc: CutPpt,
    #[serde(rename = "B_CA")]
    pub b_ca: CutPpt,
    #[serde(rename = "C_AB")]
    pub c_ab: CutPpt,
}

impl CutsReport {
    pub fn iter(&self) -> impl Iterator<Item = &CutPpt> {
        [&self.a_bc, &self.b_ca, &self.c_ab].into_iter()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClassificationReport {
    pub dims: [usize; 3],
    pub trace: f64,
    /// Smallest eigenvalue of the state itself.
    #[serde(skip)]
    pub lmin: f64,
    pub state_rank: usize,
    pub cuts: CutsReport,
    /// All three partial transposes are PSD.
    pub p_int_evidence: bool,
    /// Some cut is proven not biseparable.
    pub b_int_excluded: bool,
    /// One note per piece of evidence, in the order it was gathered.
    pub provenance: Vec<String>,
}

/// Catalog-specific evidence to attach to a report.
#[derive(Clone, Debug)]
pub enum Evidence {
    None,
    /// The state lives on the complement of an unextendible product set.
    /// `cut_product_states` is the number of mutually orthogonal states,
    /// product across A|BC, that complete the set; when it is below the
    /// state's rank, the range cannot be spanned by such states.
    UpbComplement { set_id: &'static str, set: ProductSet, cut_product_states: Option<usize> },
    /// Run the range criterion across AB|C.
    RangeCriterion { grid: TGrid, witness: Option<Vec<C64>> },
}

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("not a state: smallest eigenvalue {0:e} is below -{1:e}")]
    NotPositive(f64, f64),

    #[error("not a state: trace {0} is not positive")]
    BadTrace(f64),

    #[error(transparent)]
    Hilbert(#[from] HilbertError),

    #[error(transparent)]
    Upb(#[from] UpbError),

    #[error(transparent)]
    Range(RangeError),
}

pub fn classify(rho: &Operator, tol: f64, evidence: &Evidence) -> Result<ClassificationReport, ReportError> {
    let spec = rho.spectrum()?;
    if spec.min() < -tol {
        return Err(ReportError::NotPositive(spec.min(), tol));
    }
    let trace = rho.trace();
    if trace <= tol {
        return Err(ReportError::BadTrace(trace));
    }
    let per_cut = ppt::ppt_report(rho, tol)?;
    let cuts = CutsReport {
        a_bc: *per_cut.cut(Cut::A_BC),
        b_ca: *per_cut.cut(Cut::B_CA),
        c_ab: *per_cut.cut(Cut::C_AB),
    };
    let state_rank = spec.rank(DEFAULT_RANK_TOL);
    let mut provenance = Vec::new();
    let mut excluded = false;

    for c in cuts.iter().filter(|c| !c.ppt) {
        excluded = true;
        provenance.push(format!("inseparability proven via NPT across {} (lambda_min {:e})", c.cut, c.lmin));
    }
    if Party::ALL.iter().all(|&p| rho.partial_transpose(p).max_abs_diff(rho) <= PT_INVARIANCE_TOL) {
        provenance.push("partial transpose equals the state on every cut".to_string());
    }

    match evidence {
        Evidence::None => {},
        Evidence::UpbComplement { set_id, set, cut_product_states } => {
            let verdict = upb::verify_unextendible(set)?;
            let mut annihilates = true;
            for m in set.normalized_states() {
                annihilates &= rho.apply_norm(&m)? <= tol.max(1e-12);
            }
            if verdict.is_orthogonal && verdict.is_unextendible && annihilates
                && cut_product_states.is_none_or(|n| n < state_rank)
            {
                excluded = true;
                let deficit = match cut_product_states {
                    Some(n) => format!(
                        "; only {n} orthogonal states product across A|BC complete it, short of rank {state_rank}"
                    ),
                    None => String::new(),
                };
                provenance.push(format!(
                    "inseparability proven via UPB deficit: supported on the {}-dimensional complement of unextendible set {set_id}{deficit}",
                    verdict.complement_dim,
                ));
            } else {
                provenance.push(format!("UPB deficit argument for {set_id} did not apply"));
            }
        },
        Evidence::RangeCriterion { grid, witness } => {
            match range::range_criterion_ab_c(rho, grid, witness.as_deref()) {
                Ok(v) if v.violated => {
                    excluded = true;
                    provenance.push(format!(
                        "inseparability proven via range criterion across AB|C (residual {:.3e} outside the span of {} conjugated product vectors)",
                        v.witness_residual.max(v.range_residual), v.sampled_span_dim,
                    ));
                },
                Ok(v) => provenance.push(format!(
                    "range criterion across AB|C inconclusive: conjugated product vectors span {} of {} dimensions of range(rho^T_C), witness residual {:.3e}",
                    v.sampled_span_dim, v.pt_range_dim, v.witness_residual,
                )),
                Err(RangeError::NptAcrossCut(_)) => {},
                Err(RangeError::NotQubitC(_)) => {
                    provenance.push("range criterion across AB|C not applicable: party C is not a qubit".to_string())
                },
                Err(e) => return Err(ReportError::Range(e)),
            }
        },
    }

    Ok(ClassificationReport {
        dims: rho.dims().as_array(),
        trace,
        lmin: spec.min(),
        state_rank,
        p_int_evidence: per_cut.all_ppt(),
        cuts,
        b_int_excluded: excluded,
        provenance,
    })
}

impl fmt::Display for ClassificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.dims;
        writeln!(f, "dims ({a},{b},{c})  trace {:.12}  rank {}  lambda_min {:.6e}", self.trace, self.state_rank, self.lmin)?;
        writeln!(f, "{:<6} {:>14}  {:<4} rank", "cut", "lambda_min", "PT")?;
        for cut in self.cuts.iter() {
            let verdict = if cut.ppt { "PPT" } else { "NPT" };
            writeln!(f, "{:<6} {:>14.6e}  {:<4} {}", cut.cut.to_string(), cut.lmin, verdict, cut.pt_rank)?;
        }
        writeln!(f, "PPT on every cut: {}", if self.p_int_evidence { "yes" } else { "no" })?;
        write!(f, "excluded from B^int: {}", if self.b_int_excluded { "yes" } else { "not shown" })?;
        for note in &self.provenance {
            write!(f, "\n  {note}")?;
        }
        Ok(())
    }
}

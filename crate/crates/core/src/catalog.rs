//! Named constructions, looked up by short identifiers such as `rho3-8`.

use std::fmt;
use thiserror::Error;
use crate::{
    family::{ self, FamilyError },
    hilbert::{ Operator, PartyDims },
    range::TGrid,
    report::Evidence,
    upb::{ self, ProductSet },
};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum EntryKind {
    /// A set of product vectors; usable with `upb verify`.
    ProductSet,
    /// A fixed density operator.
    State,
    /// A density operator depending on `b ∈ [0, 1]`.
    Family,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct CatalogEntry {
    pub id: &'static str,
    pub dims: [usize; 3],
    pub kind: EntryKind,
    pub description: &'static str,
}

impl CatalogEntry {
    pub fn parameterized(&self) -> bool {
        self.kind == EntryKind::Family
    }

    pub fn party_dims(&self) -> PartyDims {
        let [a, b, c] = self.dims;
        PartyDims::new(a, b, c).expect("catalog dims are valid")
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.dims;
        write!(f, "{} ({a},{b},{c})", self.id)?;
        if self.parameterized() {
            write!(f, ", parameter b")?;
        }
        write!(f, "  {}", self.description)
    }
}

pub const ENTRIES: &[CatalogEntry] = &[
    CatalogEntry {
        id: "shifts",
        dims: [2, 2, 2],
        kind: EntryKind::ProductSet,
        description: "four-member Shifts UPB on three qubits",
    },
    CatalogEntry {
        id: "rho-su",
        dims: [2, 2, 2],
        kind: EntryKind::State,
        description: "normalized projector onto the complement of the Shifts UPB",
    },
    CatalogEntry {
        id: "upb3",
        dims: [3, 3, 3],
        kind: EntryKind::ProductSet,
        description: "19-member UPB: topb3 minus |kkk> and the six psi(0,0) members, plus the stopper S",
    },
    CatalogEntry {
        id: "rho3-8",
        dims: [3, 3, 3],
        kind: EntryKind::State,
        description: "rank-8 bound entangled state on the complement of upb3",
    },
    CatalogEntry {
        id: "upb4",
        dims: [4, 4, 4],
        kind: EntryKind::ProductSet,
        description: "56-member UPB: a 64-member product basis minus 9 members, plus the stopper S",
    },
    CatalogEntry {
        id: "rho4-8",
        dims: [4, 4, 4],
        kind: EntryKind::State,
        description: "rank-8 bound entangled state on the complement of upb4",
    },
    CatalogEntry {
        id: "chi",
        dims: [2, 2, 2],
        kind: EntryKind::State,
        description: "2x4 bound entangled state read as three qubits; NPT across A|BC",
    },
    CatalogEntry {
        id: "sigma",
        dims: [2, 2, 2],
        kind: EntryKind::Family,
        description: "chi mixed with the noise projector; PPT across A|BC only",
    },
    CatalogEntry {
        id: "eta",
        dims: [2, 2, 2],
        kind: EntryKind::Family,
        description: "cyclic average of sigma over party relabelings",
    },
    CatalogEntry {
        id: "rho2",
        dims: [2, 2, 2],
        kind: EntryKind::Family,
        description: "rank-lowered, renormalized eta; PPT on every cut for b above about 0.8173",
    },
    CatalogEntry {
        id: "topb3",
        dims: [3, 3, 3],
        kind: EntryKind::ProductSet,
        description: "27-member orthogonal product basis that upb3 is cut from",
    },
];

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CatalogError {
    #[error("unknown catalog id '{id}'{}", suggestion_hint(.suggestion))]
    Unknown { id: String, suggestion: Option<&'static str> },

    #[error("'{0}' depends on b; pass a value in [0, 1]")]
    MissingParameter(&'static str),

    #[error("'{0}' takes no parameter")]
    UnexpectedParameter(&'static str),

    #[error("'{id}' is a {found}, expected a {wanted}")]
    WrongKind { id: &'static str, found: &'static str, wanted: &'static str },

    #[error(transparent)]
    Family(#[from] FamilyError),
}

fn suggestion_hint(s: &Option<&'static str>) -> String {
    match s {
        Some(s) => format!("; did you mean '{s}'?"),
        None => String::new(),
    }
}

fn kind_name(kind: EntryKind) -> &'static str {
    match kind {
        EntryKind::ProductSet => "product set",
        EntryKind::State => "state",
        EntryKind::Family => "parameterized family",
    }
}

/// Find an entry by id. Unknown ids get the closest known id as a
/// suggestion when one is near enough.
pub fn lookup(id: &str) -> Result<&'static CatalogEntry, CatalogError> {
    if let Some(e) = ENTRIES.iter().find(|e| e.id == id) {
        return Ok(e);
    }
    let suggestion = ENTRIES.iter()
        .map(|e| (strsim::levenshtein(&id.to_lowercase(), e.id), e.id))
        .filter(|&(d, _)| d <= 2)
        .min()
        .map(|(_, s)| s);
    Err(CatalogError::Unknown { id: id.to_string(), suggestion })
}

/// The density operator behind a state or family id.
pub fn state(id: &str, b: Option<f64>) -> Result<Operator, CatalogError> {
    let entry = lookup(id)?;
    match (entry.kind, b) {
        (EntryKind::ProductSet, _) => Err(CatalogError::WrongKind {
            id: entry.id,
            found: kind_name(entry.kind),
            wanted: "state",
        }),
        (EntryKind::State, Some(_)) => Err(CatalogError::UnexpectedParameter(entry.id)),
        (EntryKind::Family, None) => Err(CatalogError::MissingParameter(entry.id)),
        (EntryKind::State, None) => Ok(match entry.id {
            "rho-su" => upb::rho_su(),
            "rho3-8" => upb::rho3_8(),
            "rho4-8" => upb::rho4_8(),
            "chi" => family::chi(),
            other => unreachable!("state id {other}"),
        }),
        (EntryKind::Family, Some(b)) => Ok(family_fn(entry.id)?(b)?),
    }
}

pub type FamilyFn = fn(f64) -> Result<Operator, FamilyError>;

/// Constructor of a parameterized family.
pub fn family_fn(id: &str) -> Result<FamilyFn, CatalogError> {
    let entry = lookup(id)?;
    match entry.id {
        "sigma" => Ok(family::sigma_b),
        "eta" => Ok(family::eta_b),
        "rho2" => Ok(family::rho2_b),
        _ => Err(CatalogError::WrongKind {
            id: entry.id,
            found: kind_name(entry.kind),
            wanted: "parameterized family",
        }),
    }
}

/// Product set behind a set id.
pub fn product_set(id: &str) -> Result<ProductSet, CatalogError> {
    let entry = lookup(id)?;
    match entry.id {
        "shifts" => Ok(upb::shifts_upb()),
        "upb3" => Ok(upb::upb3()),
        "upb4" => Ok(upb::upb4()),
        "topb3" => Ok(upb::topb3()),
        _ => Err(CatalogError::WrongKind {
            id: entry.id,
            found: kind_name(entry.kind),
            wanted: "product set",
        }),
    }
}

/// Evidence beyond PPT that the catalog can attach to a state or family
/// member.
pub fn evidence(id: &str, b: Option<f64>) -> Result<Evidence, CatalogError> {
    let entry = lookup(id)?;
    Ok(match (entry.id, b) {
        ("rho3-8", _) => Evidence::UpbComplement {
            set_id: "upb3",
            set: upb::upb3(),
            cut_product_states: Some(upb::biseparable_quad3().len()),
        },
        ("rho4-8", _) => Evidence::UpbComplement { set_id: "upb4", set: upb::upb4(), cut_product_states: None },
        ("rho2", Some(b)) => Evidence::RangeCriterion {
            grid: TGrid::standard(),
            witness: Some(family::witness_u(b)?),
        },
        _ => Evidence::None,
    })
}

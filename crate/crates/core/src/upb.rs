//! Orthogonal product bases, unextendible product bases, and the mixed
//! states on their orthogonal complements.
//!
//! Catalog sets are built from small-integer (or `1/√2`) local factors, kept
//! unnormalized as written. Normalization happens only when members are
//! compared or projected out.

use num_complex::Complex64 as C64;
use thiserror::Error;
use crate::{
    hilbert::{ self, tensor3, HilbertError, LocalState, Operator, Party, PartyDims, StateVector },
    linalg::{ self, ComplexMatrix, LinalgError },
};

/// Relative tolerance for deciding whether a local factor already lies in a
/// party's span during the unextendibility search.
pub const SPAN_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum UpbError {
    #[error("members are not mutually orthogonal (max overlap {0:e})")]
    NotOrthogonal(f64),

    #[error("set is complete: {members} members span the {dim}-dimensional space")]
    Complete { members: usize, dim: usize },

    #[error(transparent)]
    Hilbert(#[from] HilbertError),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type UpbResult<T> = Result<T, UpbError>;

/// A fully product member `|a⟩ ⊗ |b⟩ ⊗ |c⟩` with its factors retained.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductMember {
    pub label: String,
    pub factors: [Vec<C64>; 3],
    pub state: StateVector,
}

/// Ordered list of product states on one tripartite space.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductSet {
    dims: PartyDims,
    members: Vec<ProductMember>,
}

impl ProductSet {
    pub fn new(dims: PartyDims) -> Self {
        Self { dims, members: Vec::new() }
    }

    pub fn push(&mut self, label: impl Into<String>, a: Vec<C64>, b: Vec<C64>, c: Vec<C64>)
        -> UpbResult<()>
    {
        let state = tensor3(&a, &b, &c, self.dims)?;
        self.members.push(ProductMember { label: label.into(), factors: [a, b, c], state });
        Ok(())
    }

    /// Push `|x,y,z⟩` given local state names.
    pub fn push_named(&mut self, label: impl Into<String>, locals: [LocalState; 3]) -> UpbResult<()> {
        let d = self.dims;
        self.push(
            label,
            hilbert::ket(locals[0], d.local(Party::A))?,
            hilbert::ket(locals[1], d.local(Party::B))?,
            hilbert::ket(locals[2], d.local(Party::C))?,
        )
    }

    pub fn dims(&self) -> PartyDims { self.dims }

    pub fn len(&self) -> usize { self.members.len() }

    pub fn is_empty(&self) -> bool { self.members.is_empty() }

    pub fn members(&self) -> &[ProductMember] { &self.members }

    pub fn member(&self, label: &str) -> Option<&ProductMember> {
        self.members.iter().find(|m| m.label == label)
    }

    /// Copy without the members whose labels are listed.
    pub fn without(&self, labels: &[&str]) -> Self {
        Self {
            dims: self.dims,
            members: self.members.iter()
                .filter(|m| !labels.contains(&m.label.as_str()))
                .cloned()
                .collect(),
        }
    }

    /// Normalized member states, in order.
    pub fn normalized_states(&self) -> Vec<StateVector> {
        self.members.iter().map(|m| m.state.normalized()).collect()
    }
}

/// A state that is product across the cut isolating party A: `|x⟩ ⊗ |y⟩_BC`.
#[derive(Clone, Debug, PartialEq)]
pub struct CutProductState {
    pub label: String,
    pub single: Vec<C64>,
    pub pair: Vec<C64>,
    pub state: StateVector,
}

/* Verification ***************************************************************/

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct OrthogonalityCheck {
    pub orthogonal: bool,
    /// Largest `|G_ij − δ_ij|` of the normalized Gram matrix.
    pub max_off_diagonal: f64,
}

/// Compare the Gram matrix of the normalized members with the identity.
pub fn verify_mutual_orthogonality(set: &ProductSet, tol: f64) -> OrthogonalityCheck {
    let states = set.normalized_states();
    let mut worst: f64 = 0.0;
    for (i, a) in states.iter().enumerate() {
        for (j, b) in states.iter().enumerate().skip(i) {
            let want = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((a.inner(b) - want).norm());
        }
    }
    OrthogonalityCheck { orthogonal: worst <= tol, max_off_diagonal: worst }
}

/// A product vector orthogonal to every member, together with the member →
/// party assignment it was built from: member `k` is orthogonal to the
/// extension on party `assignment[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtensionWitness {
    pub assignment: Vec<Party>,
    pub vector: StateVector,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UpbVerdict {
    pub is_orthogonal: bool,
    pub max_overlap: f64,
    pub is_unextendible: bool,
    /// Dimension of the orthogonal complement of the members' span.
    pub complement_dim: usize,
    pub witness: Option<ExtensionWitness>,
    /// Search nodes visited.
    pub nodes: u64,
}

/// Decide whether some product vector is orthogonal to every member.
///
/// A product vector `|x⟩|y⟩|z⟩` is orthogonal to `|a⟩|b⟩|c⟩` iff it is
/// orthogonal on at least one party, so an extension exists iff the members
/// can be split among A, B, C with each party's assigned local factors
/// spanning a proper subspace. The split is found by depth-first branch and
/// bound over members in input order: a branch dies as soon as a party's
/// factors span its whole local space, and a member whose factor already
/// lies in some party's current span is placed there without branching.
pub fn verify_unextendible(set: &ProductSet) -> UpbResult<UpbVerdict> {
    let ortho = verify_mutual_orthogonality(set, 1e-10);
    let states: Vec<Vec<C64>> = set.members.iter().map(|m| m.state.amplitudes().to_vec()).collect();
    let span_rank = linalg::orthonormal_span(&states, SPAN_TOL)?.len();
    let complement_dim = set.dims.total() - span_rank;

    let mut search = Search {
        set,
        spans: [Vec::new(), Vec::new(), Vec::new()],
        assignment: Vec::with_capacity(set.len()),
        nodes: 0,
    };
    let found = search.run(0)?;
    let witness = if found {
        Some(build_witness(set, &search.assignment, &search.spans)?)
    } else {
        None
    };
    Ok(UpbVerdict {
        is_orthogonal: ortho.orthogonal,
        max_overlap: ortho.max_off_diagonal,
        is_unextendible: witness.is_none(),
        complement_dim,
        witness,
        nodes: search.nodes,
    })
}

struct Search<'a> {
    set: &'a ProductSet,
    spans: [Vec<Vec<C64>>; 3],
    assignment: Vec<Party>,
    nodes: u64,
}

impl Search<'_> {
    fn run(&mut self, k: usize) -> UpbResult<bool> {
        self.nodes += 1;
        if k == self.set.len() {
            return Ok(true);
        }
        let member = &self.set.members[k];

        // free placement
        for party in Party::ALL {
            let p = party.index();
            if linalg::residual_outside_span(&member.factors[p], &self.spans[p])? < SPAN_TOL {
                self.assignment.push(party);
                if self.run(k + 1)? {
                    return Ok(true);
                }
                self.assignment.pop();
                return Ok(false);
            }
        }

        for party in Party::ALL {
            let p = party.index();
            let d = self.set.dims.local(party);
            if self.spans[p].len() + 1 >= d {
                continue;
            }
            if !linalg::extend_span(&mut self.spans[p], &member.factors[p], SPAN_TOL)? {
                continue;
            }
            self.assignment.push(party);
            if self.run(k + 1)? {
                return Ok(true);
            }
            self.assignment.pop();
            self.spans[p].pop();
        }
        Ok(false)
    }
}

fn build_witness(set: &ProductSet, assignment: &[Party], spans: &[Vec<Vec<C64>>; 3])
    -> UpbResult<ExtensionWitness>
{
    let mut locals: Vec<Vec<C64>> = Vec::with_capacity(3);
    for party in Party::ALL {
        let d = set.dims.local(party);
        let mut basis = spans[party.index()].clone();
        let before = basis.len();
        let mut found = None;
        for k in 0..d {
            let e = hilbert::ket(LocalState::Basis(k), d)?;
            if linalg::extend_span(&mut basis, &e, SPAN_TOL)? {
                found = Some(basis[before].clone());
                break;
            }
        }
        locals.push(found.expect("a proper subspace has a nonzero complement"));
    }
    let vector = tensor3(&locals[0], &locals[1], &locals[2], set.dims)?;
    Ok(ExtensionWitness { assignment: assignment.to_vec(), vector })
}

/// `(I − Σ |ψ̃⟩⟨ψ̃|) / (dim − n)` for an orthogonal set of `n < dim` members.
pub fn complement_state(set: &ProductSet) -> UpbResult<Operator> {
    let dim = set.dims.total();
    if set.len() >= dim {
        return Err(UpbError::Complete { members: set.len(), dim });
    }
    let ortho = verify_mutual_orthogonality(set, 1e-10);
    if !ortho.orthogonal {
        return Err(UpbError::NotOrthogonal(ortho.max_off_diagonal));
    }
    let mut m = ComplexMatrix::identity(dim);
    for psi in set.normalized_states() {
        m = &m - &ComplexMatrix::projector(psi.amplitudes());
    }
    Ok(Operator::new(set.dims, m.scale(1.0 / (dim - set.len()) as f64))?)
}

/* Catalog ********************************************************************/

use LocalState::{ Basis, Eta, Minus, Phi, Plus, Uniform, Xi };

/// The four-member Shifts UPB of three qubits.
pub fn shifts_upb() -> ProductSet {
    let mut set = ProductSet::new(PartyDims::uniform(2));
    let members = [
        ("S1", [Basis(0), Basis(1), Plus]),
        ("S2", [Basis(1), Plus, Basis(0)]),
        ("S3", [Plus, Basis(0), Basis(1)]),
        ("S4", [Minus, Minus, Minus]),
    ];
    for (label, locals) in members {
        set.push_named(label, locals).expect("catalog state");
    }
    set
}

/// Four states, product across A|BC, completing the Shifts UPB to an
/// orthonormal basis of three qubits.
///
/// With `|a⟩ = |1,+⟩, |b⟩ = |+,0⟩, |c⟩ = |0,1⟩, |d⟩ = |−,−⟩` these are
/// `|0⟩|a⊥⟩, |1⟩|b⊥⟩, |+⟩|c⊥⟩, |−⟩|d⊥⟩`, where `|a⊥⟩, |b⊥⟩ ∈ span{a, b}`
/// and `|c⊥⟩, |d⊥⟩ ∈ span{c, d}`.
pub fn shifts_completion_a_bc() -> Vec<CutProductState> {
    let k = |s: LocalState| hilbert::ket(s, 2).expect("qubit ket");
    let pair = |x: LocalState, y: LocalState| -> Vec<C64> {
        let (x, y) = (k(x), k(y));
        x.iter().flat_map(|a| y.iter().map(move |b| a * b)).collect()
    };
    let a = pair(Basis(1), Plus);
    let b = pair(Plus, Basis(0));
    let c = pair(Basis(0), Basis(1));
    let d = pair(Minus, Minus);
    let perp = |x: &[C64], y: &[C64]| linalg::orth_in_2d_span(x, y).expect("independent");
    let entries = [
        ("kappa1", k(Basis(0)), perp(&a, &b)),
        ("kappa2", k(Basis(1)), perp(&b, &a)),
        ("kappa3", k(Plus), perp(&c, &d)),
        ("kappa4", k(Minus), perp(&d, &c)),
    ];
    let dims = PartyDims::uniform(2);
    entries.into_iter()
        .map(|(label, single, pair)| {
            let amps = single.iter().flat_map(|x| pair.iter().map(move |y| x * y)).collect();
            CutProductState {
                label: label.to_string(),
                state: StateVector::new(dims, amps).expect("length 8"),
                single,
                pair,
            }
        })
        .collect()
}

/// `(I₈ − Σ |S_i⟩⟨S_i|) / 4`.
pub fn rho_su() -> Operator {
    complement_state(&shifts_upb()).expect("Shifts is orthogonal")
}

/// Local factor patterns of the six twisted blocks in `(C³)^⊗3`, as
/// functions of `(η_i, ξ_j)`.
const BLOCKS3: [[Slot; 3]; 6] = [
    [Slot::Fixed(0), Slot::Eta, Slot::Xi],
    [Slot::Eta, Slot::Fixed(2), Slot::Xi],
    [Slot::Fixed(2), Slot::Xi, Slot::Eta],
    [Slot::Eta, Slot::Xi, Slot::Fixed(0)],
    [Slot::Xi, Slot::Fixed(0), Slot::Eta],
    [Slot::Xi, Slot::Eta, Slot::Fixed(2)],
];

/// Same for `(C⁴)^⊗3`.
const BLOCKS4: [[Slot; 3]; 6] = [
    [Slot::Fixed(0), Slot::Eta, Slot::Xi],
    [Slot::Eta, Slot::Fixed(3), Slot::Xi],
    [Slot::Xi, Slot::Fixed(0), Slot::Eta],
    [Slot::Xi, Slot::Eta, Slot::Fixed(3)],
    [Slot::Fixed(3), Slot::Xi, Slot::Eta],
    [Slot::Eta, Slot::Xi, Slot::Fixed(0)],
];

#[derive(Copy, Clone)]
enum Slot { Fixed(usize), Eta, Xi }

fn push_blocks(set: &mut ProductSet, blocks: &[[Slot; 3]; 6], range: usize) {
    for (l, block) in blocks.iter().enumerate() {
        for i in 0..range {
            for j in 0..range {
                let locals = block.map(|s| match s {
                    Slot::Fixed(k) => Basis(k),
                    Slot::Eta => Eta(i),
                    Slot::Xi => Xi(j),
                });
                set.push_named(block_label(l + 1, i, j), locals).expect("catalog state");
            }
        }
    }
}

/// Label of `|ψ(i,j)⟩_l`.
pub fn block_label(l: usize, i: usize, j: usize) -> String {
    format!("psi({i},{j})_{l}")
}

/// The 27-member twisted orthogonal product basis of `(C³)^⊗3`.
pub fn topb3() -> ProductSet {
    let mut set = ProductSet::new(PartyDims::uniform(3));
    for k in 0..3 {
        set.push_named(format!("kkk({k})"), [Basis(k); 3]).expect("catalog state");
    }
    push_blocks(&mut set, &BLOCKS3, 2);
    set
}

/// The 19-member UPB of `(C³)^⊗3`: the six twisted blocks without their
/// `ψ(0,0)` members, plus `|S⟩ = (|0⟩+|1⟩+|2⟩)^⊗3`.
pub fn upb3() -> ProductSet {
    let removed: Vec<String> = (1..=6).map(|l| block_label(l, 0, 0)).collect();
    let mut drop: Vec<&str> = removed.iter().map(String::as_str).collect();
    drop.extend(["kkk(0)", "kkk(1)", "kkk(2)"]);
    let mut set = topb3().without(&drop);
    set.push_named("S", [Uniform; 3]).expect("catalog state");
    set
}

/// Normalized projector onto the 8-dimensional complement of [`upb3`].
pub fn rho3_8() -> Operator {
    complement_state(&upb3()).expect("UPB is orthogonal")
}

/// Four mutually orthogonal states, each product across A|BC and orthogonal
/// to every member of [`upb3`]:
/// `ψ(0,0)_2 − ψ(0,0)_4`, `ψ(0,0)_5 − ψ(0,0)_6`, `4|000⟩ − ψ(0,0)_1`,
/// `4|222⟩ − ψ(0,0)_3`.
pub fn biseparable_quad3() -> Vec<StateVector> {
    let basis = topb3();
    let get = |label: &str| basis.member(label).expect("catalog label").state.clone();
    let four = C64::new(4.0, 0.0);
    let psi00 = |l| get(&block_label(l, 0, 0));
    vec![
        psi00(2).sub(&psi00(4)).unwrap(),
        psi00(5).sub(&psi00(6)).unwrap(),
        get("kkk(0)").scaled(four).sub(&psi00(1)).unwrap(),
        get("kkk(2)").scaled(four).sub(&psi00(3)).unwrap(),
    ]
}

/// Label of `|φ_l, φ_m, φ_p⟩`.
pub fn phi_label(l: usize, m: usize, p: usize) -> String {
    format!("phi({l},{m},{p})")
}

/// The 64-member twisted orthogonal product basis of `(C⁴)^⊗3`.
pub fn topb4() -> ProductSet {
    let mut set = ProductSet::new(PartyDims::uniform(4));
    for k in [0, 3] {
        set.push_named(format!("kkk({k})"), [Basis(k); 3]).expect("catalog state");
    }
    for l in 0..2 {
        for m in 0..2 {
            for p in 0..2 {
                set.push_named(phi_label(l, m, p), [Phi(l), Phi(m), Phi(p)])
                    .expect("catalog state");
            }
        }
    }
    push_blocks(&mut set, &BLOCKS4, 3);
    set
}

/// The 56-member UPB of `(C⁴)^⊗3`.
pub fn upb4() -> ProductSet {
    let removed: Vec<String> = (1..=6).map(|l| block_label(l, 0, 0)).collect();
    let phi000 = phi_label(0, 0, 0);
    let mut drop: Vec<&str> = removed.iter().map(String::as_str).collect();
    drop.extend(["kkk(0)", "kkk(3)", phi000.as_str()]);
    let mut set = topb4().without(&drop);
    set.push_named("S", [Uniform; 3]).expect("catalog state");
    set
}

/// Normalized projector onto the 8-dimensional complement of [`upb4`].
pub fn rho4_8() -> Operator {
    complement_state(&upb4()).expect("UPB is orthogonal")
}

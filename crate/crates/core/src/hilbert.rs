//! Tripartite Hilbert-space bookkeeping.
//!
//! Basis states `|p,q,r⟩` of `C^d1 ⊗ C^d2 ⊗ C^d3` are indexed
//! lexicographically with party A slowest: `(p·d2 + q)·d3 + r`. Every matrix
//! in the crate uses this ordering.

use std::{ fmt, str::FromStr };
use num_complex::Complex64 as C64;
use serde::{ Deserialize, Serialize };
use thiserror::Error;
use crate::linalg::{ self, ComplexMatrix, LinalgError, Spectrum };

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HilbertError {
    #[error("local dimension must be at least 2, got {0:?}")]
    BadDims([usize; 3]),

    #[error("unknown local state label '{0}'")]
    UnknownLabel(String),

    #[error("local state {state} is not defined in dimension {dim}")]
    NotInDimension { state: LocalState, dim: usize },

    #[error("expected a local vector of length {expected} for party {party}, got {got}")]
    LocalLength { party: Party, expected: usize, got: usize },

    #[error("expected {expected} amplitudes, got {got}")]
    Length { expected: usize, got: usize },

    #[error("invalid party permutation {0:?}")]
    BadPermutation([usize; 3]),

    #[error("unknown party '{0}'")]
    UnknownParty(String),

    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

pub type HilbertResult<T> = Result<T, HilbertError>;

/* Parties and cuts ***********************************************************/

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Party { A, B, C }

impl Party {
    pub const ALL: [Party; 3] = [Party::A, Party::B, Party::C];

    pub fn index(self) -> usize {
        match self {
            Party::A => 0,
            Party::B => 1,
            Party::C => 2,
        }
    }

    pub fn from_index(k: usize) -> Option<Self> {
        Self::ALL.get(k).copied()
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Party::A => "A",
            Party::B => "B",
            Party::C => "C",
        };
        f.write_str(s)
    }
}

impl FromStr for Party {
    type Err = HilbertError;

    fn from_str(s: &str) -> HilbertResult<Self> {
        match s.trim() {
            "A" | "a" => Ok(Party::A),
            "B" | "b" => Ok(Party::B),
            "C" | "c" => Ok(Party::C),
            other => Err(HilbertError::UnknownParty(other.to_string())),
        }
    }
}

/// One-versus-two bipartition of the three parties.
#[allow(non_camel_case_types)]
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Cut { A_BC, B_CA, C_AB }

impl Cut {
    /// Always in this order in reports.
    pub const ALL: [Cut; 3] = [Cut::A_BC, Cut::B_CA, Cut::C_AB];

    /// The party standing alone on one side of the cut.
    pub fn singleton(self) -> Party {
        match self {
            Cut::A_BC => Party::A,
            Cut::B_CA => Party::B,
            Cut::C_AB => Party::C,
        }
    }

    pub fn of(party: Party) -> Self {
        match party {
            Party::A => Cut::A_BC,
            Party::B => Cut::B_CA,
            Party::C => Cut::C_AB,
        }
    }

    /// Permutation that moves the singleton party to the first slot while
    /// keeping the cyclic order of the other two.
    pub fn flattening(self) -> PartyPermutation {
        match self {
            Cut::A_BC => PartyPermutation::identity(),
            Cut::B_CA => PartyPermutation { to: [2, 0, 1] },
            Cut::C_AB => PartyPermutation { to: [1, 2, 0] },
        }
    }

    pub fn key(self) -> &'static str {
        match self {
            Cut::A_BC => "A_BC",
            Cut::B_CA => "B_CA",
            Cut::C_AB => "C_AB",
        }
    }
}

impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Cut::A_BC => "A|BC",
            Cut::B_CA => "B|CA",
            Cut::C_AB => "C|AB",
        };
        f.write_str(s)
    }
}

/// Local dimensions of parties A, B, C.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct PartyDims([usize; 3]);

impl PartyDims {
    pub fn new(d1: usize, d2: usize, d3: usize) -> HilbertResult<Self> {
        let d = [d1, d2, d3];
        if d.iter().any(|&x| x < 2) {
            return Err(HilbertError::BadDims(d));
        }
        Ok(Self(d))
    }

    /// `(d, d, d)`; panics for `d < 2`.
    pub fn uniform(d: usize) -> Self {
        Self::new(d, d, d).expect("local dimension must be at least 2")
    }

    pub fn local(&self, party: Party) -> usize { self.0[party.index()] }

    pub fn as_array(&self) -> [usize; 3] { self.0 }

    pub fn total(&self) -> usize { self.0.iter().product() }

    /// Lexicographic index of `|p,q,r⟩`.
    pub fn index(&self, p: usize, q: usize, r: usize) -> usize {
        (p * self.0[1] + q) * self.0[2] + r
    }

    /// Inverse of [`Self::index`].
    pub fn digits(&self, k: usize) -> [usize; 3] {
        let r = k % self.0[2];
        let q = (k / self.0[2]) % self.0[1];
        let p = k / (self.0[1] * self.0[2]);
        [p, q, r]
    }

    fn permuted(&self, perm: &PartyPermutation) -> Self {
        let mut d = [0; 3];
        for k in 0..3 {
            d[perm.to[k]] = self.0[k];
        }
        Self(d)
    }
}

impl fmt::Display for PartyDims {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.0[0], self.0[1], self.0[2])
    }
}

/// Relabeling of party slots: the content of old slot `k` moves to slot
/// `to[k]`.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct PartyPermutation {
    to: [usize; 3],
}

impl PartyPermutation {
    pub fn new(to: [usize; 3]) -> HilbertResult<Self> {
        let mut seen = [false; 3];
        for &t in &to {
            if t > 2 || seen[t] {
                return Err(HilbertError::BadPermutation(to));
            }
            seen[t] = true;
        }
        Ok(Self { to })
    }

    pub fn identity() -> Self { Self { to: [0, 1, 2] } }

    /// `A → B, B → C, C → A`.
    pub fn cyclic() -> Self { Self { to: [1, 2, 0] } }

    pub fn inverse(&self) -> Self {
        let mut to = [0; 3];
        for k in 0..3 {
            to[self.to[k]] = k;
        }
        Self { to }
    }

    pub fn then(&self, next: &Self) -> Self {
        Self { to: self.to.map(|k| next.to[k]) }
    }

    pub fn image(&self, party: Party) -> Party {
        Party::from_index(self.to[party.index()]).unwrap()
    }

    fn apply_digits(&self, p: [usize; 3]) -> [usize; 3] {
        let mut n = [0; 3];
        for k in 0..3 {
            n[self.to[k]] = p[k];
        }
        n
    }
}

/* Local states ***************************************************************/

/// Named local kets. Vectors are stored unnormalized exactly as written,
/// except `|±⟩` which carry their `1/√2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum LocalState {
    /// Computational basis `|k⟩`.
    Basis(usize),
    /// `(|0⟩ + |1⟩)/√2`
    Plus,
    /// `(|0⟩ − |1⟩)/√2`
    Minus,
    /// d = 3: `|0⟩ + (−1)^i |1⟩`; d = 4: orthogonal triple in span{0, 1, 2}.
    Eta(usize),
    /// d = 3: `|1⟩ + (−1)^j |2⟩`; d = 4: orthogonal triple in span{1, 2, 3}.
    Xi(usize),
    /// d = 4: `|1⟩ ± |2⟩`.
    Phi(usize),
    /// `|0⟩ + |1⟩ + … + |d−1⟩`.
    Uniform,
}

impl fmt::Display for LocalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LocalState::Basis(k) => write!(f, "{k}"),
            LocalState::Plus => f.write_str("+"),
            LocalState::Minus => f.write_str("-"),
            LocalState::Eta(i) => write!(f, "eta{i}"),
            LocalState::Xi(j) => write!(f, "xi{j}"),
            LocalState::Phi(l) => write!(f, "phi{l}"),
            LocalState::Uniform => f.write_str("S"),
        }
    }
}

impl FromStr for LocalState {
    type Err = HilbertError;

    fn from_str(s: &str) -> HilbertResult<Self> {
        let bad = || HilbertError::UnknownLabel(s.to_string());
        let idx = |rest: &str| rest.parse::<usize>().map_err(|_| bad());
        match s {
            "+" => Ok(LocalState::Plus),
            "-" => Ok(LocalState::Minus),
            "S" | "uniform" => Ok(LocalState::Uniform),
            _ if s.starts_with("eta") => Ok(LocalState::Eta(idx(&s[3..])?)),
            _ if s.starts_with("xi") => Ok(LocalState::Xi(idx(&s[2..])?)),
            _ if s.starts_with("phi") => Ok(LocalState::Phi(idx(&s[3..])?)),
            _ => Ok(LocalState::Basis(idx(s)?)),
        }
    }
}

/// The local vector for `state` in dimension `dim`.
pub fn ket(state: LocalState, dim: usize) -> HilbertResult<Vec<C64>> {
    let missing = || HilbertError::NotInDimension { state, dim };
    let int = |xs: &[f64]| -> Vec<C64> {
        let mut v = linalg::real_vector(xs);
        v.resize(dim, C64::new(0.0, 0.0));
        v
    };
    if dim < 2 {
        return Err(missing());
    }
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let v = match (state, dim) {
        (LocalState::Basis(k), _) if k < dim => {
            let mut v = vec![C64::new(0.0, 0.0); dim];
            v[k] = C64::new(1.0, 0.0);
            v
        },
        (LocalState::Plus, _) => int(&[h, h]),
        (LocalState::Minus, _) => int(&[h, -h]),
        (LocalState::Uniform, _) => vec![C64::new(1.0, 0.0); dim],
        (LocalState::Eta(0), 3) => int(&[1.0, 1.0]),
        (LocalState::Eta(1), 3) => int(&[1.0, -1.0]),
        (LocalState::Xi(0), 3) => int(&[0.0, 1.0, 1.0]),
        (LocalState::Xi(1), 3) => int(&[0.0, 1.0, -1.0]),
        (LocalState::Eta(0), 4) => int(&[1.0, 1.0, 1.0]),
        (LocalState::Eta(1), 4) => int(&[1.0, -1.0]),
        (LocalState::Eta(2), 4) => int(&[1.0, 1.0, -2.0]),
        (LocalState::Xi(0), 4) => int(&[0.0, 1.0, 1.0, 1.0]),
        (LocalState::Xi(1), 4) => int(&[0.0, 1.0, -1.0]),
        (LocalState::Xi(2), 4) => int(&[0.0, 1.0, 1.0, -2.0]),
        (LocalState::Phi(0), 4) => int(&[0.0, 1.0, 1.0]),
        (LocalState::Phi(1), 4) => int(&[0.0, 1.0, -1.0]),
        _ => return Err(missing()),
    };
    Ok(v)
}

/// Parse a label and build its local vector.
pub fn ket_label(label: &str, dim: usize) -> HilbertResult<Vec<C64>> {
    ket(label.parse()?, dim)
}

/* States and operators *******************************************************/

/// Amplitude vector over the lexicographic tripartite basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    dims: PartyDims,
    amps: Vec<C64>,
}

impl StateVector {
    pub fn new(dims: PartyDims, amps: Vec<C64>) -> HilbertResult<Self> {
        if amps.len() != dims.total() {
            return Err(HilbertError::Length { expected: dims.total(), got: amps.len() });
        }
        Ok(Self { dims, amps })
    }

    /// `|p,q,r⟩`.
    pub fn basis(dims: PartyDims, p: usize, q: usize, r: usize) -> Self {
        let mut amps = vec![C64::new(0.0, 0.0); dims.total()];
        amps[dims.index(p, q, r)] = C64::new(1.0, 0.0);
        Self { dims, amps }
    }

    pub fn dims(&self) -> PartyDims { self.dims }

    pub fn amplitudes(&self) -> &[C64] { &self.amps }

    pub fn norm(&self) -> f64 { linalg::norm(&self.amps) }

    /// The normalized ray representative.
    pub fn normalized(&self) -> Self {
        Self { dims: self.dims, amps: linalg::normalized(&self.amps) }
    }

    pub fn inner(&self, other: &Self) -> C64 { linalg::inner(&self.amps, &other.amps) }

    pub fn scaled(&self, s: C64) -> Self {
        Self { dims: self.dims, amps: self.amps.iter().map(|z| z * s).collect() }
    }

    pub fn sub(&self, other: &Self) -> HilbertResult<Self> {
        if self.dims != other.dims {
            return Err(HilbertError::Length { expected: self.amps.len(), got: other.amps.len() });
        }
        Ok(Self {
            dims: self.dims,
            amps: self.amps.iter().zip(&other.amps).map(|(a, b)| a - b).collect(),
        })
    }

    /// Coefficients reshaped to `d_single × d_pair` across `cut`, row-major.
    pub fn cut_coefficients(&self, cut: Cut) -> (usize, usize, Vec<C64>) {
        let perm = cut.flattening();
        let nd = self.dims.permuted(&perm);
        let mut out = vec![C64::new(0.0, 0.0); self.amps.len()];
        for (k, &a) in self.amps.iter().enumerate() {
            let n = perm.apply_digits(self.dims.digits(k));
            out[nd.index(n[0], n[1], n[2])] = a;
        }
        let rows = nd.as_array()[0];
        (rows, out.len() / rows, out)
    }

    /// Number of Schmidt coefficients above `tol_rel` times the largest.
    pub fn schmidt_rank(&self, cut: Cut, tol_rel: f64) -> HilbertResult<usize> {
        let (rows, cols, m) = self.cut_coefficients(cut);
        // Gram matrix M M† of the rows
        let gram = ComplexMatrix::from_fn(rows, |i, j| {
            (0..cols).map(|k| m[i * cols + k] * m[j * cols + k].conj()).sum()
        });
        let spec = linalg::eig_hermitian(&gram)?;
        let sv: Vec<f64> = spec.values.iter().map(|l| l.max(0.0).sqrt()).collect();
        let top = sv.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            return Ok(0);
        }
        Ok(sv.iter().filter(|&&s| s > tol_rel * top).count())
    }
}

/// `|a⟩ ⊗ |b⟩ ⊗ |c⟩`.
pub fn tensor3(a: &[C64], b: &[C64], c: &[C64], dims: PartyDims) -> HilbertResult<StateVector> {
    for (party, v) in Party::ALL.into_iter().zip([a, b, c]) {
        if v.len() != dims.local(party) {
            return Err(HilbertError::LocalLength {
                party,
                expected: dims.local(party),
                got: v.len(),
            });
        }
    }
    let mut amps = Vec::with_capacity(dims.total());
    for x in a {
        for y in b {
            for z in c {
                amps.push(x * y * z);
            }
        }
    }
    Ok(StateVector { dims, amps })
}

/// Dense operator on a tripartite space.
#[derive(Clone, Debug, PartialEq)]
pub struct Operator {
    dims: PartyDims,
    matrix: ComplexMatrix,
}

impl Operator {
    pub fn new(dims: PartyDims, matrix: ComplexMatrix) -> HilbertResult<Self> {
        if matrix.dim() != dims.total() {
            return Err(HilbertError::Length { expected: dims.total(), got: matrix.dim() });
        }
        Ok(Self { dims, matrix })
    }

    /// `I / dim`.
    pub fn maximally_mixed(dims: PartyDims) -> Self {
        let n = dims.total();
        Self { dims, matrix: ComplexMatrix::identity(n).scale(1.0 / n as f64) }
    }

    /// `|ψ⟩⟨ψ|` for the vector as given (no normalization).
    pub fn projector(psi: &StateVector) -> Self {
        Self { dims: psi.dims, matrix: ComplexMatrix::projector(&psi.amps) }
    }

    pub fn dims(&self) -> PartyDims { self.dims }

    pub fn matrix(&self) -> &ComplexMatrix { &self.matrix }

    pub fn into_matrix(self) -> ComplexMatrix { self.matrix }

    pub fn trace(&self) -> f64 { self.matrix.trace().re }

    pub fn scale(&self, s: f64) -> Self {
        Self { dims: self.dims, matrix: self.matrix.scale(s) }
    }

    /// Entrywise linear combination `Σ c_i O_i`; all operands share dims.
    pub fn combine(terms: &[(f64, &Operator)]) -> Self {
        let (_, first) = terms[0];
        let mut m = ComplexMatrix::zeros(first.matrix.dim());
        for (c, op) in terms {
            assert_eq!(op.dims, first.dims, "operator dims mismatch");
            m = &m + &op.matrix.scale(*c);
        }
        Self { dims: first.dims, matrix: m }
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.dims != other.dims {
            return f64::INFINITY;
        }
        self.matrix.max_abs_diff(&other.matrix)
    }

    pub fn spectrum(&self) -> HilbertResult<Spectrum> {
        Ok(linalg::eig_hermitian(&self.matrix)?)
    }

    /// `‖O ψ‖`.
    pub fn apply_norm(&self, psi: &StateVector) -> HilbertResult<f64> {
        Ok(linalg::norm(&self.matrix.apply(psi.amplitudes())?))
    }

    /// Transpose the indices of one party: for row `(p,q,r)` and column
    /// `(p′,q′,r′)`, transposing A exchanges `p ↔ p′`.
    pub fn partial_transpose(&self, party: Party) -> Self {
        let n = self.dims.total();
        let k = party.index();
        let m = &self.matrix;
        let matrix = ComplexMatrix::from_fn(n, |row, col| {
            let mut r = self.dims.digits(row);
            let mut c = self.dims.digits(col);
            std::mem::swap(&mut r[k], &mut c[k]);
            m[(self.dims.index(r[0], r[1], r[2]), self.dims.index(c[0], c[1], c[2]))]
        });
        Self { dims: self.dims, matrix }
    }

    /// Relabel party slots; the content of old slot `k` moves to
    /// `perm.image(k)`.
    pub fn permute_parties(&self, perm: &PartyPermutation) -> Self {
        let n = self.dims.total();
        let nd = self.dims.permuted(perm);
        let map: Vec<usize> = (0..n)
            .map(|k| {
                let d = perm.apply_digits(self.dims.digits(k));
                nd.index(d[0], d[1], d[2])
            })
            .collect();
        let mut matrix = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                matrix[(map[i], map[j])] = self.matrix[(i, j)];
            }
        }
        Self { dims: nd, matrix }
    }

    /// Bipartite view with the singleton party of `cut` as the first factor.
    pub fn flatten_cut(&self, cut: Cut) -> BipartiteOperator {
        let op = self.permute_parties(&cut.flattening());
        let d = op.dims.as_array();
        BipartiteOperator {
            cut,
            dims: self.dims,
            d_single: d[0],
            d_pair: d[1] * d[2],
            matrix: op.matrix,
        }
    }

    /// `true` if trace 1 and smallest eigenvalue at least `-tol`, both within
    /// `tol`.
    pub fn is_density(&self, tol: f64) -> HilbertResult<bool> {
        if !self.matrix.is_hermitian(tol) || (self.trace() - 1.0).abs() > tol {
            return Ok(false);
        }
        Ok(self.spectrum()?.min() >= -tol)
    }
}

/// An operator on `C^d_single ⊗ C^d_pair` obtained from a tripartite one by
/// moving the singleton party of a cut to the front.
#[derive(Clone, Debug, PartialEq)]
pub struct BipartiteOperator {
    pub cut: Cut,
    /// Dims of the tripartite operator this view came from.
    pub dims: PartyDims,
    pub d_single: usize,
    pub d_pair: usize,
    pub matrix: ComplexMatrix,
}

impl BipartiteOperator {
    /// Transpose the first tensor factor.
    pub fn partial_transpose_first(&self) -> Self {
        let dp = self.d_pair;
        let n = self.matrix.dim();
        let m = &self.matrix;
        let matrix = ComplexMatrix::from_fn(n, |row, col| {
            let (a, x) = (row / dp, row % dp);
            let (b, y) = (col / dp, col % dp);
            m[(b * dp + x, a * dp + y)]
        });
        Self { matrix, ..self.clone() }
    }

    /// Back to the original party ordering.
    pub fn unflatten(&self) -> Operator {
        let perm = self.cut.flattening();
        let flat_dims = self.dims.permuted(&perm);
        Operator { dims: flat_dims, matrix: self.matrix.clone() }.permute_parties(&perm.inverse())
    }
}

//! Numerics for tripartite state-space structure: partial transposes on the
//! three one-versus-two cuts, unextendible product bases, a three-qubit
//! family that is PPT on every cut, and a range check that can prove such
//! states are not biseparable.
//!
//! The guide in `book/` walks through each piece with runnable snippets.

pub mod catalog;
pub mod family;
pub mod hilbert;
pub mod linalg;
pub mod ppt;
pub mod range;
pub mod report;
pub mod statefile;
pub mod upb;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub mod introduction {}
    #[doc = include_str!("../../../book/src/partial-transpose.md")]
    pub mod partial_transpose {}
    #[doc = include_str!("../../../book/src/upb.md")]
    pub mod upb {}
    #[doc = include_str!("../../../book/src/three-qubit-family.md")]
    pub mod three_qubit_family {}
    #[doc = include_str!("../../../book/src/range-criterion.md")]
    pub mod range_criterion {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}

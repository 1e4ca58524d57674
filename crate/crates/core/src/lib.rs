//! Exact algorithms for cocycles over skew-product extensions of subshifts
//! of finite type.
//!
//! The base system is a two-sided subshift of finite type given by a 0/1
//! transition matrix. A one-symbol function `psi` into a covering group
//! (finite, or free abelian `Z^d`) defines the skew product
//! `(x, g) -> (shift x, psi(x_0) g)`. For a locally constant cocycle `f`
//! whose Birkhoff sums vanish on every periodic orbit that lifts closed, the
//! solvers in this crate produce a transfer function `u` and a homomorphism
//! `alpha` with `f(x) = u(shift x) - u(x) + alpha(psi(x))`, or a concrete
//! periodic orbit that refutes the hypothesis.
//!
//! Everything abelian is done in exact rational arithmetic. Matrix-valued
//! cocycles (the non-abelian variant) use `f64` with explicit tolerances.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod abelian;
pub mod cocycle;
mod error;
pub mod graph;
pub mod group;
pub mod lattice;
pub mod linalg;
pub mod matrix;
pub mod nonabelian;
pub mod oracle;
pub mod random;
pub mod sft;
pub mod skew;
mod word;

pub use error::{Error, Result};
pub use word::Word;

/// Exact rational numbers used by every abelian computation.
pub type Rational = num_rational::BigRational;

/// Desk-scale caps shared by every enumeration in the crate.
///
/// All of the interesting algorithms here are exponential in some parameter
/// (period, alphabet, group order), so every entry point checks its input
/// against these caps and fails with [`Error::RangeTooLarge`] instead of
/// running away.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Longest period enumerated by orbit and vanishing checks.
    pub max_period: usize,
    /// Largest alphabet accepted by the orbit enumerator.
    pub max_alphabet: usize,
    /// Largest vertex count of a block graph or product graph.
    pub max_states: usize,
    /// Cayley tables up to this order are checked for associativity exhaustively.
    pub max_verified_order: usize,
    /// Largest permutation group closure.
    pub max_group_order: usize,
    /// Largest number of orbits any single enumeration may produce.
    pub max_orbits: u64,
    /// Longest period searched for a canonical violation witness before a
    /// solver falls back to the cycle it found itself.
    pub witness_search_period: usize,
    /// Probe depth for `Z^d` transitivity evidence.
    pub probe_depth: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_period: 16,
            max_alphabet: 8,
            max_states: 4096,
            max_verified_order: 128,
            max_group_order: 10_000,
            max_orbits: 2_000_000,
            witness_search_period: 8,
            probe_depth: 12,
        }
    }
}

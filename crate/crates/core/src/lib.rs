//! Mutually unbiased bases in square dimensions `d = s²`.
//!
//! The pipeline: build mutually orthogonal Latin squares ([`latin`]) over
//! finite fields ([`galois`]), turn them into a `(k, s)`-net of incidence
//! vectors ([`net`]), and embed the rows of a generalized Hadamard matrix
//! ([`hadamard`]) along each incidence vector ([`mub`]). Every artifact is
//! verified with exact arithmetic in cyclotomic integers ([`cyclotomic`]);
//! a floating-point verifier serves as an independent oracle. [`plan`]
//! compares achievable basis counts across decompositions of a dimension.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod arith;
pub mod cyclotomic;
pub mod galois;
pub mod hadamard;
pub mod latin;
pub mod mub;
pub mod net;
pub mod plan;

pub use cyclotomic::{cyclo_poly, Cyclotomic, IntPolynomial, ZeroTest};
pub use galois::{GFElem, GField};
pub use hadamard::GenHadamard;
pub use latin::{LatinSquare, MolsSet};
pub use mub::{MubBasis, MubSet, MubVector, VerifyMode};
pub use net::{IncidenceVector, Net};
pub use plan::{plan, Plan};

/// Tolerance used by every floating-point comparison.
pub const FLOAT_TOL: f64 = 1e-9;

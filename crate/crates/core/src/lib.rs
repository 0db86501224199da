//! Discrete least-squares polynomial approximation on deterministic Weil
//! collocation grids.
//!
//! The grid for a prime `M` and dimension `d` is
//! `y_j = cos(2π (j, j², …, j^d) / M)` for `j = 0..=⌊M/2⌋`. Exponential-sum
//! bounds for polynomial phases make the discrete Gram matrix of a tensor
//! Chebyshev basis diagonally dominant once `M` grows quadratically with the
//! dimension of the polynomial space, which this crate both exploits
//! ([`lstsq`]) and checks numerically ([`diagnostics`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and parallel study drivers live in the `weilfit-cli` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod diagnostics;
mod error;
pub mod indexsets;
pub mod linalg;
pub mod lstsq;
pub mod pointgen;
pub mod polybasis;
pub mod primes;
pub mod quadrature;
pub mod rng;
pub mod study;
pub mod targets;

pub use error::{Error, Result};
pub use indexsets::{IndexKind, IndexSet, MultiIndex};
pub use lstsq::{ConditionReport, FitResult, WeightScheme};
pub use pointgen::{BoxRegion, Measure, Provenance, SampleSet, WeilGrid};
pub use polybasis::{BasisSpec, Family, Normalization};

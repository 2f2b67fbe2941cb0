//! Exact combinatorics of torus-equivariant sheaves on projective space.
//!
//! Rank-2 reflexive sheaves are described by one filtration per ray
//! ([`reflexive_r2`]); torsion-free sheaves by families of multifiltrations
//! ([`multifilt`]). Chern polynomials live in truncated rings
//! ([`chern_ring`]) and are computed by several independent formulas
//! ([`chern_engine`]).

pub mod chern_engine;
pub mod chern_ring;
pub mod comb;
pub mod doc;
pub mod error;
pub mod fan;
pub mod multifilt;
pub mod prescribe;
pub mod obstruct;
pub mod reflexive_r2;
pub mod sample;
pub mod scalar;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use chern_ring::{parse_poly, TruncPoly};
pub use error::{Error, Result};
pub use fan::{Cone, Fan};
pub use multifilt::subspace::Subspace;
pub use multifilt::{Multifiltration, Sub};

/// Chern polynomials with integer coefficients.
pub type TruncIntPoly = TruncPoly<BigInt>;
/// Formal logarithms and other rational-coefficient truncated polynomials.
pub type TruncRatPoly = TruncPoly<BigRational>;

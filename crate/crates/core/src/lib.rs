//! Explicit genus theory of quadratic orders.
//!
//! The crate covers proper ideals of a (possibly non-maximal) quadratic order
//! `O_f`, its narrow and wide class groups through binary quadratic forms,
//! genus characters attached to reciprocal pairs of fundamental divisors, the
//! genus numbers in both senses, type numbers of `M_2(K)`, and three
//! independent engines for the Dirichlet coefficients of the genus-character
//! L-series of `O_f`.

pub mod arith;
pub mod classgroup;
pub mod error;
pub mod ideals;
pub mod lseries;
pub mod order;
pub mod typenumbers;

pub use error::{Error, Result};
pub use classgroup::{BinaryQuadraticForm, NarrowClassGroup, WideClassGroup};
pub use ideals::{LatticeHNF, ProperIdeal};
pub use order::{GenusCharacter, QuadraticOrder};

//! Exact, certificate-producing computations around canonical heights on
//! elliptic curves, Mordell-Weil lattices, degree bookkeeping for abelian
//! varieties, Euclidean packing arguments, covering procedures and the
//! explicit-constant point count built from them.
//!
//! Every quantity that feeds a bound is computed in exact integer or
//! rational arithmetic. Heights and Gram entries are floating point with an
//! explicit error radius.

pub mod counting;
pub mod cover;
pub mod degree;
pub mod error;
pub mod heights;
pub mod intmat;
pub mod lattice;
pub mod packing;
pub mod rational;

pub use error::{Error, Result};

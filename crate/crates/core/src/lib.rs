//! Exact computations with Khovanov arc algebras `H^m_n`, their extended
//! quasi-hereditary covers `K^m_n`, their module categories and the
//! functors between them.

pub mod combinatorics;
pub mod error;
pub mod field;
pub mod klpoly;
pub mod linalg;
pub mod surgery;
pub mod algebra;
pub mod repcat;
pub mod functors;
pub mod faithcheck;
pub mod verify;

pub use combinatorics::{CupDiagram, Partition, PairSign, Symbol, Weight};
pub use error::{ArcError, Result};
pub use field::{Field, Fp, Rational, F2, F3, F5, F7, FMersenne61};

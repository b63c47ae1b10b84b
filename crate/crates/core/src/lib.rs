//! Finite commutative ternary Γ-semirings and the codes built from them.
//!
//! Structures are explicit operation tables. Everything downstream (ideal
//! lattices, quotients, codes, syndrome decoding, claim checks) works by
//! exhaustive enumeration under configurable [`Bounds`].

pub mod axioms;
pub mod bounds;
pub mod claims;
pub mod code;
pub mod decoder;
pub mod elem;
pub mod error;
pub mod fixtures;
pub mod ideal;
pub mod lattice;
pub mod quotient;
pub mod tgs;

pub use axioms::{check_axioms, is_valid, AxiomReport};
pub use bounds::Bounds;
pub use code::{Code, Morphism, Word};
pub use decoder::{CosetTable, DecodeResult, DecodeStatus};
pub use elem::{Elem, ElemSet};
pub use error::{Result, TgsError};
pub use ideal::{IdealMode, KIdeal};
pub use lattice::IdealLattice;
pub use quotient::QuotientTgs;
pub use tgs::{Tgs, TgsDocument};

//! Cayley graphs over finite abelian groups and binary finite fields.
//!
//! Connection sets come from generalized difference sets, explicit algebraic
//! constructions, or exhaustive search. Spectra are computed exactly from
//! character sums and cross-checked against a dense eigensolver; the
//! certifiers decide connectivity, bipartiteness, strong regularity and the
//! Ramanujan property.

pub mod cayley;
pub mod constructions;
pub mod error;
pub mod gf2m;
pub mod group;
pub mod groupring;
pub mod searcher;
pub mod spectral;

pub use error::{Error, Result};
pub use group::{AbelianGroup, CharacterIndex, GroupElement};

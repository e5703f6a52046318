//! Hypersubstitutions, derived algebras and derived varieties over
//! finite-type term algebras.
//!
//! The crate decides equational questions exactly, at desk scale:
//!
//! * [`term`] — signatures of arbitrary finite type, term parsing and
//!   printing, variable analysis, leftmost/rightmost classification.
//! * [`hypersub`] — hypersubstitutions, their extension to all terms,
//!   derived identities, equivalence modulo a variety, enumeration of
//!   representatives.
//! * [`algebra`] — finite algebras as operation tables: evaluation,
//!   exhaustive identity checking, derived algebras, congruences,
//!   quotients, isomorphism search.
//! * [`band`] — the decidable equational theory of bands: the free-band
//!   word problem, relatively free algebras, per-variety canonical
//!   forms.
//! * [`lattice`] — free-lattice term comparison, dualization, derived
//!   algebras of finite lattices, fluidity certificates.
//! * [`registry`] — the subvarieties of regular bands as first-class
//!   objects: containment, derived varieties, the dimension invariant,
//!   solid/fluid/prefluid/minimal classification.

pub mod algebra;
pub mod band;
mod error;
pub mod hypersub;
pub mod lattice;
pub mod registry;
pub mod term;

pub use error::{Error, Result};

//! Set shaping over type classes.
//!
//! A shaping transform maps each string of length `N` over an `m`-symbol
//! alphabet to a string of length `N + K`, choosing its images among the
//! lowest empirical-information strings of the longer length. This crate
//! provides:
//!
//! - [`model`]: alphabets, sources, strings and information measures;
//! - [`index`]: exact ranking of strings under the canonical
//!   information-then-lexicographic order, via type-class tables;
//! - [`shaping`]: the transform, its inverse and shaped-set membership;
//! - [`analysis`]: exact average information of shaped sets;
//! - [`codec`]: an adaptive order-0 arithmetic coder and a raw-versus-shaped
//!   code length benchmark;
//! - [`testability`]: error injection and detection-rate experiments.

pub mod analysis;
pub mod codec;
pub mod error;
pub mod index;
pub mod model;
pub mod sampling;
pub mod shaping;
pub mod testability;

pub use error::{Result, SstError};
pub use index::{BigRank, ClassTable, TableCache};
pub use model::{Alphabet, Composition, InfoBits, SourceEnsemble, Symbol, SymbolString};
pub use shaping::{Shaper, ShapingParams};

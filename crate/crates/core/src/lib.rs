//! Exact census of reciprocal geodesics on the modular surface.
//!
//! A reciprocal geodesic of word length `4t` is coded by a sign tuple
//! `(e_1, ..., e_t)` up to global negation, and its cusp excursions of depth
//! greater than `D` are the runs of equal signs longer than `D`. Counting
//! geodesics therefore reduces to counting integer compositions of `t` by the
//! number of parts exceeding `D`.
//!
//! * [`words`] handles the group-theoretic side: normal forms in `Z2 * Z3`,
//!   reduction and conjugacy canonicalization.
//! * [`matrices`] evaluates words in `PSL(2, Z)`.
//! * [`compositions`] holds the exact counting engine.
//! * [`spectral`] certifies the growth constant `alpha_D` and the closed forms
//!   and bounds derived from it.
//! * [`census`] ties the pieces together into censuses and verification
//!   reports.

pub mod census;
pub mod compositions;
mod error;
pub mod interval;
pub mod matrices;
pub mod spectral;
pub mod words;

pub use compositions::{BigCount, Composition};
pub use error::{Error, Result};
pub use words::{EpsilonSeq, GroupWord, ProjectiveEpsilonSeq, ReciprocalNormalForm, Sign, Syllable};

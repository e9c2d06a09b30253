//! Exact tools for cross-intersecting set families over `[n] = {1, .., n}`.
//!
//! Sets are bit words ([`SetWord`]), families are canonical sorted word lists
//! ([`SetFamily`]). On top of these sit the element-pair compressions, downset
//! catalogues, a replay of the slice-and-alter argument for compressed
//! cross-intersecting pairs, and exact searches for the largest product
//! `|A||B|` (or `Π|A_i|`) over cross-intersecting subfamilies of a ground.

pub mod compression;
mod error;
pub mod family;
pub mod ground;
pub mod hereditary;
pub mod io;
pub mod prooflab;
pub mod search;
mod word;

pub use error::FamilyError;
pub use family::SetFamily;
pub use ground::{GroundKind, GroundSpec};
pub use word::{SetWord, MAX_GROUND};

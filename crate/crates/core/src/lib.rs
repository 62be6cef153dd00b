//! Z/2 intersection homology of stratified simplicial pseudomanifolds, intersection
//! pairings via dual blocks, and the long exact sequence of a cone on a link.

pub mod cli;
pub mod complex;
pub mod error;
pub mod format;
pub mod gf2;
pub mod ih;
pub mod models;
pub mod pairing;
pub mod sequences;
pub mod strata;

pub use error::{Error, Result};

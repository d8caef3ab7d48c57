//! Irregular conformal blocks: exact construction of rank-r and ramified
//! irregular vertex operators, block expansions and Painlevé tau functions.

pub mod blocks;
pub mod coeffring;
pub mod error;
pub mod exec;
pub mod fixtures;
pub mod numeric;
pub mod painleve;
pub mod ramified;
pub mod rank_r;
pub mod solve;
pub mod virasoro;

pub use error::{Error, Result};

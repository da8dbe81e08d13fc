//! Exact real-root analysis for polynomial systems supported on simplices,
//! circuits and near circuits.

pub mod bounds;
pub mod commands;
pub mod eliminant;
pub mod error;
pub mod json;
pub mod lattice;
pub mod numeric;
pub mod realroots;
pub mod supports;
pub mod systems;
pub mod viro;

pub use error::{Error, Result};

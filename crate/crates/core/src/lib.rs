//! Profunctors between posets, their graphs and ascents, and the associated
//! Alexander-dual squarefree ideals.

pub mod bits;
pub mod dlattice;
pub mod error;
pub mod formats;
pub mod ideals;
pub mod natcut;
pub mod natpro;
pub mod poset;
pub mod cut_engine;
pub mod profunctor;
pub mod sweep;

pub use error::{Error, Result};

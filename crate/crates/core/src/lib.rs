//! Ihara zeta functions of graphs, voltage graph bundles, and towers of
//! finite coverings converging to infinite graphs.

pub mod dihedral;
pub mod error;
pub mod graph;
pub mod io;
pub mod quadrature;
pub mod towers;
pub mod voltage;
pub mod zeta;

pub use error::{Error, Result};

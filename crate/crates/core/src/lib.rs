//! Verification engine for the k-Galilei quantum group: its Hopf structure,
//! projective multiplier, unitary representations, the contraction from
//! κ-Poincaré and the central-extension obstruction.

pub mod cli;
pub mod contraction;
pub mod error;
pub mod hopf;
pub mod multiplier;
pub mod ncpoly;
pub mod nogo;
pub mod replab;
pub mod report;
pub mod scalars;

pub use error::{Error, Result};

//! Posets of graded pre-Nichols algebras of diagonal type with finite
//! Gelfand–Kirillov dimension, via subsets of `Ô₊^q` closed by sums.

pub mod braiding;
pub mod cli;
pub mod closedsets;
pub mod envalg;
pub mod error;
pub mod hilbert;
pub mod lattice;
pub mod prenichols;
pub mod rootsys;
pub mod scalars;

pub use error::{Error, Result};

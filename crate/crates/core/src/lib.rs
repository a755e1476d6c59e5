//! Exact computer algebra for polylogarithms indexed by rational
//! noncommutative series.

pub mod checks;
pub mod cli;
pub mod error;
pub mod lifun;
pub mod ncpoly;
pub mod neglog;
pub mod polyzeta;
pub mod rational;
pub mod ratl;
pub mod starpoly;
pub mod words;

pub use error::{Error, Result};
pub use ncpoly::NCPoly;
pub use rational::Q;
pub use words::{Alphabet, Letter, Word};

//! Coherent lower previsions on finite spaces, exchangeability, and the
//! finite and countable representation theorems, in exact rational arithmetic.

pub mod bernstein;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod exchangeability;
pub mod extension;
pub mod lp;
pub mod prevision;
pub mod rational;
pub mod representation;

pub use error::{Error, Result};
pub use rational::Rational;

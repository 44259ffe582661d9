//! Fibonacci-modulated CMV operators: the trace map and its spectrum,
//! transport bounds for the Fibonacci quantum walk, and Lee–Yang zeros of the
//! Fibonacci Ising ring.

pub mod circle;
pub mod cmv;
pub mod error;
pub mod fib;
pub mod ising;
pub mod trace;
pub mod walk;

pub use error::{Error, Result};

//! Verblunsky coefficients, Szegő transfer matrices, orthogonal polynomials on
//! the unit circle, and CMV matrices.

mod matrix;
mod poly;
mod roots;
mod transfer;
mod verblunsky;

pub use matrix::{cmv_finite, cmv_lm_factors, extended_cmv_window, MatrixWindow};
pub use poly::{paraorthogonal, szego_polynomials, Poly, PolyPair};
pub use roots::{poly_roots, poly_roots_on_circle};
pub use transfer::{
    reversal_norm_pair, solution_norm, solution_sequence, transfer_single, transfer_word,
    Transfer2,
};
pub use verblunsky::{VerblunskyCoeff, VerblunskySequence};

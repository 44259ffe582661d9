use num_complex::Complex64;

use crate::error::{Error, Result};

/// A Verblunsky coefficient `α ∈ 𝔻` together with `ρ = (1 - |α|²)^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerblunskyCoeff {
    alpha: Complex64,
    rho: f64,
}

impl VerblunskyCoeff {
    pub const ZERO: VerblunskyCoeff = VerblunskyCoeff {
        alpha: Complex64 { re: 0.0, im: 0.0 },
        rho: 1.0,
    };

    pub fn new(alpha: Complex64) -> Result<Self> {
        let r = alpha.norm();
        if !(r < 1.0) {
            return Err(Error::OutsideDisc(alpha));
        }
        // (1-r)(1+r) keeps precision when |α| is close to 1
        Ok(VerblunskyCoeff {
            alpha,
            rho: ((1.0 - r) * (1.0 + r)).sqrt(),
        })
    }

    pub fn real(a: f64) -> Result<Self> {
        Self::new(Complex64::new(a, 0.0))
    }

    pub fn alpha(&self) -> Complex64 {
        self.alpha
    }

    pub fn rho(&self) -> f64 {
        self.rho
    }
}

/// Verblunsky coefficients stored over the index range `start..start+len`.
///
/// One-sided sequences start at 0. Two-sided data is always handled as a
/// finite window of the bi-infinite sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct VerblunskySequence {
    start: i64,
    coeffs: Vec<VerblunskyCoeff>,
}

impl VerblunskySequence {
    pub fn one_sided(coeffs: Vec<VerblunskyCoeff>) -> Self {
        VerblunskySequence { start: 0, coeffs }
    }

    pub fn two_sided(start: i64, coeffs: Vec<VerblunskyCoeff>) -> Self {
        VerblunskySequence { start, coeffs }
    }

    pub fn from_alphas(alphas: &[Complex64]) -> Result<Self> {
        let coeffs = alphas
            .iter()
            .map(|&a| VerblunskyCoeff::new(a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::one_sided(coeffs))
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    pub fn end(&self) -> i64 {
        self.start + self.coeffs.len() as i64
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, n: i64) -> Result<VerblunskyCoeff> {
        if n < self.start || n >= self.end() {
            return Err(Error::OutOfRange {
                index: n,
                start: self.start,
                end: self.end(),
            });
        }
        Ok(self.coeffs[(n - self.start) as usize])
    }

    pub fn as_slice(&self) -> &[VerblunskyCoeff] {
        &self.coeffs
    }

    pub fn alphas(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|c| c.alpha()).collect()
    }
}

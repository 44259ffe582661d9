use std::ops::Mul;

use num_complex::Complex64;

use super::verblunsky::VerblunskyCoeff;
use crate::error::{invalid, Result};

/// A 2×2 complex matrix, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transfer2(pub [[Complex64; 2]; 2]);

impl Transfer2 {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Self {
        Transfer2([[a, b], [c, d]])
    }

    pub fn identity() -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Transfer2([[one, zero], [zero, one]])
    }

    pub fn diag(a: Complex64, d: Complex64) -> Self {
        let zero = Complex64::new(0.0, 0.0);
        Transfer2([[a, zero], [zero, d]])
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.0;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> Complex64 {
        self.0[0][0] + self.0[1][1]
    }

    pub fn scale(&self, s: Complex64) -> Self {
        let m = &self.0;
        Transfer2([[m[0][0] * s, m[0][1] * s], [m[1][0] * s, m[1][1] * s]])
    }

    pub fn apply(&self, v: (Complex64, Complex64)) -> (Complex64, Complex64) {
        let m = &self.0;
        (m[0][0] * v.0 + m[0][1] * v.1, m[1][0] * v.0 + m[1][1] * v.1)
    }

    /// Largest singular value, from `σ² = (s ± sqrt(s² - 4|det|²))/2` with
    /// `s` the squared Frobenius norm.
    pub fn norm(&self) -> f64 {
        let s: f64 = self.0.iter().flatten().map(|x| x.norm_sqr()).sum();
        let d = self.det().norm();
        let disc = (s * s - 4.0 * d * d).max(0.0);
        ((s + disc.sqrt()) / 2.0).sqrt()
    }

    pub fn max_abs_diff(&self, other: &Transfer2) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Mul for Transfer2 {
    type Output = Transfer2;

    fn mul(self, rhs: Transfer2) -> Transfer2 {
        let (a, b) = (&self.0, &rhs.0);
        Transfer2([
            [
                a[0][0] * b[0][0] + a[0][1] * b[1][0],
                a[0][0] * b[0][1] + a[0][1] * b[1][1],
            ],
            [
                a[1][0] * b[0][0] + a[1][1] * b[1][0],
                a[1][0] * b[0][1] + a[1][1] * b[1][1],
            ],
        ])
    }
}

/// One Szegő step `ρ⁻¹ (z, -ᾱ; -αz, 1)`; its determinant is `z`.
pub fn transfer_single(z: Complex64, coeff: &VerblunskyCoeff) -> Transfer2 {
    let a = coeff.alpha();
    let r = 1.0 / coeff.rho();
    Transfer2::new(z * r, -a.conj() * r, -a * z * r, Complex64::new(r, 0.0))
}

/// `T(α_ℓ) ⋯ T(α_1)`: later coefficients act on the left.
pub fn transfer_word(z: Complex64, word: &[VerblunskyCoeff]) -> Transfer2 {
    word.iter()
        .fold(Transfer2::identity(), |acc, c| transfer_single(z, c) * acc)
}

/// `(ξ_n, ζ_n) = T_n(z) (ξ_0, ζ_0)` for `n = 0..=steps`.
pub fn solution_sequence(
    z: Complex64,
    word: &[VerblunskyCoeff],
    initial: (Complex64, Complex64),
    steps: usize,
) -> Result<Vec<(Complex64, Complex64)>> {
    if (initial.0.norm() - 1.0).abs() > 1e-12 || (initial.1.norm() - 1.0).abs() > 1e-12 {
        return Err(invalid("initial pair must satisfy |ξ0| = |ζ0| = 1"));
    }
    if word.len() < steps {
        return Err(invalid(format!(
            "{} coefficients cannot drive {steps} steps",
            word.len()
        )));
    }
    let mut out = Vec::with_capacity(steps + 1);
    let mut v = initial;
    out.push(v);
    for c in &word[..steps] {
        v = transfer_single(z, c).apply(v);
        out.push(v);
    }
    Ok(out)
}

/// `‖ξ‖_L² = Σ_{n ≤ ⌊L⌋} |ξ_n|² + (L - ⌊L⌋) |ξ_{⌊L⌋+1}|²`.
pub fn solution_norm(xi: &[Complex64], l: f64) -> Result<f64> {
    if !(l > 0.0) {
        return Err(invalid("L must be positive"));
    }
    let fl = l.floor();
    let n = fl as usize;
    let frac = l - fl;
    let needed = if frac > 0.0 { n + 2 } else { n + 1 };
    if xi.len() < needed {
        return Err(invalid(format!(
            "solution has {} terms, L = {l} needs {needed}",
            xi.len()
        )));
    }
    let mut sum: f64 = xi[..=n].iter().map(|x| x.norm_sqr()).sum();
    if frac > 0.0 {
        sum += frac * xi[n + 1].norm_sqr();
    }
    Ok(sum.sqrt())
}

/// `(‖T(z, w)‖, ‖T(z, w^R)‖)`.
pub fn reversal_norm_pair(z: Complex64, word: &[VerblunskyCoeff]) -> (f64, f64) {
    let reversed: Vec<VerblunskyCoeff> = word.iter().rev().copied().collect();
    (
        transfer_word(z, word).norm(),
        transfer_word(z, &reversed).norm(),
    )
}

use num_complex::Complex64;

use super::verblunsky::VerblunskyCoeff;
use crate::error::{invalid, Result};

/// Dense polynomial with complex coefficients in ascending powers.
#[derive(Clone, Debug, PartialEq)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        Poly { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn one() -> Self {
        Poly::new(vec![Complex64::new(1.0, 0.0)])
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Formal degree: the number of stored coefficients minus one.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        *self.coeffs.last().unwrap_or(&Complex64::new(0.0, 0.0))
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` by Horner's scheme.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let mut p = Complex64::new(0.0, 0.0);
        let mut d = Complex64::new(0.0, 0.0);
        for &c in self.coeffs.iter().rev() {
            d = d * z + p;
            p = p * z + c;
        }
        (p, d)
    }

    /// Coefficients conjugated and written in reverse order.
    pub fn reflected(&self) -> Poly {
        Poly::new(self.coeffs.iter().rev().map(|c| c.conj()).collect())
    }

    pub fn times_z(&self) -> Poly {
        let mut v = Vec::with_capacity(self.coeffs.len() + 1);
        v.push(Complex64::new(0.0, 0.0));
        v.extend_from_slice(&self.coeffs);
        Poly::new(v)
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly::new(
            (0..n)
                .map(|i| {
                    self.coeffs.get(i).copied().unwrap_or(zero)
                        + other.coeffs.get(i).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn norm1(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).sum()
    }
}

/// Monic Szegő polynomial `Φ_n` and its reflection `Φ_n*`.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyPair {
    pub phi: Poly,
    pub phi_star: Poly,
    pub degree: usize,
}

/// Runs `Φ_{k+1} = zΦ_k - ᾱ_k Φ_k*`, `Φ_{k+1}* = Φ_k* - α_k zΦ_k` from
/// `Φ_0 = Φ_0* = 1` using `α_0 .. α_{n-1}`.
pub fn szego_polynomials(alphas: &[VerblunskyCoeff], n: usize) -> Result<PolyPair> {
    if alphas.len() < n {
        return Err(invalid(format!(
            "degree {n} needs {n} coefficients, got {}",
            alphas.len()
        )));
    }
    let mut phi = Poly::one();
    let mut phi_star = Poly::one();
    for c in &alphas[..n] {
        let a = c.alpha();
        let zphi = phi.times_z();
        let next = zphi.add(&phi_star.pad().scale(-a.conj()));
        let next_star = phi_star.pad().add(&zphi.scale(-a));
        phi = next;
        phi_star = next_star;
    }
    Ok(PolyPair {
        phi,
        phi_star,
        degree: n,
    })
}

impl Poly {
    // Φ* keeps the formal degree of Φ even when its top coefficient is 0.
    fn pad(&self) -> Poly {
        let mut v = self.coeffs.clone();
        v.push(Complex64::new(0.0, 0.0));
        Poly::new(v)
    }
}

/// `Ψ_{n+1}(z) = zΦ_n(z) + γΦ_n*(z)` with `|γ| = 1`.
pub fn paraorthogonal(alphas: &[VerblunskyCoeff], n: usize, gamma: Complex64) -> Result<Poly> {
    if (gamma.norm() - 1.0).abs() > 1e-12 {
        return Err(invalid(format!("|γ| must be 1, got {}", gamma.norm())));
    }
    let pair = szego_polynomials(alphas, n)?;
    Ok(pair.phi.times_z().add(&pair.phi_star.scale(gamma)))
}

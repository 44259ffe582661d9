//! One-dimensional Ising rings in complex fugacity and their Lee–Yang zeros.
//!
//! A ring of `L` spins `σ_0 .. σ_{L-1}` carries `L` bonds `(σ_i, σ_{i+1 mod L})`
//! with couplings `J_i`, `ℜ J_i > 0`. With `β_i = exp(2J_i/k_Bτ)` and fugacity
//! `h = exp(2H/k_Bτ)`, the zeros of `Z(h)` in `h` coincide with those of the
//! periodic CMV discriminant built from `α_i = 1/β_i`.
//!
//! On the unit circle `h = e^{iθ}` with `θ ∈ [0, 2π)`, and `√h` always means
//! `e^{iθ/2}`; off the circle the argument is likewise taken in `[0, 2π)`.

use std::cell::Cell;
use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::circle::{
    bisect, golden_max, hausdorff, interlaced, reduce, sign_change_zeros, CircleMeasure,
    CircleZeroSet,
};
use crate::cmv::{paraorthogonal, poly_roots, poly_roots_on_circle, transfer_word, Poly};
use crate::cmv::VerblunskyCoeff;
use crate::error::{invalid, Error, Result};
use crate::fib::{fib_number, Symbol, SubshiftPoint};

/// Largest ring enumerated spin by spin.
pub const BRUTEFORCE_CAP: usize = 20;
/// Agreement required between zero-finding methods and of `|z|` with 1.
pub const ZERO_TOL: f64 = 1e-8;
// allowed |ℑ g| relative to the product of the factor norms
const REALITY_TOL: f64 = 1e-9;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `√h` with the argument of `h` taken in `[0, 2π)`.
pub fn sqrt_fugacity(h: Complex64) -> Complex64 {
    Complex64::from_polar(h.norm().sqrt(), reduce(h.arg()) / 2.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsingRing {
    couplings: Vec<Complex64>,
    tau: f64,
    kb: f64,
    field: Complex64,
}

impl IsingRing {
    /// Zero field, `k_B = 1`.
    pub fn new(couplings: Vec<Complex64>, tau: f64) -> Result<Self> {
        Self::with_constants(couplings, tau, 1.0, c(0.0, 0.0))
    }

    pub fn with_constants(couplings: Vec<Complex64>, tau: f64, kb: f64, field: Complex64) -> Result<Self> {
        if couplings.is_empty() {
            return Err(invalid("a ring needs at least one spin"));
        }
        if !(tau > 0.0 && tau.is_finite()) || !(kb > 0.0 && kb.is_finite()) {
            return Err(invalid(format!("need τ > 0 and k_B > 0, got τ={tau}, k_B={kb}")));
        }
        if let Some(j) = couplings.iter().find(|j| !(j.re > 0.0) || !j.is_finite()) {
            return Err(invalid(format!("coupling {j} must have positive real part")));
        }
        Ok(IsingRing {
            couplings,
            tau,
            kb,
            field,
        })
    }

    pub fn uniform(l: usize, j: f64, tau: f64) -> Result<Self> {
        Self::new(vec![c(j, 0.0); l], tau)
    }

    pub fn len(&self) -> usize {
        self.couplings.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn couplings(&self) -> &[Complex64] {
        &self.couplings
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn kb(&self) -> f64 {
        self.kb
    }

    pub fn field(&self) -> Complex64 {
        self.field
    }

    pub fn is_real(&self) -> bool {
        self.couplings.iter().all(|j| j.im == 0.0)
    }

    /// `h = exp(2H/k_Bτ)` for the stored field.
    pub fn fugacity(&self) -> Complex64 {
        (2.0 * self.field / self.kt()).exp()
    }

    fn kt(&self) -> f64 {
        self.kb * self.tau
    }

    /// `exp(J_i/k_Bτ)`, the square root of `β_i` used in the transfer matrices.
    fn half_betas(&self) -> Vec<Complex64> {
        self.couplings.iter().map(|j| (j / self.kt()).exp()).collect()
    }

    pub fn betas(&self) -> Vec<Complex64> {
        self.couplings.iter().map(|j| (2.0 * j / self.kt()).exp()).collect()
    }

    /// `Θβ`, the Verblunsky coefficients of the ring.
    pub fn verblunsky(&self) -> Result<Vec<VerblunskyCoeff>> {
        theta_inversion(&self.betas())
    }

    /// `-(1/k_Bτ) Σ (J_i σ_i σ_{i+1} + H σ_i)` with `σ_L = σ_0`.
    pub fn energy(&self, spins: &[i8]) -> Result<Complex64> {
        let l = self.len();
        if spins.len() != l {
            return Err(invalid(format!("expected {l} spins, got {}", spins.len())));
        }
        if spins.iter().any(|&s| s != 1 && s != -1) {
            return Err(invalid("spins must be ±1"));
        }
        let mut e = c(0.0, 0.0);
        for i in 0..l {
            let (s, t) = (spins[i] as f64, spins[(i + 1) % l] as f64);
            e += self.couplings[i] * s * t + self.field * s;
        }
        Ok(-e / self.kt())
    }
}

/// `Σ_σ e^{-E(σ)}` over all `2^L` configurations, with the field entering as
/// `(√h)^{Σσ_i}`.
pub fn partition_bruteforce(ring: &IsingRing, h: Complex64) -> Result<Complex64> {
    let s = sqrt_fugacity(h);
    let coeffs = bruteforce_weights(ring)?;
    let l = ring.len() as i32;
    // m up spins give magnetization 2m - L
    Ok(coeffs
        .iter()
        .enumerate()
        .map(|(m, w)| w * s.powi(2 * m as i32 - l))
        .sum())
}

/// `P(h) = Σ_m c_m h^m` with `Z(h) = (√h)^{-L} P(h)`, where `c_m` sums the
/// bond weights of configurations with `m` up spins.
pub fn bruteforce_coefficients(ring: &IsingRing) -> Result<Poly> {
    Ok(Poly::new(bruteforce_weights(ring)?))
}

fn bruteforce_weights(ring: &IsingRing) -> Result<Vec<Complex64>> {
    let l = ring.len();
    if l > BRUTEFORCE_CAP {
        return Err(invalid(format!(
            "enumeration is capped at {BRUTEFORCE_CAP} spins, got {l}"
        )));
    }
    let kt = ring.kt();
    let mut w = vec![c(0.0, 0.0); l + 1];
    for bits in 0u32..(1u32 << l) {
        let spin = |i: usize| if bits >> (i % l) & 1 == 1 { 1.0 } else { -1.0 };
        let mut bond = c(0.0, 0.0);
        for i in 0..l {
            bond += ring.couplings[i] * spin(i) * spin(i + 1);
        }
        w[bits.count_ones() as usize] += (bond / kt).exp();
    }
    Ok(w)
}

/// `Tr M_{L-1} ⋯ M_0` with `M_i = (β_i h)^{-1/2} (β_i h, √h; √h, β_i)`.
///
/// `β_i^{1/2}` is taken as `exp(J_i/k_Bτ)`, which makes the trace equal the
/// configuration sum for complex couplings as well.
pub fn partition_transfer(ring: &IsingRing, h: Complex64) -> Result<Complex64> {
    if h.norm() == 0.0 {
        return Err(invalid("fugacity must be nonzero"));
    }
    Ok(transfer_trace(ring, sqrt_fugacity(h)))
}

fn transfer_trace(ring: &IsingRing, s: Complex64) -> Complex64 {
    let mut acc = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    for e in ring.half_betas() {
        let m = [[e * s, 1.0 / e], [1.0 / e, e / s]];
        acc = mul2(&m, &acc);
    }
    acc[0][0] + acc[1][1]
}

/// `Tr M̃_{L-1} ⋯ M̃_0` with `M̃_i = (h, √h/β̄_i; √h/β_i, 1)`.
pub fn partition_tilde(ring: &IsingRing, h: Complex64) -> Result<Complex64> {
    if h.norm() == 0.0 {
        return Err(invalid("fugacity must be nonzero"));
    }
    Ok(tilde_trace(ring, h, sqrt_fugacity(h)))
}

fn tilde_trace(ring: &IsingRing, h: Complex64, s: Complex64) -> Complex64 {
    let mut acc = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    for b in ring.betas() {
        let m = [[h, s / b.conj()], [s / b, c(1.0, 0.0)]];
        acc = mul2(&m, &acc);
    }
    acc[0][0] + acc[1][1]
}

fn mul2(a: &[[Complex64; 2]; 2], b: &[[Complex64; 2]; 2]) -> [[Complex64; 2]; 2] {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

struct PolyMat([[Poly; 2]; 2]);

impl PolyMat {
    fn identity() -> Self {
        let zero = Poly::new(vec![c(0.0, 0.0)]);
        PolyMat([[Poly::one(), zero.clone()], [zero, Poly::one()]])
    }

    /// `(a0 + a1 h, b0 + b1 h; c0 + c1 h, d0 + d1 h)`.
    fn linear(m: [[(Complex64, Complex64); 2]; 2]) -> Self {
        let p = |(x, y): (Complex64, Complex64)| Poly::new(vec![x, y]);
        PolyMat([[p(m[0][0]), p(m[0][1])], [p(m[1][0]), p(m[1][1])]])
    }

    fn mul(&self, o: &PolyMat) -> PolyMat {
        let e = |i: usize, j: usize| self.0[i][0].mul(&o.0[0][j]).add(&self.0[i][1].mul(&o.0[1][j]));
        PolyMat([[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]])
    }

    /// Trace, truncated to formal degree `deg`.
    fn trace(&self, deg: usize) -> Poly {
        let mut v = self.0[0][0].add(&self.0[1][1]).coeffs().to_vec();
        v.resize(deg + 1, c(0.0, 0.0));
        Poly::new(v)
    }
}

fn product_trace(factors: impl Iterator<Item = PolyMat>, deg: usize) -> Poly {
    factors
        .fold(PolyMat::identity(), |acc, m| m.mul(&acc))
        .trace(deg)
}

/// `P(h) = (√h)^L Z(h)`, a polynomial of degree `L`, from the transfer
/// matrices conjugated by `diag(1, √h)`.
pub fn partition_polynomial(ring: &IsingRing) -> Poly {
    let z = c(0.0, 0.0);
    let factors = ring.half_betas().into_iter().map(|e| {
        let f = 1.0 / e;
        PolyMat::linear([[(z, e), (z, f)], [(f, z), (e, z)]])
    });
    product_trace(factors, ring.len())
}

/// `Z̃(h)` as a polynomial of degree `L`; `√h` enters its entries in pairs.
pub fn tilde_polynomial(ring: &IsingRing) -> Poly {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    let factors = ring.betas().into_iter().map(|b| {
        PolyMat::linear([[(z, one), (z, 1.0 / b.conj())], [(1.0 / b, z), (one, z)]])
    });
    product_trace(factors, ring.len())
}

/// `Θu = 1/u`, an involution exchanging `|u| > 1` and the punctured disc.
pub fn theta(u: Complex64) -> Complex64 {
    1.0 / u
}

/// `α_i = 1/β_i`; every `|β_i|` must exceed 1.
pub fn theta_inversion(betas: &[Complex64]) -> Result<Vec<VerblunskyCoeff>> {
    betas
        .iter()
        .map(|&b| {
            if !(b.norm() > 1.0) || !b.is_finite() {
                return Err(invalid(format!("|β| must exceed 1, got β = {b}")));
            }
            VerblunskyCoeff::new(theta(b))
        })
        .collect()
}

/// Inverse of [`theta_inversion`]; every `α_i` must be nonzero.
pub fn theta_inverse(alphas: &[VerblunskyCoeff]) -> Result<Vec<Complex64>> {
    alphas
        .iter()
        .map(|a| {
            if a.alpha().norm() == 0.0 {
                Err(invalid("Θ is undefined at α = 0"))
            } else {
                Ok(theta(a.alpha()))
            }
        })
        .collect()
}

/// `Δ_L(h) = Tr T_L(h)`, the trace of the Szegő transfer product over all
/// of `alphas`.
pub fn discriminant(h: Complex64, alphas: &[VerblunskyCoeff]) -> Complex64 {
    transfer_word(h, alphas).trace()
}

/// `Δ_L` expanded as a degree-`L` polynomial.
pub fn discriminant_polynomial(alphas: &[VerblunskyCoeff]) -> Poly {
    let z = c(0.0, 0.0);
    let factors = alphas.iter().map(|a| {
        let r = 1.0 / a.rho();
        let al = a.alpha();
        PolyMat::linear([
            [(z, c(r, 0.0)), (-al.conj() * r, z)],
            [(z, -al * r), (c(r, 0.0), z)],
        ])
    });
    product_trace(factors, alphas.len())
}

/// `e^{-iLθ/2} Δ_L(e^{iθ})`, real for real coefficients.
pub fn normalized_discriminant(theta: f64, alphas: &[VerblunskyCoeff]) -> Complex64 {
    let l = alphas.len() as f64;
    Complex64::from_polar(1.0, -l * theta / 2.0) * discriminant(Complex64::from_polar(1.0, theta), alphas)
}

fn all_real(alphas: &[VerblunskyCoeff]) -> bool {
    alphas.iter().all(|a| a.alpha().im == 0.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ZeroMethod {
    /// Sign changes of the real normalized function on an angle grid.
    SignChange,
    /// Roots of the expanded polynomial.
    Polynomial,
}

/// Sign-change zeros of a function real on the circle. Every sample's
/// imaginary part must stay below `1e-9 · scale`, where `scale` bounds the
/// size of the terms that cancel in it.
fn real_zeros<F: Fn(f64) -> Complex64>(f: F, scale: f64, expected: usize) -> Result<CircleZeroSet> {
    let worst = Cell::new(0.0f64);
    let zeros = sign_change_zeros(
        |t| {
            let v = f(t);
            worst.set(worst.get().max(v.im.abs() / scale));
            v.re
        },
        expected,
    )?;
    if worst.get() > REALITY_TOL {
        return Err(Error::Inconsistent(format!(
            "normalized function has relative imaginary part {:e} on the circle",
            worst.get()
        )));
    }
    Ok(zeros)
}

/// Roots of `p`, all required to lie on the circle within [`ZERO_TOL`].
fn polynomial_zeros(p: &Poly) -> Result<CircleZeroSet> {
    let roots = poly_roots(p)?;
    if let Some(r) = roots.iter().find(|r| (r.norm() - 1.0).abs() > ZERO_TOL) {
        return Err(Error::Inconsistent(format!(
            "root {r} is off the unit circle by {:e}",
            (r.norm() - 1.0).abs()
        )));
    }
    let scale = p.norm1();
    Ok(CircleZeroSet::new(
        roots
            .iter()
            .map(|&r| (reduce(r.arg()), p.eval(r).norm() / scale))
            .collect(),
    ))
}

fn check_count(z: &CircleZeroSet, l: usize) -> Result<()> {
    if z.len() != l {
        return Err(Error::Inconsistent(format!("found {} zeros, expected {l}", z.len())));
    }
    Ok(())
}

/// The `L = alphas.len()` zeros of `Δ_L` on the circle.
pub fn zeros_on_circle(alphas: &[VerblunskyCoeff], method: ZeroMethod) -> Result<CircleZeroSet> {
    let l = alphas.len();
    if l == 0 {
        return Err(invalid("need at least one coefficient"));
    }
    let z = match method {
        ZeroMethod::SignChange => {
            if !all_real(alphas) {
                return Err(invalid("the sign-change method needs real coefficients"));
            }
            let scale = alphas.iter().map(|a| (1.0 + a.alpha().norm()) / a.rho()).product();
            real_zeros(|t| normalized_discriminant(t, alphas), scale, l)?
        }
        ZeroMethod::Polynomial => polynomial_zeros(&discriminant_polynomial(alphas))?,
    };
    check_count(&z, l)?;
    Ok(z)
}

/// Runs both methods on real coefficients and fails if they disagree beyond
/// [`ZERO_TOL`]; complex coefficients use the polynomial method alone.
pub fn zeros_cross_checked(alphas: &[VerblunskyCoeff]) -> Result<CircleZeroSet> {
    let b = zeros_on_circle(alphas, ZeroMethod::Polynomial)?;
    if !all_real(alphas) {
        return Ok(b);
    }
    let a = zeros_on_circle(alphas, ZeroMethod::SignChange)?;
    let d = hausdorff(&a.angles, &b.angles);
    if d > ZERO_TOL {
        return Err(Error::Inconsistent(format!(
            "sign-change and polynomial zeros differ by {d:e}"
        )));
    }
    Ok(a)
}

/// Zeros of `Z` in `h`. The sign-change method needs real couplings, where
/// `Z(e^{iθ})` is real with the `√h` convention above.
pub fn partition_zeros(ring: &IsingRing, method: ZeroMethod) -> Result<CircleZeroSet> {
    let z = match method {
        ZeroMethod::SignChange => {
            if !ring.is_real() {
                return Err(invalid("the sign-change method needs real couplings"));
            }
            // √h follows θ continuously up to 2π, so the sampled function has no jump
            let scale = ring.half_betas().iter().map(|e| e.norm() + 1.0 / e.norm()).product();
            real_zeros(
                |t| transfer_trace(ring, Complex64::from_polar(1.0, t / 2.0)),
                scale,
                ring.len(),
            )?
        }
        ZeroMethod::Polynomial => polynomial_zeros(&partition_polynomial(ring))?,
    };
    check_count(&z, ring.len())?;
    Ok(z)
}

/// Zeros of `Z̃` in `h`; `e^{-iLθ/2} Z̃(e^{iθ})` is real for real couplings.
pub fn tilde_zeros(ring: &IsingRing, method: ZeroMethod) -> Result<CircleZeroSet> {
    let l = ring.len();
    let z = match method {
        ZeroMethod::SignChange => {
            if !ring.is_real() {
                return Err(invalid("the sign-change method needs real couplings"));
            }
            real_zeros(
                |t| {
                    let v = tilde_trace(ring, Complex64::from_polar(1.0, t), Complex64::from_polar(1.0, t / 2.0));
                    v * Complex64::from_polar(1.0, -(l as f64) * t / 2.0)
                },
                ring.betas().iter().map(|b| 1.0 + 1.0 / b.norm()).product(),
                l,
            )?
        }
        ZeroMethod::Polynomial => polynomial_zeros(&tilde_polynomial(ring))?,
    };
    check_count(&z, l)?;
    Ok(z)
}

/// Pairwise Hausdorff distances between the zero sets of `Z`, `Z̃` and
/// `Δ∘Θ`, plus the worst `||z| - 1|` over polynomial roots.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroChain {
    pub z: CircleZeroSet,
    pub z_tilde: CircleZeroSet,
    pub delta: CircleZeroSet,
    pub z_vs_tilde: f64,
    pub tilde_vs_delta: f64,
    pub z_vs_delta: f64,
    pub max_modulus_defect: f64,
}

impl ZeroChain {
    pub fn max_distance(&self) -> f64 {
        self.z_vs_tilde.max(self.tilde_vs_delta).max(self.z_vs_delta)
    }

    pub fn all_simple(&self) -> bool {
        self.z.is_simple() && self.z_tilde.is_simple() && self.delta.is_simple()
    }
}

/// Computes the three zero sets independently: `Z` by sign changes of the
/// spin transfer trace, `Z̃` from its polynomial, `Δ∘Θ` by both methods.
/// Real couplings only, since `Z̃` conjugates `β` in one entry.
pub fn zero_chain(ring: &IsingRing) -> Result<ZeroChain> {
    if !ring.is_real() {
        return Err(invalid("the zero chain is stated for real couplings"));
    }
    let z = partition_zeros(ring, ZeroMethod::SignChange)?;
    let z_tilde = tilde_zeros(ring, ZeroMethod::Polynomial)?;
    let alphas = ring.verblunsky()?;
    let delta = zeros_cross_checked(&alphas)?;
    let defect = |p: &Poly| -> Result<f64> {
        Ok(poly_roots(p)?
            .iter()
            .map(|r| (r.norm() - 1.0).abs())
            .fold(0.0, f64::max))
    };
    let max_modulus_defect = defect(&partition_polynomial(ring))?
        .max(defect(&tilde_polynomial(ring))?)
        .max(defect(&discriminant_polynomial(&alphas))?);
    Ok(ZeroChain {
        z_vs_tilde: hausdorff(&z.angles, &z_tilde.angles),
        tilde_vs_delta: hausdorff(&z_tilde.angles, &delta.angles),
        z_vs_delta: hausdorff(&z.angles, &delta.angles),
        z,
        z_tilde,
        delta,
        max_modulus_defect,
    })
}

/// Band arcs `Δ^{-1}[-2, 2]` of a real periodic coefficient list.
#[derive(Clone, Debug, PartialEq)]
pub struct Bands {
    pub zeros: CircleZeroSet,
    /// `(left, right)` with `left ∈ [0, 2π)` and `right ≥ left`; arc `i`
    /// holds `zeros.angles[i]`.
    pub arcs: Vec<(f64, f64)>,
}

impl Bands {
    pub fn right_endpoints(&self) -> Vec<f64> {
        self.arcs.iter().map(|a| reduce(a.1)).collect()
    }

    pub fn left_endpoints(&self) -> Vec<f64> {
        self.arcs.iter().map(|a| a.0).collect()
    }

    pub fn total_length(&self) -> f64 {
        self.arcs.iter().map(|a| a.1 - a.0).sum()
    }

    pub fn contains(&self, theta: f64) -> bool {
        self.arcs.iter().any(|&(l, r)| arc_contains(l, r, theta))
    }

    /// Whether each arc holds exactly one discriminant zero in its interior.
    pub fn one_zero_per_band(&self) -> bool {
        self.arcs.iter().all(|&(l, r)| {
            self.zeros
                .angles
                .iter()
                .filter(|&&t| arc_contains_open(l, r, t))
                .count()
                == 1
        })
    }

    /// Whether consecutive arcs overlap in more than an endpoint.
    pub fn overlapping(&self) -> bool {
        let n = self.arcs.len();
        n > 1
            && (0..n).any(|i| {
                let (_, r) = self.arcs[i];
                let (l, _) = self.arcs[(i + 1) % n];
                let l = if i + 1 == n { l + TAU } else { l };
                r > l + 1e-12
            })
    }
}

fn arc_contains(l: f64, r: f64, t: f64) -> bool {
    let t = reduce(t);
    (l..=r).contains(&t) || (l..=r).contains(&(t + TAU))
}

fn arc_contains_open(l: f64, r: f64, t: f64) -> bool {
    let t = reduce(t);
    (t > l && t < r) || (t + TAU > l && t + TAU < r)
}

/// Bands of `Δ_L` for real coefficients: between consecutive zeros `|g|`
/// has a single maximum, and the band edges are where it crosses 2. A gap
/// whose maximum does not exceed 2 is closed and both edges sit at it.
pub fn bands(alphas: &[VerblunskyCoeff]) -> Result<Bands> {
    let zeros = zeros_on_circle(alphas, ZeroMethod::SignChange)?;
    let l = zeros.len();
    let g = |t: f64| normalized_discriminant(t, alphas).norm();
    let excess = |t: f64| g(t) - 2.0;
    let mut right = vec![0.0; l];
    let mut left = vec![0.0; l];
    for i in 0..l {
        let a = zeros.angles[i];
        let b = if i + 1 < l { zeros.angles[i + 1] } else { zeros.angles[0] + TAU };
        let peak = golden_max(&g, a, b);
        let j = (i + 1) % l;
        if g(peak) <= 2.0 {
            right[i] = peak;
            left[j] = peak;
        } else {
            right[i] = bisect(&excess, a, peak, excess(a));
            left[j] = bisect(&excess, peak, b, excess(peak));
        }
    }
    let arcs = (0..l)
        .map(|i| {
            let lo = reduce(left[i]);
            let mut hi = reduce(right[i]);
            while hi < lo || (l == 1 && hi <= lo) {
                hi += TAU;
            }
            (lo, hi)
        })
        .collect::<Vec<_>>();
    let b = Bands { zeros, arcs };
    if b.arcs.len() != l {
        return Err(Error::Inconsistent(format!(
            "{} bands for {l} zeros",
            b.arcs.len()
        )));
    }
    Ok(b)
}

/// `(-1)^L ∏ e^{iθ_r}` over the counterclockwise (right) band endpoints.
pub fn gamma_n(bands: &Bands) -> Complex64 {
    let sign = if bands.arcs.len() % 2 == 0 { 1.0 } else { -1.0 };
    let phase: f64 = bands.arcs.iter().map(|a| a.1).sum();
    Complex64::from_polar(sign, phase)
}

/// Zeros of `Ψ_L = zΦ_{L-1} + γΦ*_{L-1}` built from `α_0 .. α_{L-2}`.
pub fn paraorthogonal_zeros(alphas: &[VerblunskyCoeff], gamma: Complex64) -> Result<CircleZeroSet> {
    let l = alphas.len();
    if l == 0 {
        return Err(invalid("need at least one coefficient"));
    }
    let p = paraorthogonal(alphas, l - 1, gamma)?;
    let scale = p.norm1();
    let roots = poly_roots_on_circle(&p)?;
    Ok(CircleZeroSet::new(
        roots
            .iter()
            .map(|&r| (reduce(r.arg()), p.eval(r).norm() / scale))
            .collect(),
    ))
}

/// Band structure together with the paraorthogonal zeros at `γ_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct BandReport {
    pub bands: Bands,
    pub gamma: Complex64,
    pub psi_zeros: CircleZeroSet,
    /// Hausdorff distance from the `Ψ` zeros to the right band endpoints.
    pub endpoint_distance: f64,
    /// Same, to the left band endpoints.
    pub left_endpoint_distance: f64,
    pub interlaced: bool,
}

pub fn band_report(alphas: &[VerblunskyCoeff]) -> Result<BandReport> {
    let bands = bands(alphas)?;
    let gamma = gamma_n(&bands);
    let psi_zeros = paraorthogonal_zeros(alphas, gamma)?;
    Ok(BandReport {
        endpoint_distance: hausdorff(&psi_zeros.angles, &bands.right_endpoints()),
        left_endpoint_distance: hausdorff(&psi_zeros.angles, &bands.left_endpoints()),
        interlaced: interlacing_check(&bands.zeros, &psi_zeros)?,
        bands,
        gamma,
        psi_zeros,
    })
}

/// Cyclic interlacing of discriminant zeros with paraorthogonal zeros.
pub fn interlacing_check(delta: &CircleZeroSet, psi: &CircleZeroSet) -> Result<bool> {
    interlaced(&delta.angles, &psi.angles)
}

pub fn zero_measure(zeros: &CircleZeroSet) -> Result<CircleMeasure> {
    CircleMeasure::from_zeros(zeros)
}

/// Coupling values for the two letters, either as `J` or as `β = e^{2J/k_Bτ}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CouplingPattern {
    J { a: Complex64, b: Complex64 },
    Beta { a: Complex64, b: Complex64 },
}

impl CouplingPattern {
    pub fn real_j(a: f64, b: f64) -> Self {
        CouplingPattern::J {
            a: c(a, 0.0),
            b: c(b, 0.0),
        }
    }

    /// `J` for a letter; `β` is mapped through the principal logarithm.
    pub fn coupling(&self, s: Symbol, kt: f64) -> Result<Complex64> {
        match *self {
            CouplingPattern::J { a, b } => Ok(if s == Symbol::A { a } else { b }),
            CouplingPattern::Beta { a, b } => {
                let beta = if s == Symbol::A { a } else { b };
                if !(beta.norm() > 1.0) {
                    return Err(invalid(format!("|β| must exceed 1, got {beta}")));
                }
                Ok(beta.ln() * kt / 2.0)
            }
        }
    }

    fn is_real(&self) -> bool {
        match *self {
            CouplingPattern::J { a, b } => a.im == 0.0 && b.im == 0.0,
            CouplingPattern::Beta { a, b } => a.im == 0.0 && b.im == 0.0,
        }
    }
}

/// The ring with `J_i = p(ω_i)`, `i = 0 .. L-1`.
pub fn fibonacci_couplings(
    pattern: CouplingPattern,
    omega: SubshiftPoint,
    l: usize,
    tau: f64,
    kb: f64,
) -> Result<IsingRing> {
    let word = omega.window(0, l)?;
    let kt = kb * tau;
    let js = word
        .letters()
        .iter()
        .map(|&s| pattern.coupling(s, kt))
        .collect::<Result<Vec<_>>>()?;
    IsingRing::with_constants(js, tau, kb, c(0.0, 0.0))
}

#[derive(Clone, Debug, PartialEq)]
pub struct DosEntry {
    pub k: usize,
    pub length: usize,
    /// Kolmogorov and Hausdorff distances of `ν_{F_k}` to the next entry.
    pub to_next: Option<(f64, f64)>,
    /// Distances between `ν_{F_k}(ω)` and `ν_{F_k}(u)`.
    pub cross_omega: (f64, f64),
    /// Fraction of the `ω` zeros inside the bands of the `u` ring.
    pub in_band_fraction: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DosReport {
    pub entries: Vec<DosEntry>,
}

impl DosReport {
    /// Successive Kolmogorov distances along the ladder.
    pub fn ladder_distances(&self) -> Vec<f64> {
        self.entries.iter().filter_map(|e| e.to_next.map(|d| d.0)).collect()
    }

    /// Whether each successive distance is at most `1 + slack` times the one before.
    pub fn nonincreasing_within(&self, slack: f64) -> bool {
        self.ladder_distances()
            .windows(2)
            .all(|w| w[1] <= (1.0 + slack) * w[0])
    }
}

fn ring_zeros(ring: &IsingRing) -> Result<CircleZeroSet> {
    let alphas = ring.verblunsky()?;
    let method = if ring.is_real() {
        ZeroMethod::SignChange
    } else {
        ZeroMethod::Polynomial
    };
    zeros_on_circle(&alphas, method)
}

/// Counting measures of discriminant zeros at `L = F_k` for each `k` in
/// `ladder`, compared along the ladder and against `ω = u`.
pub fn dos_convergence(
    pattern: CouplingPattern,
    omega: SubshiftPoint,
    ladder: &[usize],
    tau: f64,
    kb: f64,
) -> Result<DosReport> {
    let mut measures = Vec::with_capacity(ladder.len());
    let mut entries = Vec::with_capacity(ladder.len());
    for &k in ladder {
        let l = fib_number(k) as usize;
        let ring = fibonacci_couplings(pattern, omega, l, tau, kb)?;
        let own = ring_zeros(&ring)?;
        let reference = fibonacci_couplings(pattern, SubshiftPoint::fixed_point(), l, tau, kb)?;
        let ref_zeros = ring_zeros(&reference)?;
        let in_band_fraction = if pattern.is_real() {
            let b = bands(&reference.verblunsky()?)?;
            own.angles.iter().filter(|&&t| b.contains(t)).count() as f64 / l as f64
        } else {
            f64::NAN
        };
        let mu = zero_measure(&own)?;
        let nu = zero_measure(&ref_zeros)?;
        entries.push(DosEntry {
            k,
            length: l,
            to_next: None,
            cross_omega: (mu.kolmogorov(&nu), mu.hausdorff(&nu)),
            in_band_fraction,
        });
        measures.push(mu);
    }
    for i in 0..entries.len().saturating_sub(1) {
        let (m0, m1) = (&measures[i], &measures[i + 1]);
        entries[i].to_next = Some((m0.kolmogorov(m1), m0.hausdorff(m1)));
    }
    Ok(DosReport { entries })
}

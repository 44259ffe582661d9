//! The Fibonacci trace map for the walk's transfer matrices, its
//! Fricke–Vogt invariant, a grid approximation of the spectrum, and the
//! closed-form transport constants.
//!
//! Half-traces are normalized by `z^{-F_k}` so they are real on `∂𝔻`:
//! `x_k(z) = z^{-F_k} · ½ Tr T(z, s̃_k)`, where `s̃_k` interleaves a zero after
//! every letter of `S^k(a)` (coupling `sin θ_a` or `sin θ_b`).

use std::f64::consts::{FRAC_PI_2, TAU};

use num_complex::Complex64;

use crate::cmv::{transfer_word, Transfer2, VerblunskyCoeff};
use crate::error::{invalid, Error, Result};
use crate::fib::{self, Symbol};

/// The golden mean.
pub const GOLDEN: f64 = 1.618_033_988_749_895;

/// Orbits stop once a half-trace exceeds this magnitude.
pub const OVERFLOW_GUARD: f64 = 1e150;

/// Depth used to decide spectrum membership when none is given.
pub const DEFAULT_DEPTH: usize = 30;

const UNIT_TOL: f64 = 1e-12;

/// Coin angles `θ_a, θ_b ∈ (-π/2, π/2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoinAngles {
    theta_a: f64,
    theta_b: f64,
}

impl CoinAngles {
    pub fn new(theta_a: f64, theta_b: f64) -> Result<Self> {
        for t in [theta_a, theta_b] {
            if !(t.abs() < FRAC_PI_2) {
                return Err(invalid(format!("coin angle {t} is outside (-π/2, π/2)")));
            }
        }
        Ok(CoinAngles { theta_a, theta_b })
    }

    pub fn theta_a(&self) -> f64 {
        self.theta_a
    }

    pub fn theta_b(&self) -> f64 {
        self.theta_b
    }

    pub fn theta(&self, s: Symbol) -> f64 {
        match s {
            Symbol::A => self.theta_a,
            Symbol::B => self.theta_b,
        }
    }

    pub fn sec_a(&self) -> f64 {
        1.0 / self.theta_a.cos()
    }

    pub fn sec_b(&self) -> f64 {
        1.0 / self.theta_b.cos()
    }

    /// The coefficient `sin θ_s` attached to a letter.
    pub fn coupling(&self, s: Symbol) -> VerblunskyCoeff {
        // |sin θ| < 1 on the open interval
        VerblunskyCoeff::real(self.theta(s).sin()).expect("|sin θ| < 1")
    }
}

/// `(x_{k-1}, x_k, x_{k+1})`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraceTriple {
    pub prev: f64,
    pub cur: f64,
    pub next: f64,
}

impl TraceTriple {
    pub fn invariant(&self) -> f64 {
        fricke_vogt(self.next, self.cur, self.prev)
    }
}

fn check_unit(z: Complex64) -> Result<()> {
    if (z.norm() - 1.0).abs() > UNIT_TOL {
        return Err(invalid(format!("|z| = {} but the unit circle is required", z.norm())));
    }
    Ok(())
}

/// `(x_{-1}, x_0, x_1)` at `z ∈ ∂𝔻`:
/// `x_{-1} = ℜz sec θ_b`, `x_0 = ℜz sec θ_a`,
/// `x_1 = ℜ(z²) sec θ_a sec θ_b + tan θ_a tan θ_b`.
pub fn initial_traces(z: Complex64, angles: &CoinAngles) -> Result<TraceTriple> {
    check_unit(z)?;
    let (sa, sb) = (angles.sec_a(), angles.sec_b());
    Ok(TraceTriple {
        prev: z.re * sb,
        cur: z.re * sa,
        // the sign of the tan·tan term follows from Tr(T B T A)
        next: (z * z).re * sa * sb + angles.theta_a.tan() * angles.theta_b.tan(),
    })
}

/// `I = x₁² + x₀² + x₋₁² - 2x₁x₀x₋₁ - 1`.
pub fn fricke_vogt(x1: f64, x0: f64, xm1: f64) -> f64 {
    x1 * x1 + x0 * x0 + xm1 * xm1 - 2.0 * x1 * x0 * xm1 - 1.0
}

/// Iterates of `x_{k+1} = 2x_k x_{k-1} - x_{k-2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceOrbit {
    /// `values[i] = x_{i-1}`.
    pub values: Vec<f64>,
    /// Set when the iteration stopped at the overflow guard.
    pub overflow: bool,
}

impl TraceOrbit {
    pub fn get(&self, k: i64) -> Option<f64> {
        usize::try_from(k + 1).ok().and_then(|i| self.values.get(i).copied())
    }

    /// Largest `k` present in the orbit.
    pub fn last_index(&self) -> i64 {
        self.values.len() as i64 - 2
    }

    /// First `j` at which `|x_j| > 1`, `|x_{j+1}| > 1` and `|x_{j+1}| ≥ |x_j|`.
    /// An overflowed orbit always counts as escaped.
    pub fn escape_index(&self) -> Option<i64> {
        let hit = self.values.windows(2).position(|w| {
            w[0].abs() > 1.0 && w[1].abs() > 1.0 && w[1].abs() >= w[0].abs()
        });
        match hit {
            Some(i) => Some(i as i64 - 1),
            None if self.overflow => Some(self.last_index()),
            None => None,
        }
    }

    pub fn sup_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// `x_{-1}, x_0, …, x_{k_max}` from an initial triple.
pub fn trace_orbit(triple: &TraceTriple, k_max: usize) -> Result<TraceOrbit> {
    if k_max < 1 {
        return Err(invalid("k_max must be at least 1"));
    }
    let mut values = vec![triple.prev, triple.cur, triple.next];
    let mut overflow = false;
    while values.len() < k_max + 2 {
        let n = values.len();
        let x = 2.0 * values[n - 1] * values[n - 2] - values[n - 3];
        if !(x.abs() <= OVERFLOW_GUARD) {
            overflow = true;
            break;
        }
        values.push(x);
    }
    Ok(TraceOrbit { values, overflow })
}

/// The zero-interleaved coefficient block `s̃_k` (length `2F_k`).
pub fn building_block(angles: &CoinAngles, k: usize) -> Result<Vec<VerblunskyCoeff>> {
    let len = fib::fib_number(k);
    if 2 * len > fib::DEFAULT_CAP as u64 {
        return Err(Error::LengthCap {
            requested: (2 * len) as usize,
            cap: fib::DEFAULT_CAP,
        });
    }
    let word = fib::fib_word(k)?;
    let (ca, cb) = (angles.coupling(Symbol::A), angles.coupling(Symbol::B));
    Ok(word
        .letters()
        .iter()
        .flat_map(|&s| {
            let c = if s == Symbol::A { ca } else { cb };
            [c, VerblunskyCoeff::ZERO]
        })
        .collect())
}

/// `z^{-F_k} · ½ Tr T(z, s̃_k)` by direct matrix multiplication.
///
/// Fails with `Inconsistent` when the imaginary residual exceeds
/// `1e-9 · max(1, |x_k|)`.
pub fn half_trace_direct(z: Complex64, angles: &CoinAngles, k: usize) -> Result<f64> {
    check_unit(z)?;
    let block = building_block(angles, k)?;
    let f = fib::fib_number(k) as f64;
    let tr = transfer_word(z, &block).trace() * 0.5 * Complex64::from_polar(1.0, -f * z.arg());
    if tr.im.abs() > 1e-9 * tr.re.abs().max(1.0) {
        return Err(Error::Inconsistent(format!(
            "half-trace at level {k} has imaginary part {:e}",
            tr.im
        )));
    }
    Ok(tr.re)
}

/// `C(z) = max{2 + √(8 + I(z)), sec θ_a, sec θ_b}`.
pub fn trace_sup_bound(z: Complex64, angles: &CoinAngles) -> Result<f64> {
    let i = initial_traces(z, angles)?.invariant();
    sup_bound_from_invariant(i, angles)
}

fn sup_bound_from_invariant(i: f64, angles: &CoinAngles) -> Result<f64> {
    if i < -8.0 {
        return Err(Error::Inconsistent(format!("Fricke–Vogt invariant {i} < -8")));
    }
    Ok((2.0 + (8.0 + i).sqrt()).max(angles.sec_a()).max(angles.sec_b()))
}

/// `z = e^{it}` is kept when its orbit has not escaped by `x_depth`.
pub fn in_spectrum(t: f64, angles: &CoinAngles, depth: usize) -> bool {
    let z = Complex64::from_polar(1.0, t);
    let triple = initial_traces(z, angles).expect("grid point on the circle");
    let orbit = trace_orbit(&triple, depth.max(1)).expect("depth ≥ 1");
    orbit.escape_index().is_none()
}

/// Grid approximation of the spectrum on `M` equispaced angles `2πj/M`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumApprox {
    pub grid: usize,
    pub depth: usize,
    pub mask: Vec<bool>,
    /// Closed arcs `(start, end)` in radians with `start ∈ [0, 2π)` and
    /// `end ≥ start`; an arc may run past `2π`.
    pub arcs: Vec<(f64, f64)>,
}

impl SpectrumApprox {
    pub fn angle(&self, j: usize) -> f64 {
        TAU * j as f64 / self.grid as f64
    }

    pub fn fraction(&self) -> f64 {
        self.mask.iter().filter(|&&b| b).count() as f64 / self.grid as f64
    }

    /// Angles of the in-spectrum grid points.
    pub fn points(&self) -> Vec<f64> {
        (0..self.grid).filter(|&j| self.mask[j]).map(|j| self.angle(j)).collect()
    }
}

pub fn spectrum_approx(angles: &CoinAngles, depth: usize, grid: usize) -> Result<SpectrumApprox> {
    if grid < 1000 {
        return Err(invalid("grid must have at least 1000 points"));
    }
    if depth < 3 {
        return Err(invalid("depth must be at least 3"));
    }
    let mask: Vec<bool> = (0..grid)
        .map(|j| in_spectrum(TAU * j as f64 / grid as f64, angles, depth))
        .collect();
    Ok(spectrum_from_mask(mask, depth))
}

/// Builds the arc list from a precomputed mask.
pub fn spectrum_from_mask(mask: Vec<bool>, depth: usize) -> SpectrumApprox {
    let grid = mask.len();
    let step = TAU / grid as f64;
    let mut arcs = Vec::new();
    if mask.iter().all(|&b| b) {
        arcs.push((0.0, TAU));
    } else if mask.iter().any(|&b| b) {
        // start scanning just after a gap so wrapped runs stay whole
        let first_gap = mask.iter().position(|&b| !b).unwrap();
        let mut j = 0;
        while j < grid {
            let idx = (first_gap + j) % grid;
            if mask[idx] {
                let start = idx;
                let mut len = 0;
                while j < grid && mask[(first_gap + j) % grid] {
                    len += 1;
                    j += 1;
                }
                let s = start as f64 * step;
                arcs.push((s, s + (len - 1) as f64 * step));
            } else {
                j += 1;
            }
        }
        arcs.sort_by(|a, b| a.0.total_cmp(&b.0));
    }
    SpectrumApprox {
        grid,
        depth,
        mask,
        arcs,
    }
}

/// The matrices `A(z)`, `B(z)`, `T(z) = diag(z, 1)`.
fn nest_matrices(z: Complex64, angles: &CoinAngles) -> (Transfer2, Transfer2, Transfer2) {
    let one = Complex64::new(1.0, 0.0);
    let t = Transfer2::diag(z, one);
    let a = crate::cmv::transfer_single(z, &angles.coupling(Symbol::A));
    let b = crate::cmv::transfer_single(z, &angles.coupling(Symbol::B));
    (a, b, t)
}

/// `(‖TA‖, ‖TBTA‖, ‖TATBTA‖)`.
pub fn nests_norms(z: Complex64, angles: &CoinAngles) -> Result<(f64, f64, f64)> {
    check_unit(z)?;
    let (a, b, t) = nest_matrices(z, angles);
    let ta = t * a;
    let tbta = t * b * ta;
    let tatbta = ta * tbta;
    Ok((ta.norm(), tbta.norm(), tatbta.norm()))
}

/// The two closed forms offered for `‖TA‖`: `sec θ_a (1 + |sin θ_a|)` and
/// `sec θ_a (1 + |sin θ_a|)²`. Only the first matches the singular values.
pub fn ta_norm_candidates(theta_a: f64) -> (f64, f64) {
    let (s, sec) = (theta_a.sin().abs(), 1.0 / theta_a.cos());
    (sec * (1.0 + s), sec * (1.0 + s) * (1.0 + s))
}

/// Constants of the transport lower bound at one spectral parameter.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TransportBound {
    pub z: Complex64,
    pub invariant: f64,
    pub c: f64,
    pub gamma1: f64,
    pub k: f64,
    pub gamma2: f64,
    pub beta: f64,
    /// False when `z` escaped the trace map, so the bound does not apply.
    pub sound: bool,
}

/// Evaluates `C, γ₁, K, γ₂, β` at `z`, with `sup_k |x_k|` replaced by `C(z)`.
pub fn transport_constants(z: Complex64, angles: &CoinAngles) -> Result<TransportBound> {
    transport_constants_at_depth(z, angles, DEFAULT_DEPTH)
}

pub fn transport_constants_at_depth(
    z: Complex64,
    angles: &CoinAngles,
    depth: usize,
) -> Result<TransportBound> {
    let triple = initial_traces(z, angles)?;
    let invariant = triple.invariant();
    let c = sup_bound_from_invariant(invariant, angles)?;
    let gamma1 = (1.0 + 1.0 / (4.0 * c * c)).ln() / (16.0 * GOLDEN.ln());
    let (n1, n2, n3) = nests_norms(z, angles)?;
    let m = c.max(1.0);
    let k = (8.0 * m).max(4.0 * n1).max(4.0 * n2).max(4.0 * n3) * (4.0 + 4.0 * m);
    let gamma2 = 4.0 * k.log2();
    let beta = dkl_scaling_exponent(gamma1, 2.0 * gamma2 + 1.0)?;
    let sound = trace_orbit(&triple, depth.max(1))?.escape_index().is_none();
    Ok(TransportBound {
        z,
        invariant,
        c,
        gamma1,
        k,
        gamma2,
        beta,
        sound,
    })
}

/// `2γ_lower / (γ_lower + γ_upper)`.
pub fn dkl_scaling_exponent(gamma_lower: f64, gamma_upper: f64) -> Result<f64> {
    if !(gamma_lower > 0.0 && gamma_upper > 0.0) {
        return Err(invalid("both exponents must be positive"));
    }
    Ok(2.0 * gamma_lower / (gamma_lower + gamma_upper))
}

/// `max β(z)` over the sample angles.
pub fn bound_over_support(angles: &CoinAngles, samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(invalid("no sample points"));
    }
    samples.iter().try_fold(f64::NEG_INFINITY, |m, &t| {
        let b = transport_constants(Complex64::from_polar(1.0, t), angles)?;
        Ok(m.max(b.beta))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn free() -> CoinAngles {
        CoinAngles::new(0.0, 0.0).unwrap()
    }

    fn golden_angles() -> CoinAngles {
        CoinAngles::new(PI / 3.0, PI / 6.0).unwrap()
    }

    #[test]
    fn angle_validation() {
        assert!(CoinAngles::new(FRAC_PI_2, 0.0).is_err());
        assert!(CoinAngles::new(0.0, -FRAC_PI_2).is_err());
        assert!(CoinAngles::new(f64::NAN, 0.0).is_err());
        assert!(CoinAngles::new(1.5, -1.5).is_ok());
    }

    #[test]
    fn initial_trace_examples() {
        let t = initial_traces(c(1.0, 0.0), &free()).unwrap();
        assert_eq!((t.prev, t.cur, t.next), (1.0, 1.0, 1.0));

        let ang = CoinAngles::new(PI / 3.0, PI / 4.0).unwrap();
        let t = initial_traces(c(0.0, 1.0), &ang).unwrap();
        assert!(t.prev.abs() < 1e-15 && t.cur.abs() < 1e-15);
        assert_relative_eq!(t.next, -2.0 * 2f64.sqrt() + 3f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(t.invariant(), 10.0 - 4.0 * 6f64.sqrt(), max_relative = 1e-12);

        let t = initial_traces(c(-1.0, 0.0), &free()).unwrap();
        assert_eq!((t.prev, t.cur, t.next), (-1.0, -1.0, 1.0));
        assert!(initial_traces(c(1.1, 0.0), &free()).is_err());
    }

    #[test]
    fn invariant_examples() {
        assert_eq!(fricke_vogt(1.0, 1.0, 1.0), 0.0);
        assert_eq!(fricke_vogt(3.0, 0.0, 0.0), 8.0);
    }

    #[test]
    fn expanded_invariant_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let ang = CoinAngles::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)).unwrap();
            let z = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let (sa, sb) = (ang.sec_a(), ang.sec_b());
            let (ta, tb) = (ang.theta_a.tan(), ang.theta_b.tan());
            let (r, r2) = (z.re, (z * z).re);
            let x1 = r2 * sa * sb + ta * tb;
            let expanded = r * r * (sa * sa + sb * sb) + x1 * x1
                - 2.0 * r * r * sa * sa * sb * sb * (r2 + ang.theta_a.sin() * ang.theta_b.sin())
                - 1.0;
            let i = initial_traces(z, &ang).unwrap().invariant();
            assert!((i - expanded).abs() <= 1e-10 * (1.0 + i.abs()));
        }
    }

    #[test]
    fn orbit_examples() {
        let ones = trace_orbit(&TraceTriple { prev: 1.0, cur: 1.0, next: 1.0 }, 10).unwrap();
        assert!(ones.values.iter().all(|&x| x == 1.0));
        let o = trace_orbit(&TraceTriple { prev: 0.0, cur: 0.0, next: 2.5 }, 4).unwrap();
        assert_eq!(o.get(2), Some(0.0));
        assert_eq!(o.get(3), Some(0.0));
        assert_eq!(o.get(4), Some(-2.5));
        assert!(trace_orbit(&TraceTriple { prev: 0.0, cur: 0.0, next: 0.0 }, 0).is_err());
    }

    #[test]
    fn orbit_overflow_is_flagged() {
        let o = trace_orbit(&TraceTriple { prev: 3.0, cur: 3.0, next: 3.0 }, 60).unwrap();
        assert!(o.overflow);
        assert!(o.values.iter().all(|x| x.abs() <= OVERFLOW_GUARD));
        assert!(o.escape_index().is_some());
    }

    #[test]
    fn free_orbit_is_cosine_of_fibonacci_multiples() {
        let t = 0.731;
        let orbit = trace_orbit(&initial_traces(Complex64::from_polar(1.0, t), &free()).unwrap(), 15).unwrap();
        for k in 0..=15i64 {
            let f = fib::fib_number(k as usize) as f64;
            assert!((orbit.get(k).unwrap() - (f * t).cos()).abs() < 1e-9);
        }
    }

    #[test]
    fn direct_half_trace_examples() {
        let ang = CoinAngles::new(PI / 3.0, 0.2).unwrap();
        assert_relative_eq!(half_trace_direct(c(1.0, 0.0), &ang, 0).unwrap(), 2.0, max_relative = 1e-14);
        let z = Complex64::from_polar(1.0, 0.4);
        let t = initial_traces(z, &ang).unwrap();
        assert_relative_eq!(half_trace_direct(z, &ang, 0).unwrap(), t.cur, max_relative = 1e-13);
        assert_relative_eq!(half_trace_direct(z, &ang, 1).unwrap(), t.next, max_relative = 1e-13);
    }

    #[test]
    fn equal_angles_match_single_angle_case() {
        let ang = CoinAngles::new(0.5, 0.5).unwrap();
        let z = Complex64::from_polar(1.0, 1.3);
        let t = initial_traces(z, &ang).unwrap();
        assert_relative_eq!(t.prev, t.cur, max_relative = 1e-15);
        let x1 = (z * z).re / (0.5f64.cos().powi(2)) + 0.5f64.tan().powi(2);
        assert_relative_eq!(t.next, x1, max_relative = 1e-14);
    }

    #[test]
    fn direct_matches_orbit() {
        let ang = golden_angles();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let z = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let orbit = trace_orbit(&initial_traces(z, &ang).unwrap(), 10).unwrap();
            for k in 0..=10 {
                let d = half_trace_direct(z, &ang, k).unwrap();
                let x = orbit.get(k as i64).unwrap();
                assert!((d - x).abs() <= 1e-9 * x.abs().max(1.0), "k={k}");
            }
        }
    }

    #[test]
    fn sup_bound_examples() {
        assert_relative_eq!(trace_sup_bound(c(1.0, 0.0), &free()).unwrap(), 2.0 + 8f64.sqrt(), max_relative = 1e-14);
        let ang = CoinAngles::new(PI / 3.0, 0.0).unwrap();
        assert!(trace_sup_bound(c(0.0, 1.0), &ang).unwrap() >= 2.0 - 1e-12);
    }

    #[test]
    fn free_transport_constants() {
        let b = transport_constants(c(1.0, 0.0), &free()).unwrap();
        assert_relative_eq!(b.c, 4.828_427_124_746_19, max_relative = 1e-12);
        assert_relative_eq!(b.gamma1, 1.3867e-3, max_relative = 1e-3);
        assert_relative_eq!(b.k, 900.6, max_relative = 1e-4);
        assert_relative_eq!(b.gamma2, 39.26, max_relative = 1e-3);
        assert_relative_eq!(b.beta, 3.49e-5, max_relative = 2e-3);
        assert!(b.sound);
        let (n1, n2, n3) = nests_norms(c(1.0, 0.0), &free()).unwrap();
        assert!((n1 - 1.0).abs() < 1e-14 && (n2 - 1.0).abs() < 1e-14 && (n3 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn ta_norm_is_linear_candidate() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            let ang = CoinAngles::new(rng.gen_range(-1.5..1.5), 0.0).unwrap();
            let z = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
            let (n1, _, _) = nests_norms(z, &ang).unwrap();
            let (lin, sq) = ta_norm_candidates(ang.theta_a);
            assert!((n1 - lin).abs() <= 1e-12 * lin);
            assert!(n1 <= sq * (1.0 + 1e-12));
        }
        let (n1, _, _) = nests_norms(c(0.3, 0.4).unscale(0.5), &CoinAngles::new(0.0, 1.0).unwrap()).unwrap();
        assert!((n1 - 1.0).abs() < 1e-14);
    }

    #[test]
    fn dkl_examples() {
        assert_eq!(dkl_scaling_exponent(1.0, 1.0).unwrap(), 1.0);
        assert_relative_eq!(dkl_scaling_exponent(1e-3, 40.0).unwrap(), 2e-3 / 40.001, max_relative = 1e-14);
        assert!(dkl_scaling_exponent(0.0, 1.0).is_err());
        assert!(dkl_scaling_exponent(1.0, -1.0).is_err());
    }

    #[test]
    fn free_spectrum_is_full_circle() {
        let s = spectrum_approx(&free(), 12, 1000).unwrap();
        assert!(s.mask.iter().all(|&b| b));
        assert_eq!(s.arcs, vec![(0.0, TAU)]);
        assert!(spectrum_approx(&free(), 2, 1000).is_err());
        assert!(spectrum_approx(&free(), 5, 999).is_err());
    }

    #[test]
    fn masks_are_nested() {
        let ang = golden_angles();
        let mut prev = spectrum_approx(&ang, 3, 2000).unwrap();
        for k in 4..12 {
            let next = spectrum_approx(&ang, k, 2000).unwrap();
            assert!(next.mask.iter().zip(&prev.mask).all(|(&n, &p)| !n || p));
            assert!(next.fraction() <= prev.fraction());
            prev = next;
        }
        assert!(prev.fraction() > 0.0);
    }

    #[test]
    fn arcs_cover_the_mask() {
        let ang = golden_angles();
        let s = spectrum_approx(&ang, 8, 1500).unwrap();
        let step = TAU / s.grid as f64;
        let covered: usize = s.arcs.iter().map(|(a, b)| ((b - a) / step).round() as usize + 1).sum();
        assert_eq!(covered, s.mask.iter().filter(|&&b| b).count());
        for w in s.arcs.windows(2) {
            assert!(w[0].1 < w[1].0);
        }
    }

    #[test]
    fn wrapped_arc_is_merged() {
        let mut mask = vec![false; 1000];
        for j in (0..5).chain(990..1000) {
            mask[j] = true;
        }
        let s = spectrum_from_mask(mask, 3);
        assert_eq!(s.arcs.len(), 1);
        let step = TAU / 1000.0;
        assert_relative_eq!(s.arcs[0].0, 990.0 * step, max_relative = 1e-14);
        assert_relative_eq!(s.arcs[0].1 - s.arcs[0].0, 14.0 * step, max_relative = 1e-12);
    }

    #[test]
    fn orbit_stays_below_sup_bound_in_spectrum() {
        let ang = golden_angles();
        let s = spectrum_approx(&ang, 25, 4000).unwrap();
        let pts = s.points();
        let stride = (pts.len() / 50).max(1);
        for &t in pts.iter().step_by(stride) {
            let z = Complex64::from_polar(1.0, t);
            let orbit = trace_orbit(&initial_traces(z, &ang).unwrap(), 25).unwrap();
            assert!(orbit.sup_abs() <= trace_sup_bound(z, &ang).unwrap());
        }
    }

    #[test]
    fn beta_monotonicity() {
        let g1 = 1e-3;
        let b = |k: f64, g: f64| dkl_scaling_exponent(g, 2.0 * 4.0 * k.log2() + 1.0).unwrap();
        assert!(b(1000.0, g1) < b(900.0, g1));
        assert!(b(900.0, 1.1 * g1) > b(900.0, g1));
    }

    #[test]
    fn bound_over_support_cases() {
        let ang = golden_angles();
        assert!(bound_over_support(&ang, &[]).is_err());
        let b = transport_constants(Complex64::from_polar(1.0, 0.3), &ang).unwrap();
        assert_eq!(bound_over_support(&ang, &[0.3]).unwrap(), b.beta);
        let all = [0.1, 0.3, 1.2, 2.5];
        assert!(bound_over_support(&ang, &all[..2]).unwrap() <= bound_over_support(&ang, &all).unwrap());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn invariant_is_conserved(ta in -1.4f64..1.4, tb in -1.4f64..1.4, t in 0.0f64..TAU) {
            let ang = CoinAngles::new(ta, tb).unwrap();
            let triple = initial_traces(Complex64::from_polar(1.0, t), &ang).unwrap();
            let i0 = triple.invariant();
            let orbit = trace_orbit(&triple, 20).unwrap();
            let stop = orbit.escape_index().map_or(orbit.values.len(), |e| (e + 2) as usize);
            for w in orbit.values[..stop.min(orbit.values.len())].windows(3) {
                let i = fricke_vogt(w[2], w[1], w[0]);
                prop_assert!((i - i0).abs() <= 1e-8 * (1.0 + i0.abs()));
            }
        }

        #[test]
        fn transport_constants_are_in_range(ta in -1.4f64..1.4, tb in -1.4f64..1.4, t in 0.0f64..TAU) {
            let ang = CoinAngles::new(ta, tb).unwrap();
            let b = transport_constants(Complex64::from_polar(1.0, t), &ang).unwrap();
            prop_assert!(b.c >= 2.0 + 8f64.sqrt() - 1e-12 || b.invariant < 0.0);
            prop_assert!(b.gamma1 > 0.0 && b.k >= 8.0);
            prop_assert!(b.beta > 0.0 && b.beta < 1.0);
        }

        #[test]
        fn nest_inequalities(ta in -1.5f64..1.5, tb in -1.5f64..1.5, t in 0.0f64..TAU) {
            let ang = CoinAngles::new(ta, tb).unwrap();
            let (_, n2, n3) = nests_norms(Complex64::from_polar(1.0, t), &ang).unwrap();
            let (sa, sb) = (ang.sec_a(), ang.sec_b());
            prop_assert!(n2 <= 12.0 * (sa * sb).powf(1.5));
            prop_assert!(n3 <= 48.0 * sa.powf(2.5) * sb.powf(1.5));
        }
    }
}

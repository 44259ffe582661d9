//! Coined quantum walk on the line with position-dependent coins.
//!
//! The basis is relabelled `e_{2n} = |n⟩⊗↑`, `e_{2n+1} = |n⟩⊗↓`. One step
//! sends `e_{2n} ↦ c¹¹_n e_{2n+2} + c²¹_n e_{2n-1}` and
//! `e_{2n+1} ↦ c¹²_n e_{2n+2} + c²²_n e_{2n-1}`.

use std::ops::Range;

use num_complex::Complex64;

use crate::cmv::{solution_norm, solution_sequence, MatrixWindow, VerblunskyCoeff, VerblunskySequence};
use crate::error::{invalid, Error, Result};
use crate::fib::SubshiftPoint;
use crate::trace::{transport_constants, CoinAngles};

const UNITARY_TOL: f64 = 1e-12;

/// A unitary 2×2 coin `(c¹¹, c¹²; c²¹, c²²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coin([[Complex64; 2]; 2]);

impl Coin {
    pub fn new(m: [[Complex64; 2]; 2]) -> Result<Self> {
        let c = Coin(m);
        let defect = c.unitarity_defect();
        if !(defect <= UNITARY_TOL) {
            return Err(invalid(format!("coin is not unitary (defect {defect:e})")));
        }
        Ok(c)
    }

    /// `(cos θ, -sin θ; sin θ, cos θ)`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Coin([
            [Complex64::new(c, 0.0), Complex64::new(-s, 0.0)],
            [Complex64::new(s, 0.0), Complex64::new(c, 0.0)],
        ])
    }

    pub fn c11(&self) -> Complex64 {
        self.0[0][0]
    }

    pub fn c12(&self) -> Complex64 {
        self.0[0][1]
    }

    pub fn c21(&self) -> Complex64 {
        self.0[1][0]
    }

    pub fn c22(&self) -> Complex64 {
        self.0[1][1]
    }

    fn unitarity_defect(&self) -> f64 {
        let m = &self.0;
        let mut d: f64 = 0.0;
        for i in 0..2 {
            for j in 0..2 {
                let g = m[0][i].conj() * m[0][j] + m[1][i].conj() * m[1][j];
                let want = if i == j { 1.0 } else { 0.0 };
                d = d.max((g - want).norm());
            }
        }
        d
    }
}

/// Position-dependent, time-independent coins `n ↦ C_n`.
pub trait Coins {
    fn coin(&self, n: i64) -> Result<Coin>;
}

/// `C_n = C_{ω_n}` with rotation coins at angles `θ_a, θ_b`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FibonacciCoins {
    pub omega: SubshiftPoint,
    pub angles: CoinAngles,
}

impl Coins for FibonacciCoins {
    fn coin(&self, n: i64) -> Result<Coin> {
        Ok(Coin::rotation(self.angles.theta(self.omega.symbol(n)?)))
    }
}

pub fn coin_assignment(omega: SubshiftPoint, angles: CoinAngles) -> FibonacciCoins {
    FibonacciCoins { omega, angles }
}

/// Coins tabulated over `start .. start + coins.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoinTable {
    pub start: i64,
    pub coins: Vec<Coin>,
}

impl CoinTable {
    pub fn tabulate<C: Coins + ?Sized>(source: &C, range: Range<i64>) -> Result<Self> {
        let coins = range.clone().map(|n| source.coin(n)).collect::<Result<Vec<_>>>()?;
        Ok(CoinTable {
            start: range.start,
            coins,
        })
    }
}

impl Coins for CoinTable {
    fn coin(&self, n: i64) -> Result<Coin> {
        let end = self.start + self.coins.len() as i64;
        if n < self.start || n >= end {
            return Err(Error::OutOfRange {
                index: n,
                start: self.start,
                end,
            });
        }
        Ok(self.coins[(n - self.start) as usize])
    }
}

/// Amplitudes over the e-index window `[-l, l]`, with the support tracked
/// structurally (it grows by at most 2 on each side per step).
#[derive(Clone, Debug, PartialEq)]
pub struct WalkState {
    l: i64,
    amps: Vec<Complex64>,
    support: (i64, i64),
    steps: usize,
}

impl WalkState {
    /// `ψ = e_m` on the window `[-l, l]`.
    pub fn localized(l: i64, m: i64) -> Result<Self> {
        Self::from_amplitudes(l, m, vec![Complex64::new(1.0, 0.0)])
    }

    /// A window sized for `steps` steps from `e_m`: `l = |m| + 2·steps + 4`.
    pub fn localized_for(m: i64, steps: usize) -> Result<Self> {
        Self::localized(m.abs() + 2 * steps as i64 + 4, m)
    }

    /// Places `values` at e-indices `start, start + 1, …` and normalizes.
    pub fn from_amplitudes(l: i64, start: i64, values: Vec<Complex64>) -> Result<Self> {
        if values.is_empty() {
            return Err(invalid("initial state is empty"));
        }
        let end = start + values.len() as i64 - 1;
        if start < -l || end > l {
            return Err(invalid("initial state does not fit in the window"));
        }
        let norm = values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(invalid("initial state must be non-zero"));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); (2 * l + 1) as usize];
        for (i, v) in values.into_iter().enumerate() {
            amps[(start + l) as usize + i] = v / norm;
        }
        Ok(WalkState {
            l,
            amps,
            support: (start, end),
            steps: 0,
        })
    }

    pub fn window(&self) -> i64 {
        self.l
    }

    pub fn support(&self) -> (i64, i64) {
        self.support
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn get(&self, m: i64) -> Complex64 {
        if m.abs() > self.l {
            Complex64::new(0.0, 0.0)
        } else {
            self.amps[(m + self.l) as usize]
        }
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `Σ_m (1 + |m|^p) |ψ_m|²`.
    pub fn moment(&self, p: f64) -> f64 {
        let (lo, hi) = self.support;
        (lo..=hi)
            .map(|m| (1.0 + (m.abs() as f64).powf(p)) * self.get(m).norm_sqr())
            .sum()
    }

    /// `(m, |ψ_m|²)` over the support.
    pub fn probabilities(&self) -> Vec<(i64, f64)> {
        let (lo, hi) = self.support;
        (lo..=hi).map(|m| (m, self.get(m).norm_sqr())).collect()
    }
}

/// One application of the walk operator.
pub fn step<C: Coins + ?Sized>(state: &WalkState, coins: &C) -> Result<WalkState> {
    let (lo, hi) = state.support;
    if lo - 2 < -state.l || hi + 2 > state.l {
        return Err(Error::BoundaryContact { step: state.steps + 1 });
    }
    let l = state.l;
    let mut amps = vec![Complex64::new(0.0, 0.0); state.amps.len()];
    for m in lo..=hi {
        let a = state.amps[(m + l) as usize];
        if a.norm_sqr() == 0.0 {
            continue;
        }
        let n = m.div_euclid(2);
        let c = coins.coin(n)?;
        let (up, down) = if m % 2 == 0 { (c.c11(), c.c21()) } else { (c.c12(), c.c22()) };
        amps[(2 * n + 2 + l) as usize] += up * a;
        amps[(2 * n - 1 + l) as usize] += down * a;
    }
    Ok(WalkState {
        l,
        amps,
        support: (lo - 2, hi + 2),
        steps: state.steps + 1,
    })
}

/// Window of the matrix of the walk operator in the column-convention used
/// for CMV matrices: row `2n` holds `c²¹_n` at column `2n-1` and `c¹¹_n` at
/// column `2n+2`; row `2n+1` holds `c²²_n` and `c¹²_n` at the same columns.
/// `step` applies the transpose of this matrix.
pub fn u_matrix_window<C: Coins + ?Sized>(
    coins: &C,
    rows: Range<i64>,
    cols: Range<i64>,
) -> Result<MatrixWindow> {
    let mut w = MatrixWindow::zeros(rows.clone(), cols.clone());
    for r in rows {
        let n = r.div_euclid(2);
        let c = coins.coin(n)?;
        let (left, right) = if r % 2 == 0 { (c.c21(), c.c11()) } else { (c.c22(), c.c12()) };
        if cols.contains(&(2 * n - 1)) {
            w.set(r, 2 * n - 1, left);
        }
        if cols.contains(&(2 * n + 2)) {
            w.set(r, 2 * n + 2, right);
        }
    }
    Ok(w)
}

/// Gauge phases `λ` and the Verblunsky coefficients of the equivalent
/// extended CMV matrix, `E = Λ* U Λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct CgmvData {
    /// `λ_j` for `j ∈ lambda_start .. lambda_start + lambdas.len()`.
    pub lambda_start: i64,
    pub lambdas: Vec<Complex64>,
    pub alphas: VerblunskySequence,
}

impl CgmvData {
    pub fn lambda(&self, j: i64) -> Option<Complex64> {
        usize::try_from(j - self.lambda_start)
            .ok()
            .and_then(|i| self.lambdas.get(i).copied())
    }
}

/// `α_{2n+1} = 0`, `α_{2n} = (λ_{2n}/λ_{2n-1}) c̄²¹_n` for coins `n ∈ range`,
/// with `λ_0 = λ_{-1} = 1`, `λ_{2n+2} = e^{-iσ¹_n} λ_{2n}`,
/// `λ_{2n+1} = e^{iσ²_n} λ_{2n-1}` and `c^{kk}_n = |c^{kk}_n| e^{iσ^k_n}`.
pub fn cgmv_coefficients<C: Coins + ?Sized>(coins: &C, range: Range<i64>) -> Result<CgmvData> {
    if range.start > 0 || range.end < 1 {
        return Err(invalid("coin range must contain 0"));
    }
    let table = CoinTable::tabulate(coins, range.clone())?;
    let mut sigma = Vec::with_capacity(table.coins.len());
    for (i, c) in table.coins.iter().enumerate() {
        if c.c11().norm() < 1e-14 || c.c22().norm() < 1e-14 {
            return Err(invalid(format!(
                "coin {} has a vanishing diagonal entry",
                range.start + i as i64
            )));
        }
        sigma.push((c.c11().arg(), c.c22().arg()));
    }
    let sig = |n: i64| sigma[(n - range.start) as usize];

    // λ_j for j = 2·start - 1 ..= 2·end
    let lambda_start = 2 * range.start - 1;
    let len = (2 * range.end - lambda_start + 1) as usize;
    let mut lambdas = vec![Complex64::new(0.0, 0.0); len];
    let idx = |j: i64| (j - lambda_start) as usize;
    lambdas[idx(0)] = Complex64::new(1.0, 0.0);
    lambdas[idx(-1)] = Complex64::new(1.0, 0.0);
    for n in 0..range.end {
        let (s1, s2) = sig(n);
        lambdas[idx(2 * n + 2)] = Complex64::from_polar(1.0, -s1) * lambdas[idx(2 * n)];
        if 2 * n + 1 <= 2 * range.end {
            lambdas[idx(2 * n + 1)] = Complex64::from_polar(1.0, s2) * lambdas[idx(2 * n - 1)];
        }
    }
    for n in (range.start..0).rev() {
        let (s1, s2) = sig(n);
        lambdas[idx(2 * n)] = Complex64::from_polar(1.0, s1) * lambdas[idx(2 * n + 2)];
        lambdas[idx(2 * n - 1)] = Complex64::from_polar(1.0, -s2) * lambdas[idx(2 * n + 1)];
    }

    let mut coeffs = Vec::with_capacity(2 * table.coins.len());
    for (i, c) in table.coins.iter().enumerate() {
        let n = range.start + i as i64;
        let a = lambdas[idx(2 * n)] / lambdas[idx(2 * n - 1)] * c.c21().conj();
        coeffs.push(VerblunskyCoeff::new(a)?);
        coeffs.push(VerblunskyCoeff::ZERO);
    }
    Ok(CgmvData {
        lambda_start,
        lambdas,
        alphas: VerblunskySequence::two_sided(2 * range.start, coeffs),
    })
}

/// The one-sided coefficients `α_{ω,0}, …, α_{ω,len-1}` of the Fibonacci walk:
/// `α_{2n} = sin θ_{ω_n}`, odd-index coefficients zero.
pub fn fibonacci_verblunsky(coins: &FibonacciCoins, len: usize) -> Result<Vec<VerblunskyCoeff>> {
    (0..len)
        .map(|j| {
            if j % 2 == 1 {
                Ok(VerblunskyCoeff::ZERO)
            } else {
                Ok(coins.angles.coupling(coins.omega.symbol(j as i64 / 2)?))
            }
        })
        .collect()
}

/// `M(n, p)` for `n = 0 .. values.len()`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSeries {
    pub p: f64,
    pub values: Vec<f64>,
}

impl MomentSeries {
    /// `M̃(N, p) = (1/N) Σ_{n<N} M(n, p)`.
    pub fn time_avg(&self, n: usize) -> Result<f64> {
        time_avg_moments(&self.values, n)
    }
}

pub fn time_avg_moments(values: &[f64], n: usize) -> Result<f64> {
    if n == 0 || n > values.len() {
        return Err(invalid(format!(
            "N = {n} is outside 1..={}",
            values.len()
        )));
    }
    Ok(values[..n].iter().sum::<f64>() / n as f64)
}

/// Evolves `initial` for `steps - 1` steps, recording `M(n, p)` for every
/// `p` in `ps` at `n = 0 .. steps`.
pub fn evolve_moments<C: Coins + ?Sized>(
    initial: &WalkState,
    coins: &C,
    steps: usize,
    ps: &[f64],
) -> Result<Vec<MomentSeries>> {
    if ps.iter().any(|&p| !(p > 0.0)) {
        return Err(invalid("moment order p must be positive"));
    }
    // the support after `steps` steps fixes which coins are needed
    let (lo, hi) = initial.support();
    let reach = 2 * steps as i64 + 2;
    let table = CoinTable::tabulate(coins, (lo - reach).div_euclid(2) - 1..(hi + reach).div_euclid(2) + 2)?;
    let mut series: Vec<MomentSeries> = ps
        .iter()
        .map(|&p| MomentSeries {
            p,
            values: Vec::with_capacity(steps),
        })
        .collect();
    let mut state = initial.clone();
    for n in 0..steps {
        if n > 0 {
            state = step(&state, &table)?;
        }
        for s in series.iter_mut() {
            s.values.push(state.moment(s.p));
        }
    }
    Ok(series)
}

/// Growth exponents read off a geometric ladder of time averages.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExponentFit {
    /// Least-squares slope of `log M̃` against `p log N` over the upper half.
    pub fit: f64,
    /// Smallest consecutive two-point slope over the upper half.
    pub minus: f64,
    /// Largest consecutive two-point slope over the upper half.
    pub plus: f64,
}

pub fn empirical_exponent(ns: &[f64], mtilde: &[f64], p: f64) -> Result<ExponentFit> {
    if ns.len() != mtilde.len() {
        return Err(invalid("ladder and values differ in length"));
    }
    if ns.len() < 4 {
        return Err(invalid("need at least 4 ladder points"));
    }
    if !(p > 0.0) {
        return Err(invalid("p must be positive"));
    }
    let half = ns.len() / 2;
    let xs: Vec<f64> = ns[half..].iter().map(|n| p * n.ln()).collect();
    let ys: Vec<f64> = mtilde[half..].iter().map(|m| m.ln()).collect();
    let fit = least_squares_slope(&xs, &ys)?;
    let slopes: Vec<f64> = (1..xs.len())
        .map(|i| (ys[i] - ys[i - 1]) / (xs[i] - xs[i - 1]))
        .collect();
    Ok(ExponentFit {
        fit,
        minus: slopes.iter().copied().fold(f64::INFINITY, f64::min),
        plus: slopes.iter().copied().fold(f64::NEG_INFINITY, f64::max),
    })
}

pub(crate) fn least_squares_slope(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if !(sxx > 0.0) || !ys.iter().all(|y| y.is_finite()) {
        return Err(invalid("degenerate ladder"));
    }
    Ok(sxy / sxx)
}

/// Power-law fit of `‖ξ‖_L` against the bracketing exponents at `z`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormFit {
    pub exponent: f64,
    pub gamma1: f64,
    pub upper: f64,
    /// `γ₁ - 0.1 ≤ exponent ≤ 2γ₂ + 1 + 0.1`.
    pub within_bounds: bool,
}

/// Fits `log ‖ξ‖_L` against `log L` for the solution started at `(1, 1)`.
pub fn norm_powerlaw_check(z: Complex64, coins: &FibonacciCoins, ladder: &[f64]) -> Result<NormFit> {
    if ladder.len() < 3 {
        return Err(invalid("need at least 3 ladder points"));
    }
    let lmax = ladder.iter().copied().fold(0.0, f64::max);
    let steps = lmax.floor() as usize + 1;
    let word = fibonacci_verblunsky(coins, steps)?;
    let one = Complex64::new(1.0, 0.0);
    let xi: Vec<Complex64> = solution_sequence(z, &word, (one, one), steps)?
        .into_iter()
        .map(|v| v.0)
        .collect();
    let xs: Vec<f64> = ladder.iter().map(|l| l.ln()).collect();
    let ys = ladder
        .iter()
        .map(|&l| solution_norm(&xi, l).map(f64::ln))
        .collect::<Result<Vec<_>>>()?;
    let exponent = least_squares_slope(&xs, &ys)?;
    let b = transport_constants(z, &coins.angles)?;
    let upper = 2.0 * b.gamma2 + 1.0;
    Ok(NormFit {
        exponent,
        gamma1: b.gamma1,
        upper,
        within_bounds: exponent >= b.gamma1 - 0.1 && exponent <= upper + 0.1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cmv::extended_cmv_window;
    use crate::fib::Symbol;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::{PI, TAU};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn fib_coins(ta: f64, tb: f64, omega: SubshiftPoint) -> FibonacciCoins {
        coin_assignment(omega, CoinAngles::new(ta, tb).unwrap())
    }

    fn random_unitary(rng: &mut ChaCha8Rng) -> Coin {
        // e^{iδ} (a, -b̄; b, ā) with |a|² + |b|² = 1
        let t: f64 = rng.gen_range(0.1..1.4);
        let a = Complex64::from_polar(t.cos(), rng.gen_range(0.0..TAU));
        let b = Complex64::from_polar(t.sin(), rng.gen_range(0.0..TAU));
        let d = Complex64::from_polar(1.0, rng.gen_range(0.0..TAU));
        Coin::new([[d * a, -d * b.conj()], [d * b, d * a.conj()]]).unwrap()
    }

    fn random_table(rng: &mut ChaCha8Rng, range: Range<i64>) -> CoinTable {
        let coins = range.clone().map(|_| random_unitary(rng)).collect();
        CoinTable { start: range.start, coins }
    }

    #[test]
    fn coin_validation() {
        assert!(Coin::new([[c(1.0, 0.0), c(0.1, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]]).is_err());
        let r = Coin::rotation(0.7);
        assert!(Coin::new(r.0).is_ok());
        assert_eq!(r.c21().re, 0.7f64.sin());
        assert_eq!(r.c12().re, -0.7f64.sin());
    }

    #[test]
    fn coin_assignment_follows_omega() {
        let coins = fib_coins(0.3, 0.9, SubshiftPoint::fixed_point());
        assert_eq!(coins.coin(0).unwrap(), Coin::rotation(0.3));
        assert_eq!(coins.coin(1).unwrap(), Coin::rotation(0.9));
        assert_eq!(coins.coin(2).unwrap(), Coin::rotation(0.3));
        let same = fib_coins(0.4, 0.4, SubshiftPoint::fixed_point());
        assert!((-10..10).all(|n| same.coin(n).unwrap() == Coin::rotation(0.4)));
        let shifted = fib_coins(0.3, 0.9, SubshiftPoint::shift(3));
        for n in 0..20 {
            assert_eq!(shifted.coin(n).unwrap(), coins.coin(n + 3).unwrap());
        }
    }

    #[test]
    fn identity_coin_shifts_right() {
        let coins = fib_coins(0.0, 0.0, SubshiftPoint::fixed_point());
        let mut s = WalkState::localized_for(0, 10).unwrap();
        for n in 1..=10 {
            s = step(&s, &coins).unwrap();
            assert_eq!(s.get(2 * n), c(1.0, 0.0));
            assert!((s.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn boundary_contact_is_an_error() {
        let coins = fib_coins(0.3, 0.2, SubshiftPoint::fixed_point());
        let mut s = WalkState::localized(6, 0).unwrap();
        let mut err = None;
        for _ in 0..5 {
            match step(&s, &coins) {
                Ok(n) => s = n,
                Err(e) => {
                    err = Some(e);
                    break;
                }
            }
        }
        assert_eq!(err, Some(Error::BoundaryContact { step: 4 }));
    }

    #[test]
    fn unitarity_on_random_states() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let table = random_table(&mut rng, -40..40);
        for _ in 0..100 {
            let vals: Vec<Complex64> = (0..9).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let mut s = WalkState::from_amplitudes(60, -4, vals).unwrap();
            for _ in 0..5 {
                s = step(&s, &table).unwrap();
                assert!((s.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn step_is_transpose_of_display() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let table = random_table(&mut rng, -20..20);
        let w = u_matrix_window(&table, -20..20, -20..20).unwrap();
        for k in -16..16 {
            let s = step(&WalkState::localized(24, k).unwrap(), &table).unwrap();
            for m in -20..20 {
                assert_eq!(s.get(m), w.get(k, m), "k={k} m={m}");
            }
        }
    }

    #[test]
    fn display_is_local_and_real_for_rotations() {
        let coins = fib_coins(PI / 3.0, PI / 6.0, SubshiftPoint::fixed_point());
        let w = u_matrix_window(&coins, -20..20, -20..20).unwrap();
        for r in -20..20 {
            for cc in -20..20 {
                let v = w.get(r, cc);
                assert_eq!(v.im, 0.0);
                if (r - cc).abs() > 2 {
                    assert_eq!(v, c(0.0, 0.0));
                }
            }
        }
        // row of |0⟩⊗↑: c²¹_0 at e_{-1}, c¹¹_0 at e_2
        assert_eq!(w.get(0, -1).re, (PI / 3.0).sin());
        assert_eq!(w.get(0, 2).re, (PI / 3.0).cos());
    }

    #[test]
    fn rotation_coins_give_unit_gauge() {
        let coins = fib_coins(PI / 3.0, PI / 6.0, SubshiftPoint::fixed_point());
        let d = cgmv_coefficients(&coins, -8..8).unwrap();
        assert!(d.lambdas.iter().all(|&l| (l - c(1.0, 0.0)).norm() < 1e-15));
        let a = &d.alphas;
        assert!((a.get(0).unwrap().alpha().re - (PI / 3.0).sin()).abs() < 1e-15);
        assert!((a.get(2).unwrap().alpha().re - (PI / 6.0).sin()).abs() < 1e-15);
        assert!((a.get(4).unwrap().alpha().re - (PI / 3.0).sin()).abs() < 1e-15);
        assert!((-15..15).filter(|j| j % 2 != 0).all(|j| a.get(j).unwrap() == VerblunskyCoeff::ZERO));
        let free = cgmv_coefficients(&fib_coins(0.0, 0.0, SubshiftPoint::fixed_point()), -4..4).unwrap();
        assert!(free.alphas.as_slice().iter().all(|x| x.alpha().norm() == 0.0));
    }

    #[test]
    fn display_equals_extended_cmv_for_rotations() {
        for omega in [SubshiftPoint::fixed_point(), SubshiftPoint::shift(1), SubshiftPoint::shift(5)] {
            let coins = fib_coins(PI / 3.0, PI / 6.0, omega);
            let d = cgmv_coefficients(&coins, -40..40).unwrap();
            let u = u_matrix_window(&coins, -32..32, -32..32).unwrap();
            let e = extended_cmv_window(&d.alphas, -32..32, -32..32).unwrap();
            assert!(u.max_abs_diff(&e) <= 1e-12);
        }
    }

    #[test]
    fn gauge_conjugation_for_general_coins() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let table = random_table(&mut rng, -20..20);
        let d = cgmv_coefficients(&table, -20..20).unwrap();
        assert_eq!(d.lambda(0), Some(c(1.0, 0.0)));
        assert_eq!(d.lambda(-1), Some(c(1.0, 0.0)));
        let u = u_matrix_window(&table, -30..30, -30..30).unwrap();
        let e = extended_cmv_window(&d.alphas, -30..30, -30..30).unwrap();
        for r in -30..30 {
            for cc in -30..30 {
                let conj = d.lambda(r).unwrap().conj() * u.get(r, cc) * d.lambda(cc).unwrap();
                assert!((conj - e.get(r, cc)).norm() < 1e-12, "({r}, {cc})");
            }
        }
    }

    #[test]
    fn zero_diagonal_is_rejected() {
        let flip = Coin::new([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]]).unwrap();
        let table = CoinTable { start: -2, coins: vec![flip; 4] };
        assert!(cgmv_coefficients(&table, -2..2).is_err());
    }

    #[test]
    fn moment_examples() {
        let s = WalkState::localized(10, 0).unwrap();
        assert_eq!(s.moment(1.0), 1.0);
        assert_eq!(s.moment(3.5), 1.0);
        let coins = fib_coins(0.0, 0.0, SubshiftPoint::fixed_point());
        let series = evolve_moments(&WalkState::localized_for(0, 50).unwrap(), &coins, 50, &[2.0]).unwrap();
        for (n, m) in series[0].values.iter().enumerate() {
            assert_eq!(*m, 1.0 + (2.0 * n as f64).powi(2));
        }
    }

    #[test]
    fn time_average_examples() {
        assert_eq!(time_avg_moments(&[3.0, 5.0], 1).unwrap(), 3.0);
        assert_eq!(time_avg_moments(&[2.5; 7], 7).unwrap(), 2.5);
        assert!(time_avg_moments(&[1.0], 2).is_err());
        assert!(time_avg_moments(&[1.0], 0).is_err());
        let coins = fib_coins(0.0, 0.0, SubshiftPoint::fixed_point());
        let series = evolve_moments(&WalkState::localized_for(0, 64).unwrap(), &coins, 64, &[2.0]).unwrap();
        for n in [1usize, 5, 64] {
            let closed = (0..n).map(|k| 1.0 + 4.0 * (k * k) as f64).sum::<f64>() / n as f64;
            assert_eq!(series[0].time_avg(n).unwrap(), closed);
        }
    }

    #[test]
    fn ballistic_exponent_approaches_one() {
        let ns: Vec<f64> = (4..=10).map(|e| 2f64.powi(e)).collect();
        let mt: Vec<f64> = ns
            .iter()
            .map(|&n| (0..n as usize).map(|k| 1.0 + 4.0 * (k * k) as f64).sum::<f64>() / n)
            .collect();
        let f = empirical_exponent(&ns, &mt, 2.0).unwrap();
        assert!((f.fit - 1.0).abs() < 0.05);
        assert!(f.minus <= f.fit + 1e-12 && f.fit <= f.plus + 1e-12);
        let flat = empirical_exponent(&ns, &vec![3.0; ns.len()], 2.0).unwrap();
        assert_eq!(flat.fit, 0.0);
        assert!(empirical_exponent(&ns[..3], &mt[..3], 2.0).is_err());
    }

    #[test]
    fn moments_increase_with_p() {
        let coins = fib_coins(PI / 3.0, PI / 6.0, SubshiftPoint::fixed_point());
        let series = evolve_moments(&WalkState::localized_for(0, 40).unwrap(), &coins, 40, &[1.0, 2.0, 3.0]).unwrap();
        for n in 1..40 {
            assert!(series[0].values[n] <= series[1].values[n]);
            assert!(series[1].values[n] <= series[2].values[n]);
            assert!(series[0].values[n] >= 1.0);
        }
    }

    #[test]
    fn walk_solutions_have_equal_moduli() {
        let coins = fib_coins(PI / 3.0, PI / 6.0, SubshiftPoint::fixed_point());
        let word = fibonacci_verblunsky(&coins, 1000).unwrap();
        assert_eq!(word[0].alpha().re, (PI / 3.0).sin());
        assert_eq!(word[1], VerblunskyCoeff::ZERO);
        assert_eq!(word[2].alpha().re, coins.angles.coupling(Symbol::B).alpha().re);
        let z = Complex64::from_polar(1.0, 0.77);
        for (x, y) in solution_sequence(z, &word, (c(1.0, 0.0), c(0.0, 1.0)), 1000).unwrap() {
            assert!((x.norm() - y.norm()).abs() <= 1e-10 * x.norm().max(1.0));
        }
    }

    #[test]
    fn free_norm_grows_like_sqrt() {
        let coins = fib_coins(0.0, 0.0, SubshiftPoint::fixed_point());
        let ladder: Vec<f64> = (4..=12).map(|e| 2f64.powi(e)).collect();
        let f = norm_powerlaw_check(c(1.0, 0.0), &coins, &ladder).unwrap();
        assert!((f.exponent - 0.5).abs() < 0.01);
        assert!(f.within_bounds);
    }

    #[test]
    fn fibonacci_norm_respects_lower_exponent() {
        let ang = CoinAngles::new(PI / 3.0, PI / 6.0).unwrap();
        let coins = coin_assignment(SubshiftPoint::fixed_point(), ang);
        let approx = crate::trace::spectrum_approx(&ang, 20, 2000).unwrap();
        let ladder: Vec<f64> = (4..=12).map(|e| 2f64.powi(e)).collect();
        let pts = approx.points();
        for &t in pts.iter().step_by((pts.len() / 5).max(1)) {
            let f = norm_powerlaw_check(Complex64::from_polar(1.0, t), &coins, &ladder).unwrap();
            assert!(f.exponent >= f.gamma1 - 0.1, "t={t}: {}", f.exponent);
            assert!(f.within_bounds);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn rotation_walk_preserves_norm(ta in -1.5f64..1.5, tb in -1.5f64..1.5, j in 0u64..50) {
            let coins = fib_coins(ta, tb, SubshiftPoint::shift(j));
            let mut s = WalkState::localized_for(1, 30).unwrap();
            for _ in 0..30 {
                s = step(&s, &coins).unwrap();
            }
            prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        }
    }
}

//! Zero sets and counting measures on the unit circle, in the angle variable.

use std::f64::consts::TAU;

use crate::error::{invalid, Error, Result};

/// Grid points per expected zero on the first scan.
pub const GRID_PER_ZERO: usize = 16;
/// Bracket width at which bisection stops.
pub const BISECTION_TOL: f64 = 1e-12;
const MAX_REFINEMENTS: usize = 3;
const MIN_GAP: f64 = 1e-9;

/// Sorted zero angles in `[0, 2π)` with `|f|` at each.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleZeroSet {
    pub angles: Vec<f64>,
    pub residuals: Vec<f64>,
}

impl CircleZeroSet {
    /// Sorts by angle after reducing mod 2π.
    pub fn new(pairs: Vec<(f64, f64)>) -> Self {
        let mut pairs: Vec<(f64, f64)> = pairs
            .into_iter()
            .map(|(a, r)| (reduce(a), r))
            .collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        CircleZeroSet {
            angles: pairs.iter().map(|p| p.0).collect(),
            residuals: pairs.iter().map(|p| p.1).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.angles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.angles.is_empty()
    }

    /// Smallest cyclic gap between neighbours; `2π` for a single zero.
    pub fn min_gap(&self) -> f64 {
        let n = self.angles.len();
        if n < 2 {
            return TAU;
        }
        (0..n)
            .map(|i| {
                let next = if i + 1 < n {
                    self.angles[i + 1]
                } else {
                    self.angles[0] + TAU
                };
                next - self.angles[i]
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn is_simple(&self) -> bool {
        self.min_gap() > MIN_GAP
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// Equal-weight measure on a finite set of angles.
#[derive(Clone, Debug, PartialEq)]
pub struct CircleMeasure {
    support: Vec<f64>,
}

impl CircleMeasure {
    pub fn new(angles: &[f64]) -> Result<Self> {
        if angles.is_empty() {
            return Err(invalid("a counting measure needs at least one point"));
        }
        let mut support: Vec<f64> = angles.iter().map(|&a| reduce(a)).collect();
        support.sort_by(f64::total_cmp);
        Ok(CircleMeasure { support })
    }

    pub fn from_zeros(z: &CircleZeroSet) -> Result<Self> {
        Self::new(&z.angles)
    }

    pub fn support(&self) -> &[f64] {
        &self.support
    }

    pub fn weight(&self) -> f64 {
        1.0 / self.support.len() as f64
    }

    /// Mass of `[0, t]`.
    pub fn cdf(&self, t: f64) -> f64 {
        let k = self.support.partition_point(|&a| a <= t);
        k as f64 / self.support.len() as f64
    }

    /// `sup_t |F(t) - G(t)|` with both distribution functions anchored at 0.
    pub fn kolmogorov(&self, other: &CircleMeasure) -> f64 {
        self.support
            .iter()
            .chain(other.support.iter())
            .map(|&t| (self.cdf(t) - other.cdf(t)).abs())
            .fold(0.0, f64::max)
    }

    pub fn hausdorff(&self, other: &CircleMeasure) -> f64 {
        hausdorff(&self.support, &other.support)
    }
}

/// Kolmogorov and support-Hausdorff distances, in that order.
pub fn measure_distance(mu: &CircleMeasure, nu: &CircleMeasure) -> (f64, f64) {
    (mu.kolmogorov(nu), mu.hausdorff(nu))
}

pub fn reduce(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    // rem_euclid can round up to exactly 2π
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Arc-length distance between two angles.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d)
}

/// Hausdorff distance between finite angle sets under the arc-length metric.
/// Infinite if exactly one set is empty.
pub fn hausdorff(a: &[f64], b: &[f64]) -> f64 {
    match (a.is_empty(), b.is_empty()) {
        (true, true) => return 0.0,
        (true, false) | (false, true) => return f64::INFINITY,
        _ => {}
    }
    let one_way = |x: &[f64], y: &[f64]| {
        x.iter()
            .map(|&p| y.iter().map(|&q| circular_distance(p, q)).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}

/// Whether two equal-size angle sets alternate around the circle.
pub fn interlaced(a: &[f64], b: &[f64]) -> Result<bool> {
    if a.len() != b.len() {
        return Err(invalid(format!(
            "interlacing needs equal counts, got {} and {}",
            a.len(),
            b.len()
        )));
    }
    let mut tagged: Vec<(f64, bool)> = a
        .iter()
        .map(|&t| (reduce(t), false))
        .chain(b.iter().map(|&t| (reduce(t), true)))
        .collect();
    tagged.sort_by(|x, y| x.0.total_cmp(&y.0));
    let n = tagged.len();
    for i in 0..n {
        let (t0, s0) = tagged[i];
        let (t1, s1) = tagged[(i + 1) % n];
        if s0 == s1 || (n > 1 && circular_distance(t0, t1) == 0.0) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Zeros of a real function on `[0, 2π]` whose zero set is periodic mod 2π.
///
/// `f` need not be periodic itself (an antiperiodic `f` has `f(2π) = -f(0)`);
/// it is only sampled on the closed interval and zeros are merged mod 2π.
/// The grid starts at `16 · expected` points and is refined ×4 up to three
/// times until exactly `expected` sign changes are found.
pub fn sign_change_zeros<F: Fn(f64) -> f64>(f: F, expected: usize) -> Result<CircleZeroSet> {
    if expected == 0 {
        return Err(invalid("expected zero count must be positive"));
    }
    let mut grid = GRID_PER_ZERO * expected;
    let mut last = 0;
    for _ in 0..=MAX_REFINEMENTS {
        let zeros = scan(&f, grid);
        if zeros.len() == expected {
            return Ok(zeros);
        }
        last = zeros.len();
        grid *= 4;
    }
    Err(Error::Inconsistent(format!(
        "found {last} sign changes, expected {expected}"
    )))
}

fn scan<F: Fn(f64) -> f64>(f: &F, grid: usize) -> CircleZeroSet {
    let h = TAU / grid as f64;
    let samples: Vec<f64> = (0..=grid).map(|i| f(i as f64 * h)).collect();
    let mut found: Vec<(f64, f64)> = Vec::new();
    for i in 0..grid {
        let (a, b) = (i as f64 * h, (i + 1) as f64 * h);
        let (fa, fb) = (samples[i], samples[i + 1]);
        if fa == 0.0 {
            found.push((a, 0.0));
        } else if fa.signum() != fb.signum() && fb != 0.0 {
            let t = bisect(f, a, b, fa);
            found.push((t, f(t).abs()));
        }
    }
    if samples[grid] == 0.0 {
        found.push((TAU, 0.0));
    }
    let mut set = CircleZeroSet::new(found);
    dedup_cyclic(&mut set);
    set
}

fn dedup_cyclic(set: &mut CircleZeroSet) {
    let mut keep_a = Vec::with_capacity(set.len());
    let mut keep_r = Vec::with_capacity(set.len());
    for (&a, &r) in set.angles.iter().zip(&set.residuals) {
        if keep_a.last().is_some_and(|&p: &f64| a - p < BISECTION_TOL * 4.0) {
            continue;
        }
        keep_a.push(a);
        keep_r.push(r);
    }
    if keep_a.len() > 1 && keep_a[0] + TAU - keep_a[keep_a.len() - 1] < BISECTION_TOL * 4.0 {
        keep_a.pop();
        keep_r.pop();
    }
    set.angles = keep_a;
    set.residuals = keep_r;
}

/// Bisects a sign change of `f` on `[a, b]` down to [`BISECTION_TOL`].
pub fn bisect<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    while b - a > BISECTION_TOL {
        let m = 0.5 * (a + b);
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Maximizer of a unimodal `f` on `[a, b]` by golden-section search.
pub fn golden_max<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > BISECTION_TOL {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    0.5 * (a + b)
}

use std::ops::Range;

use num_complex::Complex64;

use super::verblunsky::{VerblunskyCoeff, VerblunskySequence};
use crate::error::{invalid, Result};

/// Dense window of a (possibly bi-infinite) matrix. Global row `row_start + i`
/// and column `col_start + j` live at `data[i * cols + j]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixWindow {
    pub row_start: i64,
    pub col_start: i64,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl MatrixWindow {
    pub fn zeros(rows: Range<i64>, cols: Range<i64>) -> Self {
        let r = (rows.end - rows.start).max(0) as usize;
        let c = (cols.end - cols.start).max(0) as usize;
        MatrixWindow {
            row_start: rows.start,
            col_start: cols.start,
            rows: r,
            cols: c,
            data: vec![Complex64::new(0.0, 0.0); r * c],
        }
    }

    pub fn row_range(&self) -> Range<i64> {
        self.row_start..self.row_start + self.rows as i64
    }

    pub fn col_range(&self) -> Range<i64> {
        self.col_start..self.col_start + self.cols as i64
    }

    /// Entry at global indices; zero outside the window.
    pub fn get(&self, r: i64, c: i64) -> Complex64 {
        if self.row_range().contains(&r) && self.col_range().contains(&c) {
            let i = (r - self.row_start) as usize;
            let j = (c - self.col_start) as usize;
            self.data[i * self.cols + j]
        } else {
            Complex64::new(0.0, 0.0)
        }
    }

    pub fn set(&mut self, r: i64, c: i64, v: Complex64) {
        let i = (r - self.row_start) as usize;
        let j = (c - self.col_start) as usize;
        assert!(i < self.rows && j < self.cols, "({r}, {c}) outside window");
        self.data[i * self.cols + j] = v;
    }

    /// Product over the shared index range `self.cols == other.rows`.
    pub fn matmul(&self, other: &MatrixWindow) -> Result<MatrixWindow> {
        if self.col_range() != other.row_range() {
            return Err(invalid("inner index ranges differ"));
        }
        let mut out = MatrixWindow::zeros(self.row_range(), other.col_range());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out.data[i * out.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn adjoint(&self) -> MatrixWindow {
        let mut out = MatrixWindow::zeros(self.col_range(), self.row_range());
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    /// Largest entrywise difference over the union of both windows.
    pub fn max_abs_diff(&self, other: &MatrixWindow) -> f64 {
        let r0 = self.row_start.min(other.row_start);
        let r1 = self.row_range().end.max(other.row_range().end);
        let c0 = self.col_start.min(other.col_start);
        let c1 = self.col_range().end.max(other.col_range().end);
        let mut m: f64 = 0.0;
        for r in r0..r1 {
            for c in c0..c1 {
                m = m.max((self.get(r, c) - other.get(r, c)).norm());
            }
        }
        m
    }
}

/// Entry `(r, c)` of the CMV matrix with coefficient lookup `coef`.
/// Only the coefficients that actually enter the entry are requested.
fn cmv_entry<F>(r: i64, c: i64, coef: &F) -> Result<Complex64>
where
    F: Fn(i64) -> Result<(Complex64, f64)>,
{
    let even = r.rem_euclid(2) == 0;
    let k2 = r - r.rem_euclid(2);
    let a = |n: i64| coef(n).map(|x| x.0);
    let rho = |n: i64| coef(n).map(|x| x.1);
    let v = match (even, c - k2) {
        (true, -1) => a(k2)?.conj() * rho(k2 - 1)?,
        (true, 0) => -a(k2)?.conj() * a(k2 - 1)?,
        (true, 1) => a(k2 + 1)?.conj() * rho(k2)?,
        (true, 2) => Complex64::new(rho(k2 + 1)? * rho(k2)?, 0.0),
        (false, -1) => Complex64::new(rho(k2)? * rho(k2 - 1)?, 0.0),
        (false, 0) => -a(k2 - 1)? * rho(k2)?,
        (false, 1) => -a(k2 + 1)?.conj() * a(k2)?,
        (false, 2) => -a(k2)? * rho(k2 + 1)?,
        _ => Complex64::new(0.0, 0.0),
    };
    Ok(v)
}

/// The `n × n` truncation of the one-sided CMV matrix built from
/// `α_0 .. α_{n-1}`, with the convention `α_{-1} = -1`.
pub fn cmv_finite(alphas: &[VerblunskyCoeff]) -> Result<MatrixWindow> {
    let n = alphas.len() as i64;
    if n == 0 {
        return Err(invalid("need at least one coefficient"));
    }
    let coef = |j: i64| -> Result<(Complex64, f64)> {
        if j == -1 {
            Ok((Complex64::new(-1.0, 0.0), 0.0))
        } else {
            let c = alphas
                .get(j as usize)
                .ok_or_else(|| invalid(format!("α_{j} is beyond the supplied coefficients")))?;
            Ok((c.alpha(), c.rho()))
        }
    };
    let mut m = MatrixWindow::zeros(0..n, 0..n);
    for r in 0..n {
        for c in (r - 2).max(0)..(r + 3).min(n) {
            m.set(r, c, cmv_entry(r, c, &coef)?);
        }
    }
    Ok(m)
}

/// A window of the extended CMV matrix. Each entry reads only the
/// coefficients it depends on, so `seq` must cover those indices.
pub fn extended_cmv_window(
    seq: &VerblunskySequence,
    rows: Range<i64>,
    cols: Range<i64>,
) -> Result<MatrixWindow> {
    let coef = |j: i64| seq.get(j).map(|c| (c.alpha(), c.rho()));
    let mut m = MatrixWindow::zeros(rows.clone(), cols.clone());
    for r in rows {
        for c in cols.clone() {
            if (c - r).abs() <= 3 {
                m.set(r, c, cmv_entry(r, c, &coef)?);
            }
        }
    }
    Ok(m)
}

/// `L = Θ_0 ⊕ Θ_2 ⊕ ⋯` and `M = 1 ⊕ Θ_1 ⊕ Θ_3 ⊕ ⋯` with
/// `Θ_j = (ᾱ_j, ρ_j; ρ_j, -α_j)`, both `n × n`.
pub fn cmv_lm_factors(alphas: &[VerblunskyCoeff]) -> (MatrixWindow, MatrixWindow) {
    let n = alphas.len() as i64;
    let mut l = MatrixWindow::zeros(0..n, 0..n);
    let mut m = MatrixWindow::zeros(0..n, 0..n);
    let place = |w: &mut MatrixWindow, j: i64| {
        let c = alphas[j as usize];
        let rho = Complex64::new(c.rho(), 0.0);
        w.set(j, j, c.alpha().conj());
        if j + 1 < n {
            w.set(j, j + 1, rho);
            w.set(j + 1, j, rho);
            w.set(j + 1, j + 1, -c.alpha());
        }
    };
    let mut j = 0;
    while j < n {
        place(&mut l, j);
        j += 2;
    }
    m.set(0, 0, Complex64::new(1.0, 0.0));
    let mut j = 1;
    while j < n {
        place(&mut m, j);
        j += 2;
    }
    (l, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_alphas(rng: &mut ChaCha8Rng, n: usize) -> Vec<VerblunskyCoeff> {
        (0..n)
            .map(|_| {
                let r = rng.gen_range(0.0..0.9);
                VerblunskyCoeff::new(Complex64::from_polar(r, rng.gen_range(0.0..6.3))).unwrap()
            })
            .collect()
    }

    #[test]
    fn free_cmv_shifts_by_two() {
        let m = cmv_finite(&vec![VerblunskyCoeff::ZERO; 4]).unwrap();
        let mut want = MatrixWindow::zeros(0..4, 0..4);
        for (r, cc) in [(0, 2), (1, 0), (3, 1)] {
            want.set(r, cc, c(1.0, 0.0));
        }
        assert_eq!(m.max_abs_diff(&want), 0.0);
    }

    #[test]
    fn top_left_entries() {
        let a: Vec<_> = [c(0.3, 0.1), c(-0.2, 0.4), c(0.5, 0.0)]
            .iter()
            .map(|&x| VerblunskyCoeff::new(x).unwrap())
            .collect();
        let m = cmv_finite(&a).unwrap();
        assert!((m.get(0, 0) - a[0].alpha().conj()).norm() < 1e-15);
        assert!((m.get(0, 1) - a[1].alpha().conj() * a[0].rho()).norm() < 1e-15);
        assert!((m.get(0, 2) - c(a[1].rho() * a[0].rho(), 0.0)).norm() < 1e-15);
        assert!((m.get(1, 0) - c(a[0].rho(), 0.0)).norm() < 1e-15);
        assert!((m.get(1, 1) + a[1].alpha().conj() * a[0].alpha()).norm() < 1e-15);
    }

    #[test]
    fn lm_factorization_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=8 {
            let a = random_alphas(&mut rng, n);
            let (l, m) = cmv_lm_factors(&a);
            let lm = l.matmul(&m).unwrap();
            assert!(lm.max_abs_diff(&cmv_finite(&a).unwrap()) < 1e-14, "n={n}");
        }
    }

    #[test]
    fn interior_rows_are_orthonormal() {
        // two-sided window: rows and columns away from the edges see the full band
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let seq = VerblunskySequence::two_sided(-20, random_alphas(&mut rng, 40));
        let w = extended_cmv_window(&seq, -16..16, -18..18).unwrap();
        let p = w.matmul(&w.adjoint()).unwrap();
        for r in -16..16 {
            for cc in -16..16 {
                let want = if r == cc { 1.0 } else { 0.0 };
                assert!((p.get(r, cc) - c(want, 0.0)).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn missing_coefficient_is_reported() {
        let seq = VerblunskySequence::two_sided(0, vec![VerblunskyCoeff::ZERO; 4]);
        assert!(extended_cmv_window(&seq, 0..2, 0..2).is_err());
        assert!(extended_cmv_window(&seq, 1..3, 1..3).is_ok());
    }
}

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::poly::Poly;
use crate::error::{invalid, Error, Result};

const MAX_ITER: usize = 2000;
const RESIDUAL_TOL: f64 = 1e-10;

/// All roots of `p` by Aberth–Ehrlich iteration, started from equispaced
/// points on the unit circle and finished with Newton polishing.
///
/// Every returned root satisfies `|p(r)| ≤ 1e-10 · ‖p‖₁`, otherwise the
/// call fails with `NoConvergence`.
pub fn poly_roots(p: &Poly) -> Result<Vec<Complex64>> {
    solve(p, false)
}

/// Like [`poly_roots`] for polynomials known to vanish only on `∂𝔻`: each
/// iterate is projected back to the circle before polishing.
pub fn poly_roots_on_circle(p: &Poly) -> Result<Vec<Complex64>> {
    solve(p, true)
}

fn solve(p: &Poly, on_circle: bool) -> Result<Vec<Complex64>> {
    let lead = p.leading();
    if lead.norm() == 0.0 || !lead.is_finite() {
        return Err(invalid("polynomial has a vanishing or non-finite leading coefficient"));
    }
    let n = p.degree();
    if n == 0 {
        return Ok(Vec::new());
    }
    let monic = p.scale(1.0 / lead);
    let scale = monic.norm1();

    // the angular offset avoids starting on a symmetry axis of the roots
    let offset = 0.4 * TAU / n as f64;
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64 + offset))
        .collect();

    let mut iterations = 0;
    for it in 0..MAX_ITER {
        iterations = it + 1;
        let mut max_step: f64 = 0.0;
        for k in 0..n {
            let (v, d) = monic.eval_with_derivative(z[k]);
            if v.norm() == 0.0 {
                continue;
            }
            let ratio = v / d;
            let mut s = Complex64::new(0.0, 0.0);
            for j in 0..n {
                if j != k {
                    s += 1.0 / (z[k] - z[j]);
                }
            }
            let w = ratio / (1.0 - ratio * s);
            if !w.is_finite() {
                continue;
            }
            z[k] -= w;
            if on_circle {
                let r = z[k].norm();
                z[k] /= r;
            }
            max_step = max_step.max(w.norm() / z[k].norm().max(1.0));
        }
        if max_step < 1e-15 {
            break;
        }
    }

    let mut worst: f64 = 0.0;
    for r in z.iter_mut() {
        for _ in 0..3 {
            let (v, d) = monic.eval_with_derivative(*r);
            if d.norm() == 0.0 || v.norm() == 0.0 {
                break;
            }
            let next = *r - v / d;
            let next = if on_circle { next / next.norm() } else { next };
            if monic.eval(next).norm() < v.norm() {
                *r = next;
            } else {
                break;
            }
        }
        worst = worst.max(monic.eval(*r).norm() / scale);
    }
    if !(worst <= RESIDUAL_TOL) {
        return Err(Error::NoConvergence {
            iterations,
            residual: worst,
        });
    }
    Ok(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sorted_by_angle(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.arg().rem_euclid(TAU).total_cmp(&b.arg().rem_euclid(TAU)));
        v
    }

    #[test]
    fn roots_of_unity() {
        for n in [1usize, 2, 5, 13, 34] {
            let mut coeffs = vec![c(0.0, 0.0); n + 1];
            coeffs[0] = c(-1.0, 0.0);
            coeffs[n] = c(1.0, 0.0);
            let roots = sorted_by_angle(poly_roots(&Poly::new(coeffs)).unwrap());
            for (k, r) in roots.iter().enumerate() {
                let want = Complex64::from_polar(1.0, TAU * k as f64 / n as f64);
                assert!((r - want).norm() < 1e-12, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn quadratic_with_known_roots() {
        // (z - 2)(z + i) = z² + (i - 2) z - 2i
        let p = Poly::new(vec![c(0.0, -2.0), c(-2.0, 1.0), c(1.0, 0.0)]);
        let roots = poly_roots(&p).unwrap();
        assert!(roots.iter().any(|r| (r - c(2.0, 0.0)).norm() < 1e-12));
        assert!(roots.iter().any(|r| (r - c(0.0, -1.0)).norm() < 1e-12));
    }

    #[test]
    fn circle_variant_projects() {
        let mut coeffs = vec![c(0.0, 0.0); 22];
        coeffs[0] = c(1.0, 0.0);
        coeffs[21] = c(1.0, 0.0);
        for r in poly_roots_on_circle(&Poly::new(coeffs)).unwrap() {
            assert!((r.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_zero_leading() {
        assert!(poly_roots(&Poly::from_real(&[1.0, 0.0])).is_err());
        assert_eq!(poly_roots(&Poly::from_real(&[3.0])).unwrap(), vec![]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn vieta_relations(coeffs in proptest::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 2..12)) {
            let mut cs: Vec<Complex64> = coeffs.iter().map(|&(a, b)| c(a, b)).collect();
            cs.push(c(1.0, 0.0));
            let p = Poly::new(cs.clone());
            let roots = poly_roots(&p).unwrap();
            let n = roots.len();
            let sum: Complex64 = roots.iter().sum();
            let prod: Complex64 = roots.iter().product();
            prop_assert!((sum + cs[n - 1]).norm() < 1e-8);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            prop_assert!((prod * sign - cs[0]).norm() < 1e-8);
        }
    }
}

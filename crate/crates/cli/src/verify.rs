//! Invariant suites behind `fibcmv verify`. A failing check is a row of the
//! report, never an error of the command.

use std::f64::consts::{PI, TAU};

use fibcmv::cmv::{
    cmv_finite, cmv_lm_factors, extended_cmv_window, reversal_norm_pair, solution_sequence, transfer_single,
    VerblunskyCoeff,
};
use fibcmv::fib::{factor_census, fib_number, fib_word, nonrepeatable_by_construction, FixedPoint, SubshiftPoint};
use fibcmv::ising::{
    band_report, bands, fibonacci_couplings, partition_bruteforce, partition_transfer, zero_chain, CouplingPattern,
    IsingRing,
};
use fibcmv::trace::{fricke_vogt, half_trace_direct, initial_traces, nests_norms, trace_orbit, CoinAngles};
use fibcmv::walk::{
    cgmv_coefficients, coin_assignment, empirical_exponent, evolve_moments, step, u_matrix_window, WalkState,
};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{Map, Value};

use crate::args::{Suite, VerifyArgs};
use crate::output::{Cell, Output};

type Outcome = fibcmv::Result<(f64, String)>;

struct Check {
    suite: Suite,
    name: &'static str,
    tolerance: f64,
    run: fn(&mut ChaCha8Rng, bool) -> Outcome,
}

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::All => "all",
        Suite::Fib => "fib",
        Suite::Cmv => "cmv",
        Suite::Trace => "trace",
        Suite::Walk => "walk",
        Suite::Ising => "ising",
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn golden() -> fibcmv::Result<CoinAngles> {
    CoinAngles::new(PI / 3.0, PI / 6.0)
}

fn unit(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..TAU))
}

fn fib_ring(l: usize) -> fibcmv::Result<IsingRing> {
    fibonacci_couplings(CouplingPattern::real_j(1.0, 0.5), SubshiftPoint::fixed_point(), l, 1.0, 1.0)
}

fn checks() -> Vec<Check> {
    vec![
        Check { suite: Suite::Fib, name: "word_lengths", tolerance: 0.0, run: word_lengths },
        Check { suite: Suite::Fib, name: "factor_complexity", tolerance: 0.0, run: factor_complexity },
        Check { suite: Suite::Fib, name: "unique_nonrepeatable", tolerance: 0.0, run: unique_nonrepeatable },
        Check { suite: Suite::Cmv, name: "transfer_det", tolerance: 1e-12, run: transfer_det },
        Check { suite: Suite::Cmv, name: "equal_moduli", tolerance: 1e-10, run: equal_moduli },
        Check { suite: Suite::Cmv, name: "reversal_norms", tolerance: 1e-10, run: reversal_norms },
        Check { suite: Suite::Cmv, name: "lm_factorization", tolerance: 1e-13, run: lm_factorization },
        Check { suite: Suite::Trace, name: "orbit_vs_direct", tolerance: 1e-9, run: orbit_vs_direct },
        Check { suite: Suite::Trace, name: "invariant_drift", tolerance: 1e-8, run: invariant_drift },
        Check { suite: Suite::Trace, name: "nest_bounds", tolerance: 1.0, run: nest_bounds },
        Check { suite: Suite::Walk, name: "cgmv_window", tolerance: 1e-12, run: cgmv_window },
        Check { suite: Suite::Walk, name: "norm_conservation", tolerance: 1e-10, run: norm_conservation },
        Check { suite: Suite::Walk, name: "free_ballistic", tolerance: 0.05, run: free_ballistic },
        Check { suite: Suite::Ising, name: "bruteforce_vs_transfer", tolerance: 1e-10, run: bruteforce_vs_transfer },
        Check { suite: Suite::Ising, name: "zero_chain", tolerance: 1e-8, run: zero_chain_check },
        Check { suite: Suite::Ising, name: "one_zero_per_band", tolerance: 0.0, run: one_zero_per_band },
        Check { suite: Suite::Ising, name: "psi_right_endpoints", tolerance: 1e-8, run: psi_right_endpoints },
        Check { suite: Suite::Ising, name: "psi_interlacing", tolerance: 0.0, run: psi_interlacing },
    ]
}

pub fn verify(args: &VerifyArgs, seed: u64) -> Output {
    let selected: Vec<(usize, Check)> = checks()
        .into_iter()
        .enumerate()
        .filter(|(_, ch)| args.suite == Suite::All || args.suite == ch.suite)
        .collect();
    let rows: Vec<Vec<Cell>> = selected
        .par_iter()
        .map(|(i, ch)| {
            // one stream per check keeps draws independent of scheduling
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(*i as u64));
            let tol = ch.tolerance * args.tol_scale;
            let (measured, pass, note) = match (ch.run)(&mut rng, args.quick) {
                Ok((m, note)) => (m, m <= tol, note),
                Err(e) => (f64::NAN, false, format!("error: {e}")),
            };
            vec![
                Cell::Text(suite_name(ch.suite).into()),
                Cell::Text(ch.name.into()),
                Cell::Float(measured),
                Cell::Float(tol),
                Cell::Bool(pass),
                Cell::Text(note),
            ]
        })
        .collect();
    let passed = rows.iter().filter(|r| r[4] == Cell::Bool(true)).count();
    let mut meta = Map::new();
    meta.insert("passed".into(), Value::from(passed));
    meta.insert("failed".into(), Value::from(rows.len() - passed));
    Output::Table {
        columns: vec!["suite", "check", "measured", "tolerance", "pass", "note"],
        rows,
        meta,
    }
}

fn word_lengths(_: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let kmax = if quick { 15 } else { 22 };
    let mut bad = 0;
    for k in 0..=kmax {
        bad += usize::from(fib_word(k)?.len() as u64 != fib_number(k));
    }
    Ok((bad as f64, format!("|S^k(a)| = F_k for k <= {kmax}")))
}

fn factor_complexity(_: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let lmax = if quick { 55 } else { 144 };
    let fp = FixedPoint::global();
    let mut worst = 0usize;
    for l in 1..=lmax {
        worst = worst.max(fp.factors(l)?.len().abs_diff(l + 1));
    }
    Ok((worst as f64, format!("max |p(l) - (l+1)| for l <= {lmax}")))
}

fn unique_nonrepeatable(_: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let kmax = if quick { 8 } else { 10 };
    let mut bad = 0;
    for k in 2..=kmax {
        let census = factor_census(k)?;
        let ok = census.count == census.length + 1
            && census.repeatable + 1 == census.count
            && census.nonrepeatable_word == nonrepeatable_by_construction(k)?;
        bad += usize::from(!ok);
    }
    Ok((bad as f64, format!("census mismatches for 2 <= k <= {kmax}")))
}

fn random_coeff(rng: &mut ChaCha8Rng, r: f64) -> fibcmv::Result<VerblunskyCoeff> {
    VerblunskyCoeff::new(Complex64::from_polar(rng.gen_range(0.0..r), rng.gen_range(0.0..TAU)))
}

fn transfer_det(rng: &mut ChaCha8Rng, _: bool) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let z = unit(rng);
        let a = random_coeff(rng, 0.95)?;
        worst = worst.max((transfer_single(z, &a).det() - z).norm());
    }
    Ok((worst, "|det T - z| over 100 draws".into()))
}

fn equal_moduli(rng: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let (words, len) = if quick { (10, 200) } else { (50, 1000) };
    let mut worst: f64 = 0.0;
    for _ in 0..words {
        let z = unit(rng);
        // |α| < 0.3 keeps products of 1000 factors within double range
        let word = (0..len).map(|_| random_coeff(rng, 0.3)).collect::<fibcmv::Result<Vec<_>>>()?;
        let init = (unit(rng), unit(rng));
        for (x, y) in solution_sequence(z, &word, init, len)? {
            worst = worst.max((x.norm() - y.norm()).abs() / x.norm().max(1.0));
        }
    }
    Ok((worst, format!("relative ||xi| - |zeta|| over {words} words of length {len}")))
}

fn reversal_norms(rng: &mut ChaCha8Rng, _: bool) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let z = unit(rng);
        let phase = unit(rng);
        let len = rng.gen_range(1..=30);
        let word = (0..len)
            .map(|_| VerblunskyCoeff::new(phase * rng.gen_range(-0.9..0.9)))
            .collect::<fibcmv::Result<Vec<_>>>()?;
        let (n, nr) = reversal_norm_pair(z, &word);
        worst = worst.max((n - nr).abs() / n);
    }
    Ok((worst, "relative ||T|| - ||T reversed|| on common-line words".into()))
}

fn lm_factorization(rng: &mut ChaCha8Rng, _: bool) -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 1..=12 {
        let a = (0..n).map(|_| random_coeff(rng, 0.95)).collect::<fibcmv::Result<Vec<_>>>()?;
        let (l, m) = cmv_lm_factors(&a);
        worst = worst.max(l.matmul(&m)?.max_abs_diff(&cmv_finite(&a)?));
    }
    Ok((worst, "max |LM - C| for n <= 12".into()))
}

fn orbit_vs_direct(rng: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let ang = golden()?;
    let kmax = if quick { 10 } else { 12 };
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    for _ in 0..100 {
        let z = unit(rng);
        let orbit = trace_orbit(&initial_traces(z, &ang)?, 20)?;
        // past the overflow guard the orbit stores nothing to compare
        for k in (0..=kmax).take_while(|&k| orbit.get(k as i64).is_some()) {
            let x = orbit.get(k as i64).unwrap_or_default();
            worst = worst.max((half_trace_direct(z, &ang, k)? - x).abs() / x.abs().max(1.0));
            pairs += 1;
        }
    }
    Ok((worst, format!("relative error over {pairs} (z, k) pairs")))
}

fn invariant_drift(rng: &mut ChaCha8Rng, _: bool) -> Outcome {
    let ang = golden()?;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let triple = initial_traces(unit(rng), &ang)?;
        let orbit = trace_orbit(&triple, 20)?;
        let i0 = triple.invariant();
        let stop = orbit.escape_index().map_or(20, |e| (e - 1).min(20));
        for k in 0..stop {
            let (Some(prev), Some(cur), Some(next)) = (orbit.get(k - 1), orbit.get(k), orbit.get(k + 1)) else {
                break;
            };
            worst = worst.max((fricke_vogt(next, cur, prev) - i0).abs() / i0.abs().max(1.0));
        }
    }
    Ok((worst, "relative invariant drift before escape".into()))
}

fn nest_bounds(rng: &mut ChaCha8Rng, _: bool) -> Outcome {
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let ang = CoinAngles::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5))?;
        let (_, n2, n3) = nests_norms(unit(rng), &ang)?;
        let (sa, sb) = (ang.sec_a(), ang.sec_b());
        worst = worst
            .max(n2 / (12.0 * (sa * sb).powf(1.5)))
            .max(n3 / (48.0 * sa.powf(2.5) * sb.powf(1.5)));
    }
    Ok((worst, "largest norm / bound ratio".into()))
}

fn cgmv_window(_: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let ang = golden()?;
    let half = if quick { 16 } else { 32 };
    let mut worst: f64 = 0.0;
    let mut unit_gauge = true;
    for j in [0, 1, 4, 11] {
        let coins = coin_assignment(SubshiftPoint::shift(j), ang);
        let d = cgmv_coefficients(&coins, -half - 8..half + 8)?;
        unit_gauge &= d.lambdas.iter().all(|&l| l == c(1.0, 0.0));
        let u = u_matrix_window(&coins, -half..half, -half..half)?;
        let e = extended_cmv_window(&d.alphas, -half..half, -half..half)?;
        worst = worst.max(u.max_abs_diff(&e));
    }
    let measured = if unit_gauge { worst } else { f64::INFINITY };
    Ok((measured, format!("max |U - E| on {0}x{0} windows; lambda = 1: {unit_gauge}", 2 * half)))
}

fn norm_conservation(_: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let steps = if quick { 200 } else { 1000 };
    let coins = coin_assignment(SubshiftPoint::fixed_point(), golden()?);
    let mut state = WalkState::localized_for(0, steps)?;
    let mut worst: f64 = 0.0;
    for _ in 0..steps {
        state = step(&state, &coins)?;
        worst = worst.max((state.norm() - 1.0).abs());
    }
    Ok((worst, format!("max |norm - 1| over {steps} steps")))
}

fn free_ballistic(_: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let kmax = if quick { 10 } else { 12 };
    let coins = coin_assignment(SubshiftPoint::fixed_point(), CoinAngles::new(0.0, 0.0)?);
    let steps = 1usize << kmax;
    let series = evolve_moments(&WalkState::localized_for(0, steps)?, &coins, steps, &[2.0])?;
    let ns: Vec<f64> = (4..=kmax).map(|e| f64::from(1u32 << e)).collect();
    let mt = ns
        .iter()
        .map(|&n| series[0].time_avg(n as usize))
        .collect::<fibcmv::Result<Vec<_>>>()?;
    let fit = empirical_exponent(&ns, &mt, 2.0)?.fit;
    Ok(((fit - 1.0).abs(), format!("free walk exponent {fit:.4} against 1")))
}

fn bruteforce_vs_transfer(rng: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let rings = if quick { 30 } else { 100 };
    let mut worst: f64 = 0.0;
    for i in 0..rings {
        let l = rng.gen_range(1..=12);
        let js: Vec<Complex64> = (0..l)
            .map(|_| {
                let re = 2.0 - rng.gen_range(0.0..2.0);
                let im = if i % 2 == 1 { rng.gen_range(-2.0..2.0) } else { 0.0 };
                c(re, im)
            })
            .collect();
        let ring = IsingRing::new(js, rng.gen_range(0.25..4.0))?;
        let h = Complex64::from_polar(rng.gen_range(0.25..4.0), rng.gen_range(0.0..TAU));
        let a = partition_bruteforce(&ring, h)?;
        worst = worst.max((a - partition_transfer(&ring, h)?).norm() / a.norm());
    }
    Ok((worst, format!("relative error over {rings} rings")))
}

fn zero_chain_check(_: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let l = if quick { 13 } else { 21 };
    let ch = zero_chain(&fib_ring(l)?)?;
    let ok = ch.all_simple() && ch.z.len() == l;
    let measured = if ok { ch.max_distance().max(ch.max_modulus_defect) } else { f64::INFINITY };
    Ok((measured, format!("Z / Z-tilde / Delta zeros at L = {l}; simple: {ok}")))
}

fn one_zero_per_band(_: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let l = if quick { 21 } else { 34 };
    let b = bands(&fib_ring(l)?.verblunsky()?)?;
    let ok = b.one_zero_per_band() && !b.overlapping();
    Ok((f64::from(u8::from(!ok)), format!("{} bands at L = {l}", b.arcs.len())))
}

fn psi_right_endpoints(_: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let l = if quick { 21 } else { 34 };
    let r = band_report(&fib_ring(l)?.verblunsky()?)?;
    Ok((
        r.endpoint_distance,
        format!(
            "Hausdorff distance of the paraorthogonal zeros to the right band ends at L = {l} (left ends: {:.3e})",
            r.left_endpoint_distance
        ),
    ))
}

fn psi_interlacing(_: &mut ChaCha8Rng, quick: bool) -> Outcome {
    let l = if quick { 21 } else { 34 };
    let r = band_report(&fib_ring(l)?.verblunsky()?)?;
    Ok((
        f64::from(u8::from(!r.interlaced)),
        format!("paraorthogonal zeros interlace the discriminant zeros at L = {l}: {}", r.interlaced),
    ))
}

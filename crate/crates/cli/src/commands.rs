use std::f64::consts::TAU;

use fibcmv::circle::hausdorff;
use fibcmv::fib::{factor_census, fib_number, SubshiftPoint};
use fibcmv::ising::{
    bands, dos_convergence, fibonacci_couplings, gamma_n, zeros_on_circle, CouplingPattern, ZeroMethod,
};
use fibcmv::trace::{
    bound_over_support, in_spectrum, spectrum_approx, spectrum_from_mask, transport_constants, CoinAngles,
};
use fibcmv::walk::{coin_assignment, empirical_exponent, evolve_moments, WalkState};
use fibcmv::Error;
use num_complex::Complex64;
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::args::{CoinArgs, ExponentArgs, IsingCommand, RingArgs, SpectrumArgs, WalkProfile, ZeroMethodArg};
use crate::output::{float, Cell, Output};
use crate::CliError;

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn angles(c: &CoinArgs) -> Result<CoinAngles, CliError> {
    Ok(CoinAngles::new(c.theta_a, c.theta_b)?)
}

fn omega(s: &str) -> Result<SubshiftPoint, CliError> {
    Ok(s.parse::<SubshiftPoint>()?)
}

fn record(v: Value) -> Output {
    match v {
        Value::Object(m) => Output::Record(m),
        _ => unreachable!("records are built from json objects"),
    }
}

pub fn fib_census(k: usize) -> Result<Output, CliError> {
    let c = factor_census(k)?;
    Ok(record(json!({
        "k": c.k,
        "F_k": c.length,
        "count": c.count,
        "repeatable": c.repeatable,
        "nonrepeatable_word": c.nonrepeatable_word.to_string(),
    })))
}

pub fn spectrum(a: &SpectrumArgs) -> Result<Output, CliError> {
    let ang = angles(&a.coins)?;
    if a.grid < 1000 {
        return Err(invalid("--grid must be at least 1000"));
    }
    if a.depth < 3 {
        return Err(invalid("--depth must be at least 3"));
    }
    let grid = a.grid;
    let mask: Vec<bool> = (0..grid)
        .into_par_iter()
        .map(|j| in_spectrum(TAU * j as f64 / grid as f64, &ang, a.depth))
        .collect();
    let approx = spectrum_from_mask(mask, a.depth);
    let rows = (0..grid)
        .into_par_iter()
        .map(|j| {
            let t = approx.angle(j);
            if !approx.mask[j] {
                let mut row = vec![Cell::Float(t), Cell::Bool(false)];
                row.extend(std::iter::repeat(Cell::Empty).take(5));
                return Ok(row);
            }
            let b = transport_constants(Complex64::from_polar(1.0, t), &ang)?;
            Ok(vec![
                Cell::Float(t),
                Cell::Bool(true),
                Cell::Float(b.invariant),
                Cell::Float(b.c),
                Cell::Float(b.gamma1),
                Cell::Float(b.gamma2),
                Cell::Float(b.beta),
            ])
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut meta = Map::new();
    meta.insert("fraction".into(), float(approx.fraction()));
    meta.insert("arcs".into(), Value::from(approx.arcs.len()));
    Ok(Output::Table {
        columns: vec!["angle", "in_spectrum", "I", "C", "gamma1", "gamma2", "beta"],
        rows,
        meta,
    })
}

pub fn walk_profile(w: &WalkProfile) -> Result<Output, CliError> {
    if w.steps == 0 {
        return Err(invalid("--steps must be positive"));
    }
    let coins = coin_assignment(omega(&w.omega)?, angles(&w.coins)?);
    let series = evolve_moments(&WalkState::localized_for(0, w.steps)?, &coins, w.steps, &[w.p])?;
    let m = &series[0].values;
    let mut sum = 0.0;
    let rows = m
        .iter()
        .enumerate()
        .map(|(n, &x)| {
            sum += x;
            // M̃ at N = n + 1 averages M over 0..=n
            vec![Cell::Int(n as i64), Cell::Float(x), Cell::Float(sum / (n + 1) as f64)]
        })
        .collect();
    Ok(Output::Table {
        columns: vec!["n", "M", "Mtilde"],
        rows,
        meta: Map::new(),
    })
}

pub fn walk_exponents(e: &ExponentArgs) -> Result<Output, CliError> {
    if e.kmax > 20 || e.kmin + 3 > e.kmax {
        return Err(invalid("need kmin + 3 <= kmax <= 20"));
    }
    if e.samples == 0 {
        return Err(invalid("--samples must be positive"));
    }
    let ang = angles(&e.coins)?;
    let coins = coin_assignment(omega(&e.omega)?, ang);
    let steps = 1usize << e.kmax;
    let ns: Vec<f64> = (e.kmin..=e.kmax).map(|k| (1u64 << k) as f64).collect();
    let (evolved, bound) = rayon::join(
        || -> Result<_, Error> {
            let series = evolve_moments(&WalkState::localized_for(0, steps)?, &coins, steps, &[e.p])?;
            ns.iter().map(|&n| series[0].time_avg(n as usize)).collect::<Result<Vec<_>, _>>()
        },
        || -> Result<_, Error> {
            let approx = spectrum_approx(&ang, e.depth, e.grid)?;
            let pts = approx.points();
            if pts.is_empty() {
                return Err(Error::Inconsistent("no grid point survived the trace map".into()));
            }
            let samples: Vec<f64> = pts.iter().step_by((pts.len() / e.samples).max(1)).copied().collect();
            bound_over_support(&ang, &samples)
        },
    );
    let fit = empirical_exponent(&ns, &evolved?, e.p)?;
    Ok(record(json!({
        "p": float(e.p),
        "beta_tilde_fit": float(fit.fit),
        "beta_minus": float(fit.minus),
        "beta_plus": float(fit.plus),
        "theory_lower_bound": float(bound?),
    })))
}

fn pattern(r: &RingArgs) -> CouplingPattern {
    CouplingPattern::real_j(r.ja, r.jb)
}

pub fn ising(cmd: &IsingCommand) -> Result<Output, CliError> {
    match cmd {
        IsingCommand::Zeros {
            ring,
            omega: om,
            length,
            method,
            tolerance,
        } => ising_zeros(ring, om, *length, *method, *tolerance),
        IsingCommand::Dos { ring, omega: om, kmin, kmax } => ising_dos(ring, om, *kmin, *kmax),
    }
}

fn ising_zeros(
    r: &RingArgs,
    om: &str,
    length: usize,
    method: ZeroMethodArg,
    tolerance: f64,
) -> Result<Output, CliError> {
    let om = omega(om)?;
    let ring = fibonacci_couplings(pattern(r), om, length, r.tau, r.kb)?;
    let alphas = ring.verblunsky()?;
    let b = bands(&alphas)?;
    let zeros = match method {
        ZeroMethodArg::SignChange => b.zeros.clone(),
        ZeroMethodArg::Polynomial => zeros_on_circle(&alphas, ZeroMethod::Polynomial)?,
        ZeroMethodArg::CrossChecked => {
            let p = zeros_on_circle(&alphas, ZeroMethod::Polynomial)?;
            let d = hausdorff(&p.angles, &b.zeros.angles);
            if !(d <= tolerance) {
                return Err(Error::Inconsistent(format!(
                    "sign-change and polynomial zeros differ by {d:e} (tolerance {tolerance:e})"
                ))
                .into());
            }
            b.zeros.clone()
        }
    };
    if zeros.len() != length {
        return Err(Error::Inconsistent(format!("found {} zeros, expected {length}", zeros.len())).into());
    }
    let rows = zeros
        .angles
        .iter()
        .zip(&zeros.residuals)
        .map(|(&t, &res)| {
            let band = b.arcs.iter().position(|&(lo, hi)| {
                let d = (t - lo).rem_euclid(TAU);
                d <= hi - lo
            });
            vec![Cell::Float(t), Cell::Float(res), band.map_or(Cell::Empty, |i| Cell::Int(i as i64))]
        })
        .collect();
    let g = gamma_n(&b);
    let mut meta = Map::new();
    meta.insert("band_measure".into(), float(b.total_length()));
    meta.insert("one_zero_per_band".into(), Value::from(b.one_zero_per_band()));
    meta.insert("gamma_n".into(), json!([float(g.re), float(g.im)]));
    Ok(Output::Table {
        columns: vec!["angle", "residual", "band_index"],
        rows,
        meta,
    })
}

fn ising_dos(r: &RingArgs, om: &str, kmin: usize, kmax: usize) -> Result<Output, CliError> {
    if kmin > kmax || kmax > 14 {
        return Err(invalid("need kmin <= kmax <= 14"));
    }
    let ladder: Vec<usize> = (kmin..=kmax).collect();
    let report = dos_convergence(pattern(r), omega(om)?, &ladder, r.tau, r.kb)?;
    let repeatable: Vec<u64> = omega(om)?.repeatable_prefix_lengths(kmax)?;
    let entries: Vec<Value> = report
        .entries
        .iter()
        .map(|e| {
            json!({
                "k": e.k,
                "length": e.length,
                "kolmogorov_to_next": e.to_next.map(|d| float(d.0)),
                "hausdorff_to_next": e.to_next.map(|d| float(d.1)),
                "cross_omega_kolmogorov": float(e.cross_omega.0),
                "cross_omega_hausdorff": float(e.cross_omega.1),
                "in_band_fraction": float(e.in_band_fraction),
                "repeatable_prefix": repeatable.contains(&fib_number(e.k)),
            })
        })
        .collect();
    let ladder: Vec<Value> = report.ladder_distances().into_iter().map(float).collect();
    Ok(record(json!({
        "omega": om,
        "ladder_kolmogorov": ladder,
        "nonincreasing_within_10pct": report.nonincreasing_within(0.1),
        "entries": entries,
    })))
}

use std::path::PathBuf;
use std::process::Command as Process;

use clap::Parser;
use fibcmv_cli::{parse_config, produce, Cli};
use serde_json::Value;

fn cli(args: &[&str]) -> Cli {
    Cli::try_parse_from(std::iter::once("fibcmv").chain(args.iter().copied())).unwrap()
}

fn text(args: &[&str]) -> String {
    produce(cli(args)).unwrap().1
}

/// Everything after the config line.
fn payload(s: &str) -> &str {
    if s.starts_with('#') {
        s.split_once('\n').unwrap().1
    } else {
        s
    }
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("fibcmv-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn binary(args: &[&str]) -> std::process::Output {
    Process::new(env!("CARGO_BIN_EXE_fibcmv")).args(args).output().unwrap()
}

#[test]
fn identical_configs_give_identical_bytes() {
    for args in [
        &["spectrum", "--grid", "2000", "--depth", "10"][..],
        &["verify", "--quick"],
        &["walk", "--steps", "64", "--omega", "rot:0.25"],
        &["ising", "zeros", "--ja", "1", "--jb", "0.5", "--length", "21", "--format", "json"],
    ] {
        let a = text(args);
        assert_eq!(a, text(args), "{args:?}");
        let mut one = args.to_vec();
        one.extend(["--threads", "1"]);
        let mut four = args.to_vec();
        four.extend(["--threads", "4"]);
        assert_eq!(text(&one), text(&four), "{args:?}");
        assert_eq!(a, text(&four), "{args:?}");
    }
}

#[test]
fn seed_changes_only_randomized_runs() {
    let a = text(&["verify", "cmv", "--quick", "--seed", "1"]);
    let b = text(&["verify", "cmv", "--quick", "--seed", "2"]);
    assert_ne!(payload(&a), payload(&b));
    let a = text(&["fib", "census", "--k", "4", "--seed", "1"]);
    let b = text(&["fib", "census", "--k", "4", "--seed", "2"]);
    let pa: Value = serde_json::from_str(&a).unwrap();
    let pb: Value = serde_json::from_str(&b).unwrap();
    assert_eq!(pa["payload"], pb["payload"]);
}

#[test]
fn echoed_config_round_trips() {
    for (name, args) in [
        ("census.json", &["fib", "census", "--k", "6"][..]),
        ("spectrum.csv", &["spectrum", "--theta-a", "-0.3", "--grid", "1500", "--depth", "8"]),
        ("walk.csv", &["walk", "--steps", "40", "--p", "1.5", "--omega", "shift:7"]),
        ("exp.json", &["walk", "exponents", "--kmax", "8", "--grid", "1000", "--depth", "8"]),
        ("dos.csv", &["ising", "dos", "--ja", "1", "--jb", "0.5", "--kmax", "5", "--format", "csv"]),
        ("verify.json", &["verify", "fib", "--quick", "--format", "json", "--seed", "9"]),
    ] {
        let path = scratch(name);
        let mut full = args.to_vec();
        full.extend(["--out", path.to_str().unwrap()]);
        let original = cli(&full);
        let (_, written) = produce(original.clone()).unwrap();
        std::fs::write(&path, &written).unwrap();

        assert_eq!(parse_config(&written).unwrap(), original, "{name}");

        let again = scratch(&format!("again-{name}"));
        let (resolved, replayed) =
            produce(cli(&["rerun", path.to_str().unwrap(), "--out", again.to_str().unwrap()])).unwrap();
        assert_eq!(resolved.command, original.command, "{name}");
        assert_eq!(resolved.seed, original.seed, "{name}");
        if written.starts_with('#') {
            assert_eq!(payload(&replayed), payload(&written), "{name}");
        } else {
            let a: Value = serde_json::from_str(&written).unwrap();
            let b: Value = serde_json::from_str(&replayed).unwrap();
            assert_eq!(a["payload"], b["payload"], "{name}");
        }
    }
}

#[test]
fn census_payload() {
    let v: Value = serde_json::from_str(&text(&["fib", "census", "--k", "5"])).unwrap();
    assert_eq!(v["schema"], "fibcmv-output/1");
    let p = &v["payload"];
    assert_eq!(p["k"], 5);
    assert_eq!(p["F_k"], 13);
    assert_eq!(p["count"], 14);
    assert_eq!(p["repeatable"], 13);
    assert_eq!(p["nonrepeatable_word"].as_str().unwrap().len(), 13);
}

#[test]
fn ising_zeros_have_one_band_each() {
    let s = text(&["ising", "zeros", "--ja", "1.0", "--jb", "0.5", "--tau", "1.0", "--omega", "u", "--length", "34"]);
    let mut lines = payload(&s).lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next(), Some("angle,residual,band_index"));
    let mut bands: Vec<usize> = lines
        .map(|l| {
            let cols: Vec<&str> = l.split(',').collect();
            assert_eq!(cols.len(), 3);
            let t: f64 = cols[0].parse().unwrap();
            assert!((0.0..std::f64::consts::TAU).contains(&t));
            cols[2].parse().unwrap()
        })
        .collect();
    assert_eq!(bands.len(), 34);
    bands.sort_unstable();
    assert_eq!(bands, (0..34).collect::<Vec<_>>());
}

#[test]
fn spectrum_constants_only_inside() {
    let s = text(&["spectrum", "--grid", "1000", "--depth", "8"]);
    let rows: Vec<&str> = payload(&s).lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows.len(), 1000);
    let mut inside = 0;
    for r in rows {
        let cols: Vec<&str> = r.split(',').collect();
        assert_eq!(cols.len(), 7);
        let filled = cols[2..].iter().all(|c| !c.is_empty());
        let empty = cols[2..].iter().all(|c| c.is_empty());
        match cols[1] {
            "1" => {
                inside += 1;
                assert!(filled, "{r}");
                let beta: f64 = cols[6].parse().unwrap();
                assert!(beta > 0.0 && beta < 1.0);
            }
            "0" => assert!(empty, "{r}"),
            other => panic!("bad flag {other}"),
        }
    }
    assert!(inside > 0);
}

#[test]
fn walk_profile_rows() {
    let s = text(&["walk", "--steps", "50", "--p", "2", "--theta-a", "0", "--theta-b", "0"]);
    let rows: Vec<Vec<f64>> = payload(&s)
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 50);
    assert_eq!(rows[0], vec![0.0, 1.0, 1.0]);
    // the free walk moves two e-indices per step: M(n, 2) = 1 + 4n²
    let mut sum = 0.0;
    for r in &rows {
        sum += r[1];
        assert!((r[1] - 1.0 - 4.0 * r[0] * r[0]).abs() < 1e-9 * r[1], "{r:?}");
        assert!((r[2] - sum / (r[0] + 1.0)).abs() < 1e-12 * r[2], "{r:?}");
    }
}

#[test]
fn exit_codes_from_the_binary() {
    let ok = binary(&["fib", "census", "--k", "3"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("\"F_k\": 5"));

    assert_eq!(binary(&["--no-such-flag"]).status.code(), Some(1));
    assert_eq!(binary(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(binary(&["--help"]).status.code(), Some(0));
    assert_eq!(binary(&["walk", "--omega", "v"]).status.code(), Some(1));
    assert_eq!(binary(&["spectrum", "--theta-a", "2.0"]).status.code(), Some(1));
    let unwritable = binary(&["fib", "census", "--k", "3", "--out", "/nonexistent-dir/x.json"]);
    assert_eq!(unwritable.status.code(), Some(1));

    // sign-change and polynomial zeros never agree to the last bit
    let strict = binary(&[
        "ising", "zeros", "--ja", "1", "--jb", "0.5", "--length", "13", "--method", "cross-checked", "--tolerance", "0",
    ]);
    assert_eq!(strict.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("differ"));

    // failed checks are report content
    let v = binary(&["verify", "ising", "--quick", "--tol-scale", "0"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&v.stdout).contains(",0,"));
}

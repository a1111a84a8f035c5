use std::fs;
use std::process::{Command, Output};

use brickwork_qec::code::StabilizerCode;
use brickwork_qec::noise::{sample_error, syndrome};
use brickwork_qec::rng::stream;
use brickwork_qec::depolarizing;

fn brickwork(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_brickwork")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// CSV text without the manifest line.
fn payload(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n")
}

#[test]
fn gen_is_deterministic_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.code");
    let b = dir.path().join("b.code");
    for path in [&a, &b] {
        let p = path.to_str().unwrap();
        stdout(&brickwork(&["gen", "--n", "20", "--rate", "1/5", "--depth", "3", "--seed", "9", "--out", p]));
    }
    let text = fs::read_to_string(&a).unwrap();
    assert_eq!(text, fs::read_to_string(&b).unwrap());
    let code: StabilizerCode = text.parse().unwrap();
    assert_eq!(code.to_string(), text);
    assert_eq!((code.n_phys, code.k), (28, 4));

    let side = dir.path().join("a.code.manifest.json");
    let manifest: serde_json::Value = serde_json::from_str(&fs::read_to_string(side).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 9);
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
}

#[test]
fn non_integer_inverse_rate_is_a_usage_error() {
    let out = brickwork(&["gen", "--n", "20", "--rate", "0.3", "--depth", "3", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
}

#[test]
fn seed_is_required() {
    let out = brickwork(&["sweep", "--rate", "0.2", "--depths", "3", "--ps", "0.1", "--trials", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn zero_trials_is_a_usage_error() {
    let out = brickwork(&["sweep", "--rate", "0.2", "--depths", "3", "--ps", "0.1", "--trials", "0", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn brute_and_grid_decoders_agree() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.code");
    let p = path.to_str().unwrap();
    stdout(&brickwork(&["gen", "--n", "8", "--rate", "1/2", "--depth", "2", "--seed", "4", "--out", p]));
    let code: StabilizerCode = fs::read_to_string(&path).unwrap().parse().unwrap();
    let noise = depolarizing(0.12).unwrap();
    for t in 0..5 {
        let e = sample_error(&noise, code.n_phys, &mut stream(t, 1));
        let s = syndrome(&code, &e).unwrap().to_string();
        let decode = |backend: &str| -> serde_json::Value {
            let out = brickwork(&["decode", "--code", p, "--syndrome", &s, "--p", "0.12", "--backend", backend]);
            serde_json::from_str(&stdout(&out)).unwrap()
        };
        let (grid, brute) = (decode("grid"), decode("brute"));
        assert_eq!(grid["classes"], brute["classes"]);
        assert_eq!(grid["correction"], brute["correction"]);
        assert_eq!(grid["log_probs"].as_array().unwrap().len(), code.k);
    }
}

#[test]
fn width_cap_is_a_resource_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.code");
    let p = path.to_str().unwrap();
    stdout(&brickwork(&["gen", "--n", "20", "--rate", "1/5", "--depth", "3", "--seed", "4", "--out", p]));
    let zeros = "0".repeat(24);
    let out = brickwork(&["decode", "--code", p, "--syndrome", &zeros, "--p", "0.1", "--max-width", "2"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn hashing_threshold_at_rate_one_fifth() {
    assert_eq!(stdout(&brickwork(&["hashing", "--rate", "0.2"])).trim(), "0.138544");
    assert_eq!(stdout(&brickwork(&["hashing", "--rate", "1/10"])).trim(), "0.163054");
}

#[test]
fn sweep_payload_is_independent_of_workers() {
    let run = |w: &str| {
        payload(&stdout(&brickwork(&[
            "sweep", "--rate", "1/5", "--depths", "2,3", "--ps", "0.10:0.13:0.01", "--n", "30", "--trials", "40",
            "--seed", "5", "--workers", w,
        ])))
    };
    let one = run("1");
    assert_eq!(one, run("3"));
    let lines: Vec<&str> = one.lines().collect();
    assert_eq!(lines[0], "r,d,n,n_phys,p,trials,failures_bulk,bulk_qubits,p_L_prime,stderr,p_L,variant,seed");
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[1].starts_with("0.2,2,30,34,0.1,40,"));
}

#[test]
fn sweep_then_fit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let c = csv.to_str().unwrap();
    stdout(&brickwork(&[
        "sweep", "--rate", "1/5", "--depths", "2,3", "--ps", "0.08:0.20:0.03", "--n", "30", "--trials", "60", "--seed",
        "2", "--out", c,
    ]));
    assert!(fs::read_to_string(&csv).unwrap().starts_with("# {"));
    let fit: serde_json::Value =
        serde_json::from_str(&stdout(&brickwork(&["fit", "--in", c, "--seed", "1", "--bootstrap", "20"]))).unwrap();
    for key in ["p_c", "p_c_err", "nu", "nu_err", "A", "B", "C", "residual"] {
        assert!(fit.get(key).is_some(), "{key}");
    }
    assert!(fit["p_c"].as_f64().unwrap().is_finite());
}

//! End-to-end runs of the installed binary: flag parsing, exit codes,
//! output formats, and file interchange.

use std::fs;
use std::io::Cursor;
use std::path::PathBuf;
use std::process::{Command, Output};

use qubitkit::{FiveQubitCode, StateVector};
use serde_json::Value;

fn qubitkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qubitkit"))
        .args(args)
        .env_remove("QUBITKIT_SEED")
        .output()
        .expect("failed to run qubitkit")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn temp_path(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("qubitkit-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).expect("create temp dir");
    dir.join(name)
}

#[test]
fn shor_factors_fifteen() {
    let out = qubitkit(&["shor", "--n", "15", "--seed", "42", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["factors"], serde_json::json!([3, 5]));
    assert_eq!(v["n"], 15);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["subcommand"], "shor");
    assert!(v["version"].is_string());
    assert!(v["wall_time_ms"].is_number());
}

#[test]
fn shor_fixed_base_reports_the_attempt() {
    let out = qubitkit(&["shor", "--n", "15", "--a", "7", "--seed", "42", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["factors"], serde_json::json!([3, 5]));
    let attempt = &v["attempts"][0];
    assert_eq!(attempt["a"], 7);
    assert_eq!(attempt["outcome"], "factored");
    assert_eq!(attempt["period"], 4);
    assert!(!attempt["measured"].as_array().unwrap().is_empty());
}

#[test]
fn shor_trivial_root_base_exits_one() {
    // 14 = -1 mod 15, so its even period can only give the trivial root.
    let out = qubitkit(&["shor", "--n", "15", "--a", "14", "--seed", "1", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["factors"], Value::Null);
}

#[test]
fn shor_rejects_prime_as_usage_error() {
    let out = qubitkit(&["shor", "--n", "13", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("prime"));
}

#[test]
fn grover_reports_hit_and_queries() {
    let out = qubitkit(&["grover", "--qubits", "6", "--marked", "13", "--seed", "7", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["found"], true);
    assert_eq!(v["hit"], 13);
    assert_eq!(v["queries"], 6);
    let p = v["success_prob_analytic"].as_f64().unwrap();
    assert!(p > 0.99, "analytic success {p}");
}

#[test]
fn grover_miss_exits_one() {
    // Two iterations on n = 2 overshoot: success probability drops to 1/4.
    let out =
        qubitkit(&["grover", "--qubits", "2", "--marked", "1", "--iterations", "2", "--seed", "2", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json_of(&out);
    assert_eq!(v["found"], false);
}

#[test]
fn grover_rejects_single_qubit_register() {
    let out = qubitkit(&["grover", "--qubits", "0", "--marked", "0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_flag_is_a_usage_error() {
    let out = qubitkit(&["shor", "--n", "15", "--bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn evolve_writes_trace_and_final_dump() {
    let trace = temp_path("trace.csv");
    let dump = temp_path("final.dump");
    let out = qubitkit(&[
        "evolve", "--qubits", "5", "--length", "16", "--dt", "0.01", "--steps", "20",
        "--potential", "harmonic", "--psi0", "gaussian(8,1,0)", "--order", "strang",
        "--out", trace.to_str().unwrap(), "--dump-final", dump.to_str().unwrap(), "--json",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let v = json_of(&out);
    let energy = v["energy"].as_f64().unwrap();
    assert!((energy - 0.5).abs() < 1e-2, "ground-state energy {energy}");
    assert!((v["norm"].as_f64().unwrap() - 1.0).abs() < 1e-9);

    let text = fs::read_to_string(&trace).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "step,time,norm,mean_x,mean_p,energy");
    assert_eq!(lines.len(), 22, "header plus rows 0..=20");
    for (i, line) in lines[1..].iter().enumerate() {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 6);
        assert_eq!(fields[0], i.to_string());
        let norm: f64 = fields[2].parse().unwrap();
        assert!((norm - 1.0).abs() < 1e-9);
    }

    let state = StateVector::from_dump(5, Cursor::new(fs::read(&dump).unwrap())).unwrap();
    assert_eq!(state.num_qubits(), 5);
}

#[test]
fn evolve_human_and_json_agree_on_values() {
    let args = [
        "evolve", "--qubits", "4", "--length", "8", "--dt", "0.02", "--steps", "5",
        "--potential", "free", "--psi0", "gaussian(4,0.8,1)", "--seed", "11",
    ];
    let human = qubitkit(&args);
    let json = qubitkit(&[&args[..], &["--json"]].concat());
    assert!(human.status.success() && json.status.success());

    let v = json_of(&json);
    let text = String::from_utf8_lossy(&human.stdout);
    for key in ["energy", "mean_x", "mean_p", "norm"] {
        let line = text
            .lines()
            .find(|l| l.starts_with(&format!("{key} = ")))
            .unwrap_or_else(|| panic!("no {key} line in {text}"));
        let human_value: f64 = line.split(" = ").nth(1).unwrap().parse().unwrap();
        // Differently shaped invocations may wobble in the last ulp of a
        // reduction; the formats must agree to 12 significant digits.
        let json_value = v[key].as_f64().unwrap();
        assert_eq!(format!("{human_value:.11e}"), format!("{json_value:.11e}"), "{key}");
    }
}

#[test]
fn evolve_reads_potential_and_psi0_files() {
    let vfile = temp_path("v.txt");
    let psifile = temp_path("psi.txt");
    // 8-point box: zero potential, uniform real wavefunction (comments too).
    fs::write(&vfile, "# flat\n0\n0\n0\n0\n0\n0\n0\n0\n").unwrap();
    fs::write(&psifile, "1\n1\n1\n1\n1, 0\n1 0\n1\t0\n1\n").unwrap();
    let out = qubitkit(&[
        "evolve", "--qubits", "3", "--length", "8", "--dt", "0.05", "--steps", "2",
        "--potential", vfile.to_str().unwrap(), "--psi0", psifile.to_str().unwrap(), "--json",
    ]);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    // A uniform state is the zero-momentum plane wave: free evolution fixes it.
    assert!((v["energy"].as_f64().unwrap()).abs() < 1e-12);
    assert!((v["mean_x"].as_f64().unwrap() - 3.5).abs() < 1e-9);
}

#[test]
fn qecc_roundtrip_single_error() {
    let out = qubitkit(&["qecc", "--mode", "roundtrip", "--error", "X2", "--seed", "5", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert!(v["fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
    assert_eq!(v["recovered_error"], "X2");
    assert!(v["syndrome"].as_u64().unwrap() < 16);
}

#[test]
fn qecc_roundtrip_full_table() {
    let out = qubitkit(&["qecc", "--mode", "roundtrip", "--seed", "6", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    let fidelities = v["fidelities"].as_object().unwrap();
    assert_eq!(fidelities.len(), 16);
    assert!(v["min_fidelity"].as_f64().unwrap() >= 1.0 - 1e-10);
    assert_eq!(v["syndromes"]["I"], 0);
}

#[test]
fn qecc_montecarlo_reports_rate() {
    let out = qubitkit(&["qecc", "--mode", "montecarlo", "--p", "0.05", "--trials", "2000", "--seed", "1", "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["trials"], 2000);
    let rate = v["logical_rate"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&rate));
    assert!(v["stderr"].as_f64().unwrap() > 0.0);
}

#[test]
fn qecc_requires_a_mode_or_print_code() {
    let out = qubitkit(&["qecc"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn qecc_print_code_dumps_orthonormal_codewords() {
    let out = qubitkit(&["qecc", "--print-code"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let blocks: Vec<&str> = text.split("\n\n").collect();
    assert_eq!(blocks.len(), 2, "two dumps separated by a blank line");
    let zero = StateVector::from_dump(5, Cursor::new(blocks[0])).unwrap();
    let one = StateVector::from_dump(5, Cursor::new(blocks[1])).unwrap();
    let code = FiveQubitCode::new();
    assert!((zero.fidelity(code.logical_zero()).unwrap() - 1.0).abs() < 1e-12);
    assert!((one.fidelity(code.logical_one()).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn qft_of_basis_zero_is_uniform() {
    let out = qubitkit(&["qft", "--qubits", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let amp = (1.0f64 / 8.0).sqrt();
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split('\t').collect();
        assert_eq!(fields[0], i.to_string());
        assert!((fields[1].parse::<f64>().unwrap() - amp).abs() < 1e-12);
        assert_eq!(fields[2].parse::<f64>().unwrap(), 0.0);
    }
    assert_eq!(text.lines().count(), 8);
}

#[test]
fn qft_round_trips_through_dump_files() {
    let forward = temp_path("fwd.dump");
    let out = qubitkit(&["qft", "--qubits", "4", "--out", forward.to_str().unwrap()]);
    assert!(out.status.success());
    let back = qubitkit(&["qft", "--qubits", "4", "--input", forward.to_str().unwrap(), "--inverse", "--json"]);
    assert!(back.status.success());
    let v = json_of(&back);
    let state = StateVector::from_dump(4, Cursor::new(v["dump"].as_str().unwrap())).unwrap();
    let basis = StateVector::basis_state(4, 0).unwrap();
    assert!((state.fidelity(&basis).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn circuit_builds_a_bell_pair() {
    let file = temp_path("bell.qc");
    fs::write(&file, "# Bell pair\nH 0\nCNOT 0 1\n").unwrap();
    let out = qubitkit(&["circuit", "--qubits", "2", "--file", file.to_str().unwrap(), "--json"]);
    assert!(out.status.success());
    let v = json_of(&out);
    assert_eq!(v["gates"], 2);
    let state = StateVector::from_dump(2, Cursor::new(v["dump"].as_str().unwrap())).unwrap();
    let amps = state.amplitudes();
    let r = (0.5f64).sqrt();
    assert!((amps[0].re - r).abs() < 1e-12 && (amps[3].re - r).abs() < 1e-12);
    assert_eq!(amps[1], qubitkit::Complex::ZERO);
    assert_eq!(amps[2], qubitkit::Complex::ZERO);
}

#[test]
fn env_seed_is_used_and_overridden_by_flag() {
    let bin = env!("CARGO_BIN_EXE_qubitkit");
    let out = Command::new(bin)
        .args(["grover", "--qubits", "4", "--marked", "2", "--json"])
        .env("QUBITKIT_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["seed"], 123);

    let out = Command::new(bin)
        .args(["grover", "--qubits", "4", "--marked", "2", "--seed", "5", "--json"])
        .env("QUBITKIT_SEED", "123")
        .output()
        .unwrap();
    assert_eq!(json_of(&out)["seed"], 5);

    let out = Command::new(bin)
        .args(["grover", "--qubits", "4", "--marked", "2"])
        .env("QUBITKIT_SEED", "not a number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

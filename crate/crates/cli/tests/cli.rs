use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn qcharge(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qcharge"))
        .args(args)
        .env_remove("QCHARGE_TOL")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8")
}

fn diag_state(dir: &Path, name: &str, diag: &[f64]) -> PathBuf {
    let d = diag.len();
    let rows: Vec<Vec<[f64; 2]>> = (0..d)
        .map(|i| {
            (0..d)
                .map(|j| [if i == j { diag[i] } else { 0.0 }, 0.0])
                .collect()
        })
        .collect();
    write(
        dir,
        name,
        json!({"format": "qcharge-state-v1", "dim": d, "matrix": rows}),
    )
}

fn write(dir: &Path, name: &str, v: Value) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, v.to_string()).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn json_value(out: &Output) -> Value {
    serde_json::from_str(&stdout(out)).expect("json output")
}

#[test]
fn orthogonal_product_states_are_half_pi_apart() {
    let dir = TempDir::new().unwrap();
    let a = diag_state(dir.path(), "a.json", &[1.0, 0.0, 0.0, 0.0]);
    let b = diag_state(dir.path(), "b.json", &[0.0, 0.0, 0.0, 1.0]);
    let out = qcharge(&["distance", s(&a), s(&b), "--json"]);
    assert_eq!(code(&out), 0);
    let v = json_value(&out);
    assert!((v["value"].as_f64().unwrap() - PI / 2.0).abs() < 1e-9);
    assert_eq!(v["method"], "pure-closed-form");
    assert_eq!(v["achievability"]["pass"], true);
}

#[test]
fn identical_files_give_zero() {
    let dir = TempDir::new().unwrap();
    let a = diag_state(dir.path(), "a.json", &[0.5, 0.3, 0.2]);
    let out = qcharge(&["distance", s(&a), s(&a), "--json"]);
    assert_eq!(code(&out), 0);
    assert!(json_value(&out)["value"].as_f64().unwrap().abs() < 1e-10);
}

#[test]
fn cyclic_shift_files_saturate_the_upper_bound() {
    let dir = TempDir::new().unwrap();
    let a = diag_state(dir.path(), "a.json", &[0.5, 0.3, 0.2]);
    let b = diag_state(dir.path(), "b.json", &[0.2, 0.5, 0.3]);
    let out = qcharge(&["distance", s(&a), s(&b), "--json"]);
    assert_eq!(code(&out), 0);
    let v = json_value(&out);
    assert!((v["value"].as_f64().unwrap() - 2.0 * PI / 3.0).abs() < 1e-6);
    assert!((v["bounds"]["upper"].as_f64().unwrap() - 2.0 * PI / 3.0).abs() < 1e-12);
}

#[test]
fn text_report_uses_twelve_significant_digits() {
    let dir = TempDir::new().unwrap();
    let a = diag_state(dir.path(), "a.json", &[1.0, 0.0]);
    let b = diag_state(dir.path(), "b.json", &[0.0, 1.0]);
    let out = qcharge(&["distance", s(&a), s(&b)]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("distance       1.57079632679\n"));
}

#[test]
fn different_spectra_exit_with_mismatch_code() {
    let dir = TempDir::new().unwrap();
    let a = diag_state(dir.path(), "a.json", &[0.7, 0.3]);
    let b = diag_state(dir.path(), "b.json", &[0.6, 0.4]);
    let out = qcharge(&["distance", s(&a), s(&b)]);
    assert_eq!(code(&out), 2);
}

#[test]
fn malformed_inputs_exit_with_parse_code() {
    let dir = TempDir::new().unwrap();
    let good = diag_state(dir.path(), "good.json", &[1.0, 0.0]);
    let garbage = dir.path().join("garbage.json");
    std::fs::write(&garbage, "not json").unwrap();
    let wrong_tag = write(
        dir.path(),
        "tag.json",
        json!({"format": "other-v9", "dim": 1, "matrix": [[[1.0, 0.0]]]}),
    );
    let not_unit_trace = diag_state(dir.path(), "trace.json", &[0.7, 0.7]);
    let ragged = write(
        dir.path(),
        "ragged.json",
        json!({"format": "qcharge-state-v1", "dim": 2, "matrix": [[[1.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]]}),
    );
    for bad in [&garbage, &wrong_tag, &not_unit_trace, &ragged] {
        let out = qcharge(&["distance", s(bad), s(&good)]);
        assert_eq!(code(&out), 3, "{}", bad.display());
    }
    assert_eq!(code(&qcharge(&["distance", s(&good)])), 3);
    assert_eq!(code(&qcharge(&["fig3", "--n", "many"])), 3);
}

#[test]
fn bad_tolerance_environment_exits_with_parse_code() {
    let dir = TempDir::new().unwrap();
    let a = diag_state(dir.path(), "a.json", &[1.0, 0.0]);
    let out = Command::new(env!("CARGO_BIN_EXE_qcharge"))
        .args(["bounds", s(&a), s(&a)])
        .env("QCHARGE_TOL", "group=banana")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
}

#[test]
fn unwritable_output_exits_with_io_code() {
    let dir = TempDir::new().unwrap();
    let target = dir.path().join("missing-dir").join("out.csv");
    assert_eq!(
        code(&qcharge(&["fig3", "--n", "1", "--out", s(&target)])),
        5
    );
    assert_eq!(code(&qcharge(&["race", "--out", s(&target)])), 5);
    assert_eq!(code(&qcharge(&["gen", "pure", "--out", s(&target)])), 5);
    let missing = dir.path().join("nope.json");
    assert_eq!(code(&qcharge(&["bounds", s(&missing), s(&missing)])), 5);
}

#[test]
fn fig3_is_byte_identical_for_a_fixed_seed() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = qcharge(&["fig3", "--n", "4", "--seed", "11", "--out", s(p)]);
        assert_eq!(code(&out), 0);
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "index,seed,dim,distance,lower_bures,lower_tight,upper,converged,wall_time_ms"
    );
    for (k, line) in lines.enumerate() {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f.len(), 9);
        assert_eq!(f[0], k.to_string());
        assert_eq!(f[1], (11 + k).to_string());
        let v: Vec<f64> = f[3..7].iter().map(|x| x.parse().unwrap()).collect();
        assert!(v[1] <= v[0] + 1e-9 && v[2] <= v[0] + 1e-9 && v[0] <= v[3] + 1e-9);
        assert_eq!(f[7], "true");
    }
}

#[test]
fn fig3_qubit_rows_match_the_closed_form() {
    let out = qcharge(&["fig3", "--n", "5", "--dim", "2", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    for line in stdout(&out).lines().skip(1) {
        let f: Vec<f64> = line
            .split(',')
            .skip(3)
            .take(3)
            .map(|x| x.parse().unwrap())
            .collect();
        // for non-degenerate qubits the eigenspace bound is exact
        assert!(f[1] <= f[0] + 1e-9, "{line}");
        assert!((f[0] - f[2]).abs() < 1e-9, "{line}");
    }
}

#[test]
fn race_csv_has_all_three_protocols() {
    let out = qcharge(&["race", "--steps", "8"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "protocol,time,fidelity,entanglement_entropy"
    );
    let rows: Vec<Vec<String>> = lines
        .map(|l| l.split(',').map(String::from).collect())
        .collect();
    for name in ["quantum", "classical-parallel", "classical-sequential"] {
        let last = rows.iter().rfind(|r| r[0] == name).expect(name);
        assert!(
            (last[2].parse::<f64>().unwrap() - 1.0).abs() < 1e-9,
            "{name}"
        );
    }
    assert_eq!(code(&qcharge(&["race", "--n-qubits", "3"])), 1);
}

#[test]
fn generated_couples_round_trip_through_distance_and_qsl() {
    let dir = TempDir::new().unwrap();
    let r = dir.path().join("r.json");
    let sg = dir.path().join("s.json");
    let drive = dir.path().join("drive.json");
    let out = qcharge(&[
        "gen",
        "couple",
        "--dim",
        "3",
        "--seed",
        "5",
        "--spectrum",
        "0.6,0.3,0.1",
        "--out",
        s(&r),
        "--out-sigma",
        s(&sg),
    ]);
    assert_eq!(code(&out), 0);
    let out = qcharge(&[
        "distance",
        s(&r),
        s(&sg),
        "--json",
        "--drive-out",
        s(&drive),
    ]);
    assert_eq!(code(&out), 0);
    let d = json_value(&out)["value"].as_f64().unwrap();
    let b = json_value(&qcharge(&["bounds", s(&r), s(&sg), "--json"]));
    assert!(b["lower_tight"].as_f64().unwrap() <= d + 1e-9);
    assert!(d <= b["upper"].as_f64().unwrap() + 1e-9);

    // the optimal drive runs at unit speed, so both speed-limit times equal its duration
    let out = qcharge(&["qsl", s(&drive), s(&r), "--json"]);
    assert_eq!(code(&out), 0);
    let q = json_value(&out);
    assert!((q["t_cd"].as_f64().unwrap() - d).abs() < 1e-7);
    assert!((q["t_mcd"].as_f64().unwrap() - d).abs() < 1e-7);
    assert!((q["distance"].as_f64().unwrap() - d).abs() < 1e-7);
}

#[test]
fn gen_couple_requires_both_paths() {
    assert_eq!(code(&qcharge(&["gen", "couple", "--out", "x.json"])), 3);
}

#[test]
fn gen_pure_and_mixed_write_valid_states() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("p.json");
    let m = dir.path().join("m.json");
    assert_eq!(
        code(&qcharge(&["gen", "pure", "--dim", "4", "--out", s(&p)])),
        0
    );
    assert_eq!(
        code(&qcharge(&[
            "gen",
            "mixed",
            "--dim",
            "4",
            "--spectrum",
            "0.4,0.3,0.2,0.1",
            "--out",
            s(&m)
        ])),
        0
    );
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap();
    assert_eq!(v["format"], "qcharge-state-v1");
    assert_eq!(v["dim"], 4);
    let out = qcharge(&["bounds", s(&p), s(&p), "--json"]);
    assert_eq!(code(&out), 0);
    assert!(json_value(&out)["lower_bures"].as_f64().unwrap().abs() < 1e-7);
    assert_eq!(
        code(&qcharge(&["gen", "mixed", "--spectrum", "0.5,0.6"])),
        1
    );
}

#[test]
fn power_report_respects_its_inequalities() {
    let dir = TempDir::new().unwrap();
    let h = dir.path().join("h.json");
    let r = dir.path().join("r.json");
    let sg = dir.path().join("s.json");
    assert_eq!(
        code(&qcharge(&[
            "gen",
            "hamiltonian",
            "--dim",
            "3",
            "--seed",
            "2",
            "--out",
            s(&h)
        ])),
        0
    );
    assert_eq!(
        code(&qcharge(&[
            "gen",
            "couple",
            "--dim",
            "3",
            "--seed",
            "9",
            "--out",
            s(&r),
            "--out-sigma",
            s(&sg)
        ])),
        0
    );
    let out = qcharge(&["power", s(&h), s(&r), s(&sg), "--json"]);
    assert_eq!(code(&out), 0);
    let v = json_value(&out);
    let f = |k: &str| v[k].as_f64().unwrap();
    assert!(f("energy_gap") / f("distance") <= f("bound_new") + 1e-9);
    assert!(f("bound_new") <= f("bound_old") + 1e-9);
    assert!(f("ratio") <= 1.0 + 1e-9);
}

#[test]
fn help_lists_tolerance_keys_and_defaults() {
    let out = qcharge(&["--help"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("QCHARGE_TOL"));
    assert!(text.contains("achievability=1e-7"));
    let out = qcharge(&["fig3", "--help"]);
    assert!(stdout(&out).contains("[default: 20]"));
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_moreau-pi"))
}

struct Workdir(TempDir);

impl Workdir {
    fn new() -> Self {
        Workdir(tempfile::tempdir().unwrap())
    }

    fn write(&self, name: &str, value: &Value) -> PathBuf {
        let path = self.0.path().join(name);
        std::fs::write(&path, value.to_string()).unwrap();
        path
    }

    fn write_raw(&self, name: &str, text: &str) -> PathBuf {
        let path = self.0.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }
}

fn network(nodes: usize, springs: &[(usize, usize, f64, f64)]) -> Value {
    let springs: Vec<Value> = springs
        .iter()
        .map(|&(i, j, a, r)| json!({ "i": i, "j": j, "a": a, "r": r }))
        .collect();
    json!({ "version": 1, "node_count": nodes, "springs": springs, "constraint": { "i": 1, "j": nodes } })
}

fn signal(points: &[(f64, f64)]) -> Value {
    let bps: Vec<Value> = points
        .iter()
        .map(|&(t, g)| json!({ "t": t, "g": g }))
        .collect();
    json!({ "breakpoints": bps })
}

fn run(args: &[&str], files: &[&Path]) -> Output {
    let mut cmd = bin();
    cmd.arg(args[0]);
    for f in files {
        cmd.arg(f);
    }
    cmd.args(&args[1..]);
    cmd.output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut lines = text.lines();
    let header = lines
        .next()
        .unwrap()
        .split(',')
        .map(str::to_owned)
        .collect();
    let rows = lines
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

fn chain() -> Value {
    network(3, &[(1, 2, 1.0, 1.0), (2, 3, 1.0, 2.0)])
}

const BRIDGE: [(usize, usize, f64, f64); 5] = [
    (1, 2, 3.78, 2.26),
    (1, 3, 1.54, 1.21),
    (2, 3, 0.957, 0.854),
    (2, 4, 4.48, 0.420),
    (3, 4, 0.666, 3.71),
];

#[test]
fn zero_signal_gives_zero_columns() {
    let w = Workdir::new();
    let net = w.write("net.json", &chain());
    let sig = w.write("sig.json", &signal(&[(0.0, 0.0), (1.0, 0.0)]));
    let out = run(&["simulate"], &[&net, &sig]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["t", "g", "sigma_1_2", "sigma_2_3", "R"]);
    assert!(!rows.is_empty());
    for row in rows {
        assert!(row[1..].iter().all(|&x| x == 0.0), "{row:?}");
    }
}

#[test]
fn chain_follows_the_effective_stop_loop() {
    // Two unit springs in series: stiffness 1/2, yield at stress 1, so the
    // stress is (1/2) times a stop of threshold 2 applied to g.
    let w = Workdir::new();
    let net = w.write("net.json", &chain());
    let sig = w.write(
        "sig.json",
        &signal(&[(0.0, 0.0), (1.0, 3.0), (2.0, -1.0), (3.0, 2.5), (4.0, -3.5)]),
    );
    let out = run(&["simulate", "--dt-max", "0.01"], &[&net, &sig]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (_, rows) = csv_rows(&stdout(&out));
    let mut e: f64 = 0.0;
    let mut g_prev = 0.0;
    let mut worst: f64 = 0.0;
    for row in &rows {
        let g = row[1];
        e = (e + g - g_prev).clamp(-2.0, 2.0);
        g_prev = g;
        let expected = 0.5 * e;
        worst = worst
            .max((row[2] - expected).abs())
            .max((row[3] - expected).abs());
        worst = worst.max((row[4] + expected).abs());
    }
    assert!(worst <= 1e-8, "worst {worst}");
}

#[test]
fn malformed_file_names_the_field() {
    let w = Workdir::new();
    let net = w.write_raw(
        "net.json",
        r#"{"version":1,"node_count":3,"springs":[{"i":1,"j":2,"a":1,"rr":1}],"constraint":{"i":1,"j":3}}"#,
    );
    let sig = w.write("sig.json", &signal(&[(0.0, 0.0), (1.0, 1.0)]));
    let out = run(&["simulate"], &[&net, &sig]);
    assert_eq!(out.status.code(), Some(1));
    let msg = stderr(&out);
    assert!(msg.contains("rr") && msg.contains("line 1"), "{msg}");

    let truncated = w.write_raw("bad.json", r#"{"breakpoints":[{"t":0,"g":0}"#);
    let out = run(&["simulate"], &[&net, &truncated]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn invalid_network_is_a_parse_error() {
    let w = Workdir::new();
    let net = w.write(
        "net.json",
        &network(3, &[(1, 2, -1.0, 1.0), (2, 3, 1.0, 1.0)]),
    );
    let out = run(&["check"], &[&net]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn chain_check_passes_with_one_link() {
    let w = Workdir::new();
    let net = w.write("net.json", &chain());
    let out = run(&["check", "--format", "json"], &[&net]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(doc["equivalent"], true);
    assert_eq!(doc["trace"]["links"], 1);
    let curve = &doc["effective_curves"]["1_2"]["points"];
    assert_eq!(curve.as_array().unwrap().len(), 2);
    let end = curve[1].as_array().unwrap();
    assert!((end[0].as_f64().unwrap() - 2.0).abs() < 1e-12);
    assert!((end[1].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn double_hit_network_fails_the_check() {
    // Branches 1-2-5 and 1-3-5 yield at the same input, so two constraints
    // become active at once.
    let w = Workdir::new();
    let net = w.write(
        "net.json",
        &network(
            5,
            &[
                (1, 2, 2.0, 2.0),
                (2, 5, 2.0, 4.0),
                (1, 3, 1.0, 1.0),
                (3, 5, 1.0, 3.0),
                (1, 4, 1.0, 3.0),
                (4, 5, 1.0, 3.0),
            ],
        ),
    );
    let out = run(&["check"], &[&net]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("unit_dim_drops: false"), "{text}");
    assert!(text.contains("witness: unit_dim_drops"), "{text}");
    assert!(text.contains("warning:"));
}

#[test]
fn five_node_nine_spring_network_reports() {
    let pairs = [
        (1, 2),
        (1, 3),
        (1, 4),
        (2, 3),
        (2, 4),
        (2, 5),
        (3, 4),
        (3, 5),
        (4, 5),
    ];
    let springs: Vec<_> = pairs
        .iter()
        .enumerate()
        .map(|(k, &(i, j))| (i, j, 0.5 + 0.37 * k as f64, 2.9 - 0.23 * k as f64))
        .collect();
    let w = Workdir::new();
    let net = w.write("net.json", &network(5, &springs));
    for format in ["text", "json"] {
        let out = run(&["check", "--format", format], &[&net]);
        let code = out.status.code().unwrap();
        assert!(code == 0 || code == 4, "{}", stderr(&out));
        assert!(stdout(&out).contains("nested_faces"));
    }
}

fn horizon(net: &Path) -> f64 {
    let out = run(&["check", "--format", "json"], &[net]);
    let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let d = doc["trace"]["distances"].as_array().unwrap();
    d.last().unwrap().as_f64().unwrap()
}

#[test]
fn compare_enforces_the_horizon() {
    let w = Workdir::new();
    let net = w.write("net.json", &chain());
    let sig = w.write("sig.json", &signal(&[(0.0, 0.0), (1.0, 3.0)]));
    let out = run(&["compare"], &[&net, &sig]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("horizon"));

    let out = run(&["compare", "--allow-beyond-saturation"], &[&net, &sig]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stderr(&out).contains("warning"));
}

#[test]
fn reducible_network_compares_closely() {
    let w = Workdir::new();
    let net = w.write("net.json", &chain());
    let sig = w.write(
        "sig.json",
        &signal(&[(0.0, 0.0), (1.0, 1.9), (2.0, -1.5), (3.0, 0.4)]),
    );
    let out = run(&["compare", "--projector", "active-set"], &[&net, &sig]);
    assert!(out.status.success(), "{}", stderr(&out));
    let (header, rows) = csv_rows(&stdout(&out));
    assert_eq!(header, ["t", "g", "discrepancy"]);
    let max = rows.iter().map(|r| r[2]).fold(0.0, f64::max);
    assert!(max <= 1e-10, "max {max}");
    assert!(stderr(&out).contains("max discrepancy"));
}

#[test]
fn bridge_discrepancy_persists_under_refinement() {
    let w = Workdir::new();
    let net = w.write("net.json", &network(4, &BRIDGE));
    let l = horizon(&net);
    let sig = w.write(
        "sig.json",
        &signal(&[
            (0.0, 0.0),
            (1.0, l),
            (2.0, -l),
            (3.0, 0.5 * l),
            (4.0, -0.3 * l),
            (5.0, l),
        ]),
    );
    for h in [2e-3, 5e-4] {
        let dt = (h * l).to_string();
        let out = run(
            &[
                "compare",
                "--projector",
                "active-set",
                "--dt-max",
                &dt,
                "--format",
                "json",
            ],
            &[&net, &sig],
        );
        assert!(out.status.success(), "{}", stderr(&out));
        let doc: Value = serde_json::from_str(&stdout(&out)).unwrap();
        let max = doc["max"].as_f64().unwrap();
        assert!(max > 1e-3, "dt {dt}: max {max}");
    }
}

#[test]
fn repeated_runs_are_byte_identical() {
    let w = Workdir::new();
    let net = w.write("net.json", &network(4, &BRIDGE));
    let sig = w.write("sig.json", &signal(&[(0.0, 0.0), (1.0, 0.4), (2.0, -0.3)]));
    let first = run(&["simulate"], &[&net, &sig]);
    let second = run(&["simulate"], &[&net, &sig]);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn parallel_springs_get_distinct_labels() {
    let w = Workdir::new();
    let net = w.write(
        "net.json",
        &network(3, &[(1, 2, 1.0, 1.0), (1, 2, 2.0, 0.5), (2, 3, 1.0, 1.0)]),
    );
    let sig = w.write("sig.json", &signal(&[(0.0, 0.0), (1.0, 0.2)]));
    let out = run(&["simulate"], &[&net, &sig]);
    assert!(out.status.success(), "{}", stderr(&out));
    let header = stdout(&out).lines().next().unwrap().to_owned();
    assert_eq!(header, "t,g,sigma_1_2,sigma_1_2#2,sigma_2_3,R");
}

#[test]
fn help_documents_every_flag() {
    for sub in ["simulate", "check", "compare"] {
        let out = bin().args([sub, "--help"]).output().unwrap();
        let text = stdout(&out);
        assert!(
            text.contains("--format") && text.contains("--tol"),
            "{text}"
        );
    }
    let out = bin().args(["compare", "--help"]).output().unwrap();
    let text = stdout(&out);
    assert!(text.contains("--dt-max") && text.contains("--allow-beyond-saturation"));
}

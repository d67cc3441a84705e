//! End-to-end tests of the `canspec` binary: artifacts, exit codes and
//! byte-stable output.

use std::f64::consts::{FRAC_1_PI, FRAC_PI_2};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FREE: &str = r#"{"p":1,"endpoint_right":"regular","name":"free",
  "segments":[{"length":2.0,"H":[[0.5,0.0],[0.0,0.5]]}]}"#;

const HALF_LINE: &str = r#"{"p":1,"endpoint_right":"limit_point","name":"free-half-line",
  "segments":[{"length":1.0,"H":[[0.5,0.0],[0.0,0.5]]}],
  "tail":{"length":1.0,"H":[[0.5,0.0],[0.0,0.5]]}}"#;

/// Free on [0, 1], then an indivisible interval of type π/2 on [1, 1.5].
const END_RUN: &str = r#"{"p":1,"endpoint_right":"regular","name":"end-run",
  "segments":[{"length":1.0,"H":[[0.5,0.0],[0.0,0.5]]},
              {"length":0.5,"H":[[0.0,0.0],[0.0,1.0]]}]}"#;

const TAU_Z: &str = r#"{"type":"herglotz","alpha":[[0.0]],"beta":[[1.0]]}"#;

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Self {
            dir: tempfile::tempdir().unwrap(),
        }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let path = self.dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        path
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn canspec(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_canspec")).args(args).output().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// Numeric rows of a CSV artifact (comment and header lines dropped).
fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect()
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn solve_emits_identity_and_rotation() {
    let ws = Workspace::new();
    let sys = ws.file("free.json", FREE);
    let grid = format!("0,{FRAC_PI_2}");
    let out = canspec(&["solve", "--system", p(&sys), "--z-grid", &grid]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.lines().next().unwrap().starts_with("# command=solve system=free"));
    let r = rows(&text);
    assert_eq!(r.len(), 2);
    // Columns: z_re, z_im, then (re, im) of u11, u12, u21, u22.
    let re = |row: &[f64]| [row[2], row[4], row[6], row[8]];
    let im_max = |row: &[f64]| [row[3], row[5], row[7], row[9]].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    for (got, want) in re(&r[0]).iter().zip([1.0, 0.0, 0.0, 1.0]) {
        assert!(close(*got, want, 1e-14));
    }
    for (got, want) in re(&r[1]).iter().zip([0.0, 1.0, -1.0, 0.0]) {
        assert!(close(*got, want, 1e-12), "{got} vs {want}");
    }
    assert!(im_max(&r[0]) < 1e-14 && im_max(&r[1]) < 1e-14);
}

#[test]
fn malformed_hamiltonian_is_an_input_error() {
    let ws = Workspace::new();
    let sys = ws.file(
        "bad.json",
        r#"{"p":1,"endpoint_right":"regular","segments":[{"length":1.0,"H":[[1.0,0.0],[0.0,1.0]]}]}"#,
    );
    let out = canspec(&["solve", "--system", p(&sys), "--z-grid", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("segments[0].H"), "{}", stderr(&out));
}

#[test]
fn schema_violations_cite_the_json_path() {
    let ws = Workspace::new();
    let sys = ws.file(
        "bad.json",
        r#"{"p":1,"endpoint_right":"regular","segments":[{"length":"one","H":[[0.5,0.0],[0.0,0.5]]}]}"#,
    );
    let out = canspec(&["solve", "--system", p(&sys), "--z-grid", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("segments[0].length"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_with_code_two() {
    let ws = Workspace::new();
    let sys = ws.file("free.json", FREE);
    for args in [
        vec!["solve", "--system", p(&sys)],
        vec!["solve", "--system", p(&sys), "--z-grid", "1,1"],
        vec!["solve", "--system", "/nonexistent/system.json", "--z-grid", "0"],
        vec!["weyl", "--system", p(&sys), "--z-grid", "i", "--tol", "-1"],
        vec!["weyl", "--system", p(&sys), "--z-grid", "i", "--triple", "dirichlet"],
        vec!["frobnicate"],
    ] {
        let out = canspec(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", stderr(&out));
    }
    assert_eq!(canspec(&["--help"]).status.code(), Some(0));
}

#[test]
fn weyl_full_regular_at_i() {
    let ws = Workspace::new();
    let sys = ws.file("free.json", FREE);
    let out = canspec(&["weyl", "--system", p(&sys), "--z-grid", "i"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let r = &rows(&text)[0];
    let t = 0.5f64.tanh();
    let want = [0.0, t, 0.0, 0.0, 0.0, 0.0, 0.0, t];
    for (got, want) in r[2..].iter().zip(want) {
        assert!(close(*got, want, 1e-12), "{got} vs {want}");
    }
    let cert = text.lines().find(|l| l.starts_with("# certification")).unwrap();
    assert!(cert.contains("certified=true"), "{cert}");
    let lambda_min: f64 = cert
        .split_whitespace()
        .find_map(|w| w.strip_prefix("lambda_min="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(lambda_min >= -1e-8);
}

#[test]
fn weyl_limit_point_free_half_line_is_i() {
    let ws = Workspace::new();
    let sys = ws.file("hl.json", HALF_LINE);
    let out = canspec(&["weyl", "--system", p(&sys), "--z-grid", "i,2i,1+i"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = rows(&stdout(&out));
    assert_eq!(r.len(), 3);
    for row in r {
        assert!(close(row[2], 0.0, 1e-6) && close(row[3], 1.0, 1e-6), "{row:?}");
    }
}

#[test]
fn weyl_on_the_spectrum_skips_unless_strict() {
    let ws = Workspace::new();
    let sys = ws.file("free.json", FREE);
    // tan(z/2) has a pole at z = π.
    let grid = format!("i,{}", std::f64::consts::PI);
    let out = canspec(&["weyl", "--system", p(&sys), "--z-grid", &grid]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(rows(&stdout(&out)).len(), 1);
    let out = canspec(&["weyl", "--system", p(&sys), "--z-grid", &grid, "--strict"]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
}

#[test]
fn spectral_neumann_atoms() {
    let ws = Workspace::new();
    let sys = ws.file("free.json", FREE);
    let out_path = ws.path("sigma.csv");
    let out = canspec(&[
        "spectral",
        "--system",
        p(&sys),
        "--triple",
        "neumann",
        "--lambda-grid",
        "0:5:2501",
        "--out",
        p(&out_path),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let atoms = rows(&std::fs::read_to_string(ws.path("sigma.atoms.csv")).unwrap());
    assert_eq!(atoms.len(), 2);
    for (row, want) in atoms.iter().zip([FRAC_PI_2, 3.0 * FRAC_PI_2]) {
        assert!(close(row[0], want, 2e-3), "{row:?}");
        assert!(close(row[1], 1.0, 1e-2), "{row:?}");
    }
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(ws.path("sigma.admissibility.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "admissible");
    assert!(out_path.exists());
}

#[test]
fn spectral_limit_point_density() {
    let ws = Workspace::new();
    let sys = ws.file("hl.json", HALF_LINE);
    let out_path = ws.path("hl.csv");
    let out = canspec(&["spectral", "--system", p(&sys), "--lambda-grid=-3:3:601", "--out", p(&out_path)]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let density = rows(&std::fs::read_to_string(ws.path("hl.density.csv")).unwrap());
    assert!(!density.is_empty());
    for row in density {
        assert!(close(row[1], FRAC_1_PI, 1e-6), "{row:?}");
    }
}

#[test]
fn inadmissible_tau_is_refused_without_force() {
    let ws = Workspace::new();
    let sys = ws.file("end.json", END_RUN);
    let out_path = ws.path("sigma.csv");
    let base = [
        "spectral",
        "--system",
        p(&sys),
        "--triple",
        "neumann",
        "--tau",
        TAU_Z,
        "--lambda-grid=-5:5:1001",
        "--out",
        p(&out_path),
    ];
    let out = canspec(&base);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    assert!(!out_path.exists());
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(ws.path("sigma.admissibility.json")).unwrap()).unwrap();
    assert_eq!(report["verdict"], "inadmissible");

    let mut forced = base.to_vec();
    forced.push("--force");
    let out = canspec(&forced);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert!(out_path.exists());
}

#[test]
fn resolvent_matrix_and_indivisible_commands_run() {
    let ws = Workspace::new();
    let sys = ws.file("free.json", FREE);
    let out = canspec(&["resolvent-matrix", "--system", p(&sys), "--triple", "neumann", "--z-grid", "0.5+0.5i"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r = &rows(&stdout(&out))[0];
    assert_eq!(r.len(), 2 + 2 * 4);

    let end = ws.file("end.json", END_RUN);
    let out = canspec(&["indivisible", "--system", p(&end), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let runs: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(runs.to_string().contains("1.5"), "{runs}");
}

#[test]
fn fourier_check_reports_small_defect() {
    let ws = Workspace::new();
    let sys = ws.file("free.json", FREE);
    let out = canspec(&[
        "fourier-check",
        "--system",
        p(&sys),
        "--triple",
        "neumann",
        "--lambda-grid=-50:50:20001",
        "--format",
        "json",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let defect = report["defect"].as_f64().unwrap();
    assert!(defect < 1e-3, "{report}");
    assert_eq!(report["bessel_holds"], true);
}

#[test]
fn artifacts_are_byte_identical_across_runs() {
    let ws = Workspace::new();
    let sys = ws.file("free.json", FREE);
    let run = |name: &str| {
        let out_path = ws.path(name);
        let out = canspec(&[
            "spectral",
            "--system",
            p(&sys),
            "--triple",
            "neumann",
            "--lambda-grid",
            "0:5:501",
            "--parseval",
            "--seed",
            "7",
            "--out",
            p(&out_path),
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
        let stem = name.trim_end_matches(".csv");
        [".csv", ".atoms.csv", ".density.csv", ".admissibility.json", ".parseval.json"]
            .map(|suffix| std::fs::read(ws.path(&format!("{stem}{suffix}"))).unwrap())
    };
    let a = run("a.csv");
    let b = run("b.csv");
    assert_eq!(a, b);
    assert!(a.iter().all(|bytes| !bytes.contains(&b'\r')));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn transmute(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transmute"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn with_threads(n: usize, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_transmute"))
        .env("TRANSMUTE_THREADS", n.to_string())
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "exit {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error(out: &Output) -> Value {
    assert!(!out.status.success());
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

fn as_refs(v: &[String]) -> Vec<&str> {
    v.iter().map(String::as_str).collect()
}

fn dir_str(d: &Path) -> &str {
    d.to_str().unwrap()
}

#[test]
fn family_writes_one_csv_per_member() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("fam");
    let r = report(&transmute(&[
        "family", "--f", "exp-i", "--kappa", "1", "--g", "one", "--M", "6", "--out", dir_str(&out),
    ]));
    for m in 0..=6 {
        let text = fs::read_to_string(out.join(format!("u_{m}.csv"))).unwrap();
        assert!(text.starts_with("x,y,re,im\n"));
        assert_eq!(text.lines().count(), 1 + 201 * 201);
    }
    assert!(!out.join("u_7.csv").exists());
    let res = r["results"]["pde_residuals"].as_array().unwrap();
    assert_eq!(res.len(), 7);
    assert!(r["results"]["pde_residual_max"].as_f64().unwrap() < 1e-3);
    assert_eq!(r["artifacts"].as_array().unwrap().len(), 7);
    let on_disk: Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(on_disk, r);
}

#[test]
fn kernel_methods_agree() {
    let tmp = TempDir::new().unwrap();
    let a = tmp.path().join("closed");
    let b = tmp.path().join("goursat");
    report(&transmute(&["kernel", "--q", "const", "--c", "1", "--out", dir_str(&a)]));
    let r = report(&transmute(&[
        "kernel", "--q", "const", "--c", "1", "--method", "goursat", "--out", dir_str(&b),
    ]));
    assert!(r["results"]["max_diff_vs_closed"].as_f64().unwrap() < 1e-8);
    assert!(r["results"]["goursat"]["iterations"].as_u64().unwrap() <= 25);

    // the two tables, compared cell by cell
    let read = |d: &Path| -> Vec<Vec<f64>> {
        fs::read_to_string(d.join("kernel.csv"))
            .unwrap()
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
            .collect()
    };
    let (ka, kb) = (read(&a), read(&b));
    assert_eq!(ka.len(), kb.len());
    let worst = ka
        .iter()
        .zip(&kb)
        .map(|(p, q)| {
            assert_eq!((p[0], p[1]), (q[0], q[1]));
            (p[2] - q[2]).hypot(p[3] - q[3])
        })
        .fold(0.0, f64::max);
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn verify_constant_q_suite_passes() {
    let tmp = TempDir::new().unwrap();
    let r = report(&transmute(&[
        "verify", "--suite", "constant-q", "--c", "1", "--grid", "2001", "--out", dir_str(tmp.path()),
    ]));
    assert_eq!(r["results"]["all_pass"], true);
    let checks = r["results"]["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 6);
    for c in checks {
        assert!(c["measured"].as_f64().unwrap() < c["tol"].as_f64().unwrap(), "{c}");
    }
}

#[test]
fn verify_reports_failed_checks_with_exit_one() {
    let tmp = TempDir::new().unwrap();
    let out = transmute(&[
        "verify", "--suite", "constant-q", "--grid", "401", "--tol", "e0=1e-30", "--out", dir_str(tmp.path()),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["results"]["all_pass"], false);
    let e0 = r["results"]["checks"].as_array().unwrap().iter().find(|c| c["name"] == "e0").unwrap().clone();
    assert_eq!(e0["pass"], false);
    assert_eq!(e0["tol"].as_f64(), Some(1e-30));
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let args = |d: &Path| {
        vec![
            "family".to_string(),
            "--f".into(),
            "cosh:0.7".into(),
            "--g".into(),
            "rational:0.3+0.2i".into(),
            "--M".into(),
            "5".into(),
            "--grid".into(),
            "61".into(),
            "--out".into(),
            dir_str(d).to_string(),
        ]
    };
    report(&with_threads(1, &as_refs(&args(&a))));
    report(&with_threads(3, &as_refs(&args(&b))));
    for m in 0..=5 {
        let name = format!("u_{m}.csv");
        assert_eq!(fs::read(a.join(&name)).unwrap(), fs::read(b.join(&name)).unwrap(), "{name}");
    }
}

#[test]
fn run_config_mirrors_flags() {
    let tmp = TempDir::new().unwrap();
    let (a, b) = (tmp.path().join("flags"), tmp.path().join("config"));
    let from_flags = report(&transmute(&[
        "spps", "--f", "exp", "--mu", "0.5", "--lambda", "-4", "--grid", "401", "--out", dir_str(&a),
    ]));
    let cfg = tmp.path().join("cfg.json");
    fs::write(
        &cfg,
        format!(
            r#"{{"command": "spps", "f": "exp", "mu": "0.5", "lambda": "-4", "grid": 401, "out": {:?}}}"#,
            dir_str(&b)
        ),
    )
    .unwrap();
    let from_config = report(&transmute(&["run", dir_str(&cfg)]));
    assert_eq!(from_flags["results"], from_config["results"]);
    assert_eq!(from_flags["artifacts"], from_config["artifacts"]);
    let res = &from_config["results"]["ode_residual"];
    assert!(res["u1"].as_f64().unwrap() < 1e-3 && res["u2"].as_f64().unwrap() < 1e-3);
}

#[test]
fn basis_reports_residuals_per_index() {
    let tmp = TempDir::new().unwrap();
    let r = report(&transmute(&["basis", "--f", "one", "--kmax", "4", "--grid", "101", "--out", dir_str(tmp.path())]));
    let res = r["results"]["ode_residuals"].as_array().unwrap();
    assert_eq!(res.len(), 5);
    // f = 1 gives phi_k = x^k
    let text = fs::read_to_string(tmp.path().join("phi_3.csv")).unwrap();
    for line in text.lines().skip(1) {
        let v: Vec<f64> = line.split(',').map(|c| c.parse().unwrap()).collect();
        assert!((v[1] - v[0].powi(3)).abs() < 1e-12 && v[2] == 0.0, "{line}");
    }
}

#[test]
fn validation_errors_are_json() {
    let tmp = TempDir::new().unwrap();
    let o = dir_str(tmp.path());
    let cases: [&[&str]; 5] = [
        &["basis", "--grid", "100", "--out", o],
        &["basis", "--f", "sin:1", "--out", o],
        &["kernel", "--q", "cosh:1", "--out", o],
        &["verify", "--suite", "constant-q", "--tol", "nope=1", "--out", o],
        &["family", "--f", "one"],
    ];
    for args in cases {
        let out = transmute(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert_eq!(error(&out)["error"]["kind"], "validation", "{args:?}");
    }
    let bad_threads = with_threads(0, &["basis", "--out", o]);
    assert_eq!(error(&bad_threads)["error"]["kind"], "validation");
}

#[test]
fn vanishing_generator_is_a_numerical_error() {
    let tmp = TempDir::new().unwrap();
    let out = transmute(&["basis", "--f", "poly:1,-2", "--out", dir_str(tmp.path())]);
    assert_eq!(out.status.code(), Some(3));
    assert_eq!(error(&out)["error"]["kind"], "numerical");
}

fn write_problem(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_bvp_converges_on_out_of_span_data() {
    let tmp = TempDir::new().unwrap();
    let problem = write_problem(
        tmp.path(),
        "p.json",
        r#"{"domain": {"kind": "rectangle", "x": [-0.9, 0.9], "y": [-0.9, 0.9]},
            "f": "cosh:1", "g": "exp-i:-1", "M": 20, "M_list": [4, 12, 20], "grid": 201,
            "data": {"kind": "exponential", "kx": "2", "ky": "0+2i"}}"#,
    );
    let out = tmp.path().join("b");
    let r = report(&transmute(&["solve-bvp", &problem, "--out", dir_str(&out)]));
    let rows = r["results"]["convergence"]["rows"].as_array().unwrap();
    let err = |i: usize| rows[i]["boundary_error_max"].as_f64().unwrap();
    assert!(err(2) < 1e-3);
    assert!(err(0) > 100.0 * err(2));
    assert_eq!(r["results"]["convergence"]["monotone"], true);
    let csv = fs::read_to_string(out.join("convergence.csv")).unwrap();
    assert_eq!(csv.lines().count(), 4);
    let field = fs::read_to_string(out.join("field.csv")).unwrap();
    assert!(field.starts_with("x,y,re,im\n"));
}

#[test]
fn solve_bvp_asymmetric_domain_needs_experimental() {
    let tmp = TempDir::new().unwrap();
    // u = 1 + x + 2y is harmonic, so f = g = 1 reproduces it at M = 2
    let problem = write_problem(
        tmp.path(),
        "t.json",
        r#"{"domain": {"kind": "polygon", "vertices": [[0, 0], [1, 0], [0, 1]]},
            "f": "one", "g": "one", "M": 4, "grid": 101,
            "data": {"kind": "tabulated", "points": [[0, 0, 1, 0], [1, 0, 2, 0], [0, 1, 3, 0]]}}"#,
    );
    let o = tmp.path().join("t");
    let refused = transmute(&["solve-bvp", &problem, "--out", dir_str(&o)]);
    assert_eq!(error(&refused)["error"]["kind"], "validation");
    let r = report(&transmute(&["solve-bvp", &problem, "--experimental", "--out", dir_str(&o)]));
    assert_eq!(r["results"]["experimental"], true);
    assert!(r["results"]["boundary_error_max"].as_f64().unwrap() < 1e-8);
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn ncg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncg"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> Output {
    let out = ncg(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    out
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn sample(dir: &TempDir, name: &str, algebra: &str, n: &str, seed: &str, scale: &str) -> PathBuf {
    let p = path(dir, name);
    ok(&["sample", "--algebra", algebra, "--n", n, "--seed", seed, "--scale", scale, "--out", s(&p)]);
    p
}

fn real(m: &[&[f64]]) -> Value {
    Value::Array(m.iter().map(|row| Value::Array(row.iter().map(|x| json!([x, 0.0])).collect())).collect())
}

/// An `n = 1` real geometry with `L = 0` and the given scalar `H`.
fn scalar_geometry(dir: &TempDir, h: [f64; 4]) -> PathBuf {
    let p = sample(dir, "scalar.json", "R", "1", "0", "0");
    let mut v = read_json(&p);
    for (k, x) in h.iter().enumerate() {
        v["H"][k] = real(&[&[*x]]);
    }
    fs::write(&p, serde_json::to_string(&v).unwrap()).unwrap();
    p
}

#[test]
fn sample_round_trips_byte_identically() {
    let dir = TempDir::new().unwrap();
    for (alg, n) in [("R", "2"), ("H", "2"), ("C", "2")] {
        let g = sample(&dir, "g.json", alg, n, "7", "1.0");
        let first = fs::read(&g).unwrap();
        // same seed, same bytes
        let again = sample(&dir, "g2.json", alg, n, "7", "1.0");
        assert_eq!(first, fs::read(&again).unwrap());
        let verify = ok(&["verify", "--geometry", s(&g)]);
        let report: Value = serde_json::from_slice(&verify.stdout).unwrap();
        assert_eq!(report["all_pass"], true);
        assert!(first.ends_with(b"}\n"));
    }
}

#[test]
fn fluctuate_bundle_reproduces_the_geometry_text() {
    let dir = TempDir::new().unwrap();
    let g = sample(&dir, "g.json", "R", "2", "3", "1.0");
    let form = path(&dir, "form.json");
    let one_form = json!({
        "version": 1,
        "symmetrize": true,
        "pairs": [{"a": real(&[&[1.0, 0.5], &[0.0, 2.0]]), "b": real(&[&[0.3, 0.0], &[1.0, -1.0]])}],
    });
    fs::write(&form, one_form.to_string()).unwrap();
    let bundle = path(&dir, "bundle.json");
    ok(&["fluctuate", "--geometry", s(&g), "--one-form", s(&form), "--out", s(&bundle)]);
    let v = read_json(&bundle);
    let rewritten = path(&dir, "rewritten.json");
    let text = serde_json::to_string_pretty(&v["geometry"]).unwrap() + "\n";
    fs::write(&rewritten, text).unwrap();
    assert_eq!(fs::read(&g).unwrap(), fs::read(&rewritten).unwrap());
    assert!(v["extraction_residual"].as_f64().unwrap() <= 1e-10);
    assert_eq!(v["fluctuated"]["theta"][0].as_array().unwrap().len(), 2);
}

#[test]
fn zero_scale_gives_zero_geometry_and_zero_integral() {
    let dir = TempDir::new().unwrap();
    let g = sample(&dir, "z.json", "R", "2", "1", "0");
    let v = read_json(&g);
    for key in ["L", "H"] {
        for m in v[key].as_array().unwrap() {
            for row in m.as_array().unwrap() {
                for z in row.as_array().unwrap() {
                    assert_eq!(z, &json!([0.0, 0.0]));
                }
            }
        }
    }
    let out = ok(&["integrate", "--geometry", s(&g)]);
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["Z"], 0.0);
}

#[test]
fn odd_quaternionic_size_is_a_usage_error() {
    let dir = TempDir::new().unwrap();
    let out = ncg(&["sample", "--algebra", "H", "--n", "3", "--out", s(&path(&dir, "h.json"))]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("even"));
    assert!(!path(&dir, "h.json").exists());
}

#[test]
fn corrupted_coefficient_fails_verification() {
    let dir = TempDir::new().unwrap();
    let g = sample(&dir, "g.json", "R", "2", "5", "1.0");
    let mut v = read_json(&g);
    v["H"][0][0][0][1] = json!(v["H"][0][0][0][1].as_f64().unwrap() + 1.0);
    fs::write(&g, serde_json::to_string(&v).unwrap()).unwrap();
    let report_path = path(&dir, "report.json");
    let out = ncg(&["verify", "--geometry", s(&g), "--out", s(&report_path)]);
    assert_eq!(out.status.code(), Some(1));
    let report = read_json(&report_path);
    assert_eq!(report["all_pass"], false);
    assert_eq!(report["error_kind"], "NotInAlgebra");
}

#[test]
fn non_anti_hermitian_l_fails_verification() {
    let dir = TempDir::new().unwrap();
    let g = sample(&dir, "g.json", "R", "2", "5", "1.0");
    let mut v = read_json(&g);
    v["L"][0][0][1] = json!([0.25, 0.0]);
    v["L"][0][1][0] = json!([0.25, 0.0]);
    fs::write(&g, serde_json::to_string(&v).unwrap()).unwrap();
    let out = ncg(&["verify", "--geometry", s(&g)]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["error_kind"], "NotAntiHermitian");
}

#[test]
fn malformed_file_is_a_parse_error() {
    let dir = TempDir::new().unwrap();
    let g = path(&dir, "bad.json");
    fs::write(&g, "{\n  \"version\": 1,\n  \"algebra\": \"R\",\n").unwrap();
    let out = ncg(&["verify", "--geometry", s(&g)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line"));
}

#[test]
fn complex_algebra_cannot_be_integrated() {
    let dir = TempDir::new().unwrap();
    let g = sample(&dir, "c.json", "C", "2", "1", "1.0");
    assert_eq!(ncg(&["integrate", "--geometry", s(&g)]).status.code(), Some(2));
}

/// `Z = (4Σh²)^{2}` for a scalar geometry.
#[test]
fn scalar_geometry_integral() {
    let dir = TempDir::new().unwrap();
    let g = scalar_geometry(&dir, [1.0, 0.0, 0.0, 0.0]);
    let report: Value = serde_json::from_slice(&ok(&["integrate", "--geometry", s(&g)]).stdout).unwrap();
    assert!((report["Z"].as_f64().unwrap() - 16.0).abs() <= 1e-9);

    let g = scalar_geometry(&dir, [1.0, 1.0, 1.0, 1.0]);
    let report: Value = serde_json::from_slice(&ok(&["integrate", "--geometry", s(&g)]).stdout).unwrap();
    assert!((report["Z"].as_f64().unwrap() - 256.0).abs() <= 1e-7);
}

#[test]
fn real_one_form_integral_matches_manifold_determinant() {
    let dir = TempDir::new().unwrap();
    let g = sample(&dir, "g.json", "R", "2", "11", "1.0");
    let form = path(&dir, "form.json");
    let one_form = json!({
        "version": 1,
        "symmetrize": true,
        "pairs": [
            {"a": real(&[&[0.0, 1.0], &[1.0, 0.0]]), "b": real(&[&[1.0, 2.0], &[-0.5, 0.3]])},
            {"a": real(&[&[0.7, 0.0], &[0.0, -0.2]]), "b": real(&[&[0.0, 1.0], &[0.4, 0.0]])},
        ],
    });
    fs::write(&form, one_form.to_string()).unwrap();
    let integral: Value =
        serde_json::from_slice(&ok(&["integrate", "--geometry", s(&g), "--one-form", s(&form)]).stdout).unwrap();
    let spectrum: Value =
        serde_json::from_slice(&ok(&["spectrum", "--geometry", s(&g), "--one-form", s(&form)]).stdout).unwrap();
    let z = integral["Z"].as_f64().unwrap();
    let det = spectrum["manifold_det"].as_f64().unwrap();
    assert!(det > 0.0);
    assert!((z - det).abs() <= 1e-8 * det, "Z {z} vs det {det}");
    assert!(integral["det_identity_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn reports_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let g = sample(&dir, "g.json", "H", "2", "9", "1.0");
    for cmd in ["verify", "spectrum", "integrate"] {
        let a = ok(&[cmd, "--geometry", s(&g)]).stdout;
        let b = ok(&[cmd, "--geometry", s(&g)]).stdout;
        assert_eq!(a, b, "{cmd}");
    }
}

#[test]
fn batch_run_writes_one_report_per_input() {
    let dir = TempDir::new().unwrap();
    let g1 = sample(&dir, "a.json", "R", "2", "1", "1.0");
    let g2 = sample(&dir, "b.json", "R", "3", "2", "1.0");
    let single = ok(&["integrate", "--geometry", s(&g2)]).stdout;
    let out = path(&dir, "reports");
    ok(&["integrate", "--geometry", s(&g1), "--geometry", s(&g2), "--jobs", "2", "--out", s(&out)]);
    assert_eq!(fs::read(out.join("001-b.integrate.json")).unwrap(), single);
    assert!(out.join("000-a.integrate.json").exists());
}

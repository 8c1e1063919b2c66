//! The command line, driven in-process.

use std::path::Path;

use trisym::cli::run;

fn trisym(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("trisym").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn written(dir: &Path) -> Vec<std::path::PathBuf> {
    let mut files: Vec<_> = std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
}

#[test]
fn types_listing() {
    let (code, out, _) = trisym(&["types", "7"]);
    assert_eq!(code, 0);
    assert_eq!(out, "[1,2,1]* 13\n[0,3,1] 15\n[0,1,2] 15\n");
    let (_, out, _) = trisym(&["types", "15"]);
    assert!(out.starts_with("[1,7,4]* 46\n"), "{out}");
    let (code, _, err) = trisym(&["types", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("no rules of degree 0"), "{err}");
}

#[test]
fn analytic_solve_writes_real_rules() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let (code, out, _) = trisym(&["solve", "6", "0,2,1", "--analytic", "--out", d]);
    assert_eq!(code, 0);
    assert!(out.contains("6 solutions: 2 PI, 2 PO, 2 CC"), "{out}");
    assert_eq!(written(dir.path()).len(), 4);

    let dir = tempfile::tempdir().unwrap();
    let (code, out, _) = trisym(&["solve", "3", "1,1,0", "--analytic", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0);
    assert!(out.contains("1 solution: 1 NI"), "{out}");
    let text = std::fs::read_to_string(&written(dir.path())[0]).unwrap();
    assert!(text.contains("\"weight\": \"-5.625"), "{text}");
}

#[test]
fn numeric_solve_is_deterministic() {
    let (code, a, _) = trisym(&["solve", "7", "0,1,2", "--seed", "1", "--no-write"]);
    assert_eq!(code, 0);
    assert!(a.contains("2 solutions: 2 PI"), "{a}");
    let (_, b, _) = trisym(&["solve", "7", "0,1,2", "--seed", "1", "--no-write"]);
    assert_eq!(a, b);
}

#[test]
fn inconsistent_type_needs_force() {
    let (code, _, err) = trisym(&["solve", "7", "1,1,0", "--no-write"]);
    assert_eq!(code, 2);
    assert!(err.contains("3*n2 >= n_e - d"), "{err}");
    let (code, out, _) = trisym(&["solve", "7", "1,1,0", "--force", "--starts", "50", "--no-write"]);
    assert_eq!(code, 3, "{out}");
}

#[test]
fn verify_files() {
    let dir = tempfile::tempdir().unwrap();
    trisym(&["solve", "7", "0,1,2", "--analytic", "--out", dir.path().to_str().unwrap()]);
    let file = written(dir.path())[0].clone();
    let (code, out, _) = trisym(&["verify", file.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("certified degree 7"), "{out}");

    let text = std::fs::read_to_string(&file).unwrap().replace("\"degree\": 7", "\"degree\": 8");
    let claimed = dir.path().join("claims8.json");
    std::fs::write(&claimed, text).unwrap();
    let (code, out, _) = trisym(&["verify", claimed.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert!(out.contains("moment (4, 0)"), "{out}");

    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"schema\": 1,\n  \"degree\": ,\n}").unwrap();
    let (code, _, err) = trisym(&["verify", broken.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
}

#[test]
fn verify_catalog_passes() {
    let (code, out, _) = trisym(&["verify", "--catalog"]);
    assert_eq!(code, 0);
    assert!(out.ends_with("0 failed\n"), "{out}");
    let (code, out, _) = trisym(&["verify", "--catalog", "--tol", "1e-12"]);
    assert_eq!(code, 0, "{out}");
}

#[test]
fn lookup_command() {
    let (code, out, _) = trisym(&["lookup", "11", "--quality", "PI"]);
    assert_eq!(code, 0);
    assert!(out.contains("[0,2,4]") && out.contains("30 points"), "{out}");
}

fn parse_rows(out: &str) -> Vec<Vec<f64>> {
    out.lines().map(|l| l.split_whitespace().map(|x| x.parse().unwrap()).collect()).collect()
}

#[test]
fn export_formats() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    trisym(&["solve", "1", "1,0,0", "--analytic", "--out", d]);
    let centroid = written(dir.path())[0].clone();
    let (code, out, _) = trisym(&["export", centroid.to_str().unwrap(), "--format", "points-cartesian"]);
    assert_eq!(code, 0);
    let rows = parse_rows(&out);
    assert_eq!(rows.len(), 1);
    assert!((rows[0][0] - 0.5).abs() < 1e-15 && (rows[0][1] - 1.0 / 3.0).abs() < 1e-15 && (rows[0][2] - 1.0 / 3.0).abs() < 1e-15);

    let dir = tempfile::tempdir().unwrap();
    trisym(&["solve", "3", "0,0,1", "--analytic", "--out", dir.path().to_str().unwrap()]);
    let six = written(dir.path())[0].clone();
    let (_, out, _) = trisym(&["export", six.to_str().unwrap(), "--format", "points-cartesian"]);
    let rows = parse_rows(&out);
    assert_eq!(rows.len(), 6);
    assert!(rows.iter().all(|r| (r[0] - 1.0 / 12.0).abs() < 1e-15));

    let (_, out, _) = trisym(&["export", six.to_str().unwrap(), "--format", "points-cartesian", "--triangle=-1,0,2,-1,0.5,3"]);
    let total: f64 = parse_rows(&out).iter().map(|r| r[0]).sum();
    assert!((total - 5.25).abs() < 1e-13, "{total}");

    let (_, out, _) = trisym(&["export", six.to_str().unwrap(), "--format", "points-areal"]);
    let rows = parse_rows(&out);
    assert!(rows.iter().all(|r| (r[1] + r[2] + r[3] - 1.0).abs() < 1e-15));

    let (code, _, err) = trisym(&["export", six.to_str().unwrap(), "--format", "points-cartesian", "--triangle", "0,0,1,1,2,2"]);
    assert_eq!(code, 2);
    assert!(err.contains("degenerate triangle"), "{err}");

    let (_, out, _) = trisym(&["export", six.to_str().unwrap()]);
    assert_eq!(out, std::fs::read_to_string(&six).unwrap());
}

#[test]
fn usage_errors() {
    assert_eq!(trisym(&["solve", "7"]).0, 2);
    assert_eq!(trisym(&["solve", "7", "1,2"]).0, 2);
    assert_eq!(trisym(&["frobnicate"]).0, 2);
    assert_eq!(trisym(&["--help"]).0, 0);
}

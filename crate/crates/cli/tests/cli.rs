use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_shape-currents"))
}

fn run(args: &[&str], cwd: &Path) -> Output {
    bin().args(args).current_dir(cwd).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn circle(dir: &Path, name: &str, radius: &str) {
    let o = run(
        &["generate", "circle", "--radius", radius, "--points", "512", "--out", name],
        dir,
    );
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn circle_current_in_monomials() {
    let dir = tempfile::tempdir().unwrap();
    circle(dir.path(), "c.csv", "0.5");
    let o = run(&["current", "c.csv", "--monomial", "2"], dir.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    // basis order 1, x, y: the y dx entry is minus the enclosed area
    let y_dx = v["fx"][2].as_f64().unwrap();
    assert!((y_dx + std::f64::consts::FRAC_PI_4).abs() < 1e-4, "{y_dx}");
    let x_dy = v["fy"][1].as_f64().unwrap();
    assert!((x_dy + y_dx).abs() < 1e-12);
}

#[test]
fn current_written_to_file_matches_stdout() {
    let dir = tempfile::tempdir().unwrap();
    circle(dir.path(), "c.csv", "0.5");
    let a = run(&["current", "c.csv", "--mesh", "4"], dir.path());
    let b = run(&["current", "c.csv", "--mesh", "4", "--out", "f.json"], dir.path());
    assert!(a.status.success() && b.status.success());
    let from_file = std::fs::read_to_string(dir.path().join("f.json")).unwrap();
    let x: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    let y: serde_json::Value = serde_json::from_str(&from_file).unwrap();
    assert_eq!(x, y);
}

#[test]
fn missing_file_reports_path() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["current", "absent.csv"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("absent.csv"));
}

#[test]
fn malformed_csv_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "t,x,y\n0,0.1,0.2\n0.5,oops,0.1\n").unwrap();
    let o = run(&["current", "bad.csv"], dir.path());
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("bad.csv:3"), "{}", stderr(&o));
}

#[test]
fn distances() {
    let dir = tempfile::tempdir().unwrap();
    circle(dir.path(), "a.csv", "0.5");
    circle(dir.path(), "b.csv", "0.4");
    let same = run(&["distance", "a.csv", "a.csv", "--mesh", "8"], dir.path());
    assert!(same.status.success(), "{}", stderr(&same));
    assert_eq!(stdout(&same).trim().parse::<f64>().unwrap(), 0.0);
    let ab = run(&["distance", "a.csv", "b.csv", "--mesh", "8"], dir.path());
    let ba = run(&["distance", "b.csv", "a.csv", "--mesh", "8"], dir.path());
    let dab: f64 = stdout(&ab).trim().parse().unwrap();
    let dba: f64 = stdout(&ba).trim().parse().unwrap();
    assert!(dab > 0.0);
    assert!((dab - dba).abs() <= 1e-14 * dab);
}

#[test]
fn distance_from_stored_currents() {
    let dir = tempfile::tempdir().unwrap();
    circle(dir.path(), "a.csv", "0.5");
    circle(dir.path(), "b.csv", "0.4");
    for (src, dst) in [("a.csv", "a.json"), ("b.csv", "b.json")] {
        let o = run(&["current", src, "--mesh", "8", "--out", dst], dir.path());
        assert!(o.status.success());
    }
    let direct = run(&["distance", "a.csv", "b.csv", "--mesh", "8"], dir.path());
    let stored = run(&["distance", "a.json", "b.json"], dir.path());
    assert_eq!(stdout(&direct), stdout(&stored));

    let o = run(&["current", "b.csv", "--mesh", "4", "--out", "c.json"], dir.path());
    assert!(o.status.success());
    let mixed = run(&["distance", "a.json", "c.json"], dir.path());
    assert_eq!(mixed.status.code(), Some(2), "{}", stderr(&mixed));
}

#[test]
fn unknown_preset_lists_choices() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["experiment", "no-such-preset"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("wiggly-table") && err.contains("reparam"), "{err}");
}

#[test]
fn bad_flags_are_usage_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["current", "x.csv", "--mesh", "4", "--monomial", "3"], dir.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["current", "x.csv", "--domain", "1,0,0,1"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn curve_outside_domain_is_numeric_failure() {
    let dir = tempfile::tempdir().unwrap();
    circle(dir.path(), "big.csv", "1.5");
    let o = run(&["current", "big.csv"], dir.path());
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn experiment_is_deterministic_and_config_reproduces_it() {
    let dir = tempfile::tempdir().unwrap();
    let a = run(&["experiment", "reparam", "--out", "a"], dir.path());
    assert!(a.status.success(), "{}", stderr(&a));
    let b = run(&["experiment", "reparam", "--out", "b"], dir.path());
    assert_eq!(stdout(&a), stdout(&b));
    let read = |p: &str| std::fs::read_to_string(dir.path().join(p)).unwrap();
    assert_eq!(read("a/reparam_norms.csv"), read("b/reparam_norms.csv"));

    let manifest: serde_json::Value = serde_json::from_str(&read("a/manifest.json")).unwrap();
    for art in manifest["artifacts"].as_array().unwrap() {
        assert!(dir.path().join("a").join(art["file"].as_str().unwrap()).exists());
    }

    let c = run(&["experiment", "--config", "a/config.json", "--out", "c"], dir.path());
    assert!(c.status.success(), "{}", stderr(&c));
    assert_eq!(stdout(&a), stdout(&c));
    assert_eq!(read("a/reparam_norms.csv"), read("c/reparam_norms.csv"));

    let d = run(&["experiment", "reparam", "--seed", "8", "--out", "d"], dir.path());
    assert!(d.status.success());
    let cfg: serde_json::Value = serde_json::from_str(&read("d/config.json")).unwrap();
    assert_eq!(cfg["seed"], 8);
}

#[test]
fn preset_must_match_config() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["experiment", "reparam", "--out", "a"], dir.path()).status.success());
    let o = run(&["experiment", "fish-family", "--config", "a/config.json"], dir.path());
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn generated_shapes_read_back() {
    let dir = tempfile::tempdir().unwrap();
    for shape in ["wiggly", "supercircle", "bowtie", "random"] {
        let out = format!("{shape}.csv");
        let o = run(&["generate", shape, "--points", "64", "--out", &out], dir.path());
        assert!(o.status.success(), "{shape}: {}", stderr(&o));
        let c = run(&["current", &out, "--mesh", "4"], dir.path());
        assert!(c.status.success(), "{shape}: {}", stderr(&c));
    }
}

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_poisred"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn golden(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
}

fn write(dir: &tempfile::TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

const GSTAR_HEAD: &str = r#"
[chart.gstar]
coords = ["a", "b"]
domain = { a = "positive" }

[bivector.pi]
chart = "gstar"
terms = [{ indices = ["a", "b"], coeff = "a*b" }]

[group.gstar]
bivector = "pi"
mul = ["a1*a2", "a1*b2 + b1"]
identity = ["1", "0"]

[bialgebra.g]
basis = ["xi", "eta"]
bracket = [{ pair = ["xi", "eta"], value = { eta = "1" } }]
cobracket = [{ element = "eta", pair = ["xi", "eta"], value = "1" }]
"#;

#[test]
fn gstar_manifest_passes() {
    let dir = tempfile::tempdir().unwrap();
    let text = format!(
        "{GSTAR_HEAD}
[[check]]
kind = \"jacobi\"
bivector = \"pi\"

[[check]]
kind = \"multiplicative\"
group = \"gstar\"

[[check]]
kind = \"dressing\"
group = \"gstar\"
side = \"left\"
bialgebra = \"g\"
"
    );
    let p = write(&dir, "gstar.toml", &text);
    let out = run(&["run", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert_eq!(stdout.lines().count(), 3);
    assert!(stdout.lines().all(|l| l.starts_with("PASS")));
}

#[test]
fn bundled_gstar_fixture_passes() {
    assert_eq!(code(&run(&["run", "--fixture", "gstar", "--strict"])), 0);
}

#[test]
fn unknown_coordinate_exits_2_with_symbol() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "bad.toml",
        &GSTAR_HEAD.replace("coeff = \"a*b\"", "coeff = \"a*zeta\""),
    );
    let out = run(&["run", p.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("zeta"), "{err}");
}

#[test]
fn perturbed_so3_exits_1_with_witness_point() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let out = run(&[
        "check",
        "jacobi",
        "--fixture",
        "so3-perturbed",
        "--json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let failed = &v["checks"][1];
    assert_eq!(failed["verdict"], "FAIL");
    assert_eq!(
        failed["witness"]["jacobiator"]["point"]
            .as_array()
            .unwrap()
            .len(),
        3
    );
}

#[test]
fn manifest_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["run", "/nonexistent/m.toml"])), 2);
    assert_eq!(code(&run(&["run", "--fixture", "no-such-fixture"])), 2);
    assert_eq!(code(&run(&["run"])), 2);
    let p = write(&dir, "broken.toml", "[chart.x\ncoords = 1");
    assert_eq!(code(&run(&["run", p.to_str().unwrap()])), 2);
    let p = write(
        &dir,
        "dangling.toml",
        &format!("{GSTAR_HEAD}\n[[check]]\nkind = \"jacobi\"\nbivector = \"rho\"\n"),
    );
    let out = run(&["run", p.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rho"));
}

#[test]
fn check_error_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(
        &dir,
        "m.toml",
        &format!("{GSTAR_HEAD}\n[[check]]\nkind = \"jacobi\"\n"),
    );
    let out = run(&["run", p.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ERROR"));
}

#[test]
fn warn_fails_only_under_strict() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"
[chart.c]
coords = ["a", "b"]
domain = { a = "positive", b = "positive" }

[bivector.pi]
chart = "c"
terms = [{ indices = ["a", "b"], coeff = "1" }]

[[check]]
kind = "casimir"
bivector = "pi"
function = "a*(log(a*b) - log(a) - log(b))"
"#;
    let p = write(&dir, "w.toml", text);
    let out = run(&["run", p.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("WARN"));
    assert_eq!(code(&run(&["run", p.to_str().unwrap(), "--strict"])), 1);
}

#[test]
fn reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let out = run(&[
            "run",
            "--all-fixtures",
            "--seed",
            "42",
            "--json",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 1);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn seed_is_recorded_and_changes_sampling() {
    let out = run(&[
        "check",
        "jacobi",
        "--fixture",
        "so3-perturbed",
        "--seed",
        "7",
        "--json",
        "-",
    ]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    let golden: Value = serde_json::from_str(
        &std::fs::read_to_string(golden("so3-perturbed-jacobi.golden.json")).unwrap(),
    )
    .unwrap();
    assert_ne!(
        v["checks"][1]["witness"]["jacobiator"]["point"],
        golden["checks"][1]["witness"]["jacobiator"]["point"]
    );
}

#[test]
fn golden_reports() {
    for (args, file) in [
        (
            &["run", "--fixture", "gstar-case3"][..],
            "gstar-case3.golden.json",
        ),
        (
            &["check", "jacobi", "--fixture", "so3-perturbed"][..],
            "so3-perturbed-jacobi.golden.json",
        ),
    ] {
        let mut args = args.to_vec();
        args.extend(["--json", "-"]);
        let out = run(&args);
        let expected = std::fs::read_to_string(golden(file)).unwrap();
        assert_eq!(String::from_utf8(out.stdout).unwrap(), expected, "{file}");
    }
}

#[test]
fn subcommands_select_kinds() {
    let out = run(&["reduce", "--fixture", "gstar-case3"]);
    assert_eq!(code(&out), 0);
    let names: Vec<String> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.split_whitespace().nth(1).unwrap().to_string())
        .collect();
    assert_eq!(
        names,
        ["ideal-invariance", "ideal-closure", "reduced-bracket"]
    );

    // nothing declared: defaults over every object of the right type
    let out = run(&["check", "multiplicative", "--fixture", "gstar-case1"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        "PASS  multiplicative:gstar\n"
    );

    for args in [
        &["check", "cocycle", "--fixture", "gstar"][..],
        &["check", "action", "--fixture", "gstar"],
        &["check", "moment", "--fixture", "classical"],
        &["check", "poisson-map", "--fixture", "gstar-case2"],
        &["dual", "--fixture", "gstar"],
        &["dressing", "--fixture", "gstar"],
        &["leaf", "scan", "--fixture", "so3"],
    ] {
        let out = run(args);
        assert_eq!(code(&out), 0, "{args:?}");
        assert!(!out.stdout.is_empty(), "{args:?}");
    }
}

#[test]
fn timing_is_opt_in() {
    let out = run(&["run", "--fixture", "so3", "--json", "-"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["millis"] == 0));
    let out = run(&["run", "--fixture", "so3", "--timing", "--json", "-"]);
    assert_eq!(code(&out), 0);
}

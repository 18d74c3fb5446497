use std::path::Path;
use std::process::{Command, Output};

fn isonet(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_isonet"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn generated() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    let o = isonet(dir.path(), &["gen", "catenoid", "--n", "20", "--irg", "6", "--jrg", "6", "--out-dir", "."]);
    assert!(o.status.success(), "{}", stderr(&o));
    dir
}

#[test]
fn transforms_and_checks_pass() {
    let dir = generated();
    let d = dir.path();
    for args in [
        vec!["check", "g.net", "--suite", "isothermic"],
        vec!["christoffel", "g.net", "--out", "gs.net"],
        vec!["check", "g.net", "--against", "gs.net", "--suite", "christoffel"],
        vec!["ttransform", "g.net", "--lambda", "0.2", "--out", "gl.net"],
        vec!["check", "g.net", "--against", "gl.net", "--suite", "t-laws"],
        vec!["darboux", "g.net", "--lambda", "-0.3", "--init", "1.5,0.2,0.3,0", "--out", "gd.net"],
        vec!["check", "g.net", "--against", "gd.net", "--suite", "darboux"],
        vec!["check", "g.net", "--suite", "permutability"],
        vec!["check", "g.net", "--against", "h.net", "--suite", "horospherical", "--lambda", "0.25"],
        vec!["--sequential", "check", "g.net", "--against", "h.net", "--suite", "horospherical", "--lambda", "-0.8"],
    ] {
        let o = isonet(d, &args);
        assert_eq!(o.status.code(), Some(0), "{args:?}\n{}{}", stdout(&o), stderr(&o));
    }
}

#[test]
fn json_report() {
    let dir = generated();
    let o = isonet(dir.path(), &["check", "g.net", "--suite", "isothermic", "--json", "-"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.trim_start().starts_with('{'));
    assert!(text.contains("\"pass\": true"));
}

#[test]
fn failing_check_exits_one() {
    let dir = generated();
    // h is not a T-transform of g at the stored parameter
    let o = isonet(dir.path(), &["check", "g.net", "--against", "h.net", "--suite", "t-laws"]);
    assert_eq!(o.status.code(), Some(1), "{}{}", stdout(&o), stderr(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn cousin_sweep_writes_27_meshes() {
    let dir = tempfile::tempdir().unwrap();
    let o = isonet(
        dir.path(),
        &[
            "cousins",
            "--lambda-list",
            "-0.8,-0.117,-0.05,-0.025,1e-7,0.01,0.025,0.085,0.25",
            "--n",
            "20",
            "--irg",
            "10",
            "--jrg",
            "10",
            "--out-dir",
            "out",
            "--format",
            "ply",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
    let meshes: Vec<_> = std::fs::read_dir(dir.path().join("out")).unwrap().collect();
    assert_eq!(meshes.len(), 27);
    assert!(dir.path().join("out/04_lambda1e-7_ball.ply").exists());
    assert_eq!(stdout(&o).matches(": pass").count(), 9);
}

#[test]
fn singular_parameter_is_an_input_error() {
    let dir = generated();
    // b_n = -1 after normalization, so lambda = -1 hits 1 - lambda b = 0
    let o = isonet(dir.path(), &["ttransform", "g.net", "--lambda", "-1", "--out", "x.net"]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("singular spectral parameter") && err.contains("b_"), "{err}");
}

#[test]
fn broken_input_is_an_input_error() {
    let dir = generated();
    let d = dir.path();
    let text = std::fs::read_to_string(d.join("g.net")).unwrap();
    std::fs::write(d.join("cut.net"), &text[..text.len() / 2]).unwrap();
    let o = isonet(d, &["check", "cut.net", "--suite", "isothermic"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));

    let o = isonet(d, &["check", "missing.net", "--suite", "isothermic"]);
    assert_eq!(o.status.code(), Some(2));
    let o = isonet(d, &["check", "g.net", "--suite", "darboux"]);
    assert_eq!(o.status.code(), Some(2), "darboux without --against");
}

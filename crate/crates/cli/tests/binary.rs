use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fibrefilm"))
}

#[test]
fn period_run_prints_its_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("p.cfg");
    std::fs::write(&cfg, "command = period\nbranch.lambda = -0.5\nbranch.c0 = 0.5\n").unwrap();
    let out = bin()
        .args(["period", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(tmp.path().join("out"))
        .args(["--override", "grid.nodes=64"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("status = ok"));
    assert!(tmp.path().join("out/profile.csv").exists());
    assert!(tmp.path().join("out/summary.txt").exists());
    assert!(!tmp.path().join("out/.lock").exists());
}

#[test]
fn bad_config_exits_nonzero_with_every_error() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("bad.cfg");
    std::fs::write(&cfg, "model.A = 0.1\nmodel.m = 2\nfoo = 1\n").unwrap();
    let out = bin().args(["minimize", "--config"]).arg(&cfg).arg("--out").arg(tmp.path().join("o")).output().unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2") && err.contains("line 3"), "{err}");
}

#[test]
fn locked_output_directory_is_refused() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("p.cfg");
    std::fs::write(&cfg, "").unwrap();
    std::fs::write(tmp.path().join(".lock"), "1").unwrap();
    let out = bin().args(["period", "--config"]).arg(&cfg).arg("--out").arg(tmp.path()).output().unwrap();
    assert!(!out.status.success());
    assert!(String::from_utf8(out.stderr).unwrap().contains("locked"));
}

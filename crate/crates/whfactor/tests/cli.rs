//! End-to-end runs of the `whfactor` binary: flags, files, exit codes.

use std::path::PathBuf;
use std::process::Command;

fn binary() -> Command {
    Command::new(env!("CARGO_BIN_EXE_whfactor"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("whfactor-cli-{}-{}", std::process::id(), name));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

const TOY: &str = r#"{"coefficients": [["1","0"],["-2.5","0"],["1","0"]], "rho": "0.7", "delta": "1e-12"}"#;

#[test]
fn factorizes_toy_to_stdout() {
    let dir = scratch("stdout");
    let input = dir.join("toy.json");
    std::fs::write(&input, TOY).unwrap();
    let out = binary().arg("--input").arg(&input).output().unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["kappa"], 1);
    let p1_0: f64 = report["p1"][0][0].as_str().unwrap().parse().unwrap();
    assert!((p1_0 + 0.5).abs() < 1e-9);
}

#[test]
fn output_file_and_determinism() {
    let dir = scratch("determinism");
    let input = dir.join("toy.json");
    std::fs::write(&input, TOY).unwrap();
    let out1 = dir.join("report1.json");
    let out2 = dir.join("report2.json");
    for out in [&out1, &out2] {
        let status = binary()
            .arg("--input")
            .arg(&input)
            .arg("--output")
            .arg(out)
            .arg("--precision")
            .arg("ext:25")
            .arg("--path")
            .arg("both")
            .status()
            .unwrap();
        assert!(status.success());
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert_eq!(a, b, "reports must be byte-identical");
}

#[test]
fn validation_failures_exit_2() {
    let dir = scratch("validation");
    // constant coefficient zero
    let input = dir.join("zero.json");
    std::fs::write(&input, r#"{"coefficients": [["0","0"],["1","0"]], "delta": "1e-12"}"#).unwrap();
    let out = binary().arg("--input").arg(&input).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // root within 1e-8 of the circle
    let near = dir.join("near.json");
    std::fs::write(
        &near,
        r#"{"coefficients": [["-0.99999999","0"],["1","0"]], "delta": "1e-12"}"#,
    )
    .unwrap();
    let out = binary().arg("--input").arg(&near).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    // malformed flags
    let out = binary()
        .arg("--input")
        .arg(dir.join("missing.json"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn trivial_factorization_notes_and_exits_zero() {
    let dir = scratch("trivial");
    let input = dir.join("outside.json");
    std::fs::write(&input, r#"{"coefficients": [["-2","0"],["1","0"]], "delta": "1e-12"}"#)
        .unwrap();
    let out = binary().arg("--input").arg(&input).output().unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["kappa"], 0);
    let warnings = report["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("trivial")));
}

#[test]
fn under_resolved_window_exits_3() {
    // A coarse window (huge eps-tilde forces minimal ell) with a demanding
    // certified accuracy (tiny delta) cannot pass the structural-zero check.
    let dir = scratch("numerical");
    let input = dir.join("toy.json");
    std::fs::write(&input, TOY).unwrap();
    let out = binary()
        .arg("--input")
        .arg(&input)
        .arg("--delta")
        .arg("1e-30")
        .arg("--eps-tilde")
        .arg("0.9")
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(3),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn asymmetric_annulus_flags() {
    let dir = scratch("annulus");
    let input = dir.join("toy.json");
    std::fs::write(&input, TOY).unwrap();
    let out = binary()
        .arg("--input")
        .arg(&input)
        .arg("--annulus-r")
        .arg("0.6")
        .arg("--annulus-R")
        .arg("1.8")
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    // rho = max(0.6, 1/1.8) = 0.6
    let rho: f64 = report["ledger"]["rho"].as_str().unwrap().parse().unwrap();
    assert!((rho - 0.6).abs() < 1e-12);
    // one flag without the other is rejected
    let out = binary()
        .arg("--input")
        .arg(&input)
        .arg("--annulus-r")
        .arg("0.6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

//! End-to-end tests of the `atlas` binary: exit codes, output formats,
//! cache behavior, and rendering determinism.

use std::path::PathBuf;
use std::process::Command;

fn atlas() -> Command {
    Command::new(env!("CARGO_BIN_EXE_atlas"))
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("atlas-cli-test-{tag}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn eval_prints_value_bound_and_method() {
    let out = atlas()
        .args(["eval", "--spec", "zeta", "--s", "2,0"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1.644934066848"), "{text}");
    assert!(text.contains("error_bound"));
    assert!(text.contains("method"));
}

#[test]
fn eval_at_pole_fails_with_nonzero_exit() {
    let out = atlas()
        .args(["eval", "--spec", "zeta", "--s", "1,0"])
        .output()
        .unwrap();
    assert!(!out.status.success());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("pole"), "{err}");
}

#[test]
fn eval_l_function_far_right_is_near_one() {
    let out = atlas()
        .args(["eval", "--spec", "L:5:2", "--s", "30,7"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let line = text.lines().next().unwrap();
    let mut it = line.split_whitespace().skip(2);
    let re: f64 = it.next().unwrap().parse().unwrap();
    let im: f64 = it.next().unwrap().trim_end_matches('i').parse().unwrap();
    let dist = ((re - 1.0).powi(2) + im * im).sqrt();
    assert!(dist < 2.0 * 2.0f64.powi(-30), "|value - 1| = {dist:e}");
}

#[test]
fn zeros_cache_round_trips_bit_for_bit() {
    let dir = tempdir("cache");
    let args = [
        "zeros",
        "--spec",
        "zeta",
        "--window",
        "0.2,0.8,13,16",
        "--target",
        "f",
        "--cache-dir",
    ];
    let run = |outfile: &str| {
        let out = atlas()
            .args(args)
            .arg(dir.to_str().unwrap())
            .args(["--out", dir.join(outfile).to_str().unwrap()])
            .output()
            .unwrap();
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        std::fs::read_to_string(dir.join(outfile)).unwrap()
    };
    let first = run("a.json");
    let second = run("b.json");
    // Bodies identical apart from the provenance timestamp.
    let a: serde_json::Value = serde_json::from_str(&first).unwrap();
    let b: serde_json::Value = serde_json::from_str(&second).unwrap();
    assert_eq!(a["zeros"], b["zeros"]);
    assert_eq!(a["spec"], b["spec"]);
    // The cache file itself exists and parses.
    let cached: Vec<serde_json::Value> = std::fs::read_dir(&dir)
        .unwrap()
        .filter_map(|e| {
            let p = e.unwrap().path();
            p.file_name()?.to_str()?.starts_with("zeros_").then(|| {
                serde_json::from_str(&std::fs::read_to_string(&p).unwrap()).unwrap()
            })
        })
        .next()
        .unwrap();
    assert_eq!(cached.len(), 1, "one zero in the first-zero box");
}

#[test]
fn render_is_byte_deterministic() {
    let dir = tempdir("render");
    let doc = dir.join("doc.json");
    let out = atlas()
        .args([
            "trace",
            "--spec",
            "zeta",
            "--window",
            "-2,4,10,18",
            "--out",
            doc.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let svg1 = dir.join("a.svg");
    let svg2 = dir.join("b.svg");
    for svg in [&svg1, &svg2] {
        let out = atlas()
            .args([
                "render",
                "--doc",
                doc.to_str().unwrap(),
                "--out",
                svg.to_str().unwrap(),
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
    }
    let a = std::fs::read(&svg1).unwrap();
    let b = std::fs::read(&svg2).unwrap();
    assert_eq!(a, b, "identical documents must render byte-identically");
    assert!(a.starts_with(b"<svg"));
}

#[test]
fn verify_small_zeta_window_passes_with_exit_zero() {
    let dir = tempdir("verify");
    let doc = dir.join("doc.json");
    let out = atlas()
        .args([
            "verify",
            "--spec",
            "zeta",
            "--window",
            "-2,4,10,18",
            "--circles",
            "0.5",
            "--out",
            doc.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "stdout: {stdout}");
    assert!(stdout.contains("no_zero_on_gamma_prime"));
    // Report replays from the document.
    let rep = atlas()
        .args(["report", "--doc", doc.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(rep.status.success());
    let text = String::from_utf8_lossy(&rep.stdout);
    assert!(text.contains("spec: zeta"));
    assert!(text.contains("checks:"));
}

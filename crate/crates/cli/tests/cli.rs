use std::path::{Path, PathBuf};
use std::process::Command;

use serde_json::Value;

fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

fn rcvf(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_rcvf")).args(args).current_dir(golden_dir()).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8(out.stdout).unwrap())
}

#[test]
fn golden_corpus() {
    let mut entries: Vec<_> = std::fs::read_dir(golden_dir().join("cases")).unwrap().map(|e| e.unwrap().path()).collect();
    entries.sort();
    assert!(entries.len() >= 30);
    let mut failures = Vec::new();
    for path in entries {
        let case: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let args: Vec<&str> = case["args"].as_array().unwrap().iter().map(|a| a.as_str().unwrap()).collect();
        let (code, stdout) = rcvf(&args);
        if code != case["code"].as_i64().unwrap() as i32 || stdout != case["stdout"].as_str().unwrap() {
            failures.push(format!("{}: exit {code}, stdout {stdout}", path.display()));
        }
    }
    assert!(failures.is_empty(), "{failures:#?}");
}

#[test]
fn every_stdout_is_json() {
    for args in [
        vec!["cmp", "1", "eps"],
        vec!["eval", "eps^(3/2"],
        vec!["psd", "--p", "x"],
        vec!["integral", "--h", "(x+eps)/x", "--set", "ball:1", "--seed", "7"],
    ] {
        let (_, stdout) = rcvf(&args);
        assert!(serde_json::from_str::<Value>(&stdout).is_ok(), "{args:?}: {stdout}");
    }
}

#[test]
fn found_certificates_verify() {
    let dir = std::env::temp_dir().join(format!("rcvf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for (p, set) in [("x^2 + 2*x*y + 2*y^2", "ball:2"), ("1 + eps*x^2 + eps^3*y^4", "ball:2"), ("2 - eps*x", "ball:1")] {
        let (code, doc) = rcvf(&["cert", "find", "--p", p, "--set", set, "--seed", "3"]);
        assert_eq!(code, 0, "{p}: {doc}");
        let file = dir.join("cert.json");
        std::fs::write(&file, &doc).unwrap();
        let (code, out) = rcvf(&["cert", "verify", file.to_str().unwrap()]);
        assert_eq!((code, out.as_str()), (0, "{\"kind\":\"nonneg\",\"verified\":true}\n"), "{p}");
    }
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn pretty_rendering() {
    let (code, out) = rcvf(&["psd", "--p", "eps - x^2", "--set", "ball:1", "--falsify", "--seed", "7", "--pretty"]);
    assert_eq!(code, 1);
    assert_eq!(out, "verdict: negative\nwitness:\n  x: 1\nvalue: -1 + eps\n");
}

#[test]
fn truncation_flag_changes_precision() {
    let (_, short) = rcvf(&["eval", "1/(1 + eps)", "--trunc", "2"]);
    assert_eq!(short, "{\"value\":\"1 - eps + O(eps^2)\"}\n");
    let (_, long) = rcvf(&["eval", "1/(1 + eps)"]);
    assert!(long.contains("O(eps^32)"));
}

#[test]
fn in_process_matches_binary() {
    let args = ["rcvf", "psd", "--p", "x - 1", "--set", "ball:1", "--falsify", "--seed", "7"];
    let inner = rcvf_cli::run(args);
    let (code, stdout) = rcvf(&args[1..]);
    assert_eq!((inner.code, inner.stdout), (code, stdout));
}

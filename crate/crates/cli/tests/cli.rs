//! End-to-end checks of the binary: exit codes, file round trips and
//! byte-determinism of the emitted artifacts.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ncszego"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("exit code")
}

#[test]
fn synth_on_zero_gamma_gives_the_free_measure() {
    let dir = tempfile::tempdir().unwrap();
    let gamma = write(dir.path(), "g.json", r#"{"d":2,"gamma":[]}"#);
    let out = dir.path().join("m.json");
    let output = run(&[
        "favard",
        "synth",
        "--gamma",
        gamma.to_str().unwrap(),
        "--max-len",
        "3",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let parsed: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(parsed["d"], 2);
    let moments = parsed["moments"].as_array().unwrap();
    assert_eq!(moments.len(), 14); // 15 words up to σ(3) minus the implicit ∅
    for entry in moments {
        assert_eq!(entry["re"].as_f64().unwrap(), 0.0);
        assert_eq!(entry["im"].as_f64().unwrap(), 0.0);
    }
}

#[test]
fn synth_extract_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let gamma = write(
        dir.path(),
        "g.json",
        r#"{"d":2,"gamma":[
            {"word":[1],"re":0.5,"im":-0.2},
            {"word":[2,1],"re":-0.3,"im":0.4},
            {"word":[1,2,2],"re":0.1,"im":0.7}
        ]}"#,
    );
    let moments = dir.path().join("m.json");
    assert_eq!(
        code(&run(&[
            "favard", "synth", "--gamma", gamma.to_str().unwrap(),
            "--max-len", "3", "--out", moments.to_str().unwrap(),
        ])),
        0
    );
    let back = dir.path().join("g2.json");
    assert_eq!(
        code(&run(&[
            "verblunsky", "extract", "--moments", moments.to_str().unwrap(),
            "--out", back.to_str().unwrap(),
        ])),
        0
    );
    let recovered: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&back).unwrap()).unwrap();
    let mut seen = std::collections::BTreeMap::new();
    for entry in recovered["gamma"].as_array().unwrap() {
        let word: Vec<u64> = entry["word"].as_array().unwrap().iter().map(|v| v.as_u64().unwrap()).collect();
        seen.insert(word, (entry["re"].as_f64().unwrap(), entry["im"].as_f64().unwrap()));
    }
    for (word, re, im) in [
        (vec![1u64], 0.5, -0.2),
        (vec![2, 1], -0.3, 0.4),
        (vec![1, 2, 2], 0.1, 0.7),
    ] {
        let (r, i) = seen[&word];
        assert!((r - re).abs() <= 1e-8 && (i - im).abs() <= 1e-8, "word {word:?}: ({r}, {i})");
    }
}

#[test]
fn table_and_sweep_outputs_are_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let gamma = write(
        dir.path(),
        "g.json",
        r#"{"d":2,"gamma":[{"word":[1],"re":0.4,"im":0.1},{"word":[2,2],"re":-0.25,"im":0.0}]}"#,
    );
    let moments = dir.path().join("m.json");
    run(&[
        "favard", "synth", "--gamma", gamma.to_str().unwrap(),
        "--max-len", "3", "--out", moments.to_str().unwrap(),
    ]);

    let table = |name: &str| {
        let out = dir.path().join(name);
        let output = run(&[
            "szego", "table", "--moments", moments.to_str().unwrap(),
            "--N", "3", "--format", "json", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code(&output), 0);
        std::fs::read(&out).unwrap()
    };
    assert_eq!(table("t1.json"), table("t2.json"));

    let sweep = |name: &str| {
        let out = dir.path().join(name);
        let output = run(&[
            "zeros", "sweep", "--gamma", gamma.to_str().unwrap(),
            "--kmax", "2", "--nmax", "2", "--samples", "5",
            "--seed", "7", "--out", out.to_str().unwrap(),
        ]);
        assert_eq!(code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
        std::fs::read(&out).unwrap()
    };
    let first = sweep("z1.jsonl");
    assert_eq!(first, sweep("z2.jsonl"));
    // One JSON object per sample line with the documented fields.
    let text = String::from_utf8(first).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 2 * 2 * 3 * 5);
    let row: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    for field in ["kind", "k", "d", "n", "min_eig_M", "min_eig_S", "boundary_gap"] {
        assert!(row.get(field).is_some(), "missing field {field}");
    }
}

#[test]
fn oracle_compare_agrees_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("oracle.json");
    let output = run(&[
        "oracle", "compare", "--density", "bernstein", "--a", "0.5",
        "--n", "8", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let parsed: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(parsed["max_dev"].as_f64().unwrap() <= 1e-8);
    assert_eq!(parsed["entries"].as_array().unwrap().len(), 8);
}

#[test]
fn kernel_check_passes_on_valid_input() {
    let dir = tempfile::tempdir().unwrap();
    let gamma = write(dir.path(), "g.json", r#"{"d":2,"gamma":[{"word":[1,2],"re":0.3,"im":0.3}]}"#);
    let moments = dir.path().join("m.json");
    run(&[
        "favard", "synth", "--gamma", gamma.to_str().unwrap(),
        "--max-len", "3", "--out", moments.to_str().unwrap(),
    ]);
    let output = run(&["kernel", "check", "--moments", moments.to_str().unwrap()]);
    assert_eq!(code(&output), 0);
    let parsed: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(parsed["verdict"], "ok");
    assert_eq!(parsed["structural_zero_violations"], 0);
}

#[test]
fn christoffel_eval_reads_a_point_file() {
    let dir = tempfile::tempdir().unwrap();
    let gamma = write(dir.path(), "g.json", r#"{"d":2,"gamma":[]}"#);
    let moments = dir.path().join("m.json");
    run(&[
        "favard", "synth", "--gamma", gamma.to_str().unwrap(),
        "--max-len", "3", "--out", moments.to_str().unwrap(),
    ]);
    let point = write(
        dir.path(),
        "p.json",
        r#"{"k":1,"d":2,"components":[[[[0.0,0.0]]],[[[0.0,0.0]]]]}"#,
    );
    let output = run(&[
        "christoffel", "eval", "--moments", moments.to_str().unwrap(),
        "--point", point.to_str().unwrap(),
    ]);
    assert_eq!(code(&output), 0, "stderr: {}", String::from_utf8_lossy(&output.stderr));
    let parsed: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert!(parsed["converged"].as_bool().unwrap());
    assert_eq!(parsed["value"][0][0][0].as_f64().unwrap(), 1.0);
}

#[test]
fn exit_codes_distinguish_inputs_from_verdicts() {
    let dir = tempfile::tempdir().unwrap();

    // Malformed JSON is an input error.
    let broken = write(dir.path(), "broken.json", "{not json");
    let output = run(&["kernel", "check", "--moments", broken.to_str().unwrap()]);
    assert_eq!(code(&output), 1);

    // A letter outside the alphabet is an input error.
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"d":2,"horizon":[2],"moments":[{"word":[3],"re":0.1,"im":0.0}]}"#,
    );
    let output = run(&["kernel", "check", "--moments", bad.to_str().unwrap()]);
    assert_eq!(code(&output), 1);

    // A trivial (point-mass) measure is a property verdict.
    let atom = write(
        dir.path(),
        "atom.json",
        r#"{"d":1,"horizon":[1,1],"moments":[
            {"word":[1],"re":1.0,"im":0.0},
            {"word":[1,1],"re":1.0,"im":0.0}
        ]}"#,
    );
    let output = run(&["kernel", "check", "--moments", atom.to_str().unwrap()]);
    assert_eq!(code(&output), 2);
    let output = run(&["szego", "table", "--moments", atom.to_str().unwrap(), "--N", "1"]);
    assert_eq!(code(&output), 2);
}

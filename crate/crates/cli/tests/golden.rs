//! Machine-format reports of every subcommand on every shipped document.
//! Regenerate with `cargo test -p hopftwist-cli --test golden -- --ignored`.

use std::path::PathBuf;
use std::process::Command;

const DOCS: [&str; 7] =
    ["quantum-torus", "quantum-torus-root3", "moyal", "heisenberg", "heisenberg-corrupted", "mixed-nilpotent", "borel"];

/// Subcommand argument lists and the golden file stem for each.
fn commands(doc: &str) -> Vec<(String, Vec<String>)> {
    let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
    let (word, a, b) = match doc {
        "quantum-torus" | "quantum-torus-root3" => ("y·x", "y", "x"),
        "mixed-nilpotent" => ("z·y·x", "z", "x"),
        "heisenberg" | "heisenberg-corrupted" => ("z·y·x", "y^2", "z"),
        "moyal" => ("y·x", "y", "x + y"),
        _ => ("y·x", "y", "x"),
    };
    vec![
        ("validate".into(), s(&["validate"])),
        ("present".into(), s(&["present"])),
        ("support".into(), s(&["support"])),
        ("simple".into(), s(&["simple"])),
        ("structure".into(), s(&["structure"])),
        ("center".into(), s(&["center"])),
        ("normal-form".into(), s(&["normal-form", word])),
        ("multiply".into(), s(&["multiply", a, b])),
        ("check-hopf".into(), s(&["check", "hopf"])),
        ("check-cybe".into(), s(&["check", "cybe"])),
        ("check-cocycle".into(), s(&["check", "cocycle", "--degree", "3"])),
        ("check-invariance".into(), s(&["check", "invariance"])),
    ]
}

fn golden_path(doc: &str, stem: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(doc).join(format!("{stem}.json"))
}

fn run(doc: &str, args: &[String]) -> (String, i32) {
    let out = Command::new(env!("CARGO_BIN_EXE_hopftwist"))
        .args(["--example", doc, "--format", "machine"])
        .args(args)
        .output()
        .expect("binary runs");
    (String::from_utf8(out.stdout).expect("utf-8"), out.status.code().unwrap_or(-1))
}

#[test]
fn machine_reports_match_golden_files() {
    let mut mismatches = Vec::new();
    for doc in DOCS {
        for (stem, args) in commands(doc) {
            let (out, code) = run(doc, &args);
            assert!((0..=2).contains(&code), "{doc} {stem}: exit {code}");
            let want = std::fs::read_to_string(golden_path(doc, &stem)).unwrap_or_default();
            if out != want {
                mismatches.push(format!("{doc}/{stem}"));
            }
        }
    }
    assert!(mismatches.is_empty(), "golden mismatches: {mismatches:?}");
}

#[test]
#[ignore]
fn bless() {
    for doc in DOCS {
        for (stem, args) in commands(doc) {
            let (out, _) = run(doc, &args);
            let p = golden_path(doc, &stem);
            std::fs::create_dir_all(p.parent().unwrap()).unwrap();
            std::fs::write(p, out).unwrap();
        }
    }
}

use std::process::{Command, Output};

fn hopftwist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hopftwist")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_doc(name: &str, text: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("hopftwist-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn exit_codes() {
    assert_eq!(hopftwist(&["-e", "moyal", "present"]).status.code(), Some(0));
    assert_eq!(hopftwist(&["-e", "heisenberg-corrupted", "check", "hopf"]).status.code(), Some(1));
    assert_eq!(hopftwist(&["-e", "nope", "present"]).status.code(), Some(2));
    assert_eq!(hopftwist(&["present"]).status.code(), Some(2));
    assert_eq!(hopftwist(&["-e", "moyal", "normal-form", "x·q"]).status.code(), Some(2));
    assert_eq!(hopftwist(&["--bogus"]).status.code(), Some(2));
}

#[test]
fn example_round_trips_through_input() {
    let doc = stdout(&hopftwist(&["example", "heisenberg"]));
    assert!(doc.contains("\"schema_version\": 1"));
    let p = write_doc("heisenberg.json", &doc);
    let a = hopftwist(&["-i", p.to_str().unwrap(), "-f", "machine", "center"]);
    let b = hopftwist(&["-e", "heisenberg", "-f", "machine", "center"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn errors_carry_positions() {
    let doc = stdout(&hopftwist(&["example", "mixed-nilpotent"])).replace("[\"X\", \"Y\", \"h\"]", "[\"X\", \"Y\", \"h^1/2\"]");
    let p = write_doc("bad-exponent.json", &doc);
    let o = hopftwist(&["-i", p.to_str().unwrap(), "-f", "machine", "present"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(out.contains("syntax error") && out.contains("parentheses"), "{out}");

    let doc = stdout(&hopftwist(&["example", "heisenberg"])).replace("[[\"x\", \"y\"]]", "[[\"x\", \"w\"]]");
    let p = write_doc("unknown.json", &doc);
    let o = hopftwist(&["-i", p.to_str().unwrap(), "validate"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("error: 11:"), "{err}");
    assert!(err.contains("unknown name `w`"));

    let p = write_doc("schema.json", "{\n  \"schema_version\": 1,\n  \"name\": \"a\",\n  \"group\": 3\n}\n");
    let o = hopftwist(&["-i", p.to_str().unwrap(), "validate"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("4:") && err.contains("schema error"), "{err}");
}

#[test]
fn text_reports() {
    let o = hopftwist(&["-e", "moyal", "center", "--degree", "6"]);
    assert!(stdout(&o).starts_with("center (degree ≤ 6): constants only"));
    let o = hopftwist(&["-e", "heisenberg", "structure"]);
    assert!(stdout(&o).contains("W(1)⊗poly[x]"));
    let o = hopftwist(&["-e", "quantum-torus-root3", "support"]);
    assert!(stdout(&o).contains("[3,3]"));
}

#[test]
fn sequential_flag_gives_identical_output() {
    let a = hopftwist(&["-e", "mixed-nilpotent", "-f", "machine", "center", "--degree", "2"]);
    let b = hopftwist(&["-e", "mixed-nilpotent", "-f", "machine", "--sequential", "center", "--degree", "2"]);
    assert_eq!(stdout(&a), stdout(&b));
}

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dgk_core::fixtures;
use dgk_core::format::emit_double_parts;
use dgk_core::groupoid::ObjectId;
use dgk_core::words::{parse_letters, FreeProduct, Path as LetterPath};

fn dgk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dgk")).args(args).output().expect("dgk runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn emit_all(dir: &Path) {
    let o = dgk(&["fixtures", "--emit-all", "-o", dir.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

fn arg(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn fixtures_emit_all_writes_five_files() {
    let dir = tempfile::tempdir().unwrap();
    emit_all(dir.path());
    for name in ["A2", "CPAIR2", "CPAIR3", "S3F", "EXT1"] {
        let text = fs::read_to_string(dir.path().join(format!("{name}.json"))).unwrap();
        assert!(text.starts_with("{\"H\":"), "{name}");
    }
}

#[test]
fn roundtrip_a2_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    emit_all(dir.path());
    let o = dgk(&["roundtrip", arg(&dir.path().join("A2.json"))]);
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).contains("FAIL"));
}

#[test]
fn corrupted_table_exits_one_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixtures::mutations(&fixtures::cpair2(), 1, 7).remove(0);
    let path = dir.path().join("corrupted.json");
    fs::write(&path, emit_double_parts(&m.parts)).unwrap();
    let o = dgk(&["validate", arg(&path)]);
    assert_eq!(code(&o), 1, "{}", m.description);
    let out = stdout(&o);
    assert!(out.contains("FAIL") && out.contains("witness:"), "{out}");

    // other verbs refuse to load it unless told not to validate
    assert_eq!(code(&dgk(&["analyze", arg(&path)])), 1);
}

#[test]
fn format_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    fs::write(&path, "{\"base\": 1,\n  \"boxes\": }").unwrap();
    let o = dgk(&["validate", arg(&path)]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    assert_eq!(code(&dgk(&["analyze", arg(&dir.path().join("missing.json"))])), 2);
}

#[test]
fn unknown_verbs_and_flags_are_rejected() {
    assert_eq!(code(&dgk(&["frobnicate", "x.json"])), 2);
    assert_eq!(code(&dgk(&["validate", "--bogus", "x.json"])), 2);
}

#[test]
fn no_validate_defers_checks() {
    let dir = tempfile::tempdir().unwrap();
    let m = fixtures::mutations(&fixtures::a2(), 1, 3).remove(0);
    let path = dir.path().join("bad.json");
    fs::write(&path, emit_double_parts(&m.parts)).unwrap();
    assert_eq!(code(&dgk(&["frame", arg(&path)])), 1);
    let o = dgk(&["--no-validate", "classify", arg(&path)]);
    assert_ne!(code(&o), 2);
}

#[test]
fn output_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    emit_all(dir.path());
    let f = dir.path().join("S3F.json");
    for verb in ["analyze", "classify", "corners", "roundtrip-slim", "diagonal", "decompose"] {
        let a = dgk(&[verb, arg(&f)]);
        let b = dgk(&[verb, arg(&f)]);
        assert_eq!(code(&a), 0, "{verb}");
        assert_eq!(a.stdout, b.stdout, "{verb}");
    }
}

#[test]
fn diagonal_then_square_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    emit_all(dir.path());
    let diag = dir.path().join("diagram.json");
    let sq = dir.path().join("square.json");
    assert_eq!(code(&dgk(&["diagonal", arg(&dir.path().join("CPAIR2.json")), "-o", arg(&diag)])), 0);
    assert_eq!(code(&dgk(&["validate", arg(&diag)])), 0);
    assert_eq!(code(&dgk(&["roundtrip-slim", arg(&diag)])), 0);
    assert_eq!(code(&dgk(&["square", arg(&diag), "-o", arg(&sq)])), 0);
    let o = dgk(&["classify", "--json", arg(&sq)]);
    assert!(stdout(&o).starts_with("{\"filling\":true,\"fusion\":true"), "{}", stdout(&o));
}

#[test]
fn decompose_then_rebuild() {
    let dir = tempfile::tempdir().unwrap();
    emit_all(dir.path());
    let ext = dir.path().join("ext.json");
    let dg = dir.path().join("dg.json");
    assert_eq!(code(&dgk(&["decompose", arg(&dir.path().join("EXT1.json")), "-o", arg(&ext)])), 0);
    assert_eq!(code(&dgk(&["validate", arg(&ext)])), 0);
    assert_eq!(code(&dgk(&["rebuild", arg(&ext), "-o", arg(&dg)])), 0);
    let o = dgk(&["analyze", "--json", arg(&dg)]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("\"boxes\":32"));
}

#[test]
fn core_and_kernel_emit_loadable_files() {
    let dir = tempfile::tempdir().unwrap();
    emit_all(dir.path());
    let core = dir.path().join("core.json");
    let kernel = dir.path().join("kernel.json");
    let a2 = dir.path().join("A2.json");
    assert_eq!(code(&dgk(&["core", arg(&a2), "-o", arg(&core)])), 0);
    assert_eq!(code(&dgk(&["kernel", arg(&a2), "-o", arg(&kernel)])), 0);
    assert_eq!(code(&dgk(&["validate", arg(&core)])), 0);
    assert_eq!(code(&dgk(&["validate", arg(&kernel)])), 0);
}

#[test]
fn reduce_words() {
    let dir = tempfile::tempdir().unwrap();
    emit_all(dir.path());
    let f = dir.path().join("S3F.json");
    let o = dgk(&["reduce", "--word", "V:1 V:2 H:0 H:1", arg(&f), "--json"]);
    assert_eq!(code(&o), 0);
    let d = fixtures::s3f();
    let fp = FreeProduct::of(&d);
    let letters = parse_letters("V:1 V:2 H:0 H:1").unwrap();
    let w = fp.reduce(&LetterPath { start: ObjectId(0), letters }).unwrap();
    let expected = format!("{{\"input\":\"V:1 V:2 H:0 H:1\",\"length\":{},\"reduced\":\"{w}\"}}\n", w.len());
    assert_eq!(stdout(&o), expected);
    assert_eq!(code(&dgk(&["reduce", "--word", "V:99", arg(&f)])), 2);
    assert_eq!(code(&dgk(&["reduce", "--word", "X:1", arg(&f)])), 2);
    let o = dgk(&["reduce", "--word", "", "--at", "0", arg(&f)]);
    assert_eq!(stdout(&o), " -> [P0] (length 0)\n");
}

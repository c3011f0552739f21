//! End-to-end tests of the `ntree` binary: exit codes, stdout/stderr
//! separation, and byte-exact report formats.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

use serde_json::Value;

const TWO_TRIANGLES: &str = r#"{"dimension":2,"simplices":[["a","b","c"],["a","b","d"]]}"#;
const TWO_TRIANGLES_OTHER_SPINE: &str =
    r#"{"dimension":2,"simplices":[["a","b","c"],["a","c","d"]]}"#;
const SINGLE_TRIANGLE: &str = r#"{"dimension":2,"simplices":[["a","b","c"]]}"#;
const CYCLIC_TRIANGLES: &str =
    r#"{"dimension":2,"simplices":[["a","b","c"],["a","b","d"],["a","c","d"]]}"#;
const PATH_GRAPH: &str = concat!(
    r#"{"n":2,"vertices":[{"id":"a","kind":"P","color":1},{"id":"x","kind":"F"},"#,
    r#"{"id":"b","kind":"P","color":2},{"id":"y","kind":"F"},{"id":"c","kind":"P","color":1}],"#,
    r#""edges":[["a","x"],["x","b"],["b","y"],["y","c"]]}"#,
);
const STAR_GRAPH: &str = concat!(
    r#"{"n":2,"vertices":[{"id":"h","kind":"F"},{"id":"p1","kind":"P","color":1},"#,
    r#"{"id":"p2","kind":"P","color":2},{"id":"p3","kind":"P","color":3}],"#,
    r#""edges":[["h","p1"],["h","p2"],["h","p3"]]}"#,
);
const EDGE_GRAPH_12: &str = concat!(
    r#"{"n":2,"vertices":[{"id":"l","kind":"P","color":1},{"id":"m","kind":"F"},"#,
    r#"{"id":"r","kind":"P","color":2}],"edges":[["l","m"],["m","r"]]}"#,
);
const EDGE_GRAPH_23: &str = concat!(
    r#"{"n":2,"vertices":[{"id":"l","kind":"P","color":2},{"id":"m","kind":"F"},"#,
    r#"{"id":"r","kind":"P","color":3}],"edges":[["l","m"],["m","r"]]}"#,
);
const DANGLING_F_GRAPH: &str = concat!(
    r#"{"n":2,"vertices":[{"id":"p","kind":"P","color":1},{"id":"f","kind":"F"}],"#,
    r#""edges":[["p","f"]]}"#,
);

fn run(args: &[&str]) -> (i32, String, String) {
    let output = Command::new(env!("CARGO_BIN_EXE_ntree"))
        .args(args)
        .stdin(Stdio::null())
        .output()
        .expect("binary runs");
    (
        output.status.code().expect("exit code"),
        String::from_utf8(output.stdout).expect("stdout is UTF-8"),
        String::from_utf8(output.stderr).expect("stderr is UTF-8"),
    )
}

fn run_with_stdin(args: &[&str], input: &str) -> (i32, String, String) {
    let mut child = Command::new(env!("CARGO_BIN_EXE_ntree"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.as_mut().expect("stdin").write_all(input.as_bytes()).expect("write stdin");
    let output = child.wait_with_output().expect("binary exits");
    (
        output.status.code().expect("exit code"),
        String::from_utf8(output.stdout).expect("stdout is UTF-8"),
        String::from_utf8(output.stderr).expect("stderr is UTF-8"),
    )
}

fn file_with(dir: &Path, name: &str, content: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, content).expect("write fixture");
    path
}

#[test]
fn validate_accepts_a_valid_complex() {
    let dir = tempfile::tempdir().expect("tempdir");
    let input = file_with(dir.path(), "k.json", TWO_TRIANGLES);
    let (code, stdout, _) = run(&["validate", input.to_str().expect("utf-8 path")]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "{\"status\":\"valid\",\"dimension\":2,\"simplices\":2,\"pieces\":1}\n");
}

#[test]
fn validate_rejects_with_a_certificate() {
    let dir = tempfile::tempdir().expect("tempdir");
    let input = file_with(dir.path(), "k.json", CYCLIC_TRIANGLES);
    let (code, stdout, stderr) = run(&["validate", input.to_str().expect("utf-8 path")]);
    assert_eq!(code, 1);
    let doc: Value = serde_json::from_str(&stdout).expect("stdout is JSON");
    assert_eq!(doc["status"], "invalid");
    assert_eq!(doc["certificate"]["kind"], "cyclic");
    assert!(!stderr.is_empty(), "human-readable note goes to stderr");
}

#[test]
fn validate_treats_malformed_json_as_usage_error() {
    let dir = tempfile::tempdir().expect("tempdir");
    let input = file_with(dir.path(), "k.json", "{not json");
    let (code, stdout, stderr) = run(&["validate", input.to_str().expect("utf-8 path")]);
    assert_eq!(code, 2);
    assert_eq!(stdout, "");
    assert!(stderr.starts_with("error:"));
}

#[test]
fn validate_reads_stdin_by_default() {
    let (code, stdout, _) = run_with_stdin(&["validate"], TWO_TRIANGLES);
    assert_eq!(code, 0);
    assert!(stdout.contains("\"status\":\"valid\""));
}

#[test]
fn gamma_emits_the_piece_graph() {
    let dir = tempfile::tempdir().expect("tempdir");
    let input = file_with(dir.path(), "k.json", TWO_TRIANGLES);
    let path = input.to_str().expect("utf-8 path");
    let (code, stdout, _) = run(&["gamma", path]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "{\"n\":2,\"vertices\":[{\"id\":\"p0\",\"kind\":\"P\",\"color\":3}],\"edges\":[]}\n");
    let (code, stdout, _) = run(&["gamma", path, "--format", "dot"]);
    assert_eq!(code, 0);
    assert!(stdout.starts_with("graph {"));
}

#[test]
fn gamma_on_a_single_simplex_reports_the_abelian_case() {
    let (code, stdout, stderr) = run_with_stdin(&["gamma"], SINGLE_TRIANGLE);
    assert_eq!(code, 1);
    let doc: Value = serde_json::from_str(&stdout).expect("stdout is JSON");
    assert_eq!(doc["status"], "abelian");
    assert!(!stderr.is_empty());
}

#[test]
fn minimize_collapses_a_foldable_path() {
    let (code, stdout, stderr) = run_with_stdin(&["minimize"], PATH_GRAPH);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&stdout).expect("stdout is JSON");
    assert_eq!(doc["vertices"].as_array().expect("vertices").len(), 3);
    assert!(stderr.contains("5 vertices collapsed to 3"));
}

#[test]
fn compare_matches_up_to_relabelling_by_default() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = file_with(dir.path(), "a.json", TWO_TRIANGLES);
    let b = file_with(dir.path(), "b.json", TWO_TRIANGLES_OTHER_SPINE);
    let (a, b) = (a.to_str().expect("utf-8"), b.to_str().expect("utf-8"));

    let (code, stdout, _) = run(&["compare", a, b]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "{\"equivalent\":true,\"reason\":\"bisimilar\",\"permutation\":[1,3,2]}\n");

    let (code, stdout, _) = run(&["compare", a, b, "--no-permutation"]);
    assert_eq!(code, 1);
    assert_eq!(stdout, "{\"equivalent\":false,\"reason\":\"not_bisimilar\"}\n");
}

#[test]
fn compare_reports_an_invalid_input_with_its_position() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = file_with(dir.path(), "a.json", TWO_TRIANGLES);
    let b = file_with(dir.path(), "b.json", CYCLIC_TRIANGLES);
    let (code, stdout, _) =
        run(&["compare", a.to_str().expect("utf-8"), b.to_str().expect("utf-8")]);
    assert_eq!(code, 1);
    let doc: Value = serde_json::from_str(&stdout).expect("stdout is JSON");
    assert_eq!(doc["status"], "invalid");
    assert_eq!(doc["input"], 1);
    assert_eq!(doc["complex"], 0);
    assert_eq!(doc["certificate"]["kind"], "cyclic");
}

#[test]
fn compare_graphs_mode_finds_a_relabelling_witness() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = file_with(dir.path(), "a.json", EDGE_GRAPH_12);
    let b = file_with(dir.path(), "b.json", EDGE_GRAPH_23);
    let (code, stdout, _) =
        run(&["compare", "--graphs", a.to_str().expect("utf-8"), b.to_str().expect("utf-8")]);
    assert_eq!(code, 0);
    assert_eq!(stdout, "{\"equivalent\":true,\"reason\":\"bisimilar\",\"permutation\":[3,1,2]}\n");
}

#[test]
fn compare_families_is_a_set_comparison() {
    let dir = tempfile::tempdir().expect("tempdir");
    let a = file_with(dir.path(), "a.json", &format!("[{TWO_TRIANGLES}]"));
    let b = file_with(
        dir.path(),
        "b.json",
        &format!("[{TWO_TRIANGLES_OTHER_SPINE},{TWO_TRIANGLES}]"),
    );
    let c = file_with(dir.path(), "c.json", &format!("[{SINGLE_TRIANGLE}]"));
    let (a, b, c) =
        (a.to_str().expect("utf-8"), b.to_str().expect("utf-8"), c.to_str().expect("utf-8"));

    let (code, stdout, _) = run(&["compare-families", a, b]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&stdout).expect("stdout is JSON");
    assert_eq!(doc["equivalent"], true);
    assert_eq!(doc["single_class_a"], true);

    let (code, stdout, _) = run(&["compare-families", a, c]);
    assert_eq!(code, 1);
    let doc: Value = serde_json::from_str(&stdout).expect("stdout is JSON");
    assert_eq!(doc["equivalent"], false);
    assert_eq!(doc["only_in_a"].as_array().expect("array").len(), 1);
    assert_eq!(doc["only_in_b"].as_array().expect("array").len(), 1);
}

#[test]
fn classify_reports_the_abelian_class_exactly() {
    let (code, stdout, _) = run_with_stdin(&["classify"], SINGLE_TRIANGLE);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "{\"dimension\":2,\"variant\":\"abelian\",\"canonical\":\"\",\"reducible\":true,\
         \"maximally_branched\":false,\"colors_used\":0}\n",
    );
}

#[test]
fn census_report_is_byte_identical_across_jobs() {
    let (code, stdout, stderr) = run(&["census", "--dimension", "2", "--max-pieces", "4"]);
    assert_eq!(code, 0);
    assert_eq!(
        stdout,
        "{\"n\":2,\"max_pieces\":4,\"buckets\":{\"1\":1,\"2\":1,\"3\":2,\"4\":3},\
         \"abelian\":true,\"total\":8}\n",
    );
    for k_line in ["k=1: 3 trees, 1 new classes", "k=4: 30 trees, 3 new classes"] {
        assert!(stderr.contains(k_line), "missing {k_line:?} in {stderr:?}");
    }
    for jobs in ["1", "2", "3"] {
        let (code, jobs_stdout, _) =
            run(&["census", "--dimension", "2", "--max-pieces", "4", "--jobs", jobs]);
        assert_eq!(code, 0);
        assert_eq!(jobs_stdout, stdout, "--jobs {jobs} changed the report");
    }
}

#[test]
fn census_dump_writes_a_json_and_dot_file_per_class() {
    let dir = tempfile::tempdir().expect("tempdir");
    let dump = dir.path().join("classes");
    let (code, _, _) = run(&[
        "census",
        "--dimension",
        "2",
        "--max-pieces",
        "3",
        "--dump",
        dump.to_str().expect("utf-8"),
    ]);
    assert_eq!(code, 0);
    let mut names: Vec<String> = std::fs::read_dir(&dump)
        .expect("dump dir exists")
        .map(|entry| entry.expect("entry").file_name().into_string().expect("utf-8 name"))
        .collect();
    names.sort();
    assert_eq!(
        names,
        [
            "class-p1-000.dot",
            "class-p1-000.json",
            "class-p2-000.dot",
            "class-p2-000.json",
            "class-p3-000.dot",
            "class-p3-000.json",
            "class-p3-001.dot",
            "class-p3-001.json",
        ],
    );
    let representative =
        std::fs::read_to_string(dump.join("class-p3-001.json")).expect("class file");
    let doc: Value = serde_json::from_str(&representative).expect("class file is JSON");
    assert_eq!(doc["n"], 2);
    assert!(doc["vertices"].as_array().expect("vertices").len() >= 4);
}

#[test]
fn realize_builds_a_complex_the_pipeline_accepts() {
    let dir = tempfile::tempdir().expect("tempdir");
    let graph = file_with(dir.path(), "g.json", STAR_GRAPH);
    let (code, stdout, _) = run(&["realize", graph.to_str().expect("utf-8")]);
    assert_eq!(code, 0);

    let (code, summary, _) = run_with_stdin(&["validate"], &stdout);
    assert_eq!(code, 0);
    assert!(summary.contains("\"pieces\":3"));

    let (code, report, _) = run_with_stdin(&["classify"], &stdout);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&report).expect("report is JSON");
    assert_eq!(doc["maximally_branched"], true);
    assert_eq!(doc["reducible"], false);
    assert_eq!(doc["colors_used"], 3);
}

#[test]
fn realize_rejects_a_graph_outside_the_image_class() {
    let (code, stdout, stderr) = run_with_stdin(&["realize"], DANGLING_F_GRAPH);
    assert_eq!(code, 1);
    let doc: Value = serde_json::from_str(&stdout).expect("stdout is JSON");
    assert_eq!(doc["status"], "unrealizable");
    assert!(!stderr.is_empty());
}

#[test]
fn generate_is_deterministic_per_seed_and_flags_are_honored() {
    let args = ["generate", "--dimension", "2", "--pieces", "5", "--seed", "9"];
    let (code, first, _) = run(&args);
    assert_eq!(code, 0);
    let (code, second, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(first, second);

    let (code, other_seed, _) =
        run(&["generate", "--dimension", "2", "--pieces", "5", "--seed", "10"]);
    assert_eq!(code, 0);
    assert_ne!(first, other_seed);

    let (code, stdout, _) = run(&[
        "generate",
        "--dimension",
        "3",
        "--pieces",
        "4",
        "--seed",
        "1",
        "--colors",
        "2",
    ]);
    assert_eq!(code, 0);
    let (code, report, _) = run_with_stdin(&["classify"], &stdout);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&report).expect("report is JSON");
    assert_eq!(doc["colors_used"], 2);
    assert_eq!(doc["reducible"], true);
}

#[test]
fn generate_reports_unsatisfiable_options_as_usage_errors() {
    let (code, stdout, stderr) = run(&[
        "generate",
        "--dimension",
        "2",
        "--pieces",
        "4",
        "--seed",
        "0",
        "--maximally-branched",
    ]);
    assert_eq!(code, 2);
    assert_eq!(stdout, "");
    assert!(stderr.contains("unsatisfiable"), "stderr: {stderr:?}");
}

#[test]
fn generate_feeds_compare_round_trip() {
    let dir = tempfile::tempdir().expect("tempdir");
    let (code, complex, _) =
        run(&["generate", "--dimension", "2", "--pieces", "6", "--seed", "3"]);
    assert_eq!(code, 0);
    let complex_path = file_with(dir.path(), "k.json", &complex);

    let (code, graph, _) = run(&["gamma", complex_path.to_str().expect("utf-8")]);
    assert_eq!(code, 0);
    let graph_path = file_with(dir.path(), "g.json", &graph);

    let (code, rebuilt, _) = run(&["realize", graph_path.to_str().expect("utf-8")]);
    assert_eq!(code, 0);
    let rebuilt_path = file_with(dir.path(), "k2.json", &rebuilt);

    let (code, certificate, _) = run(&[
        "compare",
        complex_path.to_str().expect("utf-8"),
        rebuilt_path.to_str().expect("utf-8"),
    ]);
    assert_eq!(code, 0);
    let doc: Value = serde_json::from_str(&certificate).expect("certificate is JSON");
    assert_eq!(doc["equivalent"], true);
    assert_eq!(doc["permutation"][0], 1);
}

#[test]
fn usage_errors_exit_with_two() {
    let (code, _, _) = run(&["census", "--dimension", "2"]);
    assert_eq!(code, 2, "missing required flag");
    let (code, _, stderr) =
        run(&["census", "--dimension", "0", "--max-pieces", "3"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--dimension"));
    let (code, _, stderr) =
        run(&["census", "--dimension", "2", "--max-pieces", "3", "--jobs", "0"]);
    assert_eq!(code, 2);
    assert!(stderr.contains("--jobs"));
}

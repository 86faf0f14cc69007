//! End-to-end tests of the `brauerkit` binary.

use brauerkit::brauer::BrauerDiagram;
use brauerkit::coloured::Palette;
use brauerkit::graph::Graph;
use brauerkit::species::{species_table, GraphicalSpecies, NamedGraph, PresheafTable};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str], stdin: &str) -> Output {
    run_env(args, stdin, None)
}

fn run_env(args: &[&str], stdin: &str, seed: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_brauerkit"));
    cmd.args(args).stdin(Stdio::piped()).stdout(Stdio::piped()).stderr(Stdio::piped());
    cmd.env_remove("BRAUERKIT_SEED");
    if let Some(s) = seed {
        cmd.env("BRAUERKIT_SEED", s);
    }
    let mut child = cmd.spawn().expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

/// A fresh directory for the fixture files of one test.
fn fixture_dir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("brauerkit-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write(dir: &Path, file: &str, contents: &str) -> String {
    let path = dir.join(file);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn compose_files_cap_then_cup_is_a_loop() {
    let dir = fixture_dir("compose");
    let cap = write(&dir, "cap.json", &serde_json::to_string(&BrauerDiagram::cap()).unwrap());
    let cup = write(&dir, "cup.json", &serde_json::to_string(&BrauerDiagram::cup()).unwrap());
    let out = run(&["--json", "bd", "compose", "--lhs", &cap, "--rhs", &cup], "");
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert_eq!(out.stdout.trim(), r#"{"m":0,"n":0,"pairs":[],"closed":1}"#);
}

#[test]
fn incomposable_diagrams_exit_2_with_a_message() {
    let out = run(&["bd", "compose", "--lhs", "cup", "--rhs", "cup"], "");
    assert_eq!(out.code, 2);
    assert!(out.stderr.starts_with("error:"), "{}", out.stderr);
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_subcommands_and_missing_files_exit_2() {
    assert_eq!(run(&["frobnicate"], "").code, 2);
    assert_eq!(run(&["graph", "elements", "--graph", "/no/such/graph.json"], "").code, 2);
    assert_eq!(run(&["--json", "bd", "dual", "--diagram", "{not json"], "").code, 2);
}

#[test]
fn glued_corolla_pipes_into_iso_with_the_wheel() {
    let dir = fixture_dir("glue");
    let c2 = write(&dir, "c2.json", &serde_json::to_string(&Graph::corolla_n(2)).unwrap());
    let w1 = write(&dir, "wheel1.json", &serde_json::to_string(&Graph::wheel(1).unwrap()).unwrap());
    let l1 = write(&dir, "line1.json", &serde_json::to_string(&Graph::line(1)).unwrap());
    let glued = run(&["--json", "graph", "glue", "--graph", &c2, "--ports", "1", "2"], "");
    assert_eq!(glued.code, 0, "{}", glued.stderr);
    assert_eq!(run(&["graph", "iso", "--graph", "-", "--with", &w1], &glued.stdout).code, 0);
    assert_eq!(run(&["graph", "iso", "--graph", "-", "--with", &l1], &glued.stdout).code, 1);
}

#[test]
fn segal_failure_names_the_graph_and_exits_1() {
    let s = GraphicalSpecies::terminal(Palette::monochrome("a"), 3);
    let glued = Graph::corolla_n(2).disjoint_union(&Graph::corolla_n(1).with_prefix("b")).unwrap().glue("2", "b1").unwrap();
    let graphs = vec![NamedGraph { id: "glued".into(), graph: glued }];
    let good = species_table(&s, &graphs).unwrap();
    let mut bad: PresheafTable = good.clone();
    let first = bad.values["glued"][0].clone();
    bad.drop_value("glued", &first);

    let dir = fixture_dir("segal");
    let good_path = write(&dir, "good.json", &serde_json::to_string(&good).unwrap());
    let bad_path = write(&dir, "bad.json", &serde_json::to_string(&bad).unwrap());
    assert_eq!(run(&["species", "segal", "--presheaf", &good_path], "").code, 0);
    let out = run(&["species", "segal", "--presheaf", &bad_path], "");
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("Segal condition fails at: glued"), "{}", out.stdout);
}

#[test]
fn json_outputs_parse_back() {
    let out = run(&["--json", "graph", "build", "wheel", "--n", "3"], "");
    let g: Graph = serde_json::from_str(&out.stdout).unwrap();
    assert!(g.is_isomorphic(&Graph::wheel(3).unwrap()));
    let dual = run(&["--json", "bd", "dual", "--diagram", "cup + id_1"], "");
    let d: BrauerDiagram = serde_json::from_str(&dual.stdout).unwrap();
    assert_eq!(d, BrauerDiagram::cup().tensor(&BrauerDiagram::identity(1)).dual());
    let elements = run(&["--json", "graph", "elements", "--graph", "-"], &out.stdout);
    assert_eq!(elements.code, 0);
    assert!(serde_json::from_str::<serde_json::Value>(&elements.stdout).is_ok());
}

#[test]
fn seed_flag_and_environment_agree() {
    let args = ["--json", "gog", "assoc-check", "--samples", "5"];
    let from_env = run_env(&args, "", Some("17"));
    let from_flag = run(&["--seed", "17", "--json", "gog", "assoc-check", "--samples", "5"], "");
    let again = run_env(&args, "", Some("17"));
    assert_eq!(from_env.code, 0);
    assert_eq!(from_env.stdout, again.stdout);
    assert_eq!(from_env.stdout, from_flag.stdout);
}

#[test]
fn circuit_algebra_checks_report_through_exit_codes() {
    let out = run(&["ca", "check", "--generators", r#"[{"name": "f", "word": ["a", "a"]}]"#, "--max-blocks", "1", "--max-points", "3", "--samples", "200"], "");
    assert_eq!(out.code, 0, "{}{}", out.stdout, out.stderr);
    assert_eq!(run(&["species", "check-co", "--matching", "3"], "").code, 0);
    assert_eq!(run(&["bd", "check-triangle", "--max-n", "3"], "").code, 0);
}

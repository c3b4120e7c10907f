use std::path::Path;
use std::process::{Command, Output};

use proptest::prelude::*;
use tempfile::TempDir;

use pivotlab_cli::doc::{canonical, parse, InstanceDocument, TraceDocument};
use pivotlab_cli::generate::{document, Kind, Shape};

fn pivotlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pivotlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("PIVOTLAB_BUDGET")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn single_edge(dir: &Path) {
    assert_eq!(code(&pivotlab(dir, &["generate", "maxcut", "--n", "2", "--weights", "4", "-o", "edge.json"])), 0);
}

#[test]
fn generate_single_edge_maxcut() {
    let tmp = TempDir::new().unwrap();
    single_edge(tmp.path());
    assert_eq!(
        read(tmp.path(), "edge.json"),
        r#"{"edges":[[0,1]],"kind":"maxcut","version":1,"vertices":2,"weights":["4"]}"#
    );
}

#[test]
fn generate_unit_cycle() {
    let tmp = TempDir::new().unwrap();
    let out = pivotlab(tmp.path(), &["generate", "swop", "--certifier", "independent-set", "--cycle", "5", "--unit-weights"]);
    assert_eq!(code(&out), 0);
    let doc: InstanceDocument = parse(stdout(&out).trim(), "instance").unwrap();
    let InstanceDocument::Swop { vertices, edges, vertex_weights, .. } = doc else { panic!("wrong kind") };
    assert_eq!(vertices, 5);
    assert_eq!(edges.len(), 5);
    assert!(vertex_weights.iter().all(|w| w == "1/1"));
}

#[test]
fn generate_is_deterministic_per_seed() {
    let tmp = TempDir::new().unwrap();
    let args = |o: &'static str| ["generate", "circuit", "--inputs", "4", "--gates", "9", "--seed", "17", "-o", o];
    assert_eq!(code(&pivotlab(tmp.path(), &args("a.json"))), 0);
    assert_eq!(code(&pivotlab(tmp.path(), &args("b.json"))), 0);
    assert_eq!(std::fs::read(tmp.path().join("a.json")).unwrap(), std::fs::read(tmp.path().join("b.json")).unwrap());
}

#[test]
fn usage_errors_exit_one() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(code(&pivotlab(tmp.path(), &["generate", "maxcut", "--n", "0"])), 1);
    assert_eq!(code(&pivotlab(tmp.path(), &["generate", "maxcut", "--n", "3", "--graph", "random", "--density", "2"])), 1);
    assert_eq!(code(&pivotlab(tmp.path(), &["solve", "--bogus"])), 1);
    assert_eq!(code(&pivotlab(tmp.path(), &["verify", "--bundle", "missing.json"])), 1);
    assert_eq!(code(&pivotlab(tmp.path(), &["--help"])), 0);
}

#[test]
fn reduce_maxcut_single_edge() {
    let tmp = TempDir::new().unwrap();
    single_edge(tmp.path());
    let out = pivotlab(tmp.path(), &["reduce", "--input", "edge.json", "--reduction", "maxcut-to-wis", "--output", "e"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let doc: InstanceDocument = parse(&read(tmp.path(), "e.target.json"), "target").unwrap();
    let InstanceDocument::Swop { vertices, c, .. } = doc else { panic!("wrong kind") };
    // 14 core vertices and four simulators of four vertices each.
    assert_eq!(vertices, 30);
    assert_eq!(c, 3);
    assert!(read(tmp.path(), "e.bundle.json").contains(r#""tightness":{"ell":5,"kind":"bounded","metric":"improving"}"#));
}

#[test]
fn reduce_swop_to_circuit_width() {
    let tmp = TempDir::new().unwrap();
    let g = ["generate", "swop", "--certifier", "all-subsets", "--path", "2", "--weights", "1,2", "-o", "s.json"];
    assert_eq!(code(&pivotlab(tmp.path(), &g)), 0);
    let out = pivotlab(tmp.path(), &["reduce", "--input", "s.json", "--reduction", "swop-to-circuit", "--output", "c"]);
    assert_eq!(code(&out), 0);
    let doc: InstanceDocument = parse(&read(tmp.path(), "c.target.json"), "target").unwrap();
    let InstanceDocument::Circuit { inputs, .. } = doc else { panic!("wrong kind") };
    assert_eq!(inputs, 6);
    assert_eq!(code(&pivotlab(tmp.path(), &["verify", "--bundle", "c.bundle.json"])), 0);
}

#[test]
fn reduce_kind_mismatch_and_missing_seed() {
    let tmp = TempDir::new().unwrap();
    single_edge(tmp.path());
    let out = pivotlab(tmp.path(), &["reduce", "--input", "edge.json", "--reduction", "swop-to-circuit", "--output", "x"]);
    assert_eq!(code(&out), 1);
    assert_eq!(code(&pivotlab(tmp.path(), &["generate", "mis", "--classes", "2,2,1", "-o", "m.json"])), 0);
    let out = pivotlab(tmp.path(), &["reduce", "--input", "m.json", "--reduction", "mis-to-wis-pivot", "--output", "m"]);
    assert_eq!(code(&out), 1);
    let seed = ["generate", "swop", "--certifier", "independent-set", "--path", "3", "--weights", "1,3,1", "-o", "seed.json"];
    assert_eq!(code(&pivotlab(tmp.path(), &seed)), 0);
    let args = [
        "reduce", "--input", "m.json", "--reduction", "mis-to-wis-pivot", "--seed-instance", "seed.json", "--seed-start",
        "101", "--output", "m",
    ];
    let out = pivotlab(tmp.path(), &args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(read(tmp.path(), "m.bundle.json").contains(r#""start":""#));
    assert_eq!(code(&pivotlab(tmp.path(), &["verify", "--bundle", "m.bundle.json"])), 1);
}

#[test]
fn solve_exit_codes_and_replay() {
    let tmp = TempDir::new().unwrap();
    let g = ["generate", "swop", "--certifier", "independent-set", "--path", "2", "--weights", "1,2", "--c", "2", "-o", "w.json"];
    assert_eq!(code(&pivotlab(tmp.path(), &g)), 0);
    let out = pivotlab(tmp.path(), &["solve", "--instance", "w.json", "--start", "01", "--rule", "best"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("after 0 moves"));
    let out = pivotlab(tmp.path(), &["solve", "--instance", "w.json", "--solver", "pivot-bounded", "--depth", "0"]);
    assert_eq!(code(&out), 3);
    let out = pivotlab(tmp.path(), &["solve", "--instance", "w.json", "--budget", "0"]);
    assert_eq!(code(&out), 2);
    let out = pivotlab(tmp.path(), &["solve", "--instance", "w.json", "--start", "11"]);
    assert_eq!(code(&out), 1);

    let k2 = ["generate", "swop", "--certifier", "all-subsets", "--path", "6", "--weights", "3/2,-1", "--c", "2", "-o", "k2.json"];
    assert_eq!(code(&pivotlab(tmp.path(), &k2)), 0);
    let out = pivotlab(tmp.path(), &["solve", "--instance", "k2.json", "--solver", "fpt-distinct-weights", "--start", "010101", "--trace", "t.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let trace: TraceDocument = parse(&read(tmp.path(), "t.json"), "trace").unwrap();
    assert_eq!(trace.steps.last().unwrap().solution, "101010");
    assert_eq!(code(&pivotlab(tmp.path(), &["replay", "--instance", "k2.json", "--trace", "t.json"])), 0);
    // A trace replayed against another instance is rejected.
    assert_eq!(code(&pivotlab(tmp.path(), &["replay", "--instance", "w.json", "--trace", "t.json"])), 4);
}

#[test]
fn export_dot_shapes() {
    let tmp = TempDir::new().unwrap();
    let g = ["generate", "swop", "--certifier", "independent-set", "--path", "2", "--weights", "1,2", "--c", "2", "-o", "w.json"];
    assert_eq!(code(&pivotlab(tmp.path(), &g)), 0);
    let dot = stdout(&pivotlab(tmp.path(), &["export-dot", "--instance", "w.json"]));
    assert_eq!(dot.matches(" [label=").count(), 3);
    assert_eq!(dot.matches(" -> ").count(), 3);

    // A self-loop leaves the empty set as the only independent set.
    let lone = r#"{"c":1,"certifier":{"type":"independent-set"},"directed":false,"edge_weights":["0/1"],"edges":[[0,0]],"include_edges":false,"kind":"swop","version":1,"vertex_weights":["1/1"],"vertices":1}"#;
    std::fs::write(tmp.path().join("lone.json"), lone).unwrap();
    let out = pivotlab(tmp.path(), &["export-dot", "--instance", "lone.json"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out).matches(" [label=").count(), 1);

    assert_eq!(code(&pivotlab(tmp.path(), &["export-dot", "--instance", "w.json", "--budget", "1"])), 2);
    let env = Command::new(env!("CARGO_BIN_EXE_pivotlab"))
        .args(["export-dot", "--instance", "w.json"])
        .current_dir(tmp.path())
        .env("PIVOTLAB_BUDGET", "2")
        .output()
        .unwrap();
    assert_eq!(code(&env), 2);

    single_edge(tmp.path());
    assert_eq!(code(&pivotlab(tmp.path(), &["reduce", "--input", "edge.json", "--reduction", "maxcut-to-wis", "--output", "e"])), 0);
    let dot = stdout(&pivotlab(tmp.path(), &["export-dot", "--bundle", "e.bundle.json"]));
    assert_eq!(dot.matches("fillcolor=lightgray").count(), 4);
}

#[test]
fn verify_exit_codes() {
    let tmp = TempDir::new().unwrap();
    single_edge(tmp.path());
    assert_eq!(code(&pivotlab(tmp.path(), &["reduce", "--input", "edge.json", "--reduction", "maxcut-to-wis", "--output", "e"])), 0);
    let out = pivotlab(tmp.path(), &["verify", "--bundle", "e.bundle.json", "-o", "ok.json"]);
    assert_eq!(code(&out), 0);
    assert!(read(tmp.path(), "ok.json").ends_with(r#""passed":true,"tight":{"condition1":{"status":"pass"},"condition2":{"status":"pass"},"condition3":{"status":"pass"},"nodes_explored":20,"optimum_candidates":20,"passed":true,"r_size":4,"source_solutions":4},"version":1}"#));
    let out = pivotlab(tmp.path(), &["verify", "--bundle", "e.bundle.json", "--checks", "l-tight", "--ell", "0", "-o", "bad.json"]);
    assert_eq!(code(&out), 4);
    let report: serde_json::Value = serde_json::from_str(&read(tmp.path(), "bad.json")).unwrap();
    assert_eq!(report["l_tight"]["outcome"]["status"], "fail");
    assert_eq!(report["l_tight"]["outcome"]["witness"].as_array().unwrap().len(), 2);

    // Tampering with the target is detected.
    let target = read(tmp.path(), "e.target.json").replacen("\"c\":3", "\"c\":2", 1);
    std::fs::write(tmp.path().join("e.target.json"), target).unwrap();
    assert_eq!(code(&pivotlab(tmp.path(), &["verify", "--bundle", "e.bundle.json"])), 4);
}

fn round_trip(doc: &InstanceDocument) -> Result<(), TestCaseError> {
    let text = canonical(doc);
    let back: InstanceDocument = parse(&text, "instance").unwrap();
    prop_assert_eq!(&back, doc);
    prop_assert_eq!(canonical(&back), text);
    let again = InstanceDocument::from_problem(&back.to_problem().unwrap());
    prop_assert_eq!(canonical(&again), canonical(doc));
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generated_documents_round_trip(seed in any::<u64>(), n in 2usize..8, which in 0u8..4) {
        let kind = match which {
            0 => Kind::Maxcut { n, graph: Shape::Random, density: 0.5, weights: vec![], max_weight: 9 },
            1 => Kind::Swop {
                certifier: pivotlab_cli::generate::CertifierName::IndependentSet,
                path: None, cycle: None, complete: None, random: Some(n), density: 0.4,
                unit_weights: false, weights: vec!["-3/4".into(), "5".into()], max_weight: 10, c: 2,
            },
            2 => Kind::Circuit { inputs: n, gates: 2 * n, outputs: 3, max_weight: Some(7) },
            _ => Kind::Mis { classes: vec![2, n % 3 + 1, 1], density: 0.5 },
        };
        round_trip(&document(&kind, seed).unwrap())?;
    }
}

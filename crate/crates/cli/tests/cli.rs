use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use proptest::prelude::*;
use serde_json::Value;
use turmlab::{canonical_form, Graph, Instance, VertexSet};
use turmlab_cli::graph6::{decode, encode};
use turmlab_cli::InstanceDocument;

fn turmlab(args: &[&str], stdin: Option<&str>, envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_turmlab"));
    cmd.args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .env_remove("TURMLAB_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    let mut child = cmd.spawn().expect("binary runs");
    {
        let mut pipe = child.stdin.take().unwrap();
        pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    }
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn instance(doc: &str) -> Instance {
    InstanceDocument::parse(doc).unwrap().to_instance().unwrap()
}

fn build(args: &[&str]) -> String {
    let mut full = vec!["build"];
    full.extend_from_slice(args);
    let o = turmlab(&full, None, &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    stdout(&o)
}

#[test]
fn build_member_document() {
    let doc = build(&["--r", "3", "--n", "6", "--m", "1", "--placement", "1,0"]);
    let inst = instance(&doc);
    assert_eq!(inst.edge_count(), 11);
    assert_eq!(inst.m_set().to_vec(), vec![0]);
    // deterministic
    assert_eq!(doc, build(&["--r", "3", "--n", "6", "--m", "1", "--placement", "1,0"]));
}

#[test]
fn build_turan_graph() {
    let inst = instance(&build(&["--turan", "--parts", "2", "--n", "4"]));
    let c4 = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
    let none = VertexSet::empty(4);
    assert_eq!(canonical_form(inst.graph(), &none), canonical_form(&c4, &none));
    assert_eq!(inst.r(), 3);
}

#[test]
fn build_rejects_invalid_specs() {
    let o = turmlab(&["build", "--r", "3", "--n", "3", "--m", "1", "--keep-sporadic", "1,2"], None, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("|K| <= n-(r-1)m"), "{}", stderr(&o));
    let o = turmlab(&["build", "--r", "3", "--n", "6", "--m", "1", "--placement", "1,1"], None, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("placement sums to m"));
    let o = turmlab(&["build", "--n", "6"], None, &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn check_reports() {
    let doc = build(&["--r", "3", "--n", "6", "--m", "1"]);
    let o = turmlab(&["check"], Some(&doc), &[]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.contains("deficiency: 0"));
    assert!(out.contains("member: yes"));

    let k4 = r#"{"format_version":1,"r":3,"n":4,"M":[0],"graph":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#;
    let o = turmlab(&["check", "--json"], Some(k4), &[]);
    assert_eq!(o.status.code(), Some(1));
    let rep: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["witness"], serde_json::json!([0, 1, 2]));
    assert_eq!(rep["constraint_holds"], false);

    let k33 = r#"{"format_version":1,"r":3,"n":6,"M":[0],"graph":[[0,3],[0,4],[0,5],[1,3],[1,4],[1,5],[2,3],[2,4],[2,5]]}"#;
    let o = turmlab(&["check", "--json"], Some(k33), &[]);
    assert_eq!(o.status.code(), Some(0));
    let rep: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(rep["deficiency"], 2);
    assert_eq!(rep["member"], false);
}

#[test]
fn check_rejects_malformed_documents() {
    let o = turmlab(&["check"], Some("{\"format_version\":1}"), &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = turmlab(&["check"], Some(r#"{"format_version":1,"r":3,"n":6,"M":[],"graph":"DQc"}"#), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("5 vertices"));
}

fn trace(args: &[&str], doc: &str) -> (Instance, Value) {
    let mut full = vec!["transform"];
    full.extend_from_slice(args);
    let o = turmlab(&full, Some(doc), &[]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let inst = instance(&v["document"].to_string());
    (inst, v["trace"].clone())
}

#[test]
fn transform_examples() {
    let c5 = r#"{"format_version":1,"r":3,"n":5,"M":[0],"graph":[[0,1],[1,2],[2,3],[3,4],[4,0]]}"#;
    let (_, t) = trace(&["--peel"], c5);
    assert_eq!(t["sizes"], serde_json::json!([]));
    assert_eq!(t["operation"], "peel");

    let empty = r#"{"format_version":1,"r":3,"n":5,"M":[0],"graph":"D??"}"#;
    let (out, t) = trace(&["--push", "0"], empty);
    assert_eq!(out.edge_count(), 6);
    assert_eq!(t["gain"], 6);

    let sporadic = build(&["--r", "3", "--n", "6", "--m", "1", "--placement", "1,0", "--keep-sporadic", "2"]);
    let (out, t) = trace(&["--redirect"], &sporadic);
    assert_eq!(out.edge_count(), 11);
    assert_eq!(t["edges_before"], t["edges_after"]);
    assert_eq!(t["x_set"]["certified"], true);
    assert_eq!(t["steps"].as_array().unwrap().len(), 1);
}

#[test]
fn transform_errors() {
    let k4 = r#"{"format_version":1,"r":3,"n":4,"M":[0],"graph":[[0,1],[0,2],[0,3],[1,2],[1,3],[2,3]]}"#;
    let o = turmlab(&["transform", "--peel"], Some(k4), &[]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("peel"));
    let doc = build(&["--r", "3", "--n", "6", "--m", "1"]);
    let o = turmlab(&["transform", "--push", "1"], Some(&doc), &[]);
    assert_eq!(o.status.code(), Some(3));
    let o = turmlab(&["transform"], Some(&doc), &[]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn oracle_examples() {
    let o = turmlab(&["oracle", "--r", "3", "--n", "6", "--m", "3", "--json"], None, &[]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["oracle"]["max_edges"], 9);
    assert_eq!(v["oracle"]["extremal_shapes"], 1);
    assert_eq!(v["oracle"]["extremal_classes"], 2);

    let o = turmlab(&["oracle", "--r", "3", "--n", "6", "--m", "1", "--scan", "--slack", "2", "--json"], None, &[]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["scan"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["min_distance"], 0);
    assert_eq!(rows[0]["max_distance"], 0);

    let o = turmlab(&["oracle", "--r", "3", "--n", "20", "--m", "2"], None, &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("n <= 10"));
}

#[test]
fn oracle_is_deterministic_across_thread_counts() {
    let args = ["oracle", "--r", "3", "--n", "7", "--m", "2", "--scan", "--slack", "2", "--json"];
    let one = turmlab(&args, None, &[("TURMLAB_THREADS", "1")]);
    let four = turmlab(&args, None, &[("TURMLAB_THREADS", "4")]);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let bad = turmlab(&args, None, &[("TURMLAB_THREADS", "zero")]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn oracle_writes_report_files() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let o = turmlab(&["oracle", "--r", "3", "--n", "5", "--m", "2", "--slack", "1", "--out-dir", d], None, &[]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("max edges"));
    let read = |f: &str| std::fs::read_to_string(Path::new(d).join(f)).unwrap();
    let report: Value = serde_json::from_str(&read("oracle.json")).unwrap();
    let lines: Vec<String> = read("extremal.g6").lines().map(String::from).collect();
    assert_eq!(report["oracle"]["extremal"], serde_json::json!(lines));
    for l in &lines {
        assert_eq!(decode(l).unwrap().edge_count(), report["oracle"]["max_edges"].as_u64().unwrap() as usize);
    }
    assert!(read("near_extremal.g6").lines().count() > lines.len());
}

#[test]
fn dot_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.dot");
    build(&["--r", "3", "--n", "5", "--m", "1", "--dot", path.to_str().unwrap()]);
    let dot = std::fs::read_to_string(path).unwrap();
    assert!(dot.starts_with("graph G {"));
    assert!(dot.contains("0 [style=filled, fillcolor=grey];"));
}

#[test]
fn out_file_matches_stdout_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("doc.json");
    let o = turmlab(
        &["build", "--r", "4", "--n", "9", "--m", "2", "--out", path.to_str().unwrap()],
        None,
        &[],
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let from_file = std::fs::read_to_string(&path).unwrap();
    assert_eq!(from_file, build(&["--r", "4", "--n", "9", "--m", "2"]));
    let o = turmlab(&["check", path.to_str().unwrap()], None, &[]);
    assert!(stdout(&o).contains("member: yes"));
}

#[test]
fn graph6_reference_vectors() {
    let petersen = Graph::from_edges(
        10,
        [(0, 1), (0, 4), (0, 5), (1, 2), (1, 6), (2, 3), (2, 7), (3, 4), (3, 8), (4, 9), (5, 7), (5, 8), (6, 8), (6, 9), (7, 9)],
    )
    .unwrap();
    assert_eq!(encode(&petersen), "IheA@GUAo");
    let path = Graph::from_edges(64, (1..64).map(|i| (i - 1, i))).unwrap();
    let s = encode(&path);
    assert!(s.starts_with("~?@?hCGGC@?G?_@?@??_?G?@??C??G??G??C??@???G???_"));
    assert!(s.ends_with("@?????????@??????????_?????????G?????????@"));
    let k62 = encode(&Graph::complete(62));
    assert!(k62.starts_with("}~~~~") && k62.len() == 317);
    let k63 = encode(&Graph::complete(63));
    assert!(k63.starts_with("~??~~~") && k63.len() == 330);
}

fn arb_instance() -> impl Strategy<Value = Instance> {
    (1usize..=70)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(any::<bool>(), n * (n - 1) / 2),
                proptest::collection::vec(any::<bool>(), n),
                3usize..=8,
            )
        })
        .prop_map(|(n, bits, marks, r)| {
            let mut g = Graph::empty(n);
            let mut k = 0;
            for v in 1..n {
                for u in 0..v {
                    if bits[k] {
                        g.add_edge(u, v);
                    }
                    k += 1;
                }
            }
            let m = VertexSet::from_iter_in(n, (0..n).filter(|&v| marks[v]));
            Instance::new(g, m, r).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn documents_round_trip(inst in arb_instance()) {
        let doc = InstanceDocument::from_instance(&inst);
        let text = doc.to_json();
        let back = InstanceDocument::parse(&text).unwrap();
        prop_assert_eq!(&back, &doc);
        prop_assert_eq!(back.to_instance().unwrap(), inst.clone());
        prop_assert_eq!(decode(&encode(inst.graph())).unwrap(), inst.graph().clone());
    }
}

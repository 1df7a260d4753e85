use coxfold::cli::{export_dot, run, FIXTURES};
use coxfold::coxeter::{CoxeterMatrix, Label};
use coxfold::dsl::{parse, render, Document, Expectation, PartitionDecl, SystemDecl};
use coxfold::partition::PartitionMap;
use proptest::prelude::*;

const FIXTURE_DIR: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../../fixtures");

fn fixture_path(name: &str) -> String {
    format!("{FIXTURE_DIR}/{name}")
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut full = vec!["coxfold"];
    full.extend_from_slice(args);
    let code = run(full, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[test]
fn verify_reports_and_exit_codes() {
    let (code, out, err) = cli(&["verify", &fixture_path("d4_g2.cox")]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("coxeter: true, lusztig: true, quotient: I2(6)"), "{out}");
    let (code, out, _) = cli(&["verify", &fixture_path("a4_b2.cox")]);
    assert_eq!(code, 0);
    assert!(out.contains("coxeter: true, lusztig: false"), "{out}");
    assert!(out.contains("t1t2 ≠ t2t1"));
}

#[test]
fn verify_without_expectation_uses_the_coxeter_verdict() {
    let dir = std::env::temp_dir().join(format!("coxfold-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a3.cox");
    std::fs::write(&path, "system a3\n  gens a b c\n  edge a b 3\n  edge b c 3\npartition p of a3\n  block s = a b\n  block t = c\n").unwrap();
    let (code, out, _) = cli(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 1, "{out}");
    std::fs::write(&path, "system a3\n  gens a b c\n  edge a b 3\n  edge b c 3\npartition p of a3\n  block s = a c\n  block t = b\n").unwrap();
    let (code, out, _) = cli(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("quotient: B2"));
    std::fs::write(&path, "system a3\n  gens a b c\n  edge a b 1\n").unwrap();
    let (code, out, err) = cli(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("line 3, column 12"), "{err}");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cli(&["frobnicate"]).0, 2);
    assert_eq!(cli(&["verify"]).0, 2);
    assert_eq!(cli(&["verify", "/nonexistent/file.cox"]).0, 2);
    assert_eq!(cli(&["quotient", &fixture_path("d4_g2.cox"), "missing"]).0, 2);
    assert_eq!(cli(&["contract", &fixture_path("a4_b2.cox"), "a4", "s1", "s2"]).0, 2);
}

#[test]
fn json_output_has_stable_key_order() {
    let (code, out, _) = cli(&["verify", "--json", &fixture_path("d4_g2.cox")]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["all_passed"], true);
    let r = &v["results"][0];
    assert_eq!(r["report"]["is_coxeter_partition"], true);
    assert_eq!(r["report"]["quotient_edges"][0], serde_json::json!(["s", "t", 6]));
    let keys = ["\"file\"", "\"partition\"", "\"system\"", "\"report\"", "\"expected\""];
    let pos: Vec<usize> = keys.iter().map(|k| out.find(k).unwrap()).collect();
    assert!(pos.windows(2).all(|w| w[0] < w[1]));
    // identical across runs
    assert_eq!(out, cli(&["verify", "--json", &fixture_path("d4_g2.cox")]).1);
}

#[test]
fn verify_all_covers_the_corpus() {
    let (code, out, err) = cli(&["verify", "--all", FIXTURE_DIR]);
    assert_eq!(code, 0, "{out}{err}");
    assert_eq!(out.matches("expected verdicts: reproduced").count(), 10);
}

#[test]
fn quotient_embed_check_search_contract() {
    let (code, out, _) = cli(&["quotient", &fixture_path("h_type_tails.cox"), "fold"]);
    assert_eq!(code, 0);
    let doc = parse(&out).unwrap();
    let expected = parse(FIXTURES[3].1).unwrap();
    assert!(coxfold::cli::same_matrix(&doc.systems[0].matrix, &expected.system("path543").unwrap().matrix));

    let (code, out, _) = cli(&["embed", &fixture_path("a4_b2.cox"), "fold", "--word", "s t s t"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("s1 s2 t1 t2 t1 s1 s2 t1 t2 t1"), "{out}");
    assert!(out.contains("length 10, reduced: true"));

    let (code, out, _) = cli(&["check", "--radius", "6", &fixture_path("a4_b2.cox")]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(out.matches(" pass\n").count(), 4);

    let (code, out, _) = cli(&["search", &fixture_path("d4_g2.cox"), "d4", "--blocks", "2"]);
    assert_eq!(code, 0);
    assert!(out.contains("s = s1 s2 s3 | t = t1  quotient I2(6)"), "{out}");

    let (code, out, _) = cli(&["search", &fixture_path("d4_g2.cox"), "d4", "--blocks", "2", "--commuting"]);
    assert_eq!(code, 0);
    assert!(out.contains("0 disagreements"));

    let (code, out, _) = cli(&["contract", &fixture_path("a3_contraction.cox"), "a3", "a", "b"]);
    assert_eq!(code, 0);
    assert!(out.contains("surjection is a Coxeter partition: false"));
    assert!(out.contains("reduced word s0 c s0 maps to non-reduced a b a c a b a"), "{out}");
}

#[test]
fn caps_from_environment() {
    // run in a child process so the variable does not leak into other tests
    let exe = env!("CARGO_BIN_EXE_coxfold");
    let status = std::process::Command::new(exe)
        .args(["verify", &fixture_path("d4_g2.cox")])
        .env("COXFOLD_CAPS", "nonsense")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(2));
    let out = std::process::Command::new(exe)
        .args(["check", "--radius", "6", &fixture_path("infinite_bipartite.cox")])
        .env("COXFOLD_CAPS", "ball=5")
        .output()
        .unwrap();
    assert!(String::from_utf8_lossy(&out.stdout).contains("truncated by cap"));
}

#[test]
fn selftest_passes() {
    let (code, out, err) = cli(&["selftest"]);
    assert_eq!(code, 0, "{out}{err}");
    assert!(!out.contains("FAIL"));
}

#[test]
fn dot_export_matches_golden_files() {
    for (fixture, golden) in [
        ("a4_b2.cox", include_str!("golden/a4_b2.dot")),
        ("infinite_bipartite.cox", include_str!("golden/infinite_bipartite.dot")),
    ] {
        let doc = parse(&std::fs::read_to_string(fixture_path(fixture)).unwrap()).unwrap();
        assert_eq!(squash(&export_dot(&doc, None).unwrap()), squash(golden), "{fixture}");
    }
    let (code, out, _) = cli(&["export-dot", &fixture_path("infinite_bipartite.cox")]);
    assert_eq!(code, 0);
    assert!(out.contains("[label=\"inf\"]"));
    assert!(out.contains("subgraph \"cluster_s\""));
}

#[test]
fn every_fixture_parses_and_round_trips() {
    for (name, text) in FIXTURES {
        let doc = parse(text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(parse(&render(&doc)).unwrap(), doc, "{name}");
        assert_eq!(std::fs::read_to_string(fixture_path(name)).unwrap(), text, "{name} is stale");
    }
}

fn arb_label() -> impl Strategy<Value = Label> {
    prop_oneof![
        4 => Just(Label::Finite(2)),
        3 => Just(Label::Finite(3)),
        2 => (4u32..13).prop_map(Label::Finite),
        1 => Just(Label::Infinite),
    ]
}

fn arb_system(idx: usize) -> impl Strategy<Value = SystemDecl> {
    (1usize..6)
        .prop_flat_map(|n| (Just(n), prop::collection::vec(arb_label(), n * (n - 1) / 2)))
        .prop_map(move |(n, labels)| {
            let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
            let mut edges = Vec::new();
            let mut it = labels.into_iter();
            for i in 0..n {
                for j in i + 1..n {
                    edges.push((i, j, it.next().unwrap()));
                }
            }
            SystemDecl { name: format!("sys{idx}"), matrix: CoxeterMatrix::from_edges(&names, &edges).unwrap() }
        })
}

fn arb_document() -> impl Strategy<Value = Document> {
    (arb_system(0), arb_system(1), prop::collection::vec((0usize..2, prop::collection::vec(0usize..3, 5), any::<(bool, Option<bool>, bool)>()), 0..4))
        .prop_map(|(a, b, parts)| {
            let systems = vec![a, b];
            let mut doc = Document { systems: systems.clone(), ..Default::default() };
            for (i, (sys_idx, raw, (cox, lus, with_q))) in parts.into_iter().enumerate() {
                let sys = &systems[sys_idx];
                let n = sys.matrix.rank();
                // compact the raw block choices into a surjection
                let mut seen = Vec::new();
                let assignment: Vec<usize> = (0..n)
                    .map(|g| {
                        let b = raw[g];
                        match seen.iter().position(|&x| x == b) {
                            Some(p) => p,
                            None => {
                                seen.push(b);
                                seen.len() - 1
                            }
                        }
                    })
                    .collect();
                let targets: Vec<String> = (0..seen.len()).map(|t| format!("b{t}")).collect();
                let map = PartitionMap::new(sys.matrix.clone(), targets, assignment).unwrap();
                let name = format!("p{i}");
                doc.expectations.push(Expectation {
                    partition: name.clone(),
                    coxeter: cox,
                    lusztig: lus,
                    quotient: with_q.then(|| "sys1".to_string()),
                });
                doc.partitions.push(PartitionDecl { name, system: sys.name.clone(), map });
            }
            doc
        })
}

proptest! {
    #[test]
    fn parse_inverts_render(doc in arb_document()) {
        let text = render(&doc);
        prop_assert_eq!(parse(&text).unwrap(), doc);
    }
}

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name).to_string_lossy().into_owned()
}

fn profun(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_profun")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

#[test]
fn verify_cut_reaches_inf() {
    let o = profun(&["verify-cut", "--poset", "P=chain5", "--poset", "Q=chain3", "--cut", "reaches-inf"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["subsets_checked"], 32768);
    assert_eq!(r["violations"], Value::Array(vec![]));
}

#[test]
fn verify_cut_output_ignores_jobs() {
    let base = ["verify-cut", "--poset", "P=vee", "--poset", "Q=chain3", "--cut", "bounded-by:2"];
    let one = profun(&base);
    let four = profun(&[&base[..], &["--jobs", "4"]].concat());
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(stdout(&one), stdout(&four));
}

#[test]
fn verify_cut_from_generator_file() {
    let cut = format!("file:{}", data("one.procut"));
    let o = profun(&["verify-cut", "--cut", &cut]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(json(&o)["subsets_checked"], 16);
}

#[test]
fn sampling_needs_a_seed() {
    let base = ["verify-cut", "--poset", "P=chain7", "--poset", "Q=chain3", "--cut", "reaches-inf"];
    let o = profun(&base);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("seed"));
    let args = [&base[..], &["--seed", "3", "--samples", "2000"]].concat();
    let (a, b) = (profun(&args), profun(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(json(&a)["mode"], "sampled");
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn nat_dual_literal() {
    let o = profun(&["nat-dual", "[2,2,4,5,5|shift 1]"]);
    assert_eq!(o.status.code(), Some(0));
    // canonical form of [1,3,3,4,6,6|shift 0]
    assert_eq!(stdout(&o), "[1,3,3,4,6|shift 0]\n");
    let o = profun(&["nat-dual", "--format", "json", "[1,2|inf]"]);
    assert_eq!(json(&o)[0]["dual"], "[2|const 3]");
    assert_eq!(json(&o)[0]["dual_class"], "Small");
}

#[test]
fn parse_errors_exit_2_with_position() {
    let o = profun(&["nat-dual", "[1,x|inf]"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains(":1:4:"), "{}", stderr(&o));
    let o = profun(&["dual", &data("malformed.pro")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("malformed.pro:3:4: unknown element `9`"), "{}", stderr(&o));
    let o = profun(&["show", &data("bad.poset")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("bad.poset:3:15:"), "{}", stderr(&o));
}

#[test]
fn unknown_verb_rejected_before_reading() {
    let o = profun(&["frobnicate", "/nonexistent/file"]);
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    assert!(e.contains("frobnicate") && !e.contains("nonexistent"), "{e}");
}

#[test]
fn show_files_and_posets() {
    let o = profun(&["show", &data("fork.poset")]);
    let r = json(&o);
    assert_eq!(r["downsets"], 5);
    assert_eq!(r["forest"], false);
    let o = profun(&["show", "--poset", "W=op:vee"]);
    assert_eq!(json(&o)["forest"], true);
    let o = profun(&["show", &data("vee.pro")]);
    assert_eq!(json(&o)["infinite_at"], serde_json::json!(["b"]));
    for f in ["vee.cut", "square.ideal", "clopen.natcut", "one.procut", "steps.pro"] {
        assert_eq!(profun(&["show", &data(f)]).status.code(), Some(0), "{f}");
    }
}

#[test]
fn dual_dispatches_on_header() {
    let o = profun(&["dual", &data("vee.pro")]);
    assert_eq!(stdout(&o), "pro chain2 vee\n1:\n2: a c\n");
    let o = profun(&["dual", &data("square.ideal"), "--format", "cas"]);
    assert_eq!(stdout(&o), "monomialIdeal(a*c, a*d, b*c, b*d)\n");
    let o = profun(&["dual", &data("vee.cut")]);
    assert_eq!(stdout(&o), "cut op:vee\ndown: c\n");
    let o = profun(&["dual", &data("clopen.natcut")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dual_of_dual_file_round_trips() {
    let dir = std::env::temp_dir().join(format!("profun-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let once = dir.join("once.pro");
    std::fs::write(&once, stdout(&profun(&["dual", &data("steps.pro")]))).unwrap();
    let twice = stdout(&profun(&["dual", once.to_str().unwrap()]));
    assert_eq!(twice, "pro chain5 chain3\n1: 1\n2: 1\n3: 1 2\n4: *\n5: *\n");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn boundaries() {
    let o = profun(&["ascent", "[2,2,4|const 5]"]);
    assert_eq!(json(&o)["pairs"], serde_json::json!([[1, 1], [2, 3], [3, 3], [4, 4]]));
    let o = profun(&["graph", &data("vee.pro")]);
    assert_eq!(json(&o)["pairs"], serde_json::json!([["2", "a"], ["2", "c"]]));
    let o = profun(&["graph", "[|const 2]"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn enumerate_counts() {
    let o = profun(&["enumerate", "--poset", "P=chain3", "--poset", "Q=chain3"]);
    assert_eq!(json(&o)["count"], 20);
    let o = profun(&["enumerate", "--poset", "P=chain2", "--poset", "Q=chain2", "--cut", "reaches-inf"]);
    let r = json(&o);
    assert_eq!(r["ideal"].as_array().unwrap().len(), 3);
    assert_eq!(r["filter"].as_array().unwrap().len(), 3);
}

#[test]
fn diagram_and_letterplace() {
    let o = profun(&["verify-diagram", "--poset", "P=vee", "--poset", "Q=chain2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["cuts_checked"], 42);
    let o = profun(&["letterplace-dual", "--poset", "P=diamond", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["poset_side_route"], Value::Null);
}

#[test]
fn ideal_exports_are_golden() {
    let golden = std::fs::read_to_string(data("l22.cas")).unwrap();
    for _ in 0..2 {
        let o = profun(&["isotonian", "--poset", "P=chain2", "--poset", "Q=chain2", "--format", "cas"]);
        assert_eq!(stdout(&o), golden);
    }
    let o = profun(&["ideals", "--poset", "P=chain2", "--poset", "Q=chain2", "--cut", "reaches-inf", "--format", "cas"]);
    assert_eq!(stdout(&o).lines().count(), 2);
    let o = profun(&["export", &data("square.ideal"), "--format", "csv"]);
    assert_eq!(stdout(&o), "generator\na;b\nc;d\n");
    let o = profun(&["export", &data("square.ideal")]);
    assert_eq!(stdout(&o), "monomialIdeal(a*b, c*d)\n");
}

#[test]
fn nat_gap_verdicts() {
    let o = profun(&["nat-gap", &data("clopen.natcut"), "--box", "3x4"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["gap"]["verdict"], "DedekindCut");
    assert_eq!(r["window"]["holds"], true);
    let o = profun(&["nat-gap", "tower:3"]);
    assert_eq!(o.status.code(), Some(1));
    let r = json(&o);
    assert_eq!(r["gap"]["verdict"], "NotRegular");
    assert_eq!(r["clopen"]["complement"], serde_json::json!(["[2,3|const 4]"]));
    let o = profun(&["nat-gap", "identity-gap:9", "--max-prefix", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["gap"]["witnesses"][0]["map"], "[|shift 0]");
    assert_eq!(profun(&["nat-gap", "nosuch:3"]).status.code(), Some(2));
}

#[test]
fn nat_stable_pair() {
    let o = profun(&["nat-stable", &data("clopen.natcut"), "--trunc", "4", "--format", "cas"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "monomialIdeal(x_1, x_2^3)\nmonomialIdeal(x_1^2, x_1*x_2, x_1*x_3)\n");
    let o = profun(&["nat-stable", &data("clopen.natcut"), "--trunc", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("truncation"));
}

#[test]
fn every_verb_runs() {
    let pq = ["--poset", "P=chain2", "--poset", "Q=chain2"];
    let runs: Vec<Vec<String>> = vec![
        vec!["show".into(), data("fork.poset")],
        vec!["dual".into(), data("vee.pro")],
        vec!["ascent".into(), data("vee.pro")],
        vec!["graph".into(), data("vee.pro")],
        [&["enumerate"][..], &pq].concat().iter().map(|s| s.to_string()).collect(),
        [&["verify-cut", "--cut", "finite-at:1"][..], &pq].concat().iter().map(|s| s.to_string()).collect(),
        [&["verify-diagram"][..], &pq].concat().iter().map(|s| s.to_string()).collect(),
        [&["ideals", "--cut", "bounded-by:1"][..], &pq].concat().iter().map(|s| s.to_string()).collect(),
        [&["isotonian"][..], &pq].concat().iter().map(|s| s.to_string()).collect(),
        vec!["letterplace-dual".into(), "--poset".into(), "P=wedge".into(), "2".into()],
        vec!["nat-dual".into(), "[|shift 0]".into()],
        vec!["nat-gap".into(), data("clopen.natcut")],
        vec!["nat-stable".into(), data("clopen.natcut")],
        vec!["export".into(), data("square.ideal")],
    ];
    let mut seen: Vec<String> = runs.iter().map(|r| r[0].clone()).collect();
    seen.sort();
    let mut verbs: Vec<String> = profun_cli::VERB_TABLE.iter().map(|(v, _)| v.name()).collect();
    verbs.sort();
    assert_eq!(seen, verbs);
    for r in runs {
        let args: Vec<&str> = r.iter().map(String::as_str).collect();
        let o = profun(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stderr(&o));
    }
}

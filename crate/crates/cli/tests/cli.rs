use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn gallai(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gallai"));
    cmd.args(args).env_remove("GALLAI_CACHE");
    if let Some(c) = cache {
        cmd.env("GALLAI_CACHE", c);
    }
    cmd.output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn gen_round_trips_through_verify() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("nested.gct");
    let f = file.to_str().unwrap();
    let printed = gallai(&["gen", "nested", "--parts", "3,1,1"], None);
    assert_eq!(code(&printed), 0);
    assert_eq!(code(&gallai(&["gen", "nested", "--parts", "3,1,1", "-o", f], None)), 0);
    assert_eq!(std::fs::read(&file).unwrap(), printed.stdout);
    let sidecar: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("nested.json")).unwrap()).unwrap();
    assert_eq!(sidecar["schema"], 1);
    assert_eq!(sidecar["claimed_order"], 5);

    let o = gallai(&["--format", "json", "verify", f, "--k", "1", "--rainbow", "--expect", "k-gallai"], None);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["k_gallai"]["report"]["holds"], true);
    assert_eq!(v["rainbow_triangle"], Value::Null);
}

#[test]
fn refuted_expectations_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("rainbow.gct");
    std::fs::write(&file, "3 3\n1 2\n3\n").unwrap();
    let f = file.to_str().unwrap();
    assert_eq!(code(&gallai(&["verify", f, "--expect", "no-rainbow-triangle"], None)), 1);
    assert_eq!(code(&gallai(&["verify", f, "--expect", "gallai"], None)), 1);
    assert_eq!(code(&gallai(&["verify", f, "--k", "2", "--expect", "k-gallai"], None)), 0);
    assert_eq!(code(&gallai(&["search", f, "--rainbow-triangle", "--expect", "found"], None)), 0);
    assert_eq!(code(&gallai(&["search", f, "--pattern", "P3", "--expect", "found"], None)), 1);
    // 3 vertices are below the star threshold
    assert_eq!(code(&gallai(&["extract", "--proof", "star", f, "--k", "2", "--t", "2"], None)), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&gallai(&["number", "--kind", "ggr"], None)), 2);
    assert_eq!(code(&gallai(&["frobnicate"], None)), 2);
    assert_eq!(code(&gallai(&["verify", "/nonexistent.gct"], None)), 2);
    assert_eq!(code(&gallai(&["number", "--kind", "r", "--k", "2", "--pattern", "nope"], None)), 2);
    assert_eq!(code(&gallai(&["cache", "list"], None)), 2);

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("big.gct");
    let f = file.to_str().unwrap();
    assert_eq!(code(&gallai(&["gen", "nested", "--parts", "10,10", "-o", f], None)), 0);
    assert_eq!(code(&gallai(&["verify", f, "--k", "1"], None)), 2);
    assert_eq!(code(&gallai(&["verify", f, "--k", "1", "--sample", "200", "--expect", "k-gallai"], None)), 0);
}

#[test]
fn exhausted_budget_exits_three() {
    let o = gallai(&["--budget", "50", "--format", "json", "number", "--kind", "r", "--k", "2", "--pattern", "K4"], None);
    assert_eq!(code(&o), 3);
    let v = json(&o);
    assert_eq!(v["result"]["value"]["type"], "interval");
    assert_eq!(v["result"]["value"]["hi"], Value::Null);
}

#[test]
fn number_uses_and_fills_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let args = ["--format", "json", "number", "--kind", "ggr", "--k", "2", "--ell", "4", "--pattern", "S2"];
    let first = gallai(&args, Some(&cache));
    assert_eq!(code(&first), 0);
    let v = json(&first);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["source"], "engine");
    assert_eq!(v["result"]["value"]["type"], "exact");
    assert_eq!(v["result"]["value"]["value"], 5);
    let second = gallai(&args, Some(&cache));
    let third = gallai(&args, Some(&cache));
    assert_eq!(json(&second)["source"], "cache");
    assert_eq!(second.stdout, third.stdout);

    let human = gallai(&["number", "--kind", "ggr", "--k", "2", "--ell", "4", "--pattern", "S2"], Some(&cache));
    assert!(String::from_utf8_lossy(&human.stdout).starts_with("Exact(5)"));

    let c = cache.to_str().unwrap();
    let list = gallai(&["--cache", c, "--format", "json", "cache", "list"], None);
    assert_eq!(json(&list)["records"].as_array().unwrap().len(), 1);
    assert_eq!(code(&gallai(&["cache", "verify"], Some(&cache))), 0);
}

#[test]
fn truncated_cache_line_is_reported_and_collected() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let args = ["number", "--kind", "r", "--k", "2", "--pattern", "K3"];
    assert_eq!(code(&gallai(&args, Some(&cache))), 0);
    let mut text = std::fs::read_to_string(&cache).unwrap();
    let good = text.clone();
    text.push_str(&good[..good.len() / 2]);
    text.push('\n');
    std::fs::write(&cache, text).unwrap();

    let o = gallai(&["cache", "verify"], Some(&cache));
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let gc = gallai(&["--format", "json", "cache", "gc"], Some(&cache));
    assert_eq!(code(&gc), 0);
    assert_eq!(json(&gc)["dropped_corrupt"], 1);
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), good);
    assert_eq!(code(&gallai(&["cache", "verify"], Some(&cache))), 0);
}

#[test]
fn knn_search_on_graph_file() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("k33.g");
    // K_{3,3} minus one edge
    let mut text = String::from("6\n");
    for u in 1..=3 {
        for v in 4..=6 {
            if (u, v) != (1, 4) {
                text.push_str(&format!("{u} {v}\n"));
            }
        }
    }
    std::fs::write(&file, text).unwrap();
    let f = file.to_str().unwrap();
    let o = gallai(&["--format", "json", "search", f, "--knn", "2", "--left", "3", "--expect", "found"], None);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["found"], true);
    assert_eq!(code(&gallai(&["search", f, "--knn", "3", "--left", "3", "--expect", "absent"], None)), 0);
    assert_eq!(code(&gallai(&["search", f, "--knn", "2"], None)), 2);
}

#[test]
fn bounds_report_values_and_provenance() {
    let o = gallai(&["--format", "json", "bounds", "--formula", "nonbip", "--k", "2", "--ell", "3", "--n", "3", "--chi", "3", "--t", "5", "--m-k", "2"], None);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["lower"], "8");
    assert_eq!(v["upper"], "184");

    let o = gallai(&["--format", "json", "bounds", "--formula", "bip", "--k", "2", "--ell", "3", "--m", "2", "--n", "2", "--t", "4", "--b", "3", "--z", "4", "--proof-order"], None);
    let v = json(&o);
    assert_eq!(v["upper"], "116");
    assert_eq!(v["statement_vs_proof"]["proof_order"], "33");

    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.jsonl");
    let o = gallai(&["--format", "json", "bounds", "--formula", "bip", "--k", "2", "--ell", "2", "--pattern", "P4"], Some(&cache));
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let prov = |name: &str| {
        v["inputs"].as_array().unwrap().iter().find(|i| i["name"] == name).map(|i| i["provenance"].clone()).unwrap()
    };
    assert_eq!(prov("t"), "engine");
    assert_eq!(prov("b"), "engine");
    assert_eq!(prov("z"), "derived");
    assert_eq!(prov("m"), "derived");
    let again = json(&gallai(&["--format", "json", "bounds", "--formula", "bip", "--k", "2", "--ell", "2", "--pattern", "P4"], Some(&cache)));
    let t = again["inputs"].as_array().unwrap().iter().find(|i| i["name"] == "t").unwrap().clone();
    assert_eq!(t["provenance"], "cache");
}

#[test]
fn extract_star_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("n.gct");
    let f = file.to_str().unwrap();
    assert_eq!(code(&gallai(&["gen", "nested", "--parts", "3,2", "-o", f], None)), 0);
    let o = gallai(&["--format", "json", "extract", "--proof", "star", f, "--k", "1", "--t", "2", "--expect-certificate"], None);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["certificate"]["embedding"].as_array().unwrap().len(), 3);
}

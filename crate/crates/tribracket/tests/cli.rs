use std::io::Write;
use std::process::{Command, Output};

use tribracket::format::{InvariantRecord, ModuleJson};
use tribracket_core::enumerate_tribrackets;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tribracket"))
        .args(args)
        .current_dir(concat!(env!("CARGO_MANIFEST_DIR"), "/data"))
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn temp(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f
}

#[test]
fn invariant_examples() {
    for (args, want) in [
        (&["invariant", "--link", "3_1", "--tribracket", "x2.tb", "--module", "v.tbm"][..], "4u^27\n"),
        (&["invariant", "--link", "U1", "--alexander", "3,1,2"][..], "9\n"),
        (&["invariant", "--link", "L2a1", "--tribracket", "x2.tb", "--module", "v1.tbm"][..], "2u^9+6u^27\n"),
        (&["invariant", "--link", "3_1", "--alexander", "3,1,2"][..], "27\n"),
        (&["invariant", "--link", "4_1", "--module", "x4"][..], "16u^9\n"),
    ] {
        let o = run(args);
        assert_eq!((code(&o), stdout(&o).as_str()), (0, want), "{args:?}");
    }
}

#[test]
fn constant_modules_need_a_ring() {
    let o = run(&["invariant", "--link", "3_1", "--tribracket", "x2", "--module", "constant:1,2", "--modulus", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "4u^27\n");
    let o = run(&["invariant", "--link", "3_1", "--tribracket", "x2", "--module", "constant:1,2"]);
    assert_eq!(code(&o), 2);
    let o = run(&["invariant", "--link", "3_1", "--tribracket", "x2", "--module", "constant:0,2", "--modulus", "3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn validate_exit_codes() {
    assert_eq!(code(&run(&["validate", "--tribracket", "x3.tb"])), 0);
    assert_eq!(code(&run(&["validate", "--module", "v3.tbm"])), 0);

    let perturbed = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/x3.tb")).unwrap().replacen(
        "[[[1,3,2]",
        "[[[3,1,2]",
        1,
    );
    let f = temp(&perturbed);
    let o = run(&["validate", "--tribracket", f.path().to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("witness:"));

    let f = temp("[[[1,2],[2,1]],[[2,1]");
    assert_eq!(code(&run(&["validate", "--tribracket", f.path().to_str().unwrap()])), 2);
    let f = temp("[[[1,2],[2,1]],[[2,1],[1,3]]]");
    assert_eq!(code(&run(&["validate", "--tribracket", f.path().to_str().unwrap()])), 2);
    assert_eq!(code(&run(&["validate", "--tribracket", "/no/such/file"])), 2);

    let bad_module = temp("modulus: 3\nbase: x2\nx: [[[2,2],[2,1]],[[1,2],[2,1]]]\ny: [[[1,2],[2,2]],[[2,2],[2,1]]]\n");
    let o = run(&["validate", "--module", bad_module.path().to_str().unwrap(), "--format", "json"]);
    assert_eq!(code(&o), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(report["module_valid"], false);
    assert!(report["witness"].as_str().unwrap().contains("family"));
}

#[test]
fn unknown_link_is_an_input_error() {
    let o = run(&["invariant", "--link", "L6a9", "--module", "v"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("L6a1"));
    assert_eq!(code(&run(&["invariant", "--link", "3_1"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
}

#[test]
fn json_round_trips() {
    let o = run(&["invariant", "--link", "L2a1", "--module", "v1", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let r: InvariantRecord = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.polynomial().unwrap().to_string(), "2u^9+6u^27");
    assert_eq!(r.count, 8);
    assert_eq!(r.multiset.as_ref().unwrap().iter().map(|m| m.count).sum::<u64>(), 8);
    assert_eq!(serde_json::to_string(&r).unwrap() + "\n", stdout(&o));
}

#[test]
fn tables_report() {
    let o = run(&["tables", "--set", "V1"]);
    assert_eq!(code(&o), 0);
    let l6a1 = stdout(&o).lines().find(|l| l.trim_start().starts_with("L6a1")).unwrap().to_string();
    assert!(l6a1.contains("computed 8u^27") && l6a1.ends_with("match"));

    let o = run(&["tables", "--set", "four-element"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.trim_start().starts_with("4_1 ") && l.contains("computed 16u^9 ")));
    assert!(text.lines().any(|l| l.trim_start().starts_with("8_18 ") && l.contains("computed 8u^9+8u^81 ")));
    assert!(text.contains("L7a2"));

    let o = run(&["tables", "--set", "V2"]);
    assert!(stdout(&o).contains("L62 (read as L6a2)"));

    let o = run(&["tables", "--set", "V3"]);
    for name in ["L5a1", "L7a1", "L7a3", "L7a4", "L7n2"] {
        let line = stdout(&o).lines().find(|l| l.trim_start().starts_with(name)).unwrap().to_string();
        assert!(line.contains("expected 8u^512") && line.contains("computed 8u^512 "), "{line}");
    }
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("8 cells differ"));
    assert_eq!(code(&run(&["tables", "--set", "V9"])), 2);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["tables", "--format", "json", "--jobs", "1"]);
    let b = run(&["tables", "--format", "json", "--jobs", "4"]);
    let c = run(&["tables", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let a = run(&["check-moves", "--link", "L2a1", "--seed", "5"]);
    let b = run(&["check-moves", "--link", "L2a1", "--seed", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn search_streams_results() {
    let o = run(&["search", "--size", "3"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o).lines().count(), enumerate_tribrackets(3).len());
    let o = run(&["search", "--size", "3", "--limit", "2"]);
    assert_eq!(stdout(&o).lines().count(), 2);

    let o = run(&["search", "--tribracket", "x2", "--modulus", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let mods: Vec<ModuleJson> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(mods.len(), 48);
    let v = ModuleJson::of(&tribracket::format::builtin_module("v").unwrap());
    assert!(mods.contains(&v));
    let first = serde_json::to_string(&mods[0]).unwrap();
    let f = temp(&first);
    assert_eq!(code(&run(&["validate", "--module", f.path().to_str().unwrap()])), 0);
}

#[test]
fn pd_files_and_alternate_atlas() {
    let f = temp("PD[X[1,4,2,5], X[3,6,4,1], X[5,2,6,3]]\n");
    let o = run(&["invariant", "--pd", f.path().to_str().unwrap(), "--module", "v"]);
    assert_eq!(stdout(&o), "4u^27\n");

    let atlas = temp("# mine\nhopf: X(4,1,3,2) X(2,3,1,4)\n");
    let o = run(&["--atlas", atlas.path().to_str().unwrap(), "list"]);
    assert_eq!(stdout(&o), "hopf\n");
    let o = run(&["invariant", "--atlas", atlas.path().to_str().unwrap(), "--link", "hopf", "--module", "v1"]);
    assert_eq!(stdout(&o), "2u^9+6u^27\n");

    let broken = temp("hopf: X(4,1,3,2)\n");
    assert_eq!(code(&run(&["--atlas", broken.path().to_str().unwrap(), "list"])), 2);
}

#[test]
fn list_and_diagram() {
    let o = run(&["list", "--links", "--max-crossings", "7"]);
    assert_eq!(stdout(&o).lines().count(), 18);
    let o = run(&["list", "--knots", "--max-crossings", "2"]);
    assert_eq!(stdout(&o), "");
    let o = run(&["diagram", "--link", "3_1", "--format", "json"]);
    let d: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(d["regions"].as_array().unwrap().len(), 5);
    assert_eq!(d["crossings"].as_array().unwrap().len(), 3);
}

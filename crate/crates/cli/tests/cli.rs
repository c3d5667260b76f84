use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use kapranov::fixtures::{gerstenhaber_truncated, sl2, w4_theta};
use kapranov::GradedSpace;
use kapranov_cli::document::{dgla_document, load, prelie_document, Algebra, InputError};
use serde_json::Value;

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kapranov")).args(args).output().unwrap()
}

fn report(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

fn write_json(name: &str, v: &impl serde::Serialize) -> PathBuf {
    let p = tmp(name);
    std::fs::write(&p, serde_json::to_string_pretty(v).unwrap()).unwrap();
    p
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn builtin_documents_match_the_library_fixtures() {
    let Algebra::PreLie(l) = load("fixture").unwrap().algebra else { panic!("kind") };
    assert_eq!(l, w4_theta());
    let Algebra::Dgla(l) = load("sl2").unwrap().algebra else { panic!("kind") };
    assert_eq!(l, sl2());
}

#[test]
fn emitted_documents_reload_unchanged() {
    let w = GradedSpace::new([("w", 0), ("u", 1)]).unwrap().arc();
    let g = gerstenhaber_truncated(&w, 3).unwrap();
    let d = g.ad(g.space().index_of("w.w->u").unwrap()).unwrap();
    let g = g.with_differential(Some(d)).unwrap();
    let p = write_json("gerstenhaber.json", &prelie_document(&g));
    let Algebra::PreLie(back) = load(path_str(&p)).unwrap().algebra else { panic!("kind") };
    assert_eq!(back, g);
    let p = write_json("sl2.json", &dgla_document(&sl2()));
    let Algebra::Dgla(back) = load(path_str(&p)).unwrap().algebra else { panic!("kind") };
    assert_eq!(back, sl2());
    let o = cli(&["validate", path_str(&tmp("gerstenhaber.json"))]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(report(&o)["kind"], "prelie-right");
}

#[test]
fn fixture_is_supported_with_the_sigma_plus_nabla_witness() {
    let o = cli(&["homotopy-abelian", "fixture", "--max-arity", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    assert_eq!(r["verdict"], "SUPPORTED(4)");
    assert_eq!(r["max_arity"], 4);
    let w = &r["details"]["kapranov_witness"];
    assert_eq!(w["form"], "sigma_plus_nabla");
    assert_eq!(w["check"]["passed"], true);
    assert_eq!(r["details"]["consistent"], true);
}

#[test]
fn sl2_is_refuted_at_arity_two() {
    let o = cli(&["homotopy-abelian", "sl2", "--max-arity", "2"]);
    assert_eq!(o.status.code(), Some(1));
    let r = report(&o);
    assert_eq!(r["verdict"], "REFUTED");
    assert_eq!(r["details"]["refuted_at_arity"], 2);
    assert_eq!(r["details"]["consistent"], true);
}

#[test]
fn kapranov_reports_the_hand_value() {
    let o = cli(&["kapranov", "fixture", "--max-arity", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let r = report(&o);
    let taylor = r["details"]["tower"]["taylor"].as_array().unwrap();
    let phi2 = taylor.iter().find(|t| t["arity"] == 2).unwrap();
    let hit = phi2["terms"]
        .as_array()
        .unwrap()
        .iter()
        .find(|t| t["inputs"] == serde_json::json!(["e2", "e2"]))
        .unwrap();
    assert_eq!(hit["output"], "e4t");
    assert_eq!(hit["coeff"], "-2");
}

#[test]
fn emitted_tower_round_trips() {
    for variant in ["plain", "alternating"] {
        let emit = tmp(&format!("tower-{variant}.json"));
        let o = cli(&["kapranov", "fixture", "--variant", variant, "--emit", path_str(&emit)]);
        assert_eq!(o.status.code(), Some(0));
        let doc: Value = serde_json::from_slice(&std::fs::read(&emit).unwrap()).unwrap();
        assert_eq!(doc["kind"], "linfty");
        let o = cli(&["check-linfty", path_str(&emit)]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let a = report(&cli(&["splitting", path_str(&emit)]));
        let b = report(&cli(&["splitting", "fixture", "--variant", variant]));
        assert_eq!(a["verdict"], b["verdict"]);
        assert_eq!(a["verdict"], "SUPPORTED(4)");
        let a = report(&cli(&["homotopy-abelian", path_str(&emit)]));
        assert_eq!(a["verdict"], "SUPPORTED(4)");
    }
}

#[test]
fn undeclared_generator_is_a_semantic_error() {
    let doc = serde_json::json!({
        "kind": "dgla",
        "generators": [{"name": "x", "degree": 0}],
        "bracket": [{"inputs": ["x", "y"], "output": "x", "coeff": "1"}],
    });
    let p = write_json("undeclared.json", &doc);
    match load(path_str(&p)) {
        Err(InputError::Semantic(m)) => assert!(m.contains("\"y\""), "{m}"),
        other => panic!("{other:?}"),
    }
    let o = cli(&["validate", path_str(&p)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"y\""));
}

#[test]
fn zero_denominator_is_a_parse_error() {
    let doc = serde_json::json!({
        "kind": "dgla",
        "generators": [{"name": "x", "degree": 0}, {"name": "y", "degree": 0}],
        "bracket": [{"inputs": ["x", "y"], "output": "x", "coeff": "1/0"}],
    });
    let p = write_json("zero-denominator.json", &doc);
    assert!(matches!(load(path_str(&p)), Err(InputError::Parse(_))));
    assert_eq!(cli(&["validate", path_str(&p)]).status.code(), Some(2));
}

#[test]
fn malformed_json_reports_line_and_column() {
    let p = tmp("malformed.json");
    std::fs::write(&p, "{\n  \"kind\": \"dgla\",\n  \"generators\": [,]\n}\n").unwrap();
    match load(path_str(&p)) {
        Err(InputError::Parse(m)) => assert!(m.contains("line 3 column"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn inhomogeneous_entries_are_rejected() {
    let doc = serde_json::json!({
        "kind": "prelie-left",
        "generators": [{"name": "a", "degree": 0}, {"name": "b", "degree": 1}],
        "product": [{"inputs": ["a", "a"], "output": "b", "coeff": "1"}],
    });
    let p = write_json("inhomogeneous.json", &doc);
    match load(path_str(&p)) {
        Err(InputError::Semantic(m)) => assert!(m.contains("product entry 0"), "{m}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn exit_codes() {
    assert_eq!(cli(&["validate", "fixture"]).status.code(), Some(0));
    assert_eq!(cli(&["validate", "sl2"]).status.code(), Some(0));
    assert_eq!(cli(&["splitting", "sl2", "--max-arity", "3"]).status.code(), Some(1));
    assert_eq!(cli(&["validate", "no-such-file.json"]).status.code(), Some(2));
    assert_eq!(cli(&["kapranov", "sl2"]).status.code(), Some(2));
    assert_eq!(cli(&["frobnicate", "fixture"]).status.code(), Some(2));
    assert_eq!(cli(&["validate", "fixture", "--max-arity", "0"]).status.code(), Some(2));
    let jacobi = serde_json::json!({
        "kind": "dgla",
        "generators": [{"name": "x", "degree": 0}, {"name": "y", "degree": 0}, {"name": "z", "degree": 0}],
        "bracket": [
            {"inputs": ["x", "y"], "output": "z", "coeff": "1"},
            {"inputs": ["x", "z"], "output": "x", "coeff": "1"},
        ],
    });
    let p = write_json("not-jacobi.json", &jacobi);
    let o = cli(&["validate", path_str(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!report(&o)["details"]["jacobi_failures"].as_array().unwrap().is_empty());
}

#[test]
fn every_report_is_deterministic_and_echoes_n() {
    let cmds = ["validate", "check-linfty", "splitting", "ce-cohomology", "minimal-model", "homotopy-abelian", "oracle"];
    for input in ["fixture", "sl2"] {
        for cmd in cmds {
            let a = cli(&[cmd, input, "--max-arity", "3"]);
            let b = cli(&[cmd, input, "--max-arity", "3"]);
            assert_eq!(a.stdout, b.stdout, "{cmd} {input}");
            let r = report(&a);
            assert_eq!(r["max_arity"], 3);
            assert!(r["semantics"].as_str().unwrap().contains("N"));
            assert!(r.get("timing_ms").is_none());
        }
    }
    let r = report(&cli(&["validate", "sl2", "--timing"]));
    assert!(r["timing_ms"].is_u64());
}

use std::process::Command;

use fbc_core::FreeMap;
use serde_json::Value;

const PSI: &str = "a->b; b->c; c->cA";

fn fbc(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_fbc"))
        .args(args)
        .env_remove("FBC_JSON")
        .output()
        .unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn fbc_json(args: &[&str]) -> (i32, Value) {
    let mut argv = vec!["--json"];
    argv.extend_from_slice(args);
    let (code, stdout, _) = fbc(&argv);
    (code, serde_json::from_str(&stdout).unwrap())
}

/// All decimal numbers appearing in `text`, in order.
fn numbers(text: &str) -> Vec<f64> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for ch in text.chars().chain([' ']) {
        if ch.is_ascii_digit() || (ch == '.' && !cur.is_empty()) {
            cur.push(ch);
        } else if !cur.is_empty() {
            out.push(cur.trim_end_matches('.').parse().unwrap());
            cur.clear();
        }
    }
    out
}

#[test]
fn exit_code_matrix() {
    let cases: &[(&[&str], i32)] = &[
        (&["b1", "--map", PSI], 0),
        (&["parse", "--map", "a->a"], 0),
        (&["invert", "--map", PSI], 0),
        (&["compose", "--map1", PSI, "--map2", "a->Cb; b->a; c->b"], 0),
        (&["h1", "--presentation", "gens: a t; rel: Tata"], 0),
        (&["fingerprint", "--map", "a->A"], 0),
        (&["invert", "--map", "a->a; b->a; c->c"], 2),
        (&["stretch", "--map", "a->a; b->a; c->c"], 2),
        (&["atoroidal", "--map", "a->ab; b->ab"], 2),
        (&["parse", "--map", "a->b; a->c"], 1),
        (&["parse", "--map", "a->b; b->"], 0),
        (&["parse", "--map", "a->b; c->a"], 1),
        (&["parse", "--map", "a->>b"], 1),
        (&["b1", "--map", PSI, "--presentation", "gens: a"], 1),
        (&["b1"], 1),
        (&["stretch", "--map", PSI, "--depth", "0"], 1),
        (&["frobnicate"], 1),
        (&["parse", "--map", "a->a^99999999"], 3),
        (&["fingerprint", "--map", "a->a", "--group-file", "/nonexistent/g.txt"], 1),
        (&["--help"], 0),
        (&["--version"], 0),
    ];
    for (args, expected) in cases {
        let (code, _, stderr) = fbc(args);
        assert_eq!(code, *expected, "{args:?}: {stderr}");
    }
}

#[test]
fn order_cap_is_a_resource_error() {
    let dir = std::env::temp_dir().join(format!("fbc-cli-cap-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("S7.txt");
    std::fs::write(&path, "(1 2 3 4 5 6 7)\n(1 2)\n").unwrap();
    let (code, doc) = fbc_json(&["fingerprint", "--map", "a->a", "--group-file", path.to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(doc["error"]["kind"], "OrderCapExceeded");
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn document_shape() {
    let (code, doc) = fbc_json(&["b1", "--map", PSI]);
    assert_eq!(code, 0);
    for key in ["command", "inputs", "results", "diagnostics", "versions"] {
        assert!(doc.get(key).is_some(), "{key}");
    }
    assert_eq!(doc["command"], "b1");
    assert_eq!(doc["results"]["betti"], 1);
    let (code, doc) = fbc_json(&["invert", "--map", "a->a; b->a; c->c"]);
    assert_eq!(code, 2);
    assert_eq!(doc["error"]["kind"], "NotAutomorphism");
}

#[test]
fn echoed_inputs_round_trip() {
    for map in [PSI, "a -> b ; b->c;c->c a^-1", "a->a", "a->a(bc)^2; b->b; c->C^-1"] {
        let runs: [&[&str]; 3] = [
            &["parse", "--map", map],
            &["b1", "--map", map],
            &["stretch", "--map", map, "--depth", "10"],
        ];
        for args in runs {
            let (code, doc) = fbc_json(args);
            assert_eq!(code, 0, "{args:?}");
            let echoed = doc["inputs"]["map"].as_str().unwrap();
            assert_eq!(FreeMap::parse(echoed).unwrap(), FreeMap::parse(map).unwrap(), "{args:?}");
        }
    }
}

#[test]
fn human_and_json_agree() {
    let (_, text, _) = fbc(&["stretch", "--map", PSI]);
    let (_, doc) = fbc_json(&["stretch", "--map", PSI]);
    let nums = numbers(&text);
    for key in ["forward", "backward"] {
        let v = doc["results"][key]["lambda_hat"].as_f64().unwrap();
        assert!(nums.contains(&v), "{key} {v} not in {text}");
    }
    assert!(nums.contains(&doc["results"]["min"].as_f64().unwrap()));
    assert!(nums.contains(&doc["diagnostics"]["transition_bound"].as_f64().unwrap()));

    let (_, text, _) = fbc(&["fingerprint", "--map", PSI]);
    let (_, doc) = fbc_json(&["fingerprint", "--map", PSI]);
    let rows: Vec<Vec<f64>> = text.lines().skip(1).map(numbers).collect();
    for (row, entry) in rows.iter().zip(doc["results"]["fingerprint"].as_array().unwrap()) {
        let tail = &row[row.len() - 3..];
        let expected = ["order", "homs", "epis"].map(|k| entry[k].as_f64().unwrap());
        assert_eq!(tail, expected);
    }

    let (_, text, _) = fbc(&["b1", "--map", "a->A"]);
    let (_, doc) = fbc_json(&["b1", "--map", "a->A"]);
    assert_eq!(numbers(&text), [doc["results"]["betti"].as_f64().unwrap(), doc["results"]["torsion"][0].as_f64().unwrap()]);
}

#[test]
fn compare_reports_checklist() {
    let (code, doc) = fbc_json(&["compare", "--map1", PSI, "--map2", "a->b; b->a; c->c"]);
    assert_eq!(code, 0);
    let checks = doc["results"]["checks"].as_array().unwrap();
    let names: Vec<&str> = checks.iter().map(|c| c["check"].as_str().unwrap()).collect();
    assert_eq!(names, ["rank", "h1", "stretch", "fingerprint"]);
    assert_eq!(checks[3]["first_difference"]["group"], "Z/2");
    assert_eq!(checks[3]["first_difference"]["left"]["homs"], 2);
    assert_eq!(checks[3]["first_difference"]["right"]["homs"], 8);
    assert_eq!(doc["results"]["distinguished"], true);

    let (_, doc) = fbc_json(&["compare", "--map1", PSI, "--map2", "a->Cb; b->a; c->b"]);
    assert_eq!(doc["results"]["distinguished"], false);
    let (_, doc) = fbc_json(&["compare", "--presentation1", "gens: a t; rel: Tata", "--map2", "a->A"]);
    assert_eq!(doc["results"]["distinguished"], false);
}

#[test]
fn environment_and_cache() {
    let dir = std::env::temp_dir().join(format!("fbc-cli-env-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cache = dir.join("cache.tsv");
    let run = |extra: &[&str]| {
        let out = Command::new(env!("CARGO_BIN_EXE_fbc"))
            .args(["fingerprint"])
            .args(extra)
            .env("FBC_MAP", PSI)
            .env("FBC_JSON", "true")
            .env("FBC_CACHE_FILE", &cache)
            .output()
            .unwrap();
        serde_json::from_slice::<Value>(&out.stdout).unwrap()
    };
    let first = run(&[]);
    assert_eq!(first["diagnostics"]["cache_hits"], 0);
    let second = run(&[]);
    assert_eq!(second["diagnostics"]["cache_hits"], 18);
    assert_eq!(first["results"], second["results"]);
    assert_eq!(run(&["--no-cache"])["diagnostics"]["cache_hits"], 0);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn scientific_length_cap_and_workers() {
    let (code, doc) = fbc_json(&["stretch", "--map", PSI, "--length-cap", "1e6", "--workers", "2"]);
    assert_eq!(code, 0);
    assert_eq!(doc["inputs"]["length_cap"], 1_000_000);
    assert_eq!(fbc(&["stretch", "--map", PSI, "--length-cap", "1.5"]).0, 1);
}

use std::path::PathBuf;
use std::process::{Command, Output};
use std::sync::Arc;

use raag_core::oracle::RewriteOracle;
use raag_core::presentation::{standard_graph, StandardKind};
use raag_core::words::{Letter, Word};
use serde_json::Value;

fn raag(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_raag"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

/// JSON report with the timing key removed.
fn report(args: &[&str]) -> (Value, Option<i32>) {
    let mut full = vec!["--json"];
    full.extend_from_slice(args);
    let out = raag(&full);
    let mut v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{e}: {}{}", stdout(&out), stderr(&out)));
    assert!(v.as_object_mut().unwrap().remove("timing").is_some());
    (v, out.status.code())
}

fn golden(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn goldens() {
    let cases: &[(&str, &[&str], i32)] = &[
        (
            "normalize_path_3.json",
            &[
                "normalize",
                "--graph",
                "builtin:path_3",
                "--word",
                "a c a^-1 b",
            ],
            0,
        ),
        (
            "power_free_2.json",
            &[
                "power",
                "--graph",
                "builtin:free_2",
                "--word",
                "a b a^-1",
                "--k",
                "2",
            ],
            0,
        ),
        (
            "root_free_2.json",
            &[
                "root",
                "--graph",
                "builtin:free_2",
                "--word",
                "a^2 b^2 a^-2",
                "--k",
                "2",
            ],
            0,
        ),
        (
            "axioms_coxeter_K2.json",
            &[
                "axioms",
                "--graph",
                "builtin:coxeter_K2",
                "--lg-max",
                "2",
                "--k-max",
                "3",
            ],
            1,
        ),
        (
            "chain_free_1.json",
            &[
                "chain",
                "--graph",
                "builtin:free_1",
                "--g",
                "a,a",
                "--eta",
                "6,7",
            ],
            0,
        ),
        ("demo_coxeter.json", &["demo-coxeter"], 0),
    ];
    for (file, args, code) in cases {
        let (v, rc) = report(args);
        assert_eq!(v, golden(file), "{file}");
        assert_eq!(rc, Some(*code), "{file}");
    }
}

fn text_field(args: &[&str], field: &str) -> String {
    let out = raag(args);
    assert!(out.status.success(), "{}", stderr(&out));
    stdout(&out)
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{field}: ")).map(str::to_string))
        .unwrap_or_else(|| panic!("no `{field}` in {}", stdout(&out)))
}

#[test]
fn normalize_examples() {
    let n = |g: &str, w: &str| text_field(&["normalize", "--graph", g, "--word", w], "canonical");
    assert_eq!(n("builtin:free_2", "a a^-1"), "e");
    assert_eq!(n("builtin:abelian_2", "b a"), "a b");
}

#[test]
fn normalize_matches_oracle_on_path_3() {
    let p3 = Arc::new(standard_graph(StandardKind::Path, 3).unwrap());
    let text = "c b^-1 a c^-1 b a";
    let (v, _) = report(&["normalize", "--graph", "builtin:path_3", "--word", text]);
    let letters: Vec<Letter> = Word::parse(text, &p3)
        .unwrap()
        .syllables()
        .iter()
        .map(|s| (s.vertex, s.exponent.signum() as i8))
        .collect();
    let expected = RewriteOracle::new(p3.clone()).canonical_letters(&letters);
    assert_eq!(
        v["outputs"]["canonical"],
        Word::from_letters(p3, &expected).to_string()
    );
}

#[test]
fn power_examples() {
    let (v, _) = report(&[
        "power",
        "--graph",
        "builtin:coxeter_K2",
        "--word",
        "a b",
        "--k",
        "2",
    ]);
    assert_eq!(v["outputs"]["power"], "");
    assert_eq!(v["outputs"]["predicted_lg"], Value::Null);

    let (v, rc) = report(&[
        "power",
        "--graph",
        "builtin:free_2",
        "--word",
        "a b a^-1",
        "--k",
        "2",
    ]);
    assert_eq!(rc, Some(0));
    assert_eq!(v["outputs"]["lg"], 4);
    assert_eq!(v["outputs"]["predicted_lg"], 4);
    assert_eq!(v["outputs"]["agreement"], true);
}

#[test]
fn root_examples() {
    assert_eq!(
        text_field(
            &[
                "root",
                "--graph",
                "builtin:free_2",
                "--word",
                "a",
                "--k",
                "2"
            ],
            "root"
        ),
        "none"
    );
    let out = raag(&[
        "root",
        "--graph",
        "builtin:coxeter_K2",
        "--word",
        "a",
        "--k",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("torsion"));
}

#[test]
fn axioms_exit_codes() {
    let (v, rc) = report(&[
        "axioms",
        "--graph",
        "builtin:free_2",
        "--lg-max",
        "3",
        "--k-max",
        "4",
    ]);
    assert_eq!(rc, Some(0));
    assert_eq!(v["witnesses"], Value::Array(vec![]));

    let (v, rc) = report(&[
        "axioms",
        "--graph",
        "builtin:coxeter_K2",
        "--lg-max",
        "2",
        "--k-max",
        "3",
    ]);
    assert_eq!(rc, Some(1));
    let ab3 = serde_json::json!({ "condition": "ii", "x": "a b", "k": 3, "y": "a b" });
    assert!(v["witnesses"].as_array().unwrap().contains(&ab3));

    let dir = tempdir("empty_graph");
    let path = dir.join("empty.json");
    std::fs::write(&path, r#"{"vertices":[],"edges":[]}"#).unwrap();
    let out = raag(&[
        "axioms",
        "--graph",
        path.to_str().unwrap(),
        "--lg-max",
        "3",
        "--k-max",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn chain_examples() {
    let (v, _) = report(&[
        "chain",
        "--graph",
        "builtin:free_2",
        "--g",
        "a,a",
        "--eta",
        "6,7",
    ]);
    assert_eq!(v["outputs"]["trace"]["steps"].as_array().unwrap().len(), 1);
    assert_eq!(v["outputs"]["trace"]["final_outcome"], "unsolvable");
    assert_eq!(v["outputs"]["tables"]["f2"], serde_json::json!([1, 3, 6]));

    let (v, _) = report(&[
        "chain",
        "--graph",
        "builtin:free_1",
        "--g",
        "a^4",
        "--eta",
        "2",
    ]);
    let step = &v["outputs"]["trace"]["steps"][0];
    assert_eq!(step["outcome"], "extended");
    assert_eq!(step["next"], "a^2");

    let out = raag(&[
        "chain",
        "--graph",
        "builtin:free_1",
        "--g",
        "a,a",
        "--eta",
        "3,3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("strictly increasing"));
}

#[test]
fn selftest_is_repeatable() {
    let (a, rc) = report(&["selftest", "--seed", "1"]);
    assert_eq!(rc, Some(0));
    assert_eq!(a["outputs"]["passed"], true);
    let (b, _) = report(&["selftest", "--seed", "1"]);
    assert_eq!(a, b);
}

#[test]
fn errors_name_their_source() {
    let out = raag(&["normalize", "--graph", "builtin:free_2", "--word", "a q"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("column 2"), "{}", stderr(&out));

    let dir = tempdir("bad_corpus");
    let bad = dir.join("broken.json");
    std::fs::write(&bad, r#"{"vertices":[{"name":"a","order":3}]}"#).unwrap();
    std::fs::write(
        dir.join("fine.json"),
        r#"{"vertices":[{"name":"a","order":"inf"}]}"#,
    )
    .unwrap();
    let out = raag(&["selftest", "--corpus", dir.to_str().unwrap()]);
    assert_ne!(out.status.code(), Some(0));
    assert!(
        stderr(&out).contains(bad.to_str().unwrap()),
        "{}",
        stderr(&out)
    );

    let out = raag(&["normalize", "--graph", "builtin:nonesuch", "--word", "a"]);
    assert!(stderr(&out).contains("nonesuch"));
}

fn tempdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("raag-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

use std::fs;
use std::path::PathBuf;
use std::process::Command;

use lauprod::corpus::{specs_up_to_dim, triple_corpus};
use lauprod::format::serialize_algebra;
use lauprod::lab::{pairs_over, run_lab, shipped_corpus};

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn lauprod(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_lauprod"))
        .args(args)
        .output()
        .unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

#[test]
fn describe_shipped_files() {
    let r = lauprod(&["describe", &data("pointwise_2.json")]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r
        .stdout
        .contains("dim: 2\nunital: true\ncommutative: true\ncenter_dim: 2\nradical_dim: 0"));

    let r = lauprod(&["describe", &data("nonassoc_2.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("E_NONASSOCIATIVE"), "{}", r.stderr);
    assert!(r.stderr.contains("(e1, e1, e1)"), "{}", r.stderr);

    let r = lauprod(&["--unchecked", "describe", &data("nonassoc_2.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("associative: false, (e1, e1, e1)"));
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad_scalar = dir.path().join("bad.json");
    fs::write(
        &bad_scalar,
        r#"{"name":"b","dim":1,"basis":["e"],"table":[[["1/0"]]]}"#,
    )
    .unwrap();
    let r = lauprod(&["describe", bad_scalar.to_str().unwrap()]);
    assert_eq!(r.code, 2);
    assert!(
        r.stderr.contains("E_SCALAR") && r.stderr.contains("zero denominator at offset 2"),
        "{}",
        r.stderr
    );

    for args in [
        &["describe", "nosuch:3"][..],
        &["describe", "poly:99"],
        &["frobnicate"],
        &["collapse", "poly:2", "pointwise:2"],
        &["collapse", "poly:2", "matrix:2", "--hom", "inclusion"],
        &["embed", "poly:2", "pointwise:2", "--char", "7"],
        &["lab", "--predicate", "arens"],
        &["lab", "--predicate", "unital", "--case", "h9:zero:1"],
    ] {
        assert_eq!(lauprod(args).code, 2, "{args:?}");
    }
}

#[test]
fn construct_writes_canonical_files() {
    let dir = tempfile::tempdir().unwrap();
    for s in specs_up_to_dim(3) {
        let out = dir
            .path()
            .join(format!("{}.json", s.to_string().replace(':', "_")));
        let r = lauprod(&[
            "construct",
            "dsum",
            &s.to_string(),
            "pointwise:1",
            "-o",
            out.to_str().unwrap(),
        ]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        let bytes = fs::read_to_string(&out).unwrap();
        let r = lauprod(&["construct", "dsum", out.to_str().unwrap(), "zero:1"]);
        assert_eq!(r.code, 0, "{}", r.stderr);
        // catalog and file operands give the same algebra and the same bytes
        let direct = lauprod(&["construct", "dsum", &s.to_string(), "pointwise:1"]);
        assert_eq!(direct.stdout, bytes);
    }
    let a = "poly:3"
        .parse::<lauprod::CatalogSpec>()
        .unwrap()
        .algebra()
        .unwrap();
    let unit = lauprod(&["construct", "unitize", "poly:3"]);
    let expected = serialize_algebra(&lauprod::unitization(&a).unwrap().0);
    assert_eq!(unit.stdout, expected);

    let lau = lauprod(&[
        "construct",
        "lau",
        "zero:1",
        "pointwise:1",
        "--char",
        "char:0",
    ]);
    assert_eq!(
        lau.stdout,
        "{\"name\":\"lau(zero:1,pointwise:1)\",\"dim\":2,\"basis\":[\"x\",\"e1\"],\"table\":[[[\"0\",\"0\"],[\"1\",\"0\"]],[[\"1\",\"0\"],[\"0\",\"1\"]]]}\n"
    );
    let gen = lauprod(&[
        "construct",
        "gen-lau",
        "poly:2",
        "pointwise:2",
        "--hom",
        "unital:0",
    ]);
    assert_eq!(gen.code, 0, "{}", gen.stderr);
}

#[test]
fn non_homomorphism_is_a_check_failure() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.json");
    // e1 -> e12 is linear but not multiplicative
    fs::write(
        &t,
        r#"{"domain":"pointwise:1","codomain":"matrix:2","matrix":[["0"],["1"],["0"],["0"]]}"#,
    )
    .unwrap();
    let r = lauprod(&[
        "construct",
        "gen-lau",
        "matrix:2",
        "pointwise:1",
        "--hom",
        t.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 1);
    assert!(
        r.stderr.contains("not a homomorphism: (e1, e1)"),
        "{}",
        r.stderr
    );
    let r = lauprod(&[
        "collapse",
        "matrix:2",
        "pointwise:1",
        "--hom",
        t.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 1);
}

#[test]
fn collapse_exits_zero_on_verified_triples() {
    let triples = triple_corpus(2).unwrap();
    assert!(!triples.is_empty());
    for (spec, _) in &triples {
        let r = lauprod(&[
            "collapse",
            &spec.target.to_string(),
            &spec.source.to_string(),
            "--hom",
            &spec.strategy_string(),
            "--samples",
            "20",
            "--seed",
            "7",
        ]);
        assert_eq!(r.code, 0, "{spec}: {}{}", r.stdout, r.stderr);
        assert!(r.stdout.contains("verdict: isomorphic to the direct sum"));
    }
}

#[test]
fn verify_iso_with_map_files() {
    let dir = tempfile::tempdir().unwrap();
    let swap = dir.path().join("swap.json");
    fs::write(
        &swap,
        r#"{"domain":"pointwise:2","codomain":"pointwise:2","matrix":[["0","1"],["1","0"]]}"#,
    )
    .unwrap();
    let r = lauprod(&[
        "verify-iso",
        "pointwise:2",
        "pointwise:2",
        "--map",
        swap.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(
        r.stdout.contains("determinant -1; isomorphism: pass"),
        "{}",
        r.stdout
    );

    let fold = dir.path().join("fold.json");
    fs::write(
        &fold,
        r#"{"domain":"pointwise:2","codomain":"pointwise:2","matrix":[["1","1"],["0","0"]]}"#,
    )
    .unwrap();
    let r = lauprod(&[
        "verify-iso",
        "pointwise:2",
        "pointwise:2",
        "--map",
        fold.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("isomorphism: FAIL"));

    let wrong = dir.path().join("wrong.json");
    fs::write(
        &wrong,
        r#"{"domain":"poly:2","codomain":"pointwise:2","matrix":[["1","0"],["0","1"]]}"#,
    )
    .unwrap();
    let r = lauprod(&[
        "verify-iso",
        "pointwise:2",
        "pointwise:2",
        "--map",
        wrong.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("E_NAME"));
}

#[test]
fn embed_reports_codimension_one() {
    let r = lauprod(&["embed", "pointwise:1", "pointwise:1", "--char", "0"]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.contains("codimension: 1\nsubalgebra: true"));
    assert!(r.stdout.contains("ideal: false"));

    let r = lauprod(&[
        "embed",
        "zero:1",
        &data("pointwise_2.json"),
        "--char",
        &data("char_pointwise_2_second.json"),
    ]);
    assert_eq!(r.code, 0, "{}", r.stderr);
    assert!(r.stdout.contains("codimension: 1"));
}

#[test]
fn norm_check_is_seeded() {
    let a = lauprod(&["norm-check", "cyclic:3", "--samples", "50", "--seed", "3"]);
    let b = lauprod(&["norm-check", "cyclic:3", "--samples", "50", "--seed", "3"]);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.contains("samples: 50"));
}

#[test]
fn lab_failures_replay() {
    let corpus = shipped_corpus();
    let pairs = pairs_over(&corpus).unwrap();
    for predicate in ["commutative", "semisimple", "unital"] {
        let report = run_lab(predicate, &corpus, &pairs).unwrap();
        let r = lauprod(&["lab", "--predicate", predicate]);
        assert_eq!(r.code, if report.failure_count() == 0 { 0 } else { 1 });
        assert_eq!(r.stdout.trim_end(), report.to_string());
        for (_, section) in report.sections() {
            for failure in &section.failures {
                assert!(r.stdout.contains(&failure.replay));
                let args: Vec<&str> = failure.replay.split_whitespace().skip(1).collect();
                let replay = lauprod(&args);
                assert_eq!(replay.code, 1);
                assert!(replay.stdout.contains(&failure.detail));
            }
        }
    }
    let r = lauprod(&["lab", "--predicate", "semisimple", "--case", "h3:diagonal"]);
    assert_eq!(r.code, 0);
}

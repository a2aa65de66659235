mod common;

use std::fs;

use common::{fixture, golden_parser, golden_treebank, run_golden, stderr, udconsist};
use udconsist::manifest::RunManifest;

fn s(p: &std::path::Path) -> String {
    p.display().to_string()
}

#[test]
fn missing_treebank_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = udconsist(&[
        "evaluate",
        "--treebank",
        "train=/no/such/treebank.conllu",
        "--parser-cmd",
        &golden_parser(""),
        "--out",
        &s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(
        stderr(&o).contains("/no/such/treebank.conllu"),
        "{}",
        stderr(&o)
    );
}

#[test]
fn missing_parser_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let tb = s(&golden_treebank());
    let o = udconsist(&["evaluate", "--treebank", &tb, "--out", &s(dir.path())]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--parser-cmd"));
}

#[test]
fn bad_settings_are_config_errors() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_golden(&dir.path().join("a"), &["--lo", "3000"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run_golden(&dir.path().join("b"), &["--lambda", "0"]);
    assert_eq!(o.status.code(), Some(2));
    let cfg = dir.path().join("bad.cfg");
    fs::write(&cfg, "no_such_key = 1\n").unwrap();
    let o = run_golden(&dir.path().join("c"), &["--config", &s(&cfg)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no_such_key"));
}

#[test]
fn existing_report_needs_force() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run_golden(dir.path(), &[]).status.code(), Some(0));
    let o = run_golden(dir.path(), &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("--force"));
    assert_eq!(run_golden(dir.path(), &["--force"]).status.code(), Some(0));
}

#[test]
fn outputs_and_intermediates() {
    let dir = tempfile::tempdir().unwrap();
    let o = run_golden(dir.path(), &[]);
    assert!(o.status.success(), "{}", stderr(&o));
    for f in ["manifest.json", "report.json", "report.txt", "clusters.txt"] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    // six year-bearing sentences -> six batches of 1 + 5 lines
    for b in 0..6 {
        let input =
            fs::read_to_string(dir.path().join(format!("batches/train/{b:05}.txt"))).unwrap();
        assert_eq!(input.lines().count(), 6);
        assert!(dir
            .path()
            .join(format!("raw/train/{b:05}.conllu"))
            .is_file());
    }
    let m = RunManifest::read(&dir.path().join("manifest.json")).unwrap();
    assert_eq!(m.command, "evaluate");
    assert_eq!(m.sampling.eval_count, 5);
    assert_eq!(m.eval_numbers.len(), 5);
    assert!(m.parser.is_some());
}

#[test]
fn config_file_then_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.cfg");
    fs::write(
        &cfg,
        "# five variants, two workers\neval_count = 3\nworkers = 2\n",
    )
    .unwrap();
    let tb = format!("train={}", golden_treebank().display());
    let parser = golden_parser("");
    let out = dir.path().join("out");
    let o = udconsist(&[
        "evaluate",
        "--config",
        &s(&cfg),
        "--eval-count",
        "5",
        "--treebank",
        &tb,
        "--parser-cmd",
        &parser,
        "--out",
        &s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let m = RunManifest::read(&out.join("manifest.json")).unwrap();
    assert_eq!((m.sampling.eval_count, m.workers), (5, 2));
}

#[test]
fn replay_from_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("first");
    assert!(run_golden(&first, &["--workers", "3"]).status.success());
    let second = dir.path().join("second");
    let o = udconsist(&[
        "evaluate",
        "--replay",
        &s(&first.join("manifest.json")),
        "--out",
        &s(&second),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read(first.join("report.json")).unwrap(),
        fs::read(second.join("report.json")).unwrap()
    );
}

#[test]
fn reuse_raw_output() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_golden(dir.path(), &[]).status.success());
    let before = fs::read(dir.path().join("report.json")).unwrap();
    // a parser that would fail on every call: only cached output can succeed
    let tb = format!("train={}", golden_treebank().display());
    let parser = golden_parser("--fail broken");
    let o = udconsist(&[
        "evaluate",
        "--treebank",
        &tb,
        "--parser-cmd",
        &parser,
        "--eval-count",
        "5",
        "--out",
        &s(dir.path()),
        "--force",
        "--reuse-raw",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(fs::read(dir.path().join("report.json")).unwrap(), before);
}

#[test]
fn one_failed_batch_does_not_fail_the_run() {
    let dir = tempfile::tempdir().unwrap();
    let tb = format!("train={}", golden_treebank().display());
    let parser = golden_parser("--fail-on 'Since '");
    let o = udconsist(&[
        "evaluate",
        "--treebank",
        &tb,
        "--parser-cmd",
        &parser,
        "--eval-count",
        "5",
        "--out",
        &s(dir.path()),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stderr(&o).contains("g05"),
        "batch provenance missing: {}",
        stderr(&o)
    );
    let r: serde_json::Value =
        serde_json::from_slice(&fs::read(dir.path().join("report.json")).unwrap()).unwrap();
    let split = &r["splits"][0];
    assert_eq!(split["failures"].as_array().unwrap().len(), 1);
    assert_eq!(split["failures"][0]["sent_id"], "g05");
    assert_eq!(split["batches"].as_array().unwrap().len(), 5);
}

#[test]
fn all_batches_failing_is_a_runtime_error() {
    let dir = tempfile::tempdir().unwrap();
    let tb = format!("train={}", golden_treebank().display());
    let parser = golden_parser("--fail 'no model'");
    let o = udconsist(&[
        "evaluate",
        "--treebank",
        &tb,
        "--parser-cmd",
        &parser,
        "--eval-count",
        "5",
        "--out",
        &s(dir.path()),
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("no model"));
}

#[test]
fn report_subcommand_rerenders() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run_golden(dir.path(), &[]).status.success());
    let o = udconsist(&["report", &s(&dir.path().join("report.json"))]);
    assert!(o.status.success());
    assert_eq!(o.stdout, fs::read(dir.path().join("report.txt")).unwrap());
    let o = udconsist(&["report", "--clusters", &s(&dir.path().join("report.json"))]);
    assert_eq!(o.stdout, fs::read(dir.path().join("clusters.txt")).unwrap());
    let o = udconsist(&["report", "/no/report.json"]);
    assert_eq!(o.status.code(), Some(2));
}

fn sentences(path: &std::path::Path) -> usize {
    fs::read_to_string(path)
        .unwrap()
        .split("\n\n")
        .filter(|b| !b.trim().is_empty())
        .count()
}

#[test]
fn augment_numeral_adds_twenty_per_year_sentence() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("augment/three_years.conllu");
    let out = dir.path().join("aug.conllu");
    let o = udconsist(&["augment", "--treebank", &s(&input), "--out", &s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(sentences(&out), sentences(&input) + 60);
    let m = RunManifest::read(&dir.path().join("aug.conllu.manifest.json")).unwrap();
    assert_eq!(m.mode.as_deref(), Some("numeral"));
    assert_eq!(m.train_numbers.as_ref().map(Vec::len), Some(20));
    let text = fs::read_to_string(&out).unwrap();
    assert!(text.contains("# sent_id = g05-aug20\n"));
}

#[test]
fn augment_token_keeps_size() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("augment/three_years.conllu");
    let out = dir.path().join("tok.conllu");
    let o = udconsist(&[
        "augment",
        "--mode",
        "token",
        "--treebank",
        &s(&input),
        "--out",
        &s(&out),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(sentences(&out), sentences(&input));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.matches("\tNNNN\tNNNN\t").count(), 3);
    assert!(text.contains("# text = Since NNNN ."));
    let m = RunManifest::read(&dir.path().join("tok.conllu.manifest.json")).unwrap();
    assert_eq!(m.token.as_deref(), Some("NNNN"));

    let out2 = dir.path().join("tok2.conllu");
    let o = udconsist(&[
        "augment",
        "--mode",
        "token",
        "--token",
        "YEAR",
        "--treebank",
        &s(&input),
        "--out",
        &s(&out2),
    ]);
    assert!(o.status.success());
    assert!(fs::read_to_string(&out2)
        .unwrap()
        .contains("# text = Since YEAR ."));
    let o = udconsist(&[
        "augment",
        "--mode",
        "token",
        "--token",
        "TWO WORDS",
        "--treebank",
        &s(&input),
        "--out",
        &s(&dir.path().join("bad.conllu")),
    ]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn augment_refuses_to_overwrite() {
    let dir = tempfile::tempdir().unwrap();
    let input = fixture("augment/three_years.conllu");
    let out = dir.path().join("aug.conllu");
    fs::write(&out, "keep me").unwrap();
    let o = udconsist(&["augment", "--treebank", &s(&input), "--out", &s(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(fs::read_to_string(&out).unwrap(), "keep me");
    let o = udconsist(&[
        "augment",
        "--treebank",
        &s(&input),
        "--out",
        &s(&out),
        "--force",
    ]);
    assert!(o.status.success());
}

#[test]
fn augment_missing_input() {
    let dir = tempfile::tempdir().unwrap();
    let o = udconsist(&[
        "augment",
        "--treebank",
        "/no/tb.conllu",
        "--out",
        &s(&dir.path().join("x")),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("/no/tb.conllu"));
}

fn kernel_lines(args: &[&str]) -> (Option<i32>, Vec<(String, f64)>) {
    let mut full = vec!["kernel"];
    full.extend_from_slice(args);
    let o = udconsist(&full);
    let values = String::from_utf8_lossy(&o.stdout)
        .lines()
        .filter_map(|l| l.split_once(" = "))
        .map(|(k, v)| (k.to_string(), v.parse().unwrap()))
        .collect();
    (o.status.code(), values)
}

#[test]
fn kernel_identical_and_disjoint() {
    let tb = s(&golden_treebank());
    let (code, v) = kernel_lines(&[&format!("{tb}:3"), &format!("{tb}:3")]);
    assert_eq!(code, Some(0));
    assert_eq!(v[1].0, "NCPTK");
    assert!((v[1].1 - 1.0).abs() <= 1e-12);

    let (code, v) = kernel_lines(&["(a (b c))", "(x (y z))"]);
    assert_eq!(code, Some(0));
    assert_eq!(v, vec![("K".into(), 0.0), ("NCPTK".into(), 0.0)]);
}

#[test]
fn kernel_oracle_agrees_on_fixture_pair() {
    let tb = s(&golden_treebank());
    // g07 "Hello !" and g05 "Since 1999 ." are small enough for the oracle
    let (code, v) = kernel_lines(&["--oracle", &format!("{tb}:7"), &format!("{tb}:5")]);
    assert_eq!(code, Some(0));
    let k = v.iter().find(|(n, _)| n == "K").unwrap().1;
    let o = v.iter().find(|(n, _)| n == "oracle K").unwrap().1;
    assert!(k > 0.0);
    assert!((k - o).abs() <= 1e-12, "{k} vs {o}");

    // first two sentences of one file when the second argument is omitted
    let (code, v) = kernel_lines(&[&fixture("roundtrip/mwt.conllu").display().to_string()]);
    assert_eq!(code, Some(0));
    assert!(v[1].1 > 0.0 && v[1].1 < 1.0);
}

#[test]
fn kernel_parse_failures() {
    assert_eq!(kernel_lines(&["(a (b", "(a)"]).0, Some(2));
    assert_eq!(kernel_lines(&["/no/file.conllu", "(a)"]).0, Some(2));
    let tb = s(&golden_treebank());
    assert_eq!(kernel_lines(&[&format!("{tb}:99"), "(a)"]).0, Some(2));
    assert_eq!(kernel_lines(&["--lambda", "2", "(a)", "(a)"]).0, Some(2));
    // 18 nodes is past the oracle limit
    let big = "(r a b c d e f g h i j k l m n o p q)";
    assert_eq!(kernel_lines(&["--oracle", big, big]).0, Some(2));
}

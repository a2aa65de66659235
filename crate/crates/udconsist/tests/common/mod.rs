#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub const UDCONSIST: &str = env!("CARGO_BIN_EXE_udconsist");
pub const MOCK: &str = env!("CARGO_BIN_EXE_mock-parser");

pub fn fixture(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(rel)
}

pub fn golden_treebank() -> PathBuf {
    fixture("golden/treebank.conllu")
}

/// Mock parser command line answering from the golden table.
pub fn golden_parser(extra: &str) -> String {
    format!(
        "{} --table {} {extra}",
        shell_quote(MOCK),
        shell_quote(&fixture("golden/mock_table.conllu").display().to_string())
    )
}

pub fn shell_quote(s: &str) -> String {
    format!("'{}'", s.replace('\'', r"'\''"))
}

pub fn udconsist(args: &[&str]) -> Output {
    Command::new(UDCONSIST)
        .args(args)
        .env("RUST_LOG", "error")
        .output()
        .expect("udconsist runs")
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

/// `evaluate` on the golden fixture with five variants per batch.
pub fn run_golden(out: &Path, extra: &[&str]) -> Output {
    let tb = format!("train={}", golden_treebank().display());
    let parser = golden_parser("");
    let out = out.display().to_string();
    let mut args = vec![
        "evaluate",
        "--treebank",
        &tb,
        "--parser-cmd",
        &parser,
        "--eval-count",
        "5",
        "--out",
        &out,
    ];
    args.extend_from_slice(extra);
    udconsist(&args)
}

/// Every `.conllu` file under the fixture directory.
pub fn conllu_fixtures() -> Vec<PathBuf> {
    let mut out = Vec::new();
    let mut stack = vec![fixture("")];
    while let Some(dir) = stack.pop() {
        for e in std::fs::read_dir(&dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else if p.extension().is_some_and(|x| x == "conllu") {
                out.push(p);
            }
        }
    }
    out.sort();
    out
}

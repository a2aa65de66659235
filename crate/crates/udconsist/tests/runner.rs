mod common;

use std::time::Instant;

use common::{fixture, shell_quote, MOCK};
use udconsist::core::{check_segmentation, SegStatus};
use udconsist::runner::{invoke, run_parser, InputMode, OutputMode, ParserSpec, RunError};

fn table_spec(extra: &str, timeout: f64) -> ParserSpec {
    let cmd = format!(
        "{} --table {} {extra}",
        shell_quote(MOCK),
        shell_quote(&fixture("golden/mock_table.conllu").display().to_string())
    );
    ParserSpec::from_command_line(&cmd, timeout).unwrap()
}

fn lines(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn one_sentence_per_line() {
    let input = lines(&[
        "She was born in 1950 .",
        "She was born in 1200 .",
        "Since 1400 .",
    ]);
    let groups = run_parser(&table_spec("", 30.0), &input).unwrap();
    assert_eq!(groups.len(), 3);
    for (g, line) in groups.iter().zip(&input) {
        assert_eq!(check_segmentation(g), SegStatus::Ok);
        assert_eq!(g[0].text(), Some(line.as_str()));
    }
}

#[test]
fn split_and_missing_lines() {
    let spec = table_spec("", 30.0);
    let input = lines(&["x", "y", "Rain fell in 1905 . Snow came ."]);
    let groups = run_parser(&spec, &input).unwrap();
    assert_eq!(
        groups.iter().map(Vec::len).collect::<Vec<_>>(),
        vec![0, 0, 1]
    );

    // the table splits this family only when it arrives on line 1
    let input = lines(&["Rain fell in 1905 . Snow came .", "x"]);
    let groups = run_parser(&spec, &input).unwrap();
    assert_eq!(check_segmentation(&groups[0]), SegStatus::Split(2));
    assert_eq!(check_segmentation(&groups[1]), SegStatus::Empty);
}

#[test]
fn nonzero_exit_carries_stderr() {
    let spec = ParserSpec::from_command_line(
        &format!("{} --fail 'model exploded'", shell_quote(MOCK)),
        30.0,
    )
    .unwrap();
    match run_parser(&spec, &lines(&["a"])) {
        Err(RunError::Exit { stderr, .. }) => {
            assert!(stderr.contains("model exploded"), "{stderr}")
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn timeout_kills_the_parser() {
    let spec = table_spec("--sleep-ms 20000", 0.5);
    let t = Instant::now();
    assert!(matches!(
        run_parser(&spec, &lines(&["a"])),
        Err(RunError::Timeout { .. })
    ));
    assert!(t.elapsed().as_secs() < 10);
}

#[test]
fn missing_program() {
    let spec = ParserSpec::from_command_line("/nonexistent/parser-binary", 5.0).unwrap();
    assert!(matches!(
        run_parser(&spec, &lines(&["a"])),
        Err(RunError::Spawn { .. })
    ));
}

#[test]
fn file_modes() {
    let spec = table_spec("--input {input} --output {output}", 30.0);
    assert_eq!(spec.input_mode, InputMode::File);
    assert_eq!(spec.output_mode, OutputMode::File);
    let groups = run_parser(&spec, &lines(&["Since 1200 ."])).unwrap();
    assert_eq!(groups[0][0].tokens[1].form, "1200");
}

#[test]
fn model_version_header_is_tolerated() {
    let spec = table_spec("--model-version test-1", 30.0);
    let raw = invoke(&spec, &lines(&["Since 1200 ."])).unwrap();
    assert!(raw.starts_with("# model_version = test-1\n\n"));
    assert_eq!(
        run_parser(&spec, &lines(&["Since 1200 ."])).unwrap()[0].len(),
        1
    );
}

#[test]
fn repeated_runs_agree() {
    let spec = table_spec("", 30.0);
    let input = lines(&["Since 1200 .", "Since 1321 .", "She was born in 1950 ."]);
    assert_eq!(
        invoke(&spec, &input).unwrap(),
        invoke(&spec, &input).unwrap()
    );
}

#[cfg(unix)]
#[test]
fn delivery_is_byte_identical() {
    let spec = ParserSpec::from_command_line("cat", 5.0).unwrap();
    let input = lines(&["  leading and trailing  ", "tab\there", "ünïcödé 1905 ."]);
    let mut want = input.join("\n");
    want.push('\n');
    assert_eq!(invoke(&spec, &input).unwrap(), want);
}

#[cfg(unix)]
#[test]
fn environment_is_passed() {
    let spec = ParserSpec::from_command_line("sh -c 'echo \"$UDX_PROBE\"'", 5.0)
        .unwrap()
        .with_env(&["UDX_PROBE=hello".to_string()])
        .unwrap();
    assert_eq!(invoke(&spec, &lines(&["a"])).unwrap(), "hello\n");
}

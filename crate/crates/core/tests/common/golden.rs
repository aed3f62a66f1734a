//! CLI golden cases: `golden/cli/cases.json` lists arguments and the exit
//! code, `golden/cli/<name>.stdout` holds the exact expected stdout.
//! Set `UPDATE_GOLDEN=1` to rewrite the stdout files.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use serde_json::Value;

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

pub struct CaseResult {
    pub name: String,
    pub problems: Vec<String>,
}

fn stdin_for(case: &Value) -> String {
    if let Some(text) = case["stdin"].as_str() {
        return text.to_string();
    }
    if let Some(file) = case["stdin_file"].as_str() {
        return std::fs::read_to_string(golden_dir().join("cli").join(file)).unwrap();
    }
    String::new()
}

pub fn run_case(case: &Value) -> CaseResult {
    let name = case["name"].as_str().unwrap().to_string();
    let args: Vec<&str> = case["args"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a.as_str().unwrap())
        .collect();
    let expected_code = case["code"].as_i64().unwrap() as i32;
    let mut child = Command::new(env!("CARGO_BIN_EXE_deltapoly"))
        .args(&args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(stdin_for(case).as_bytes())
        .unwrap();
    let out = child.wait_with_output().unwrap();
    let stdout = String::from_utf8(out.stdout).unwrap();
    let stderr = String::from_utf8(out.stderr).unwrap();

    let mut problems = Vec::new();
    let code = out.status.code().unwrap_or(-1);
    if code != expected_code {
        problems.push(format!("exit code {code}, expected {expected_code}; stderr: {stderr}"));
    }
    if expected_code != 0 && stderr.is_empty() && stdout.is_empty() {
        problems.push("no diagnostic".into());
    }
    let path = golden_dir().join("cli").join(format!("{name}.stdout"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &stdout).unwrap();
    }
    match std::fs::read_to_string(&path) {
        Ok(expected) if expected == stdout => {}
        Ok(_) => problems.push(format!("stdout differs from {}:\n{stdout}", path.display())),
        Err(_) => problems.push(format!("missing golden file {}", path.display())),
    }
    if stdout.trim_start().starts_with('{') {
        let v: Value = serde_json::from_str(&stdout).unwrap_or(Value::Null);
        let keys: Vec<&str> = v
            .as_object()
            .map(|o| o.keys().map(String::as_str).collect())
            .unwrap_or_default();
        let schema_ok = matches!(
            keys.as_slice(),
            ["command", "inputs", "result"] | ["command", "inputs", "result", "trace"]
        );
        if !schema_ok {
            problems.push(format!("envelope keys {keys:?}"));
        }
    }
    CaseResult { name, problems }
}

pub fn run_all() -> Vec<CaseResult> {
    let text = std::fs::read_to_string(golden_dir().join("cli/cases.json")).unwrap();
    let cases: Vec<Value> = serde_json::from_str(&text).unwrap();
    cases.iter().map(run_case).collect()
}

/// `(input, canonical)` pairs from `golden/corpus.tsv`.
pub fn parser_corpus() -> Vec<(String, String)> {
    std::fs::read_to_string(golden_dir().join("corpus.tsv"))
        .unwrap()
        .lines()
        .map(|l| {
            let (a, b) = l.split_once('\t').unwrap();
            (a.to_string(), b.to_string())
        })
        .collect()
}

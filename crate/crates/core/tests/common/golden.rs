//! The golden CLI corpus under `tests/golden`.

use std::fs;
use std::path::{Path, PathBuf};

use difftorsor::cli;

pub struct Case {
    pub name: String,
    pub args: Vec<String>,
}

pub fn golden_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

pub fn cases() -> Vec<Case> {
    let dir = golden_dir();
    let inputs = dir.join("inputs");
    let text = fs::read_to_string(dir.join("cases.txt")).expect("cases.txt");
    text.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (name, args) = l.split_once('|').expect("name | args");
            let args = args
                .split_whitespace()
                .map(|a| a.replace("{G}", inputs.to_str().expect("utf-8 path")))
                .collect();
            Case { name: name.trim().to_string(), args }
        })
        .collect()
}

/// Exit status and both streams, with the inputs directory written back as `{G}`.
pub fn render(out: &cli::Outcome) -> String {
    let inputs = golden_dir().join("inputs");
    let text = format!("exit: {}\n--- stdout\n{}--- stderr\n{}", out.code, out.stdout, out.stderr);
    text.replace(inputs.to_str().expect("utf-8 path"), "{G}")
}

pub fn run_in_process(case: &Case) -> String {
    let argv = std::iter::once("difftorsor".to_string()).chain(case.args.iter().cloned());
    render(&cli::run(argv))
}

pub fn run_binary(case: &Case) -> String {
    let out = std::process::Command::new(env!("CARGO_BIN_EXE_difftorsor"))
        .args(&case.args)
        .output()
        .expect("run the difftorsor binary");
    render(&cli::Outcome {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    })
}

pub fn expected_path(case: &Case) -> PathBuf {
    golden_dir().join("expected").join(format!("{}.out", case.name))
}

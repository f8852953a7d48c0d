#![allow(dead_code)]

use std::io::Write;
use std::process::Command;

use tempfile::NamedTempFile;

pub struct Output {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run(args: &[&str]) -> Output {
    let out = Command::new(env!("CARGO_BIN_EXE_conceptspace"))
        .args(args)
        .output()
        .expect("binary runs");
    Output {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(out.stderr).expect("utf-8 stderr"),
    }
}

pub fn space_file(json: &str) -> NamedTempFile {
    let mut f = NamedTempFile::new().expect("temp file");
    f.write_all(json.as_bytes()).expect("write");
    f
}

/// The bundled fixture with `from` replaced by `to`.
pub fn edited_fixture(from: &str, to: &str) -> String {
    let text = conceptspace::FRUIT_SPACE;
    assert!(text.contains(from), "fixture has no `{from}`");
    text.replacen(from, to, 1)
}

#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

pub fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

pub fn bench_path(rel: &str) -> PathBuf {
    root().join("benchmarks").join(rel)
}

pub fn bisynth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bisynth"))
        .args(args)
        .output()
        .expect("spawn bisynth")
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// Data rows of a bench CSV as field vectors, without header and footer.
pub fn rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

/// The CSV with the timing columns and footer timing fields blanked.
pub fn without_timing(csv: &str) -> String {
    csv.lines()
        .map(|l| {
            if l.starts_with('#') {
                l.split(' ')
                    .filter(|f| !f.contains("time_s"))
                    .collect::<Vec<_>>()
                    .join(" ")
            } else {
                let mut f: Vec<&str> = l.split(',').collect();
                f[2] = "";
                f[3] = "";
                f.join(",")
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

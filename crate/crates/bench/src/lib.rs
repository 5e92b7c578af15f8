//! Shared inputs for the benchmarks.

use std::path::{Path, PathBuf};

use bisynth::{parse_problem, SynthProblem};

pub fn benchmarks_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks")
}

/// Parses `benchmarks/<rel>`.
pub fn load(rel: &str) -> SynthProblem {
    let path = benchmarks_dir().join(rel);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|e| panic!("reading {}: {e}", path.display()));
    parse_problem(&text).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

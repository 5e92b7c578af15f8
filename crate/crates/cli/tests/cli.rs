mod common;

use common::*;

#[test]
fn solution_exit_code_and_output() {
    let o = bisynth(&["solve", bench_path("golden/overview.sl").to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let out = stdout(&o);
    assert!(
        out.starts_with("(define-fun f ((x (_ BitVec 4))) (_ BitVec 4)"),
        "{out}"
    );
}

#[test]
fn unrealizable_exit_code() {
    for f in ["unrealizable/and_with_x.sl", "golden/x_only.sl"] {
        let o = bisynth(&["solve", bench_path(f).to_str().unwrap()]);
        assert_eq!(code(&o), 10, "{f}");
        assert_eq!(stdout(&o).trim(), "infeasible");
    }
}

#[test]
fn timeout_exit_code() {
    let f = bench_path("hd/hd21_swap_adjacent_bits.sl");
    let o = bisynth(&[
        "solve",
        f.to_str().unwrap(),
        "--timeout",
        "0.01",
        "--pruning",
        "off",
    ]);
    assert_eq!(code(&o), 20);
}

#[test]
fn usage_and_parse_errors() {
    assert_eq!(code(&bisynth(&["solve", "--bogus"])), 2);
    assert_eq!(code(&bisynth(&["solve", "/nonexistent/problem.sl"])), 2);
    let bad = bench_path("invalid/bad.sl");
    let o = bisynth(&["solve", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
}

#[test]
fn empty_bench_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let o = bisynth(&["bench", dir.path().to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(
        stdout(&o),
        "id,outcome,time_s,analysis_s,size,dequeued,pruned,pool_max_n\n"
    );
}

#[test]
fn bench_rows_and_footer() {
    let dir = bench_path("golden");
    let o = bisynth(&["bench", dir.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(code(&o), 0);
    let csv = stdout(&o);
    let rows = rows(&csv);
    let ids: Vec<&str> = rows.iter().map(|r| r[0].as_str()).collect();
    assert_eq!(ids, ["negate_v1", "overview", "x_only"]);
    let solved = rows.iter().filter(|r| r[1] == "solution").count();
    let unreal = rows.iter().filter(|r| r[1] == "unrealizable").count();
    let footer = csv.lines().last().unwrap();
    assert!(
        footer.starts_with(&format!(
            "# problems=3 solution={solved} unrealizable={unreal} timeout=0 error=0"
        )),
        "{footer}"
    );
    for r in &rows {
        assert_eq!(r[4].is_empty(), r[1] != "solution");
    }
}

#[test]
fn stats_json_written() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("r.json");
    let f = bench_path("golden/negate_v1.sl");
    let o = bisynth(&[
        "solve",
        f.to_str().unwrap(),
        "--stats-json",
        json.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["id"], "negate_v1");
    assert_eq!(v["outcome"], "solution");
    assert!(v["solution"].as_str().unwrap().contains("define-fun"));
}

#[test]
fn solve_is_deterministic() {
    let f = bench_path("golden/overview.sl");
    let a = bisynth(&["solve", f.to_str().unwrap()]);
    let b = bisynth(&["solve", f.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn pruning_modes_agree_on_outcome() {
    for f in ["golden", "dnc"] {
        let dir = bench_path(f);
        let full = stdout(&bisynth(&[
            "bench",
            dir.to_str().unwrap(),
            "--timeout",
            "30",
        ]));
        let off = stdout(&bisynth(&[
            "bench",
            dir.to_str().unwrap(),
            "--timeout",
            "30",
            "--pruning",
            "off",
        ]));
        let kinds = |csv: &str| -> Vec<(String, String)> {
            rows(csv)
                .into_iter()
                .map(|r| (r[0].clone(), r[1].clone()))
                .collect()
        };
        assert_eq!(kinds(&full), kinds(&off), "{f}");
    }
}

#[test]
fn unrealizability_needs_pruning() {
    let f = bench_path("unrealizable/and_with_x.sl");
    let f = f.to_str().unwrap();
    assert_eq!(code(&bisynth(&["solve", f])), 10);
    assert_eq!(
        code(&bisynth(&[
            "solve",
            f,
            "--timeout",
            "1",
            "--pruning",
            "off"
        ])),
        20
    );
}

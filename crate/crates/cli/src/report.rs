use std::io::Write;

use anyhow::Result;
use bisynth::{Outcome, SearchStats};
use serde::{Deserialize, Serialize};

/// One problem's result, as written to the JSON and CSV sinks.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct RunReport {
    pub id: String,
    /// `solution`, `unrealizable`, `timeout` or `error`.
    pub outcome: String,
    pub time_s: f64,
    pub analysis_s: f64,
    pub size: Option<usize>,
    pub dequeued: u64,
    pub enqueued: u64,
    pub rejected: u64,
    pub pruned: u64,
    pub expanded: u64,
    pub pool_max_n: usize,
    pub pool_sizes: Vec<usize>,
    pub solution: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub dnc: Option<DncReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DncReport {
    pub cover_terms: usize,
    pub predicates: usize,
    pub tree_depth: usize,
}

impl RunReport {
    pub fn from_outcome(id: &str, outcome: &Outcome, solution: Option<String>) -> RunReport {
        let s: &SearchStats = outcome.stats();
        RunReport {
            id: id.to_string(),
            outcome: outcome.kind().to_string(),
            time_s: s.elapsed.as_secs_f64(),
            analysis_s: s.analysis_time.as_secs_f64(),
            size: outcome.solution().map(|t| t.size()),
            dequeued: s.dequeued,
            enqueued: s.enqueued,
            rejected: s.rejected,
            pruned: s.pruned,
            expanded: s.expanded,
            pool_max_n: s.final_n,
            pool_sizes: s.pool_sizes.clone(),
            solution,
            dnc: None,
            error: None,
        }
    }

    pub fn error(id: &str, message: String, time_s: f64) -> RunReport {
        RunReport {
            id: id.to_string(),
            outcome: "error".to_string(),
            time_s,
            analysis_s: 0.0,
            size: None,
            dequeued: 0,
            enqueued: 0,
            rejected: 0,
            pruned: 0,
            expanded: 0,
            pool_max_n: 0,
            pool_sizes: Vec::new(),
            solution: None,
            dnc: None,
            error: Some(message),
        }
    }
}

pub const CSV_HEADER: [&str; 8] = [
    "id",
    "outcome",
    "time_s",
    "analysis_s",
    "size",
    "dequeued",
    "pruned",
    "pool_max_n",
];

/// Writes one row per report in the given order, then an aggregate `#` footer
/// line unless `reports` is empty.
pub fn write_csv<W: Write>(out: W, reports: &[RunReport]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in reports {
        w.write_record([
            r.id.clone(),
            r.outcome.clone(),
            format!("{:.3}", r.time_s),
            format!("{:.3}", r.analysis_s),
            r.size.map(|s| s.to_string()).unwrap_or_default(),
            r.dequeued.to_string(),
            r.pruned.to_string(),
            r.pool_max_n.to_string(),
        ])?;
    }
    let mut out = w.into_inner().map_err(|e| anyhow::anyhow!("{e}"))?;
    if !reports.is_empty() {
        writeln!(out, "{}", footer(reports))?;
    }
    out.flush()?;
    Ok(())
}

/// `# problems=.. solution=.. unrealizable=.. timeout=.. error=.. mean_time_s=.. median_time_s=..`,
/// times over solved problems.
pub fn footer(reports: &[RunReport]) -> String {
    let count = |k: &str| reports.iter().filter(|r| r.outcome == k).count();
    let mut times: Vec<f64> = reports
        .iter()
        .filter(|r| r.outcome == "solution")
        .map(|r| r.time_s)
        .collect();
    times.sort_by(f64::total_cmp);
    let mean = if times.is_empty() {
        0.0
    } else {
        times.iter().sum::<f64>() / times.len() as f64
    };
    let median = match times.len() {
        0 => 0.0,
        n if n % 2 == 1 => times[n / 2],
        n => (times[n / 2 - 1] + times[n / 2]) / 2.0,
    };
    format!(
        "# problems={} solution={} unrealizable={} timeout={} error={} mean_time_s={mean:.3} median_time_s={median:.3}",
        reports.len(),
        count("solution"),
        count("unrealizable"),
        count("timeout"),
        count("error"),
    )
}

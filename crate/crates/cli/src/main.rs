mod report;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, ExitCode, Stdio};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use anyhow::{Context, Result};
use bisynth::{
    parse_problem, render_solution, solve, solve_with_dnc_stats, Mode, Outcome, Pruning,
    SearchConfig,
};
use clap::{Args, Parser, Subcommand, ValueEnum};

use report::{DncReport, RunReport};

const EXIT_SOLUTION: u8 = 0;
const EXIT_USAGE: u8 = 2;
const EXIT_UNREALIZABLE: u8 = 10;
const EXIT_TIMEOUT: u8 = 20;

#[derive(Parser)]
#[command(
    name = "bisynth",
    version,
    about = "Example-guided bitvector program synthesis"
)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one SyGuS PBE problem and print the solution.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Write a JSON run report here.
        #[arg(long, value_name = "PATH")]
        stats_json: Option<PathBuf>,
        /// Log every dequeued, pruned and expanded candidate to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// Solve every `.sl` file in a directory, one process per problem.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        search: SearchArgs,
        /// Number of problems solved in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Write the CSV report here instead of stdout.
        #[arg(long, value_name = "PATH")]
        csv: Option<PathBuf>,
    },
}

#[derive(Args, Clone, Debug)]
struct SearchArgs {
    /// Maximum sketch height.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    max_height: u64,
    /// Maximum sketch size in AST nodes.
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
    max_size: u64,
    /// Per-problem timeout in seconds.
    #[arg(long, default_value_t = 600.0)]
    timeout: f64,
    #[arg(long, value_enum, default_value_t = ModeArg::Bidir)]
    mode: ModeArg,
    #[arg(long, value_enum, default_value_t = PruningArg::Full)]
    pruning: PruningArg,
    /// Divide and conquer over examples for conditional programs.
    #[arg(long)]
    dnc: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Bidir,
    Topdown,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum PruningArg {
    Full,
    Forward,
    Off,
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig> {
        anyhow::ensure!(
            self.timeout.is_finite() && self.timeout > 0.0,
            "--timeout must be positive"
        );
        Ok(SearchConfig {
            max_height: self.max_height as usize,
            max_sketch_size: self.max_size as usize,
            timeout: Duration::from_secs_f64(self.timeout),
            mode: match self.mode {
                ModeArg::Bidir => Mode::Bidirectional,
                ModeArg::Topdown => Mode::TopDown,
            },
            pruning: match self.pruning {
                PruningArg::Full => Pruning::Full,
                PruningArg::Forward => Pruning::ForwardOnly,
                PruningArg::Off => Pruning::Off,
            },
            ..SearchConfig::default()
        })
    }

    /// The same flags as command-line arguments for a child `solve`.
    fn to_args(&self) -> Vec<String> {
        let mut args = vec![
            "--max-height".to_string(),
            self.max_height.to_string(),
            "--max-size".to_string(),
            self.max_size.to_string(),
            "--timeout".to_string(),
            self.timeout.to_string(),
            "--mode".to_string(),
            format!("{:?}", self.mode).to_lowercase(),
            "--pruning".to_string(),
            format!("{:?}", self.pruning).to_lowercase(),
        ];
        if self.dnc {
            args.push("--dnc".to_string());
        }
        args
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    let trace = matches!(cli.command, Cmd::Solve { trace: true, .. });
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(if trace {
        "bisynth=trace"
    } else {
        "warn"
    }))
    .format_timestamp(None)
    .init();
    let result = match cli.command {
        Cmd::Solve {
            file,
            search,
            stats_json,
            ..
        } => run_solve(&file, &search, stats_json.as_deref()),
        Cmd::Bench {
            dir,
            search,
            jobs,
            csv,
        } => run_bench(&dir, &search, jobs, csv.as_deref()),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

fn problem_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn run_solve(file: &Path, search: &SearchArgs, stats_json: Option<&Path>) -> Result<u8> {
    let config = search.config()?;
    let text = fs::read_to_string(file).with_context(|| format!("reading {}", file.display()))?;
    let problem = parse_problem(&text).with_context(|| file.display().to_string())?;
    let (outcome, dnc) = if search.dnc {
        let (o, s) = solve_with_dnc_stats(&problem, &config);
        (o, Some(s))
    } else {
        (solve(&problem, &config), None)
    };
    let rendered = outcome
        .solution()
        .map(|t| render_solution(&problem, t))
        .transpose()?;
    let code = match &outcome {
        Outcome::Solution { .. } => {
            println!("{}", rendered.as_deref().unwrap_or_default());
            EXIT_SOLUTION
        }
        Outcome::Unrealizable { .. } => {
            println!("infeasible");
            EXIT_UNREALIZABLE
        }
        Outcome::Timeout { stats } => {
            eprintln!("timeout after {:.1}s", stats.elapsed.as_secs_f64());
            EXIT_TIMEOUT
        }
    };
    if let Some(path) = stats_json {
        let mut report = RunReport::from_outcome(&problem_id(file), &outcome, rendered);
        report.dnc = dnc.map(|d| DncReport {
            cover_terms: d.cover_terms,
            predicates: d.predicates,
            tree_depth: d.tree_depth,
        });
        let json = serde_json::to_string_pretty(&report)?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(code)
}

fn run_bench(dir: &Path, search: &SearchArgs, jobs: usize, csv: Option<&Path>) -> Result<u8> {
    search.config()?;
    let mut files: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "sl"))
        .collect();
    files.sort();
    let exe = std::env::current_exe()?;
    let scratch = tempfile::tempdir()?;
    let next = AtomicUsize::new(0);
    let slots: Mutex<Vec<Option<RunReport>>> = Mutex::new(vec![None; files.len()]);
    std::thread::scope(|s| {
        for _ in 0..jobs.max(1) {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                let Some(file) = files.get(i) else { break };
                let json = scratch.path().join(format!("{i}.json"));
                let report = run_child(&exe, file, search, &json);
                log::info!("{}: {}", report.id, report.outcome);
                slots.lock().unwrap()[i] = Some(report);
            });
        }
    });
    let reports: Vec<RunReport> = slots
        .into_inner()
        .unwrap()
        .into_iter()
        .map(|r| r.expect("every problem ran"))
        .collect();
    match csv {
        Some(path) => {
            let f =
                fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            report::write_csv(std::io::BufWriter::new(f), &reports)?;
        }
        None => report::write_csv(std::io::stdout().lock(), &reports)?,
    }
    Ok(0)
}

/// Runs `solve` on one file in a child process, killing it if it overruns its
/// own timeout by more than a grace period.
fn run_child(exe: &Path, file: &Path, search: &SearchArgs, json: &Path) -> RunReport {
    let id = problem_id(file);
    let started = Instant::now();
    let limit = Duration::from_secs_f64(search.timeout) + Duration::from_secs(30);
    let child = Command::new(exe)
        .arg("solve")
        .arg(file)
        .args(search.to_args())
        .arg("--stats-json")
        .arg(json)
        .stdout(Stdio::null())
        .stderr(Stdio::piped())
        .spawn();
    let mut child = match child {
        Ok(c) => c,
        Err(e) => return RunReport::error(&id, e.to_string(), 0.0),
    };
    let status = loop {
        match child.try_wait() {
            Ok(Some(status)) => break Some(status),
            Ok(None) if started.elapsed() > limit => {
                let _ = child.kill();
                let _ = child.wait();
                break None;
            }
            Ok(None) => std::thread::sleep(Duration::from_millis(5)),
            Err(_) => break None,
        }
    };
    let elapsed = started.elapsed().as_secs_f64();
    let Some(status) = status else {
        let mut r = RunReport::error(&id, "killed after overrunning its timeout".into(), elapsed);
        r.outcome = "timeout".into();
        r.error = None;
        return r;
    };
    match fs::read_to_string(json)
        .ok()
        .and_then(|t| serde_json::from_str::<RunReport>(&t).ok())
    {
        Some(r) => r,
        None => {
            let mut stderr = String::new();
            if let Some(mut e) = child.stderr.take() {
                use std::io::Read;
                let _ = e.read_to_string(&mut stderr);
            }
            let msg = format!("exit {}: {}", status.code().unwrap_or(-1), stderr.trim());
            RunReport::error(&id, msg, elapsed)
        }
    }
}

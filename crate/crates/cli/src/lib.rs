//! Batch runner: reads an INI experiment config, runs the named experiment and
//! writes a CSV table, a verdict and a manifest.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;

use std::path::{Path, PathBuf};
use std::time::Instant;

pub use config::Config;
pub use error::{CliError, CliResult};
pub use experiments::{Report, EXPERIMENTS};

/// Environment variable consulted when `--threads` is not given.
pub const THREADS_ENV: &str = "CONIC_EM_THREADS";

pub struct RunOutcome {
    pub experiment: &'static str,
    pub pass: bool,
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
}

/// One line per experiment: `name<TAB>anchor<TAB>description`.
pub fn list() -> String {
    EXPERIMENTS.iter().map(|e| format!("{}\t{}\t{}\n", e.name, e.anchor, e.description)).collect()
}

fn thread_count(threads: Option<usize>) -> CliResult<usize> {
    if let Some(n) = threads {
        return Ok(n);
    }
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::Threads(format!("{THREADS_ENV}={v} is not a thread count"))),
        Err(_) => Ok(0),
    }
}

/// Parses and runs a config without writing anything.
pub fn evaluate(
    config_text: &str,
    threads: Option<usize>,
) -> CliResult<(&'static experiments::Experiment, Report, u64)> {
    let cfg = Config::parse(config_text)?;
    let name = cfg.name()?;
    let exp = experiments::find(name).ok_or_else(|| CliError::UnknownExperiment(name.to_string()))?;
    let seed = cfg.seed()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(thread_count(threads)?)
        .build()
        .map_err(|e| CliError::Threads(e.to_string()))?;
    let report = pool.install(|| exp.run(&cfg))?;
    Ok((exp, report, seed))
}

/// Runs the config at `config_path`; artifacts go to `out` if given, else to
/// `[output] dir`, else to `out/<experiment>`.
pub fn run(config_path: &Path, out: Option<&Path>, threads: Option<usize>) -> CliResult<RunOutcome> {
    let text = std::fs::read_to_string(config_path)?;
    let start = Instant::now();
    let (exp, report, seed) = evaluate(&text, threads)?;
    let wall_time_s = start.elapsed().as_secs_f64();
    let cfg = Config::parse(&text)?;
    let out_dir = match (out, cfg.output_dir()) {
        (Some(p), _) => p.to_path_buf(),
        (None, Some(d)) => PathBuf::from(d),
        (None, None) => Path::new("out").join(exp.name),
    };
    let rec = output::RunRecord { experiment: exp, report: &report, config_text: &text, seed, wall_time_s };
    let files = output::write_run(&out_dir, &rec)?;
    Ok(RunOutcome { experiment: exp.name, pass: report.pass, out_dir, files })
}

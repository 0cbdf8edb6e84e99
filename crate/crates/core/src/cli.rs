//! Command-line front end. The `splitfinder` binary calls [`main_with`].
//!
//! Exit codes: 0 success, 1 bound verification failed, 2 invalid input, 3 an
//! enumeration or query limit was hit. Errors go to stderr as a single
//! `ERROR <code>: <message>` line.

use std::ffi::OsString;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::ThreadPool;

use crate::analysis::{
    analyze, binary_entropy, optimal_worst_case, verify_bounds, AnalysisError, AnalysisOptions, AnalysisReport,
    EdgeKnobs, EdgeMode, DEFAULT_OPTIMAL_CAP,
};
use crate::engine::{
    cost_stats, interactive_session, run_all_transcripts, run_for_id, EngineError, Transcript,
};
use crate::families::{generate, FamilyError, FamilySpec};
use crate::instance::Instance;
use crate::persistence::{self, PersistenceError, SummaryRow};
use crate::rational::{self, Rational};

#[derive(Debug, Parser)]
#[command(name = "splitfinder", version, about = "Generalized binary search on finite hypothesis/test instances")]
struct Cli {
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, env = "SPLITFINDER_THREADS", default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a family instance.
    Gen {
        /// Family name, e.g. disjunction or convex_polygon.
        #[arg(long)]
        family: String,
        /// Family parameter as key=value; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Instance file to write.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compute k, coherence, edge certificates, alpha*, beta, lambda and bounds.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        #[command(flatten)]
        knobs: KnobArgs,
        /// Report file to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run GBS against one hypothesis, all of them, or an interactive oracle.
    Run {
        #[arg(long = "in")]
        input: PathBuf,
        /// Hypothesis id, `all`, or `interactive`.
        #[arg(long)]
        oracle: String,
        /// Transcript (single oracle) or run document (all) to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a report's bounds against exhaustive runs; exit 1 on a violation.
    Verify {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Largest n for the optimal-tree comparison.
        #[arg(long, default_value_t = DEFAULT_OPTIMAL_CAP)]
        cap: usize,
    },
    /// Exact optimal worst-case depth by subset recursion.
    Optimal {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = DEFAULT_OPTIMAL_CAP)]
        cap: usize,
    },
    /// Binary entropy H(p) in bits.
    Entropy {
        /// Probability as num/den or a decimal.
        #[arg(long)]
        p: String,
    },
    /// Play h* over stdin/stdout: QUERY lines out, 0/1 answers in.
    Interactive {
        #[arg(long = "in")]
        input: PathBuf,
        /// Transcript file to write.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze and run a grid of family instances into a CSV summary.
    Sweep {
        #[arg(long)]
        family: String,
        /// Fixed parameter as key=value; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
        /// Swept parameter as key=a,b,c (use `|` between values that contain commas); repeatable.
        #[arg(long = "grid", value_name = "KEY=VALUES", required = true)]
        grids: Vec<String>,
        #[command(flatten)]
        knobs: KnobArgs,
        /// CSV file to write.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct KnobArgs {
    /// Candidate edges: preset, cycle, l1 or all.
    #[arg(long, default_value = "preset")]
    edges: String,
    /// Largest Δ-set enumerated exhaustively.
    #[arg(long, default_value_t = 18)]
    limit: usize,
    /// Random subsets tried on edges above the limit.
    #[arg(long, default_value_t = 10_000)]
    samples: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Candidate alpha for falsification; defaults to the family's split_alpha.
    #[arg(long)]
    alpha: Option<String>,
}

impl KnobArgs {
    fn options(&self) -> Result<AnalysisOptions, CliError> {
        let edge_mode = EdgeMode::parse(&self.edges)
            .ok_or_else(|| CliError::BadArgument(format!("--edges {:?} is not preset, cycle, l1 or all", self.edges)))?;
        let candidate_alpha = self.alpha.as_deref().map(parse_rational).transpose()?;
        Ok(AnalysisOptions {
            edge_mode,
            knobs: EdgeKnobs {
                exhaustive_limit: self.limit,
                samples: self.samples,
                seed: self.seed,
                candidate_alpha,
            },
        })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    BadArgument(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("report was computed on instance {report} but the instance digest is {instance}")]
    DigestMismatch { report: String, instance: String },
    #[error("{0}")]
    BoundViolated(String),
    #[error(transparent)]
    Family(#[from] FamilyError),
    #[error(transparent)]
    Persistence(#[from] PersistenceError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Engine(#[from] EngineError),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "Usage",
            CliError::BadArgument(_) => "BadArgument",
            CliError::Io { .. } => "Io",
            CliError::DigestMismatch { .. } => "DigestMismatch",
            CliError::BoundViolated(_) => "BoundViolated",
            CliError::Family(e) => e.code(),
            CliError::Persistence(e) => e.code(),
            CliError::Analysis(e) => e.code(),
            CliError::Engine(e) => e.code(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::BoundViolated(_) => 1,
            CliError::Analysis(AnalysisError::InstanceTooLarge { .. } | AnalysisError::LimitTooLarge(_))
            | CliError::Engine(EngineError::QueryBudgetExceeded(_)) => 3,
            _ => 2,
        }
    }
}

fn parse_rational(text: &str) -> Result<Rational, CliError> {
    rational::parse(text).map_err(|e| CliError::BadArgument(e.to_string()))
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_instance(path: &Path) -> Result<Instance, CliError> {
    Ok(persistence::read_instance(&mut open(path)?)?)
}

/// Writes through `f` into `path`, mapping io errors to the path.
fn save(path: &Path, f: impl FnOnce(&mut BufWriter<File>) -> Result<usize, PersistenceError>) -> Result<(), CliError> {
    let file = File::create(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    let mut sink = BufWriter::new(file);
    f(&mut sink)?;
    sink.flush().map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn io_err(source: std::io::Error) -> CliError {
    CliError::Io { path: PathBuf::from("<stdout>"), source }
}

fn summary_line(report: &AnalysisReport) -> String {
    let verified = report.edges.iter().filter(|e| e.status.is_verified()).count();
    let mut line = format!(
        "n={} m_tests={} k_min={} c={} alpha_star={} beta={} lambda={} nowak_worst={} split_worst={} split_average={} edges={} verified={}",
        report.n,
        report.m_tests,
        report.k_min,
        rational::format(&report.coherence.value),
        rational::format(&report.alpha_star),
        rational::format(&report.beta),
        rational::format(&report.lambda),
        report.bounds.nowak_worst,
        report.bounds.split_worst,
        report.bounds.split_average,
        report.edges.len(),
        verified,
    );
    if report.conditional {
        line.push_str(" conditional");
    }
    if let Some(d) = &report.diagnostic {
        line.push_str(&format!(" diagnostic={d:?}"));
    }
    line
}

/// Cartesian product of grid values, first grid outermost.
fn expand_grid(grids: &[String]) -> Result<Vec<Vec<(String, String)>>, CliError> {
    let mut combos = vec![Vec::new()];
    for grid in grids {
        let (key, values) = grid
            .split_once('=')
            .ok_or_else(|| CliError::BadArgument(format!("--grid {grid:?} is not key=values")))?;
        let sep = if values.contains('|') { '|' } else { ',' };
        let values: Vec<&str> = values.split(sep).map(str::trim).filter(|v| !v.is_empty()).collect();
        if values.is_empty() {
            return Err(CliError::BadArgument(format!("--grid {grid:?} has no values")));
        }
        combos = combos
            .into_iter()
            .flat_map(|c| {
                values.iter().map(move |v| {
                    let mut next = c.clone();
                    next.push((key.trim().to_string(), v.to_string()));
                    next
                })
            })
            .collect();
    }
    Ok(combos)
}

fn all_transcripts(pool: &ThreadPool, instance: &Instance) -> Result<Vec<Transcript>, CliError> {
    Ok(pool.install(|| run_all_transcripts(instance))?)
}

/// Heavy work runs inside `pool`; stdio stays on the calling thread.
fn dispatch(
    command: Command,
    pool: &ThreadPool,
    input: &mut dyn BufRead,
    mut out: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Gen { family, params, out: path } => {
            let instance = generate(&FamilySpec::parse(&family, &params)?)?;
            save(&path, |sink| persistence::write_instance(&instance, sink))?;
            writeln!(
                out,
                "n={} m_tests={} digest={}",
                instance.n(),
                instance.m_tests(),
                persistence::digest(&instance)
            )
            .map_err(io_err)?;
        }
        Command::Analyze { input: path, knobs, out: report_path } => {
            let instance = load_instance(&path)?;
            let options = knobs.options()?;
            let report = pool.install(|| analyze(&instance, &options))?;
            if let Some(p) = report_path {
                let d = persistence::digest(&instance);
                save(&p, |sink| persistence::write_report(&report, &d, sink))?;
            }
            writeln!(out, "{}", summary_line(&report)).map_err(io_err)?;
        }
        Command::Run { input: path, oracle, out: run_path } => {
            let instance = load_instance(&path)?;
            let d = persistence::digest(&instance);
            match oracle.as_str() {
                "interactive" => return dispatch(Command::Interactive { input: path, out: run_path }, pool, input, out),
                "all" => {
                    let transcripts = all_transcripts(pool, &instance)?;
                    let stats = cost_stats(&transcripts);
                    let identified = transcripts.iter().filter(|t| t.identified == t.oracle_id).count();
                    writeln!(
                        out,
                        "identified={identified}/{} worst_case={} average={} (~{})",
                        instance.n(),
                        stats.worst_case,
                        rational::format(&stats.average),
                        persistence::round12(rational::to_f64(&stats.average)),
                    )
                    .map_err(io_err)?;
                    if let Some(p) = run_path {
                        save(&p, |sink| persistence::write_run(&stats, &transcripts, &d, sink))?;
                    }
                }
                id => {
                    let t = run_for_id(&instance, id)?;
                    writeln!(out, "oracle={} queries={} identified={}", t.oracle_id, t.query_count, t.identified)
                        .map_err(io_err)?;
                    if let Some(p) = run_path {
                        save(&p, |sink| persistence::write_report(&t, &d, sink))?;
                    }
                }
            }
        }
        Command::Verify { input: path, report, cap } => {
            let instance = load_instance(&path)?;
            let (report, report_digest) = persistence::read_report(&mut open(&report)?)?;
            let d = persistence::digest(&instance);
            if report_digest != d {
                return Err(CliError::DigestMismatch { report: report_digest, instance: d });
            }
            let stats = cost_stats(&all_transcripts(pool, &instance)?);
            let verdict = verify_bounds(&instance, &report, &stats, cap);
            for c in &verdict.checks {
                let margin = c.margin.map_or_else(|| "unbounded".to_string(), |m| persistence::round12(m).to_string());
                writeln!(
                    out,
                    "{} {}: {} vs {} (margin {margin})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    persistence::round12(c.observed),
                    c.bound,
                )
                .map_err(io_err)?;
            }
            if verdict.conditional {
                writeln!(out, "conditional: some candidate edges were not verified exhaustively").map_err(io_err)?;
            }
            let failed: Vec<String> = verdict
                .checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{} (observed {}, bound {}, margin {:?})", c.name, c.observed, c.bound, c.margin))
                .collect();
            if !failed.is_empty() {
                return Err(CliError::BoundViolated(failed.join("; ")));
            }
        }
        Command::Optimal { input: path, cap } => {
            let instance = load_instance(&path)?;
            let value = optimal_worst_case(&instance, cap)?;
            writeln!(out, "optimal_worst_case={value}").map_err(io_err)?;
        }
        Command::Entropy { p } => {
            let p = parse_rational(&p)?;
            if p < Rational::from_integer(0.into()) || p > Rational::from_integer(1.into()) {
                return Err(CliError::BadArgument(format!("p={} is outside [0, 1]", rational::format(&p))));
            }
            writeln!(out, "{:?}", persistence::round12(binary_entropy(&p))).map_err(io_err)?;
        }
        Command::Interactive { input: path, out: transcript_path } => {
            let instance = load_instance(&path)?;
            let t = interactive_session(&instance, input, &mut out)?;
            if let Some(p) = transcript_path {
                let d = persistence::digest(&instance);
                save(&p, |sink| persistence::write_report(&t, &d, sink))?;
            }
        }
        Command::Sweep { family, params, grids, knobs, out: path } => {
            let options = knobs.options()?;
            let mut rows = Vec::new();
            for combo in expand_grid(&grids)? {
                let mut spec = FamilySpec::parse(&family, &params)?;
                for (k, v) in combo {
                    spec.params.insert(k, v);
                }
                let instance = generate(&spec)?;
                let report = pool.install(|| analyze(&instance, &options))?;
                let stats = cost_stats(&all_transcripts(pool, &instance)?);
                writeln!(out, "{} {}", instance.name(), summary_line(&report)).map_err(io_err)?;
                rows.push(SummaryRow::new(&report, &stats));
            }
            save(&path, |sink| persistence::write_csv_summary(&rows, sink))?;
            writeln!(out, "rows={}", rows.len()).map_err(io_err)?;
        }
    }
    Ok(())
}

/// Parses `args` (program name first), runs the command, returns the exit code.
pub fn main_with<I, T>(args: I, input: &mut dyn BufRead, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            let _ = writeln!(err, "ERROR Usage: {first}");
            return 2;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build() {
        Ok(pool) => pool,
        Err(e) => {
            let _ = writeln!(err, "ERROR BadArgument: {e}");
            return 2;
        }
    };
    let result = dispatch(cli.command, &pool, input, out);
    let _ = out.flush();
    match result {
        Ok(()) => 0,
        Err(e) => {
            let message = e.to_string().replace('\n', " ");
            let _ = writeln!(err, "ERROR {}: {message}", e.code());
            e.exit_code()
        }
    }
}

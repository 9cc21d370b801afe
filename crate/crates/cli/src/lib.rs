//! The `atlas` command line: train abstractions, synthesize with them, benchmark
//! against the ⊤ baseline, and inspect interpolants.

pub mod report;

use std::ffi::OsString;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Duration;

use atlas_core::ags::{is_correct, synthesize, Abstraction, Mode, DEFAULT_MAX_SIZE};
use atlas_core::bundle::{AbstractionBundle, BundleError, Provenance, TaskFile};
use atlas_core::driver::{learn_abstractions, DriverConfig, TrainingProblem};
use atlas_core::dsl::parse;
use atlas_core::interp::{check_interpolant, construct_tree, ItpError};
use atlas_core::transformer::{audit_table, AuditEntry, SamplingOracle};
use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use report::{BenchEntry, BenchReport, BenchSummary, RunLog, TrainingReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSOLVED: i32 = 1;
pub const EXIT_TRAINING: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

pub const DEFAULT_TIMEOUT_MS: u64 = 60_000;
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "atlas", version, about = "Learn abstractions for a string synthesizer")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct SearchArgs {
    /// Largest program size to enumerate.
    #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
    pub max_size: usize,
    /// Per-task time limit.
    #[arg(long, default_value_t = DEFAULT_TIMEOUT_MS)]
    pub timeout_ms: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Learn an abstraction from training tasks.
    Train {
        tasks: Vec<PathBuf>,
        /// Output directory for bundle.json and report.json.
        #[arg(short, long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_MAX_SIZE)]
        max_size: usize,
        /// Record wall-clock timings in the report (makes it run-dependent).
        #[arg(long)]
        timings: bool,
    },
    /// Synthesize a program for one task.
    Synth {
        task: PathBuf,
        #[arg(long, required_unless_present = "baseline_top")]
        bundle: Option<PathBuf>,
        /// Ignore the bundle and search with {⊤}.
        #[arg(long)]
        baseline_top: bool,
        /// Extra constant strings, in addition to the task's own.
        #[arg(long, value_delimiter = ',')]
        literals: Vec<String>,
        /// Append the run log as a JSON line to this file.
        #[arg(long)]
        log: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Compare a bundle against the ⊤ baseline on every task in a directory.
    Bench {
        dir: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        /// Write the JSON report here.
        #[arg(short, long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        search: SearchArgs,
    },
    /// Print the tree interpolant refuting a program on a task's examples.
    DumpItp {
        task: PathBuf,
        #[arg(long)]
        program: String,
    },
    /// Re-check every transformer in a bundle on fresh random samples.
    Audit {
        #[arg(long)]
        bundle: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        checks: usize,
        /// Sampling seed; pick one not used for training.
        #[arg(long, default_value_t = 0x5eed_a0d17)]
        seed: u64,
    },
}

#[derive(Debug)]
pub enum CliError {
    Bundle(BundleError),
    Io(PathBuf, std::io::Error),
    Usage(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Bundle(e) => write!(f, "{e}"),
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

impl From<BundleError> for CliError {
    fn from(e: BundleError) -> Self {
        CliError::Bundle(e)
    }
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("atlas: {e}");
            EXIT_USAGE
        }
    }
}

fn execute(cmd: Command) -> Result<i32, CliError> {
    match cmd {
        Command::Train { tasks, out, seed, max_size, timings } => {
            let files = tasks.iter().map(|p| TaskFile::load(p)).collect::<Result<Vec<_>, _>>()?;
            let t = train(&files, seed, max_size, timings);
            std::fs::create_dir_all(&out).map_err(|e| CliError::Io(out.clone(), e))?;
            write_atomic(&out.join("bundle.json"), &t.bundle.to_json())?;
            write_atomic(&out.join("report.json"), &to_json(&t.report))?;
            for p in &t.report.problems {
                eprintln!("{}: {} after {} iteration(s)", p.problem, p.outcome, p.iterations);
            }
            eprintln!("|A| = {}, |T| = {}", t.report.templates.len(), t.report.table_size);
            Ok(if t.ok { EXIT_OK } else { EXIT_TRAINING })
        }
        Command::Synth { task, bundle, baseline_top, literals, log, search } => {
            let mut file = TaskFile::load(&task)?;
            file.literals.extend(literals);
            let (abs, label) = if baseline_top {
                (Abstraction::top(), "baseline_top")
            } else {
                let path = bundle.expect("clap requires --bundle");
                (AbstractionBundle::load(&path)?.abstraction()?, "bundle")
            };
            let r = synth(&file, &abs, label, &search);
            if let Some(path) = log {
                use std::io::Write;
                let mut f = std::fs::OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(&path)
                    .map_err(|e| CliError::Io(path.clone(), e))?;
                writeln!(f, "{}", serde_json::to_string(&r).expect("log serializes"))
                    .map_err(|e| CliError::Io(path.clone(), e))?;
            }
            eprintln!("enumerated {} candidates ({} pruned) in {:.1} ms", r.enumerated, r.pruned_abstract, r.elapsed_ms);
            match (&r.program, r.solved) {
                (Some(p), true) => {
                    println!("{p}");
                    Ok(EXIT_OK)
                }
                _ => {
                    eprintln!("unsolved: {}", r.reason.as_deref().unwrap_or("-"));
                    Ok(EXIT_UNSOLVED)
                }
            }
        }
        Command::Bench { dir, bundle, out, search } => {
            let tasks = load_corpus(&dir)?;
            let abs = AbstractionBundle::load(&bundle)?.abstraction()?;
            let report = bench(&tasks, &abs, &search);
            if let Some(path) = out {
                write_atomic(&path, &to_json(&report))?;
            }
            print!("{}", report.table());
            Ok(EXIT_OK)
        }
        Command::DumpItp { task, program } => {
            let file = TaskFile::load(&task)?;
            let p = parse(&program).map_err(|e| CliError::Usage(format!("--program: {e}")))?;
            let (text, spurious) = dump_itp(&file, &p);
            print!("{text}");
            Ok(if spurious { EXIT_OK } else { EXIT_UNSOLVED })
        }
        Command::Audit { bundle, checks, seed } => {
            let abs = AbstractionBundle::load(&bundle)?.abstraction()?;
            let entries = audit(&abs, seed, checks);
            let mut failed = 0;
            for e in &entries {
                println!("{} -> {}: {} checks, {} failures", e.slot, e.output, e.checks, e.failures.len());
                for c in e.failures.iter().take(3) {
                    println!("  counterexample: {c:?}");
                }
                failed += usize::from(!e.failures.is_empty());
            }
            println!("{} transformer outputs, {failed} unsound", entries.len());
            Ok(if failed == 0 { EXIT_OK } else { EXIT_UNSOLVED })
        }
    }
}

pub fn to_json<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn write_atomic(path: &Path, text: &str) -> Result<(), CliError> {
    let tmp = path.with_extension("json.tmp");
    std::fs::write(&tmp, text).map_err(|e| CliError::Io(tmp.clone(), e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::Io(path.to_path_buf(), e))
}

/// Every `*.json` task in `dir`, sorted by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<TaskFile>, CliError> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .map_err(|e| CliError::Io(dir.to_path_buf(), e))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    Ok(paths.iter().map(|p| TaskFile::load(p)).collect::<Result<_, _>>()?)
}

pub struct Trained {
    pub bundle: AbstractionBundle,
    pub report: TrainingReport,
    /// Every problem was solved.
    pub ok: bool,
}

pub fn train(files: &[TaskFile], seed: u64, max_size: usize, timings: bool) -> Trained {
    let problems: Vec<TrainingProblem> = files
        .iter()
        .map(|f| {
            let mut task = f.to_task();
            task.bounds.max_size = max_size;
            TrainingProblem { name: f.name.clone(), task }
        })
        .collect();
    let run = learn_abstractions(&problems, &DriverConfig { seed, ..Default::default() });
    let provenance =
        Provenance { seed, version: VERSION.into(), tasks: files.iter().map(|f| f.name.clone()).collect() };
    Trained {
        bundle: AbstractionBundle::new(&run.abstraction, provenance),
        report: TrainingReport::new(&run, seed, timings),
        ok: run.all_solved(),
    }
}

pub fn synth(file: &TaskFile, abs: &Abstraction, label: &str, search: &SearchArgs) -> RunLog {
    let mut task = file.to_task();
    task.bounds.max_size = search.max_size;
    task.bounds.timeout = Some(Duration::from_millis(search.timeout_ms));
    let o = synthesize(&task, abs, Mode::Checked);
    let solved = o.program.as_ref().is_some_and(|p| is_correct(p, &task.examples));
    RunLog::new(&file.name, label, &o, solved)
}

pub fn bench(tasks: &[TaskFile], abs: &Abstraction, search: &SearchArgs) -> BenchReport {
    let top = Abstraction::top();
    let entries: Vec<BenchEntry> = tasks
        .par_iter()
        .map(|f| {
            let bundle = synth(f, abs, "bundle", search);
            let baseline = synth(f, &top, "baseline_top", search);
            let ratio = (bundle.solved && baseline.solved)
                .then(|| baseline.enumerated as f64 / bundle.enumerated.max(1) as f64);
            BenchEntry { task: f.name.clone(), bundle, baseline, ratio }
        })
        .collect();
    BenchReport {
        timeout_ms: search.timeout_ms,
        max_size: search.max_size,
        summary: BenchSummary::new(&entries),
        tasks: entries,
    }
}

/// Interpolant dumps for every example `p` gets wrong, each followed by the
/// checker's verdict. The flag is false when `p` is correct on all examples.
pub fn dump_itp(file: &TaskFile, p: &atlas_core::dsl::Program) -> (String, bool) {
    let mut out = String::new();
    let mut spurious = false;
    for (k, e) in file.examples.iter().enumerate() {
        let got = p.eval(&e.input).map_or_else(|err| format!("error: {err}"), |v| format!("{v:?}"));
        let tree = match construct_tree(p, &e.input, &e.output) {
            Ok(t) => t,
            Err(ItpError::NotSpurious) => continue,
            Err(err) => {
                out.push_str(&format!("# example {k}: {err}\n"));
                continue;
            }
        };
        spurious = true;
        out.push_str(&format!("# example {k}: {:?} -> {:?}, program gives {got}\n", e.input, e.output));
        match tree.find_itp() {
            Ok(itp) => {
                out.push_str(&tree.dump(&itp));
                match check_interpolant(&tree, &itp) {
                    Ok(()) => out.push_str("check: ok\n"),
                    Err(err) => out.push_str(&format!("check: {err}\n")),
                }
            }
            Err(err) => out.push_str(&format!("no interpolant: {err}\n")),
        }
    }
    if !spurious {
        out.push_str("program is correct on every example\n");
    }
    (out, spurious)
}

/// Alphabet for audits: lowercase, digits and common separators.
pub fn audit_oracle(seed: u64) -> SamplingOracle {
    SamplingOracle::for_corpus(seed, "-./\\:@ _".chars())
}

pub fn audit(abs: &Abstraction, seed: u64, checks: usize) -> Vec<AuditEntry> {
    audit_table(&abs.table, &audit_oracle(seed), checks)
}

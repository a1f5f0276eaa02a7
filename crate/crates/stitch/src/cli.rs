//! The `drat-stitch` command line.
//!
//! Exit status 0 means success (or a valid proof), 1 a semantic failure such as an
//! invalid proof or a bad cube partition, 2 an environmental one such as an unreadable
//! or malformed file. Reports go to the writer passed in as `key=value` lines;
//! diagnostics go to the error stream.

use std::ffi::OsString;
use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::num::NonZeroUsize;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use clap::{Args, Parser, Subcommand};
use drat_stitch_core::checker::CheckReport;
use drat_stitch_core::harness::{
    gen_random_unsat, solve_drup_with, split, ClauseRatio, SolveOutcome, SolverConfig,
};
use drat_stitch_core::stitcher::{
    average_clause_length, combine_all, Combined, LevelReport, MemoryStore, ProofStore,
    StitchError,
};
use drat_stitch_core::trimmer::{trim_with, TrimError, TrimOptions};
use drat_stitch_core::{
    build_cube_tree, check_refutation, CombineOptions, DeletionMode, Formula, Refutation,
    TrimPolicy,
};

use crate::io::{
    filename_from_cube, load_bundle, load_formula, load_proof, write_dimacs, write_drat,
    BundleError, ProofSource, PROOF_EXTENSION,
};
use crate::runtime::{PoolExecutor, SpillStore, WallClock};

#[derive(Debug, Parser)]
#[command(name = "drat-stitch", version, about = "Stitch, check and trim DRAT refutations")]
pub struct Cli {
    /// More log output on stderr (repeatable).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Combine per-cube refutations into one refutation of the instance.
    Stitch(StitchArgs),
    /// Check a DRAT refutation.
    Check(CheckArgs),
    /// Shrink a DRAT refutation to the steps needed for its empty clause.
    Trim(TrimArgs),
    /// Generate a random unsatisfiable instance with per-cube refutations.
    Fixture(FixtureArgs),
    /// Solve an instance, writing a DRUP refutation when it is unsatisfiable.
    Solve(SolveArgs),
    /// Print the cubes of a split of an instance as iCNF `a` lines.
    Split(SplitArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ModeArgs {
    /// Fail on deletions of clauses that are not present.
    #[arg(long, conflicts_with = "permissive")]
    pub strict: bool,
    /// Skip deletions of clauses that are not present (default).
    #[arg(long)]
    pub permissive: bool,
}

impl ModeArgs {
    pub fn mode(&self) -> DeletionMode {
        if self.strict {
            DeletionMode::Strict
        } else {
            DeletionMode::Permissive
        }
    }
}

fn parse_cl_avg(s: &str) -> Result<TrimPolicy, String> {
    let value: i64 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    TrimPolicy::from_cl_avg(value).map_err(|e| e.to_string())
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["proofs", "icnf"])))]
pub struct StitchArgs {
    #[arg(long)]
    pub cnf: PathBuf,
    /// Directory of `<cube>.proof` files, e.g. `1_-2.proof`.
    #[arg(long)]
    pub proofs: Option<PathBuf>,
    /// iCNF file whose `a` lines are the cubes; needs `--manifest`.
    #[arg(long, requires = "manifest")]
    pub icnf: Option<PathBuf>,
    /// Proof paths, one per line, in the order of the iCNF cubes.
    #[arg(long, requires = "icnf")]
    pub manifest: Option<PathBuf>,
    /// Trim after a stitch when the average clause length exceeds this; 0 always
    /// trims, -1 never does.
    #[arg(long = "cl-avg", default_value = "10", value_parser = parse_cl_avg, allow_negative_numbers = true)]
    pub cl_avg: TrimPolicy,
    /// Worker threads; defaults to the processor count capped at the widest tree level.
    #[arg(long)]
    pub jobs: Option<NonZeroUsize>,
    #[arg(short, long)]
    pub output: PathBuf,
    #[command(flatten)]
    pub mode: ModeArgs,
    /// Do not re-check the combined refutation.
    #[arg(long)]
    pub no_verify: bool,
    /// Do not check the sub-problem refutations before stitching.
    #[arg(long)]
    pub trust_sub_proofs: bool,
    /// Drop the deletions of non-preserving sub-problem refutations; the remaining
    /// additions must then check without RAT.
    #[arg(long)]
    pub strip_deletions: bool,
    /// Keep intermediate refutations as files below this directory.
    #[arg(long)]
    pub spill_dir: Option<PathBuf>,
    /// Refutations with fewer steps stay in memory even with `--spill-dir`.
    #[arg(long, default_value_t = 0, requires = "spill_dir")]
    pub spill_threshold: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub cnf: PathBuf,
    pub proof: PathBuf,
    #[command(flatten)]
    pub mode: ModeArgs,
}

#[derive(Debug, Args)]
pub struct TrimArgs {
    pub cnf: PathBuf,
    pub proof: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also write the unsatisfiable core as DIMACS.
    #[arg(long)]
    pub emit_core: Option<PathBuf>,
    /// Only keep deletions that were in the input.
    #[arg(long)]
    pub no_resynthesize: bool,
    #[command(flatten)]
    pub mode: ModeArgs,
}

#[derive(Debug, Args)]
pub struct FixtureArgs {
    #[arg(long, default_value_t = 16)]
    pub vars: usize,
    /// Clauses per variable, as a decimal or a fraction.
    #[arg(long, default_value = "4.26")]
    pub ratio: ClauseRatio,
    #[arg(long, default_value_t = 2)]
    pub depth: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory; must be empty or absent unless `--force` is given.
    #[arg(short, long)]
    pub output: PathBuf,
    /// Replace `f.cnf` and `*.proof` files already in the output directory.
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub cnf: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = SolverConfig::DEFAULT_MAX_CONFLICTS)]
    pub max_conflicts: u64,
    /// Where to write the refutation.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SplitArgs {
    pub cnf: PathBuf,
    #[arg(long)]
    pub depth: usize,
    /// Write the cubes here instead of the standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Why a command did not succeed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Failure {
    Semantic(String),
    Environment(String),
}

impl Failure {
    pub fn exit_code(&self) -> u8 {
        match self {
            Failure::Semantic(_) => 1,
            Failure::Environment(_) => 2,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Semantic(m) | Failure::Environment(m) => f.write_str(m),
        }
    }
}

impl From<BundleError> for Failure {
    fn from(e: BundleError) -> Failure {
        if e.is_semantic() {
            Failure::Semantic(e.to_string())
        } else {
            Failure::Environment(e.to_string())
        }
    }
}

impl From<StitchError> for Failure {
    fn from(e: StitchError) -> Failure {
        match e {
            StitchError::Storage { .. } => Failure::Environment(e.to_string()),
            _ => Failure::Semantic(e.to_string()),
        }
    }
}

fn report_io(out: io::Result<()>) -> Result<(), Failure> {
    out.map_err(|e| Failure::Environment(format!("cannot write report: {e}")))
}

fn write_file(path: &Path, write: impl FnOnce(&mut io::BufWriter<fs::File>) -> io::Result<()>) -> Result<(), Failure> {
    let env = |e: io::Error| Failure::Environment(format!("cannot write {}: {e}", path.display()));
    let file = fs::File::create(path).map_err(env)?;
    let mut w = io::BufWriter::new(file);
    write(&mut w).map_err(env)?;
    w.flush().map_err(env)
}

fn millis(d: Duration) -> String {
    format!("{:.3}", d.as_secs_f64() * 1000.0)
}

pub fn check_line(report: &CheckReport) -> String {
    let s = &report.stats;
    let mut line = format!(
        "verdict={} steps_checked={} propagations={} rat_steps={} skipped_deletions={} ignored_trailing_steps={}",
        if report.is_valid() { "valid" } else { "invalid" },
        s.steps_checked,
        s.propagations,
        s.rat_steps,
        s.skipped_deletions,
        s.ignored_trailing_steps,
    );
    if let Some(step) = report.failing_step {
        line.push_str(&format!(" failing_step={step}"));
    }
    if let Some(reason) = report.reason {
        line.push_str(&format!(" reason={reason}"));
    }
    line
}

pub fn level_line(level: &LevelReport) -> String {
    format!(
        "level={} stitched={} trimmed={} merge_ms={} trim_ms={}",
        level.depth,
        level.stitched,
        level.trimmed,
        millis(level.merge_time),
        millis(level.trim_time)
    )
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli.command, out) {
        Ok(()) => 0,
        Err(failure) => {
            eprintln!("error: {failure}");
            failure.exit_code()
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Stitch(a) => cmd_stitch(&RunConfig::from(a), out).map(|_| ()),
        Command::Check(a) => cmd_check(&a.cnf, &a.proof, a.mode.mode(), out).map(|_| ()),
        Command::Trim(a) => cmd_trim(a, out),
        Command::Fixture(a) => cmd_fixture(a, out),
        Command::Solve(a) => cmd_solve(a, out),
        Command::Split(a) => cmd_split(a, out),
    }
}

/// Settings of one stitching run.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub cnf: PathBuf,
    pub source: ProofSource,
    pub policy: TrimPolicy,
    pub jobs: Option<NonZeroUsize>,
    pub output: PathBuf,
    pub mode: DeletionMode,
    pub verify_output: bool,
    pub verify_sub_proofs: bool,
    pub strip_deletions: bool,
    pub spill_dir: Option<PathBuf>,
    pub spill_threshold: usize,
}

impl RunConfig {
    /// Defaults of the command line: verification on, permissive deletions.
    pub fn new(cnf: PathBuf, source: ProofSource, policy: TrimPolicy, output: PathBuf) -> RunConfig {
        RunConfig {
            cnf,
            source,
            policy,
            jobs: None,
            output,
            mode: DeletionMode::Permissive,
            verify_output: true,
            verify_sub_proofs: true,
            strip_deletions: false,
            spill_dir: None,
            spill_threshold: 0,
        }
    }
}

impl From<&StitchArgs> for RunConfig {
    fn from(a: &StitchArgs) -> RunConfig {
        let source = match (&a.proofs, &a.icnf, &a.manifest) {
            (Some(dir), _, _) => ProofSource::Directory(dir.clone()),
            (None, Some(cubes), Some(manifest)) => ProofSource::Icnf {
                cubes: cubes.clone(),
                manifest: manifest.clone(),
            },
            _ => unreachable!("clap requires a proof source"),
        };
        RunConfig {
            jobs: a.jobs,
            mode: a.mode.mode(),
            verify_output: !a.no_verify,
            verify_sub_proofs: !a.trust_sub_proofs,
            strip_deletions: a.strip_deletions,
            spill_dir: a.spill_dir.clone(),
            spill_threshold: a.spill_threshold,
            ..RunConfig::new(a.cnf.clone(), source, a.cl_avg, a.output.clone())
        }
    }
}

/// What a stitching run produced.
#[derive(Debug, Clone)]
pub struct StitchSummary {
    pub combined: Combined,
    pub jobs: usize,
    /// Set when a single root refutation was trimmed instead of stitched.
    pub root_trimmed: bool,
    pub check: Option<CheckReport>,
}

pub fn cmd_stitch(config: &RunConfig, out: &mut dyn Write) -> Result<StitchSummary, Failure> {
    let bundle = load_bundle(&config.cnf, &config.source)?;
    let formula = bundle.instance;
    let tree = build_cube_tree(bundle.entries).map_err(|e| Failure::Semantic(e.to_string()))?;
    let jobs = match config.jobs {
        Some(j) => j.get(),
        None => std::thread::available_parallelism()
            .map_or(1, NonZeroUsize::get)
            .min(tree.widest_level())
            .max(1),
    };
    let executor =
        PoolExecutor::new(jobs).map_err(|e| Failure::Environment(format!("cannot start workers: {e}")))?;
    let clock = WallClock::start();
    let mut options = CombineOptions::new(config.policy);
    options.leaf_check = config.verify_sub_proofs.then_some(config.mode);
    options.strip_deletions = config.strip_deletions;
    log::info!("stitching {} nodes with {jobs} workers", tree.len());

    fn run_with<S: ProofStore>(
        formula: &Formula,
        tree: drat_stitch_core::stitcher::CubeTree,
        options: &CombineOptions,
        executor: &PoolExecutor,
        clock: &WallClock,
        mut store: S,
    ) -> Result<Combined, StitchError> {
        combine_all(formula, tree, options, executor, clock, &mut store)
    }
    let mut combined = match &config.spill_dir {
        Some(dir) => {
            let store = SpillStore::new(dir, config.spill_threshold)
                .map_err(|e| Failure::Environment(format!("cannot spill to {}: {e}", dir.display())))?;
            run_with(&formula, tree, &options, &executor, &clock, store)?
        }
        None => run_with(&formula, tree, &options, &executor, &clock, MemoryStore::default())?,
    };

    let mut root_trimmed = false;
    if combined.stitches.is_empty() && config.policy.should_trim(average_clause_length(&combined.refutation)) {
        let trim_options = TrimOptions {
            input_mode: config.mode,
            ..TrimOptions::default()
        };
        combined.refutation = trim_with(&formula, &combined.refutation, &trim_options)
            .map_err(|e| Failure::Semantic(format!("root refutation: {e}")))?
            .refutation;
        root_trimmed = true;
    }

    for level in &combined.levels {
        report_io(writeln!(out, "{}", level_line(level)))?;
    }
    write_file(&config.output, |w| write_drat(&combined.refutation, w))?;
    report_io(writeln!(
        out,
        "output={} steps={} bytes={} stitches={} trims={} jobs={jobs} leaf_check_ms={}",
        config.output.display(),
        combined.refutation.len(),
        combined.refutation.serialized_len(),
        combined.stitches.len(),
        combined.trims() + usize::from(root_trimmed),
        millis(combined.leaf_check_time),
    ))?;

    let mut check = None;
    if config.verify_output {
        let started = Instant::now();
        let report = check_refutation(&formula, &combined.refutation, config.mode);
        let elapsed = started.elapsed();
        report_io(writeln!(out, "{}", check_line(&report)))?;
        report_io(writeln!(out, "check_ms={}", millis(elapsed)))?;
        if !report.is_valid() {
            return Err(Failure::Semantic(format!(
                "combined refutation fails at step {} ({})",
                report.failing_step.unwrap_or(0),
                report.reason.map_or("unknown".to_string(), |r| r.to_string())
            )));
        }
        check = Some(report);
    }
    Ok(StitchSummary {
        combined,
        jobs,
        root_trimmed,
        check,
    })
}

fn load_pair(cnf: &Path, proof: &Path) -> Result<(Formula, Refutation), Failure> {
    let formula = load_formula(cnf).map_err(Failure::from)?;
    let proof = load_proof(proof).map_err(|e| Failure::Environment(e.to_string()))?;
    Ok((formula, proof))
}

pub fn cmd_check(cnf: &Path, proof: &Path, mode: DeletionMode, out: &mut dyn Write) -> Result<CheckReport, Failure> {
    let (formula, proof) = load_pair(cnf, proof)?;
    let started = Instant::now();
    let mut report = check_refutation(&formula, &proof, mode);
    let elapsed = started.elapsed();
    report.stats.wall_time = Some(elapsed);
    report_io(writeln!(out, "{}", check_line(&report)))?;
    report_io(writeln!(out, "check_ms={}", millis(elapsed)))?;
    if report.is_valid() {
        Ok(report)
    } else {
        Err(Failure::Semantic(format!(
            "refutation fails at step {}",
            report.failing_step.unwrap_or(0)
        )))
    }
}

fn cmd_trim(a: &TrimArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let (formula, proof) = load_pair(&a.cnf, &a.proof)?;
    let options = TrimOptions {
        resynthesize_deletions: !a.no_resynthesize,
        input_mode: a.mode.mode(),
        ..TrimOptions::default()
    };
    let started = Instant::now();
    let trimmed = match trim_with(&formula, &proof, &options) {
        Ok(t) => t,
        Err(TrimError::InvalidInput(report)) => {
            report_io(writeln!(out, "{}", check_line(&report)))?;
            return Err(Failure::Semantic(format!(
                "input is not a valid refutation: fails at step {}",
                report.failing_step.unwrap_or(0)
            )));
        }
        Err(e) => return Err(Failure::Semantic(e.to_string())),
    };
    let elapsed = started.elapsed();
    write_file(&a.output, |w| write_drat(&trimmed.refutation, w))?;
    if let Some(core) = &a.emit_core {
        write_file(core, |w| write_dimacs(&trimmed.core, w))?;
    }
    let r = &trimmed.report;
    report_io(writeln!(
        out,
        "input_steps={} output_steps={} input_bytes={} output_bytes={} core_clauses={} rounds={} trim_ms={}",
        r.input_steps,
        r.output_steps,
        r.input_bytes,
        r.output_bytes,
        r.core_clauses,
        r.rounds,
        millis(elapsed)
    ))
}

pub const FIXTURE_CNF: &str = "f.cnf";

fn cmd_fixture(a: &FixtureArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let env = |e: io::Error| Failure::Environment(format!("{}: {e}", a.output.display()));
    if a.output.exists() {
        let stale: Vec<PathBuf> = fs::read_dir(&a.output)
            .map_err(env)?
            .map(|e| e.map(|e| e.path()))
            .collect::<Result<_, _>>()
            .map_err(env)?;
        if !stale.is_empty() && !a.force {
            return Err(Failure::Environment(format!(
                "{} is not empty (use --force to replace its fixture files)",
                a.output.display()
            )));
        }
        for path in stale {
            let is_fixture = path.file_name().is_some_and(|n| n == FIXTURE_CNF)
                || path.extension().is_some_and(|e| e == PROOF_EXTENSION);
            if is_fixture && path.is_file() {
                fs::remove_file(&path).map_err(env)?;
            }
        }
    }
    fs::create_dir_all(&a.output).map_err(env)?;

    let formula = gen_random_unsat(a.vars, a.ratio, a.seed).map_err(|e| Failure::Semantic(e.to_string()))?;
    let cubes = split(&formula, a.depth).map_err(|e| Failure::Semantic(e.to_string()))?;
    write_file(&a.output.join(FIXTURE_CNF), |w| write_dimacs(&formula, w))?;
    let mut steps = 0;
    for cube in &cubes {
        let config = SolverConfig::new(a.seed);
        let proof = match solve_drup_with(&cube.instance(&formula), &config) {
            Ok(SolveOutcome::Unsat(p)) => p,
            Ok(SolveOutcome::Sat(_)) => {
                return Err(Failure::Semantic(format!("cube {cube} is satisfiable")))
            }
            Err(e) => return Err(Failure::Semantic(format!("cube {cube}: {e}"))),
        };
        steps += proof.len();
        write_file(&a.output.join(filename_from_cube(cube)), |w| write_drat(&proof, w))?;
    }
    report_io(writeln!(
        out,
        "instance={} vars={} clauses={} cubes={} proof_steps={steps}",
        a.output.join(FIXTURE_CNF).display(),
        a.vars,
        formula.total_clauses(),
        cubes.len()
    ))
}

fn cmd_solve(a: &SolveArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let formula = load_formula(&a.cnf).map_err(Failure::from)?;
    let config = SolverConfig {
        seed: a.seed,
        max_conflicts: Some(a.max_conflicts),
    };
    match solve_drup_with(&formula, &config) {
        Ok(SolveOutcome::Sat(model)) => {
            let values: Vec<String> = model
                .iter()
                .map(|(v, &b)| v.literal(b).to_string())
                .collect();
            report_io(writeln!(out, "result=sat model={}", values.join(",")))
        }
        Ok(SolveOutcome::Unsat(proof)) => {
            if let Some(path) = &a.output {
                write_file(path, |w| write_drat(&proof, w))?;
            }
            report_io(writeln!(out, "result=unsat steps={}", proof.len()))
        }
        Err(e) => {
            report_io(writeln!(out, "result=unknown conflicts={}", e.0))?;
            Err(Failure::Semantic(e.to_string()))
        }
    }
}

fn cmd_split(a: &SplitArgs, out: &mut dyn Write) -> Result<(), Failure> {
    let formula = load_formula(&a.cnf).map_err(Failure::from)?;
    let cubes = split(&formula, a.depth).map_err(|e| Failure::Semantic(e.to_string()))?;
    let render = |w: &mut dyn Write| -> io::Result<()> {
        for cube in &cubes {
            write!(w, "a")?;
            for l in cube.literals() {
                write!(w, " {l}")?;
            }
            writeln!(w, " 0")?;
        }
        Ok(())
    };
    match &a.output {
        Some(path) => {
            write_file(path, |w| render(w))?;
            report_io(writeln!(out, "cubes={}", cubes.len()))
        }
        None => report_io(render(out)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn cl_avg_accepts_the_sentinel() {
        let cli = Cli::try_parse_from(["x", "stitch", "--cnf", "f", "--proofs", "d", "-o", "o", "--cl-avg", "-1"]).unwrap();
        let Command::Stitch(a) = cli.command else { panic!() };
        assert_eq!(a.cl_avg, TrimPolicy::Never);
        assert!(Cli::try_parse_from(["x", "stitch", "--cnf", "f", "--proofs", "d", "-o", "o", "--cl-avg", "-2"]).is_err());
        let cli = Cli::try_parse_from(["x", "stitch", "--cnf", "f", "--proofs", "d", "-o", "o"]).unwrap();
        let Command::Stitch(a) = cli.command else { panic!() };
        assert_eq!(a.cl_avg, TrimPolicy::AboveAverageLength(10));
    }

    #[test]
    fn source_is_required_and_exclusive() {
        assert!(Cli::try_parse_from(["x", "stitch", "--cnf", "f", "-o", "o"]).is_err());
        assert!(Cli::try_parse_from(["x", "stitch", "--cnf", "f", "-o", "o", "--proofs", "d", "--icnf", "c", "--manifest", "m"]).is_err());
        assert!(Cli::try_parse_from(["x", "stitch", "--cnf", "f", "-o", "o", "--icnf", "c"]).is_err());
        assert!(Cli::try_parse_from(["x", "check", "a", "b", "--strict", "--permissive"]).is_err());
    }

    #[test]
    fn level_line_format() {
        let level = LevelReport {
            depth: 2,
            stitched: 4,
            trimmed: 1,
            merge_time: Duration::from_micros(1500),
            trim_time: Duration::ZERO,
        };
        assert_eq!(level_line(&level), "level=2 stitched=4 trimmed=1 merge_ms=1.500 trim_ms=0.000");
    }
}

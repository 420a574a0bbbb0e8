//! Command-line front end. Every command writes to a caller-supplied sink
//! and returns its exit code: 0 on success, 1 when a verification fails,
//! 2 on bad input.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use secgroup::oracle::{
    card_count, collect_trials_with, conditional_uniformity_test, fiber_report,
    transcript_independence_test, uniformity_test, GroupingTrial,
};
use secgroup::{
    parse_constraint_file, run_seeded, ConstraintFile, Error, Grouping, PermutationSource,
    RunMode, SeededSource, Significance,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "secgroup", version, about = "Card-based secure grouping")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one grouping session and print each player's view.
    Run(RunArgs),
    /// Chi-square test of the output grouping against the uniform distribution.
    VerifyUniformity(VerifyArgs),
    /// Tests that one player's view says nothing about the other groups.
    VerifyIndependence(IndependenceArgs),
    /// Enumerate valid permutations and groupings and report fiber sizes.
    Enumerate(ConstraintArg),
    /// Number of cards one session uses.
    CardCount(ConstraintArg),
}

#[derive(Debug, Args)]
pub struct ConstraintArg {
    #[arg(long)]
    pub constraint: PathBuf,
    /// Also write the report to this file.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub constraint: PathBuf,
    #[arg(long)]
    pub seed: u64,
    /// Write the public transcript to this file.
    #[arg(long)]
    pub transcript: Option<PathBuf>,
    /// Print only this player's view.
    #[arg(long)]
    pub player: Option<usize>,
    /// Append the hidden permutations to the transcript output.
    #[arg(long)]
    pub unsafe_secrets: bool,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long)]
    pub constraint: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    #[arg(long, default_value = "0.001", value_parser = parse_significance)]
    pub significance: Significance,
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct IndependenceArgs {
    #[command(flatten)]
    pub verify: VerifyArgs,
    /// The observing player.
    #[arg(long, default_value_t = 1)]
    pub player: usize,
}

fn parse_significance(s: &str) -> Result<Significance, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli.command, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                err.write_all(text.as_bytes())
            } else {
                out.write_all(text.as_bytes())
            };
            code
        }
    }
}

pub fn execute(command: &Command, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match command {
        Command::Run(a) => cmd_run(a, out),
        Command::VerifyUniformity(a) => {
            cmd_verify_uniformity(a, out, |t| SeededSource::stream(a.seed, t))
        }
        Command::VerifyIndependence(a) => {
            cmd_verify_independence(a, out, |t| SeededSource::stream(a.verify.seed, t))
        }
        Command::Enumerate(a) => cmd_enumerate(a, out),
        Command::CardCount(a) => cmd_card_count(a, out),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_INPUT
        }
    }
}

#[derive(Debug)]
pub enum CliError {
    Io(PathBuf, io::Error),
    Engine(Error),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Io(p, e) => write!(f, "{}: {e}", p.display()),
            CliError::Engine(e) => write!(f, "{e}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Engine(e)
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn load_constraint(path: &Path) -> CliResult<ConstraintFile> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(path.into(), e))?;
    parse_constraint_file(&text).map_err(|e| CliError::Engine(Error::Parse(format!("{}: {e}", path.display()))))
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::Io(path.into(), e))
}

fn emit(out: &mut dyn Write, report: Option<&Path>, text: &str) -> CliResult<()> {
    out.write_all(text.as_bytes())
        .map_err(|e| CliError::Io("<stdout>".into(), e))?;
    if let Some(p) = report {
        write_file(p, text)?;
    }
    Ok(())
}

/// One line per player; a player grouped with a dummy index also gets that
/// dummy's name.
pub fn render_views(file: &ConstraintFile, views: &[secgroup::PlayerView], only: Option<usize>) -> String {
    let mut s = String::new();
    for v in views {
        if file.is_dummy(v.player) || only.is_some_and(|p| p != v.player) {
            continue;
        }
        s += &v.to_string();
        let roles: Vec<String> = v
            .group
            .iter()
            .filter(|&&m| file.is_dummy(m))
            .map(|&d| file.dummy_name(d))
            .collect();
        if !roles.is_empty() {
            s += &format!(" role {}", roles.join(", "));
        }
        s.push('\n');
    }
    s
}

pub fn cmd_run(a: &RunArgs, out: &mut dyn Write) -> CliResult<i32> {
    let file = load_constraint(&a.constraint)?;
    let n = file.constraint.n();
    if let Some(p) = a.player {
        if p == 0 || p > n || file.is_dummy(p) {
            return Err(Error::Parse(format!("no player {p}")).into());
        }
    }
    let mode = if a.unsafe_secrets { RunMode::Verify } else { RunMode::Strict };
    let run = run_seeded(&file.constraint, a.seed, mode)?;

    let mut transcript = run.transcript.to_string();
    if let Some(v) = &run.verification {
        transcript += &v.secret_log.render_unsafe();
        transcript += &format!("SECRET grouping {}\n", v.grouping);
    }
    let mut text = render_views(&file, &run.views, a.player);
    match &a.transcript {
        Some(p) => write_file(p, &transcript)?,
        None if a.unsafe_secrets => text += &transcript,
        None => {}
    }
    emit(out, None, &text)?;
    Ok(EXIT_OK)
}

fn header(name: &str, file: &ConstraintFile, a: &VerifyArgs) -> String {
    format!(
        "[{name}]\nconstraint = {}\nseed = {}\ntrials = {}\n",
        file.constraint, a.seed, a.trials
    )
}

fn trials_for<S, F>(file: &ConstraintFile, a: &VerifyArgs, source: F) -> CliResult<Vec<GroupingTrial>>
where
    S: PermutationSource + 'static,
    F: Fn(u64) -> S + Sync,
{
    Ok(collect_trials_with(&file.constraint, a.trials as usize, source)?)
}

/// `source(t)` supplies the randomness of trial `t`.
pub fn cmd_verify_uniformity<S, F>(a: &VerifyArgs, out: &mut dyn Write, source: F) -> CliResult<i32>
where
    S: PermutationSource + 'static,
    F: Fn(u64) -> S + Sync,
{
    let file = load_constraint(&a.constraint)?;
    let trials = trials_for(&file, a, source)?;
    let samples: Vec<Grouping> = trials.into_iter().map(|t| t.grouping).collect();
    let res = match uniformity_test(&samples, &file.constraint, a.significance) {
        Ok(r) => r,
        // a grouping the oracle does not know is a verification failure
        Err(Error::OutsideSupport(g)) => {
            let text = format!(
                "{}grouping_outside_support = {g}\nresult = fail\n",
                header("verify-uniformity", &file, a)
            );
            emit(out, a.report.as_deref(), &text)?;
            return Ok(EXIT_FAILED);
        }
        Err(e) => return Err(e.into()),
    };
    let text = header("verify-uniformity", &file, a) + "\n" + &res.stanza("uniformity");
    emit(out, a.report.as_deref(), &text)?;
    Ok(if res.pass { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_verify_independence<S, F>(
    a: &IndependenceArgs,
    out: &mut dyn Write,
    source: F,
) -> CliResult<i32>
where
    S: PermutationSource + 'static,
    F: Fn(u64) -> S + Sync,
{
    let v = &a.verify;
    let file = load_constraint(&v.constraint)?;
    if a.player == 0 || a.player > file.constraint.n() {
        return Err(Error::Parse(format!("no player {}", a.player)).into());
    }
    let trials = trials_for(&file, v, source)?;
    let cond = conditional_uniformity_test(&trials, &file.constraint, a.player, v.significance);
    let ind = transcript_independence_test(&trials, &file.constraint, a.player, v.significance);
    let mut text = header("verify-independence", &file, v) + &format!("player = {}\n", a.player);
    let mut pass = true;
    for (name, res) in [("conditional-uniformity", cond), ("transcript-independence", ind)] {
        text.push('\n');
        match res {
            Ok(r) => {
                pass &= r.pass;
                text += &r.stanza(name);
            }
            Err(Error::OutsideSupport(g)) => {
                pass = false;
                text += &format!("[{name}]\ngrouping_outside_support = {g}\nresult = fail\n");
            }
            Err(e) => return Err(e.into()),
        }
    }
    emit(out, v.report.as_deref(), &text)?;
    Ok(if pass { EXIT_OK } else { EXIT_FAILED })
}

pub fn cmd_enumerate(a: &ConstraintArg, out: &mut dyn Write) -> CliResult<i32> {
    let file = load_constraint(&a.constraint)?;
    let report = fiber_report(&file.constraint)?;
    emit(out, a.report.as_deref(), &report.render())?;
    Ok(if report.fibers_equal() && report.support_matches {
        EXIT_OK
    } else {
        EXIT_FAILED
    })
}

pub fn cmd_card_count(a: &ConstraintArg, out: &mut dyn Write) -> CliResult<i32> {
    let file = load_constraint(&a.constraint)?;
    let cc = card_count(&file.constraint)?;
    let text = format!(
        "[card-count]\nconstraint = {}\nmax_group_size = {}\ncards = {}\nbound = {}\nwithin_bound = {}\n",
        file.constraint,
        cc.max_group_size,
        cc.cards,
        cc.bound,
        cc.within_bound()
    );
    emit(out, a.report.as_deref(), &text)?;
    Ok(EXIT_OK)
}

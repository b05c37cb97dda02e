//! Command-line front end: build tables, run verification suites, export.

use std::cell::OnceCell;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use drinfeld_core::bialgebra::{self, SubSpan};
use drinfeld_core::double::{self, verify_closure, verify_pairing};
use drinfeld_core::export::{self, Format};
use drinfeld_core::reps::{self, CasimirElement};
use drinfeld_core::{
    build_r_matrix, build_series, cocommutator_explicit, cocommutator_from_structure, split, verify_chain_embedding,
    verify_coboundary, verify_cocycle, verify_cojacobi, verify_cybe, verify_delta_agreement, verify_jacobi,
    verify_twist_triviality, CocommutatorTable, LieAlgebra, ManinTriple, RMatrix, Report, Series, SplittingSpec,
    Transcription, TwistMode,
};
use serde::{Deserialize, Serialize};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_WRITE: i32 = 3;

const DEFAULT_CUTOFF: u32 = 6;

#[derive(Debug, Parser)]
#[command(name = "drinfeld-forge", version, about = "Build and verify Manin triples and Lie bialgebras of the classical series")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write the structure table (and the rotated table when --spec is given).
    Build(CommonArgs),
    /// Run named checks; exit 1 if any fails.
    Verify(CommonArgs),
    /// Export brackets, delta, rmatrix, pairing, matrices or discrepancies.
    Export(CommonArgs),
}

/// Flags shared by every subcommand; `--config` supplies defaults for any of them.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CommonArgs {
    #[arg(long)]
    pub series: Option<String>,
    #[arg(long)]
    pub rank: Option<usize>,
    /// `canonical` or `mixed:pairs=i-j,...;central=k,...`
    #[arg(long)]
    pub spec: Option<String>,
    /// Comma-separated check names.
    #[arg(long)]
    pub checks: Option<String>,
    /// Span for `subbialg`: plus, minus, An or Dn.
    #[arg(long)]
    pub sub: Option<String>,
    /// Bosonic truncation (total occupation), at least 4.
    #[arg(long)]
    pub cutoff: Option<u32>,
    /// Machine-readable report on stdout.
    #[arg(long)]
    #[serde(default)]
    pub json: bool,
    /// Worker threads; defaults to the available cores.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// JSON file whose keys mirror these flags.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub what: Option<String>,
    /// json or text.
    #[arg(long)]
    pub format: Option<String>,
}

impl CommonArgs {
    /// Flags given on the command line win over the config file.
    fn merged(self) -> Result<Self, CliError> {
        let Some(path) = &self.config else { return Ok(self) };
        let text = fs::read_to_string(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
        let base: CommonArgs =
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?;
        Ok(Self {
            series: self.series.or(base.series),
            rank: self.rank.or(base.rank),
            spec: self.spec.or(base.spec),
            checks: self.checks.or(base.checks),
            sub: self.sub.or(base.sub),
            cutoff: self.cutoff.or(base.cutoff),
            json: self.json || base.json,
            jobs: self.jobs.or(base.jobs),
            out: self.out.or(base.out),
            config: self.config,
            what: self.what.or(base.what),
            format: self.format.or(base.format),
        })
    }
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Write(String),
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Write(_) => EXIT_WRITE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Write(m) => write!(f, "write error: {m}"),
        }
    }
}

impl From<drinfeld_core::Error> for CliError {
    fn from(e: drinfeld_core::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Verification checks in execution order: structural checks first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Jacobi,
    Closure,
    Pairing,
    Reconstruction,
    Compatibility,
    SelfDual,
    FormInv,
    DeltaAgree,
    Cocycle,
    CoJacobi,
    SubBialg,
    Coboundary,
    Cybe,
    Twist,
    Chain,
    Rep,
    Casimir,
}

impl Check {
    pub const ALL: [Check; 17] = [
        Check::Jacobi,
        Check::Closure,
        Check::Pairing,
        Check::Reconstruction,
        Check::Compatibility,
        Check::SelfDual,
        Check::FormInv,
        Check::DeltaAgree,
        Check::Cocycle,
        Check::CoJacobi,
        Check::SubBialg,
        Check::Coboundary,
        Check::Cybe,
        Check::Twist,
        Check::Chain,
        Check::Rep,
        Check::Casimir,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Check::Jacobi => "jacobi",
            Check::Closure => "closure",
            Check::Pairing => "pairing",
            Check::Reconstruction => "reconstruction",
            Check::Compatibility => "compatibility",
            Check::SelfDual => "selfdual",
            Check::FormInv => "forminv",
            Check::DeltaAgree => "delta-agree",
            Check::Cocycle => "cocycle",
            Check::CoJacobi => "cojacobi",
            Check::SubBialg => "subbialg",
            Check::Coboundary => "coboundary",
            Check::Cybe => "cybe",
            Check::Twist => "twist",
            Check::Chain => "chain",
            Check::Rep => "rep",
            Check::Casimir => "casimir",
        }
    }
}

impl FromStr for Check {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Check::ALL
            .iter()
            .copied()
            .find(|c| c.name() == s)
            .ok_or_else(|| CliError::Usage(format!("unknown check {s:?}")))
    }
}

/// Parses a comma list into a deduplicated suite in execution order.
pub fn parse_suite(list: &str) -> Result<Vec<Check>, CliError> {
    let mut checks: Vec<Check> =
        list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(Check::from_str).collect::<Result<_, _>>()?;
    if checks.is_empty() {
        return Err(CliError::Usage("empty check list".into()));
    }
    checks.sort();
    checks.dedup();
    Ok(checks)
}

/// Lazily built objects shared across checks.
struct Context {
    series: Series,
    rank: usize,
    spec: SplittingSpec,
    cutoff: u32,
    sub: SubSpan,
    alg: OnceCell<LieAlgebra>,
    triple: OnceCell<ManinTriple>,
    delta: OnceCell<CocommutatorTable>,
    r: OnceCell<RMatrix>,
}

impl Context {
    fn new(args: &CommonArgs) -> Result<Self, CliError> {
        let series: Series = args
            .series
            .as_deref()
            .ok_or_else(|| CliError::Usage("--series is required".into()))?
            .parse()?;
        let rank = args.rank.ok_or_else(|| CliError::Usage("--rank is required".into()))?;
        series.check_rank(rank)?;
        let spec = match &args.spec {
            Some(s) => SplittingSpec::parse(s, series, rank)?,
            None => SplittingSpec::canonical(series, rank),
        };
        let cutoff = args.cutoff.unwrap_or(DEFAULT_CUTOFF);
        if cutoff < 4 {
            return Err(CliError::Usage(format!("--cutoff {cutoff} is below 4")));
        }
        let sub = args.sub.as_deref().unwrap_or("plus").parse()?;
        Ok(Self {
            series,
            rank,
            spec,
            cutoff,
            sub,
            alg: OnceCell::new(),
            triple: OnceCell::new(),
            delta: OnceCell::new(),
            r: OnceCell::new(),
        })
    }

    fn alg(&self) -> Result<&LieAlgebra, CliError> {
        if self.alg.get().is_none() {
            let _ = self.alg.set(build_series(self.series, self.rank)?);
        }
        Ok(self.alg.get().expect("initialized above"))
    }

    fn triple(&self) -> Result<&ManinTriple, CliError> {
        if self.triple.get().is_none() {
            let t = split(self.alg()?, &self.spec)?;
            let _ = self.triple.set(t);
        }
        Ok(self.triple.get().expect("initialized above"))
    }

    fn delta(&self) -> Result<&CocommutatorTable, CliError> {
        if self.delta.get().is_none() {
            let d = cocommutator_from_structure(self.triple()?);
            let _ = self.delta.set(d);
        }
        Ok(self.delta.get().expect("initialized above"))
    }

    fn r(&self) -> Result<&RMatrix, CliError> {
        if self.r.get().is_none() {
            let r = build_r_matrix(self.triple()?);
            let _ = self.r.set(r);
        }
        Ok(self.r.get().expect("initialized above"))
    }

    fn run(&self, check: Check) -> Result<Report, CliError> {
        let report = match check {
            Check::Jacobi => verify_jacobi(self.alg()?.table()),
            Check::Closure => verify_closure(self.triple()?),
            Check::Pairing => verify_pairing(self.triple()?),
            Check::Reconstruction => double::verify_reconstruction(self.triple()?),
            Check::Compatibility => double::verify_compatibility(self.triple()?),
            Check::SelfDual => double::verify_self_duality(self.triple()?),
            Check::FormInv => double::verify_form_invariance(self.triple()?),
            Check::DeltaAgree => {
                // closed forms describe the canonical splitting
                let alg = self.alg()?;
                let canonical = split(alg, &SplittingSpec::canonical(self.series, self.rank))?;
                let derived = cocommutator_from_structure(&canonical);
                verify_delta_agreement(&derived, &cocommutator_explicit(alg, Transcription::Corrected))
            }
            Check::Cocycle => verify_cocycle(self.alg()?.table(), self.delta()?),
            Check::CoJacobi => verify_cojacobi(self.delta()?),
            Check::SubBialg => {
                let sub = self.sub.elements(self.triple()?)?;
                bialgebra::subbialgebra_report(self.alg()?, self.delta()?, &sub)?
            }
            Check::Coboundary => verify_coboundary(self.alg()?.table(), self.delta()?, self.r()?),
            Check::Cybe => verify_cybe(self.r()?, self.alg()?.table()),
            Check::Twist => {
                let mode = if self.series == Series::A { TwistMode::Identify } else { TwistMode::Zero };
                verify_twist_triviality(self.alg()?, self.r()?, mode)
            }
            Check::Chain => verify_chain_embedding(self.series, self.rank)?,
            Check::Rep => self.rep_reports(false)?,
            Check::Casimir => self.rep_reports(true)?,
        };
        Ok(report)
    }

    /// Fermionic for A, B, D; bosonic for A and C.
    fn rep_reports(&self, casimir: bool) -> Result<Report, CliError> {
        let alg = self.alg()?;
        let casimirs = || -> Result<Vec<CasimirElement>, CliError> {
            Ok(vec![CasimirElement::quadratic(alg), CasimirElement::of_double(self.triple()?)])
        };
        let mut parts = Vec::new();
        if self.series != Series::C {
            let rep = reps::fermionic_rep(self.series, self.rank, None)?;
            if casimir {
                parts.extend(casimirs()?.iter().map(|c| reps::casimir_check(&rep, c)));
            } else {
                parts.push(reps::verify_rep_homomorphism(&rep, alg));
            }
        }
        if matches!(self.series, Series::A | Series::C) {
            let rep = reps::bosonic_rep(self.series, self.rank, self.cutoff, None)?;
            if casimir {
                parts.extend(casimirs()?.iter().map(|c| reps::casimir_check(&rep, c)));
            } else {
                parts.push(reps::verify_rep_homomorphism(&rep, alg));
            }
        }
        Ok(Report::merge(check_name(casimir), parts))
    }
}

fn check_name(casimir: bool) -> &'static str {
    if casimir {
        "casimir"
    } else {
        "rep"
    }
}

#[derive(Serialize)]
struct VerifyJson<'a> {
    series: Series,
    rank: usize,
    spec: String,
    pass: bool,
    reports: &'a [Report],
}

fn parse_format(args: &CommonArgs) -> Result<Format, CliError> {
    Ok(args.format.as_deref().unwrap_or("json").parse()?)
}

fn write_output(out: Option<&Path>, body: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, body).map_err(|e| CliError::Write(format!("{}: {e}", path.display()))),
        None => stdout.write_all(body.as_bytes()).map_err(|e| CliError::Write(format!("stdout: {e}"))),
    }
}

/// `table.json` → `table.rotated.json`
fn rotated_path(path: &Path) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let name = match path.extension() {
        Some(ext) => format!("{stem}.rotated.{}", ext.to_string_lossy()),
        None => format!("{stem}.rotated"),
    };
    path.with_file_name(name)
}

fn cmd_build(args: &CommonArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let ctx = Context::new(args)?;
    let format = parse_format(args)?;
    let alg = ctx.alg()?;
    let main = export::structure_table(ctx.series, ctx.rank, alg.table(), format);
    let rotated = match &args.spec {
        Some(_) => {
            let table = double::crossed_brackets(ctx.triple()?)?;
            Some(export::structure_table(ctx.series, ctx.rank, &table, format))
        }
        None => None,
    };
    match &args.out {
        Some(path) => {
            write_output(Some(path), &main, stdout)?;
            if let Some(r) = rotated {
                write_output(Some(&rotated_path(path)), &r, stdout)?;
            }
        }
        None => {
            write_output(None, &main, stdout)?;
            if let Some(r) = rotated {
                write_output(None, &r, stdout)?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &CommonArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let suite = match &args.checks {
        Some(list) => parse_suite(list)?,
        None => Check::ALL.to_vec(),
    };
    let ctx = Context::new(args)?;
    let mut reports = Vec::new();
    for check in suite {
        let report = ctx.run(check)?;
        if !args.json {
            writeln!(stdout, "{}", report.summary_line()).map_err(|e| CliError::Write(e.to_string()))?;
        }
        reports.push(report);
    }
    let pass = reports.iter().all(Report::passed);
    let body = if args.json {
        let mut s = serde_json::to_string_pretty(&VerifyJson {
            series: ctx.series,
            rank: ctx.rank,
            spec: ctx.spec.key(),
            pass,
            reports: &reports,
        })
        .expect("reports serialize");
        s.push('\n');
        s
    } else {
        reports
            .iter()
            .filter(|r| !r.passed())
            .flat_map(|r| r.to_string().lines().skip(1).map(|l| format!("{l}\n")).collect::<Vec<_>>())
            .collect()
    };
    write_output(args.out.as_deref(), &body, stdout)?;
    Ok(if pass { EXIT_OK } else { EXIT_FAIL })
}

fn cmd_export(args: &CommonArgs, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let ctx = Context::new(args)?;
    let format = parse_format(args)?;
    let body = match args.what.as_deref().unwrap_or("brackets") {
        "brackets" => export::structure_table(ctx.series, ctx.rank, ctx.alg()?.table(), format),
        "delta" => export::cocommutator(ctx.delta()?, format),
        "rmatrix" => export::r_matrix(ctx.r()?, format),
        "pairing" => export::pairing(ctx.triple()?, format),
        "matrices" => match ctx.series {
            Series::C => export::rep_matrices(&reps::bosonic_rep(ctx.series, ctx.rank, ctx.cutoff, None)?, format),
            _ => export::rep_matrices(&reps::fermionic_rep(ctx.series, ctx.rank, None)?, format),
        },
        "discrepancies" => {
            let grid = [(ctx.series, ctx.rank)];
            let found = bialgebra::find_discrepancies(&grid)?;
            match format {
                Format::Text => bialgebra::render_discrepancies(&grid, &found),
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&found).expect("discrepancies serialize");
                    s.push('\n');
                    s
                }
            }
        }
        other => return Err(CliError::Usage(format!("unknown --what {other:?}"))),
    };
    write_output(args.out.as_deref(), &body, stdout)?;
    Ok(EXIT_OK)
}

/// Runs one command, returning the process exit code. Errors go to `stderr`.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let (args, cmd): (CommonArgs, fn(&CommonArgs, &mut dyn Write) -> Result<i32, CliError>) = match cli.command {
        Command::Build(a) => (a, cmd_build),
        Command::Verify(a) => (a, cmd_verify),
        Command::Export(a) => (a, cmd_export),
    };
    let result = args.merged().and_then(|args| {
        if let Some(n) = args.jobs {
            if n == 0 {
                return Err(CliError::Usage("--jobs must be at least 1".into()));
            }
            // the global pool can only be configured once per process
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        cmd(&args, stdout)
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "{e}");
            e.code()
        }
    }
}

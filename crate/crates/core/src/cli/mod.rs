//! The `credal` command-line front end.
//!
//! Exit codes: 0 when the answer is yes (or a value was computed), 1 when it
//! is no or the request fails in the domain (sure loss, no extension, ...),
//! 2 on parse and validation errors, 3 when an enumeration cap is exceeded.

pub mod file;
pub mod report;
pub mod syntax;

use crate::bernstein::{enclosure_convergence, BernsteinPoly, Polynomial};
use crate::combinatorics::{CountDomain, CountGamble, Domain, Gamble, Space, TupleDomain};
use crate::error::Error;
use crate::exchangeability::{check_time_consistency, CountFamily};
use crate::extension::{vacuous_exchangeable, EneProblem, ExtensionProblem, ExtensionVerdict};
use crate::prevision::{Coherence, LowerPrevision, Model, SureLossVerdict};
use crate::representation::{binary_moments, frequency_convergence_report, mean_square_bound_check, RepresentingPrevision};
use clap::{Args, Parser, Subcommand};
use file::{AssessmentFile, Loaded};
use report::{count_gamble_field, count_values, describe, gamble_field, tuple_values, Field, Report};
use std::path::{Path, PathBuf};
use std::time::Instant;
use syntax::{parse_gamble_spec, parse_labels, parse_levels, parse_polynomial, parse_theta, tuple_gamble};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    /// A parse or validation error at `path`.
    pub fn parse(path: &str, message: impl std::fmt::Display) -> Self {
        Self { code: 2, message: format!("{path}: {message}") }
    }

    pub fn domain(message: impl std::fmt::Display) -> Self {
        Self { code: 1, message: message.to_string() }
    }

    pub fn within(self, prefix: &str) -> Self {
        Self { code: self.code, message: format!("{prefix}: {}", self.message) }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::CapExceeded { .. } => 3,
            Error::UnknownLabel(_)
            | Error::InvalidSpace(_)
            | Error::BadPermutation { .. }
            | Error::DomainMismatch(_)
            | Error::InvalidMass(_)
            | Error::InvalidSimplexPoint(_)
            | Error::DegreeTooLow { .. }
            | Error::InvalidArgument(_) => 2,
            _ => 1,
        };
        Self { code, message: e.to_string() }
    }
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Parser, Debug)]
#[command(name = "credal", version, about = "Exact coherent lower previsions and exchangeability on finite spaces")]
struct Cli {
    /// Print a machine-readable report with exact rationals only.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Does the assessment avoid sure loss?
    CheckAsl { file: PathBuf },
    /// Is the assessment coherent?
    CheckCoherence { file: PathBuf },
    /// Natural extension of a gamble.
    Natex {
        file: PathBuf,
        #[arg(long)]
        gamble: String,
    },
    /// Exchangeable natural extension of a tuple-mode assessment.
    Ene {
        file: PathBuf,
        #[arg(long)]
        gamble: String,
    },
    /// Vacuous exchangeable lower prevision of a gamble; the file supplies the domain.
    Vacuous {
        file: PathBuf,
        #[arg(long)]
        gamble: String,
    },
    /// Extend an exchangeable model to more variables.
    Extend {
        file: PathBuf,
        /// Total number of variables after extending.
        #[arg(long)]
        to: u32,
        /// Gamble on the extended domain whose smallest-extension value is reported.
        #[arg(long)]
        eval: Option<String>,
    },
    /// Time consistency between every pair of levels (one file per level).
    TimeConsistent {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Representing lower prevision of a polynomial, from a time-consistent family.
    Represent {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        poly: Option<String>,
        /// Bernstein degree at which to decompose the polynomial.
        #[arg(long)]
        degree: Option<u32>,
        /// Report lower moments of the second label's component up to this order.
        #[arg(long)]
        moments: Option<u32>,
    },
    /// Bernstein polynomials on the simplex.
    Bernstein {
        #[command(subcommand)]
        op: BernsteinOp,
    },
    /// Lower previsions of a polynomial of the frequencies, level by level.
    Converge {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        #[arg(long)]
        poly: String,
        /// Inclusive range `a..b`.
        #[arg(long)]
        levels: String,
    },
    /// Mean-square bound on the difference of sample means over n and n + p observations.
    Meansq {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Gamble on one variable, `label=value;...`.
        #[arg(long)]
        f: String,
        #[arg(long)]
        n: u32,
        #[arg(long)]
        p: u32,
    },
}

#[derive(Args, Debug)]
struct PolyInput {
    #[arg(long, default_value = "0,1")]
    labels: String,
    /// Monomial form `label:exp,...=coef;...`.
    #[arg(long, conflicts_with = "coeffs")]
    poly: Option<String>,
    /// Bernstein coefficients `label:count,...=value;...;default=v` at `--degree`.
    #[arg(long)]
    coeffs: Option<String>,
    #[arg(long)]
    degree: Option<u32>,
}

#[derive(Subcommand, Debug)]
enum BernsteinOp {
    /// Evaluate at a simplex point.
    Eval {
        #[command(flatten)]
        input: PolyInput,
        /// `label:value,...`; omitted labels are 0.
        #[arg(long)]
        theta: String,
    },
    /// Raise the degree.
    Elevate {
        #[command(flatten)]
        input: PolyInput,
        #[arg(long)]
        by: u32,
    },
    /// Bernstein coefficients of a polynomial.
    Decompose {
        #[command(flatten)]
        input: PolyInput,
    },
    /// Range enclosures at increasing degrees.
    Enclose {
        #[command(flatten)]
        input: PolyInput,
        /// Comma-separated degrees; defaults to the input degree.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<u32>,
        /// Grid resolution for the comparison evaluation.
        #[arg(long, default_value_t = 8)]
        grid: u32,
    },
}

/// Runs the command line `argv` (program name first).
pub fn run<I, S>(argv: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome { code: 0, stdout: text, stderr: String::new() }
                }
                _ => Outcome { code: 2, stdout: String::new(), stderr: text },
            };
        }
    };
    let name = command_name(&cli.command);
    let start = Instant::now();
    match execute(&cli.command) {
        Ok((code, report)) => {
            let stdout = if cli.json { report.json() } else { report.human(start.elapsed()) };
            Outcome { code, stdout, stderr: String::new() }
        }
        Err(e) => {
            let stdout = if cli.json {
                let mut report = Report::new(name);
                report.field("error", Field::Text(e.message.clone())).field("exit_code", Field::Int(e.code.into()));
                report.json()
            } else {
                String::new()
            };
            Outcome { code: e.code, stdout, stderr: format!("error: {}\n", e.message) }
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::CheckAsl { .. } => "check-asl",
        Command::CheckCoherence { .. } => "check-coherence",
        Command::Natex { .. } => "natex",
        Command::Ene { .. } => "ene",
        Command::Vacuous { .. } => "vacuous",
        Command::Extend { .. } => "extend",
        Command::TimeConsistent { .. } => "time-consistent",
        Command::Represent { .. } => "represent",
        Command::Bernstein { op } => match op {
            BernsteinOp::Eval { .. } => "bernstein eval",
            BernsteinOp::Elevate { .. } => "bernstein elevate",
            BernsteinOp::Decompose { .. } => "bernstein decompose",
            BernsteinOp::Enclose { .. } => "bernstein enclose",
        },
        Command::Converge { .. } => "converge",
        Command::Meansq { .. } => "meansq",
    }
}

type Executed = Result<(i32, Report), CliError>;

fn execute(command: &Command) -> Executed {
    let mut report = Report::new(command_name(command));
    let code = match command {
        Command::CheckAsl { file } => check_asl(&load(file)?, &mut report)?,
        Command::CheckCoherence { file } => check_coherence(&load(file)?, &mut report)?,
        Command::Natex { file, gamble } => natex(&load(file)?, gamble, &mut report)?,
        Command::Ene { file, gamble } => ene(&load(file)?, gamble, &mut report)?,
        Command::Vacuous { file, gamble } => vacuous(&load(file)?, gamble, &mut report)?,
        Command::Extend { file, to, eval } => extend(&load(file)?, *to, eval.as_deref(), &mut report)?,
        Command::TimeConsistent { files } => time_consistent(&family(files)?, &mut report)?,
        Command::Represent { files, poly, degree, moments } => {
            represent(family(files)?, poly.as_deref(), *degree, *moments, &mut report)?
        }
        Command::Bernstein { op } => bernstein(op, &mut report)?,
        Command::Converge { files, poly, levels } => converge(family(files)?, poly, levels, &mut report)?,
        Command::Meansq { files, f, n, p } => meansq(files, f, *n, *p, &mut report)?,
    };
    Ok((code, report))
}

fn load(path: &Path) -> Result<Loaded, CliError> {
    AssessmentFile::read(path)?
        .validate()
        .map_err(|e| e.within(&path.display().to_string()))
}

fn family(files: &[PathBuf]) -> Result<CountFamily, CliError> {
    let mut models = Vec::with_capacity(files.len());
    for path in files {
        let model = load(path)?.count_model().map_err(|e| e.within(&path.display().to_string()))?;
        models.push(model);
    }
    let space = models[0].domain().space().clone();
    Ok(CountFamily::new(space, models)?)
}

fn verdict_code(yes: bool) -> i32 {
    if yes {
        0
    } else {
        1
    }
}

fn mode_field(loaded: &Loaded) -> (Field, Field) {
    match loaded {
        Loaded::Tuple(m) => (Field::Text("tuple".into()), describe(m.domain())),
        Loaded::Count(m) => (Field::Text("count".into()), describe(m.domain())),
    }
}

fn header(loaded: &Loaded, report: &mut Report) {
    let (mode, domain) = mode_field(loaded);
    report.field("mode", mode).field("domain", domain);
}

fn mass_field(loaded: &Loaded, mass: &[crate::Rational]) -> Field {
    match loaded {
        Loaded::Tuple(m) => tuple_values(m.domain(), mass),
        Loaded::Count(m) => count_values(m.domain(), mass),
    }
}

fn sure_loss(loaded: &Loaded) -> Result<SureLossVerdict, CliError> {
    let verdict = match loaded {
        Loaded::Tuple(Model::Assessed(a)) => a.avoids_sure_loss()?,
        Loaded::Count(Model::Assessed(a)) => a.avoids_sure_loss()?,
        Loaded::Tuple(Model::Envelope(c)) => SureLossVerdict::Avoids { dominating_mass: c.points()[0].clone() },
        Loaded::Count(Model::Envelope(c)) => SureLossVerdict::Avoids { dominating_mass: c.points()[0].clone() },
    };
    Ok(verdict)
}

fn check_asl(loaded: &Loaded, report: &mut Report) -> Result<i32, CliError> {
    header(loaded, report);
    let verdict = sure_loss(loaded)?;
    report.field("avoids_sure_loss", Field::Bool(verdict.avoids()));
    match &verdict {
        SureLossVerdict::Avoids { dominating_mass } => {
            report
                .field("dominating_mass", mass_field(loaded, dominating_mass))
                .field("multipliers", Field::Null);
        }
        SureLossVerdict::SureLoss { multipliers } => {
            report.field("dominating_mass", Field::Null).field("multipliers", Field::numbers(multipliers));
        }
    }
    Ok(verdict_code(verdict.avoids()))
}

fn check_coherence(loaded: &Loaded, report: &mut Report) -> Result<i32, CliError> {
    header(loaded, report);
    let coherence = match loaded {
        Loaded::Tuple(Model::Assessed(a)) => a.coherence()?,
        Loaded::Count(Model::Assessed(a)) => a.coherence()?,
        Loaded::Tuple(Model::Envelope(_)) | Loaded::Count(Model::Envelope(_)) => Coherence::Coherent,
    };
    report.field("coherent", Field::Bool(coherence.is_coherent()));
    let (reason, multipliers, item, assessed, natex) = match &coherence {
        Coherence::Coherent => ("coherent", Field::Null, Field::Null, Field::Null, Field::Null),
        Coherence::SureLoss { multipliers } => {
            ("sure_loss", Field::numbers(multipliers), Field::Null, Field::Null, Field::Null)
        }
        Coherence::PriceRaised { index, assessed, natural_extension } => (
            "price_raised",
            Field::Null,
            Field::Int(*index as i64),
            Field::Number(assessed.clone()),
            Field::Number(natural_extension.clone()),
        ),
    };
    report
        .field("reason", Field::Text(reason.into()))
        .field("multipliers", multipliers)
        .field("item", item)
        .field("assessed", assessed)
        .field("natural_extension", natex);
    Ok(verdict_code(coherence.is_coherent()))
}

enum ParsedGamble {
    Tuple(Gamble),
    Count(CountGamble),
}

fn parse_gamble_for(loaded: &Loaded, text: &str, flag: &str) -> Result<ParsedGamble, CliError> {
    let spec = parse_gamble_spec(text).map_err(|e| rename_flag(e, flag))?;
    match loaded {
        Loaded::Tuple(m) => Ok(ParsedGamble::Tuple(tuple_gamble(&spec, m.domain(), flag)?)),
        Loaded::Count(m) => Ok(ParsedGamble::Count(syntax::count_gamble(&spec, m.domain(), flag)?)),
    }
}

fn rename_flag(e: CliError, flag: &str) -> CliError {
    CliError { code: e.code, message: e.message.replacen("--gamble", flag, 1) }
}

fn natex(loaded: &Loaded, gamble: &str, report: &mut Report) -> Result<i32, CliError> {
    header(loaded, report);
    let (value, upper, g) = match (loaded, parse_gamble_for(loaded, gamble, "--gamble")?) {
        (Loaded::Tuple(m), ParsedGamble::Tuple(g)) => (m.lower(&g)?, m.upper(&g)?, gamble_field(&g)),
        (Loaded::Count(m), ParsedGamble::Count(g)) => (m.lower(&g)?, m.upper(&g)?, count_gamble_field(&g)),
        _ => unreachable!("gamble parsed in the file's mode"),
    };
    report
        .field("gamble", g)
        .field("value", Field::Number(value))
        .field("upper", Field::Number(upper));
    Ok(0)
}

fn ene(loaded: &Loaded, gamble: &str, report: &mut Report) -> Result<i32, CliError> {
    header(loaded, report);
    let problem = EneProblem::new(loaded.tuple_assessment()?.clone());
    let ParsedGamble::Tuple(g) = parse_gamble_for(loaded, gamble, "--gamble")? else {
        unreachable!("tuple-mode file")
    };
    report.field("gamble", gamble_field(&g));
    match problem.exists()? {
        SureLossVerdict::Avoids { .. } => {
            report
                .field("exists", Field::Bool(true))
                .field("multipliers", Field::Null)
                .field("value", Field::Number(problem.value(&g)?));
            Ok(0)
        }
        SureLossVerdict::SureLoss { multipliers } => {
            report
                .field("exists", Field::Bool(false))
                .field("multipliers", Field::numbers(&multipliers))
                .field("value", Field::Null);
            Ok(1)
        }
    }
}

fn vacuous(loaded: &Loaded, gamble: &str, report: &mut Report) -> Result<i32, CliError> {
    header(loaded, report);
    let (g, value) = match parse_gamble_for(loaded, gamble, "--gamble")? {
        ParsedGamble::Tuple(g) => (gamble_field(&g), vacuous_exchangeable(&g)),
        ParsedGamble::Count(g) => (count_gamble_field(&g), g.min()),
    };
    report.field("gamble", g).field("value", Field::Number(value));
    Ok(0)
}

fn extend(loaded: &Loaded, to: u32, eval: Option<&str>, report: &mut Report) -> Result<i32, CliError> {
    let base = loaded.count_model()?;
    let level = base.domain().level();
    if to <= level {
        return Err(CliError::parse("--to", format!("must exceed the base level {level}")));
    }
    let problem = ExtensionProblem::new(base, to - level);
    let target = problem.target_domain();
    // an --eval gamble is read in the file's mode, on `to` variables
    let h = match eval {
        None => None,
        Some(text) => {
            let spec = parse_gamble_spec(text).map_err(|e| rename_flag(e, "--eval"))?;
            Some(match loaded {
                Loaded::Tuple(m) => {
                    let domain = TupleDomain::new(m.domain().space().clone(), to)?;
                    crate::combinatorics::muhy_gamble(&tuple_gamble(&spec, &domain, "--eval")?)
                }
                Loaded::Count(_) => syntax::count_gamble(&spec, &target, "--eval")?,
            })
        }
    };
    let extendability = problem.extendable()?;
    report
        .field("mode", mode_field(loaded).0)
        .field("base_level", Field::Int(level.into()))
        .field("target_level", Field::Int(to.into()))
        .field("extendable", Field::Bool(extendability.is_extendable()));
    match &extendability.verdict {
        ExtensionVerdict::Extendable { witness } => {
            report.field("witness", count_values(&target, witness)).field("certificate", Field::Null);
        }
        ExtensionVerdict::NotExtendable { certificate } => {
            report.field("witness", Field::Null).field(
                "certificate",
                Field::object([
                    ("gamble", count_gamble_field(&certificate.gamble)),
                    ("base_value", Field::Number(certificate.base_value.clone())),
                    ("extended_max", Field::Number(certificate.extended_max.clone())),
                ]),
            );
        }
    }
    report.field("preserves_base", Field::optional(extendability.preserves_base.map(Field::Bool)));
    let value = match (&h, extendability.is_extendable()) {
        (Some(h), true) => Field::Number(problem.smallest_extension(h)?),
        _ => Field::Null,
    };
    report.field("value", value);
    Ok(verdict_code(extendability.is_extendable()))
}

fn time_consistent(fam: &CountFamily, report: &mut Report) -> Result<i32, CliError> {
    let levels: Vec<u32> = fam.levels().map(|(n, _)| n).collect();
    let mut pairs = Vec::new();
    let (mut consistent, mut complete) = (true, true);
    for (i, &n) in levels.iter().enumerate() {
        for &next in &levels[i + 1..] {
            let tc = check_time_consistency(fam, n, next - n)?;
            consistent &= tc.consistent;
            complete &= tc.complete;
            let witness = tc.witness.map(|w| {
                Field::object([
                    ("gamble", count_gamble_field(&w.gamble)),
                    ("level_value", Field::Number(w.level_value)),
                    ("extended_value", Field::Number(w.extended_value)),
                ])
            });
            pairs.push(Field::object([
                ("level", Field::Int(n.into())),
                ("next", Field::Int(next.into())),
                ("consistent", Field::Bool(tc.consistent)),
                ("complete", Field::Bool(tc.complete)),
                ("witness", Field::optional(witness)),
            ]));
        }
    }
    report
        .field("levels", Field::List(levels.iter().map(|&n| Field::Int(n.into())).collect()))
        .field("consistent", Field::Bool(consistent))
        .field("complete", Field::Bool(complete))
        .field("pairs", Field::List(pairs));
    Ok(verdict_code(consistent))
}

fn levels_field(fam: &CountFamily) -> Field {
    Field::List(fam.levels().map(|(n, _)| Field::Int(n.into())).collect())
}

fn represent(
    fam: CountFamily,
    poly: Option<&str>,
    degree: Option<u32>,
    moments: Option<u32>,
    report: &mut Report,
) -> Result<i32, CliError> {
    if poly.is_none() && moments.is_none() {
        return Err(CliError::parse("--poly", "give --poly, --moments, or both"));
    }
    report.field("levels", levels_field(&fam));
    let space = fam.space().clone();
    let r = RepresentingPrevision::from_family(fam)?;
    let (degree_field, value, upper) = match poly {
        None => (Field::Null, Field::Null, Field::Null),
        Some(text) => {
            let p = parse_polynomial(&space, text)?;
            let n = degree.unwrap_or(p.degree());
            let b = p.to_bernstein(n)?;
            let negated = BernsteinPoly::new(-b.coefficients());
            (Field::Int(n.into()), Field::Number(r.value(&b)?), Field::Number(-r.value(&negated)?))
        }
    };
    report.field("degree", degree_field).field("value", value).field("upper", upper);
    let moments = match moments {
        None => Field::Null,
        Some(m) => Field::numbers(&binary_moments(&r, m)?),
    };
    report.field("moments", moments);
    Ok(0)
}

fn bernstein_input(input: &PolyInput) -> Result<(Space, BernsteinPoly), CliError> {
    let space = parse_labels(&input.labels)?;
    let b = match (&input.poly, &input.coeffs) {
        (Some(text), None) => {
            let p: Polynomial = parse_polynomial(&space, text)?;
            p.to_bernstein(input.degree.unwrap_or(p.degree()))?
        }
        (None, Some(text)) => {
            let degree = input.degree.ok_or_else(|| CliError::parse("--degree", "required with --coeffs"))?;
            let spec = parse_gamble_spec(text).map_err(|e| rename_flag(e, "--coeffs"))?;
            let domain = CountDomain::new(space.clone(), degree);
            BernsteinPoly::new(syntax::count_gamble(&spec, &domain, "--coeffs")?)
        }
        _ => return Err(CliError::parse("--poly", "give exactly one of --poly and --coeffs")),
    };
    Ok((space, b))
}

fn coefficients(report: &mut Report, b: &BernsteinPoly) {
    report
        .field("degree", Field::Int(b.degree().into()))
        .field("coefficients", count_gamble_field(b.coefficients()));
}

fn bernstein(op: &BernsteinOp, report: &mut Report) -> Result<i32, CliError> {
    match op {
        BernsteinOp::Eval { input, theta } => {
            let (space, b) = bernstein_input(input)?;
            let theta = parse_theta(&space, theta)?;
            let value = b.eval(&theta)?;
            coefficients(report, &b);
            report.field("theta", Field::numbers(theta.theta())).field("value", Field::Number(value));
        }
        BernsteinOp::Elevate { input, by } => {
            let (_, b) = bernstein_input(input)?;
            coefficients(report, &b.elevate(*by));
        }
        BernsteinOp::Decompose { input } => {
            if input.poly.is_none() {
                return Err(CliError::parse("--poly", "required"));
            }
            let (_, b) = bernstein_input(input)?;
            coefficients(report, &b);
        }
        BernsteinOp::Enclose { input, degrees, grid } => {
            let (_, b) = bernstein_input(input)?;
            let degrees = if degrees.is_empty() { vec![b.degree()] } else { degrees.clone() };
            let enclosure = enclosure_convergence(&b, &degrees, *grid)?;
            let steps = enclosure
                .steps
                .iter()
                .map(|s| {
                    Field::object([
                        ("degree", Field::Int(s.degree.into())),
                        ("lower", Field::Number(s.lower.clone())),
                        ("upper", Field::Number(s.upper.clone())),
                    ])
                })
                .collect();
            report
                .field("steps", Field::List(steps))
                .field("nested", Field::Bool(enclosure.nested()))
                .field("grid", Field::Int(enclosure.grid.into()))
                .field("grid_min", Field::Number(enclosure.grid_min.clone()))
                .field("grid_max", Field::Number(enclosure.grid_max.clone()));
        }
    }
    Ok(0)
}

fn converge(fam: CountFamily, poly: &str, levels: &str, report: &mut Report) -> Result<i32, CliError> {
    let levels = parse_levels(levels)?;
    let space = fam.space().clone();
    let p = parse_polynomial(&space, poly)?;
    let r = RepresentingPrevision::from_family(fam)?;
    let convergence = frequency_convergence_report(&r, &p, levels)?;
    let gaps = convergence.gaps();
    let values = convergence
        .values
        .iter()
        .enumerate()
        .map(|(i, (n, v))| {
            Field::object([
                ("level", Field::Int((*n).into())),
                ("value", Field::Number(v.clone())),
                ("gap", Field::optional(gaps.as_ref().map(|g| Field::Number(g[i].1.clone())))),
            ])
        })
        .collect();
    report
        .field("values", Field::List(values))
        .field("limit", Field::optional(convergence.limit.map(Field::Number)));
    Ok(0)
}

fn meansq(files: &[PathBuf], f: &str, n: u32, p: u32, report: &mut Report) -> Result<i32, CliError> {
    let fam = family(files)?;
    let model = fam.level(n + p)?;
    let domain = TupleDomain::new(fam.space().clone(), 1)?;
    let spec = parse_gamble_spec(f).map_err(|e| rename_flag(e, "--f"))?;
    let f = tuple_gamble(&spec, &domain, "--f")?;
    let check = mean_square_bound_check(model, &f, n, p)?;
    report
        .field("n", Field::Int(n.into()))
        .field("p", Field::Int(p.into()))
        .field("f", gamble_field(&f))
        .field("value", Field::Number(check.value.clone()))
        .field("bound", Field::Number(check.bound.clone()))
        .field("holds", Field::Bool(check.holds()));
    Ok(verdict_code(check.holds()))
}

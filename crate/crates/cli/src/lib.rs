//! Command implementations for the `ospread` binary.
//!
//! Machine-readable JSON goes to `out`, a one-line human summary to `err`.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use ospread::analysis::classify_tower;
use ospread::io::{read_spread, spread_to_string, write_spread};
use ospread::{
    default_chain, desarguesian_spread, orbit_spread, restrict_spread, verify_spread,
    ClassificationJson, ContextJson, Error, Geometry, Kind, Mode, Spread, SpreadParams,
};

#[derive(Debug, Parser)]
#[command(name = "ospread", version, about = "Cyclic symplectic and elliptic spreads in characteristic 2")]
pub struct Cli {
    /// Largest ambient field degree 2·e·m to accept.
    #[arg(long, global = true, default_value_t = ospread::field::DEFAULT_MAX_DEGREE)]
    pub max_degree: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a spread as a circle-group orbit and write it as JSON.
    Construct(ConstructArgs),
    /// Check the spread axioms for a spread file.
    Verify(VerifyArgs),
    /// Count Galois classes of elliptic parameters over a divisor chain.
    Classify(ClassifyArgs),
    /// Replace each member of a symplectic spread by its singular vectors.
    Restrict(RestrictArgs),
    /// Print context metadata.
    Info(InfoArgs),
}

#[derive(Debug, Args)]
pub struct ConstructArgs {
    #[arg(long)]
    pub e: u32,
    #[arg(long)]
    pub m: u32,
    /// Divisor chain m,…,1; defaults to the prime-factorization chain.
    #[arg(long, value_delimiter = ',')]
    pub chain: Option<Vec<u32>>,
    /// Exponents k_1,… selecting the ζ-elements.
    #[arg(long, value_delimiter = ',')]
    pub zetas: Vec<u64>,
    #[arg(long, default_value = "elliptic")]
    pub kind: String,
    /// Build the desarguesian spread (orbit of the middle field) instead.
    #[arg(long, conflicts_with_all = ["chain", "zetas"])]
    pub desarguesian: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long, default_value = "counting")]
    pub mode: String,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[arg(long)]
    pub e: u32,
    /// Defaults to the first chain entry.
    #[arg(long)]
    pub m: Option<u32>,
    #[arg(long, value_delimiter = ',')]
    pub chain: Option<Vec<u32>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RestrictArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InfoArgs {
    #[arg(long)]
    pub e: u32,
    #[arg(long)]
    pub m: u32,
}

#[derive(Debug, Serialize)]
struct Info {
    context: ContextJson,
    degree: u32,
    q: u64,
    theta0_exponent: u64,
    circle_order: u64,
    subfield_degrees: Vec<u32>,
    default_chain: Vec<u32>,
}

#[derive(Debug, Serialize)]
struct Written<'a> {
    out: &'a str,
    kind: Kind,
    members: usize,
}

/// Exit status for a library error: 3 for budgets, 1 for failed
/// constructions, 2 for everything caused by the input.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::Resource(_) => 3,
        Error::Construction(_) => 1,
        _ => 2,
    }
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> ospread::Result<i32> {
    let max = cli.max_degree;
    match cli.command {
        Command::Construct(a) => construct(a, max, out, err),
        Command::Verify(a) => verify(a, out, err),
        Command::Classify(a) => classify(a, max, out, err),
        Command::Restrict(a) => restrict(a, out, err),
        Command::Info(a) => info(a, max, out),
    }
}

fn emit_spread(s: &Spread, path: Option<&PathBuf>, out: &mut dyn Write) -> ospread::Result<()> {
    match path {
        Some(p) => {
            write_spread(p, s)?;
            let summary = Written {
                out: &p.to_string_lossy(),
                kind: s.kind(),
                members: s.len(),
            };
            writeln!(out, "{}", serde_json::to_string_pretty(&summary)?)?;
        }
        None => write!(out, "{}", spread_to_string(s))?,
    }
    Ok(())
}

fn construct(a: ConstructArgs, max: u32, out: &mut dyn Write, err: &mut dyn Write) -> ospread::Result<i32> {
    let geo = Geometry::with_max_degree(a.e, a.m, max)?;
    let spread = if a.desarguesian {
        desarguesian_spread(geo.frame())?
    } else {
        let kind: Kind = a.kind.parse()?;
        let chain = match a.chain {
            Some(c) => c,
            None => default_chain(a.m)?,
        };
        let params = SpreadParams::new(geo.tower(chain)?, kind, a.zetas)?;
        orbit_spread(geo.frame(), &params)?
    };
    writeln!(
        err,
        "constructed {:?} spread with {} members of dimension {}",
        spread.kind(),
        spread.len(),
        spread.members().first().map_or(0, |x| x.dim())
    )?;
    emit_spread(&spread, a.out.as_ref(), out)?;
    Ok(0)
}

fn verify(a: VerifyArgs, out: &mut dyn Write, err: &mut dyn Write) -> ospread::Result<i32> {
    let mode: Mode = a.mode.parse()?;
    let spread = read_spread(&a.input)?;
    let geo = Geometry::from_ctx(spread.ctx().clone());
    let report = verify_spread(geo.form(), &spread, mode)?;
    writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
    writeln!(
        err,
        "{}: {} members, covered {} of {}",
        if report.pass { "PASS" } else { "FAIL" },
        report.member_count,
        report.covered,
        report.expected
    )?;
    Ok(if report.pass { 0 } else { 1 })
}

fn classify(a: ClassifyArgs, max: u32, out: &mut dyn Write, err: &mut dyn Write) -> ospread::Result<i32> {
    let (m, chain) = match (a.m, a.chain) {
        (_, Some(chain)) if chain.is_empty() => return Err(Error::Parameter("empty chain".into())),
        (Some(m), Some(chain)) => (m, chain),
        (None, Some(chain)) => (chain[0], chain),
        (Some(m), None) => (m, default_chain(m)?),
        (None, None) => return Err(Error::Parameter("classify needs --m or --chain".into())),
    };
    let geo = Geometry::with_max_degree(a.e, m, max)?;
    let result = classify_tower(&geo.tower(chain)?)?;
    let json = ClassificationJson::from(&result);
    let text = serde_json::to_string_pretty(&json)? + "\n";
    match &a.out {
        Some(p) => std::fs::write(p, &text)?,
        None => write!(out, "{text}")?,
    }
    writeln!(
        err,
        "{} classes from {} tuples; bound {}/{}{}",
        result.class_count,
        result.tuple_count,
        result.bound.numer(),
        result.bound.denom(),
        if result.advisory { " (advisory: q^m <= 8)" } else { "" }
    )?;
    Ok(0)
}

fn restrict(a: RestrictArgs, out: &mut dyn Write, err: &mut dyn Write) -> ospread::Result<i32> {
    let spread = read_spread(&a.input)?;
    let geo = Geometry::from_ctx(spread.ctx().clone());
    let restricted = restrict_spread(geo.form(), &spread)?;
    writeln!(err, "restricted {} members", restricted.len())?;
    emit_spread(&restricted, a.out.as_ref(), out)?;
    Ok(0)
}

fn info(a: InfoArgs, max: u32, out: &mut dyn Write) -> ospread::Result<i32> {
    let geo = Geometry::with_max_degree(a.e, a.m, max)?;
    let ctx = geo.ctx();
    let d = ctx.degree();
    let info = Info {
        context: ContextJson::from(&**ctx),
        degree: d,
        q: ctx.q_pow(1),
        theta0_exponent: ctx.q_pow(ctx.m()) - 1,
        circle_order: ctx.circle_order(),
        subfield_degrees: (1..=d).filter(|k| d % k == 0).collect(),
        default_chain: default_chain(a.m)?,
    };
    writeln!(out, "{}", serde_json::to_string_pretty(&info)?)?;
    Ok(0)
}

//! Command-line front end: instance generation, invariance certification,
//! identity suites and expression evaluation.
//!
//! Exit codes: 0 pass, 1 invariant or identity failure, 2 usage or format error.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use geoinv::index_expr::{eval_str, Env};
use geoinv::io::{AnyInstance, InstanceFile};
use geoinv::mappings::{Flags, MappingInstance};
use geoinv::report::check_instance_with;
use geoinv::residual::Tolerance;
use geoinv::suite::{identity_suite, Case};
use geoinv::{Error, Mode, Rational, Scalar};

#[derive(Parser)]
#[command(
    name = "geoinv",
    version,
    about = "Invariants of mappings between non-symmetric affine connection spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded mapping instance.
    Gen(GenArgs),
    /// Evaluate every applicable invariant in both spaces of an instance.
    Check(CheckArgs),
    /// Run the single-space identity suite on random draws.
    Identities(IdentityArgs),
    /// Evaluate an index expression against one space of an instance.
    Eval(EvalArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MappingArg {
    General,
    Geodesic,
    Agm3,
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Source,
    Target,
}

#[derive(clap::Args)]
struct GenArgs {
    #[arg(long, default_value_t = 3)]
    n: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "general")]
    mapping: MappingArg,
    /// Switch s1 (0 or 1); general mappings default to 1.
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    s1: Option<u8>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    s2: Option<u8>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=1))]
    s3: Option<u8>,
    /// Kind of the almost geodesic mapping (agm3 only).
    #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
    p: Option<u8>,
    /// Use the printed second-kind derivative without the factor φ^α (agm3, p = 2).
    #[arg(long)]
    literal_p2: bool,
    #[arg(long, env = "GEOINV_MODE", default_value = "rational")]
    mode: Mode,
    /// Output file; standard output when absent.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

#[derive(clap::Args)]
struct TolArgs {
    /// Relative tolerance (float mode).
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Absolute tolerance (float mode).
    #[arg(long, default_value_t = 1e-12)]
    abs_tol: f64,
}

impl TolArgs {
    fn tolerance(&self) -> Tolerance {
        Tolerance {
            abs: self.abs_tol,
            rel: self.tol,
        }
    }
}

#[derive(clap::Args)]
struct CheckArgs {
    file: PathBuf,
    #[command(flatten)]
    tol: TolArgs,
    /// Write the JSON report here instead of standard output.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Skip the diagnostic term tables.
    #[arg(long)]
    no_diagnostics: bool,
}

#[derive(clap::Args)]
struct IdentityArgs {
    /// Dimension; repeat for several.
    #[arg(long, default_values_t = [4])]
    n: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 20)]
    count: u64,
    #[arg(long, env = "GEOINV_MODE", default_value = "rational")]
    mode: Mode,
    #[command(flatten)]
    tol: TolArgs,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(clap::Args)]
struct EvalArgs {
    file: PathBuf,
    expr: String,
    #[arg(long, value_enum, default_value = "source")]
    space: SpaceArg,
}

/// A failure with its exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(2, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Check(a) => check(a),
        Command::Identities(a) => identities(a),
        Command::Eval(a) => eval(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}

fn resolve_case(a: &GenArgs) -> Result<Case, Failure> {
    let given = [a.s1, a.s2, a.s3];
    let usage = |m: &str| Failure(2, m.to_string());
    if a.p.is_some() && !matches!(a.mapping, MappingArg::Agm3) {
        return Err(usage("--p applies to agm3 mappings only"));
    }
    if a.literal_p2 && !(matches!(a.mapping, MappingArg::Agm3) && a.p == Some(2)) {
        return Err(usage("--literal-p2 needs --mapping agm3 --p 2"));
    }
    let forced = |fixed: Flags, name: &str| -> Result<(), Failure> {
        let want = [fixed.s1 as u8, fixed.s2 as u8, fixed.s3 as u8];
        if given
            .iter()
            .zip(want)
            .any(|(g, w)| g.is_some_and(|g| g != w))
        {
            return Err(Failure(
                2,
                format!(
                    "{name} mappings need s1={} s2={} s3={}",
                    want[0], want[1], want[2]
                ),
            ));
        }
        Ok(())
    };
    let case = match a.mapping {
        MappingArg::General => {
            let bit = |v: Option<u8>| v.unwrap_or(1) == 1;
            Case::general(a.n, a.seed, Flags::new(bit(a.s1), bit(a.s2), bit(a.s3)))
        }
        MappingArg::Geodesic => {
            forced(Flags::geodesic(), "geodesic")?;
            Case::geodesic(a.n, a.seed)
        }
        MappingArg::Agm3 => {
            forced(Flags::agm3(), "agm3")?;
            Case {
                literal_p2: a.literal_p2,
                ..Case::agm3(a.n, a.seed, a.p.unwrap_or(1))
            }
        }
    };
    if a.n < 2 {
        return Err(usage("--n must be at least 2"));
    }
    Ok(case)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure(2, format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure(2, format!("cannot write output: {e}")))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports always serialize");
    s.push('\n');
    s
}

fn gen(a: GenArgs) -> Result<u8, Failure> {
    let case = resolve_case(&a)?;
    let file = match a.mode {
        Mode::Rational => InstanceFile::from_instance(&case.generate::<Rational>()?),
        Mode::Float => InstanceFile::from_instance(&case.generate::<f64>()?),
    };
    write_output(a.output.as_deref(), &file.to_json_string())?;
    Ok(0)
}

fn check(a: CheckArgs) -> Result<u8, Failure> {
    let file = InstanceFile::load(&a.file)?;
    let tol = a.tol.tolerance();
    let diagnostics = !a.no_diagnostics;
    let report = match file.to_any()? {
        AnyInstance::Rational(inst) => check_instance_with(&inst, tol, diagnostics)?,
        AnyInstance::Float(inst) => check_instance_with(&inst, tol, diagnostics)?,
    };
    eprint!("{}", report.render_table());
    write_output(a.report.as_deref(), &to_json(&report))?;
    Ok(if report.pass { 0 } else { 1 })
}

fn identities(a: IdentityArgs) -> Result<u8, Failure> {
    let tol = a.tol.tolerance();
    let report = match a.mode {
        Mode::Rational => identity_suite::<Rational>(&a.n, a.seed, a.count, tol)?,
        Mode::Float => identity_suite::<f64>(&a.n, a.seed, a.count, tol)?,
    };
    eprint!("{}", report.render_table());
    write_output(a.report.as_deref(), &to_json(&report))?;
    Ok(if report.pass { 0 } else { 1 })
}

fn eval_in<S: Scalar>(
    inst: &MappingInstance<S>,
    expr: &str,
    space: SpaceArg,
) -> Result<(String, String), Failure> {
    let env = match space {
        SpaceArg::Source => {
            let agm = inst.agm.as_ref().map(|b| b.source_data());
            Env::for_space(&inst.source, inst.flags, Some(&inst.xi), agm.as_ref())?
        }
        SpaceArg::Target => {
            let agm = match &inst.agm {
                Some(b) => Some(b.target_data(&inst.target.connection)?),
                None => None,
            };
            Env::for_space(&inst.target, inst.flags, Some(&inst.xi), agm.as_ref())?
        }
    };
    let out = eval_str(expr, &env)?;
    let indices = format!(
        "free indices: {{{};{}}}",
        String::from_iter(&out.upper),
        String::from_iter(&out.lower)
    );
    Ok((to_json(&out.tensor.to_nested_json()), indices))
}

fn eval(a: EvalArgs) -> Result<u8, Failure> {
    let file = InstanceFile::load(&a.file)?;
    let (json, indices) = match file.to_any()? {
        AnyInstance::Rational(inst) => eval_in(&inst, &a.expr, a.space)?,
        AnyInstance::Float(inst) => eval_in(&inst, &a.expr, a.space)?,
    };
    eprintln!("{indices}");
    write_output(None, &json)?;
    Ok(0)
}

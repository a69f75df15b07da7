//! The `mhc` command line.
//!
//! [`run`] does all the work and returns the streams and exit code instead of
//! printing, so the binary stays a thin wrapper and tests can drive it
//! in-process. Nothing is written to stdout unless the command succeeds.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::dsl::{self, DslError, RingExpr};
use crate::error::{Error, Result};
use crate::ghc::{ghc_check, ghc_transfer, kernel_check, Verdict};
use crate::hodge::{FilteredHodgeClass, Flagged};
use crate::output::{self, Format};
use crate::registry::Registry;
use crate::ring::{MotivicClass, Precision};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_CRITERION_FAILS: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mhc", version, about = "Coniveau and level realizations of motivic classes")]
pub struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t, global = true)]
    pub format: Format,
    /// Register the table in FILE before evaluating (repeatable).
    #[arg(long = "load", value_name = "FILE", global = true)]
    pub load: Vec<PathBuf>,
    /// Exit with status 3 when the criterion fails.
    #[arg(long, global = true)]
    pub strict: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Filtration {
    #[default]
    Coniveau,
    Level,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the normal form of an expression.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Print the filtered Poincaré polynomial of a realization.
    Fp {
        #[arg(long, value_enum, default_value_t)]
        filtration: Filtration,
        /// Print graded dimensions instead of nested ones.
        #[arg(long)]
        graded: bool,
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Compare the coniveau and level realizations.
    Ghc {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Test whether the class lies in the kernel of nu - lambda.
    Kernel {
        #[arg(allow_hyphen_values = true)]
        expr: String,
    },
    /// Compare two classes modulo F^m.
    Compare {
        #[arg(long, allow_hyphen_values = true)]
        precision: i64,
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Transfer criterion verdicts between classes equal modulo F^m.
    Transfer {
        #[arg(long, allow_hyphen_values = true)]
        precision: i64,
        #[arg(allow_hyphen_values = true)]
        first: String,
        #[arg(allow_hyphen_values = true)]
        second: String,
    },
    /// Validate and register table files, then list the registry.
    Load {
        #[arg(required = true, value_name = "FILE")]
        files: Vec<PathBuf>,
    },
    /// Print the table of a variety expression in table-file format.
    Dump {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        /// Name written in the header.
        #[arg(long)]
        name: Option<String>,
    },
}

/// Captured result of one invocation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                Outcome { stdout: String::new(), stderr: rendered, code: EXIT_INPUT }
            } else {
                Outcome { stdout: rendered, stderr: String::new(), code: EXIT_OK }
            };
        }
    };
    execute(&cli)
}

pub fn execute(cli: &Cli) -> Outcome {
    let mut stderr = String::new();
    match dispatch(cli, &mut stderr) {
        Ok((stdout, code)) => Outcome { stdout, stderr, code },
        Err(Failure { error, source }) => {
            writeln!(stderr, "error: {error}").unwrap();
            if let (Error::Dsl(d), Some(src)) = (&error, source) {
                stderr.push_str(&caret(src, d));
            }
            Outcome { stdout: String::new(), stderr, code: EXIT_INPUT }
        }
    }
}

/// An input error plus the expression text it points into, if any.
struct Failure<'a> {
    error: Error,
    source: Option<&'a str>,
}

impl<E: Into<Error>> From<E> for Failure<'_> {
    fn from(e: E) -> Self {
        Failure { error: e.into(), source: None }
    }
}

fn normalize<'a>(text: &'a str, registry: &Registry) -> Result<MotivicClass, Failure<'a>> {
    dsl::normalize(text, registry).map_err(|e| Failure { error: e.into(), source: Some(text) })
}

fn dispatch<'a>(cli: &'a Cli, stderr: &mut String) -> Result<(String, i32), Failure<'a>> {
    let mut registry = Registry::new();
    for path in &cli.load {
        load_into(&mut registry, path, stderr)?;
    }
    let format = cli.format;
    let fails = |v: Verdict| cli.strict && v == Verdict::CriterionFails;

    match &cli.command {
        Command::Normalize { expr } => {
            let x = normalize(expr, &registry)?;
            Ok((output::motivic_class(&x, format), EXIT_OK))
        }
        Command::Fp { filtration, graded, expr } => {
            let x = normalize(expr, &registry)?;
            let Flagged { value, soundness } = realize(&x, *filtration, &registry)?;
            let (poly, tag) = if *graded { (value.graded_dims(), "gr") } else { (value.fp(), "fp") };
            let mut out = output::polynomial(&poly, tag, format);
            if format == Format::Text && !soundness.is_exact() {
                writeln!(out, "caveat: {soundness} (composite atoms placed at their least Hodge index)").unwrap();
            }
            Ok((out, EXIT_OK))
        }
        Command::Ghc { expr } => {
            let x = normalize(expr, &registry)?;
            let report = ghc_check(&x, &registry)?;
            let code = if fails(report.verdict) { EXIT_CRITERION_FAILS } else { EXIT_OK };
            Ok((output::ghc_report(&report, format), code))
        }
        Command::Kernel { expr } => {
            let x = normalize(expr, &registry)?;
            let inside = kernel_check(&x, &registry)?;
            let out = match format {
                Format::Machine => format!("kernel {inside}\n"),
                Format::Text if inside => "in the kernel of nu - lambda\n".to_owned(),
                Format::Text => "not in the kernel of nu - lambda\n".to_owned(),
            };
            Ok((out, EXIT_OK))
        }
        Command::Compare { precision, first, second } => {
            let a = normalize(first, &registry)?;
            let b = normalize(second, &registry)?;
            Ok((output::comparison(&a, &b, Precision(*precision), format), EXIT_OK))
        }
        Command::Transfer { precision, first, second } => {
            let a = normalize(first, &registry)?;
            let b = normalize(second, &registry)?;
            let report = ghc_transfer(&a, &b, Precision(*precision), &registry)?;
            let code = if fails(report.a.verdict) || fails(report.b.verdict) { EXIT_CRITERION_FAILS } else { EXIT_OK };
            Ok((output::transfer(&report, format), code))
        }
        Command::Load { files } => {
            for path in files {
                load_into(&mut registry, path, stderr)?;
            }
            let mut out = String::new();
            for name in registry.names() {
                let t = registry.require(name)?;
                match format {
                    Format::Machine => writeln!(out, "table {name} {} {}", t.dim(), t.soundness()).unwrap(),
                    Format::Text => writeln!(out, "{name}: dimension {}, {}", t.dim(), t.soundness()).unwrap(),
                }
            }
            Ok((out, EXIT_OK))
        }
        Command::Dump { expr, name } => {
            let parsed = dsl::parse(expr, &registry).map_err(|e| Failure { error: e.into(), source: Some(expr) })?;
            let RingExpr::Variety(v) = parsed else {
                let error = DslError::Syntax {
                    loc: dsl::Loc { line: 1, col: 1 },
                    expected: vec!["a single variety".to_owned()],
                    found: "a ring expression".to_owned(),
                };
                return Err(Failure { error: error.into(), source: Some(expr) });
            };
            let mut table = v.table(&registry)?;
            if let Some(name) = name {
                table = table.renamed(name.clone());
            }
            Ok((dsl::dump_table(&table), EXIT_OK))
        }
    }
}

fn realize(x: &MotivicClass, filtration: Filtration, registry: &Registry) -> Result<Flagged<FilteredHodgeClass>> {
    Ok(match filtration {
        Filtration::Coniveau => x.realize_nu(registry)?,
        Filtration::Level => x.realize_lambda(registry)?,
    })
}

fn caret(src: &str, e: &DslError) -> String {
    let loc = e.loc();
    let Some(line) = src.lines().nth(loc.line.saturating_sub(1)) else {
        return String::new();
    };
    let pad: String =
        line.chars().take(loc.col.saturating_sub(1)).map(|c| if c == '\t' { '\t' } else { ' ' }).collect();
    format!("  {line}\n  {pad}^\n")
}

fn load_into(registry: &mut Registry, path: &Path, stderr: &mut String) -> Result<()> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    let loaded = dsl::parse_table(&text).map_err(|source| Error::TableFile { path: path.to_owned(), source })?;
    for w in &loaded.warnings {
        writeln!(stderr, "warning: {}: {w}", path.display()).unwrap();
    }
    registry.register(loaded.table)?;
    Ok(())
}

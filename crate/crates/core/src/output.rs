//! Text and machine renderings of results.
//!
//! Machine output is line oriented and deterministic:
//!
//! ```text
//! mc <lexp> <symbols-or-1> <coef>      motivic class terms, sorted by (lexp, symbols)
//! fp <i> <p> <coef>                    filtered Poincaré coefficients, sorted by (i, p)
//! gr <i> <p> <coef>                    graded dimensions (with --graded)
//! ghc <verdict>                        followed by `fail <i> <p> <dimN> <dimF>` lines
//! ```
//!
//! A zero class or polynomial is the single line `0`.

use std::fmt::Write as _;

use crate::ghc::{GhcReport, TransferReport, TransferVerdict};
use crate::hodge::Soundness;
use crate::poly::FPPolynomial;
use crate::ring::{MotivicClass, Precision};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Machine,
}

const FRAGMENT_NOTE: &str = "note: classes are compared in the fragment spanned by registered generators; \
     unequal normal forms are only \"not identified\"";

pub fn motivic_class(x: &MotivicClass, format: Format) -> String {
    match format {
        Format::Text => format!("{x}\n"),
        Format::Machine if x.is_zero() => "0\n".to_owned(),
        Format::Machine => x.terms().map(|(t, c)| format!("mc {} {} {c}\n", t.lexp(), t.symbol_list())).collect(),
    }
}

pub fn polynomial(poly: &FPPolynomial, tag: &str, format: Format) -> String {
    match format {
        Format::Text => format!("{poly}\n"),
        Format::Machine if poly.is_zero() => "0\n".to_owned(),
        Format::Machine => poly.iter().map(|((i, p), c)| format!("{tag} {i} {p} {c}\n")).collect(),
    }
}

pub fn ghc_report(report: &GhcReport, format: Format) -> String {
    let mut out = String::new();
    match format {
        Format::Machine => {
            writeln!(out, "ghc {}", report.verdict).unwrap();
            for f in &report.failures {
                writeln!(out, "fail {} {} {} {}", f.degree, f.step, f.dim_coniveau, f.dim_level).unwrap();
            }
        }
        Format::Text => {
            writeln!(out, "verdict: {}", report.verdict).unwrap();
            writeln!(out, "FP coniveau: {}", report.fp_nu).unwrap();
            writeln!(out, "FP level:    {}", report.fp_lambda).unwrap();
            if report.failures.is_empty() {
                writeln!(out, "failing pairs: none").unwrap();
            }
            for f in &report.failures {
                writeln!(
                    out,
                    "failing pair (i={}, p={}): dim N^p H^i = {}, dim level^p H^i = {}",
                    f.degree, f.step, f.dim_coniveau, f.dim_level
                )
                .unwrap();
            }
            if report.soundness == Soundness::TensorHeuristic {
                writeln!(
                    out,
                    "caveat: input passes through products of non-Tate factors; level placement of \
                     composite atoms is a least-index heuristic, so no verdict is given"
                )
                .unwrap();
            }
            if !report.mixed_sign.is_empty() {
                let cells: Vec<String> = report.mixed_sign.iter().map(|(i, p)| format!("({i},{p})")).collect();
                writeln!(
                    out,
                    "note: coefficients at {} combine contributions of both signs from different terms",
                    cells.join(" ")
                )
                .unwrap();
            }
        }
    }
    out
}

pub fn comparison(a: &MotivicClass, b: &MotivicClass, precision: Precision, format: Format) -> String {
    let diff = a - b;
    let equal = diff.truncate(precision).is_zero();
    match format {
        Format::Machine => {
            let word = if equal { "equal-mod" } else { "unequal-mod" };
            format!("{word} {}\n{}", precision.0, motivic_class(&diff, Format::Machine))
        }
        Format::Text => {
            let mut out = if equal {
                format!("equal modulo F^{}\n", precision.0)
            } else {
                format!("not identified modulo F^{}\n", precision.0)
            };
            writeln!(out, "difference: {diff}").unwrap();
            if !equal {
                writeln!(out, "{FRAGMENT_NOTE}").unwrap();
            }
            out
        }
    }
}

pub fn transfer(report: &TransferReport, format: Format) -> String {
    let m = report.precision.0;
    let mut out = String::new();
    match format {
        Format::Machine => {
            let word = if report.classes_equal { "equal-mod" } else { "unequal-mod" };
            writeln!(out, "classes {word} {m}").unwrap();
            writeln!(out, "ghc-a {}", report.a.verdict).unwrap();
            writeln!(out, "ghc-b {}", report.b.verdict).unwrap();
            writeln!(out, "transfer {}", report.verdict).unwrap();
        }
        Format::Text => {
            if report.classes_equal {
                writeln!(out, "classes: equal modulo F^{m}").unwrap();
            } else {
                writeln!(out, "classes: not identified modulo F^{m} (difference: {})", report.difference).unwrap();
            }
            writeln!(out, "criterion (first):  {}", report.a.verdict).unwrap();
            writeln!(out, "criterion (second): {}", report.b.verdict).unwrap();
            writeln!(
                out,
                "realizations in t-degrees > {}: {}",
                report.degree_bound,
                if report.fp_agree { "agree" } else { "differ" }
            )
            .unwrap();
            let verdict = match report.verdict {
                TransferVerdict::Valid => "valid (criterion verdicts coincide in that range)",
                TransferVerdict::NotEstablished => "no transfer established",
                TransferVerdict::Inconsistent => "inconsistent (equal classes with different realizations)",
            };
            writeln!(out, "transfer: {verdict}").unwrap();
            if !report.classes_equal {
                writeln!(out, "{FRAGMENT_NOTE}").unwrap();
            }
        }
    }
    out
}

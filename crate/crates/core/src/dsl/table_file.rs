//! Line-based table files.
//!
//! ```text
//! # comment
//! variety X_bad dim 3
//! h 0 0 tate 0 1
//! h 3 0 atom T weight 3 hodge 2:1=1,1:2=1 mult 1
//! end
//! ```
//!
//! `tate <k>` is `Q(-k)`. One record per file.

use std::fmt::Write as _;

use thiserror::Error;

use crate::hodge::{HodgeAtom, HodgeClass};
use crate::variety::{Provenance, Severity, VarietyTable, Violation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TableFileError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("table `{name}` rejected: {}", summarize(.violations))]
    Invalid { name: String, violations: Vec<Violation> },
}

fn summarize(violations: &[Violation]) -> String {
    violations.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}

impl TableFileError {
    /// Categories of the violations behind a rejection.
    pub fn categories(&self) -> Vec<&'static str> {
        match self {
            TableFileError::Syntax { .. } => vec!["syntax"],
            TableFileError::Invalid { violations, .. } => violations.iter().map(Violation::category).collect(),
        }
    }
}

/// A table accepted by the loader, with the lints it raised.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoadedTable {
    pub table: VarietyTable,
    pub warnings: Vec<Violation>,
}

fn syntax(line: usize, message: impl Into<String>) -> TableFileError {
    TableFileError::Syntax { line, message: message.into() }
}

fn int<T: std::str::FromStr>(line: usize, what: &str, s: Option<&str>) -> Result<T, TableFileError> {
    let s = s.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    s.parse().map_err(|_| syntax(line, format!("invalid {what} `{s}`")))
}

fn keyword(line: usize, expected: &str, s: Option<&str>) -> Result<(), TableFileError> {
    match s {
        Some(k) if k == expected => Ok(()),
        Some(k) => Err(syntax(line, format!("expected `{expected}`, found `{k}`"))),
        None => Err(syntax(line, format!("expected `{expected}`"))),
    }
}

/// `((a, b), m)` as written; repeated pairs are summed by the atom constructor.
type HodgeEntry = ((i64, i64), u64);

fn parse_hodge(line: usize, field: &str) -> Result<Vec<HodgeEntry>, TableFileError> {
    field
        .split(',')
        .map(|entry| {
            let bad = || syntax(line, format!("invalid Hodge entry `{entry}`, expected <a>:<b>=<m>"));
            let (ab, m) = entry.split_once('=').ok_or_else(bad)?;
            let (a, b) = ab.split_once(':').ok_or_else(bad)?;
            Ok(((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?), m.parse().map_err(|_| bad())?))
        })
        .collect()
}

fn parse_cell(line: usize, text: &str) -> Result<((i64, i64), HodgeClass), TableFileError> {
    let mut fields = text.split_whitespace();
    keyword(line, "h", fields.next())?;
    let i: i64 = int(line, "degree", fields.next())?;
    let p: i64 = int(line, "coniveau step", fields.next())?;
    let (atom, mult) = match fields.next() {
        Some("tate") => {
            let k: i64 = int(line, "Tate index", fields.next())?;
            (HodgeAtom::tate(k), int::<i64>(line, "multiplicity", fields.next())?)
        }
        Some("atom") => {
            let id = fields.next().ok_or_else(|| syntax(line, "missing atom identifier"))?;
            if !id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '*') {
                return Err(syntax(line, format!("invalid atom identifier `{id}`")));
            }
            keyword(line, "weight", fields.next())?;
            let w: i64 = int(line, "weight", fields.next())?;
            keyword(line, "hodge", fields.next())?;
            let hodge = parse_hodge(line, fields.next().ok_or_else(|| syntax(line, "missing Hodge numbers"))?)?;
            keyword(line, "mult", fields.next())?;
            let mult = int::<i64>(line, "multiplicity", fields.next())?;
            let atom = HodgeAtom::named(id, w, hodge).map_err(|e| syntax(line, e.to_string()))?;
            (atom, mult)
        }
        Some(other) => return Err(syntax(line, format!("expected `tate` or `atom`, found `{other}`"))),
        None => return Err(syntax(line, "expected `tate` or `atom`")),
    };
    if let Some(extra) = fields.next() {
        return Err(syntax(line, format!("unexpected trailing field `{extra}`")));
    }
    Ok(((i, p), HodgeClass::atom(atom, mult)))
}

/// Parses and validates a table file. Hard violations reject the file;
/// lints are returned as warnings.
pub fn parse_table(text: &str) -> Result<LoadedTable, TableFileError> {
    let mut lines =
        text.lines().enumerate().map(|(n, l)| (n + 1, l.trim())).filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (n, header) = lines.next().ok_or_else(|| syntax(1, "empty table file"))?;
    let mut fields = header.split_whitespace();
    keyword(n, "variety", fields.next())?;
    let name = fields.next().ok_or_else(|| syntax(n, "missing variety name"))?.to_owned();
    keyword(n, "dim", fields.next())?;
    let dim: u32 = int(n, "dimension", fields.next())?;
    if let Some(extra) = fields.next() {
        return Err(syntax(n, format!("unexpected trailing field `{extra}`")));
    }

    let mut cells = Vec::new();
    let mut last = n;
    let mut closed = false;
    for (n, l) in lines.by_ref() {
        last = n;
        if l == "end" {
            closed = true;
            break;
        }
        cells.push(parse_cell(n, l)?);
    }
    if !closed {
        return Err(syntax(last, "missing `end`"));
    }
    if let Some((n, _)) = lines.next() {
        return Err(syntax(n, "content after `end` (one record per file)"));
    }

    let table = VarietyTable::new(name.clone(), dim, cells, Provenance::Loaded);
    let (errors, warnings): (Vec<_>, Vec<_>) =
        table.validate().into_iter().partition(|v| v.severity() == Severity::Error);
    if !errors.is_empty() {
        return Err(TableFileError::Invalid { name, violations: errors });
    }
    Ok(LoadedTable { table, warnings })
}

/// Serializes a table in the format read by [`parse_table`].
pub fn dump_table(table: &VarietyTable) -> String {
    let mut out = format!("variety {} dim {}\n", table.name(), table.dim());
    for ((i, p), class) in table.cells() {
        for (atom, mult) in class.iter() {
            match atom {
                HodgeAtom::Tate(k) => writeln!(out, "h {i} {p} tate {k} {mult}").unwrap(),
                HodgeAtom::Named(_) => {
                    let hodge = atom
                        .hodge_numbers()
                        .iter()
                        .map(|((a, b), m)| format!("{a}:{b}={m}"))
                        .collect::<Vec<_>>()
                        .join(",");
                    writeln!(out, "h {i} {p} atom {} weight {} hodge {hodge} mult {mult}", atom.id(), atom.weight())
                        .unwrap()
                }
            }
        }
    }
    out.push_str("end\n");
    out
}

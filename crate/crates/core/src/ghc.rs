//! The filtered-Poincaré criterion for the generalized Hodge conjecture.
//!
//! GHC holds for a smooth projective `X` exactly when the filtered Poincaré
//! polynomials of its coniveau and level realizations agree; the coefficient
//! of `t^i u^p` compares `(-1)^i dim N^p H^i` with `(-1)^i dim F^p H^i`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::hodge::{gamma, phi, Soundness};
use crate::poly::FPPolynomial;
use crate::registry::Registry;
use crate::ring::{MotivicClass, Precision};
use crate::variety::{VarietyError, VarietyTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    CriterionHolds,
    CriterionFails,
    HeuristicFlagged,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::CriterionHolds => "criterion-holds",
            Verdict::CriterionFails => "criterion-fails",
            Verdict::HeuristicFlagged => "heuristic-flagged",
        })
    }
}

/// A pair `(i, p)` where `dim N^p H^i != dim F^p H^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Failure {
    pub degree: i64,
    pub step: i64,
    pub dim_coniveau: i64,
    pub dim_level: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GhcReport {
    pub verdict: Verdict,
    pub failures: Vec<Failure>,
    pub fp_nu: FPPolynomial,
    pub fp_lambda: FPPolynomial,
    pub soundness: Soundness,
    pub precision: Option<Precision>,
    /// Cells whose coefficient collects contributions of both signs from
    /// different terms, so the per-cell reading may hide cancellation.
    pub mixed_sign: Vec<(i64, i64)>,
}

impl GhcReport {
    fn new(fp_nu: FPPolynomial, fp_lambda: FPPolynomial, soundness: Soundness, mixed_sign: Vec<(i64, i64)>) -> Self {
        let cells: BTreeSet<(i64, i64)> = fp_nu.iter().chain(fp_lambda.iter()).map(|(k, _)| k).collect();
        let failures: Vec<Failure> = cells
            .into_iter()
            .filter_map(|(i, p)| {
                let (n, f) = (fp_nu.coefficient(i, p), fp_lambda.coefficient(i, p));
                let sign = if i.rem_euclid(2) == 0 { 1 } else { -1 };
                (n != f).then_some(Failure { degree: i, step: p, dim_coniveau: sign * n, dim_level: sign * f })
            })
            .collect();
        let verdict = if !soundness.is_exact() {
            Verdict::HeuristicFlagged
        } else if failures.is_empty() {
            Verdict::CriterionHolds
        } else {
            Verdict::CriterionFails
        };
        GhcReport { verdict, failures, fp_nu, fp_lambda, soundness, precision: None, mixed_sign }
    }

    /// Failing pairs with degree strictly above `bound`.
    pub fn failures_above(&self, bound: i64) -> Vec<(i64, i64)> {
        self.failures.iter().filter(|f| f.degree > bound).map(|f| (f.degree, f.step)).collect()
    }
}

/// Criterion for a single table.
pub fn ghc_check_table(table: &VarietyTable) -> GhcReport {
    GhcReport::new(table.nu().fp(), table.lambda().fp(), table.soundness(), Vec::new())
}

/// Criterion for a class of the fragment.
pub fn ghc_check(x: &MotivicClass, registry: &Registry) -> Result<GhcReport, VarietyError> {
    let nu = x.realize_nu(registry)?;
    let lambda = x.realize_lambda(registry)?;
    let mixed = mixed_sign_cells(x, registry)?;
    Ok(GhcReport::new(nu.value.fp(), lambda.value.fp(), nu.soundness.join(lambda.soundness), mixed))
}

fn mixed_sign_cells(x: &MotivicClass, registry: &Registry) -> Result<Vec<(i64, i64)>, VarietyError> {
    let mut signs: BTreeMap<(i64, i64), (bool, bool)> = BTreeMap::new();
    for (term, c) in x.terms() {
        let single: MotivicClass = [(term.clone(), c)].into_iter().collect();
        let nu = single.realize_nu(registry)?.value;
        let lambda = gamma(&phi(&nu)).value;
        for (cell, coef) in nu.fp().iter().chain(lambda.fp().iter()) {
            let entry = signs.entry(cell).or_default();
            if coef > 0 {
                entry.0 = true;
            } else {
                entry.1 = true;
            }
        }
    }
    Ok(signs.into_iter().filter(|(_, (pos, neg))| *pos && *neg).map(|(k, _)| k).collect())
}

/// `[X]` lies in the kernel of `nu - lambda`.
pub fn kernel_check(x: &MotivicClass, registry: &Registry) -> Result<bool, VarietyError> {
    Ok(x.realize_nu(registry)?.value == x.realize_lambda(registry)?.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TransferVerdict {
    /// Equal classes and the criterion data agree in the comparable range.
    Valid,
    /// The classes are not identified at this precision.
    NotEstablished,
    /// Equal classes whose realizations disagree; indicates corrupted input.
    Inconsistent,
}

impl fmt::Display for TransferVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TransferVerdict::Valid => "valid",
            TransferVerdict::NotEstablished => "no-transfer",
            TransferVerdict::Inconsistent => "inconsistent",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferReport {
    pub precision: Precision,
    pub classes_equal: bool,
    pub difference: MotivicClass,
    /// Realizations are compared in `t`-degrees strictly above this bound.
    pub degree_bound: i64,
    pub fp_agree: bool,
    pub failures_agree: bool,
    pub a: GhcReport,
    pub b: GhcReport,
    pub verdict: TransferVerdict,
}

/// Terms of virtual dimension `<= -m` realize in weights `<= -2m`, so two
/// classes equal modulo `F^m` have identical realizations above `max(-m, -2m)`.
pub fn degree_bound(precision: Precision) -> i64 {
    (-precision.0).max(-2 * precision.0)
}

/// Transfers criterion verdicts between classes identified in the completion.
pub fn ghc_transfer(
    a: &MotivicClass,
    b: &MotivicClass,
    precision: Precision,
    registry: &Registry,
) -> Result<TransferReport, VarietyError> {
    let mut ra = ghc_check(a, registry)?;
    let mut rb = ghc_check(b, registry)?;
    ra.precision = Some(precision);
    rb.precision = Some(precision);
    let bound = degree_bound(precision);
    let fp_agree = ra.fp_nu.t_degree_above(bound) == rb.fp_nu.t_degree_above(bound)
        && ra.fp_lambda.t_degree_above(bound) == rb.fp_lambda.t_degree_above(bound);
    let failures_agree = ra.failures_above(bound) == rb.failures_above(bound);
    let classes_equal = a.equal_mod(b, precision);
    let verdict = match (classes_equal, fp_agree && failures_agree) {
        (false, _) => TransferVerdict::NotEstablished,
        (true, true) => TransferVerdict::Valid,
        (true, false) => TransferVerdict::Inconsistent,
    };
    Ok(TransferReport {
        precision,
        classes_equal,
        difference: a - b,
        degree_bound: bound,
        fp_agree,
        failures_agree,
        a: ra,
        b: rb,
        verdict,
    })
}

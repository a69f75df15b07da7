//! The computable fragment of the Grothendieck ring of varieties, localized
//! at the Lefschetz class `L` and truncated along the dimension filtration.
//!
//! Elements are integer combinations of terms `s_1 * ... * s_k * L^j` where
//! the `s_i` are registered generator symbols. Points and projective spaces
//! (and genus-0 curves) are expanded eagerly into polynomials in `L`, so two
//! classes are equal in the fragment exactly when their canonical forms agree.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::hodge::{gamma, phi, FilteredHodgeClass, Flagged, Soundness};
use crate::registry::{curve_symbol, curve_symbol_genus, Registry};
use crate::variety::{VarietyError, VarietyExpr};

/// A generator of the fragment: a named smooth projective variety.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    name: String,
    dim: u32,
}

impl Symbol {
    pub fn new(name: impl Into<String>, dim: u32) -> Self {
        Symbol { name: name.into(), dim }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }
}

/// A monomial: sorted multiset of symbols times a power of `L`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Term {
    lexp: i64,
    symbols: Vec<Symbol>,
}

impl Term {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>, lexp: i64) -> Self {
        let mut symbols: Vec<_> = symbols.into_iter().collect();
        symbols.sort();
        Term { lexp, symbols }
    }

    pub fn lexp(&self) -> i64 {
        self.lexp
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    /// Sum of symbol dimensions plus the exponent of `L`.
    pub fn virtual_dim(&self) -> i64 {
        self.symbols.iter().map(|s| i64::from(s.dim)).sum::<i64>() + self.lexp
    }

    pub fn mul(&self, other: &Term) -> Term {
        Term::new(self.symbols.iter().chain(&other.symbols).cloned(), self.lexp + other.lexp)
    }

    /// Comma-separated symbol names, or `1` for a pure power of `L`.
    pub fn symbol_list(&self) -> String {
        if self.symbols.is_empty() {
            "1".to_owned()
        } else {
            self.symbols.iter().map(Symbol::name).collect::<Vec<_>>().join(",")
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.symbols.iter().map(|s| s.name.clone()).collect();
        match self.lexp {
            0 => {}
            1 => parts.push("L".to_owned()),
            j => parts.push(format!("L^{j}")),
        }
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join("*"))
        }
    }
}

/// Comparisons are made modulo `F^m`, the span of terms of virtual
/// dimension `<= -m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Precision(pub i64);

/// An element of the localized fragment `K[L^{-1}]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MotivicClass(BTreeMap<Term, i64>);

impl MotivicClass {
    pub fn zero() -> Self {
        MotivicClass::default()
    }

    pub fn one() -> Self {
        Self::integer(1)
    }

    pub fn integer(n: i64) -> Self {
        [(Term::default(), n)].into_iter().collect()
    }

    pub fn lefschetz_pow(k: i64) -> Self {
        [(Term::new([], k), 1)].into_iter().collect()
    }

    /// `[P^n] = 1 + L + ... + L^n`.
    pub fn projective_space(n: u32) -> Self {
        (0..=i64::from(n)).map(|k| (Term::new([], k), 1)).collect()
    }

    pub fn symbol(symbol: Symbol) -> Self {
        [(Term::new([symbol], 0), 1)].into_iter().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, term: &Term) -> i64 {
        self.0.get(term).copied().unwrap_or(0)
    }

    /// Terms sorted by `(L-exponent, symbols)`.
    pub fn terms(&self) -> impl Iterator<Item = (&Term, i64)> {
        self.0.iter().map(|(t, &c)| (t, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&self, factor: i64) -> MotivicClass {
        self.terms().map(|(t, c)| (t.clone(), c * factor)).collect()
    }

    /// Class of the variety described by `expr`, with blow-ups rewritten by
    /// `[Bl_Z X] = [X] - [Z] + [Z][P^{c-1}]` (the exceptional divisor is a
    /// Zariski-locally trivial `P^{c-1}`-bundle over `Z`).
    pub fn from_variety(expr: &VarietyExpr, registry: &Registry) -> Result<Self, VarietyError> {
        Ok(match expr {
            VarietyExpr::Point => MotivicClass::one(),
            VarietyExpr::ProjSpace(n) => MotivicClass::projective_space(*n),
            VarietyExpr::Curve(0) => MotivicClass::projective_space(1),
            VarietyExpr::Curve(g) => MotivicClass::symbol(Symbol::new(curve_symbol(*g), 1)),
            VarietyExpr::Ref(name) => match curve_symbol_genus(name) {
                Some(g) => Self::from_variety(&VarietyExpr::Curve(g), registry)?,
                None => MotivicClass::symbol(Symbol::new(name.clone(), registry.require(name)?.dim())),
            },
            VarietyExpr::Prod(l, r) => &Self::from_variety(l, registry)? * &Self::from_variety(r, registry)?,
            VarietyExpr::Blowup { ambient, center, codim } => {
                // re-check in case the node was built without the registry
                VarietyExpr::blowup((**ambient).clone(), (**center).clone(), *codim, registry)?;
                let x = Self::from_variety(ambient, registry)?;
                let z = Self::from_variety(center, registry)?;
                let exceptional = &z * &MotivicClass::projective_space(codim - 1);
                &(&x - &z) + &exceptional
            }
        })
    }

    /// Drops every term of virtual dimension `<= -m`.
    pub fn truncate(&self, precision: Precision) -> MotivicClass {
        self.terms().filter(|(t, _)| t.virtual_dim() > -precision.0).map(|(t, c)| (t.clone(), c)).collect()
    }

    pub fn equal_mod(&self, other: &MotivicClass, precision: Precision) -> bool {
        (self - other).truncate(precision).is_zero()
    }

    /// Soundness of realizing this class: a monomial with two or more
    /// non-mixed-Tate factors goes through an unproven Künneth step.
    pub fn realization_soundness(&self, registry: &Registry) -> Result<Soundness, VarietyError> {
        let mut soundness = Soundness::Exact;
        for (term, _) in self.terms() {
            let mut non_tate = 0;
            for s in &term.symbols {
                let table = registry.require(&s.name)?;
                soundness = soundness.join(table.soundness());
                if !table.is_mixed_tate() {
                    non_tate += 1;
                }
            }
            if non_tate >= 2 {
                soundness = Soundness::TensorHeuristic;
            }
        }
        Ok(soundness)
    }

    /// Image under the coniveau homomorphism, extended linearly with
    /// `L -> K` and `L^{-1} -> K^{-1}`.
    pub fn realize_nu(&self, registry: &Registry) -> Result<Flagged<FilteredHodgeClass>, VarietyError> {
        let soundness = self.realization_soundness(registry)?;
        let mut parts = Vec::with_capacity(self.len());
        for (term, c) in self.terms() {
            parts.push(realize_term(term, registry)?.scale(c));
        }
        let value = parts.iter().fold(FilteredHodgeClass::zero(), |acc, x| &acc + x);
        Ok(Flagged { value, soundness })
    }

    /// Image under the level homomorphism, `gamma` applied to the underlying
    /// class in K(HS).
    pub fn realize_lambda(&self, registry: &Registry) -> Result<Flagged<FilteredHodgeClass>, VarietyError> {
        let nu = self.realize_nu(registry)?;
        let level = gamma(&phi(&nu.value));
        Ok(Flagged { value: level.value, soundness: nu.soundness.join(level.soundness) })
    }
}

fn realize_term(term: &Term, registry: &Registry) -> Result<FilteredHodgeClass, VarietyError> {
    let mut acc = FilteredHodgeClass::unit();
    for s in &term.symbols {
        acc = acc.tensor(&registry.require(&s.name)?.nu());
    }
    Ok(acc.tate_twist(term.lexp))
}

impl FromIterator<(Term, i64)> for MotivicClass {
    fn from_iter<I: IntoIterator<Item = (Term, i64)>>(iter: I) -> Self {
        let mut map = BTreeMap::new();
        for (t, c) in iter {
            if c == 0 {
                continue;
            }
            match map.entry(t) {
                Entry::Vacant(slot) => {
                    slot.insert(c);
                }
                Entry::Occupied(mut slot) => {
                    *slot.get_mut() += c;
                    if *slot.get() == 0 {
                        slot.remove();
                    }
                }
            }
        }
        MotivicClass(map)
    }
}

impl fmt::Display for MotivicClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (term, c)) in self.terms().enumerate() {
            if n == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            match (c.abs(), term.symbols.is_empty() && term.lexp == 0) {
                (m, true) => write!(f, "{m}")?,
                (1, false) => write!(f, "{term}")?,
                (m, false) => write!(f, "{m}*{term}")?,
            }
        }
        Ok(())
    }
}

impl Add<&MotivicClass> for &MotivicClass {
    type Output = MotivicClass;
    fn add(self, rhs: &MotivicClass) -> MotivicClass {
        self.terms().chain(rhs.terms()).map(|(t, c)| (t.clone(), c)).collect()
    }
}

impl Neg for &MotivicClass {
    type Output = MotivicClass;
    fn neg(self) -> MotivicClass {
        self.scale(-1)
    }
}

impl Sub<&MotivicClass> for &MotivicClass {
    type Output = MotivicClass;
    fn sub(self, rhs: &MotivicClass) -> MotivicClass {
        self + &(-rhs)
    }
}

impl Mul<&MotivicClass> for &MotivicClass {
    type Output = MotivicClass;
    fn mul(self, rhs: &MotivicClass) -> MotivicClass {
        self.terms().flat_map(|(a, ca)| rhs.terms().map(move |(b, cb)| (a.mul(b), ca * cb))).collect()
    }
}

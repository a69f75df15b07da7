//! Exact arithmetic in K(HS) and K(FHS).
//!
//! A class in K(FHS) is stored through its coniveau-graded pieces: every exact
//! sequence of filtered objects over a semisimple category splits, so the
//! graded data `p -> [Gr^p]` determines the class and equality reduces to
//! comparing finite maps.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use thiserror::Error;

use crate::poly::FPPolynomial;

/// Whether a value was computed by an exact rule or passed through the
/// least-index placement of a composite (tensor) atom.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Soundness {
    #[default]
    Exact,
    TensorHeuristic,
}

impl Soundness {
    pub fn join(self, other: Soundness) -> Soundness {
        self.max(other)
    }

    pub fn is_exact(self) -> bool {
        self == Soundness::Exact
    }
}

impl fmt::Display for Soundness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Soundness::Exact => f.write_str("exact"),
            Soundness::TensorHeuristic => f.write_str("tensor-heuristic"),
        }
    }
}

/// A value together with the soundness of the computation that produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flagged<T> {
    pub value: T,
    pub soundness: Soundness,
}

impl<T> Flagged<T> {
    pub fn exact(value: T) -> Self {
        Flagged { value, soundness: Soundness::Exact }
    }

    pub fn new(value: T, soundness: Soundness) -> Self {
        Flagged { value, soundness }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AtomError {
    #[error("atom identifier must be non-empty")]
    EmptyId,
    #[error("atom `{id}`: Hodge type ({a},{b}) does not have weight {weight}")]
    WeightMismatch { id: String, weight: i64, a: i64, b: i64 },
    #[error("atom `{id}`: h^({a},{b}) = {left} but h^({b},{a}) = {right}")]
    Asymmetric { id: String, a: i64, b: i64, left: u64, right: u64 },
    #[error("atom `{id}` has total dimension 0")]
    Empty { id: String },
}

/// Hodge numbers `(a, b) -> h^{a,b}`, zero entries omitted.
pub type HodgeNumbers = BTreeMap<(i64, i64), u64>;

/// A non-Tate atom. `factors` is the sorted multiset of base identifiers; an
/// atom with more than one factor is a composite produced by tensoring.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NamedAtom {
    factors: Vec<String>,
    weight: i64,
    hodge: HodgeNumbers,
}

/// A pure polarizable Hodge structure symbol: either the Tate structure
/// `Q(-k)` of type `(k, k)`, or a named structure with explicit Hodge numbers.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum HodgeAtom {
    Tate(i64),
    Named(NamedAtom),
}

impl HodgeAtom {
    pub fn tate(k: i64) -> Self {
        HodgeAtom::Tate(k)
    }

    /// A user-declared simple atom. Zero multiplicities are dropped.
    pub fn named(
        id: impl Into<String>,
        weight: i64,
        hodge: impl IntoIterator<Item = ((i64, i64), u64)>,
    ) -> Result<Self, AtomError> {
        let id = id.into();
        if id.is_empty() {
            return Err(AtomError::EmptyId);
        }
        let factors = id.split('*').map(str::to_owned).collect::<Vec<_>>();
        if factors.iter().any(String::is_empty) {
            return Err(AtomError::EmptyId);
        }
        Self::from_parts(factors, weight, hodge)
    }

    fn from_parts(
        mut factors: Vec<String>,
        weight: i64,
        hodge: impl IntoIterator<Item = ((i64, i64), u64)>,
    ) -> Result<Self, AtomError> {
        factors.sort();
        let id = factors.join("*");
        let mut numbers = HodgeNumbers::new();
        for ((a, b), m) in hodge {
            if m == 0 {
                continue;
            }
            if a + b != weight {
                return Err(AtomError::WeightMismatch { id, weight, a, b });
            }
            *numbers.entry((a, b)).or_insert(0) += m;
        }
        if numbers.is_empty() {
            return Err(AtomError::Empty { id });
        }
        for (&(a, b), &left) in &numbers {
            let right = numbers.get(&(b, a)).copied().unwrap_or(0);
            if left != right {
                return Err(AtomError::Asymmetric { id, a, b, left, right });
            }
        }
        Ok(HodgeAtom::Named(NamedAtom { factors, weight, hodge: numbers }))
    }

    /// `H^1` of a genus-`g` curve: weight 1, `h^{1,0} = h^{0,1} = g`.
    pub fn curve_h1(genus: u32) -> Self {
        let g = u64::from(genus);
        Self::named(format!("S_{genus}"), 1, [((1, 0), g), ((0, 1), g)])
            .expect("curve atom is symmetric and nonempty for g > 0")
    }

    pub fn weight(&self) -> i64 {
        match self {
            HodgeAtom::Tate(k) => 2 * k,
            HodgeAtom::Named(n) => n.weight,
        }
    }

    pub fn dimension(&self) -> u64 {
        match self {
            HodgeAtom::Tate(_) => 1,
            HodgeAtom::Named(n) => n.hodge.values().sum(),
        }
    }

    pub fn hodge_numbers(&self) -> HodgeNumbers {
        match self {
            HodgeAtom::Tate(k) => HodgeNumbers::from([((*k, *k), 1)]),
            HodgeAtom::Named(n) => n.hodge.clone(),
        }
    }

    /// Least Hodge index `min { a : h^{a, w-a} > 0 }`.
    pub fn least_index(&self) -> i64 {
        match self {
            HodgeAtom::Tate(k) => *k,
            HodgeAtom::Named(n) => n.hodge.keys().map(|&(a, _)| a).min().expect("named atoms are nonempty"),
        }
    }

    pub fn is_tate(&self) -> bool {
        matches!(self, HodgeAtom::Tate(_))
    }

    /// Tate atoms and user-declared atoms are simple; tensor composites are not.
    pub fn is_simple(&self) -> bool {
        match self {
            HodgeAtom::Tate(_) => true,
            HodgeAtom::Named(n) => n.factors.len() == 1,
        }
    }

    /// Identifier as written in table files (`*`-joined factors for composites).
    pub fn id(&self) -> String {
        match self {
            HodgeAtom::Tate(k) => format!("Q({})", -k),
            HodgeAtom::Named(n) => n.factors.join("*"),
        }
    }

    /// Tensor with `Q(-k)`.
    pub fn twist(&self, k: i64) -> HodgeAtom {
        match self {
            HodgeAtom::Tate(j) => HodgeAtom::Tate(j + k),
            HodgeAtom::Named(n) => HodgeAtom::Named(NamedAtom {
                factors: n.factors.clone(),
                weight: n.weight + 2 * k,
                hodge: n.hodge.iter().map(|(&(a, b), &m)| ((a + k, b + k), m)).collect(),
            }),
        }
    }

    pub fn tensor(&self, other: &HodgeAtom) -> HodgeAtom {
        match (self, other) {
            (HodgeAtom::Tate(j), atom) | (atom, HodgeAtom::Tate(j)) => atom.twist(*j),
            (HodgeAtom::Named(x), HodgeAtom::Named(y)) => {
                let mut hodge = HodgeNumbers::new();
                for (&(a1, b1), &m1) in &x.hodge {
                    for (&(a2, b2), &m2) in &y.hodge {
                        *hodge.entry((a1 + a2, b1 + b2)).or_insert(0) += m1 * m2;
                    }
                }
                let factors = x.factors.iter().chain(&y.factors).cloned().collect();
                Self::from_parts(factors, x.weight + y.weight, hodge)
                    .expect("convolution of symmetric atoms is symmetric")
            }
        }
    }
}

impl fmt::Display for HodgeAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HodgeAtom::Tate(k) => write!(f, "Q({})", -k),
            HodgeAtom::Named(n) => write!(f, "{}<w{}>", n.factors.join("*"), n.weight),
        }
    }
}

/// An element of K(HS): a finitely supported integer combination of atoms.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HodgeClass(BTreeMap<HodgeAtom, i64>);

impl HodgeClass {
    pub fn zero() -> Self {
        HodgeClass::default()
    }

    pub fn atom(atom: HodgeAtom, coefficient: i64) -> Self {
        [(atom, coefficient)].into_iter().collect()
    }

    pub fn tate(k: i64) -> Self {
        Self::atom(HodgeAtom::Tate(k), 1)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, atom: &HodgeAtom) -> i64 {
        self.0.get(atom).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&HodgeAtom, i64)> {
        self.0.iter().map(|(a, &c)| (a, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn accumulate(&mut self, atom: HodgeAtom, coefficient: i64) {
        if coefficient == 0 {
            return;
        }
        match self.0.entry(atom) {
            Entry::Vacant(slot) => {
                slot.insert(coefficient);
            }
            Entry::Occupied(mut slot) => {
                *slot.get_mut() += coefficient;
                if *slot.get() == 0 {
                    slot.remove();
                }
            }
        }
    }

    pub fn scale(&self, factor: i64) -> HodgeClass {
        self.iter().map(|(a, c)| (a.clone(), c * factor)).collect()
    }

    pub fn twist(&self, k: i64) -> HodgeClass {
        self.iter().map(|(a, c)| (a.twist(k), c)).collect()
    }

    pub fn tensor(&self, other: &HodgeClass) -> HodgeClass {
        let mut out = HodgeClass::zero();
        for (a, ca) in self.iter() {
            for (b, cb) in other.iter() {
                out.accumulate(a.tensor(b), ca * cb);
            }
        }
        out
    }

    /// Signed total dimension `sum coefficient * dim`.
    pub fn dimension(&self) -> i64 {
        self.iter().map(|(a, c)| c * a.dimension() as i64).sum()
    }

    pub fn has_composite(&self) -> bool {
        self.0.keys().any(|a| !a.is_simple())
    }

    pub fn is_mixed_tate(&self) -> bool {
        self.0.keys().all(HodgeAtom::is_tate)
    }

    pub fn has_negative(&self) -> bool {
        self.0.values().any(|&c| c < 0)
    }

    /// Poincaré polynomial: coefficient of `t^w` is the signed dimension in weight `w`.
    pub fn poincare(&self) -> FPPolynomial {
        self.iter().map(|(a, c)| ((a.weight(), 0), c * a.dimension() as i64)).collect()
    }
}

impl FromIterator<(HodgeAtom, i64)> for HodgeClass {
    fn from_iter<I: IntoIterator<Item = (HodgeAtom, i64)>>(iter: I) -> Self {
        let mut out = HodgeClass::zero();
        for (a, c) in iter {
            out.accumulate(a, c);
        }
        out
    }
}

impl fmt::Display for HodgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (atom, c)) in self.iter().enumerate() {
            match (n, c) {
                (0, 1) => write!(f, "{atom}")?,
                (0, -1) => write!(f, "-{atom}")?,
                (0, c) => write!(f, "{c}*{atom}")?,
                (_, 1) => write!(f, " + {atom}")?,
                (_, -1) => write!(f, " - {atom}")?,
                (_, c) if c < 0 => write!(f, " - {}*{atom}", -c)?,
                (_, c) => write!(f, " + {c}*{atom}")?,
            }
        }
        Ok(())
    }
}

impl Add<&HodgeClass> for &HodgeClass {
    type Output = HodgeClass;
    fn add(self, rhs: &HodgeClass) -> HodgeClass {
        let mut out = self.clone();
        for (a, c) in rhs.iter() {
            out.accumulate(a.clone(), c);
        }
        out
    }
}

impl Neg for &HodgeClass {
    type Output = HodgeClass;
    fn neg(self) -> HodgeClass {
        self.scale(-1)
    }
}

impl Sub<&HodgeClass> for &HodgeClass {
    type Output = HodgeClass;
    fn sub(self, rhs: &HodgeClass) -> HodgeClass {
        self + &(-rhs)
    }
}

/// An element of K(FHS), stored as `p -> [Gr^p_N]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FilteredHodgeClass(BTreeMap<i64, HodgeClass>);

impl FilteredHodgeClass {
    pub fn zero() -> Self {
        FilteredHodgeClass::default()
    }

    /// `Q(0)` at step 0, the ring identity.
    pub fn unit() -> Self {
        Self::graded(0, HodgeClass::tate(0))
    }

    /// The realization of the Lefschetz class: `Q(-1)` at step 1.
    pub fn lefschetz() -> Self {
        Self::lefschetz_pow(1)
    }

    /// `Q(-k)` at step `k`, valid for negative `k` as well.
    pub fn lefschetz_pow(k: i64) -> Self {
        Self::graded(k, HodgeClass::tate(k))
    }

    /// A class concentrated in a single filtration step.
    pub fn graded(step: i64, class: HodgeClass) -> Self {
        [(step, class)].into_iter().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn step(&self, p: i64) -> Option<&HodgeClass> {
        self.0.get(&p)
    }

    pub fn steps(&self) -> impl Iterator<Item = (i64, &HodgeClass)> {
        self.0.iter().map(|(&p, h)| (p, h))
    }

    pub fn scale(&self, factor: i64) -> FilteredHodgeClass {
        self.steps().map(|(p, h)| (p, h.scale(factor))).collect()
    }

    pub fn tensor(&self, other: &FilteredHodgeClass) -> FilteredHodgeClass {
        self.steps().flat_map(|(r, x)| other.steps().map(move |(s, y)| (r + s, x.tensor(y)))).collect()
    }

    /// Tensor with `K^k`: atoms twisted by `Q(-k)`, steps shifted by `k`.
    pub fn tate_twist(&self, k: i64) -> FilteredHodgeClass {
        self.steps().map(|(p, h)| (p + k, h.twist(k))).collect()
    }

    /// Projection modulo `L^m`: drops every atom of weight `<= -m`.
    pub fn weight_truncate(&self, m: i64) -> FilteredHodgeClass {
        self.steps()
            .map(|(p, h)| {
                let kept = h.iter().filter(|(a, _)| a.weight() > -m).map(|(a, c)| (a.clone(), c));
                (p, kept.collect())
            })
            .collect()
    }

    /// Filtered Poincaré polynomial, `sum dim(N^p ∩ H^i) t^i u^p` with signs
    /// carried by the coefficients. `N^p` is the suffix sum of graded pieces
    /// `q >= p`; steps `p < 0` are not reported.
    pub fn fp(&self) -> FPPolynomial {
        let mut terms = Vec::new();
        for (q, h) in self.steps() {
            for (atom, c) in h.iter() {
                let d = c * atom.dimension() as i64;
                terms.extend((0..=q).map(|p| ((atom.weight(), p), d)));
            }
        }
        terms.into_iter().collect()
    }

    /// Dimensions of the graded pieces: coefficient of `t^w u^q` is the signed
    /// dimension of the weight-`w` part of `Gr^q`.
    pub fn graded_dims(&self) -> FPPolynomial {
        self.steps()
            .flat_map(|(q, h)| h.iter().map(move |(a, c)| ((a.weight(), q), c * a.dimension() as i64)))
            .collect()
    }

    pub fn has_composite(&self) -> bool {
        self.0.values().any(HodgeClass::has_composite)
    }

    /// `(weight, step)` pairs where an atom sits at step `p` with weight `< 2p`,
    /// impossible for a sub-Hodge structure inside `F^p`.
    pub fn weight_bound_violations(&self) -> Vec<(i64, i64)> {
        let mut out = Vec::new();
        for (p, h) in self.steps() {
            for (a, _) in h.iter() {
                if a.weight() < 2 * p {
                    out.push((a.weight(), p));
                }
            }
        }
        out
    }
}

impl FromIterator<(i64, HodgeClass)> for FilteredHodgeClass {
    fn from_iter<I: IntoIterator<Item = (i64, HodgeClass)>>(iter: I) -> Self {
        let mut map: BTreeMap<i64, HodgeClass> = BTreeMap::new();
        for (p, h) in iter {
            let slot = map.entry(p).or_default();
            *slot = &*slot + &h;
        }
        map.retain(|_, h| !h.is_zero());
        FilteredHodgeClass(map)
    }
}

impl fmt::Display for FilteredHodgeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.steps().map(|(p, h)| format!("Gr^{p}: {h}")).collect();
        f.write_str(&parts.join("; "))
    }
}

impl Add<&FilteredHodgeClass> for &FilteredHodgeClass {
    type Output = FilteredHodgeClass;
    fn add(self, rhs: &FilteredHodgeClass) -> FilteredHodgeClass {
        self.steps().chain(rhs.steps()).map(|(p, h)| (p, h.clone())).collect()
    }
}

impl Neg for &FilteredHodgeClass {
    type Output = FilteredHodgeClass;
    fn neg(self) -> FilteredHodgeClass {
        self.scale(-1)
    }
}

impl Sub<&FilteredHodgeClass> for &FilteredHodgeClass {
    type Output = FilteredHodgeClass;
    fn sub(self, rhs: &FilteredHodgeClass) -> FilteredHodgeClass {
        self + &(-rhs)
    }
}

impl Mul<&FilteredHodgeClass> for &FilteredHodgeClass {
    type Output = FilteredHodgeClass;
    fn mul(self, rhs: &FilteredHodgeClass) -> FilteredHodgeClass {
        self.tensor(rhs)
    }
}

/// The level-filtration functor on classes. Each atom is placed at its least
/// Hodge index, which is exact for simple structures (their only sub-Hodge
/// structures are 0 and themselves). Composite atoms get the same placement
/// with a [`Soundness::TensorHeuristic`] flag, since the true level filtration
/// of a non-simple structure may be finer.
pub fn gamma(h: &HodgeClass) -> Flagged<FilteredHodgeClass> {
    let value = h.iter().map(|(a, c)| (a.least_index(), HodgeClass::atom(a.clone(), c))).collect();
    let soundness = if h.has_composite() { Soundness::TensorHeuristic } else { Soundness::Exact };
    Flagged { value, soundness }
}

/// Forget the filtration.
pub fn phi(x: &FilteredHodgeClass) -> HodgeClass {
    x.steps().fold(HodgeClass::zero(), |acc, (_, h)| &acc + h)
}

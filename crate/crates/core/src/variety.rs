//! Cohomology-with-coniveau tables of smooth projective varieties and the
//! constructors that are exact on them: exceptional divisors, blow-ups and
//! products.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::hodge::{gamma, phi, FilteredHodgeClass, HodgeAtom, HodgeClass, Soundness};
use crate::poly::FPPolynomial;
use crate::registry::Registry;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VarietyError {
    #[error("blow-up codimension must be at least 2, got {codim}")]
    CodimTooSmall { codim: u32 },
    #[error(
        "dimension mismatch: center dimension {center_dim} + codimension {codim} != ambient dimension {ambient_dim}"
    )]
    DimensionMismatch { center_dim: u32, codim: u32, ambient_dim: u32 },
    #[error("{what} must be non-negative, got {value}")]
    NegativeArgument { what: &'static str, value: i64 },
    #[error("unresolved variety `{0}`")]
    Unresolved(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Provenance {
    Builtin,
    Loaded,
    Constructed,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Provenance::Builtin => "builtin",
            Provenance::Loaded => "loaded",
            Provenance::Constructed => "constructed",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Lint,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    DegreeOutOfRange { dim: u32 },
    NegativeStep,
    StepAboveHalfDegree,
    WeightPurity { atom: String, weight: i64 },
    ConiveauAboveLevel { atom: String, level: i64 },
    NegativeMultiplicity { atom: String, coefficient: i64 },
    BottomNormalization,
    TopNormalization { dim: u32 },
}

/// A broken table invariant at cell `(degree, step)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub degree: i64,
    pub step: i64,
    pub rule: Rule,
}

impl Violation {
    pub fn severity(&self) -> Severity {
        match self.rule {
            Rule::BottomNormalization | Rule::TopNormalization { .. } => Severity::Lint,
            _ => Severity::Error,
        }
    }

    /// Short machine-readable category name.
    pub fn category(&self) -> &'static str {
        match self.rule {
            Rule::DegreeOutOfRange { .. } => "degree-range",
            Rule::NegativeStep => "negative-step",
            Rule::StepAboveHalfDegree => "step-range",
            Rule::WeightPurity { .. } => "weight-purity",
            Rule::ConiveauAboveLevel { .. } => "coniveau-above-level",
            Rule::NegativeMultiplicity { .. } => "negative-multiplicity",
            Rule::BottomNormalization => "bottom-normalization",
            Rule::TopNormalization { .. } => "top-normalization",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "cell ({},{}) [{}]: ", self.degree, self.step, self.category())?;
        match &self.rule {
            Rule::DegreeOutOfRange { dim } => write!(f, "degree outside 0..={}", 2 * dim),
            Rule::NegativeStep => f.write_str("negative coniveau step"),
            Rule::StepAboveHalfDegree => f.write_str("coniveau step exceeds half the degree"),
            Rule::WeightPurity { atom, weight } => {
                write!(f, "atom {atom} has weight {weight}, expected {}", self.degree)
            }
            Rule::ConiveauAboveLevel { atom, level } => {
                write!(f, "atom {atom} sits at step {} above its level {level}", self.step)
            }
            Rule::NegativeMultiplicity { atom, coefficient } => {
                write!(f, "atom {atom} has negative multiplicity {coefficient}")
            }
            Rule::BottomNormalization => f.write_str("H^0 is not Q(0) at step 0"),
            Rule::TopNormalization { dim } => {
                write!(f, "H^{} is not Q(-{dim}) at step {dim}", 2 * dim)
            }
        }
    }
}

/// Graded coniveau data of a smooth projective variety: cell `(i, p)` holds
/// the class of `Gr^p_N H^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarietyTable {
    name: String,
    dim: u32,
    cells: BTreeMap<(i64, i64), HodgeClass>,
    provenance: Provenance,
    soundness: Soundness,
}

impl VarietyTable {
    /// Builds a table from cell contributions; repeated cells are summed and
    /// zero cells dropped. Tables holding composite atoms are flagged.
    pub fn new(
        name: impl Into<String>,
        dim: u32,
        cells: impl IntoIterator<Item = ((i64, i64), HodgeClass)>,
        provenance: Provenance,
    ) -> Self {
        let mut map: BTreeMap<(i64, i64), HodgeClass> = BTreeMap::new();
        for (key, class) in cells {
            let slot = map.entry(key).or_default();
            *slot = &*slot + &class;
        }
        map.retain(|_, h| !h.is_zero());
        let soundness =
            if map.values().any(HodgeClass::has_composite) { Soundness::TensorHeuristic } else { Soundness::Exact };
        VarietyTable { name: name.into(), dim, cells: map, provenance, soundness }
    }

    pub fn with_soundness(mut self, soundness: Soundness) -> Self {
        self.soundness = self.soundness.join(soundness);
        self
    }

    pub fn renamed(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn soundness(&self) -> Soundness {
        self.soundness
    }

    pub fn cell(&self, i: i64, p: i64) -> Option<&HodgeClass> {
        self.cells.get(&(i, p))
    }

    pub fn cells(&self) -> impl Iterator<Item = ((i64, i64), &HodgeClass)> {
        self.cells.iter().map(|(&k, h)| (k, h))
    }

    pub fn is_mixed_tate(&self) -> bool {
        self.cells.values().all(HodgeClass::is_mixed_tate)
    }

    /// Dimension of `Gr^p_N H^i`.
    pub fn graded_dim(&self, i: i64, p: i64) -> i64 {
        self.cell(i, p).map_or(0, HodgeClass::dimension)
    }

    /// Dimension of `N^p H^i`, the suffix sum of graded pieces.
    pub fn coniveau_dim(&self, i: i64, p: i64) -> i64 {
        self.cells.range((i, p)..=(i, i64::MAX)).map(|(_, h)| h.dimension()).sum()
    }

    /// `sum_i dim H^i t^i` (unsigned Betti numbers).
    pub fn poincare(&self) -> FPPolynomial {
        self.cells().map(|((i, _), h)| ((i, 0), h.dimension())).collect()
    }

    /// Realization under the coniveau homomorphism:
    /// step `p` receives `sum_i (-1)^i [Gr^p H^i]`.
    pub fn nu(&self) -> FilteredHodgeClass {
        self.cells().map(|((i, p), h)| (p, if i % 2 == 0 { h.clone() } else { -h })).collect()
    }

    /// Realization under the level homomorphism, `gamma(phi(nu))`. Carries
    /// the table's soundness (composite atoms only occur in flagged tables).
    pub fn lambda(&self) -> FilteredHodgeClass {
        gamma(&phi(&self.nu())).value
    }

    /// Every broken invariant, errors and lints alike.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let top = 2 * i64::from(self.dim);
        for (&(i, p), class) in &self.cells {
            let mut push = |rule| out.push(Violation { degree: i, step: p, rule });
            if !(0..=top).contains(&i) {
                push(Rule::DegreeOutOfRange { dim: self.dim });
            }
            if p < 0 {
                push(Rule::NegativeStep);
            }
            if 2 * p > i {
                push(Rule::StepAboveHalfDegree);
            }
            for (atom, c) in class.iter() {
                if c < 0 {
                    push(Rule::NegativeMultiplicity { atom: atom.to_string(), coefficient: c });
                }
                if atom.weight() != i {
                    push(Rule::WeightPurity { atom: atom.to_string(), weight: atom.weight() });
                }
                if p > atom.least_index() {
                    push(Rule::ConiveauAboveLevel { atom: atom.to_string(), level: atom.least_index() });
                }
            }
        }
        let degree_cells = |i: i64| self.cells.range((i, i64::MIN)..=(i, i64::MAX)).collect::<Vec<_>>();
        let bottom = degree_cells(0);
        if bottom.len() != 1 || *bottom[0].0 != (0, 0) || *bottom[0].1 != HodgeClass::tate(0) {
            out.push(Violation { degree: 0, step: 0, rule: Rule::BottomNormalization });
        }
        let d = i64::from(self.dim);
        let upper = degree_cells(top);
        if upper.len() != 1 || *upper[0].0 != (top, d) || *upper[0].1 != HodgeClass::tate(d) {
            out.push(Violation { degree: top, step: d, rule: Rule::TopNormalization { dim: self.dim } });
        }
        out
    }

    /// Violations that make a table unusable (lints excluded).
    pub fn errors(&self) -> Vec<Violation> {
        self.validate().into_iter().filter(|v| v.severity() == Severity::Error).collect()
    }

    /// Degrees `i` with `b_i != b_{2d-i}`. Optional lint; nothing relies on it.
    pub fn duality_lints(&self) -> Vec<i64> {
        let betti = self.poincare();
        let top = 2 * i64::from(self.dim);
        (0..=top).filter(|&i| betti.coefficient(i, 0) != betti.coefficient(top - i, 0)).collect()
    }
}

/// A single point.
pub fn builtin_point() -> VarietyTable {
    VarietyTable::new("point", 0, [((0, 0), HodgeClass::tate(0))], Provenance::Builtin)
}

/// `P^n`: `Q(-i)` at `(2i, i)`.
pub fn builtin_projspace(n: u32) -> VarietyTable {
    let cells = (0..=i64::from(n)).map(|i| ((2 * i, i), HodgeClass::tate(i)));
    VarietyTable::new(format!("P{n}"), n, cells, Provenance::Builtin)
}

/// A smooth projective curve of genus `g`. `N^1 H^1 = 0` because restriction
/// of `H^1` to the complement of finitely many points is injective.
pub fn builtin_curve(genus: u32) -> VarietyTable {
    let mut cells = vec![((0, 0), HodgeClass::tate(0)), ((2, 1), HodgeClass::tate(1))];
    if genus > 0 {
        cells.push(((1, 0), HodgeClass::atom(HodgeAtom::curve_h1(genus), 1)));
    }
    VarietyTable::new(format!("C_{genus}"), 1, cells, Provenance::Builtin)
}

fn check_blowup_dims(center_dim: u32, codim: u32, ambient_dim: u32) -> Result<(), VarietyError> {
    if codim < 2 {
        return Err(VarietyError::CodimTooSmall { codim });
    }
    if center_dim + codim != ambient_dim {
        return Err(VarietyError::DimensionMismatch { center_dim, codim, ambient_dim });
    }
    Ok(())
}

/// Twisted copies of `z`'s cells along the strands `k in ks`: the cell at
/// `(i, p)` lands at `(i + 2k, p + k)` twisted by `Q(-k)`.
fn strands(z: &VarietyTable, ks: std::ops::Range<i64>) -> Vec<((i64, i64), HodgeClass)> {
    ks.flat_map(|k| z.cells().map(move |((i, p), h)| ((i + 2 * k, p + k), h.twist(k)))).collect()
}

/// The exceptional divisor `E = P(N_{Z/X})` of blowing up a center of
/// codimension `codim` in an ambient variety of dimension `ambient_dim`:
/// `Gr^p H^i(E) = sum_{k=0}^{codim-1} Gr^{p-k} H^{i-2k}(Z)(-k)`.
pub fn exceptional_table(z: &VarietyTable, codim: u32, ambient_dim: u32) -> Result<VarietyTable, VarietyError> {
    check_blowup_dims(z.dim, codim, ambient_dim)?;
    let r = codim - 1;
    let table = VarietyTable::new(
        format!("E({};{codim})", z.name),
        z.dim + r,
        strands(z, 0..i64::from(codim)),
        Provenance::Constructed,
    );
    Ok(table.with_soundness(z.soundness))
}

/// The blow-up of `x` along a center `z` of codimension `codim`, forced by
/// graded exactness `Gr(Bl) + Gr(Z) = Gr(X) + Gr(E)`:
/// `Gr^p H^i(Bl) = Gr^p H^i(X) + sum_{k=1}^{codim-1} Gr^{p-k} H^{i-2k}(Z)(-k)`.
pub fn blowup_table(x: &VarietyTable, z: &VarietyTable, codim: u32) -> Result<VarietyTable, VarietyError> {
    check_blowup_dims(z.dim, codim, x.dim)?;
    let cells = x.cells().map(|(k, h)| (k, h.clone())).chain(strands(z, 1..i64::from(codim)));
    let table = VarietyTable::new(format!("Bl({};{})", x.name, z.name), x.dim, cells, Provenance::Constructed);
    Ok(table.with_soundness(x.soundness.join(z.soundness)))
}

/// Künneth convolution of two tables. Exact when one factor is mixed-Tate;
/// otherwise the result is flagged since multiplicativity of the coniveau
/// filtration is not established for general products.
pub fn product_table(x: &VarietyTable, y: &VarietyTable) -> VarietyTable {
    let cells =
        x.cells().flat_map(|((i1, p1), h1)| y.cells().map(move |((i2, p2), h2)| ((i1 + i2, p1 + p2), h1.tensor(h2))));
    let mut soundness = x.soundness.join(y.soundness);
    if !x.is_mixed_tate() && !y.is_mixed_tate() {
        soundness = Soundness::TensorHeuristic;
    }
    VarietyTable::new(format!("{}*{}", x.name, y.name), x.dim + y.dim, cells, Provenance::Constructed)
        .with_soundness(soundness)
}

/// Generators of the Grothendieck ring as written in the expression language.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum VarietyExpr {
    Point,
    ProjSpace(u32),
    Curve(u32),
    Blowup { ambient: Box<VarietyExpr>, center: Box<VarietyExpr>, codim: u32 },
    Prod(Box<VarietyExpr>, Box<VarietyExpr>),
    Ref(String),
}

impl VarietyExpr {
    pub fn proj_space(n: i64) -> Result<Self, VarietyError> {
        u32::try_from(n)
            .map(VarietyExpr::ProjSpace)
            .map_err(|_| VarietyError::NegativeArgument { what: "projective space dimension", value: n })
    }

    pub fn curve(genus: i64) -> Result<Self, VarietyError> {
        u32::try_from(genus)
            .map(VarietyExpr::Curve)
            .map_err(|_| VarietyError::NegativeArgument { what: "genus", value: genus })
    }

    /// A blow-up node, checked against the registry for dimension consistency.
    pub fn blowup(
        ambient: VarietyExpr,
        center: VarietyExpr,
        codim: u32,
        registry: &Registry,
    ) -> Result<Self, VarietyError> {
        check_blowup_dims(center.dimension(registry)?, codim, ambient.dimension(registry)?)?;
        Ok(VarietyExpr::Blowup { ambient: Box::new(ambient), center: Box::new(center), codim })
    }

    pub fn prod(left: VarietyExpr, right: VarietyExpr) -> Self {
        VarietyExpr::Prod(Box::new(left), Box::new(right))
    }

    pub fn dimension(&self, registry: &Registry) -> Result<u32, VarietyError> {
        Ok(match self {
            VarietyExpr::Point => 0,
            VarietyExpr::ProjSpace(n) => *n,
            VarietyExpr::Curve(_) => 1,
            VarietyExpr::Blowup { ambient, .. } => ambient.dimension(registry)?,
            VarietyExpr::Prod(l, r) => l.dimension(registry)? + r.dimension(registry)?,
            VarietyExpr::Ref(name) => registry.require(name)?.dim(),
        })
    }

    /// The table of the described variety, built from the constructors above.
    pub fn table(&self, registry: &Registry) -> Result<VarietyTable, VarietyError> {
        match self {
            VarietyExpr::Point => Ok(builtin_point()),
            VarietyExpr::ProjSpace(n) => Ok(builtin_projspace(*n)),
            VarietyExpr::Curve(g) => Ok(builtin_curve(*g)),
            VarietyExpr::Blowup { ambient, center, codim } => {
                blowup_table(&ambient.table(registry)?, &center.table(registry)?, *codim)
            }
            VarietyExpr::Prod(l, r) => Ok(product_table(&l.table(registry)?, &r.table(registry)?)),
            VarietyExpr::Ref(name) => Ok(registry.require(name)?.as_ref().clone()),
        }
    }
}

impl fmt::Display for VarietyExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarietyExpr::Point => f.write_str("point"),
            VarietyExpr::ProjSpace(n) => write!(f, "P{n}"),
            VarietyExpr::Curve(g) => write!(f, "curve({g})"),
            VarietyExpr::Blowup { ambient, center, codim } => write!(f, "blowup({ambient}, {center}, {codim})"),
            VarietyExpr::Prod(l, r) => write!(f, "prod({l}, {r})"),
            VarietyExpr::Ref(name) => f.write_str(name),
        }
    }
}

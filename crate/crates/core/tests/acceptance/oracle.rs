//! Reference computations written against raw cell data only.
//!
//! An atom is reduced to its weight and Hodge numbers; every derived
//! quantity (twists, blow-up strands, suffix sums, Betti numbers, level
//! placement) is recomputed here from scratch.

use std::collections::BTreeMap;

use mhc_core::{FilteredHodgeClass, VarietyTable};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Atom {
    pub weight: i64,
    pub hodge: BTreeMap<(i64, i64), i64>,
}

impl Atom {
    fn twist(&self, k: i64) -> Atom {
        Atom {
            weight: self.weight + 2 * k,
            hodge: self.hodge.iter().map(|(&(a, b), &m)| ((a + k, b + k), m)).collect(),
        }
    }

    fn dim(&self) -> i64 {
        self.hodge.values().sum()
    }

    fn least_index(&self) -> i64 {
        *self.hodge.keys().map(|(a, _)| a).min().unwrap()
    }
}

/// Flat list of `((i, p), atom, multiplicity)`.
#[derive(Clone, Debug)]
pub struct Raw {
    pub dim: i64,
    pub entries: Vec<((i64, i64), Atom, i64)>,
}

pub fn raw(table: &VarietyTable) -> Raw {
    let mut entries = Vec::new();
    for (cell, class) in table.cells() {
        for (atom, c) in class.iter() {
            let hodge = atom.hodge_numbers().into_iter().map(|(k, m)| (k, m as i64)).collect();
            entries.push((cell, Atom { weight: atom.weight(), hodge }, c));
        }
    }
    Raw { dim: i64::from(table.dim()), entries }
}

fn strands(z: &Raw, ks: std::ops::Range<i64>) -> Vec<((i64, i64), Atom, i64)> {
    let mut out = Vec::new();
    for k in ks {
        for ((i, p), a, m) in &z.entries {
            out.push(((i + 2 * k, p + k), a.twist(k), *m));
        }
    }
    out
}

pub fn exceptional(z: &Raw, c: i64) -> Raw {
    Raw { dim: z.dim + c - 1, entries: strands(z, 0..c) }
}

pub fn blowup(x: &Raw, z: &Raw, c: i64) -> Raw {
    let mut entries = x.entries.clone();
    entries.extend(strands(z, 1..c));
    Raw { dim: x.dim, entries }
}

fn prune<K: Ord>(mut m: BTreeMap<K, i64>) -> BTreeMap<K, i64> {
    m.retain(|_, v| *v != 0);
    m
}

/// `(i, p, a, b) -> h^{a,b}` of `Gr^p H^i`.
pub fn hodge_cells(r: &Raw) -> BTreeMap<(i64, i64, i64, i64), i64> {
    let mut out = BTreeMap::new();
    for ((i, p), atom, m) in &r.entries {
        for (&(a, b), &h) in &atom.hodge {
            *out.entry((*i, *p, a, b)).or_insert(0) += m * h;
        }
    }
    prune(out)
}

/// `dim Gr^p H^i`.
pub fn graded_dims(r: &Raw) -> BTreeMap<(i64, i64), i64> {
    let mut out = BTreeMap::new();
    for ((i, p), atom, m) in &r.entries {
        *out.entry((*i, *p)).or_insert(0) += m * atom.dim();
    }
    prune(out)
}

/// `dim N^p H^i`: sum of graded dimensions over steps `q >= p`.
pub fn coniveau_dim(r: &Raw, i: i64, p: i64) -> i64 {
    graded_dims(r).iter().filter(|(&(j, q), _)| j == i && q >= p).map(|(_, d)| d).sum()
}

pub fn betti(r: &Raw) -> BTreeMap<i64, i64> {
    let mut out = BTreeMap::new();
    for ((i, _), atom, m) in &r.entries {
        *out.entry(*i).or_insert(0) += m * atom.dim();
    }
    prune(out)
}

fn sign(i: i64) -> i64 {
    if i % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Signed Hodge numbers of the coniveau realization: `(p, a, b) -> n`.
pub fn nu_signature(r: &Raw) -> BTreeMap<(i64, i64, i64), i64> {
    let mut out = BTreeMap::new();
    for ((i, p), atom, m) in &r.entries {
        for (&(a, b), &h) in &atom.hodge {
            *out.entry((*p, a, b)).or_insert(0) += sign(*i) * m * h;
        }
    }
    prune(out)
}

/// Same for the level realization: each atom moves to its least Hodge index.
pub fn lambda_signature(r: &Raw) -> BTreeMap<(i64, i64, i64), i64> {
    let mut out = BTreeMap::new();
    for ((i, _), atom, m) in &r.entries {
        let q = atom.least_index();
        for (&(a, b), &h) in &atom.hodge {
            *out.entry((q, a, b)).or_insert(0) += sign(*i) * m * h;
        }
    }
    prune(out)
}

/// The same invariant read off a library class.
pub fn signature(x: &FilteredHodgeClass) -> BTreeMap<(i64, i64, i64), i64> {
    let mut out = BTreeMap::new();
    for (p, class) in x.steps() {
        for (atom, c) in class.iter() {
            for ((a, b), h) in atom.hodge_numbers() {
                *out.entry((p, a, b)).or_insert(0) += c * h as i64;
            }
        }
    }
    prune(out)
}

pub fn sig_sub(
    x: &BTreeMap<(i64, i64, i64), i64>,
    y: &BTreeMap<(i64, i64, i64), i64>,
) -> BTreeMap<(i64, i64, i64), i64> {
    let mut out = x.clone();
    for (k, v) in y {
        *out.entry(*k).or_insert(0) -= v;
    }
    prune(out)
}

/// Signed graded dimensions `(w, p) -> n` from a signature.
pub fn graded_from_signature(s: &BTreeMap<(i64, i64, i64), i64>) -> BTreeMap<(i64, i64), i64> {
    let mut out = BTreeMap::new();
    for (&(p, a, b), &n) in s {
        *out.entry((a + b, p)).or_insert(0) += n;
    }
    prune(out)
}

/// Nested dimensions from graded ones; steps below zero are not reported.
pub fn fp_from_graded(g: &BTreeMap<(i64, i64), i64>) -> BTreeMap<(i64, i64), i64> {
    let mut out = BTreeMap::new();
    for (&(w, q), &n) in g {
        for p in 0..=q {
            *out.entry((w, p)).or_insert(0) += n;
        }
    }
    prune(out)
}

pub fn shift(g: &BTreeMap<(i64, i64), i64>, di: i64, dp: i64) -> BTreeMap<(i64, i64), i64> {
    g.iter().map(|(&(i, p), &n)| ((i + di, p + dp), n)).collect()
}

/// `(i, p, dimN, dimF)` where the two nested-dimension tables differ.
pub fn failures(nu: &BTreeMap<(i64, i64), i64>, lambda: &BTreeMap<(i64, i64), i64>) -> Vec<(i64, i64, i64, i64)> {
    let mut keys: Vec<_> = nu.keys().chain(lambda.keys()).copied().collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter_map(|(i, p)| {
            let n = nu.get(&(i, p)).copied().unwrap_or(0);
            let f = lambda.get(&(i, p)).copied().unwrap_or(0);
            (n != f).then(|| (i, p, sign(i) * n, sign(i) * f))
        })
        .collect()
}

/// Coefficients of a univariate integer polynomial product.
pub fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

pub fn poly_add(a: &[i64], b: &[i64], sign: i64) -> Vec<i64> {
    let mut out = vec![0; a.len().max(b.len())];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] += sign * y;
    }
    out
}

/// Machine-format lines of a pure polynomial in `L`.
pub fn mc_lines(coefs: &[i64]) -> String {
    let lines: String =
        coefs.iter().enumerate().filter(|(_, c)| **c != 0).map(|(k, c)| format!("mc {k} 1 {c}\n")).collect();
    if lines.is_empty() {
        "0\n".to_owned()
    } else {
        lines
    }
}

//! Integer Laurent polynomials in `t` and `u`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

/// `sum c_{i,p} t^i u^p` with finitely many nonzero coefficients. Exponents
/// may be negative.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FPPolynomial(BTreeMap<(i64, i64), i64>);

impl FPPolynomial {
    pub fn zero() -> Self {
        FPPolynomial::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, 1)
    }

    pub fn monomial(i: i64, p: i64, c: i64) -> Self {
        [((i, p), c)].into_iter().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coefficient(&self, i: i64, p: i64) -> i64 {
        self.0.get(&(i, p)).copied().unwrap_or(0)
    }

    /// Nonzero terms sorted lexicographically by `(i, p)`.
    pub fn iter(&self) -> impl Iterator<Item = ((i64, i64), i64)> + '_ {
        self.0.iter().map(|(&k, &c)| (k, c))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Highest power of `t`, or `None` for the zero polynomial.
    pub fn t_degree(&self) -> Option<i64> {
        self.0.keys().map(|&(i, _)| i).max()
    }

    /// Keeps only the terms with `t`-exponent strictly above `bound`.
    pub fn t_degree_above(&self, bound: i64) -> FPPolynomial {
        self.iter().filter(|&((i, _), _)| i > bound).collect()
    }

    pub fn shift(&self, di: i64, dp: i64) -> FPPolynomial {
        self.iter().map(|((i, p), c)| ((i + di, p + dp), c)).collect()
    }

    pub fn scale(&self, factor: i64) -> FPPolynomial {
        self.iter().map(|(k, c)| (k, c * factor)).collect()
    }
}

impl FromIterator<((i64, i64), i64)> for FPPolynomial {
    fn from_iter<I: IntoIterator<Item = ((i64, i64), i64)>>(iter: I) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in iter {
            if c == 0 {
                continue;
            }
            match map.entry(k) {
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
        FPPolynomial(map)
    }
}

impl Add<&FPPolynomial> for &FPPolynomial {
    type Output = FPPolynomial;
    fn add(self, rhs: &FPPolynomial) -> FPPolynomial {
        self.iter().chain(rhs.iter()).collect()
    }
}

impl Neg for &FPPolynomial {
    type Output = FPPolynomial;
    fn neg(self) -> FPPolynomial {
        self.scale(-1)
    }
}

impl Sub<&FPPolynomial> for &FPPolynomial {
    type Output = FPPolynomial;
    fn sub(self, rhs: &FPPolynomial) -> FPPolynomial {
        self + &(-rhs)
    }
}

impl Mul<&FPPolynomial> for &FPPolynomial {
    type Output = FPPolynomial;
    fn mul(self, rhs: &FPPolynomial) -> FPPolynomial {
        self.iter()
            .flat_map(|((i1, p1), c1)| rhs.iter().map(move |((i2, p2), c2)| ((i1 + i2, p1 + p2), c1 * c2)))
            .collect()
    }
}

fn write_power(f: &mut fmt::Formatter<'_>, var: &str, e: i64) -> fmt::Result {
    match e {
        1 => write!(f, "{var}"),
        e => write!(f, "{var}^{e}"),
    }
}

impl fmt::Display for FPPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, ((i, p), c)) in self.iter().enumerate() {
            if n == 0 {
                if c < 0 {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if c < 0 { " - " } else { " + " })?;
            }
            let mag = c.abs();
            let mut factors = 0;
            if mag != 1 || (i == 0 && p == 0) {
                write!(f, "{mag}")?;
                factors += 1;
            }
            for (var, e) in [("t", i), ("u", p)] {
                if e != 0 {
                    if factors > 0 {
                        f.write_str("*")?;
                    }
                    write_power(f, var, e)?;
                    factors += 1;
                }
            }
        }
        Ok(())
    }
}

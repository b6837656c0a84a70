use super::{GaussRat, ScalarError};
use num::{BigRational, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// Ordered coordinate-name list shared by all values on a chart.
pub type Vars = Arc<Vec<String>>;

pub fn vars(names: &[&str]) -> Vars {
    Arc::new(names.iter().map(|s| s.to_string()).collect())
}

/// Exponent vector, ordered graded-lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    fn mul(&self, rhs: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| {
                // lex with earlier variables dominating
                for (a, b) in self.0.iter().zip(&other.0) {
                    match a.cmp(b) {
                        Ordering::Equal => continue,
                        ord => return ord,
                    }
                }
                Ordering::Equal
            })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Multivariate polynomial over Gaussian rationals.
///
/// Invariants: no stored zero coefficients; every exponent vector has length
/// equal to the number of variables. Complex conjugation negates the
/// imaginary part of every coefficient and fixes the coordinates, so "real"
/// values are exactly those fixed by [`Scalar::conj`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scalar {
    vars: Vars,
    terms: BTreeMap<Monomial, GaussRat>,
}

impl Scalar {
    pub fn zero(vars: Vars) -> Self {
        Scalar { vars, terms: BTreeMap::new() }
    }

    pub fn constant(vars: Vars, c: GaussRat) -> Self {
        let mut s = Scalar::zero(vars);
        if !c.is_zero() {
            let m = Monomial(vec![0; s.vars.len()]);
            s.terms.insert(m, c);
        }
        s
    }

    pub fn one(vars: Vars) -> Self {
        Scalar::constant(vars, GaussRat::one())
    }

    pub fn i(vars: Vars) -> Self {
        Scalar::constant(vars, GaussRat::i())
    }

    pub fn from_int(vars: Vars, n: i64) -> Self {
        Scalar::constant(vars, GaussRat::from_int(n))
    }

    pub fn from_ratio(vars: Vars, num: i64, den: i64) -> Self {
        Scalar::constant(vars, GaussRat::from_ratio(num, den))
    }

    /// The coordinate with the given index, as a polynomial.
    pub fn coord(vars: Vars, idx: usize) -> Self {
        assert!(idx < vars.len());
        let mut exps = vec![0; vars.len()];
        exps[idx] = 1;
        let mut s = Scalar::zero(vars);
        s.terms.insert(Monomial(exps), GaussRat::one());
        s
    }

    pub fn var(vars: Vars, name: &str) -> Result<Self, ScalarError> {
        match vars.iter().position(|v| v == name) {
            Some(idx) => Ok(Scalar::coord(vars, idx)),
            None => Err(ScalarError::UnknownCoordinate(name.to_string())),
        }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().degree() == 0)
    }

    /// The value as a constant, if it is one.
    pub fn as_constant(&self) -> Option<GaussRat> {
        if self.terms.is_empty() {
            return Some(GaussRat::zero());
        }
        if self.is_constant() {
            return Some(self.terms.values().next().unwrap().clone());
        }
        None
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussRat)> {
        self.terms.iter()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(|m| m.degree()).max().unwrap_or(0)
    }

    fn check_vars(&self, rhs: &Scalar) -> Result<(), ScalarError> {
        if self.vars == rhs.vars || *self.vars == *rhs.vars {
            Ok(())
        } else {
            Err(ScalarError::VariableMismatch)
        }
    }

    fn insert(&mut self, m: Monomial, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = &*e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, rhs: &Scalar) -> Scalar {
        self.check_vars(rhs).expect("variable mismatch in add");
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Scalar) -> Scalar {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn mul(&self, rhs: &Scalar) -> Scalar {
        self.check_vars(rhs).expect("variable mismatch in mul");
        let mut out = Scalar::zero(self.vars.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.insert(ma.mul(mb), ca * cb);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRat) -> Scalar {
        if c.is_zero() {
            return Scalar::zero(self.vars.clone());
        }
        Scalar {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut out = Scalar::one(self.vars.clone());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Exact partial derivative with respect to the named coordinate.
    pub fn partial_by_name(&self, coord: &str) -> Result<Scalar, ScalarError> {
        match self.vars.iter().position(|v| v == coord) {
            Some(idx) => Ok(self.partial(idx)),
            None => Err(ScalarError::UnknownCoordinate(coord.to_string())),
        }
    }

    pub fn partial(&self, idx: usize) -> Scalar {
        assert!(idx < self.vars.len());
        let mut out = Scalar::zero(self.vars.clone());
        for (m, c) in &self.terms {
            let e = m.0[idx];
            if e == 0 {
                continue;
            }
            let mut exps = m.0.clone();
            exps[idx] = e - 1;
            out.insert(Monomial(exps), c * &GaussRat::from_int(e as i64));
        }
        out
    }

    /// Coefficient-wise complex conjugation; coordinates are fixed.
    pub fn conj(&self) -> Scalar {
        Scalar {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    pub fn eval(&self, point: &[GaussRat]) -> GaussRat {
        assert_eq!(point.len(), self.vars.len());
        let mut acc = GaussRat::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    t = &t * &point[i];
                }
            }
            acc = &acc + &t;
        }
        acc
    }
}

fn fmt_monomial(vars: &[String], m: &Monomial, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !first {
            write!(f, "*")?;
        }
        first = false;
        write!(f, "{}", vars[i])?;
        if e > 1 {
            write!(f, "^{}", e)?;
        }
    }
    Ok(())
}

/// Canonical printing: terms in descending graded-lex order; round-trips
/// through [`super::parse`].
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            // Pull a leading minus out of pure-real and pure-imaginary
            // coefficients; mixed ones stay parenthesized.
            let (neg, mag) = if c.im.is_zero() && c.re < BigRational::zero() {
                (true, -c)
            } else if c.re.is_zero() && c.im < BigRational::zero() {
                (true, -c)
            } else {
                (false, c.clone())
            };
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.degree() == 0 {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                fmt_monomial(&self.vars, m, f)?;
            } else {
                write!(f, "{}*", mag)?;
                fmt_monomial(&self.vars, m, f)?;
            }
        }
        Ok(())
    }
}

//! Alternating tensors with polynomial coefficients, stored on strictly
//! increasing index sets. Used for differential forms, multivector fields,
//! and frame forms alike; the index universe need not be the coordinate
//! count.

use crate::matrix::PolyMat;
use crate::scalars::{GaussRat, Scalar, Vars};
use std::collections::BTreeMap;

/// Sign of the permutation sorting `idx`, or `None` if there is a repeat.
/// Returns the sorted index list alongside.
pub fn sort_sign(idx: &[usize]) -> Option<(Vec<usize>, i8)> {
    let mut v = idx.to_vec();
    let mut sign = 1i8;
    // insertion sort, counting swaps
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    for w in v.windows(2) {
        if w[0] == w[1] {
            return None;
        }
    }
    Some((v, sign))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AltTensor {
    universe: usize,
    degree: usize,
    vars: Vars,
    comps: BTreeMap<Vec<usize>, Scalar>,
}

impl AltTensor {
    pub fn zero(vars: Vars, universe: usize, degree: usize) -> Self {
        AltTensor { universe, degree, vars, comps: BTreeMap::new() }
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Vec<usize>, &Scalar)> {
        self.comps.iter()
    }

    /// Adds `c` at the (possibly unsorted) index tuple, with the
    /// antisymmetrization sign. Tuples with repeats contribute nothing.
    pub fn insert_signed(&mut self, idx: &[usize], c: Scalar) {
        assert_eq!(idx.len(), self.degree);
        debug_assert!(idx.iter().all(|&i| i < self.universe));
        if c.is_zero() {
            return;
        }
        let Some((key, sign)) = sort_sign(idx) else { return };
        let c = if sign < 0 { c.neg() } else { c };
        match self.comps.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Component at a (possibly unsorted) index tuple, with sign.
    pub fn get(&self, idx: &[usize]) -> Scalar {
        assert_eq!(idx.len(), self.degree);
        match sort_sign(idx) {
            None => Scalar::zero(self.vars.clone()),
            Some((key, sign)) => match self.comps.get(&key) {
                None => Scalar::zero(self.vars.clone()),
                Some(c) => {
                    if sign < 0 {
                        c.neg()
                    } else {
                        c.clone()
                    }
                }
            },
        }
    }

    pub fn add(&self, rhs: &AltTensor) -> AltTensor {
        assert_eq!((self.universe, self.degree), (rhs.universe, rhs.degree));
        let mut out = self.clone();
        for (k, c) in &rhs.comps {
            out.insert_signed(k, c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &AltTensor) -> AltTensor {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> AltTensor {
        AltTensor {
            universe: self.universe,
            degree: self.degree,
            vars: self.vars.clone(),
            comps: self.comps.iter().map(|(k, c)| (k.clone(), c.neg())).collect(),
        }
    }

    pub fn scale(&self, f: &Scalar) -> AltTensor {
        if f.is_zero() {
            return AltTensor::zero(self.vars.clone(), self.universe, self.degree);
        }
        let mut out = AltTensor::zero(self.vars.clone(), self.universe, self.degree);
        for (k, c) in &self.comps {
            out.insert_signed(k, c.mul(f));
        }
        out
    }

    pub fn scale_rat(&self, f: &GaussRat) -> AltTensor {
        self.scale(&Scalar::constant(self.vars.clone(), f.clone()))
    }

    pub fn conj(&self) -> AltTensor {
        AltTensor {
            universe: self.universe,
            degree: self.degree,
            vars: self.vars.clone(),
            comps: self.comps.iter().map(|(k, c)| (k.clone(), c.conj())).collect(),
        }
    }

    pub fn wedge(&self, rhs: &AltTensor) -> AltTensor {
        assert_eq!(self.universe, rhs.universe);
        let mut out = AltTensor::zero(self.vars.clone(), self.universe, self.degree + rhs.degree);
        for (ka, ca) in &self.comps {
            for (kb, cb) in &rhs.comps {
                let mut idx = ka.clone();
                idx.extend_from_slice(kb);
                out.insert_signed(&idx, ca.mul(cb));
            }
        }
        out
    }

    /// Contracts the first slot with the coefficient vector `v` (a section
    /// of the underlying rank-`universe` bundle).
    pub fn contract_first(&self, v: &[Scalar]) -> AltTensor {
        assert_eq!(v.len(), self.universe);
        assert!(self.degree >= 1);
        let mut out = AltTensor::zero(self.vars.clone(), self.universe, self.degree - 1);
        for (k, c) in &self.comps {
            for (pos, &a) in k.iter().enumerate() {
                if v[a].is_zero() {
                    continue;
                }
                let rest: Vec<usize> = k.iter().enumerate().filter(|(p, _)| *p != pos).map(|(_, &x)| x).collect();
                let mut term = v[a].mul(c);
                if pos % 2 == 1 {
                    term = term.neg();
                }
                out.insert_signed(&rest, term);
            }
        }
        out
    }

    /// Applies the basis substitution `e_a -> sum_b M[b][a] e_b` to every
    /// slot (the k-th exterior power of `M`).
    pub fn apply_exterior(&self, m: &PolyMat) -> AltTensor {
        assert_eq!(m.rows(), self.universe);
        assert_eq!(m.cols(), self.universe);
        let mut out = AltTensor::zero(self.vars.clone(), self.universe, self.degree);
        let k = self.degree;
        if k == 0 {
            return self.clone();
        }
        for (s, c) in &self.comps {
            // wedge the columns of M indexed by s: sum over row subsets of
            // the corresponding minors
            let mut targets: Vec<Vec<usize>> = vec![vec![]];
            for _ in 0..k {
                let mut next = Vec::new();
                for t in &targets {
                    let start = t.last().map_or(0, |&x| x + 1);
                    for b in start..self.universe {
                        let mut nt = t.clone();
                        nt.push(b);
                        next.push(nt);
                    }
                }
                targets = next;
            }
            for t in &targets {
                let minor = m.submatrix(t, s).det();
                if !minor.is_zero() {
                    out.insert_signed(t, minor.mul(c));
                }
            }
        }
        out
    }

    /// Full evaluation on `degree` coefficient vectors.
    pub fn eval_sections(&self, args: &[&[Scalar]]) -> Scalar {
        assert_eq!(args.len(), self.degree);
        let mut cur = self.clone();
        for v in args {
            cur = cur.contract_first(v);
        }
        cur.get(&[])
    }
}

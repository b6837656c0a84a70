//! Multivector fields and differential forms on a chart, with the exterior
//! derivative, Lie bracket/derivative, interior product, and the
//! Schouten–Nijenhuis bracket.

use super::alt::AltTensor;
use super::Chart;
use crate::scalars::{GaussRat, Scalar};

macro_rules! alt_wrapper {
    ($name:ident) => {
        impl $name {
            pub fn zero(chart: &Chart, degree: usize) -> Self {
                $name { chart: chart.clone(), t: AltTensor::zero(chart.vars(), chart.dim(), degree) }
            }

            pub fn from_alt(chart: &Chart, t: AltTensor) -> Self {
                assert_eq!(t.universe(), chart.dim());
                $name { chart: chart.clone(), t }
            }

            /// A single decomposable term: `coeff` times the wedge of the
            /// basis elements named by `idx`.
            pub fn term(chart: &Chart, idx: &[usize], coeff: Scalar) -> Self {
                let mut t = AltTensor::zero(chart.vars(), chart.dim(), idx.len());
                t.insert_signed(idx, coeff);
                $name { chart: chart.clone(), t }
            }

            pub fn chart(&self) -> &Chart {
                &self.chart
            }

            pub fn degree(&self) -> usize {
                self.t.degree()
            }

            pub fn alt(&self) -> &AltTensor {
                &self.t
            }

            pub fn is_zero(&self) -> bool {
                self.t.is_zero()
            }

            pub fn get(&self, idx: &[usize]) -> Scalar {
                self.t.get(idx)
            }

            pub fn add(&self, rhs: &Self) -> Self {
                assert_eq!(self.chart, rhs.chart, "operands live on different charts");
                $name { chart: self.chart.clone(), t: self.t.add(&rhs.t) }
            }

            pub fn sub(&self, rhs: &Self) -> Self {
                assert_eq!(self.chart, rhs.chart, "operands live on different charts");
                $name { chart: self.chart.clone(), t: self.t.sub(&rhs.t) }
            }

            pub fn neg(&self) -> Self {
                $name { chart: self.chart.clone(), t: self.t.neg() }
            }

            pub fn scale(&self, f: &Scalar) -> Self {
                $name { chart: self.chart.clone(), t: self.t.scale(f) }
            }

            pub fn scale_rat(&self, c: &GaussRat) -> Self {
                $name { chart: self.chart.clone(), t: self.t.scale_rat(c) }
            }

            pub fn conj(&self) -> Self {
                $name { chart: self.chart.clone(), t: self.t.conj() }
            }

            pub fn wedge(&self, rhs: &Self) -> Self {
                assert_eq!(self.chart, rhs.chart, "operands live on different charts");
                $name { chart: self.chart.clone(), t: self.t.wedge(&rhs.t) }
            }
        }
    };
}

/// A k-vector field with polynomial coefficients, indexed over the
/// coordinate frame `∂_0, …, ∂_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiVec {
    chart: Chart,
    t: AltTensor,
}

/// A differential k-form with polynomial coefficients, indexed over the
/// coframe `dx_0, …, dx_{n-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiffForm {
    chart: Chart,
    t: AltTensor,
}

alt_wrapper!(MultiVec);
alt_wrapper!(DiffForm);

impl MultiVec {
    /// The coordinate vector field ∂_a.
    pub fn basis(chart: &Chart, a: usize) -> MultiVec {
        MultiVec::term(chart, &[a], chart.one())
    }

    /// Coefficient vector of a vector field (degree 1 only).
    pub fn coeffs(&self) -> Vec<Scalar> {
        assert_eq!(self.degree(), 1);
        (0..self.chart.dim()).map(|a| self.t.get(&[a])).collect()
    }

    pub fn from_coeffs(chart: &Chart, coeffs: &[Scalar]) -> MultiVec {
        assert_eq!(coeffs.len(), chart.dim());
        let mut t = AltTensor::zero(chart.vars(), chart.dim(), 1);
        for (a, c) in coeffs.iter().enumerate() {
            t.insert_signed(&[a], c.clone());
        }
        MultiVec { chart: chart.clone(), t }
    }

    /// Derivative of a function along a vector field (degree 1 only).
    pub fn apply_fn(&self, f: &Scalar) -> Scalar {
        assert_eq!(self.degree(), 1);
        let mut acc = self.chart.zero();
        for (k, c) in self.t.components() {
            acc = acc.add(&c.mul(&f.partial(k[0])));
        }
        acc
    }
}

impl DiffForm {
    /// The coordinate 1-form dx_a.
    pub fn basis(chart: &Chart, a: usize) -> DiffForm {
        DiffForm::term(chart, &[a], chart.one())
    }

    pub fn coeffs(&self) -> Vec<Scalar> {
        assert_eq!(self.degree(), 1);
        (0..self.chart.dim()).map(|a| self.t.get(&[a])).collect()
    }

    pub fn from_coeffs(chart: &Chart, coeffs: &[Scalar]) -> DiffForm {
        assert_eq!(coeffs.len(), chart.dim());
        let mut t = AltTensor::zero(chart.vars(), chart.dim(), 1);
        for (a, c) in coeffs.iter().enumerate() {
            t.insert_signed(&[a], c.clone());
        }
        DiffForm { chart: chart.clone(), t }
    }
}

/// Exterior derivative.
pub fn ext_d(w: &DiffForm) -> DiffForm {
    let chart = w.chart().clone();
    let mut out = AltTensor::zero(chart.vars(), chart.dim(), w.degree() + 1);
    for (s, c) in w.alt().components() {
        for a in 0..chart.dim() {
            let dc = c.partial(a);
            if dc.is_zero() {
                continue;
            }
            let mut idx = Vec::with_capacity(s.len() + 1);
            idx.push(a);
            idx.extend_from_slice(s);
            out.insert_signed(&idx, dc);
        }
    }
    DiffForm::from_alt(&chart, out)
}

/// Lie bracket of vector fields.
pub fn lie_bracket(x: &MultiVec, y: &MultiVec) -> MultiVec {
    assert_eq!(x.chart(), y.chart(), "operands live on different charts");
    assert_eq!((x.degree(), y.degree()), (1, 1));
    let chart = x.chart().clone();
    let xs = x.coeffs();
    let ys = y.coeffs();
    let coeffs: Vec<Scalar> = (0..chart.dim())
        .map(|a| {
            let mut acc = chart.zero();
            for b in 0..chart.dim() {
                acc = acc.add(&xs[b].mul(&ys[a].partial(b)));
                acc = acc.sub(&ys[b].mul(&xs[a].partial(b)));
            }
            acc
        })
        .collect();
    MultiVec::from_coeffs(&chart, &coeffs)
}

/// Interior product ι_X ω for a vector field X.
pub fn interior(x: &MultiVec, w: &DiffForm) -> DiffForm {
    assert_eq!(x.chart(), w.chart(), "operands live on different charts");
    assert_eq!(x.degree(), 1);
    if w.degree() == 0 {
        return DiffForm::zero(w.chart(), 0);
    }
    DiffForm::from_alt(w.chart(), w.alt().contract_first(&x.coeffs()))
}

/// Lie derivative of a form along a vector field, by the Cartan formula
/// `L_X = ι_X d + d ι_X`.
pub fn lie_derivative(x: &MultiVec, w: &DiffForm) -> DiffForm {
    interior(x, &ext_d(w)).add(&ext_d(&interior(x, w)))
}

/// Schouten–Nijenhuis bracket of multivector fields, normalized so that on
/// vector fields it is the Lie bracket and `[X, f] = X(f)`. Graded symmetry:
/// `[P,Q] = -(-1)^{(p-1)(q-1)} [Q,P]`.
pub fn schouten(p: &MultiVec, q: &MultiVec) -> MultiVec {
    assert_eq!(p.chart(), q.chart(), "operands live on different charts");
    let chart = p.chart().clone();
    let (dp, dq) = (p.degree(), q.degree());
    if dp == 0 && dq == 0 {
        return MultiVec::zero(&chart, 0);
    }
    if dp == 0 {
        // graded symmetry off the q = 0 case below
        let r = schouten(q, p);
        return if dq % 2 == 0 { r } else { r.neg() };
    }
    let mut out = AltTensor::zero(chart.vars(), chart.dim(), dp + dq - 1);
    for (s, f) in p.alt().components() {
        if dq == 0 {
            // [f ∂_{s_1}∧…∧∂_{s_p}, g] = Σ_i (-1)^{i+1} f (∂_{s_i} g) ∂_{s_1}∧…ŝ_i…∧∂_{s_p}
            let g = q.get(&[]);
            for (i, &si) in s.iter().enumerate() {
                let coeff = f.mul(&g.partial(si));
                let coeff = if i % 2 == 0 { coeff } else { coeff.neg() };
                let rest: Vec<usize> = s.iter().enumerate().filter(|(t, _)| *t != i).map(|(_, &v)| v).collect();
                out.insert_signed(&rest, coeff);
            }
            continue;
        }
        for (t, g) in q.alt().components() {
            // decomposable-term formula: write the terms as (f ∂_{s_1})∧∂_{s_2}∧…
            // and (g ∂_{t_1})∧∂_{t_2}∧…, then
            // [P,Q] = Σ_{i,j} (-1)^{i+j} [a_i, b_j] ∧ (rest of P) ∧ (rest of Q)
            for i in 0..dp {
                for j in 0..dq {
                    // bracket of the i-th factor of P with the j-th of Q;
                    // at most two vector-field terms
                    let mut bracket: Vec<(usize, Scalar)> = Vec::new();
                    match (i, j) {
                        (0, 0) => {
                            bracket.push((t[0], f.mul(&g.partial(s[0]))));
                            bracket.push((s[0], g.mul(&f.partial(t[0])).neg()));
                        }
                        (0, _) => bracket.push((s[0], f.partial(t[j]).mul(g).neg())),
                        (_, 0) => bracket.push((t[0], g.partial(s[i]).mul(f))),
                        _ => {}
                    }
                    let sign_neg = (i + j) % 2 == 1;
                    let rest_s: Vec<usize> = s.iter().enumerate().filter(|(u, _)| *u != i).map(|(_, &v)| v).collect();
                    let rest_t: Vec<usize> = t.iter().enumerate().filter(|(u, _)| *u != j).map(|(_, &v)| v).collect();
                    for (b, c) in bracket {
                        if c.is_zero() {
                            continue;
                        }
                        let c = if sign_neg { c.neg() } else { c };
                        let mut idx = Vec::with_capacity(dp + dq - 1);
                        idx.push(b);
                        idx.extend_from_slice(&rest_s);
                        idx.extend_from_slice(&rest_t);
                        out.insert_signed(&idx, c);
                    }
                }
            }
        }
    }
    MultiVec::from_alt(&chart, out)
}

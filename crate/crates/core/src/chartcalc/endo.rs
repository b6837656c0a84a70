//! Endomorphisms of the tangent bundle and the calculus they induce:
//! eigen-projections onto (p,q)-types, ∂ and ∂̄, and the classical Nijenhuis
//! torsion.

use super::alt::AltTensor;
use super::fields::{ext_d, lie_bracket, DiffForm, MultiVec};
use super::{Chart, ChartError};
use crate::matrix::PolyMat;
use crate::scalars::{GaussRat, Scalar};
use num::BigRational;

/// A (1,1)-tensor on the chart: `matrix[a][b]` is the coefficient of ∂_a in
/// the image of ∂_b.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TanEndo {
    chart: Chart,
    m: PolyMat,
}

impl TanEndo {
    pub fn new(chart: &Chart, m: PolyMat) -> TanEndo {
        assert_eq!((m.rows(), m.cols()), (chart.dim(), chart.dim()));
        TanEndo { chart: chart.clone(), m }
    }

    pub fn identity(chart: &Chart) -> TanEndo {
        TanEndo { chart: chart.clone(), m: PolyMat::identity(chart.vars(), chart.dim()) }
    }

    pub fn from_rows(chart: &Chart, rows: Vec<Vec<Scalar>>) -> TanEndo {
        TanEndo::new(chart, PolyMat::from_rows(chart.vars(), rows))
    }

    pub fn chart(&self) -> &Chart {
        &self.chart
    }

    pub fn matrix(&self) -> &PolyMat {
        &self.m
    }

    pub fn add(&self, rhs: &TanEndo) -> TanEndo {
        assert_eq!(self.chart, rhs.chart);
        TanEndo { chart: self.chart.clone(), m: self.m.add(&rhs.m) }
    }

    pub fn compose(&self, rhs: &TanEndo) -> TanEndo {
        assert_eq!(self.chart, rhs.chart);
        TanEndo { chart: self.chart.clone(), m: self.m.mul(&rhs.m) }
    }

    pub fn neg(&self) -> TanEndo {
        TanEndo { chart: self.chart.clone(), m: self.m.neg() }
    }

    pub fn apply_vec(&self, x: &MultiVec) -> MultiVec {
        assert_eq!(&self.chart, x.chart());
        MultiVec::from_coeffs(&self.chart, &self.m.apply(&x.coeffs()))
    }

    /// Pullback action on 1-forms: `(j*ξ)(X) = ξ(jX)`, i.e. the transpose
    /// on coefficients.
    pub fn apply_form(&self, xi: &DiffForm) -> DiffForm {
        assert_eq!(&self.chart, xi.chart());
        DiffForm::from_coeffs(&self.chart, &self.m.transpose().apply(&xi.coeffs()))
    }

    /// Does the endomorphism square to -1?
    pub fn is_almost_complex(&self) -> bool {
        let n = self.chart.dim();
        self.m.mul(&self.m).add(&PolyMat::identity(self.chart.vars(), n)).is_zero()
    }

    /// Eigen-projection of the tangent bundle: `(1 - i j)/2` for the
    /// `+i`-eigenbundle (`plus = true`), `(1 + i j)/2` for `-i`.
    pub fn eigen_projector(&self, plus: bool) -> PolyMat {
        let n = self.chart.dim();
        let ident = PolyMat::identity(self.chart.vars(), n);
        let half = GaussRat::from_ratio(1, 2);
        let ij = self.m.scale_rat(&GaussRat::i());
        let sum = if plus { ident.sub(&ij) } else { ident.add(&ij) };
        sum.scale_rat(&half)
    }
}

/// The classical Nijenhuis torsion `N_j(X,Y) = [jX,jY] - j[jX,Y] - j[X,jY] -
/// [X,Y]` evaluated on coordinate fields; `component(c)` is the 2-form-shaped
/// table of ∂_c-coefficients.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NijTensor {
    chart: Chart,
    comps: Vec<AltTensor>,
}

impl NijTensor {
    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|t| t.is_zero())
    }

    pub fn component(&self, c: usize) -> &AltTensor {
        &self.comps[c]
    }

    /// Coefficient of ∂_c in N_j(∂_a, ∂_b).
    pub fn get(&self, c: usize, a: usize, b: usize) -> Scalar {
        self.comps[c].get(&[a, b])
    }

    /// First nonzero entry (c, a, b, value), if any.
    pub fn witness(&self) -> Option<(usize, usize, usize, Scalar)> {
        for (c, t) in self.comps.iter().enumerate() {
            if let Some((k, v)) = t.components().next() {
                return Some((c, k[0], k[1], v.clone()));
            }
        }
        None
    }
}

pub fn nijenhuis_tangent(j: &TanEndo) -> Result<NijTensor, ChartError> {
    if !j.is_almost_complex() {
        return Err(ChartError::NotAlmostComplex);
    }
    let chart = j.chart().clone();
    let n = chart.dim();
    let basis: Vec<MultiVec> = (0..n).map(|a| MultiVec::basis(&chart, a)).collect();
    let jb: Vec<MultiVec> = basis.iter().map(|x| j.apply_vec(x)).collect();
    let mut comps = vec![AltTensor::zero(chart.vars(), n, 2); n];
    for a in 0..n {
        for b in (a + 1)..n {
            let mut nab = lie_bracket(&jb[a], &jb[b]);
            nab = nab.sub(&j.apply_vec(&lie_bracket(&jb[a], &basis[b])));
            nab = nab.sub(&j.apply_vec(&lie_bracket(&basis[a], &jb[b])));
            // [∂_a, ∂_b] = 0
            for (c, coeff) in nab.coeffs().into_iter().enumerate() {
                comps[c].insert_signed(&[a, b], coeff);
            }
        }
    }
    Ok(NijTensor { chart, comps })
}

/// Lagrange interpolation weights: coefficient of t^q in the basis
/// polynomial through integer nodes 0..=k that is 1 at node m.
fn lagrange_weights(k: usize) -> Vec<Vec<BigRational>> {
    use num::{BigInt, One, Zero};
    let nodes: Vec<BigRational> = (0..=k).map(|t| BigRational::from(BigInt::from(t))).collect();
    let mut out = Vec::with_capacity(k + 1);
    for m in 0..=k {
        // numerator polynomial Π_{n≠m} (t - t_n), expanded
        let mut coeffs = vec![BigRational::one()];
        let mut denom = BigRational::one();
        for (n, tn) in nodes.iter().enumerate() {
            if n == m {
                continue;
            }
            denom *= &nodes[m] - tn;
            let mut next = vec![BigRational::zero(); coeffs.len() + 1];
            for (d, c) in coeffs.iter().enumerate() {
                next[d + 1] += c;
                next[d] -= c * tn;
            }
            coeffs = next;
        }
        out.push(coeffs.into_iter().map(|c| c / &denom).collect());
    }
    out
}

/// Projection of a complexified k-form onto its (p,q)-type component with
/// respect to an almost complex structure j. Works slot-wise through the
/// eigen-projections `(1 ∓ i j)/2`, extracting the piece with `p` slots in
/// the `+i`-eigenbundle by exact polynomial interpolation.
pub fn type_project(w: &DiffForm, j: &TanEndo, p: usize, q: usize) -> Result<DiffForm, ChartError> {
    assert_eq!(w.chart(), j.chart(), "operands live on different charts");
    if !j.is_almost_complex() {
        return Err(ChartError::NotAlmostComplex);
    }
    let k = w.degree();
    if p + q != k {
        return Ok(DiffForm::zero(w.chart(), k));
    }
    let chart = w.chart().clone();
    let p10 = j.eigen_projector(true);
    let p01 = j.eigen_projector(false);
    // Λ^k of (P10 + t P01) acting on the arguments; the coefficient of t^q
    // is the (k-q, q) projection. Sample at t = 0..=k and interpolate.
    let weights = lagrange_weights(k);
    let mut result = AltTensor::zero(chart.vars(), chart.dim(), k);
    for t in 0..=k {
        let tc = Scalar::constant(chart.vars(), GaussRat::from_int(t as i64));
        let m = p10.add(&p01.scale(&tc));
        // arguments transform by m, so components transform by Λ^k(mᵀ)
        let sample = w.alt().apply_exterior(&m.transpose());
        let wgt = &weights[t][q];
        if wgt.is_zero() {
            continue;
        }
        result = result.add(&sample.scale_rat(&GaussRat::new(wgt.clone(), BigRational::from_integer(0.into()))));
    }
    Ok(DiffForm::from_alt(&chart, result))
}

use num::Zero;

/// ∂̄ relative to an integrable j: the (p, q+1)-projection of d applied to
/// each pure-type component.
pub fn dbar(w: &DiffForm, j: &TanEndo) -> Result<DiffForm, ChartError> {
    dee_type(w, j, false)
}

/// ∂ relative to an integrable j: the (p+1, q)-projection of d on each
/// pure-type component.
pub fn dpartial(w: &DiffForm, j: &TanEndo) -> Result<DiffForm, ChartError> {
    dee_type(w, j, true)
}

fn dee_type(w: &DiffForm, j: &TanEndo, raise_p: bool) -> Result<DiffForm, ChartError> {
    if !nijenhuis_tangent(j)?.is_zero() {
        return Err(ChartError::NotIntegrable);
    }
    let k = w.degree();
    let mut out = DiffForm::zero(w.chart(), k + 1);
    for p in 0..=k {
        let q = k - p;
        let piece = type_project(w, j, p, q)?;
        if piece.is_zero() {
            continue;
        }
        let d = ext_d(&piece);
        let proj = if raise_p {
            type_project(&d, j, p + 1, q)?
        } else {
            type_project(&d, j, p, q + 1)?
        };
        out = out.add(&proj);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chartcalc::fields::ext_d;

    /// Chart (x1, y1, x2, y2) for C² with z_a = x_a + i y_a, and the
    /// standard complex structure j∂x = ∂y, j∂y = -∂x.
    fn c2() -> (Chart, TanEndo) {
        let ch = Chart::new(&["x1", "y1", "x2", "y2"]);
        let mut m = PolyMat::zeros(ch.vars(), 4, 4);
        for a in [0, 2] {
            m[(a + 1, a)] = ch.one();
            m[(a, a + 1)] = ch.one().neg();
        }
        let j = TanEndo::new(&ch, m);
        (ch, j)
    }

    fn ihalf(ch: &Chart) -> Scalar {
        Scalar::i(ch.vars()).scale(&GaussRat::from_ratio(1, 2))
    }

    /// dz_a = dx_a + i dy_a on the C² chart.
    fn dz(ch: &Chart, a: usize) -> DiffForm {
        DiffForm::basis(ch, 2 * a).add(&DiffForm::basis(ch, 2 * a + 1).scale(&Scalar::i(ch.vars())))
    }

    #[test]
    fn type_projection_splits_dx_wedge_dx() {
        let (ch, j) = c2();
        // pr^{2,0}(dx1∧dx2) = ¼ dz1∧dz2
        let w = DiffForm::term(&ch, &[0, 2], ch.one());
        let expect = dz(&ch, 0).wedge(&dz(&ch, 1)).scale_rat(&GaussRat::from_ratio(1, 4));
        assert_eq!(type_project(&w, &j, 2, 0).unwrap(), expect);
        // the (2,0)-projection of a (2,0)-pure form is itself
        let pure = dz(&ch, 0).wedge(&dz(&ch, 1));
        assert_eq!(type_project(&pure, &j, 2, 0).unwrap(), pure);
        // the (1,1) real form dx1∧dy1 has no (2,0) part
        let w = DiffForm::term(&ch, &[0, 1], ch.one());
        assert!(type_project(&w, &j, 2, 0).unwrap().is_zero());
        // the pieces sum back to the input
        let w = DiffForm::term(&ch, &[0, 2], ch.coord(1)).add(&DiffForm::term(&ch, &[1, 3], ch.coord(0)));
        let total = type_project(&w, &j, 2, 0)
            .unwrap()
            .add(&type_project(&w, &j, 1, 1).unwrap())
            .add(&type_project(&w, &j, 0, 2).unwrap());
        assert_eq!(total, w);
        let _ = ihalf(&ch);
    }

    #[test]
    fn type_projection_requires_almost_complex() {
        let (ch, _) = c2();
        let not_ac = TanEndo::identity(&ch);
        let w = DiffForm::basis(&ch, 0);
        assert_eq!(type_project(&w, &not_ac, 1, 0), Err(ChartError::NotAlmostComplex));
    }

    #[test]
    fn dbar_examples() {
        let (ch, j) = c2();
        // constant holomorphic form
        assert!(dbar(&dz(&ch, 0).wedge(&dz(&ch, 1)), &j).unwrap().is_zero());
        // ∂̄(z̄1 dz2) = dz̄1 ∧ dz2
        let zbar1 = ch.coord(0).sub(&ch.coord(1).scale(&GaussRat::i()));
        let w = dz(&ch, 1).scale(&zbar1);
        let dzbar1 = dz(&ch, 0).conj();
        assert_eq!(dbar(&w, &j).unwrap(), dzbar1.wedge(&dz(&ch, 1)));
        // ∂̄² = 0 on a mixed polynomial form
        let w = DiffForm::term(&ch, &[0], crate::scalars::parse("x1^2*y2 + i*x2", ch.vars()).unwrap())
            .add(&DiffForm::term(&ch, &[3], crate::scalars::parse("y1*x2", ch.vars()).unwrap()));
        assert!(dbar(&dbar(&w, &j).unwrap(), &j).unwrap().is_zero());
        // and d = ∂ + ∂̄ on the same form
        assert_eq!(dpartial(&w, &j).unwrap().add(&dbar(&w, &j).unwrap()), ext_d(&w));
    }

    #[test]
    fn nijenhuis_constant_vanishes() {
        let (_, j) = c2();
        assert!(nijenhuis_tangent(&j).unwrap().is_zero());
    }

    #[test]
    fn nijenhuis_conjugated_structure() {
        // j' = A j A⁻¹ with A = 1 + x1·E_{13} (row 0, col 2 in 0-based
        // indices) is almost complex but not integrable.
        let (ch, j) = c2();
        let mut a = PolyMat::identity(ch.vars(), 4);
        a[(0, 2)] = ch.coord(0);
        let jp = TanEndo::new(&ch, a.mul(j.matrix()).mul(&a.inv_unit().unwrap()));
        assert!(jp.is_almost_complex());
        let n = nijenhuis_tangent(&jp).unwrap();
        assert!(!n.is_zero());

        // oracle: expand N(X,Y) by direct brackets on a non-coordinate pair
        use crate::chartcalc::fields::{lie_bracket, MultiVec};
        let x = MultiVec::term(&ch, &[0], ch.coord(1));
        let y = MultiVec::basis(&ch, 2);
        let jx = jp.apply_vec(&x);
        let jy = jp.apply_vec(&y);
        let direct = lie_bracket(&jx, &jy)
            .sub(&jp.apply_vec(&lie_bracket(&jx, &y)))
            .sub(&jp.apply_vec(&lie_bracket(&x, &jy)))
            .sub(&lie_bracket(&x, &y));
        // tensoriality: N(x1·∂0, ∂2)^c = x1 · N(∂0, ∂2)^c
        for c in 0..4 {
            assert_eq!(direct.get(&[c]), ch.coord(1).mul(&n.get(c, 0, 2)));
        }
    }
}

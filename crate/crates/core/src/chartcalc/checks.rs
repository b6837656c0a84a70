//! Composite verifiers built on the chart calculus: holomorphic Poisson
//! pairs and the 2-forms of an (almost) hyper-Kähler metric.

use super::endo::{nijenhuis_tangent, TanEndo};
use super::fields::{ext_d, schouten, DiffForm, MultiVec};
use super::ChartError;
use crate::matrix::PolyMat;
use crate::report::Report;
use crate::scalars::Scalar;
use serde_json::json;

/// Anchor matrix of a bivector: `sharp[b][a] = π^{ab}`, so that
/// `(π♯ξ)^b = Σ_a π^{ab} ξ_a`.
pub fn bivector_sharp(p: &MultiVec) -> PolyMat {
    assert_eq!(p.degree(), 2);
    let n = p.chart().dim();
    PolyMat::from_fn(p.chart().vars(), n, n, |b, a| p.get(&[a, b]))
}

fn first_nonzero(m: &PolyMat) -> Option<(usize, usize, Scalar)> {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if !m[(r, c)].is_zero() {
                return Some((r, c, m[(r, c)].clone()));
            }
        }
    }
    None
}

fn matrix_zero_check(report: &mut Report, name: &str, m: &PolyMat) {
    match first_nonzero(m) {
        None => report.pass(name),
        Some((r, c, v)) => report.fail(name, json!({ "row": r, "col": c, "value": v.to_string() })),
    }
}

fn multivec_zero_check(report: &mut Report, name: &str, p: &MultiVec) {
    match p.alt().components().next() {
        None => report.pass(name),
        Some((k, v)) => report.fail(name, json!({ "indices": k, "value": v.to_string() })),
    }
}

/// Checks that the real/imaginary parts `π1, π2` of a bivector form a
/// holomorphic Poisson structure for the integrable structure `j`:
/// compatibility `π₂♯ = -j∘π₁♯ = -π₁♯∘j*`, vanishing of all Schouten
/// brackets among the pair, and that `π₁ + iπ₂` is of type (2,0) and
/// ∂̄-closed.
pub fn holomorphic_poisson_check(p1: &MultiVec, p2: &MultiVec, j: &TanEndo) -> Result<Report, ChartError> {
    assert_eq!(p1.chart(), j.chart());
    assert_eq!(p2.chart(), j.chart());
    assert_eq!((p1.degree(), p2.degree()), (2, 2));
    if !nijenhuis_tangent(j)?.is_zero() {
        return Err(ChartError::NotIntegrable);
    }
    let mut report = Report::new();
    let s1 = bivector_sharp(p1);
    let s2 = bivector_sharp(p2);
    matrix_zero_check(&mut report, "sharp_compat_left", &s2.add(&j.matrix().mul(&s1)));
    matrix_zero_check(&mut report, "sharp_compat_right", &s2.add(&s1.mul(&j.matrix().transpose())));
    multivec_zero_check(&mut report, "schouten_p1_p1", &schouten(p1, p1));
    multivec_zero_check(&mut report, "schouten_p2_p2", &schouten(p2, p2));
    multivec_zero_check(&mut report, "schouten_p1_p2", &schouten(p1, p2));

    // π = π₁ + iπ₂ must be of type (2,0): projecting both slots onto the
    // +i-eigenbundle must change nothing.
    let i_unit = Scalar::i(p1.chart().vars());
    let pi = p1.add(&p2.scale(&i_unit));
    let p10 = j.eigen_projector(true);
    let p01 = j.eigen_projector(false);
    let projected = MultiVec::from_alt(pi.chart(), pi.alt().apply_exterior(&p10));
    multivec_zero_check(&mut report, "type_2_0", &projected.sub(&pi));

    // ∂̄π = 0: the (2,0)-part of L_V̄ π vanishes for V̄ ranging over a
    // spanning set of the -i-eigenbundle (the expression is tensorial in V̄
    // because a wedge with a (0,1)-vector has no (2,0) component).
    for a in 0..p1.chart().dim() {
        let vbar = MultiVec::from_coeffs(p1.chart(), &(0..p1.chart().dim()).map(|b| p01[(b, a)].clone()).collect::<Vec<_>>());
        let lie = schouten(&vbar, &pi);
        let part = MultiVec::from_alt(lie.chart(), lie.alt().apply_exterior(&p10));
        multivec_zero_check(&mut report, &format!("dbar_closed_{a}"), &part);
    }
    Ok(report)
}

/// Computes the three 2-forms `ω_a(X,Y) = g(i_a X, Y)` of a metric carrying
/// a quaternionic triple, checks that each is alternating, and reports
/// whether each is closed.
pub fn hyperkahler_forms(
    g: &TanEndo,
    i: &TanEndo,
    j: &TanEndo,
    k: &TanEndo,
) -> Result<(Report, [DiffForm; 3]), ChartError> {
    let chart = g.chart().clone();
    assert_eq!(i.chart(), &chart);
    assert_eq!(j.chart(), &chart);
    assert_eq!(k.chart(), &chart);
    let gm = g.matrix();
    if gm.sub(&gm.transpose()).is_zero() == false {
        return Err(ChartError::MetricNotSymmetric);
    }
    if !i.is_almost_complex() || !j.is_almost_complex() || !k.is_almost_complex() || i.compose(j).matrix() != k.matrix()
    {
        return Err(ChartError::NotQuaternionic);
    }
    let mut report = Report::new();
    report.check("metric_invertible", !gm.det().is_zero(), || json!({ "det": gm.det().to_string() }));
    let n = chart.dim();
    let mut forms = Vec::with_capacity(3);
    for (label, endo) in [("1", i), ("2", j), ("3", k)] {
        // ω(∂_a, ∂_b) = Σ_c g_{cb} (i_a)^c_a
        let w = PolyMat::from_fn(chart.vars(), n, n, |a, b| {
            let mut acc = chart.zero();
            for c in 0..n {
                acc = acc.add(&gm[(c, b)].mul(&endo.matrix()[(c, a)]));
            }
            acc
        });
        matrix_zero_check(&mut report, &format!("omega{label}_alternating"), &w.add(&w.transpose()));
        let mut form = DiffForm::zero(&chart, 2);
        for a in 0..n {
            for b in (a + 1)..n {
                form = form.add(&DiffForm::term(&chart, &[a, b], w[(a, b)].clone()));
            }
        }
        let d = ext_d(&form);
        match d.alt().components().next() {
            None => report.pass(format!("omega{label}_closed")),
            Some((idx, v)) => {
                report.fail(format!("omega{label}_closed"), json!({ "indices": idx, "value": v.to_string() }))
            }
        }
        forms.push(form);
    }
    let forms: [DiffForm; 3] = forms.try_into().unwrap();
    Ok((report, forms))
}

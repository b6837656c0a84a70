//! Reference structures used across the test suites and the command-line
//! fixtures: flat quaternionic space, the complex plane C² with its standard
//! holomorphic symplectic triple, the quaternion algebra over a point, and
//! several conjugated / twisted variants.

use crate::chartcalc::{Chart, DiffForm, MultiVec, TanEndo};
use crate::courant::Backend;
use crate::endo::{Endo, Triple};
use crate::matrix::PolyMat;
use crate::scalars::GaussRat;

/// Constant quaternionic triple (i, j, k = ij) on a 4-dimensional chart.
pub fn constant_quaternions(ch: &Chart) -> (TanEndo, TanEndo, TanEndo) {
    assert_eq!(ch.dim(), 4);
    let o = ch.zero();
    let l = ch.one();
    let n = || o.clone();
    let p = || l.clone();
    let m = || l.neg();
    let i = TanEndo::from_rows(
        ch,
        vec![
            vec![n(), m(), n(), n()],
            vec![p(), n(), n(), n()],
            vec![n(), n(), n(), m()],
            vec![n(), n(), p(), n()],
        ],
    );
    let j = TanEndo::from_rows(
        ch,
        vec![
            vec![n(), n(), m(), n()],
            vec![n(), n(), n(), p()],
            vec![p(), n(), n(), n()],
            vec![n(), m(), n(), n()],
        ],
    );
    let k = i.compose(&j);
    (i, j, k)
}

/// Flat-map matrix of a 2-form: `M[b][a] = ω_{ab}`, so `M·X = ι_X ω` on
/// coefficients.
pub fn form_flat(w: &DiffForm) -> PolyMat {
    assert_eq!(w.degree(), 2);
    let n = w.chart().dim();
    PolyMat::from_fn(w.chart().vars(), n, n, |b, a| w.get(&[a, b]))
}

/// Sharp-map matrix of a bivector: `M[b][a] = π^{ab}`.
pub fn bivector_flat(p: &MultiVec) -> PolyMat {
    crate::chartcalc::bivector_sharp(p)
}

/// Bivector with sharp matrix `m` (the inverse construction of
/// [`bivector_flat`]); `m` must be antisymmetric.
pub fn bivector_from_sharp(ch: &Chart, m: &PolyMat) -> MultiVec {
    let n = ch.dim();
    assert!(m.add(&m.transpose()).is_zero());
    let mut out = MultiVec::zero(ch, 2);
    for a in 0..n {
        for b in (a + 1)..n {
            out = out.add(&MultiVec::term(ch, &[a, b], m[(b, a)].clone()));
        }
    }
    out
}

/// Flat quaternionic R⁴: the constant classical triple lifted block-
/// diagonally to the standard Courant algebroid.
pub fn flatq() -> (Backend, Triple) {
    let ch = Chart::new(&["x0", "x1", "x2", "x3"]);
    let b = Backend::standard(&ch);
    let (i, j, k) = constant_quaternions(&ch);
    let t = Triple::new(
        Endo::lift_complex(&b, &i),
        Endo::lift_complex(&b, &j),
        Endo::lift_complex(&b, &k),
    );
    (b, t)
}

/// The chart (x1, y1, x2, y2) of C² and the standard tangent complex
/// structure j∂x = ∂y.
pub fn c2_chart() -> (Chart, TanEndo) {
    let ch = Chart::new(&["x1", "y1", "x2", "y2"]);
    let mut m = PolyMat::zeros(ch.vars(), 4, 4);
    for a in [0, 2] {
        m[(a + 1, a)] = ch.one();
        m[(a, a + 1)] = ch.one().neg();
    }
    let j = TanEndo::new(&ch, m);
    (ch, j)
}

/// Real and imaginary parts of dz1∧dz2 on the C² chart:
/// ω₁ = dx1∧dx2 − dy1∧dy2 and ω₂' = dx1∧dy2 + dy1∧dx2 with
/// dz1∧dz2 = ω₁ + i ω₂'.
pub fn c2_symplectic_parts(ch: &Chart) -> (DiffForm, DiffForm) {
    let w1 = DiffForm::term(ch, &[0, 2], ch.one()).sub(&DiffForm::term(ch, &[1, 3], ch.one()));
    let w2 = DiffForm::term(ch, &[0, 3], ch.one()).add(&DiffForm::term(ch, &[1, 2], ch.one()));
    (w1, w2)
}

/// C² with the triple induced by the holomorphic symplectic form dz1∧dz2:
/// I and K are built from ω₁ = Re(dz1∧dz2) and ω₂ = −Im(dz1∧dz2) as
/// `[[0, ω⁻¹], [−ω, 0]]`, J is the lift of the tangent complex structure.
pub fn c2std() -> (Backend, Triple) {
    let (ch, j) = c2_chart();
    let b = Backend::standard(&ch);
    let (w1, w2im) = c2_symplectic_parts(&ch);
    let w2 = w2im.neg();
    let z = PolyMat::zeros(ch.vars(), 4, 4);
    let omega_block = |w: &DiffForm| -> Endo {
        let flat = form_flat(w);
        let inv = flat.inv_unit().expect("constant symplectic form");
        Endo::from_blocks(&b, &z, &inv, &flat.neg(), &z)
    };
    let t = Triple::new(omega_block(&w1), Endo::lift_complex(&b, &j), omega_block(&w2));
    (b, t)
}

/// The quaternion algebra ℍ as a Courant algebroid over a point, with left
/// multiplications by i, j, k as the hypercomplex triple.
pub fn hpt() -> (Backend, Triple) {
    let z = GaussRat::zero;
    let two = GaussRat::from_int(2);
    let mut bracket = vec![vec![vec![z(); 4]; 4]; 4];
    for (a, b, c) in [(1usize, 2usize, 3usize), (2, 3, 1), (3, 1, 2)] {
        bracket[a][b][c] = two.clone();
        bracket[b][a][c] = -&two;
    }
    let pairing: Vec<Vec<GaussRat>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { GaussRat::one() } else { z() }).collect())
        .collect();
    let backend = Backend::point(bracket, pairing).expect("quaternion algebra is valid");
    // left multiplication tables on the basis {1, i, j, k}
    let table = |q: usize| -> PolyMat {
        // product of basis quaternions: e_q · e_b
        let mut m = PolyMat::zeros(backend.vars(), 4, 4);
        let one = crate::scalars::Scalar::one(backend.vars());
        for b in 0..4 {
            let (target, sign) = quaternion_product(q, b);
            m[(target, b)] = if sign < 0 { one.neg() } else { one.clone() };
        }
        m
    };
    let t = Triple::new(
        Endo::new(&backend, table(1)),
        Endo::new(&backend, table(2)),
        Endo::new(&backend, table(3)),
    );
    (backend, t)
}

/// Product of quaternion basis elements e_a·e_b with {e0,e1,e2,e3} =
/// {1,i,j,k}: returns (index, sign).
pub fn quaternion_product(a: usize, b: usize) -> (usize, i8) {
    match (a, b) {
        (0, x) | (x, 0) => (x, 1),
        (x, y) if x == y => (0, -1),
        (1, 2) => (3, 1),
        (2, 1) => (3, -1),
        (2, 3) => (1, 1),
        (3, 2) => (1, -1),
        (3, 1) => (2, 1),
        (1, 3) => (2, -1),
        _ => unreachable!(),
    }
}

/// The closed 2-form used for B-field conjugation: B = d(x0 x1 dx2).
pub fn flatq_b_form(ch: &Chart) -> DiffForm {
    DiffForm::term(ch, &[0, 2], ch.coord(1)).add(&DiffForm::term(ch, &[1, 2], ch.coord(0)))
}

/// FLATQ conjugated by the B-field transform of a closed 2-form: a
/// hypercomplex triple with non-constant matrices.
pub fn flatq_b() -> (Backend, Triple, DiffForm) {
    let (b, t) = flatq();
    let ch = b.chart().unwrap().clone();
    let bf = flatq_b_form(&ch);
    let t2 = Triple::new(
        crate::endo::b_conjugate(&t.i, &bf),
        crate::endo::b_conjugate(&t.j, &bf),
        crate::endo::b_conjugate(&t.k, &bf),
    );
    (b, t2, bf)
}

/// A non-integrable complex structure on the standard algebroid over R⁴:
/// the lift of j conjugated by diag(A, A⁻ᵀ) with the unipotent
/// A = 1 + x1·E_{02}. Pairing-orthogonal and squaring to −1, but with
/// nonvanishing Nijenhuis concomitant.
pub fn nonint() -> (Backend, Endo) {
    let ch = Chart::new(&["x0", "x1", "x2", "x3"]);
    let b = Backend::standard(&ch);
    let (_, j, _) = constant_quaternions(&ch);
    let mut a = PolyMat::identity(ch.vars(), 4);
    a[(0, 2)] = ch.coord(1);
    let a_inv = a.inv_unit().expect("unipotent");
    let conj = a.mul(j.matrix()).mul(&a_inv);
    let z = PolyMat::zeros(ch.vars(), 4, 4);
    let jp = Endo::from_blocks(&b, &conj, &z, &z, &conj.transpose().neg());
    (b, jp)
}

/// Hyper-Poisson data on flat R⁴: the bivectors π_a inverse to the
/// hyper-Kähler 2-forms of the euclidean metric, and the upper-triangular
/// triple of the equivalence theorem:
/// I = [[i, π₃],[0, −i*]], J = [[j, 0],[0, −j*]], K = [[k, −π₁],[0, −k*]].
pub fn hp_kahler() -> (Backend, Triple, [MultiVec; 3]) {
    let ch = Chart::new(&["x0", "x1", "x2", "x3"]);
    let b = Backend::standard(&ch);
    let (i, j, k) = constant_quaternions(&ch);
    // ω_a(X,Y) = g(i_a X, Y) with g = id: flat matrix = endo matrix itself
    // up to transpose bookkeeping; build the forms then invert exactly.
    let omega = |e: &TanEndo| -> MultiVec {
        let n = ch.dim();
        // ω_{ab} = g(i∂_a, ∂_b) = i^b_a for g = id
        let mut form = DiffForm::zero(&ch, 2);
        for a in 0..n {
            for bb in (a + 1)..n {
                form = form.add(&DiffForm::term(&ch, &[a, bb], e.matrix()[(bb, a)].clone()));
            }
        }
        let sharp = form_flat(&form).inv_unit().expect("nondegenerate");
        bivector_from_sharp(&ch, &sharp)
    };
    let p1 = omega(&i);
    let p2 = omega(&j);
    let p3 = omega(&k);
    let z = PolyMat::zeros(ch.vars(), 4, 4);
    let t = Triple::new(
        Endo::from_blocks(&b, i.matrix(), &bivector_flat(&p3), &z, &i.matrix().transpose().neg()),
        Endo::lift_complex(&b, &j),
        Endo::from_blocks(&b, k.matrix(), &bivector_flat(&p1).neg(), &z, &k.matrix().transpose().neg()),
    );
    (b, t, [p1, p2, p3])
}

/// Flat quaternionic R⁴ over a twisted backend (closed twist 3-form).
pub fn twist_c2() -> (Backend, Triple) {
    let ch = Chart::new(&["x0", "x1", "x2", "x3"]);
    let phi = DiffForm::term(&ch, &[0, 1, 2], ch.coord(0));
    let b = Backend::twisted(&ch, phi).expect("closed twist");
    let (i, j, k) = constant_quaternions(&ch);
    let t = Triple::new(
        Endo::lift_complex(&b, &i),
        Endo::lift_complex(&b, &j),
        Endo::lift_complex(&b, &k),
    );
    (b, t)
}

/// R⁶ twisted by φ = Re(dz1∧dz2∧dz3), with the lift of the standard
/// complex structure of C³. The twist has a (3,0)+(0,3) component, so the
/// lifted J is NOT integrable on this backend.
pub fn twist_c3_neg() -> (Backend, Endo) {
    let ch = Chart::new(&["x1", "y1", "x2", "y2", "x3", "y3"]);
    // Re[(dx1 + i dy1)∧(dx2 + i dy2)∧(dx3 + i dy3)]
    let dz = |a: usize| {
        DiffForm::basis(&ch, 2 * a).add(&DiffForm::basis(&ch, 2 * a + 1).scale(&crate::scalars::Scalar::i(ch.vars())))
    };
    let prod = dz(0).wedge(&dz(1)).wedge(&dz(2));
    let phi = prod.add(&prod.conj()).scale_rat(&GaussRat::from_ratio(1, 2));
    let b = Backend::twisted(&ch, phi).expect("constant form is closed");
    let mut m = PolyMat::zeros(ch.vars(), 6, 6);
    for a in [0, 2, 4] {
        m[(a + 1, a)] = ch.one();
        m[(a, a + 1)] = ch.one().neg();
    }
    let j = TanEndo::new(&ch, m);
    (b.clone(), Endo::lift_complex(&b, &j))
}

/// Broken holomorphic symplectic candidates on C²: the [`c2std`] triple
/// conjugated by the B-field transform of a NON-closed 2-form. The
/// conjugation is pairing-orthogonal, so every algebraic invariant of the
/// resulting Ω♯ = (I' + i K')/2 (skewness, the eigenbundle shape relative
/// to the conjugated J', and the nondegeneracy identity) survives exactly,
/// and in complex dimension two J' remains integrable — but e^B with
/// dB ≠ 0 is not a bracket automorphism, so closedness of Ω breaks.
/// Index selects B ∈ {y1, y2, x1·y1}·dx1∧dx2.
pub fn c2_broken_sharp(which: usize) -> (Backend, Endo, Endo) {
    let (b, t) = c2std();
    let ch = b.chart().unwrap().clone();
    let f = match which {
        0 => ch.coord(1),
        1 => ch.coord(3),
        _ => ch.coord(0).mul(&ch.coord(1)),
    };
    let bf = DiffForm::term(&ch, &[0, 2], f);
    let i = crate::endo::b_conjugate(&t.i, &bf);
    let j = crate::endo::b_conjugate(&t.j, &bf);
    let k = crate::endo::b_conjugate(&t.k, &bf);
    let sharp = i
        .add(&k.scale_rat(&GaussRat::i()))
        .scale_rat(&GaussRat::from_ratio(1, 2));
    (b, j, sharp)
}

//! Endomorphism algebra on a Courant backend: skewness/orthogonality
//! predicates, Nijenhuis concomitants, induced Poisson bivectors, and
//! hypercomplex-triple verification.

use crate::chartcalc::{Chart, DiffForm, MultiVec, TanEndo};
use crate::courant::{Backend, Section};
use crate::matrix::PolyMat;
use crate::report::Report;
use crate::scalars::{GaussRat, Scalar};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndoError {
    #[error("endomorphisms live on different backends")]
    BackendMismatch,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("triple does not satisfy the quaternion relations")]
    NotQuaternionic,
    #[error("coefficients do not lie on the rational unit sphere")]
    NotUnitVector,
    #[error("operation requires a chart backend")]
    UnsupportedOnPoint,
}

/// A C∞-linear endomorphism of the algebroid, as a rank×rank matrix in the
/// standard frame: `m[a][b]` is the e_a-coefficient of F(e_b).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endo {
    backend: Backend,
    m: PolyMat,
}

impl Endo {
    pub fn new(backend: &Backend, m: PolyMat) -> Endo {
        assert_eq!((m.rows(), m.cols()), (backend.rank(), backend.rank()));
        Endo { backend: backend.clone(), m }
    }

    pub fn identity(backend: &Backend) -> Endo {
        Endo { backend: backend.clone(), m: PolyMat::identity(backend.vars(), backend.rank()) }
    }

    /// Assembles a 2n×2n endomorphism of a chart backend from n×n blocks
    /// `[[A, B], [C, D]]` (vector-part rows/columns first).
    pub fn from_blocks(backend: &Backend, a: &PolyMat, b: &PolyMat, c: &PolyMat, d: &PolyMat) -> Endo {
        let n = backend.chart().expect("chart backend required").dim();
        for blk in [a, b, c, d] {
            assert_eq!((blk.rows(), blk.cols()), (n, n));
        }
        let m = PolyMat::from_fn(backend.vars(), 2 * n, 2 * n, |i, j| match (i < n, j < n) {
            (true, true) => a[(i, j)].clone(),
            (true, false) => b[(i, j - n)].clone(),
            (false, true) => c[(i - n, j)].clone(),
            (false, false) => d[(i - n, j - n)].clone(),
        });
        Endo { backend: backend.clone(), m }
    }

    /// The lift `[[j, 0], [0, -j*]]` of a tangent complex structure to the
    /// standard Courant algebroid.
    pub fn lift_complex(backend: &Backend, j: &TanEndo) -> Endo {
        let ch = backend.chart().expect("chart backend required");
        assert_eq!(j.chart(), ch);
        let z = PolyMat::zeros(backend.vars(), ch.dim(), ch.dim());
        Endo::from_blocks(backend, j.matrix(), &z, &z, &j.matrix().transpose().neg())
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn matrix(&self) -> &PolyMat {
        &self.m
    }

    pub fn block(&self, row: usize, col: usize) -> PolyMat {
        let n = self.backend.chart().expect("chart backend required").dim();
        let rows: Vec<usize> = (row * n..(row + 1) * n).collect();
        let cols: Vec<usize> = (col * n..(col + 1) * n).collect();
        self.m.submatrix(&rows, &cols)
    }

    pub fn apply(&self, u: &Section) -> Section {
        assert_eq!(u.rank(), self.backend.rank());
        Section::from_coeffs(self.m.apply(u.coeffs()))
    }

    pub fn compose(&self, rhs: &Endo) -> Endo {
        assert_eq!(self.backend, rhs.backend);
        Endo { backend: self.backend.clone(), m: self.m.mul(&rhs.m) }
    }

    pub fn add(&self, rhs: &Endo) -> Endo {
        assert_eq!(self.backend, rhs.backend);
        Endo { backend: self.backend.clone(), m: self.m.add(&rhs.m) }
    }

    pub fn sub(&self, rhs: &Endo) -> Endo {
        assert_eq!(self.backend, rhs.backend);
        Endo { backend: self.backend.clone(), m: self.m.sub(&rhs.m) }
    }

    pub fn neg(&self) -> Endo {
        Endo { backend: self.backend.clone(), m: self.m.neg() }
    }

    pub fn scale_rat(&self, c: &GaussRat) -> Endo {
        Endo { backend: self.backend.clone(), m: self.m.scale_rat(c) }
    }

    pub fn conj(&self) -> Endo {
        Endo { backend: self.backend.clone(), m: self.m.conj() }
    }

    pub fn squares_to_minus_one(&self) -> bool {
        self.m.mul(&self.m).add(&PolyMat::identity(self.backend.vars(), self.backend.rank())).is_zero()
    }

    /// First witness of `⟨FU,FV⟩ ≠ ⟨U,V⟩` on frame pairs, or None if the
    /// endomorphism is orthogonal for the pairing (FᵀGF = G).
    pub fn orthogonality_defect(&self) -> Option<(usize, usize, Scalar)> {
        let g = self.backend.pairing_matrix();
        let d = self.m.transpose().mul(&g).mul(&self.m).sub(&g);
        first_nonzero(&d)
    }

    pub fn is_orthogonal(&self) -> bool {
        self.orthogonality_defect().is_none()
    }

    /// First witness of `⟨FU,V⟩ + ⟨U,FV⟩ ≠ 0` on frame pairs, or None if
    /// the endomorphism is skew-symmetric for the pairing (FᵀG + GF = 0).
    pub fn skew_defect(&self) -> Option<(usize, usize, Scalar)> {
        let g = self.backend.pairing_matrix();
        let d = self.m.transpose().mul(&g).add(&g.mul(&self.m));
        first_nonzero(&d)
    }

    pub fn is_skew(&self) -> bool {
        self.skew_defect().is_none()
    }
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

/// The Nijenhuis concomitant
/// `N(F,G)(U,V) = FU∘GV − F(U∘GV) − G(FU∘V) + FG(U∘V)
///              + GU∘FV − G(U∘FV) − F(GU∘V) + GF(U∘V)`.
pub fn nijenhuis(f: &Endo, g: &Endo, u: &Section, v: &Section) -> Result<Section, EndoError> {
    if f.backend != g.backend {
        return Err(EndoError::BackendMismatch);
    }
    let b = &f.backend;
    if u.rank() != b.rank() || v.rank() != b.rank() {
        return Err(EndoError::BackendMismatch);
    }
    let dor = |x: &Section, y: &Section| b.dorfman(x, y).expect("same backend");
    let half = |f: &Endo, g: &Endo| -> Section {
        let fu = f.apply(u);
        let gv = g.apply(v);
        let uv = dor(u, v);
        dor(&fu, &gv)
            .sub(&f.apply(&dor(u, &gv)))
            .sub(&g.apply(&dor(&fu, v)))
            .add(&f.apply(&g.apply(&uv)))
    };
    Ok(half(f, g).add(&half(g, f)))
}

/// The scalar form `N_{F,G}(U,V,W) = ⟨N(F,G)(U,V), W⟩`.
pub fn nijenhuis_scalar(f: &Endo, g: &Endo, u: &Section, v: &Section, w: &Section) -> Result<Scalar, EndoError> {
    let n = nijenhuis(f, g, u, v)?;
    f.backend.pairing(&n, w).map_err(|_| EndoError::BackendMismatch)
}

/// For skew F, G with `FG + GF = λ·id`, the concomitant form is a section
/// of ∧³E*; this returns its totally antisymmetric frame array together
/// with λ. The hypotheses are verified first, and the computed array is
/// asserted antisymmetric.
pub fn nijenhuis_form(f: &Endo, g: &Endo) -> Result<(crate::chartcalc::AltTensor, GaussRat), EndoError> {
    if f.backend != g.backend {
        return Err(EndoError::BackendMismatch);
    }
    if let Some((a, b, v)) = f.skew_defect() {
        return Err(EndoError::HypothesisViolated(format!("F is not skew: defect {v} at ({a},{b})")));
    }
    if let Some((a, b, v)) = g.skew_defect() {
        return Err(EndoError::HypothesisViolated(format!("G is not skew: defect {v} at ({a},{b})")));
    }
    let anti = f.compose(g).add(&g.compose(f));
    let lambda = match anti.m[(0, 0)].as_constant() {
        Some(c) => c,
        None => {
            return Err(EndoError::HypothesisViolated(format!(
                "FG+GF is not a constant multiple of the identity: entry (0,0) = {}",
                anti.m[(0, 0)]
            )))
        }
    };
    let expected =
        PolyMat::identity(f.backend.vars(), f.backend.rank()).scale(&Scalar::constant(f.backend.vars(), lambda.clone()));
    if let Some((a, b, v)) = first_nonzero(&anti.m.sub(&expected)) {
        return Err(EndoError::HypothesisViolated(format!("FG+GF is not λ·id: defect {v} at ({a},{b})")));
    }
    let rank = f.backend.rank();
    let frames: Vec<Section> = (0..rank).map(|a| f.backend.frame_section(a)).collect();
    let mut table = vec![Scalar::zero(f.backend.vars()); rank * rank * rank];
    for a in 0..rank {
        for b in 0..rank {
            let nab = nijenhuis(f, g, &frames[a], &frames[b])?;
            for c in 0..rank {
                table[(a * rank + b) * rank + c] =
                    f.backend.pairing(&nab, &frames[c]).expect("same backend");
            }
        }
    }
    let mut out = crate::chartcalc::AltTensor::zero(f.backend.vars(), rank, 3);
    for a in 0..rank {
        for b in (a + 1)..rank {
            for c in (b + 1)..rank {
                out.insert_signed(&[a, b, c], table[(a * rank + b) * rank + c].clone());
            }
        }
    }
    // the lemma guarantees antisymmetry under the verified hypotheses
    for a in 0..rank {
        for b in 0..rank {
            for c in 0..rank {
                assert_eq!(
                    table[(a * rank + b) * rank + c],
                    out.get(&[a, b, c]),
                    "concomitant form is not antisymmetric at ({a},{b},{c})"
                );
            }
        }
    }
    Ok((out, lambda))
}

/// The bivector field `π_F` with `π_F(df, dg) = ⟨F Df, Dg⟩`, assembled from
/// coordinate functions.
pub fn poisson_of(f: &Endo) -> Result<MultiVec, EndoError> {
    let ch: &Chart = f.backend.chart().ok_or(EndoError::UnsupportedOnPoint)?;
    if let Some((a, b, v)) = f.skew_defect() {
        return Err(EndoError::HypothesisViolated(format!("F is not skew: defect {v} at ({a},{b})")));
    }
    let n = ch.dim();
    let mut out = MultiVec::zero(ch, 2);
    for a in 0..n {
        for b in (a + 1)..n {
            let da = f.backend.dee(&ch.coord(a));
            let db = f.backend.dee(&ch.coord(b));
            let c = f.backend.pairing(&f.apply(&da), &db).expect("same backend");
            out = out.add(&MultiVec::term(ch, &[a, b], c));
        }
    }
    Ok(out)
}

/// Returns the Jacobiator of `{f,g} = π_F(df,dg)` on (f,g,h) together with
/// `−¼ N_{F,F}(Df, Dg, Dh)`; the two agree for skew F.
pub fn jacobiator_check(
    fe: &Endo,
    f: &Scalar,
    g: &Scalar,
    h: &Scalar,
) -> Result<(Scalar, Scalar), EndoError> {
    let b = &fe.backend;
    b.chart().ok_or(EndoError::UnsupportedOnPoint)?;
    if let Some((r, c, v)) = fe.skew_defect() {
        return Err(EndoError::HypothesisViolated(format!("F is not skew: defect {v} at ({r},{c})")));
    }
    let bracket = |x: &Scalar, y: &Scalar| -> Scalar {
        b.pairing(&fe.apply(&b.dee(x)), &b.dee(y)).expect("same backend")
    };
    let jac = bracket(f, &bracket(g, h))
        .add(&bracket(g, &bracket(h, f)))
        .add(&bracket(h, &bracket(f, g)));
    let nf = nijenhuis_scalar(fe, fe, &b.dee(f), &b.dee(g), &b.dee(h))?
        .scale(&GaussRat::from_ratio(-1, 4));
    Ok((jac, nf))
}

/// A candidate hypercomplex triple on a common backend.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triple {
    pub i: Endo,
    pub j: Endo,
    pub k: Endo,
}

impl Triple {
    pub fn new(i: Endo, j: Endo, k: Endo) -> Triple {
        assert_eq!(i.backend, j.backend);
        assert_eq!(i.backend, k.backend);
        Triple { i, j, k }
    }

    pub fn backend(&self) -> &Backend {
        &self.i.backend
    }

    pub fn is_quaternionic(&self) -> bool {
        self.quaternionic_check().all_passed()
    }

    /// Checks the quaternion relations I² = J² = K² = IJK = −1.
    pub fn quaternionic_check(&self) -> Report {
        let mut report = Report::new();
        let minus_one = Endo::identity(self.backend()).neg();
        for (name, val) in [
            ("i_squared", self.i.compose(&self.i)),
            ("j_squared", self.j.compose(&self.j)),
            ("k_squared", self.k.compose(&self.k)),
            ("ijk", self.i.compose(&self.j).compose(&self.k)),
        ] {
            match first_nonzero(&val.m.sub(&minus_one.m)) {
                None => report.pass(name),
                Some((a, b, v)) => report.fail(name, json!({ "row": a, "col": b, "value": v.to_string() })),
            }
        }
        report
    }
}

/// Verifies a quaternionic triple is hypercomplex: all six pairwise
/// Nijenhuis concomitants N(I,I), N(I,J), N(I,K), N(J,J), N(J,K), N(K,K)
/// vanish on frame pairs. Also evaluates the shortcut criterion — N(I,J)=0
/// alone suffices — and cross-checks that both routes agree.
pub fn hypercomplex_check(t: &Triple) -> Result<Report, EndoError> {
    if !t.is_quaternionic() {
        return Err(EndoError::NotQuaternionic);
    }
    let b = t.backend();
    let frames: Vec<Section> = (0..b.rank()).map(|a| b.frame_section(a)).collect();
    let mut report = Report::new();
    let pairs = [
        ("n_ii", &t.i, &t.i),
        ("n_ij", &t.i, &t.j),
        ("n_ik", &t.i, &t.k),
        ("n_jj", &t.j, &t.j),
        ("n_jk", &t.j, &t.k),
        ("n_kk", &t.k, &t.k),
    ];
    let mut all_six = true;
    let mut shortcut = true;
    for (name, f, g) in pairs {
        let mut witness = None;
        'outer: for (a, u) in frames.iter().enumerate() {
            for (c, v) in frames.iter().enumerate() {
                let n = nijenhuis(f, g, u, v)?;
                if !n.is_zero() {
                    witness = Some((a, c, n));
                    break 'outer;
                }
            }
        }
        match witness {
            None => report.pass(name),
            Some((a, c, n)) => {
                all_six = false;
                if name == "n_ij" {
                    shortcut = false;
                }
                let res: Vec<String> = n.coeffs().iter().map(|s| s.to_string()).collect();
                report.fail(name, json!({ "u": a, "v": c, "residual": res }));
            }
        }
    }
    report.check("shortcut_n_ij", shortcut, || json!("N(I,J) does not vanish"));
    report.check("shortcut_consistent", shortcut == all_six, || {
        json!({ "shortcut": shortcut, "all_six": all_six })
    });
    Ok(report)
}

/// The combination λ₁I + λ₂J + λ₃K for (λ₁,λ₂,λ₃) on the rational unit
/// sphere.
pub fn sphere_structure(t: &Triple, l1: &GaussRat, l2: &GaussRat, l3: &GaussRat) -> Result<Endo, EndoError> {
    let norm = &(&(l1 * l1) + &(l2 * l2)) + &(l3 * l3);
    if !norm.is_one() || !l1.is_real() || !l2.is_real() || !l3.is_real() {
        return Err(EndoError::NotUnitVector);
    }
    Ok(t.i.scale_rat(l1).add(&t.j.scale_rat(l2)).add(&t.k.scale_rat(l3)))
}

/// Conjugation of an endomorphism by the B-field transform `e_B`:
/// `e_B F e_{-B}` in the standard frame, with `e_B = [[1,0],[B♭,1]]`.
pub fn b_conjugate(f: &Endo, b2: &DiffForm) -> Endo {
    let ch = f.backend.chart().expect("chart backend required").clone();
    assert_eq!(b2.chart(), &ch);
    assert_eq!(b2.degree(), 2);
    let n = ch.dim();
    // (ι_X B)_b = Σ_a X^a B_{ab}: flat map has matrix M[b][a] = B_{ab}
    let flat = PolyMat::from_fn(ch.vars(), n, n, |b, a| b2.get(&[a, b]));
    let mut eb = PolyMat::identity(ch.vars(), 2 * n);
    let mut eb_inv = PolyMat::identity(ch.vars(), 2 * n);
    for r in 0..n {
        for c in 0..n {
            eb[(n + r, c)] = flat[(r, c)].clone();
            eb_inv[(n + r, c)] = flat[(r, c)].neg();
        }
    }
    Endo::new(&f.backend, eb.mul(&f.m).mul(&eb_inv))
}

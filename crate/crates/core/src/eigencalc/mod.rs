//! Eigenbundle calculus for a complex structure on a Courant algebroid:
//! certified isotropic frames for the two eigenbundles, their duality,
//! Lie-algebroid differentials and Lie derivatives on frame-indexed forms,
//! and the Schouten bracket on multivectors over the +i eigenbundle.

use crate::chartcalc::AltTensor;
use crate::courant::{Backend, Section};
use crate::endo::Endo;
use crate::matrix::PolyMat;
use crate::report::Report;
use crate::scalars::{GaussRat, Scalar};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EigenError {
    #[error("endomorphism is not an orthogonal almost complex structure")]
    NotComplexStructure,
    #[error("frame sections {a} and {b} are not isotropic under the pairing")]
    NotIsotropic { a: usize, b: usize },
    #[error("no minor of the coefficient matrix has a nonzero constant determinant")]
    NoUnitMinor,
    #[error("bracket of frame sections {a} and {b} leaves the frame's span")]
    NotInvolutive { a: usize, b: usize },
    #[error("section does not lie in the span of the frame")]
    NotInSpan,
    #[error("operands live on different backends or frames")]
    BackendMismatch,
    #[error("form degree does not match the operation")]
    DegreeMismatch,
    #[error("duality pairing between the frame and its conjugate is degenerate")]
    DualityDegenerate,
    #[error("seed section {0} is not a +i eigensection")]
    NotEigenSection(usize),
    #[error("extracted coefficient matrix is not alternating")]
    NotAlternating,
}

/// All k-element subsets of {0,…,n−1} in lexicographic order.
fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::with_capacity(k), &mut out);
    out
}

pub(crate) fn find_certificate(mat: &PolyMat) -> Option<(Vec<usize>, PolyMat)> {
    let cols: Vec<usize> = (0..mat.cols()).collect();
    for rows in combinations(mat.rows(), mat.cols()) {
        let minor = mat.submatrix(&rows, &cols);
        if minor.unit_det().is_some() {
            let inv = minor.inv_unit().expect("unit determinant");
            return Some((rows, inv));
        }
    }
    None
}

/// An ordered list of pairwise-isotropic sections whose pointwise
/// independence over the whole chart is certified by a square minor of the
/// coefficient matrix with nonzero constant determinant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoFrame {
    backend: Backend,
    sections: Vec<Section>,
    certificate: Vec<usize>,
    minor_inv: PolyMat,
}

impl IsoFrame {
    pub fn new(backend: &Backend, sections: Vec<Section>) -> Result<IsoFrame, EigenError> {
        for (a, u) in sections.iter().enumerate() {
            for (b, v) in sections.iter().enumerate().skip(a) {
                let p = backend.pairing(u, v).map_err(|_| EigenError::BackendMismatch)?;
                if !p.is_zero() {
                    return Err(EigenError::NotIsotropic { a, b });
                }
            }
        }
        let mat = coefficient_matrix(backend, &sections);
        let (certificate, minor_inv) = find_certificate(&mat).ok_or(EigenError::NoUnitMinor)?;
        Ok(IsoFrame { backend: backend.clone(), sections, certificate, minor_inv })
    }

    pub fn backend(&self) -> &Backend {
        &self.backend
    }

    pub fn len(&self) -> usize {
        self.sections.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sections.is_empty()
    }

    pub fn sections(&self) -> &[Section] {
        &self.sections
    }

    pub fn section(&self, a: usize) -> &Section {
        &self.sections[a]
    }

    pub fn certificate(&self) -> &[usize] {
        &self.certificate
    }

    /// The linear combination Σ_a c_a X_a.
    pub fn combine(&self, coeffs: &[Scalar]) -> Section {
        assert_eq!(coeffs.len(), self.len());
        let mut out = self.backend.zero_section();
        for (c, s) in coeffs.iter().zip(&self.sections) {
            out = out.add(&s.scale(c));
        }
        out
    }

    /// Coefficients of `s` in the frame, solved through the certified minor;
    /// fails with `NotInSpan` when the residual is nonzero.
    pub fn express(&self, s: &Section) -> Result<Vec<Scalar>, EigenError> {
        if s.rank() != self.backend.rank() {
            return Err(EigenError::BackendMismatch);
        }
        let restricted: Vec<Scalar> = self.certificate.iter().map(|&r| s.coeffs()[r].clone()).collect();
        let coeffs = self.minor_inv.apply(&restricted);
        if self.combine(&coeffs) != *s {
            return Err(EigenError::NotInSpan);
        }
        Ok(coeffs)
    }

    /// Structure coefficients `[X_a, X_b] = Σ_c c^c_{ab} X_c` of the
    /// restricted Dorfman bracket; `NotInvolutive` when a bracket escapes
    /// the span.
    pub fn structure_coeffs(&self) -> Result<Vec<Vec<Vec<Scalar>>>, EigenError> {
        let m = self.len();
        let mut out = Vec::with_capacity(m);
        for a in 0..m {
            let mut row = Vec::with_capacity(m);
            for b in 0..m {
                let br = self.backend.dorfman(&self.sections[a], &self.sections[b]).expect("same backend");
                row.push(self.express(&br).map_err(|_| EigenError::NotInvolutive { a, b })?);
            }
            out.push(row);
        }
        Ok(out)
    }

    pub fn involutivity_witness(&self) -> Option<(usize, usize, Section)> {
        for a in 0..self.len() {
            for b in 0..self.len() {
                let br = self.backend.dorfman(&self.sections[a], &self.sections[b]).expect("same backend");
                if self.express(&br).is_err() {
                    return Some((a, b, br));
                }
            }
        }
        None
    }

    pub fn conj(&self) -> IsoFrame {
        IsoFrame {
            backend: self.backend.clone(),
            sections: self.sections.iter().map(Section::conj).collect(),
            certificate: self.certificate.clone(),
            minor_inv: self.minor_inv.conj(),
        }
    }
}

fn coefficient_matrix(backend: &Backend, sections: &[Section]) -> PolyMat {
    PolyMat::from_fn(backend.vars(), backend.rank(), sections.len(), |r, c| sections[c].coeffs()[r].clone())
}

/// Greedily selects `want` candidates that stay certified at every step.
fn greedy_unit_frame(backend: &Backend, candidates: &[Section], want: usize) -> Result<Vec<Section>, EigenError> {
    let mut chosen: Vec<Section> = Vec::new();
    for cand in candidates {
        if chosen.len() == want {
            break;
        }
        let mut tentative = chosen.clone();
        tentative.push(cand.clone());
        if find_certificate(&coefficient_matrix(backend, &tentative)).is_some() {
            chosen = tentative;
        }
    }
    if chosen.len() == want {
        Ok(chosen)
    } else {
        Err(EigenError::NoUnitMinor)
    }
}

/// The eigenbundle pair of a complex structure: a certified frame for the
/// +i eigenbundle, its entrywise conjugate for the −i eigenbundle, and the
/// constant change matrices realising the duality ⟨X_a, ξ_b⟩ = ½δ_ab under
/// the normalized pairing (·|·) = 2⟨·,·⟩.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualPair {
    frame_l: IsoFrame,
    frame_lstar: IsoFrame,
    /// gram[a][b] = 2⟨X_a, ξ_b⟩, invertible with unit determinant.
    gram: PolyMat,
    gram_inv: PolyMat,
    /// ξ'_b = Σ_c ξ_c (gram⁻¹)_{cb}, so that 2⟨X_a, ξ'_b⟩ = δ_ab.
    dual_sections: Vec<Section>,
    /// Inverse of the full [frame_l | frame_lstar] coefficient matrix, used
    /// to split arbitrary sections into L and L* parts.
    split_inv: PolyMat,
}

impl DualPair {
    pub fn new(frame_l: IsoFrame) -> Result<DualPair, EigenError> {
        let backend = frame_l.backend.clone();
        let frame_lstar = frame_l.conj();
        let m = frame_l.len();
        let two = Scalar::from_int(backend.vars(), 2);
        let gram = PolyMat::from_fn(backend.vars(), m, m, |a, b| {
            backend
                .pairing(&frame_l.sections[a], &frame_lstar.sections[b])
                .expect("same backend")
                .mul(&two)
        });
        let gram_inv = gram.inv_unit().map_err(|_| EigenError::DualityDegenerate)?;
        let dual_sections: Vec<Section> = (0..m)
            .map(|b| {
                let coeffs: Vec<Scalar> = (0..m).map(|c| gram_inv[(c, b)].clone()).collect();
                frame_lstar.combine(&coeffs)
            })
            .collect();
        // duality relation, verified identically
        let half = Scalar::from_ratio(backend.vars(), 1, 2);
        for a in 0..m {
            for (b, xi) in dual_sections.iter().enumerate() {
                let p = backend.pairing(&frame_l.sections[a], xi).expect("same backend");
                let want = if a == b { half.clone() } else { Scalar::zero(backend.vars()) };
                assert_eq!(p, want, "duality normalization failed at ({a},{b})");
            }
        }
        let all: Vec<Section> =
            frame_l.sections.iter().chain(frame_lstar.sections.iter()).cloned().collect();
        let split_inv = coefficient_matrix(&backend, &all)
            .inv_unit()
            .map_err(|_| EigenError::NoUnitMinor)?;
        Ok(DualPair { frame_l, frame_lstar, gram, gram_inv, dual_sections, split_inv })
    }

    pub fn backend(&self) -> &Backend {
        self.frame_l.backend()
    }

    pub fn frame_l(&self) -> &IsoFrame {
        &self.frame_l
    }

    pub fn frame_lstar(&self) -> &IsoFrame {
        &self.frame_lstar
    }

    pub fn gram(&self) -> &PolyMat {
        &self.gram
    }

    /// The dual basis section ξ'_b of L* with 2⟨X_a, ξ'_b⟩ = δ_ab.
    pub fn dual_section(&self, b: usize) -> &Section {
        &self.dual_sections[b]
    }

    /// Coefficients of `s` over the concatenated (frame_l, frame_lstar)
    /// basis of the complexified algebroid.
    pub fn split(&self, s: &Section) -> (Vec<Scalar>, Vec<Scalar>) {
        assert_eq!(s.rank(), self.backend().rank());
        let all = self.split_inv.apply(s.coeffs());
        let m = self.frame_l.len();
        (all[..m].to_vec(), all[m..].to_vec())
    }

    /// L*-part of a section, as coefficients over frame_lstar.
    pub fn project_lstar(&self, s: &Section) -> Vec<Scalar> {
        self.split(s).1
    }

    /// Converts multivector coefficients over frame_l into evaluation
    /// values on the frame_lstar sections, using the normalized pairing.
    pub fn coeffs_to_values(&self, p: &FrameForm) -> FrameForm {
        assert_eq!(p.frame, self.frame_l);
        // (ξ_b | X_a) = gram[a][b]ᵀ... value_B = Σ_A det[(ξ_{B_i}|X_{A_j})]·P^A
        let m = self.gram.transpose();
        FrameForm { frame: self.frame_lstar.clone(), alt: p.alt.apply_exterior(&m) }
    }

    /// Inverse of `coeffs_to_values`.
    pub fn values_to_coeffs(&self, v: &FrameForm) -> FrameForm {
        assert_eq!(v.frame, self.frame_lstar);
        let m = self.gram_inv.transpose();
        FrameForm { frame: self.frame_l.clone(), alt: v.alt.apply_exterior(&m) }
    }
}

/// Alternating Scalar values on k-subsets of the indices of a frame.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrameForm {
    frame: IsoFrame,
    alt: AltTensor,
}

impl FrameForm {
    pub fn zero(frame: &IsoFrame, degree: usize) -> FrameForm {
        FrameForm { frame: frame.clone(), alt: AltTensor::zero(frame.backend.vars(), frame.len(), degree) }
    }

    pub fn term(frame: &IsoFrame, idx: &[usize], c: Scalar) -> FrameForm {
        let mut f = FrameForm::zero(frame, idx.len());
        f.alt.insert_signed(idx, c);
        f
    }

    pub fn from_alt(frame: &IsoFrame, alt: AltTensor) -> FrameForm {
        assert_eq!(alt.universe(), frame.len());
        FrameForm { frame: frame.clone(), alt }
    }

    pub fn frame(&self) -> &IsoFrame {
        &self.frame
    }

    pub fn degree(&self) -> usize {
        self.alt.degree()
    }

    pub fn alt(&self) -> &AltTensor {
        &self.alt
    }

    pub fn get(&self, idx: &[usize]) -> Scalar {
        self.alt.get(idx)
    }

    pub fn is_zero(&self) -> bool {
        self.alt.is_zero()
    }

    pub fn add(&self, rhs: &FrameForm) -> FrameForm {
        assert_eq!(self.frame, rhs.frame);
        FrameForm { frame: self.frame.clone(), alt: self.alt.add(&rhs.alt) }
    }

    pub fn sub(&self, rhs: &FrameForm) -> FrameForm {
        assert_eq!(self.frame, rhs.frame);
        FrameForm { frame: self.frame.clone(), alt: self.alt.sub(&rhs.alt) }
    }

    pub fn neg(&self) -> FrameForm {
        FrameForm { frame: self.frame.clone(), alt: self.alt.neg() }
    }

    pub fn scale(&self, c: &Scalar) -> FrameForm {
        FrameForm { frame: self.frame.clone(), alt: self.alt.scale(c) }
    }

    pub fn scale_rat(&self, c: &GaussRat) -> FrameForm {
        FrameForm { frame: self.frame.clone(), alt: self.alt.scale_rat(c) }
    }

    /// Entrywise conjugate, living over the conjugate frame.
    pub fn conj(&self) -> FrameForm {
        FrameForm { frame: self.frame.conj(), alt: self.alt.conj() }
    }
}

/// Builds the eigenbundle pair of a complex structure `J`: applies the
/// projection (1 − iJ)/2 to the standard frame and greedily selects a
/// certified frame for the +i eigenbundle, or verifies a caller-supplied
/// seed frame.
pub fn eigenframe(j: &Endo, seed: Option<IsoFrame>) -> Result<DualPair, EigenError> {
    if !j.squares_to_minus_one() || !j.is_orthogonal() {
        return Err(EigenError::NotComplexStructure);
    }
    let backend = j.backend().clone();
    let rank = backend.rank();
    if rank % 2 != 0 {
        return Err(EigenError::NoUnitMinor);
    }
    let m = rank / 2;
    let frame_l = match seed {
        Some(f) => {
            if f.backend != backend || f.len() != m {
                return Err(EigenError::BackendMismatch);
            }
            for (a, s) in f.sections.iter().enumerate() {
                if j.apply(s) != s.scale_rat(&GaussRat::i()) {
                    return Err(EigenError::NotEigenSection(a));
                }
            }
            f
        }
        None => {
            let id = PolyMat::identity(backend.vars(), rank);
            let proj = id
                .sub(&j.matrix().scale_rat(&GaussRat::i()))
                .scale_rat(&GaussRat::from_ratio(1, 2));
            let candidates: Vec<Section> = (0..rank)
                .map(|c| Section::from_coeffs((0..rank).map(|r| proj[(r, c)].clone()).collect()))
                .collect();
            let chosen = greedy_unit_frame(&backend, &candidates, m)?;
            IsoFrame::new(&backend, chosen)?
        }
    };
    DualPair::new(frame_l)
}

/// Lie-algebroid differential (Koszul formula) on forms indexed by an
/// involutive certified frame:
/// (dω)(X_{a₀},…,X_{a_k}) = Σ_i (−1)^i ρ(X_{a_i}) ω(…â_i…)
///                        + Σ_{i<j} (−1)^{i+j} ω([X_{a_i},X_{a_j}], …â_iâ_j…).
pub fn algebroid_d(frame: &IsoFrame, w: &FrameForm) -> Result<FrameForm, EigenError> {
    if w.frame != *frame {
        return Err(EigenError::BackendMismatch);
    }
    let structure = frame.structure_coeffs()?;
    let backend = &frame.backend;
    let m = frame.len();
    let k = w.degree();
    let mut out = AltTensor::zero(backend.vars(), m, k + 1);
    for tuple in combinations(m, k + 1) {
        let mut val = Scalar::zero(backend.vars());
        for i in 0..=k {
            let rest: Vec<usize> = tuple.iter().enumerate().filter(|(t, _)| *t != i).map(|(_, &v)| v).collect();
            let mut term = backend.anchor_apply(&frame.sections[tuple[i]], &w.get(&rest));
            if i % 2 == 1 {
                term = term.neg();
            }
            val = val.add(&term);
        }
        for i in 0..=k {
            for jj in (i + 1)..=k {
                let rest: Vec<usize> = tuple
                    .iter()
                    .enumerate()
                    .filter(|(t, _)| *t != i && *t != jj)
                    .map(|(_, &v)| v)
                    .collect();
                let coeffs = &structure[tuple[i]][tuple[jj]];
                let mut term = Scalar::zero(backend.vars());
                for (c, cc) in coeffs.iter().enumerate() {
                    if cc.is_zero() {
                        continue;
                    }
                    let mut idx = Vec::with_capacity(k);
                    idx.push(c);
                    idx.extend_from_slice(&rest);
                    term = term.add(&cc.mul(&w.get(&idx)));
                }
                if (i + jj) % 2 == 1 {
                    term = term.neg();
                }
                val = val.add(&term);
            }
        }
        out.insert_signed(&tuple, val);
    }
    Ok(FrameForm { frame: frame.clone(), alt: out })
}

/// Interior product with a section of the frame's span (contraction of the
/// first slot).
pub fn algebroid_interior(frame: &IsoFrame, xi: &Section, w: &FrameForm) -> Result<FrameForm, EigenError> {
    if w.frame != *frame {
        return Err(EigenError::BackendMismatch);
    }
    if w.degree() == 0 {
        return Ok(FrameForm::zero(frame, 0));
    }
    let coeffs = frame.express(xi)?;
    Ok(FrameForm { frame: frame.clone(), alt: w.alt.contract_first(&coeffs) })
}

/// Lie derivative on frame forms via the Cartan formula L_ξ = ι_ξ∘d + d∘ι_ξ.
pub fn algebroid_lie(frame: &IsoFrame, xi: &Section, w: &FrameForm) -> Result<FrameForm, EigenError> {
    let a = algebroid_interior(frame, xi, &algebroid_d(frame, w)?)?;
    let b = algebroid_d(frame, &algebroid_interior(frame, xi, w)?)?;
    Ok(a.add(&b))
}

/// Schouten bracket on multivectors over the +i eigenbundle, given as
/// coefficient arrays over frame_l. The (2,2) case evaluates the sharp-map
/// identity for ½[Ω,Ω] on dual-frame pairs (polarized for distinct
/// arguments) and converts back by duality; all other bidegrees use the
/// graded Leibniz extension of the frame bracket.
pub fn schouten_l(pair: &DualPair, p: &FrameForm, q: &FrameForm) -> Result<FrameForm, EigenError> {
    if p.frame != pair.frame_l || q.frame != pair.frame_l {
        return Err(EigenError::BackendMismatch);
    }
    if p.degree() == 2 && q.degree() == 2 {
        if p == q {
            return Ok(half_square_bracket(pair, p)?.scale_rat(&GaussRat::from_int(2)));
        }
        // polarization: [P,Q] = ½([P+Q,P+Q] − [P,P] − [Q,Q])
        let s = p.add(q);
        let r = half_square_bracket(pair, &s)?
            .sub(&half_square_bracket(pair, p)?)
            .sub(&half_square_bracket(pair, q)?);
        return Ok(r);
    }
    schouten_leibniz(&pair.frame_l, p, q)
}

/// Graded Leibniz expansion of the Schouten bracket over an involutive
/// frame, mirroring the decomposable-term formula with the frame bracket
/// and the anchor in place of coordinate fields, then normalized by
/// (−1)^((p−1)(q−1)) so that the closedness and sharp-map identities hold
/// in the form used throughout the holomorphic-symplectic theory.
pub fn schouten_leibniz(frame: &IsoFrame, p: &FrameForm, q: &FrameForm) -> Result<FrameForm, EigenError> {
    let r = schouten_raw(frame, p, q)?;
    let flip = (p.degree() + 1) * (q.degree() + 1) % 2 == 1;
    Ok(if flip { r.neg() } else { r })
}

fn schouten_raw(frame: &IsoFrame, p: &FrameForm, q: &FrameForm) -> Result<FrameForm, EigenError> {
    if p.frame != *frame || q.frame != *frame {
        return Err(EigenError::BackendMismatch);
    }
    let structure = frame.structure_coeffs()?;
    let backend = &frame.backend;
    let rho = |a: usize, f: &Scalar| backend.anchor_apply(&frame.sections[a], f);
    let (dp, dq) = (p.degree(), q.degree());
    let m = frame.len();
    if dp == 0 && dq == 0 {
        return Ok(FrameForm::zero(frame, 0));
    }
    if dp == 0 {
        let r = schouten_raw(frame, q, p)?;
        return Ok(if dq % 2 == 0 { r } else { r.neg() });
    }
    let mut out = AltTensor::zero(backend.vars(), m, dp + dq - 1);
    for (s, f) in p.alt.components() {
        if dq == 0 {
            let g = q.get(&[]);
            for (i, &si) in s.iter().enumerate() {
                let coeff = f.mul(&rho(si, &g));
                let coeff = if i % 2 == 0 { coeff } else { coeff.neg() };
                let rest: Vec<usize> = s.iter().enumerate().filter(|(t, _)| *t != i).map(|(_, &v)| v).collect();
                out.insert_signed(&rest, coeff);
            }
            continue;
        }
        for (t, g) in q.alt.components() {
            for i in 0..dp {
                for j in 0..dq {
                    // derivative terms appear only when the coefficient is
                    // attached to the factor being bracketed
                    let mut bracket: Vec<(usize, Scalar)> = Vec::new();
                    if i == 0 && j == 0 {
                        bracket.push((t[0], f.mul(&rho(s[0], g))));
                        bracket.push((s[0], g.mul(&rho(t[0], f)).neg()));
                    } else if i == 0 {
                        bracket.push((s[0], rho(t[j], f).mul(g).neg()));
                    } else if j == 0 {
                        bracket.push((t[0], rho(s[i], g).mul(f)));
                    }
                    // structure-coefficient term [X_{s_i}, X_{t_j}], always
                    let fg = f.mul(g);
                    for (c, cc) in structure[s[i]][t[j]].iter().enumerate() {
                        if !cc.is_zero() {
                            bracket.push((c, fg.mul(cc)));
                        }
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
    Ok(FrameForm { frame: frame.clone(), alt: out })
}

/// The sharp map of a coefficient bivector over frame_l applied to an
/// L*-coefficient vector over the normalized dual basis:
/// Ω♯ξ'_c = Σ_b Ω^{cb} X_b.
pub(crate) fn sharp_apply(pair: &DualPair, omega: &FrameForm, dual_coeffs: &[Scalar]) -> Section {
    let m = pair.frame_l.len();
    let mut out = pair.backend().zero_section();
    for (c, u) in dual_coeffs.iter().enumerate() {
        if u.is_zero() {
            continue;
        }
        for b in 0..m {
            let w = omega.get(&[c, b]);
            if !w.is_zero() {
                out = out.add(&pair.frame_l.sections[b].scale(&w.mul(u)));
            }
        }
    }
    out
}

/// Coefficients over the normalized dual basis of the L*-part of a section:
/// s = Σ u_c ξ'_c (+ L-part); u_c = (s | X_c) on the L*-part.
pub(crate) fn dual_coeffs_of(pair: &DualPair, s: &Section) -> Vec<Scalar> {
    // frame_lstar coefficients v relate to dual-basis coefficients u by
    // ξ'_b = Σ_c ξ_c (g⁻¹)_{cb}, so v = g⁻¹u and u = g v; equivalently
    // u_b = 2⟨X_b, s⟩ on the L*-part.
    let v = pair.project_lstar(s);
    let m = pair.frame_l.len();
    (0..m)
        .map(|b| {
            let mut acc = Scalar::zero(pair.backend().vars());
            for (c, vc) in v.iter().enumerate() {
                acc = acc.add(&pair.gram[(b, c)].mul(vc));
            }
            acc
        })
        .collect()
}

/// ½[Ω,Ω] for a coefficient bivector Ω over frame_l, via the sharp-map
/// identity evaluated on normalized dual-frame pairs:
/// (½[Ω,Ω])♯(ξ,η) = Ω♯(L_{Ω♯ξ}η − L_{Ω♯η}ξ + d_L (ξ|Ω♯η)) − [Ω♯ξ, Ω♯η].
fn half_square_bracket(pair: &DualPair, omega: &FrameForm) -> Result<FrameForm, EigenError> {
    let backend = pair.backend().clone();
    let frame_l = &pair.frame_l;
    let m = frame_l.len();
    let mut table: Vec<Vec<Vec<Scalar>>> = vec![vec![Vec::new(); m]; m];
    for c in 0..m {
        for d in 0..m {
            if c == d {
                table[c][d] = vec![Scalar::zero(backend.vars()); m];
                continue;
            }
            let xi = pair.dual_sections[c].clone();
            let eta = pair.dual_sections[d].clone();
            let x = sharp_apply(pair, omega, &unit_vec(&backend, m, c));
            let y = sharp_apply(pair, omega, &unit_vec(&backend, m, d));
            // L_X η and L_Y ξ: L*-parts of the Dorfman brackets, as
            // normalized dual-basis coefficients
            let lx_eta = dual_coeffs_of(pair, &backend.dorfman(&x, &eta).expect("same backend"));
            let ly_xi = dual_coeffs_of(pair, &backend.dorfman(&y, &xi).expect("same backend"));
            // g = (ξ | Ω♯η) = Ω^{dc}; d_L g = Σ_a ρ(X_a)g · ξ'_a
            let g = omega.get(&[d, c]);
            let dg: Vec<Scalar> = (0..m).map(|a| backend.anchor_apply(&frame_l.sections[a], &g)).collect();
            let arg: Vec<Scalar> = (0..m)
                .map(|a| lx_eta[a].sub(&ly_xi[a]).add(&dg[a]))
                .collect();
            let lead = sharp_apply(pair, omega, &arg);
            let tail = backend.dorfman(&x, &y).expect("same backend");
            let result = lead.sub(&tail);
            table[c][d] = frame_l.express(&result).map_err(|_| EigenError::NotInSpan)?;
        }
    }
    let mut out = AltTensor::zero(backend.vars(), m, 3);
    for c in 0..m {
        for d in (c + 1)..m {
            for e in (d + 1)..m {
                out.insert_signed(&[c, d, e], table[c][d][e].clone());
            }
        }
    }
    // full antisymmetry of the assembled trivector, cross-checked against
    // every evaluated pair
    for c in 0..m {
        for d in 0..m {
            for e in 0..m {
                if table[c][d].is_empty() {
                    continue;
                }
                assert_eq!(
                    table[c][d][e],
                    out.get(&[c, d, e]),
                    "sharp-map bracket is not antisymmetric at ({c},{d},{e})"
                );
            }
        }
    }
    Ok(FrameForm { frame: frame_l.clone(), alt: out })
}

fn unit_vec(backend: &Backend, m: usize, c: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(backend.vars()); m];
    v[c] = Scalar::one(backend.vars());
    v
}

/// Extracts the coefficient bivector over frame_l of a sharp endomorphism
/// that annihilates L and maps the normalized dual basis into L:
/// Ω♯ξ'_c = Σ_b Ω^{cb} X_b; fails unless the extracted matrix is
/// antisymmetric.
pub fn sharp_to_coeffs(pair: &DualPair, sharp: &Endo) -> Result<FrameForm, EigenError> {
    let m = pair.frame_l().len();
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(m);
    for c in 0..m {
        rows.push(pair.frame_l().express(&sharp.apply(pair.dual_section(c)))?);
    }
    let mut alt = AltTensor::zero(pair.backend().vars(), m, 2);
    for (c, row) in rows.iter().enumerate() {
        for b in (c + 1)..m {
            alt.insert_signed(&[c, b], row[b].clone());
        }
    }
    for (c, row) in rows.iter().enumerate() {
        for b in 0..m {
            if alt.get(&[c, b]) != row[b] {
                return Err(EigenError::NotAlternating);
            }
        }
    }
    Ok(FrameForm::from_alt(pair.frame_l(), alt))
}

/// The Dirac-to-Lagrangian map (1 + iJ)/2 applied to each section.
pub fn dirac_to_lagrangian(j: &Endo, dirac: &[Section]) -> Vec<Section> {
    let backend = j.backend();
    let rank = backend.rank();
    let id = PolyMat::identity(backend.vars(), rank);
    let proj = id.add(&j.matrix().scale_rat(&GaussRat::i())).scale_rat(&GaussRat::from_ratio(1, 2));
    dirac
        .iter()
        .map(|s| Section::from_coeffs(proj.apply(s.coeffs())))
        .collect()
}

/// Checks that `frame` spans an Ω-isotropic, involutive, maximal
/// subalgebroid of the −i eigenbundle; Ω is a coefficient bivector over
/// `ambient.frame_l()`.
pub fn subalgebroid_check(frame: &IsoFrame, ambient: &DualPair, omega: &FrameForm) -> Result<Report, EigenError> {
    if omega.frame() != ambient.frame_l() || omega.degree() != 2 {
        return Err(EigenError::DegreeMismatch);
    }
    // every section must lie in the span of frame_lstar
    let mut duals: Vec<Vec<Scalar>> = Vec::with_capacity(frame.len());
    for s in frame.sections() {
        ambient.frame_lstar().express(s)?;
        duals.push(dual_coeffs_of(ambient, s));
    }
    let mut report = Report::new();
    match frame.involutivity_witness() {
        None => report.pass("involutive"),
        Some((a, b, _)) => report.fail("involutive", json!({ "a": a, "b": b })),
    }
    // Ω(u,v) = Σ_{cd} Ω^{cd} u_c v_d over normalized dual coefficients
    let mut iso_witness = None;
    'outer: for (a, u) in duals.iter().enumerate() {
        for (b, v) in duals.iter().enumerate().skip(a + 1) {
            let mut val = Scalar::zero(frame.backend().vars());
            for (c, uc) in u.iter().enumerate() {
                for (d, vd) in v.iter().enumerate() {
                    if !uc.is_zero() && !vd.is_zero() {
                        val = val.add(&omega.get(&[c, d]).mul(uc).mul(vd));
                    }
                }
            }
            if !val.is_zero() {
                iso_witness = Some((a, b, val));
                break 'outer;
            }
        }
    }
    match iso_witness {
        None => report.pass("omega_isotropic"),
        Some((a, b, v)) => report.fail("omega_isotropic", json!({ "a": a, "b": b, "value": v.to_string() })),
    }
    report.check("maximal", 2 * frame.len() == ambient.frame_lstar().len(), || {
        json!({ "rank": frame.len(), "ambient": ambient.frame_lstar().len() })
    });
    Ok(report)
}

//! Courant algebroids with two exact backends: the standard (optionally
//! twisted) double `TM ⊕ T*M` over a polynomial chart, and
//! constant-structure algebroids over a point. Includes a verifier for all
//! six defining axioms.

use crate::chartcalc::{ext_d, interior, lie_bracket, lie_derivative, Chart, DiffForm, MultiVec};
use crate::report::Report;
use crate::scalars::{GaussRat, Scalar, Vars};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CourantError {
    #[error("sections belong to different backends")]
    BackendMismatch,
    #[error("twist 3-form is not closed")]
    TwistNotClosed,
    #[error("pairing matrix is not symmetric")]
    PairingNotSymmetric,
    #[error("pairing matrix is not invertible")]
    PairingNotInvertible,
    #[error("structure constants are not ad-invariant for the pairing")]
    NotAdInvariant,
    #[error("operation requires a chart backend")]
    UnsupportedOnPoint,
}

/// A section of the algebroid, stored as a coefficient vector in the
/// standard frame: on a chart backend the first n entries are the vector
/// part (∂_a) and the last n the form part (dx_a); on a point backend all
/// `dim` entries index the chosen basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    coeffs: Vec<Scalar>,
}

impl Section {
    pub fn from_coeffs(coeffs: Vec<Scalar>) -> Section {
        Section { coeffs }
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn rank(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, rhs: &Section) -> Section {
        assert_eq!(self.rank(), rhs.rank());
        Section { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn sub(&self, rhs: &Section) -> Section {
        assert_eq!(self.rank(), rhs.rank());
        Section { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.sub(b)).collect() }
    }

    pub fn neg(&self) -> Section {
        Section { coeffs: self.coeffs.iter().map(|a| a.neg()).collect() }
    }

    pub fn scale(&self, f: &Scalar) -> Section {
        Section { coeffs: self.coeffs.iter().map(|a| a.mul(f)).collect() }
    }

    pub fn scale_rat(&self, c: &GaussRat) -> Section {
        Section { coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn conj(&self) -> Section {
        Section { coeffs: self.coeffs.iter().map(|a| a.conj()).collect() }
    }
}

/// The standard Courant algebroid TM ⊕ T*M over a chart, optionally twisted
/// by a closed 3-form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChartBackend {
    chart: Chart,
    twist: Option<DiffForm>,
}

/// A Courant algebroid over a point: zero anchor, constant structure
/// constants `c[a][b]` (the bracket of basis elements, as coefficient
/// vectors) and a constant symmetric invertible pairing.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointBackend {
    dim: usize,
    vars: Vars,
    bracket: Vec<Vec<Vec<GaussRat>>>,
    pairing: Vec<Vec<GaussRat>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Backend {
    Chart(ChartBackend),
    Point(PointBackend),
}

impl Backend {
    pub fn standard(chart: &Chart) -> Backend {
        Backend::Chart(ChartBackend { chart: chart.clone(), twist: None })
    }

    pub fn twisted(chart: &Chart, phi: DiffForm) -> Result<Backend, CourantError> {
        assert_eq!(phi.chart(), chart);
        assert_eq!(phi.degree(), 3);
        if !ext_d(&phi).is_zero() {
            return Err(CourantError::TwistNotClosed);
        }
        Ok(Backend::Chart(ChartBackend { chart: chart.clone(), twist: Some(phi) }))
    }

    /// Constant-structure algebroid over a point. `bracket[a][b]` is the
    /// coefficient vector of e_a ∘ e_b; `pairing` must be symmetric,
    /// invertible, and ad-invariant: ⟨x∘y,z⟩ + ⟨y,x∘z⟩ = 0.
    pub fn point(
        bracket: Vec<Vec<Vec<GaussRat>>>,
        pairing: Vec<Vec<GaussRat>>,
    ) -> Result<Backend, CourantError> {
        let dim = pairing.len();
        assert!(pairing.iter().all(|r| r.len() == dim));
        assert_eq!(bracket.len(), dim);
        assert!(bracket.iter().all(|r| r.len() == dim && r.iter().all(|v| v.len() == dim)));
        for a in 0..dim {
            for b in 0..dim {
                if pairing[a][b] != pairing[b][a] {
                    return Err(CourantError::PairingNotSymmetric);
                }
            }
        }
        // invertibility of a constant matrix via the polynomial determinant
        let vars = crate::scalars::vars(&["t"]);
        let g = crate::matrix::PolyMat::from_fn(vars.clone(), dim, dim, |i, j| {
            Scalar::constant(vars.clone(), pairing[i][j].clone())
        });
        if g.det().is_zero() {
            return Err(CourantError::PairingNotInvertible);
        }
        let pair = |u: &[GaussRat], v: &[GaussRat]| -> GaussRat {
            let mut acc = GaussRat::zero();
            for i in 0..dim {
                for j in 0..dim {
                    acc = &acc + &(&(&u[i] * &v[j]) * &pairing[i][j]);
                }
            }
            acc
        };
        let basis = |a: usize| -> Vec<GaussRat> {
            (0..dim).map(|i| if i == a { GaussRat::one() } else { GaussRat::zero() }).collect()
        };
        for a in 0..dim {
            for b in 0..dim {
                for c in 0..dim {
                    let lhs = pair(&bracket[a][b], &basis(c));
                    let rhs = pair(&basis(b), &bracket[a][c]);
                    if !(&lhs + &rhs).is_zero() {
                        return Err(CourantError::NotAdInvariant);
                    }
                }
            }
        }
        Ok(Backend::Point(PointBackend { dim, vars, bracket, pairing }))
    }

    pub fn chart(&self) -> Option<&Chart> {
        match self {
            Backend::Chart(b) => Some(&b.chart),
            Backend::Point(_) => None,
        }
    }

    pub fn twist(&self) -> Option<&DiffForm> {
        match self {
            Backend::Chart(b) => b.twist.as_ref(),
            Backend::Point(_) => None,
        }
    }

    /// Fibre rank of the algebroid (2n on a chart backend).
    pub fn rank(&self) -> usize {
        match self {
            Backend::Chart(b) => 2 * b.chart.dim(),
            Backend::Point(b) => b.dim,
        }
    }

    pub fn vars(&self) -> Vars {
        match self {
            Backend::Chart(b) => b.chart.vars(),
            Backend::Point(b) => b.vars.clone(),
        }
    }

    pub fn zero_scalar(&self) -> Scalar {
        Scalar::zero(self.vars())
    }

    pub fn zero_section(&self) -> Section {
        Section { coeffs: vec![self.zero_scalar(); self.rank()] }
    }

    /// The a-th standard frame section (∂_a for a < n, dx_{a-n} otherwise
    /// on a chart backend).
    pub fn frame_section(&self, a: usize) -> Section {
        assert!(a < self.rank());
        let mut s = self.zero_section();
        s.coeffs[a] = Scalar::one(self.vars());
        s
    }

    pub fn section_from_parts(&self, vec: &MultiVec, form: &DiffForm) -> Section {
        let ch = self.chart().expect("chart backend required");
        assert_eq!(vec.chart(), ch);
        assert_eq!(form.chart(), ch);
        assert_eq!((vec.degree(), form.degree()), (1, 1));
        let mut coeffs = vec.coeffs();
        coeffs.extend(form.coeffs());
        Section { coeffs }
    }

    pub fn vector_part(&self, u: &Section) -> MultiVec {
        let ch = self.chart().expect("chart backend required");
        MultiVec::from_coeffs(ch, &u.coeffs[..ch.dim()])
    }

    pub fn form_part(&self, u: &Section) -> DiffForm {
        let ch = self.chart().expect("chart backend required");
        DiffForm::from_coeffs(ch, &u.coeffs[ch.dim()..])
    }

    fn check_section(&self, u: &Section) -> Result<(), CourantError> {
        if u.rank() != self.rank() {
            return Err(CourantError::BackendMismatch);
        }
        Ok(())
    }

    /// Dorfman bracket `(X+ξ) ∘ (Y+η) = [X,Y] + L_X η − ι_Y dξ (+ ι_X ι_Y φ)`.
    pub fn dorfman(&self, u: &Section, v: &Section) -> Result<Section, CourantError> {
        self.check_section(u)?;
        self.check_section(v)?;
        match self {
            Backend::Chart(b) => {
                let x = self.vector_part(u);
                let xi = self.form_part(u);
                let y = self.vector_part(v);
                let eta = self.form_part(v);
                let vec = lie_bracket(&x, &y);
                let mut form = lie_derivative(&x, &eta).sub(&interior(&y, &ext_d(&xi)));
                if let Some(phi) = &b.twist {
                    form = form.add(&interior(&x, &interior(&y, phi).neg()).neg());
                }
                Ok(self.section_from_parts(&vec, &form))
            }
            Backend::Point(b) => {
                let mut out = self.zero_section();
                for a in 0..b.dim {
                    if u.coeffs[a].is_zero() {
                        continue;
                    }
                    for c in 0..b.dim {
                        if v.coeffs[c].is_zero() {
                            continue;
                        }
                        let f = u.coeffs[a].mul(&v.coeffs[c]);
                        for (e, k) in b.bracket[a][c].iter().enumerate() {
                            if !k.is_zero() {
                                out.coeffs[e] = out.coeffs[e].add(&f.scale(k));
                            }
                        }
                    }
                }
                Ok(out)
            }
        }
    }

    /// Symmetric pairing `⟨X+ξ, Y+η⟩ = ½(ξ(Y) + η(X))`.
    pub fn pairing(&self, u: &Section, v: &Section) -> Result<Scalar, CourantError> {
        self.check_section(u)?;
        self.check_section(v)?;
        match self {
            Backend::Chart(b) => {
                let n = b.chart.dim();
                let mut acc = self.zero_scalar();
                for a in 0..n {
                    acc = acc.add(&u.coeffs[n + a].mul(&v.coeffs[a]));
                    acc = acc.add(&v.coeffs[n + a].mul(&u.coeffs[a]));
                }
                Ok(acc.scale(&GaussRat::from_ratio(1, 2)))
            }
            Backend::Point(b) => {
                let mut acc = self.zero_scalar();
                for i in 0..b.dim {
                    for j in 0..b.dim {
                        if b.pairing[i][j].is_zero() {
                            continue;
                        }
                        acc = acc.add(&u.coeffs[i].mul(&v.coeffs[j]).scale(&b.pairing[i][j]));
                    }
                }
                Ok(acc)
            }
        }
    }

    /// Gram matrix of the pairing in the standard frame: `⟨e_a, e_b⟩`.
    pub fn pairing_matrix(&self) -> crate::matrix::PolyMat {
        match self {
            Backend::Chart(b) => {
                let n = b.chart.dim();
                let half = Scalar::constant(self.vars(), GaussRat::from_ratio(1, 2));
                crate::matrix::PolyMat::from_fn(self.vars(), 2 * n, 2 * n, |i, j| {
                    if i + n == j || j + n == i {
                        half.clone()
                    } else {
                        self.zero_scalar()
                    }
                })
            }
            Backend::Point(b) => crate::matrix::PolyMat::from_fn(self.vars(), b.dim, b.dim, |i, j| {
                Scalar::constant(self.vars(), b.pairing[i][j].clone())
            }),
        }
    }

    /// Anchor applied to a function: `ρ(X+ξ)f = X(f)`; zero over a point.
    pub fn anchor_apply(&self, u: &Section, f: &Scalar) -> Scalar {
        match self {
            Backend::Chart(_) => self.vector_part(u).apply_fn(f),
            Backend::Point(_) => self.zero_scalar(),
        }
    }

    /// The operator D determined by `⟨Df, x⟩ = ½ ρ(x) f`; on the standard
    /// backend Df = df, and D = 0 over a point.
    pub fn dee(&self, f: &Scalar) -> Section {
        match self {
            Backend::Chart(b) => {
                let n = b.chart.dim();
                let mut s = self.zero_section();
                for a in 0..n {
                    s.coeffs[n + a] = f.partial(a);
                }
                s
            }
            Backend::Point(_) => self.zero_section(),
        }
    }

    /// B-field transform `e_B(X+ξ) = X + ξ + ι_X B` of a section.
    pub fn b_transform(&self, b2: &DiffForm, u: &Section) -> Section {
        let ch = self.chart().expect("chart backend required");
        assert_eq!(b2.chart(), ch);
        assert_eq!(b2.degree(), 2);
        let x = self.vector_part(u);
        let form = self.form_part(u).add(&interior(&x, b2));
        self.section_from_parts(&x, &form)
    }

    /// Default axiom-verification samples: the 2n frame sections plus their
    /// coordinate-scaled variants x_{a mod n}·e_a (frame basis over a point).
    pub fn default_samples(&self) -> Vec<Section> {
        let mut out: Vec<Section> = (0..self.rank()).map(|a| self.frame_section(a)).collect();
        if let Some(ch) = self.chart() {
            let n = ch.dim();
            for a in 0..self.rank() {
                out.push(self.frame_section(a).scale(&ch.coord(a % n)));
            }
        }
        out
    }

    pub fn default_funcs(&self) -> Vec<Scalar> {
        match self {
            Backend::Chart(b) => {
                let ch = &b.chart;
                let mut fs = vec![ch.coord(0)];
                if ch.dim() > 1 {
                    fs.push(ch.coord(0).mul(&ch.coord(1)));
                }
                fs.push(ch.coord(ch.dim() - 1).pow(2));
                fs
            }
            Backend::Point(_) => vec![Scalar::one(self.vars())],
        }
    }

    /// Verifies the six Courant algebroid axioms on all triples from
    /// `samples` and all functions from `funcs`:
    /// 1. x∘(y∘z) = (x∘y)∘z + y∘(x∘z)
    /// 2. ρ(x)⟨y,z⟩ = ⟨x∘y, z⟩ + ⟨y, x∘z⟩
    /// 3. x∘(fy) = f(x∘y) + (ρ(x)f)·y
    /// 4. x∘y + y∘x = 2 D⟨x,y⟩
    /// 5. ρ(x∘y) = [ρ(x), ρ(y)]
    /// 6. ⟨Df, Dg⟩ = 0
    pub fn verify_axioms(&self, samples: &[Section], funcs: &[Scalar]) -> Result<Report, CourantError> {
        for s in samples {
            self.check_section(s)?;
        }
        let mut report = Report::new();
        let mut witnesses: [Option<serde_json::Value>; 6] = Default::default();
        let dor = |u: &Section, v: &Section| self.dorfman(u, v).expect("same backend");
        for (ix, x) in samples.iter().enumerate() {
            for (iy, y) in samples.iter().enumerate() {
                let xy = dor(x, y);

                if witnesses[3].is_none() {
                    let sym = xy.add(&dor(y, x));
                    let rhs = self.dee(&self.pairing(x, y)?).scale_rat(&GaussRat::from_int(2));
                    if sym != rhs {
                        witnesses[3] = Some(json!({ "x": ix, "y": iy }));
                    }
                }
                if witnesses[4].is_none() {
                    if let Backend::Chart(_) = self {
                        let lhs = self.vector_part(&xy);
                        let rhs = lie_bracket(&self.vector_part(x), &self.vector_part(y));
                        if lhs != rhs {
                            witnesses[4] = Some(json!({ "x": ix, "y": iy }));
                        }
                    }
                }
                if witnesses[2].is_none() {
                    for f in funcs {
                        let lhs = dor(x, &y.scale(f));
                        let rhs = xy.scale(f).add(&y.scale(&self.anchor_apply(x, f)));
                        if lhs != rhs {
                            witnesses[2] = Some(json!({ "x": ix, "y": iy, "f": f.to_string() }));
                            break;
                        }
                    }
                }
                for (iz, z) in samples.iter().enumerate() {
                    if witnesses[0].is_none() {
                        let lhs = dor(x, &dor(y, z));
                        let rhs = dor(&xy, z).add(&dor(y, &dor(x, z)));
                        if lhs != rhs {
                            witnesses[0] = Some(json!({ "x": ix, "y": iy, "z": iz }));
                        }
                    }
                    if witnesses[1].is_none() {
                        let lhs = self.anchor_apply(x, &self.pairing(y, z)?);
                        let rhs = self.pairing(&xy, z)?.add(&self.pairing(y, &dor(x, z))?);
                        if lhs != rhs {
                            witnesses[1] = Some(json!({ "x": ix, "y": iy, "z": iz }));
                        }
                    }
                }
            }
        }
        for f in funcs {
            for g in funcs {
                if witnesses[5].is_none() && !self.pairing(&self.dee(f), &self.dee(g))?.is_zero() {
                    witnesses[5] = Some(json!({ "f": f.to_string(), "g": g.to_string() }));
                }
            }
        }
        let names = [
            "axiom1_leibniz_jacobi",
            "axiom2_anchor_pairing",
            "axiom3_leibniz_function",
            "axiom4_symmetrization",
            "axiom5_anchor_morphism",
            "axiom6_isotropic_d",
        ];
        for (name, w) in names.iter().zip(witnesses) {
            match w {
                None => report.pass(*name),
                Some(v) => report.fail(*name, v),
            }
        }
        Ok(report)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse;

    fn r4() -> (Chart, Backend) {
        let ch = Chart::new(&["x0", "x1", "x2", "x3"]);
        let b = Backend::standard(&ch);
        (ch, b)
    }

    /// The quaternion algebra over a point: orthonormal basis {1,i,j,k},
    /// bracket = commutator.
    fn quaternion_point() -> Backend {
        let z = GaussRat::zero;
        let mut bracket = vec![vec![vec![z(); 4]; 4]; 4];
        let two = GaussRat::from_int(2);
        // [i,j] = 2k and cyclic permutations
        for (a, b, c) in [(1usize, 2usize, 3usize), (2, 3, 1), (3, 1, 2)] {
            bracket[a][b][c] = two.clone();
            bracket[b][a][c] = &z() - &two;
        }
        let pairing = (0..4)
            .map(|i| (0..4).map(|j| if i == j { GaussRat::one() } else { z() }).collect())
            .collect();
        Backend::point(bracket, pairing).unwrap()
    }

    #[test]
    fn dorfman_examples() {
        let (ch, b) = r4();
        // (∂0) ∘ (x0 ∂1) = ∂1
        let u = b.frame_section(0);
        let v = b.frame_section(1).scale(&ch.coord(0));
        assert_eq!(b.dorfman(&u, &v).unwrap(), b.frame_section(1));
        // (∂0 + dx1) ∘ (∂1) = 0
        let u = b.frame_section(0).add(&b.frame_section(5));
        assert!(b.dorfman(&u, &b.frame_section(1)).unwrap().is_zero());
    }

    #[test]
    fn dorfman_not_antisymmetric() {
        let (ch, b) = r4();
        // x = ∂0, y = x0 dx0: x∘y = dx0 but y∘x = -ι_{∂0} d(x0 dx0) = 0
        let x = b.frame_section(0);
        let y = b.frame_section(4).scale(&ch.coord(0));
        let xy = b.dorfman(&x, &y).unwrap();
        let yx = b.dorfman(&y, &x).unwrap();
        assert_eq!(xy, b.frame_section(4));
        assert!(yx.is_zero());
        assert_ne!(xy, yx.neg());
        // their symmetrization is 2D⟨x,y⟩
        let rhs = b.dee(&b.pairing(&x, &y).unwrap()).scale_rat(&GaussRat::from_int(2));
        assert_eq!(xy.add(&yx), rhs);
    }

    #[test]
    fn pairing_examples() {
        let (ch, b) = r4();
        let u = b.frame_section(0).add(&b.frame_section(4));
        assert_eq!(b.pairing(&u, &u).unwrap(), ch.one());
        assert!(b.pairing(&b.frame_section(0), &b.frame_section(1)).unwrap().is_zero());
    }

    #[test]
    fn anchor_and_dee() {
        let (ch, b) = r4();
        let f = parse("x0^2", ch.vars()).unwrap();
        let u = b.frame_section(0).add(&b.frame_section(5));
        assert_eq!(b.anchor_apply(&u, &f), parse("2*x0", ch.vars()).unwrap());
        assert!(b.anchor_apply(&b.frame_section(4), &f).is_zero());
        // D(x0²) = 2 x0 dx0
        assert_eq!(b.dee(&f), b.frame_section(4).scale(&parse("2*x0", ch.vars()).unwrap()));
        assert!(b.dee(&ch.one()).is_zero());
        // defining identity ⟨Df, U⟩ = ½ ρ(U) f
        let g = parse("x1*x2 + x3^2", ch.vars()).unwrap();
        let w = b.frame_section(1).scale(&ch.coord(2)).add(&b.frame_section(6));
        assert_eq!(
            b.pairing(&b.dee(&g), &w).unwrap(),
            b.anchor_apply(&w, &g).scale(&GaussRat::from_ratio(1, 2))
        );
    }

    #[test]
    fn axioms_standard_backend() {
        let (_, b) = r4();
        let report = b.verify_axioms(&b.default_samples(), &b.default_funcs()).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn axioms_twisted_backend() {
        let ch = Chart::new(&["x0", "x1", "x2", "x3"]);
        // φ = x0 dx0∧dx1∧dx2 = ½ d(x0² dx1∧dx2) is closed on R⁴
        let phi = DiffForm::term(&ch, &[0, 1, 2], ch.coord(0));
        let b = Backend::twisted(&ch, phi).unwrap();
        let report = b.verify_axioms(&b.default_samples(), &b.default_funcs()).unwrap();
        assert!(report.all_passed(), "{report:?}");
        // the twist actually enters the bracket
        let std = Backend::standard(&ch);
        let u = b.frame_section(0);
        let v = b.frame_section(1);
        assert_ne!(b.dorfman(&u, &v).unwrap(), std.dorfman(&u, &v).unwrap());
    }

    #[test]
    fn twist_must_be_closed() {
        let ch = Chart::new(&["x0", "x1", "x2", "x3"]);
        // d(x3 dx0∧dx1∧dx3) ≠ 0... use x3 dx0∧dx1∧dx2? that's closed; take
        // x0 dx1∧dx2∧dx3 is closed too; use x1·x1? d(x1² dx0∧dx2∧dx3)≠0? it
        // has a dx1 component: yes, nonzero.
        let phi = DiffForm::term(&ch, &[0, 2, 3], ch.coord(1).pow(2));
        assert_eq!(Backend::twisted(&ch, phi).unwrap_err(), CourantError::TwistNotClosed);
    }

    #[test]
    fn axioms_quaternion_point() {
        let b = quaternion_point();
        let report = b.verify_axioms(&b.default_samples(), &b.default_funcs()).unwrap();
        assert!(report.all_passed(), "{report:?}");
        // i∘j = 2k, ⟨i,i⟩ = 1
        let two_k = b.frame_section(3).scale_rat(&GaussRat::from_int(2));
        assert_eq!(b.dorfman(&b.frame_section(1), &b.frame_section(2)).unwrap(), two_k);
        assert_eq!(b.pairing(&b.frame_section(1), &b.frame_section(1)).unwrap(), Scalar::one(b.vars()));
    }

    #[test]
    fn point_construction_guards() {
        let z = GaussRat::zero;
        // non-ad-invariant: [i,j] = 2j against the euclidean pairing
        let mut bracket = vec![vec![vec![z(); 3]; 3]; 3];
        bracket[0][1][1] = GaussRat::from_int(2);
        let pairing: Vec<Vec<GaussRat>> = (0..3)
            .map(|i| (0..3).map(|j| if i == j { GaussRat::one() } else { z() }).collect())
            .collect();
        assert_eq!(Backend::point(bracket, pairing.clone()).unwrap_err(), CourantError::NotAdInvariant);
        // asymmetric pairing
        let mut asym = pairing.clone();
        asym[0][1] = GaussRat::one();
        let zb = vec![vec![vec![z(); 3]; 3]; 3];
        assert_eq!(Backend::point(zb.clone(), asym).unwrap_err(), CourantError::PairingNotSymmetric);
        // degenerate pairing
        let mut deg = pairing;
        deg[2][2] = z();
        assert_eq!(Backend::point(zb, deg).unwrap_err(), CourantError::PairingNotInvertible);
    }

    #[test]
    fn b_field_transform_is_automorphism() {
        let (ch, b) = r4();
        // B = x0 dx1∧dx2 is closed? d = dx0∧dx1∧dx2 ≠ 0 — use a closed one:
        // B = x0 dx1∧dx2 + x1 dx2∧dx0 + x2 dx0∧dx1 has d = 3 dx0∧dx1∧dx2.
        // Take B = x3 dx1∧dx2 − no; simplest closed: B = d(x0 x1 dx2) =
        // x1 dx0∧dx2 + x0 dx1∧dx2.
        let bform = DiffForm::term(&ch, &[0, 2], ch.coord(1)).add(&DiffForm::term(&ch, &[1, 2], ch.coord(0)));
        assert!(ext_d(&bform).is_zero());
        for (iu, iv) in [(0usize, 1usize), (0, 4), (1, 6), (2, 3)] {
            let u = b.frame_section(iu).scale(&ch.coord(iu % 4));
            let v = b.frame_section(iv).add(&b.frame_section(0).scale(&ch.coord(2)));
            let lhs = b.dorfman(&b.b_transform(&bform, &u), &b.b_transform(&bform, &v)).unwrap();
            let rhs = b.b_transform(&bform, &b.dorfman(&u, &v).unwrap());
            assert_eq!(lhs, rhs);
            assert_eq!(
                b.pairing(&b.b_transform(&bform, &u), &b.b_transform(&bform, &v)).unwrap(),
                b.pairing(&u, &v).unwrap()
            );
        }
    }
}

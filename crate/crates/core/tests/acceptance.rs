//! Acceptance gate: each test below certifies one release criterion, so the
//! harness output shows one pass/fail line per criterion. Everything is
//! evaluated in exact rational arithmetic — a criterion passes only when the
//! relevant identities hold with zero tolerance.

use courantlab::chartcalc::{
    dbar, ext_d, lie_bracket, schouten, Chart, DiffForm, MultiVec, TanEndo,
};
use courantlab::connection::{
    behrend_fantechi, hypercomplex_foliation_connection, HXConnection,
};
use courantlab::courant::{Backend, Section};
use courantlab::eigencalc::eigenframe;
use courantlab::endo::{self, hypercomplex_check, Endo, Triple};
use courantlab::fixtures as fx;
use courantlab::holosym::{deformation_check, hyper_poisson_equivalence, HoloSymp, HyperPoisson};
use courantlab::matrix::PolyMat;
use courantlab::report::Status;
use courantlab::scalars::{parse, GaussRat, Scalar};

// ---- deterministic pseudo-random data ------------------------------------

struct Lcg(u64);

impl Lcg {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        self.0 >> 33
    }

    fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    /// A small random polynomial over the backend's coordinates (a constant
    /// on point backends).
    fn scalar(&mut self, b: &Backend) -> Scalar {
        let vars = b.vars();
        let dim = b.chart().map(|c| c.dim()).unwrap_or(0);
        let mut out = Scalar::from_int(vars.clone(), self.below(5) as i64 - 2);
        for _ in 0..2 {
            if dim == 0 {
                continue;
            }
            let c = self.below(7) as i64 - 3;
            let mut term = Scalar::from_int(vars.clone(), c);
            for _ in 0..=self.below(2) {
                term = term.mul(&Scalar::coord(vars.clone(), self.below(dim as u64) as usize));
            }
            out = out.add(&term);
        }
        out
    }

    fn section(&mut self, b: &Backend) -> Section {
        let mut out = b.zero_section();
        for _ in 0..3 {
            let a = self.below(b.rank() as u64) as usize;
            out = out.add(&b.frame_section(a).scale(&self.scalar(b)));
        }
        out
    }
}

fn hypercomplex_fixtures() -> Vec<(&'static str, Backend, Triple)> {
    let (b1, t1) = fx::flatq();
    let (b2, t2) = fx::c2std();
    let (b3, t3) = fx::hpt();
    let (b4, t4, _) = fx::flatq_b();
    vec![("flatq", b1, t1), ("c2std", b2, t2), ("hpt", b3, t3), ("flatq_b", b4, t4)]
}

/// The non-integrable triple: J conjugated by a unipotent tangent lift,
/// I and K conjugated alike so the quaternion relations survive.
fn nonint_triple() -> (Backend, Triple) {
    let (b, jp) = fx::nonint();
    let ch = b.chart().unwrap().clone();
    let (i, _, k) = fx::constant_quaternions(&ch);
    let mut a = PolyMat::identity(ch.vars(), 4);
    a[(0, 2)] = ch.coord(1);
    let a_inv = a.inv_unit().unwrap();
    let z = PolyMat::zeros(ch.vars(), 4, 4);
    let lift = |m: &PolyMat| {
        let conj = a.mul(m).mul(&a_inv);
        Endo::from_blocks(&b, &conj, &z, &z, &conj.transpose().neg())
    };
    let t = Triple::new(lift(i.matrix()), jp, lift(k.matrix()));
    (b, t)
}

fn holo_of(t: &Triple) -> HoloSymp {
    HoloSymp::from_triple(t).unwrap()
}

// ---- criterion 1: Courant axiom suite ------------------------------------

#[test]
fn criterion_1_axiom_suite() {
    let backends: Vec<(&str, Backend)> = vec![
        ("r2", Backend::standard(&Chart::new(&["x", "y"]))),
        ("r4", Backend::standard(&Chart::new(&["x0", "x1", "x2", "x3"]))),
        ("twist_c2", fx::twist_c2().0),
        ("hpt", fx::hpt().0),
    ];
    for (name, b) in backends {
        let report = b.verify_axioms(&b.default_samples(), &b.default_funcs()).unwrap();
        assert!(report.all_passed(), "axioms failed on {name}: {report:?}");
    }

    // the block-diagonal lift of j on the (3,0)+(0,3)-twisted backend must
    // fail integrability with a nonzero concomitant witness
    let (b, j) = fx::twist_c3_neg();
    assert!(j.squares_to_minus_one() && j.is_orthogonal());
    let mut witness = None;
    'outer: for p in 0..b.rank() {
        for q in 0..b.rank() {
            let n = endo::nijenhuis(&j, &j, &b.frame_section(p), &b.frame_section(q)).unwrap();
            if !n.is_zero() {
                witness = Some(n);
                break 'outer;
            }
        }
    }
    assert!(witness.is_some(), "expected a nonzero N(J,J) witness on the twisted backend");
}

// ---- criterion 2: hypercomplex certification ------------------------------

#[test]
fn criterion_2_hypercomplex_certification() {
    for (name, _, t) in hypercomplex_fixtures() {
        assert!(t.quaternionic_check().all_passed(), "quaternion relations failed on {name}");
        let report = hypercomplex_check(&t).unwrap();
        assert!(report.all_passed(), "Nijenhuis suite failed on {name}: {report:?}");
        // shortcut consistency: N(I,J) = 0 iff all six vanish
        assert_eq!(report.status("shortcut_consistent"), Some(Status::Pass));
    }

    let (_, t) = nonint_triple();
    assert!(t.quaternionic_check().all_passed());
    let report = hypercomplex_check(&t).unwrap();
    assert!(!report.all_passed(), "the non-integrable triple must fail");
    let witnessed = report.checks.iter().any(|c| c.status == Status::Fail && c.witness.is_some());
    assert!(witnessed, "failure must carry a witness: {report:?}");
    assert_eq!(report.status("shortcut_consistent"), Some(Status::Pass), "{report:?}");
}

// ---- criterion 3: the hypercomplex connection -----------------------------

#[test]
fn criterion_3_connection_suite() {
    let mut rng = Lcg(0xC0FFEE);
    for (name, b, t) in hypercomplex_fixtures() {
        let conn = HXConnection::new(t).unwrap();
        assert!(conn.parallelism_report().all_passed(), "parallelism failed on {name}");

        // torsion identity on every frame pair …
        for p in 0..b.rank() {
            for q in 0..b.rank() {
                let (lhs, rhs) = conn.torsion(&b.frame_section(p), &b.frame_section(q)).unwrap();
                assert_eq!(lhs, rhs, "torsion mismatch on {name} at ({p},{q})");
            }
        }
        // … and on 20 random scalar-scaled pairs
        for _ in 0..20 {
            let u = rng.section(&b);
            let v = rng.section(&b);
            let (lhs, rhs) = conn.torsion(&u, &v).unwrap();
            assert_eq!(lhs, rhs, "torsion mismatch on random sections of {name}");
        }

        // Leibniz anomaly is exactly −Δ_f for 10 random functions
        for _ in 0..10 {
            let f = rng.scalar(&b);
            let u = rng.section(&b);
            let v = rng.section(&b);
            let lhs = conn.nabla(&u, &v.scale(&f)).unwrap();
            let rhs = v
                .scale(&b.anchor_apply(&u, &f))
                .add(&conn.nabla(&u, &v).unwrap().scale(&f))
                .sub(&conn.delta_f(&f, &u, &v).unwrap());
            assert_eq!(lhs, rhs, "Leibniz anomaly mismatch on {name}");
        }

        // curvature vanishes on pure eigenbundle slots
        let pair = eigenframe(&conn.triple().j, None).unwrap();
        for frame in [pair.frame_l(), pair.frame_lstar()] {
            for a in 0..frame.len() {
                for c in 0..frame.len() {
                    for d in 0..frame.len() {
                        let r = conn.curvature(frame.section(a), frame.section(c), frame.section(d)).unwrap();
                        assert!(r.is_zero(), "pure-slot curvature on {name} at ({a},{c},{d})");
                    }
                }
            }
        }
    }

    // the generalized torsion balance holds even without integrability
    let (b, t) = nonint_triple();
    let conn = HXConnection::new_almost(t).unwrap();
    for p in 0..b.rank() {
        for q in 0..b.rank() {
            let (lhs, rhs) = conn.torsion_general(&b.frame_section(p), &b.frame_section(q)).unwrap();
            assert_eq!(lhs, rhs, "general torsion balance failed at ({p},{q})");
        }
    }
}

// ---- criterion 4: triple ↔ holomorphic symplectic correspondence ----------

#[test]
fn criterion_4_correspondence_roundtrip() {
    for (name, _, t) in hypercomplex_fixtures() {
        let hs = holo_of(&t);

        // to_triple ∘ from_triple = identity
        let back = hs.to_triple();
        assert_eq!(back.i.matrix(), t.i.matrix(), "I roundtrip failed on {name}");
        assert_eq!(back.j.matrix(), t.j.matrix(), "J roundtrip failed on {name}");
        assert_eq!(back.k.matrix(), t.k.matrix(), "K roundtrip failed on {name}");

        // from_triple ∘ to_triple = identity: rebuilding from the recovered
        // triple reproduces the same sharp map
        let hs2 = holo_of(&back);
        assert_eq!(hs2.omega_sharp().matrix(), hs.omega_sharp().matrix());

        // the sharp map is the (I + iK)/2 combination
        let expected = t.i.add(&t.k.scale_rat(&GaussRat::i())).scale_rat(&GaussRat::from_ratio(1, 2));
        assert_eq!(hs.omega_sharp().matrix(), expected.matrix(), "sharp formula failed on {name}");

        // the frame coefficients of Ω agree with the pairing evaluation:
        // Ω_{ab} = 2⟨Ω♯ξ'_a, ξ'_b⟩ on the dual frame
        let pair = hs.pair();
        let m = pair.frame_lstar().len();
        for a in 0..m {
            for c in 0..m {
                let val = pair
                    .backend()
                    .pairing(&hs.omega_sharp().apply(pair.dual_section(a)), pair.dual_section(c))
                    .unwrap()
                    .scale(&GaussRat::from_int(2));
                assert_eq!(val, hs.frame_matrix().get(&[a, c]), "Ω evaluation mismatch on {name} at ({a},{c})");
            }
        }

        // the eigenbundle Nijenhuis identities — including the single
        // calibration constant shared by every fixture — are part of the
        // closedness report
        let report = hs.closedness_equivalences();
        assert!(report.all_passed(), "closedness/calibration failed on {name}: {report:?}");
        for check in ["nijenhuis_ij_identity", "nijenhuis_jk_identity", "nijenhuis_pure_type"] {
            assert_eq!(report.status(check), Some(Status::Pass), "{check} missing on {name}");
        }
    }
}

// ---- criterion 5: the three closedness conditions agree -------------------

#[test]
fn criterion_5_closedness_equivalence() {
    for (name, _, t) in hypercomplex_fixtures() {
        let report = holo_of(&t).closedness_equivalences();
        for check in ["schouten_square_zero", "differential_zero", "maurer_cartan_zero", "conditions_equivalent"] {
            assert_eq!(report.status(check), Some(Status::Pass), "{check} failed on {name}: {report:?}");
        }
    }

    // three broken-Ω structures: all three conditions fail together
    for which in 0..3 {
        let (_, j, sharp) = fx::c2_broken_sharp(which);
        let hs = HoloSymp::new_algebraic(j, sharp).unwrap();
        let report = hs.closedness_equivalences();
        for check in ["schouten_square_zero", "differential_zero", "maurer_cartan_zero"] {
            assert_eq!(report.status(check), Some(Status::Fail), "{check} should fail on variant {which}");
        }
        assert_eq!(report.status("conditions_equivalent"), Some(Status::Pass), "incoherent failure on variant {which}");
        // the Maurer–Cartan form of the graph criterion fails coherently too
        let mc = deformation_check(hs.pair(), hs.frame_matrix());
        assert_eq!(mc.status("maurer_cartan"), Some(Status::Fail));
        assert_eq!(mc.status("conditions_agree"), Some(Status::Pass));
    }

    // the half-square bracket identity on the non-constant fixture: the
    // Schouten square evaluated against the differential agrees, which is
    // the content of the closedness report on FLATQ-B specifically
    let (_, _, t) = &hypercomplex_fixtures()[3];
    let report = holo_of(t).closedness_equivalences();
    assert!(report.all_passed(), "{report:?}");
}

// ---- criterion 6: the sphere of deformed complex structures ---------------

#[test]
fn criterion_6_deformation_family() {
    let pairs: [(GaussRat, GaussRat); 5] = [
        (GaussRat::zero(), GaussRat::zero()),
        (GaussRat::one(), GaussRat::zero()),
        (GaussRat::zero(), GaussRat::one()),
        (GaussRat::one(), GaussRat::from_int(2)),
        // (a,b) = (1/3, 0) lands on the rational sphere point (0, 4/5, 3/5)
        (GaussRat::from_ratio(1, 3), GaussRat::zero()),
    ];
    for (name, b, t) in hypercomplex_fixtures() {
        let hs = holo_of(&t);
        for (a, bb) in &pairs {
            let (s, frame) = hs.deformation_family(a, bb).unwrap();
            assert!(s.squares_to_minus_one(), "square failed on {name} at ({a},{bb})");
            assert!(s.is_orthogonal(), "orthogonality failed on {name} at ({a},{bb})");
            for p in 0..b.rank() {
                for q in 0..b.rank() {
                    let n = endo::nijenhuis(&s, &s, &b.frame_section(p), &b.frame_section(q)).unwrap();
                    assert!(n.is_zero(), "integrability failed on {name} at ({a},{bb})");
                }
            }
            // the graph frame (1 + (a+bi)Ω♯)L* is a −i eigenframe of the
            // deformed structure
            let minus_i = -&GaussRat::i();
            for xi in frame.sections() {
                assert_eq!(s.apply(xi), xi.scale(&Scalar::constant(b.vars(), minus_i.clone())));
            }
        }
        // the axis cases recover J, K, I
        assert_eq!(hs.deformation_family(&pairs[0].0, &pairs[0].1).unwrap().0.matrix(), t.j.matrix());
        assert_eq!(hs.deformation_family(&pairs[1].0, &pairs[1].1).unwrap().0.matrix(), t.k.matrix());
        assert_eq!(hs.deformation_family(&pairs[2].0, &pairs[2].1).unwrap().0.matrix(), t.i.matrix());
    }
}

// ---- criterion 7: decomposition and hyper-Poisson --------------------------

#[test]
fn criterion_7_decomposition_and_hyper_poisson() {
    // FLATQ: pure tangent-lift pattern (π = 0, ω = 0)
    let (_, t) = fx::flatq();
    let (dec, report) = holo_of(&t).decompose().unwrap();
    assert!(report.all_passed(), "extended-symplectic conditions failed on flatq: {report:?}");
    assert!(report.checks.len() >= 11, "expected the full condition list, got {}", report.checks.len());
    assert!(dec.pi.is_zero() && dec.omega.is_zero() && !dec.theta.is_zero());

    // C2STD: symplectic pattern (θ = 0, π and ω nonzero)
    let (_, t) = fx::c2std();
    let (dec, report) = holo_of(&t).decompose().unwrap();
    assert!(report.all_passed(), "extended-symplectic conditions failed on c2std: {report:?}");
    assert!(dec.theta.is_zero() && !dec.pi.is_zero() && !dec.omega.is_zero());

    // hyper-Poisson equivalence on the hyper-Kähler data
    let (_, _, [p1, p2, p3]) = fx::hp_kahler();
    let ch = Chart::new(&["x0", "x1", "x2", "x3"]);
    let (i, j, k) = fx::constant_quaternions(&ch);
    let hp = HyperPoisson::new(i, j, k, p1.clone(), p2.clone(), p3.clone()).unwrap();
    let report = hyper_poisson_equivalence(&hp);
    assert!(report.all_passed(), "hyper-Poisson equivalence failed: {report:?}");
    assert_eq!(report.status("assertions_concur"), Some(Status::Pass));

    // the broken variant — the base triple conjugated by a non-holomorphic
    // unipotent — fails all three assertions coherently
    let mut a = PolyMat::identity(ch.vars(), 4);
    a[(0, 2)] = ch.coord(1);
    let a_inv = a.inv_unit().unwrap();
    let twist = |e: &TanEndo| TanEndo::new(&ch, a.mul(e.matrix()).mul(&a_inv));
    let broken = HyperPoisson::new(
        twist(&hp.i),
        twist(&hp.j),
        twist(&hp.k),
        hp.p1.clone(),
        hp.p2.clone(),
        hp.p3.clone(),
    )
    .unwrap();
    let report = hyper_poisson_equivalence(&broken);
    assert!(!report.all_passed(), "broken variant must fail");
    assert_eq!(report.status("assertions_concur"), Some(Status::Pass), "{report:?}");

    // corollary relations as matrix identities: the Poisson bivectors of
    // the mixed triple are ±half the hyper-Kähler bivectors, and the lifted
    // middle structure carries none
    let (_, t, _) = fx::hp_kahler();
    let half = GaussRat::from_ratio(1, 2);
    assert_eq!(endo::poisson_of(&t.i).unwrap(), p3.scale_rat(&half));
    assert_eq!(endo::poisson_of(&t.k).unwrap(), p1.scale_rat(&half).neg());
    assert!(endo::poisson_of(&t.j).unwrap().is_zero());
}

// ---- criterion 8: foliation connections ------------------------------------

#[test]
fn criterion_8_foliation_connections() {
    // Behrend–Fantechi on the complex surface with T_S = span{∂z1}
    let (ch, j) = fx::c2_chart();
    let (w1, w2p) = fx::c2_symplectic_parts(&ch);
    let omega = w1.add(&w2p.scale_rat(&GaussRat::i()));
    let z1 = MultiVec::basis(&ch, 0).sub(&MultiVec::basis(&ch, 1).scale_rat(&GaussRat::i()));
    let (bf_table, report) = behrend_fantechi(&omega, &j, &[z1]).unwrap();
    assert!(report.all_passed(), "Behrend–Fantechi report failed: {report:?}");
    assert!(bf_table[0][0].iter().all(Scalar::is_zero), "expected the zero table");

    // … equals the restriction of the Courant connection to the matching
    // Lagrangian frame (both are the zero table, certified flat and
    // torsion-free by the restriction report)
    let (b, t) = fx::c2std();
    let conn = HXConnection::new(t.clone()).unwrap();
    let lag = courantlab::eigencalc::dirac_to_lagrangian(&t.j, &[b.frame_section(0), b.frame_section(6)]);
    let frame = courantlab::eigencalc::IsoFrame::new(&b, lag).unwrap();
    let pair = eigenframe(&t.j, None).unwrap();
    let omega_frame = courantlab::eigencalc::sharp_to_coeffs(&pair, &t.i.add(&t.k.scale_rat(&GaussRat::i())).scale_rat(&GaussRat::from_ratio(1, 2))).unwrap();
    let (lag_table, lag_report) = conn.restrict_lagrangian(&frame, &pair, &omega_frame).unwrap();
    assert!(lag_report.all_passed(), "{lag_report:?}");
    let flat = |tbl: &Vec<Vec<Vec<Scalar>>>| -> bool {
        tbl.iter().all(|p| p.iter().all(|r| r.iter().all(Scalar::is_zero)))
    };
    assert!(flat(&lag_table));
    assert!(flat(&bf_table), "the two restriction paths disagree");

    // the foliation connection of the flat quaternionic triple equals the
    // Dirac restriction recovering the classical (Obata) path: both are the
    // zero table on the coordinate foliation
    let ch = Chart::new(&["x0", "x1", "x2", "x3"]);
    let (i, jq, k) = fx::constant_quaternions(&ch);
    let z0 = MultiVec::basis(&ch, 0).sub(&MultiVec::basis(&ch, 2).scale_rat(&GaussRat::i()));
    let zz1 = MultiVec::basis(&ch, 1).add(&MultiVec::basis(&ch, 3).scale_rat(&GaussRat::i()));
    let (fol_table, fol_report) = hypercomplex_foliation_connection(&i, &jq, &k, &[z0, zz1]).unwrap();
    assert!(fol_report.all_passed(), "foliation connection report failed: {fol_report:?}");
    assert!(flat(&fol_table));

    let (b, t) = fx::flatq();
    let conn = HXConnection::new(t).unwrap();
    let tangent: Vec<Section> = (0..4).map(|a| b.frame_section(a)).collect();
    let (dirac_table, dirac_report) = conn.restrict_dirac(&tangent).unwrap();
    assert!(dirac_report.all_passed(), "{dirac_report:?}");
    assert!(flat(&dirac_table), "the Dirac path disagrees with the foliation connection");
}

// ---- criterion 9: randomized kernel properties -----------------------------

mod criterion_9_kernel_properties {
    use super::*;
    use proptest::prelude::*;

    fn rational() -> impl Strategy<Value = GaussRat> {
        (-6i64..=6, 1i64..=4, -6i64..=6, 1i64..=4)
            .prop_map(|(a, b, c, d)| &GaussRat::from_ratio(a, b) + &(&GaussRat::from_ratio(c, d) * &GaussRat::i()))
    }

    fn chart_of(dim: usize) -> Chart {
        let names: Vec<String> = (0..dim).map(|a| format!("x{a}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        Chart::new(&refs)
    }

    /// A random polynomial on a chart of the given dimension: up to three
    /// monomials of total degree ≤ 2.
    fn scalar_on(dim: usize) -> impl Strategy<Value = Scalar> {
        let ch = chart_of(dim);
        proptest::collection::vec((rational(), 0usize..dim, 0usize..dim, 0u32..=2), 0..3).prop_map(move |terms| {
            let mut out = Scalar::zero(ch.vars());
            for (c, a, b, e) in terms {
                let mono = Scalar::coord(ch.vars(), a).mul(&Scalar::coord(ch.vars(), b).pow(e));
                out = out.add(&mono.scale(&c));
            }
            out
        })
    }

    fn multivec_on(dim: usize, degree: usize) -> impl Strategy<Value = MultiVec> {
        let ch = chart_of(dim);
        proptest::collection::vec(
            (proptest::collection::vec(0..dim, degree), scalar_on(dim)),
            0..3,
        )
        .prop_map(move |terms| {
            let mut out = MultiVec::zero(&ch, degree);
            for (idx, c) in terms {
                let mut sorted = idx.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() == degree {
                    out = out.add(&MultiVec::term(&ch, &idx, c));
                }
            }
            out
        })
    }

    fn form_on(dim: usize, degree: usize) -> impl Strategy<Value = DiffForm> {
        let ch = chart_of(dim);
        proptest::collection::vec(
            (proptest::collection::vec(0..dim, degree), scalar_on(dim)),
            0..3,
        )
        .prop_map(move |terms| {
            let mut out = DiffForm::zero(&ch, degree);
            for (idx, c) in terms {
                let mut sorted = idx.clone();
                sorted.sort_unstable();
                sorted.dedup();
                if sorted.len() == degree {
                    out = out.add(&DiffForm::term(&ch, &idx, c));
                }
            }
            out
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn scalar_ring_axioms(a in scalar_on(4), b in scalar_on(4), c in scalar_on(4)) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            let zero = Scalar::zero(a.vars().clone());
            let one = Scalar::one(a.vars().clone());
            prop_assert_eq!(a.add(&zero), a.clone());
            prop_assert_eq!(a.mul(&one), a.clone());
            prop_assert!(a.sub(&a).is_zero());
        }

        #[test]
        fn parse_print_round_trip(s in scalar_on(4)) {
            let text = s.to_string();
            let back = parse(&text, s.vars().clone()).unwrap();
            prop_assert_eq!(back, s);
        }

        #[test]
        fn exterior_derivative_squares_to_zero(w1 in form_on(4, 1), w2 in form_on(3, 2)) {
            prop_assert!(ext_d(&ext_d(&w1)).is_zero());
            prop_assert!(ext_d(&ext_d(&w2)).is_zero());
        }

        #[test]
        fn dbar_squares_to_zero(w in form_on(4, 1)) {
            let ch = chart_of(4);
            let (_, j, _) = fx::constant_quaternions(&ch);
            prop_assert!(dbar(&dbar(&w, &j).unwrap(), &j).unwrap().is_zero());
        }

        #[test]
        fn schouten_graded_jacobi(
            p in multivec_on(4, 2),
            q in multivec_on(4, 2),
            r in multivec_on(4, 1),
            x in multivec_on(4, 1),
        ) {
            // graded Jacobi with the convention [P,Q] = −(−1)^{(p−1)(q−1)}[Q,P]:
            // for shifted degrees (1,1,0) it reads
            // [[P,Q],R] = [P,[Q,R]] + [Q,[P,R]]
            let lhs = schouten(&schouten(&p, &q), &r);
            let rhs = schouten(&p, &schouten(&q, &r)).add(&schouten(&q, &schouten(&p, &r)));
            prop_assert_eq!(lhs, rhs);

            // graded symmetry: two bivectors commute up to the Koszul sign +1
            prop_assert_eq!(schouten(&p, &q), schouten(&q, &p));

            // on vector fields the bracket is the Lie bracket
            prop_assert_eq!(schouten(&x, &r), lie_bracket(&x, &r));
        }
    }
}

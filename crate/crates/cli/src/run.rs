//! Command dispatch: every subcommand evaluates checks against a loaded
//! scene and produces a deterministic JSON report.

use crate::scene::Scene;
use courantlab::chartcalc::{Chart, DiffForm, MultiVec, TanEndo};
use courantlab::connection::{behrend_fantechi, ChristoffelTable, HXConnection};
use courantlab::courant::Section;
use courantlab::endo::{self, Endo, Triple};
use courantlab::holosym::{HoloSymp, HyperPoisson};
use courantlab::matrix::PolyMat;
use courantlab::report::{Report, Status};
use courantlab::scalars::{parse, vars, GaussRat, Scalar};
use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunError {
    #[error("unknown command `{0}`")]
    UnknownCommand(String),
    #[error("unknown name `{name}`: no {kind} with that name in the scene")]
    UnknownName { kind: &'static str, name: String },
    #[error("bad arguments: {0}")]
    BadArgs(String),
    #[error("{0}")]
    Construction(String),
}

pub struct RunOptions {
    pub timing: bool,
    pub witness_limit: Option<usize>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { timing: false, witness_limit: None }
    }
}

pub const COMMANDS: &[&str] = &[
    "verify-axioms",
    "check-complex",
    "check-hypercomplex",
    "nijenhuis",
    "poisson-of",
    "connection",
    "torsion",
    "curvature",
    "restrict",
    "holosym-from-triple",
    "holosym-check",
    "decompose",
    "sphere",
    "deform",
    "hyper-poisson",
    "bf-connection",
    "report-all",
];

/// Runs a command against the scene and assembles the report envelope.
/// The boolean is the pass/fail verdict used for the exit code.
pub fn run(command: &str, scene: &Scene, args: &[String], opts: &RunOptions) -> Result<(Value, bool), RunError> {
    let started = std::time::Instant::now();
    let report = dispatch(command, scene, args)?;
    let all_passed = report.all_passed();
    let mut checks: Vec<Value> = report
        .checks
        .iter()
        .map(|c| serde_json::to_value(c).expect("checks serialize"))
        .collect();
    if let Some(limit) = opts.witness_limit {
        for c in &mut checks {
            if let Some(w) = c.get_mut("witness") {
                truncate_witness(w, limit);
            }
        }
    }
    let mut out = serde_json::Map::new();
    out.insert("command".into(), json!(command));
    out.insert("checks".into(), Value::Array(checks));
    out.insert("conventions".into(), json!(report.conventions));
    out.insert("all_passed".into(), json!(all_passed));
    if opts.timing {
        out.insert("timing_ms".into(), json!(started.elapsed().as_millis() as u64));
    }
    Ok((Value::Object(out), all_passed))
}

fn truncate_witness(w: &mut Value, limit: usize) {
    match w {
        Value::Array(items) => {
            if items.len() > limit {
                let dropped = items.len() - limit;
                items.truncate(limit);
                items.push(json!(format!("… {dropped} entries truncated")));
            }
            for item in items.iter_mut() {
                truncate_witness(item, limit);
            }
        }
        Value::Object(map) => {
            for (_, v) in map.iter_mut() {
                truncate_witness(v, limit);
            }
        }
        _ => {}
    }
}

fn dispatch(command: &str, scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    match command {
        "verify-axioms" => verify_axioms(scene),
        "check-complex" => check_complex(scene, args),
        "check-hypercomplex" => check_hypercomplex(scene, args),
        "nijenhuis" => nijenhuis_cmd(scene, args),
        "poisson-of" => poisson_of_cmd(scene, args),
        "connection" => connection_cmd(scene, args),
        "torsion" => torsion_cmd(scene, args),
        "curvature" => curvature_cmd(scene, args),
        "restrict" => restrict_cmd(scene, args),
        "holosym-from-triple" => holosym_from_triple(scene, args),
        "holosym-check" => holosym_check(scene, args),
        "decompose" => decompose_cmd(scene, args),
        "sphere" => sphere_cmd(scene, args),
        "deform" => deform_cmd(scene, args),
        "hyper-poisson" => hyper_poisson_cmd(scene, args),
        "bf-connection" => bf_connection_cmd(scene, args),
        "report-all" => report_all(scene),
        other => Err(RunError::UnknownCommand(other.to_string())),
    }
}

// ---- name and argument resolution -------------------------------------

fn get_endo<'a>(scene: &'a Scene, name: &str) -> Result<&'a Endo, RunError> {
    scene.endos.get(name).ok_or_else(|| RunError::UnknownName { kind: "endomorphism", name: name.into() })
}

fn get_tan<'a>(scene: &'a Scene, name: &str) -> Result<&'a TanEndo, RunError> {
    scene
        .tangent_endos
        .get(name)
        .ok_or_else(|| RunError::UnknownName { kind: "tangent endomorphism", name: name.into() })
}

fn get_form<'a>(scene: &'a Scene, name: &str) -> Result<&'a DiffForm, RunError> {
    scene.forms.get(name).ok_or_else(|| RunError::UnknownName { kind: "form", name: name.into() })
}

fn get_bivec<'a>(scene: &'a Scene, name: &str) -> Result<&'a MultiVec, RunError> {
    scene.bivectors.get(name).ok_or_else(|| RunError::UnknownName { kind: "bivector", name: name.into() })
}

fn get_section<'a>(scene: &'a Scene, name: &str) -> Result<&'a Section, RunError> {
    scene.sections.get(name).ok_or_else(|| RunError::UnknownName { kind: "section", name: name.into() })
}

fn get_frame(scene: &Scene, name: &str) -> Result<Vec<Section>, RunError> {
    let members = scene
        .frames
        .get(name)
        .ok_or_else(|| RunError::UnknownName { kind: "frame", name: name.to_string() })?;
    members.iter().map(|m| get_section(scene, m).cloned()).collect()
}

fn arg<'a>(args: &'a [String], k: usize, what: &str) -> Result<&'a str, RunError> {
    args.get(k).map(|s| s.as_str()).ok_or_else(|| RunError::BadArgs(format!("missing argument {}: {what}", k + 1)))
}

fn rational_arg(args: &[String], k: usize, what: &str) -> Result<GaussRat, RunError> {
    let text = arg(args, k, what)?;
    parse(text, vars(&[]))
        .ok()
        .and_then(|s| s.as_constant())
        .ok_or_else(|| RunError::BadArgs(format!("`{text}` is not a constant for {what}")))
}

fn triple_from_args(scene: &Scene, args: &[String]) -> Result<Triple, RunError> {
    let i = get_endo(scene, arg(args, 0, "endomorphism I")?)?;
    let j = get_endo(scene, arg(args, 1, "endomorphism J")?)?;
    let k = get_endo(scene, arg(args, 2, "endomorphism K")?)?;
    Ok(Triple::new(i.clone(), j.clone(), k.clone()))
}

fn holosym_from_args(scene: &Scene, args: &[String]) -> Result<Result<HoloSymp, String>, RunError> {
    let name = arg(args, 0, "omega declaration")?;
    let om = scene
        .omegas
        .get(name)
        .ok_or_else(|| RunError::UnknownName { kind: "omega declaration", name: name.into() })?;
    let j = get_endo(scene, &om.j)?.clone();
    let sharp = get_endo(scene, &om.sharp)?.clone();
    Ok(HoloSymp::new_algebraic(j, sharp).map_err(|e| e.to_string()))
}

// ---- witness serialization ---------------------------------------------

fn section_json(s: &Section) -> Value {
    Value::Array(s.coeffs().iter().map(|c| json!(c.to_string())).collect())
}

fn matrix_json(m: &PolyMat) -> Value {
    let rows = (0..m.rows())
        .map(|r| Value::Array((0..m.cols()).map(|c| json!(m[(r, c)].to_string())).collect()))
        .collect();
    Value::Array(rows)
}

fn table_json(t: &ChristoffelTable) -> Value {
    Value::Array(
        t.iter()
            .map(|plane| {
                Value::Array(
                    plane
                        .iter()
                        .map(|row| Value::Array(row.iter().map(|s| json!(s.to_string())).collect()))
                        .collect(),
                )
            })
            .collect(),
    )
}

fn ascending_tuples(dim: usize, degree: usize) -> Vec<Vec<usize>> {
    if degree == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut stack = vec![(Vec::new(), 0usize)];
    while let Some((prefix, start)) = stack.pop() {
        for a in start..dim {
            let mut next = prefix.clone();
            next.push(a);
            if next.len() == degree {
                out.push(next);
            } else {
                stack.push((next, a + 1));
            }
        }
    }
    out.sort();
    out
}

fn form_terms_json(chart: &Chart, get: impl Fn(&[usize]) -> Scalar, degree: usize) -> Value {
    let mut out = Vec::new();
    for idx in ascending_tuples(chart.dim(), degree) {
        let c = get(&idx);
        if !c.is_zero() {
            out.push(json!({ "idx": idx, "coeff": c.to_string() }));
        }
    }
    Value::Array(out)
}

// ---- commands -----------------------------------------------------------

fn verify_axioms(scene: &Scene) -> Result<Report, RunError> {
    let b = &scene.backend;
    b.verify_axioms(&b.default_samples(), &b.default_funcs())
        .map_err(|e| RunError::Construction(e.to_string()))
}

/// Complex-structure certification for a single endomorphism: square,
/// orthogonality, and vanishing of N(F,F) on the default sample set.
fn complex_checks(report: &mut Report, f: &Endo, label: &str) {
    report.check(format!("{label}.square"), f.squares_to_minus_one(), || {
        matrix_json(&f.compose(f).matrix().clone())
    });
    report.check(format!("{label}.orthogonal"), f.is_orthogonal(), || {
        match f.orthogonality_defect() {
            Some((a, b, s)) => json!({ "slot": [a, b], "defect": s.to_string() }),
            None => Value::Null,
        }
    });
    let samples = f.backend().default_samples();
    let mut witness = None;
    'outer: for u in &samples {
        for v in &samples {
            match endo::nijenhuis(f, f, u, v) {
                Ok(n) => {
                    if !n.coeffs().iter().all(|c| c.is_zero()) {
                        witness = Some(section_json(&n));
                        break 'outer;
                    }
                }
                Err(e) => {
                    witness = Some(json!(e.to_string()));
                    break 'outer;
                }
            }
        }
    }
    match witness {
        None => report.pass(format!("{label}.nijenhuis")),
        Some(w) => report.fail(format!("{label}.nijenhuis"), w),
    }
}

fn check_complex(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let f = get_endo(scene, arg(args, 0, "endomorphism")?)?;
    let mut report = Report::new();
    complex_checks(&mut report, f, "complex");
    Ok(report)
}

fn check_hypercomplex(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let t = triple_from_args(scene, args)?;
    let quaternionic = t.quaternionic_check();
    if !quaternionic.all_passed() {
        return Ok(quaternionic);
    }
    let mut report = quaternionic;
    let six = endo::hypercomplex_check(&t).map_err(|e| RunError::Construction(e.to_string()))?;
    report.merge("nijenhuis", six);
    Ok(report)
}

fn nijenhuis_cmd(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let f = get_endo(scene, arg(args, 0, "endomorphism F")?)?;
    let g = get_endo(scene, arg(args, 1, "endomorphism G")?)?;
    let b = f.backend();
    let mut report = Report::new();
    for a in 0..b.rank() {
        for c in 0..b.rank() {
            let n = endo::nijenhuis(f, g, &b.frame_section(a), &b.frame_section(c))
                .map_err(|e| RunError::Construction(e.to_string()))?;
            report.push(format!("n[{a}][{c}]"), Status::Pass, Some(section_json(&n)));
        }
    }
    Ok(report)
}

fn poisson_of_cmd(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let f = get_endo(scene, arg(args, 0, "endomorphism")?)?;
    let p = endo::poisson_of(f).map_err(|e| RunError::Construction(e.to_string()))?;
    let ch = f
        .backend()
        .chart()
        .ok_or_else(|| RunError::Construction("poisson-of needs a chart backend".into()))?
        .clone();
    let mut report = Report::new();
    report.push("poisson", Status::Pass, Some(form_terms_json(&ch, |idx| p.get(idx), 2)));
    Ok(report)
}

fn connection_from_args(scene: &Scene, args: &[String]) -> Result<HXConnection, RunError> {
    let t = triple_from_args(scene, args)?;
    match HXConnection::new(t.clone()) {
        Ok(conn) => Ok(conn),
        // fall back to the almost-hypercomplex connection, whose torsion
        // carries the concomitant correction term
        Err(_) => HXConnection::new_almost(t).map_err(|e| RunError::Construction(e.to_string())),
    }
}

fn connection_cmd(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let conn = connection_from_args(scene, args)?;
    let mut report = conn.parallelism_report();
    report.check("integrable", conn.is_integrable(), || Value::Null);
    Ok(report)
}

fn torsion_cmd(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let conn = connection_from_args(scene, args)?;
    let b = conn.backend().clone();
    let mut report = Report::new();
    for a in 0..b.rank() {
        for c in 0..b.rank() {
            let (lhs, rhs) = conn
                .torsion_general(&b.frame_section(a), &b.frame_section(c))
                .map_err(|e| RunError::Construction(e.to_string()))?;
            let diff = lhs.sub(&rhs);
            report.check(format!("torsion[{a}][{c}]"), diff.coeffs().iter().all(|s| s.is_zero()), || {
                section_json(&diff)
            });
        }
    }
    Ok(report)
}

fn curvature_cmd(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let conn = connection_from_args(scene, &args[..3.min(args.len())])?;
    let mut report = Report::new();
    if args.len() > 3 {
        if args.len() != 6 {
            return Err(RunError::BadArgs("curvature takes I J K and optionally three section names".into()));
        }
        let u = get_section(scene, &args[3])?;
        let v = get_section(scene, &args[4])?;
        let w = get_section(scene, &args[5])?;
        let r = conn.curvature(u, v, w).map_err(|e| RunError::Construction(e.to_string()))?;
        report.push("curvature", Status::Pass, Some(section_json(&r)));
    } else {
        let b = conn.backend().clone();
        for a in 0..b.rank() {
            for c in 0..b.rank() {
                for d in 0..b.rank() {
                    let r = conn
                        .curvature(&b.frame_section(a), &b.frame_section(c), &b.frame_section(d))
                        .map_err(|e| RunError::Construction(e.to_string()))?;
                    if !r.coeffs().iter().all(|s| s.is_zero()) {
                        report.push(format!("curvature[{a}][{c}][{d}]"), Status::Pass, Some(section_json(&r)));
                    }
                }
            }
        }
        if report.checks.is_empty() {
            report.pass("curvature_vanishes_on_frame");
        }
    }
    Ok(report)
}

fn restrict_cmd(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let conn = connection_from_args(scene, args)?;
    let frame = get_frame(scene, arg(args, 3, "frame")?)?;
    let (table, mut report) = conn.restrict_dirac(&frame).map_err(|e| RunError::Construction(e.to_string()))?;
    report.push("christoffel", Status::Pass, Some(table_json(&table)));
    Ok(report)
}

fn holosym_from_triple(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let t = triple_from_args(scene, args)?;
    let hs = HoloSymp::from_triple(&t).map_err(|e| RunError::Construction(e.to_string()))?;
    let mut report = Report::new();
    report.push("omega_sharp", Status::Pass, Some(matrix_json(hs.omega_sharp().matrix())));
    let back = hs.to_triple();
    report.check("roundtrip", *back.i.matrix() == *t.i.matrix() && *back.k.matrix() == *t.k.matrix(), || {
        json!({ "i": matrix_json(back.i.matrix()), "k": matrix_json(back.k.matrix()) })
    });
    report.merge("closedness", hs.closedness_equivalences());
    Ok(report)
}

fn holosym_check(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let mut report = Report::new();
    match holosym_from_args(scene, args)? {
        Err(msg) => report.fail("algebraic", json!(msg)),
        Ok(hs) => {
            report.pass("algebraic");
            report.merge("closedness", hs.closedness_equivalences());
        }
    }
    Ok(report)
}

fn decompose_cmd(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let hs = holosym_from_args(scene, args)?.map_err(RunError::Construction)?;
    let (dec, mut report) = hs.decompose().map_err(|e| RunError::Construction(e.to_string()))?;
    let ch = hs
        .backend()
        .chart()
        .ok_or_else(|| RunError::Construction("decompose needs a chart backend".into()))?
        .clone();
    report.push("pi", Status::Pass, Some(form_terms_json(&ch, |idx| dec.pi.get(idx), 2)));
    report.push("theta", Status::Pass, Some(matrix_json(&dec.theta)));
    report.push("omega", Status::Pass, Some(form_terms_json(&ch, |idx| dec.omega.get(idx), 2)));
    Ok(report)
}

fn sphere_cmd(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let i = get_endo(scene, "I")?;
    let j = get_endo(scene, "J")?;
    let k = get_endo(scene, "K")?;
    let t = Triple::new(i.clone(), j.clone(), k.clone());
    let l1 = rational_arg(args, 0, "lambda1")?;
    let l2 = rational_arg(args, 1, "lambda2")?;
    let l3 = rational_arg(args, 2, "lambda3")?;
    let s = endo::sphere_structure(&t, &l1, &l2, &l3).map_err(|e| RunError::Construction(e.to_string()))?;
    let mut report = Report::new();
    report.push("matrix", Status::Pass, Some(matrix_json(s.matrix())));
    complex_checks(&mut report, &s, "sphere");
    Ok(report)
}

fn deform_cmd(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let hs = holosym_from_args(scene, args)?.map_err(RunError::Construction)?;
    let a = rational_arg(args, 1, "a")?;
    let b = rational_arg(args, 2, "b")?;
    let (s, frame) = hs.deformation_family(&a, &b).map_err(|e| RunError::Construction(e.to_string()))?;
    let mut report = Report::new();
    report.push("matrix", Status::Pass, Some(matrix_json(s.matrix())));
    complex_checks(&mut report, &s, "deformed");
    report.push(
        "eigenframe",
        Status::Pass,
        Some(Value::Array(frame.sections().iter().map(section_json).collect())),
    );
    Ok(report)
}

fn hyper_poisson_cmd(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let i = get_tan(scene, arg(args, 0, "tangent endomorphism i")?)?.clone();
    let j = get_tan(scene, arg(args, 1, "tangent endomorphism j")?)?.clone();
    let k = get_tan(scene, arg(args, 2, "tangent endomorphism k")?)?.clone();
    let p1 = get_bivec(scene, arg(args, 3, "bivector pi1")?)?.clone();
    let p2 = get_bivec(scene, arg(args, 4, "bivector pi2")?)?.clone();
    let p3 = get_bivec(scene, arg(args, 5, "bivector pi3")?)?.clone();
    let hp = HyperPoisson::new(i, j, k, p1, p2, p3).map_err(|e| RunError::Construction(e.to_string()))?;
    Ok(courantlab::holosym::hyper_poisson_equivalence(&hp))
}

fn bf_connection_cmd(scene: &Scene, args: &[String]) -> Result<Report, RunError> {
    let omega = get_form(scene, arg(args, 0, "holomorphic symplectic form")?)?;
    let j = get_tan(scene, arg(args, 1, "tangent complex structure")?)?;
    let frame = get_frame(scene, arg(args, 2, "foliation frame")?)?;
    let fields: Vec<MultiVec> = frame.iter().map(|s| scene.backend.vector_part(s)).collect();
    let (table, mut report) = behrend_fantechi(omega, j, &fields).map_err(|e| RunError::Construction(e.to_string()))?;
    report.push("christoffel", Status::Pass, Some(table_json(&table)));
    Ok(report)
}

fn report_all(scene: &Scene) -> Result<Report, RunError> {
    let mut report = Report::new();
    for (k, directive) in scene.checks.iter().enumerate() {
        let sub = dispatch(&directive.command, scene, &directive.args)?;
        report.merge(&format!("{}#{k}", directive.command), sub);
    }
    Ok(report)
}

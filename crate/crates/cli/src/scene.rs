//! Scene-file ingestion: JSON with expression-string entries, validated
//! into live backend objects.

use courantlab::chartcalc::{Chart, DiffForm, MultiVec, TanEndo};
use courantlab::courant::{Backend, Section};
use courantlab::endo::Endo;
use courantlab::matrix::PolyMat;
use courantlab::scalars::{parse, GaussRat, Scalar};
use serde::Deserialize;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum SceneError {
    #[error("cannot read scene `{path}`: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error in `{path}`: {msg}")]
    Schema { path: String, msg: String },
    #[error("syntax error in `{path}` at {location}: {msg}")]
    Syntax { path: String, location: String, msg: String },
    #[error("unresolved reference in `{path}`: `{name}` at {location}")]
    UnresolvedReference { path: String, location: String, name: String },
    #[error("construction error in `{path}`: {msg}")]
    Construction { path: String, msg: String },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScene {
    schema: u32,
    #[serde(default)]
    chart: Option<Vec<String>>,
    #[serde(default)]
    point_algebra: Option<RawPointAlgebra>,
    #[serde(default)]
    twist: Option<Vec<RawTerm>>,
    #[serde(default)]
    tangent_endos: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    endos: BTreeMap<String, Vec<Vec<String>>>,
    #[serde(default)]
    forms: BTreeMap<String, Vec<RawTerm>>,
    #[serde(default)]
    bivectors: BTreeMap<String, Vec<RawTerm>>,
    #[serde(default)]
    sections: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    frames: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    omegas: BTreeMap<String, RawOmega>,
    #[serde(default)]
    checks: Vec<CheckDirective>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawTerm {
    idx: Vec<usize>,
    coeff: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPointAlgebra {
    bracket: Vec<Vec<Vec<String>>>,
    pairing: Vec<Vec<String>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawOmega {
    pub j: String,
    pub sharp: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CheckDirective {
    pub command: String,
    #[serde(default)]
    pub args: Vec<String>,
}

/// A fully resolved scene: every expression parsed, every reference
/// checked, the backend constructed (twist verified closed).
pub struct Scene {
    pub backend: Backend,
    pub tangent_endos: BTreeMap<String, TanEndo>,
    pub endos: BTreeMap<String, Endo>,
    pub forms: BTreeMap<String, DiffForm>,
    pub bivectors: BTreeMap<String, MultiVec>,
    pub sections: BTreeMap<String, Section>,
    pub frames: BTreeMap<String, Vec<String>>,
    pub omegas: BTreeMap<String, RawOmega>,
    pub checks: Vec<CheckDirective>,
}

pub fn load_scene(path: &str, content: &str) -> Result<Scene, SceneError> {
    let raw: RawScene = serde_json::from_str(content).map_err(|e| SceneError::Schema {
        path: path.to_string(),
        msg: e.to_string(),
    })?;
    if raw.schema != 1 {
        return Err(SceneError::Schema {
            path: path.to_string(),
            msg: format!("unsupported schema version {}", raw.schema),
        });
    }

    let syntax = |location: String, e: courantlab::scalars::ScalarError| match e {
        courantlab::scalars::ScalarError::UnknownIdentifier(name) => SceneError::UnresolvedReference {
            path: path.to_string(),
            location,
            name,
        },
        other => SceneError::Syntax {
            path: path.to_string(),
            location,
            msg: other.to_string(),
        },
    };

    // backend
    let backend = match (&raw.chart, &raw.point_algebra) {
        (Some(coords), None) => {
            let names: Vec<&str> = coords.iter().map(|s| s.as_str()).collect();
            let ch = Chart::new(&names);
            match &raw.twist {
                None => Backend::standard(&ch),
                Some(terms) => {
                    let phi = form_from_terms(&ch, terms, "twist", path)?;
                    Backend::twisted(&ch, phi).map_err(|e| SceneError::Construction {
                        path: path.to_string(),
                        msg: e.to_string(),
                    })?
                }
            }
        }
        (None, Some(pa)) => {
            if raw.twist.is_some() {
                return Err(SceneError::Schema {
                    path: path.to_string(),
                    msg: "point_algebra scenes cannot declare a twist".into(),
                });
            }
            let vars = courantlab::scalars::vars(&[]);
            let constant = |s: &str, location: String| -> Result<GaussRat, SceneError> {
                let v = parse(s, vars.clone()).map_err(|e| syntax(location.clone(), e))?;
                v.as_constant().ok_or_else(|| SceneError::Syntax {
                    path: path.to_string(),
                    location,
                    msg: "expected a constant".into(),
                })
            };
            let mut bracket = Vec::new();
            for (a, plane) in pa.bracket.iter().enumerate() {
                let mut rows = Vec::new();
                for (b, row) in plane.iter().enumerate() {
                    let mut out = Vec::new();
                    for (c, s) in row.iter().enumerate() {
                        out.push(constant(s, format!("point_algebra.bracket[{a}][{b}][{c}]"))?);
                    }
                    rows.push(out);
                }
                bracket.push(rows);
            }
            let mut pairing = Vec::new();
            for (a, row) in pa.pairing.iter().enumerate() {
                let mut out = Vec::new();
                for (b, s) in row.iter().enumerate() {
                    out.push(constant(s, format!("point_algebra.pairing[{a}][{b}]"))?);
                }
                pairing.push(out);
            }
            Backend::point(bracket, pairing).map_err(|e| SceneError::Construction {
                path: path.to_string(),
                msg: e.to_string(),
            })?
        }
        _ => {
            return Err(SceneError::Schema {
                path: path.to_string(),
                msg: "exactly one of `chart` or `point_algebra` is required".into(),
            })
        }
    };
    let vars = backend.vars();

    // global name uniqueness across every namespace
    let mut seen = BTreeSet::new();
    for name in raw
        .tangent_endos
        .keys()
        .chain(raw.endos.keys())
        .chain(raw.forms.keys())
        .chain(raw.bivectors.keys())
        .chain(raw.sections.keys())
        .chain(raw.frames.keys())
        .chain(raw.omegas.keys())
    {
        if !seen.insert(name.clone()) {
            return Err(SceneError::Schema {
                path: path.to_string(),
                msg: format!("duplicate name `{name}`"),
            });
        }
    }

    let parse_matrix = |entries: &Vec<Vec<String>>, expect: usize, location: &str| -> Result<PolyMat, SceneError> {
        if entries.len() != expect || entries.iter().any(|r| r.len() != expect) {
            return Err(SceneError::Schema {
                path: path.to_string(),
                msg: format!("{location}: expected a {expect}x{expect} matrix"),
            });
        }
        let mut rows = Vec::with_capacity(expect);
        for (r, row) in entries.iter().enumerate() {
            let mut out: Vec<Scalar> = Vec::with_capacity(expect);
            for (c, s) in row.iter().enumerate() {
                out.push(parse(s, vars.clone()).map_err(|e| syntax(format!("{location}[{r}][{c}]"), e))?);
            }
            rows.push(out);
        }
        Ok(PolyMat::from_rows(vars.clone(), rows))
    };

    let mut tangent_endos = BTreeMap::new();
    for (name, entries) in &raw.tangent_endos {
        let ch = backend.chart().ok_or_else(|| SceneError::Schema {
            path: path.to_string(),
            msg: format!("tangent_endos.{name}: point_algebra scenes have no tangent bundle"),
        })?;
        let m = parse_matrix(entries, ch.dim(), &format!("tangent_endos.{name}"))?;
        tangent_endos.insert(name.clone(), TanEndo::new(ch, m));
    }

    let mut endos = BTreeMap::new();
    for (name, entries) in &raw.endos {
        let m = parse_matrix(entries, backend.rank(), &format!("endos.{name}"))?;
        endos.insert(name.clone(), Endo::new(&backend, m));
    }

    let mut forms = BTreeMap::new();
    for (name, terms) in &raw.forms {
        let ch = backend.chart().ok_or_else(|| SceneError::Schema {
            path: path.to_string(),
            msg: format!("forms.{name}: point_algebra scenes have no differential forms"),
        })?;
        forms.insert(name.clone(), form_from_terms(ch, terms, &format!("forms.{name}"), path)?);
    }

    let mut bivectors = BTreeMap::new();
    for (name, terms) in &raw.bivectors {
        let ch = backend.chart().ok_or_else(|| SceneError::Schema {
            path: path.to_string(),
            msg: format!("bivectors.{name}: point_algebra scenes have no multivector fields"),
        })?;
        let mut out = MultiVec::zero(ch, 2);
        for (k, t) in terms.iter().enumerate() {
            let location = format!("bivectors.{name}[{k}]");
            if t.idx.len() != 2 || t.idx.iter().any(|&a| a >= ch.dim()) {
                return Err(SceneError::Schema {
                    path: path.to_string(),
                    msg: format!("{location}: bad index tuple {:?}", t.idx),
                });
            }
            let c = parse(&t.coeff, vars.clone()).map_err(|e| syntax(location, e))?;
            out = out.add(&MultiVec::term(ch, &t.idx, c));
        }
        bivectors.insert(name.clone(), out);
    }

    let mut sections = BTreeMap::new();
    for (name, coeffs) in &raw.sections {
        if coeffs.len() != backend.rank() {
            return Err(SceneError::Schema {
                path: path.to_string(),
                msg: format!("sections.{name}: expected {} coefficients", backend.rank()),
            });
        }
        let mut out = Vec::with_capacity(coeffs.len());
        for (k, s) in coeffs.iter().enumerate() {
            out.push(parse(s, vars.clone()).map_err(|e| syntax(format!("sections.{name}[{k}]"), e))?);
        }
        sections.insert(name.clone(), Section::from_coeffs(out));
    }

    for (name, members) in &raw.frames {
        for member in members {
            if !sections.contains_key(member) {
                return Err(SceneError::UnresolvedReference {
                    path: path.to_string(),
                    location: format!("frames.{name}"),
                    name: member.clone(),
                });
            }
        }
    }
    for (name, om) in &raw.omegas {
        for (field, target) in [("j", &om.j), ("sharp", &om.sharp)] {
            if !endos.contains_key(target) {
                return Err(SceneError::UnresolvedReference {
                    path: path.to_string(),
                    location: format!("omegas.{name}.{field}"),
                    name: target.clone(),
                });
            }
        }
    }

    Ok(Scene {
        backend,
        tangent_endos,
        endos,
        forms,
        bivectors,
        sections,
        frames: raw.frames,
        omegas: raw.omegas,
        checks: raw.checks,
    })
}

fn form_from_terms(ch: &Chart, terms: &[RawTerm], location: &str, path: &str) -> Result<DiffForm, SceneError> {
    let degree = terms.first().map(|t| t.idx.len()).unwrap_or(2);
    let mut out = DiffForm::zero(ch, degree);
    for (k, t) in terms.iter().enumerate() {
        let loc = format!("{location}[{k}]");
        if t.idx.len() != degree || t.idx.iter().any(|&a| a >= ch.dim()) {
            return Err(SceneError::Schema {
                path: path.to_string(),
                msg: format!("{loc}: bad index tuple {:?}", t.idx),
            });
        }
        let c = parse(&t.coeff, ch.vars()).map_err(|e| match e {
            courantlab::scalars::ScalarError::UnknownIdentifier(name) => SceneError::UnresolvedReference {
                path: path.to_string(),
                location: loc.clone(),
                name,
            },
            other => SceneError::Syntax {
                path: path.to_string(),
                location: loc.clone(),
                msg: other.to_string(),
            },
        })?;
        out = out.add(&DiffForm::term(ch, &t.idx, c));
    }
    Ok(out)
}

//! Input documents, command execution, and deterministic run reports.
//!
//! Documents are JSON with every number written as an exact rational
//! string. Parsing collects all validation problems rather than stopping
//! at the first one; commands attach their results to a report whose
//! digest covers everything except the timing field.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::chambers::{
    self, BoundarySpace, ChamberInput, FamilyDescriptor, SurfaceInput, SurfaceMode,
};
use crate::gallery;
use crate::mmp::{self, AbstractCurve, AbstractModel, ModelGraph, ModelNode};
use crate::polyhedra::{
    convex_hull, vector_to_json, vectors_to_json, Cone, Polytope,
};
use crate::ratlin::{format_rational, parse_rational, QMatrix, QVector, Rational, SolveOutcome};
use crate::surface::{self, CurveRecord, DivisorClass, PairFlag, SurfaceData};
use crate::{Error, Issue, Result};

#[derive(Clone, Debug)]
pub enum DocPayload {
    Surface {
        surface: SurfaceData,
        scaling: QVector,
        ample: QVector,
        space: Option<BoundarySpace>,
        scaling_mode_label: Option<String>,
        model_names: BTreeMap<String, String>,
    },
    Abstract {
        graph: ModelGraph,
        space: Option<BoundarySpace>,
    },
    Family(FamilyDescriptor),
}

#[derive(Clone, Debug)]
pub struct InputDocument {
    pub name: String,
    pub payload: DocPayload,
}

struct Collector {
    issues: Vec<Issue>,
}

impl Collector {
    fn new() -> Self {
        Self { issues: Vec::new() }
    }

    fn push(&mut self, path: impl Into<String>, message: impl Into<String>) {
        self.issues.push(Issue {
            path: path.into(),
            message: message.into(),
        });
    }

    fn str_field(&mut self, v: &Value, path: &str) -> Option<String> {
        match v.pointer(path) {
            Some(Value::String(s)) => Some(s.clone()),
            Some(_) => {
                self.push(path, "expected a string");
                None
            }
            None => {
                self.push(path, "missing field");
                None
            }
        }
    }

    fn rational_field(&mut self, v: &Value, path: &str) -> Option<Rational> {
        let s = self.str_field(v, path)?;
        match parse_rational(&s) {
            Ok(r) => Some(r),
            Err(e) => {
                self.push(path, e);
                None
            }
        }
    }

    fn vector_field(&mut self, v: &Value, path: &str, dim: usize) -> Option<QVector> {
        let Some(arr) = v.pointer(path).and_then(Value::as_array) else {
            self.push(path, "missing or non-array vector");
            return None;
        };
        if arr.len() != dim {
            self.push(path, format!("expected {} entries, found {}", dim, arr.len()));
            return None;
        }
        let mut entries = Vec::with_capacity(dim);
        for (i, e) in arr.iter().enumerate() {
            let Some(s) = e.as_str() else {
                self.push(format!("{path}/{i}"), "rationals serialize as strings");
                return None;
            };
            match parse_rational(s) {
                Ok(r) => entries.push(r),
                Err(msg) => {
                    self.push(format!("{path}/{i}"), msg);
                    return None;
                }
            }
        }
        Some(QVector::new(entries))
    }

    fn matrix_field(&mut self, v: &Value, path: &str, cols: usize) -> Option<QMatrix> {
        let Some(rows) = v.pointer(path).and_then(Value::as_array) else {
            self.push(path, "missing or non-array matrix");
            return None;
        };
        let mut data = Vec::new();
        for (i, row) in rows.iter().enumerate() {
            let r = self.vector_field(&json!({ "row": row }), "/row", cols)?;
            data.extend(r.entries().iter().cloned());
            let _ = i;
        }
        Some(QMatrix::new(rows.len(), cols, data))
    }

    fn cone_field(&mut self, v: &Value, path: &str, dim: usize) -> Option<Cone> {
        let Some(obj) = v.pointer(path) else {
            self.push(path, "missing cone");
            return None;
        };
        match Cone::from_json(dim, obj) {
            Ok(c) => Some(c),
            Err(e) => {
                self.push(path, e);
                None
            }
        }
    }
}

/// Parses and validates a document, reporting every problem found.
pub fn parse_document(text: &str) -> Result<InputDocument> {
    let value: Value = serde_json::from_str(text).map_err(|e| {
        Error::Validation(vec![Issue {
            path: "/".to_string(),
            message: format!("malformed JSON: {e}"),
        }])
    })?;
    let mut c = Collector::new();
    let name = c.str_field(&value, "/name").unwrap_or_default();
    let kind = c.str_field(&value, "/kind").unwrap_or_default();
    let payload = match kind.as_str() {
        "surface" => parse_surface(&mut c, &value),
        "abstract" => parse_abstract(&mut c, &value),
        "infinite-family" => parse_family(&mut c, &value),
        other => {
            c.push("/kind", format!("unknown kind '{other}'"));
            None
        }
    };
    match payload {
        Some(payload) if c.issues.is_empty() => Ok(InputDocument { name, payload }),
        _ => Err(Error::Validation(c.issues)),
    }
}

fn parse_boundary_space(c: &mut Collector, value: &Value, r: usize) -> Option<BoundarySpace> {
    value.pointer("/boundary_space")?;
    let Some(arr) = value
        .pointer("/boundary_space/vertices")
        .and_then(Value::as_array)
    else {
        c.push("/boundary_space/vertices", "missing vertex list");
        return None;
    };
    let mut pts = Vec::new();
    for (i, _) in arr.iter().enumerate() {
        pts.push(c.vector_field(value, &format!("/boundary_space/vertices/{i}"), r)?);
    }
    if pts.is_empty() {
        c.push("/boundary_space/vertices", "empty polytope");
        return None;
    }
    let rational_flag = value
        .pointer("/boundary_space/rational")
        .and_then(Value::as_bool)
        .unwrap_or(true);
    Some(BoundarySpace {
        ambient: convex_hull(&pts),
        rational_flag,
    })
}

fn parse_surface(c: &mut Collector, value: &Value) -> Option<DocPayload> {
    let basis = value
        .pointer("/surface/basis")
        .and_then(Value::as_array)
        .map(|a| {
            a.iter()
                .filter_map(|s| s.as_str().map(str::to_string))
                .collect::<Vec<_>>()
        });
    let Some(basis_names) = basis else {
        c.push("/surface/basis", "missing basis name list");
        return None;
    };
    let rho = basis_names.len();
    if rho == 0 {
        c.push("/surface/basis", "basis must be non-empty");
        return None;
    }

    let mut curves = Vec::new();
    if let Some(arr) = value.pointer("/surface/curves").and_then(Value::as_array) {
        for (i, cv) in arr.iter().enumerate() {
            let base = format!("/surface/curves/{i}");
            let name = c.str_field(value, &format!("{base}/name")).unwrap_or_default();
            let curve_class = c.vector_field(value, &format!("{base}/curve_class"), rho);
            let divisor_class = if cv.get("divisor_class").is_some() {
                c.vector_field(value, &format!("{base}/divisor_class"), rho)
            } else {
                None
            };
            let self_intersection = c
                .rational_field(value, &format!("{base}/self_intersection"))
                .unwrap_or_else(|| Rational::from_integer(0.into()));
            if let Some(curve_class) = curve_class {
                curves.push(CurveRecord {
                    name,
                    curve_class,
                    divisor_class,
                    self_intersection,
                });
            }
        }
    } else {
        c.push("/surface/curves", "missing curve list");
    }

    let canonical_class = c.vector_field(value, "/surface/canonical_class", rho);
    let mut boundary_generators = Vec::new();
    if let Some(arr) = value
        .pointer("/surface/boundary_generators")
        .and_then(Value::as_array)
    {
        for (i, _) in arr.iter().enumerate() {
            let base = format!("/surface/boundary_generators/{i}");
            let name = c.str_field(value, &format!("{base}/name")).unwrap_or_default();
            if let Some(class) = c.vector_field(value, &format!("{base}/class"), rho) {
                boundary_generators.push((name, class));
            }
        }
    } else {
        c.push("/surface/boundary_generators", "missing boundary generators");
    }
    let psef_cone = c.cone_field(value, "/surface/psef_cone", rho);
    let scaling = c.vector_field(value, "/surface/scaling_class", rho);
    let ample = if value.pointer("/surface/ample_class").is_some() {
        c.vector_field(value, "/surface/ample_class", rho)
    } else {
        scaling.clone()
    };
    let nef_check_complete = value
        .pointer("/surface/flags/nef_check_complete")
        .and_then(Value::as_bool)
        .unwrap_or(false);
    let pair_flag = match value
        .pointer("/surface/flags/pair")
        .and_then(Value::as_str)
        .unwrap_or("KLT")
    {
        "KLT" => PairFlag::Klt,
        "LC" => PairFlag::Lc,
        other => {
            c.push("/surface/flags/pair", format!("unknown pair flag '{other}'"));
            PairFlag::Klt
        }
    };
    let base_name = value
        .pointer("/surface/base")
        .and_then(Value::as_str)
        .unwrap_or("S")
        .to_string();

    let (Some(canonical_class), Some(psef_cone), Some(scaling), Some(ample)) =
        (canonical_class, psef_cone, scaling, ample)
    else {
        return None;
    };
    let surface = SurfaceData {
        rho,
        basis_names,
        curves,
        canonical_class,
        boundary_generators,
        psef_cone,
        nef_check_complete,
        pair_flag,
        base_name,
    };
    if let Err(problems) = surface.validate() {
        for p in problems {
            c.push("/surface", p);
        }
    }
    match surface::is_ample(&surface, &DivisorClass(scaling.clone())) {
        Ok(true) => {}
        Ok(false) => c.push("/surface/scaling_class", "declared scaling class is not ample"),
        Err(_) => {}
    }
    match surface::is_ample(&surface, &DivisorClass(ample.clone())) {
        Ok(true) => {}
        Ok(false) => c.push("/surface/ample_class", "declared ample class is not ample"),
        Err(_) => {}
    }
    let space = parse_boundary_space(c, value, surface.boundary_generators.len());
    let scaling_mode_label = value
        .pointer("/surface/scaling_mode_label")
        .and_then(Value::as_str)
        .map(str::to_string);
    let model_names = value
        .pointer("/surface/model_names")
        .and_then(Value::as_object)
        .map(|m| {
            m.iter()
                .filter_map(|(k, v)| v.as_str().map(|s| (k.clone(), s.to_string())))
                .collect()
        })
        .unwrap_or_default();
    Some(DocPayload::Surface {
        surface,
        scaling,
        ample,
        space,
        scaling_mode_label,
        model_names,
    })
}

fn parse_abstract(c: &mut Collector, value: &Value) -> Option<DocPayload> {
    let dim = value
        .pointer("/abstract/reference_dim")
        .and_then(Value::as_u64)
        .map(|d| d as usize);
    let Some(dim) = dim else {
        c.push("/abstract/reference_dim", "missing reference dimension");
        return None;
    };
    let canonical_class = c.vector_field(value, "/abstract/canonical_class", dim)?;
    let mut boundary_generators = Vec::new();
    if let Some(arr) = value
        .pointer("/abstract/boundary_generators")
        .and_then(Value::as_array)
    {
        for (i, _) in arr.iter().enumerate() {
            let base = format!("/abstract/boundary_generators/{i}");
            let name = c.str_field(value, &format!("{base}/name")).unwrap_or_default();
            if let Some(class) = c.vector_field(value, &format!("{base}/class"), dim) {
                boundary_generators.push((name, class));
            }
        }
    }
    let psef_cone = c.cone_field(value, "/abstract/psef_cone", dim)?;
    let mut models = Vec::new();
    if let Some(arr) = value.pointer("/abstract/models").and_then(Value::as_array) {
        for (i, _) in arr.iter().enumerate() {
            let base = format!("/abstract/models/{i}");
            let id = c.str_field(value, &format!("{base}/id")).unwrap_or_default();
            let Some(nef_cone) = c.cone_field(value, &format!("{base}/nef_cone"), dim) else {
                continue;
            };
            let Some(pullback) = c.matrix_field(value, &format!("{base}/pullback"), dim) else {
                continue;
            };
            if pullback.rows() != dim {
                c.push(format!("{base}/pullback"), "pullback must be square here");
                continue;
            }
            let Some(inverse) = invert(&pullback) else {
                c.push(format!("{base}/pullback"), "pullback is not invertible");
                continue;
            };
            let mut curves = Vec::new();
            if let Some(carr) = value
                .pointer(&format!("{base}/curves"))
                .and_then(Value::as_array)
            {
                for (j, cv) in carr.iter().enumerate() {
                    let cb = format!("{base}/curves/{j}");
                    let cname = c.str_field(value, &format!("{cb}/name")).unwrap_or_default();
                    let class_model = c.vector_field(value, &format!("{cb}/class_model"), dim);
                    let class_reference =
                        c.vector_field(value, &format!("{cb}/class_reference"), dim);
                    let birational = cv
                        .get("birational")
                        .and_then(Value::as_bool)
                        .unwrap_or(true);
                    let canonical_label = cv
                        .get("canonical_label")
                        .and_then(Value::as_str)
                        .map(str::to_string);
                    if let (Some(cm), Some(cr)) = (class_model, class_reference) {
                        curves.push(AbstractCurve {
                            name: cname,
                            class_model: cm,
                            class_reference: cr,
                            birational,
                            canonical_label,
                        });
                    }
                }
            }
            models.push(AbstractModel {
                id,
                dim,
                nef_cone,
                pullback,
                pullback_inverse: inverse,
                curves,
                canonical_class_ref: canonical_class.clone(),
            });
        }
    } else {
        c.push("/abstract/models", "missing model list");
    }
    let mut adjacency = Vec::new();
    if let Some(arr) = value.pointer("/abstract/adjacency").and_then(Value::as_array) {
        for (i, e) in arr.iter().enumerate() {
            let Some(triple) = e.as_array().filter(|t| t.len() == 3) else {
                c.push(format!("/abstract/adjacency/{i}"), "expected [from, to, wall]");
                continue;
            };
            let parts: Vec<String> = triple
                .iter()
                .filter_map(|s| s.as_str().map(str::to_string))
                .collect();
            if parts.len() == 3 {
                for id in &parts[..2] {
                    if !models.iter().any(|m| &m.id == id) {
                        c.push(
                            format!("/abstract/adjacency/{i}"),
                            format!("dangling model id '{id}'"),
                        );
                    }
                }
                adjacency.push((parts[0].clone(), parts[1].clone(), parts[2].clone()));
            }
        }
    }
    let base_name = value
        .pointer("/abstract/base")
        .and_then(Value::as_str)
        .unwrap_or("S")
        .to_string();
    let graph = ModelGraph {
        reference_dim: dim,
        canonical_class,
        boundary_generators,
        psef_cone,
        models,
        adjacency,
        base_name,
    };
    let space = parse_boundary_space(c, value, graph.boundary_generators.len());
    Some(DocPayload::Abstract { graph, space })
}

fn parse_family(c: &mut Collector, value: &Value) -> Option<DocPayload> {
    let dim = value
        .pointer("/family/dim")
        .and_then(Value::as_u64)
        .map(|d| d as usize);
    let Some(dim) = dim else {
        c.push("/family/dim", "missing dimension");
        return None;
    };
    let mut ray_coeffs = Vec::new();
    if let Some(arr) = value.pointer("/family/ray_coeffs").and_then(Value::as_array) {
        for (i, _) in arr.iter().enumerate() {
            if let Some(v) = c.vector_field(value, &format!("/family/ray_coeffs/{i}"), dim) {
                ray_coeffs.push(v);
            }
        }
    } else {
        c.push("/family/ray_coeffs", "missing coefficient list");
    }
    let mut accumulation_rays = Vec::new();
    if let Some(arr) = value
        .pointer("/family/accumulation_rays")
        .and_then(Value::as_array)
    {
        for (i, _) in arr.iter().enumerate() {
            if let Some(v) = c.vector_field(value, &format!("/family/accumulation_rays/{i}"), dim) {
                accumulation_rays.push(v);
            }
        }
    }
    let psef_cone = c.cone_field(value, "/family/psef_cone", dim)?;
    let projection = if value.pointer("/family/projection").is_some() {
        c.matrix_field(value, "/family/projection", dim)
    } else {
        None
    };
    let apex = if value.pointer("/family/apex").is_some() {
        c.vector_field(value, "/family/apex", dim)
    } else {
        None
    };
    let note = value
        .pointer("/family/note")
        .and_then(Value::as_str)
        .map(str::to_string);
    Some(DocPayload::Family(FamilyDescriptor {
        dim,
        ray_coeffs,
        accumulation_rays,
        psef_cone,
        projection,
        apex,
        effectivity_note: note,
    }))
}

fn invert(m: &QMatrix) -> Option<QMatrix> {
    let n = m.rows();
    let mut cols = Vec::new();
    for i in 0..n {
        match m.solve_linear(&QVector::unit(n, i)).ok()? {
            SolveOutcome::Unique(x) => cols.push(x),
            SolveOutcome::Singular { .. } => return None,
        }
    }
    Some(QMatrix::from_cols(&cols))
}

// --- document export -------------------------------------------------------

fn surface_to_json(
    surface: &SurfaceData,
    scaling: &QVector,
    ample: &QVector,
    space: Option<&BoundarySpace>,
    scaling_mode_label: Option<&str>,
    model_names: &BTreeMap<String, String>,
) -> Value {
    let curves: Vec<Value> = surface
        .curves
        .iter()
        .map(|c| {
            let mut o = Map::new();
            o.insert("name".into(), json!(c.name));
            o.insert("curve_class".into(), vector_to_json(&c.curve_class));
            if let Some(d) = &c.divisor_class {
                o.insert("divisor_class".into(), vector_to_json(d));
            }
            o.insert(
                "self_intersection".into(),
                json!(format_rational(&c.self_intersection)),
            );
            Value::Object(o)
        })
        .collect();
    let mut doc = json!({
        "surface": {
            "basis": surface.basis_names,
            "curves": curves,
            "canonical_class": vector_to_json(&surface.canonical_class),
            "boundary_generators": surface
                .boundary_generators
                .iter()
                .map(|(n, g)| json!({"name": n, "class": vector_to_json(g)}))
                .collect::<Vec<_>>(),
            "psef_cone": {
                "generators": vectors_to_json(
                    &surface.psef_cone.raw_generators().map(<[QVector]>::to_vec)
                        .unwrap_or_else(|| surface.psef_cone.generators())
                ),
            },
            "scaling_class": vector_to_json(scaling),
            "ample_class": vector_to_json(ample),
            "base": surface.base_name,
            "flags": {
                "nef_check_complete": surface.nef_check_complete,
                "pair": surface.pair_flag.as_str(),
            },
        },
    });
    if let Some(label) = scaling_mode_label {
        doc["surface"]["scaling_mode_label"] = json!(label);
    }
    if !model_names.is_empty() {
        doc["surface"]["model_names"] = json!(model_names);
    }
    if let Some(space) = space {
        doc["boundary_space"] = json!({
            "vertices": vectors_to_json(space.ambient.vertices()),
            "rational": space.rational_flag,
        });
    }
    doc
}

fn matrix_to_json(m: &QMatrix) -> Value {
    Value::Array((0..m.rows()).map(|r| vector_to_json(&m.row_vec(r))).collect())
}

fn graph_to_json(graph: &ModelGraph, space: Option<&BoundarySpace>) -> Value {
    let models: Vec<Value> = graph
        .models
        .iter()
        .map(|m| {
            json!({
                "id": m.id,
                "nef_cone": {"generators": vectors_to_json(
                    &m.nef_cone.raw_generators().map(<[QVector]>::to_vec)
                        .unwrap_or_else(|| m.nef_cone.generators()))},
                "pullback": matrix_to_json(&m.pullback),
                "curves": m.curves.iter().map(|c| {
                    let mut o = Map::new();
                    o.insert("name".into(), json!(c.name));
                    o.insert("class_model".into(), vector_to_json(&c.class_model));
                    o.insert("class_reference".into(), vector_to_json(&c.class_reference));
                    o.insert("birational".into(), json!(c.birational));
                    if let Some(l) = &c.canonical_label {
                        o.insert("canonical_label".into(), json!(l));
                    }
                    Value::Object(o)
                }).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut doc = json!({
        "abstract": {
            "reference_dim": graph.reference_dim,
            "canonical_class": vector_to_json(&graph.canonical_class),
            "boundary_generators": graph
                .boundary_generators
                .iter()
                .map(|(n, g)| json!({"name": n, "class": vector_to_json(g)}))
                .collect::<Vec<_>>(),
            "psef_cone": {"generators": vectors_to_json(
                &graph.psef_cone.raw_generators().map(<[QVector]>::to_vec)
                    .unwrap_or_else(|| graph.psef_cone.generators()))},
            "models": models,
            "adjacency": graph
                .adjacency
                .iter()
                .map(|(a, b, w)| json!([a, b, w]))
                .collect::<Vec<_>>(),
            "base": graph.base_name,
        },
    });
    if let Some(space) = space {
        doc["boundary_space"] = json!({
            "vertices": vectors_to_json(space.ambient.vertices()),
            "rational": space.rational_flag,
        });
    }
    doc
}

fn family_to_json(f: &FamilyDescriptor) -> Value {
    let mut fam = json!({
        "dim": f.dim,
        "ray_coeffs": vectors_to_json(&f.ray_coeffs),
        "accumulation_rays": vectors_to_json(&f.accumulation_rays),
        "psef_cone": {"generators": vectors_to_json(&f.psef_cone.generators())},
    });
    if let Some(p) = &f.projection {
        fam["projection"] = matrix_to_json(p);
    }
    if let Some(a) = &f.apex {
        fam["apex"] = vector_to_json(a);
    }
    if let Some(n) = &f.effectivity_note {
        fam["note"] = json!(n);
    }
    json!({ "family": fam })
}

pub fn document_to_json(doc: &InputDocument) -> Value {
    let mut v = match &doc.payload {
        DocPayload::Surface {
            surface,
            scaling,
            ample,
            space,
            scaling_mode_label,
            model_names,
        } => {
            let mut v = surface_to_json(
                surface,
                scaling,
                ample,
                space.as_ref(),
                scaling_mode_label.as_deref(),
                model_names,
            );
            v["kind"] = json!("surface");
            v
        }
        DocPayload::Abstract { graph, space } => {
            let mut v = graph_to_json(graph, space.as_ref());
            v["kind"] = json!("abstract");
            v
        }
        DocPayload::Family(f) => {
            let mut v = family_to_json(f);
            v["kind"] = json!("infinite-family");
            v
        }
    };
    v["name"] = json!(doc.name);
    v
}

/// Exports a gallery fixture as an editable input document.
pub fn export_fixture(name: &str) -> Result<Value> {
    let doc = match name {
        "example1" => InputDocument {
            name: "example1".into(),
            payload: DocPayload::Surface {
                surface: gallery::example1_surface(),
                scaling: gallery::example1_scaling(),
                ample: gallery::example1_scaling(),
                space: Some(gallery::example1_space()),
                scaling_mode_label: Some("base S".into()),
                model_names: gallery::example1_model_names(),
            },
        },
        "example2" => InputDocument {
            name: "example2".into(),
            payload: DocPayload::Abstract {
                graph: gallery::example2_graph(),
                space: Some(gallery::example2_space()),
            },
        },
        "example3" => InputDocument {
            name: "example3".into(),
            payload: DocPayload::Family(gallery::example3_family()),
        },
        "example4" => InputDocument {
            name: "example4".into(),
            payload: DocPayload::Family(gallery::example4_family()),
        },
        "chain2" => {
            let surface = gallery::chain_surface(2, 3);
            let scaling = gallery::chain_ample_class(&surface);
            InputDocument {
                name: "chain2".into(),
                payload: DocPayload::Surface {
                    surface,
                    scaling: scaling.clone(),
                    ample: scaling,
                    space: Some(gallery::chain2_space()),
                    scaling_mode_label: None,
                    model_names: BTreeMap::new(),
                },
            }
        }
        "single-curve" => {
            let surface = gallery::single_negative_curve_surface();
            InputDocument {
                name: "single-curve".into(),
                payload: DocPayload::Surface {
                    surface,
                    scaling: QVector::from_ints(&[0, 1]),
                    ample: QVector::from_ints(&[0, 1]),
                    space: Some(BoundarySpace {
                        ambient: convex_hull(&[
                            QVector::from_ints(&[0, 0]),
                            QVector::from_ints(&[0, 2]),
                        ]),
                        rational_flag: true,
                    }),
                    scaling_mode_label: None,
                    model_names: BTreeMap::new(),
                },
            }
        }
        other => return Err(Error::UnknownName(format!("fixture '{other}'"))),
    };
    Ok(document_to_json(&doc))
}

// --- expression parsing ----------------------------------------------------

/// Parses a linear combination like `2C0+1C1`, `-C0+1/2S1` into a divisor
/// class. Names resolve against curves (divisor classes), boundary
/// generators and basis vectors, in that order.
pub fn parse_divisor_expr(surface: &SurfaceData, expr: &str) -> Result<QVector> {
    let expr: String = expr.chars().filter(|c| !c.is_whitespace()).collect();
    if expr.is_empty() {
        return Err(Error::Validation(vec![Issue {
            path: "divisor".into(),
            message: "empty expression".into(),
        }]));
    }
    let mut acc = QVector::zeros(surface.rho);
    let mut rest = expr.as_str();
    let mut sign = Rational::from_integer(1.into());
    loop {
        rest = match rest.strip_prefix('+') {
            Some(r) => r,
            None => match rest.strip_prefix('-') {
                Some(r) => {
                    sign = -sign;
                    r
                }
                None => rest,
            },
        };
        let coeff_len = rest
            .char_indices()
            .take_while(|(_, ch)| ch.is_ascii_digit() || *ch == '/')
            .map(|(i, ch)| i + ch.len_utf8())
            .last()
            .unwrap_or(0);
        let (coeff_str, tail) = rest.split_at(coeff_len);
        let name_len = tail
            .char_indices()
            .take_while(|(_, ch)| *ch != '+' && *ch != '-')
            .map(|(i, ch)| i + ch.len_utf8())
            .last()
            .unwrap_or(0);
        let (name, next) = tail.split_at(name_len);
        if name.is_empty() {
            return Err(Error::Validation(vec![Issue {
                path: "divisor".into(),
                message: format!("missing name near '{rest}'"),
            }]));
        }
        let coeff = if coeff_str.is_empty() {
            Rational::from_integer(1.into())
        } else {
            parse_rational(coeff_str).map_err(|m| {
                Error::Validation(vec![Issue {
                    path: "divisor".into(),
                    message: m,
                }])
            })?
        };
        let class = resolve_name(surface, name)?;
        acc = acc.add(&class.scale(&(&coeff * &sign)));
        sign = Rational::from_integer(1.into());
        if next.is_empty() {
            break;
        }
        rest = next;
    }
    Ok(acc)
}

fn resolve_name(surface: &SurfaceData, name: &str) -> Result<QVector> {
    if let Some(c) = surface.curve(name) {
        if let Some(d) = &c.divisor_class {
            return Ok(d.clone());
        }
    }
    if let Some(g) = surface.boundary_generator(name) {
        return Ok(g.clone());
    }
    if let Some(i) = surface.basis_names.iter().position(|b| b == name) {
        return Ok(QVector::unit(surface.rho, i));
    }
    Err(Error::UnknownName(name.to_string()))
}

fn parse_rational_arg(s: &str) -> Result<Rational> {
    parse_rational(s).map_err(|m| {
        Error::Validation(vec![Issue {
            path: "argument".into(),
            message: m,
        }])
    })
}

/// Parses `box x0 x1 y0 y1` or `point x y` into a planar polytope.
pub fn parse_region(expr: &str) -> Result<Polytope> {
    let parts: Vec<&str> = expr.split_whitespace().collect();
    match parts.as_slice() {
        ["box", x0, x1, y0, y1] => {
            let (x0, x1) = (parse_rational_arg(x0)?, parse_rational_arg(x1)?);
            let (y0, y1) = (parse_rational_arg(y0)?, parse_rational_arg(y1)?);
            Ok(convex_hull(&[
                QVector::new(vec![x0.clone(), y0.clone()]),
                QVector::new(vec![x1.clone(), y0]),
                QVector::new(vec![x0, y1.clone()]),
                QVector::new(vec![x1, y1]),
            ]))
        }
        ["point", x, y] => Ok(convex_hull(&[QVector::new(vec![
            parse_rational_arg(x)?,
            parse_rational_arg(y)?,
        ])])),
        _ => Err(Error::Validation(vec![Issue {
            path: "region".into(),
            message: "expected 'box x0 x1 y0 y1' or 'point x y'".into(),
        }])),
    }
}

fn parse_coeff_list(s: &str, expected: usize) -> Result<Vec<Rational>> {
    let coeffs: Vec<Rational> = s
        .split(',')
        .map(|p| parse_rational_arg(p.trim()))
        .collect::<Result<_>>()?;
    if coeffs.len() != expected {
        return Err(Error::Validation(vec![Issue {
            path: "coefficients".into(),
            message: format!("expected {expected} coefficients, found {}", coeffs.len()),
        }]));
    }
    Ok(coeffs)
}

fn wrong_kind(cmd: &str, needed: &str) -> Error {
    Error::Validation(vec![Issue {
        path: "/kind".into(),
        message: format!("'{cmd}' requires a {needed} document"),
    }])
}

// --- commands ---------------------------------------------------------------

pub fn cmd_zariski(doc: &InputDocument, divisor: &str) -> Result<Value> {
    let DocPayload::Surface { surface, .. } = &doc.payload else {
        return Err(wrong_kind("zariski", "surface"));
    };
    let class = parse_divisor_expr(surface, divisor)?;
    let z = surface::zariski_decompose(surface, &DivisorClass(class.clone()))?;
    Ok(json!({
        "divisor": vector_to_json(&class),
        "zariski": z.to_json(),
    }))
}

pub fn cmd_mmp(doc: &InputDocument, coeffs: &str) -> Result<Value> {
    match &doc.payload {
        DocPayload::Surface {
            surface, scaling, ..
        } => {
            let b = parse_coeff_list(coeffs, surface.boundary_generators.len())?;
            let b_class = surface.boundary_class(&b)?;
            let root = ModelNode::root_surface(surface.clone());
            let run = mmp::run_scaling_mmp(&root, &b_class, scaling)?;
            Ok(run.to_json())
        }
        DocPayload::Abstract { graph, .. } => {
            let b = parse_coeff_list(coeffs, graph.boundary_generators.len())?;
            let b_class = graph.boundary_class(&b)?;
            let minimal = graph.minimal_models_for(&b_class);
            let mut canonical = Value::Null;
            if let Some(m) = minimal.first() {
                let node = graph.node(&m.id).expect("listed model");
                canonical = mmp::canonical_model(&node, &b_class)?.to_json();
            }
            Ok(json!({
                "minimal_models": minimal.iter().map(|m| m.id.clone()).collect::<Vec<_>>(),
                "canonical": canonical,
            }))
        }
        DocPayload::Family(_) => Err(wrong_kind("mmp", "surface or abstract")),
    }
}

pub fn cmd_chambers(doc: &InputDocument) -> Result<(Value, Vec<String>)> {
    let (input, space) = chamber_input(doc)?;
    let canonical = chambers::decompose_canonical(&space, &input)?;
    let dec = chambers::decompose_minimal(&space, &input, &canonical)?;
    let mut warnings = Vec::new();
    if let Some(n) = &dec.note {
        warnings.push(n.clone());
    }
    Ok((dec.to_json(), warnings))
}

/// Assembles the chamber input borrowed from the document payload.
fn chamber_input<'a>(doc: &'a InputDocument) -> Result<(ChamberInput<'a>, BoundarySpace)> {
    match &doc.payload {
        DocPayload::Surface {
            surface,
            scaling,
            space,
            scaling_mode_label,
            model_names,
            ..
        } => {
            let space = space
                .clone()
                .ok_or_else(|| wrong_kind("chambers", "document with a boundary_space"))?;
            let mode = match scaling_mode_label {
                Some(label) => SurfaceMode::ScalingOutcomes {
                    canonical_label: label.clone(),
                },
                None => SurfaceMode::Standard,
            };
            Ok((
                ChamberInput::Surface(SurfaceInput {
                    surface,
                    scaling,
                    mode,
                    model_names,
                }),
                space,
            ))
        }
        DocPayload::Abstract { graph, space } => {
            let space = space
                .clone()
                .ok_or_else(|| wrong_kind("chambers", "document with a boundary_space"))?;
            Ok((ChamberInput::Abstract(graph), space))
        }
        DocPayload::Family(_) => Err(wrong_kind("chambers", "surface or abstract")),
    }
}

pub fn cmd_walk(doc: &InputDocument, region: &str) -> Result<Value> {
    let DocPayload::Family(family) = &doc.payload else {
        return Err(wrong_kind("walk", "infinite-family"));
    };
    let region = parse_region(region)?;
    let chambers = chambers::chambers_meeting(family, &region)?;
    Ok(json!({ "chambers": chambers }))
}

/// Assembles the deterministic run report; the digest covers everything
/// except `timing_ms`.
pub fn make_report(
    command: &str,
    arguments: &[&str],
    input_text: Option<&str>,
    result: Value,
    warnings: Vec<String>,
    timing_ms: u128,
) -> Value {
    let core = json!({
        "command": command,
        "arguments": arguments,
        "input": input_text.unwrap_or(""),
        "result": result,
        "warnings": warnings,
    });
    let mut hasher = Sha256::new();
    hasher.update(serde_json::to_string(&core).expect("serializable").as_bytes());
    let digest = format!("sha256:{:x}", hasher.finalize());
    json!({
        "command": command,
        "arguments": arguments,
        "digest": digest,
        "result": core["result"],
        "warnings": core["warnings"],
        "timing_ms": timing_ms,
    })
}

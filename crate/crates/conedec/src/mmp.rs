//! Contractions of negative curves, MMP with scaling, and minimal/canonical
//! model identification.
//!
//! Two kinds of models flow through here. Computed models start from a
//! declared surface and are rebuilt step by step: contracting a curve E
//! restricts N^1 to the orthogonal complement of its class, re-coordinates
//! everything in a kernel basis, and pushes the canonical class, boundary
//! generators and surviving curves forward. Abstract models (flop graphs)
//! carry declared nef cones and pullback maps and are never recomputed;
//! they exist so wall-crossing statements about non-surface geometry can be
//! checked against declared data.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::polyhedra::{vector_to_json, Cone, Membership, VForm};
use crate::ratlin::{format_rational, rat, rint, QMatrix, QVector, Rational};
use crate::surface::{self, DivisorClass, SurfaceData};
use crate::{Error, Result};

/// One divisorial contraction step.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub source: String,
    pub target: String,
    pub curve: String,
    /// Class of the contracted curve in the root/reference N_1.
    pub curve_reference_class: QVector,
    /// Maps source N^1 coordinates onto target coordinates (projection
    /// along the contracted class followed by the basis change).
    pub projection: QMatrix,
    /// Columns are the target basis expressed in source coordinates; this is
    /// the pullback inclusion of the orthogonal complement.
    pub basis: QMatrix,
    /// Coefficient of the contracted curve in `K+B - pullback(pushforward)`
    /// for the boundary in force when the contraction was performed.
    pub discrepancy: Rational,
}

/// Declared curve on an abstract model.
#[derive(Clone, Debug)]
pub struct AbstractCurve {
    pub name: String,
    /// Class in the model's own N_1 coordinates.
    pub class_model: QVector,
    /// The same curve seen in the reference N_1 coordinates.
    pub class_reference: QVector,
    /// Does contracting this curve stay birational?
    pub birational: bool,
    /// Display name of the shared canonical model on this wall, if declared.
    pub canonical_label: Option<String>,
}

/// A model declared by data rather than computed: nef cone, invertible
/// pullback to the reference N^1, and its curve list. Carries the reference
/// canonical class so `K+B` can be formed from boundary data alone.
#[derive(Clone, Debug)]
pub struct AbstractModel {
    pub id: String,
    pub dim: usize,
    pub nef_cone: Cone,
    pub pullback: QMatrix,
    pub pullback_inverse: QMatrix,
    pub curves: Vec<AbstractCurve>,
    pub canonical_class_ref: QVector,
}

impl AbstractModel {
    pub fn to_model_coords(&self, class_ref: &QVector) -> QVector {
        self.pullback_inverse.mul_vec(class_ref)
    }

    pub fn to_reference(&self, class_model: &QVector) -> QVector {
        self.pullback.mul_vec(class_model)
    }

    /// `K+B` in this model's coordinates from a reference boundary class.
    pub fn log_class(&self, b_ref: &QVector) -> QVector {
        self.to_model_coords(&self.canonical_class_ref.add(b_ref))
    }
}

/// A declared graph of abstract models with wall adjacencies.
#[derive(Clone, Debug)]
pub struct ModelGraph {
    pub reference_dim: usize,
    pub canonical_class: QVector,
    pub boundary_generators: Vec<(String, QVector)>,
    pub psef_cone: Cone,
    pub models: Vec<AbstractModel>,
    /// Edges `(model, model, wall curve name)`.
    pub adjacency: Vec<(String, String, String)>,
    pub base_name: String,
}

impl ModelGraph {
    pub fn model(&self, id: &str) -> Option<&AbstractModel> {
        self.models.iter().find(|m| m.id == id)
    }

    pub fn node(&self, id: &str) -> Option<ModelNode> {
        let m = self.model(id)?;
        Some(ModelNode {
            id: m.id.clone(),
            kind: ModelKind::Abstract(m.clone()),
            chain: Vec::new(),
            reference_curves: m
                .curves
                .iter()
                .map(|c| (c.name.clone(), c.class_reference.clone()))
                .collect(),
        })
    }

    pub fn boundary_class(&self, coeffs: &[Rational]) -> Result<QVector> {
        if coeffs.len() != self.boundary_generators.len() {
            return Err(Error::dimension("boundary coefficient count"));
        }
        let mut acc = QVector::zeros(self.reference_dim);
        for (c, (_, g)) in coeffs.iter().zip(&self.boundary_generators) {
            acc = acc.add(&g.scale(c));
        }
        Ok(acc)
    }

    /// Models whose declared nef cone contains `K+B` (closed membership):
    /// the declared minimal models for that boundary class.
    pub fn minimal_models_for(&self, b_ref: &QVector) -> Vec<&AbstractModel> {
        self.models
            .iter()
            .filter(|m| m.nef_cone.contains(&m.log_class(b_ref)))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub enum ModelKind {
    Surface(SurfaceData),
    Abstract(AbstractModel),
}

/// A model reached from a declared root by a chain of contractions, or
/// declared abstractly.
#[derive(Clone, Debug)]
pub struct ModelNode {
    pub id: String,
    pub kind: ModelKind,
    pub chain: Vec<Contraction>,
    /// Reference N_1 classes of the surviving curves, by name.
    pub reference_curves: Vec<(String, QVector)>,
}

impl ModelNode {
    pub fn root_surface(surface: SurfaceData) -> ModelNode {
        let reference_curves = surface
            .curves
            .iter()
            .map(|c| (c.name.clone(), c.curve_class.clone()))
            .collect();
        ModelNode {
            id: "root".to_string(),
            kind: ModelKind::Surface(surface),
            chain: Vec::new(),
            reference_curves,
        }
    }

    pub fn surface(&self) -> Option<&SurfaceData> {
        match &self.kind {
            ModelKind::Surface(s) => Some(s),
            ModelKind::Abstract(_) => None,
        }
    }

    pub fn abstract_model(&self) -> Option<&AbstractModel> {
        match &self.kind {
            ModelKind::Abstract(a) => Some(a),
            ModelKind::Surface(_) => None,
        }
    }

    /// Pushes a root/reference N^1 class into this model's coordinates.
    pub fn push_class(&self, class_root: &QVector) -> QVector {
        match &self.kind {
            ModelKind::Surface(_) => {
                let mut v = class_root.clone();
                for c in &self.chain {
                    v = c.projection.mul_vec(&v);
                }
                v
            }
            ModelKind::Abstract(a) => a.to_model_coords(class_root),
        }
    }

    /// Pulls a class in this model's coordinates back to the root/reference.
    pub fn pull_class(&self, class_model: &QVector) -> QVector {
        match &self.kind {
            ModelKind::Surface(_) => {
                let mut v = class_model.clone();
                for c in self.chain.iter().rev() {
                    v = c.basis.mul_vec(&v);
                }
                v
            }
            ModelKind::Abstract(a) => a.to_reference(class_model),
        }
    }

    pub fn contracted_curves(&self) -> BTreeSet<String> {
        self.chain.iter().map(|c| c.curve.clone()).collect()
    }

    pub fn reference_curve(&self, name: &str) -> Option<&QVector> {
        self.reference_curves
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }
}

/// Contracts a listed curve with negative self-intersection. The boundary
/// class (root coordinates) only enters through the recorded discrepancy.
pub fn contract(m: &ModelNode, curve_name: &str, b_root: &QVector) -> Result<ModelNode> {
    let surface = m
        .surface()
        .ok_or_else(|| Error::Precondition("contract requires a computed surface model".into()))?;
    let record = surface
        .curve(curve_name)
        .ok_or_else(|| Error::UnknownName(curve_name.to_string()))?
        .clone();
    if !record.self_intersection.is_negative() {
        return Err(Error::NotContractible(format!(
            "{} has self-intersection {}",
            curve_name,
            format_rational(&record.self_intersection)
        )));
    }
    let e_class = record
        .divisor_class
        .clone()
        .ok_or_else(|| Error::MissingDivisorClass(curve_name.to_string()))?;
    let c_class = record.curve_class.clone();
    let e_dot_c = e_class.dot(&c_class);

    let b_here = m.push_class(b_root);
    let k_plus_b = surface.canonical_class.add(&b_here);
    let discrepancy = k_plus_b.dot(&c_class) / &e_dot_c;

    // Basis of the orthogonal complement of the contracted class.
    let kernel = QMatrix::from_rows(std::slice::from_ref(&c_class)).kernel_basis();
    let new_rho = surface.rho - 1;
    if kernel.len() != new_rho {
        return Err(Error::InconsistentSurfaceData(format!(
            "orthogonal complement of {curve_name} has unexpected dimension"
        )));
    }
    let basis = QMatrix::from_cols(&kernel);

    // Projection: subtract the E-component, then re-coordinate.
    let project = |d: &QVector| -> QVector {
        let c = d.dot(&c_class) / &e_dot_c;
        d.sub(&e_class.scale(&c))
    };
    let mut projection = QMatrix::zeros(new_rho, surface.rho);
    for j in 0..surface.rho {
        let img = project(&QVector::unit(surface.rho, j));
        let coords = basis
            .solve_consistent(&img)
            .ok_or_else(|| Error::InconsistentSurfaceData("projection failed".into()))?;
        for i in 0..new_rho {
            projection.set(i, j, coords.get(i).clone());
        }
    }

    let mut curves = Vec::new();
    let mut reference_curves = Vec::new();
    for c in &surface.curves {
        if c.name == curve_name {
            continue;
        }
        let new_curve_class = QVector::new(kernel.iter().map(|w| w.dot(&c.curve_class)).collect());
        let new_div = c.divisor_class.as_ref().map(|d| projection.mul_vec(d));
        let self_int = match &new_div {
            Some(d) => d.dot(&new_curve_class),
            None => Rational::zero(),
        };
        curves.push(surface::CurveRecord {
            name: c.name.clone(),
            curve_class: new_curve_class,
            divisor_class: new_div,
            self_intersection: self_int,
        });
        if let Some(r) = m.reference_curve(&c.name) {
            reference_curves.push((c.name.clone(), r.clone()));
        }
    }

    let psef_generators: Vec<QVector> = surface
        .psef_cone
        .raw_generators()
        .map(|g| g.to_vec())
        .unwrap_or_else(|| surface.psef_cone.generators())
        .iter()
        .map(|g| projection.mul_vec(g))
        .collect();

    let new_surface = SurfaceData {
        rho: new_rho,
        basis_names: (0..new_rho).map(|i| format!("w{i}")).collect(),
        curves,
        canonical_class: projection.mul_vec(&surface.canonical_class),
        boundary_generators: surface
            .boundary_generators
            .iter()
            .map(|(n, g)| (n.clone(), projection.mul_vec(g)))
            .collect(),
        psef_cone: Cone::from_generators(new_rho, psef_generators),
        nef_check_complete: surface.nef_check_complete,
        pair_flag: surface.pair_flag,
        base_name: surface.base_name.clone(),
    };

    let target_id = format!("{}/-{}", m.id, curve_name);
    let curve_reference_class = m
        .reference_curve(curve_name)
        .cloned()
        .unwrap_or_else(|| c_class.clone());
    let mut chain = m.chain.clone();
    chain.push(Contraction {
        source: m.id.clone(),
        target: target_id.clone(),
        curve: curve_name.to_string(),
        curve_reference_class,
        projection,
        basis,
        discrepancy,
    });
    Ok(ModelNode {
        id: target_id,
        kind: ModelKind::Surface(new_surface),
        chain,
        reference_curves,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WallEvent {
    Contracted(String),
    Tie(Vec<String>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScalingOutcome {
    /// `K+B` is nef on the final model.
    MinimalModel { model: String },
    /// The extremal curve at the wall has nonnegative self-intersection.
    MoriFiber {
        model: String,
        curve: String,
        threshold: Rational,
    },
    /// Two or more curves reached the wall simultaneously.
    TieStop { model: String },
}

/// Record of one MMP-with-scaling run.
#[derive(Clone, Debug)]
pub struct ScalingRun {
    pub boundary: QVector,
    pub scale: QVector,
    pub walls: Vec<(Rational, WallEvent)>,
    pub outcome: ScalingOutcome,
    pub final_model: ModelNode,
}

impl ScalingRun {
    pub fn contracted(&self) -> BTreeSet<String> {
        self.walls
            .iter()
            .filter_map(|(_, e)| match e {
                WallEvent::Contracted(n) => Some(n.clone()),
                WallEvent::Tie(_) => None,
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let walls: Vec<Value> = self
            .walls
            .iter()
            .map(|(t, e)| match e {
                WallEvent::Contracted(n) => {
                    json!({"threshold": format_rational(t), "contracted": n})
                }
                WallEvent::Tie(ns) => json!({"threshold": format_rational(t), "tie": ns}),
            })
            .collect();
        let outcome = match &self.outcome {
            ScalingOutcome::MinimalModel { model } => json!({"minimal_model": model}),
            ScalingOutcome::MoriFiber {
                model,
                curve,
                threshold,
            } => json!({
                "mori_fiber": {"model": model, "curve": curve,
                               "threshold": format_rational(threshold)}
            }),
            ScalingOutcome::TieStop { model } => json!({"tie_stop": model}),
        };
        json!({
            "boundary": vector_to_json(&self.boundary),
            "scale": vector_to_json(&self.scale),
            "walls": walls,
            "outcome": outcome,
        })
    }
}

/// MMP with scaling: repeatedly contract the curve with the largest nef
/// threshold of `K+B+tH` until `K+B` is nef, a fiber-type ray appears, or
/// two curves tie at a wall. Thresholds decrease strictly, and each step
/// removes a curve, so at most `#curves` walls occur.
pub fn run_scaling_mmp(root: &ModelNode, b_root: &QVector, h_root: &QVector) -> Result<ScalingRun> {
    let surface = root
        .surface()
        .ok_or_else(|| Error::Precondition("scaling MMP requires a surface model".into()))?;
    if !surface::is_ample(surface, &DivisorClass(h_root.clone()))? {
        return Err(Error::NotAmple(
            "scaling class must pair strictly positively with every curve".to_string(),
        ));
    }

    let mut node = root.clone();
    let mut walls: Vec<(Rational, WallEvent)> = Vec::new();
    loop {
        let s = node.surface().expect("chain preserves surface kind");
        let k_plus_b = s.canonical_class.add(&node.push_class(b_root));
        let h = node.push_class(h_root);

        let mut best: Option<Rational> = None;
        let mut argmax: Vec<usize> = Vec::new();
        for (i, c) in s.curves.iter().enumerate() {
            let kb = k_plus_b.dot(&c.curve_class);
            if !kb.is_negative() {
                continue;
            }
            let hc = h.dot(&c.curve_class);
            debug_assert!(hc.is_positive(), "pushed scaling class stays ample");
            let threshold = -kb / hc;
            match &best {
                Some(t) if threshold < *t => {}
                Some(t) if threshold == *t => argmax.push(i),
                _ => {
                    best = Some(threshold);
                    argmax = vec![i];
                }
            }
        }

        let Some(threshold) = best else {
            let model = node.id.clone();
            return Ok(ScalingRun {
                boundary: b_root.clone(),
                scale: h_root.clone(),
                walls,
                outcome: ScalingOutcome::MinimalModel { model },
                final_model: node,
            });
        };
        if let Some((prev, _)) = walls.last() {
            debug_assert!(threshold < *prev, "thresholds must strictly decrease");
        }
        if argmax.len() >= 2 {
            let names: Vec<String> = argmax.iter().map(|&i| s.curves[i].name.clone()).collect();
            walls.push((threshold, WallEvent::Tie(names)));
            let model = node.id.clone();
            return Ok(ScalingRun {
                boundary: b_root.clone(),
                scale: h_root.clone(),
                walls,
                outcome: ScalingOutcome::TieStop { model },
                final_model: node,
            });
        }
        let curve = s.curves[argmax[0]].clone();
        if !curve.self_intersection.is_negative() {
            let model = node.id.clone();
            return Ok(ScalingRun {
                boundary: b_root.clone(),
                scale: h_root.clone(),
                walls,
                outcome: ScalingOutcome::MoriFiber {
                    model,
                    curve: curve.name.clone(),
                    threshold,
                },
                final_model: node,
            });
        }
        walls.push((threshold.clone(), WallEvent::Contracted(curve.name.clone())));
        node = contract(&node, &curve.name, b_root)?;
    }
}

/// Scaling run for pipeline use: when the declared scale produces a tie, the
/// scale is perturbed deterministically until the tie resolves. Returns the
/// tie run unchanged if no perturbation separates the thresholds.
pub fn run_scaling_mmp_resolving_ties(
    root: &ModelNode,
    b_root: &QVector,
    h_root: &QVector,
) -> Result<ScalingRun> {
    let run = run_scaling_mmp(root, b_root, h_root)?;
    if !matches!(run.outcome, ScalingOutcome::TieStop { .. }) {
        return Ok(run);
    }
    let dim = h_root.dim();
    let drift = QVector::new((0..dim).map(|i| rint(i as i64 + 1)).collect());
    for k in 3..40u32 {
        let h = h_root.add(&drift.scale(&rat(1, 1i64 << k.min(62))));
        let surface = root.surface().expect("checked by the unperturbed run");
        if !surface::is_ample(surface, &DivisorClass(h.clone()))? {
            continue;
        }
        let candidate = run_scaling_mmp(root, b_root, &h)?;
        if !matches!(candidate.outcome, ScalingOutcome::TieStop { .. }) {
            return Ok(candidate);
        }
    }
    Ok(run)
}

/// Report produced by `verify_minimal_model`.
#[derive(Clone, Debug)]
pub struct MinimalModelCheck {
    pub is_minimal: bool,
    pub violations: Vec<String>,
}

/// Checks the minimal-model conditions for the boundary class `b_root`:
/// the chain is divisorial bookkeeping, pushed `K+B` is nef, and every
/// recomputed discrepancy along the chain is positive.
pub fn verify_minimal_model(
    root: &ModelNode,
    candidate: &ModelNode,
    b_root: &QVector,
) -> Result<MinimalModelCheck> {
    let mut violations = Vec::new();
    match &candidate.kind {
        ModelKind::Surface(s) => {
            // Replay the chain from the root to recompute discrepancies for
            // this boundary.
            let mut node = root.clone();
            for step in &candidate.chain {
                let here = node.surface().ok_or_else(|| {
                    Error::Precondition("candidate chain must start from a surface root".into())
                })?;
                match here.curve(&step.curve) {
                    None => violations.push(format!("chain curve {} missing", step.curve)),
                    Some(c) if c.divisor_class.is_none() => {
                        violations.push(format!("chain step {} is not divisorial", step.curve))
                    }
                    Some(_) => {}
                }
                let next = contract(&node, &step.curve, b_root)?;
                let a = &next.chain.last().expect("just contracted").discrepancy;
                if !a.is_positive() {
                    violations.push(format!(
                        "discrepancy {} for {} is not positive",
                        format_rational(a),
                        step.curve
                    ));
                }
                node = next;
            }
            let k_plus_b = s.canonical_class.add(&candidate.push_class(b_root));
            if !surface::is_nef(s, &DivisorClass(k_plus_b.clone()))? {
                let witness = s
                    .curves
                    .iter()
                    .find(|c| k_plus_b.dot(&c.curve_class).is_negative())
                    .map(|c| c.name.clone())
                    .unwrap_or_default();
                violations.push(format!("not nef: {witness}"));
            }
        }
        ModelKind::Abstract(a) => {
            let class = a.log_class(b_root);
            if a.nef_cone.membership(&class)? == Membership::Outside {
                violations.push("not nef: declared nef cone excludes the class".to_string());
            }
        }
    }
    Ok(MinimalModelCheck {
        is_minimal: violations.is_empty(),
        violations,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// `K+C` is numerically trivial; the canonical map is the structure map.
    Base,
    /// The canonical map contracts nothing.
    Identity,
    BirationalContraction,
    Fibration,
}

impl Classification {
    pub fn as_str(&self) -> &'static str {
        match self {
            Classification::Base => "base",
            Classification::Identity => "identity",
            Classification::BirationalContraction => "birational contraction",
            Classification::Fibration => "fibration",
        }
    }
}

/// Identity of the canonical map from the root: the trivial face of the nef
/// cone pulled back to the reference N^1, the classes of every curve the
/// map contracts (MMP-contracted plus trivial on the minimal model), and
/// the contraction type. Two boundaries share a canonical model exactly
/// when these agree, whichever minimal model computed them; the trivial
/// curve list is carried for reporting.
#[derive(Clone, Debug)]
pub struct CanonicalModelId {
    pub classification: Classification,
    pub trivial_face: VForm,
    /// Primitive sign-normalized reference classes of the contracted curves.
    pub contracted_classes: BTreeSet<QVector>,
    pub trivial_curves: Vec<(String, QVector)>,
    pub label: String,
}

impl PartialEq for CanonicalModelId {
    fn eq(&self, other: &Self) -> bool {
        self.classification == other.classification
            && self.trivial_face == other.trivial_face
            && self.contracted_classes == other.contracted_classes
    }
}

impl Eq for CanonicalModelId {}

impl CanonicalModelId {
    pub fn to_json(&self) -> Value {
        json!({
            "classification": self.classification.as_str(),
            "label": self.label,
            "trivial_face": {
                "rays": crate::polyhedra::vectors_to_json(&self.trivial_face.rays),
                "lines": crate::polyhedra::vectors_to_json(&self.trivial_face.lines),
            },
            "contracted_classes": crate::polyhedra::vectors_to_json(
                &self.contracted_classes.iter().cloned().collect::<Vec<_>>()
            ),
            "trivial_curves": Value::Array(
                self.trivial_curves
                    .iter()
                    .map(|(n, c)| json!({"curve": n, "class": vector_to_json(c)}))
                    .collect()
            ),
        })
    }
}

/// Order-independent display id for the target of a contraction set.
fn contracted_id(names: &BTreeSet<String>) -> String {
    let mut id = "root".to_string();
    for n in names {
        id.push_str("/-");
        id.push_str(n);
    }
    id
}

/// Canonical model of a minimal model: collects the curves pairing zero
/// with `K+C`, cuts the nef cone down to the face they support, and pulls
/// that face back to the reference coordinates. `b_root` is the boundary
/// class at the root/reference; the canonical class is added internally.
pub fn canonical_model(minimal: &ModelNode, b_root: &QVector) -> Result<CanonicalModelId> {
    match &minimal.kind {
        ModelKind::Surface(s) => {
            let k_plus_c = s.canonical_class.add(&minimal.push_class(b_root));
            if !surface::is_nef(s, &DivisorClass(k_plus_c.clone()))? {
                return Err(Error::Precondition(
                    "canonical_model requires nef K+C".to_string(),
                ));
            }
            let trivial: Vec<&surface::CurveRecord> = s
                .curves
                .iter()
                .filter(|c| k_plus_c.dot(&c.curve_class).is_zero())
                .collect();

            let mut halfspaces: Vec<QVector> =
                s.curves.iter().map(|c| c.curve_class.clone()).collect();
            for c in &trivial {
                halfspaces.push(c.curve_class.neg());
            }
            let face_model = Cone::from_halfspaces(s.rho, halfspaces);
            let pulled: Vec<QVector> = face_model
                .generators()
                .iter()
                .map(|g| minimal.pull_class(g))
                .collect();
            let ref_dim = pulled.first().map_or_else(
                || minimal.pull_class(&QVector::zeros(s.rho)).dim(),
                |v| v.dim(),
            );
            let face = Cone::from_generators(ref_dim, pulled).vform().clone();

            let trivial_curves: Vec<(String, QVector)> = trivial
                .iter()
                .filter_map(|c| {
                    minimal
                        .reference_curve(&c.name)
                        .map(|r| (c.name.clone(), r.primitive_signed()))
                })
                .collect();

            // Everything the canonical map contracts, seen from the root:
            // the MMP-contracted curves plus the trivial ones here.
            let mut contracted_classes: BTreeSet<QVector> = minimal
                .chain
                .iter()
                .map(|c| c.curve_reference_class.primitive_signed())
                .collect();
            let mut contracted_names: BTreeSet<String> = minimal
                .chain
                .iter()
                .map(|c| c.curve.clone())
                .collect();
            for (name, class) in &trivial_curves {
                contracted_classes.insert(class.clone());
                contracted_names.insert(name.clone());
            }

            let fiber_type = trivial
                .iter()
                .any(|c| !c.self_intersection.is_negative() || c.divisor_class.is_none());
            let classification = if k_plus_c.is_zero() {
                Classification::Base
            } else if fiber_type {
                Classification::Fibration
            } else if contracted_names.is_empty() {
                Classification::Identity
            } else {
                Classification::BirationalContraction
            };
            let label = match classification {
                Classification::Base => format!("base {}", s.base_name),
                Classification::Fibration => {
                    format!("{}(fibration)", contracted_id(&contracted_names))
                }
                _ => contracted_id(&contracted_names),
            };
            Ok(CanonicalModelId {
                classification,
                trivial_face: face,
                contracted_classes,
                trivial_curves,
                label,
            })
        }
        ModelKind::Abstract(a) => {
            let class_model = a.log_class(b_root);
            if a.nef_cone.membership(&class_model)? == Membership::Outside {
                return Err(Error::Precondition(
                    "canonical_model requires nef K+C".to_string(),
                ));
            }
            let trivial: Vec<&AbstractCurve> = a
                .curves
                .iter()
                .filter(|c| class_model.dot(&c.class_model).is_zero())
                .collect();
            let mut halfspaces: Vec<QVector> = a
                .nef_cone
                .halfspaces()
                .into_iter()
                .collect();
            for c in &trivial {
                halfspaces.push(c.class_model.clone());
                halfspaces.push(c.class_model.neg());
            }
            let face_model = Cone::from_halfspaces(a.dim, halfspaces);
            let pulled: Vec<QVector> = face_model
                .generators()
                .iter()
                .map(|g| a.to_reference(g))
                .collect();
            let face = Cone::from_generators(a.pullback.rows(), pulled)
                .vform()
                .clone();

            let trivial_curves: Vec<(String, QVector)> = trivial
                .iter()
                .map(|c| (c.name.clone(), c.class_reference.primitive_signed()))
                .collect();
            let contracted_classes: BTreeSet<QVector> =
                trivial_curves.iter().map(|(_, c)| c.clone()).collect();

            let classification = if class_model.is_zero() {
                Classification::Base
            } else if trivial.is_empty() {
                Classification::Identity
            } else if trivial.iter().all(|c| c.birational) {
                Classification::BirationalContraction
            } else {
                Classification::Fibration
            };
            let label = match classification {
                Classification::Base => "base".to_string(),
                Classification::Identity => minimal.id.clone(),
                _ => trivial
                    .iter()
                    .find_map(|c| c.canonical_label.clone())
                    .unwrap_or_else(|| {
                        let names: Vec<&str> = trivial.iter().map(|c| c.name.as_str()).collect();
                        format!("{}>[{}]", minimal.id, names.join(","))
                    }),
            };
            Ok(CanonicalModelId {
                classification,
                trivial_face: face,
                contracted_classes,
                trivial_curves,
                label,
            })
        }
    }
}

/// Minimal models for the same boundary are numerically equivalent: their
/// pulled-back `K+C` classes agree exactly. Refuses when either candidate
/// fails the minimal-model check.
pub fn compare_minimal_models(
    root: &ModelNode,
    m1: &ModelNode,
    m2: &ModelNode,
    b_root: &QVector,
) -> Result<bool> {
    for (tag, m) in [("first", m1), ("second", m2)] {
        let check = verify_minimal_model(root, m, b_root)?;
        if !check.is_minimal {
            return Err(Error::Precondition(format!(
                "{tag} model is not minimal for this boundary: {}",
                check.violations.join("; ")
            )));
        }
    }
    let class_of = |m: &ModelNode| -> QVector {
        let pushed = match &m.kind {
            ModelKind::Surface(s) => s.canonical_class.add(&m.push_class(b_root)),
            ModelKind::Abstract(a) => a.log_class(b_root),
        };
        m.pull_class(&pushed)
    };
    Ok(class_of(m1) == class_of(m2))
}

/// The prime divisors contracted by a scaling run that reaches a minimal
/// model are exactly the components of the numerically fixed part of `K+B`
/// on the root.
pub fn check_exceptional_equals_fixed(
    root: &ModelNode,
    b_root: &QVector,
    run: &ScalingRun,
) -> Result<bool> {
    let surface = root
        .surface()
        .ok_or_else(|| Error::Precondition("root must be a surface".into()))?;
    if !matches!(run.outcome, ScalingOutcome::MinimalModel { .. }) {
        return Err(Error::Precondition(
            "run must end in a minimal model".to_string(),
        ));
    }
    let k_plus_b = surface.canonical_class.add(b_root);
    let support = surface::numerically_fixed_support(surface, &DivisorClass(k_plus_b))?;
    Ok(support == run.contracted())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::ratlin::{rat, rint};

    fn example1_root() -> ModelNode {
        ModelNode::root_surface(gallery::example1_surface())
    }

    fn example1_boundary(t: Rational) -> QVector {
        gallery::example1_surface()
            .boundary_class(&[rat(1, 2), t])
            .unwrap()
    }

    #[test]
    fn contract_discrepancy_on_ruled_fixture() {
        // B = (1/2) C0 + (1/4) C1: contracting C0 has discrepancy 5/4.
        let root = example1_root();
        let b = example1_boundary(rat(1, 4));
        let m = contract(&root, "C0", &b).unwrap();
        assert_eq!(m.chain[0].discrepancy, rat(5, 4));
        assert_eq!(m.id, "root/-C0");
        let s = m.surface().unwrap();
        assert_eq!(s.rho, 1);
        // The surviving curve becomes the fiber class with self-intersection 0.
        assert_eq!(s.curves.len(), 1);
        assert_eq!(s.curves[0].self_intersection, rint(0));
    }

    #[test]
    fn contract_classical_blow_down() {
        let x = gallery::single_negative_curve_surface();
        let root = ModelNode::root_surface(x);
        let m = contract(&root, "E", &QVector::zeros(2)).unwrap();
        assert_eq!(m.chain[0].discrepancy, rint(1));
    }

    #[test]
    fn contract_rejects_fiber_ray() {
        let root = example1_root();
        let b = example1_boundary(rat(1, 4));
        let m = contract(&root, "C0", &b).unwrap();
        // The remaining curve has self-intersection 0.
        let err = contract(&m, "C1", &b);
        assert!(matches!(err, Err(Error::NotContractible(_))));
    }

    #[test]
    fn pairing_preserved_under_contraction() {
        let root = example1_root();
        let b = example1_boundary(rat(1, 4));
        let m = contract(&root, "C0", &b).unwrap();
        let s0 = root.surface().unwrap();
        let s1 = m.surface().unwrap();
        // Classes orthogonal to the contracted curve pair identically with
        // the surviving curves.
        let c0 = &s0.curve("C0").unwrap().curve_class;
        for d in [QVector::from_ints(&[0, 1]), QVector::from_ints(&[0, 5])] {
            assert!(d.dot(c0).is_zero());
            let pushed = m.push_class(&d);
            let before = d.dot(&s0.curve("C1").unwrap().curve_class);
            let after = pushed.dot(&s1.curve("C1").unwrap().curve_class);
            assert_eq!(before, after);
        }
    }

    #[test]
    fn scaling_mmp_contracts_then_hits_fiber() {
        let root = example1_root();
        let b = example1_boundary(rat(1, 4));
        let h = QVector::from_ints(&[-1, 2]);
        let run = run_scaling_mmp(&root, &b, &h).unwrap();
        assert_eq!(run.walls.len(), 1);
        assert_eq!(run.walls[0].0, rat(5, 4));
        assert_eq!(run.walls[0].1, WallEvent::Contracted("C0".into()));
        match &run.outcome {
            ScalingOutcome::MoriFiber {
                model,
                curve,
                threshold,
            } => {
                assert_eq!(model, "root/-C0");
                assert_eq!(curve, "C1");
                assert_eq!(threshold, &rint(1));
            }
            other => panic!("expected Mori fiber outcome, got {other:?}"),
        }
    }

    #[test]
    fn scaling_mmp_tie_stops() {
        let root = example1_root();
        let b = example1_boundary(rat(1, 2));
        let h = QVector::from_ints(&[-1, 2]);
        let run = run_scaling_mmp(&root, &b, &h).unwrap();
        assert_eq!(run.walls.len(), 1);
        assert_eq!(run.walls[0].0, rint(1));
        match &run.walls[0].1 {
            WallEvent::Tie(names) => assert_eq!(names, &vec!["C0".to_string(), "C1".to_string()]),
            other => panic!("expected tie, got {other:?}"),
        }
        assert_eq!(run.outcome, ScalingOutcome::TieStop { model: "root".into() });
    }

    #[test]
    fn scaling_mmp_nef_boundary_is_already_minimal() {
        let x = gallery::single_negative_curve_surface();
        let root = ModelNode::root_surface(x);
        // K + B with B = E + 2f pairs 0 with E.
        let b = QVector::from_ints(&[0, 2]);
        let run = run_scaling_mmp(&root, &b, &QVector::from_ints(&[0, 1])).unwrap();
        assert!(run.walls.is_empty());
        assert_eq!(
            run.outcome,
            ScalingOutcome::MinimalModel { model: "root".into() }
        );
    }

    #[test]
    fn scaling_mmp_rejects_non_ample_scale() {
        let root = example1_root();
        let b = example1_boundary(rat(1, 4));
        assert!(matches!(
            run_scaling_mmp(&root, &b, &QVector::from_ints(&[1, 0])),
            Err(Error::NotAmple(_))
        ));
    }

    #[test]
    fn verify_minimal_model_on_fixtures() {
        let root = example1_root();
        let b = example1_boundary(rat(1, 4));
        // X0 fails: pushed K+B pairs -2 with the fiber class.
        let x0 = contract(&root, "C0", &b).unwrap();
        let check = verify_minimal_model(&root, &x0, &b).unwrap();
        assert!(!check.is_minimal);
        assert!(check.violations.iter().any(|v| v.contains("not nef")));

        // Identity model with nef K+B.
        let x = gallery::single_negative_curve_surface();
        let root = ModelNode::root_surface(x);
        let b = QVector::from_ints(&[0, 2]);
        let check = verify_minimal_model(&root, &root, &b).unwrap();
        assert!(check.is_minimal);
    }

    #[test]
    fn verify_minimal_model_abstract() {
        let g = gallery::example2_graph();
        let xm = g.node("X-").unwrap();
        let xp = g.node("X+").unwrap();
        let b_quarter = g.boundary_class(&[rat(3, 4), rat(1, 4)]).unwrap();
        assert!(verify_minimal_model(&xm, &xm, &b_quarter).unwrap().is_minimal);
        assert!(!verify_minimal_model(&xm, &xp, &b_quarter).unwrap().is_minimal);
    }

    #[test]
    fn canonical_model_identity_when_ample() {
        let x = gallery::single_negative_curve_surface();
        let root = ModelNode::root_surface(x.clone());
        // K + B ample: B = E + 3f gives K+B = (0,1)... check pairings.
        let b = QVector::from_ints(&[0, 3]);
        let k_plus_b = x.canonical_class.add(&b);
        assert!(surface::is_ample(&x, &DivisorClass(k_plus_b)).unwrap());
        let id = canonical_model(&root, &b).unwrap();
        assert_eq!(id.classification, Classification::Identity);
        assert!(id.trivial_curves.is_empty());
    }

    #[test]
    fn canonical_model_requires_nef() {
        let root = example1_root();
        let b = example1_boundary(rat(1, 4));
        assert!(matches!(
            canonical_model(&root, &b),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn canonical_model_shared_on_flop_wall() {
        let g = gallery::example2_graph();
        let xm = g.node("X-").unwrap();
        let xp = g.node("X+").unwrap();
        let wall = g.boundary_class(&[rat(1, 2), rat(1, 2)]).unwrap();
        let id_m = canonical_model(&xm, &wall).unwrap();
        let id_p = canonical_model(&xp, &wall).unwrap();
        assert_eq!(id_m, id_p);
        assert_eq!(id_m.classification, Classification::BirationalContraction);
        assert_eq!(id_m.label, "Y");
        assert_eq!(id_m.trivial_curves.len(), 1);
        // Away from the wall the identities differ.
        let b = g.boundary_class(&[rat(3, 4), rat(1, 4)]).unwrap();
        let id_away = canonical_model(&xm, &b).unwrap();
        assert_eq!(id_away.classification, Classification::Identity);
        assert_ne!(id_away, id_m);
    }

    #[test]
    fn compare_minimal_models_examples() {
        let g = gallery::example2_graph();
        let xm = g.node("X-").unwrap();
        let xp = g.node("X+").unwrap();
        let wall = g.boundary_class(&[rat(1, 2), rat(1, 2)]).unwrap();
        assert!(compare_minimal_models(&xm, &xm, &xm, &wall).unwrap());
        assert!(compare_minimal_models(&xm, &xm, &xp, &wall).unwrap());
        let b = g.boundary_class(&[rat(3, 4), rat(1, 4)]).unwrap();
        assert!(matches!(
            compare_minimal_models(&xm, &xm, &xp, &b),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn contracted_set_equals_fixed_part_on_chain() {
        let x = gallery::chain_surface(2, 1);
        let root = ModelNode::root_surface(x.clone());
        // Boundary supported on the first chain curve only.
        let b = x.boundary_class(&[rat(1, 2), rint(0)]).unwrap();
        let h = gallery::chain_ample_class(&x);
        let run = run_scaling_mmp(&root, &b, &h).unwrap();
        assert!(matches!(run.outcome, ScalingOutcome::MinimalModel { .. }));
        assert_eq!(run.contracted(), BTreeSet::from(["E1".to_string()]));
        assert!(check_exceptional_equals_fixed(&root, &b, &run).unwrap());

        // Corrupting the curve list after the run fabricates a mismatch:
        // the numerically fixed part on the corrupted data is empty while
        // the recorded run contracted E1.
        let mut corrupt = x.clone();
        corrupt.curves[0].curve_class = QVector::from_ints(&[2, 1, 1]);
        corrupt.curves[0].self_intersection = rint(2);
        let corrupt_root = ModelNode::root_surface(corrupt);
        assert!(!check_exceptional_equals_fixed(&corrupt_root, &b, &run).unwrap());
    }

    #[test]
    fn contracted_set_check_trivial_when_nef() {
        let x = gallery::single_negative_curve_surface();
        let root = ModelNode::root_surface(x);
        let b = QVector::from_ints(&[0, 2]);
        let run = run_scaling_mmp(&root, &b, &QVector::from_ints(&[0, 1])).unwrap();
        assert!(check_exceptional_equals_fixed(&root, &b, &run).unwrap());
    }

    #[test]
    fn walls_pair_to_zero_at_thresholds() {
        // Replaying a run: at each wall, K+B+tH pairs zero with the
        // contracted curve and negatively just below the threshold.
        let x = gallery::chain_surface(3, 4);
        let root = ModelNode::root_surface(x.clone());
        let b = x.boundary_class(&[rat(1, 2), rat(1, 3), rat(3, 5)]).unwrap();
        let h = gallery::chain_ample_class(&x);
        let run = run_scaling_mmp(&root, &b, &h).unwrap();
        let mut node = root;
        for (t, event) in &run.walls {
            let WallEvent::Contracted(name) = event else {
                break;
            };
            let s = node.surface().unwrap();
            let c = &s.curve(name).unwrap().curve_class;
            let class =
                s.canonical_class
                    .add(&node.push_class(&b))
                    .add(&node.push_class(&h).scale(t));
            assert!(class.dot(c).is_zero());
            let below = s
                .canonical_class
                .add(&node.push_class(&b))
                .add(&node.push_class(&h).scale(&(t - rat(1, 1000))));
            assert!(below.dot(c).is_negative());
            node = contract(&node, name, &b).unwrap();
        }
    }

    #[test]
    fn tie_resolution_by_perturbation() {
        let x = gallery::chain_surface(2, 2);
        let root = ModelNode::root_surface(x.clone());
        let b = x.boundary_class(&[rat(1, 2), rat(1, 2)]).unwrap();
        // Symmetric boundary with symmetric scale: the raw run may tie, the
        // resolving run must reach a minimal model.
        let h = gallery::chain_ample_class(&x);
        let run = run_scaling_mmp_resolving_ties(&root, &b, &h).unwrap();
        assert!(matches!(run.outcome, ScalingOutcome::MinimalModel { .. }));
        assert!(check_exceptional_equals_fixed(&root, &b, &run).unwrap());
    }
}

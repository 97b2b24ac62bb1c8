//! Chamber decompositions of boundary-divisor polytopes.
//!
//! The engine intersects the ambient polytope with the pseudo-effective
//! constraints, splits the result along every wall of the arrangement into
//! relatively open cells (full- and lower-dimensional), labels each cell by
//! running the full pipeline at a rational point of its relative interior,
//! and merges connected cells with equal canonical identity. Walls come
//! from curve pairings on every model reachable by contractions, from the
//! pseudo-effective boundary, and in scaling mode also from threshold ties.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::lp;
use crate::mmp::{
    self, CanonicalModelId, ModelGraph, ModelNode, ScalingOutcome,
};
use crate::polyhedra::{
    convex_hull, polytope_intersect_halfspaces, polytopes_intersect, vector_to_json,
    AffineFunctional, CellComplexCell, Cone, Membership, Polytope,
};
use crate::ratlin::{format_rational, rat, QMatrix, QVector, Rational};
use crate::surface::{self, DivisorClass, SurfaceData};
use crate::{Error, Result};

/// The coefficient space of a boundary-divisor family: an ambient
/// polytope in the span of the declared boundary generators.
#[derive(Clone, Debug)]
pub struct BoundarySpace {
    pub ambient: Polytope,
    pub rational_flag: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WallOrigin {
    Curve { model: String, curve: String },
    ThresholdTie { model: String, curves: (String, String) },
    PsefBoundary,
}

/// A rational affine wall in boundary-coefficient space.
#[derive(Clone, Debug)]
pub struct Wall {
    pub functional: AffineFunctional,
    pub origin: WallOrigin,
}

impl Wall {
    pub fn to_json(&self) -> Value {
        let origin = match &self.origin {
            WallOrigin::Curve { model, curve } => json!({"model": model, "curve": curve}),
            WallOrigin::ThresholdTie { model, curves } => {
                json!({"model": model, "tie": [curves.0, curves.1]})
            }
            WallOrigin::PsefBoundary => json!("psef-boundary"),
        };
        json!({
            "normal": vector_to_json(&self.functional.normal),
            "offset": format_rational(&self.functional.offset),
            "origin": origin,
        })
    }
}

/// How surface cells are labeled.
#[derive(Clone, Debug)]
pub enum SurfaceMode {
    /// Labels are canonical/minimal model identities.
    Standard,
    /// Labels are raw scaling-run end models; used when `K+B` never becomes
    /// pseudo-effective and the decomposition tracks MMP outcomes instead.
    ScalingOutcomes { canonical_label: String },
}

#[derive(Clone, Debug)]
pub struct SurfaceInput<'a> {
    pub surface: &'a SurfaceData,
    pub scaling: &'a QVector,
    pub mode: SurfaceMode,
    /// Display renames for model ids, e.g. `root/-C0 -> X0`.
    pub model_names: &'a BTreeMap<String, String>,
}

#[derive(Clone, Debug)]
pub enum ChamberInput<'a> {
    Surface(SurfaceInput<'a>),
    Abstract(&'a ModelGraph),
}

impl<'a> ChamberInput<'a> {
    fn reference_dim(&self) -> usize {
        match self {
            ChamberInput::Surface(s) => s.surface.rho,
            ChamberInput::Abstract(g) => g.reference_dim,
        }
    }

    fn canonical_class(&self) -> &QVector {
        match self {
            ChamberInput::Surface(s) => &s.surface.canonical_class,
            ChamberInput::Abstract(g) => &g.canonical_class,
        }
    }

    fn boundary_generators(&self) -> &[(String, QVector)] {
        match self {
            ChamberInput::Surface(s) => &s.surface.boundary_generators,
            ChamberInput::Abstract(g) => &g.boundary_generators,
        }
    }

    fn psef_cone(&self) -> &Cone {
        match self {
            ChamberInput::Surface(s) => &s.surface.psef_cone,
            ChamberInput::Abstract(g) => &g.psef_cone,
        }
    }

    /// Class of `sum b_i B_i` at the root/reference.
    fn boundary_class(&self, b: &QVector) -> QVector {
        let gens = self.boundary_generators();
        let mut acc = QVector::zeros(self.reference_dim());
        for (coeff, (_, g)) in b.iter().zip(gens) {
            acc = acc.add(&g.scale(coeff));
        }
        acc
    }
}

/// Point-level pipeline result.
#[derive(Clone, Debug)]
pub struct PointLabel {
    pub canonical: Option<CanonicalModelId>,
    pub canonical_label: String,
    pub minimal_ids: BTreeSet<String>,
    pub outcome: String,
}

/// A labeled relatively open cell of the arrangement.
#[derive(Clone, Debug)]
pub struct LabeledCell {
    pub cell: CellComplexCell,
    pub sample: QVector,
    pub label: PointLabel,
}

/// A merged group of cells: a canonical chamber, a minimal subchamber, or a
/// whole minimal-model region.
#[derive(Clone, Debug)]
pub struct GroupEntry {
    pub label: String,
    pub members: Vec<usize>,
    pub closure: Polytope,
    pub open_facets: Vec<AffineFunctional>,
    pub parent: Option<usize>,
    pub note: Option<String>,
}

#[derive(Clone, Debug)]
pub struct ChamberDecomposition {
    pub space_dim: usize,
    pub region: Polytope,
    pub walls: Vec<Wall>,
    pub cells: Vec<LabeledCell>,
    pub canonical_chambers: Vec<GroupEntry>,
    pub minimal_subchambers: Vec<GroupEntry>,
    pub minimal_models: Vec<GroupEntry>,
    pub note: Option<String>,
}

/// `V`: the part of the ambient polytope where `K + sum b_i B_i` is
/// pseudo-effective, cut out exactly by the pulled-back psef halfspaces.
pub fn effective_region(space: &BoundarySpace, input: &ChamberInput) -> Polytope {
    let halfspaces = psef_walls(input);
    polytope_intersect_halfspaces(
        &space.ambient,
        &halfspaces.iter().map(|w| w.functional.clone()).collect::<Vec<_>>(),
    )
}

fn psef_walls(input: &ChamberInput) -> Vec<Wall> {
    let k = input.canonical_class();
    let gens = input.boundary_generators();
    input
        .psef_cone()
        .halfspaces()
        .iter()
        .map(|h| Wall {
            functional: AffineFunctional::new(
                QVector::new(gens.iter().map(|(_, g)| h.dot(g)).collect()),
                h.dot(k),
            ),
            origin: WallOrigin::PsefBoundary,
        })
        .collect()
}

/// All walls: curve pairings over the contraction DAG (or the declared
/// models), threshold ties in scaling mode, and the psef boundary.
/// Duplicates are removed up to positive scaling.
pub fn collect_walls(space: &BoundarySpace, input: &ChamberInput) -> Vec<Wall> {
    let _ = space;
    let mut walls: Vec<Wall> = Vec::new();
    match input {
        ChamberInput::Surface(si) => {
            let root = ModelNode::root_surface(si.surface.clone());
            let zero_b = QVector::zeros(si.surface.rho);
            let mut queue = vec![root];
            let mut seen: BTreeSet<BTreeSet<String>> = BTreeSet::new();
            seen.insert(BTreeSet::new());
            while let Some(node) = queue.pop() {
                let s = node.surface().expect("surface DAG");
                let pushed_gens: Vec<QVector> =
                    s.boundary_generators.iter().map(|(_, g)| g.clone()).collect();
                for c in &s.curves {
                    walls.push(Wall {
                        functional: AffineFunctional::new(
                            QVector::new(pushed_gens.iter().map(|g| g.dot(&c.curve_class)).collect()),
                            s.canonical_class.dot(&c.curve_class),
                        ),
                        origin: WallOrigin::Curve {
                            model: node.id.clone(),
                            curve: c.name.clone(),
                        },
                    });
                }
                if let SurfaceMode::ScalingOutcomes { .. } = si.mode {
                    let h = node.push_class(si.scaling);
                    for (i, a) in s.curves.iter().enumerate() {
                        for b in s.curves.iter().skip(i + 1) {
                            let ha = h.dot(&a.curve_class);
                            let hb = h.dot(&b.curve_class);
                            let normal = QVector::new(
                                pushed_gens
                                    .iter()
                                    .map(|g| g.dot(&a.curve_class) * &hb - g.dot(&b.curve_class) * &ha)
                                    .collect(),
                            );
                            let offset = s.canonical_class.dot(&a.curve_class) * &hb
                                - s.canonical_class.dot(&b.curve_class) * &ha;
                            walls.push(Wall {
                                functional: AffineFunctional::new(normal, offset),
                                origin: WallOrigin::ThresholdTie {
                                    model: node.id.clone(),
                                    curves: (a.name.clone(), b.name.clone()),
                                },
                            });
                        }
                    }
                }
                for c in &s.curves {
                    if c.self_intersection.is_negative() && c.divisor_class.is_some() {
                        let child = contract_for_walls(&node, &c.name, &zero_b);
                        if let Some(child) = child {
                            let key = child.contracted_curves();
                            if seen.insert(key) {
                                queue.push(child);
                            }
                        }
                    }
                }
            }
        }
        ChamberInput::Abstract(g) => {
            for m in &g.models {
                for c in &m.curves {
                    walls.push(Wall {
                        functional: AffineFunctional::new(
                            QVector::new(
                                g.boundary_generators
                                    .iter()
                                    .map(|(_, gen)| gen.dot(&c.class_reference))
                                    .collect(),
                            ),
                            g.canonical_class.dot(&c.class_reference),
                        ),
                        origin: WallOrigin::Curve {
                            model: m.id.clone(),
                            curve: c.name.clone(),
                        },
                    });
                }
            }
        }
    }
    walls.extend(psef_walls(input));

    let mut out: Vec<Wall> = Vec::new();
    for w in walls {
        let prim = w.functional.primitive();
        if prim.is_zero() {
            continue;
        }
        if out.iter().any(|o| o.functional == prim) {
            continue;
        }
        out.push(Wall {
            functional: prim,
            origin: w.origin,
        });
    }
    out
}

fn contract_for_walls(node: &ModelNode, curve: &str, zero_b: &QVector) -> Option<ModelNode> {
    mmp::contract(node, curve, zero_b).ok()
}

/// Runs the full pipeline at one boundary-coefficient point.
pub fn pipeline_label(input: &ChamberInput, b_point: &QVector) -> Result<PointLabel> {
    match input {
        ChamberInput::Surface(si) => {
            let b_class = input.boundary_class(b_point);
            match si.mode {
                SurfaceMode::ScalingOutcomes { ref canonical_label } => {
                    let root = ModelNode::root_surface(si.surface.clone());
                    let run = mmp::run_scaling_mmp(&root, &b_class, si.scaling)?;
                    let raw_id = run.final_model.id.clone();
                    let display = rename(si.model_names, &raw_id);
                    let outcome = match &run.outcome {
                        ScalingOutcome::MinimalModel { .. } => "minimal",
                        ScalingOutcome::MoriFiber { .. } => "mori-fiber",
                        ScalingOutcome::TieStop { .. } => "tie",
                    };
                    Ok(PointLabel {
                        canonical: None,
                        canonical_label: canonical_label.clone(),
                        minimal_ids: BTreeSet::from([display]),
                        outcome: outcome.to_string(),
                    })
                }
                SurfaceMode::Standard => {
                    let k_plus_b = si.surface.canonical_class.add(&b_class);
                    if si.surface.psef_cone.membership(&k_plus_b)? == Membership::Outside {
                        return Ok(PointLabel {
                            canonical: None,
                            canonical_label: "not pseudo-effective".to_string(),
                            minimal_ids: BTreeSet::new(),
                            outcome: "not-psef".to_string(),
                        });
                    }
                    let support =
                        surface::numerically_fixed_support(si.surface, &DivisorClass(k_plus_b))?;
                    let root = ModelNode::root_surface(si.surface.clone());
                    let run = mmp::run_scaling_mmp_resolving_ties(&root, &b_class, si.scaling)?;
                    match &run.outcome {
                        ScalingOutcome::MinimalModel { .. } => {
                            if run.contracted() != support {
                                return Err(Error::InconsistentSurfaceData(format!(
                                    "scaling run contracted {:?} but the numerically fixed part is {:?}",
                                    run.contracted(),
                                    support
                                )));
                            }
                            let id = mmp::canonical_model(&run.final_model, &b_class)?;
                            let minimal_id = rename(si.model_names, &normalized_id(&support));
                            Ok(PointLabel {
                                canonical_label: rename_label(si.model_names, &id.label),
                                canonical: Some(id),
                                minimal_ids: BTreeSet::from([minimal_id]),
                                outcome: "minimal".to_string(),
                            })
                        }
                        ScalingOutcome::MoriFiber { .. } => Ok(PointLabel {
                            canonical: None,
                            canonical_label: "no canonical model (mori fiber)".to_string(),
                            minimal_ids: BTreeSet::new(),
                            outcome: "mori-fiber".to_string(),
                        }),
                        ScalingOutcome::TieStop { .. } => Ok(PointLabel {
                            canonical: None,
                            canonical_label: "no canonical model (threshold tie)".to_string(),
                            minimal_ids: BTreeSet::new(),
                            outcome: "tie".to_string(),
                        }),
                    }
                }
            }
        }
        ChamberInput::Abstract(g) => {
            let b_class = input.boundary_class(b_point);
            let minimal = g.minimal_models_for(&b_class);
            if minimal.is_empty() {
                return Ok(PointLabel {
                    canonical: None,
                    canonical_label: "no minimal model in declared graph".to_string(),
                    minimal_ids: BTreeSet::new(),
                    outcome: "no-model".to_string(),
                });
            }
            let mut canonical: Option<CanonicalModelId> = None;
            let mut ids = BTreeSet::new();
            for m in &minimal {
                ids.insert(m.id.clone());
                let node = g.node(&m.id).expect("model listed in graph");
                let id = mmp::canonical_model(&node, &b_class)?;
                match &canonical {
                    None => canonical = Some(id),
                    Some(prev) => {
                        if *prev != id {
                            return Err(Error::InconsistentSurfaceData(format!(
                                "declared minimal models at the same boundary disagree on the canonical model ({} vs {})",
                                prev.label, id.label
                            )));
                        }
                    }
                }
            }
            let id = canonical.expect("at least one minimal model");
            Ok(PointLabel {
                canonical_label: id.label.clone(),
                canonical: Some(id),
                minimal_ids: ids,
                outcome: "minimal".to_string(),
            })
        }
    }
}

fn rename(map: &BTreeMap<String, String>, id: &str) -> String {
    map.get(id).cloned().unwrap_or_else(|| id.to_string())
}

/// Identity-classification canonical labels are model ids; rename those too.
fn rename_label(map: &BTreeMap<String, String>, label: &str) -> String {
    map.get(label).cloned().unwrap_or_else(|| label.to_string())
}

/// Order-independent model id from a contracted-curve set.
fn normalized_id(contracted: &BTreeSet<String>) -> String {
    let mut id = "root".to_string();
    for c in contracted {
        id.push_str("/-");
        id.push_str(c);
    }
    id
}

/// Splits the region along every wall into relatively open cells with
/// constant sign vector.
fn split_cells(region: &Polytope, walls: &[Wall]) -> Vec<CellComplexCell> {
    // Arrangement hyperplanes: dedupe walls up to sign.
    let mut hyperplanes: Vec<AffineFunctional> = Vec::new();
    for w in walls {
        let p = w.functional.primitive();
        if p.is_zero() {
            continue;
        }
        let n = p.negated();
        if hyperplanes.iter().any(|h| *h == p || *h == n) {
            continue;
        }
        hyperplanes.push(p);
    }

    let mut cells = vec![CellComplexCell::closed(region.clone())];
    for h in &hyperplanes {
        let mut next = Vec::new();
        for cell in cells {
            let vals: Vec<Rational> =
                cell.closure.vertices().iter().map(|v| h.eval(v)).collect();
            let any_pos = vals.iter().any(|v| v.is_positive());
            let any_neg = vals.iter().any(|v| v.is_negative());
            let any_zero = vals.iter().any(|v| v.is_zero());
            if !any_zero && !(any_pos && any_neg) {
                // The wall misses this cell entirely.
                next.push(cell);
                continue;
            }
            if any_pos {
                let closure = polytope_intersect_halfspaces(&cell.closure, std::slice::from_ref(h));
                if let Some(c) = make_cell(closure, &cell.open_facets, Some(h)) {
                    next.push(c);
                }
            }
            {
                let closure = polytope_intersect_halfspaces(
                    &cell.closure,
                    &[h.clone(), h.negated()],
                );
                if let Some(c) = make_cell(closure, &cell.open_facets, None) {
                    next.push(c);
                }
            }
            if any_neg {
                let neg = h.negated();
                let closure = polytope_intersect_halfspaces(&cell.closure, std::slice::from_ref(&neg));
                if let Some(c) = make_cell(closure, &cell.open_facets, Some(&neg)) {
                    next.push(c);
                }
            }
            let _ = any_zero;
        }
        cells = next;
    }
    cells
}

/// Builds a cell from a closure and candidate strict functionals, dropping
/// satisfied ones and rejecting empty cells.
fn make_cell(
    closure: Polytope,
    inherited: &[AffineFunctional],
    added: Option<&AffineFunctional>,
) -> Option<CellComplexCell> {
    if closure.is_empty() {
        return None;
    }
    let mut stricts = Vec::new();
    let mut candidates: Vec<&AffineFunctional> = inherited.iter().collect();
    if let Some(a) = added {
        candidates.push(a);
    }
    for f in candidates {
        let vals: Vec<Rational> = closure.vertices().iter().map(|v| f.eval(v)).collect();
        if vals.iter().all(|v| v.is_zero()) {
            return None; // cell lies inside a strict wall: empty
        }
        debug_assert!(
            vals.iter().all(|v| !v.is_negative()),
            "cell closure must stay on the nonnegative side of its strict facets"
        );
        if vals.iter().any(|v| v.is_zero())
            && !stricts.contains(f) {
                stricts.push(f.clone());
            }
    }
    Some(CellComplexCell {
        closure,
        open_facets: stricts,
    })
}

/// Decomposition by canonical models: labels every cell and
/// merges connected cells sharing a canonical identity.
pub fn decompose_canonical(
    space: &BoundarySpace,
    input: &ChamberInput,
) -> Result<ChamberDecomposition> {
    // Scaling mode tracks MMP outcomes over the whole ambient polytope;
    // the psef constraint only carves out V in the standard layers.
    let region = match input {
        ChamberInput::Surface(si) if matches!(si.mode, SurfaceMode::ScalingOutcomes { .. }) => {
            space.ambient.clone()
        }
        _ => effective_region(space, input),
    };
    let walls = collect_walls(space, input);
    if region.is_empty() {
        return Ok(ChamberDecomposition {
            space_dim: space_dim(space),
            region,
            walls,
            cells: Vec::new(),
            canonical_chambers: Vec::new(),
            minimal_subchambers: Vec::new(),
            minimal_models: Vec::new(),
            note: Some(
                "V is empty: K + B is never pseudo-effective on the ambient polytope".to_string(),
            ),
        });
    }
    let raw_cells = split_cells(&region, &walls);
    let mut cells = Vec::new();
    for cell in raw_cells {
        let sample = cell
            .sample_point()
            .ok_or_else(|| Error::Precondition("arrangement produced an empty cell".into()))?;
        let label = pipeline_label(input, &sample)?;
        cells.push(LabeledCell {
            cell,
            sample,
            label,
        });
    }

    let canonical_chambers = merge_groups(&cells, &walls, |c| {
        // Merge key: canonical identity when present, otherwise the label.
        c.label
            .canonical
            .as_ref()
            .map(|id| (Some(id.clone()), c.label.canonical_label.clone()))
            .unwrap_or((None, c.label.canonical_label.clone()))
    });

    Ok(ChamberDecomposition {
        space_dim: space_dim(space),
        region,
        walls,
        cells,
        canonical_chambers,
        minimal_subchambers: Vec::new(),
        minimal_models: Vec::new(),
        note: None,
    })
}

fn space_dim(space: &BoundarySpace) -> usize {
    space.ambient.dim()
}

type GroupKey = (Option<CanonicalModelId>, String);

fn merge_groups(
    cells: &[LabeledCell],
    walls: &[Wall],
    key: impl Fn(&LabeledCell) -> GroupKey,
) -> Vec<GroupEntry> {
    let keys: Vec<GroupKey> = cells.iter().map(&key).collect();
    // Union-find over cells with equal keys and touching closures.
    let mut parent: Vec<usize> = (0..cells.len()).collect();
    fn find(parent: &mut Vec<usize>, i: usize) -> usize {
        if parent[i] != i {
            let r = find(parent, parent[i]);
            parent[i] = r;
        }
        parent[i]
    }
    for i in 0..cells.len() {
        for j in i + 1..cells.len() {
            if keys[i] == keys[j]
                && polytopes_intersect(&cells[i].cell.closure, &cells[j].cell.closure)
            {
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                if ri != rj {
                    parent[ri] = rj;
                }
            }
        }
    }
    let mut components: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..cells.len() {
        let r = find(&mut parent, i);
        components.entry(r).or_default().push(i);
    }
    let mut groups: Vec<GroupEntry> = Vec::new();
    let mut seen_labels: BTreeSet<String> = BTreeSet::new();
    let mut comps: Vec<Vec<usize>> = components.into_values().collect();
    comps.sort_by_key(|members| {
        cells[members[0]]
            .cell
            .closure
            .vertices()
            .first()
            .cloned()
            .unwrap_or_else(|| QVector::zeros(0))
    });
    for members in comps {
        let label = keys[members[0]].1.clone();
        let note = if !seen_labels.insert(label.clone()) {
            // Chambers with equal canonical model need not be connected;
            // disconnected components stay separate entries.
            Some("disconnected component with a repeated label".to_string())
        } else {
            None
        };
        let (closure, open_facets) = group_closure(cells, &members, walls);
        groups.push(GroupEntry {
            label,
            members,
            closure,
            open_facets,
            parent: None,
            note,
        });
    }
    groups
}

/// Closure of a merged group and the wall facets that remain strict: a wall
/// touching the closure stays open unless some member cell reaches it.
fn group_closure(
    cells: &[LabeledCell],
    members: &[usize],
    walls: &[Wall],
) -> (Polytope, Vec<AffineFunctional>) {
    let mut pts: Vec<QVector> = Vec::new();
    for &i in members {
        pts.extend(cells[i].cell.closure.vertices().iter().cloned());
    }
    let closure = convex_hull(&pts);
    let mut open = Vec::new();
    let mut candidates: Vec<AffineFunctional> = Vec::new();
    for w in walls {
        let p = w.functional.primitive();
        for f in [p.clone(), p.negated()] {
            if !candidates.contains(&f) {
                candidates.push(f);
            }
        }
    }
    for f in candidates {
        let vals: Vec<Rational> = closure.vertices().iter().map(|v| f.eval(v)).collect();
        let touches = vals.iter().any(|v| v.is_zero());
        let proper = vals.iter().any(|v| v.is_positive());
        let all_nonneg = vals.iter().all(|v| !v.is_negative());
        if !(touches && proper && all_nonneg) {
            continue;
        }
        let covered = members.iter().any(|&i| {
            let c = &cells[i].cell;
            let member_touches = c
                .closure
                .vertices()
                .iter()
                .any(|v| f.eval(v).is_zero());
            member_touches && !c.open_facets.contains(&f)
        });
        if !covered {
            open.push(f);
        }
    }
    (closure, open)
}

/// Refinement by minimal models: groups cells inside each
/// canonical chamber by the minimal models valid there, and also reports
/// each minimal model's full region. Containment in the parent closure is
/// checked exactly; convexity is sampled on member midpoints.
pub fn decompose_minimal(
    space: &BoundarySpace,
    input: &ChamberInput,
    canonical: &ChamberDecomposition,
) -> Result<ChamberDecomposition> {
    let _ = (space, input);
    let mut out = canonical.clone();
    let cells = &out.cells;

    let mut subchambers: Vec<GroupEntry> = Vec::new();
    for (vj, group) in out.canonical_chambers.iter().enumerate() {
        let mut ids: BTreeSet<String> = BTreeSet::new();
        for &i in &group.members {
            ids.extend(cells[i].label.minimal_ids.iter().cloned());
        }
        let mut seen_member_sets: Vec<(Vec<usize>, Vec<String>)> = Vec::new();
        for id in ids {
            let members: Vec<usize> = group
                .members
                .iter()
                .copied()
                .filter(|&i| cells[i].label.minimal_ids.contains(&id))
                .collect();
            if members.is_empty() {
                continue;
            }
            if let Some(entry) = seen_member_sets.iter_mut().find(|(m, _)| *m == members) {
                entry.1.push(id);
                continue;
            }
            seen_member_sets.push((members, vec![id]));
        }
        for (members, ids) in seen_member_sets {
            let (closure, open_facets) = group_closure(cells, &members, &out.walls);
            // W sits inside the closure of its canonical chamber.
            for v in closure.vertices() {
                if !group.closure.contains(v) {
                    return Err(Error::InconsistentSurfaceData(format!(
                        "minimal subchamber {} leaves the closure of its canonical chamber",
                        ids.join(" & ")
                    )));
                }
            }
            check_group_convexity(cells, &members, &ids.join(" & "))?;
            subchambers.push(GroupEntry {
                label: ids.join(" & "),
                members,
                closure,
                open_facets,
                parent: Some(vj),
                note: None,
            });
        }
    }

    // Whole-W layer: the region of each minimal model across chambers.
    let mut all_ids: BTreeSet<String> = BTreeSet::new();
    for c in cells {
        all_ids.extend(c.label.minimal_ids.iter().cloned());
    }
    let mut minimal_models = Vec::new();
    for id in all_ids {
        let members: Vec<usize> = (0..cells.len())
            .filter(|&i| cells[i].label.minimal_ids.contains(&id))
            .collect();
        let (closure, open_facets) = group_closure(cells, &members, &out.walls);
        check_group_convexity(cells, &members, &id)?;
        minimal_models.push(GroupEntry {
            label: id,
            members,
            closure,
            open_facets,
            parent: None,
            note: None,
        });
    }

    out.minimal_subchambers = subchambers;
    out.minimal_models = minimal_models;
    Ok(out)
}

/// Midpoints of member samples must land back inside the group.
fn check_group_convexity(cells: &[LabeledCell], members: &[usize], label: &str) -> Result<()> {
    for (a, &i) in members.iter().enumerate() {
        for &j in members.iter().skip(a + 1) {
            let mid = cells[i].sample.add(&cells[j].sample).scale(&rat(1, 2));
            let inside = members
                .iter()
                .any(|&k| cells[k].cell.contains(&mid));
            if !inside {
                return Err(Error::InconsistentSurfaceData(format!(
                    "minimal-model region {label} is not convex: a sample midpoint escapes"
                )));
            }
        }
    }
    Ok(())
}

impl ChamberDecomposition {
    /// Parameterizes a vertex along a 1-dimensional region (exact t in [0,1]).
    fn segment_param(&self, v: &QVector) -> Option<Rational> {
        let verts = self.region.vertices();
        if verts.len() != 2 {
            return None;
        }
        let (p0, p1) = (&verts[0], &verts[1]);
        let dir = p1.sub(p0);
        let i = (0..dir.dim()).find(|&i| !dir.get(i).is_zero())?;
        Some((v.get(i) - p0.get(i)) / dir.get(i))
    }

    fn group_json(&self, g: &GroupEntry) -> Value {
        let mut cell_json = json!({
            "label": g.label,
            "closure": g.closure.to_json(),
            "strict_facets": Value::Array(
                g.open_facets.iter().map(|f| f.to_json(true)).collect()
            ),
            "cells": g.members.iter().map(|&i| i as i64).collect::<Vec<_>>(),
        });
        if let Some(p) = g.parent {
            cell_json["canonical_chamber"] = json!(p as i64);
        }
        if let Some(n) = &g.note {
            cell_json["note"] = json!(n);
        }
        if self.region.affine_dim() == 1 {
            let mut ts: Vec<Rational> = g
                .closure
                .vertices()
                .iter()
                .filter_map(|v| self.segment_param(v))
                .collect();
            ts.sort();
            if !ts.is_empty() {
                cell_json["interval"] = json!([
                    format_rational(&ts[0]),
                    format_rational(ts.last().unwrap())
                ]);
            }
        }
        cell_json
    }

    pub fn to_json(&self) -> Value {
        let cells: Vec<Value> = self
            .cells
            .iter()
            .map(|c| {
                let mut v = c.cell.to_json();
                v["canonical_id"] = json!(c.label.canonical_label);
                v["minimal_ids"] =
                    json!(c.label.minimal_ids.iter().cloned().collect::<Vec<_>>());
                v["outcome"] = json!(c.label.outcome);
                if let Some(id) = &c.label.canonical {
                    v["canonical_detail"] = id.to_json();
                }
                v
            })
            .collect();
        let mut doc = json!({
            "region": self.region.to_json(),
            "walls": self.walls.iter().map(Wall::to_json).collect::<Vec<_>>(),
            "cells": cells,
            "canonical_chambers": self
                .canonical_chambers
                .iter()
                .map(|g| self.group_json(g))
                .collect::<Vec<_>>(),
            "minimal_subchambers": self
                .minimal_subchambers
                .iter()
                .map(|g| self.group_json(g))
                .collect::<Vec<_>>(),
            "minimal_models": self
                .minimal_models
                .iter()
                .map(|g| self.group_json(g))
                .collect::<Vec<_>>(),
        });
        if let Some(n) = &self.note {
            doc["note"] = json!(n);
        }
        doc
    }
}

/// One wall crossing in a flop path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlopStep {
    pub from: String,
    pub to: String,
    pub wall_curve: String,
}

/// Shortest sequence of declared wall crossings connecting two minimal
/// models of the same boundary, staying inside models that remain minimal
/// there. Fails explicitly when the declared graph has no such path.
pub fn flop_path(
    graph: &ModelGraph,
    from: &str,
    to: &str,
    b_coeffs: &[Rational],
) -> Result<Vec<FlopStep>> {
    let b_class = graph.boundary_class(b_coeffs)?;
    let minimal: BTreeSet<String> = graph
        .minimal_models_for(&b_class)
        .iter()
        .map(|m| m.id.clone())
        .collect();
    for id in [from, to] {
        if graph.model(id).is_none() {
            return Err(Error::UnknownName(id.to_string()));
        }
        if !minimal.contains(id) {
            return Err(Error::Precondition(format!(
                "{id} is not a minimal model for this boundary"
            )));
        }
    }
    let node_from = graph.node(from).expect("checked");
    let node_to = graph.node(to).expect("checked");
    let id_from = mmp::canonical_model(&node_from, &b_class)?;
    let id_to = mmp::canonical_model(&node_to, &b_class)?;
    if id_from != id_to {
        return Err(Error::Precondition(
            "models do not share a canonical model at this boundary".to_string(),
        ));
    }
    if from == to {
        return Ok(Vec::new());
    }
    // Breadth-first search over declared adjacencies within minimal models.
    let mut prev: BTreeMap<String, (String, String)> = BTreeMap::new();
    let mut queue = std::collections::VecDeque::from([from.to_string()]);
    let mut visited = BTreeSet::from([from.to_string()]);
    while let Some(cur) = queue.pop_front() {
        if cur == to {
            break;
        }
        for (a, b, wall) in &graph.adjacency {
            let next = if a == &cur {
                b
            } else if b == &cur {
                a
            } else {
                continue;
            };
            if !minimal.contains(next) || !visited.insert(next.clone()) {
                continue;
            }
            prev.insert(next.clone(), (cur.clone(), wall.clone()));
            queue.push_back(next.clone());
        }
    }
    if !visited.contains(to) {
        return Err(Error::NoPath(format!(
            "declared graph does not connect {from} to {to} at this boundary"
        )));
    }
    let mut path = Vec::new();
    let mut cur = to.to_string();
    while cur != from {
        let (p, wall) = prev.get(&cur).expect("visited").clone();
        path.push(FlopStep {
            from: p.clone(),
            to: cur.clone(),
            wall_curve: wall,
        });
        cur = p;
    }
    path.reverse();
    Ok(path)
}

/// Closed-form family of chamber cones `cone(r(n-1), r(n))` with an affine
/// ray formula; never materialized beyond the queried range.
#[derive(Clone, Debug)]
pub struct FamilyDescriptor {
    pub dim: usize,
    /// `r(n) = sum_k ray_coeffs[k] * n^k`, exact for all integer n.
    pub ray_coeffs: Vec<QVector>,
    pub accumulation_rays: Vec<QVector>,
    pub psef_cone: Cone,
    pub projection: Option<QMatrix>,
    pub apex: Option<QVector>,
    /// Note on generators that carry no effective representative.
    pub effectivity_note: Option<String>,
}

impl FamilyDescriptor {
    pub fn ray(&self, n: i64) -> QVector {
        let n = Rational::from_integer(n.into());
        let mut acc = QVector::zeros(self.dim);
        let mut power = Rational::from_integer(1.into());
        for c in &self.ray_coeffs {
            acc = acc.add(&c.scale(&power));
            power *= &n;
        }
        acc
    }
}

/// Exact finite enumeration of the family indices whose chamber cone meets
/// a compact region away from the accumulation rays.
pub fn chambers_meeting(family: &FamilyDescriptor, region: &Polytope) -> Result<Vec<i64>> {
    if family.dim != 2 || region.dim() != 2 {
        return Err(Error::Precondition(
            "chamber enumeration is implemented for planar families".to_string(),
        ));
    }
    if family.ray_coeffs.len() != 2 {
        return Err(Error::Precondition(
            "chamber enumeration needs an affine ray formula".to_string(),
        ));
    }
    if region.is_empty() {
        return Ok(Vec::new());
    }
    for ray in &family.accumulation_rays {
        if ray_meets_polytope(ray, region) {
            return Err(Error::AccumulationLocus);
        }
    }
    let det = |a: &QVector, b: &QVector| a.get(0) * b.get(1) - a.get(1) * b.get(0);
    let c0 = &family.ray_coeffs[0];
    let c1 = &family.ray_coeffs[1];

    let mut inside = 0usize;
    let mut lo: Option<Rational> = None;
    let mut hi: Option<Rational> = None;
    for v in region.vertices() {
        if !family.psef_cone.contains(v) {
            continue;
        }
        inside += 1;
        let d1 = det(c1, v);
        if d1.is_zero() {
            // On the accumulation direction; excluded by the ray check
            // unless the vertex sits on the opposite branch.
            continue;
        }
        let nstar = -det(c0, v) / d1;
        lo = Some(match lo {
            None => nstar.clone(),
            Some(l) => l.min(nstar.clone()),
        });
        hi = Some(match hi {
            None => nstar,
            Some(h) => h.max(nstar),
        });
    }
    if inside == 0 {
        return Ok(Vec::new());
    }
    if inside != region.vertices().len() {
        return Err(Error::Precondition(
            "region crosses the pseudo-effective boundary away from the accumulation rays"
                .to_string(),
        ));
    }
    let (lo, hi) = (lo.expect("inside > 0"), hi.expect("inside > 0"));
    let lo_i = lo.floor().to_integer();
    let hi_i = hi.ceil().to_integer();
    let lo_i = i64::try_from(lo_i).map_err(|_| Error::Precondition("index range overflow".into()))? - 1;
    let hi_i = i64::try_from(hi_i).map_err(|_| Error::Precondition("index range overflow".into()))? + 1;

    let mut hits = Vec::new();
    for n in lo_i..=hi_i {
        if chamber_cone_meets(family, n, region) {
            hits.push(n);
        }
    }
    Ok(hits)
}

/// Does `cone(r(n-1), r(n))` meet the region? Exact LP feasibility.
pub fn chamber_cone_meets(family: &FamilyDescriptor, n: i64, region: &Polytope) -> bool {
    let r_prev = family.ray(n - 1);
    let r_cur = family.ray(n);
    let verts = region.vertices();
    let cols = 2 + verts.len();
    let mut m = QMatrix::zeros(3, cols);
    for i in 0..2 {
        m.set(i, 0, r_prev.get(i).clone());
        m.set(i, 1, r_cur.get(i).clone());
        for (j, v) in verts.iter().enumerate() {
            m.set(i, 2 + j, -v.get(i).clone());
        }
    }
    for j in 0..verts.len() {
        m.set(2, 2 + j, Rational::from_integer(1.into()));
    }
    let rhs = vec![
        Rational::zero(),
        Rational::zero(),
        Rational::from_integer(1.into()),
    ];
    lp::feasible_point(&m, &rhs).is_some()
}

fn ray_meets_polytope(ray: &QVector, region: &Polytope) -> bool {
    let verts = region.vertices();
    let d = ray.dim();
    let cols = 1 + verts.len();
    let mut m = QMatrix::zeros(d + 1, cols);
    for i in 0..d {
        m.set(i, 0, ray.get(i).clone());
        for (j, v) in verts.iter().enumerate() {
            m.set(i, 1 + j, -v.get(i).clone());
        }
    }
    for j in 0..verts.len() {
        m.set(d, 1 + j, Rational::from_integer(1.into()));
    }
    let mut rhs = vec![Rational::zero(); d];
    rhs.push(Rational::from_integer(1.into()));
    lp::feasible_point(&m, &rhs).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::ratlin::rint;

    #[test]
    fn effective_region_examples() {
        // Ample-everywhere toy data: V equals the ambient polytope.
        let x = gallery::single_negative_curve_surface();
        let space = BoundarySpace {
            ambient: convex_hull(&[
                QVector::from_ints(&[0]),
                QVector::from_ints(&[1]),
            ]),
            rational_flag: true,
        };
        // Boundary generator f is nef and K + b f stays psef for b in [0,1]:
        // K = E... use the chain fixture instead for a clean statement.
        let _ = x;
        let chain = gallery::chain_surface(2, 3);
        let space2 = BoundarySpace {
            ambient: convex_hull(&[
                QVector::new(vec![rint(0), rint(0)]),
                QVector::new(vec![rat(3, 4), rint(0)]),
                QVector::new(vec![rint(0), rat(3, 4)]),
                QVector::new(vec![rat(3, 4), rat(3, 4)]),
            ]),
            rational_flag: true,
        };
        let input = ChamberInput::Surface(SurfaceInput {
            surface: &chain,
            scaling: &gallery::chain_ample_class(&chain),
            mode: SurfaceMode::Standard,
            model_names: &BTreeMap::new(),
        });
        let v = effective_region(&space2, &input);
        assert_eq!(v, space2.ambient);
        let _ = space;
    }

    #[test]
    fn example1_effective_region_is_empty() {
        let fx = gallery::example1_surface();
        let space = gallery::example1_space();
        let names = BTreeMap::new();
        let h = QVector::from_ints(&[-1, 2]);
        let input = ChamberInput::Surface(SurfaceInput {
            surface: &fx,
            scaling: &h,
            mode: SurfaceMode::Standard,
            model_names: &names,
        });
        let v = effective_region(&space, &input);
        assert!(v.is_empty());
        let dec = decompose_canonical(&space, &input).unwrap();
        assert!(dec.note.is_some());
        assert!(dec.cells.is_empty());
    }

    #[test]
    fn example2_canonical_layer() {
        let g = gallery::example2_graph();
        let space = gallery::example2_space();
        let input = ChamberInput::Abstract(&g);
        let dec = decompose_canonical(&space, &input).unwrap();
        // Five arrangement cells (the psef walls split off the endpoints),
        // merged into three canonical chambers.
        assert_eq!(dec.cells.len(), 5);
        let labels: BTreeSet<String> = dec
            .canonical_chambers
            .iter()
            .map(|g| g.label.clone())
            .collect();
        assert_eq!(
            labels,
            BTreeSet::from(["X-".to_string(), "Y".to_string(), "X+".to_string()])
        );
        assert_eq!(dec.canonical_chambers.len(), 3);
        // Interior wall from the flop curve at b1 = b2.
        assert!(dec.walls.iter().any(|w| matches!(
            &w.origin,
            WallOrigin::Curve { curve, .. } if curve == "flop" || curve == "flop+"
        )));
    }

    #[test]
    fn example2_minimal_layer() {
        let g = gallery::example2_graph();
        let space = gallery::example2_space();
        let input = ChamberInput::Abstract(&g);
        let canonical = decompose_canonical(&space, &input).unwrap();
        let dec = decompose_minimal(&space, &input, &canonical).unwrap();
        let wm = dec
            .minimal_models
            .iter()
            .find(|g| g.label == "X-")
            .expect("W for X-");
        let wp = dec
            .minimal_models
            .iter()
            .find(|g| g.label == "X+")
            .expect("W for X+");
        // Closures [0,1/2] and [1/2,1] in coefficients (b1, b2) on the segment.
        let wall_pt = QVector::new(vec![rat(1, 2), rat(1, 2)]);
        assert!(wm.closure.vertices().contains(&wall_pt));
        assert!(wp.closure.vertices().contains(&wall_pt));
        assert!(wm.closure.vertices().contains(&QVector::from_ints(&[1, 0])));
        assert!(wp.closure.vertices().contains(&QVector::from_ints(&[0, 1])));
        // W closures are closed: no strict facets.
        assert!(wm.open_facets.is_empty());
        assert!(wp.open_facets.is_empty());
        // The wall chamber {1/2} meets both.
        let v0 = dec
            .canonical_chambers
            .iter()
            .position(|g| g.label == "Y")
            .unwrap();
        let middle_subs: Vec<&GroupEntry> = dec
            .minimal_subchambers
            .iter()
            .filter(|g| g.parent == Some(v0))
            .collect();
        assert_eq!(middle_subs.len(), 1);
        assert_eq!(middle_subs[0].label, "X+ & X-");
    }

    #[test]
    fn flop_path_examples() {
        let g = gallery::example2_graph();
        let b = [rat(1, 2), rat(1, 2)];
        let path = flop_path(&g, "X-", "X+", &b).unwrap();
        assert_eq!(path.len(), 1);
        assert_eq!(path[0].wall_curve, "flop");
        assert!(flop_path(&g, "X-", "X-", &b).unwrap().is_empty());
        // Away from the wall X+ is not minimal: refused.
        assert!(matches!(
            flop_path(&g, "X-", "X+", &[rat(3, 4), rat(1, 4)]),
            Err(Error::Precondition(_))
        ));
        // Disconnected declared graph: explicit failure.
        let mut g2 = g.clone();
        g2.adjacency.clear();
        assert!(matches!(
            flop_path(&g2, "X-", "X+", &b),
            Err(Error::NoPath(_))
        ));
    }

    #[test]
    fn walls_on_chain_fixture() {
        let chain = gallery::chain_surface(2, 3);
        let space = BoundarySpace {
            ambient: convex_hull(&[
                QVector::new(vec![rint(0), rint(0)]),
                QVector::new(vec![rat(3, 4), rint(0)]),
                QVector::new(vec![rint(0), rat(3, 4)]),
                QVector::new(vec![rat(3, 4), rat(3, 4)]),
            ]),
            rational_flag: true,
        };
        let names = BTreeMap::new();
        let h = gallery::chain_ample_class(&chain);
        let input = ChamberInput::Surface(SurfaceInput {
            surface: &chain,
            scaling: &h,
            mode: SurfaceMode::Standard,
            model_names: &names,
        });
        let walls = collect_walls(&space, &input);
        // Root curve walls plus pushed walls from one-contraction models.
        assert!(walls
            .iter()
            .any(|w| matches!(&w.origin, WallOrigin::Curve { model, .. } if model == "root")));
        assert!(walls
            .iter()
            .any(|w| matches!(&w.origin, WallOrigin::Curve { model, .. } if model.contains("/-"))));
    }

    #[test]
    fn chain_box_minimal_chambers() {
        // Two-curve chain over a coefficient box: one canonical chamber
        // (everything maps to the base) split into four minimal regions:
        // origin, two open edges, and the open interior.
        let chain = gallery::chain_surface(2, 3);
        let space = BoundarySpace {
            ambient: convex_hull(&[
                QVector::new(vec![rint(0), rint(0)]),
                QVector::new(vec![rat(3, 4), rint(0)]),
                QVector::new(vec![rint(0), rat(3, 4)]),
                QVector::new(vec![rat(3, 4), rat(3, 4)]),
            ]),
            rational_flag: true,
        };
        let names = BTreeMap::new();
        let h = gallery::chain_ample_class(&chain);
        let input = ChamberInput::Surface(SurfaceInput {
            surface: &chain,
            scaling: &h,
            mode: SurfaceMode::Standard,
            model_names: &names,
        });
        let canonical = decompose_canonical(&space, &input).unwrap();
        assert_eq!(
            canonical.canonical_chambers.len(),
            1,
            "the canonical model is the base everywhere"
        );
        let dec = decompose_minimal(&space, &input, &canonical).unwrap();
        let ids: BTreeSet<String> = dec
            .minimal_models
            .iter()
            .map(|g| g.label.clone())
            .collect();
        assert_eq!(
            ids,
            BTreeSet::from([
                "root".to_string(),
                "root/-E1".to_string(),
                "root/-E2".to_string(),
                "root/-E1/-E2".to_string(),
            ])
        );
        // The interior region belongs to the full contraction.
        let interior = dec
            .minimal_models
            .iter()
            .find(|g| g.label == "root/-E1/-E2")
            .unwrap();
        assert!(interior
            .closure
            .vertices()
            .contains(&QVector::new(vec![rat(3, 4), rat(3, 4)])));
    }

    #[test]
    fn single_curve_wall_merges_with_contraction_chamber() {
        // B = b f on the one-curve surface: K + B pairs b - 1 with E.
        // Below b = 1 the MMP contracts E and K+C is ample on the target;
        // at b = 1 the curve goes trivial on the root. Both describe the
        // same canonical map (contract E), so (0,1] is one chamber, and
        // {0}, where K+C is numerically trivial, maps to the base instead.
        let x = gallery::single_negative_curve_surface();
        let space = BoundarySpace {
            ambient: convex_hull(&[
                QVector::from_ints(&[0, 0]),
                QVector::from_ints(&[0, 2]),
            ]),
            rational_flag: true,
        };
        let names = BTreeMap::new();
        let h = QVector::from_ints(&[0, 1]);
        let input = ChamberInput::Surface(SurfaceInput {
            surface: &x,
            scaling: &h,
            mode: SurfaceMode::Standard,
            model_names: &names,
        });
        let canonical = decompose_canonical(&space, &input).unwrap();
        let labels: Vec<(String, usize)> = canonical
            .canonical_chambers
            .iter()
            .map(|g| (g.label.clone(), g.members.len()))
            .collect();
        assert_eq!(canonical.canonical_chambers.len(), 3, "{labels:?}");
        let with_e = canonical
            .canonical_chambers
            .iter()
            .find(|g| g.label == "root/-E")
            .expect("contraction chamber");
        // (0, 1]: two fine cells merged, closed at the wall, open at 0.
        assert_eq!(with_e.members.len(), 2);
        assert!(with_e
            .closure
            .vertices()
            .contains(&QVector::from_ints(&[0, 1])));
        assert_eq!(with_e.open_facets.len(), 1);
        assert!(canonical
            .canonical_chambers
            .iter()
            .any(|g| g.label == "base pt"));
    }

    #[test]
    fn family_enumeration_box() {
        let fam = gallery::example3_family();
        let region = convex_hull(&[
            QVector::new(vec![rint(1), rat(-1, 2)]),
            QVector::new(vec![rint(2), rat(-1, 2)]),
            QVector::new(vec![rint(1), rat(1, 2)]),
            QVector::new(vec![rint(2), rat(1, 2)]),
        ]);
        assert_eq!(chambers_meeting(&fam, &region).unwrap(), vec![0, 1, 2]);
    }

    #[test]
    fn family_enumeration_point() {
        let fam = gallery::example3_family();
        let region = convex_hull(&[QVector::from_ints(&[1, 1])]);
        assert_eq!(chambers_meeting(&fam, &region).unwrap(), vec![0]);
    }

    #[test]
    fn family_refuses_accumulation() {
        let fam = gallery::example3_family();
        let region = convex_hull(&[
            QVector::from_ints(&[0, -2]),
            QVector::from_ints(&[2, -2]),
            QVector::from_ints(&[0, 0]),
            QVector::from_ints(&[2, 0]),
        ]);
        // Contains (1, -1).
        assert!(matches!(
            chambers_meeting(&fam, &region),
            Err(Error::AccumulationLocus)
        ));
    }

    #[test]
    fn family_outside_psef_is_empty() {
        let fam = gallery::example3_family();
        let region = convex_hull(&[
            QVector::from_ints(&[-3, -3]),
            QVector::from_ints(&[-2, -3]),
            QVector::from_ints(&[-3, -2]),
        ]);
        assert_eq!(chambers_meeting(&fam, &region).unwrap(), Vec::<i64>::new());
    }

    #[test]
    fn example1_scaling_mode_chambers() {
        let dec = gallery::example1_decomposition().unwrap();
        assert_eq!(dec.cells.len(), 3);
        let ids: Vec<BTreeSet<String>> = dec
            .cells
            .iter()
            .map(|c| c.label.minimal_ids.clone())
            .collect();
        assert!(ids.contains(&BTreeSet::from(["X0".to_string()])));
        assert!(ids.contains(&BTreeSet::from(["X".to_string()])));
        assert!(ids.contains(&BTreeSet::from(["X1".to_string()])));
        for c in &dec.cells {
            assert_eq!(c.label.canonical_label, "base S");
        }
    }
}

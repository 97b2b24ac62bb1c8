//! Exact convex cones and polytopes.
//!
//! Cones carry both a generator form and a halfspace form, converted by an
//! incremental double description sweep with a rank-based adjacency test.
//! Non-pointed cones are handled by tracking the lineality space explicitly;
//! a line contributes both directions to the generator list. Dimensions stay
//! small here, so hull and redundancy questions are settled by exact LP
//! rather than output-sensitive machinery.

use std::collections::BTreeSet;
use std::sync::OnceLock;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::lp;
use crate::ratlin::{format_rational, parse_rational, QMatrix, QVector, Rational};
use crate::{Error, Result};

/// Canonical generator form: a basis of the lineality space plus the extreme
/// rays of the pointed quotient, reduced modulo the lineality space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VForm {
    pub lines: Vec<QVector>,
    pub rays: Vec<QVector>,
}

impl VForm {
    /// Expands to a plain generator list: rays plus both directions of each line.
    pub fn generator_list(&self) -> Vec<QVector> {
        let mut gens = self.rays.clone();
        for l in &self.lines {
            gens.push(l.clone());
            gens.push(l.neg());
        }
        gens
    }

    pub fn is_trivial(&self) -> bool {
        self.lines.is_empty() && self.rays.is_empty()
    }
}

struct DdRay {
    vec: QVector,
    tight: BTreeSet<usize>,
}

/// Generator form of `{x | <h, x> >= 0 for all h}` by double description.
fn dd_from_halfspaces(dim: usize, constraints: &[QVector]) -> VForm {
    let mut lines: Vec<QVector> = (0..dim).map(|i| QVector::unit(dim, i)).collect();
    let mut rays: Vec<DdRay> = Vec::new();

    for (k, h) in constraints.iter().enumerate() {
        assert_eq!(h.dim(), dim, "halfspace dimension mismatch");
        if h.is_zero() {
            for r in rays.iter_mut() {
                r.tight.insert(k);
            }
            continue;
        }
        let line_hit = lines.iter().position(|l| !h.dot(l).is_zero());
        if let Some(idx) = line_hit {
            // The lineality space loses one dimension; the pivot line becomes
            // a ray on the nonnegative side of h.
            let l0 = lines.remove(idx);
            let s = h.dot(&l0);
            for l in lines.iter_mut() {
                let c = h.dot(l) / &s;
                *l = l.sub(&l0.scale(&c)).primitive_signed();
            }
            for r in rays.iter_mut() {
                let c = h.dot(&r.vec) / &s;
                r.vec = r.vec.sub(&l0.scale(&c)).primitive();
                r.tight.insert(k);
            }
            let r0 = if s.is_positive() { l0 } else { l0.neg() };
            rays.push(DdRay {
                vec: r0.primitive(),
                tight: (0..k).collect(),
            });
            continue;
        }

        let mut plus: Vec<DdRay> = Vec::new();
        let mut zero: Vec<DdRay> = Vec::new();
        let mut minus: Vec<DdRay> = Vec::new();
        for r in rays.drain(..) {
            let v = h.dot(&r.vec);
            if v.is_positive() {
                plus.push(r);
            } else if v.is_zero() {
                zero.push(r);
            } else {
                minus.push(r);
            }
        }
        let mut next: Vec<DdRay> = Vec::new();
        let lin_dim = lines.len();
        for p in &plus {
            for n in &minus {
                let common: Vec<usize> = p.tight.intersection(&n.tight).copied().collect();
                if !adjacent(dim, lin_dim, constraints, &common) {
                    continue;
                }
                let hp = h.dot(&p.vec);
                let hn = h.dot(&n.vec);
                let w = n.vec.scale(&hp).sub(&p.vec.scale(&hn)).primitive();
                if w.is_zero() || next.iter().any(|r| r.vec == w) {
                    continue;
                }
                let mut tight: BTreeSet<usize> = common.into_iter().collect();
                tight.insert(k);
                next.push(DdRay { vec: w, tight });
            }
        }
        for mut r in zero {
            r.tight.insert(k);
            next.push(r);
        }
        next.extend(plus);
        rays = next;
    }

    canonicalize_vform(lines, rays.into_iter().map(|r| r.vec).collect())
}

/// Two rays are adjacent iff the minimal face containing both has dimension
/// `lineality + 2`, i.e. the normals tight at both span `dim - lineality - 2`.
fn adjacent(dim: usize, lin_dim: usize, constraints: &[QVector], common: &[usize]) -> bool {
    if dim < lin_dim + 2 {
        return false;
    }
    let need = dim - lin_dim - 2;
    if need == 0 {
        return true;
    }
    if common.len() < need {
        return false;
    }
    let rows: Vec<QVector> = common.iter().map(|&i| constraints[i].clone()).collect();
    QMatrix::from_rows(&rows).rank() == need
}

/// Canonical form: RREF lineality basis, rays reduced mod lineality,
/// primitive, non-extreme rays pruned, sorted.
fn canonicalize_vform(lines: Vec<QVector>, rays: Vec<QVector>) -> VForm {
    let (line_basis, pivots) = if lines.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        let (rref, pivots) = QMatrix::from_rows(&lines).rref();
        let basis: Vec<QVector> = (0..pivots.len())
            .map(|r| rref.row_vec(r).primitive_signed())
            .collect();
        (basis, pivots)
    };

    let mut reduced: Vec<QVector> = Vec::new();
    for ray in rays {
        let mut v = ray;
        for (b, &p) in line_basis.iter().zip(&pivots) {
            if !v.get(p).is_zero() {
                let c = v.get(p) / b.get(p);
                v = v.sub(&b.scale(&c));
            }
        }
        let v = v.primitive();
        if v.is_zero() || reduced.contains(&v) {
            continue;
        }
        reduced.push(v);
    }
    // Prune rays that are nonnegative combinations of the others.
    let mut keep = vec![true; reduced.len()];
    for i in 0..reduced.len() {
        let others: Vec<QVector> = reduced
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && keep[*j])
            .map(|(_, v)| v.clone())
            .collect();
        if lp::in_cone_hull(&reduced[i], &others, &line_basis) {
            keep[i] = false;
        }
    }
    let mut rays: Vec<QVector> = reduced
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(v, _)| v)
        .collect();
    rays.sort();
    VForm {
        lines: line_basis,
        rays,
    }
}

/// Exact membership classification against the canonical halfspace form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Interior,
    Boundary,
    Outside,
}

/// A closed convex polyhedral cone, possibly non-pointed or lower-dimensional.
#[derive(Debug)]
pub struct Cone {
    dim: usize,
    raw_generators: Option<Vec<QVector>>,
    raw_halfspaces: Option<Vec<QVector>>,
    vform: OnceLock<VForm>,
    dual_vform: OnceLock<VForm>,
}

impl Clone for Cone {
    fn clone(&self) -> Self {
        Self {
            dim: self.dim,
            raw_generators: self.raw_generators.clone(),
            raw_halfspaces: self.raw_halfspaces.clone(),
            vform: self.vform.clone(),
            dual_vform: self.dual_vform.clone(),
        }
    }
}

impl Cone {
    pub fn from_generators(dim: usize, generators: Vec<QVector>) -> Self {
        for g in &generators {
            assert_eq!(g.dim(), dim, "generator dimension mismatch");
        }
        Self {
            dim,
            raw_generators: Some(generators),
            raw_halfspaces: None,
            vform: OnceLock::new(),
            dual_vform: OnceLock::new(),
        }
    }

    pub fn from_halfspaces(dim: usize, halfspaces: Vec<QVector>) -> Self {
        for h in &halfspaces {
            assert_eq!(h.dim(), dim, "halfspace dimension mismatch");
        }
        Self {
            dim,
            raw_generators: None,
            raw_halfspaces: Some(halfspaces),
            vform: OnceLock::new(),
            dual_vform: OnceLock::new(),
        }
    }

    pub fn full_space(dim: usize) -> Self {
        Self::from_halfspaces(dim, Vec::new())
    }

    pub fn origin_only(dim: usize) -> Self {
        Self::from_generators(dim, Vec::new())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Declared generator list if the cone was built from one.
    pub fn raw_generators(&self) -> Option<&[QVector]> {
        self.raw_generators.as_deref()
    }

    /// Canonical generator form of this cone.
    pub fn vform(&self) -> &VForm {
        self.vform.get_or_init(|| {
            if let Some(hs) = &self.raw_halfspaces {
                dd_from_halfspaces(self.dim, hs)
            } else {
                // Double dual: our generators constrain the dual, and the
                // dual's generators are our halfspaces.
                let dual = self.dual_vform();
                dd_from_halfspaces(self.dim, &dual.generator_list())
            }
        })
    }

    /// Canonical generator form of the dual cone (= canonical halfspaces).
    pub fn dual_vform(&self) -> &VForm {
        self.dual_vform.get_or_init(|| {
            if let Some(gens) = &self.raw_generators {
                dd_from_halfspaces(self.dim, gens)
            } else {
                let vf = self.vform();
                dd_from_halfspaces(self.dim, &vf.generator_list())
            }
        })
    }

    pub fn generators(&self) -> Vec<QVector> {
        self.vform().generator_list()
    }

    pub fn halfspaces(&self) -> Vec<QVector> {
        self.dual_vform().generator_list()
    }

    pub fn dual(&self) -> Cone {
        let vform = match self.dual_vform.get() {
            Some(v) => OnceLock::from(v.clone()),
            None => OnceLock::new(),
        };
        let dual_vform = match self.vform.get() {
            Some(v) => OnceLock::from(v.clone()),
            None => OnceLock::new(),
        };
        Cone {
            dim: self.dim,
            raw_generators: self.raw_halfspaces.clone(),
            raw_halfspaces: self.raw_generators.clone(),
            vform,
            dual_vform,
        }
    }

    pub fn membership(&self, v: &QVector) -> Result<Membership> {
        if v.dim() != self.dim {
            return Err(Error::dimension(format!(
                "membership: point has dim {}, cone has dim {}",
                v.dim(),
                self.dim
            )));
        }
        let mut boundary = false;
        for h in self.halfspaces() {
            let val = h.dot(v);
            if val.is_negative() {
                return Ok(Membership::Outside);
            }
            if val.is_zero() {
                boundary = true;
            }
        }
        Ok(if boundary {
            Membership::Boundary
        } else {
            Membership::Interior
        })
    }

    pub fn contains(&self, v: &QVector) -> bool {
        matches!(
            self.membership(v),
            Ok(Membership::Interior) | Ok(Membership::Boundary)
        )
    }

    pub fn is_pointed(&self) -> bool {
        self.vform().lines.is_empty()
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.dual_vform().lines.is_empty()
    }

    /// Structural equality of canonical forms.
    pub fn canonical_eq(&self, other: &Cone) -> bool {
        self.dim == other.dim && self.vform() == other.vform()
    }

    pub fn to_json(&self) -> Value {
        json!({ "generators": vectors_to_json(&self.generators()) })
    }

    pub fn from_json(dim: usize, v: &Value) -> std::result::Result<Cone, String> {
        if let Some(gens) = v.get("generators") {
            Ok(Cone::from_generators(dim, vectors_from_json(dim, gens)?))
        } else if let Some(hs) = v.get("halfspaces") {
            Ok(Cone::from_halfspaces(dim, vectors_from_json(dim, hs)?))
        } else {
            Err("cone needs 'generators' or 'halfspaces'".to_string())
        }
    }
}

pub fn vectors_to_json(vs: &[QVector]) -> Value {
    Value::Array(vs.iter().map(vector_to_json).collect())
}

pub fn vector_to_json(v: &QVector) -> Value {
    Value::Array(
        v.iter()
            .map(|r| Value::String(format_rational(r)))
            .collect(),
    )
}

pub fn vector_from_json(dim: usize, v: &Value) -> std::result::Result<QVector, String> {
    let arr = v.as_array().ok_or("expected an array of rationals")?;
    if arr.len() != dim {
        return Err(format!("expected {} entries, found {}", dim, arr.len()));
    }
    let mut entries = Vec::with_capacity(dim);
    for e in arr {
        let s = e.as_str().ok_or("rationals serialize as strings")?;
        entries.push(parse_rational(s)?);
    }
    Ok(QVector::new(entries))
}

pub fn vectors_from_json(dim: usize, v: &Value) -> std::result::Result<Vec<QVector>, String> {
    let arr = v.as_array().ok_or("expected an array of vectors")?;
    arr.iter().map(|e| vector_from_json(dim, e)).collect()
}

/// Affine functional `b -> offset + <normal, b>`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct AffineFunctional {
    pub normal: QVector,
    pub offset: Rational,
}

impl AffineFunctional {
    pub fn new(normal: QVector, offset: Rational) -> Self {
        Self { normal, offset }
    }

    pub fn eval(&self, p: &QVector) -> Rational {
        &self.offset + self.normal.dot(p)
    }

    /// Primitive form preserving orientation; used to dedupe walls.
    pub fn primitive(&self) -> AffineFunctional {
        let mut joint = vec![self.offset.clone()];
        joint.extend(self.normal.iter().cloned());
        let prim = QVector::new(joint).primitive();
        AffineFunctional {
            offset: prim.get(0).clone(),
            normal: QVector::new(prim.entries()[1..].to_vec()),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.offset.is_zero() && self.normal.is_zero()
    }

    pub fn negated(&self) -> AffineFunctional {
        AffineFunctional {
            normal: self.normal.neg(),
            offset: -self.offset.clone(),
        }
    }

    pub fn to_json(&self, strict: bool) -> Value {
        json!({
            "normal": vector_to_json(&self.normal),
            "offset": format_rational(&self.offset),
            "strict": strict,
        })
    }
}

/// Closed convex hull of finitely many points; vertices are canonical
/// (minimal set, lexicographically sorted). May be empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    dim: usize,
    vertices: Vec<QVector>,
}

impl Polytope {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            vertices: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[QVector] {
        &self.vertices
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, p: &QVector) -> bool {
        !self.is_empty() && lp::in_convex_hull(p, &self.vertices)
    }

    /// Barycenter of the vertices: a point of the relative interior.
    pub fn relative_interior_point(&self) -> Option<QVector> {
        if self.is_empty() {
            return None;
        }
        let n = Rational::from_integer((self.vertices.len() as i64).into());
        let mut acc = QVector::zeros(self.dim);
        for v in &self.vertices {
            acc = acc.add(v);
        }
        Some(acc.scale(&n.recip()))
    }

    /// Dimension of the affine hull; -1 when empty.
    pub fn affine_dim(&self) -> i64 {
        if self.vertices.is_empty() {
            return -1;
        }
        let base = &self.vertices[0];
        let rows: Vec<QVector> = self.vertices[1..].iter().map(|v| v.sub(base)).collect();
        if rows.is_empty() {
            return 0;
        }
        QMatrix::from_rows(&rows).rank() as i64
    }

    pub fn affine_hull_contains(&self, p: &QVector) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let base = &self.vertices[0];
        let rows: Vec<QVector> = self.vertices[1..].iter().map(|v| v.sub(base)).collect();
        if rows.is_empty() {
            return p == base;
        }
        let m = QMatrix::from_rows(&rows).transpose();
        m.solve_consistent(&p.sub(base)).is_some()
    }

    pub fn to_json(&self) -> Value {
        json!({ "vertices": vectors_to_json(&self.vertices) })
    }

    pub fn from_json(dim: usize, v: &Value) -> std::result::Result<Polytope, String> {
        let pts = vectors_from_json(dim, v.get("vertices").ok_or("polytope needs 'vertices'")?)?;
        if pts.is_empty() {
            return Ok(Polytope::empty(dim));
        }
        Ok(convex_hull(&pts))
    }
}

/// Minimal vertex set of the convex hull; each candidate is kept iff it is
/// not a convex combination of the others (exact LP separation).
pub fn convex_hull(points: &[QVector]) -> Polytope {
    assert!(!points.is_empty(), "convex_hull of an empty set");
    let dim = points[0].dim();
    let mut unique: Vec<QVector> = Vec::new();
    for p in points {
        assert_eq!(p.dim(), dim, "hull point dimension mismatch");
        if !unique.contains(p) {
            unique.push(p.clone());
        }
    }
    let mut keep = vec![true; unique.len()];
    for i in 0..unique.len() {
        let others: Vec<QVector> = unique
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i && keep[*j])
            .map(|(_, v)| v.clone())
            .collect();
        if !others.is_empty() && lp::in_convex_hull(&unique[i], &others) {
            keep[i] = false;
        }
    }
    let mut vertices: Vec<QVector> = unique
        .into_iter()
        .zip(keep)
        .filter(|(_, k)| *k)
        .map(|(v, _)| v)
        .collect();
    vertices.sort();
    Polytope { dim, vertices }
}

/// Convex hull of the apex with the base. The apex must leave the affine
/// hull of the base, otherwise the construction degenerates.
pub fn cone_over_polytope(apex: &QVector, base: &Polytope) -> Result<Polytope> {
    if base.is_empty() || base.affine_hull_contains(apex) {
        return Err(Error::DegenerateApex);
    }
    let mut pts = base.vertices.clone();
    pts.push(apex.clone());
    Ok(convex_hull(&pts))
}

/// Intersects a polytope with closed halfspaces `{eval >= 0}` exactly.
///
/// Each clip keeps the vertices on the closed side and adds the crossing of
/// every straddling vertex pair; re-hulling then discards interior points.
pub fn polytope_intersect_halfspaces(p: &Polytope, halfspaces: &[AffineFunctional]) -> Polytope {
    let mut current = p.vertices.clone();
    for h in halfspaces {
        if current.is_empty() {
            break;
        }
        let vals: Vec<Rational> = current.iter().map(|v| h.eval(v)).collect();
        let mut next: Vec<QVector> = Vec::new();
        for (v, val) in current.iter().zip(&vals) {
            if !val.is_negative() {
                next.push(v.clone());
            }
        }
        for i in 0..current.len() {
            for j in i + 1..current.len() {
                let (vi, vj) = (&vals[i], &vals[j]);
                if (vi.is_positive() && vj.is_negative())
                    || (vi.is_negative() && vj.is_positive())
                {
                    // Crossing point of the segment with {eval = 0}.
                    let t = vi / (vi - vj);
                    let pt = current[i].add(&current[j].sub(&current[i]).scale(&t));
                    next.push(pt);
                }
            }
        }
        current = if next.is_empty() {
            Vec::new()
        } else {
            convex_hull(&next).vertices
        };
    }
    if current.is_empty() {
        Polytope::empty(p.dim)
    } else {
        convex_hull(&current)
    }
}

/// Do two polytopes share a point? Exact LP feasibility.
pub fn polytopes_intersect(a: &Polytope, b: &Polytope) -> bool {
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let d = a.dim;
    let (na, nb) = (a.vertices.len(), b.vertices.len());
    let mut m = QMatrix::zeros(d + 2, na + nb);
    for (j, v) in a.vertices.iter().enumerate() {
        for i in 0..d {
            m.set(i, j, v.get(i).clone());
        }
        m.set(d, j, Rational::from_integer(1.into()));
    }
    for (j, v) in b.vertices.iter().enumerate() {
        for i in 0..d {
            m.set(i, na + j, -v.get(i).clone());
        }
        m.set(d + 1, na + j, Rational::from_integer(1.into()));
    }
    let mut rhs = vec![Rational::zero(); d];
    rhs.push(Rational::from_integer(1.into()));
    rhs.push(Rational::from_integer(1.into()));
    lp::feasible_point(&m, &rhs).is_some()
}

/// One face of the visible part of a cone boundary.
#[derive(Clone, Debug)]
pub struct VisibleFace {
    /// Facet functional with `<functional, v0> < 0`.
    pub functional: QVector,
    /// The closed facet as a cone.
    pub face: Cone,
}

/// Visible boundary of a full-dimensional cone seen from an outside point:
/// the union of closed facets whose functional is negative at `v0`. Every
/// relative-interior point of such a facet meets the segment to `v0` only
/// in itself; facets with nonnegative sign are reached tangentially or not
/// at all.
pub fn visible_boundary(c: &Cone, v0: &QVector) -> Result<Vec<VisibleFace>> {
    if v0.dim() != c.dim() {
        return Err(Error::dimension("visible_boundary observation point"));
    }
    if !c.is_full_dimensional() {
        return Err(Error::Precondition(
            "visible_boundary requires a full-dimensional cone".to_string(),
        ));
    }
    if c.membership(v0)? != Membership::Outside {
        return Err(Error::ObservationPointInsideCone);
    }
    let vf = c.vform();
    let mut faces = Vec::new();
    // Full-dimensional cone: the dual is pointed and its rays are exactly
    // the facet functionals.
    for h in &c.dual_vform().rays {
        if h.dot(v0).is_negative() {
            let mut gens: Vec<QVector> = vf
                .rays
                .iter()
                .filter(|r| h.dot(r).is_zero())
                .cloned()
                .collect();
            for l in &vf.lines {
                gens.push(l.clone());
                gens.push(l.neg());
            }
            faces.push(VisibleFace {
                functional: h.clone(),
                face: Cone::from_generators(c.dim(), gens),
            });
        }
    }
    Ok(faces)
}

/// A relatively open cell: a closed polytope closure minus the faces where
/// the listed functionals vanish. Strict functionals vanish only on proper
/// faces of the closure, so the barycenter witnesses non-emptiness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CellComplexCell {
    pub closure: Polytope,
    pub open_facets: Vec<AffineFunctional>,
}

impl CellComplexCell {
    pub fn closed(closure: Polytope) -> Self {
        Self {
            closure,
            open_facets: Vec::new(),
        }
    }

    pub fn contains(&self, p: &QVector) -> bool {
        self.closure.contains(p) && self.open_facets.iter().all(|f| f.eval(p).is_positive())
    }

    pub fn is_empty(&self) -> bool {
        self.sample_point().is_none()
    }

    /// A rational point of the cell, if non-empty.
    pub fn sample_point(&self) -> Option<QVector> {
        let p = self.closure.relative_interior_point()?;
        if self.open_facets.iter().all(|f| f.eval(&p).is_positive()) {
            Some(p)
        } else {
            None
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "closure": self.closure.to_json(),
            "strict_facets": Value::Array(
                self.open_facets.iter().map(|f| f.to_json(true)).collect()
            ),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{rat, rint};

    fn quadrant() -> Cone {
        Cone::from_generators(
            2,
            vec![QVector::from_ints(&[1, 0]), QVector::from_ints(&[0, 1])],
        )
    }

    #[test]
    fn dual_of_quadrant_is_quadrant() {
        let c = quadrant();
        let d = c.dual();
        assert!(c.canonical_eq(&d));
    }

    #[test]
    fn dual_of_halfspace_is_ray() {
        let c = Cone::from_halfspaces(2, vec![QVector::from_ints(&[1, 1])]);
        let d = c.dual();
        let vf = d.vform();
        assert!(vf.lines.is_empty());
        assert_eq!(vf.rays, vec![QVector::from_ints(&[1, 1])]);
    }

    #[test]
    fn dual_of_full_space_is_origin() {
        let c = Cone::full_space(2);
        let d = c.dual();
        assert!(d.vform().is_trivial());
    }

    #[test]
    fn dual_is_involution_on_suite_cones() {
        let cones = vec![
            quadrant(),
            Cone::from_halfspaces(2, vec![QVector::from_ints(&[1, 1])]),
            Cone::full_space(2),
            Cone::origin_only(3),
            Cone::from_generators(
                3,
                vec![
                    QVector::from_ints(&[1, 0, 0]),
                    QVector::from_ints(&[0, 1, 0]),
                    QVector::from_ints(&[1, 1, 1]),
                ],
            ),
            Cone::from_generators(
                2,
                vec![
                    QVector::from_ints(&[1, 0]),
                    QVector::from_ints(&[-1, 0]),
                    QVector::from_ints(&[0, 1]),
                ],
            ),
        ];
        for c in &cones {
            let dd = c.dual().dual();
            assert!(c.canonical_eq(&dd), "double dual differs for {c:?}");
        }
    }

    #[test]
    fn membership_classification() {
        let c = quadrant();
        assert_eq!(
            c.membership(&QVector::from_ints(&[1, 1])).unwrap(),
            Membership::Interior
        );
        assert_eq!(
            c.membership(&QVector::from_ints(&[1, 0])).unwrap(),
            Membership::Boundary
        );
        let h = Cone::from_halfspaces(2, vec![QVector::from_ints(&[1, 1])]);
        assert_eq!(
            h.membership(&QVector::from_ints(&[1, -2])).unwrap(),
            Membership::Outside
        );
        assert!(c.membership(&QVector::from_ints(&[1, 1, 1])).is_err());
    }

    #[test]
    fn halfplane_cone_has_line() {
        let c = Cone::from_halfspaces(2, vec![QVector::from_ints(&[1, 1])]);
        let vf = c.vform();
        assert_eq!(vf.lines.len(), 1);
        assert_eq!(vf.rays.len(), 1);
        assert!(c.contains(&QVector::from_ints(&[5, -5])));
        assert!(c.contains(&QVector::from_ints(&[0, 3])));
        assert!(!c.contains(&QVector::from_ints(&[0, -3])));
    }

    #[test]
    fn hull_on_a_line() {
        let pts = vec![
            QVector::from_ints(&[0]),
            QVector::from_ints(&[1]),
            QVector::new(vec![rat(1, 2)]),
        ];
        let p = convex_hull(&pts);
        assert_eq!(
            p.vertices(),
            &[QVector::from_ints(&[0]), QVector::from_ints(&[1])]
        );
    }

    #[test]
    fn hull_square_with_center() {
        let pts = vec![
            QVector::from_ints(&[0, 0]),
            QVector::from_ints(&[1, 0]),
            QVector::from_ints(&[0, 1]),
            QVector::from_ints(&[1, 1]),
            QVector::new(vec![rat(1, 2), rat(1, 2)]),
        ];
        assert_eq!(convex_hull(&pts).vertices().len(), 4);
    }

    #[test]
    fn hull_order_insensitive_and_idempotent() {
        let pts = vec![
            QVector::from_ints(&[0, 0]),
            QVector::from_ints(&[2, 0]),
            QVector::from_ints(&[1, 1]),
            QVector::from_ints(&[1, 0]),
        ];
        let h1 = convex_hull(&pts);
        let mut rev = pts.clone();
        rev.reverse();
        assert_eq!(h1, convex_hull(&rev));
        assert_eq!(convex_hull(h1.vertices()), h1);
    }

    #[test]
    fn cone_over_segment() {
        let base = convex_hull(&[QVector::from_ints(&[1, 0]), QVector::from_ints(&[1, 1])]);
        let tri = cone_over_polytope(&QVector::from_ints(&[0, 0]), &base).unwrap();
        assert_eq!(tri.vertices().len(), 3);
    }

    #[test]
    fn cone_over_degenerate_apex() {
        let base = convex_hull(&[QVector::from_ints(&[0])]);
        assert!(matches!(
            cone_over_polytope(&QVector::from_ints(&[0]), &base),
            Err(Error::DegenerateApex)
        ));
        // Apex inside the affine hull of a segment.
        let base = convex_hull(&[QVector::from_ints(&[1, 0]), QVector::from_ints(&[1, 1])]);
        assert!(matches!(
            cone_over_polytope(&QVector::from_ints(&[1, 2]), &base),
            Err(Error::DegenerateApex)
        ));
    }

    #[test]
    fn cones_over_boundary_facets_reproduce_the_polytope() {
        // Apex interior to a square, bases the four edges: the four
        // triangles cover the square and stay inside it.
        let square = convex_hull(&[
            QVector::from_ints(&[0, 0]),
            QVector::from_ints(&[2, 0]),
            QVector::from_ints(&[0, 2]),
            QVector::from_ints(&[2, 2]),
        ]);
        let apex = QVector::from_ints(&[1, 1]);
        let edges = [
            [QVector::from_ints(&[0, 0]), QVector::from_ints(&[2, 0])],
            [QVector::from_ints(&[2, 0]), QVector::from_ints(&[2, 2])],
            [QVector::from_ints(&[2, 2]), QVector::from_ints(&[0, 2])],
            [QVector::from_ints(&[0, 2]), QVector::from_ints(&[0, 0])],
        ];
        let triangles: Vec<Polytope> = edges
            .iter()
            .map(|e| cone_over_polytope(&apex, &convex_hull(e)).unwrap())
            .collect();
        for tri in &triangles {
            for v in tri.vertices() {
                assert!(square.contains(v));
            }
        }
        for i in 0..=8 {
            for j in 0..=8 {
                let p = QVector::new(vec![rat(i, 4), rat(j, 4)]);
                assert!(
                    triangles.iter().any(|t| t.contains(&p)),
                    "{p:?} must be covered"
                );
            }
        }
    }

    #[test]
    fn clip_segment() {
        let seg = convex_hull(&[QVector::from_ints(&[0]), QVector::from_ints(&[1])]);
        let clipped = polytope_intersect_halfspaces(
            &seg,
            &[AffineFunctional::new(QVector::from_ints(&[1]), rat(-1, 2))],
        );
        assert_eq!(
            clipped.vertices(),
            &[QVector::new(vec![rat(1, 2)]), QVector::from_ints(&[1])]
        );
    }

    #[test]
    fn clip_triangle_to_edge_and_empty() {
        let tri = convex_hull(&[
            QVector::from_ints(&[0, 0]),
            QVector::from_ints(&[2, 0]),
            QVector::from_ints(&[0, 2]),
        ]);
        // y <= 0 and y >= 0 keep exactly the bottom edge.
        let edge = polytope_intersect_halfspaces(
            &tri,
            &[
                AffineFunctional::new(QVector::from_ints(&[0, -1]), rint(0)),
                AffineFunctional::new(QVector::from_ints(&[0, 1]), rint(0)),
            ],
        );
        assert_eq!(
            edge.vertices(),
            &[QVector::from_ints(&[0, 0]), QVector::from_ints(&[2, 0])]
        );
        let empty = polytope_intersect_halfspaces(
            &tri,
            &[AffineFunctional::new(QVector::from_ints(&[0, 1]), rint(-5))],
        );
        assert!(empty.is_empty());
    }

    #[test]
    fn visible_from_diagonal_point() {
        let faces = visible_boundary(&quadrant(), &QVector::from_ints(&[-1, -1])).unwrap();
        assert_eq!(faces.len(), 2);
    }

    #[test]
    fn visible_single_ray() {
        let faces = visible_boundary(&quadrant(), &QVector::from_ints(&[-1, 2])).unwrap();
        assert_eq!(faces.len(), 1);
        assert_eq!(faces[0].functional, QVector::from_ints(&[1, 0]));
        // The face is the ray x = 0, y >= 0.
        let face_vf = faces[0].face.vform();
        assert!(face_vf.lines.is_empty());
        assert_eq!(face_vf.rays, vec![QVector::from_ints(&[0, 1])]);
    }

    #[test]
    fn visible_whole_boundary_line() {
        let c = Cone::from_halfspaces(2, vec![QVector::from_ints(&[1, 1])]);
        let faces = visible_boundary(&c, &QVector::from_ints(&[-1, -1])).unwrap();
        assert_eq!(faces.len(), 1);
        let vf = faces[0].face.vform();
        assert_eq!(vf.lines.len(), 1);
        assert!(vf.rays.is_empty());
    }

    #[test]
    fn visible_rejects_inside_point() {
        assert!(matches!(
            visible_boundary(&quadrant(), &QVector::from_ints(&[1, 1])),
            Err(Error::ObservationPointInsideCone)
        ));
        assert!(matches!(
            visible_boundary(&quadrant(), &QVector::from_ints(&[1, 0])),
            Err(Error::ObservationPointInsideCone)
        ));
    }

    #[test]
    fn visible_segment_oracle() {
        // Independent segment check: relative-interior points of a reported
        // face leave the cone immediately toward v0; segments to unreported
        // facets keep points inside the cone.
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let cones = vec![
            quadrant(),
            Cone::from_halfspaces(2, vec![QVector::from_ints(&[1, 1])]),
        ];
        let v0s = [QVector::from_ints(&[-1, -1]), QVector::from_ints(&[-1, 2])];
        for c in &cones {
            for v0 in &v0s {
                if c.membership(v0).unwrap() != Membership::Outside {
                    continue;
                }
                let visible = visible_boundary(c, v0).unwrap();
                let visible_fns: Vec<&QVector> = visible.iter().map(|f| &f.functional).collect();
                for face in &visible {
                    let vf = face.face.vform();
                    for _ in 0..100 {
                        let mut p = QVector::zeros(c.dim());
                        for r in &vf.rays {
                            let k = rat(rng.gen_range(1..20), rng.gen_range(1..5));
                            p = p.add(&r.scale(&k));
                        }
                        for l in &vf.lines {
                            let k = rat(rng.gen_range(-10..10), rng.gen_range(1..5));
                            p = p.add(&l.scale(&k));
                        }
                        if p.is_zero() {
                            continue;
                        }
                        let mid = p.add(v0).scale(&rat(1, 2));
                        assert_eq!(
                            c.membership(&mid).unwrap(),
                            Membership::Outside,
                            "midpoint must leave the cone"
                        );
                    }
                }
                for h in &c.dual_vform().rays {
                    if visible_fns.contains(&h) {
                        continue;
                    }
                    let vf = c.vform();
                    let mut p = QVector::zeros(c.dim());
                    for r in &vf.rays {
                        if h.dot(r).is_zero() {
                            p = p.add(r);
                        }
                    }
                    if p.is_zero() {
                        continue;
                    }
                    let mut inside = false;
                    for k in 1..10 {
                        let t = rat(1, 1 << k);
                        let pt = p.add(&v0.sub(&p).scale(&t));
                        if c.contains(&pt) {
                            inside = true;
                            break;
                        }
                    }
                    assert!(inside, "segment to an unreported facet re-enters the cone");
                }
            }
        }
    }

    #[test]
    fn cell_sample_and_membership() {
        let seg = convex_hull(&[QVector::from_ints(&[0]), QVector::from_ints(&[1])]);
        let half_open = CellComplexCell {
            closure: seg,
            open_facets: vec![AffineFunctional::new(QVector::from_ints(&[-1]), rint(1))],
        };
        // Cell is [0, 1).
        assert!(half_open.contains(&QVector::from_ints(&[0])));
        assert!(!half_open.contains(&QVector::from_ints(&[1])));
        assert!(half_open.sample_point().is_some());
    }

    #[test]
    fn polytope_json_round_trip() {
        let p = convex_hull(&[
            QVector::from_ints(&[0, 0]),
            QVector::from_ints(&[1, 0]),
            QVector::new(vec![rat(1, 2), rat(3, 2)]),
        ]);
        let q = Polytope::from_json(2, &p.to_json()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn intersecting_polytopes() {
        let a = convex_hull(&[QVector::from_ints(&[0, 0]), QVector::from_ints(&[1, 0])]);
        let b = convex_hull(&[QVector::from_ints(&[1, 0]), QVector::from_ints(&[2, 0])]);
        let c = convex_hull(&[QVector::from_ints(&[3, 0]), QVector::from_ints(&[4, 0])]);
        assert!(polytopes_intersect(&a, &b));
        assert!(!polytopes_intersect(&a, &c));
    }

    #[test]
    fn three_dim_cone_forms() {
        // Simplicial cone in R^3: facets recover generators under duality.
        let c = Cone::from_generators(
            3,
            vec![
                QVector::from_ints(&[1, 0, 0]),
                QVector::from_ints(&[0, 1, 0]),
                QVector::from_ints(&[0, 0, 1]),
            ],
        );
        assert!(c.is_pointed());
        assert!(c.is_full_dimensional());
        assert_eq!(c.dual_vform().rays.len(), 3);
        assert!(c.contains(&QVector::from_ints(&[1, 2, 3])));
        assert!(!c.contains(&QVector::from_ints(&[-1, 2, 3])));
    }
}

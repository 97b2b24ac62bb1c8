//! Executable fixtures: the four worked examples plus the auxiliary
//! surfaces shared across test suites.
//!
//! Intersection numbers are encoded from the standard constructions (the
//! blow-up of a ruled surface, negative-definite chains and stars); each
//! constructor documents its lattice so the numbers can be rechecked by
//! hand.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use crate::chambers::{
    self, BoundarySpace, ChamberDecomposition, ChamberInput, FamilyDescriptor, SurfaceInput,
    SurfaceMode,
};
use crate::mmp::{AbstractCurve, AbstractModel, ModelGraph};
use crate::polyhedra::{convex_hull, Cone, Polytope};
use crate::ratlin::{format_rational, rat, rint, QMatrix, QVector, Rational, SolveOutcome};
use crate::surface::{CurveRecord, PairFlag, SurfaceData};
use crate::{Error, Result};

/// A blown-up ruled surface over a curve, relative setting: basis {C0, S1}
/// of N^1(X/S) where C0 is the exceptional curve of the blow-up and S1 the
/// disjoint section. The singular fiber is C0 + C1 with C0^2 = C1^2 = -1,
/// C0.C1 = 1 and K.C0 = K.C1 = -1; over the base the fiber class vanishes,
/// so C1 = -C0 in N^1(X/S).
pub fn example1_surface() -> SurfaceData {
    SurfaceData {
        rho: 2,
        basis_names: vec!["C0".into(), "S1".into()],
        curves: vec![
            CurveRecord {
                name: "C0".into(),
                curve_class: QVector::from_ints(&[-1, 0]),
                divisor_class: Some(QVector::from_ints(&[1, 0])),
                self_intersection: rint(-1),
            },
            CurveRecord {
                name: "C1".into(),
                curve_class: QVector::from_ints(&[1, 1]),
                divisor_class: Some(QVector::from_ints(&[-1, 0])),
                self_intersection: rint(-1),
            },
        ],
        canonical_class: QVector::from_ints(&[1, -2]),
        boundary_generators: vec![
            ("C0".into(), QVector::from_ints(&[1, 0])),
            ("C1".into(), QVector::from_ints(&[-1, 0])),
        ],
        // Effective classes over S: C0, C1 = -C0, the sections S1 and S0.
        psef_cone: Cone::from_generators(
            2,
            vec![
                QVector::from_ints(&[1, 0]),
                QVector::from_ints(&[-1, 0]),
                QVector::from_ints(&[0, 1]),
                QVector::from_ints(&[-1, 1]),
            ],
        ),
        nef_check_complete: true,
        pair_flag: PairFlag::Lc,
        base_name: "S".into(),
    }
}

/// Boundary line B(t) = (1/2) C0 + t C1 for t in [0,1], as a segment in the
/// coefficient space over the generators (C0, C1).
pub fn example1_space() -> BoundarySpace {
    BoundarySpace {
        ambient: convex_hull(&[
            QVector::new(vec![rat(1, 2), rint(0)]),
            QVector::new(vec![rat(1, 2), rint(1)]),
        ]),
        rational_flag: true,
    }
}

/// Scaling class with H.C0 = H.C1 = 1.
pub fn example1_scaling() -> QVector {
    QVector::from_ints(&[-1, 2])
}

pub fn example1_model_names() -> BTreeMap<String, String> {
    BTreeMap::from([
        ("root".to_string(), "X".to_string()),
        ("root/-C0".to_string(), "X0".to_string()),
        ("root/-C1".to_string(), "X1".to_string()),
    ])
}

/// Full scaling-mode decomposition of the ruled-surface fixture. `K+B` is
/// never relatively pseudo-effective here, so chambers track MMP outcomes
/// and the canonical label is the base.
pub fn example1_decomposition() -> Result<ChamberDecomposition> {
    let surface = example1_surface();
    let scaling = example1_scaling();
    let names = example1_model_names();
    let input = ChamberInput::Surface(SurfaceInput {
        surface: &surface,
        scaling: &scaling,
        mode: SurfaceMode::ScalingOutcomes {
            canonical_label: "base S".to_string(),
        },
        model_names: &names,
    });
    let canonical = chambers::decompose_canonical(&example1_space(), &input)?;
    chambers::decompose_minimal(&example1_space(), &input, &canonical)
}

/// Flop graph of a Calabi-Yau threefold: models X- and X+ exchanged by a
/// flop, reference coordinates in the basis {H-, H+}. The flopped curve
/// pairs (1,-1) on X- and (-1,1) on X+; both walls carry the shared
/// canonical model Y.
pub fn example2_graph() -> ModelGraph {
    let k = QVector::zeros(2);
    ModelGraph {
        reference_dim: 2,
        canonical_class: k.clone(),
        boundary_generators: vec![
            ("H-".into(), QVector::from_ints(&[1, 0])),
            ("H+".into(), QVector::from_ints(&[0, 1])),
        ],
        psef_cone: Cone::from_generators(
            2,
            vec![QVector::from_ints(&[1, 0]), QVector::from_ints(&[0, 1])],
        ),
        models: vec![
            AbstractModel {
                id: "X-".into(),
                dim: 2,
                nef_cone: Cone::from_generators(
                    2,
                    vec![QVector::from_ints(&[1, 0]), QVector::from_ints(&[1, 1])],
                ),
                pullback: QMatrix::identity(2),
                pullback_inverse: QMatrix::identity(2),
                curves: vec![AbstractCurve {
                    name: "flop".into(),
                    class_model: QVector::from_ints(&[1, -1]),
                    class_reference: QVector::from_ints(&[1, -1]),
                    birational: true,
                    canonical_label: Some("Y".into()),
                }],
                canonical_class_ref: k.clone(),
            },
            AbstractModel {
                id: "X+".into(),
                dim: 2,
                nef_cone: Cone::from_generators(
                    2,
                    vec![QVector::from_ints(&[1, 1]), QVector::from_ints(&[0, 1])],
                ),
                pullback: QMatrix::identity(2),
                pullback_inverse: QMatrix::identity(2),
                curves: vec![AbstractCurve {
                    name: "flop+".into(),
                    class_model: QVector::from_ints(&[-1, 1]),
                    class_reference: QVector::from_ints(&[-1, 1]),
                    birational: true,
                    canonical_label: Some("Y".into()),
                }],
                canonical_class_ref: k,
            },
        ],
        adjacency: vec![("X-".into(), "X+".into(), "flop".into())],
        base_name: "S".into(),
    }
}

/// `B_t = (1-t) H- + t H+` for t in [0,1]: the segment from (1,0) to (0,1)
/// in boundary coefficients.
pub fn example2_space() -> BoundarySpace {
    BoundarySpace {
        ambient: convex_hull(&[QVector::from_ints(&[1, 0]), QVector::from_ints(&[0, 1])]),
        rational_flag: true,
    }
}

pub fn example2_decomposition() -> Result<ChamberDecomposition> {
    let graph = example2_graph();
    let input = ChamberInput::Abstract(&graph);
    let canonical = chambers::decompose_canonical(&example2_space(), &input)?;
    chambers::decompose_minimal(&example2_space(), &input, &canonical)
}

/// Versal deformation of an I2 fiber: N^1(X/S) has coordinates
/// (x, y) = (D.C1, D.C2), psef cone {x + y >= 0}, chamber rays
/// r_n = (n+1, -n), accumulation directions (1,-1) and (-1,1).
pub fn example3_family() -> FamilyDescriptor {
    FamilyDescriptor {
        dim: 2,
        ray_coeffs: vec![QVector::from_ints(&[1, 0]), QVector::from_ints(&[1, -1])],
        accumulation_rays: vec![QVector::from_ints(&[1, -1]), QVector::from_ints(&[-1, 1])],
        psef_cone: Cone::from_halfspaces(2, vec![QVector::from_ints(&[1, 1])]),
        projection: None,
        apex: None,
        effectivity_note: Some(
            "the boundary points (1,-1) and (-1,1) are not classes of effective R-divisors"
                .to_string(),
        ),
    }
}

/// Generic hypersurface of degrees (2,2,3): the effective cone is the cone
/// over the hull of A = (0,0,1) and C_n = (n+1, -n, (3/2) n (n+1)); the
/// projection (x,y,z) -> (x,y) maps it onto the previous family.
pub fn example4_family() -> FamilyDescriptor {
    FamilyDescriptor {
        dim: 3,
        ray_coeffs: vec![
            QVector::from_ints(&[1, 0, 0]),
            QVector::new(vec![rint(1), rint(-1), rat(3, 2)]),
            QVector::new(vec![rint(0), rint(0), rat(3, 2)]),
        ],
        accumulation_rays: vec![QVector::from_ints(&[0, 0, 1])],
        psef_cone: Cone::from_halfspaces(3, vec![QVector::from_ints(&[1, 1, 0])]),
        projection: Some(QMatrix::from_int_rows(&[&[1, 0, 0], &[0, 1, 0]])),
        apex: Some(QVector::from_ints(&[0, 0, 1])),
        effectivity_note: None,
    }
}

/// One (-1)-curve E plus a transverse nef class f. The declared effective
/// generators are E, f and the fiber-like class E + f, so the oracle can
/// trade mass on E against E + f.
pub fn single_negative_curve_surface() -> SurfaceData {
    SurfaceData {
        rho: 2,
        basis_names: vec!["E".into(), "f".into()],
        curves: vec![CurveRecord {
            name: "E".into(),
            curve_class: QVector::from_ints(&[-1, 1]),
            divisor_class: Some(QVector::from_ints(&[1, 0])),
            self_intersection: rint(-1),
        }],
        canonical_class: QVector::from_ints(&[1, 0]),
        boundary_generators: vec![
            ("E".into(), QVector::from_ints(&[1, 0])),
            ("f".into(), QVector::from_ints(&[0, 1])),
        ],
        psef_cone: Cone::from_generators(
            2,
            vec![
                QVector::from_ints(&[1, 0]),
                QVector::from_ints(&[0, 1]),
                QVector::from_ints(&[1, 1]),
            ],
        ),
        nef_check_complete: true,
        pair_flag: PairFlag::Klt,
        base_name: "pt".into(),
    }
}

/// Chain of k (-2)-curves (an A_k configuration) with an extra nef basis
/// class f. The canonical class is numerically trivial, so `K + sum b_i E_i`
/// is controlled entirely by the chain lattice. `variant` perturbs the
/// pairings of f with the chain (always positive).
pub fn chain_surface(k: usize, variant: u64) -> SurfaceData {
    assert!(k >= 1);
    let rho = k + 1;
    let mut curves = Vec::new();
    for i in 0..k {
        let mut entries = vec![rint(0); rho];
        entries[i] = rint(-2);
        if i > 0 {
            entries[i - 1] = rint(1);
        }
        if i + 1 < k {
            entries[i + 1] = rint(1);
        }
        entries[k] = rint(1 + ((variant as i64 + i as i64) % 3));
        curves.push(CurveRecord {
            name: format!("E{}", i + 1),
            curve_class: QVector::new(entries),
            divisor_class: Some(QVector::unit(rho, i)),
            self_intersection: rint(-2),
        });
    }
    let mut basis_names: Vec<String> = (1..=k).map(|i| format!("E{i}")).collect();
    basis_names.push("f".into());
    // Effective generators: the chain curves, the nef class f, and moving
    // classes E_i + f whose representatives avoid the rigid curves; the
    // latter let the epsilon-limit oracle trade mass off each E_i.
    let mut psef = Vec::new();
    for i in 0..k {
        psef.push(QVector::unit(rho, i));
    }
    psef.push(QVector::unit(rho, k));
    for i in 0..k {
        psef.push(QVector::unit(rho, i).add(&QVector::unit(rho, k)));
    }
    SurfaceData {
        rho,
        basis_names,
        curves,
        canonical_class: QVector::zeros(rho),
        boundary_generators: (0..k)
            .map(|i| (format!("E{}", i + 1), QVector::unit(rho, i)))
            .collect(),
        psef_cone: Cone::from_generators(rho, psef),
        nef_check_complete: true,
        pair_flag: PairFlag::Klt,
        base_name: "S".into(),
    }
}

/// Star of `leaves` (-2)-curves around a (-3)-curve center; negative
/// definite for up to five leaves.
pub fn star_surface(leaves: usize, variant: u64) -> SurfaceData {
    assert!((1..=5).contains(&leaves));
    let n = leaves + 1; // curves: center E1, leaves E2..
    let rho = n + 1;
    let mut curves = Vec::new();
    for i in 0..n {
        let mut entries = vec![rint(0); rho];
        if i == 0 {
            entries[0] = rint(-3);
            for e in entries.iter_mut().take(n).skip(1) {
                *e = rint(1);
            }
        } else {
            entries[0] = rint(1);
            entries[i] = rint(-2);
        }
        entries[n] = rint(1 + ((variant as i64 + i as i64) % 2));
        curves.push(CurveRecord {
            name: format!("E{}", i + 1),
            curve_class: QVector::new(entries),
            divisor_class: Some(QVector::unit(rho, i)),
            self_intersection: if i == 0 { rint(-3) } else { rint(-2) },
        });
    }
    let mut basis_names: Vec<String> = (1..=n).map(|i| format!("E{i}")).collect();
    basis_names.push("f".into());
    let mut psef: Vec<QVector> = (0..rho).map(|i| QVector::unit(rho, i)).collect();
    for i in 0..n {
        psef.push(QVector::unit(rho, i).add(&QVector::unit(rho, n)));
    }
    SurfaceData {
        rho,
        basis_names,
        curves,
        canonical_class: QVector::zeros(rho),
        boundary_generators: (0..n)
            .map(|i| (format!("E{}", i + 1), QVector::unit(rho, i)))
            .collect(),
        psef_cone: Cone::from_generators(rho, psef),
        nef_check_complete: true,
        pair_flag: PairFlag::Klt,
        base_name: "S".into(),
    }
}

/// An ample class for chain/star fixtures with pairwise distinct curve
/// pairings, to keep scaling thresholds generic.
pub fn chain_ample_class(x: &SurfaceData) -> QVector {
    let k = x.curves.len();
    let gram = QMatrix::new(
        k,
        k,
        (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| x.curves[i].curve_class.get(j).clone())
            .collect(),
    );
    // Target pairings 1 + (i+1)/(k+2) minus the f contribution.
    let f_pairings: Vec<Rational> = x
        .curves
        .iter()
        .map(|c| c.curve_class.get(x.rho - 1).clone())
        .collect();
    let rhs = QVector::new(
        (0..k)
            .map(|i| rint(1) + rat(i as i64 + 1, k as i64 + 2) - &f_pairings[i])
            .collect(),
    );
    let gamma = match gram.solve_linear(&rhs).expect("square") {
        SolveOutcome::Unique(g) => g,
        SolveOutcome::Singular { .. } => panic!("chain Gram matrices are definite"),
    };
    let mut h = QVector::zeros(x.rho);
    for i in 0..k {
        h = h.add(&QVector::unit(x.rho, i).scale(gamma.get(i)));
    }
    h.add(&QVector::unit(x.rho, x.rho - 1))
}

/// Two curves declared to meet each other negatively: impossible geometry
/// whose candidate Gram matrix is not negative definite. Exercises the
/// rejection path.
pub fn corrupted_semidefinite_surface() -> SurfaceData {
    SurfaceData {
        rho: 3,
        basis_names: vec!["E1".into(), "E2".into(), "f".into()],
        curves: vec![
            CurveRecord {
                name: "E1".into(),
                curve_class: QVector::from_ints(&[-1, -1, 1]),
                divisor_class: Some(QVector::from_ints(&[1, 0, 0])),
                self_intersection: rint(-1),
            },
            CurveRecord {
                name: "E2".into(),
                curve_class: QVector::from_ints(&[-1, -1, 2]),
                divisor_class: Some(QVector::from_ints(&[0, 1, 0])),
                self_intersection: rint(-1),
            },
        ],
        canonical_class: QVector::zeros(3),
        boundary_generators: vec![
            ("E1".into(), QVector::from_ints(&[1, 0, 0])),
            ("E2".into(), QVector::from_ints(&[0, 1, 0])),
        ],
        psef_cone: Cone::from_generators(
            3,
            vec![
                QVector::from_ints(&[1, 0, 0]),
                QVector::from_ints(&[0, 1, 0]),
                QVector::from_ints(&[0, 0, 1]),
            ],
        ),
        nef_check_complete: true,
        pair_flag: PairFlag::Klt,
        base_name: "pt".into(),
    }
}

/// Coefficient box `[0, 3/4]^2` for the two-curve chain.
pub fn chain2_space() -> BoundarySpace {
    BoundarySpace {
        ambient: convex_hull(&[
            QVector::new(vec![rint(0), rint(0)]),
            QVector::new(vec![rat(3, 4), rint(0)]),
            QVector::new(vec![rint(0), rat(3, 4)]),
            QVector::new(vec![rat(3, 4), rat(3, 4)]),
        ]),
        rational_flag: true,
    }
}

pub const FIXTURE_NAMES: [&str; 6] = [
    "example1",
    "example2",
    "example3",
    "example4",
    "chain2",
    "single-curve",
];

pub fn list() -> Value {
    json!([
        {"name": "example1", "kind": "surface",
         "summary": "blown-up ruled surface over a curve; scaling-mode chambers in t"},
        {"name": "example2", "kind": "abstract",
         "summary": "Calabi-Yau flop graph X- / X+ with shared canonical model Y"},
        {"name": "example3", "kind": "infinite-family",
         "summary": "versal I2 deformation; chamber rays (n+1, -n) in the half plane x+y >= 0"},
        {"name": "example4", "kind": "infinite-family",
         "summary": "(2,2,3) hypersurface; cone over A=(0,0,1) and C_n=(n+1,-n,3/2 n(n+1))"},
        {"name": "chain2", "kind": "surface",
         "summary": "two-curve negative-definite chain over a coefficient box"},
        {"name": "single-curve", "kind": "surface",
         "summary": "one (-1)-curve with a transverse nef class"},
    ])
}

fn check(name: &str, expected: &str, got: &str) -> Value {
    json!({
        "check": name,
        "expected": expected,
        "got": got,
        "pass": expected == got,
    })
}

/// Runs a fixture's headline computation and compares against its declared
/// expected values. The report carries one pass/fail entry per check.
pub fn run(name: &str) -> Result<Value> {
    match name {
        "example1" => {
            let dec = example1_decomposition()?;
            let mut checks = Vec::new();
            checks.push(check("cell count", "3", &dec.cells.len().to_string()));
            let mut labels: Vec<String> = dec
                .minimal_models
                .iter()
                .map(|g| g.label.clone())
                .collect();
            labels.sort();
            checks.push(check("minimal labels", "X,X0,X1", &labels.join(",")));
            // The wall sits at t = 1/2 on the segment: coefficient point (1/2, 1/2).
            let wall_pt = QVector::new(vec![rat(1, 2), rat(1, 2)]);
            let wall_cell = dec
                .cells
                .iter()
                .find(|c| c.cell.closure.vertices() == [wall_pt.clone()]);
            checks.push(check(
                "tie chamber at t=1/2",
                "X",
                &wall_cell
                    .map(|c| c.label.minimal_ids.iter().cloned().collect::<Vec<_>>().join(","))
                    .unwrap_or_else(|| "missing".into()),
            ));
            let canonical_ok = dec
                .cells
                .iter()
                .all(|c| c.label.canonical_label == "base S");
            checks.push(check(
                "canonical label everywhere",
                "base S",
                if canonical_ok { "base S" } else { "mixed" },
            ));
            finish(name, dec.to_json(), checks)
        }
        "example2" => {
            let dec = example2_decomposition()?;
            let mut checks = Vec::new();
            checks.push(check(
                "canonical chamber count",
                "3",
                &dec.canonical_chambers.len().to_string(),
            ));
            let mut canon: Vec<String> = dec
                .canonical_chambers
                .iter()
                .map(|g| g.label.clone())
                .collect();
            canon.sort();
            checks.push(check("canonical labels", "X+,X-,Y", &canon.join(",")));
            let chamber = |label: &str| {
                dec.canonical_chambers
                    .iter()
                    .find(|g| g.label == label)
                    .expect("labeled chamber")
            };
            // V- is half-open at the wall, V0 is the wall point itself.
            checks.push(check(
                "V- half-open at the wall",
                "true",
                &(!chamber("X-").open_facets.is_empty()).to_string(),
            ));
            checks.push(check(
                "V0 closure",
                "(1/2, 1/2)",
                &chamber("Y")
                    .closure
                    .vertices()
                    .iter()
                    .map(|v| format!("{v:?}"))
                    .collect::<Vec<_>>()
                    .join(" "),
            ));
            let closure_of = |label: &str| -> String {
                dec.minimal_models
                    .iter()
                    .find(|g| g.label == label)
                    .map(|g| {
                        g.closure
                            .vertices()
                            .iter()
                            .map(|v| format!("{v:?}"))
                            .collect::<Vec<_>>()
                            .join(" ")
                    })
                    .unwrap_or_else(|| "missing".into())
            };
            checks.push(check(
                "W- closure",
                "(1/2, 1/2) (1, 0)",
                &closure_of("X-"),
            ));
            checks.push(check("W+ closure", "(0, 1) (1/2, 1/2)", &closure_of("X+")));
            let path = chambers::flop_path(&example2_graph(), "X-", "X+", &[rat(1, 2), rat(1, 2)])?;
            checks.push(check("flop path length", "1", &path.len().to_string()));
            finish(name, dec.to_json(), checks)
        }
        "example3" => {
            let fam = example3_family();
            let mut checks = Vec::new();
            checks.push(check("r4", "(5, -4)", &format!("{:?}", fam.ray(4))));
            let region = convex_hull(&[
                QVector::new(vec![rint(1), rat(-1, 2)]),
                QVector::new(vec![rint(2), rat(-1, 2)]),
                QVector::new(vec![rint(1), rat(1, 2)]),
                QVector::new(vec![rint(2), rat(1, 2)]),
            ]);
            let hits = chambers::chambers_meeting(&fam, &region)?;
            checks.push(check(
                "box chambers",
                "0,1,2",
                &hits.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
            ));
            let outside = fam
                .psef_cone
                .membership(&QVector::from_ints(&[1, -2]))
                .expect("dim 2");
            checks.push(check(
                "(1,-2) outside psef",
                "Outside",
                &format!("{outside:?}"),
            ));
            let result = json!({
                "rays": (-4..=4).map(|n| format!("{:?}", fam.ray(n))).collect::<Vec<_>>(),
                "chambers_in_box": hits,
                "note": fam.effectivity_note,
            });
            finish(name, result, checks)
        }
        "example4" => {
            let fam = example4_family();
            let mut checks = Vec::new();
            checks.push(check("C2", "(3, -2, 9)", &format!("{:?}", fam.ray(2))));
            let (points, hull) = example4_truncation(8);
            checks.push(check(
                "all truncated generators are vertices",
                &points.len().to_string(),
                &hull.vertices().len().to_string(),
            ));
            let proj = fam.projection.as_ref().expect("declared projection");
            let e3 = example3_family();
            let all_match = (-8..=8).all(|n| proj.mul_vec(&fam.ray(n)) == e3.ray(n));
            let apex_ok =
                proj.mul_vec(fam.apex.as_ref().expect("declared apex")) == QVector::zeros(2);
            checks.push(check(
                "projection onto previous family",
                "true",
                &(all_match && apex_ok).to_string(),
            ));
            let result = json!({
                "vertices": hull.to_json(),
            });
            finish(name, result, checks)
        }
        "chain2" => {
            let surface = chain_surface(2, 3);
            let scaling = chain_ample_class(&surface);
            let names = BTreeMap::new();
            let input = ChamberInput::Surface(SurfaceInput {
                surface: &surface,
                scaling: &scaling,
                mode: SurfaceMode::Standard,
                model_names: &names,
            });
            let canonical = chambers::decompose_canonical(&chain2_space(), &input)?;
            let dec = chambers::decompose_minimal(&chain2_space(), &input, &canonical)?;
            let checks = vec![
                check(
                    "canonical chambers",
                    "1",
                    &dec.canonical_chambers.len().to_string(),
                ),
                check(
                    "minimal regions",
                    "4",
                    &dec.minimal_models.len().to_string(),
                ),
            ];
            finish(name, dec.to_json(), checks)
        }
        "single-curve" => {
            let x = single_negative_curve_surface();
            let d = crate::surface::DivisorClass(QVector::from_ints(&[1, 0]));
            let z = crate::surface::zariski_decompose(&x, &d)?;
            let checks = vec![check(
                "zariski of E",
                "P=(0, 0) N={E:1}",
                &format!(
                    "P={:?} N={{{}}}",
                    z.positive,
                    z.negative
                        .iter()
                        .map(|(n, c)| format!("{n}:{}", format_rational(c)))
                        .collect::<Vec<_>>()
                        .join(",")
                ),
            )];
            finish(name, z.to_json(), checks)
        }
        other => Err(Error::UnknownName(format!("fixture '{other}'"))),
    }
}

/// Truncated generator set of the (2,2,3) effective cone and its hull.
pub fn example4_truncation(bound: i64) -> (Vec<QVector>, Polytope) {
    let fam = example4_family();
    let mut pts = vec![fam.apex.clone().expect("declared apex")];
    for n in -bound..=bound {
        pts.push(fam.ray(n));
    }
    let hull = convex_hull(&pts);
    (pts, hull)
}

fn finish(name: &str, result: Value, checks: Vec<Value>) -> Result<Value> {
    let pass = checks
        .iter()
        .all(|c| c["pass"].as_bool().unwrap_or(false));
    Ok(json!({
        "fixture": name,
        "pass": pass,
        "checks": checks,
        "result": result,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lp;
    use crate::polyhedra::Membership;

    #[test]
    fn fixtures_validate() {
        assert!(example1_surface().validate().is_ok());
        assert!(single_negative_curve_surface().validate().is_ok());
        assert!(corrupted_semidefinite_surface().validate().is_ok());
        for k in 1..=4 {
            assert!(chain_surface(k, k as u64).validate().is_ok());
        }
        for l in 1..=5 {
            assert!(star_surface(l, l as u64).validate().is_ok());
        }
    }

    #[test]
    fn chain_and_star_grams_are_negative_definite() {
        for (x, k) in [(chain_surface(4, 1), 4), (star_surface(4, 1), 5)] {
            let gram = QMatrix::new(
                k,
                k,
                (0..k)
                    .flat_map(|i| (0..k).map(move |j| (i, j)))
                    .map(|(i, j)| x.curves[i].curve_class.get(j).clone())
                    .collect(),
            );
            assert!(gram.is_negative_definite().unwrap());
        }
    }

    #[test]
    fn chain_ample_class_is_ample() {
        for k in 1..=4 {
            let x = chain_surface(k, 7);
            let h = chain_ample_class(&x);
            assert!(crate::surface::is_ample(&x, &crate::surface::DivisorClass(h)).unwrap());
        }
        let x = star_surface(3, 0);
        let h = chain_ample_class(&x);
        assert!(crate::surface::is_ample(&x, &crate::surface::DivisorClass(h)).unwrap());
    }

    #[test]
    fn example3_ray_values() {
        let fam = example3_family();
        assert_eq!(fam.ray(4), QVector::from_ints(&[5, -4]));
        assert_eq!(fam.ray(0), QVector::from_ints(&[1, 0]));
        assert_eq!(fam.ray(-1), QVector::from_ints(&[0, 1]));
    }

    #[test]
    fn example3_walls_separate_chambers() {
        // Points just off each ray land in adjacent chambers.
        let fam = example3_family();
        for n in -10..=10i64 {
            let r = fam.ray(n);
            let eps = rat(1, 1000);
            // Perturb along the next ray direction and the previous one.
            let toward_next = r.add(&fam.ray(n + 1).scale(&eps));
            let toward_prev = r.add(&fam.ray(n - 1).scale(&eps));
            let in_chamber = |m: i64, p: &QVector| {
                let region = convex_hull(std::slice::from_ref(p));
                chambers::chamber_cone_meets(&fam, m, &region)
            };
            assert!(in_chamber(n + 1, &toward_next));
            assert!(!in_chamber(n + 1, &toward_prev));
            assert!(in_chamber(n, &toward_prev));
        }
    }

    #[test]
    fn example4_vertices_and_projection() {
        let (pts, hull) = example4_truncation(8);
        assert_eq!(pts.len(), 18);
        assert_eq!(hull.vertices().len(), 18, "A and every C_n are vertices");
        assert_eq!(example4_family().ray(2), QVector::from_ints(&[3, -2, 9]));

        // Projection commutes with hulls on the truncation.
        let proj = example4_family().projection.unwrap();
        let projected: Vec<QVector> = pts.iter().map(|p| proj.mul_vec(p)).collect();
        let hull_of_proj = convex_hull(&projected);
        let proj_of_hull: Vec<QVector> =
            hull.vertices().iter().map(|p| proj.mul_vec(p)).collect();
        for v in hull_of_proj.vertices() {
            assert!(proj_of_hull.contains(v));
        }
        for v in &projected {
            assert!(lp::in_convex_hull(v, hull_of_proj.vertices()));
        }
    }

    #[test]
    fn gallery_run_reports_pass() {
        for name in FIXTURE_NAMES {
            let report = run(name).unwrap();
            assert_eq!(
                report["pass"],
                Value::Bool(true),
                "fixture {name} failed: {}",
                serde_json::to_string_pretty(&report["checks"]).unwrap()
            );
        }
    }

    #[test]
    fn gallery_unknown_fixture() {
        assert!(matches!(run("nope"), Err(Error::UnknownName(_))));
    }

    #[test]
    fn example2_membership_sanity() {
        let g = example2_graph();
        let xm = g.model("X-").unwrap();
        assert_eq!(
            xm.nef_cone
                .membership(&QVector::new(vec![rat(3, 4), rat(1, 4)]))
                .unwrap(),
            Membership::Interior
        );
        assert_eq!(
            xm.nef_cone
                .membership(&QVector::new(vec![rat(1, 4), rat(3, 4)]))
                .unwrap(),
            Membership::Outside
        );
    }
}

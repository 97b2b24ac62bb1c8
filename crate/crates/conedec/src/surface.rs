//! Intersection theory on a declared surface model.
//!
//! Divisor classes live in N^1 and curve classes in the dual N_1; the
//! coordinates are chosen so the intersection pairing is the dot product
//! (each curve's coordinate vector lists its pairings with the declared
//! divisor basis). The numerically fixed part of a pseudo-effective class
//! is computed exactly by Fujita iteration, with a separate epsilon-limit
//! oracle that evaluates the defining infimum by exact LP.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::lp::{self, LpOutcome};
use crate::polyhedra::{vector_to_json, Cone, Membership};
use crate::ratlin::{format_rational, QMatrix, QVector, Rational, SolveOutcome};
use crate::{Error, Result};

/// Numerical class of an R-Cartier divisor in the declared N^1 basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorClass(pub QVector);

/// Numerical class of a curve in the dual coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveClass(pub QVector);

/// Exact intersection number through the declared pairing.
pub fn pair(d: &DivisorClass, c: &CurveClass) -> Result<Rational> {
    if d.0.dim() != c.0.dim() {
        return Err(Error::dimension(format!(
            "pairing: divisor dim {} vs curve dim {}",
            d.0.dim(),
            c.0.dim()
        )));
    }
    Ok(d.0.dot(&c.0))
}

/// One declared curve: its class, and when it can occur as a component of a
/// numerically fixed part, also its divisor class and self-intersection.
#[derive(Clone, Debug)]
pub struct CurveRecord {
    pub name: String,
    pub curve_class: QVector,
    pub divisor_class: Option<QVector>,
    pub self_intersection: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairFlag {
    Klt,
    Lc,
}

impl PairFlag {
    pub fn as_str(&self) -> &'static str {
        match self {
            PairFlag::Klt => "KLT",
            PairFlag::Lc => "LC",
        }
    }
}

/// A declared surface model over a base: basis of N^1, a complete finite
/// curve list, the canonical class, boundary generators and the declared
/// pseudo-effective cone. The artifact never discovers curves; completeness
/// is a contract carried by `nef_check_complete`.
#[derive(Clone, Debug)]
pub struct SurfaceData {
    pub rho: usize,
    pub basis_names: Vec<String>,
    pub curves: Vec<CurveRecord>,
    pub canonical_class: QVector,
    pub boundary_generators: Vec<(String, QVector)>,
    pub psef_cone: Cone,
    pub nef_check_complete: bool,
    pub pair_flag: PairFlag,
    pub base_name: String,
}

impl SurfaceData {
    pub fn curve(&self, name: &str) -> Option<&CurveRecord> {
        self.curves.iter().find(|c| c.name == name)
    }

    pub fn boundary_generator(&self, name: &str) -> Option<&QVector> {
        self.boundary_generators
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, v)| v)
    }

    /// Class of a boundary combination `sum b_i B_i`.
    pub fn boundary_class(&self, coeffs: &[Rational]) -> Result<QVector> {
        if coeffs.len() != self.boundary_generators.len() {
            return Err(Error::dimension(format!(
                "expected {} boundary coefficients, got {}",
                self.boundary_generators.len(),
                coeffs.len()
            )));
        }
        let mut acc = QVector::zeros(self.rho);
        for (c, (_, g)) in coeffs.iter().zip(&self.boundary_generators) {
            acc = acc.add(&g.scale(c));
        }
        Ok(acc)
    }

    /// Structural validation: dimensions, declared self-intersections,
    /// divisor/divisor pairing symmetry, and psef membership of the curve
    /// divisor classes. Collects every problem rather than the first.
    pub fn validate(&self) -> std::result::Result<(), Vec<String>> {
        let mut issues = Vec::new();
        if self.canonical_class.dim() != self.rho {
            issues.push("canonical class dimension differs from rho".to_string());
        }
        if self.basis_names.len() != self.rho {
            issues.push("basis name count differs from rho".to_string());
        }
        for c in &self.curves {
            if c.curve_class.dim() != self.rho {
                issues.push(format!("curve {}: class dimension differs from rho", c.name));
                continue;
            }
            if let Some(dc) = &c.divisor_class {
                if dc.dim() != self.rho {
                    issues.push(format!(
                        "curve {}: divisor class dimension differs from rho",
                        c.name
                    ));
                    continue;
                }
                let self_int = dc.dot(&c.curve_class);
                if self_int != c.self_intersection {
                    issues.push(format!(
                        "curve {}: declared self-intersection {} but pairing gives {}",
                        c.name,
                        format_rational(&c.self_intersection),
                        format_rational(&self_int)
                    ));
                }
            }
        }
        for (i, a) in self.curves.iter().enumerate() {
            for b in self.curves.iter().skip(i + 1) {
                if let (Some(da), Some(db)) = (&a.divisor_class, &b.divisor_class) {
                    if da.dim() != self.rho || db.dim() != self.rho {
                        continue;
                    }
                    let ab = da.dot(&b.curve_class);
                    let ba = db.dot(&a.curve_class);
                    if ab != ba {
                        issues.push(format!("pairing asymmetry at ({},{})", a.name, b.name));
                    }
                }
            }
        }
        for (name, g) in &self.boundary_generators {
            if g.dim() != self.rho {
                issues.push(format!("boundary generator {name}: wrong dimension"));
            }
        }
        if self.psef_cone.dim() != self.rho {
            issues.push("psef cone dimension differs from rho".to_string());
        } else {
            for c in &self.curves {
                if let Some(dc) = &c.divisor_class {
                    if dc.dim() == self.rho && !self.psef_cone.contains(dc) {
                        issues.push(format!(
                            "curve {} is effective but its class is outside the declared psef cone",
                            c.name
                        ));
                    }
                }
            }
        }
        if issues.is_empty() {
            Ok(())
        } else {
            Err(issues)
        }
    }
}

/// `D = P + N` with `P` nef, `N` effective with negative-definite support
/// Gram matrix and `P` orthogonal to every support curve.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZariskiDecomposition {
    pub positive: QVector,
    pub negative: Vec<(String, Rational)>,
}

impl ZariskiDecomposition {
    pub fn support(&self) -> BTreeSet<String> {
        self.negative.iter().map(|(n, _)| n.clone()).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "P": vector_to_json(&self.positive),
            "N": Value::Array(
                self.negative
                    .iter()
                    .map(|(name, coeff)| json!({"curve": name, "coeff": format_rational(coeff)}))
                    .collect()
            ),
        })
    }
}

/// Is `<D, c> >= 0` for every listed curve? Refuses when the curve list is
/// not declared complete, since nefness cannot be decided from partial data.
pub fn is_nef(x: &SurfaceData, d: &DivisorClass) -> Result<bool> {
    if !x.nef_check_complete {
        return Err(Error::IncompleteCurveData);
    }
    if d.0.dim() != x.rho {
        return Err(Error::dimension("is_nef divisor dimension"));
    }
    Ok(x.curves
        .iter()
        .all(|c| !d.0.dot(&c.curve_class).is_negative()))
}

/// Strict positivity against every listed curve; the ampleness test used to
/// validate declared scaling classes.
pub fn is_ample(x: &SurfaceData, d: &DivisorClass) -> Result<bool> {
    if !x.nef_check_complete {
        return Err(Error::IncompleteCurveData);
    }
    if d.0.dim() != x.rho {
        return Err(Error::dimension("is_ample divisor dimension"));
    }
    Ok(x.curves
        .iter()
        .all(|c| d.0.dot(&c.curve_class).is_positive()))
}

/// Exact Zariski decomposition by Fujita iteration: start with the curves
/// meeting `D` negatively, solve `(D - N) . c = 0` on the support, and grow
/// the support with any curve meeting `D - N` negatively until none does.
pub fn zariski_decompose(x: &SurfaceData, d: &DivisorClass) -> Result<ZariskiDecomposition> {
    if d.0.dim() != x.rho {
        return Err(Error::dimension("zariski divisor dimension"));
    }
    if x.psef_cone.membership(&d.0)? == Membership::Outside {
        return Err(Error::NotPseudoEffective);
    }

    let mut support: Vec<usize> = Vec::new();
    for (i, c) in x.curves.iter().enumerate() {
        if d.0.dot(&c.curve_class).is_negative() {
            support.push(i);
        }
    }

    let mut coeffs: Vec<Rational> = Vec::new();
    loop {
        if !support.is_empty() {
            for &i in &support {
                let c = &x.curves[i];
                if c.divisor_class.is_none() {
                    return Err(Error::MissingDivisorClass(c.name.clone()));
                }
                if !c.self_intersection.is_negative() {
                    return Err(Error::InconsistentSurfaceData(format!(
                        "curve {} with self-intersection {} cannot support a numerically fixed part",
                        c.name,
                        format_rational(&c.self_intersection)
                    )));
                }
            }
            let k = support.len();
            let mut gram = QMatrix::zeros(k, k);
            for (a, &i) in support.iter().enumerate() {
                for (b, &j) in support.iter().enumerate() {
                    let e_j = x.curves[j].divisor_class.as_ref().unwrap();
                    gram.set(a, b, e_j.dot(&x.curves[i].curve_class));
                }
            }
            if !gram.is_negative_definite()? {
                let names: Vec<&str> = support.iter().map(|&i| x.curves[i].name.as_str()).collect();
                return Err(Error::InconsistentSurfaceData(format!(
                    "Gram matrix of candidate support {{{}}} is not negative definite",
                    names.join(", ")
                )));
            }
            let rhs = QVector::new(
                support
                    .iter()
                    .map(|&i| d.0.dot(&x.curves[i].curve_class))
                    .collect(),
            );
            match gram.solve_linear(&rhs)? {
                SolveOutcome::Unique(a) => coeffs = a.entries().to_vec(),
                SolveOutcome::Singular { .. } => {
                    return Err(Error::InconsistentSurfaceData(
                        "singular Gram matrix in Zariski solve".to_string(),
                    ))
                }
            }
        } else {
            coeffs.clear();
        }

        let p = current_positive(x, d, &support, &coeffs);
        let grow = x
            .curves
            .iter()
            .enumerate()
            .find(|(i, c)| !support.contains(i) && p.dot(&c.curve_class).is_negative());
        match grow {
            Some((i, _)) => support.push(i),
            None => break,
        }
    }

    let p = current_positive(x, d, &support, &coeffs);
    let mut negative: Vec<(usize, Rational)> = support
        .iter()
        .zip(&coeffs)
        .filter(|(_, a)| !a.is_zero())
        .map(|(&i, a)| (i, a.clone()))
        .collect();
    for (i, a) in &negative {
        if a.is_negative() {
            return Err(Error::InconsistentSurfaceData(format!(
                "negative Zariski coefficient {} for curve {}",
                format_rational(a),
                x.curves[*i].name
            )));
        }
    }
    negative.sort_by_key(|(i, _)| *i);
    Ok(ZariskiDecomposition {
        positive: p,
        negative: negative
            .into_iter()
            .map(|(i, a)| (x.curves[i].name.clone(), a))
            .collect(),
    })
}

fn current_positive(
    x: &SurfaceData,
    d: &DivisorClass,
    support: &[usize],
    coeffs: &[Rational],
) -> QVector {
    let mut p = d.0.clone();
    for (&i, a) in support.iter().zip(coeffs) {
        let e = x.curves[i].divisor_class.as_ref().unwrap();
        p = p.sub(&e.scale(a));
    }
    p
}

/// Support of the numerically fixed part of `D`.
pub fn numerically_fixed_support(x: &SurfaceData, d: &DivisorClass) -> Result<BTreeSet<String>> {
    Ok(zariski_decompose(x, d)?.support())
}

/// Componentwise infimum vector at one epsilon, or `None` when `D + eps A`
/// has no effective representation in the declared data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NfpStep {
    pub eps: Rational,
    pub coefficients: Option<Vec<Rational>>,
}

/// Direct evaluation of the numerically-fixed-part definition: for each
/// epsilon, minimize by exact LP the coefficient of every tracked curve over
/// effective representations of `D + eps A` supported on the listed curves
/// plus the declared pseudo-effective generators.
///
/// Declared generators that are positive multiples of a tracked curve class
/// are folded into that curve's coefficient: mass placed on such a generator
/// is mass on the curve itself, so the generator cannot appear as a separate
/// LP column.
pub fn nfp_oracle(
    x: &SurfaceData,
    d: &DivisorClass,
    a: &DivisorClass,
    eps_list: &[Rational],
) -> Result<Vec<NfpStep>> {
    if d.0.dim() != x.rho || a.0.dim() != x.rho {
        return Err(Error::dimension("nfp_oracle class dimensions"));
    }
    if !is_ample(x, a)? {
        return Err(Error::NotAmple(
            "oracle reference class must pair strictly positively with every curve".to_string(),
        ));
    }
    for eps in eps_list {
        if !eps.is_positive() {
            return Err(Error::Precondition(
                "oracle epsilon must be positive".to_string(),
            ));
        }
    }

    let tracked: Vec<(usize, QVector)> = x
        .curves
        .iter()
        .enumerate()
        .filter_map(|(i, c)| c.divisor_class.clone().map(|dc| (i, dc)))
        .collect();
    let generators: Vec<QVector> = x
        .psef_cone
        .raw_generators()
        .map(|g| g.to_vec())
        .unwrap_or_else(|| x.psef_cone.generators())
        .into_iter()
        .filter(|g| {
            let gp = g.primitive();
            !tracked.iter().any(|(_, dc)| dc.primitive() == gp)
        })
        .collect();

    let cols = tracked.len() + generators.len();
    let mut m = QMatrix::zeros(x.rho, cols);
    for (j, (_, dc)) in tracked.iter().enumerate() {
        for r in 0..x.rho {
            m.set(r, j, dc.get(r).clone());
        }
    }
    for (j, g) in generators.iter().enumerate() {
        for r in 0..x.rho {
            m.set(r, tracked.len() + j, g.get(r).clone());
        }
    }

    let mut steps = Vec::new();
    for eps in eps_list {
        let target = d.0.add(&a.0.scale(eps));
        if lp::feasible_point(&m, target.entries()).is_none() {
            steps.push(NfpStep {
                eps: eps.clone(),
                coefficients: None,
            });
            continue;
        }
        let mut coeffs = Vec::with_capacity(tracked.len());
        for j in 0..tracked.len() {
            let mut obj = vec![Rational::zero(); cols];
            obj[j] = Rational::from_integer(1.into());
            match lp::minimize(&obj, &m, target.entries()) {
                LpOutcome::Optimal { value, .. } => coeffs.push(value),
                LpOutcome::Infeasible => unreachable!("feasibility checked above"),
                LpOutcome::Unbounded => {
                    return Err(Error::InconsistentSurfaceData(
                        "unbounded infimum in nfp oracle".to_string(),
                    ))
                }
            }
        }
        steps.push(NfpStep {
            eps: eps.clone(),
            coefficients: Some(coeffs),
        });
    }
    Ok(steps)
}

/// Names of the curves whose coefficients `nfp_oracle` tracks, in order.
pub fn nfp_tracked_curves(x: &SurfaceData) -> Vec<String> {
    x.curves
        .iter()
        .filter(|c| c.divisor_class.is_some())
        .map(|c| c.name.clone())
        .collect()
}

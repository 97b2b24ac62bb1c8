//! Exact rational linear programming via two-phase primal simplex.
//!
//! Problems here are tiny (tens of variables), so a dense tableau with
//! Bland's rule is enough: exact arithmetic plus Bland guarantees
//! termination without any tolerance tuning.

use num_traits::{One, Signed, Zero};

use crate::ratlin::{QMatrix, QVector, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { x: Vec<Rational>, value: Rational },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// rows x (n + 1); last column is the right-hand side.
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
    /// cost row of length n + 1 (last entry: negated objective value).
    cost: Vec<Rational>,
    basis: Vec<usize>,
}

impl Tableau {
    fn at(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    fn pivot(&mut self, prow: usize, pcol: usize) {
        let inv = self.at(prow, pcol).recip();
        for c in 0..self.cols {
            let v = self.at(prow, c) * &inv;
            self.set(prow, c, v);
        }
        for r in 0..self.rows {
            if r != prow && !self.at(r, pcol).is_zero() {
                let f = self.at(r, pcol).clone();
                for c in 0..self.cols {
                    let v = self.at(r, c) - &f * self.at(prow, c);
                    self.set(r, c, v);
                }
            }
        }
        if !self.cost[pcol].is_zero() {
            let f = self.cost[pcol].clone();
            for c in 0..self.cols {
                self.cost[c] = &self.cost[c] - &f * self.at(prow, c);
            }
        }
        self.basis[prow] = pcol;
    }

    /// Bland's rule iteration over the columns in `candidates`.
    /// Returns false if the current solution is unbounded below.
    fn run(&mut self, candidates: &[bool]) -> bool {
        loop {
            let entering = (0..candidates.len())
                .find(|&j| candidates[j] && self.cost[j].is_negative());
            let Some(j) = entering else {
                return true;
            };
            let mut leaving: Option<(usize, Rational)> = None;
            for r in 0..self.rows {
                let a = self.at(r, j);
                if a.is_positive() {
                    let ratio = self.at(r, self.cols - 1) / a;
                    let better = match &leaving {
                        None => true,
                        Some((lr, lratio)) => {
                            ratio < *lratio || (ratio == *lratio && self.basis[r] < self.basis[*lr])
                        }
                    };
                    if better {
                        leaving = Some((r, ratio));
                    }
                }
            }
            let Some((prow, _)) = leaving else {
                return false;
            };
            self.pivot(prow, j);
        }
    }
}

/// Minimizes `objective . x` subject to `a x = b`, `x >= 0`.
pub fn minimize(objective: &[Rational], a: &QMatrix, b: &[Rational]) -> LpOutcome {
    let m = a.rows();
    let n = a.cols();
    assert_eq!(objective.len(), n);
    assert_eq!(b.len(), m);

    // Build rows with nonnegative right-hand sides.
    let total = n + m; // originals + artificials
    let mut data = vec![Rational::zero(); m * (total + 1)];
    for r in 0..m {
        let flip = b[r].is_negative();
        for c in 0..n {
            let v = a.get(r, c).clone();
            data[r * (total + 1) + c] = if flip { -v } else { v };
        }
        data[r * (total + 1) + n + r] = Rational::one();
        data[r * (total + 1) + total] = if flip { -b[r].clone() } else { b[r].clone() };
    }

    // Phase 1: minimize the sum of artificials.
    let mut cost = vec![Rational::zero(); total + 1];
    let mut t = Tableau {
        rows: m,
        cols: total + 1,
        data,
        cost: cost.clone(),
        basis: (n..n + m).collect(),
    };
    // Reduced phase-1 costs: c_j - sum over rows of a_rj (artificials are basic).
    for j in 0..total {
        let mut acc = Rational::zero();
        for r in 0..m {
            acc += t.at(r, j);
        }
        t.cost[j] = if j >= n { Rational::one() - acc } else { -acc };
    }
    let mut rhs_sum = Rational::zero();
    for r in 0..m {
        rhs_sum += t.at(r, total);
    }
    t.cost[total] = -rhs_sum;

    let mut candidates = vec![true; total];
    let finished = t.run(&candidates);
    debug_assert!(finished, "phase 1 is bounded below by zero");
    if t.cost[total].is_negative() {
        // Objective value is -cost[total]; positive optimum means infeasible.
        return LpOutcome::Infeasible;
    }

    // Drive artificials out of the basis; drop rows that are redundant.
    let mut live_rows: Vec<bool> = vec![true; m];
    for r in 0..m {
        if t.basis[r] >= n {
            let piv = (0..n).find(|&c| !t.at(r, c).is_zero());
            match piv {
                Some(c) => t.pivot(r, c),
                None => live_rows[r] = false,
            }
        }
    }

    // Phase 2 over original columns only.
    for c in candidates.iter_mut().skip(n) {
        *c = false;
    }
    cost = vec![Rational::zero(); total + 1];
    cost[..n].clone_from_slice(objective);
    // Make the cost row consistent with the current basis.
    for r in 0..m {
        if !live_rows[r] {
            continue;
        }
        let bj = t.basis[r];
        if bj < n && !cost[bj].is_zero() {
            let f = cost[bj].clone();
            for c in 0..total + 1 {
                cost[c] = &cost[c] - &f * t.at(r, c);
            }
        }
    }
    t.cost = cost;

    // Dead rows must not be pivoted on; zero them out of the ratio test by
    // clearing their coefficients (their basic artificial stays at zero).
    for r in 0..m {
        if !live_rows[r] {
            for c in 0..n {
                t.set(r, c, Rational::zero());
            }
        }
    }

    if !t.run(&candidates) {
        return LpOutcome::Unbounded;
    }

    let mut x = vec![Rational::zero(); n];
    for r in 0..m {
        if live_rows[r] && t.basis[r] < n {
            x[t.basis[r]] = t.at(r, total).clone();
        }
    }
    let value = -t.cost[total].clone();
    LpOutcome::Optimal { x, value }
}

/// Feasibility of `a x = b, x >= 0`; returns a witness if one exists.
pub fn feasible_point(a: &QMatrix, b: &[Rational]) -> Option<Vec<Rational>> {
    let zero = vec![Rational::zero(); a.cols()];
    match minimize(&zero, a, b) {
        LpOutcome::Optimal { x, .. } => Some(x),
        _ => None,
    }
}

/// Is `point` a convex combination of `points`?
pub fn in_convex_hull(point: &QVector, points: &[QVector]) -> bool {
    if points.is_empty() {
        return false;
    }
    let d = point.dim();
    let n = points.len();
    let mut a = QMatrix::zeros(d + 1, n);
    for (j, p) in points.iter().enumerate() {
        assert_eq!(p.dim(), d, "hull point dimension mismatch");
        for i in 0..d {
            a.set(i, j, p.get(i).clone());
        }
        a.set(d, j, Rational::one());
    }
    let mut b: Vec<Rational> = point.entries().to_vec();
    b.push(Rational::one());
    feasible_point(&a, &b).is_some()
}

/// Is `v` a nonnegative combination of `rays` plus a free combination of `lines`?
pub fn in_cone_hull(v: &QVector, rays: &[QVector], lines: &[QVector]) -> bool {
    let d = v.dim();
    // Free line coefficients are split into positive and negative parts.
    let n = rays.len() + 2 * lines.len();
    if n == 0 {
        return v.is_zero();
    }
    let mut a = QMatrix::zeros(d, n);
    for (j, r) in rays.iter().enumerate() {
        for i in 0..d {
            a.set(i, j, r.get(i).clone());
        }
    }
    for (k, l) in lines.iter().enumerate() {
        for i in 0..d {
            a.set(i, rays.len() + 2 * k, l.get(i).clone());
            a.set(i, rays.len() + 2 * k + 1, -l.get(i).clone());
        }
    }
    feasible_point(&a, v.entries()).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ratlin::{rat, rint, QVector};

    #[test]
    fn minimize_basic() {
        // min x1 + x2 s.t. x1 + 2 x2 = 4, x >= 0 -> x = (0, 2), value 2.
        let a = QMatrix::from_int_rows(&[&[1, 2]]);
        let obj = vec![rint(1), rint(1)];
        match minimize(&obj, &a, &[rint(4)]) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rint(2));
                assert_eq!(x, vec![rint(0), rint(2)]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn infeasible_detected() {
        // x1 = -1, x >= 0.
        let a = QMatrix::from_int_rows(&[&[1]]);
        assert_eq!(minimize(&[rint(0)], &a, &[rint(-1)]), LpOutcome::Infeasible);
    }

    #[test]
    fn unbounded_detected() {
        // min -x1 s.t. x1 - x2 = 0: x1 = x2 can grow forever.
        let a = QMatrix::from_int_rows(&[&[1, -1]]);
        assert_eq!(
            minimize(&[rint(-1), rint(0)], &a, &[rint(0)]),
            LpOutcome::Unbounded
        );
    }

    #[test]
    fn redundant_rows_handled() {
        // Duplicate constraint rows.
        let a = QMatrix::from_int_rows(&[&[1, 1], &[1, 1]]);
        match minimize(&[rint(1), rint(0)], &a, &[rint(2), rint(2)]) {
            LpOutcome::Optimal { x, value } => {
                assert_eq!(value, rint(0));
                assert_eq!(x[1], rint(2));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn hull_membership() {
        let square = vec![
            QVector::from_ints(&[0, 0]),
            QVector::from_ints(&[1, 0]),
            QVector::from_ints(&[0, 1]),
            QVector::from_ints(&[1, 1]),
        ];
        let mid = QVector::new(vec![rat(1, 2), rat(1, 2)]);
        assert!(in_convex_hull(&mid, &square));
        assert!(!in_convex_hull(&QVector::from_ints(&[2, 0]), &square));
        assert!(in_convex_hull(&QVector::from_ints(&[1, 1]), &square));
    }

    #[test]
    fn cone_membership_with_lines() {
        let rays = vec![QVector::from_ints(&[1, 1])];
        let lines = vec![QVector::from_ints(&[1, -1])];
        // (3, -1) = 1*(1,1) + 2*(1,-1).
        assert!(in_cone_hull(&QVector::from_ints(&[3, -1]), &rays, &lines));
        // (-1, -1) is not reachable: ray coefficient would need to be negative.
        assert!(!in_cone_hull(&QVector::from_ints(&[-1, -1]), &rays, &lines));
        assert!(in_cone_hull(&QVector::zeros(2), &rays, &lines));
        assert!(!in_cone_hull(&QVector::from_ints(&[1, 0]), &[], &[]));
    }

    #[test]
    fn degenerate_lp_terminates() {
        // A classic degenerate instance; Bland's rule must not cycle.
        let a = QMatrix::from_int_rows(&[&[1, 1, 1, 0], &[1, -1, 0, 1]]);
        let obj = vec![rint(-1), rint(-1), rint(0), rint(0)];
        match minimize(&obj, &a, &[rint(0), rint(0)]) {
            LpOutcome::Optimal { value, .. } => assert_eq!(value, rint(0)),
            other => panic!("unexpected {other:?}"),
        }
    }
}

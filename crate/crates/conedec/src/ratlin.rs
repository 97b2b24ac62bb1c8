//! Exact rational scalars, vectors and small dense matrices.
//!
//! Everything downstream (cones, Zariski decompositions, chamber walls)
//! is decided by exact sign tests, so no floating point appears here.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::{Error, Result};

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// `p/q` as a rational. Panics on `q == 0`; test and fixture helper.
pub fn rat(p: i64, q: i64) -> Rational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Integer `n` as a rational.
pub fn rint(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Parses `"p/q"` or `"p"`. A leading minus is only allowed on `p`.
pub fn parse_rational(s: &str) -> std::result::Result<Rational, String> {
    let s = s.trim();
    if s.is_empty() {
        return Err("empty rational".to_string());
    }
    let (num_str, den_str) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (s, None),
    };
    let numer: BigInt = num_str
        .parse()
        .map_err(|_| format!("invalid integer '{num_str}'"))?;
    let denom: BigInt = match den_str {
        Some(d) => {
            if d.starts_with('-') || d.starts_with('+') {
                return Err(format!("sign on denominator in '{s}'"));
            }
            d.parse().map_err(|_| format!("invalid integer '{d}'"))?
        }
        None => BigInt::one(),
    };
    if denom.is_zero() {
        return Err(format!("zero denominator in '{s}'"));
    }
    Ok(BigRational::new(numer, denom))
}

/// Renders as `"p/q"`, or `"p"` when the denominator is one.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Coordinate vector with exact rational entries.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct QVector {
    entries: Vec<Rational>,
}

impl QVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![Rational::zero(); dim],
        }
    }

    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[i] = Rational::one();
        v
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Self {
            entries: entries.iter().map(|&n| rint(n)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Rational {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    pub fn dot(&self, other: &QVector) -> Rational {
        assert_eq!(self.dim(), other.dim(), "dot of mismatched dimensions");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a * b)
            .sum()
    }

    pub fn add(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &QVector) -> QVector {
        assert_eq!(self.dim(), other.dim());
        QVector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    pub fn neg(&self) -> QVector {
        QVector::new(self.entries.iter().map(|a| -a).collect())
    }

    pub fn scale(&self, s: &Rational) -> QVector {
        QVector::new(self.entries.iter().map(|a| a * s).collect())
    }

    /// Scales to coprime integer entries, preserving direction. Zero maps to zero.
    pub fn primitive(&self) -> QVector {
        if self.is_zero() {
            return self.clone();
        }
        let lcm = self
            .entries
            .iter()
            .fold(BigInt::one(), |acc, e| acc.lcm(e.denom()));
        let ints: Vec<BigInt> = self
            .entries
            .iter()
            .map(|e| e.numer() * (&lcm / e.denom()))
            .collect();
        let gcd = ints
            .iter()
            .fold(BigInt::zero(), |acc, n| acc.gcd(n));
        QVector::new(
            ints.into_iter()
                .map(|n| BigRational::from_integer(n / &gcd))
                .collect(),
        )
    }

    /// Primitive form with the first nonzero entry positive (for undirected data).
    pub fn primitive_signed(&self) -> QVector {
        let p = self.primitive();
        match p.entries.iter().find(|e| !e.is_zero()) {
            Some(first) if first.is_negative() => p.neg(),
            _ => p,
        }
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.entries.iter()
    }
}

impl fmt::Debug for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, e) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", format_rational(e))?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for QVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Outcome of an exact square solve: a unique solution or a kernel witness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SolveOutcome {
    Unique(QVector),
    /// The matrix is singular; carries one nonzero kernel vector.
    Singular { kernel: QVector },
}

/// Dense row-major rational matrix.
#[derive(Clone, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count must be rows*cols");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::new(rows, cols, vec![Rational::zero(); rows * cols])
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_rows(rows: &[QVector]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.dim());
        let mut data = Vec::with_capacity(r * c);
        for row in rows {
            assert_eq!(row.dim(), c, "ragged rows");
            data.extend(row.entries().iter().cloned());
        }
        Self::new(r, c, data)
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let vecs: Vec<QVector> = rows.iter().map(|r| QVector::from_ints(r)).collect();
        Self::from_rows(&vecs)
    }

    /// Columns are the given vectors.
    pub fn from_cols(cols: &[QVector]) -> Self {
        Self::from_rows(cols).transpose()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> QVector {
        QVector::new(self.row(r).to_vec())
    }

    pub fn col_vec(&self, c: usize) -> QVector {
        QVector::new((0..self.rows).map(|r| self.get(r, c).clone()).collect())
    }

    pub fn transpose(&self) -> QMatrix {
        let mut m = QMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                m.set(c, r, self.get(r, c).clone());
            }
        }
        m
    }

    pub fn mul_vec(&self, v: &QVector) -> QVector {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        QVector::new(
            (0..self.rows)
                .map(|r| {
                    self.row(r)
                        .iter()
                        .zip(v.entries())
                        .map(|(a, b)| a * b)
                        .sum()
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut m = QMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for c in 0..other.cols {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    acc += self.get(r, k) * other.get(k, c);
                }
                m.set(r, c, acc);
            }
        }
        m
    }

    /// Reduced row echelon form together with the pivot column indices.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            if pr != row {
                for c in 0..m.cols {
                    m.data.swap(pr * m.cols + c, row * m.cols + c);
                }
            }
            let inv = m.get(row, col).recip();
            for c in col..m.cols {
                let v = m.get(row, c) * &inv;
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r != row && !m.get(r, col).is_zero() {
                    let f = m.get(r, col).clone();
                    for c in col..m.cols {
                        let v = m.get(r, c) - &f * m.get(row, c);
                        m.set(r, c, v);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    pub fn determinant(&self) -> Result<Rational> {
        if self.rows != self.cols {
            return Err(Error::dimension("determinant of non-square matrix"));
        }
        let n = self.rows;
        let mut m = self.clone();
        let mut det = Rational::one();
        for col in 0..n {
            let Some(pr) = (col..n).find(|&r| !m.get(r, col).is_zero()) else {
                return Ok(Rational::zero());
            };
            if pr != col {
                for c in 0..n {
                    m.data.swap(pr * n + c, col * n + c);
                }
                det = -det;
            }
            det *= m.get(col, col);
            let inv = m.get(col, col).recip();
            for r in col + 1..n {
                if !m.get(r, col).is_zero() {
                    let f = m.get(r, col) * &inv;
                    for c in col..n {
                        let v = m.get(r, c) - &f * m.get(col, c);
                        m.set(r, c, v);
                    }
                }
            }
        }
        Ok(det)
    }

    /// Exact basis of the right kernel; empty when injective.
    /// Vectors are primitive with first nonzero entry positive.
    pub fn kernel_basis(&self) -> Vec<QVector> {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = QVector::zeros(self.cols);
            vec.entries[free] = Rational::one();
            for (col, prow) in pivot_set.iter().enumerate() {
                if let Some(prow) = prow {
                    vec.entries[col] = -r.get(*prow, free).clone();
                }
            }
            basis.push(vec.primitive_signed());
        }
        basis
    }

    /// Solves `A x = b` for square `A`, or reports a kernel witness when singular.
    pub fn solve_linear(&self, b: &QVector) -> Result<SolveOutcome> {
        if self.rows != self.cols {
            return Err(Error::dimension("solve_linear requires a square matrix"));
        }
        if b.dim() != self.rows {
            return Err(Error::dimension("solve_linear right-hand side dimension"));
        }
        let kernel = self.kernel_basis();
        if let Some(k) = kernel.into_iter().next() {
            return Ok(SolveOutcome::Singular { kernel: k });
        }
        // Nonsingular: eliminate on the augmented matrix.
        let n = self.rows;
        let mut aug = QMatrix::zeros(n, n + 1);
        for r in 0..n {
            for c in 0..n {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, n, b.get(r).clone());
        }
        let (rr, _) = aug.rref();
        Ok(SolveOutcome::Unique(QVector::new(
            (0..n).map(|r| rr.get(r, n).clone()).collect(),
        )))
    }

    /// Solves `A x = b` for rectangular `A` when the system is consistent.
    pub fn solve_consistent(&self, b: &QVector) -> Option<QVector> {
        if b.dim() != self.rows {
            return None;
        }
        let mut aug = QMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in 0..self.cols {
                aug.set(r, c, self.get(r, c).clone());
            }
            aug.set(r, self.cols, b.get(r).clone());
        }
        let (rr, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None; // inconsistent
        }
        let mut x = QVector::zeros(self.cols);
        for (row, &col) in pivots.iter().enumerate() {
            x.entries[col] = rr.get(row, self.cols).clone();
        }
        Some(x)
    }

    pub fn is_symmetric(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        for r in 0..self.rows {
            for c in r + 1..self.cols {
                if self.get(r, c) != self.get(c, r) {
                    return false;
                }
            }
        }
        true
    }

    /// Sylvester test: leading principal minors alternate in sign starting negative.
    /// Asymmetric input is a validation error, not `false`.
    pub fn is_negative_definite(&self) -> Result<bool> {
        if !self.is_symmetric() {
            return Err(Error::AsymmetricMatrix);
        }
        for k in 1..=self.rows {
            let mut sub = QMatrix::zeros(k, k);
            for r in 0..k {
                for c in 0..k {
                    sub.set(r, c, self.get(r, c).clone());
                }
            }
            let det = sub.determinant()?;
            let expected_positive = k % 2 == 0;
            match det.cmp(&Rational::zero()) {
                Ordering::Equal => return Ok(false),
                Ordering::Greater if !expected_positive => return Ok(false),
                Ordering::Less if expected_positive => return Ok(false),
                _ => {}
            }
        }
        Ok(true)
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                write!(f, "{} ", format_rational(self.get(r, c)))?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_parse_and_format() {
        assert_eq!(format_rational(&parse_rational("3/6").unwrap()), "1/2");
        assert_eq!(format_rational(&parse_rational("-4/2").unwrap()), "-2");
        assert_eq!(format_rational(&parse_rational("7").unwrap()), "7");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/-2").is_err());
        assert!(parse_rational("").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn rational_normalizes_eagerly() {
        let r = rat(6, -4);
        assert_eq!(r.numer(), &BigInt::from(-3));
        assert_eq!(r.denom(), &BigInt::from(2));
    }

    #[test]
    fn solve_two_by_two() {
        let a = QMatrix::from_int_rows(&[&[-2, 1], &[1, -2]]);
        let b = QVector::from_ints(&[-1, -1]);
        match a.solve_linear(&b).unwrap() {
            SolveOutcome::Unique(x) => assert_eq!(x, QVector::from_ints(&[1, 1])),
            other => panic!("expected unique solution, got {other:?}"),
        }
    }

    #[test]
    fn solve_identity() {
        let a = QMatrix::identity(3);
        let b = QVector::new(vec![rat(1, 2), rint(0), rint(-3)]);
        match a.solve_linear(&b).unwrap() {
            SolveOutcome::Unique(x) => assert_eq!(x, b),
            other => panic!("expected unique solution, got {other:?}"),
        }
    }

    #[test]
    fn solve_singular_reports_kernel() {
        let a = QMatrix::from_int_rows(&[&[-1, 1], &[1, -1]]);
        let b = QVector::from_ints(&[1, 0]);
        match a.solve_linear(&b).unwrap() {
            SolveOutcome::Singular { kernel } => {
                assert_eq!(kernel, QVector::from_ints(&[1, 1]));
                assert!(a.mul_vec(&kernel).is_zero());
            }
            other => panic!("expected singular report, got {other:?}"),
        }
    }

    #[test]
    fn kernel_basis_examples() {
        let a = QMatrix::from_int_rows(&[&[1, 1]]);
        assert_eq!(a.kernel_basis(), vec![QVector::from_ints(&[1, -1])]);

        assert!(QMatrix::identity(2).kernel_basis().is_empty());

        let a = QMatrix::from_int_rows(&[&[-1, 1], &[1, -1]]);
        assert_eq!(a.kernel_basis(), vec![QVector::from_ints(&[1, 1])]);
    }

    #[test]
    fn negative_definite_examples() {
        let g = QMatrix::from_int_rows(&[&[-1]]);
        assert!(g.is_negative_definite().unwrap());

        let g = QMatrix::from_int_rows(&[&[-1, 1], &[1, -1]]);
        assert!(!g.is_negative_definite().unwrap());

        let g = QMatrix::from_int_rows(&[&[-2, 1], &[1, -2]]);
        assert!(g.is_negative_definite().unwrap());

        let g = QMatrix::from_int_rows(&[&[-1, 2], &[1, -1]]);
        assert!(matches!(
            g.is_negative_definite(),
            Err(Error::AsymmetricMatrix)
        ));
    }

    #[test]
    fn primitive_normalization() {
        let v = QVector::new(vec![rat(1, 2), rat(-3, 4)]);
        assert_eq!(v.primitive(), QVector::from_ints(&[2, -3]));
        let v = QVector::new(vec![rat(-1, 3), rat(2, 3)]);
        assert_eq!(v.primitive_signed(), QVector::from_ints(&[1, -2]));
        assert!(QVector::zeros(3).primitive().is_zero());
    }

    #[test]
    fn solve_consistent_rectangular() {
        // Columns (1,2) and (0,1); target (1,3) = 1*(1,2) + 1*(0,1).
        let a = QMatrix::from_int_rows(&[&[1, 0], &[2, 1]]);
        let x = a.solve_consistent(&QVector::from_ints(&[1, 3])).unwrap();
        assert_eq!(x, QVector::from_ints(&[1, 1]));
        // Inconsistent system.
        let a = QMatrix::from_int_rows(&[&[1], &[2]]);
        assert!(a.solve_consistent(&QVector::from_ints(&[1, 1])).is_none());
    }
}

//! Dense linear algebra over arbitrary-precision rationals.
//!
//! Every rank, nullspace and solve in the crate goes through this module, so
//! all downstream dimensions (arrow counts, relator counts, graded dimensions)
//! are exact. Pivoting is deterministic: leftmost column first, and within a
//! column the first row with a nonzero entry.

use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rational = BigRational;

/// Column vector.
pub type QVector = Vec<Rational>;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Renders `p/q`, or `p` when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    q.to_string()
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let t = s.trim();
    let bad = || Error::MalformedRational(s.to_string());
    match t.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Serde adapter storing a rational as its `p/q` string.
pub mod serde_rational {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Dense row-major matrix of rationals.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(rows: Vec<Vec<Rational>>, cols: usize) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(QMatrix { rows: n, cols, data })
    }

    /// Convenience constructor for literal integer matrices. Panics on ragged input.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data: Vec<Rational> = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged literal matrix");
                r.iter().map(|&x| rat(x))
            })
            .collect();
        QMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_columns(columns: &[QVector], rows: usize) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch(format!(
                    "column {j} has {} entries, expected {rows}",
                    c.len()
                )));
            }
            for (i, x) in c.iter().enumerate() {
                m[(i, j)] = x.clone();
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> QVector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Rational>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Iterator over nonzero entries as `(row, col, value)`.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> {
        let cols = self.cols;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, x)| !x.is_zero())
            .map(move |(k, x)| (k / cols.max(1), k % cols.max(1), x))
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (r, c, x) in self.nonzero_entries() {
            t[(c, r)] = x.clone();
        }
        t
    }

    pub fn scale(&self, s: &Rational) -> Self {
        QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    /// `self += s * other`.
    pub fn add_scaled(&mut self, other: &QMatrix, s: &Rational) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        if s.is_zero() {
            return;
        }
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            if !b.is_zero() {
                *a += b * s;
            }
        }
    }

    pub fn add(&self, other: &QMatrix) -> QMatrix {
        let mut m = self.clone();
        m.add_scaled(other, &Rational::one());
        m
    }

    pub fn sub(&self, other: &QMatrix) -> QMatrix {
        let mut m = self.clone();
        m.add_scaled(other, &-Rational::one());
        m
    }

    pub fn mul_vec(&self, v: &[Rational]) -> QVector {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                let mut acc = Rational::zero();
                for (a, b) in self.row(r).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc += a * b;
                    }
                }
                acc
            })
            .collect()
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kronecker(&self, other: &QMatrix) -> QMatrix {
        let mut k = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for (r1, c1, a) in self.nonzero_entries() {
            for (r2, c2, b) in other.nonzero_entries() {
                k[(r1 * other.rows + r2, c1 * other.cols + c2)] = a * b;
            }
        }
        k
    }

    /// Reduced row-echelon form together with its pivot columns.
    pub fn rref(&self) -> (QMatrix, Vec<usize>) {
        let mut rows = self.to_rows();
        let pivots = rref_in_place(&mut rows, self.cols);
        let reduced = QMatrix {
            rows: self.rows,
            cols: self.cols,
            data: rows.into_iter().flatten().collect(),
        };
        (reduced, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{v : self·v = 0}`, one vector per free column of the RREF
    /// (that free variable set to one, the other free variables to zero).
    pub fn nullspace(&self) -> Vec<QVector> {
        let (r, pivots) = self.rref();
        nullspace_from_rref(&r, &pivots)
    }

    /// Inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<QMatrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut rows: Vec<Vec<Rational>> = (0..n)
            .map(|r| {
                let mut row = self.row(r).to_vec();
                row.extend((0..n).map(|c| if c == r { Rational::one() } else { Rational::zero() }));
                row
            })
            .collect();
        let pivots = rref_in_place(&mut rows, 2 * n);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        let rows: Vec<Vec<Rational>> = rows.into_iter().map(|r| r[n..].to_vec()).collect();
        QMatrix::from_rows(rows, n).ok()
    }
}

impl Index<(usize, usize)> for QMatrix {
    type Output = Rational;
    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &QMatrix {
    type Output = QMatrix;
    fn mul(self, rhs: &QMatrix) -> QMatrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shape mismatch");
        let mut out = QMatrix::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for (k, a) in self.row(r).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (c, b) in rhs.row(k).iter().enumerate() {
                    if !b.is_zero() {
                        out.data[r * rhs.cols + c] += a * b;
                    }
                }
            }
        }
        out
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QMatrix {}x{} ", self.rows, self.cols)?;
        f.debug_list()
            .entries((0..self.rows).map(|r| self.row(r).iter().map(format_rational).collect::<Vec<_>>().join(" ")))
            .finish()
    }
}

impl Serialize for QMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> = (0..self.rows)
            .map(|r| self.row(r).iter().map(format_rational).collect())
            .collect();
        #[derive(Serialize)]
        struct Repr {
            rows: usize,
            cols: usize,
            entries: Vec<Vec<String>>,
        }
        Repr {
            rows: self.rows,
            cols: self.cols,
            entries: rows,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            rows: usize,
            cols: usize,
            entries: Vec<Vec<String>>,
        }
        let repr = Repr::deserialize(d)?;
        if repr.entries.len() != repr.rows {
            return Err(serde::de::Error::custom("row count mismatch"));
        }
        let rows = repr
            .entries
            .iter()
            .map(|r| r.iter().map(|s| parse_rational(s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        QMatrix::from_rows(rows, repr.cols).map_err(serde::de::Error::custom)
    }
}

/// Row-reduces `rows` in place to RREF and returns the pivot columns.
pub(crate) fn rref_in_place(rows: &mut [Vec<Rational>], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut pr = 0;
    for c in 0..cols {
        if pr == rows.len() {
            break;
        }
        let Some(found) = (pr..rows.len()).find(|&r| !rows[r][c].is_zero()) else {
            continue;
        };
        rows.swap(pr, found);
        let inv = rows[pr][c].recip();
        if !inv.is_one() {
            for x in rows[pr][c..].iter_mut() {
                if !x.is_zero() {
                    *x *= &inv;
                }
            }
        }
        let (head, tail) = rows.split_at_mut(pr);
        let (pivot_row, tail) = tail.split_first_mut().expect("pivot row exists");
        for other in head.iter_mut().chain(tail.iter_mut()) {
            eliminate(other, pivot_row, c);
        }
        pivots.push(c);
        pr += 1;
    }
    pivots
}

/// `row -= row[c] * pivot_row`, where `pivot_row[c] == 1`.
fn eliminate(row: &mut [Rational], pivot_row: &[Rational], c: usize) {
    if row[c].is_zero() {
        return;
    }
    let f = row[c].clone();
    for (x, p) in row[c..].iter_mut().zip(&pivot_row[c..]) {
        if !p.is_zero() {
            *x -= &f * p;
        }
    }
}

fn nullspace_from_rref(r: &QMatrix, pivots: &[usize]) -> Vec<QVector> {
    let n = r.cols();
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -r[(i, free)].clone();
            }
            v
        })
        .collect()
}

/// Coefficients expressing `v` in terms of `basis` when `v` lies in its span.
///
/// The coefficients come from `solve`, so they are unique when `basis` is
/// linearly independent.
pub fn in_span(v: &[Rational], basis: &[QVector]) -> Result<Option<QVector>> {
    if let Some(b) = basis.iter().find(|b| b.len() != v.len()) {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against basis vector of length {}",
            v.len(),
            b.len()
        )));
    }
    let a = QMatrix::from_columns(basis, v.len())?;
    match solve(&a, v) {
        Ok(x) => Ok(Some(x)),
        Err(Error::Inconsistent) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Solves `a·x = b` exactly. Free variables are set to zero.
pub fn solve(a: &QMatrix, b: &[Rational]) -> Result<QVector> {
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} equations but right-hand side of length {}",
            a.rows(),
            b.len()
        )));
    }
    let n = a.cols();
    let mut rows: Vec<Vec<Rational>> = (0..a.rows())
        .map(|r| {
            let mut row = a.row(r).to_vec();
            row.push(b[r].clone());
            row
        })
        .collect();
    let pivots = rref_in_place(&mut rows, n + 1);
    if pivots.last() == Some(&n) {
        return Err(Error::Inconsistent);
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &p) in pivots.iter().enumerate() {
        x[p] = rows[i][n].clone();
    }
    Ok(x)
}

/// Row basis of a subspace kept in reduced echelon form, grown one vector at
/// a time. Used for span bookkeeping in sweeps where vectors arrive lazily.
#[derive(Clone, Debug, Default)]
pub struct EchelonBasis {
    dim: usize,
    rows: Vec<QVector>,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(dim: usize) -> Self {
        EchelonBasis {
            dim,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.dim
    }

    fn reduce(&self, v: &[Rational]) -> QVector {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            eliminate(&mut v, row, p);
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Zero::is_zero)
    }

    /// Adds `v`; returns false (and changes nothing) if it was already in the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.dim);
        let mut r = self.reduce(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = r[p].recip();
        for x in r.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            eliminate(row, &r, p);
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, r);
        true
    }

    /// The RREF rows spanning the subspace.
    pub fn rows(&self) -> &[QVector] {
        &self.rows
    }
}

/// True when every entry is an integer in {-1, 0, 1}.
pub fn is_unit_or_zero(q: &Rational) -> bool {
    q.is_integer() && q.abs() <= Rational::one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn col(xs: &[i64]) -> QVector {
        xs.iter().map(|&x| rat(x)).collect()
    }

    #[test]
    fn rref_rank_one() {
        let (r, p) = QMatrix::from_i64(&[&[2, 4], &[1, 2]]).rref();
        assert_eq!(r, QMatrix::from_i64(&[&[1, 2], &[0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn rref_identity_and_permutation() {
        let id = QMatrix::identity(4);
        assert_eq!(id.rref(), (id.clone(), vec![0, 1, 2, 3]));
        let (r, p) = QMatrix::from_i64(&[&[0, 1], &[1, 0]]).rref();
        assert_eq!(r, QMatrix::identity(2));
        assert_eq!(p, vec![0, 1]);
    }

    #[test]
    fn nullspace_examples() {
        let ns = QMatrix::from_i64(&[&[1, 1]]).nullspace();
        assert_eq!(ns, vec![col(&[-1, 1])]);
        assert!(QMatrix::from_i64(&[&[1, 2], &[3, 4]]).nullspace().is_empty());
        assert_eq!(QMatrix::zeros(2, 3).nullspace().len(), 3);
    }

    #[test]
    fn in_span_examples() {
        assert_eq!(in_span(&col(&[2, 2]), &[col(&[1, 1])]).unwrap(), Some(col(&[2])));
        assert_eq!(in_span(&col(&[1, 0]), &[col(&[0, 1])]).unwrap(), None);
        assert_eq!(
            in_span(&col(&[0, 0]), &[col(&[1, 1]), col(&[1, 0])]).unwrap(),
            Some(col(&[0, 0]))
        );
        assert!(matches!(
            in_span(&col(&[0, 0]), &[col(&[1])]),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn solve_examples() {
        let b = col(&[5, -7]);
        assert_eq!(solve(&QMatrix::identity(2), &b).unwrap(), b);
        assert_eq!(solve(&QMatrix::from_i64(&[&[1, 1]]), &col(&[3])).unwrap(), col(&[3, 0]));
        assert!(matches!(
            solve(&QMatrix::from_i64(&[&[1], &[1]]), &col(&[1, 2])),
            Err(Error::Inconsistent)
        ));
        assert!(matches!(
            solve(&QMatrix::identity(2), &col(&[1])),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn rational_strings() {
        assert_eq!(format_rational(&ratio(6, -4)), "-3/2");
        assert_eq!(format_rational(&rat(7)), "7");
        assert_eq!(parse_rational("-3/2").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational("4/2").unwrap(), rat(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn inverse_round_trip() {
        let m = QMatrix::from_i64(&[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, QMatrix::identity(2));
        assert!(QMatrix::from_i64(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn echelon_basis_tracks_span() {
        let mut e = EchelonBasis::new(3);
        assert!(e.insert(&col(&[1, 1, 0])));
        assert!(!e.insert(&col(&[2, 2, 0])));
        assert!(e.insert(&col(&[0, 1, 1])));
        assert!(e.contains(&col(&[1, 2, 1])));
        assert!(!e.contains(&col(&[0, 0, 1])));
        assert_eq!(e.rank(), 2);
    }

    fn small_matrix() -> impl Strategy<Value = QMatrix> {
        (1usize..5, 1usize..5).prop_flat_map(|(r, c)| {
            proptest::collection::vec(-3i64..4, r * c).prop_map(move |xs| {
                let rows = xs.chunks(c).map(|ch| ch.iter().map(|&x| rat(x)).collect()).collect();
                QMatrix::from_rows(rows, c).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn rref_is_idempotent(m in small_matrix()) {
            let (r, p) = m.rref();
            let (rr, pp) = r.rref();
            prop_assert_eq!(r, rr);
            prop_assert_eq!(p, pp);
        }

        #[test]
        fn rank_of_transpose(m in small_matrix()) {
            prop_assert_eq!(m.rank(), m.transpose().rank());
        }

        #[test]
        fn nullspace_vectors_are_killed(m in small_matrix()) {
            let ns = m.nullspace();
            prop_assert_eq!(ns.len(), m.cols() - m.rank());
            let (r, _) = m.rref();
            let mut rows = r.to_rows();
            rows.retain(|row| row.iter().any(|x| !x.is_zero()));
            let base_rank = rows.len();
            for v in &ns {
                prop_assert!(m.mul_vec(v).iter().all(Zero::is_zero));
                let mut with_v = rows.clone();
                with_v.push(v.clone());
                let stacked = QMatrix::from_rows(with_v, m.cols()).unwrap();
                // v is orthogonal to the row space, so it always adds a dimension.
                prop_assert_eq!(stacked.rank(), base_rank + 1);
            }
        }

        #[test]
        fn solve_satisfies_system(m in small_matrix(), seed in proptest::collection::vec(-3i64..4, 5)) {
            let x0: QVector = seed.iter().take(m.cols()).map(|&x| rat(x)).collect();
            let x0 = if x0.len() < m.cols() { let mut v = x0; v.resize(m.cols(), rat(0)); v } else { x0 };
            let b = m.mul_vec(&x0);
            let x = solve(&m, &b).unwrap();
            prop_assert_eq!(m.mul_vec(&x), b);
        }
    }
}

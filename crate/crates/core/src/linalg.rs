//! Dense exact-rational matrices.
//!
//! Rank and determinant run fraction-free: every row is first scaled to a
//! primitive integer row, then Bareiss elimination works over `BigInt`,
//! where each intermediate entry is a minor of the scaled matrix and the
//! divisions are exact.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

pub type QVector = Vec<Rational>;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
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

    /// Builds a matrix from row vectors. `cols` fixes the width so that a
    /// matrix with zero rows (or zero columns) keeps its shape.
    pub fn from_rows(cols: usize, rows: Vec<QVector>) -> Result<Self> {
        let mut data = Vec::with_capacity(rows.len() * cols);
        let n = rows.len();
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has length {}, expected {cols}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(Self {
            rows: n,
            cols,
            data,
        })
    }

    /// Convenience constructor from small integer ratios `(p, q)`.
    pub fn from_fracs(rows: &[&[(i64, i64)]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&(p, q)| rational::frac(p, q)).collect())
            .collect();
        Self::from_rows(cols, rows).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        (0..self.rows).map(move |i| self.row(i))
    }

    pub fn to_rows(&self) -> Vec<QVector> {
        self.row_iter().map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    /// Rows selected by index, in the given order.
    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Self::from_rows(self.cols, rows).expect("same width")
    }

    pub fn mul_vec(&self, x: &[Rational]) -> Result<QVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                x.len(),
                self.cols
            )));
        }
        Ok(self.row_iter().map(|r| dot(r, x)).collect())
    }

    pub fn rank(&self) -> usize {
        rank(self)
    }

    pub fn determinant(&self) -> Result<Rational> {
        determinant(self)
    }

    /// Some solution of `self * x = b`, or `None` when inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<QVector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side of length {} against {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut aug: Vec<QVector> = self
            .row_iter()
            .zip(b)
            .map(|(r, bi)| {
                let mut v = r.to_vec();
                v.push(bi.clone());
                v
            })
            .collect();
        let pivots = reduce_rows(&mut aug, self.cols);
        if aug[pivots.len()..].iter().any(|r| !r[self.cols].is_zero()) {
            return Ok(None);
        }
        let mut x = vec![Rational::zero(); self.cols];
        for (i, &c) in pivots.iter().enumerate() {
            x[c] = aug[i][self.cols].clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Result<Option<Self>> {
        if self.rows != self.cols {
            return Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let mut aug: Vec<QVector> = self
            .row_iter()
            .enumerate()
            .map(|(i, r)| {
                let mut v = r.to_vec();
                v.extend((0..n).map(|j| {
                    if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    }
                }));
                v
            })
            .collect();
        if reduce_rows(&mut aug, n).len() < n {
            return Ok(None);
        }
        let rows = aug.into_iter().map(|r| r[n..].to_vec()).collect();
        Ok(Some(Self::from_rows(n, rows)?))
    }
}

impl std::ops::Index<(usize, usize)> for QMatrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for QMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "QMatrix {}x{} [", self.rows, self.cols)?;
        for r in self.row_iter() {
            writeln!(f, "  {:?}", rational::format_all(r))?;
        }
        write!(f, "]")
    }
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Gauss-Jordan over the first `cols` columns; returns pivot columns.
fn reduce_rows(m: &mut [QVector], cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for v in m[r].iter_mut() {
            *v *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let (top, rest) = if i < r {
                    let (a, b) = m.split_at_mut(r);
                    (&b[0], &mut a[i])
                } else {
                    let (a, b) = m.split_at_mut(i);
                    (&a[r], &mut b[0])
                };
                for (x, y) in rest.iter_mut().zip(top.iter()) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    pivots
}

/// Result of Bareiss elimination on an integer matrix.
struct Bareiss {
    rank: usize,
    /// Determinant of the integer matrix when it is square; zero otherwise
    /// or when singular.
    det: BigInt,
}

fn bareiss(mut a: Vec<Vec<BigInt>>, cols: usize) -> Bareiss {
    let rows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut negate = false;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if p != r {
            a.swap(p, r);
            negate = !negate;
        }
        let (head, tail) = a.split_at_mut(r + 1);
        let pivot_row = &head[r];
        let piv = &pivot_row[c];
        for row in tail.iter_mut() {
            let lead = std::mem::take(&mut row[c]);
            for j in c + 1..cols {
                let v = piv * &row[j] - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
        }
        prev = a[r][c].clone();
        r += 1;
    }
    let det = if rows == cols && r == rows {
        if negate {
            -prev
        } else {
            prev
        }
    } else {
        BigInt::zero()
    };
    Bareiss { rank: r, det }
}

fn integer_rows(rows: impl Iterator<Item = QVector>) -> (Vec<Vec<BigInt>>, BigInt) {
    // Each row is multiplied by the lcm of its denominators; the product of
    // those multipliers is returned to undo the scaling of determinants.
    let mut scale = BigInt::one();
    let ints = rows
        .map(|r| {
            let den = rational::common_denominator(&r);
            let row = r.iter().map(|v| v.numer() * (&den / v.denom())).collect();
            scale *= den;
            row
        })
        .collect();
    (ints, scale)
}

pub fn rank(m: &QMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let (ints, _) = integer_rows(m.row_iter().map(|r| r.to_vec()));
    bareiss(ints, m.cols).rank
}

pub fn determinant(m: &QMatrix) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::NotSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    if m.rows == 0 {
        return Ok(Rational::one());
    }
    let (ints, scale) = integer_rows(m.row_iter().map(|r| r.to_vec()));
    let det = bareiss(ints, m.cols).det;
    Ok(Rational::new(det, scale))
}

/// Rank of an integer matrix given as rows.
pub fn integer_rank(rows: Vec<Vec<BigInt>>, cols: usize) -> usize {
    if rows.is_empty() || cols == 0 {
        return 0;
    }
    bareiss(rows, cols).rank
}

/// Affine dimension of a point set; `-1` for the empty set.
pub fn affine_dimension(points: &[&[Rational]]) -> i64 {
    let Some(first) = points.first() else {
        return -1;
    };
    let lifted = points.iter().map(|p| {
        let mut v = Vec::with_capacity(first.len() + 1);
        v.push(Rational::one());
        v.extend(p.iter().cloned());
        v
    });
    let (ints, _) = integer_rows(lifted);
    integer_rank(ints, first.len() + 1) as i64 - 1
}

/// Sign of a rational as -1, 0, 1.
pub fn sign(r: &Rational) -> i8 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

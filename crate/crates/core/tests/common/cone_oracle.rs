//! Independent cone-membership oracle: a vector set positively spans
//! `R^d` iff its cone contains every `±e_i`, each membership decided by
//! Carathéodory subset enumeration with its own Gaussian elimination.

use num_traits::{One, Signed, Zero};

use polyproj::linalg::QVector;
use polyproj::rational::{int, Rational};

/// Solves `cols * x = y` for the given columns when they are linearly
/// independent and the system is consistent.
fn solve_independent(cols: &[&QVector], y: &[Rational]) -> Option<Vec<Rational>> {
    let d = y.len();
    let k = cols.len();
    let mut m: Vec<Vec<Rational>> = (0..d)
        .map(|i| {
            let mut row: Vec<Rational> = cols.iter().map(|c| c[i].clone()).collect();
            row.push(y[i].clone());
            row
        })
        .collect();
    let mut pivot_row = 0;
    for c in 0..k {
        let p = (pivot_row..d).find(|&i| !m[i][c].is_zero())?;
        m.swap(pivot_row, p);
        let inv = Rational::one() / &m[pivot_row][c];
        for x in m[pivot_row].iter_mut() {
            *x *= &inv;
        }
        for i in 0..d {
            if i != pivot_row && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                let pivot = m[pivot_row].clone();
                for (x, p) in m[i].iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        pivot_row += 1;
    }
    if m[pivot_row..].iter().any(|row| !row[k].is_zero()) {
        return None;
    }
    Some((0..k).map(|c| m[c][k].clone()).collect())
}

pub fn in_cone(vectors: &[QVector], y: &[Rational]) -> bool {
    let d = y.len();
    if y.iter().all(Zero::is_zero) {
        return true;
    }
    let n = vectors.len();
    (1u32..1 << n).any(|mask| {
        if mask.count_ones() as usize > d {
            return false;
        }
        let cols: Vec<&QVector> = (0..n)
            .filter(|i| mask >> i & 1 == 1)
            .map(|i| &vectors[i])
            .collect();
        solve_independent(&cols, y).is_some_and(|x| x.iter().all(|c| !c.is_negative()))
    })
}

pub fn positively_spans_oracle(vectors: &[QVector], d: usize) -> bool {
    (0..d).all(|i| {
        [-1, 1].iter().all(|&s| {
            let e: QVector = (0..d).map(|j| int(if i == j { s } else { 0 })).collect();
            in_cone(vectors, &e)
        })
    })
}

//! Double description: inequality system to vertex list.
//!
//! The polytope `{x : A x <= b}` is homogenized to the cone
//! `{(x0, x) : b x0 - A x >= 0, x0 >= 0}`. The cone starts as the simplicial
//! cone of the first linearly independent rows and the remaining rows are
//! inserted in index order. Rays are kept as primitive integer vectors.
//! Two rays are adjacent when no third ray is tight on every constraint
//! they share (combinatorial test, exact for pointed cones).

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::{HPolytope, VPolytope};
use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix};
use crate::rational::{self, Rational};

struct Ray {
    coords: Vec<BigInt>,
    zeros: FixedBitSet,
}

fn int_dot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn make_primitive(v: &mut [BigInt]) {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !g.is_zero() && !g.is_one() {
        for x in v.iter_mut() {
            *x /= &g;
        }
    }
}

/// Homogenized constraint rows; row `m` is `x0 >= 0`.
fn homogenized_rows(p: &HPolytope) -> Vec<Vec<BigInt>> {
    let d = p.dim();
    let mut rows: Vec<Vec<BigInt>> = (0..p.num_rows())
        .map(|i| {
            let mut row = Vec::with_capacity(d + 1);
            row.push(p.rhs()[i].clone());
            row.extend(p.matrix().row(i).iter().map(|a| -a));
            rational::primitive_integer(&row)
        })
        .collect();
    let mut x0 = vec![BigInt::zero(); d + 1];
    x0[0] = BigInt::one();
    rows.push(x0);
    rows
}

/// Converts an inequality description to its vertices, each with the set of
/// rows tight at it. Vertices are sorted lexicographically.
pub fn h_to_v(p: &HPolytope) -> Result<VPolytope> {
    let d = p.dim();
    let m = p.num_rows();
    let width = d + 1;
    let rows = homogenized_rows(p);
    let total = rows.len();

    // Initial basis: greedy lexicographic choice of independent rows.
    let mut basis: Vec<usize> = Vec::with_capacity(width);
    for i in 0..total {
        let mut trial: Vec<Vec<BigInt>> = basis.iter().map(|&j| rows[j].clone()).collect();
        trial.push(rows[i].clone());
        if linalg::integer_rank(trial, width) == basis.len() + 1 {
            basis.push(i);
            if basis.len() == width {
                break;
            }
        }
    }
    if basis.len() < width {
        // A has a nontrivial kernel: the region contains a line.
        return Err(Error::Unbounded);
    }
    let bmat = QMatrix::from_rows(
        width,
        basis
            .iter()
            .map(|&i| {
                rows[i]
                    .iter()
                    .map(|x| Rational::from_integer(x.clone()))
                    .collect()
            })
            .collect(),
    )?;
    let inv = bmat.inverse()?.expect("basis rows are independent");
    let mut rays: Vec<Ray> = (0..width)
        .map(|j| {
            let col: Vec<Rational> = (0..width).map(|i| inv[(i, j)].clone()).collect();
            let mut zeros = FixedBitSet::with_capacity(total);
            for (k, &bi) in basis.iter().enumerate() {
                if k != j {
                    zeros.insert(bi);
                }
            }
            Ray {
                coords: rational::primitive_integer(&col),
                zeros,
            }
        })
        .collect();

    let mut in_basis = FixedBitSet::with_capacity(total);
    for &i in &basis {
        in_basis.insert(i);
    }
    for h in (0..total).filter(|&i| !in_basis.contains(i)) {
        rays = insert_constraint(rays, &rows[h], h, width);
        if rays.is_empty() {
            break;
        }
    }

    let mut vertices = Vec::new();
    let mut unbounded = false;
    for ray in &rays {
        let x0 = &ray.coords[0];
        if x0.is_zero() {
            unbounded = true;
            continue;
        }
        let x: Vec<Rational> = ray.coords[1..]
            .iter()
            .map(|c| Rational::new(c.clone(), x0.clone()))
            .collect();
        let tight: Vec<usize> = ray.zeros.ones().filter(|&i| i < m).collect();
        vertices.push((x, tight));
    }
    if vertices.is_empty() {
        return Err(Error::Empty);
    }
    if unbounded {
        return Err(Error::Unbounded);
    }
    vertices.sort_by(|a, b| a.0.cmp(&b.0));
    vertices.dedup_by(|a, b| a.0 == b.0);
    let refs: Vec<&[Rational]> = vertices.iter().map(|(x, _)| x.as_slice()).collect();
    if linalg::affine_dimension(&refs) != d as i64 {
        return Err(Error::Degenerate);
    }
    let (vertices, incidence) = vertices.into_iter().unzip();
    Ok(VPolytope {
        dim: d,
        vertices,
        incidence,
        num_rows: m,
    })
}

fn insert_constraint(rays: Vec<Ray>, h: &[BigInt], index: usize, width: usize) -> Vec<Ray> {
    let values: Vec<BigInt> = rays.iter().map(|r| int_dot(h, &r.coords)).collect();
    let pos: Vec<usize> = (0..rays.len())
        .filter(|&i| values[i].is_positive())
        .collect();
    let neg: Vec<usize> = (0..rays.len())
        .filter(|&i| values[i].is_negative())
        .collect();
    if neg.is_empty() {
        return rays
            .into_iter()
            .zip(values)
            .map(|(mut r, v)| {
                if v.is_zero() {
                    r.zeros.insert(index);
                }
                r
            })
            .collect();
    }

    let mut created = Vec::new();
    let mut common = FixedBitSet::with_capacity(rays[0].zeros.len());
    for &p in &pos {
        for &q in &neg {
            common.clone_from(&rays[p].zeros);
            common.intersect_with(&rays[q].zeros);
            if common.count_ones(..) + 2 < width {
                continue;
            }
            let adjacent = rays
                .iter()
                .enumerate()
                .all(|(s, r)| s == p || s == q || !common.is_subset(&r.zeros));
            if !adjacent {
                continue;
            }
            let vp = &values[p];
            let vq = -&values[q];
            let mut coords: Vec<BigInt> = rays[p]
                .coords
                .iter()
                .zip(&rays[q].coords)
                .map(|(a, b)| &vq * a + vp * b)
                .collect();
            make_primitive(&mut coords);
            let mut zeros = common.clone();
            zeros.insert(index);
            created.push(Ray { coords, zeros });
        }
    }

    let mut out: Vec<Ray> = rays
        .into_iter()
        .zip(values)
        .filter_map(|(mut r, v)| {
            if v.is_negative() {
                None
            } else {
                if v.is_zero() {
                    r.zeros.insert(index);
                }
                Some(r)
            }
        })
        .collect();
    out.extend(created);
    out
}

//! Recognizing the combinatorial type of a product of polygons.
//!
//! Canonical model of `(C_n)^r`: vertices are tuples `t` in `(Z_n)^r`, and
//! the facet `(k, i)` contains `t` iff `t_k` is `i` or `i + 1 (mod n)`.
//! A labeled vertex description has this type when every vertex is tight on
//! exactly two cyclically adjacent rows `{j, j+1}` of every block (giving
//! `t_k = j + 1`) and the tuples form a bijection onto `(Z_n)^r`.

use std::collections::HashMap;

use super::{HPolytope, VPolytope, VertexSet};
use crate::error::{Error, Result};

/// Vertex tuples of a polytope recognized as `(C_n)^r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProductLabeling {
    pub n: usize,
    pub r: usize,
    /// Tuple of each vertex, entries in `0..n`.
    pub tuples: Vec<Vec<usize>>,
    by_tuple: HashMap<Vec<usize>, usize>,
}

/// An n-gon 2-face of `(C_n)^r`: all vertices that agree outside `factor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonFace {
    pub id: usize,
    /// 1-based polygon factor along which the face varies.
    pub factor: usize,
    /// Vertex indices ordered by the coordinate along `factor`.
    pub vertices: Vec<usize>,
}

impl PolygonFace {
    pub fn vertex_set(&self, num_vertices: usize) -> VertexSet {
        let mut s = VertexSet::with_capacity(num_vertices);
        for &v in &self.vertices {
            s.insert(v);
        }
        s
    }
}

impl ProductLabeling {
    pub fn vertex(&self, tuple: &[usize]) -> Option<usize> {
        self.by_tuple.get(tuple).copied()
    }

    /// The `r n^{r-1}` polygon 2-faces, ordered by factor and then by the
    /// tuple of the remaining coordinates.
    pub fn polygon_faces(&self) -> Vec<PolygonFace> {
        let (n, r) = (self.n, self.r);
        let mut faces = Vec::with_capacity(r * n.pow(r as u32 - 1));
        for k in 0..r {
            for rest in 0..n.pow(r as u32 - 1) {
                let mut tuple = vec![0; r];
                let mut code = rest;
                for j in (0..r).filter(|&j| j != k).rev() {
                    tuple[j] = code % n;
                    code /= n;
                }
                let vertices = (0..n)
                    .map(|c| {
                        tuple[k] = c;
                        self.by_tuple[&tuple]
                    })
                    .collect();
                faces.push(PolygonFace {
                    id: faces.len(),
                    factor: k + 1,
                    vertices,
                });
            }
        }
        faces
    }
}

/// Recognizes `v` (computed from the labeled system `h`) as `(C_n)^r`.
/// Returns `Ok(None)` when the combinatorial type differs.
pub fn product_labeling(
    h: &HPolytope,
    v: &VPolytope,
    n: usize,
    r: usize,
) -> Result<Option<ProductLabeling>> {
    let labels = h.labels().ok_or(Error::MissingLabels)?;
    if n < 3 || r == 0 || v.num_rows != h.num_rows() {
        return Ok(None);
    }
    let Some(expected) = (n as u64).checked_pow(r as u32) else {
        return Ok(None);
    };
    if v.len() as u64 != expected {
        return Ok(None);
    }
    if labels
        .iter()
        .any(|l| l.block == 0 || l.block > r || l.index >= n)
    {
        return Ok(None);
    }
    let mut tuples = Vec::with_capacity(v.len());
    let mut by_tuple = HashMap::with_capacity(v.len());
    for (vi, tight) in v.incidence.iter().enumerate() {
        let mut per_block: Vec<Vec<usize>> = vec![Vec::new(); r];
        for &row in tight {
            let l = labels[row];
            per_block[l.block - 1].push(l.index);
        }
        let mut tuple = Vec::with_capacity(r);
        for rows in &mut per_block {
            rows.sort_unstable();
            let [a, b] = rows[..] else {
                return Ok(None);
            };
            let upper = if b == a + 1 {
                b
            } else if a == 0 && b == n - 1 {
                0
            } else {
                return Ok(None);
            };
            tuple.push(upper);
        }
        if by_tuple.insert(tuple.clone(), vi).is_some() {
            return Ok(None);
        }
        tuples.push(tuple);
    }
    Ok(Some(ProductLabeling {
        n,
        r,
        tuples,
        by_tuple,
    }))
}

pub fn product_isomorphic(h: &HPolytope, v: &VPolytope, n: usize, r: usize) -> Result<bool> {
    Ok(product_labeling(h, v, n, r)?.is_some())
}

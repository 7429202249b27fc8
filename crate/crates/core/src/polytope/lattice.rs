//! Face lattices from vertex-facet incidences.

use std::collections::{HashMap, HashSet};

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use rayon::prelude::*;
use serde::Serialize;

use super::VPolytope;
use crate::error::{Error, Result};
use crate::linalg;

pub type VertexSet = FixedBitSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub vertices: VertexSet,
    pub dim: i64,
}

/// All faces of a polytope, from the empty face (dimension -1) up to the
/// polytope itself, each given by its vertex set.
#[derive(Clone, Debug)]
pub struct FaceLattice {
    dim: usize,
    faces: Vec<Face>,
    index: HashMap<VertexSet, usize>,
}

impl FaceLattice {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn faces(&self) -> &[Face] {
        &self.faces
    }

    pub fn faces_of_dim(&self, k: i64) -> impl Iterator<Item = &Face> + '_ {
        self.faces.iter().filter(move |f| f.dim == k)
    }

    pub fn facets(&self) -> impl Iterator<Item = &Face> + '_ {
        self.faces_of_dim(self.dim as i64 - 1)
    }

    pub fn position(&self, vertices: &VertexSet) -> Option<usize> {
        self.index.get(vertices).copied()
    }

    pub fn get(&self, vertices: &VertexSet) -> Option<&Face> {
        self.position(vertices).map(|i| &self.faces[i])
    }

    /// `(f_0, ..., f_{d-1})`.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim];
        for face in &self.faces {
            if face.dim >= 0 && (face.dim as usize) < self.dim {
                f[face.dim as usize] += 1;
            }
        }
        f
    }

    pub fn satisfies_euler(&self) -> bool {
        let alt: i64 = self
            .f_vector()
            .iter()
            .enumerate()
            .map(|(i, &f)| if i % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum();
        let expected = if self.dim.is_multiple_of(2) { 0 } else { 2 };
        alt == expected
    }

    /// Pairwise check that intersections of faces are faces.
    pub fn is_intersection_closed(&self) -> bool {
        self.faces.iter().all(|a| {
            self.faces.iter().all(|b| {
                let mut c = a.vertices.clone();
                c.intersect_with(&b.vertices);
                self.index.contains_key(&c)
            })
        })
    }

    /// Dimensions strictly increase along every proper containment.
    pub fn is_graded(&self) -> bool {
        self.faces.iter().all(|a| {
            self.faces.iter().all(|b| {
                !(a.vertices != b.vertices && a.vertices.is_subset(&b.vertices)) || a.dim < b.dim
            })
        })
    }

    pub fn flag_vector(&self) -> Result<FlagVector4> {
        let f03 = flag_f03(self)?;
        let f = self.f_vector();
        Ok(FlagVector4 {
            f0: f[0].into(),
            f1: f[1].into(),
            f2: f[2].into(),
            f3: f[3].into(),
            f03,
        })
    }
}

/// Face numbers and vertex-facet incidences of a 4-polytope. Entries are
/// unbounded integers so that closed-form predictions at large parameters
/// fit as well.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct FlagVector4 {
    #[serde(serialize_with = "crate::rational::serialize_display")]
    pub f0: BigInt,
    #[serde(serialize_with = "crate::rational::serialize_display")]
    pub f1: BigInt,
    #[serde(serialize_with = "crate::rational::serialize_display")]
    pub f2: BigInt,
    #[serde(serialize_with = "crate::rational::serialize_display")]
    pub f3: BigInt,
    #[serde(serialize_with = "crate::rational::serialize_display")]
    pub f03: BigInt,
}

impl FlagVector4 {
    pub fn from_small(f: [u64; 5]) -> Self {
        Self {
            f0: f[0].into(),
            f1: f[1].into(),
            f2: f[2].into(),
            f3: f[3].into(),
            f03: f[4].into(),
        }
    }

    pub fn satisfies_euler(&self) -> bool {
        &self.f0 - &self.f1 + &self.f2 - &self.f3 == BigInt::from(0)
    }
}

impl std::fmt::Display for FlagVector4 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "({},{},{},{};{})",
            self.f0, self.f1, self.f2, self.f3, self.f03
        )
    }
}

/// Sum over facets of their vertex counts.
pub fn flag_f03(l: &FaceLattice) -> Result<BigInt> {
    if l.dim != 4 {
        return Err(Error::WrongDimension {
            expected: 4,
            got: l.dim,
        });
    }
    Ok(l.facets()
        .map(|f| f.vertices.count_ones(..))
        .sum::<usize>()
        .into())
}

fn affine_dim(v: &VPolytope, set: &VertexSet) -> i64 {
    linalg::affine_dimension(&v.points(set))
}

/// Builds the face lattice of `v`. Facets are the source rows whose vertex
/// sets span a hyperplane; the faces of each face `F` are the
/// inclusion-maximal proper intersections of `F` with facets. Every face
/// dimension is computed as the affine rank of its vertices.
pub fn face_lattice(v: &VPolytope) -> Result<FaceLattice> {
    let d = v.dim;
    let n = v.len();
    let mut full = VertexSet::with_capacity(n);
    full.insert_range(..);

    let mut seen = HashSet::new();
    let candidates: Vec<VertexSet> = v
        .row_vertex_sets()
        .into_iter()
        .filter(|s| seen.insert(s.clone()))
        .collect();
    let facet_sets: Vec<VertexSet> = candidates
        .into_par_iter()
        .filter(|s| affine_dim(v, s) == d as i64 - 1)
        .collect();

    let mut faces = vec![Face {
        vertices: full,
        dim: d as i64,
    }];
    faces.extend(facet_sets.iter().map(|s| Face {
        vertices: s.clone(),
        dim: d as i64 - 1,
    }));

    let mut current = facet_sets.clone();
    let mut level = d as i64 - 1;
    while level >= 0 {
        let children: Vec<Vec<VertexSet>> = current
            .par_iter()
            .map(|f| maximal_proper_intersections(f, &facet_sets))
            .collect();
        let mut seen = HashSet::new();
        let next: Vec<VertexSet> = children
            .into_iter()
            .flatten()
            .filter(|s| seen.insert(s.clone()))
            .collect();
        let dims: Vec<i64> = next.par_iter().map(|s| affine_dim(v, s)).collect();
        if let Some(bad) = dims.iter().find(|&&k| k != level - 1) {
            return Err(Error::DimensionMismatch(format!(
                "face below a {level}-face has dimension {bad}"
            )));
        }
        faces.extend(next.iter().map(|s| Face {
            vertices: s.clone(),
            dim: level - 1,
        }));
        current = next;
        level -= 1;
    }

    let index = faces
        .iter()
        .enumerate()
        .map(|(i, f)| (f.vertices.clone(), i))
        .collect();
    Ok(FaceLattice {
        dim: d,
        faces,
        index,
    })
}

fn maximal_proper_intersections(face: &VertexSet, facets: &[VertexSet]) -> Vec<VertexSet> {
    let mut cands: Vec<VertexSet> = facets
        .iter()
        .map(|g| {
            let mut s = face.clone();
            s.intersect_with(g);
            s
        })
        .filter(|s| s != face)
        .collect();
    cands.sort_by_key(|s| std::cmp::Reverse(s.count_ones(..)));
    cands.dedup();
    let mut kept: Vec<VertexSet> = Vec::new();
    for c in cands {
        if !kept.iter().any(|k| c.is_subset(k)) {
            kept.push(c);
        }
    }
    if kept.is_empty() {
        // A face without proper intersections is a vertex; below it is the
        // empty face.
        kept.push(VertexSet::with_capacity(face.len()));
    }
    kept
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::QMatrix;
    use crate::polytope::{h_to_v, HPolytope};
    use crate::rational::int;

    fn cube(d: usize) -> VPolytope {
        let rows = (0..d)
            .flat_map(|j| {
                [1i64, -1].into_iter().map(move |s| {
                    (0..d)
                        .map(|k| if k == j { int(s) } else { int(0) })
                        .collect()
                })
            })
            .collect();
        let a = QMatrix::from_rows(d, rows).unwrap();
        h_to_v(&HPolytope::new(a, vec![int(1); 2 * d]).unwrap()).unwrap()
    }

    #[test]
    fn cube_f_vectors() {
        let l3 = face_lattice(&cube(3)).unwrap();
        assert_eq!(l3.f_vector(), vec![8, 12, 6]);
        assert!(l3.satisfies_euler());
        assert!(l3.is_intersection_closed());
        assert!(l3.is_graded());
        let l4 = face_lattice(&cube(4)).unwrap();
        assert_eq!(l4.f_vector(), vec![16, 32, 24, 8]);
        assert_eq!(flag_f03(&l4).unwrap(), BigInt::from(64));
        assert!(matches!(flag_f03(&l3), Err(Error::WrongDimension { .. })));
    }

    #[test]
    fn lattice_includes_empty_face_and_polytope() {
        let l = face_lattice(&cube(2)).unwrap();
        assert_eq!(l.faces_of_dim(-1).count(), 1);
        assert_eq!(l.faces_of_dim(2).count(), 1);
        assert_eq!(l.faces().len(), 1 + 4 + 4 + 1);
    }
}

//! Convex hulls through polarity.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{h_to_v, HPolytope, VPolytope};
use crate::error::{Error, Result};
use crate::linalg::{self, dot, QMatrix, QVector};
use crate::rational::{self, Rational};

/// Irredundant facet description of the convex hull of `points`.
///
/// The vertex barycenter `c` is moved to the origin; the vertices `y` of the
/// polar `{y : (p - c) y <= 1}` are the facets `y x <= 1 + y c`. Each facet
/// row is scaled so that its normal is a primitive integer vector.
pub fn v_to_h(points: &[QVector]) -> Result<HPolytope> {
    let Some(first) = points.first() else {
        return Err(Error::Degenerate);
    };
    let d = first.len();
    if points.iter().any(|p| p.len() != d) {
        return Err(Error::DimensionMismatch(
            "points of different lengths".into(),
        ));
    }
    let mut unique: Vec<&QVector> = points.iter().collect();
    unique.sort();
    unique.dedup();
    let refs: Vec<&[Rational]> = unique.iter().map(|p| p.as_slice()).collect();
    if d == 0 || linalg::affine_dimension(&refs) != d as i64 {
        return Err(Error::Degenerate);
    }
    let count = Rational::from_integer(BigInt::from(unique.len()));
    let center: QVector = (0..d)
        .map(|j| unique.iter().map(|p| &p[j]).sum::<Rational>() / &count)
        .collect();
    let polar_rows: Vec<QVector> = unique
        .iter()
        .map(|p| p.iter().zip(&center).map(|(x, c)| x - c).collect())
        .collect();
    let polar = HPolytope::new(
        QMatrix::from_rows(d, polar_rows)?,
        vec![Rational::one(); unique.len()],
    )?;
    let dual = h_to_v(&polar)?;

    let mut rows = Vec::with_capacity(dual.len());
    let mut rhs = Vec::with_capacity(dual.len());
    for y in &dual.vertices {
        let normal = rational::primitive_integer(y);
        // y = s * normal for a positive rational s.
        let pivot = normal
            .iter()
            .position(|c| !c.is_zero())
            .expect("nonzero facet normal");
        let scale = Rational::from_integer(normal[pivot].clone()) / &y[pivot];
        let normal: QVector = normal.into_iter().map(Rational::from_integer).collect();
        rhs.push((Rational::one() + dot(y, &center)) * &scale);
        rows.push(normal);
    }
    HPolytope::new(QMatrix::from_rows(d, rows)?, rhs)
}

/// Vertices of the hull of `points` given its facet description `h`: the
/// distinct points tight on a rank-`d` set of facets. Returns the
/// vertex description and, for every input point, its vertex index when
/// the point is a vertex.
pub fn vertices_on_facets(
    points: &[QVector],
    h: &HPolytope,
) -> Result<(VPolytope, Vec<Option<usize>>)> {
    let d = h.dim();
    let mut index: BTreeMap<&QVector, Option<usize>> = BTreeMap::new();
    for p in points {
        if p.len() != d {
            return Err(Error::DimensionMismatch(
                "point length differs from dimension".into(),
            ));
        }
        index.insert(p, None);
    }
    let mut vertices = Vec::new();
    let mut incidence = Vec::new();
    for (p, slot) in index.iter_mut() {
        let tight = h.tight_rows(p);
        let normals = h.matrix().select_rows(&tight);
        if normals.rank() == d {
            *slot = Some(vertices.len());
            vertices.push((*p).clone());
            incidence.push(tight);
        }
    }
    let map = points.iter().map(|p| index[p]).collect();
    Ok((
        VPolytope {
            dim: d,
            vertices,
            incidence,
            num_rows: h.num_rows(),
        },
        map,
    ))
}

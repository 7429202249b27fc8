//! Inequality and vertex descriptions of polytopes and the conversions
//! between them.

mod dd;
mod hull;
pub mod io;
mod lattice;
mod product;

pub use dd::h_to_v;
pub use hull::{v_to_h, vertices_on_facets};
pub use lattice::{face_lattice, flag_f03, Face, FaceLattice, FlagVector4, VertexSet};
pub use product::{product_isomorphic, product_labeling, PolygonFace, ProductLabeling};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{dot, QMatrix, QVector};
use crate::rational::Rational;

/// Position of an inequality row inside a block-structured system: block
/// `k` (1-based) and row `i` (0-based) within the block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct RowLabel {
    pub block: usize,
    pub index: usize,
}

/// `{x : A x <= b}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HPolytope {
    a: QMatrix,
    b: QVector,
    labels: Option<Vec<RowLabel>>,
}

impl HPolytope {
    pub fn new(a: QMatrix, b: QVector) -> Result<Self> {
        if a.rows() != b.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} rows but {} right-hand sides",
                a.rows(),
                b.len()
            )));
        }
        Ok(Self { a, b, labels: None })
    }

    pub fn with_labels(mut self, labels: Vec<RowLabel>) -> Result<Self> {
        if labels.len() != self.b.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} labels for {} rows",
                labels.len(),
                self.b.len()
            )));
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.a.cols()
    }

    pub fn num_rows(&self) -> usize {
        self.a.rows()
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.a
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.b
    }

    pub fn labels(&self) -> Option<&[RowLabel]> {
        self.labels.as_deref()
    }

    pub fn rhs_mut(&mut self) -> &mut [Rational] {
        &mut self.b
    }

    /// `b_i - a_i x`; non-negative exactly when row `i` is satisfied.
    pub fn slack(&self, i: usize, x: &[Rational]) -> Rational {
        &self.b[i] - dot(self.a.row(i), x)
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        (0..self.num_rows()).all(|i| self.slack(i, x) >= num_traits::Zero::zero())
    }

    pub fn tight_rows(&self, x: &[Rational]) -> Vec<usize> {
        (0..self.num_rows())
            .filter(|&i| num_traits::Zero::is_zero(&self.slack(i, x)))
            .collect()
    }
}

/// Vertices of an `HPolytope` with, per vertex, the rows tight at it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VPolytope {
    pub dim: usize,
    pub vertices: Vec<QVector>,
    pub incidence: Vec<Vec<usize>>,
    /// Number of rows of the source inequality system.
    pub num_rows: usize,
}

impl VPolytope {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Vertex set of each source row.
    pub fn row_vertex_sets(&self) -> Vec<VertexSet> {
        let mut sets = vec![VertexSet::with_capacity(self.len()); self.num_rows];
        for (v, rows) in self.incidence.iter().enumerate() {
            for &r in rows {
                sets[r].insert(v);
            }
        }
        sets
    }

    pub fn points(&self, set: &VertexSet) -> Vec<&[Rational]> {
        set.ones().map(|v| self.vertices[v].as_slice()).collect()
    }
}

//! Projection to the last coordinates and strict preservation of faces.
//!
//! A face `G` of `P` is strictly preserved by a projection `π` when `π(G)`
//! is a face of `π(P)`, `G -> π(G)` is a bijection and `π^{-1}(π(G)) = G`.
//! It suffices that the truncated normals (first `e` coordinates) of the
//! facets containing `G` positively span `R^e`. For the deformed products
//! that sufficient condition reduces to sign and rank statements about the
//! reduced matrix `A'_{n,r}`, certified with the sequences
//!
//! ```text
//! α_k = 2^k + 2^-k - 2,        β_k = 2^k + (5/4) 2^-k - 9/4,
//! ```
//!
//! which vanish only at `k = 0` and satisfy, for every integer `k`,
//! `α_{k-1} v0 + α_k u0 + β_k u1 + α_{k+1} w0 + β_{k+1} w1 = 0`.

use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cone::{positively_spans, weighted_sum, CertificateKind, PositiveCertificate};
use crate::construction::BlockSpec;
use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix, QVector};
use crate::polytope::{
    face_lattice, v_to_h, vertices_on_facets, FaceLattice, HPolytope, PolygonFace, ProductLabeling,
    VPolytope, VertexSet,
};
use crate::rational::{frac, int, pow2, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaBeta {
    pub k: i64,
    pub alpha: Rational,
    pub beta: Rational,
}

pub fn alpha_beta(k: i64) -> AlphaBeta {
    let up = pow2(k);
    let down = pow2(-k);
    AlphaBeta {
        k,
        alpha: &up + &down - int(2),
        beta: up + frac(5, 4) * down - frac(9, 4),
    }
}

/// `α_{k-1} v0 + α_k u0 + β_k u1 + α_{k+1} w0 + β_{k+1} w1` evaluated exactly.
pub fn zero_sum(k: i64) -> QVector {
    let vectors = [
        BlockSpec::v0(),
        BlockSpec::u0(),
        BlockSpec::u1(),
        BlockSpec::w0(),
        BlockSpec::w1(),
    ];
    let (a0, a1, a2) = (alpha_beta(k - 1), alpha_beta(k), alpha_beta(k + 1));
    let coeffs = [a0.alpha, a1.alpha, a1.beta, a2.alpha, a2.beta];
    weighted_sum(&vectors, &coeffs, 2)
}

pub fn zero_sum_check(k: i64) -> bool {
    zero_sum(k).iter().all(Zero::is_zero)
}

/// The 3x3 matrix of row-sum coefficients
/// `[[-α_{-1}, -α_k, -β_k], [-α_0, -α_{k+1}, -β_{k+1}], [-α_1, -α_{k+2}, -β_{k+2}]]`.
pub fn coefficient_matrix(k: i64) -> QMatrix {
    let rows = (0..3)
        .map(|j| {
            let low = alpha_beta(j - 1);
            let high = alpha_beta(k + j);
            vec![-low.alpha, -high.alpha, -high.beta]
        })
        .collect();
    QMatrix::from_rows(3, rows).expect("3 columns")
}

/// `A'_{n,r}`: the two distinct rows of every block of the unperturbed
/// system, restricted to the first `2r - 4` coordinates. Block `k`
/// contributes `v0/v1` at block column `k`, `u0/u1` at `k - 1` and
/// `w0/w1` at `k - 2`, where those columns exist. The rows do not depend
/// on `n`.
pub fn reduced_matrix(_n: usize, r: usize) -> Result<QMatrix> {
    if r < 2 {
        return Err(Error::InvalidParameters(format!(
            "r must be at least 2 (got {r})"
        )));
    }
    let cols = 2 * r - 4;
    let mut m = QMatrix::zeros(2 * r, cols);
    let pairs = [
        (0usize, BlockSpec::v0(), BlockSpec::v1()),
        (1, BlockSpec::u0(), BlockSpec::u1()),
        (2, BlockSpec::w0(), BlockSpec::w1()),
    ];
    for k in 1..=r {
        for (shift, even, odd) in &pairs {
            let Some(c) = k.checked_sub(*shift).filter(|&c| c >= 1 && c <= r - 2) else {
                continue;
            };
            for j in 0..2 {
                m[(2 * (k - 1), 2 * (c - 1) + j)] = even[j].clone();
                m[(2 * (k - 1) + 1, 2 * (c - 1) + j)] = odd[j].clone();
            }
        }
    }
    Ok(m)
}

/// Certificate for deleting the row pair of block `t` from `A'_{n,r}`.
#[derive(Clone, Debug)]
pub struct DeletionCertificate {
    pub t: usize,
    /// `(α_{k-t}, β_{k-t})` for every block `k`, zero at block `t`.
    pub coefficients: Vec<Rational>,
    /// Rank of the `2r - 2` remaining rows.
    pub rank: usize,
    /// Positive dependence of the remaining rows.
    pub certificate: PositiveCertificate,
}

/// For every block `t`, checks that the remaining `2r - 2` rows of
/// `A'_{n,r}` span `R^{2r-4}` and vanish under the strictly positive
/// weights `(α_{k-t}, β_{k-t})`. Empty for `r = 2`.
pub fn deletion_certificates(n: usize, r: usize) -> Result<Vec<DeletionCertificate>> {
    let m = reduced_matrix(n, r)?;
    if r == 2 {
        return Ok(Vec::new());
    }
    let dim = 2 * r - 4;
    let rows = m.to_rows();
    let mut out = Vec::with_capacity(r);
    for t in 1..=r {
        let mut coefficients = Vec::with_capacity(2 * r);
        for k in 1..=r {
            let ab = alpha_beta(k as i64 - t as i64);
            coefficients.push(ab.alpha);
            coefficients.push(ab.beta);
        }
        let keep: Vec<usize> = (0..2 * r).filter(|&i| i / 2 + 1 != t).collect();
        let kept_rows: Vec<QVector> = keep.iter().map(|&i| rows[i].clone()).collect();
        let kept_coeffs: Vec<Rational> = keep.iter().map(|&i| coefficients[i].clone()).collect();

        let deleted = [&coefficients[2 * (t - 1)], &coefficients[2 * t - 1]];
        if deleted.iter().any(|c| !c.is_zero()) {
            return Err(Error::Certificate {
                t,
                reason: "coefficients of the deleted block are not zero".into(),
            });
        }
        if let Some(i) = kept_coeffs.iter().position(|c| !c.is_positive()) {
            return Err(Error::Certificate {
                t,
                reason: format!("coefficient of remaining row {} is not positive", keep[i]),
            });
        }
        if !weighted_sum(&rows, &coefficients, dim)
            .iter()
            .all(Zero::is_zero)
        {
            return Err(Error::Certificate {
                t,
                reason: "(b) weighted row sum is not zero".into(),
            });
        }
        let rank = m.select_rows(&keep).rank();
        if rank != dim {
            return Err(Error::Certificate {
                t,
                reason: format!("(a) remaining rows have rank {rank}, need {dim}"),
            });
        }
        let certificate = PositiveCertificate {
            kind: CertificateKind::Spanning,
            coefficients: Some(kept_coeffs),
        };
        debug_assert!(certificate.verify(&kept_rows, dim));
        out.push(DeletionCertificate {
            t,
            coefficients,
            rank,
            certificate,
        });
    }
    Ok(out)
}

/// Images of all vertices under projection to the last `keep` coordinates.
#[derive(Clone, Debug)]
pub struct Projection {
    /// One image per vertex, in vertex order.
    pub images: Vec<QVector>,
    /// For every vertex, the first vertex with the same image.
    pub first_preimage: Vec<usize>,
}

impl Projection {
    pub fn all_distinct(&self) -> bool {
        self.first_preimage.iter().enumerate().all(|(i, &j)| i == j)
    }
}

pub fn project(v: &VPolytope, keep: usize) -> Result<Projection> {
    if keep > v.dim {
        return Err(Error::DimensionMismatch(format!(
            "cannot keep {keep} coordinates of a {}-dimensional polytope",
            v.dim
        )));
    }
    let drop = v.dim - keep;
    let images: Vec<QVector> = v.vertices.iter().map(|x| x[drop..].to_vec()).collect();
    let mut seen = std::collections::HashMap::new();
    let first_preimage = images
        .iter()
        .enumerate()
        .map(|(i, x)| *seen.entry(x).or_insert(i))
        .collect();
    Ok(Projection {
        images,
        first_preimage,
    })
}

/// A polytope `P`, its projection `Q = π(P)`, and both face lattices.
pub struct ProjectedPolytope<'a> {
    pub system: &'a HPolytope,
    pub vertices: &'a VPolytope,
    pub lattice: &'a FaceLattice,
    /// Number of dropped leading coordinates.
    pub dropped: usize,
    pub projection: Projection,
    pub image_system: HPolytope,
    pub image_vertices: VPolytope,
    pub image_lattice: FaceLattice,
    /// Vertex of `Q` that each vertex of `P` maps to, if its image is one.
    pub vertex_map: Vec<Option<usize>>,
    p_rows: Vec<VertexSet>,
    tight_p: Vec<VertexSet>,
    tight_q: Vec<VertexSet>,
}

impl<'a> ProjectedPolytope<'a> {
    pub fn new(
        system: &'a HPolytope,
        vertices: &'a VPolytope,
        lattice: &'a FaceLattice,
        keep: usize,
    ) -> Result<Self> {
        let projection = project(vertices, keep)?;
        let image_system = v_to_h(&projection.images)?;
        let (image_vertices, vertex_map) = vertices_on_facets(&projection.images, &image_system)?;
        let image_lattice = face_lattice(&image_vertices)?;
        let tight_p = (0..image_system.num_rows())
            .map(|j| {
                let mut s = VertexSet::with_capacity(vertices.len());
                for (v, x) in projection.images.iter().enumerate() {
                    if image_system.slack(j, x).is_zero() {
                        s.insert(v);
                    }
                }
                s
            })
            .collect();
        let tight_q = image_vertices.row_vertex_sets();
        Ok(Self {
            system,
            vertices,
            lattice,
            dropped: vertices.dim - keep,
            projection,
            image_system,
            image_vertices,
            image_lattice,
            vertex_map,
            p_rows: vertices.row_vertex_sets(),
            tight_p,
            tight_q,
        })
    }

    /// Every vertex of `P` maps to a distinct vertex of `Q` and every
    /// vertex of `Q` is hit.
    pub fn vertex_bijection(&self) -> bool {
        let mut hit = vec![false; self.image_vertices.len()];
        for m in &self.vertex_map {
            match m {
                Some(q) if !hit[*q] => hit[*q] = true,
                _ => return false,
            }
        }
        hit.into_iter().all(|h| h)
    }

    /// Vertex set in `Q` of the image of a vertex set of `P`, when all
    /// images are vertices of `Q`.
    pub fn image_set(&self, face: &VertexSet) -> Option<VertexSet> {
        let mut s = VertexSet::with_capacity(self.image_vertices.len());
        for v in face.ones() {
            s.insert(self.vertex_map[v]?);
        }
        Some(s)
    }

    /// Truncated normals of the facets of `P` containing `face`.
    pub fn truncated_normals(&self, face: &VertexSet) -> Vec<QVector> {
        self.p_rows
            .iter()
            .enumerate()
            .filter(|(_, s)| face.is_subset(s))
            .map(|(i, _)| self.system.matrix().row(i)[..self.dropped].to_vec())
            .collect()
    }

    pub fn check_strict_preservation(&self, face: &VertexSet) -> Result<PreservationReport> {
        self.check(0, None, face)
    }

    fn check(
        &self,
        face_id: usize,
        factor: Option<usize>,
        face: &VertexSet,
    ) -> Result<PreservationReport> {
        let dim = self.lattice.get(face).ok_or(Error::FaceNotInLattice)?.dim;
        let mut failures = Vec::new();

        let mut q_face = VertexSet::with_capacity(self.image_vertices.len());
        q_face.insert_range(..);
        let mut preimage = VertexSet::with_capacity(self.vertices.len());
        preimage.insert_range(..);
        for (tp, tq) in self.tight_p.iter().zip(&self.tight_q) {
            if face.is_subset(tp) {
                q_face.intersect_with(tq);
                preimage.intersect_with(tp);
            }
        }

        // (i) image is a face of Q of the same dimension
        let image = self.image_set(face);
        match &image {
            None => failures.push("(i) an image point is not a vertex of Q".to_string()),
            Some(img) if *img != q_face => {
                failures.push("(i) image is not the vertex set of a face of Q".to_string())
            }
            Some(img) => match self.image_lattice.get(img) {
                Some(f) if f.dim == dim => {}
                Some(f) => {
                    failures.push(format!("(i) image face has dimension {} not {dim}", f.dim))
                }
                None => failures.push("(i) image is not in the face lattice of Q".to_string()),
            },
        }

        // (ii) bijective: distinct images spanning the same dimension
        let idx: Vec<usize> = face.ones().collect();
        let distinct = idx
            .iter()
            .map(|&v| self.projection.first_preimage[v])
            .collect::<std::collections::HashSet<_>>()
            .len()
            == idx.len();
        let pts: Vec<&[Rational]> = idx
            .iter()
            .map(|&v| self.projection.images[v].as_slice())
            .collect();
        let image_dim = linalg::affine_dimension(&pts);
        if !distinct {
            failures.push("(ii) two vertices share an image".to_string());
        } else if image_dim != dim {
            failures.push(format!("(ii) image has dimension {image_dim} not {dim}"));
        }

        // (iii) the preimage of the image is the face itself
        if preimage != *face {
            failures.push(format!(
                "(iii) preimage has {} vertices, face has {}",
                preimage.count_ones(..),
                face.count_ones(..)
            ));
        }

        let certificate_ok = if self.dropped == 0 {
            true
        } else {
            positively_spans(&self.truncated_normals(face), self.dropped).is_some()
        };
        let direct_ok = failures.is_empty();
        if !certificate_ok {
            failures.push("certificate: truncated normals do not positively span".to_string());
        }
        Ok(PreservationReport {
            face_id,
            factor,
            dim,
            direct_ok,
            certificate_ok,
            details: failures.join("; "),
        })
    }

    /// Strict preservation of every vertex, edge and polygon 2-face.
    pub fn preservation_suite(&self, labeling: &ProductLabeling) -> Result<PreservationSummary> {
        let nv = self.vertices.len();
        let vertex_faces: Vec<VertexSet> = (0..nv)
            .map(|v| {
                let mut s = VertexSet::with_capacity(nv);
                s.insert(v);
                s
            })
            .collect();
        let edge_faces: Vec<VertexSet> = self
            .lattice
            .faces_of_dim(1)
            .map(|f| f.vertices.clone())
            .collect();
        let polygons = enumerate_polygon_faces(labeling);

        let run = |faces: Vec<(Option<usize>, VertexSet)>| -> Result<Vec<PreservationReport>> {
            faces
                .par_iter()
                .enumerate()
                .map(|(i, (factor, f))| self.check(i, *factor, f))
                .collect()
        };
        let vertices = run(vertex_faces.into_iter().map(|f| (None, f)).collect())?;
        let edges = run(edge_faces.into_iter().map(|f| (None, f)).collect())?;
        let polygon_reports = run(polygons
            .iter()
            .map(|p| (Some(p.factor), p.vertex_set(nv)))
            .collect())?;

        Ok(PreservationSummary {
            vertex_bijection: self.vertex_bijection(),
            vertices: FaceClassSummary::of(&vertices),
            edges: FaceClassSummary::of(&edges),
            polygons: FaceClassSummary::of(&polygon_reports),
            polygon_reports,
            failures: vertices
                .into_iter()
                .chain(edges)
                .filter(|r| !r.direct_ok)
                .collect(),
        })
    }
}

pub fn enumerate_polygon_faces(labeling: &ProductLabeling) -> Vec<PolygonFace> {
    labeling.polygon_faces()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PreservationReport {
    pub face_id: usize,
    pub factor: Option<usize>,
    #[serde(skip)]
    pub dim: i64,
    pub direct_ok: bool,
    pub certificate_ok: bool,
    pub details: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FaceClassSummary {
    pub checked: usize,
    pub preserved: usize,
    pub certified: usize,
    /// `certificate_ok => direct_ok` on every face of the class.
    pub implication_holds: bool,
}

impl FaceClassSummary {
    fn of(reports: &[PreservationReport]) -> Self {
        Self {
            checked: reports.len(),
            preserved: reports.iter().filter(|r| r.direct_ok).count(),
            certified: reports.iter().filter(|r| r.certificate_ok).count(),
            implication_holds: reports.iter().all(|r| !r.certificate_ok || r.direct_ok),
        }
    }

    pub fn all_preserved(&self) -> bool {
        self.preserved == self.checked
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct PreservationSummary {
    pub vertex_bijection: bool,
    pub vertices: FaceClassSummary,
    pub edges: FaceClassSummary,
    pub polygons: FaceClassSummary,
    pub polygon_reports: Vec<PreservationReport>,
    /// Vertex and edge reports that failed the direct check.
    pub failures: Vec<PreservationReport>,
}

impl PreservationSummary {
    pub fn all_ok(&self) -> bool {
        self.vertex_bijection
            && self.vertices.all_preserved()
            && self.edges.all_preserved()
            && self.polygons.all_preserved()
            && self.polygons.certified == self.polygons.checked
            && self.vertices.implication_holds
            && self.edges.implication_holds
            && self.polygons.implication_holds
    }
}

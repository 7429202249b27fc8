//! Positive dependence and positive spanning certificates.
//!
//! A vector family is positively dependent when some combination with
//! strictly positive coefficients vanishes. It positively spans `R^d` when
//! it additionally spans `R^d`; then every vector of `R^d` is a
//! non-negative combination of the family.
//!
//! Dependence is decided by an exact phase-1 simplex on
//! `sum λ_i v_i = 0, λ_i >= 1`. The lower bound of one keeps the feasible
//! region closed; any feasible point is a strictly positive certificate.

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::linalg::{QMatrix, QVector};
use crate::rational::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CertificateKind {
    Spanning,
    Dependence,
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PositiveCertificate {
    pub kind: CertificateKind,
    pub coefficients: Option<Vec<Rational>>,
}

impl PositiveCertificate {
    pub fn none() -> Self {
        Self {
            kind: CertificateKind::None,
            coefficients: None,
        }
    }

    pub fn is_some(&self) -> bool {
        self.kind != CertificateKind::None
    }

    /// Re-checks the certificate against `vectors`: strictly positive
    /// coefficients with an exactly vanishing weighted sum.
    pub fn verify(&self, vectors: &[QVector], dim: usize) -> bool {
        let Some(coeffs) = &self.coefficients else {
            return false;
        };
        coeffs.len() == vectors.len()
            && coeffs.iter().all(|c| c.is_positive())
            && weighted_sum(vectors, coeffs, dim).iter().all(Zero::is_zero)
    }
}

pub fn weighted_sum(vectors: &[QVector], coeffs: &[Rational], dim: usize) -> QVector {
    let mut sum = vec![Rational::zero(); dim];
    for (v, c) in vectors.iter().zip(coeffs) {
        for (s, x) in sum.iter_mut().zip(v) {
            *s += c * x;
        }
    }
    sum
}

/// Strictly positive coefficients with a vanishing weighted sum, if any.
pub fn positive_dependence(vectors: &[QVector], dim: usize) -> PositiveCertificate {
    if vectors.is_empty() {
        return PositiveCertificate::none();
    }
    assert!(
        vectors.iter().all(|v| v.len() == dim),
        "all vectors must have length {dim}"
    );
    // λ = 1 + μ with μ >= 0:  sum μ_i v_i = -sum v_i.
    let ones = vec![Rational::one(); vectors.len()];
    let rhs: Vec<Rational> = weighted_sum(vectors, &ones, dim)
        .into_iter()
        .map(|x| -x)
        .collect();
    let columns: Vec<&[Rational]> = vectors.iter().map(|v| v.as_slice()).collect();
    match phase_one(&columns, &rhs) {
        Some(mu) => PositiveCertificate {
            kind: CertificateKind::Dependence,
            coefficients: Some(mu.into_iter().map(|m| m + Rational::one()).collect()),
        },
        None => PositiveCertificate::none(),
    }
}

/// Positive spanning of `R^dim`: full rank plus positive dependence.
pub fn positively_spans(vectors: &[QVector], dim: usize) -> PositiveCertificate {
    if vectors.is_empty() {
        return PositiveCertificate::none();
    }
    let m = QMatrix::from_rows(dim, vectors.to_vec()).expect("vectors of length dim");
    if m.rank() != dim {
        return PositiveCertificate::none();
    }
    let mut cert = positive_dependence(vectors, dim);
    if cert.is_some() {
        cert.kind = CertificateKind::Spanning;
    }
    cert
}

/// Finds `x >= 0` with `sum_j x_j columns[j] = rhs` by minimizing the sum of
/// artificial variables. Bland's rule: lowest-index entering column, ties in
/// the ratio test broken by the lowest basic variable index.
fn phase_one(columns: &[&[Rational]], rhs: &[Rational]) -> Option<Vec<Rational>> {
    let m = rhs.len();
    let n = columns.len();
    let width = n + m + 1;
    // Tableau rows: constraint rows with rhs made non-negative.
    let mut t: Vec<Vec<Rational>> = (0..m)
        .map(|i| {
            let flip = rhs[i].is_negative();
            let mut row = Vec::with_capacity(width);
            for col in columns {
                row.push(if flip { -&col[i] } else { col[i].clone() });
            }
            for k in 0..m {
                row.push(if k == i {
                    Rational::one()
                } else {
                    Rational::zero()
                });
            }
            row.push(rhs[i].abs());
            row
        })
        .collect();
    let mut basis: Vec<usize> = (n..n + m).collect();
    // Reduced costs of the phase-1 objective (minimize sum of artificials).
    let mut cost = vec![Rational::zero(); width];
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    while let Some(enter) = (0..n + m).find(|&j| cost[j].is_negative()) {
        let mut leave: Option<(usize, Rational)> = None;
        for (i, row) in t.iter().enumerate() {
            if row[enter].is_positive() {
                let ratio = &row[width - 1] / &row[enter];
                let better = match &leave {
                    None => true,
                    Some((li, lr)) => ratio < *lr || (ratio == *lr && basis[i] < basis[*li]),
                };
                if better {
                    leave = Some((i, ratio));
                }
            }
        }
        // The phase-1 objective is bounded below by zero.
        let (pr, _) = leave.expect("phase-1 objective is bounded");
        let inv = t[pr][enter].recip();
        for v in t[pr].iter_mut() {
            *v *= &inv;
        }
        let pivot_row = t[pr].clone();
        for (i, row) in t.iter_mut().enumerate() {
            if i != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (x, p) in row.iter_mut().zip(&pivot_row) {
                    *x -= &f * p;
                }
            }
        }
        let f = cost[enter].clone();
        for (x, p) in cost.iter_mut().zip(&pivot_row) {
            *x -= &f * p;
        }
        basis[pr] = enter;
    }
    // Remaining objective value is -cost[rhs].
    if !cost[width - 1].is_zero() {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    fn v(p: &[(i64, i64)]) -> QVector {
        p.iter().map(|&(a, b)| frac(a, b)).collect()
    }

    fn generators() -> Vec<QVector> {
        vec![
            v(&[(1, 1), (0, 1)]),
            v(&[(0, 1), (1, 1)]),
            v(&[(-3, 1), (-2, 3)]),
            v(&[(-31, 4), (1, 2)]),
            v(&[(9, 1), (-2, 3)]),
        ]
    }

    #[test]
    fn symmetric_pairs_are_dependent_with_unit_weights() {
        let vs = vec![
            v(&[(1, 1), (0, 1)]),
            v(&[(-1, 1), (0, 1)]),
            v(&[(0, 1), (1, 1)]),
            v(&[(0, 1), (-1, 1)]),
        ];
        let cert = positive_dependence(&vs, 2);
        assert_eq!(cert.kind, CertificateKind::Dependence);
        assert_eq!(cert.coefficients, Some(vec![int(1); 4]));
        let span = positively_spans(&vs, 2);
        assert_eq!(span.kind, CertificateKind::Spanning);
        assert!(span.verify(&vs, 2));
    }

    #[test]
    fn half_plane_families_are_not_dependent() {
        let vs = vec![v(&[(1, 1), (0, 1)]), v(&[(0, 1), (1, 1)])];
        assert_eq!(positive_dependence(&vs, 2).kind, CertificateKind::None);
        assert_eq!(positively_spans(&vs, 2).kind, CertificateKind::None);
    }

    #[test]
    fn rank_deficient_families_do_not_span() {
        let vs = vec![v(&[(1, 1), (0, 1)]), v(&[(-1, 1), (0, 1)])];
        assert_eq!(
            positive_dependence(&vs, 2).kind,
            CertificateKind::Dependence
        );
        assert_eq!(positively_spans(&vs, 2).kind, CertificateKind::None);
    }

    #[test]
    fn empty_family_has_no_certificate() {
        assert_eq!(positive_dependence(&[], 2).kind, CertificateKind::None);
        assert_eq!(positively_spans(&[], 0).kind, CertificateKind::None);
    }

    #[test]
    fn generator_family_is_positively_spanning() {
        let vs = generators();
        let cert = positively_spans(&vs, 2);
        assert_eq!(cert.kind, CertificateKind::Spanning);
        assert!(cert.verify(&vs, 2));
        // The closed-form coefficients (α_1, α_2, β_2, α_3, β_3) are another
        // valid certificate for the same family.
        let closed = PositiveCertificate {
            kind: CertificateKind::Dependence,
            coefficients: Some(vec![
                frac(1, 2),
                frac(9, 4),
                frac(33, 16),
                frac(49, 8),
                frac(189, 32),
            ]),
        };
        assert!(closed.verify(&vs, 2));
    }

    #[test]
    fn zero_dimensional_space_is_spanned_by_any_nonempty_family() {
        let vs = vec![vec![], vec![]];
        assert_eq!(positively_spans(&vs, 0).kind, CertificateKind::Spanning);
    }

    #[test]
    fn degenerate_pivots_terminate() {
        // Many parallel and zero vectors exercise ties in the ratio test.
        let vs = vec![
            v(&[(0, 1), (0, 1), (0, 1)]),
            v(&[(1, 1), (1, 1), (0, 1)]),
            v(&[(2, 1), (2, 1), (0, 1)]),
            v(&[(-1, 1), (-1, 1), (0, 1)]),
            v(&[(0, 1), (0, 1), (1, 1)]),
            v(&[(0, 1), (0, 1), (-3, 1)]),
        ];
        let cert = positive_dependence(&vs, 3);
        assert!(cert.verify(&vs, 3));
        assert_eq!(positively_spans(&vs, 3).kind, CertificateKind::None);
    }
}

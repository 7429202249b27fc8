//! Inequality systems for products and deformed products of polygons.
//!
//! The deformed product `P_n^{2r}` lives in `R^{2r}`, split into `r`
//! coordinate pairs. Its `rn x 2r` left-hand side consists of `n x 2`
//! blocks: block row `k` carries `V^ε` at block column `k`, `U` at
//! `k - 1` and `W` at `k - 2`; everything else is zero. `U` and `W`
//! alternate their two generator rows. The right-hand side of block `k`
//! is `M^{k-1} b_1`, where `b_1` is `1` on even rows and `ε` on odd rows.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cone::positively_spans;
use crate::error::{Error, Result};
use crate::linalg::{self, QMatrix, QVector};
use crate::polytope::{h_to_v, product_labeling, HPolytope, ProductLabeling, RowLabel, VPolytope};
use crate::rational::{self, frac, int, Rational};

/// The fixed generator vectors of the `V`, `U` and `W` blocks.
pub struct BlockSpec;

impl BlockSpec {
    pub fn v0() -> QVector {
        vec![int(1), int(0)]
    }
    pub fn v1() -> QVector {
        vec![int(0), int(0)]
    }
    pub fn u0() -> QVector {
        vec![int(0), int(1)]
    }
    pub fn u1() -> QVector {
        vec![int(-3), frac(-2, 3)]
    }
    pub fn w0() -> QVector {
        vec![frac(-31, 4), frac(1, 2)]
    }
    pub fn w1() -> QVector {
        vec![int(9), frac(-2, 3)]
    }
}

/// One attempt of the parameter search.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Attempt {
    pub eps: String,
    pub big_m: String,
    /// `None` for the accepted attempt.
    pub failure: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstructionParams {
    pub n: usize,
    pub r: usize,
    pub eps: Rational,
    pub big_m: Rational,
    pub adaptation_log: Vec<Attempt>,
}

impl ConstructionParams {
    pub fn new(n: usize, r: usize, eps: Rational, big_m: Rational) -> Result<Self> {
        check_n(n)?;
        Self::forced(n, r, eps, big_m)
    }

    /// Same as [`ConstructionParams::new`] but admits odd `n >= 3`.
    pub fn forced(n: usize, r: usize, eps: Rational, big_m: Rational) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParameters(format!(
                "n must be at least 4 (got {n})"
            )));
        }
        if r < 2 {
            return Err(Error::InvalidParameters(format!(
                "r must be at least 2 (got {r})"
            )));
        }
        if !eps.is_positive() {
            return Err(Error::InvalidParameters("eps must be positive".into()));
        }
        if big_m <= Rational::one() {
            return Err(Error::InvalidParameters("M must exceed 1".into()));
        }
        Ok(Self {
            n,
            r,
            eps,
            big_m,
            adaptation_log: Vec::new(),
        })
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "n": self.n,
            "r": self.r,
            "eps": rational::format(&self.eps),
            "big_m": rational::format(&self.big_m),
            "adaptation_log": self.adaptation_log,
        })
    }
}

fn check_n(n: usize) -> Result<()> {
    if n % 2 == 1 {
        return Err(Error::OddPolygon(n));
    }
    if n < 4 {
        return Err(Error::InvalidParameters(format!(
            "n must be at least 4 (got {n})"
        )));
    }
    Ok(())
}

fn eps_row(n: usize, i: usize, eps: &Rational) -> QVector {
    if i == n - 1 {
        return vec![-eps, int(0)];
    }
    let s = int(n as i64 - 2 - 2 * i as i64);
    let row = vec![Rational::one() - eps * &s * &s, eps * &s];
    if i.is_multiple_of(2) {
        row
    } else {
        row.into_iter().map(|x| x * eps).collect()
    }
}

/// The perturbed polygon block `V^ε` (`n x 2`).
pub fn v_eps_block(n: usize, eps: &Rational) -> Result<QMatrix> {
    check_n(n)?;
    v_eps_block_any(n, eps)
}

fn v_eps_block_any(n: usize, eps: &Rational) -> Result<QMatrix> {
    if !eps.is_positive() {
        return Err(Error::InvalidParameters("eps must be positive".into()));
    }
    QMatrix::from_rows(2, (0..n).map(|i| eps_row(n, i, eps)).collect())
}

fn alternating_block(n: usize, even: &QVector, odd: &QVector) -> QMatrix {
    let rows = (0..n)
        .map(|i| {
            if i % 2 == 0 {
                even.clone()
            } else {
                odd.clone()
            }
        })
        .collect();
    QMatrix::from_rows(2, rows).expect("2 columns")
}

pub fn u_block(n: usize) -> QMatrix {
    alternating_block(n, &BlockSpec::u0(), &BlockSpec::u1())
}

pub fn w_block(n: usize) -> QMatrix {
    alternating_block(n, &BlockSpec::w0(), &BlockSpec::w1())
}

/// `b_1`: `1` at even rows, `ε` at odd rows.
pub fn base_rhs(n: usize, eps: &Rational) -> QVector {
    (0..n)
        .map(|i| {
            if i % 2 == 0 {
                Rational::one()
            } else {
                eps.clone()
            }
        })
        .collect()
}

/// The labeled system `A^ε_{n,r} x <= b`.
pub fn build_deformed_product(p: &ConstructionParams) -> Result<HPolytope> {
    let (n, r) = (p.n, p.r);
    let v = v_eps_block_any(n, &p.eps)?;
    let u = u_block(n);
    let w = w_block(n);
    let d = 2 * r;
    let mut a = QMatrix::zeros(r * n, d);
    let mut b = Vec::with_capacity(r * n);
    let mut labels = Vec::with_capacity(r * n);
    let b1 = base_rhs(n, &p.eps);
    let mut scale = Rational::one();
    for k in 1..=r {
        let placements = [
            (Some(k), &v),
            (k.checked_sub(1), &u),
            (k.checked_sub(2), &w),
        ];
        for i in 0..n {
            let row = (k - 1) * n + i;
            for (col, block) in placements {
                if let Some(c) = col.filter(|&c| c >= 1) {
                    a[(row, 2 * (c - 1))] = block[(i, 0)].clone();
                    a[(row, 2 * (c - 1) + 1)] = block[(i, 1)].clone();
                }
            }
            b.push(&b1[i] * &scale);
            labels.push(RowLabel { block: k, index: i });
        }
        scale *= &p.big_m;
    }
    HPolytope::new(a, b)?.with_labels(labels)
}

/// Block-diagonal system with `r` copies of the polygon `polygon x <= rhs`.
pub fn build_plain_product(
    n: usize,
    r: usize,
    polygon: &QMatrix,
    rhs: &[Rational],
) -> Result<HPolytope> {
    if polygon.rows() != n || polygon.cols() != 2 || rhs.len() != n {
        return Err(Error::InvalidPolygon(format!(
            "expected an {n}x2 block with {n} right-hand sides, got {}x{} and {}",
            polygon.rows(),
            polygon.cols(),
            rhs.len()
        )));
    }
    if r < 1 {
        return Err(Error::InvalidParameters("r must be positive".into()));
    }
    if !validate_polygon(polygon, rhs) {
        return Err(Error::InvalidPolygon(
            "not a convex n-gon description".into(),
        ));
    }
    let mut a = QMatrix::zeros(r * n, 2 * r);
    let mut b = Vec::with_capacity(r * n);
    let mut labels = Vec::with_capacity(r * n);
    for k in 0..r {
        for i in 0..n {
            a[(k * n + i, 2 * k)] = polygon[(i, 0)].clone();
            a[(k * n + i, 2 * k + 1)] = polygon[(i, 1)].clone();
            b.push(rhs[i].clone());
            labels.push(RowLabel {
                block: k + 1,
                index: i,
            });
        }
    }
    HPolytope::new(a, b)?.with_labels(labels)
}

fn orientation(p: &[Rational], q: &[Rational], s: &[Rational]) -> Rational {
    (&q[0] - &p[0]) * (&s[1] - &p[1]) - (&q[1] - &p[1]) * (&s[0] - &p[0])
}

/// Whether `polygon x <= rhs` describes a convex n-gon with every row a
/// facet, in cyclic order: rows non-zero, distinct and positively
/// spanning, all `rhs` positive, and the rescaled rows `v_i / b_i` in
/// strictly convex position in the given cyclic order.
///
/// Strict convex position is checked edge by edge: for each consecutive
/// pair, all other rescaled points lie strictly on one common side, and
/// that side is the same for every edge.
pub fn validate_polygon(polygon: &QMatrix, rhs: &[Rational]) -> bool {
    let n = polygon.rows();
    if polygon.cols() != 2 || rhs.len() != n || n < 3 {
        return false;
    }
    let rows = polygon.to_rows();
    if rows.iter().any(|r| r.iter().all(Zero::is_zero)) {
        return false;
    }
    for i in 0..n {
        for j in i + 1..n {
            if rows[i] == rows[j] {
                return false;
            }
        }
    }
    if rhs.iter().any(|b| !b.is_positive()) {
        return false;
    }
    if !positively_spans(&rows, 2).is_some() {
        return false;
    }
    let pts: Vec<QVector> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| r.iter().map(|x| x / b).collect())
        .collect();
    let mut side = 0;
    for i in 0..n {
        let (p, q) = (&pts[i], &pts[(i + 1) % n]);
        for (j, s) in pts.iter().enumerate() {
            if j == i || j == (i + 1) % n {
                continue;
            }
            let o = linalg::sign(&orientation(p, q, s));
            if o == 0 || (side != 0 && o != side) {
                return false;
            }
            side = o;
        }
    }
    true
}

/// Starting values of the parameter search.
pub fn initial_parameters(n: usize) -> (Rational, Rational) {
    let m = (n - 2) as i64;
    (frac(1, 4 * m * m + 4), int((n * n) as i64))
}

const MAX_ROUNDS: usize = 12;

/// A constructed deformed product together with its vertex description and
/// product labeling.
#[derive(Clone, Debug)]
pub struct Construction {
    pub params: ConstructionParams,
    pub system: HPolytope,
    pub vertices: VPolytope,
    pub labeling: ProductLabeling,
}

/// Checks explicit parameters: polygon validity, vertex enumeration,
/// combinatorial equivalence to `(C_n)^r` and the spanning certificate of
/// every polygon face. `Err` carries the failure reason.
pub fn check_parameters(params: &ConstructionParams) -> Result<Construction, String> {
    let (n, r) = (params.n, params.r);
    let block = v_eps_block_any(n, &params.eps).map_err(|e| e.to_string())?;
    if !validate_polygon(&block, &base_rhs(n, &params.eps)) {
        return Err("polygon: rescaled rows not in strictly convex position".into());
    }
    let system = build_deformed_product(params).map_err(|e| e.to_string())?;
    let vertices = h_to_v(&system).map_err(|e| format!("vertex enumeration: {e}"))?;
    match product_labeling(&system, &vertices, n, r) {
        Ok(Some(labeling)) => {
            if let Some(face) = uncertified_polygon(&system, &vertices, &labeling) {
                return Err(format!(
                    "certificate: truncated normals at polygon face {face} do not positively span"
                ));
            }
            Ok(Construction {
                params: params.clone(),
                system,
                vertices,
                labeling,
            })
        }
        Ok(None) => Err(format!(
            "product: {} vertices, not combinatorially (C_{n})^{r}",
            vertices.len()
        )),
        Err(e) => Err(e.to_string()),
    }
}

/// First polygon 2-face whose containing facet normals, cut to the first
/// `2r - 4` coordinates, fail to positively span `R^{2r-4}`.
pub fn uncertified_polygon(
    system: &HPolytope,
    vertices: &VPolytope,
    labeling: &ProductLabeling,
) -> Option<usize> {
    let dropped = system.dim().saturating_sub(4);
    if dropped == 0 {
        return None;
    }
    labeling.polygon_faces().into_iter().find_map(|face| {
        let mut rows: Vec<usize> = vertices.incidence[face.vertices[0]].clone();
        for &v in &face.vertices[1..] {
            rows.retain(|i| vertices.incidence[v].contains(i));
        }
        let normals: Vec<QVector> = rows
            .iter()
            .map(|&i| system.matrix().row(i)[..dropped].to_vec())
            .collect();
        (!positively_spans(&normals, dropped).is_some()).then_some(face.id)
    })
}

/// Where the parameter search starts and which values it may change.
#[derive(Clone, Debug, Default)]
pub struct SearchStart {
    /// Fixed `ε`; adapted from the default start when `None`.
    pub eps: Option<Rational>,
    /// Fixed `M`; adapted from the default start when `None`.
    pub big_m: Option<Rational>,
    /// Admit odd `n`.
    pub force: bool,
}

/// Last attempted parameters (with the full adaptation log) and either the
/// accepted construction or the last failure reason.
#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub params: ConstructionParams,
    pub result: Result<Construction, String>,
}

/// Searches for `ε` and `M`: starting from `ε = 1/(4(n-2)^2+4)` and
/// `M = n^2`, `ε` is halved while the polygon block is invalid or a polygon
/// face lacks its spanning certificate, and `M` is squared while the product
/// structure fails. Every attempt is logged. A fixed value that would need
/// to change ends the search.
pub fn search_parameters(n: usize, r: usize, start: &SearchStart) -> Result<SearchOutcome> {
    if !start.force {
        check_n(n)?;
    }
    let (eps0, m0) = initial_parameters(n.max(3));
    let mut eps = start.eps.clone().unwrap_or(eps0);
    let mut big_m = start.big_m.clone().unwrap_or(m0);
    let mut log = Vec::new();
    for _ in 0..MAX_ROUNDS {
        let mut params = ConstructionParams::forced(n, r, eps.clone(), big_m.clone())?;
        let outcome = check_parameters(&params);
        log.push(Attempt {
            eps: rational::format(&eps),
            big_m: rational::format(&big_m),
            failure: outcome.as_ref().err().cloned(),
        });
        params.adaptation_log = log.clone();
        let reason = match outcome {
            Ok(mut c) => {
                c.params = params.clone();
                return Ok(SearchOutcome {
                    params,
                    result: Ok(c),
                });
            }
            Err(reason) => reason,
        };
        let shrink_eps = reason.starts_with("polygon") || reason.starts_with("certificate");
        let stuck = if shrink_eps {
            start.eps.is_some()
        } else {
            start.big_m.is_some()
        };
        if stuck {
            return Ok(SearchOutcome {
                params,
                result: Err(reason),
            });
        }
        if shrink_eps {
            eps /= int(2);
        } else {
            big_m = &big_m * &big_m;
        }
    }
    let params = ConstructionParams {
        adaptation_log: log,
        ..ConstructionParams::forced(n, r, eps, big_m)?
    };
    Ok(SearchOutcome {
        params,
        result: Err(format!("no parameters found after {MAX_ROUNDS} rounds")),
    })
}

/// [`search_parameters`] from the default start with both values adapted.
pub fn choose_parameters(n: usize, r: usize) -> Result<Construction> {
    search_parameters(n, r, &SearchStart::default())?
        .result
        .map_err(|_| Error::NoParameters {
            n,
            r,
            rounds: MAX_ROUNDS,
        })
}

/// Coefficients of `(1 + n t + n t^2)^r`, i.e. `f_{2r-i}` at index `i`.
pub fn product_f_polynomial(n: usize, r: usize) -> Vec<BigInt> {
    let factor = [BigInt::one(), BigInt::from(n), BigInt::from(n)];
    let mut poly = vec![BigInt::one()];
    for _ in 0..r {
        let mut next = vec![BigInt::zero(); poly.len() + 2];
        for (i, c) in poly.iter().enumerate() {
            for (j, f) in factor.iter().enumerate() {
                next[i + j] += c * f;
            }
        }
        poly = next;
    }
    poly
}

//! End-to-end verification and analysis of a labeled deformed-product
//! system: vertex enumeration, product structure, certificates, projection
//! to four-space, preservation checks, flag vector and metrics.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::{self, CountingReport, MetricsReport, Value};
use crate::polytope::{
    face_lattice, h_to_v, product_labeling, FaceLattice, FlagVector4, HPolytope, ProductLabeling,
    VPolytope, VertexSet,
};
use crate::projection::{
    alpha_beta, deletion_certificates, zero_sum_check, PreservationSummary, ProjectedPolytope,
};
use crate::rational;

pub const SCHEMA: u32 = 1;
pub const ZERO_SUM_RANGE: (i64, i64) = (-20, 20);

/// `(n, r)` of a labeled system: `r` blocks of `n` rows each in `R^{2r}`.
pub fn infer_shape(h: &HPolytope) -> Result<(usize, usize)> {
    let labels = h.labels().ok_or(Error::MissingLabels)?;
    let r = labels.iter().map(|l| l.block).max().unwrap_or(0);
    if r == 0 || labels.iter().any(|l| l.block == 0) || !h.num_rows().is_multiple_of(r) {
        return Err(Error::InvalidParameters(
            "labels do not form equal blocks".into(),
        ));
    }
    let n = h.num_rows() / r;
    if h.dim() != 2 * r {
        return Err(Error::InvalidParameters(format!(
            "{r} blocks need dimension {}, system has {}",
            2 * r,
            h.dim()
        )));
    }
    let mut seen = vec![false; n * r];
    for l in labels {
        if l.index >= n || std::mem::replace(&mut seen[(l.block - 1) * n + l.index], true) {
            return Err(Error::InvalidParameters(
                "labels do not form equal blocks".into(),
            ));
        }
    }
    Ok((n, r))
}

/// A named failing stage of the pipeline.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckFailure {
    pub check: String,
    pub detail: String,
}

impl CheckFailure {
    fn new(check: &str, detail: impl Into<String>) -> Self {
        Self {
            check: check.into(),
            detail: detail.into(),
        }
    }
}

impl std::fmt::Display for CheckFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.check, self.detail)
    }
}

/// The polytope `P`, its product labeling and face lattice.
pub struct Pipeline {
    pub n: usize,
    pub r: usize,
    pub system: HPolytope,
    pub vertices: VPolytope,
    pub labeling: ProductLabeling,
    pub lattice: FaceLattice,
}

impl Pipeline {
    pub fn new(system: HPolytope) -> std::result::Result<Self, CheckFailure> {
        let (n, r) = infer_shape(&system).map_err(|e| CheckFailure::new("input", e.to_string()))?;
        let vertices =
            h_to_v(&system).map_err(|e| CheckFailure::new("vertex_enumeration", e.to_string()))?;
        Self::with_vertices(system, vertices, n, r)
    }

    pub fn with_vertices(
        system: HPolytope,
        vertices: VPolytope,
        n: usize,
        r: usize,
    ) -> std::result::Result<Self, CheckFailure> {
        let labeling = match product_labeling(&system, &vertices, n, r) {
            Ok(Some(l)) => l,
            Ok(None) => {
                return Err(CheckFailure::new(
                    "product_isomorphic",
                    format!(
                        "{} vertices; not combinatorially (C_{n})^{r}",
                        vertices.len()
                    ),
                ))
            }
            Err(e) => return Err(CheckFailure::new("product_isomorphic", e.to_string())),
        };
        let lattice = face_lattice(&vertices)
            .map_err(|e| CheckFailure::new("face_lattice", e.to_string()))?;
        Ok(Self {
            n,
            r,
            system,
            vertices,
            labeling,
            lattice,
        })
    }

    pub fn project(&self) -> Result<ProjectedPolytope<'_>> {
        ProjectedPolytope::new(&self.system, &self.vertices, &self.lattice, 4)
    }

    /// f-vector of `P` against the expansion of `(1 + n t + n t^2)^r`.
    pub fn f_vector_matches_product(&self) -> bool {
        let f = self.lattice.f_vector();
        let poly = crate::construction::product_f_polynomial(self.n, self.r);
        let d = 2 * self.r;
        (0..d).all(|i| poly[d - i] == f[i].into())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DeletionSummary {
    pub t: usize,
    pub rank: usize,
    pub coefficients: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub schema: u32,
    pub n: usize,
    pub r: usize,
    pub ok: bool,
    pub first_failure: Option<CheckFailure>,
    pub product_isomorphic: bool,
    pub zero_sum_range: [i64; 2],
    pub zero_sum_ok: bool,
    pub alpha_beta_ok: bool,
    pub deletion_certificates: Vec<DeletionSummary>,
    pub preservation: Option<PreservationSummary>,
    pub notes: Vec<String>,
}

impl VerifyReport {
    fn failed(n: usize, r: usize, failure: CheckFailure) -> Self {
        Self {
            schema: SCHEMA,
            n,
            r,
            ok: false,
            product_isomorphic: failure.check != "product_isomorphic"
                && failure.check != "vertex_enumeration"
                && failure.check != "input",
            first_failure: Some(failure),
            zero_sum_range: [ZERO_SUM_RANGE.0, ZERO_SUM_RANGE.1],
            zero_sum_ok: false,
            alpha_beta_ok: false,
            deletion_certificates: Vec::new(),
            preservation: None,
            notes: Vec::new(),
        }
    }
}

/// Zero-sum identity and sign pattern of `α_k`, `β_k` on the checked range.
pub fn certificate_range_checks() -> (bool, bool) {
    let ks = ZERO_SUM_RANGE.0..=ZERO_SUM_RANGE.1;
    let zero_sum = ks.clone().all(zero_sum_check);
    let signs = ks.into_iter().all(|k| {
        let ab = alpha_beta(k);
        let zero = num_traits::Zero::zero();
        if k == 0 {
            ab.alpha == zero && ab.beta == zero
        } else {
            ab.alpha > zero && ab.beta > zero
        }
    });
    (zero_sum, signs)
}

/// Runs every verification on a labeled system. Failures are reported,
/// not returned as errors.
pub fn verify_system(system: HPolytope) -> VerifyReport {
    let (n, r) = match infer_shape(&system) {
        Ok(s) => s,
        Err(e) => return VerifyReport::failed(0, 0, CheckFailure::new("input", e.to_string())),
    };
    let pipeline = match Pipeline::new(system) {
        Ok(p) => p,
        Err(f) => return VerifyReport::failed(n, r, f),
    };
    verify_pipeline(&pipeline)
}

pub fn verify_pipeline(p: &Pipeline) -> VerifyReport {
    let (n, r) = (p.n, p.r);
    let mut report = VerifyReport::failed(n, r, CheckFailure::new("none", ""));
    report.first_failure = None;
    report.product_isomorphic = true;
    let mut failures = Vec::new();

    if !p.f_vector_matches_product() {
        failures.push(CheckFailure::new(
            "f_vector",
            "f-vector of P differs from (1+nt+nt^2)^r",
        ));
    }

    let (zero_sum, signs) = certificate_range_checks();
    report.zero_sum_ok = zero_sum;
    report.alpha_beta_ok = signs;
    if !zero_sum {
        failures.push(CheckFailure::new("zero_sum", "identity fails on [-20, 20]"));
    }
    if !signs {
        failures.push(CheckFailure::new(
            "alpha_beta",
            "sign pattern fails on [-20, 20]",
        ));
    }

    match deletion_certificates(n, r) {
        Ok(certs) => {
            report.deletion_certificates = certs
                .into_iter()
                .map(|c| DeletionSummary {
                    t: c.t,
                    rank: c.rank,
                    coefficients: rational::format_all(&c.coefficients),
                })
                .collect()
        }
        Err(e) => failures.push(CheckFailure::new("deletion_certificates", e.to_string())),
    }

    if r == 2 {
        report
            .notes
            .push("projection is identity; preservation vacuous".to_string());
    }
    match p.project().and_then(|q| q.preservation_suite(&p.labeling)) {
        Ok(summary) => {
            if !summary.all_ok() {
                let detail = format!(
                    "vertices {}/{}, edges {}/{}, polygons {}/{} preserved, {}/{} certified",
                    summary.vertices.preserved,
                    summary.vertices.checked,
                    summary.edges.preserved,
                    summary.edges.checked,
                    summary.polygons.preserved,
                    summary.polygons.checked,
                    summary.polygons.certified,
                    summary.polygons.checked,
                );
                failures.push(CheckFailure::new("preservation", detail));
            }
            report.preservation = Some(summary);
        }
        Err(e) => failures.push(CheckFailure::new("preservation", e.to_string())),
    }

    report.ok = failures.is_empty();
    report.first_failure = failures.into_iter().next();
    report
}

#[derive(Clone, Debug, Serialize)]
pub struct LiteralFormsReport {
    pub f2_printed: String,
    pub f2_actual: String,
    pub f2_discrepancy: String,
    pub fatness_printed: Option<Value>,
    pub phi3_printed: Option<Value>,
    pub complexity_printed: Option<Value>,
    pub euler_with_printed_f2: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub schema: u32,
    pub n: usize,
    pub r: usize,
    pub ok: bool,
    pub mismatches: Vec<String>,
    pub flag: FlagVector4,
    pub predicted: FlagVector4,
    pub metrics: MetricsReport,
    pub identities: CountingReport,
    pub euler: bool,
    pub complexity_bounds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub literal_forms: Option<LiteralFormsReport>,
}

/// Flag vector of `π(P)` from its computed face lattice, compared with
/// the closed form, plus metrics and counting identities.
pub fn analyze_pipeline(p: &Pipeline, literal_forms: bool) -> Result<AnalysisReport> {
    let (n, r) = (p.n, p.r);
    let q = p.project()?;
    let flag = q.image_lattice.flag_vector()?;
    let predicted = metrics::predicted_flag(n, r)?;
    let nq = q.image_vertices.len();
    let polygons: Vec<VertexSet> = p
        .labeling
        .polygon_faces()
        .iter()
        .filter_map(|f| q.image_set(&f.vertex_set(p.vertices.len())))
        .collect();
    debug_assert!(polygons.iter().all(|s| s.len() == nq));
    let identities = metrics::counting_identities(&q.image_lattice, &polygons, n, r)?;
    let metrics = metrics::metrics_report(&flag)?;

    let mut mismatches = Vec::new();
    if flag != predicted {
        mismatches.push(format!(
            "flag vector {flag} differs from closed form {predicted}"
        ));
    }
    if !identities.all_hold() {
        mismatches.push("counting identities fail".to_string());
    }
    let euler = q.image_lattice.satisfies_euler() && flag.satisfies_euler();
    if !euler {
        mismatches.push("Euler relation fails".to_string());
    }
    let fat = metrics::fatness(&flag)?;
    let cx = metrics::complexity(&flag)?;
    let two = rational::int(2);
    let complexity_bounds = cx <= &two * &fat - &two && fat <= &two * &cx - &two;
    if !complexity_bounds {
        mismatches.push("C <= 2F - 2 or F <= 2C - 2 fails".to_string());
    }
    if !metrics.cone.all() {
        mismatches.push("flag vector outside the cone".to_string());
    }

    let literal_forms = if literal_forms {
        let printed = metrics::printed_f2(n, r)?;
        let actual = rational::Rational::from_integer(flag.f2.clone());
        let formulas = metrics::printed_formulas(&flag, printed.clone());
        let f = &flag;
        let euler_printed = rational::Rational::from_integer(&f.f0 - &f.f1 - &f.f3) + &printed;
        Some(LiteralFormsReport {
            f2_printed: rational::format(&printed),
            f2_actual: rational::format(&actual),
            f2_discrepancy: rational::format(&(&printed - &actual)),
            fatness_printed: formulas.fatness.as_ref().map(Value::of),
            phi3_printed: formulas.phi3.as_ref().map(Value::of),
            complexity_printed: formulas.complexity.as_ref().map(Value::of),
            euler_with_printed_f2: num_traits::Zero::is_zero(&euler_printed),
        })
    } else {
        None
    };

    Ok(AnalysisReport {
        schema: SCHEMA,
        n,
        r,
        ok: mismatches.is_empty(),
        mismatches,
        flag,
        predicted,
        metrics,
        identities,
        euler,
        complexity_bounds,
        literal_forms,
    })
}

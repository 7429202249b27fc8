//! Flag-vector invariants of 4-polytopes: projective coordinates, fatness,
//! complexity, toric g-entries, and the closed-form flag vector of the
//! projected deformed products.
//!
//! Conventions (all exact):
//!
//! ```text
//! φ0 = (f0 - 5) / (f1 + f2 - 20)      φ3 = (f3 - 5) / (f1 + f2 - 20)
//! F  = (f1 + f2 - 20) / (f0 + f3 - 10) = 1 / (φ0 + φ3)
//! C  = (f03 - 20) / (f0 + f3 - 10)     = g2 / (g1 + g1*) + 3
//! ```
//!
//! The `printed_*` functions evaluate the alternative index placements and
//! the uncorrected `f2` term, for the literal-forms diagnostic.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::{FaceLattice, FlagVector4, VertexSet};
use crate::rational::{self, frac, int, Rational};

fn q(x: &BigInt) -> Rational {
    Rational::from_integer(x.clone())
}

fn apex_denominator(f: &FlagVector4) -> Result<Rational> {
    let den = q(&(&f.f0 + &f.f3)) - int(10);
    if den.is_zero() {
        return Err(Error::ApexOfCone);
    }
    Ok(den)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Phi {
    pub phi0: Rational,
    pub phi3: Rational,
}

pub fn phi(f: &FlagVector4) -> Result<Phi> {
    let den = q(&(&f.f1 + &f.f2)) - int(20);
    if den.is_zero() {
        return Err(Error::ApexOfCone);
    }
    Ok(Phi {
        phi0: (q(&f.f0) - int(5)) / &den,
        phi3: (q(&f.f3) - int(5)) / &den,
    })
}

pub fn fatness(f: &FlagVector4) -> Result<Rational> {
    let den = apex_denominator(f)?;
    Ok((q(&(&f.f1 + &f.f2)) - int(20)) / den)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GVector {
    pub g1: BigInt,
    pub g1_dual: BigInt,
    pub g2: BigInt,
}

pub fn g_vector(f: &FlagVector4) -> GVector {
    GVector {
        g1: &f.f0 - 5,
        g1_dual: &f.f3 - 5,
        g2: &f.f03 - &f.f0 * 3 - &f.f3 * 3 + 10,
    }
}

/// Complexity from the flag numbers and from the g-vector; both forms are
/// returned so callers can compare them.
pub fn complexity_forms(f: &FlagVector4) -> Result<(Rational, Rational)> {
    let den = apex_denominator(f)?;
    let direct = (q(&f.f03) - int(20)) / &den;
    let g = g_vector(f);
    let via_g = q(&g.g2) / q(&(g.g1 + g.g1_dual)) + int(3);
    Ok((direct, via_g))
}

pub fn complexity(f: &FlagVector4) -> Result<Rational> {
    let (direct, via_g) = complexity_forms(f)?;
    assert_eq!(direct, via_g, "complexity forms disagree");
    Ok(direct)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConeMembership {
    pub phi0_nonnegative: bool,
    pub phi3_nonnegative: bool,
    /// `φ0 + 3 φ3 <= 1`, tight for simplicial polytopes.
    pub simplicial_bound: bool,
    /// `3 φ0 + φ3 <= 1`, tight for simple polytopes.
    pub simple_bound: bool,
    /// `φ0 + φ3 <= 2/5`.
    pub fatness_bound: bool,
}

impl ConeMembership {
    pub fn all(&self) -> bool {
        self.phi0_nonnegative
            && self.phi3_nonnegative
            && self.simplicial_bound
            && self.simple_bound
            && self.fatness_bound
    }
}

pub fn cone_membership(f: &FlagVector4) -> Result<ConeMembership> {
    apex_denominator(f)?;
    let p = phi(f)?;
    let zero = Rational::zero();
    let one = Rational::one();
    Ok(ConeMembership {
        phi0_nonnegative: p.phi0 >= zero,
        phi3_nonnegative: p.phi3 >= zero,
        simplicial_bound: &p.phi0 + int(3) * &p.phi3 <= one,
        simple_bound: int(3) * &p.phi0 + &p.phi3 <= one,
        fatness_bound: &p.phi0 + &p.phi3 <= frac(2, 5),
    })
}

fn check_shape(n: usize, r: usize) -> Result<()> {
    if n < 4 || n % 2 == 1 {
        return Err(Error::InvalidParameters(format!(
            "n must be even and at least 4 (got {n})"
        )));
    }
    if r < 2 {
        return Err(Error::InvalidParameters(format!(
            "r must be at least 2 (got {r})"
        )));
    }
    Ok(())
}

fn to_integer(x: Rational) -> BigInt {
    assert!(x.is_integer(), "closed form is not integral");
    x.to_integer()
}

/// Closed-form flag vector of the projected deformed product:
///
/// ```text
/// f0 = n^r, f1 = r n^r, f2 = (5/4) r n^r - (3/2) n^r + r n^{r-1},
/// f3 = (1/4) r n^r - (1/2) n^r + r n^{r-1}, f03 = 4 r n^r - 4 n^r.
/// ```
pub fn predicted_flag(n: usize, r: usize) -> Result<FlagVector4> {
    check_shape(n, r)?;
    let big_n = Rational::from_integer(num_traits::pow(BigInt::from(n), r));
    let below = Rational::from_integer(num_traits::pow(BigInt::from(n), r - 1));
    let r = int(r as i64);
    let f = FlagVector4 {
        f0: to_integer(big_n.clone()),
        f1: to_integer(&r * &big_n),
        f2: to_integer(frac(5, 4) * &r * &big_n - frac(3, 2) * &big_n + &r * &below),
        f3: to_integer(frac(1, 4) * &r * &big_n - frac(1, 2) * &big_n + &r * &below),
        f03: to_integer(int(4) * &r * &big_n - int(4) * &big_n),
    };
    assert!(f.satisfies_euler());
    Ok(f)
}

/// Alternative readings of the formulas, evaluated for comparison only.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrintedFormulas {
    /// `f2` with the `-(3/4) n^r` term.
    pub f2: Rational,
    /// `(f1 + f3 - 20) / (f0 + f2 - 10)`.
    pub fatness: Option<Rational>,
    /// `(f3 - 5) / (f1 + f3 - 20)`.
    pub phi3: Option<Rational>,
    /// `f03 / (f0 + f3 - 10)`.
    pub complexity: Option<Rational>,
}

pub fn printed_f2(n: usize, r: usize) -> Result<Rational> {
    check_shape(n, r)?;
    let big_n = Rational::from_integer(num_traits::pow(BigInt::from(n), r));
    let below = Rational::from_integer(num_traits::pow(BigInt::from(n), r - 1));
    let r = int(r as i64);
    Ok(frac(5, 4) * &r * &big_n - frac(3, 4) * &big_n + &r * &below)
}

pub fn printed_formulas(f: &FlagVector4, f2_printed: Rational) -> PrintedFormulas {
    let ratio = |num: Rational, den: Rational| (!den.is_zero()).then(|| num / den);
    PrintedFormulas {
        f2: f2_printed,
        fatness: ratio(q(&(&f.f1 + &f.f3)) - int(20), q(&(&f.f0 + &f.f2)) - int(10)),
        phi3: ratio(q(&f.f3) - int(5), q(&(&f.f1 + &f.f3)) - int(20)),
        complexity: ratio(q(&f.f03), q(&(&f.f0 + &f.f3)) - int(10)),
    }
}

/// Facet classes of the projected polytope and the double-counting
/// identities they satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountingReport {
    pub prisms: usize,
    pub cubes: usize,
    pub polygons: usize,
    pub polygons_expected: usize,
    pub cubes_expected: usize,
    /// `6 C + (n + 2) P = 2 f2`.
    pub ridge_count: bool,
    /// `f03 = 8 C + 2 n P`.
    pub incidence_count: bool,
    pub polygon_count: bool,
    pub cube_count: bool,
    /// Every polygon lies in exactly two prism facets.
    pub polygons_in_two_prisms: bool,
}

impl CountingReport {
    pub fn all_hold(&self) -> bool {
        self.ridge_count
            && self.incidence_count
            && self.polygon_count
            && self.cube_count
            && self.polygons_in_two_prisms
    }
}

/// Classifies the facets of the projected polytope into prisms (two
/// polygon 2-faces, `2n` vertices, `n + 2` two-faces) and cubes (no polygon
/// 2-face, eight vertices, six quadrilaterals), then checks the counting
/// identities. `polygons` are the vertex sets of the polygon 2-faces in
/// `lattice`.
pub fn counting_identities(
    lattice: &FaceLattice,
    polygons: &[VertexSet],
    n: usize,
    r: usize,
) -> Result<CountingReport> {
    check_shape(n, r)?;
    let two_faces: Vec<&VertexSet> = lattice.faces_of_dim(2).map(|f| &f.vertices).collect();
    let mut prisms = 0;
    let mut cubes = 0;
    let mut containing = vec![0usize; polygons.len()];
    for facet in lattice.facets() {
        let inside: Vec<usize> = (0..polygons.len())
            .filter(|&i| polygons[i].is_subset(&facet.vertices))
            .collect();
        let faces: Vec<&&VertexSet> = two_faces
            .iter()
            .filter(|s| s.is_subset(&facet.vertices))
            .collect();
        let size = facet.vertices.count_ones(..);
        match inside.len() {
            2 if size == 2 * n && faces.len() == n + 2 => {
                prisms += 1;
                for i in inside {
                    containing[i] += 1;
                }
            }
            0 if size == 8 && faces.len() == 6 && faces.iter().all(|s| s.count_ones(..) == 4) => {
                cubes += 1
            }
            k => {
                return Err(Error::Counting(format!(
                    "facet with {size} vertices, {} two-faces and {k} polygons is neither a prism nor a cube",
                    faces.len()
                )))
            }
        }
    }
    let f2 = two_faces.len();
    let f03: usize = lattice.facets().map(|f| f.vertices.count_ones(..)).sum();
    let n_r = n.pow(r as u32);
    let polygons_expected = r * n.pow(r as u32 - 1);
    let cubes_expected = (r - 2) * n_r / 4;
    Ok(CountingReport {
        prisms,
        cubes,
        polygons: polygons.len(),
        polygons_expected,
        cubes_expected,
        ridge_count: 6 * cubes + (n + 2) * prisms == 2 * f2,
        incidence_count: f03 == 8 * cubes + 2 * n * prisms,
        polygon_count: prisms == polygons_expected && polygons.len() == polygons_expected,
        cube_count: cubes == cubes_expected,
        polygons_in_two_prisms: containing.iter().all(|&c| c == 2),
    })
}

/// Fatness and complexity of the closed-form flag vector.
pub fn limit_claims(n: usize, r: usize) -> Result<(Rational, Rational)> {
    let f = predicted_flag(n, r)?;
    Ok((fatness(&f)?, complexity(&f)?))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SteinitzCheck {
    pub euler: bool,
    /// `f2 <= 2 f0 - 4`
    pub simplicial_bound: bool,
    /// `f0 <= 2 f2 - 4`
    pub simple_bound: bool,
}

impl SteinitzCheck {
    pub fn all(&self) -> bool {
        self.euler && self.simplicial_bound && self.simple_bound
    }
}

pub fn steinitz_check_3d(f0: i64, f1: i64, f2: i64) -> SteinitzCheck {
    SteinitzCheck {
        euler: f1 == f0 + f2 - 2,
        simplicial_bound: f2 <= 2 * f0 - 4,
        simple_bound: f0 <= 2 * f2 - 4,
    }
}

/// A rational with its decimal approximation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Value {
    pub exact: String,
    /// Rounded to six places; derived from `exact`.
    pub approx: String,
}

impl Value {
    pub fn of(r: &Rational) -> Self {
        Self {
            exact: rational::format(r),
            approx: rational::decimal(r, 6),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MetricsReport {
    pub f: [String; 4],
    pub f03: String,
    pub phi0: Value,
    pub phi3: Value,
    pub fatness: Value,
    pub complexity: Value,
    pub g2: String,
    pub cone: ConeMembership,
}

pub fn metrics_report(f: &FlagVector4) -> Result<MetricsReport> {
    let p = phi(f)?;
    Ok(MetricsReport {
        f: [
            f.f0.to_string(),
            f.f1.to_string(),
            f.f2.to_string(),
            f.f3.to_string(),
        ],
        f03: f.f03.to_string(),
        phi0: Value::of(&p.phi0),
        phi3: Value::of(&p.phi3),
        fatness: Value::of(&fatness(f)?),
        complexity: Value::of(&complexity(f)?),
        g2: g_vector(f).g2.to_string(),
        cone: cone_membership(f)?,
    })
}

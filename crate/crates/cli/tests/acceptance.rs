//! Acceptance suite: one `[PASS]`/`[FAIL]` line per criterion. Runs
//! without the libtest harness so the lines always reach stdout.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use polyproj::analysis::{
    analyze_pipeline, certificate_range_checks, verify_pipeline, AnalysisReport, Pipeline,
    VerifyReport,
};
use polyproj::cone::positively_spans;
use polyproj::construction::choose_parameters;
use polyproj::linalg::QVector;
use polyproj::metrics::{self, predicted_flag};
use polyproj::polytope::{
    face_lattice, h_to_v, product_isomorphic, v_to_h, FaceLattice, FlagVector4, HPolytope,
};
use polyproj::projection::deletion_certificates;
use polyproj::rational::{self, frac, int, Rational};

#[path = "../../core/tests/common/cone_oracle.rs"]
mod cone_oracle;

const GRID: [(usize, usize); 6] = [(4, 2), (6, 2), (8, 2), (4, 3), (6, 3), (4, 4)];
const CASE_BUDGET: Duration = Duration::from_secs(300);

struct Case {
    n: usize,
    r: usize,
    elapsed: Duration,
    product: Result<bool, String>,
    vertices: usize,
    pipeline: Option<Pipeline>,
    verify: Option<VerifyReport>,
    analysis: Option<Result<AnalysisReport, String>>,
}

fn run_case(n: usize, r: usize) -> Case {
    let start = Instant::now();
    let mut case = Case {
        n,
        r,
        elapsed: Duration::ZERO,
        product: Err("not run".into()),
        vertices: 0,
        pipeline: None,
        verify: None,
        analysis: None,
    };
    match choose_parameters(n, r) {
        Ok(c) => {
            case.vertices = c.vertices.len();
            case.product =
                product_isomorphic(&c.system, &c.vertices, n, r).map_err(|e| e.to_string());
            case.elapsed = start.elapsed();
            match Pipeline::with_vertices(c.system, c.vertices, n, r) {
                Ok(p) => {
                    case.verify = Some(verify_pipeline(&p));
                    case.analysis = Some(analyze_pipeline(&p, false).map_err(|e| e.to_string()));
                    case.pipeline = Some(p);
                }
                Err(f) => case.product = Err(f.to_string()),
            }
        }
        Err(e) => {
            case.product = Err(e.to_string());
            case.elapsed = start.elapsed();
        }
    }
    case
}

type Outcome = Result<String, String>;

fn report(id: usize, outcome: &Outcome) -> bool {
    match outcome {
        Ok(msg) => {
            println!("[PASS] criterion {id}: {msg}");
            true
        }
        Err(msg) => {
            println!("[FAIL] criterion {id}: {msg}");
            false
        }
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion1(cases: &[Case]) -> Outcome {
    for c in cases {
        ensure(c.product == Ok(true), || {
            format!("({}, {}): {:?}", c.n, c.r, c.product)
        })?;
        ensure(c.vertices == c.n.pow(c.r as u32), || {
            format!("({}, {}): {} vertices", c.n, c.r, c.vertices)
        })?;
        ensure(c.elapsed < CASE_BUDGET, || {
            format!("({}, {}) took {:?}", c.n, c.r, c.elapsed)
        })?;
    }
    Ok("all six grid points are combinatorial products with n^r vertices".into())
}

fn criterion2(cases: &[Case]) -> Outcome {
    let mut checked = 0;
    for c in cases.iter().filter(|c| c.r >= 3) {
        let v = c
            .verify
            .as_ref()
            .ok_or_else(|| format!("({}, {}): no pipeline", c.n, c.r))?;
        let s = v
            .preservation
            .as_ref()
            .ok_or_else(|| format!("({}, {}): {:?}", c.n, c.r, v.first_failure))?;
        let nr = c.n.pow(c.r as u32);
        let expected = (nr, c.r * nr, c.r * c.n.pow(c.r as u32 - 1));
        ensure(
            (s.vertices.checked, s.edges.checked, s.polygons.checked) == expected,
            || {
                format!(
                    "({}, {}): face counts {:?}",
                    c.n,
                    c.r,
                    (s.vertices.checked, s.edges.checked, s.polygons.checked)
                )
            },
        )?;
        ensure(s.vertex_bijection, || {
            format!("({}, {}): vertex map not bijective", c.n, c.r)
        })?;
        for (name, class) in [
            ("vertices", &s.vertices),
            ("edges", &s.edges),
            ("polygons", &s.polygons),
        ] {
            ensure(class.all_preserved(), || {
                format!(
                    "({}, {}): {} {}/{} preserved",
                    c.n, c.r, name, class.preserved, class.checked
                )
            })?;
            ensure(class.implication_holds, || {
                format!("({}, {}): certificate without preservation", c.n, c.r)
            })?;
        }
        ensure(s.polygons.certified == s.polygons.checked, || {
            format!(
                "({}, {}): {}/{} polygon certificates",
                c.n, c.r, s.polygons.certified, s.polygons.checked
            )
        })?;
        checked += 1;
    }
    Ok(format!(
        "{checked} grid points with r >= 3 strictly preserve vertices, edges and polygons"
    ))
}

fn cli(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_polyproj"))
        .args(args)
        .output()
        .expect("running polyproj")
}

fn criterion3(cases: &[Case], dir: &Path) -> Outcome {
    let fixtures = [
        ((4, 2), [16, 32, 24, 8, 64]),
        ((4, 3), [64, 192, 192, 64, 512]),
        ((6, 3), [216, 648, 594, 162, 1728]),
    ];
    for c in cases {
        let a = match &c.analysis {
            Some(Ok(a)) => a,
            other => {
                return Err(format!(
                    "({}, {}): {:?}",
                    c.n,
                    c.r,
                    other.as_ref().map(|r| r.as_ref().err())
                ))
            }
        };
        let predicted = predicted_flag(c.n, c.r).map_err(|e| e.to_string())?;
        ensure(a.flag == predicted, || {
            format!("({}, {}): {} vs {}", c.n, c.r, a.flag, predicted)
        })?;
        if let Some((_, f)) = fixtures.iter().find(|(nr, _)| *nr == (c.n, c.r)) {
            let f = FlagVector4::from_small(*f);
            ensure(a.flag == f, || {
                format!("({}, {}): {} vs {}", c.n, c.r, a.flag, f)
            })?;
        }
    }
    let file = dir.join("p42.json");
    let file = file.to_str().unwrap();
    let out = cli(&["construct", "--n", "4", "--r", "2", "-o", file]);
    ensure(out.status.success(), || {
        format!("construct: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    let out = cli(&["analyze", "--input", file, "--paper-literal"]);
    ensure(out.status.success(), || {
        format!("analyze: {}", String::from_utf8_lossy(&out.stderr))
    })?;
    let json: serde_json::Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let lit = &json["literal_forms"];
    ensure(
        lit["f2_printed"] == "36" && lit["f2_actual"] == "24",
        || format!("literal forms: {lit}"),
    )?;
    Ok("computed flag vectors equal the corrected closed form; uncorrected f2 gives 36 against 24 at (4,2)".into())
}

fn criterion4(cases: &[Case]) -> Outcome {
    for c in cases {
        let a = match &c.analysis {
            Some(Ok(a)) => a,
            _ => return Err(format!("({}, {}): no analysis", c.n, c.r)),
        };
        let id = &a.identities;
        ensure(id.all_hold(), || format!("({}, {}): {:?}", c.n, c.r, id))?;
        let (n, r) = (c.n as i64, c.r as u32);
        let prisms = r as i64 * n.pow(r - 1);
        let cubes = (r as i64 - 2) * n.pow(r) / 4;
        ensure(
            id.prisms as i64 == prisms && id.cubes as i64 == cubes,
            || format!("({}, {}): P = {}, C = {}", c.n, c.r, id.prisms, id.cubes),
        )?;
        let f2: i64 = a.flag.f2.to_string().parse().unwrap();
        let f03: i64 = a.flag.f03.to_string().parse().unwrap();
        ensure(6 * cubes + (n + 2) * prisms == 2 * f2, || {
            format!("({}, {}): ridge count", c.n, c.r)
        })?;
        ensure(f03 == 8 * cubes + 2 * n * prisms, || {
            format!("({}, {}): incidence count", c.n, c.r)
        })?;
    }
    Ok("prism/cube counts and both double-counting identities hold on every instance".into())
}

fn criterion5(cases: &[Case]) -> Outcome {
    let (zero_sum, signs) = certificate_range_checks();
    ensure(zero_sum, || "zero-sum identity fails on [-20, 20]".into())?;
    ensure(signs, || {
        "alpha/beta sign pattern fails on [-20, 20]".into()
    })?;
    let mut shapes: Vec<(usize, usize)> = cases
        .iter()
        .filter(|c| c.r >= 3)
        .map(|c| (c.n, c.r))
        .collect();
    shapes.push((4, 10));
    for (n, r) in shapes {
        let certs = deletion_certificates(n, r).map_err(|e| format!("({n}, {r}): {e}"))?;
        ensure(certs.len() == r, || {
            format!("({n}, {r}): {} certificates", certs.len())
        })?;
        for c in &certs {
            ensure(c.rank == 2 * r - 4, || {
                format!("({n}, {r}) t = {}: rank {}", c.t, c.rank)
            })?;
        }
    }
    Ok(
        "zero sums and alpha/beta signs on [-20, 20]; deletion certificates on the grid and (4,10)"
            .into(),
    )
}

fn lattice_of(points: &[QVector]) -> Result<FaceLattice, String> {
    let h = v_to_h(points).map_err(|e| e.to_string())?;
    let v = h_to_v(&h).map_err(|e| e.to_string())?;
    face_lattice(&v).map_err(|e| e.to_string())
}

fn cube4() -> Vec<QVector> {
    (0..16u32)
        .map(|m| {
            (0..4)
                .map(|i| int(if m >> i & 1 == 1 { 1 } else { -1 }))
                .collect()
        })
        .collect()
}

fn cell24() -> Vec<QVector> {
    let mut pts = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for (si, sj) in [(-1, -1), (-1, 1), (1, -1), (1, 1)] {
                let mut p = vec![int(0); 4];
                p[i] = int(si);
                p[j] = int(sj);
                pts.push(p);
            }
        }
    }
    pts
}

fn criterion6() -> Outcome {
    let cube = lattice_of(&cube4())?
        .flag_vector()
        .map_err(|e| e.to_string())?;
    let cell = lattice_of(&cell24())?
        .flag_vector()
        .map_err(|e| e.to_string())?;
    ensure(cube == FlagVector4::from_small([16, 32, 24, 8, 64]), || {
        format!("4-cube {cube}")
    })?;
    ensure(
        cell == FlagVector4::from_small([24, 96, 96, 24, 144]),
        || format!("24-cell {cell}"),
    )?;
    let fc = metrics::fatness(&cube).map_err(|e| e.to_string())?;
    ensure(fc == frac(18, 7), || format!("fatness(4-cube) = {fc}"))?;
    let fz = metrics::fatness(&cell).map_err(|e| e.to_string())?;
    ensure(fz == frac(172, 38), || format!("fatness(24-cell) = {fz}"))?;
    ensure(rational::decimal(&fz, 3) == "4.526", || {
        format!("24-cell decimal {}", rational::decimal(&fz, 3))
    })?;
    let phi = metrics::phi(&cube).map_err(|e| e.to_string())?;
    ensure(&phi.phi0 * int(3) + &phi.phi3 == int(1), || {
        "3 phi0 + phi3 != 1 for the 4-cube".into()
    })?;
    for f in [&cube, &cell] {
        let (a, b) = metrics::complexity_forms(f).map_err(|e| e.to_string())?;
        ensure(a == b, || format!("complexity forms differ on {f}"))?;
        ensure(a >= int(3), || format!("complexity {a} < 3 on {f}"))?;
    }
    Ok("fatness 18/7 and 172/38 (4.526); 3 phi0 + phi3 = 1 for the 4-cube; C >= 3 with agreeing forms".into())
}

fn criterion7() -> Outcome {
    let (fat, cx) = metrics::limit_claims(1_000_000, 1000).map_err(|e| e.to_string())?;
    ensure(fat > frac(89, 10), || {
        format!("fatness {}", rational::decimal(&fat, 6))
    })?;
    ensure(cx > frac(159, 10), || {
        format!("complexity {}", rational::decimal(&cx, 6))
    })?;
    let nine = int(9);
    let sixteen = int(16);
    for n in [4, 6, 8, 100] {
        let mut prev: Option<Rational> = None;
        for r in 2..=50 {
            let (f, c) = metrics::limit_claims(n, r).map_err(|e| e.to_string())?;
            ensure(f < nine && c < sixteen, || {
                format!("({n}, {r}): F = {f}, C = {c}")
            })?;
            if let Some(p) = &prev {
                ensure(&f > p, || format!("fatness not increasing at ({n}, {r})"))?;
            }
            prev = Some(f);
        }
    }
    ensure(fat < nine && cx < sixteen, || "limit values reached".into())?;
    Ok(format!(
        "at (10^6, 10^3) F = {} > 8.9, C = {} > 15.9; F increasing in r, F < 9 and C < 16 throughout",
        rational::decimal(&fat, 6),
        rational::decimal(&cx, 6)
    ))
}

fn spanning_agreement(runner: &mut TestRunner) -> Result<usize, String> {
    let strategy = (1usize..=4).prop_flat_map(|d| {
        (
            Just(d),
            prop::collection::vec(prop::collection::vec(-5i64..=5, d), 1..=8),
        )
    });
    let mut agreed = 0;
    for _ in 0..200 {
        let (d, raw) = strategy
            .new_tree(runner)
            .map_err(|e| e.to_string())?
            .current();
        let vs: Vec<QVector> = raw
            .into_iter()
            .map(|v| v.into_iter().map(int).collect())
            .collect();
        let cert = positively_spans(&vs, d);
        ensure(
            cert.is_some() == cone_oracle::positively_spans_oracle(&vs, d),
            || format!("positively_spans disagrees with the oracle on {vs:?}"),
        )?;
        ensure(!cert.is_some() || cert.verify(&vs, d), || {
            format!("invalid certificate on {vs:?}")
        })?;
        agreed += 1;
    }
    Ok(agreed)
}

fn facet_set(h: &HPolytope) -> BTreeSet<Vec<String>> {
    h.matrix()
        .row_iter()
        .zip(h.rhs())
        .map(|(a, b)| {
            let mut row = rational::format_all(a);
            row.push(rational::format(b));
            row
        })
        .collect()
}

fn round_trips(runner: &mut TestRunner) -> Result<usize, String> {
    let strategy = prop::collection::vec(prop::collection::vec(-4i64..=4, 3), 4..12);
    let mut done = 0;
    for _ in 0..50 {
        let raw = strategy
            .new_tree(runner)
            .map_err(|e| e.to_string())?
            .current();
        let pts: Vec<QVector> = raw
            .into_iter()
            .map(|p| p.into_iter().map(int).collect())
            .collect();
        let Ok(h) = v_to_h(&pts) else { continue };
        let v = h_to_v(&h).map_err(|e| e.to_string())?;
        ensure(pts.iter().all(|p| h.contains(p)), || {
            "hull misses an input point".into()
        })?;
        ensure(v.vertices.iter().all(|x| pts.contains(x)), || {
            "new vertex after round trip".into()
        })?;
        let back = v_to_h(&v.vertices).map_err(|e| e.to_string())?;
        ensure(facet_set(&back) == facet_set(&h), || {
            "second round trip changed the facets".into()
        })?;
        let l = face_lattice(&v).map_err(|e| e.to_string())?;
        ensure(l.satisfies_euler(), || {
            "Euler fails on a random hull".into()
        })?;
        done += 1;
    }
    Ok(done)
}

fn criterion8(cases: &[Case], dir: &Path) -> Outcome {
    let mut runner = TestRunner::deterministic();
    let agreed = spanning_agreement(&mut runner)?;
    let trips = round_trips(&mut runner)?;
    let mut lattices = 0;
    for c in cases {
        let p = c
            .pipeline
            .as_ref()
            .ok_or_else(|| format!("({}, {}): no pipeline", c.n, c.r))?;
        ensure(p.lattice.satisfies_euler(), || {
            format!("({}, {}): Euler fails on P", c.n, c.r)
        })?;
        let q = p.project().map_err(|e| e.to_string())?;
        ensure(q.image_lattice.satisfies_euler(), || {
            format!("({}, {}): Euler fails on Q", c.n, c.r)
        })?;
        lattices += 2;
    }
    for points in [cube4(), cell24()] {
        ensure(lattice_of(&points)?.satisfies_euler(), || {
            "Euler fails on a fixture".into()
        })?;
        lattices += 1;
    }

    let runs: Vec<Vec<&str>> = vec![
        vec!["construct", "--n", "4", "--r", "3"],
        vec![
            "construct",
            "--n",
            "4",
            "--r",
            "2",
            "--eps",
            "1/16",
            "--big-m",
            "256",
            "--format",
            "ine",
        ],
        vec![
            "sweep",
            "--n",
            "4,6,8",
            "--r",
            "2..3",
            "--formula-only",
            "--format",
            "json",
        ],
    ];
    for args in &runs {
        let a = cli(args);
        let b = cli(args);
        ensure(
            a.stdout == b.stdout && a.status.code() == b.status.code(),
            || format!("nondeterministic: {args:?}"),
        )?;
    }
    let file = dir.join("p43.json");
    let file = file.to_str().unwrap();
    cli(&["construct", "--n", "4", "--r", "3", "-o", file]);
    let first = std::fs::read(file).map_err(|e| e.to_string())?;
    cli(&["construct", "--n", "4", "--r", "3", "-o", file]);
    let second = std::fs::read(file).map_err(|e| e.to_string())?;
    ensure(first == second, || {
        "construct output differs between runs".into()
    })?;
    let a = cli(&["verify", "--input", file]);
    let b = cli(&["verify", "--input", file]);
    ensure(a.status.success() && a.stdout == b.stdout, || {
        "verify output differs or fails".into()
    })?;

    Ok(format!(
        "{agreed}/200 spanning checks agree with the oracle; {trips} hull round trips; {lattices} lattices satisfy Euler; CLI output byte-identical"
    ))
}

fn main() -> std::process::ExitCode {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Case> = GRID.iter().map(|&(n, r)| run_case(n, r)).collect();
    for c in &cases {
        println!(
            "  ({}, {}): parameters and product check in {:?}",
            c.n, c.r, c.elapsed
        );
    }
    let outcomes = [
        criterion1(&cases),
        criterion2(&cases),
        criterion3(&cases, dir.path()),
        criterion4(&cases),
        criterion5(&cases),
        criterion6(),
        criterion7(),
        criterion8(&cases, dir.path()),
    ];
    let passed = outcomes
        .iter()
        .enumerate()
        .filter(|(i, o)| report(i + 1, o))
        .count();
    println!("acceptance: {passed}/{} criteria passed", outcomes.len());
    if passed == outcomes.len() {
        std::process::ExitCode::SUCCESS
    } else {
        std::process::ExitCode::FAILURE
    }
}

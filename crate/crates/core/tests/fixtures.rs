use num_bigint::BigInt;
use polyproj::linalg::QVector;
use polyproj::metrics::{self, steinitz_check_3d};
use polyproj::polytope::{face_lattice, h_to_v, v_to_h, FaceLattice, FlagVector4};
use polyproj::rational::{frac, int};

fn lattice_of(points: &[QVector]) -> FaceLattice {
    let h = v_to_h(points).unwrap();
    let v = h_to_v(&h).unwrap();
    assert_eq!(v.len(), points.len());
    face_lattice(&v).unwrap()
}

fn cube(d: usize) -> Vec<QVector> {
    (0..1u32 << d)
        .map(|m| {
            (0..d)
                .map(|i| int(if m >> i & 1 == 1 { 1 } else { -1 }))
                .collect()
        })
        .collect()
}

fn simplex4() -> Vec<QVector> {
    let mut pts: Vec<QVector> = (0..4)
        .map(|i| (0..4).map(|j| int((i == j) as i64)).collect())
        .collect();
    pts.push(vec![int(0); 4]);
    pts
}

/// All permutations of `(±1, ±1, 0, 0)`.
fn cell24() -> Vec<QVector> {
    let mut pts = Vec::new();
    for i in 0..4 {
        for j in i + 1..4 {
            for si in [-1, 1] {
                for sj in [-1, 1] {
                    let mut p = vec![int(0); 4];
                    p[i] = int(si);
                    p[j] = int(sj);
                    pts.push(p);
                }
            }
        }
    }
    pts
}

#[test]
fn cell24_flag_vector() {
    let l = lattice_of(&cell24());
    assert_eq!(
        l.flag_vector().unwrap(),
        FlagVector4::from_small([24, 96, 96, 24, 144])
    );
    assert!(l.satisfies_euler());
    assert!(l.is_intersection_closed());
    let f = l.flag_vector().unwrap();
    assert_eq!(metrics::fatness(&f).unwrap(), frac(172, 38));
    let (a, b) = metrics::complexity_forms(&f).unwrap();
    assert_eq!(a, b);
    assert!(a >= int(3));
    assert!(metrics::cone_membership(&f).unwrap().all());
}

#[test]
fn cube4_flag_vector_is_simple_extreme() {
    let l = lattice_of(&cube(4));
    let f = l.flag_vector().unwrap();
    assert_eq!(f, FlagVector4::from_small([16, 32, 24, 8, 64]));
    let p = metrics::phi(&f).unwrap();
    assert_eq!(&p.phi0 * int(3) + &p.phi3, int(1));
    assert_eq!(metrics::fatness(&f).unwrap(), frac(18, 7));
}

#[test]
fn simplex4_is_the_apex() {
    let l = lattice_of(&simplex4());
    let f = l.flag_vector().unwrap();
    assert_eq!(f, FlagVector4::from_small([5, 10, 10, 5, 20]));
    assert!(metrics::fatness(&f).is_err());
    assert_eq!(metrics::g_vector(&f).g2, BigInt::from(0));
}

#[test]
fn low_dimensional_lattices_satisfy_euler() {
    for d in 2..=5 {
        let l = lattice_of(&cube(d));
        assert!(l.satisfies_euler(), "cube {d}");
        assert!(l.is_graded());
    }
    let f = lattice_of(&cube(3)).f_vector();
    assert!(steinitz_check_3d(f[0] as i64, f[1] as i64, f[2] as i64).all());
    let cross: Vec<QVector> = (0..3)
        .flat_map(|i| [-1, 1].map(|s| (0..3).map(|j| int(if i == j { s } else { 0 })).collect()))
        .collect();
    let f = lattice_of(&cross).f_vector();
    assert_eq!(f, vec![6, 12, 8]);
    assert!(steinitz_check_3d(6, 12, 8).all());
}

#[test]
fn flag_vector_needs_dimension_four() {
    assert!(lattice_of(&cube(3)).flag_vector().is_err());
}

//! Property tests for divisors. Oracles: discrepancies recomputed by star
//! subdivision plus pullback, concavity of the support function at sampled
//! points, and bigness from the affine rank of lattice points in a dilate of
//! `P_D` that is known to be a lattice polytope.

use divisors::*;
use exact_core::{int, is_zero_vec, lattice_points, primitive, rat, rvec, IntMat, IntVec, Rat};
use fan::{geom::combinations, properties, q_factorialize, star_subdivide, zoo, Fan, ToricMap};
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

fn complete_base(k: usize) -> Fan {
    match k % 6 {
        0 => zoo::projective_space(2),
        1 => zoo::product(&zoo::projective_space(1), &zoo::projective_space(1)),
        2 => zoo::hirzebruch(2),
        3 => zoo::blown_up_plane(),
        4 => zoo::weighted_p112(),
        _ => zoo::projective_space(3),
    }
}

fn with_subdivisions(mut f: Fan, vs: &[Vec<i64>]) -> Fan {
    for v in vs {
        let v: IntVec = v[..f.rank()].iter().map(|&x| int(x)).collect();
        if is_zero_vec(&v) {
            continue;
        }
        if let Ok((g, _)) = star_subdivide(&f, &primitive(&v).unwrap()) {
            f = g;
        }
    }
    f
}

fn fan_strategy() -> impl Strategy<Value = Fan> {
    (0usize..7, prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 0..2)).prop_map(|(k, vs)| {
        let base = if k == 6 { zoo::flip_side_a(2) } else { complete_base(k) };
        with_subdivisions(base, &vs)
    })
}

fn divisor(f: &Fan, raw: &[(i64, bool)]) -> TorusDivisor {
    TorusDivisor::new(
        (0..f.rays().len())
            .map(|i| {
                let (n, half) = raw[i % raw.len()];
                rat(n, if half { 2 } else { 1 })
            })
            .collect(),
    )
}

fn raw_strategy() -> impl Strategy<Value = Vec<(i64, bool)>> {
    prop::collection::vec((-3i64..=3, any::<bool>()), 1..10)
}

/// `ψ(x) = min_σ ⟨m_σ, x⟩` at the rays, and concavity `ψ(x+y) ≥ ψ(x) + ψ(y)` on samples.
fn concave_on_samples(f: &Fan, cd: &CartierData) -> bool {
    let pts: Vec<Vec<Rat>> = f.rays().iter().map(|u| rvec(u)).collect();
    for p in &pts {
        let psi = cd.evaluate(f, p).unwrap();
        if cd.covectors.iter().any(|m| exact_core::dot_rat(m, p) < psi) {
            return false;
        }
    }
    for p in &pts {
        for q in &pts {
            let s: Vec<Rat> = p.iter().zip(q).map(|(a, b)| a + b).collect();
            if let (Some(a), Some(b), Some(c)) = (cd.evaluate(f, p), cd.evaluate(f, q), cd.evaluate(f, &s)) {
                if c < a + b {
                    return false;
                }
            }
        }
    }
    true
}

fn affine_rank(pts: &[IntVec]) -> i64 {
    if pts.is_empty() {
        return -1;
    }
    let n = pts[0].len();
    let diffs: Vec<IntVec> = pts.iter().map(|p| p.iter().zip(&pts[0]).map(|(a, b)| a - b).collect()).collect();
    IntMat::from_rows(n, diffs).unwrap().rank_bareiss() as i64
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn cartier_data_is_continuous(f in fan_strategy(), raw in raw_strategy()) {
        let d = divisor(&f, &raw);
        let cd = cartier_data(&f, &d).unwrap();
        for (k, c) in f.max_cones().iter().enumerate() {
            for &i in c {
                prop_assert_eq!(exact_core::pair(cd.covector(k), f.ray(i)), -d.coeffs[i].clone());
            }
        }
        for a in 0..f.max_cones().len() {
            for b in a + 1..f.max_cones().len() {
                for i in f.max_cones()[a].iter().filter(|i| f.max_cones()[b].contains(i)) {
                    prop_assert_eq!(exact_core::pair(cd.covector(a), f.ray(*i)), exact_core::pair(cd.covector(b), f.ray(*i)));
                }
            }
        }
    }

    #[test]
    fn principal_divisors_are_trivial(k in 0usize..6, m in prop::collection::vec(-4i64..=4, 3)) {
        let f = complete_base(k);
        let m: Vec<Rat> = m[..f.rank()].iter().map(|&x| rat(x, 1)).collect();
        let d = principal(&f, &m);
        let cd = cartier_data(&f, &d).unwrap();
        let neg: Vec<Rat> = m.iter().map(|x| -x.clone()).collect();
        prop_assert!(cd.covectors.iter().all(|c| *c == neg));
        prop_assert!(positivity(&f, &d).unwrap().nef);
        let pts = lattice_points(&section_polytope(&f, &d)).unwrap();
        prop_assert_eq!(pts.len(), 1);
        prop_assert_eq!(rvec(&pts[0]), neg);
    }

    #[test]
    fn pullback_inverts_pushforward_on_small_maps(c in -3i64..=3, m in prop::collection::vec(-3i64..=3, 3), vs in prop::collection::vec(prop::collection::vec(-1i64..=1, 3), 0..2)) {
        let target = with_subdivisions(zoo::cube_faces(), &vs);
        let (_, map) = q_factorialize(&target);
        let m: Vec<Rat> = m.iter().map(|&x| rat(x, 1)).collect();
        // K and principal divisors are Q-Cartier on the cube fan and its subdivisions
        let d = canonical(&target).scaled(&rat(c, 1)).plus(&principal(&target, &m));
        if cartier_data(&target, &d).is_ok() {
            let up = pullback(&map, &d).unwrap();
            prop_assert_eq!(&up, &d);
            prop_assert_eq!(pushforward(&map, &up).unwrap(), d.clone());
            prop_assert_eq!(pullback(&map, &pushforward(&map, &up).unwrap()).unwrap(), up);
        }
    }

    #[test]
    fn discrepancy_matches_subdivision(f in fan_strategy(), raw in raw_strategy(), w in prop::collection::vec(0i64..=3, 4), cone in 0usize..64) {
        let b = divisor(&f, &raw);
        let b = TorusDivisor::new(b.coeffs.iter().map(|x| x.abs() / rat(2, 1)).collect());
        let c = &f.max_cones()[cone % f.max_cones().len()];
        let v: IntVec = f.cone_rays(c).iter().zip(&w).fold(vec![int(0); f.rank()], |acc, (u, &t)| {
            acc.iter().zip(u).map(|(a, x)| a + x * int(t)).collect()
        });
        prop_assume!(!is_zero_vec(&v));
        let v = primitive(&v).unwrap();
        let a = discrepancy(&f, &b, &v).unwrap();
        let verdict = klt_check(&f, &b);
        if verdict.ok {
            prop_assert!(a > rat(-1, 1));
        }
        if a <= rat(-1, 1) {
            prop_assert!(!verdict.ok);
        }
        if f.ray_index(&v).is_none() {
            // K_Y + B_Y = π*(K + B) + aE, with E the new ray
            let (y, _) = star_subdivide(&f, &v).unwrap();
            let map = ToricMap::identity(y.clone(), f.clone());
            let kb = canonical(&f).plus(&b);
            let up = pullback(&map, &kb).unwrap();
            let e = y.ray_index(&v).unwrap();
            prop_assert_eq!(a, -Rat::one() - up.coeffs[e].clone());
        }
    }

    #[test]
    fn nefness_and_semiampleness(f in fan_strategy(), raw in raw_strategy()) {
        let d = divisor(&f, &raw);
        let p = positivity(&f, &d).unwrap();
        let cd = cartier_data(&f, &d).unwrap();
        if p.nef {
            prop_assert!(concave_on_samples(&f, &cd));
            let w = semiample_witness(&f, &d).unwrap();
            prop_assert!(w.multiple.is_positive());
            for s in &w.sections {
                let lr = Rat::from_integer(w.multiple.clone());
                for (u, a) in f.rays().iter().zip(&d.coeffs) {
                    prop_assert!(Rat::from_integer(exact_core::dot(s, u)) >= -(a * &lr));
                }
            }
        } else {
            prop_assert!(!concave_on_samples(&f, &cd));
            let is_not_nef = matches!(semiample_witness(&f, &d), Err(DivisorError::NotNef { .. }));
            prop_assert!(is_not_nef);
        }
        if p.ample {
            prop_assert!(p.nef && p.big);
        }
    }

    #[test]
    fn bigness_matches_affine_rank(k in 0usize..6, vs in prop::collection::vec(prop::collection::vec(-1i64..=1, 3), 0..2), raw in raw_strategy()) {
        let f = with_subdivisions(complete_base(k), &vs);
        prop_assume!(properties(&f).unwrap().complete);
        let d = divisor(&f, &raw);
        // every vertex of P_D solves a square subsystem, so this dilate is a lattice polytope
        let mut l = int(2);
        for idx in combinations(f.rays().len(), f.rank()) {
            let rows: Vec<IntVec> = idx.iter().map(|&i| f.ray(i).clone()).collect();
            let det = IntMat::from_rows(f.rank(), rows).unwrap().det().unwrap();
            if !det.is_zero() {
                l = num_integer::Integer::lcm(&l, &det.abs());
            }
        }
        let scaled = d.scaled(&Rat::from_integer(l));
        let pts = lattice_points(&section_polytope(&f, &scaled)).unwrap();
        let big = positivity(&f, &d).unwrap().big;
        prop_assert_eq!(big, affine_rank(&pts) == f.rank() as i64);
        if big {
            prop_assert!(matches!(h0_dim(&f, &scaled).unwrap(), H0::Count(n) if n > 0));
        }
    }
}

//! Property tests for walls and intersection numbers. The surface oracle
//! computes `D_i · D_j` from determinants of adjacent rays and linear
//! equivalence, without Cartier data or wall relations.

use divisors::{positivity, principal, TorusDivisor};
use exact_core::{cone_contains, int, is_zero_vec, primitive, rat, rvec, IntVec, Rat};
use fan::{properties, star_subdivide, zoo, Fan};
use mori::*;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn base(k: usize) -> Fan {
    match k % 7 {
        0 => zoo::projective_space(2),
        1 => zoo::product(&zoo::projective_space(1), &zoo::projective_space(1)),
        2 => zoo::hirzebruch(2),
        3 => zoo::blown_up_plane(),
        4 => zoo::weighted_p112(),
        5 => zoo::projective_space(3),
        _ => zoo::flip_side_a(2),
    }
}

fn fan_strategy() -> impl Strategy<Value = Fan> {
    (0usize..7, prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 0..3)).prop_map(|(k, vs)| {
        let mut f = base(k);
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
    })
}

fn divisor_strategy() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-4i64..=4, 1i64..=3), 1..12)
}

fn divisor(f: &Fan, raw: &[(i64, i64)]) -> TorusDivisor {
    TorusDivisor::new((0..f.rays().len()).map(|i| rat(raw[i % raw.len()].0, raw[i % raw.len()].1)).collect())
}

fn det2(a: &IntVec, b: &IntVec) -> Rat {
    Rat::from_integer(&a[0] * &b[1] - &a[1] * &b[0])
}

/// Intersection matrix of a complete simplicial surface fan.
fn surface_oracle(f: &Fan) -> Vec<Vec<Rat>> {
    let n = f.rays().len();
    let mut m = vec![vec![Rat::zero(); n]; n];
    for c in f.max_cones() {
        let d = det2(f.ray(c[0]), f.ray(c[1]));
        let v = Rat::from_integer(int(1)) / d.abs();
        m[c[0]][c[1]] = v.clone();
        m[c[1]][c[0]] = v;
    }
    for i in 0..n {
        // div(e) · D_i = 0 for a coordinate functional e not vanishing on u_i
        let e = if f.ray(i)[0] != int(0) { [1, 0] } else { [0, 1] };
        let pair = |j: usize| Rat::from_integer(&f.ray(j)[0] * int(e[0]) + &f.ray(j)[1] * int(e[1]));
        let s: Rat = (0..n).filter(|&j| j != i).map(|j| pair(j) * &m[j][i]).sum();
        m[i][i] = -s / pair(i);
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn principal_divisors_are_numerically_trivial(f in fan_strategy(), m in prop::collection::vec(-5i64..=5, 3)) {
        let m: Vec<Rat> = m[..f.rank()].iter().map(|&x| rat(x, 1)).collect();
        let d = principal(&f, &m);
        for w in walls(&f).unwrap() {
            prop_assert!(intersect(&f, &d, &w).unwrap().is_zero());
            prop_assert!(curve_class(&f, &w).pair(&d).is_zero());
        }
    }

    #[test]
    fn intersection_is_linear_and_matches_relations(f in fan_strategy(), a in divisor_strategy(), b in divisor_strategy(), s in -3i64..=3, t in 1i64..=4) {
        let (da, db) = (divisor(&f, &a), divisor(&f, &b));
        let q = rat(s, t);
        for w in walls(&f).unwrap() {
            let (ia, ib) = (intersect(&f, &da, &w).unwrap(), intersect(&f, &db, &w).unwrap());
            prop_assert_eq!(intersect(&f, &da.plus(&db), &w).unwrap(), &ia + &ib);
            prop_assert_eq!(intersect(&f, &da.scaled(&q), &w).unwrap(), &ia * &q);
            prop_assert_eq!(curve_class(&f, &w).pair(&da), ia);
            let rel = wall_relation(&f, &w);
            let sum: Vec<Rat> = (0..f.rank()).map(|j| f.rays().iter().zip(&rel.b).map(|(u, c)| c * Rat::from_integer(u[j].clone())).sum()).collect();
            prop_assert!(sum.iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn surfaces_agree_with_determinant_oracle(f in fan_strategy(), a in divisor_strategy()) {
        prop_assume!(f.rank() == 2 && properties(&f).unwrap().complete);
        let m = surface_oracle(&f);
        let d = divisor(&f, &a);
        for w in walls(&f).unwrap() {
            let r = w.rays[0];
            let want: Rat = (0..f.rays().len()).map(|i| &d.coeffs[i] * &m[i][r]).sum();
            prop_assert_eq!(intersect(&f, &d, &w).unwrap(), want);
        }
    }

    #[test]
    fn smooth_cartier_pairings_are_integers(f in fan_strategy(), a in prop::collection::vec(-4i64..=4, 1..12)) {
        let p = properties(&f).unwrap();
        prop_assume!(p.smooth && p.complete);
        let d = TorusDivisor::from_ints(&(0..f.rays().len()).map(|i| a[i % a.len()]).collect::<Vec<_>>());
        for w in walls(&f).unwrap() {
            prop_assert!(intersect(&f, &d, &w).unwrap().is_integer());
        }
    }

    #[test]
    fn nef_by_support_function_equals_nef_by_walls(f in fan_strategy(), a in divisor_strategy()) {
        prop_assume!(properties(&f).unwrap().complete);
        let d = divisor(&f, &a);
        let by_walls = walls(&f).unwrap().iter().all(|w| !intersect(&f, &d, w).unwrap().is_negative());
        prop_assert_eq!(positivity(&f, &d).unwrap().nef, by_walls);
    }

    #[test]
    fn extremal_rays_generate_the_wall_cone(f in fan_strategy()) {
        let p = properties(&f).unwrap();
        prop_assume!(p.support_convex);
        let rays = extremal_rays(&f).unwrap();
        let gens: Vec<IntVec> = rays.iter().map(|r| r.direction.clone()).collect();
        let classes: Vec<IntVec> = walls(&f).unwrap().iter().map(|w| exact_core::primitive_of_rat(&curve_class(&f, w).c).unwrap()).collect();
        for c in &classes {
            prop_assert!(cone_contains(&gens, &rvec(c)));
        }
        for g in &gens {
            prop_assert!(classes.contains(g));
        }
        let listed: usize = rays.iter().map(|r| r.walls.len()).sum();
        prop_assert!(listed <= classes.len());
    }
}

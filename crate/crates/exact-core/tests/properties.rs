//! Property tests for exact-core, each checked against an independent oracle
//! implemented here (Fourier–Motzkin elimination, brute-force scans).

use exact_core::*;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

/// Fourier–Motzkin feasibility with strictness flags. Independent of the simplex.
fn fm_feasible(dim: usize, rows: &[(Vec<Rat>, Rat, bool)]) -> bool {
    let mut rows: Vec<(Vec<Rat>, Rat, bool)> = rows.to_vec();
    for k in (0..dim).rev() {
        let (mut pos, mut neg, mut rest) = (vec![], vec![], vec![]);
        for r in rows {
            if r.0[k].is_positive() {
                pos.push(r);
            } else if r.0[k].is_negative() {
                neg.push(r);
            } else {
                rest.push(r);
            }
        }
        for p in &pos {
            for q in &neg {
                let (ap, aq) = (p.0[k].clone(), -q.0[k].clone());
                let coeffs: Vec<Rat> = (0..dim).map(|i| &p.0[i] * &aq + &q.0[i] * &ap).collect();
                rest.push((coeffs, &p.1 * &aq + &q.1 * &ap, p.2 || q.2));
            }
        }
        rows = rest;
    }
    rows.iter().all(|(_, c, s)| if *s { c.is_negative() } else { !c.is_positive() })
}

fn to_rows(sys: &IneqSystem) -> Vec<(Vec<Rat>, Rat, bool)> {
    sys.rows().iter().map(|r| (r.coeffs.clone(), r.constant.clone(), r.strict)).collect()
}

fn fm_bounded(sys: &IneqSystem) -> bool {
    let rec: Vec<(Vec<Rat>, Rat, bool)> = sys.rows().iter().map(|r| (r.coeffs.clone(), Rat::zero(), false)).collect();
    for i in 0..sys.dim() {
        for s in [1, -1] {
            let mut probe = rec.clone();
            let mut e = vec![Rat::zero(); sys.dim()];
            e[i] = rat(s, 1);
            probe.push((e, Rat::one(), false));
            if fm_feasible(sys.dim(), &probe) {
                return false;
            }
        }
    }
    true
}

fn system_strategy(dim: usize) -> impl Strategy<Value = IneqSystem> {
    prop::collection::vec((prop::collection::vec(-3i64..=3, dim), -6i64..=6, any::<bool>()), 1..7).prop_map(
        move |rows| {
            let mut s = IneqSystem::new(dim);
            for (a, c, strict) in rows {
                let coeffs = a.iter().map(|&x| rat(x, 1)).collect();
                if strict {
                    s.gt(coeffs, rat(c, 1));
                } else {
                    s.ge(coeffs, rat(c, 1));
                }
            }
            s
        },
    )
}

fn matrix_strategy() -> impl Strategy<Value = IntMat> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(m, n)| {
        prop::collection::vec(prop::collection::vec(-6i64..=6, n), m).prop_map(move |rows| {
            IntMat::from_rows(n, rows.into_iter().map(|r| r.into_iter().map(Int::from).collect()).collect()).unwrap()
        })
    })
}

fn unimodular_strategy() -> impl Strategy<Value = IntMat> {
    prop::collection::vec((0usize..2, 0usize..2, -2i64..=2), 0..6).prop_map(|ops| {
        let mut t = IntMat::identity(2);
        for (i, j, f) in ops {
            if i != j {
                let mut e = IntMat::identity(2);
                e.set(i, j, Int::from(f));
                t = t.mul(&e).unwrap();
            }
        }
        t
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn snf_identities(a in matrix_strategy()) {
        let r = smith_normal_form(&a);
        prop_assert_eq!(r.u.mul(&a).unwrap().mul(&r.v).unwrap(), r.s.clone());
        prop_assert!(r.u.det().unwrap().abs().is_one());
        prop_assert!(r.v.det().unwrap().abs().is_one());
        for i in 0..r.s.nrows() {
            for j in 0..r.s.ncols() {
                if i != j {
                    prop_assert!(r.s.get(i, j).is_zero());
                }
            }
        }
        let d = r.diagonal();
        for w in d.windows(2) {
            if !w[0].is_zero() {
                prop_assert!((&w[1] % &w[0]).is_zero());
            } else {
                prop_assert!(w[1].is_zero());
            }
            prop_assert!(!w[0].is_negative());
        }
        prop_assert_eq!(r.rank(), a.rank_bareiss());
        prop_assert_eq!(invariant_factors(&a), d);
    }

    #[test]
    fn feasibility_matches_elimination_rank2(sys in system_strategy(2)) {
        let w = feasible(&sys);
        prop_assert_eq!(w.is_some(), fm_feasible(2, &to_rows(&sys)));
        if let Some(p) = &w {
            prop_assert!(sys.contains(p));
        }
        // grid scan: any integer point found forces feasibility
        'scan: for x in -50i64..=50 {
            for y in -50i64..=50 {
                if sys.contains(&[rat(x, 1), rat(y, 1)]) {
                    prop_assert!(w.is_some());
                    break 'scan;
                }
            }
        }
        if w.is_some() {
            prop_assert_eq!(is_bounded(&sys).unwrap(), fm_bounded(&sys));
        } else {
            prop_assert_eq!(is_bounded(&sys), Err(ExactError::EmptyRegion));
        }
    }

    #[test]
    fn feasibility_matches_elimination_rank3(sys in system_strategy(3)) {
        prop_assert_eq!(feasible(&sys).is_some(), fm_feasible(3, &to_rows(&sys)));
    }

    #[test]
    fn lattice_count_is_unimodular_invariant(sys in system_strategy(2), t in unimodular_strategy()) {
        let mut boxed = sys.clone();
        for i in 0..2 {
            let mut e = vec![Rat::zero(); 2];
            e[i] = Rat::one();
            boxed.ge(e.clone(), rat(-4, 1));
            boxed.le(e, rat(4, 1));
        }
        let pts = lattice_points(&boxed).unwrap();
        // brute force over the box
        let mut brute = 0;
        for x in -4i64..=4 {
            for y in -4i64..=4 {
                if boxed.contains(&[rat(x, 1), rat(y, 1)]) {
                    brute += 1;
                }
            }
        }
        prop_assert_eq!(pts.len(), brute);
        prop_assert_eq!(count_lattice_points(&boxed).unwrap(), brute as u64);
        let moved = boxed.change_coordinates(&t);
        prop_assert_eq!(lattice_points(&moved).unwrap().len(), pts.len());
    }

    #[test]
    fn counting_matches_enumeration_rank3(sys in system_strategy(3)) {
        let mut boxed = sys.clone();
        for i in 0..3 {
            let mut e = vec![Rat::zero(); 3];
            e[i] = Rat::one();
            boxed.ge(e.clone(), rat(-3, 1));
            boxed.lt(e, rat(3, 1));
        }
        prop_assert_eq!(count_lattice_points(&boxed).unwrap(), lattice_points(&boxed).unwrap().len() as u64);
    }

    #[test]
    fn extreme_rays_generate_the_same_cone(
        gens in prop::collection::vec(prop::collection::vec(0i64..=4, 3), 1..8)
    ) {
        let gens: Vec<IntVec> = gens.into_iter().map(|g| g.into_iter().map(Int::from).collect()).collect();
        let ext = extreme_rays(&gens).unwrap();
        for e in &ext {
            prop_assert!(gens.contains(e));
        }
        for g in &gens {
            prop_assert!(cone_contains(&ext, &rvec(g)));
        }
        // minimality: no output ray lies in the cone of the others
        for (i, e) in ext.iter().enumerate() {
            let others: Vec<IntVec> = ext.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, x)| x.clone()).collect();
            prop_assert!(!cone_contains(&others, &rvec(e)));
        }
    }
}

#[test]
fn solve_round_trip_on_random_consistent_systems() {
    // A x0 = b always has x0 among its solutions
    let a = IntMat::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]).to_rat();
    let x0 = vec![rat(1, 2), rat(-1, 1), rat(3, 1)];
    let b: Vec<Rat> = a.rows().iter().map(|r| r.iter().zip(&x0).map(|(p, q)| p * q).sum()).collect();
    let Solution::Solved { particular, kernel } = solve_rational(&a, &b).unwrap() else {
        panic!("consistent system reported inconsistent")
    };
    assert_eq!(kernel.len(), 1);
    let diff: Vec<Rat> = particular.iter().zip(&x0).map(|(p, q)| p - q).collect();
    // difference lies on the kernel line
    let k = &kernel[0];
    let t = diff.iter().zip(k).find(|(_, kk)| !kk.is_zero()).map(|(d, kk)| d / kk).unwrap();
    for (d, kk) in diff.iter().zip(k) {
        assert_eq!(d.clone(), kk * &t);
    }
}

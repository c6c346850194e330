//! Property tests for MMP runs on randomly subdivided fans. Each step is
//! re-checked from outside: pullback identities recomputed with a fresh map,
//! the flip reversed, and the common blow-up equation evaluated on random
//! rational divisors.

use divisors::{pullback, pushforward, TorusDivisor};
use exact_core::{int, is_zero_vec, primitive, rat, IntVec};
use fan::{check_map, properties, star_subdivide, validate, zoo, Fan, ToricMap};
use mmp::*;
use mori::{intersect, walls};
use num_traits::Signed;
use proptest::prelude::*;
use proptest::strategy::ValueTree;

fn base(k: usize) -> Fan {
    match k % 8 {
        0 => zoo::projective_space(2),
        1 => zoo::product(&zoo::projective_space(1), &zoo::projective_space(1)),
        2 => zoo::hirzebruch(2),
        3 => zoo::blown_up_plane(),
        4 => zoo::projective_space(3),
        5 => zoo::product(&zoo::projective_space(2), &zoo::projective_space(1)),
        6 => zoo::flip_side_a(2),
        _ => zoo::flip_side_a(1),
    }
}

fn fan_strategy() -> impl Strategy<Value = Fan> {
    (0usize..8, prop::collection::vec(prop::collection::vec(-2i64..=2, 3), 0..4)).prop_map(|(k, vs)| {
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

fn divisor(n: usize, raw: &[(i64, i64)]) -> TorusDivisor {
    TorusDivisor::new((0..n).map(|i| rat(raw[i % raw.len()].0, raw[i % raw.len()].1)).collect())
}

fn raw_strategy() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((-3i64..=3, 1i64..=2), 1..12)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn runs_are_well_formed(x in fan_strategy(), raw in raw_strategy()) {
        let d = divisor(x.rays().len(), &raw);
        let run = run_mmp(&x, &d, &TorusDivisor::zero(x.rays().len())).unwrap();
        let complete = properties(&x).unwrap().complete;
        prop_assert_eq!(run.models.len(), run.steps.len() + 1);
        for m in &run.models {
            prop_assert!(validate(m).is_ok());
            prop_assert!(m.is_simplicial());
            let p = properties(m).unwrap();
            prop_assert!(p.support_convex);
            prop_assert_eq!(p.complete, complete);
        }
        for (i, s) in run.steps.iter().enumerate() {
            prop_assert!(s.certificate.violations().is_empty());
            let (xn, xm) = (&run.models[i], &run.models[i + 1]);
            let (dn, dm) = (&run.divisors[i], &run.divisors[i + 1]);
            prop_assert!(intersect(xn, dn, &s.ray.walls[0]).unwrap().is_negative());
            match (&s.contraction.kind, &s.certificate) {
                (ContractionKind::Divisorial { removed }, StepCertificate::Divisorial { a }) => {
                    prop_assert_eq!(xm.rays().len() + 1, xn.rays().len());
                    let up = pullback(&ToricMap::identity(xn.clone(), xm.clone()), dm).unwrap();
                    let mut want = up.clone();
                    want.coeffs[*removed] += a.clone();
                    prop_assert_eq!(&want, dn);
                }
                (ContractionKind::Flipping, StepCertificate::Flip { .. }) => {
                    prop_assert_eq!(xm.rays(), xn.rays());
                    let dg = s.diagram.as_ref().unwrap();
                    // through the common blow-up and back down the other side
                    let there = pushforward(&dg.psi_prime, &pullback(&dg.psi, dn).unwrap()).unwrap();
                    prop_assert_eq!(&there, dm);
                    // the flipped curve has the opposite circuit relation
                    let opposite: IntVec = s.ray.direction.iter().map(|v| -v).collect();
                    let rays = mori::extremal_rays(xm).unwrap();
                    let r = rays.iter().find(|r| r.direction == opposite);
                    prop_assert!(r.is_some());
                    let back = flip(xm, r.unwrap(), &dn.scaled(&rat(-1, 1)));
                    prop_assert_eq!(&back.unwrap().0, xn);
                }
                other => prop_assert!(false, "mismatched step {:?}", other),
            }
        }
        match &run.end {
            MmpEnd::Nef => {
                let (xl, dl) = (run.models.last().unwrap(), run.divisors.last().unwrap());
                prop_assert!(walls(xl).unwrap().iter().all(|w| !intersect(xl, dl, w).unwrap().is_negative()));
            }
            MmpEnd::MoriFibreSpace(c) => {
                prop_assert!(c.is_fibration());
                prop_assert!(c.target.rank() < x.rank());
            }
        }
    }

    #[test]
    fn flip_diagrams_satisfy_the_blow_up_equation(x in fan_strategy(), raw in raw_strategy(), fs in prop::collection::vec(raw_strategy(), 5)) {
        let n = x.rays().len();
        let d = divisor(n, &raw);
        let run = run_mmp(&x, &d, &TorusDivisor::zero(n)).unwrap();
        for (i, s) in run.steps.iter().enumerate() {
            let Some(dg) = &s.diagram else { continue };
            let (xn, xm) = (&run.models[i], &run.models[i + 1]);
            prop_assert_eq!(dg.theta.rays().len(), xn.rays().len() + 1);
            prop_assert!(dg.theta.is_simplicial());
            prop_assert!(xn.ray_index(&dg.e_ray).is_none());
            for m in [&dg.psi, &dg.psi_prime] {
                let c = check_map(m);
                prop_assert!(c.proper && c.birational);
            }
            prop_assert_eq!(&dg.psi_prime.target, xm);
            let mut tests: Vec<TorusDivisor> = (0..xn.rays().len()).map(|r| TorusDivisor::prime(xn.rays().len(), r)).collect();
            tests.extend(fs.iter().map(|f| divisor(xn.rays().len(), f)));
            for f in &tests {
                let lhs = pullback(&dg.psi, f).unwrap();
                let mut rhs = pullback(&dg.psi_prime, f).unwrap();
                rhs.coeffs[dg.e_index] -= dg.kappa(f);
                prop_assert_eq!(lhs, rhs);
            }
            let sign = dg.kappa(&run.divisors[i]);
            prop_assert!(sign.is_negative());
        }
    }
}

#[test]
fn flips_show_up_in_generated_runs() {
    // guards against the property above passing vacuously
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let strat = (fan_strategy(), raw_strategy());
    let mut flips = 0;
    let mut divisorial = 0;
    for _ in 0..200 {
        let (x, raw) = strat.new_tree(&mut runner).unwrap().current();
        let run = run_mmp(&x, &divisor(x.rays().len(), &raw), &TorusDivisor::zero(x.rays().len())).unwrap();
        for s in &run.steps {
            match s.contraction.kind {
                ContractionKind::Flipping => flips += 1,
                ContractionKind::Divisorial { .. } => divisorial += 1,
                ContractionKind::Fibration => {}
            }
        }
    }
    assert!(flips > 5, "only {flips} flips");
    assert!(divisorial > 5, "only {divisorial} divisorial steps");
}

//! Seeded generation of instances satisfying the vanishing hypotheses.
//!
//! A fan is a seed fan refined by random star subdivisions. An ample `A` is
//! found by LP, rescaled and perturbed; then `D = ⌈K + A⌉` and `B = D − K − A`
//! give `B` with coefficients in `[0, 1)` and `D − (K + B) = A`.

use divisors::{canonical, cartier_data, klt_check, positivity, principal, Rounding, TorusDivisor};
use exact_core::{int, lcm_denominators, primitive, rat, rat_from_int, rvec, IneqSystem, IntVec, Rat};
use fan::{q_factorialize, star_subdivide, zoo, Fan};
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::instance::{ample_divisor, Instance, Mode, Witness};
use crate::KvError;

pub const MAX_CORPUS_RAYS: usize = 14;
/// Attempts per instance before it is skipped.
const BUDGET: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    pub instances: Vec<Instance>,
    /// One line per skipped slot.
    pub notes: Vec<String>,
}

/// Named seed fans of the given rank.
pub fn seed_fans(rank: usize) -> Vec<(&'static str, Fan)> {
    let p1 = zoo::projective_space(1);
    match rank {
        2 => vec![("P2", zoo::projective_space(2)), ("P1xP1", zoo::product(&p1, &p1)), ("P112", zoo::weighted_p112())],
        3 => vec![
            ("P3", zoo::projective_space(3)),
            ("P1xP2", zoo::product(&p1, &zoo::projective_space(2))),
            ("P1xP1xP1", zoo::product(&p1, &zoo::product(&p1, &p1))),
            ("P112xP1", zoo::product(&zoo::weighted_p112(), &p1)),
            ("cube-q", q_factorialize(&zoo::cube_faces()).0),
            ("cube", zoo::cube_faces()),
        ],
        _ => Vec::new(),
    }
}

fn stream(seed: u64, rank: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((rank as u64) << 32) | index as u64);
    rng
}

fn random_rat<R: Rng>(rng: &mut R, span: i64) -> Rat {
    let q = rng.gen_range(1..=5i64);
    rat(rng.gen_range(-span * q..=span * q), q)
}

/// Star-subdivides `x` at up to `extra` random primitive vectors of `[−2, 2]^rank`.
fn mutate<R: Rng>(rng: &mut R, mut x: Fan, extra: usize) -> Fan {
    let mut added = 0;
    let mut tries = 0;
    while added < extra && tries < 8 * extra {
        tries += 1;
        let v: IntVec = (0..x.rank()).map(|_| int(rng.gen_range(-2..=2))).collect();
        let Ok(v) = primitive(&v) else { continue };
        if x.ray_index(&v).is_some() {
            continue;
        }
        if let Ok((y, _)) = star_subdivide(&x, &v) {
            x = y;
            added += 1;
        }
    }
    x
}

/// A random ample divisor: a rescaled LP solution shifted by a character and
/// perturbed; the perturbation is halved until the result is ample.
/// Bound on `|D|` coefficients for the scaled non-simplicial fallback; larger
/// divisors make section counting slow without adding coverage.
const MAX_SCALED_COEFF: i64 = 8;

fn random_ample<R: Rng>(rng: &mut R, x: &Fan, base: &TorusDivisor) -> Option<TorusDivisor> {
    let top = base.coeffs.iter().map(|c| c.abs()).max().filter(|m| !m.is_zero())?;
    let scales = [rat(1, 3), rat(1, 2), rat(2, 3), rat(1, 1), rat(3, 2), rat(2, 1), rat(3, 1)];
    let s = &scales[rng.gen_range(0..scales.len())] / top;
    let m: Vec<Rat> = (0..x.rank()).map(|_| rat(rng.gen_range(-1..=1), 1)).collect();
    let a = base.scaled(&s).plus(&principal(x, &m));
    let mut delta = TorusDivisor::new((0..x.rays().len()).map(|_| random_rat(rng, 1) / rat(2, 1)).collect());
    for _ in 0..6 {
        let candidate = a.plus(&delta);
        if positivity(x, &candidate).map(|p| p.ample).unwrap_or(false) {
            return Some(candidate);
        }
        delta = delta.scaled(&rat(1, 2));
    }
    positivity(x, &a).ok().filter(|p| p.ample).map(|_| a)
}

/// `D = ⌈K + A⌉`, `B = D − K − A`, provided `D` is Q-Cartier.
pub fn instance_from_ample(label: String, x: &Fan, a: &TorusDivisor) -> Option<Instance> {
    let k = canonical(x);
    let d = k.plus(a).round(Rounding::Up);
    cartier_data(x, &d).ok()?;
    let b = d.minus(&k).minus(a);
    Some(Instance { label, x: x.clone(), b, d, mode: Mode::Hyp2, witness: Vec::new() })
}

/// Post-conditions every generated mode-2 instance must meet.
fn sound(inst: &Instance) -> bool {
    let a = inst.excess();
    inst.d.is_integral()
        && klt_check(&inst.x, &inst.b).ok
        && positivity(&inst.x, &a).map(|p| p.ample && p.big).unwrap_or(false)
}

fn generate_one(seed: u64, rank: usize, max_rays: usize, index: usize) -> Result<Instance, String> {
    let mut rng = stream(seed, rank, index);
    let seeds: Vec<(&str, Fan)> = seed_fans(rank).into_iter().filter(|(_, f)| f.rays().len() <= max_rays).collect();
    let mut last = String::from("no seed fan fits");
    for _ in 0..BUDGET {
        let Some((name, base)) = seeds.get(rng.gen_range(0..seeds.len().max(1))).cloned() else { break };
        let room = max_rays - base.rays().len();
        let extra = rng.gen_range(0..=room.min(6));
        let x = mutate(&mut rng, base, extra);
        let Some(a0) = ample_divisor(&x) else {
            last = format!("{name}: no ample divisor");
            continue;
        };
        let Some(a) = random_ample(&mut rng, &x, &a0) else {
            last = format!("{name}: perturbation never ample");
            continue;
        };
        let label = format!("r{rank}-s{seed}-{index:03}-{name}+{}", x.rays().len() - seed_ray_count(rank, name));
        let inst = instance_from_ample(label.clone(), &x, &a)
            .or_else(|| {
                // non-simplicial fans: an integral Cartier multiple of A keeps D Q-Cartier
                let l = cartier_data(&x, &a).ok()?.index() * lcm_denominators(&a.coeffs);
                instance_from_ample(label, &x, &a.scaled(&rat_from_int(&l)))
                    .filter(|i| i.d.coeffs.iter().all(|c| c.abs() <= rat(MAX_SCALED_COEFF, 1)))
            })
            .filter(sound);
        match inst {
            Some(i) => return Ok(i),
            None => last = format!("{name}: rounded divisor failed the post-conditions"),
        }
    }
    Err(last)
}

fn seed_ray_count(rank: usize, name: &str) -> usize {
    seed_fans(rank).into_iter().find(|(n, _)| *n == name).map(|(_, f)| f.rays().len()).unwrap_or(0)
}

/// `count` mode-2 instances of the given rank with at most `max_rays` rays.
/// Slots are generated independently from `(seed, rank, slot)`, so the output
/// does not depend on the number of worker threads.
pub fn gen_corpus(seed: u64, rank: usize, max_rays: usize, count: usize) -> Result<Corpus, KvError> {
    if !(2..=3).contains(&rank) {
        return Err(KvError::Input(format!("corpus rank must be 2 or 3, got {rank}")));
    }
    if max_rays > MAX_CORPUS_RAYS || max_rays <= rank {
        return Err(KvError::Input(format!("max_rays must lie in {}..={MAX_CORPUS_RAYS}, got {max_rays}", rank + 1)));
    }
    let slots: Vec<Result<Instance, String>> =
        (0..count).into_par_iter().map(|i| generate_one(seed, rank, max_rays, i)).collect();
    let mut corpus = Corpus { instances: Vec::new(), notes: Vec::new() };
    for (i, s) in slots.into_iter().enumerate() {
        match s {
            Ok(inst) => corpus.instances.push(inst),
            Err(why) => corpus.notes.push(format!("slot {i} skipped: {why}")),
        }
    }
    Ok(corpus)
}

/// Mode-1 version of a mode-2 instance: the boundary `B + A + div(μ)` with a
/// rational character `μ` chosen by LP so that every coefficient lies in
/// `[0, 1)`. Then `D − K − B' = −div(μ)` exactly. `None` when no such `μ`
/// exists or the new boundary is not big.
pub fn hyp1_variant(inst: &Instance) -> Option<Instance> {
    let x = &inst.x;
    let c = inst.d.minus(&canonical(x));
    let mut sys = IneqSystem::new(x.rank());
    for (u, ci) in x.rays().iter().zip(&c.coeffs) {
        sys.ge(rvec(u), -ci.clone());
        sys.lt(rvec(u), Rat::one() - ci);
    }
    let mu = exact_core::feasible(&sys)?;
    let l = lcm_denominators(&mu);
    let m: IntVec = mu.iter().map(|v| (v * rat_from_int(&l)).to_integer()).collect();
    let b = c.plus(&principal(x, &mu));
    if !positivity(x, &b).ok()?.big {
        return None;
    }
    let witness =
        if m.iter().all(|v| v.is_zero()) { Vec::new() } else { vec![Witness { q: -Rat::one() / rat_from_int(&l), m }] };
    Some(Instance {
        label: format!("{}/hyp1", inst.label),
        x: x.clone(),
        b,
        d: inst.d.clone(),
        mode: Mode::Hyp1,
        witness,
    })
}

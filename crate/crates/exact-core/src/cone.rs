//! Cones given by generators: membership, pointedness, extreme rays.

use num_traits::{One, Zero};

use crate::arith::{primitive, rat_from_int, IntVec, Rat};
use crate::matrix::{solve_rational, RatMat, Solution};
use crate::polyhedron::{feasible, IneqSystem};
use crate::ExactError;

/// Whether `v` lies in the cone generated by `gens` (all of length `v.len()`).
pub fn cone_contains(gens: &[IntVec], v: &[Rat]) -> bool {
    cone_coefficients(gens, v).is_some()
}

/// Nonnegative `λ` with `Σ λ_i g_i = v`, if any.
pub fn cone_coefficients(gens: &[IntVec], v: &[Rat]) -> Option<Vec<Rat>> {
    let d = v.len();
    if gens.is_empty() {
        return v.iter().all(Zero::is_zero).then(Vec::new);
    }
    // columns are generators
    let rows: Vec<Vec<Rat>> = (0..d).map(|i| gens.iter().map(|g| rat_from_int(&g[i])).collect()).collect();
    let a = RatMat::from_rows(gens.len(), rows).expect("generators share one length");
    match solve_rational(&a, v).expect("shapes agree") {
        Solution::Inconsistent => return None,
        Solution::Solved { particular, kernel } if kernel.is_empty() => {
            return particular.iter().all(|x| *x >= Rat::zero()).then_some(particular);
        }
        Solution::Solved { .. } => {}
    }
    let k = gens.len();
    let mut sys = IneqSystem::new(k);
    for i in 0..k {
        let mut e = vec![Rat::zero(); k];
        e[i] = Rat::one();
        sys.ge(e, Rat::zero());
    }
    for (i, row) in a.rows().iter().enumerate() {
        sys.equal(row.clone(), v[i].clone());
    }
    feasible(&sys)
}

/// Whether the cone contains no line (a nonzero generator combination summing to zero).
pub fn is_pointed(gens: &[IntVec]) -> bool {
    let gens: Vec<&IntVec> = gens.iter().filter(|g| g.iter().any(|x| !x.is_zero())).collect();
    if gens.is_empty() {
        return true;
    }
    let d = gens[0].len();
    let k = gens.len();
    let mut sys = IneqSystem::new(k);
    for i in 0..k {
        let mut e = vec![Rat::zero(); k];
        e[i] = Rat::one();
        sys.ge(e, Rat::zero());
    }
    sys.ge(vec![Rat::one(); k], Rat::one());
    for i in 0..d {
        sys.equal(gens.iter().map(|g| rat_from_int(&g[i])).collect(), Rat::zero());
    }
    feasible(&sys).is_none()
}

/// The generators that span extreme rays, in input order, one per ray.
///
/// Zero vectors and later positive multiples of an earlier generator are dropped.
pub fn extreme_rays(gens: &[IntVec]) -> Result<Vec<IntVec>, ExactError> {
    if let Some(g) = gens.first() {
        if gens.iter().any(|h| h.len() != g.len()) {
            return Err(ExactError::DimensionMismatch("generators of different lengths".into()));
        }
    }
    if !is_pointed(gens) {
        return Err(ExactError::NotStronglyConvex);
    }
    let mut seen: Vec<IntVec> = Vec::new();
    let mut distinct: Vec<(IntVec, IntVec)> = Vec::new();
    for g in gens {
        let Ok(p) = primitive(g) else { continue };
        if !seen.contains(&p) {
            seen.push(p.clone());
            distinct.push((g.clone(), p));
        }
    }
    let mut out = Vec::new();
    for (i, (g, p)) in distinct.iter().enumerate() {
        let others: Vec<IntVec> =
            distinct.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, (_, q))| q.clone()).collect();
        let target: Vec<Rat> = p.iter().map(rat_from_int).collect();
        if !cone_contains(&others, &target) {
            out.push(g.clone());
        }
    }
    Ok(out)
}

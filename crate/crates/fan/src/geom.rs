//! Cone-level geometry shared by the fan operations.

use exact_core::{feasible, rat_from_int, smith_normal_form, IneqSystem, Int, IntMat, IntVec, Rat, RatMat};
use num_traits::{One, Signed, Zero};

pub fn ray_matrix(vectors: &[IntVec], ncols: usize) -> IntMat {
    IntMat::from_rows(ncols, vectors.to_vec()).expect("vectors share the ambient rank")
}

pub fn rank_of(vectors: &[IntVec]) -> usize {
    match vectors.first() {
        None => 0,
        Some(v) => ray_matrix(vectors, v.len()).rank_bareiss(),
    }
}

/// A facet of a cone: the generators on it and an ambient covector that is
/// zero on the facet and nonnegative on the cone (positive off the facet).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub members: Vec<usize>,
    pub normal: Vec<Rat>,
}

/// Facets of the cone generated by `gens` (assumed to be its extreme rays),
/// computed inside the linear span of the cone.
pub fn cone_facets(gens: &[IntVec], rank: usize) -> Vec<Facet> {
    if gens.is_empty() {
        return Vec::new();
    }
    let m = ray_matrix(gens, rank);
    let snf = smith_normal_form(&m);
    let d = snf.rank();
    if d == 0 {
        return Vec::new();
    }
    // span coordinates: y(x) = (x V)[..d]
    let v = snf.v.to_rat();
    let to_span = |g: &IntVec| -> Vec<Rat> {
        (0..d).map(|j| (0..rank).fold(Rat::zero(), |acc, i| acc + rat_from_int(&g[i]) * &v.rows()[i][j])).collect()
    };
    let lift = |n: &[Rat]| -> Vec<Rat> {
        (0..rank).map(|i| (0..d).fold(Rat::zero(), |acc, j| acc + &v.rows()[i][j] * &n[j])).collect()
    };
    let ys: Vec<Vec<Rat>> = gens.iter().map(to_span).collect();
    let mut out: Vec<Facet> = Vec::new();
    if d == 1 {
        let sign = if ys[0][0].is_positive() { Rat::one() } else { -Rat::one() };
        out.push(Facet { members: Vec::new(), normal: lift(&[sign]) });
        return out;
    }
    for combo in combinations(gens.len(), d - 1) {
        let rows: Vec<Vec<Rat>> = combo.iter().map(|&i| ys[i].clone()).collect();
        let a = RatMat::from_rows(d, rows).expect("span coordinates");
        let ker = a.kernel();
        if ker.len() != 1 {
            continue;
        }
        let n = &ker[0];
        let vals: Vec<Rat> = ys.iter().map(|y| exact_core::arith::dot_rat(n, y)).collect();
        let pos = vals.iter().any(|x| x.is_positive());
        let neg = vals.iter().any(|x| x.is_negative());
        if pos && neg {
            continue;
        }
        let n: Vec<Rat> = if neg { n.iter().map(|x| -x.clone()).collect() } else { n.clone() };
        let members: Vec<usize> = (0..gens.len()).filter(|&i| vals[i].is_zero()).collect();
        if out.iter().any(|f| f.members == members) {
            continue;
        }
        out.push(Facet { members, normal: lift(&n) });
    }
    out.sort_by(|a, b| a.members.cmp(&b.members));
    out
}

/// k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// Some `m` with `⟨m, u⟩ > 0` for every generator.
pub fn strongly_convex(gens: &[IntVec], rank: usize) -> bool {
    let mut sys = IneqSystem::new(rank);
    for g in gens {
        sys.gt(exact_core::rvec(g), Rat::zero());
    }
    feasible(&sys).is_some()
}

/// Some `m` vanishing on `common`, positive on `left`, negative on `right`.
/// For two cones this certifies that they meet exactly in `cone(common)`,
/// a face of both.
pub fn separated(common: &[IntVec], left: &[IntVec], right: &[IntVec], rank: usize) -> bool {
    let mut sys = IneqSystem::new(rank);
    for g in common {
        sys.equal(exact_core::rvec(g), Rat::zero());
    }
    for g in left {
        sys.gt(exact_core::rvec(g), Rat::zero());
    }
    for g in right {
        sys.lt(exact_core::rvec(g), Rat::zero());
    }
    feasible(&sys).is_some()
}

/// Solves `⟨m, u_i⟩ = values[i]` for the generators of one cone. On a cone that
/// does not span `M_R` the solution is completed by zero on the canonical
/// complement coming from the Smith form of the generator matrix, so an integral
/// solution is returned whenever one exists. `None` when inconsistent.
pub fn cone_covector(gens: &[IntVec], values: &[Rat], rank: usize) -> Option<Vec<Rat>> {
    assert_eq!(gens.len(), values.len());
    if gens.is_empty() {
        return Some(vec![Rat::zero(); rank]);
    }
    let r = ray_matrix(gens, rank);
    let snf = smith_normal_form(&r);
    let k = gens.len();
    // R m = b with m = V y:  S y = U b
    let ub: Vec<Rat> =
        (0..k).map(|i| (0..k).fold(Rat::zero(), |acc, j| acc + rat_from_int(snf.u.get(i, j)) * &values[j])).collect();
    let diag = snf.diagonal();
    let mut y = vec![Rat::zero(); rank];
    for i in 0..k {
        let d = diag.get(i).cloned().unwrap_or_else(Int::zero);
        if d.is_zero() {
            if !ub[i].is_zero() {
                return None;
            }
        } else {
            y[i] = &ub[i] / rat_from_int(&d);
        }
    }
    Some((0..rank).map(|i| (0..rank).fold(Rat::zero(), |acc, j| acc + rat_from_int(snf.v.get(i, j)) * &y[j])).collect())
}

/// Lattice multiplicity of a cone: the index of the sublattice spanned by its
/// generators inside its saturation (product of the nonzero invariant factors).
pub fn multiplicity(gens: &[IntVec], rank: usize) -> Int {
    if gens.is_empty() {
        return Int::one();
    }
    exact_core::invariant_factors(&ray_matrix(gens, rank))
        .into_iter()
        .filter(|d| !d.is_zero())
        .fold(Int::one(), |a, d| a * d)
}

/// A codimension-one face of the full-dimensional part of a fan, with the
/// full-dimensional maximal cones it bounds. `normal` is nonnegative on the
/// first of those cones.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FacetIncidence {
    pub rays: Vec<usize>,
    pub cones: Vec<usize>,
    pub normal: Vec<Rat>,
}

/// Facets of every full-dimensional maximal cone, grouped by ray set and
/// sorted by it.
pub fn facet_incidence(f: &crate::Fan) -> Vec<FacetIncidence> {
    let mut map: std::collections::BTreeMap<Vec<usize>, FacetIncidence> = std::collections::BTreeMap::new();
    for (k, c) in f.max_cones().iter().enumerate() {
        let gens = f.cone_rays(c);
        if rank_of(&gens) != f.rank() {
            continue;
        }
        for facet in cone_facets(&gens, f.rank()) {
            let rays: Vec<usize> = facet.members.iter().map(|&i| c[i]).collect();
            map.entry(rays.clone()).and_modify(|e| e.cones.push(k)).or_insert(FacetIncidence {
                rays,
                cones: vec![k],
                normal: facet.normal,
            });
        }
    }
    map.into_values().collect()
}

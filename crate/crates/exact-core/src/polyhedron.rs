//! Systems of strict and weak linear inequalities over Q.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use crate::arith::{ceil, floor, lcm_denominators, rat_from_int, Int, IntVec, Rat};
use crate::simplex::{self, Lp};
use crate::ExactError;

/// `⟨coeffs, x⟩ > constant` when `strict`, else `⟨coeffs, x⟩ ≥ constant`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Ineq {
    pub coeffs: Vec<Rat>,
    pub constant: Rat,
    pub strict: bool,
}

impl Ineq {
    pub fn holds_at(&self, x: &[Rat]) -> bool {
        let v = crate::arith::dot_rat(&self.coeffs, x);
        if self.strict {
            v > self.constant
        } else {
            v >= self.constant
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IneqSystem {
    dim: usize,
    rows: Vec<Ineq>,
}

impl IneqSystem {
    pub fn new(dim: usize) -> Self {
        IneqSystem { dim, rows: Vec::new() }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Ineq] {
        &self.rows
    }

    pub fn push(&mut self, row: Ineq) -> &mut Self {
        assert_eq!(row.coeffs.len(), self.dim, "inequality has the wrong ambient rank");
        self.rows.push(row);
        self
    }

    pub fn ge(&mut self, coeffs: Vec<Rat>, constant: Rat) -> &mut Self {
        self.push(Ineq { coeffs, constant, strict: false })
    }

    pub fn gt(&mut self, coeffs: Vec<Rat>, constant: Rat) -> &mut Self {
        self.push(Ineq { coeffs, constant, strict: true })
    }

    pub fn le(&mut self, coeffs: Vec<Rat>, constant: Rat) -> &mut Self {
        self.ge(negate(&coeffs), -constant)
    }

    pub fn lt(&mut self, coeffs: Vec<Rat>, constant: Rat) -> &mut Self {
        self.gt(negate(&coeffs), -constant)
    }

    pub fn equal(&mut self, coeffs: Vec<Rat>, constant: Rat) -> &mut Self {
        self.ge(coeffs.clone(), constant.clone());
        self.le(coeffs, constant)
    }

    pub fn contains(&self, x: &[Rat]) -> bool {
        self.rows.iter().all(|r| r.holds_at(x))
    }

    pub fn has_strict(&self) -> bool {
        self.rows.iter().any(|r| r.strict)
    }

    /// Same rows with strictness dropped.
    pub fn closure(&self) -> IneqSystem {
        IneqSystem { dim: self.dim, rows: self.rows.iter().map(|r| Ineq { strict: false, ..r.clone() }).collect() }
    }

    /// The homogeneous weak system `{⟨a_i, y⟩ ≥ 0}`.
    pub fn recession(&self) -> IneqSystem {
        IneqSystem {
            dim: self.dim,
            rows: self
                .rows
                .iter()
                .map(|r| Ineq { coeffs: r.coeffs.clone(), constant: Rat::zero(), strict: false })
                .collect(),
        }
    }

    /// Fixes coordinate 0 to `value`, dropping it from the ambient space.
    pub fn substitute_first(&self, value: &Rat) -> IneqSystem {
        assert!(self.dim > 0);
        IneqSystem {
            dim: self.dim - 1,
            rows: self
                .rows
                .iter()
                .map(|r| Ineq {
                    coeffs: r.coeffs[1..].to_vec(),
                    constant: &r.constant - &r.coeffs[0] * value,
                    strict: r.strict,
                })
                .collect(),
        }
    }

    /// Rewrites the system in coordinates `x = T y`.
    pub fn change_coordinates(&self, t: &crate::matrix::IntMat) -> IneqSystem {
        assert_eq!(t.nrows(), self.dim);
        let tr = t.to_rat();
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let coeffs = (0..t.ncols())
                    .map(|j| (0..self.dim).fold(Rat::zero(), |acc, i| acc + &r.coeffs[i] * &tr.rows()[i][j]))
                    .collect();
                Ineq { coeffs, constant: r.constant.clone(), strict: r.strict }
            })
            .collect();
        IneqSystem { dim: t.ncols(), rows }
    }
}

fn negate(v: &[Rat]) -> Vec<Rat> {
    v.iter().map(|x| -x.clone()).collect()
}

/// Scales every row to a primitive integral covector, drops dominated duplicates,
/// and decides rows with a zero covector. `None` means a trivially false row.
fn normalize(sys: &IneqSystem) -> Option<Vec<(Vec<Rat>, Rat, bool)>> {
    let mut best: BTreeMap<Vec<Int>, (Rat, bool)> = BTreeMap::new();
    for r in &sys.rows {
        if r.coeffs.iter().all(Zero::is_zero) {
            let ok = if r.strict { r.constant.is_negative() } else { !r.constant.is_positive() };
            if !ok {
                return None;
            }
            continue;
        }
        let l = rat_from_int(&lcm_denominators(&r.coeffs));
        let ints: Vec<Int> = r.coeffs.iter().map(|x| (x * &l).to_integer()).collect();
        let g = rat_from_int(&crate::arith::gcd_all(&ints));
        let scale = &l / &g;
        let key: Vec<Int> = ints.iter().map(|x| (rat_from_int(x) / &g).to_integer()).collect();
        let c = &r.constant * &scale;
        match best.get_mut(&key) {
            None => {
                best.insert(key, (c, r.strict));
            }
            Some(e) => {
                if c > e.0 || (c == e.0 && r.strict) {
                    *e = (c, r.strict);
                }
            }
        }
    }
    Some(best.into_iter().map(|(k, (c, s))| (k.iter().map(rat_from_int).collect(), c, s)).collect())
}

/// A rational point satisfying every row, or `None` if the system is infeasible.
///
/// Strict rows are handled by lifting: maximise `t ≤ 1` subject to
/// `⟨a, x⟩ − t ≥ c` on strict rows; the strict system is feasible iff `t* > 0`.
pub fn feasible(sys: &IneqSystem) -> Option<Vec<Rat>> {
    let rows = normalize(sys)?;
    let n = sys.dim;
    if rows.is_empty() {
        return Some(vec![Rat::zero(); n]);
    }
    // cheap probe: the origin
    let origin_ok = rows.iter().all(|(_, c, s)| if *s { c.is_negative() } else { !c.is_positive() });
    if origin_ok {
        return Some(vec![Rat::zero(); n]);
    }
    if !rows.iter().any(|r| r.2) {
        let lp_rows: Vec<(Vec<Rat>, Rat)> = rows.into_iter().map(|(a, c, _)| (a, c)).collect();
        return match simplex::maximize(n, &lp_rows, &vec![Rat::zero(); n]) {
            Lp::Optimal { point, .. } => Some(point),
            Lp::Infeasible => None,
            Lp::Unbounded => unreachable!("zero objective is bounded"),
        };
    }
    let mut lp_rows: Vec<(Vec<Rat>, Rat)> = rows
        .into_iter()
        .map(|(mut a, c, s)| {
            a.push(if s { -Rat::one() } else { Rat::zero() });
            (a, c)
        })
        .collect();
    let mut cap = vec![Rat::zero(); n + 1];
    cap[n] = -Rat::one();
    lp_rows.push((cap, -Rat::one()));
    let mut obj = vec![Rat::zero(); n + 1];
    obj[n] = Rat::one();
    match simplex::maximize(n + 1, &lp_rows, &obj) {
        Lp::Optimal { mut point, value } if value.is_positive() => {
            point.truncate(n);
            debug_assert!(sys.contains(&point));
            Some(point)
        }
        Lp::Optimal { .. } | Lp::Infeasible => None,
        Lp::Unbounded => unreachable!("t is capped"),
    }
}

/// Outcome of [`maximize`] over the weak closure of a system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Optimum {
    Infeasible,
    Unbounded,
    Attained { value: Rat, point: Vec<Rat> },
}

/// Maximises `obj · x` over the closure (strictness ignored).
pub fn maximize(sys: &IneqSystem, obj: &[Rat]) -> Optimum {
    assert_eq!(obj.len(), sys.dim);
    let Some(rows) = normalize(&sys.closure()) else { return Optimum::Infeasible };
    let lp_rows: Vec<(Vec<Rat>, Rat)> = rows.into_iter().map(|(a, c, _)| (a, c)).collect();
    match simplex::maximize(sys.dim, &lp_rows, obj) {
        Lp::Infeasible => Optimum::Infeasible,
        Lp::Unbounded => Optimum::Unbounded,
        Lp::Optimal { point, value } => Optimum::Attained { value, point },
    }
}

/// Whether the closure of a nonempty region is bounded.
pub fn is_bounded(sys: &IneqSystem) -> Result<bool, ExactError> {
    if feasible(sys).is_none() {
        return Err(ExactError::EmptyRegion);
    }
    Ok(recession_is_trivial(sys))
}

/// `{y : ⟨a_i, y⟩ ≥ 0 ∀i} = {0}`.
pub fn recession_is_trivial(sys: &IneqSystem) -> bool {
    let rec = sys.recession();
    for i in 0..sys.dim {
        for sign in [1i64, -1] {
            let mut probe = rec.clone();
            let mut e = vec![Rat::zero(); sys.dim];
            e[i] = Rat::from_integer(Int::from(sign));
            probe.ge(e, Rat::one());
            if feasible(&probe).is_some() {
                return false;
            }
        }
    }
    true
}

/// Whether the region contains an integer point. The region may be unbounded.
///
/// Let `W` be the span of the recession cone. The projection of the region to
/// `Q^n / W` is bounded, and every nonempty fibre contains a translate of a
/// cone that is full-dimensional in `W`, hence an integer point of `W`'s
/// saturated lattice. So only the quotient coordinates need an integer search.
pub fn has_lattice_point(sys: &IneqSystem) -> Result<bool, ExactError> {
    if feasible(sys).is_none() {
        return Ok(false);
    }
    let rec = sys.recession();
    let mut eqs: Vec<Vec<Int>> = Vec::new();
    for r in rec.rows() {
        let mut probe = rec.clone();
        probe.gt(r.coeffs.clone(), Rat::zero());
        if feasible(&probe).is_none() {
            let l = rat_from_int(&lcm_denominators(&r.coeffs));
            eqs.push(r.coeffs.iter().map(|x| (x * &l).to_integer()).collect());
        }
    }
    if eqs.is_empty() {
        return Ok(true);
    }
    let snf = crate::snf::smith_normal_form(&crate::matrix::IntMat::from_rows(sys.dim, eqs)?);
    let moved = sys.change_coordinates(&snf.v);
    Ok(mixed_integer_point(&moved, snf.rank())?.is_some())
}

/// Bounds of coordinate 0 over the closure, or `None` if the closure is empty.
fn first_coordinate_range(sys: &IneqSystem) -> Result<Option<(Rat, Rat)>, ExactError> {
    let mut e = vec![Rat::zero(); sys.dim];
    e[0] = Rat::one();
    let hi = match maximize(sys, &e) {
        Optimum::Infeasible => return Ok(None),
        Optimum::Unbounded => return Err(ExactError::Unbounded),
        Optimum::Attained { value, .. } => value,
    };
    e[0] = -Rat::one();
    let lo = match maximize(sys, &e) {
        Optimum::Infeasible => return Ok(None),
        Optimum::Unbounded => return Err(ExactError::Unbounded),
        Optimum::Attained { value, .. } => -value,
    };
    Ok(Some((lo, hi)))
}

/// Every integer point of a bounded region, lexicographically ordered.
pub fn lattice_points(sys: &IneqSystem) -> Result<Vec<IntVec>, ExactError> {
    if feasible(sys).is_none() {
        return Ok(Vec::new());
    }
    if !recession_is_trivial(sys) {
        return Err(ExactError::Unbounded);
    }
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    enumerate(sys, &mut prefix, &mut out)?;
    Ok(out)
}

/// Number of integer points of a bounded region. Fibres over the last
/// coordinate are counted in closed form, so nothing is materialised.
pub fn count_lattice_points(sys: &IneqSystem) -> Result<u64, ExactError> {
    if feasible(sys).is_none() {
        return Ok(0);
    }
    if !recession_is_trivial(sys) {
        return Err(ExactError::Unbounded);
    }
    count(sys)
}

fn count(sys: &IneqSystem) -> Result<u64, ExactError> {
    match sys.dim {
        0 => Ok(u64::from(sys.contains(&[]))),
        1 => Ok(integers_on_line(sys)),
        _ => {
            let Some((lo, hi)) = first_coordinate_range(sys)? else { return Ok(0) };
            let (mut k, hi) = (ceil(&lo), floor(&hi));
            let mut total = 0u64;
            while k <= hi {
                total += count(&sys.substitute_first(&rat_from_int(&k)))?;
                k += 1;
            }
            Ok(total)
        }
    }
}

/// Integers satisfying a bounded one-variable system.
fn integers_on_line(sys: &IneqSystem) -> u64 {
    let (mut lo, mut hi): (Option<Int>, Option<Int>) = (None, None);
    for r in &sys.rows {
        let c = &r.coeffs[0];
        if c.is_zero() {
            let ok = if r.strict { r.constant.is_negative() } else { !r.constant.is_positive() };
            if !ok {
                return 0;
            }
            continue;
        }
        let t = &r.constant / c;
        if c.is_positive() {
            let b = if r.strict { floor(&t) + 1 } else { ceil(&t) };
            lo = Some(lo.map_or(b.clone(), |l| l.max(b)));
        } else {
            let b = if r.strict { ceil(&t) - 1 } else { floor(&t) };
            hi = Some(hi.map_or(b.clone(), |h| h.min(b)));
        }
    }
    let (Some(lo), Some(hi)) = (lo, hi) else { unreachable!("a bounded line system has both bounds") };
    if hi < lo {
        0
    } else {
        u64::try_from(hi - lo + 1).expect("count fits in u64")
    }
}

fn enumerate(sys: &IneqSystem, prefix: &mut Vec<Int>, out: &mut Vec<IntVec>) -> Result<(), ExactError> {
    if sys.dim == 0 {
        if sys.contains(&[]) {
            out.push(prefix.clone());
        }
        return Ok(());
    }
    let Some((lo, hi)) = first_coordinate_range(sys)? else { return Ok(()) };
    let (lo, hi) = (ceil(&lo), floor(&hi));
    let mut k = lo;
    while k <= hi {
        let slice = sys.substitute_first(&rat_from_int(&k));
        prefix.push(k.clone());
        enumerate(&slice, prefix, out)?;
        prefix.pop();
        k += 1;
    }
    Ok(())
}

/// A point of the region whose first `k` coordinates are integers.
///
/// Requires the projection onto those coordinates to be bounded; the remaining
/// coordinates are only required to be rational.
pub fn mixed_integer_point(sys: &IneqSystem, k: usize) -> Result<Option<Vec<Rat>>, ExactError> {
    assert!(k <= sys.dim);
    if k == 0 {
        return Ok(feasible(sys));
    }
    let Some((lo, hi)) = first_coordinate_range(sys)? else { return Ok(None) };
    let (lo, hi) = (ceil(&lo), floor(&hi));
    let mut v = lo;
    while v <= hi {
        let value = rat_from_int(&v);
        if let Some(mut rest) = mixed_integer_point(&sys.substitute_first(&value), k - 1)? {
            rest.insert(0, value);
            return Ok(Some(rest));
        }
        v += 1;
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{ivec, rat};

    fn r(v: &[i64]) -> Vec<Rat> {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn open_interval() {
        let mut s = IneqSystem::new(1);
        s.gt(r(&[1]), rat(0, 1)).lt(r(&[1]), rat(1, 1));
        let w = feasible(&s).unwrap();
        assert!(s.contains(&w));
        assert!(w[0] > rat(0, 1) && w[0] < rat(1, 1));
    }

    #[test]
    fn contradictory_pair() {
        let mut s = IneqSystem::new(1);
        s.ge(r(&[1]), rat(0, 1)).ge(r(&[-1]), rat(1, 1));
        assert_eq!(feasible(&s), None);
        assert_eq!(is_bounded(&s), Err(ExactError::EmptyRegion));
    }

    #[test]
    fn lattice_points_of_unbounded_regions() {
        // a strip 1/3 ≤ 3x − 3y ≤ 2/3 running along (1,1) has no integer point
        let mut s = IneqSystem::new(2);
        s.ge(r(&[3, -3]), rat(1, 1)).le(r(&[3, -3]), rat(2, 1));
        assert!(feasible(&s).is_some());
        assert!(!has_lattice_point(&s).unwrap());
        let mut t = IneqSystem::new(2);
        t.ge(r(&[3, -3]), rat(1, 1)).le(r(&[3, -3]), rat(3, 1));
        assert!(has_lattice_point(&t).unwrap());
        // a full-dimensional recession cone always reaches the lattice
        let mut q = IneqSystem::new(2);
        q.gt(r(&[2, 1]), rat(7, 3)).gt(r(&[1, 2]), rat(1, 2));
        assert!(has_lattice_point(&q).unwrap());
        // bounded regions fall back to plain enumeration
        let mut b = IneqSystem::new(1);
        b.gt(r(&[1]), rat(0, 1)).lt(r(&[1]), rat(1, 1));
        assert!(!has_lattice_point(&b).unwrap());
    }

    fn p2_k_chamber() -> IneqSystem {
        let mut s = IneqSystem::new(2);
        for u in [[1, 0], [0, 1], [-1, -1]] {
            s.lt(r(&u), rat(1, 1));
        }
        s
    }

    #[test]
    fn canonical_chamber_of_the_plane() {
        let s = p2_k_chamber();
        assert_eq!(feasible(&s), Some(r(&[0, 0])));
        assert_eq!(is_bounded(&s), Ok(true));
        assert_eq!(lattice_points(&s).unwrap(), vec![ivec(&[0, 0])]);
    }

    #[test]
    fn boundedness() {
        let mut sq = IneqSystem::new(2);
        sq.ge(r(&[1, 0]), rat(0, 1)).le(r(&[1, 0]), rat(1, 1));
        sq.ge(r(&[0, 1]), rat(0, 1)).le(r(&[0, 1]), rat(1, 1));
        assert_eq!(is_bounded(&sq), Ok(true));
        let mut half = IneqSystem::new(2);
        half.ge(r(&[1, 0]), rat(0, 1));
        assert_eq!(is_bounded(&half), Ok(false));
        assert_eq!(lattice_points(&half), Err(ExactError::Unbounded));
    }

    #[test]
    fn anticanonical_triangle_has_ten_points() {
        let mut s = IneqSystem::new(2);
        s.ge(r(&[1, 0]), rat(-1, 1)).ge(r(&[0, 1]), rat(-1, 1)).ge(r(&[-1, -1]), rat(-1, 1));
        let pts = lattice_points(&s).unwrap();
        assert_eq!(pts.len(), 10);
        let mut sorted = pts.clone();
        sorted.sort();
        assert_eq!(pts, sorted);
    }

    #[test]
    fn degenerate_regions() {
        let mut empty = IneqSystem::new(2);
        empty.gt(r(&[1, 0]), rat(0, 1)).gt(r(&[-1, 0]), rat(0, 1));
        assert_eq!(lattice_points(&empty).unwrap(), Vec::<IntVec>::new());
        let mut pt = IneqSystem::new(1);
        pt.ge(r(&[1]), rat(0, 1)).ge(r(&[-1]), rat(0, 1));
        assert_eq!(lattice_points(&pt).unwrap(), vec![ivec(&[0])]);
    }

    #[test]
    fn mixed_integer_search() {
        // 1/3 < x < 2/3 has no integer but plenty of rationals
        let mut s = IneqSystem::new(2);
        s.gt(r(&[3, 0]), rat(1, 1)).lt(r(&[3, 0]), rat(2, 1)).ge(r(&[0, 1]), rat(0, 1));
        assert_eq!(mixed_integer_point(&s, 1).unwrap(), None);
        let mut t = IneqSystem::new(2);
        t.ge(r(&[1, 0]), rat(1, 2)).le(r(&[1, 0]), rat(3, 2)).ge(r(&[0, 2]), rat(1, 1));
        let p = mixed_integer_point(&t, 1).unwrap().unwrap();
        assert_eq!(p[0], rat(1, 1));
    }

    #[test]
    fn lifting_handles_equalities_and_strict_rows() {
        let mut s = IneqSystem::new(2);
        s.equal(r(&[1, 1]), rat(1, 1)).gt(r(&[1, 0]), rat(0, 1)).gt(r(&[0, 1]), rat(0, 1));
        let w = feasible(&s).unwrap();
        assert!(s.contains(&w));
        let mut t = IneqSystem::new(2);
        t.equal(r(&[1, 1]), rat(0, 1)).gt(r(&[1, 0]), rat(0, 1)).gt(r(&[0, 1]), rat(0, 1));
        assert_eq!(feasible(&t), None);
    }
}

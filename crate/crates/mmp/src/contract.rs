use std::collections::BTreeSet;

use exact_core::{extreme_rays, primitive, smith_normal_form, IntMat, IntVec};
use fan::geom::{ray_matrix, strongly_convex};
use fan::{fmt_vec, validate, Fan, ToricMap};
use mori::{extremal_rays, ExtremalRay};

use crate::MmpError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ContractionKind {
    /// Index of the removed ray in the source fan.
    Divisorial {
        removed: usize,
    },
    Flipping,
    /// The target lives in the quotient of `N` by the lineality of the merged cones.
    Fibration,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContractionResult {
    pub target: Fan,
    pub kind: ContractionKind,
    pub map: ToricMap,
    /// Source maximal cones merged into one target cone, groups of size at least two.
    pub groups: Vec<Vec<usize>>,
}

impl ContractionResult {
    pub fn is_fibration(&self) -> bool {
        self.kind == ContractionKind::Fibration
    }
}

/// Contracts `r` by merging the maximal cones on either side of every wall of `r`.
pub fn contract(x: &Fan, r: &ExtremalRay) -> Result<ContractionResult, MmpError> {
    if !extremal_rays(x)?.iter().any(|e| e.direction == r.direction) {
        return Err(MmpError::NotExtremal(fmt_vec(&r.direction)));
    }
    let groups = merge_groups(x, r);
    let merged: Vec<BTreeSet<usize>> =
        groups.iter().map(|g| g.iter().flat_map(|&k| x.max_cones()[k].iter().copied()).collect()).collect();

    if merged.iter().any(|m| !strongly_convex(&x.cone_rays(&m.iter().copied().collect::<Vec<_>>()), x.rank())) {
        return fibration(x, groups);
    }

    let mut grouped = vec![false; x.max_cones().len()];
    for g in &groups {
        for &k in g {
            grouped[k] = true;
        }
    }
    let mut interior: BTreeSet<usize> = BTreeSet::new();
    let mut hulls: Vec<Vec<usize>> = Vec::new();
    for m in &merged {
        let idx: Vec<usize> = m.iter().copied().collect();
        let ext = extreme_rays(&x.cone_rays(&idx))?;
        let hull: Vec<usize> = idx.iter().copied().filter(|&i| ext.contains(x.ray(i))).collect();
        interior.extend(idx.iter().filter(|i| !hull.contains(i)));
        hulls.push(hull);
    }
    let untouched: Vec<Vec<usize>> =
        x.max_cones().iter().enumerate().filter(|&(k, _)| !grouped[k]).map(|(_, c)| c.clone()).collect();

    let divisorial = interior.len() == 1 && {
        let e = *interior.iter().next().unwrap();
        hulls.iter().all(|h| x.cone_dim(h) == h.len()) && untouched.iter().all(|c| !c.contains(&e))
    };
    if divisorial {
        let e = *interior.iter().next().unwrap();
        let rays: Vec<IntVec> = x.rays().iter().enumerate().filter(|&(i, _)| i != e).map(|(_, u)| u.clone()).collect();
        let shift = |i: usize| if i > e { i - 1 } else { i };
        let cones: Vec<Vec<usize>> =
            untouched.iter().chain(&hulls).map(|c| c.iter().map(|&i| shift(i)).collect()).collect();
        let target = checked(Fan::new(x.rank(), rays, cones)?)?;
        let map = ToricMap::identity(x.clone(), target.clone());
        return Ok(ContractionResult { target, kind: ContractionKind::Divisorial { removed: e }, map, groups });
    }
    if !interior.is_empty() {
        return Err(MmpError::NotAFan("merged cones have interior rays but do not form a blow-down".into()));
    }
    let cones: Vec<Vec<usize>> = untouched.into_iter().chain(hulls).collect();
    let target = checked(Fan::new(x.rank(), x.rays().to_vec(), cones)?)?;
    let map = ToricMap::identity(x.clone(), target.clone());
    Ok(ContractionResult { target, kind: ContractionKind::Flipping, map, groups })
}

/// Connected components of maximal cones under adjacency across the walls of `r`.
fn merge_groups(x: &Fan, r: &ExtremalRay) -> Vec<Vec<usize>> {
    let n = x.max_cones().len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for w in &r.walls {
        let (a, b) = (find(&mut parent, w.cones.0), find(&mut parent, w.cones.1));
        parent[a.max(b)] = a.min(b);
    }
    let mut groups: Vec<Vec<usize>> = vec![Vec::new(); n];
    for k in 0..n {
        let root = find(&mut parent, k);
        groups[root].push(k);
    }
    groups.into_iter().filter(|g| g.len() > 1).collect()
}

fn checked(f: Fan) -> Result<Fan, MmpError> {
    match validate(&f) {
        Ok(()) => Ok(f),
        Err(defects) => Err(MmpError::NotAFan(defects.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))),
    }
}

/// Projects onto `N / L` with `L` the saturated lineality of the merged cones.
fn fibration(x: &Fan, groups: Vec<Vec<usize>>) -> Result<ContractionResult, MmpError> {
    let n = x.rank();
    let mut lineal: Vec<IntVec> = Vec::new();
    for g in &groups {
        let idx: BTreeSet<usize> = g.iter().flat_map(|&k| x.max_cones()[k].iter().copied()).collect();
        let gens = x.cone_rays(&idx.into_iter().collect::<Vec<_>>());
        for u in &gens {
            let neg: Vec<_> = u.iter().map(|v| exact_core::rat_from_int(&-v)).collect();
            if exact_core::cone_contains(&gens, &neg) {
                lineal.push(u.clone());
            }
        }
    }
    let snf = smith_normal_form(&ray_matrix(&lineal, n));
    let k = snf.rank();
    let vt = snf.v.transpose();
    let rows: Vec<IntVec> = (k..n).map(|i| (0..n).map(|j| vt.get(i, j).clone()).collect()).collect();
    let matrix = IntMat::from_rows(n, rows)?;

    let images: Vec<Option<IntVec>> = x.rays().iter().map(|u| primitive(&matrix.apply(u)).ok()).collect();
    let mut rays: Vec<IntVec> = Vec::new();
    for v in images.iter().flatten() {
        if !rays.contains(v) {
            rays.push(v.clone());
        }
    }
    let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in x.max_cones() {
        let gens: Vec<IntVec> = c.iter().filter_map(|&i| images[i].clone()).collect();
        let ext = if gens.is_empty() { Vec::new() } else { extreme_rays(&gens)? };
        let mut cone: Vec<usize> = ext.iter().map(|v| rays.iter().position(|r| r == v).unwrap()).collect();
        cone.sort_unstable();
        cones.insert(cone);
    }
    let all: Vec<Vec<usize>> = cones.iter().cloned().collect();
    let maximal: Vec<Vec<usize>> =
        all.iter().filter(|c| !all.iter().any(|d| d != *c && c.iter().all(|i| d.contains(i)))).cloned().collect();
    let target = checked(Fan::new(n - k, rays, maximal)?)?;
    let map = ToricMap::new(matrix, x.clone(), target.clone())?;
    Ok(ContractionResult { target, kind: ContractionKind::Fibration, map, groups })
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_core::ivec;
    use fan::zoo;

    #[test]
    fn blow_down_of_the_exceptional_curve() {
        let f1 = zoo::blown_up_plane();
        let rays = extremal_rays(&f1).unwrap();
        let e = f1.ray_index(&ivec(&[1, 1])).unwrap();
        let r = rays.iter().find(|r| r.walls[0].rays == vec![e]).unwrap();
        let c = contract(&f1, r).unwrap();
        assert_eq!(c.kind, ContractionKind::Divisorial { removed: e });
        assert_eq!(c.target, zoo::projective_space(2));
    }

    #[test]
    fn ruling_of_the_blown_up_plane_is_a_fibration() {
        let f1 = zoo::blown_up_plane();
        let e = f1.ray_index(&ivec(&[1, 1])).unwrap();
        let rays = extremal_rays(&f1).unwrap();
        let r = rays.iter().find(|r| r.walls[0].rays != vec![e]).unwrap();
        let c = contract(&f1, r).unwrap();
        assert!(c.is_fibration());
        assert_eq!(c.target.rank(), 1);
        assert_eq!(c.target.rays().len(), 2);
    }

    #[test]
    fn flipping_contraction() {
        let a = zoo::flip_side_a(2);
        let r = &extremal_rays(&a).unwrap()[0];
        let c = contract(&a, r).unwrap();
        assert_eq!(c.kind, ContractionKind::Flipping);
        assert_eq!(c.target, zoo::flip_base(2));
    }

    #[test]
    fn plane_contracts_to_a_point() {
        let p2 = zoo::projective_space(2);
        let c = contract(&p2, &extremal_rays(&p2).unwrap()[0]).unwrap();
        assert!(c.is_fibration());
        assert_eq!(c.target.rank(), 0);
        assert_eq!(c.groups, vec![vec![0, 1, 2]]);
    }

    #[test]
    fn non_extremal_direction_is_rejected() {
        let f1 = zoo::blown_up_plane();
        let mut r = extremal_rays(&f1).unwrap()[0].clone();
        r.direction = r.direction.iter().map(|v| v * exact_core::int(3) + exact_core::int(1)).collect();
        assert!(matches!(contract(&f1, &r), Err(MmpError::NotExtremal(_))));
    }
}

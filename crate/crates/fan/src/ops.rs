use std::collections::BTreeSet;

use exact_core::{cone_contains, primitive, rvec, smith_normal_form, IntMat, IntVec};
use num_traits::Zero;

use crate::geom::{cone_facets, rank_of};
use crate::map::ToricMap;
use crate::{fmt_vec, Fan, FanError};

/// Result of splitting off the torus factor `X ≅ X' × G_m^r`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorusFactor {
    pub reduced: Fan,
    pub r: usize,
    /// Unimodular `y = basis · x`; the first `rank − r` coordinates of `y`
    /// span the saturated sublattice carrying the fan.
    pub basis: IntMat,
    /// Index in `reduced` of every original ray.
    pub ray_map: Vec<usize>,
}

pub fn torus_factor(f: &Fan) -> TorusFactor {
    let n = f.rank();
    let identity = |f: &Fan| TorusFactor {
        reduced: f.clone(),
        r: 0,
        basis: IntMat::identity(n),
        ray_map: (0..f.rays().len()).collect(),
    };
    if f.rays().is_empty() {
        if n == 0 {
            return identity(f);
        }
        return TorusFactor {
            reduced: Fan::new(0, Vec::new(), vec![Vec::new()]).expect("point fan"),
            r: n,
            basis: IntMat::identity(n),
            ray_map: Vec::new(),
        };
    }
    let snf = smith_normal_form(&crate::geom::ray_matrix(f.rays(), n));
    let s = snf.rank();
    if s == n {
        return identity(f);
    }
    let basis = snf.v.transpose();
    let rays: Vec<IntVec> = f.rays().iter().map(|u| basis.apply(u)[..s].to_vec()).collect();
    let (reduced, ray_map) =
        Fan::new_with_permutation(s, rays, f.max_cones().to_vec()).expect("unimodular image of a fan");
    TorusFactor { reduced, r: n - s, basis, ray_map }
}

/// Star subdivision at `v`: every maximal cone containing `v` is replaced by
/// the joins of `v` with its facets not containing `v`.
pub fn star_subdivide(f: &Fan, v: &IntVec) -> Result<(Fan, ToricMap), FanError> {
    if v.len() != f.rank() {
        return Err(FanError::RayLength { index: f.rays().len(), len: v.len(), rank: f.rank() });
    }
    if primitive(v).ok().as_ref() != Some(v) {
        return Err(FanError::NotPrimitive(fmt_vec(v)));
    }
    if f.ray_index(v).is_some() {
        return Err(FanError::ExistingRay(fmt_vec(v)));
    }
    let vr = rvec(v);
    let new_index = f.rays().len();
    let mut cones: Vec<Vec<usize>> = Vec::new();
    let mut hit = false;
    for c in f.max_cones() {
        let gens = f.cone_rays(c);
        if !cone_contains(&gens, &vr) {
            cones.push(c.clone());
            continue;
        }
        hit = true;
        for facet in cone_facets(&gens, f.rank()) {
            if exact_core::arith::dot_rat(&facet.normal, &vr).is_zero() {
                continue;
            }
            let mut cone: Vec<usize> = facet.members.iter().map(|&i| c[i]).collect();
            cone.push(new_index);
            cones.push(cone);
        }
    }
    if !hit {
        return Err(FanError::OutsideSupport(fmt_vec(v)));
    }
    let mut rays = f.rays().to_vec();
    rays.push(v.clone());
    let sub = Fan::new(f.rank(), rays, cones)?;
    let map = ToricMap::identity(sub.clone(), f.clone());
    Ok((sub, map))
}

/// Pulling triangulation of every non-simplicial cone, pulling the lowest ray
/// index first. No rays are added. Consistent across shared faces because the
/// restriction of a pulling triangulation to a face is the pulling
/// triangulation of that face under the same order.
pub fn q_factorialize(f: &Fan) -> (Fan, ToricMap) {
    if f.is_simplicial() {
        return (f.clone(), ToricMap::identity(f.clone(), f.clone()));
    }
    let mut cones: BTreeSet<Vec<usize>> = BTreeSet::new();
    for c in f.max_cones() {
        for t in pull(f, c) {
            cones.insert(t);
        }
    }
    let out = Fan::new(f.rank(), f.rays().to_vec(), cones.into_iter().collect()).expect("same rays");
    let map = ToricMap::identity(out.clone(), f.clone());
    (out, map)
}

fn pull(f: &Fan, cone: &[usize]) -> Vec<Vec<usize>> {
    let gens = f.cone_rays(cone);
    if rank_of(&gens) == cone.len() {
        return vec![cone.to_vec()];
    }
    let apex = cone[0];
    let mut out = Vec::new();
    for facet in cone_facets(&gens, f.rank()) {
        if facet.members.contains(&0) {
            continue;
        }
        let face: Vec<usize> = facet.members.iter().map(|&i| cone[i]).collect();
        for mut t in pull(f, &face) {
            t.insert(0, apex);
            out.push(t);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zoo;
    use exact_core::ivec;

    #[test]
    fn plane_has_no_torus_factor() {
        let p2 = zoo::projective_space(2);
        let t = torus_factor(&p2);
        assert_eq!(t.r, 0);
        assert_eq!(t.reduced, p2);
    }

    #[test]
    fn planar_fan_in_rank_three() {
        let f = Fan::new(
            3,
            vec![ivec(&[1, 0, 0]), ivec(&[0, 1, 0]), ivec(&[-1, -1, 0])],
            vec![vec![0, 1], vec![1, 2], vec![0, 2]],
        )
        .unwrap();
        let t = torus_factor(&f);
        assert_eq!(t.r, 1);
        assert_eq!(t.reduced.rank(), 2);
        assert_eq!(t.reduced.max_cones().len(), 3);
        assert_eq!(torus_factor(&t.reduced).r, 0);
    }

    #[test]
    fn the_torus_itself() {
        let f = Fan::new(2, vec![], vec![]).unwrap();
        let t = torus_factor(&f);
        assert_eq!((t.reduced.rank(), t.r), (0, 2));
    }

    #[test]
    fn blowing_up_the_plane() {
        let (f1, _) = star_subdivide(&zoo::projective_space(2), &ivec(&[1, 1])).unwrap();
        assert_eq!(f1, zoo::blown_up_plane());
        assert!(matches!(star_subdivide(&zoo::projective_space(2), &ivec(&[1, 0])), Err(FanError::ExistingRay(_))));
    }

    #[test]
    fn subdividing_the_flip_side() {
        let a = zoo::flip_side_a(2);
        let (theta, _) = star_subdivide(&a, &ivec(&[1, 1, 0])).unwrap();
        let v = theta.ray_index(&ivec(&[1, 1, 0])).unwrap();
        let idx = |x: &[i64]| a.ray_index(&ivec(x)).map(|i| theta.ray_index(a.ray(i)).unwrap()).unwrap();
        let (u1, u2, u3, u4) = (idx(&[1, 0, 0]), idx(&[0, 1, 0]), idx(&[0, 0, 1]), idx(&[1, 1, -2]));
        let mut want: Vec<Vec<usize>> = [[u1, u3, v], [u2, u3, v], [u1, u4, v], [u2, u4, v]]
            .iter()
            .map(|c| {
                let mut c = c.to_vec();
                c.sort();
                c
            })
            .collect();
        want.sort();
        assert_eq!(theta.max_cones(), want.as_slice());
        assert!(matches!(star_subdivide(&a, &ivec(&[-1, 0, 0])), Err(FanError::OutsideSupport(_))));
    }

    #[test]
    fn cube_fan_triangulates_into_twelve() {
        let cube = zoo::cube_faces();
        let (q, _) = q_factorialize(&cube);
        assert_eq!(q.rays(), cube.rays());
        assert_eq!(q.max_cones().len(), 12);
        assert!(q.is_simplicial());
        assert_eq!(crate::validate(&q), Ok(()));
    }

    #[test]
    fn square_cone_is_pulled_at_its_lowest_ray() {
        let f = Fan::new(
            3,
            vec![ivec(&[1, 0, 1]), ivec(&[0, 1, 1]), ivec(&[-1, 0, 1]), ivec(&[0, -1, 1])],
            vec![vec![0, 1, 2, 3]],
        )
        .unwrap();
        let (q, _) = q_factorialize(&f);
        assert_eq!(q.max_cones().len(), 2);
        for c in q.max_cones() {
            assert!(c.contains(&0));
        }
    }
}

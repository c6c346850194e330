//! Rational polyhedral fans in a lattice `N ≅ Z^rank`.
//!
//! Rays are stored sorted lexicographically and every cone is a sorted list of
//! ray indices, so two fans are equal exactly when they are structurally equal.

mod complex;
pub mod geom;
mod map;
mod ops;
mod props;
mod validate;
pub mod zoo;

use exact_core::{primitive, ExactError, IntVec};
use thiserror::Error;

pub use complex::{incidence_complex, IncidenceComplex};
pub use geom::cone_covector;
pub use map::{check_map, MapCheck, ToricMap};
pub use ops::{q_factorialize, star_subdivide, torus_factor, TorusFactor};
pub use props::{properties, Properties};
pub use validate::{validate, Defect, DefectKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FanError {
    #[error("ray {index} has length {len}, expected rank {rank}")]
    RayLength { index: usize, len: usize, rank: usize },
    #[error("ray {0} is not primitive")]
    NotPrimitive(String),
    #[error("ray {0} is listed twice")]
    DuplicateRay(String),
    #[error("cone {cone} refers to ray index {index}, but there are only {rays} rays")]
    ConeIndex { cone: usize, index: usize, rays: usize },
    #[error("fan is not simplicial (cone {0})")]
    NotSimplicial(usize),
    #[error("invalid fan: {0}")]
    Invalid(String),
    #[error("vector {0} lies outside the support")]
    OutsideSupport(String),
    #[error("vector {0} is already a ray")]
    ExistingRay(String),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

pub fn fmt_vec<T: std::fmt::Display>(v: &[T]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fan {
    rank: usize,
    rays: Vec<IntVec>,
    max_cones: Vec<Vec<usize>>,
}

impl Fan {
    /// Builds a fan, checking ray shape and primitivity and canonicalising order.
    /// Geometric validity is a separate question, see [`validate`].
    pub fn new(rank: usize, rays: Vec<IntVec>, max_cones: Vec<Vec<usize>>) -> Result<Fan, FanError> {
        Ok(Self::new_with_permutation(rank, rays, max_cones)?.0)
    }

    /// Like [`Fan::new`], also returning where each input ray ended up.
    pub fn new_with_permutation(
        rank: usize,
        rays: Vec<IntVec>,
        max_cones: Vec<Vec<usize>>,
    ) -> Result<(Fan, Vec<usize>), FanError> {
        for (i, r) in rays.iter().enumerate() {
            if r.len() != rank {
                return Err(FanError::RayLength { index: i, len: r.len(), rank });
            }
            if primitive(r).ok().as_ref() != Some(r) {
                return Err(FanError::NotPrimitive(fmt_vec(r)));
            }
        }
        for (c, cone) in max_cones.iter().enumerate() {
            if let Some(&bad) = cone.iter().find(|&&i| i >= rays.len()) {
                return Err(FanError::ConeIndex { cone: c, index: bad, rays: rays.len() });
            }
        }
        let mut order: Vec<usize> = (0..rays.len()).collect();
        order.sort_by(|&a, &b| rays[a].cmp(&rays[b]));
        for w in order.windows(2) {
            if rays[w[0]] == rays[w[1]] {
                return Err(FanError::DuplicateRay(fmt_vec(&rays[w[0]])));
            }
        }
        let mut perm = vec![0; rays.len()];
        for (new, &old) in order.iter().enumerate() {
            perm[old] = new;
        }
        let sorted_rays = order.iter().map(|&i| rays[i].clone()).collect();
        let mut cones: Vec<Vec<usize>> = max_cones
            .into_iter()
            .map(|c| {
                let mut c: Vec<usize> = c.into_iter().map(|i| perm[i]).collect();
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        if cones.is_empty() {
            cones.push(Vec::new());
        }
        cones.sort();
        cones.dedup();
        Ok((Fan { rank, rays: sorted_rays, max_cones: cones }, perm))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn rays(&self) -> &[IntVec] {
        &self.rays
    }

    pub fn ray(&self, i: usize) -> &IntVec {
        &self.rays[i]
    }

    pub fn max_cones(&self) -> &[Vec<usize>] {
        &self.max_cones
    }

    pub fn ray_index(&self, v: &[exact_core::Int]) -> Option<usize> {
        self.rays.binary_search_by(|r| r.as_slice().cmp(v)).ok()
    }

    pub fn cone_rays(&self, cone: &[usize]) -> Vec<IntVec> {
        cone.iter().map(|&i| self.rays[i].clone()).collect()
    }

    pub fn cone_dim(&self, cone: &[usize]) -> usize {
        geom::rank_of(&self.cone_rays(cone))
    }

    pub fn is_simplicial(&self) -> bool {
        self.max_cones.iter().all(|c| self.cone_dim(c) == c.len())
    }

    /// All maximal cones have dimension `rank`.
    pub fn is_pure_full(&self) -> bool {
        self.max_cones.iter().all(|c| self.cone_dim(c) == self.rank)
    }

    /// Indices of maximal cones whose ray set contains `face`.
    pub fn cones_containing(&self, face: &[usize]) -> Vec<usize> {
        self.max_cones
            .iter()
            .enumerate()
            .filter(|(_, c)| face.iter().all(|i| c.binary_search(i).is_ok()))
            .map(|(k, _)| k)
            .collect()
    }

    /// A maximal cone containing the point `v` (which need not be a ray), if any.
    pub fn locate(&self, v: &[exact_core::Rat]) -> Option<usize> {
        self.max_cones.iter().position(|c| exact_core::cone_contains(&self.cone_rays(c), v))
    }
}

impl std::fmt::Display for Fan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let rays: Vec<String> = self.rays.iter().map(|r| fmt_vec(r)).collect();
        let cones: Vec<String> = self.max_cones.iter().map(|c| fmt_vec(c)).collect();
        write!(f, "rank {} rays [{}] cones [{}]", self.rank, rays.join(" "), cones.join(" "))
    }
}

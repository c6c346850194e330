//! Walls of a simplicial fan, the linear relations across them, the curve
//! classes they define as functionals on divisor coefficients, and the
//! extremal rays of the cone those classes generate.

mod extremal;

use divisors::{cartier_data, DivisorError, TorusDivisor};
use exact_core::{pair, primitive_of_rat, rat_from_int, ExactError, Rat, RatMat};
use fan::geom::{facet_incidence, multiplicity};
use fan::{Fan, FanError};
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use extremal::{extremal_rays, ExtremalRay};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MoriError {
    #[error("fan is not simplicial (cone {0})")]
    NotSimplicial(usize),
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

/// A codimension-one cone `τ = σ ∩ σ'` with exactly two adjacent maximal cones.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Wall {
    pub rays: Vec<usize>,
    /// `(σ, σ')` as maximal-cone indices, `σ < σ'`.
    pub cones: (usize, usize),
}

impl Wall {
    /// Off-wall rays `(u, u')` of `σ` and `σ'`.
    pub fn off_wall(&self, x: &Fan) -> (usize, usize) {
        let pick = |k: usize| *x.max_cones()[k].iter().find(|i| !self.rays.contains(i)).expect("off-wall ray");
        (pick(self.cones.0), pick(self.cones.1))
    }
}

/// Primitive integral relation `Σ b_ρ u_ρ = 0` among the rays of `σ ∪ σ'`
/// with positive off-wall coefficients; zero on every other ray.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallRelation {
    pub b: Vec<Rat>,
}

/// Pairing functional `D · C = Σ a_ρ c_ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveClass {
    pub c: Vec<Rat>,
}

impl CurveClass {
    pub fn pair(&self, d: &TorusDivisor) -> Rat {
        exact_core::dot_rat(&self.c, &d.coeffs)
    }
}

fn require_simplicial(x: &Fan) -> Result<(), MoriError> {
    match x.max_cones().iter().position(|c| x.cone_dim(c) != c.len()) {
        Some(k) => Err(MoriError::NotSimplicial(k)),
        None => Ok(()),
    }
}

/// Interior walls, ordered by their ray sets.
pub fn walls(x: &Fan) -> Result<Vec<Wall>, MoriError> {
    require_simplicial(x)?;
    Ok(facet_incidence(x)
        .into_iter()
        .filter(|f| f.cones.len() == 2)
        .map(|f| Wall { rays: f.rays, cones: (f.cones[0], f.cones[1]) })
        .collect())
}

pub fn wall_relation(x: &Fan, w: &Wall) -> WallRelation {
    let (u, v) = w.off_wall(x);
    let mut support = w.rays.clone();
    support.push(u);
    support.push(v);
    // kernel of the transpose: rows are coordinates, columns are rays
    let rows: Vec<Vec<Rat>> =
        (0..x.rank()).map(|j| support.iter().map(|&i| rat_from_int(&x.ray(i)[j])).collect()).collect();
    let ker = RatMat::from_rows(support.len(), rows).expect("shape").kernel();
    assert_eq!(ker.len(), 1, "a wall of a simplicial fan carries a single relation");
    let mut rel = primitive_of_rat(&ker[0]).expect("nonzero relation");
    let k = support.len();
    if rel[k - 1].is_negative() {
        rel = rel.iter().map(|x| -x).collect();
    }
    assert!(rel[k - 2].is_positive() && rel[k - 1].is_positive(), "off-wall coefficients share a sign");
    let mut b = vec![Rat::zero(); x.rays().len()];
    for (i, r) in support.iter().zip(rel) {
        b[*i] = rat_from_int(&r);
    }
    WallRelation { b }
}

/// `c = b · mult(τ) / (b_{u'} · mult(σ'))`.
pub fn curve_class(x: &Fan, w: &Wall) -> CurveClass {
    let rel = wall_relation(x, w);
    let (_, v) = w.off_wall(x);
    let scale = rat_from_int(&multiplicity(&x.cone_rays(&w.rays), x.rank()))
        / (&rel.b[v] * rat_from_int(&multiplicity(&x.cone_rays(&x.max_cones()[w.cones.1]), x.rank())));
    CurveClass { c: rel.b.iter().map(|t| t * &scale).collect() }
}

/// `D · C_w = ⟨m_σ − m_σ', u'⟩ · mult(τ)/mult(σ')`, computed from the Cartier
/// data; the same number from the `σ` side is asserted.
pub fn intersect(x: &Fan, d: &TorusDivisor, w: &Wall) -> Result<Rat, MoriError> {
    let cd = cartier_data(x, d)?;
    let (u, v) = w.off_wall(x);
    let (ms, mt) = (cd.covector(w.cones.0), cd.covector(w.cones.1));
    let diff: Vec<Rat> = ms.iter().zip(mt).map(|(a, b)| a - b).collect();
    let tau = rat_from_int(&multiplicity(&x.cone_rays(&w.rays), x.rank()));
    let mult = |k: usize| rat_from_int(&multiplicity(&x.cone_rays(&x.max_cones()[k]), x.rank()));
    let one_side = pair(&diff, x.ray(v)) * &tau / mult(w.cones.1);
    let other_side = -pair(&diff, x.ray(u)) * &tau / mult(w.cones.0);
    assert_eq!(one_side, other_side, "wall pairing is not symmetric");
    Ok(one_side)
}

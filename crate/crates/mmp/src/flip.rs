use std::collections::BTreeSet;

use divisors::{pullback, TorusDivisor};
use exact_core::{primitive, IntVec, Rat};
use fan::{fmt_vec, star_subdivide, validate, Fan, ToricMap};
use mori::{curve_class, intersect, walls, CurveClass, ExtremalRay};
use num_traits::{Signed, Zero};

use crate::{contract, ContractionKind, MmpError};

/// The common blow-up of the two sides of a flip.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlipDiagram {
    pub theta: Fan,
    pub e_ray: IntVec,
    /// Index of `e_ray` in `theta`.
    pub e_index: usize,
    /// `ψ*F − ψ'*F' = −(F·Γ)E`, with `F·Γ` given by `gamma`.
    pub gamma: CurveClass,
    pub psi: ToricMap,
    pub psi_prime: ToricMap,
    /// Rays with positive and negative coefficient in the circuit relation.
    pub c_plus: Vec<usize>,
    pub c_minus: Vec<usize>,
}

impl FlipDiagram {
    /// `F·Γ`.
    pub fn kappa(&self, f: &TorusDivisor) -> Rat {
        self.gamma.pair(f)
    }
}

fn circuit(direction: &[exact_core::Int]) -> (Vec<usize>, Vec<usize>) {
    let plus = (0..direction.len()).filter(|&i| direction[i].is_positive()).collect();
    let minus = (0..direction.len()).filter(|&i| direction[i].is_negative()).collect();
    (plus, minus)
}

/// Replaces the triangulation of every merged circuit by the opposite one.
/// Returns `X⁺` and its map to the contracted fan.
pub fn flip(x: &Fan, r: &ExtremalRay, d: &TorusDivisor) -> Result<(Fan, ToricMap), MmpError> {
    let c = contract(x, r)?;
    if c.kind != ContractionKind::Flipping {
        return Err(MmpError::NotFlipping);
    }
    let pairing = intersect(x, d, &r.walls[0])?;
    if !pairing.is_negative() {
        return Err(MmpError::NotNegative(exact_core::fmt_rat(&pairing)));
    }
    let (plus, minus) = circuit(&r.direction);
    let circ: BTreeSet<usize> = plus.iter().chain(&minus).copied().collect();
    let mut grouped: BTreeSet<usize> = BTreeSet::new();
    let mut new_cones: Vec<Vec<usize>> = Vec::new();
    for g in &c.groups {
        grouped.extend(g);
        let rays: BTreeSet<usize> = g.iter().flat_map(|&k| x.max_cones()[k].iter().copied()).collect();
        if !circ.is_subset(&rays) {
            return Err(MmpError::Circuit(format!("merged cone misses circuit rays of {}", fmt_vec(&r.direction))));
        }
        let side = |drop: &[usize]| -> BTreeSet<Vec<usize>> {
            drop.iter().map(|i| rays.iter().copied().filter(|j| j != i).collect()).collect()
        };
        let have: BTreeSet<Vec<usize>> = g.iter().map(|&k| x.max_cones()[k].clone()).collect();
        if have != side(&plus) {
            return Err(MmpError::Circuit(format!("cones {:?} are not one side of the circuit", have)));
        }
        new_cones.extend(side(&minus));
    }
    let mut cones: Vec<Vec<usize>> =
        x.max_cones().iter().enumerate().filter(|(k, _)| !grouped.contains(k)).map(|(_, c)| c.clone()).collect();
    cones.extend(new_cones.iter().cloned());
    let xp = Fan::new(x.rank(), x.rays().to_vec(), cones)?;
    if let Err(defects) = validate(&xp) {
        return Err(MmpError::NotAFan(defects.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; ")));
    }
    // D⁺ must be ample over the base on the new side
    for w in walls(&xp)? {
        let (a, b) = (&xp.max_cones()[w.cones.0], &xp.max_cones()[w.cones.1]);
        if new_cones.contains(a) && new_cones.contains(b) && !intersect(&xp, d, &w)?.is_positive() {
            return Err(MmpError::NotRelativelyAmple(fmt_vec(&w.rays)));
        }
    }
    let map = ToricMap::identity(xp.clone(), c.target);
    Ok((xp, map))
}

/// Builds the common star subdivision of `x` and `x_plus` over `z` and reads off
/// `Γ` from `ψ*F − ψ'*F'` on every prime divisor `F`.
pub fn flip_diagram(x: &Fan, x_plus: &Fan, z: &Fan) -> Result<FlipDiagram, MmpError> {
    if x.rays() != x_plus.rays() || x.rays() != z.rays() {
        return Err(MmpError::Internal("the two sides of a flip share their rays with the base".into()));
    }
    let flipping: Vec<_> = walls(x)?
        .into_iter()
        .filter(|w| !x_plus.max_cones().contains(&x.max_cones()[w.cones.0]))
        .filter(|w| !x_plus.max_cones().contains(&x.max_cones()[w.cones.1]))
        .collect();
    let first = flipping.first().ok_or_else(|| MmpError::Internal("the two sides agree".into()))?;
    let class = curve_class(x, first);
    let direction = exact_core::primitive_of_rat(&class.c)?;
    let (c_plus, c_minus) = circuit(&direction);
    let mut sum: IntVec = vec![exact_core::int(0); x.rank()];
    for &i in &c_plus {
        for (s, u) in sum.iter_mut().zip(x.ray(i)) {
            *s += &direction[i] * u;
        }
    }
    let e_ray = primitive(&sum)?;
    let (theta, psi) = star_subdivide(x, &e_ray)?;
    let (theta2, psi2) = star_subdivide(x_plus, &e_ray)?;
    if theta != theta2 {
        return Err(MmpError::Internal("the two star subdivisions differ".into()));
    }
    let psi_prime = ToricMap::identity(theta.clone(), psi2.target);
    let e_index = theta.ray_index(&e_ray).expect("inserted ray");
    let n = x.rays().len();
    let mut kappa = Vec::with_capacity(n);
    for rho in 0..n {
        let f = TorusDivisor::prime(n, rho);
        let diff = pullback(&psi, &f)?.minus(&pullback(&psi_prime, &f)?);
        if diff.coeffs.iter().enumerate().any(|(i, v)| i != e_index && !v.is_zero()) {
            return Err(MmpError::Internal(format!("pullbacks of D_{rho} differ away from E")));
        }
        kappa.push(-diff.coeffs[e_index].clone());
    }
    let gamma = CurveClass { c: kappa };
    // Γ is a positive multiple of the flipping curve
    let ratio = class.c.iter().zip(&gamma.c).find(|(a, _)| !a.is_zero()).map(|(a, g)| g / a).unwrap();
    if !ratio.is_positive() || class.c.iter().zip(&gamma.c).any(|(a, g)| &(a * &ratio) != g) {
        return Err(MmpError::Internal("Γ is not a positive multiple of the flipping class".into()));
    }
    Ok(FlipDiagram { theta, e_ray, e_index, gamma, psi, psi_prime, c_plus, c_minus })
}

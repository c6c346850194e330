use std::fmt;

use divisors::TorusDivisor;
use exact_core::{count_lattice_points, dot, feasible, has_lattice_point, is_bounded, rvec, IneqSystem, IntVec, Rat};
use fan::{properties, Fan};

use crate::homology::{neg_complex, not_simplicial, BoundaryFactors};
use crate::{CohomologyError, Field};

/// Subset enumeration is exponential in the number of rays.
pub const MAX_RAYS: usize = 20;

/// Rays `ρ` with `⟨m, u_ρ⟩ < −a_ρ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignPattern {
    pub neg: Vec<usize>,
}

impl SignPattern {
    pub fn of(x: &Fan, d: &TorusDivisor, m: &IntVec) -> SignPattern {
        let neg = (0..x.rays().len()).filter(|&i| Rat::from_integer(dot(m, x.ray(i))) < -d.coeffs[i].clone()).collect();
        SignPattern { neg }
    }

    fn mask(&self) -> u64 {
        self.neg.iter().map(|&i| 1u64 << i).sum()
    }
}

impl fmt::Display for SignPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.neg.iter().map(|i| i.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A nonempty region of `M_R` on which the sign pattern is constant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chamber {
    pub pattern: SignPattern,
    pub region: IneqSystem,
    pub bounded: bool,
    /// A rational point of the region.
    pub witness: Vec<Rat>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChamberReport {
    pub chamber: Chamber,
    /// `homology[p] = dim H̃^{p−1}` of the negative subcomplex, `p = 0..=rank`.
    pub homology: Vec<usize>,
    /// Lattice points of the region; computed when some homology is nonzero.
    pub lattice_count: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyReport {
    pub field: Field,
    /// `h^0, …, h^rank`.
    pub dims: Vec<u64>,
    pub chambers: Vec<ChamberReport>,
}

impl CohomologyReport {
    pub fn euler_characteristic(&self) -> i64 {
        self.dims.iter().enumerate().map(|(i, &h)| if i % 2 == 0 { h as i64 } else { -(h as i64) }).sum()
    }

    pub fn higher_vanish(&self) -> bool {
        self.dims.iter().skip(1).all(|&h| h == 0)
    }
}

/// Outcome of the higher-vanishing scan; `witness` names a chamber with
/// lattice points and the degree `p ≥ 1` where its piece is nonzero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vanishing {
    pub field: Field,
    pub vanishes: bool,
    pub witness: Option<(SignPattern, usize)>,
}

fn region(x: &Fan, d: &TorusDivisor, neg: &[bool]) -> IneqSystem {
    let mut sys = IneqSystem::new(x.rank());
    for (i, u) in x.rays().iter().enumerate().take(neg.len()) {
        if neg[i] {
            sys.lt(rvec(u), -d.coeffs[i].clone());
        } else {
            sys.ge(rvec(u), -d.coeffs[i].clone());
        }
    }
    sys
}

/// Every sign pattern with a nonempty region, ordered by the bitmask of the pattern.
///
/// Patterns are grown one ray at a time; a partial pattern whose region is
/// empty is not extended, and a branch the parent's witness point already
/// satisfies needs no feasibility solve.
pub fn chambers(x: &Fan, d: &TorusDivisor) -> Result<Vec<Chamber>, CohomologyError> {
    if !x.is_simplicial() {
        return Err(not_simplicial(x));
    }
    d.check_len(x)?;
    let n = x.rays().len();
    if n > MAX_RAYS {
        return Err(CohomologyError::TooManyRays(n));
    }
    let mut out = Vec::new();
    let mut neg = Vec::with_capacity(n);
    grow(x, d, &mut neg, vec![Rat::from_integer(0.into()); x.rank()], &mut out)?;
    out.sort_by_key(|c| c.pattern.mask());
    Ok(out)
}

fn grow(
    x: &Fan,
    d: &TorusDivisor,
    neg: &mut Vec<bool>,
    witness: Vec<Rat>,
    out: &mut Vec<Chamber>,
) -> Result<(), CohomologyError> {
    let i = neg.len();
    if i == x.rays().len() {
        let sys = region(x, d, neg);
        let bounded = is_bounded(&sys)?;
        let pattern = SignPattern { neg: (0..i).filter(|&k| neg[k]).collect() };
        out.push(Chamber { pattern, region: sys, bounded, witness });
        return Ok(());
    }
    for branch in [false, true] {
        neg.push(branch);
        let sys = region(x, d, neg);
        let next = if sys.contains(&witness) { Some(witness.clone()) } else { feasible(&sys) };
        if let Some(w) = next {
            grow(x, d, neg, w, out)?;
        }
        neg.pop();
    }
    Ok(())
}

fn padded(mut v: Vec<usize>, len: usize) -> Vec<usize> {
    v.resize(len, 0);
    v
}

/// `h^p(X, O(D))` over each field, for a complete simplicial fan.
pub fn coh_dims_fields(x: &Fan, d: &TorusDivisor, fields: &[Field]) -> Result<Vec<CohomologyReport>, CohomologyError> {
    if !x.is_simplicial() {
        return Err(not_simplicial(x));
    }
    if !properties(x)?.complete {
        return Err(CohomologyError::NotComplete);
    }
    let r = x.rank();
    let mut reports: Vec<CohomologyReport> =
        fields.iter().map(|&field| CohomologyReport { field, dims: vec![0; r + 1], chambers: Vec::new() }).collect();
    for ch in chambers(x, d)? {
        let bf = BoundaryFactors::of(&neg_complex(x, &ch.pattern)?);
        let hom: Vec<Vec<usize>> = fields.iter().map(|&f| padded(bf.dims(f), r + 1)).collect();
        let nonzero = hom.iter().any(|h| h.iter().any(|&v| v > 0));
        let count = if !nonzero {
            None
        } else if ch.bounded {
            Some(count_lattice_points(&ch.region)?)
        } else if has_lattice_point(&ch.region)? {
            return Err(CohomologyError::Inconsistent { pattern: ch.pattern.to_string() });
        } else {
            Some(0)
        };
        for (rep, h) in reports.iter_mut().zip(hom) {
            if let Some(c) = count {
                for (dim, v) in rep.dims.iter_mut().zip(&h) {
                    *dim += c * *v as u64;
                }
            }
            rep.chambers.push(ChamberReport { chamber: ch.clone(), homology: h, lattice_count: count });
        }
    }
    Ok(reports)
}

pub fn coh_dims(x: &Fan, d: &TorusDivisor, field: Field) -> Result<CohomologyReport, CohomologyError> {
    Ok(coh_dims_fields(x, d, &[field])?.remove(0))
}

/// Dimensions of the degree-`m` pieces of `H^0..H^rank` from `m`'s sign pattern.
pub fn graded_piece(x: &Fan, d: &TorusDivisor, m: &IntVec, field: Field) -> Result<Vec<usize>, CohomologyError> {
    let k = neg_complex(x, &SignPattern::of(x, d, m))?;
    Ok(padded(BoundaryFactors::of(&k).dims(field), x.rank() + 1))
}

/// Whether every graded piece of `H^{>0}` vanishes, over each field, for a
/// simplicial fan with convex support. Unbounded chambers are allowed.
pub fn vanishing_higher_fields(x: &Fan, d: &TorusDivisor, fields: &[Field]) -> Result<Vec<Vanishing>, CohomologyError> {
    if !x.is_simplicial() {
        return Err(not_simplicial(x));
    }
    if !properties(x)?.support_convex {
        return Err(CohomologyError::NotSupportConvex);
    }
    let mut out: Vec<Vanishing> =
        fields.iter().map(|&field| Vanishing { field, vanishes: true, witness: None }).collect();
    for ch in chambers(x, d)? {
        let bf = BoundaryFactors::of(&neg_complex(x, &ch.pattern)?);
        let mut reachable: Option<bool> = None;
        for v in out.iter_mut().filter(|v| v.vanishes) {
            let h = bf.dims(v.field);
            let Some(p) = (1..h.len()).find(|&p| h[p] > 0) else { continue };
            let lattice = match reachable {
                Some(b) => b,
                None => *reachable.insert(has_lattice_point(&ch.region)?),
            };
            if lattice {
                v.vanishes = false;
                v.witness = Some((ch.pattern.clone(), p));
            }
        }
    }
    Ok(out)
}

pub fn vanishing_higher(x: &Fan, d: &TorusDivisor, field: Field) -> Result<Vanishing, CohomologyError> {
    Ok(vanishing_higher_fields(x, d, &[field])?.remove(0))
}

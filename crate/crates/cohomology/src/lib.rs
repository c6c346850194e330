//! Cohomology of `O(D)` for torus-invariant divisors on simplicial fans.
//!
//! The degree-`m` piece of `H^p(X, O(D))` is the reduced cohomology in degree
//! `p − 1` of the subcomplex induced on the rays where `⟨m, u_ρ⟩ < −a_ρ`. That
//! set is constant on chambers of `M_R`, so the totals are sums over chambers
//! of lattice-point counts times homology dimensions.

mod cech;
mod chambers;
mod homology;

use std::fmt;
use std::str::FromStr;

use divisors::DivisorError;
use exact_core::ExactError;
use fan::FanError;
use thiserror::Error;

pub use cech::cech_graded;
pub use chambers::{
    chambers, coh_dims, coh_dims_fields, graded_piece, vanishing_higher, vanishing_higher_fields, Chamber,
    ChamberReport, CohomologyReport, SignPattern, Vanishing, MAX_RAYS,
};
pub use homology::{neg_complex, reduced_homology, BoundaryFactors};

/// Coefficient field: the rationals or a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Q,
    Fp(u64),
}

impl Field {
    /// The fields checked by default: `Q`, `F_2`, `F_3`, `F_5`, `F_7`.
    pub const STANDARD: [Field; 5] = [Field::Q, Field::Fp(2), Field::Fp(3), Field::Fp(5), Field::Fp(7)];

    /// Short lowercase key, `q` or `f<p>`.
    pub fn key(self) -> String {
        match self {
            Field::Q => "q".into(),
            Field::Fp(p) => format!("f{p}"),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Q => write!(f, "Q"),
            Field::Fp(p) => write!(f, "F{p}"),
        }
    }
}

impl FromStr for Field {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let l = s.to_ascii_lowercase();
        if l == "q" {
            return Ok(Field::Q);
        }
        let p: u64 = l.strip_prefix('f').and_then(|p| p.parse().ok()).ok_or_else(|| format!("unknown field {s:?}"))?;
        if p < 2 || (2..p).take_while(|d| d * d <= p).any(|d| p.is_multiple_of(d)) {
            return Err(format!("{p} is not prime"));
        }
        Ok(Field::Fp(p))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CohomologyError {
    #[error("fan is not simplicial (cone {0})")]
    NotSimplicial(usize),
    #[error("fan is not complete")]
    NotComplete,
    #[error("fan support is not convex")]
    NotSupportConvex,
    #[error("{0} rays exceed the chamber enumeration limit of {MAX_RAYS}")]
    TooManyRays(usize),
    #[error("inconsistent chamber {pattern}: nonzero homology on an unbounded region with lattice points")]
    Inconsistent { pattern: String },
    #[error(transparent)]
    Divisor(#[from] DivisorError),
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

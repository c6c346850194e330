//! Torus-invariant Q-divisors on toric varieties given by fans.
//!
//! A divisor is a rational coefficient per ray, `D = Σ a_ρ D_ρ`. Cartier data
//! follow the convention `⟨m_σ, u_ρ⟩ = −a_ρ`, so the section polytope is
//! `P_D = {m : ⟨m, u_ρ⟩ ≥ −a_ρ}` and `div(m)` has `m_σ = −m`.

mod cartier;
mod maps;
mod positivity;
mod sections;

use std::fmt;

use exact_core::{ceil, floor, fmt_rat, rat_from_int, ExactError, Int, Rat};
use fan::{Fan, FanError};
use num_traits::{Signed, Zero};
use thiserror::Error;

pub use cartier::{cartier_data, principal, CartierData};
pub use maps::{pullback, pushforward};
pub use positivity::{discrepancy, klt_check, positivity, semiample_witness, KltVerdict, Positivity, SemiampleWitness};
pub use sections::{h0_dim, section_polytope, H0};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisorError {
    #[error("not Q-Cartier on cone {cone}")]
    NotQCartier { cone: usize },
    #[error("divisor has {found} coefficients, fan has {expected} rays")]
    Length { expected: usize, found: usize },
    #[error("vector {0} lies outside the support")]
    OutsideSupport(String),
    #[error("target ray {0} is not a source ray")]
    MissingRay(String),
    #[error("not nef: cone {cone}, ray {ray}")]
    NotNef { cone: usize, ray: usize },
    #[error(transparent)]
    Fan(#[from] FanError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TorusDivisor {
    pub coeffs: Vec<Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rounding {
    Up,
    Down,
}

impl TorusDivisor {
    pub fn new(coeffs: Vec<Rat>) -> TorusDivisor {
        TorusDivisor { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> TorusDivisor {
        TorusDivisor { coeffs: coeffs.iter().map(|&c| Rat::from_integer(Int::from(c))).collect() }
    }

    pub fn zero(n: usize) -> TorusDivisor {
        TorusDivisor { coeffs: vec![Rat::zero(); n] }
    }

    /// The prime divisor `D_ρ`.
    pub fn prime(n: usize, ray: usize) -> TorusDivisor {
        let mut d = TorusDivisor::zero(n);
        d.coeffs[ray] = Rat::from_integer(Int::from(1));
        d
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn is_effective(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    pub fn check_len(&self, f: &Fan) -> Result<(), DivisorError> {
        if self.len() != f.rays().len() {
            return Err(DivisorError::Length { expected: f.rays().len(), found: self.len() });
        }
        Ok(())
    }

    pub fn plus(&self, other: &TorusDivisor) -> TorusDivisor {
        TorusDivisor { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn minus(&self, other: &TorusDivisor) -> TorusDivisor {
        TorusDivisor { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() }
    }

    pub fn scaled(&self, s: &Rat) -> TorusDivisor {
        TorusDivisor { coeffs: self.coeffs.iter().map(|a| a * s).collect() }
    }

    pub fn round(&self, dir: Rounding) -> TorusDivisor {
        let f = match dir {
            Rounding::Up => ceil,
            Rounding::Down => floor,
        };
        TorusDivisor { coeffs: self.coeffs.iter().map(|a| rat_from_int(&f(a))).collect() }
    }

    /// `rounded − self`: entries in `[0,1)` upwards, `(−1,0]` downwards.
    pub fn round_defect(&self, dir: Rounding) -> TorusDivisor {
        self.round(dir).minus(self)
    }
}

impl fmt::Display for TorusDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(fmt_rat).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// `K_X = −Σ D_ρ`.
pub fn canonical(x: &Fan) -> TorusDivisor {
    TorusDivisor::from_ints(&vec![-1; x.rays().len()])
}

pub fn round(d: &TorusDivisor, dir: Rounding) -> TorusDivisor {
    d.round(dir)
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_core::rat;
    use fan::zoo;

    #[test]
    fn canonical_divisors() {
        assert_eq!(canonical(&zoo::projective_space(2)), TorusDivisor::from_ints(&[-1, -1, -1]));
        assert_eq!(canonical(&zoo::blown_up_plane()), TorusDivisor::from_ints(&[-1, -1, -1, -1]));
        assert_eq!(canonical(&zoo::weighted_p112()), TorusDivisor::from_ints(&[-1, -1, -1]));
    }

    #[test]
    fn rounding() {
        let d = TorusDivisor::new(vec![rat(1, 2), rat(-1, 2)]);
        assert_eq!(round(&d, Rounding::Up), TorusDivisor::from_ints(&[1, 0]));
        assert_eq!(d.round_defect(Rounding::Up), TorusDivisor::new(vec![rat(1, 2), rat(1, 2)]));
        let z = TorusDivisor::from_ints(&[3, -2]);
        assert_eq!(round(&z, Rounding::Down), z);
        assert_eq!(round(&TorusDivisor::new(vec![rat(1, 3)]), Rounding::Down), TorusDivisor::from_ints(&[0]));
        assert_eq!(d.to_string(), "(1/2,-1/2)");
    }
}

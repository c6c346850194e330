use exact_core::{dot_rat, lcm_denominators, pair, Int, Rat};
use fan::{cone_covector, Fan};
use num_traits::One;

use crate::{DivisorError, TorusDivisor};

/// One covector per maximal cone with `⟨m_σ, u_ρ⟩ = −a_ρ` for the rays of `σ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartierData {
    pub covectors: Vec<Vec<Rat>>,
}

impl CartierData {
    pub fn covector(&self, cone: usize) -> &[Rat] {
        &self.covectors[cone]
    }

    /// Value of the support function `ψ_D` at a point of the support; `ψ_D(u_ρ) = −a_ρ`.
    pub fn evaluate(&self, x: &Fan, v: &[Rat]) -> Option<Rat> {
        x.locate(v).map(|k| dot_rat(&self.covectors[k], v))
    }

    /// Least `ℓ > 0` making every `ℓ m_σ` integral.
    pub fn index(&self) -> Int {
        self.covectors.iter().fold(Int::one(), |acc, m| num_integer::Integer::lcm(&acc, &lcm_denominators(m)))
    }
}

pub fn cartier_data(x: &Fan, d: &TorusDivisor) -> Result<CartierData, DivisorError> {
    d.check_len(x)?;
    let mut covectors = Vec::with_capacity(x.max_cones().len());
    for (k, c) in x.max_cones().iter().enumerate() {
        let values: Vec<Rat> = c.iter().map(|&i| -d.coeffs[i].clone()).collect();
        match cone_covector(&x.cone_rays(c), &values, x.rank()) {
            Some(m) => covectors.push(m),
            None => return Err(DivisorError::NotQCartier { cone: k }),
        }
    }
    Ok(CartierData { covectors })
}

/// `div(m) = Σ ⟨m, u_ρ⟩ D_ρ`.
pub fn principal(x: &Fan, m: &[Rat]) -> TorusDivisor {
    TorusDivisor::new(x.rays().iter().map(|u| pair(m, u)).collect())
}

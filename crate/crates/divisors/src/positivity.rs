use exact_core::{feasible, fmt_rat, pair, rat_from_int, rvec, IneqSystem, Int, IntVec, Rat};
use fan::{fmt_vec, torus_factor, Fan};
use num_traits::{One, Signed};

use crate::cartier::cartier_data;
use crate::{canonical, DivisorError, TorusDivisor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Positivity {
    pub nef: bool,
    pub ample: bool,
    pub big: bool,
}

/// Nef and ample are read off the Cartier data; big is full-dimensionality
/// of `P_D`, i.e. feasibility of `⟨m, u_ρ⟩ > −a_ρ` for every ray.
pub fn positivity(x: &Fan, d: &TorusDivisor) -> Result<Positivity, DivisorError> {
    let cd = cartier_data(x, d)?;
    let mut nef = true;
    let mut strict = true;
    for (k, c) in x.max_cones().iter().enumerate() {
        for (i, u) in x.rays().iter().enumerate() {
            let slack = pair(cd.covector(k), u) + &d.coeffs[i];
            if slack.is_negative() {
                nef = false;
            }
            if c.binary_search(&i).is_err() && !slack.is_positive() {
                strict = false;
            }
        }
    }
    let mut distinct = cd.covectors.clone();
    distinct.sort();
    distinct.dedup();
    let ample = nef && strict && distinct.len() == cd.covectors.len() && torus_factor(x).r == 0;
    Ok(Positivity { nef, ample, big: big(x, d) })
}

fn big(x: &Fan, d: &TorusDivisor) -> bool {
    let mut sys = IneqSystem::new(x.rank());
    for (u, a) in x.rays().iter().zip(&d.coeffs) {
        sys.gt(rvec(u), -a.clone());
    }
    feasible(&sys).is_some()
}

/// Base-point-freeness certificate for a multiple of a nef divisor: every
/// `ℓ m_σ` is an integral point of `P_{ℓD}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SemiampleWitness {
    pub multiple: Int,
    pub sections: Vec<IntVec>,
}

pub fn semiample_witness(x: &Fan, d: &TorusDivisor) -> Result<SemiampleWitness, DivisorError> {
    let cd = cartier_data(x, d)?;
    for k in 0..x.max_cones().len() {
        for (i, u) in x.rays().iter().enumerate() {
            if (pair(cd.covector(k), u) + &d.coeffs[i]).is_negative() {
                return Err(DivisorError::NotNef { cone: k, ray: i });
            }
        }
    }
    let l = d.coeffs.iter().fold(cd.index(), |acc, a| num_integer::Integer::lcm(&acc, a.denom()));
    let lr = rat_from_int(&l);
    let mut sections = Vec::new();
    for m in &cd.covectors {
        let lm: Vec<Rat> = m.iter().map(|x| x * &lr).collect();
        assert!(lm.iter().all(|x| x.is_integer()));
        // ⟨ℓm_σ, u_ρ⟩ ≥ −ℓa_ρ for every ray
        for (u, a) in x.rays().iter().zip(&d.coeffs) {
            assert!(pair(&lm, u) >= -(a * &lr), "section certificate failed");
        }
        sections.push(lm.into_iter().map(|x| x.to_integer()).collect());
    }
    Ok(SemiampleWitness { multiple: l, sections })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KltVerdict {
    pub ok: bool,
    pub reason: Option<String>,
}

/// `(X, B)` with torus-invariant `B` is klt iff `K + B` is Q-Cartier and every
/// coefficient lies in `[0, 1)`.
pub fn klt_check(x: &Fan, b: &TorusDivisor) -> KltVerdict {
    let fail = |r: String| KltVerdict { ok: false, reason: Some(r) };
    if let Err(e) = b.check_len(x) {
        return fail(e.to_string());
    }
    for (i, c) in b.coeffs.iter().enumerate() {
        if c.is_negative() {
            return fail(format!("coefficient {} of ray {} is negative", fmt_rat(c), fmt_vec(x.ray(i))));
        }
        if *c >= Rat::one() {
            return fail(format!("coefficient {} of ray {} is not below 1", fmt_rat(c), fmt_vec(x.ray(i))));
        }
    }
    match cartier_data(x, &canonical(x).plus(b)) {
        Ok(_) => KltVerdict { ok: true, reason: None },
        Err(DivisorError::NotQCartier { cone }) => {
            fail(format!("K+B is not Q-Cartier on cone {}", fmt_vec(&x.max_cones()[cone])))
        }
        Err(e) => fail(e.to_string()),
    }
}

/// Discrepancy of the divisor over `v`: `a = −1 + φ(v)` where `φ` is linear on
/// each cone with `φ(u_ρ) = 1 − b_ρ`. A ray of the fan returns `−b_ρ`.
pub fn discrepancy(x: &Fan, b: &TorusDivisor, v: &IntVec) -> Result<Rat, DivisorError> {
    b.check_len(x)?;
    if let Some(i) = x.ray_index(v) {
        return Ok(-b.coeffs[i].clone());
    }
    let vr = rvec(v);
    let k = x.locate(&vr).ok_or_else(|| DivisorError::OutsideSupport(fmt_vec(v)))?;
    let cd = cartier_data(x, &canonical(x).plus(b))?;
    Ok(exact_core::dot_rat(cd.covector(k), &vr) - Rat::one())
}

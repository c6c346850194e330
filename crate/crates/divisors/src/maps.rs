use exact_core::{dot_rat, rvec, Rat};
use fan::{fmt_vec, ToricMap};

use crate::cartier::cartier_data;
use crate::{DivisorError, TorusDivisor};

/// `φ*D`: the coefficient at a source ray `u` is `−⟨m_σ, φ(u)⟩` for any target
/// cone `σ` containing `φ(u)`. Independence of `σ` is asserted.
pub fn pullback(m: &ToricMap, d: &TorusDivisor) -> Result<TorusDivisor, DivisorError> {
    let cd = cartier_data(&m.target, d)?;
    let mut coeffs = Vec::with_capacity(m.source.rays().len());
    for u in m.source.rays() {
        let img = rvec(&m.image(u));
        let mut value: Option<Rat> = None;
        for (k, c) in m.target.max_cones().iter().enumerate() {
            if !exact_core::cone_contains(&m.target.cone_rays(c), &img) {
                continue;
            }
            let v = -dot_rat(cd.covector(k), &img);
            match &value {
                None => value = Some(v),
                Some(w) => assert_eq!(*w, v, "support function is not continuous"),
            }
        }
        coeffs.push(value.ok_or_else(|| DivisorError::OutsideSupport(fmt_vec(&m.image(u))))?);
    }
    Ok(TorusDivisor::new(coeffs))
}

/// `φ_*D`: keeps the coefficients of source rays mapping onto target rays.
pub fn pushforward(m: &ToricMap, d: &TorusDivisor) -> Result<TorusDivisor, DivisorError> {
    d.check_len(&m.source)?;
    let images: Vec<_> = m.source.rays().iter().map(|u| m.image(u)).collect();
    let coeffs = m
        .target
        .rays()
        .iter()
        .map(|t| {
            images
                .iter()
                .position(|x| x == t)
                .map(|i| d.coeffs[i].clone())
                .ok_or_else(|| DivisorError::MissingRay(fmt_vec(t)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TorusDivisor::new(coeffs))
}

use divisors::{cartier_data, pushforward, TorusDivisor};
use fan::Fan;
use mori::{extremal_rays, intersect, walls, ExtremalRay};
use num_traits::Signed;

use crate::{
    contract, divisorial_certificate, flip, flip_diagram, step_certificate, ContractionKind, ContractionResult,
    FlipDiagram, MmpError, StepCertificate,
};

/// Bug guard; toric MMPs terminate.
pub const STEP_CAP: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpStep {
    pub ray: ExtremalRay,
    pub contraction: ContractionResult,
    pub certificate: StepCertificate,
    pub diagram: Option<FlipDiagram>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MmpEnd {
    Nef,
    MoriFibreSpace(ContractionResult),
}

/// `models[i]` carries `divisors[i]` and `boundaries[i]`; `steps[i]` goes from
/// model `i` to model `i + 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MmpRun {
    pub models: Vec<Fan>,
    pub divisors: Vec<TorusDivisor>,
    pub boundaries: Vec<TorusDivisor>,
    pub steps: Vec<MmpStep>,
    pub end: MmpEnd,
}

/// The first extremal ray, in order of smallest wall, on which `d` is negative.
pub fn negative_ray(x: &Fan, d: &TorusDivisor) -> Result<Option<ExtremalRay>, MmpError> {
    for r in extremal_rays(x)? {
        if intersect(x, d, &r.walls[0])?.is_negative() {
            return Ok(Some(r));
        }
    }
    Ok(None)
}

pub fn is_nef_on_walls(x: &Fan, d: &TorusDivisor) -> Result<bool, MmpError> {
    for w in walls(x)? {
        if intersect(x, d, &w)?.is_negative() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Runs a `D`-MMP, carrying the boundary `B` along for the step certificates.
pub fn run_mmp(x: &Fan, d: &TorusDivisor, b: &TorusDivisor) -> Result<MmpRun, MmpError> {
    d.check_len(x)?;
    b.check_len(x)?;
    let mut run = MmpRun {
        models: vec![x.clone()],
        divisors: vec![d.clone()],
        boundaries: vec![b.clone()],
        steps: Vec::new(),
        end: MmpEnd::Nef,
    };
    for _ in 0..STEP_CAP {
        let (xn, dn, bn) = (run.models.last().unwrap(), run.divisors.last().unwrap(), run.boundaries.last().unwrap());
        cartier_data(xn, dn)?;
        if is_nef_on_walls(xn, dn)? {
            return Ok(run);
        }
        let ray =
            negative_ray(xn, dn)?.ok_or_else(|| MmpError::Internal("not nef, yet no negative extremal ray".into()))?;
        let c = contract(xn, &ray)?;
        let (next, dnext, bnext, certificate, diagram) = match c.kind {
            ContractionKind::Fibration => {
                run.end = MmpEnd::MoriFibreSpace(c);
                return Ok(run);
            }
            ContractionKind::Divisorial { .. } => {
                let cert = divisorial_certificate(&c, dn)?;
                (c.target.clone(), pushforward(&c.map, dn)?, pushforward(&c.map, bn)?, cert, None)
            }
            ContractionKind::Flipping => {
                let (xp, _) = flip(xn, &ray, dn)?;
                let dg = flip_diagram(xn, &xp, &c.target)?;
                let cert = step_certificate(&dg, xn, dn, bn)?;
                (xp, dn.clone(), bn.clone(), cert, Some(dg))
            }
        };
        run.steps.push(MmpStep { ray, contraction: c, certificate, diagram });
        run.models.push(next);
        run.divisors.push(dnext);
        run.boundaries.push(bnext);
    }
    Err(MmpError::StepCap(STEP_CAP))
}

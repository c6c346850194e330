use exact_core::{cone_contains, rvec, IntVec};

use crate::geom::{separated, strongly_convex};
use crate::{fmt_vec, Fan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum DefectKind {
    NotStronglyConvex,
    RedundantGenerator,
    FaceOfAnother,
    IntersectionNotFace,
    UnusedRay,
}

impl DefectKind {
    pub fn describe(self) -> &'static str {
        match self {
            DefectKind::NotStronglyConvex => "not strongly convex",
            DefectKind::RedundantGenerator => "generator is not an extreme ray of its cone",
            DefectKind::FaceOfAnother => "cone is a face of another listed cone",
            DefectKind::IntersectionNotFace => "intersection not a face",
            DefectKind::UnusedRay => "ray lies in no cone",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Defect {
    pub kind: DefectKind,
    /// Offending maximal-cone indices (one or two), or the ray index for `UnusedRay`.
    pub cones: Vec<usize>,
}

impl std::fmt::Display for Defect {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.kind {
            DefectKind::UnusedRay => write!(f, "{} (ray {})", self.kind.describe(), self.cones[0]),
            _ => write!(f, "{} (cones {})", self.kind.describe(), fmt_vec(&self.cones)),
        }
    }
}

/// Checks every fan invariant; the defects name the offending cones.
pub fn validate(f: &Fan) -> Result<(), Vec<Defect>> {
    let mut defects = Vec::new();
    let rank = f.rank();
    let cones = f.max_cones();
    for (k, c) in cones.iter().enumerate() {
        let gens = f.cone_rays(c);
        if !strongly_convex(&gens, rank) {
            defects.push(Defect { kind: DefectKind::NotStronglyConvex, cones: vec![k] });
            continue;
        }
        for i in 0..gens.len() {
            let others: Vec<IntVec> =
                gens.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, g)| g.clone()).collect();
            if cone_contains(&others, &rvec(&gens[i])) {
                defects.push(Defect { kind: DefectKind::RedundantGenerator, cones: vec![k] });
                break;
            }
        }
    }
    for a in 0..cones.len() {
        for b in a + 1..cones.len() {
            let (ca, cb) = (&cones[a], &cones[b]);
            let a_in_b = ca.iter().all(|i| cb.contains(i));
            let b_in_a = cb.iter().all(|i| ca.contains(i));
            if a_in_b || b_in_a {
                defects.push(Defect { kind: DefectKind::FaceOfAnother, cones: vec![a, b] });
                continue;
            }
            let common: Vec<IntVec> = ca.iter().filter(|i| cb.contains(i)).map(|&i| f.ray(i).clone()).collect();
            let left: Vec<IntVec> = ca.iter().filter(|i| !cb.contains(i)).map(|&i| f.ray(i).clone()).collect();
            let right: Vec<IntVec> = cb.iter().filter(|i| !ca.contains(i)).map(|&i| f.ray(i).clone()).collect();
            if !separated(&common, &left, &right, rank) {
                defects.push(Defect { kind: DefectKind::IntersectionNotFace, cones: vec![a, b] });
            }
        }
    }
    for r in 0..f.rays().len() {
        if !cones.iter().any(|c| c.contains(&r)) {
            defects.push(Defect { kind: DefectKind::UnusedRay, cones: vec![r] });
        }
    }
    if defects.is_empty() {
        Ok(())
    } else {
        Err(defects)
    }
}

use exact_core::{extreme_rays, primitive_of_rat, IntVec};
use fan::Fan;

use crate::{curve_class, walls, CurveClass, MoriError, Wall};

/// An extremal ray of the cone of wall classes, with the walls whose classes
/// lie on it. `class` is the class of the first of those walls.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExtremalRay {
    pub class: CurveClass,
    pub direction: IntVec,
    pub walls: Vec<Wall>,
}

/// Extremal rays ordered by their smallest wall.
pub fn extremal_rays(x: &Fan) -> Result<Vec<ExtremalRay>, MoriError> {
    let ws = walls(x)?;
    if ws.is_empty() {
        return Ok(Vec::new());
    }
    let classes: Vec<CurveClass> = ws.iter().map(|w| curve_class(x, w)).collect();
    let dirs: Vec<IntVec> = classes.iter().map(|c| primitive_of_rat(&c.c)).collect::<Result<_, _>>()?;
    let mut distinct: Vec<IntVec> = Vec::new();
    for d in &dirs {
        if !distinct.contains(d) {
            distinct.push(d.clone());
        }
    }
    let ext = extreme_rays(&distinct)?;
    // walls are visited in order, so rays come out ordered by smallest wall
    let mut out: Vec<ExtremalRay> = Vec::new();
    for (i, d) in dirs.iter().enumerate() {
        if !ext.contains(d) {
            continue;
        }
        match out.iter_mut().find(|r| &r.direction == d) {
            Some(r) => r.walls.push(ws[i].clone()),
            None => {
                out.push(ExtremalRay { class: classes[i].clone(), direction: d.clone(), walls: vec![ws[i].clone()] })
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use fan::zoo;

    #[test]
    fn extremal_ray_counts() {
        let p2 = extremal_rays(&zoo::projective_space(2)).unwrap();
        assert_eq!(p2.len(), 1);
        assert_eq!(p2[0].walls.len(), 3);
        assert_eq!(extremal_rays(&zoo::blown_up_plane()).unwrap().len(), 2);
        let a = extremal_rays(&zoo::flip_side_a(2)).unwrap();
        assert_eq!(a.len(), 1);
        assert_eq!(a[0].walls.len(), 1);
        let pp = zoo::product(&zoo::projective_space(1), &zoo::projective_space(1));
        let r = extremal_rays(&pp).unwrap();
        assert_eq!(r.len(), 2);
        assert!(r.iter().all(|x| x.walls.len() == 2));
    }
}

use divisors::TorusDivisor;
use exact_core::{dot, int, invariant_factors, rank_fp, rank_q, IntMat, IntVec, Rat};
use fan::geom::combinations;
use fan::Fan;

use crate::homology::not_simplicial;
use crate::{CohomologyError, Field};

/// Degree-`m` part of the alternating Čech complex of `O(D)` on the cover by
/// maximal affine charts, and its cohomology in degrees `0..=rank`.
///
/// The chart of an intersection `σ_0 ∩ … ∩ σ_p` has a degree-`m` section iff
/// `⟨m, u_ρ⟩ ≥ −a_ρ` on every ray of the intersection.
pub fn cech_graded(x: &Fan, d: &TorusDivisor, m: &IntVec, field: Field) -> Result<Vec<usize>, CohomologyError> {
    if !x.is_simplicial() {
        return Err(not_simplicial(x));
    }
    d.check_len(x)?;
    let cones = x.max_cones();
    let section = |rays: &[usize]| rays.iter().all(|&i| Rat::from_integer(dot(m, x.ray(i))) >= -d.coeffs[i].clone());
    let meet = |idx: &[usize]| -> Vec<usize> {
        cones[idx[0]].iter().copied().filter(|r| idx[1..].iter().all(|&k| cones[k].contains(r))).collect()
    };
    let top = x.rank() + 1;
    // cochain bases C^0 .. C^{rank+1}
    let bases: Vec<Vec<Vec<usize>>> = (0..=top)
        .map(|p| {
            if p + 1 > cones.len() {
                return Vec::new();
            }
            combinations(cones.len(), p + 1).into_iter().filter(|idx| section(&meet(idx))).collect()
        })
        .collect();
    let rank_of = |p: usize| -> usize {
        // δ: C^p → C^{p+1}
        let (src, dst) = (&bases[p], &bases[p + 1]);
        if src.is_empty() || dst.is_empty() {
            return 0;
        }
        let mut mat = IntMat::zeros(dst.len(), src.len());
        for (row, tuple) in dst.iter().enumerate() {
            for j in 0..tuple.len() {
                let mut face = tuple.clone();
                face.remove(j);
                if let Ok(col) = src.binary_search(&face) {
                    mat.set(row, col, int(if j % 2 == 0 { 1 } else { -1 }));
                }
            }
        }
        let f = invariant_factors(&mat);
        match field {
            Field::Q => rank_q(&f),
            Field::Fp(p) => rank_fp(&f, p),
        }
    };
    let ranks: Vec<usize> = (0..top).map(rank_of).collect();
    Ok((0..top).map(|p| bases[p].len() - ranks[p] - if p == 0 { 0 } else { ranks[p - 1] }).collect())
}

use exact_core::{
    cone_contains, count_lattice_points, feasible, is_bounded, mixed_integer_point, rvec, smith_normal_form,
    IneqSystem, IntMat, IntVec,
};
use fan::Fan;

use crate::{DivisorError, TorusDivisor};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum H0 {
    Zero,
    Count(u64),
    Infinite,
}

/// `P_D = {m ∈ M_R : ⟨m, u_ρ⟩ ≥ −a_ρ}`; its lattice points index the sections of `O(D)`.
pub fn section_polytope(x: &Fan, d: &TorusDivisor) -> IneqSystem {
    let mut sys = IneqSystem::new(x.rank());
    for (u, a) in x.rays().iter().zip(&d.coeffs) {
        sys.ge(rvec(u), -a.clone());
    }
    sys
}

/// Dimension of `H⁰(X, O(D))` as the number of lattice points of `P_D`.
/// When `P_D` is unbounded, any lattice point yields infinitely many; the
/// search only needs integrality in the directions dual to the lineality of
/// `cone(rays)`, since in the complementary directions the recession cone of
/// `P_D` is full-dimensional.
pub fn h0_dim(x: &Fan, d: &TorusDivisor) -> Result<H0, DivisorError> {
    d.check_len(x)?;
    let sys = section_polytope(x, d);
    if feasible(&sys).is_none() {
        return Ok(H0::Zero);
    }
    if is_bounded(&sys)? {
        return Ok(match count_lattice_points(&sys)? {
            0 => H0::Zero,
            n => H0::Count(n),
        });
    }
    let all: Vec<IntVec> = x.rays().to_vec();
    let lineal: Vec<IntVec> = all.iter().filter(|u| cone_contains(&all, &rvec(&neg(u)))).cloned().collect();
    let (t, k) = if lineal.is_empty() {
        (IntMat::identity(x.rank()), 0)
    } else {
        let snf = smith_normal_form(&IntMat::from_rows(x.rank(), lineal)?);
        let k = snf.rank();
        (snf.v, k)
    };
    // m = T y; the first k coordinates of y determine m on the lineality space
    let moved = sys.change_coordinates(&t);
    Ok(match mixed_integer_point(&moved, k)? {
        Some(_) => H0::Infinite,
        None => H0::Zero,
    })
}

fn neg(u: &IntVec) -> IntVec {
    u.iter().map(|x| -x).collect()
}

use exact_core::{lcm_denominators, pair, Int, Rat};
use num_traits::{One, Signed};

use crate::geom::{cone_covector, facet_incidence, multiplicity};
use crate::ops::torus_factor;
use crate::{validate, Fan, FanError};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Properties {
    pub simplicial: bool,
    pub smooth: bool,
    pub complete: bool,
    pub support_convex: bool,
    /// Least `ℓ > 0` with `ℓK` Cartier, or `None` when `K` is not Q-Cartier.
    pub q_gorenstein_index_of_k: Option<Int>,
}

pub fn properties(f: &Fan) -> Result<Properties, FanError> {
    if let Err(d) = validate(f) {
        return Err(FanError::Invalid(d[0].to_string()));
    }
    let simplicial = f.is_simplicial();
    let smooth = simplicial && f.max_cones().iter().all(|c| multiplicity(&f.cone_rays(c), f.rank()).is_one());
    let support_convex = support_convex(f);
    let complete = f.is_pure_full() && facet_incidence(f).iter().all(|w| w.cones.len() == 2);
    Ok(Properties { simplicial, smooth, complete, support_convex, q_gorenstein_index_of_k: gorenstein_index(f) })
}

/// After removing the torus factor the fan must be pure of full dimension and
/// every boundary facet must support the whole fan.
pub(crate) fn support_convex(f: &Fan) -> bool {
    let reduced = torus_factor(f).reduced;
    if !reduced.is_pure_full() {
        return false;
    }
    facet_incidence(&reduced)
        .iter()
        .filter(|w| w.cones.len() == 1)
        .all(|w| reduced.rays().iter().all(|u| !pair(&w.normal, u).is_negative()))
}

fn gorenstein_index(f: &Fan) -> Option<Int> {
    let mut index = Int::one();
    for c in f.max_cones() {
        let ones = vec![Rat::one(); c.len()];
        let m = cone_covector(&f.cone_rays(c), &ones, f.rank())?;
        let l = lcm_denominators(&m);
        index = num_integer::Integer::lcm(&index, &l);
    }
    Some(index)
}

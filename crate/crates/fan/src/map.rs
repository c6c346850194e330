use exact_core::{cone_contains, feasible, rat_from_int, IneqSystem, IntMat, IntVec, Rat};
use num_traits::{One, Signed, Zero};

use crate::geom::{facet_incidence, rank_of};
use crate::{Fan, FanError};

/// A lattice map `N → N'` given by a `rank(target) × rank(source)` matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ToricMap {
    pub matrix: IntMat,
    pub source: Fan,
    pub target: Fan,
}

impl ToricMap {
    pub fn new(matrix: IntMat, source: Fan, target: Fan) -> Result<ToricMap, FanError> {
        if matrix.nrows() != target.rank() || matrix.ncols() != source.rank() {
            return Err(FanError::Invalid(format!(
                "map matrix is {}x{}, expected {}x{}",
                matrix.nrows(),
                matrix.ncols(),
                target.rank(),
                source.rank()
            )));
        }
        Ok(ToricMap { matrix, source, target })
    }

    pub fn identity(source: Fan, target: Fan) -> ToricMap {
        assert_eq!(source.rank(), target.rank());
        ToricMap { matrix: IntMat::identity(source.rank()), source, target }
    }

    pub fn image(&self, v: &[exact_core::Int]) -> IntVec {
        self.matrix.apply(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct MapCheck {
    pub well_defined: bool,
    pub proper: bool,
    pub birational: bool,
}

/// `proper` is `well_defined` plus `φ⁻¹(|Σ'|) ⊆ |Σ|`; `birational` is a
/// unimodular matrix plus equality of supports under it. Both containments are
/// decided exactly when every maximal target cone is full-dimensional and `φ`
/// is surjective over `Q`; otherwise the answer is the conservative `false`.
pub fn check_map(m: &ToricMap) -> MapCheck {
    let well_defined = well_defined(m);
    let p = m.target.rank();
    let surjective = m.matrix.rank_bareiss() == p;
    let target_full = m.target.is_pure_full();
    let decidable = surjective && target_full;

    let source = FullPart::of(&m.source, |u| u.clone());
    let preimage_inside =
        decidable && m.target.max_cones().iter().all(|t| preimage_in_union(&m.matrix, &m.target.cone_rays(t), &source));
    let proper = well_defined && preimage_inside;

    let square = m.matrix.nrows() == m.matrix.ncols();
    let unimodular = square && m.matrix.det().map(|d| d.abs().is_one()).unwrap_or(false);
    let birational = unimodular && preimage_inside && {
        let pushed = FullPart::of(&m.source, |u| m.image(u));
        let id = IntMat::identity(p);
        m.target.max_cones().iter().all(|t| preimage_in_union(&id, &m.target.cone_rays(t), &pushed))
    };
    MapCheck { well_defined, proper, birational }
}

fn well_defined(m: &ToricMap) -> bool {
    m.source.max_cones().iter().all(|c| {
        let images: Vec<Vec<Rat>> = c.iter().map(|&i| exact_core::rvec(&m.image(m.source.ray(i)))).collect();
        m.target.max_cones().iter().any(|t| {
            let gens = m.target.cone_rays(t);
            images.iter().all(|v| cone_contains(&gens, v))
        })
    })
}

/// Full-dimensional maximal cones of a fan and the facets bounding only one of
/// them, after applying `f` to every ray.
struct FullPart {
    cones: Vec<Vec<IntVec>>,
    boundary: Vec<Vec<IntVec>>,
}

impl FullPart {
    fn of(fan: &Fan, f: impl Fn(&IntVec) -> IntVec) -> FullPart {
        let cones = fan
            .max_cones()
            .iter()
            .filter(|c| rank_of(&fan.cone_rays(c)) == fan.rank())
            .map(|c| c.iter().map(|&i| f(fan.ray(i))).collect())
            .collect();
        let boundary = facet_incidence(fan)
            .into_iter()
            .filter(|w| w.cones.len() == 1)
            .map(|w| w.rays.iter().map(|&i| f(fan.ray(i))).collect())
            .collect();
        FullPart { cones, boundary }
    }
}

/// Whether `K = φ⁻¹(τ)` lies in the union of `pieces`, for `τ` full-dimensional
/// and `φ` surjective. `K` is then the closure of its interior, which is
/// connected, so it suffices that the interior meets the interior of some
/// piece and meets no boundary facet in its relative interior.
fn preimage_in_union(phi: &IntMat, tau: &[IntVec], part: &FullPart) -> bool {
    part.cones.iter().any(|s| relint_meets(phi, s, tau)) && !part.boundary.iter().any(|f| relint_meets(phi, f, tau))
}

/// `∃ λ > 0, μ > 0` with `φ(Σ λ_i g_i) = Σ μ_j t_j`.
fn relint_meets(phi: &IntMat, gens: &[IntVec], tau: &[IntVec]) -> bool {
    let (a, b) = (gens.len(), tau.len());
    let images: Vec<IntVec> = gens.iter().map(|g| phi.apply(g)).collect();
    let mut sys = IneqSystem::new(a + b);
    for i in 0..phi.nrows() {
        let mut row: Vec<Rat> = images.iter().map(|g| rat_from_int(&g[i])).collect();
        row.extend(tau.iter().map(|t| -rat_from_int(&t[i])));
        sys.equal(row, Rat::zero());
    }
    for k in 0..a + b {
        let mut e = vec![Rat::zero(); a + b];
        e[k] = Rat::one();
        sys.gt(e, Rat::zero());
    }
    feasible(&sys).is_some()
}

use divisors::{canonical, cartier_data, klt_check, positivity, principal, TorusDivisor};
use exact_core::{feasible, fmt_rat, rat_from_int, rvec, IneqSystem, IntVec, Rat};
use fan::{fmt_vec, properties, Fan};
use num_traits::{One, Zero};

/// Which of the two vanishing hypotheses an instance claims.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// `D ∼_Q K + B` with `B` effective, big and klt, witnessed by characters.
    Hyp1,
    /// `D − (K + B)` nef and big with `(X, B)` klt.
    Hyp2,
}

impl Mode {
    pub fn number(self) -> u8 {
        match self {
            Mode::Hyp1 => 1,
            Mode::Hyp2 => 2,
        }
    }
}

/// One term `q · div(χ^m)` of a linear-equivalence witness.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub q: Rat,
    pub m: IntVec,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    pub label: String,
    pub x: Fan,
    pub b: TorusDivisor,
    pub d: TorusDivisor,
    pub mode: Mode,
    pub witness: Vec<Witness>,
}

impl Instance {
    /// `D − K − B`.
    pub fn excess(&self) -> TorusDivisor {
        self.d.minus(&canonical(&self.x)).minus(&self.b)
    }

    /// `Σ q_j div(m_j)`.
    pub fn witness_sum(&self) -> TorusDivisor {
        self.witness.iter().fold(TorusDivisor::zero(self.x.rays().len()), |acc, w| {
            acc.plus(&principal(&self.x, &rvec(&w.m)).scaled(&w.q))
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypothesisCheck {
    pub ok: bool,
    /// One line per failed condition.
    pub notes: Vec<String>,
}

/// An ample divisor relative to the affinization of `|Σ|`, or `None` when the
/// fan admits no strictly convex support function.
///
/// One LP in the coefficients `a_ρ` and a covector `m_σ` per maximal cone:
/// `⟨m_σ, u_ρ⟩ = −a_ρ` on the rays of `σ` and `> −a_ρ` on every other ray.
pub fn ample_divisor(x: &Fan) -> Option<TorusDivisor> {
    let (n, r, k) = (x.rays().len(), x.rank(), x.max_cones().len());
    if n == 0 {
        return None;
    }
    let dim = n + r * k;
    let mut sys = IneqSystem::new(dim);
    for (c, cone) in x.max_cones().iter().enumerate() {
        for (i, u) in x.rays().iter().enumerate() {
            let mut row = vec![Rat::zero(); dim];
            row[i] = Rat::one();
            for (j, uj) in u.iter().enumerate() {
                row[n + c * r + j] = rat_from_int(uj);
            }
            if cone.binary_search(&i).is_ok() {
                sys.equal(row, Rat::zero());
            } else {
                sys.gt(row, Rat::zero());
            }
        }
    }
    let sol = feasible(&sys)?;
    let a = TorusDivisor::new(sol[..n].to_vec());
    positivity(x, &a).ok().filter(|p| p.ample).map(|_| a)
}

/// Re-checks the hypothesis of an instance from scratch.
///
/// Common to both modes: the fan is valid with convex support and projective
/// over its affinization, `D` is an integral Q-Cartier divisor and `(X, B)` is
/// klt. Mode 1 additionally needs `B` big and Q-Cartier (it serves as the big
/// part of the boundary) and `D − K − B` equal to the witness sum; mode 2 needs
/// `D − K − B` nef and big.
pub fn check_hypothesis(inst: &Instance) -> HypothesisCheck {
    let mut notes = Vec::new();
    let x = &inst.x;
    let n = x.rays().len();
    if inst.b.len() != n || inst.d.len() != n {
        notes.push(format!("divisors have {} and {} coefficients for {n} rays", inst.b.len(), inst.d.len()));
        return HypothesisCheck { ok: false, notes };
    }
    match properties(x) {
        Err(e) => notes.push(format!("fan: {e}")),
        Ok(p) if !p.support_convex => notes.push("fan support is not convex".into()),
        Ok(_) => {
            if ample_divisor(x).is_none() {
                notes.push("fan is not projective over its affinization".into());
            }
        }
    }
    if !inst.d.is_integral() {
        notes.push("D is not integral".into());
    }
    if let Err(e) = cartier_data(x, &inst.d) {
        notes.push(format!("D: {e}"));
    }
    let klt = klt_check(x, &inst.b);
    if !klt.ok {
        notes.push(format!("(X, B) is not klt: {}", klt.reason.unwrap_or_default()));
    }
    let excess = inst.excess();
    match inst.mode {
        Mode::Hyp1 => {
            match positivity(x, &inst.b) {
                Ok(p) if !p.big => notes.push("B is not big".into()),
                Err(e) => notes.push(format!("B: {e}")),
                Ok(_) => {}
            }
            let sum = inst.witness_sum();
            if let Some(i) = (0..n).find(|&i| excess.coeffs[i] != sum.coeffs[i]) {
                notes.push(format!(
                    "witness mismatch at ray {}: D - K - B has {}, the witness gives {}",
                    fmt_vec(x.ray(i)),
                    fmt_rat(&excess.coeffs[i]),
                    fmt_rat(&sum.coeffs[i])
                ));
            }
            if inst.witness.iter().any(|w| w.m.len() != x.rank()) {
                notes.push("witness character has the wrong length".into());
            }
        }
        Mode::Hyp2 => match positivity(x, &excess) {
            Ok(p) => {
                if !p.nef {
                    notes.push("D - (K + B) is not nef".into());
                }
                if !p.big {
                    notes.push("D - (K + B) is not big".into());
                }
            }
            Err(e) => notes.push(format!("D - (K + B): {e}")),
        },
    }
    HypothesisCheck { ok: notes.is_empty(), notes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_core::{ivec, rat};
    use fan::zoo;

    fn plane(b: TorusDivisor, d: TorusDivisor, mode: Mode, witness: Vec<Witness>) -> Instance {
        Instance { label: "p2".into(), x: zoo::projective_space(2), b, d, mode, witness }
    }

    #[test]
    fn ample_divisors_exist_on_projective_fans() {
        for x in [
            zoo::projective_space(2),
            zoo::blown_up_plane(),
            zoo::weighted_p112(),
            zoo::cube_faces(),
            zoo::flip_side_a(2),
        ] {
            let a = ample_divisor(&x).unwrap();
            assert!(positivity(&x, &a).unwrap().ample);
        }
        // a single cone has no curves, so every divisor is relatively ample
        let cone = zoo::flip_base(1);
        assert!(ample_divisor(&cone).is_some());
    }

    #[test]
    fn plane_hypotheses() {
        let third = TorusDivisor::new(vec![rat(2, 3); 3]);
        let ok = plane(third.clone(), TorusDivisor::zero(3), Mode::Hyp2, vec![]);
        assert!(check_hypothesis(&ok).ok);
        // D = K with B = 0: D - K - B = 0 is not big
        let control = plane(TorusDivisor::zero(3), canonical(&zoo::projective_space(2)), Mode::Hyp2, vec![]);
        let c = check_hypothesis(&control);
        assert!(!c.ok);
        assert!(c.notes.iter().any(|n| n.contains("not big")));
        // a non-integral D
        let frac = plane(third.clone(), TorusDivisor::new(vec![rat(1, 2), rat(0, 1), rat(0, 1)]), Mode::Hyp2, vec![]);
        assert!(!check_hypothesis(&frac).ok);
    }

    #[test]
    fn mode_one_needs_an_exact_witness() {
        // D = -D_0 and B = (2/3)(D_0 + D_1 + D_2): D - K - B = (1/3) div(χ^(1,1))
        let x = zoo::projective_space(2);
        let d = TorusDivisor::prime(3, 0).scaled(&rat(-1, 1));
        let b = TorusDivisor::new(vec![rat(2, 3); 3]);
        let m = ivec(&[1, 1]);
        let good = plane(b.clone(), d.clone(), Mode::Hyp1, vec![Witness { q: rat(1, 3), m: m.clone() }]);
        assert_eq!(good.excess(), principal(&x, &rvec(&m)).scaled(&rat(1, 3)));
        let check = check_hypothesis(&good);
        assert!(check.ok, "{:?}", check.notes);
        let bad = plane(b, d, Mode::Hyp1, vec![Witness { q: rat(1, 2), m }]);
        assert!(check_hypothesis(&bad).notes.iter().any(|n| n.contains("witness mismatch")));
    }
}

use divisors::{discrepancy, pullback, pushforward, Rounding, TorusDivisor};
use exact_core::{floor, fmt_rat, rat_from_int, Int, Rat};
use fan::Fan;
use num_traits::{One, Signed, Zero};

use crate::{ContractionKind, ContractionResult, FlipDiagram, MmpError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlipCase {
    /// `−a + b < 1`
    Low,
    /// `−a + b ≥ 1`
    High,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum StepCertificate {
    /// `D_n = f*D_{n+1} + a E`.
    Divisorial { a: Rat },
    /// `a`: discrepancy of `(X_n, B_n)` at `E`; `b`: `⌈ψ*D_n⌉ − ψ*D_n` at `E`;
    /// `c`: `ψ*D_n − ψ'*D_{n+1}` at `E`. `d_y` is the divisor on the common
    /// blow-up whose pushforwards recover `D_n` and `D_{n+1}`.
    Flip { a: Rat, b: Rat, c: Rat, case: FlipCase, m_shift: Int, d_y: TorusDivisor },
}

impl StepCertificate {
    /// Every inequality the certificate is supposed to satisfy and does not.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            StepCertificate::Divisorial { a } => {
                if !a.is_positive() {
                    out.push(format!("divisorial a = {} is not positive", fmt_rat(a)));
                }
            }
            StepCertificate::Flip { a, b, c, case, m_shift, .. } => {
                if *a <= -Rat::one() {
                    out.push(format!("a = {} is not > -1", fmt_rat(a)));
                }
                if b.is_negative() || *b >= Rat::one() {
                    out.push(format!("b = {} is not in [0,1)", fmt_rat(b)));
                }
                if !c.is_positive() {
                    out.push(format!("c = {} is not positive", fmt_rat(c)));
                }
                let t = b - a;
                match case {
                    FlipCase::Low => {
                        let s = &t + rat_from_int(m_shift);
                        if m_shift.is_negative() || s.is_negative() || s >= Rat::one() {
                            out.push(format!("-a+b+m = {} is not in [0,1)", fmt_rat(&s)));
                        }
                    }
                    FlipCase::High => {
                        let neg_a = -a.clone();
                        if !(neg_a.is_positive() && neg_a < Rat::one() && b.is_positive()) {
                            out.push(format!("high case with a = {}, b = {}", fmt_rat(a), fmt_rat(b)));
                        }
                    }
                }
            }
        }
        out
    }
}

fn reject(c: StepCertificate) -> Result<StepCertificate, MmpError> {
    let v = c.violations();
    if v.is_empty() {
        Ok(c)
    } else {
        Err(MmpError::Certificate(v.join("; ")))
    }
}

/// Certificate of a divisorial contraction of `x` carrying `d`.
pub fn divisorial_certificate(c: &ContractionResult, d: &TorusDivisor) -> Result<StepCertificate, MmpError> {
    let ContractionKind::Divisorial { removed } = c.kind else {
        return Err(MmpError::Internal("not a divisorial contraction".into()));
    };
    let down = pushforward(&c.map, d)?;
    let up = pullback(&c.map, &down)?;
    let rest = d.minus(&up);
    if rest.coeffs.iter().enumerate().any(|(i, v)| i != removed && !v.is_zero()) {
        return Err(MmpError::Internal("D_n − f*D_{n+1} is not supported on E".into()));
    }
    reject(StepCertificate::Divisorial { a: rest.coeffs[removed].clone() })
}

/// Certificate of a flip step from `(x, d, b)` through the diagram `dg`.
pub fn step_certificate(
    dg: &FlipDiagram,
    x: &Fan,
    d: &TorusDivisor,
    boundary: &TorusDivisor,
) -> Result<StepCertificate, MmpError> {
    let a = discrepancy(x, boundary, &dg.e_ray)?;
    let up = pullback(&dg.psi, d)?;
    let e = dg.e_index;
    let b = up.round_defect(Rounding::Up).coeffs[e].clone();
    let c = -dg.kappa(d);
    let t = &b - &a;
    let (case, m_shift, d_y) = if t < Rat::one() {
        let m = -floor(&t);
        let mut dy = up.round(Rounding::Up);
        dy.coeffs[e] += rat_from_int(&m);
        (FlipCase::Low, m, dy)
    } else {
        (FlipCase::High, Int::zero(), up.round(Rounding::Down))
    };
    reject(StepCertificate::Flip { a, b, c, case, m_shift, d_y })
}

//! Scalar and vector helpers over `BigInt` / `BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::ExactError;

pub type Int = BigInt;
pub type Rat = BigRational;
/// A lattice vector (an element of N or M).
pub type IntVec = Vec<BigInt>;

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}

pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_from_int(n: &Int) -> Rat {
    BigRational::from_integer(n.clone())
}

pub fn ivec(v: &[i64]) -> IntVec {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

pub fn rvec(v: &[Int]) -> Vec<Rat> {
    v.iter().map(rat_from_int).collect()
}

pub fn dot(a: &[Int], b: &[Int]) -> Int {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn dot_rat(a: &[Rat], b: &[Rat]) -> Rat {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Rat::zero(), |acc, (x, y)| acc + x * y)
}

/// ⟨m, u⟩ for a rational covector and an integral vector.
pub fn pair(m: &[Rat], u: &[Int]) -> Rat {
    debug_assert_eq!(m.len(), u.len());
    m.iter().zip(u).fold(Rat::zero(), |acc, (x, y)| acc + x * rat_from_int(y))
}

pub fn gcd_all(v: &[Int]) -> Int {
    v.iter().fold(Int::zero(), |g, x| g.gcd(x))
}

pub fn is_zero_vec<T: Zero>(v: &[T]) -> bool {
    v.iter().all(Zero::is_zero)
}

/// `v / gcd(v)`. Fails on the zero vector.
pub fn primitive(v: &[Int]) -> Result<IntVec, ExactError> {
    let g = gcd_all(v);
    if g.is_zero() {
        return Err(ExactError::NotADirection);
    }
    Ok(v.iter().map(|x| x / &g).collect())
}

pub fn lcm_denominators(v: &[Rat]) -> Int {
    v.iter().fold(Int::one(), |l, x| l.lcm(x.denom()))
}

/// The primitive integer vector on the ray spanned by a nonzero rational vector.
pub fn primitive_of_rat(v: &[Rat]) -> Result<IntVec, ExactError> {
    let l = lcm_denominators(v);
    let scaled: Vec<Int> = v.iter().map(|x| (x * rat_from_int(&l)).to_integer()).collect();
    primitive(&scaled)
}

pub fn ceil(x: &Rat) -> Int {
    x.ceil().to_integer()
}

pub fn floor(x: &Rat) -> Int {
    x.floor().to_integer()
}

/// Parses `"p"` or `"p/q"` with `q > 0`.
pub fn parse_rat(s: &str) -> Result<Rat, ExactError> {
    let bad = |why| ExactError::BadRational(s.to_string(), why);
    let t = s.trim();
    let (num, den) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (t, None),
    };
    let n: Int = num.parse().map_err(|_| bad("numerator is not an integer"))?;
    let d: Int = match den {
        None => Int::one(),
        Some(d) => {
            if d.starts_with('-') || d.starts_with('\u{2212}') {
                return Err(bad("denominator must be positive"));
            }
            d.parse().map_err(|_| bad("denominator is not an integer"))?
        }
    };
    if !d.is_positive() {
        return Err(bad("denominator must be positive"));
    }
    Ok(BigRational::new(n, d))
}

/// Canonical text form: `"p"` for integers, `"p/q"` otherwise (reduced, q > 0).
pub fn fmt_rat(x: &Rat) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

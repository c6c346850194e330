//! Dense integer and rational matrices, rational solving, and ranks.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{rat_from_int, Int, Rat};
use crate::ExactError;

/// Integer matrix with explicit shape (so 0×n and m×0 are representable).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IntMat {
    nrows: usize,
    ncols: usize,
    data: Vec<Vec<Int>>,
}

impl IntMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IntMat { nrows, ncols, data: vec![vec![Int::zero(); ncols]; nrows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = Int::one();
        }
        m
    }

    /// Builds from rows; `ncols` is needed when there are no rows.
    pub fn from_rows(ncols: usize, rows: Vec<Vec<Int>>) -> Result<Self, ExactError> {
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(ExactError::DimensionMismatch(format!(
                "row of length {} in a matrix with {} columns",
                r.len(),
                ncols
            )));
        }
        Ok(IntMat { nrows: rows.len(), ncols, data: rows })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let ncols = rows.first().map_or(0, |r| r.len());
        let data = rows.iter().map(|r| r.iter().map(|&x| Int::from(x)).collect()).collect();
        Self::from_rows(ncols, data).expect("ragged literal matrix")
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Int>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Int] {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> &Int {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Int) {
        self.data[i][j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                t.data[j][i] = self.data[i][j].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &IntMat) -> Result<IntMat, ExactError> {
        if self.ncols != other.nrows {
            return Err(ExactError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut out = Self::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let a = &self.data[i][k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    out.data[i][j] += a * &other.data[k][j];
                }
            }
        }
        Ok(out)
    }

    pub fn apply(&self, v: &[Int]) -> Vec<Int> {
        assert_eq!(v.len(), self.ncols, "vector length does not match matrix");
        self.data.iter().map(|r| crate::arith::dot(r, v)).collect()
    }

    pub fn to_rat(&self) -> RatMat {
        RatMat {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(|r| r.iter().map(rat_from_int).collect()).collect(),
        }
    }

    /// Determinant by fraction-free Bareiss elimination.
    pub fn det(&self) -> Result<Int, ExactError> {
        if self.nrows != self.ncols {
            return Err(ExactError::DimensionMismatch("determinant of a non-square matrix".into()));
        }
        let n = self.nrows;
        if n == 0 {
            return Ok(Int::one());
        }
        let mut a = self.data.clone();
        let mut sign = Int::one();
        let mut prev = Int::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return Ok(Int::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = v / &prev;
                }
                a[i][k] = Int::zero();
            }
            prev = a[k][k].clone();
        }
        Ok(sign * &a[n - 1][n - 1])
    }

    /// Rank over Q by fraction-free elimination.
    pub fn rank_bareiss(&self) -> usize {
        let mut a = self.data.clone();
        let (m, n) = (self.nrows, self.ncols);
        let mut prev = Int::one();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !a[i][c].is_zero()) else { continue };
            a.swap(p, r);
            for i in r + 1..m {
                for j in c + 1..n {
                    let v = &a[i][j] * &a[r][c] - &a[i][c] * &a[r][j];
                    a[i][j] = v / &prev;
                }
                a[i][c] = Int::zero();
            }
            prev = a[r][c].clone();
            r += 1;
        }
        r
    }

    /// Rank over the prime field F_p by Gaussian elimination on residues.
    pub fn rank_mod_p(&self, p: u64) -> usize {
        assert!(p >= 2, "modulus must be a prime");
        let pm = Int::from(p);
        let mut a: Vec<Vec<u64>> = self
            .data
            .iter()
            .map(|r| {
                r.iter()
                    .map(|x| {
                        let v = x.mod_floor(&pm);
                        u64::try_from(&v).expect("residue fits in u64")
                    })
                    .collect()
            })
            .collect();
        let (m, n) = (self.nrows, self.ncols);
        let inv = |x: u64| -> u64 { pow_mod(x, p - 2, p) };
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(piv) = (r..m).find(|&i| a[i][c] != 0) else { continue };
            a.swap(piv, r);
            let s = inv(a[r][c]);
            for j in c..n {
                a[r][j] = mul_mod(a[r][j], s, p);
            }
            for i in 0..m {
                if i != r && a[i][c] != 0 {
                    let f = a[i][c];
                    for j in c..n {
                        let sub = mul_mod(f, a[r][j], p);
                        a[i][j] = (a[i][j] + p - sub) % p;
                    }
                }
            }
            r += 1;
        }
        r
    }
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    acc
}

/// Rectangular matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatMat {
    nrows: usize,
    ncols: usize,
    data: Vec<Vec<Rat>>,
}

impl RatMat {
    pub fn from_rows(ncols: usize, rows: Vec<Vec<Rat>>) -> Result<Self, ExactError> {
        if let Some(r) = rows.iter().find(|r| r.len() != ncols) {
            return Err(ExactError::DimensionMismatch(format!(
                "row of length {} in a matrix with {} columns",
                r.len(),
                ncols
            )));
        }
        Ok(RatMat { nrows: rows.len(), ncols, data: rows })
    }

    pub fn identity(n: usize) -> Self {
        IntMat::identity(n).to_rat()
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[Vec<Rat>] {
        &self.data
    }

    /// Reduced row echelon form; returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let (m, n) = (self.nrows, self.ncols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..n {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| !self.data[i][c].is_zero()) else { continue };
            self.data.swap(p, r);
            let inv = self.data[r][c].recip();
            for j in c..n {
                let v = &self.data[r][j] * &inv;
                self.data[r][j] = v;
            }
            for i in 0..m {
                if i != r && !self.data[i][c].is_zero() {
                    let f = self.data[i][c].clone();
                    for j in c..n {
                        let v = &self.data[r][j] * &f;
                        self.data[i][j] -= v;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref().len()
    }

    /// Basis of {x : A x = 0}.
    pub fn kernel(&self) -> Vec<Vec<Rat>> {
        match solve_rational(self, &vec![Rat::zero(); self.nrows]) {
            Ok(Solution::Solved { kernel, .. }) => kernel,
            _ => unreachable!("homogeneous systems are consistent"),
        }
    }
}

/// Result of [`solve_rational`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Solution {
    /// No solution exists.
    Inconsistent,
    /// `particular + span(kernel)`; the kernel is empty when the solution is unique.
    Solved { particular: Vec<Rat>, kernel: Vec<Vec<Rat>> },
}

impl Solution {
    pub fn particular(&self) -> Option<&[Rat]> {
        match self {
            Solution::Solved { particular, .. } => Some(particular),
            Solution::Inconsistent => None,
        }
    }

    pub fn is_unique(&self) -> bool {
        matches!(self, Solution::Solved { kernel, .. } if kernel.is_empty())
    }
}

/// Solves `A x = b` exactly. Free variables are set to zero in the particular
/// solution; kernel vectors are scaled so their first nonzero entry is positive.
pub fn solve_rational(a: &RatMat, b: &[Rat]) -> Result<Solution, ExactError> {
    if b.len() != a.nrows {
        return Err(ExactError::DimensionMismatch(format!(
            "{} equations but right-hand side of length {}",
            a.nrows,
            b.len()
        )));
    }
    let n = a.ncols;
    let rows = a
        .data
        .iter()
        .zip(b)
        .map(|(r, bi)| {
            let mut row = r.clone();
            row.push(bi.clone());
            row
        })
        .collect();
    let mut aug = RatMat { nrows: a.nrows, ncols: n + 1, data: rows };
    let pivots = aug.rref();
    if pivots.last() == Some(&n) {
        return Ok(Solution::Inconsistent);
    }
    let mut particular = vec![Rat::zero(); n];
    for (r, &c) in pivots.iter().enumerate() {
        particular[c] = aug.data[r][n].clone();
    }
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let kernel = free
        .iter()
        .map(|&f| {
            let mut v = vec![Rat::zero(); n];
            v[f] = Rat::one();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = -aug.data[r][f].clone();
            }
            if v.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative()) {
                for x in v.iter_mut() {
                    *x = -x.clone();
                }
            }
            v
        })
        .collect();
    Ok(Solution::Solved { particular, kernel })
}

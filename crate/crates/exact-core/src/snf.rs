//! Smith normal form with unimodular transforms.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::Int;
use crate::matrix::IntMat;

/// `u · a · v = s` with `s` diagonal, `d_i | d_{i+1}`, `u`, `v` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Snf {
    pub s: IntMat,
    pub u: IntMat,
    pub v: IntMat,
}

impl Snf {
    /// The diagonal entries `d_0, d_1, …` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<Int> {
        (0..self.s.nrows().min(self.s.ncols())).map(|i| self.s.get(i, i).clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|d| !d.is_zero()).count()
    }
}

pub fn smith_normal_form(a: &IntMat) -> Snf {
    let mut w = Work::new(a, true);
    w.run();
    Snf { s: w.s, u: w.u, v: w.v }
}

/// Only the invariant factors `d_i` (nonzero ones first, zeros trailing).
pub fn invariant_factors(a: &IntMat) -> Vec<Int> {
    let mut w = Work::new(a, false);
    w.run();
    (0..w.m.min(w.n)).map(|i| w.s.get(i, i).clone()).collect()
}

/// Rank over Q from invariant factors.
pub fn rank_q(factors: &[Int]) -> usize {
    factors.iter().filter(|d| !d.is_zero()).count()
}

/// Rank over F_p from invariant factors: the `d_i` that stay units mod p.
pub fn rank_fp(factors: &[Int], p: u64) -> usize {
    let p = Int::from(p);
    factors.iter().filter(|d| !d.is_zero() && !d.is_multiple_of(&p)).count()
}

struct Work {
    m: usize,
    n: usize,
    s: IntMat,
    u: IntMat,
    v: IntMat,
    track: bool,
}

impl Work {
    fn new(a: &IntMat, track: bool) -> Self {
        let (m, n) = (a.nrows(), a.ncols());
        let (u, v) =
            if track { (IntMat::identity(m), IntMat::identity(n)) } else { (IntMat::zeros(0, 0), IntMat::zeros(0, 0)) };
        Work { m, n, s: a.clone(), u, v, track }
    }

    fn s(&self, i: usize, j: usize) -> &Int {
        self.s.get(i, j)
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i == k {
            return;
        }
        for j in 0..self.n {
            let a = self.s.get(i, j).clone();
            let b = self.s.get(k, j).clone();
            self.s.set(i, j, b);
            self.s.set(k, j, a);
        }
        if self.track {
            for j in 0..self.m {
                let a = self.u.get(i, j).clone();
                let b = self.u.get(k, j).clone();
                self.u.set(i, j, b);
                self.u.set(k, j, a);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j == k {
            return;
        }
        for i in 0..self.m {
            let a = self.s.get(i, j).clone();
            let b = self.s.get(i, k).clone();
            self.s.set(i, j, b);
            self.s.set(i, k, a);
        }
        if self.track {
            for i in 0..self.n {
                let a = self.v.get(i, j).clone();
                let b = self.v.get(i, k).clone();
                self.v.set(i, j, b);
                self.v.set(i, k, a);
            }
        }
    }

    /// row_i -= q * row_k
    fn row_sub(&mut self, i: usize, k: usize, q: &Int) {
        for j in 0..self.n {
            let v = self.s.get(i, j) - q * self.s.get(k, j);
            self.s.set(i, j, v);
        }
        if self.track {
            for j in 0..self.m {
                let v = self.u.get(i, j) - q * self.u.get(k, j);
                self.u.set(i, j, v);
            }
        }
    }

    /// col_j -= q * col_k
    fn col_sub(&mut self, j: usize, k: usize, q: &Int) {
        for i in 0..self.m {
            let v = self.s.get(i, j) - q * self.s.get(i, k);
            self.s.set(i, j, v);
        }
        if self.track {
            for i in 0..self.n {
                let v = self.v.get(i, j) - q * self.v.get(i, k);
                self.v.set(i, j, v);
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        self.row_sub(i, i, &Int::from(2));
    }

    fn run(&mut self) {
        let (m, n) = (self.m, self.n);
        for t in 0..m.min(n) {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..m {
                for j in t..n {
                    let x = self.s(i, j);
                    if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < self.s(bi, bj).abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else { return };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                let mut dirty = false;
                for i in t + 1..m {
                    if !self.s(i, t).is_zero() {
                        let q = self.s(i, t).div_floor(self.s(t, t));
                        self.row_sub(i, t, &q);
                        dirty |= !self.s(i, t).is_zero();
                    }
                }
                for j in t + 1..n {
                    if !self.s(t, j).is_zero() {
                        let q = self.s(t, j).div_floor(self.s(t, t));
                        self.col_sub(j, t, &q);
                        dirty |= !self.s(t, j).is_zero();
                    }
                }
                if dirty {
                    // a remainder smaller than the pivot survives: move it in
                    let mut best = (t, t);
                    for i in t + 1..m {
                        let x = self.s(i, t);
                        if !x.is_zero() && x.abs() < self.s(best.0, best.1).abs() {
                            best = (i, t);
                        }
                    }
                    for j in t + 1..n {
                        let x = self.s(t, j);
                        if !x.is_zero() && x.abs() < self.s(best.0, best.1).abs() {
                            best = (t, j);
                        }
                    }
                    self.swap_rows(t, best.0);
                    self.swap_cols(t, best.1);
                    continue;
                }
                let bad = (t + 1..m)
                    .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| !self.s(i, j).is_multiple_of(self.s(t, t)));
                match bad {
                    Some((i, _)) => self.row_sub(t, i, &-Int::one()),
                    None => break,
                }
            }
            if self.s(t, t).is_negative() {
                self.negate_row(t);
            }
        }
    }
}

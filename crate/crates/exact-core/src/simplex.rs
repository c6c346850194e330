//! Two-phase dense tableau simplex over exact rationals with Bland's rule.
//!
//! Internal engine behind feasibility, optimisation and cone membership.

use num_traits::{One, Signed, Zero};

use crate::arith::Rat;

pub(crate) enum Lp {
    Infeasible,
    Unbounded,
    Optimal { point: Vec<Rat>, value: Rat },
}

/// Maximise `obj · x` subject to `⟨a_i, x⟩ ≥ c_i` for every row, `x` free.
pub(crate) fn maximize(n: usize, rows: &[(Vec<Rat>, Rat)], obj: &[Rat]) -> Lp {
    debug_assert_eq!(obj.len(), n);
    let m = rows.len();
    // columns: x+ (n), x- (n), slack (m), artificials (k), rhs
    let needs_art: Vec<bool> = rows.iter().map(|(_, c)| c.is_positive()).collect();
    let k = needs_art.iter().filter(|&&b| b).count();
    let ncols = 2 * n + m + k;
    let rhs = ncols;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 0;
    for (i, (a, c)) in rows.iter().enumerate() {
        debug_assert_eq!(a.len(), n);
        let mut row = vec![Rat::zero(); ncols + 1];
        // ⟨a, x+⟩ − ⟨a, x−⟩ − s_i = c_i
        let sign = if needs_art[i] { Rat::one() } else { -Rat::one() };
        for j in 0..n {
            if !a[j].is_zero() {
                row[j] = &a[j] * &sign;
                row[n + j] = -(&a[j] * &sign);
            }
        }
        row[2 * n + i] = -sign.clone();
        row[rhs] = c * &sign;
        if needs_art[i] {
            row[2 * n + m + art] = Rat::one();
            basis.push(2 * n + m + art);
            art += 1;
        } else {
            basis.push(2 * n + i);
        }
        t.push(row);
    }
    let first_art = 2 * n + m;
    let mut tab = Tableau { t, basis, ncols, rhs, banned_from: ncols };

    if k > 0 {
        let mut cost = vec![Rat::zero(); ncols];
        for c in cost.iter_mut().skip(first_art) {
            *c = -Rat::one();
        }
        let (obj_row, _) = tab.optimize(&cost).expect("phase one is bounded");
        if obj_row[rhs].is_negative() {
            return Lp::Infeasible;
        }
        // drive remaining (zero-valued) artificials out of the basis
        for i in 0..tab.t.len() {
            if tab.basis[i] >= first_art {
                if let Some(j) = (0..first_art).find(|&j| !tab.t[i][j].is_zero()) {
                    tab.pivot(i, j);
                }
            }
        }
        tab.banned_from = first_art;
    }

    let mut cost = vec![Rat::zero(); ncols];
    for j in 0..n {
        cost[j] = obj[j].clone();
        cost[n + j] = -obj[j].clone();
    }
    match tab.optimize(&cost) {
        None => Lp::Unbounded,
        Some((obj_row, z)) => {
            let point = (0..n).map(|j| &z[j] - &z[n + j]).collect();
            Lp::Optimal { point, value: obj_row[rhs].clone() }
        }
    }
}

struct Tableau {
    t: Vec<Vec<Rat>>,
    basis: Vec<usize>,
    ncols: usize,
    rhs: usize,
    /// Columns at or beyond this index may not enter the basis.
    banned_from: usize,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.t[r][c].recip();
        for x in self.t[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let prow = self.t[r].clone();
        for (i, row) in self.t.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *x -= &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Maximises `cost · z`; returns the final reduced-cost row and the basic solution,
    /// or `None` when unbounded.
    fn optimize(&mut self, cost: &[Rat]) -> Option<(Vec<Rat>, Vec<Rat>)> {
        loop {
            // reduced costs z_j − c_j, with the objective value in the rhs slot
            let mut obj = vec![Rat::zero(); self.ncols + 1];
            for j in 0..self.ncols {
                obj[j] = -cost[j].clone();
            }
            for (i, &b) in self.basis.iter().enumerate() {
                let cb = &cost[b];
                if cb.is_zero() {
                    continue;
                }
                for (o, x) in obj.iter_mut().zip(&self.t[i]) {
                    if !x.is_zero() {
                        *o += cb * x;
                    }
                }
            }
            let entering = (0..self.banned_from.min(self.ncols)).find(|&j| obj[j].is_negative());
            let Some(c) = entering else {
                let mut z = vec![Rat::zero(); self.ncols];
                for (i, &b) in self.basis.iter().enumerate() {
                    z[b] = self.t[i][self.rhs].clone();
                }
                return Some((obj, z));
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.t.len() {
                let a = &self.t[i][c];
                if a.is_positive() {
                    let ratio = &self.t[i][self.rhs] / a;
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let (r, _) = leave?;
            self.pivot(r, c);
        }
    }
}

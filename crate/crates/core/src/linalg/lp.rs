use num_traits::{Signed, Zero};

use super::{Matrix, Rational};

/// `maximize c·x  subject to  A x = b, x ≥ 0`, solved exactly by the
/// two-phase simplex method with Bland's rule.
#[derive(Clone, Debug)]
pub struct LinearProgram {
    pub a: Matrix,
    pub b: Vec<Rational>,
    pub c: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { x: Vec<Rational>, value: Rational },
}

struct Tableau {
    rows: Vec<Vec<Rational>>, // constraint rows, last entry is the rhs
    z: Vec<Rational>,         // reduced costs, last entry is the objective value
    basis: Vec<usize>,
}

impl Tableau {
    fn width(&self) -> usize {
        self.z.len() - 1
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        }
        if !self.z[c].is_zero() {
            let f = self.z[c].clone();
            for (x, p) in self.z.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = &*x - &f * p;
                }
            }
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations over the first `active` columns. Returns false
    /// when unbounded.
    fn optimize(&mut self, active: usize) -> bool {
        loop {
            let Some(enter) = (0..active).find(|&j| self.z[j].is_negative()) else {
                return true;
            };
            let w = self.width();
            let mut best: Option<(usize, Rational)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if row[enter].is_positive() {
                    let ratio = &row[w] / &row[enter];
                    let better = match &best {
                        None => true,
                        Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                    };
                    if better {
                        best = Some((i, ratio));
                    }
                }
            }
            match best {
                None => return false,
                Some((r, _)) => self.pivot(r, enter),
            }
        }
    }
}

impl LinearProgram {
    pub fn solve(&self) -> LpOutcome {
        let (m, n) = self.a.shape();
        assert_eq!(self.b.len(), m);
        assert_eq!(self.c.len(), n);
        // Phase 1 with one artificial per row.
        let mut rows = Vec::with_capacity(m);
        for i in 0..m {
            let neg = self.b[i].is_negative();
            let mut row: Vec<Rational> =
                self.a.row(i).iter().map(|x| if neg { -x } else { x.clone() }).collect();
            row.extend((0..m).map(|k| if k == i { Rational::from_integer(1.into()) } else { Rational::zero() }));
            row.push(if neg { -self.b[i].clone() } else { self.b[i].clone() });
            rows.push(row);
        }
        let mut z = vec![Rational::zero(); n + m + 1];
        for row in &rows {
            for j in 0..n {
                z[j] = &z[j] - &row[j];
            }
            z[n + m] = &z[n + m] - &row[n + m];
        }
        let mut t = Tableau { rows, z, basis: (n..n + m).collect() };
        t.optimize(n + m);
        if t.z[n + m].is_negative() {
            return LpOutcome::Infeasible;
        }
        // Drive artificials out of the basis; drop redundant rows.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= n {
                match (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
        // Phase 2 on the original columns.
        for row in t.rows.iter_mut() {
            let rhs = row[n + m].clone();
            row.truncate(n);
            row.push(rhs);
        }
        let mut z = vec![Rational::zero(); n + 1];
        for j in 0..n {
            z[j] = -self.c[j].clone();
        }
        for (row, &bj) in t.rows.iter().zip(&t.basis) {
            let cb = &self.c[bj];
            if cb.is_zero() {
                continue;
            }
            for j in 0..=n {
                z[j] = &z[j] + cb * &row[j];
            }
        }
        t.z = z;
        if !t.optimize(n) {
            return LpOutcome::Unbounded;
        }
        let mut x = vec![Rational::zero(); n];
        for (row, &bj) in t.rows.iter().zip(&t.basis) {
            x[bj] = row[n].clone();
        }
        LpOutcome::Optimal { x, value: t.z[n].clone() }
    }
}

//! Dense two-phase tableau simplex with Bland's anti-cycling rule. Sized
//! for the small linear programs the feasibility layer builds (hundreds of
//! rows at most), favoring robustness over sparsity tricks.

/// Coefficients below this are treated as zero during pivoting.
const PIVOT_EPS: f64 = 1e-11;
/// Phase-1 objective above this (in absolute value) means infeasible.
const FEAS_EPS: f64 = 1e-9;

/// `maximize objective·x` over `x ≥ 0` subject to `leq` rows (`row·x ≤ rhs`)
/// and `eq` rows (`row·x = rhs`).
#[derive(Debug, Clone)]
pub(crate) struct LinearProgram {
    pub n: usize,
    pub objective: Vec<f64>,
    pub leq: Vec<(Vec<f64>, f64)>,
    pub eq: Vec<(Vec<f64>, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum LpOutcome {
    Optimal { x: Vec<f64>, value: f64 },
    Infeasible,
    Unbounded,
}

struct Tableau {
    /// `rows × (cols + 1)`; the last column is the right-hand side.
    a: Vec<Vec<f64>>,
    basis: Vec<usize>,
    cols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.a[i][self.cols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let inv = 1.0 / self.a[row][col];
        for v in &mut self.a[row] {
            *v *= inv;
        }
        self.a[row][col] = 1.0;
        for i in 0..self.a.len() {
            if i == row {
                continue;
            }
            let factor = self.a[i][col];
            if factor == 0.0 {
                continue;
            }
            for j in 0..=self.cols {
                self.a[i][j] -= factor * self.a[row][j];
            }
            self.a[i][col] = 0.0;
        }
        self.basis[row] = col;
    }

    /// Maximize `cost·x` from the current basic feasible point. Columns at
    /// `banned` and beyond may never enter the basis. Returns false when
    /// the objective is unbounded.
    fn optimize(&mut self, cost: &[f64], banned: usize) -> bool {
        loop {
            // Reduced costs relative to the current basis.
            let mut reduced: Vec<f64> = cost.to_vec();
            for (i, &b) in self.basis.iter().enumerate() {
                let cb = cost[b];
                if cb == 0.0 {
                    continue;
                }
                for (r, &a) in reduced.iter_mut().zip(&self.a[i]) {
                    *r -= cb * a;
                }
            }
            // Bland: smallest improving index enters.
            let Some(enter) = (0..banned).find(|&j| reduced[j] > PIVOT_EPS) else {
                return true;
            };
            // Ratio test; ties leave by smallest basis index (Bland).
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.a.len() {
                let coeff = self.a[i][enter];
                if coeff > PIVOT_EPS {
                    let ratio = self.rhs(i) / coeff;
                    let better = match leave {
                        None => true,
                        Some((li, lr)) => {
                            ratio < lr - PIVOT_EPS
                                || (ratio < lr + PIVOT_EPS && self.basis[i] < self.basis[li])
                        }
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            let Some((row, _)) = leave else {
                return false;
            };
            self.pivot(row, enter);
        }
    }

    fn objective_value(&self, cost: &[f64]) -> f64 {
        self.basis
            .iter()
            .enumerate()
            .map(|(i, &b)| cost[b] * self.rhs(i))
            .sum()
    }

    fn solution(&self, n: usize) -> Vec<f64> {
        let mut x = vec![0.0; n];
        for (i, &b) in self.basis.iter().enumerate() {
            if b < n {
                x[b] = self.rhs(i);
            }
        }
        x
    }
}

pub(crate) fn solve(lp: &LinearProgram) -> LpOutcome {
    let n = lp.n;
    let n_slack = lp.leq.len();
    let m = lp.leq.len() + lp.eq.len();
    let structural = n + n_slack;
    let cols = structural + m; // artificials appended per row

    // Equality form with slacks, rows flipped so every rhs is ≥ 0.
    let mut a = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    for (k, (row, rhs)) in lp.leq.iter().chain(lp.eq.iter()).enumerate() {
        debug_assert_eq!(row.len(), n);
        let mut full = vec![0.0; cols + 1];
        full[..n].copy_from_slice(row);
        if k < n_slack {
            full[n + k] = 1.0;
        }
        full[cols] = *rhs;
        if *rhs < 0.0 {
            for v in &mut full {
                *v = -*v;
            }
        }
        full[structural + k] = 1.0;
        basis.push(structural + k);
        a.push(full);
    }

    let mut t = Tableau { a, basis, cols };
    if m > 0 {
        // Phase 1: drive the artificial variables to zero.
        let mut phase1 = vec![0.0; cols];
        for c in &mut phase1[structural..] {
            *c = -1.0;
        }
        if !t.optimize(&phase1, cols) {
            unreachable!("phase-1 objective is bounded by zero");
        }
        if t.objective_value(&phase1) < -FEAS_EPS {
            return LpOutcome::Infeasible;
        }
        // Pivot leftover artificials out; rows where none of the real
        // columns can take over are redundant and dropped.
        let mut row = 0;
        while row < t.a.len() {
            if t.basis[row] >= structural {
                match (0..structural).find(|&j| t.a[row][j].abs() > PIVOT_EPS) {
                    Some(j) => t.pivot(row, j),
                    None => {
                        t.a.remove(row);
                        t.basis.remove(row);
                        continue;
                    }
                }
            }
            row += 1;
        }
    }

    let mut phase2 = vec![0.0; cols];
    phase2[..n].copy_from_slice(&lp.objective);
    if !t.optimize(&phase2, structural) {
        return LpOutcome::Unbounded;
    }
    LpOutcome::Optimal {
        x: t.solution(n),
        value: t.objective_value(&phase2),
    }
}

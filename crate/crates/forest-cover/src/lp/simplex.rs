//! Dense two-phase simplex over explicit tableaus.
//!
//! Small by design: the forest cover LPs it solves have tens of variables
//! and a few hundred rows, so a dense tableau with full pricing is exact
//! enough and easy to audit. Entering variables follow Dantzig's rule until
//! the objective stalls, then Bland's rule takes over so cycling cannot
//! occur; leaving-variable ties always break by smallest basis index.

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Rel {
    Le,
    Ge,
}

#[derive(Clone, Debug)]
pub struct Row {
    pub coeffs: Vec<(usize, f64)>,
    pub rel: Rel,
    pub rhs: f64,
}

/// minimize `objective . x` subject to `rows`, with `x >= 0`.
/// Upper bounds are expressed as ordinary `Le` rows.
#[derive(Clone, Debug)]
pub struct DenseLp {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub rows: Vec<Row>,
}

#[derive(Clone, Debug)]
pub struct LpSolution {
    pub values: Vec<f64>,
    pub objective: f64,
}

const EPS: f64 = 1e-9;
const PHASE1_TOL: f64 = 1e-7;

pub fn solve(lp: &DenseLp) -> Result<LpSolution> {
    if lp.num_vars == 0 {
        return Ok(LpSolution {
            values: Vec::new(),
            objective: 0.0,
        });
    }
    Tableau::build(lp).and_then(|mut t| t.run(lp))
}

struct Tableau {
    rows: Vec<Vec<f64>>,
    rhs: Vec<f64>,
    basis: Vec<usize>,
    num_structural: usize,
    first_artificial: usize,
    num_cols: usize,
}

impl Tableau {
    fn build(lp: &DenseLp) -> Result<Tableau> {
        let r = lp.rows.len();
        let n = lp.num_vars;
        // Column layout: structural | one slack per row | artificials.
        let slack0 = n;
        let art0 = n + r;
        let mut need_artificial = Vec::new();
        let mut dense: Vec<Vec<f64>> = Vec::with_capacity(r);
        let mut rhs = Vec::with_capacity(r);
        for (i, row) in lp.rows.iter().enumerate() {
            let mut flip = row.rhs < 0.0;
            let mut a = vec![0.0; n];
            for &(j, c) in &row.coeffs {
                assert!(j < n, "coefficient for unknown variable {j}");
                a[j] += c;
            }
            let mut b = row.rhs;
            let mut rel = row.rel;
            if flip {
                for c in a.iter_mut() {
                    *c = -*c;
                }
                b = -b;
                rel = match rel {
                    Rel::Le => Rel::Ge,
                    Rel::Ge => Rel::Le,
                };
            }
            // Ge rows with zero rhs become Le by negation so their slack can
            // start basic; Ge rows with positive rhs need an artificial.
            if rel == Rel::Ge && b == 0.0 {
                for c in a.iter_mut() {
                    *c = -*c;
                }
                rel = Rel::Le;
                flip = !flip;
            }
            let _ = flip;
            need_artificial.push(rel == Rel::Ge);
            let slack_sign = match rel {
                Rel::Le => 1.0,
                Rel::Ge => -1.0,
            };
            let mut full = a;
            full.resize(n + r, 0.0);
            full[slack0 + i] = slack_sign;
            dense.push(full);
            rhs.push(b);
        }
        let num_art: usize = need_artificial.iter().filter(|&&x| x).count();
        let num_cols = art0 + num_art;
        let mut basis = Vec::with_capacity(r);
        let mut art_idx = 0;
        for (i, row) in dense.iter_mut().enumerate() {
            row.resize(num_cols, 0.0);
            if need_artificial[i] {
                row[art0 + art_idx] = 1.0;
                basis.push(art0 + art_idx);
                art_idx += 1;
            } else {
                basis.push(slack0 + i);
            }
        }
        Ok(Tableau {
            rows: dense,
            rhs,
            basis,
            num_structural: n,
            first_artificial: art0,
            num_cols,
        })
    }

    fn run(&mut self, lp: &DenseLp) -> Result<LpSolution> {
        if self.first_artificial < self.num_cols {
            let mut cost1 = vec![0.0; self.num_cols];
            for c in cost1.iter_mut().skip(self.first_artificial) {
                *c = 1.0;
            }
            let phase1 = self.optimize(&cost1, self.num_cols)?;
            if phase1 > PHASE1_TOL {
                return Err(Error::Infeasible(format!(
                    "phase-1 residual {phase1:.3e}"
                )));
            }
            self.expel_artificials();
        }
        let mut cost2 = vec![0.0; self.num_cols];
        cost2[..self.num_structural].copy_from_slice(&lp.objective);
        self.optimize(&cost2, self.first_artificial)?;

        let mut values = vec![0.0; self.num_structural];
        for (r, &b) in self.basis.iter().enumerate() {
            if b < self.num_structural {
                values[b] = self.rhs[r].max(0.0);
            }
        }
        let objective = values
            .iter()
            .zip(&lp.objective)
            .map(|(x, c)| x * c)
            .sum();
        Ok(LpSolution { values, objective })
    }

    /// Minimize `cost . vars` from the current basis. Columns at or past
    /// `enter_limit` may not enter (used to freeze artificials in phase 2).
    /// Returns the reached objective value.
    fn optimize(&mut self, cost: &[f64], enter_limit: usize) -> Result<f64> {
        let mut reduced: Vec<f64> = cost.to_vec();
        let mut obj = 0.0;
        for (r, &b) in self.basis.iter().enumerate() {
            let cb = cost[b];
            if cb != 0.0 {
                obj += cb * self.rhs[r];
                for (rc, a) in reduced.iter_mut().zip(&self.rows[r]) {
                    *rc -= cb * a;
                }
            }
        }

        let cap = 20_000 + 200 * (self.rows.len() + self.num_cols);
        let stall_limit = 64 + self.rows.len() + self.num_cols;
        let mut bland = false;
        let mut stalled = 0usize;
        for iter in 0..cap {
            let entering = if bland {
                (0..enter_limit).find(|&j| reduced[j] < -EPS)
            } else {
                let mut best: Option<(usize, f64)> = None;
                for (j, &rc) in reduced.iter().enumerate().take(enter_limit) {
                    if rc < -EPS && best.is_none_or(|(_, v)| rc < v) {
                        best = Some((j, rc));
                    }
                }
                best.map(|(j, _)| j)
            };
            let Some(j) = entering else {
                return Ok(obj);
            };
            let mut leave: Option<(usize, f64)> = None;
            for r in 0..self.rows.len() {
                let a = self.rows[r][j];
                if a > EPS {
                    let ratio = self.rhs[r] / a;
                    let better = match leave {
                        None => true,
                        Some((lr, lv)) => {
                            ratio < lv - EPS
                                || (ratio < lv + EPS && self.basis[r] < self.basis[lr])
                        }
                    };
                    if better {
                        leave = Some((r, ratio));
                    }
                }
            }
            let Some((r, ratio)) = leave else {
                return Err(Error::Unbounded);
            };
            let drop = -reduced[j] * ratio;
            if drop <= 1e-12 {
                stalled += 1;
                if stalled > stall_limit {
                    bland = true;
                }
            } else {
                stalled = 0;
            }
            self.pivot(r, j, &mut reduced, &mut obj);
            let _ = iter;
        }
        Err(Error::SimplexStalled { iterations: cap })
    }

    fn pivot(&mut self, r: usize, j: usize, reduced: &mut [f64], obj: &mut f64) {
        let piv = self.rows[r][j];
        for v in self.rows[r].iter_mut() {
            *v /= piv;
        }
        self.rhs[r] /= piv;
        for i in 0..self.rows.len() {
            if i == r {
                continue;
            }
            let f = self.rows[i][j];
            if f != 0.0 {
                for c in 0..self.num_cols {
                    self.rows[i][c] -= f * self.rows[r][c];
                }
                self.rows[i][j] = 0.0;
                self.rhs[i] -= f * self.rhs[r];
            }
        }
        let f = reduced[j];
        if f != 0.0 {
            // The entering variable moves to rhs[r] (already normalized), so
            // the objective changes by reduced[j] * rhs[r].
            *obj += f * self.rhs[r];
            for (rc, a) in reduced.iter_mut().zip(&self.rows[r]) {
                *rc -= f * a;
            }
            reduced[j] = 0.0;
        }
        self.basis[r] = j;
        if self.rhs[r].abs() < 1e-12 {
            self.rhs[r] = 0.0;
        }
    }

    /// After phase 1, pivot lingering zero-level artificials out of the
    /// basis; rows where that is impossible are redundant and dropped.
    fn expel_artificials(&mut self) {
        let mut r = 0;
        while r < self.rows.len() {
            if self.basis[r] >= self.first_artificial {
                let j = (0..self.first_artificial).find(|&j| self.rows[r][j].abs() > EPS);
                match j {
                    Some(j) => {
                        let mut dummy = vec![0.0; self.num_cols];
                        let mut zero = 0.0;
                        self.pivot(r, j, &mut dummy, &mut zero);
                    }
                    None => {
                        self.rows.swap_remove(r);
                        self.rhs.swap_remove(r);
                        self.basis.swap_remove(r);
                        continue;
                    }
                }
            }
            r += 1;
        }
    }
}

//! Exact two-phase simplex over the rationals (Bland's rule, free variables).

use num_traits::{One, Signed, Zero};

use crate::exactla::Rat;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LpOutcome {
    Optimal { value: Rat, x: Vec<Rat> },
    Unbounded { x: Vec<Rat> },
    Infeasible,
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

struct Tableau {
    a: Vec<Vec<Rat>>,
    b: Vec<Rat>,
    basis: Vec<usize>,
    ncols: usize,
}

enum Phase {
    Optimal,
    Unbounded,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.a[r][c].recip();
        for v in self.a[r].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.b[r] *= &inv;
        let prow = self.a[r].clone();
        let pb = self.b[r].clone();
        for i in 0..self.a.len() {
            if i == r || self.a[i][c].is_zero() {
                continue;
            }
            let f = self.a[i][c].clone();
            for (v, p) in self.a[i].iter_mut().zip(&prow) {
                if !p.is_zero() {
                    *v -= &f * p;
                }
            }
            self.b[i] -= &f * &pb;
        }
        self.basis[r] = c;
    }

    /// Maximizes `cost · x` over the current basis; `allowed` masks columns.
    fn optimize(&mut self, cost: &[Rat], allowed: &[bool]) -> Phase {
        loop {
            let mut entering = None;
            for j in 0..self.ncols {
                if !allowed[j] || self.basis.contains(&j) {
                    continue;
                }
                let mut rc = cost[j].clone();
                for (i, &bi) in self.basis.iter().enumerate() {
                    if !self.a[i][j].is_zero() && !cost[bi].is_zero() {
                        rc -= &cost[bi] * &self.a[i][j];
                    }
                }
                if rc.is_positive() {
                    entering = Some(j);
                    break;
                }
            }
            let Some(c) = entering else {
                return Phase::Optimal;
            };
            let mut leave: Option<(usize, Rat)> = None;
            for i in 0..self.a.len() {
                if self.a[i][c].is_positive() {
                    let ratio = &self.b[i] / &self.a[i][c];
                    let better = match &leave {
                        None => true,
                        Some((li, lr)) => ratio < *lr || (ratio == *lr && self.basis[i] < self.basis[*li]),
                    };
                    if better {
                        leave = Some((i, ratio));
                    }
                }
            }
            match leave {
                None => return Phase::Unbounded,
                Some((r, _)) => self.pivot(r, c),
            }
        }
    }
}

/// Maximizes `c·x` subject to `g·x ≤ h` for each `(g, h)` in `ineq` and
/// `e·x = f` for each `(e, f)` in `eq`; `x` is free.
pub fn maximize(c: &[Rat], ineq: &[(Vec<Rat>, Rat)], eq: &[(Vec<Rat>, Rat)]) -> LpOutcome {
    let n = c.len();
    let mi = ineq.len();
    let me = eq.len();
    let m = mi + me;
    // columns: x+ (n), x- (n), slacks (mi), artificials (m at most)
    let base = 2 * n + mi;
    let mut a = vec![vec![Rat::zero(); base + m]; m];
    let mut b = vec![Rat::zero(); m];
    let mut basis = vec![0; m];
    let mut nart = 0;
    for (i, (g, h)) in ineq.iter().chain(eq.iter()).enumerate() {
        assert_eq!(g.len(), n, "constraint width differs from variable count");
        let flip = h.is_negative();
        let s = if flip { -Rat::one() } else { Rat::one() };
        for j in 0..n {
            if !g[j].is_zero() {
                a[i][j] = &g[j] * &s;
                a[i][n + j] = -&g[j] * &s;
            }
        }
        b[i] = h * &s;
        if i < mi {
            a[i][2 * n + i] = s.clone();
            if !flip {
                basis[i] = 2 * n + i;
                continue;
            }
        }
        a[i][base + nart] = Rat::one();
        basis[i] = base + nart;
        nart += 1;
    }
    let ncols = base + nart;
    for row in a.iter_mut() {
        row.truncate(ncols);
    }
    let mut t = Tableau { a, b, basis, ncols };

    if nart > 0 {
        let mut cost = vec![Rat::zero(); ncols];
        for v in cost.iter_mut().skip(base) {
            *v = -Rat::one();
        }
        let allowed = vec![true; ncols];
        t.optimize(&cost, &allowed);
        let infeas = t.basis.iter().zip(&t.b).any(|(&bi, v)| bi >= base && !v.is_zero());
        if infeas {
            return LpOutcome::Infeasible;
        }
        // drive zero artificials out of the basis
        let mut i = 0;
        while i < t.a.len() {
            if t.basis[i] >= base {
                if let Some(j) = (0..base).find(|&j| !t.a[i][j].is_zero()) {
                    t.pivot(i, j);
                    i += 1;
                } else {
                    t.a.remove(i);
                    t.b.remove(i);
                    t.basis.remove(i);
                }
            } else {
                i += 1;
            }
        }
    }
    let mut cost = vec![Rat::zero(); ncols];
    for j in 0..n {
        cost[j] = c[j].clone();
        cost[n + j] = -c[j].clone();
    }
    let mut allowed = vec![true; ncols];
    for v in allowed.iter_mut().skip(base) {
        *v = false;
    }
    let phase = t.optimize(&cost, &allowed);
    let mut full = vec![Rat::zero(); ncols];
    for (i, &bi) in t.basis.iter().enumerate() {
        full[bi] = t.b[i].clone();
    }
    let x: Vec<Rat> = (0..n).map(|j| &full[j] - &full[n + j]).collect();
    match phase {
        Phase::Optimal => {
            let value = crate::exactla::dot(c, &x);
            LpOutcome::Optimal { value, x }
        }
        Phase::Unbounded => LpOutcome::Unbounded { x },
    }
}

/// Feasibility only; returns a feasible point.
pub fn feasible_point(dim: usize, ineq: &[(Vec<Rat>, Rat)], eq: &[(Vec<Rat>, Rat)]) -> Option<Vec<Rat>> {
    match maximize(&vec![Rat::zero(); dim], ineq, eq) {
        LpOutcome::Optimal { x, .. } | LpOutcome::Unbounded { x } => Some(x),
        LpOutcome::Infeasible => None,
    }
}

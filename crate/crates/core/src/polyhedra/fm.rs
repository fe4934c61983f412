//! Fourier–Motzkin projection with LP redundancy removal after every step.

use num_traits::{One, Signed, Zero};

use super::lp::{self, LpOutcome};
use super::Row;
use crate::exactla::{is_zero_vec, primitive, Rat};

fn normalize(mut rows: Vec<Row>) -> Result<Vec<Row>, ()> {
    let mut out = Vec::with_capacity(rows.len());
    for (g, h) in rows.drain(..) {
        if is_zero_vec(&g) {
            if h.is_negative() {
                return Err(());
            }
            continue;
        }
        let mut r = g;
        r.push(h);
        let mut r = primitive(&r);
        let h = r.pop().expect("nonempty row");
        out.push((r, h));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn remove_redundant(rows: Vec<Row>, eq: &[Row]) -> Vec<Row> {
    let mut keep = rows;
    let mut i = 0;
    while i < keep.len() {
        let (g, h) = keep[i].clone();
        let others: Vec<Row> = keep.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, r)| r.clone()).collect();
        let redundant = match lp::maximize(&g, &others, eq) {
            LpOutcome::Optimal { value, .. } => value <= h,
            LpOutcome::Infeasible => true,
            LpOutcome::Unbounded { .. } => false,
        };
        if redundant {
            keep.remove(i);
        } else {
            i += 1;
        }
    }
    keep
}

fn infeasible(width: usize) -> (Vec<Row>, Vec<Row>) {
    (vec![(vec![Rat::zero(); width], -Rat::one())], vec![])
}

/// Projects `{y ∈ R^dim : ineq, eq}` onto the coordinates `keep`, in order.
pub fn project(dim: usize, ineq: &[Row], eq: &[Row], keep: &[usize]) -> (Vec<Row>, Vec<Row>) {
    let mut ineq: Vec<Row> = ineq.to_vec();
    let mut eq: Vec<Row> = eq.to_vec();
    for j in (0..dim).filter(|j| !keep.contains(j)) {
        if let Some(k) = eq.iter().position(|(e, _)| !e[j].is_zero()) {
            let (e, f) = eq.remove(k);
            let sub = |(g, h): &mut Row| {
                if !g[j].is_zero() {
                    let c = &g[j] / &e[j];
                    for (x, y) in g.iter_mut().zip(&e) {
                        *x -= &c * y;
                    }
                    *h -= &c * &f;
                }
            };
            ineq.iter_mut().for_each(sub);
            eq.iter_mut().for_each(sub);
            continue;
        }
        let (mut pos, mut neg, mut next) = (Vec::new(), Vec::new(), Vec::new());
        for r in ineq.drain(..) {
            if r.0[j].is_positive() {
                pos.push(r);
            } else if r.0[j].is_negative() {
                neg.push(r);
            } else {
                next.push(r);
            }
        }
        for (gp, hp) in &pos {
            for (gn, hn) in &neg {
                let a = -gn[j].clone();
                let b = gp[j].clone();
                let g: Vec<Rat> = gp.iter().zip(gn).map(|(x, y)| &a * x + &b * y).collect();
                next.push((g, &a * hp + &b * hn));
            }
        }
        match normalize(next) {
            Ok(rows) => ineq = remove_redundant(rows, &eq),
            Err(()) => return infeasible(keep.len()),
        }
    }
    let pick = |(g, h): Row| -> Row { (keep.iter().map(|&k| g[k].clone()).collect(), h) };
    let ineq: Vec<Row> = ineq.into_iter().map(pick).collect();
    let mut eq_out = Vec::new();
    for (e, f) in eq.into_iter().map(pick) {
        if is_zero_vec(&e) {
            if !f.is_zero() {
                return infeasible(keep.len());
            }
            continue;
        }
        eq_out.push((e, f));
    }
    (ineq, eq_out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int;

    fn r(g: &[i64], h: i64) -> Row {
        (g.iter().map(|&x| int(x)).collect(), int(h))
    }

    #[test]
    fn triangle_shadow() {
        // x ≥ 0, y ≥ 0, x + y ≤ 1 projected to x: [0, 1]
        let (ineq, eq) = project(2, &[r(&[-1, 0], 0), r(&[0, -1], 0), r(&[1, 1], 1)], &[], &[0]);
        assert!(eq.is_empty());
        assert_eq!(ineq, vec![r(&[-1], 0), r(&[1], 1)]);
    }

    #[test]
    fn equality_substitution_and_infeasible() {
        // x = y, 0 ≤ y ≤ 2 → 0 ≤ x ≤ 2
        let (ineq, _) = project(2, &[r(&[0, 1], 2), r(&[0, -1], 0)], &[r(&[1, -1], 0)], &[0]);
        assert_eq!(ineq.len(), 2);
        let (ineq, _) = project(2, &[r(&[0, 1], -1), r(&[0, -1], -1)], &[], &[0]);
        assert_eq!(ineq, vec![r(&[0], -1)]);
    }
}

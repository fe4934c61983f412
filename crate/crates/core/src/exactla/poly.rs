//! Univariate polynomials over the rationals, with Sturm-sequence root
//! isolation and an exact Schur–Cohn stability test.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{One, Signed, Zero};

use super::{int, to_f64, Rat, RatMatrix};

/// Coefficients stored lowest degree first, without trailing zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    c: Vec<Rat>,
}

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn zero() -> Self {
        Poly { c: vec![] }
    }

    pub fn constant(a: Rat) -> Self {
        Poly::new(vec![a])
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    /// `x - a`
    pub fn linear_root(a: &Rat) -> Self {
        Poly::new(vec![-a.clone(), Rat::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn lead(&self) -> Rat {
        self.c.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.c.iter().rev().fold(0.0, |acc, a| acc * x + to_f64(a))
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).cloned().unwrap_or_else(Rat::zero);
                let b = o.c.get(i).cloned().unwrap_or_else(Rat::zero);
                a + b
            })
            .collect();
        Poly::new(c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-Rat::one()))
    }

    pub fn scale(&self, k: &Rat) -> Poly {
        Poly::new(self.c.iter().map(|a| a * k).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.lead();
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &lead;
            if f.is_zero() {
                continue;
            }
            for (j, b) in d.c.iter().enumerate() {
                r[k + j] -= &f * b;
            }
            q[k] = f;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(&self.lead().recip())
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.divrem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.c.iter().enumerate().skip(1).map(|(i, a)| a * int(i as i64)).collect())
    }

    /// Same roots, each simple.
    pub fn squarefree(&self) -> Poly {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.divrem(&g).0.monic()
    }

    /// `x^deg · p(1/x)`
    pub fn reversed(&self) -> Poly {
        let mut c = self.c.clone();
        c.reverse();
        Poly::new(c)
    }

    /// Newton interpolation through `(xs[i], ys[i])`.
    pub fn interpolate(xs: &[Rat], ys: &[Rat]) -> Poly {
        assert_eq!(xs.len(), ys.len());
        let n = xs.len();
        let mut coef: Vec<Rat> = ys.to_vec();
        for j in 1..n {
            for i in (j..n).rev() {
                coef[i] = (&coef[i] - &coef[i - 1]) / (&xs[i] - &xs[i - j]);
            }
        }
        let mut p = Poly::constant(coef[n - 1].clone());
        for i in (0..n - 1).rev() {
            p = p.mul(&Poly::linear_root(&xs[i])).add(&Poly::constant(coef[i].clone()));
        }
        p
    }

    /// `det(x·I − m)`
    pub fn charpoly(m: &RatMatrix) -> Poly {
        assert!(m.is_square());
        let n = m.nrows();
        let xs: Vec<Rat> = (0..=n as i64).map(int).collect();
        let ys: Vec<Rat> = xs.iter().map(|x| RatMatrix::identity(n).scale(x).sub(m).det().expect("square")).collect();
        Poly::interpolate(&xs, &ys)
    }

    /// Determinant of the pencil `m − λ·n` as a polynomial in `λ`.
    pub fn pencil_det(m: &RatMatrix, n: &RatMatrix) -> Poly {
        assert!(m.is_square() && m.nrows() == n.nrows() && n.is_square());
        let d = m.nrows();
        let xs: Vec<Rat> = (0..=d as i64).map(int).collect();
        let ys: Vec<Rat> = xs.iter().map(|x| m.sub(&n.scale(x)).det().expect("square")).collect();
        Poly::interpolate(&xs, &ys)
    }

    fn sturm(&self) -> Vec<Poly> {
        let mut seq = vec![self.clone(), self.derivative()];
        loop {
            let k = seq.len();
            if seq[k - 1].is_zero() {
                seq.pop();
                break;
            }
            let r = seq[k - 2].divrem(&seq[k - 1]).1;
            if r.is_zero() {
                break;
            }
            seq.push(r.scale(&-Rat::one()));
        }
        seq
    }

    fn sign_changes(seq: &[Poly], x: Option<&Rat>, plus_inf: bool) -> usize {
        let signs: Vec<i32> = seq
            .iter()
            .map(|p| match x {
                Some(x) => sign(&p.eval(x)),
                None => {
                    let s = sign(&p.lead());
                    if plus_inf || p.degree().unwrap_or(0) % 2 == 0 {
                        s
                    } else {
                        -s
                    }
                }
            })
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Upper bound on the absolute value of every root.
    pub fn root_bound(&self) -> Rat {
        let lead = self.lead().abs();
        let m = self.c[..self.c.len() - 1]
            .iter()
            .map(|a| a.abs() / &lead)
            .fold(Rat::zero(), |a, b| if b > a { b } else { a });
        m + Rat::one()
    }

    /// Distinct real roots in `[lo, hi]` (`hi = None` means `+∞`), in
    /// increasing order, each either exactly rational or isolated in an
    /// open interval with rational endpoints.
    pub fn real_roots_in(&self, lo: &Rat, hi: Option<&Rat>) -> Vec<RealRoot> {
        if self.degree().unwrap_or(0) == 0 {
            return vec![];
        }
        let p = self.squarefree();
        let bound = p.root_bound();
        let hi_eff = match hi {
            Some(h) if *h < bound => h.clone(),
            _ => bound,
        };
        if hi_eff < *lo {
            return vec![];
        }
        let seq = p.sturm();
        let mut out = Vec::new();
        if p.eval(lo).is_zero() {
            out.push(RealRoot::Rational(lo.clone()));
        }
        if hi_eff > *lo && p.eval(&hi_eff).is_zero() {
            out.push(RealRoot::Rational(hi_eff.clone()));
        }
        // open interval with non-root endpoints
        let (a, b) = shrink_off_roots(&p, lo.clone(), hi_eff.clone());
        if a < b {
            isolate(&p, &seq, a, b, &mut out);
        }
        out.sort_by(|x, y| x.cmp_value(y));
        out.dedup_by(|x, y| x.cmp_value(y) == Ordering::Equal);
        out
    }

    /// Exact test: every root lies strictly inside the unit circle.
    pub fn is_schur_stable(&self) -> bool {
        let mut p = self.clone();
        loop {
            match p.degree() {
                None => return false,
                Some(0) => return true,
                Some(d) => {
                    let a0 = p.c[0].clone();
                    let ad = p.c[d].clone();
                    if a0.abs() >= ad.abs() {
                        return false;
                    }
                    let t = p.scale(&ad).sub(&p.reversed_full(d).scale(&a0));
                    // constant term cancels; divide by x
                    let c = t.c.get(1..).map(|s| s.to_vec()).unwrap_or_default();
                    p = Poly::new(c);
                    if p.degree() != Some(d - 1) {
                        return false;
                    }
                }
            }
        }
    }

    fn reversed_full(&self, d: usize) -> Poly {
        let mut c = self.c.clone();
        c.resize(d + 1, Rat::zero());
        c.reverse();
        Poly::new(c)
    }

    /// Number of roots with `|z| <= 1` is zero (counted with multiplicity).
    pub fn all_roots_outside_closed_disk(&self) -> bool {
        match self.degree() {
            None => false,
            Some(0) => true,
            Some(d) => !self.c[0].is_zero() && self.reversed_full(d).is_schur_stable(),
        }
    }
}

fn sign(x: &Rat) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

fn shrink_off_roots(p: &Poly, mut a: Rat, mut b: Rat) -> (Rat, Rat) {
    // move endpoints inward until they are not roots (roots at the original
    // endpoints were already recorded)
    let width = &b - &a;
    let mut eps = width / int(1 << 20);
    if eps.is_zero() {
        return (a, b);
    }
    if p.eval(&a).is_zero() {
        loop {
            let c = &a + &eps;
            if !p.eval(&c).is_zero() && count_roots(p, &a, &c) <= 1 {
                a = c;
                break;
            }
            eps /= int(2);
        }
    }
    if p.eval(&b).is_zero() {
        let mut eps = (&b - &a) / int(1 << 20);
        loop {
            let c = &b - &eps;
            if !p.eval(&c).is_zero() && count_roots(p, &c, &b) <= 1 {
                b = c;
                break;
            }
            eps /= int(2);
        }
    }
    (a, b)
}

/// Distinct roots in `(a, b]`.
fn count_roots(p: &Poly, a: &Rat, b: &Rat) -> usize {
    let seq = p.sturm();
    Poly::sign_changes(&seq, Some(a), true).saturating_sub(Poly::sign_changes(&seq, Some(b), true))
}

fn isolate(p: &Poly, seq: &[Poly], a: Rat, b: Rat, out: &mut Vec<RealRoot>) {
    let mut stack = vec![(a, b)];
    while let Some((a, b)) = stack.pop() {
        let va = Poly::sign_changes(seq, Some(&a), true);
        let vb = Poly::sign_changes(seq, Some(&b), true);
        let n = va.saturating_sub(vb);
        if n == 0 {
            continue;
        }
        if n == 1 {
            out.push(classify_isolated(p, a, b));
            continue;
        }
        let m = (&a + &b) / int(2);
        if p.eval(&m).is_zero() {
            out.push(RealRoot::Rational(m.clone()));
            let mut eps = (&b - &a) / int(8);
            loop {
                let l = &m - &eps;
                let r = &m + &eps;
                if !p.eval(&l).is_zero() && !p.eval(&r).is_zero() && count_roots(p, &l, &r) == 1 {
                    stack.push((a.clone(), l));
                    stack.push((r, b.clone()));
                    break;
                }
                eps /= int(2);
            }
            continue;
        }
        stack.push((a, m.clone()));
        stack.push((m, b));
    }
}

/// Decides whether the single root in `(a, b)` is rational.
fn classify_isolated(p: &Poly, mut a: Rat, mut b: Rat) -> RealRoot {
    use num_integer::Integer;
    // clear denominators to get the integer leading coefficient
    let mut lcm = num_bigint::BigInt::one();
    for c in p.coeffs() {
        lcm = lcm.lcm(c.denom());
    }
    let lead = (p.lead() * Rat::from_integer(lcm)).abs();
    let target = Rat::one() / (&lead * &lead * int(2));
    let sa = sign(&p.eval(&a));
    while &b - &a >= target {
        let m = (&a + &b) / int(2);
        let sm = sign(&p.eval(&m));
        if sm == 0 {
            return RealRoot::Rational(m);
        }
        if sm == sa {
            a = m;
        } else {
            b = m;
        }
    }
    let r = simplest_between(&a, &b);
    if p.eval(&r).is_zero() {
        RealRoot::Rational(r)
    } else {
        RealRoot::Algebraic { poly: p.clone(), lo: a, hi: b }
    }
}

/// The rational with the smallest denominator in the closed interval `[a, b]`.
pub fn simplest_between(a: &Rat, b: &Rat) -> Rat {
    debug_assert!(a <= b);
    if a.is_integer() {
        return a.clone();
    }
    if !a.is_positive() && !b.is_negative() {
        return Rat::zero();
    }
    if b.is_negative() {
        return -simplest_between(&-b, &-a);
    }
    let c = a.ceil();
    if c <= *b {
        return c;
    }
    let fl = a.floor();
    let inner = simplest_between(&(Rat::one() / (b - &fl)), &(Rat::one() / (a - &fl)));
    fl + inner.recip()
}

/// A real root of a rational polynomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum RealRoot {
    Rational(Rat),
    /// The unique root of `poly` in the open interval `(lo, hi)`.
    Algebraic {
        poly: Poly,
        lo: Rat,
        hi: Rat,
    },
}

impl RealRoot {
    pub fn as_rational(&self) -> Option<&Rat> {
        match self {
            RealRoot::Rational(r) => Some(r),
            RealRoot::Algebraic { .. } => None,
        }
    }

    /// Rational interval containing the root.
    pub fn bounds(&self) -> (Rat, Rat) {
        match self {
            RealRoot::Rational(r) => (r.clone(), r.clone()),
            RealRoot::Algebraic { lo, hi, .. } => (lo.clone(), hi.clone()),
        }
    }

    /// Shrinks the isolating interval below `width`.
    pub fn refine(&mut self, width: &Rat) {
        if let RealRoot::Algebraic { poly, lo, hi } = self {
            let sa = sign(&poly.eval(lo));
            while &*hi - &*lo > *width {
                let m = (&*lo + &*hi) / int(2);
                let sm = sign(&poly.eval(&m));
                if sm == 0 {
                    *self = RealRoot::Rational(m);
                    return;
                }
                if sm == sa {
                    *lo = m;
                } else {
                    *hi = m;
                }
            }
        }
    }

    pub fn approx(&self) -> f64 {
        let mut r = self.clone();
        r.refine(&Rat::new(1.into(), num_bigint::BigInt::from(1u64) << 60));
        let (lo, hi) = r.bounds();
        (to_f64(&lo) + to_f64(&hi)) / 2.0
    }

    /// Total order on values; refines algebraic intervals as needed.
    pub fn cmp_value(&self, other: &RealRoot) -> Ordering {
        let mut a = self.clone();
        let mut b = other.clone();
        for _ in 0..400 {
            let (alo, ahi) = a.bounds();
            let (blo, bhi) = b.bounds();
            if ahi < blo {
                return Ordering::Less;
            }
            if bhi < alo {
                return Ordering::Greater;
            }
            if alo == ahi && blo == bhi {
                return alo.cmp(&blo);
            }
            // same algebraic number when both isolate a common root of the
            // polynomials' gcd inside the overlap
            if let (RealRoot::Algebraic { poly: p, .. }, RealRoot::Algebraic { poly: q, .. }) = (&a, &b) {
                let g = p.gcd(q);
                if g.degree().unwrap_or(0) > 0 {
                    let lo = if alo > blo { alo.clone() } else { blo.clone() };
                    let hi = if ahi < bhi { ahi.clone() } else { bhi.clone() };
                    if lo < hi && !g.eval(&lo).is_zero() && !g.eval(&hi).is_zero() && count_roots(&g, &lo, &hi) == 1 {
                        // both roots equal the unique root of g in (lo, hi) iff
                        // each polynomial has its root there
                        if count_roots(p, &lo, &hi) == 1 && count_roots(q, &lo, &hi) == 1 {
                            return Ordering::Equal;
                        }
                    }
                }
            }
            match (&a, &b) {
                (RealRoot::Rational(r), RealRoot::Algebraic { poly, lo, hi })
                | (RealRoot::Algebraic { poly, lo, hi }, RealRoot::Rational(r))
                    if r > lo && r < hi && poly.eval(r).is_zero() =>
                {
                    return Ordering::Equal;
                }
                _ => {}
            }
            let wa = &ahi - &alo;
            let wb = &bhi - &blo;
            if wa >= wb {
                a.refine(&(wa / int(4)));
            } else {
                b.refine(&(wb / int(4)));
            }
        }
        self.approx().partial_cmp(&other.approx()).unwrap_or(Ordering::Equal)
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| match i {
                0 => format!("{a}"),
                1 => format!("{a}·x"),
                _ => format!("{a}·x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::rat;

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        // (x-1)(x-2) and (x-1)(x+3)
        let a = p(&[2, -3, 1]);
        let b = p(&[-3, 2, 1]);
        assert_eq!(a.gcd(&b), p(&[-1, 1]));
        let (q, r) = a.divrem(&p(&[-1, 1]));
        assert_eq!(q, p(&[-2, 1]));
        assert!(r.is_zero());
    }

    #[test]
    fn squarefree_drops_repeats() {
        // (x-1)^2 (x+2)
        let a = p(&[-1, 1]).mul(&p(&[-1, 1])).mul(&p(&[2, 1]));
        assert_eq!(a.squarefree(), p(&[-1, 1]).mul(&p(&[2, 1])));
    }

    #[test]
    fn interpolation_recovers_cubic() {
        let q = p(&[5, 0, -2, 1]);
        let xs: Vec<Rat> = (0..4).map(int).collect();
        let ys: Vec<Rat> = xs.iter().map(|x| q.eval(x)).collect();
        assert_eq!(Poly::interpolate(&xs, &ys), q);
    }

    #[test]
    fn charpoly_of_swap() {
        let a = RatMatrix::from_i64(&[&[0, 1], &[1, 0]]);
        assert_eq!(Poly::charpoly(&a), p(&[-1, 0, 1]));
    }

    #[test]
    fn roots_rational_and_irrational() {
        // (x - 1/2)(x^2 - 2)
        let a = Poly::linear_root(&rat(1, 2)).mul(&p(&[-2, 0, 1]));
        let roots = a.real_roots_in(&int(-10), None);
        assert_eq!(roots.len(), 3);
        assert!(matches!(roots[0], RealRoot::Algebraic { .. }));
        assert!((roots[0].approx() + 2f64.sqrt()).abs() < 1e-12);
        assert_eq!(roots[1], RealRoot::Rational(rat(1, 2)));
        assert!((roots[2].approx() - 2f64.sqrt()).abs() < 1e-12);
        let in_unit = a.real_roots_in(&int(0), Some(&int(1)));
        assert_eq!(in_unit, vec![RealRoot::Rational(rat(1, 2))]);
    }

    #[test]
    fn roots_at_interval_ends() {
        let a = p(&[0, -1, 1]); // x(x-1)
        let r = a.real_roots_in(&int(0), Some(&int(1)));
        assert_eq!(r, vec![RealRoot::Rational(int(0)), RealRoot::Rational(int(1))]);
        let r = a.real_roots_in(&rat(1, 3), Some(&rat(2, 3)));
        assert!(r.is_empty());
    }

    #[test]
    fn clustered_rational_roots() {
        // roots 1/3, 1/2, 2/3, 1
        let a = Poly::linear_root(&rat(1, 3))
            .mul(&Poly::linear_root(&rat(1, 2)))
            .mul(&Poly::linear_root(&rat(2, 3)))
            .mul(&Poly::linear_root(&int(1)));
        let r = a.real_roots_in(&int(0), None);
        let vals: Vec<Rat> = r.iter().map(|x| x.as_rational().unwrap().clone()).collect();
        assert_eq!(vals, vec![rat(1, 3), rat(1, 2), rat(2, 3), int(1)]);
    }

    #[test]
    fn simplest_fraction() {
        assert_eq!(simplest_between(&rat(3, 10), &rat(4, 10)), rat(1, 3));
        assert_eq!(simplest_between(&rat(-4, 10), &rat(-3, 10)), rat(-1, 3));
        assert_eq!(simplest_between(&rat(-1, 2), &rat(1, 2)), int(0));
        assert_eq!(simplest_between(&rat(5, 2), &rat(7, 2)), int(3));
    }

    #[test]
    fn schur_cohn() {
        assert!(p(&[1, 4]).is_schur_stable()); // root -1/4
        assert!(!p(&[-2, 1]).is_schur_stable()); // root 2
        assert!(!p(&[-1, 1]).is_schur_stable()); // root on the circle
        assert!(Poly::new(vec![rat(1, 4), int(0), int(1)]).is_schur_stable()); // ±i/2
        assert!(!p(&[-3, 0, 1]).is_schur_stable());
        assert!(p(&[-2, 1]).all_roots_outside_closed_disk());
        assert!(!p(&[0, 1]).all_roots_outside_closed_disk());
        assert!(!p(&[-1, 0, 1]).all_roots_outside_closed_disk());
        assert!(p(&[4, 0, 1]).all_roots_outside_closed_disk()); // ±2i
    }
}

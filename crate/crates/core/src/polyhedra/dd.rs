//! Double description: extreme rays and lineality of `{x : a·x ≤ 0, e·x = 0}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::exactla::{primitive, Rat, RatMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConeGenerators {
    pub lineality: Vec<Vec<Rat>>,
    pub rays: Vec<Vec<Rat>>,
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64).max(1)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn and_assign(&mut self, o: &Bits) {
        self.0.iter_mut().zip(&o.0).for_each(|(a, b)| *a &= b);
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, &bits)| {
            let mut b = bits;
            std::iter::from_fn(move || {
                if b == 0 {
                    return None;
                }
                let t = b.trailing_zeros() as usize;
                b &= b - 1;
                Some(w * 64 + t)
            })
        })
    }
}

/// `cols[j]` = rays tight at constraint `j < k`.
fn incidence(rays: &[Ray], k: usize) -> Vec<Bits> {
    let mut cols = vec![Bits::new(rays.len()); k];
    for (i, r) in rays.iter().enumerate() {
        for j in r.tight.ones() {
            if j < k {
                cols[j].set(i);
            }
        }
    }
    cols
}

/// No ray other than the pair is tight on all of `common`.
fn adjacent(common: &Bits, cols: &[Bits], total: usize) -> bool {
    let mut acc: Option<Bits> = None;
    for j in common.ones() {
        match acc.as_mut() {
            None => acc = Some(cols[j].clone()),
            Some(a) => a.and_assign(&cols[j]),
        }
        if acc.as_ref().is_some_and(|a| a.count() <= 2) {
            return true;
        }
    }
    acc.map_or(total, |a| a.count()) <= 2
}

struct Ray {
    v: Vec<BigInt>,
    tight: Bits,
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    let mut s = BigInt::zero();
    for (x, y) in a.iter().zip(b) {
        if !x.is_zero() && !y.is_zero() {
            s += x * y;
        }
    }
    s
}

fn iprimitive(mut v: Vec<BigInt>) -> Vec<BigInt> {
    let mut g = BigInt::zero();
    for x in &v {
        if !x.is_zero() {
            g = g.gcd(x);
            if g.is_one() {
                return v;
            }
        }
    }
    if !g.is_zero() {
        v.iter_mut().for_each(|x| *x /= &g);
    }
    v
}

/// `p·x − q·y`
fn combine(p: &BigInt, x: &[BigInt], q: &BigInt, y: &[BigInt]) -> Vec<BigInt> {
    x.iter().zip(y).map(|(a, b)| p * a - q * b).collect()
}

fn integral(v: &[Rat]) -> Vec<BigInt> {
    primitive(v).into_iter().map(|x| x.to_integer()).collect()
}

fn rational(v: Vec<BigInt>) -> Vec<Rat> {
    v.into_iter().map(Rat::from_integer).collect()
}

/// Generators of the cone `{x ∈ R^dim : a·x ≤ 0 ∀a ∈ ineq, e·x = 0 ∀e ∈ eq}`.
///
/// Rays are extreme modulo the lineality space and scaled to primitive
/// integer vectors; neither list is canonical.
pub fn cone_generators(dim: usize, ineq: &[Vec<Rat>], eq: &[Vec<Rat>]) -> ConeGenerators {
    let mut lin: Vec<Vec<BigInt>> =
        if eq.is_empty() { RatMatrix::identity(dim).cols_vec() } else { RatMatrix::from_rows(dim, eq).kernel_basis() }
            .iter()
            .map(|l| integral(l))
            .collect();
    let ineq: Vec<Vec<BigInt>> = ineq.iter().map(|a| integral(a)).collect();
    let eff = lin.len();
    let m = ineq.len();
    let mut rays: Vec<Ray> = Vec::new();
    for (k, a) in ineq.iter().enumerate() {
        let vals: Vec<BigInt> = lin.iter().map(|l| idot(a, l)).collect();
        if let Some(p) = vals.iter().position(|v| !v.is_zero()) {
            let mut l0 = lin.swap_remove(p);
            let mut ap = vals[p].clone();
            let mut rest = vals;
            rest.swap_remove(p);
            if ap.is_positive() {
                l0.iter_mut().for_each(|x| *x = -&*x);
                ap = -ap;
            }
            // (−ap)·x + av·l0 has a·(…) = 0 and keeps x's direction
            let na = -&ap;
            for (l, av) in lin.iter_mut().zip(&rest) {
                if !av.is_zero() {
                    *l = iprimitive(combine(&na, l, &-av, &l0));
                }
            }
            for r in rays.iter_mut() {
                let av = idot(a, &r.v);
                if !av.is_zero() {
                    r.v = iprimitive(combine(&na, &r.v, &-av, &l0));
                }
                r.tight.set(k);
            }
            let mut tight = Bits::new(m);
            for j in 0..k {
                tight.set(j);
            }
            rays.push(Ray { v: iprimitive(l0), tight });
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| idot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        if pos.is_empty() {
            for (r, v) in rays.iter_mut().zip(&vals) {
                if v.is_zero() {
                    r.tight.set(k);
                }
            }
            continue;
        }
        let need = eff.saturating_sub(lin.len() + 2);
        let cols = incidence(&rays, k);
        let mut fresh = Vec::new();
        for &p in &pos {
            for &n in &neg {
                let common = rays[p].tight.and(&rays[n].tight);
                if common.count() < need {
                    continue;
                }
                if !adjacent(&common, &cols, rays.len()) {
                    continue;
                }
                let v = combine(&vals[p], &rays[n].v, &vals[n], &rays[p].v);
                let mut tight = common;
                tight.set(k);
                fresh.push(Ray { v: iprimitive(v), tight });
            }
        }
        let mut kept = Vec::with_capacity(rays.len() + fresh.len());
        for (r, v) in rays.into_iter().zip(&vals) {
            if v.is_negative() {
                kept.push(r);
            } else if v.is_zero() {
                let mut r = r;
                r.tight.set(k);
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }
    ConeGenerators {
        lineality: lin.into_iter().map(rational).collect(),
        rays: rays.into_iter().map(|r| rational(r.v)).collect(),
    }
}

//! Seeded random instances for cross-validation.

use rand::Rng;

use crate::exactla::{int, rat, Rat, RatMatrix};
use crate::geomctrl::Sigma;
use crate::polyhedra::{Polyhedron, Row};

#[derive(Debug, Clone, Copy)]
pub struct Shape {
    pub max_n: usize,
    pub max_m: usize,
    pub max_s: usize,
}

impl Default for Shape {
    fn default() -> Self {
        Shape { max_n: 3, max_m: 2, max_s: 2 }
    }
}

fn entry<R: Rng>(rng: &mut R) -> Rat {
    match rng.gen_range(0..10) {
        0..=2 => int(0),
        3 => rat(rng.gen_range(-3..=3), 2),
        _ => int(rng.gen_range(-2..=2)),
    }
}

pub fn matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> RatMatrix {
    RatMatrix::from_vec(rows, cols, (0..rows * cols).map(|_| entry(rng)).collect())
}

/// A system with `[C D]` surjective.
pub fn system<R: Rng>(rng: &mut R, shape: Shape) -> Sigma {
    loop {
        let n = rng.gen_range(1..=shape.max_n);
        let m = rng.gen_range(1..=shape.max_m);
        let s = rng.gen_range(1..=shape.max_s);
        let sys = Sigma::new(matrix(rng, n, n), matrix(rng, n, m), matrix(rng, s, n), matrix(rng, s, m))
            .expect("consistent shapes");
        if sys.cd().rank() == s {
            return sys;
        }
    }
}

fn direction<R: Rng>(rng: &mut R, dim: usize) -> Vec<Rat> {
    loop {
        let v: Vec<Rat> = (0..dim).map(|_| int(rng.gen_range(-3..=3))).collect();
        if v.iter().any(|x| *x != int(0)) {
            return v;
        }
    }
}

/// A polyhedron with the origin in its interior; bounded about half the time.
pub fn constraint_set<R: Rng>(rng: &mut R, dim: usize) -> Polyhedron {
    let bounded = rng.gen_bool(0.5);
    let mut rows: Vec<Row> = Vec::new();
    if bounded {
        for i in 0..dim {
            let mut e = vec![int(0); dim];
            e[i] = int(1);
            rows.push((e.clone(), int(rng.gen_range(1..=3))));
            e[i] = int(-1);
            rows.push((e, int(rng.gen_range(1..=3))));
        }
    }
    let extra = rng.gen_range(if bounded { 0 } else { 1 }..=dim + 1);
    for _ in 0..extra {
        rows.push((direction(rng, dim), int(rng.gen_range(1..=4))));
    }
    Polyhedron::from_hrep(dim, rows, vec![]).expect("consistent rows")
}

/// A random polyhedron of either representation, possibly empty or lower
/// dimensional.
pub fn polyhedron<R: Rng>(rng: &mut R, dim: usize) -> Polyhedron {
    match rng.gen_range(0..4) {
        0 => {
            let nv = rng.gen_range(1..=dim + 2);
            let v: Vec<Vec<Rat>> = (0..nv).map(|_| (0..dim).map(|_| int(rng.gen_range(-3..=3))).collect()).collect();
            let nr = rng.gen_range(0..=2);
            let r: Vec<Vec<Rat>> = (0..nr).map(|_| direction(rng, dim)).collect();
            let l = if rng.gen_bool(0.2) { vec![direction(rng, dim)] } else { vec![] };
            Polyhedron::from_vrep(dim, v, r, l).expect("consistent generators")
        }
        1 => {
            let k = rng.gen_range(1..=dim + 3);
            let rows = (0..k).map(|_| (direction(rng, dim), int(rng.gen_range(-2..=4)))).collect();
            Polyhedron::from_hrep(dim, rows, vec![]).expect("consistent rows")
        }
        _ => constraint_set(rng, dim),
    }
}

/// Instances `(Σ, Y)` passing `keep`, after at most `tries` draws each.
pub fn instances<R, F>(rng: &mut R, shape: Shape, count: usize, tries: usize, mut keep: F) -> Vec<(Sigma, Polyhedron)>
where
    R: Rng,
    F: FnMut(&Sigma, &Polyhedron) -> bool,
{
    let mut out = Vec::with_capacity(count);
    let mut left = tries;
    while out.len() < count && left > 0 {
        left -= 1;
        let sys = system(rng, shape);
        let y = constraint_set(rng, sys.s());
        if keep(&sys, &y) {
            out.push((sys, y));
        }
    }
    out
}

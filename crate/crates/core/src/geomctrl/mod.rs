//! Geometric control of `x⁺ = Ax + Bu, y = Cx + Du`.

mod bounded;

pub use bounded::{vstar_g, vstar_g_with, VStarG};

use serde::{Deserialize, Serialize};

use crate::exactla::{fmt_rat, LinAlgError, RatMatrix, Subspace};
use crate::polyhedra::json::{parse_rows, JsonError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeomError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("output-nulling dynamics do not induce a map on V*/R*")]
    IllDefinedQuotient,
    #[error(transparent)]
    LinAlg(#[from] LinAlgError),
}

/// The quadruple `(A, B, C, D)` with `A: n×n`, `B: n×m`, `C: s×n`, `D: s×m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Sigma {
    pub a: RatMatrix,
    pub b: RatMatrix,
    pub c: RatMatrix,
    pub d: RatMatrix,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SigmaJson {
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
    #[serde(rename = "C")]
    pub c: Vec<Vec<String>>,
    #[serde(rename = "D")]
    pub d: Vec<Vec<String>>,
}

fn mat_json(m: &RatMatrix) -> Vec<Vec<String>> {
    m.rows_iter().map(|r| r.iter().map(fmt_rat).collect()).collect()
}

impl Sigma {
    pub fn new(a: RatMatrix, b: RatMatrix, c: RatMatrix, d: RatMatrix) -> Result<Self, GeomError> {
        let n = a.nrows();
        let bad = |what: &str| Err(GeomError::Dimension(what.to_string()));
        if a.ncols() != n {
            return bad(&format!("A is {}x{}, expected square", a.nrows(), a.ncols()));
        }
        if b.nrows() != n {
            return bad(&format!("B has {} rows, A is {n}x{n}", b.nrows()));
        }
        if c.ncols() != n {
            return bad(&format!("C has {} columns, A is {n}x{n}", c.ncols()));
        }
        if d.nrows() != c.nrows() || d.ncols() != b.ncols() {
            return bad(&format!("D is {}x{}, expected {}x{}", d.nrows(), d.ncols(), c.nrows(), b.ncols()));
        }
        Ok(Sigma { a, b, c, d })
    }

    pub fn from_i64(a: &[&[i64]], b: &[&[i64]], c: &[&[i64]], d: &[&[i64]]) -> Self {
        Sigma::new(RatMatrix::from_i64(a), RatMatrix::from_i64(b), RatMatrix::from_i64(c), RatMatrix::from_i64(d))
            .expect("consistent dimensions")
    }

    pub fn n(&self) -> usize {
        self.a.nrows()
    }
    pub fn m(&self) -> usize {
        self.b.ncols()
    }
    pub fn s(&self) -> usize {
        self.c.nrows()
    }

    /// `[C D]`
    pub fn cd(&self) -> RatMatrix {
        self.c.hstack(&self.d)
    }

    /// `[A B]`
    pub fn ab(&self) -> RatMatrix {
        self.a.hstack(&self.b)
    }

    /// `Σ^T = (A^T, C^T, B^T, D^T)`
    pub fn dual(&self) -> Sigma {
        Sigma { a: self.a.transpose(), b: self.c.transpose(), c: self.b.transpose(), d: self.d.transpose() }
    }

    /// `(U, Σ) = (A, BE, C, DE)` with `E` the canonical basis of `U`.
    pub fn restrict(&self, u: &Subspace) -> Result<Sigma, GeomError> {
        if u.ambient() != self.m() {
            return Err(GeomError::Dimension(format!(
                "input subspace lives in R^{}, system has {} inputs",
                u.ambient(),
                self.m()
            )));
        }
        let e = u.basis();
        Ok(Sigma { a: self.a.clone(), b: self.b.mul(e), c: self.c.clone(), d: self.d.mul(e) })
    }

    pub fn to_json(&self) -> SigmaJson {
        SigmaJson { a: mat_json(&self.a), b: mat_json(&self.b), c: mat_json(&self.c), d: mat_json(&self.d) }
    }

    /// Parses and dimension-checks; column counts are taken from the first
    /// row of each block (`B`/`D` with no columns need `m = 0` rows of `[]`).
    pub fn from_json(j: &SigmaJson) -> Result<Sigma, JsonError> {
        let n = j.a.len();
        let m = j.b.first().map_or(0, Vec::len);
        let s = j.c.len();
        let err = |f: &str, msg: String| JsonError::Field { field: f.into(), msg };
        if j.b.len() != n {
            return Err(err("B", format!("expected {n} rows to match A, found {}", j.b.len())));
        }
        if j.d.len() != s {
            return Err(err("D", format!("expected {s} rows to match C, found {}", j.d.len())));
        }
        let a = parse_rows(&j.a, n, "A")?;
        let b = parse_rows(&j.b, m, "B")?;
        let c = parse_rows(&j.c, n, "C")?;
        let d = parse_rows(&j.d, m, "D")?;
        Sigma::new(
            RatMatrix::from_rows(n, &a),
            RatMatrix::from_rows(m, &b),
            RatMatrix::from_rows(n, &c),
            RatMatrix::from_rows(m, &d),
        )
        .map_err(|e| err("system", e.to_string()))
    }
}

/// `x`-block of the map `(x, u) ↦ x`.
fn state_part(n: usize, m: usize) -> RatMatrix {
    RatMatrix::identity(n).hstack(&RatMatrix::zeros(n, m))
}

/// Weakly unobservable subspace and the number of iterations to stabilize.
pub fn vstar_steps(sys: &Sigma) -> (Subspace, usize) {
    let (n, m, s) = (sys.n(), sys.m(), sys.s());
    let big = RatMatrix::block(&[vec![&sys.a, &sys.b], vec![&sys.c, &sys.d]]);
    let proj = state_part(n, m);
    let mut v = Subspace::full(n);
    let mut k = 0;
    loop {
        let target = v.product(&Subspace::zero(s));
        let pre = target.preimage(&big).expect("block dimensions");
        let next = pre.image(&proj).expect("projection dimensions");
        if next == v {
            return (v, k);
        }
        v = next;
        k += 1;
    }
}

pub fn vstar(sys: &Sigma) -> Subspace {
    vstar_steps(sys).0
}

/// Strongly reachable subspace and the number of iterations to stabilize.
pub fn tstar_steps(sys: &Sigma) -> (Subspace, usize) {
    let (n, m) = (sys.n(), sys.m());
    let nulling = sys.cd().kernel();
    let ab = sys.ab();
    let mut t = Subspace::zero(n);
    let mut k = 0;
    loop {
        let dom = t.product(&Subspace::full(m)).intersect(&nulling).expect("same ambient");
        let next = dom.image(&ab).expect("block dimensions");
        if next == t {
            return (t, k);
        }
        t = next;
        k += 1;
    }
}

pub fn tstar(sys: &Sigma) -> Subspace {
    tstar_steps(sys).0
}

/// `(Γ_ℓ, Λ_ℓ, Θ_ℓ)`: stacked outputs (latest first) and reached state as
/// functions of the initial state and the inputs `(u_0, …, u_{ℓ-1})`.
pub fn recursive_matrices(sys: &Sigma, l: usize) -> Result<(RatMatrix, RatMatrix, RatMatrix), GeomError> {
    if l == 0 {
        return Err(GeomError::Dimension("recursive matrices need ℓ ≥ 1".into()));
    }
    let mut gamma = sys.c.clone();
    let mut lambda = sys.b.clone();
    let mut theta = sys.d.clone();
    for _ in 1..l {
        let zero = RatMatrix::zeros(theta.nrows(), sys.m());
        let cl = sys.c.mul(&lambda);
        theta = RatMatrix::block(&[vec![&cl, &sys.d], vec![&theta, &zero]]);
        gamma = gamma.mul(&sys.a).vstack(&sys.c);
        lambda = sys.a.mul(&lambda).hstack(&sys.b);
    }
    Ok((gamma, lambda, theta))
}

/// `T* = Λ_n ker Θ_n`.
pub fn tstar_direct(sys: &Sigma) -> Subspace {
    if sys.n() == 0 {
        return Subspace::zero(0);
    }
    let (_, lambda, theta) = recursive_matrices(sys, sys.n()).expect("n ≥ 1");
    theta.kernel().image(&lambda).expect("block dimensions")
}

pub fn kalman_controllable(sys: &Sigma) -> bool {
    let n = sys.n();
    let mut k = sys.b.clone();
    let mut blk = sys.b.clone();
    for _ in 1..n {
        blk = sys.a.mul(&blk);
        k = k.hstack(&blk);
    }
    k.rank() == n
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceReport {
    pub vstar: Subspace,
    pub tstar: Subspace,
    pub rstar: Subspace,
    pub ksub: Subspace,
    pub lsub: Subspace,
    pub right_invertible: bool,
    pub left_invertible: bool,
    pub vstar_steps: usize,
    pub tstar_steps: usize,
    /// `K(Σ)^⊥ = L(Σ^T)` and iterative `T*` equals `Λ_n ker Θ_n`.
    pub cross_checks_hold: bool,
}

/// `K(Σ) = im D + C T*`
pub fn ksub(sys: &Sigma, t: &Subspace) -> Subspace {
    sys.d.image().sum(&t.image(&sys.c).expect("C width")).expect("same ambient")
}

/// `L(Σ) = ker D ∩ B^{-1} V*`
pub fn lsub(sys: &Sigma, v: &Subspace) -> Subspace {
    sys.d.kernel().intersect(&v.preimage(&sys.b).expect("B height")).expect("same ambient")
}

pub fn kl_subspaces(sys: &Sigma) -> SubspaceReport {
    let (v, vs) = vstar_steps(sys);
    let (t, ts) = tstar_steps(sys);
    let r = v.intersect(&t).expect("same ambient");
    let k = ksub(sys, &t);
    let l = lsub(sys, &v);
    let dual = sys.dual();
    let l_dual = lsub(&dual, &vstar(&dual));
    let cross = k.perp() == l_dual && t == tstar_direct(sys);
    SubspaceReport {
        right_invertible: k.is_full(),
        left_invertible: l.is_zero(),
        vstar: v,
        tstar: t,
        rstar: r,
        ksub: k,
        lsub: l,
        vstar_steps: vs,
        tstar_steps: ts,
        cross_checks_hold: cross,
    }
}

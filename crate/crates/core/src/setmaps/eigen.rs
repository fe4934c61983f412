//! Eigenpairs `A^T q + C^T u = λ q`, `B^T q + D^T u = 0`, `u ∈ K`, `q ≠ 0`,
//! for `λ` in an interval.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_traits::{One, Signed, Zero};
use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::MapError;
use crate::exactla::eigen::float_null_space;
use crate::exactla::poly::simplest_between;
use crate::exactla::{
    dot, fmt_rat, pencil_candidates, rationalize, to_f64, PencilSpectrum, Rat, RatMatrix, RealRoot, Subspace,
    DEFAULT_TOL,
};
use crate::geomctrl::Sigma;
use crate::par;
use crate::polyhedra::lp::feasible_point;
use crate::polyhedra::Polyhedron;

const NULL_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub enum Scalar {
    Exact(Rat),
    Approx(f64),
}

impl Scalar {
    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => to_f64(r),
            Scalar::Approx(x) => *x,
        }
    }
    pub fn exact(&self) -> Option<&Rat> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Approx(_) => None,
        }
    }
}

impl std::fmt::Display for Scalar {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Scalar::Exact(r) => f.write_str(&fmt_rat(r)),
            Scalar::Approx(x) => write!(f, "~{x:.12}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(r) => s.serialize_str(&fmt_rat(r)),
            Scalar::Approx(x) => s.serialize_f64(*x),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConeTag {
    Yplus,
    NegYb,
}

impl ConeTag {
    pub fn name(self) -> &'static str {
        match self {
            ConeTag::Yplus => "Yplus",
            ConeTag::NegYb => "negYb",
        }
    }
}

/// `[lo, hi]`, with `hi = None` meaning `+∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub lo: Rat,
    pub hi: Option<Rat>,
}

impl Interval {
    pub fn closed(lo: Rat, hi: Rat) -> Self {
        Interval { lo, hi: Some(hi) }
    }
    pub fn from(lo: Rat) -> Self {
        Interval { lo, hi: None }
    }
    fn contains(&self, x: &Rat) -> bool {
        *x >= self.lo && self.hi.as_ref().is_none_or(|h| x <= h)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenCertificate {
    pub lambda: Scalar,
    pub q: Vec<Scalar>,
    pub u: Vec<Scalar>,
    pub cone: ConeTag,
    pub exact: bool,
    pub residual: f64,
}

impl EigenCertificate {
    /// `(λ, q, u)` when every entry is rational.
    pub fn exact_parts(&self) -> Option<(Rat, Vec<Rat>, Vec<Rat>)> {
        let all = |v: &[Scalar]| v.iter().map(|x| x.exact().cloned()).collect::<Option<Vec<_>>>();
        Some((self.lambda.exact()?.clone(), all(&self.q)?, all(&self.u)?))
    }
}

impl Serialize for EigenCertificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("EigenCertificate", if self.exact { 5 } else { 6 })?;
        st.serialize_field("lambda", &self.lambda)?;
        st.serialize_field("q", &self.q)?;
        st.serialize_field("u", &self.u)?;
        st.serialize_field("cone", self.cone.name())?;
        st.serialize_field("exact", &self.exact)?;
        if !self.exact {
            st.serialize_field("residual", &self.residual)?;
        }
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum EigenSearch {
    /// `numerical` is set when some irrational candidate was ruled out in
    /// floating point; `singular` when a face pencil had a kernel for every λ.
    NoEigenpair {
        numerical: bool,
        singular: bool,
    },
    Found(EigenCertificate),
}

impl EigenSearch {
    pub fn certificate(&self) -> Option<&EigenCertificate> {
        match self {
            EigenSearch::Found(c) => Some(c),
            EigenSearch::NoEigenpair { .. } => None,
        }
    }
    pub fn is_none(&self) -> bool {
        matches!(self, EigenSearch::NoEigenpair { .. })
    }
}

/// Setup shared by every test point: `z ↦ (q, u) = (N_q z, N_u z)` spans
/// `ker [B^T D^T]`, `M = A^T N_q + C^T N_u`, and `Z = {z : N_u z ∈ K}`.
struct Pencil {
    nq: RatMatrix,
    nu: RatMatrix,
    m: RatMatrix,
    z: Polyhedron,
}

struct Face {
    span: RatMatrix,
    /// Inequalities of `Z` that are strict on the relative interior.
    strict: Vec<Vec<Rat>>,
}

enum TestPoint {
    Rational(Rat),
    Algebraic { root: RealRoot, face: usize },
}

fn setup(sys: &Sigma, k: &Polyhedron) -> Result<Pencil, MapError> {
    let (n, s) = (sys.n(), sys.s());
    let bd = sys.b.transpose().hstack(&sys.d.transpose());
    let basis = bd.kernel().basis().clone();
    let kdim = basis.ncols();
    let nq = basis.select_rows(&(0..n).collect::<Vec<_>>());
    let nu = basis.select_rows(&(n..n + s).collect::<Vec<_>>());
    let m = sys.a.transpose().mul(&nq).add(&sys.c.transpose().mul(&nu));
    let z = if kdim == 0 { Polyhedron::origin(0) } else { k.preimage(&nu)? };
    Ok(Pencil { nq, nu, m, z })
}

/// Faces of the cone `Z` with a nonzero span, largest first.
fn faces(z: &Polyhedron) -> Vec<Face> {
    let rays = z.rays();
    let lin = z.lineality();
    let ineqs: Vec<&Vec<Rat>> = z.ineqs().iter().map(|(g, _)| g).collect();
    let mut seen: Vec<Vec<bool>> = vec![vec![true; rays.len()]];
    let mut queue = vec![vec![true; rays.len()]];
    let mut out = Vec::new();
    while let Some(mask) = queue.pop() {
        let gens: Vec<Vec<Rat>> =
            lin.iter().cloned().chain(rays.iter().zip(&mask).filter(|(_, &b)| b).map(|(r, _)| r.clone())).collect();
        if gens.is_empty() {
            continue;
        }
        let span = RatMatrix::from_cols(z.dim(), &gens);
        let strict: Vec<Vec<Rat>> =
            ineqs.iter().filter(|g| gens.iter().any(|v| !dot(g, v).is_zero())).map(|g| (*g).clone()).collect();
        for g in &ineqs {
            let child: Vec<bool> = rays.iter().zip(&mask).map(|(r, &b)| b && dot(g, r).is_zero()).collect();
            if child != mask && !seen.contains(&child) {
                seen.push(child.clone());
                queue.push(child);
            }
        }
        out.push(Face { span: Subspace::from_matrix_cols(&span).basis().clone(), strict });
    }
    out
}

fn sign_normalize(z: Vec<Rat>, q: &[Rat]) -> Vec<Rat> {
    match q.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => z.into_iter().map(|v| -v).collect(),
        _ => z,
    }
}

fn exact_test(p: &Pencil, lambda: &Rat, cone: ConeTag) -> Option<EigenCertificate> {
    let pencil = p.m.sub(&p.nq.scale(lambda));
    let ker = pencil.kernel();
    if ker.is_zero() {
        return None;
    }
    let cut = p.z.intersect(&Polyhedron::from_subspace(&ker)).ok()?;
    let lin = cut.lineality().iter().map(|l| (l, true));
    let rays = cut.rays().iter().map(|r| (r, false));
    for (g, two_sided) in lin.chain(rays) {
        let q = p.nq.mul_vec(g);
        if q.iter().all(|x| x.is_zero()) {
            continue;
        }
        let z = if two_sided { sign_normalize(g.clone(), &q) } else { g.clone() };
        let q = p.nq.mul_vec(&z);
        let u = p.nu.mul_vec(&z);
        return Some(EigenCertificate {
            lambda: Scalar::Exact(lambda.clone()),
            q: q.into_iter().map(Scalar::Exact).collect(),
            u: u.into_iter().map(Scalar::Exact).collect(),
            cone,
            exact: true,
            residual: 0.0,
        });
    }
    None
}

fn residual(sys: &Sigma, lambda: f64, q: &[f64], u: &[f64]) -> f64 {
    let (at, ct) = (sys.a.transpose().to_f64(), sys.c.transpose().to_f64());
    let (bt, dt) = (sys.b.transpose().to_f64(), sys.d.transpose().to_f64());
    let qv = nalgebra::DVector::from_column_slice(q);
    let uv = nalgebra::DVector::from_column_slice(u);
    let r1 = &at * &qv + &ct * &uv - &qv * lambda;
    let r2 = &bt * &qv + &dt * &uv;
    let scale = qv.amax().max(f64::MIN_POSITIVE);
    r1.amax().max(if r2.is_empty() { 0.0 } else { r2.amax() }) / scale
}

/// Floating check at an irrational candidate on one face: a kernel vector of
/// `(M − λN_q)W_F` strictly inside the face, found by an LP on rounded data.
fn numeric_test(
    sys: &Sigma,
    p: &Pencil,
    face: &Face,
    root: &RealRoot,
    cone: ConeTag,
    tol: f64,
) -> Option<EigenCertificate> {
    let lam = root.approx();
    let w = face.span.to_f64();
    let pm = (p.m.to_f64() - p.nq.to_f64() * lam) * &w;
    let null = float_null_space(&pm, NULL_TOL);
    if null.ncols() == 0 {
        return None;
    }
    let basis: DMatrix<f64> = &w * &null;
    let k = basis.ncols();
    let round = |x: f64| rationalize(x, 1_000_000_000);
    let big = Rat::from_integer(1_000_000.into());
    let mut ineq: Vec<(Vec<Rat>, Rat)> = face
        .strict
        .iter()
        .map(|g| {
            let gf: Vec<f64> = g.iter().map(to_f64).collect();
            let row: Vec<Rat> = (0..k).map(|j| round((0..gf.len()).map(|i| gf[i] * basis[(i, j)]).sum())).collect();
            (row, -Rat::one())
        })
        .collect();
    for j in 0..k {
        let mut e = vec![Rat::zero(); k];
        e[j] = Rat::one();
        ineq.push((e.clone(), big.clone()));
        e[j] = -Rat::one();
        ineq.push((e, big.clone()));
    }
    let nqf = p.nq.to_f64();
    let nuf = p.nu.to_f64();
    let candidates: Vec<nalgebra::DVector<f64>> = if face.strict.is_empty() {
        // the face is a subspace: take the null vector moving q the most
        (0..k).map(|j| basis.column(j).into_owned()).collect()
    } else {
        let y = feasible_point(k, &ineq, &[])?;
        let yf = nalgebra::DVector::from_iterator(k, y.iter().map(to_f64));
        vec![&basis * yf]
    };
    let z = candidates
        .into_iter()
        .max_by(|a, b| (&nqf * a).amax().partial_cmp(&(&nqf * b).amax()).unwrap_or(Ordering::Equal))?;
    let q = &nqf * &z;
    if q.amax() <= NULL_TOL * z.amax().max(1.0) {
        return None;
    }
    let sign = if q.iter().find(|x| x.abs() > NULL_TOL).is_some_and(|x| *x < 0.0) { -1.0 } else { 1.0 };
    let q: Vec<f64> = q.iter().map(|x| x * sign).collect();
    let u: Vec<f64> = (&nuf * &z).iter().map(|x| x * sign).collect();
    let res = residual(sys, lam, &q, &u);
    if res > tol {
        return None;
    }
    Some(EigenCertificate {
        lambda: Scalar::Approx(lam),
        q: q.into_iter().map(Scalar::Approx).collect(),
        u: u.into_iter().map(Scalar::Approx).collect(),
        cone,
        exact: false,
        residual: res,
    })
}

/// A rational strictly between two distinct real roots.
fn between(a: &RealRoot, b: &RealRoot) -> Rat {
    let (mut a, mut b) = (a.clone(), b.clone());
    loop {
        let (_, ahi) = a.bounds();
        let (blo, _) = b.bounds();
        if ahi < blo {
            let s = simplest_between(&ahi, &blo);
            let strict = a.cmp_value(&RealRoot::Rational(s.clone())) == Ordering::Less
                && RealRoot::Rational(s.clone()).cmp_value(&b) == Ordering::Less;
            return if strict { s } else { (ahi + blo) / Rat::from_integer(2.into()) };
        }
        let (alo, ahi) = a.bounds();
        let (blo, bhi) = b.bounds();
        let w = std::cmp::min(ahi - alo, bhi - blo) / Rat::from_integer(2.into());
        let w = if w.is_zero() { Rat::new(1.into(), 1024.into()) } else { w };
        a.refine(&w);
        b.refine(&w);
    }
}

/// Search for a cone-constrained eigenpair with `λ ∈ interval` and `u ∈ K`.
///
/// Test points are the interval ends, every rank-drop point of the pencil
/// restricted to each face of `{z : N_u z ∈ K}`, and one rational between
/// consecutive points. Rational points are decided exactly. Irrational ones
/// are checked in floating point and yield certificates with `exact = false`.
pub fn cone_eigen_search(
    sys: &Sigma,
    k: &Polyhedron,
    interval: &Interval,
    cone: ConeTag,
) -> Result<EigenSearch, MapError> {
    cone_eigen_search_with(sys, k, interval, cone, DEFAULT_TOL)
}

/// [`cone_eigen_search`] accepting numeric certificates with relative
/// residual at most `tol`.
pub fn cone_eigen_search_with(
    sys: &Sigma,
    k: &Polyhedron,
    interval: &Interval,
    cone: ConeTag,
    tol: f64,
) -> Result<EigenSearch, MapError> {
    if k.dim() != sys.s() {
        return Err(MapError::Dimension(format!("cone in R^{}, system has {} outputs", k.dim(), sys.s())));
    }
    if !k.is_cone() {
        return Err(MapError::Dimension("eigen search needs a polyhedral cone".into()));
    }
    if interval.lo.is_negative() || interval.hi.as_ref().is_some_and(|h| *h < interval.lo) {
        return Err(MapError::Dimension("interval must satisfy 0 ≤ lo ≤ hi".into()));
    }
    let p = setup(sys, k)?;
    if p.z.dim() == 0 || p.nq.is_zero() {
        return Ok(EigenSearch::NoEigenpair { numerical: false, singular: false });
    }
    let faces = faces(&p.z);
    let spectra = par::map(&faces, |f| {
        pencil_candidates(&p.m.mul(&f.span), &p.nq.mul(&f.span), &interval.lo, interval.hi.as_ref())
    });
    let mut singular = false;
    let mut roots: Vec<(RealRoot, usize)> = Vec::new();
    for (i, s) in spectra.into_iter().enumerate() {
        let s = s.map_err(|e| MapError::Geom(e.into()))?;
        singular |= matches!(s, PencilSpectrum::Singular { .. });
        for r in s.points() {
            if !roots.iter().any(|(x, _)| x.cmp_value(r) == Ordering::Equal) {
                roots.push((r.clone(), i));
            }
        }
    }
    roots.sort_by(|a, b| a.0.cmp_value(&b.0));

    let mut points: Vec<TestPoint> = Vec::new();
    let mut rationals: Vec<Rat> = Vec::new();
    let mut push_rat = |x: Rat, pts: &mut Vec<TestPoint>| {
        if interval.contains(&x) && !rationals.contains(&x) {
            rationals.push(x.clone());
            pts.push(TestPoint::Rational(x));
        }
    };
    for (r, face) in &roots {
        match r.as_rational() {
            Some(x) => push_rat(x.clone(), &mut points),
            None => points.push(TestPoint::Algebraic { root: r.clone(), face: *face }),
        }
    }
    if let Some(h) = &interval.hi {
        push_rat(h.clone(), &mut points);
    }
    push_rat(interval.lo.clone(), &mut points);
    let mut marks: Vec<RealRoot> = vec![RealRoot::Rational(interval.lo.clone())];
    marks.extend(roots.iter().map(|(r, _)| r.clone()));
    if let Some(h) = &interval.hi {
        marks.push(RealRoot::Rational(h.clone()));
    }
    marks.sort_by(|a, b| a.cmp_value(b));
    marks.dedup_by(|a, b| a.cmp_value(b) == Ordering::Equal);
    for w in marks.windows(2) {
        push_rat(between(&w[0], &w[1]), &mut points);
    }
    if interval.hi.is_none() {
        let top = marks.last().map(|r| r.bounds().1).unwrap_or_else(|| interval.lo.clone());
        push_rat(top.floor() + Rat::one(), &mut points);
    }

    let numerical = points.iter().any(|t| matches!(t, TestPoint::Algebraic { .. }));
    let found = par::find_map_first(&points, |t| match t {
        TestPoint::Rational(x) => exact_test(&p, x, cone),
        TestPoint::Algebraic { root, face } => numeric_test(sys, &p, &faces[*face], root, cone, tol),
    });
    Ok(match found {
        Some(c) => EigenSearch::Found(c),
        None => EigenSearch::NoEigenpair { numerical, singular },
    })
}

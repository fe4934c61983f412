//! Exact convex polyhedra in double description.
//!
//! A [`Polyhedron`] always carries both an irredundant inequality description
//! and a minimal generator description, each in a canonical form, so `==` is
//! set equality.

pub mod dd;
pub mod fm;
pub mod json;
pub mod lp;

use std::cmp::Ordering;

use num_traits::{One, Signed, Zero};

use crate::exactla::{dot, is_zero_vec, primitive, Rat, RatMatrix, Subspace};
use dd::cone_generators;
use lp::LpOutcome;

/// A linear constraint `a·y ≤ b` or `a·y = b`.
pub type Row = (Vec<Rat>, Rat);

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("the set does not contain the origin")]
    OriginOutside,
    #[error("operation undefined on the empty set")]
    Empty,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polyhedron {
    dim: usize,
    empty: bool,
    ineq: Vec<Row>,
    eq: Vec<Row>,
    vertices: Vec<Vec<Rat>>,
    rays: Vec<Vec<Rat>>,
    lineality: Vec<Vec<Rat>>,
}

/// Result of [`Polyhedron::interior`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InteriorWitness {
    pub solid: bool,
    pub witness: Option<Vec<Rat>>,
}

impl std::fmt::Debug for Polyhedron {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.empty {
            return write!(f, "Polyhedron(dim {}, empty)", self.dim);
        }
        let v = |xs: &[Vec<Rat>]| -> Vec<String> {
            xs.iter().map(|x| format!("({})", x.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(","))).collect()
        };
        write!(
            f,
            "Polyhedron(dim {}, V {:?}, R {:?}, L {:?}, {} ineq, {} eq)",
            self.dim,
            v(&self.vertices),
            v(&self.rays),
            v(&self.lineality),
            self.ineq.len(),
            self.eq.len()
        )
    }
}

fn cmp_vec(a: &[Rat], b: &[Rat]) -> Ordering {
    a.iter().cmp(b.iter())
}

fn cmp_row(a: &Row, b: &Row) -> Ordering {
    cmp_vec(&a.0, &b.0).then_with(|| a.1.cmp(&b.1))
}

fn zeros(n: usize) -> Vec<Rat> {
    vec![Rat::zero(); n]
}

/// Reduces `v` modulo the span of a canonical column-echelon basis.
fn reduce_mod(v: &mut [Rat], basis: &Subspace) {
    for b in basis.basis_vectors() {
        let p = b.iter().position(|x| !x.is_zero()).expect("basis vector is nonzero");
        if !v[p].is_zero() {
            let f = v[p].clone() / &b[p];
            for (x, y) in v.iter_mut().zip(&b) {
                *x -= &f * y;
            }
        }
    }
}

struct VRep {
    vertices: Vec<Vec<Rat>>,
    rays: Vec<Vec<Rat>>,
    lineality: Vec<Vec<Rat>>,
}

/// Generators of `{y : ineq, eq}`; `None` if empty.
fn h_to_v(dim: usize, ineq: &[Row], eq: &[Row]) -> Option<VRep> {
    let hom = |(g, h): &Row| {
        let mut a = g.clone();
        a.push(-h.clone());
        a
    };
    let mut rows: Vec<Vec<Rat>> = ineq.iter().map(hom).collect();
    let mut t = zeros(dim + 1);
    t[dim] = -Rat::one();
    rows.push(t);
    let eqs: Vec<Vec<Rat>> = eq.iter().map(hom).collect();
    let g = cone_generators(dim + 1, &rows, &eqs);
    let lin = Subspace::from_vectors(dim, &g.lineality.iter().map(|l| l[..dim].to_vec()).collect::<Vec<_>>());
    let mut vertices = Vec::new();
    let mut rays = Vec::new();
    for r in g.rays {
        let t = r[dim].clone();
        let mut y = r[..dim].to_vec();
        if t.is_positive() {
            y.iter_mut().for_each(|x| *x /= &t);
            reduce_mod(&mut y, &lin);
            vertices.push(y);
        } else {
            reduce_mod(&mut y, &lin);
            if !is_zero_vec(&y) {
                rays.push(primitive(&y));
            }
        }
    }
    if vertices.is_empty() {
        return None;
    }
    vertices.sort_by(|a, b| cmp_vec(a, b));
    vertices.dedup();
    rays.sort_by(|a, b| cmp_vec(a, b));
    rays.dedup();
    Some(VRep { vertices, rays, lineality: lin.basis_vectors() })
}

/// Canonical irredundant constraints of `conv V + cone R + span L` (V nonempty).
fn v_to_h(dim: usize, v: &VRep) -> (Vec<Row>, Vec<Row>) {
    let mut rows = Vec::new();
    for x in &v.vertices {
        let mut a = x.clone();
        a.push(Rat::one());
        rows.push(a);
    }
    for r in &v.rays {
        let mut a = r.clone();
        a.push(Rat::zero());
        rows.push(a);
    }
    let eqs: Vec<Vec<Rat>> = v
        .lineality
        .iter()
        .map(|l| {
            let mut a = l.clone();
            a.push(Rat::zero());
            a
        })
        .collect();
    let g = cone_generators(dim + 1, &rows, &eqs);
    // a·(y,1) ≤ 0  ⇔  a[..dim]·y ≤ −a[dim]
    let split = |a: Vec<Rat>| -> Row {
        let h = -a[dim].clone();
        (a[..dim].to_vec(), h)
    };
    let eq_rows: Vec<Row> = g.lineality.into_iter().map(split).collect();
    let ineq_rows: Vec<Row> = g.rays.into_iter().map(split).collect();
    canonical_rows(dim, ineq_rows, eq_rows)
}

/// Equalities in RREF (primitive integer rows), inequalities reduced modulo
/// them, primitive, sorted and deduplicated; trivial rows dropped.
fn canonical_rows(dim: usize, ineq: Vec<Row>, eq: Vec<Row>) -> (Vec<Row>, Vec<Row>) {
    let aug: Vec<Vec<Rat>> = eq
        .iter()
        .map(|(e, f)| {
            let mut r = e.clone();
            r.push(f.clone());
            r
        })
        .collect();
    let (rref, pivots) = RatMatrix::from_rows(dim + 1, &aug).rref();
    let eq_rref: Vec<(usize, Vec<Rat>)> =
        pivots.iter().enumerate().filter(|(_, &p)| p < dim).map(|(i, &p)| (p, rref.row_vec(i))).collect();
    let mut out_ineq: Vec<Row> = Vec::new();
    for (g, h) in ineq {
        let mut r = g;
        r.push(h);
        for (p, e) in &eq_rref {
            if !r[*p].is_zero() {
                let f = r[*p].clone();
                for (x, y) in r.iter_mut().zip(e) {
                    *x -= &f * y;
                }
            }
        }
        if is_zero_vec(&r[..dim]) {
            continue;
        }
        let r = primitive(&r);
        let h = r[dim].clone();
        out_ineq.push((r[..dim].to_vec(), h));
    }
    out_ineq.sort_by(cmp_row);
    out_ineq.dedup();
    let out_eq = eq_rref
        .into_iter()
        .map(|(_, e)| {
            let e = primitive(&e);
            let f = e[dim].clone();
            (e[..dim].to_vec(), f)
        })
        .collect();
    (out_ineq, out_eq)
}

fn check_rows(dim: usize, rows: &[Row], what: &str) -> Result<(), PolyError> {
    for (i, (g, _)) in rows.iter().enumerate() {
        if g.len() != dim {
            return Err(PolyError::Dimension(format!("{what} row {i} has {} entries, expected {dim}", g.len())));
        }
    }
    Ok(())
}

fn check_vecs(dim: usize, vs: &[Vec<Rat>], what: &str) -> Result<(), PolyError> {
    for (i, v) in vs.iter().enumerate() {
        if v.len() != dim {
            return Err(PolyError::Dimension(format!("{what} {i} has {} entries, expected {dim}", v.len())));
        }
    }
    Ok(())
}

impl Polyhedron {
    /// `{y ∈ R^dim : g·y ≤ h for (g,h) ∈ ineq, e·y = f for (e,f) ∈ eq}`.
    pub fn from_hrep(dim: usize, ineq: Vec<Row>, eq: Vec<Row>) -> Result<Self, PolyError> {
        check_rows(dim, &ineq, "inequality")?;
        check_rows(dim, &eq, "equality")?;
        Ok(Self::from_hrep_unchecked(dim, &ineq, &eq))
    }

    fn from_hrep_unchecked(dim: usize, ineq: &[Row], eq: &[Row]) -> Self {
        match h_to_v(dim, ineq, eq) {
            None => Self::empty(dim),
            Some(v) => Self::from_minimal_v(dim, v),
        }
    }

    fn from_minimal_v(dim: usize, v: VRep) -> Self {
        let (ineq, eq) = v_to_h(dim, &v);
        Polyhedron { dim, empty: false, ineq, eq, vertices: v.vertices, rays: v.rays, lineality: v.lineality }
    }

    /// Same as [`from_hrep`](Self::from_hrep) with `G y ≤ h`, `E y = f`.
    pub fn from_matrices(g: &RatMatrix, h: &[Rat], e: &RatMatrix, f: &[Rat]) -> Result<Self, PolyError> {
        if g.nrows() != h.len() || e.nrows() != f.len() || (g.nrows() > 0 && e.nrows() > 0 && g.ncols() != e.ncols()) {
            return Err(PolyError::Dimension("constraint blocks do not match".into()));
        }
        let dim = if g.nrows() > 0 { g.ncols() } else { e.ncols() };
        let ineq = (0..g.nrows()).map(|i| (g.row_vec(i), h[i].clone())).collect();
        let eq = (0..e.nrows()).map(|i| (e.row_vec(i), f[i].clone())).collect();
        Self::from_hrep(dim, ineq, eq)
    }

    /// `conv(vertices) + cone(rays) + span(lineality)`; empty if no vertices.
    pub fn from_vrep(
        dim: usize,
        vertices: Vec<Vec<Rat>>,
        rays: Vec<Vec<Rat>>,
        lineality: Vec<Vec<Rat>>,
    ) -> Result<Self, PolyError> {
        check_vecs(dim, &vertices, "vertex")?;
        check_vecs(dim, &rays, "ray")?;
        check_vecs(dim, &lineality, "lineality vector")?;
        Ok(Self::from_vrep_unchecked(dim, vertices, rays, lineality))
    }

    fn from_vrep_unchecked(dim: usize, vertices: Vec<Vec<Rat>>, rays: Vec<Vec<Rat>>, lineality: Vec<Vec<Rat>>) -> Self {
        if vertices.is_empty() {
            return Self::empty(dim);
        }
        let raw = VRep {
            vertices,
            rays: rays.into_iter().filter(|r| !is_zero_vec(r)).collect(),
            lineality: lineality.into_iter().filter(|r| !is_zero_vec(r)).collect(),
        };
        let (ineq, eq) = v_to_h(dim, &raw);
        Self::from_hrep_unchecked(dim, &ineq, &eq)
    }

    pub fn empty(dim: usize) -> Self {
        Polyhedron {
            dim,
            empty: true,
            ineq: vec![(zeros(dim), -Rat::one())],
            eq: vec![],
            vertices: vec![],
            rays: vec![],
            lineality: vec![],
        }
    }

    pub fn universe(dim: usize) -> Self {
        Polyhedron {
            dim,
            empty: false,
            ineq: vec![],
            eq: vec![],
            vertices: vec![zeros(dim)],
            rays: vec![],
            lineality: Subspace::full(dim).basis_vectors(),
        }
    }

    /// The single point `{0}`.
    pub fn origin(dim: usize) -> Self {
        Self::from_subspace(&Subspace::zero(dim))
    }

    pub fn from_subspace(s: &Subspace) -> Self {
        Self::from_vrep_unchecked(s.ambient(), vec![zeros(s.ambient())], vec![], s.basis_vectors())
    }

    /// The box `∏ [lo_i, hi_i]`.
    pub fn boxed(lo: &[Rat], hi: &[Rat]) -> Result<Self, PolyError> {
        if lo.len() != hi.len() {
            return Err(PolyError::Dimension("box bounds differ in length".into()));
        }
        let d = lo.len();
        let mut ineq = Vec::new();
        for i in 0..d {
            let mut e = zeros(d);
            e[i] = Rat::one();
            ineq.push((e.clone(), hi[i].clone()));
            e[i] = -Rat::one();
            ineq.push((e, -lo[i].clone()));
        }
        Self::from_hrep(d, ineq, vec![])
    }

    /// `[-r, r]^dim`.
    pub fn cube(dim: usize, r: &Rat) -> Self {
        Self::boxed(&vec![-r.clone(); dim], &vec![r.clone(); dim]).expect("equal lengths")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn is_empty(&self) -> bool {
        self.empty
    }
    pub fn ineqs(&self) -> &[Row] {
        &self.ineq
    }
    pub fn eqs(&self) -> &[Row] {
        &self.eq
    }
    pub fn vertices(&self) -> &[Vec<Rat>] {
        &self.vertices
    }
    pub fn rays(&self) -> &[Vec<Rat>] {
        &self.rays
    }
    pub fn lineality(&self) -> &[Vec<Rat>] {
        &self.lineality
    }
    pub fn lineality_space(&self) -> Subspace {
        Subspace::from_vectors(self.dim, &self.lineality)
    }

    pub fn is_bounded(&self) -> bool {
        self.rays.is_empty() && self.lineality.is_empty()
    }
    pub fn is_universe(&self) -> bool {
        !self.empty && self.ineq.is_empty() && self.eq.is_empty()
    }
    /// True for `{0}`.
    pub fn is_origin(&self) -> bool {
        !self.empty && self.is_bounded() && self.vertices.len() == 1 && is_zero_vec(&self.vertices[0])
    }
    /// True when the set is a cone with apex at the origin.
    pub fn is_cone(&self) -> bool {
        !self.empty && self.vertices.len() == 1 && is_zero_vec(&self.vertices[0])
    }
    /// True when the set is a linear subspace.
    pub fn is_subspace(&self) -> bool {
        self.is_cone() && self.rays.is_empty()
    }
    /// Affine dimension (`-1` encoded as `None` for the empty set).
    pub fn affine_dim(&self) -> Option<usize> {
        if self.empty {
            None
        } else {
            Some(self.dim - self.eq.len())
        }
    }

    pub fn contains_point(&self, y: &[Rat]) -> bool {
        assert_eq!(y.len(), self.dim, "point dimension");
        !self.empty && self.ineq.iter().all(|(g, h)| dot(g, y) <= *h) && self.eq.iter().all(|(e, f)| dot(e, y) == *f)
    }

    pub fn contains_origin(&self) -> bool {
        self.contains_point(&zeros(self.dim))
    }

    fn same_dim(&self, o: &Polyhedron) -> Result<(), PolyError> {
        if self.dim != o.dim {
            return Err(PolyError::Dimension(format!("polyhedra in R^{} and R^{}", self.dim, o.dim)));
        }
        Ok(())
    }

    /// `self ⊆ other`, checked generator by generator.
    pub fn subset_eq(&self, other: &Polyhedron) -> Result<bool, PolyError> {
        self.same_dim(other)?;
        if self.empty {
            return Ok(true);
        }
        if other.empty {
            return Ok(false);
        }
        let dirs_ok = |d: &Vec<Rat>, two_sided: bool| {
            other.eq.iter().all(|(e, _)| dot(e, d).is_zero())
                && other.ineq.iter().all(|(g, _)| {
                    let v = dot(g, d);
                    if two_sided {
                        v.is_zero()
                    } else {
                        !v.is_positive()
                    }
                })
        };
        Ok(self.vertices.iter().all(|v| other.contains_point(v))
            && self.rays.iter().all(|r| dirs_ok(r, false))
            && self.lineality.iter().all(|l| dirs_ok(l, true)))
    }

    pub fn intersect(&self, other: &Polyhedron) -> Result<Polyhedron, PolyError> {
        self.same_dim(other)?;
        if self.empty || other.empty {
            return Ok(Self::empty(self.dim));
        }
        let ineq: Vec<Row> = self.ineq.iter().chain(&other.ineq).cloned().collect();
        let eq: Vec<Row> = self.eq.iter().chain(&other.eq).cloned().collect();
        Ok(Self::from_hrep_unchecked(self.dim, &ineq, &eq))
    }

    /// `M (self ∩ other)` without building the intersection's constraints.
    pub fn image_of_intersection(&self, other: &Polyhedron, m: &RatMatrix) -> Result<Polyhedron, PolyError> {
        self.same_dim(other)?;
        if m.ncols() != self.dim {
            return Err(PolyError::Dimension(format!(
                "image: map has {} columns, set lives in R^{}",
                m.ncols(),
                self.dim
            )));
        }
        if self.empty || other.empty {
            return Ok(Self::empty(m.nrows()));
        }
        let ineq: Vec<Row> = self.ineq.iter().chain(&other.ineq).cloned().collect();
        let eq: Vec<Row> = self.eq.iter().chain(&other.eq).cloned().collect();
        let Some(v) = h_to_v(self.dim, &ineq, &eq) else {
            return Ok(Self::empty(m.nrows()));
        };
        let f = |xs: &[Vec<Rat>]| xs.iter().map(|x| m.mul_vec(x)).collect::<Vec<_>>();
        Ok(Self::from_vrep_unchecked(m.nrows(), f(&v.vertices), f(&v.rays), f(&v.lineality)))
    }

    pub fn minkowski_sum(&self, other: &Polyhedron) -> Result<Polyhedron, PolyError> {
        self.same_dim(other)?;
        if self.empty || other.empty {
            return Ok(Self::empty(self.dim));
        }
        let mut vs = Vec::new();
        for a in &self.vertices {
            for b in &other.vertices {
                vs.push(a.iter().zip(b).map(|(x, y)| x + y).collect());
            }
        }
        let rays = self.rays.iter().chain(&other.rays).cloned().collect();
        let lin = self.lineality.iter().chain(&other.lineality).cloned().collect();
        Ok(Self::from_vrep_unchecked(self.dim, vs, rays, lin))
    }

    /// Cartesian product `self × other`.
    pub fn product(&self, other: &Polyhedron) -> Polyhedron {
        let d = self.dim + other.dim;
        if self.empty || other.empty {
            return Self::empty(d);
        }
        let left = |(g, h): &Row| {
            let mut a = g.clone();
            a.extend(zeros(other.dim));
            (a, h.clone())
        };
        let right = |(g, h): &Row| {
            let mut a = zeros(self.dim);
            a.extend(g.iter().cloned());
            (a, h.clone())
        };
        let ineq: Vec<Row> = self.ineq.iter().map(left).chain(other.ineq.iter().map(right)).collect();
        let eq: Vec<Row> = self.eq.iter().map(left).chain(other.eq.iter().map(right)).collect();
        Self::from_hrep_unchecked(d, &ineq, &eq)
    }

    /// `k`-fold product `self^k` (`R^0` point for `k = 0`).
    pub fn power(&self, k: usize) -> Polyhedron {
        let mut out = Polyhedron::universe(0);
        for _ in 0..k {
            out = out.product(self);
        }
        out
    }

    /// `{M y : y ∈ self}`.
    pub fn image(&self, m: &RatMatrix) -> Result<Polyhedron, PolyError> {
        if m.ncols() != self.dim {
            return Err(PolyError::Dimension(format!(
                "image: map has {} columns, set lives in R^{}",
                m.ncols(),
                self.dim
            )));
        }
        if self.empty {
            return Ok(Self::empty(m.nrows()));
        }
        let f = |xs: &[Vec<Rat>]| xs.iter().map(|x| m.mul_vec(x)).collect::<Vec<_>>();
        Ok(Self::from_vrep_unchecked(m.nrows(), f(&self.vertices), f(&self.rays), f(&self.lineality)))
    }

    /// `{x : M x ∈ self}`.
    pub fn preimage(&self, m: &RatMatrix) -> Result<Polyhedron, PolyError> {
        if m.nrows() != self.dim {
            return Err(PolyError::Dimension(format!(
                "preimage: map has {} rows, set lives in R^{}",
                m.nrows(),
                self.dim
            )));
        }
        if self.empty {
            return Ok(Self::empty(m.ncols()));
        }
        let t = m.transpose();
        let sub = |(g, h): &Row| (t.mul_vec(g), h.clone());
        let ineq: Vec<Row> = self.ineq.iter().map(sub).collect();
        let eq: Vec<Row> = self.eq.iter().map(sub).collect();
        Ok(Self::from_hrep_unchecked(m.ncols(), &ineq, &eq))
    }

    /// Coordinate projection onto `keep` (in that order).
    pub fn project(&self, keep: &[usize]) -> Polyhedron {
        let mut m = RatMatrix::zeros(keep.len(), self.dim);
        for (i, &k) in keep.iter().enumerate() {
            m[(i, k)] = Rat::one();
        }
        self.image(&m).expect("selection matrix has matching width")
    }

    /// Same projection computed by Fourier–Motzkin elimination on the
    /// inequality description.
    pub fn project_fm(&self, keep: &[usize]) -> Polyhedron {
        if self.empty {
            return Self::empty(keep.len());
        }
        let (ineq, eq) = fm::project(self.dim, &self.ineq, &self.eq, keep);
        Self::from_hrep_unchecked(keep.len(), &ineq, &eq)
    }

    pub fn negate(&self) -> Polyhedron {
        self.image(&RatMatrix::identity(self.dim).neg()).expect("square map")
    }

    pub fn scale(&self, c: &Rat) -> Polyhedron {
        self.image(&RatMatrix::identity(self.dim).scale(c)).expect("square map")
    }

    fn dual_rows(&self, vertex_rhs: Option<&Rat>) -> (Vec<Row>, Vec<Row>) {
        let mut ineq: Vec<Row> = Vec::new();
        for v in &self.vertices {
            match vertex_rhs {
                Some(r) => ineq.push((v.clone(), r.clone())),
                None => ineq.push((v.clone(), Rat::zero())),
            }
        }
        for r in &self.rays {
            ineq.push((r.clone(), Rat::zero()));
        }
        let eq = self.lineality.iter().map(|l| (l.clone(), Rat::zero())).collect();
        (ineq, eq)
    }

    /// `{q : ⟨q, y⟩ ≤ 1 ∀ y ∈ self}`; requires `0 ∈ self`.
    pub fn polar(&self) -> Result<Polyhedron, PolyError> {
        if self.empty {
            return Ok(Self::universe(self.dim));
        }
        if !self.contains_origin() {
            return Err(PolyError::OriginOutside);
        }
        let (ineq, eq) = self.dual_rows(Some(&Rat::one()));
        Ok(Self::from_hrep_unchecked(self.dim, &ineq, &eq))
    }

    /// `{q : ⟨q, y⟩ ≤ 0 ∀ y ∈ self}`.
    pub fn neg_polar_cone(&self) -> Polyhedron {
        if self.empty {
            return Self::universe(self.dim);
        }
        let (ineq, eq) = self.dual_rows(None);
        Self::from_hrep_unchecked(self.dim, &ineq, &eq)
    }

    /// `{q : ⟨q, y⟩ ≥ 0 ∀ y ∈ self}`.
    pub fn pos_polar_cone(&self) -> Polyhedron {
        self.neg_polar_cone().negate()
    }

    pub fn recession_cone(&self) -> Result<Polyhedron, PolyError> {
        if self.empty {
            return Err(PolyError::Empty);
        }
        Ok(Self::from_vrep_unchecked(self.dim, vec![zeros(self.dim)], self.rays.clone(), self.lineality.clone()))
    }

    /// Covectors bounded above on the set; closed for polyhedra.
    pub fn barrier_cone(&self) -> Result<Polyhedron, PolyError> {
        Ok(self.recession_cone()?.neg_polar_cone())
    }

    /// Smallest convex cone containing the set and the origin.
    pub fn conic_hull(&self) -> Result<Polyhedron, PolyError> {
        if self.empty {
            return Err(PolyError::Empty);
        }
        let rays = self.vertices.iter().chain(&self.rays).cloned().collect();
        Ok(Self::from_vrep_unchecked(self.dim, vec![zeros(self.dim)], rays, self.lineality.clone()))
    }

    /// `μ = max ‖v‖∞` over vertices: the set lies in `μ·[-1,1]^dim + 0⁺P`.
    pub fn hyperbolicity_witness(&self) -> Result<Rat, PolyError> {
        if self.empty {
            return Err(PolyError::Empty);
        }
        Ok(self
            .vertices
            .iter()
            .flat_map(|v| v.iter().map(|x| x.abs()))
            .fold(Rat::zero(), |a, b| if b > a { b } else { a }))
    }

    /// Full-dimensionality test with an interior point.
    pub fn interior(&self) -> InteriorWitness {
        if self.empty || !self.eq.is_empty() {
            return InteriorWitness { solid: false, witness: None };
        }
        let (solid, w) = self.interior_lp(None);
        InteriorWitness { solid, witness: w }
    }

    /// Whether the subspace meets the interior of the set, with a witness.
    pub fn subspace_meets_interior(&self, s: &Subspace) -> Result<InteriorWitness, PolyError> {
        if s.ambient() != self.dim {
            return Err(PolyError::Dimension(format!("subspace in R^{}, set in R^{}", s.ambient(), self.dim)));
        }
        if self.empty || !self.eq.is_empty() {
            return Ok(InteriorWitness { solid: false, witness: None });
        }
        let (solid, w) = self.interior_lp(Some(s));
        Ok(InteriorWitness { solid, witness: w })
    }

    // maximize t subject to G B c + t ≤ h, t ≤ 1 (B = identity without a subspace)
    fn interior_lp(&self, s: Option<&Subspace>) -> (bool, Option<Vec<Rat>>) {
        let basis = match s {
            Some(s) => s.basis().clone(),
            None => RatMatrix::identity(self.dim),
        };
        let k = basis.ncols();
        let bt = basis.transpose();
        let mut ineq: Vec<Row> = self
            .ineq
            .iter()
            .map(|(g, h)| {
                let mut a = bt.mul_vec(g);
                a.push(Rat::one());
                (a, h.clone())
            })
            .collect();
        let mut cap = zeros(k + 1);
        cap[k] = Rat::one();
        ineq.push((cap.clone(), Rat::one()));
        match lp::maximize(&cap, &ineq, &[]) {
            LpOutcome::Optimal { value, x } if value.is_positive() => {
                let y = basis.mul_vec(&x[..k]);
                (true, Some(y))
            }
            _ => (false, None),
        }
    }

    /// `S ∩ self = {0}`, by maximizing `±y_i` over the intersection.
    pub fn meets_subspace_only_at_origin(&self, s: &Subspace) -> Result<bool, PolyError> {
        if s.ambient() != self.dim {
            return Err(PolyError::Dimension(format!("subspace in R^{}, set in R^{}", s.ambient(), self.dim)));
        }
        if self.empty {
            return Ok(false);
        }
        let basis = s.basis();
        let k = basis.ncols();
        if k == 0 {
            return Ok(self.contains_origin());
        }
        let bt = basis.transpose();
        let ineq: Vec<Row> = self.ineq.iter().map(|(g, h)| (bt.mul_vec(g), h.clone())).collect();
        let eq: Vec<Row> = self.eq.iter().map(|(e, f)| (bt.mul_vec(e), f.clone())).collect();
        for i in 0..self.dim {
            for sign in [1i64, -1] {
                let c: Vec<Rat> = basis.row(i).iter().map(|x| x * Rat::from_integer(sign.into())).collect();
                match lp::maximize(&c, &ineq, &eq) {
                    LpOutcome::Infeasible => return Ok(false),
                    LpOutcome::Unbounded { .. } => return Ok(false),
                    LpOutcome::Optimal { value, .. } if !value.is_zero() => return Ok(false),
                    _ => {}
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::{int, rat};

    fn v(x: &[i64]) -> Vec<Rat> {
        x.iter().map(|&a| int(a)).collect()
    }

    fn unit_box() -> Polyhedron {
        Polyhedron::cube(2, &int(1))
    }

    #[test]
    fn box_vertices() {
        let b = unit_box();
        assert_eq!(b.vertices(), &[v(&[-1, -1]), v(&[-1, 1]), v(&[1, -1]), v(&[1, 1])]);
        assert!(b.rays().is_empty() && b.lineality().is_empty());
        assert_eq!(b.ineqs().len(), 4);
    }

    #[test]
    fn halfline_and_origin() {
        let p = Polyhedron::from_hrep(1, vec![(v(&[-1]), int(0))], vec![]).unwrap();
        assert_eq!(p.vertices(), &[v(&[0])]);
        assert_eq!(p.rays(), &[v(&[1])]);
        let o = Polyhedron::origin(2);
        assert_eq!(o.vertices(), &[v(&[0, 0])]);
        assert_eq!(o.eqs().len(), 2);
    }

    #[test]
    fn empty_marker() {
        let p = Polyhedron::from_hrep(1, vec![(v(&[1]), int(-1)), (v(&[-1]), int(-1))], vec![]).unwrap();
        assert!(p.is_empty());
        assert_eq!(p, Polyhedron::empty(1));
        assert!(p.subset_eq(&Polyhedron::origin(1)).unwrap());
    }

    #[test]
    fn polar_of_box_is_cross_polytope() {
        let p = unit_box().polar().unwrap();
        let cross =
            Polyhedron::from_vrep(2, vec![v(&[1, 0]), v(&[-1, 0]), v(&[0, 1]), v(&[0, -1])], vec![], vec![]).unwrap();
        assert_eq!(p, cross);
        assert_eq!(p.polar().unwrap(), unit_box());
        assert!(unit_box().neg_polar_cone().is_origin());
        assert!(unit_box().pos_polar_cone().is_origin());
        assert!(Polyhedron::universe(2).polar().unwrap().is_origin());
        let shifted = Polyhedron::boxed(&[int(1)], &[int(2)]).unwrap();
        assert_eq!(shifted.polar(), Err(PolyError::OriginOutside));
    }

    fn ex6_graph() -> Polyhedron {
        Polyhedron::from_hrep(
            2,
            vec![(v(&[1, 0]), int(1)), (v(&[-1, 0]), int(1)), (v(&[2, -1]), int(0)), (v(&[-2, -1]), int(0))],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn recession_barrier_conic() {
        assert!(unit_box().recession_cone().unwrap().is_origin());
        let rc = ex6_graph().recession_cone().unwrap();
        assert_eq!(rc, Polyhedron::from_vrep(2, vec![v(&[0, 0])], vec![v(&[0, 1])], vec![]).unwrap());
        assert!(unit_box().barrier_cone().unwrap().is_universe());
        let half = Polyhedron::from_hrep(1, vec![(v(&[-1]), int(0))], vec![]).unwrap();
        assert_eq!(half.barrier_cone().unwrap(), half.negate());
        assert!(Polyhedron::universe(2).barrier_cone().unwrap().is_origin());
        assert!(unit_box().conic_hull().unwrap().is_universe());
        let seg = Polyhedron::from_vrep(2, vec![v(&[1, 0]), v(&[1, 1])], vec![], vec![]).unwrap();
        let ch = seg.conic_hull().unwrap();
        assert_eq!(ch, Polyhedron::from_vrep(2, vec![v(&[0, 0])], vec![v(&[1, 0]), v(&[1, 1])], vec![]).unwrap());
        assert!(Polyhedron::origin(2).conic_hull().unwrap().is_origin());
    }

    #[test]
    fn interior_queries() {
        let b = unit_box();
        let e1 = Subspace::axis(2, 0);
        let w = b.subspace_meets_interior(&e1).unwrap();
        assert!(w.solid);
        assert!(b.contains_point(w.witness.as_ref().unwrap()));
        assert!(!Polyhedron::origin(2).interior().solid);
        assert!(b.interior().solid);
        let slab =
            Polyhedron::from_hrep(2, vec![(v(&[0, 1]), int(1)), (v(&[0, -1]), int(1))], vec![(v(&[1, 0]), int(1))])
                .unwrap();
        assert!(!slab.subspace_meets_interior(&e1).unwrap().solid);
        assert!(!b.meets_subspace_only_at_origin(&e1).unwrap());
        let cone = Polyhedron::from_hrep(2, vec![(v(&[1, -1]), int(0)), (v(&[1, 1]), int(0))], vec![]).unwrap();
        assert!(cone.meets_subspace_only_at_origin(&Subspace::axis(2, 1)).unwrap());
    }

    #[test]
    fn transforms() {
        let b = unit_box();
        assert_eq!(b.image(&RatMatrix::identity(2)).unwrap(), b);
        let s = b.image(&RatMatrix::from_i64(&[&[1, 1]])).unwrap();
        assert_eq!(s, Polyhedron::cube(1, &int(2)));
        // [C D] of the two-state example: y = (u, x2)
        let cd = RatMatrix::from_i64(&[&[0, 0, 1], &[0, 1, 0]]);
        let pre = b.preimage(&cd).unwrap();
        let expect = Polyhedron::from_hrep(
            3,
            vec![(v(&[0, 0, 1]), int(1)), (v(&[0, 0, -1]), int(1)), (v(&[0, 1, 0]), int(1)), (v(&[0, -1, 0]), int(1))],
            vec![],
        )
        .unwrap();
        assert_eq!(pre, expect);
        assert_eq!(pre.project(&[1, 2]), b);
        assert_eq!(pre.project_fm(&[1, 2]), b);
    }

    #[test]
    fn set_algebra() {
        let i = Polyhedron::cube(1, &int(1));
        assert_eq!(i.minkowski_sum(&i).unwrap(), Polyhedron::cube(1, &int(2)));
        assert_eq!(i.product(&i), unit_box());
        assert!(unit_box().subset_eq(&Polyhedron::cube(2, &int(2))).unwrap());
        assert!(!Polyhedron::cube(2, &int(2)).subset_eq(&unit_box()).unwrap());
        assert!(unit_box().contains_point(&[rat(1, 2), int(-1)]));
        assert_eq!(i.power(2), unit_box());
    }

    #[test]
    fn hyperbolicity() {
        assert_eq!(unit_box().hyperbolicity_witness().unwrap(), int(1));
        let half = Polyhedron::from_hrep(1, vec![(v(&[-1]), int(0))], vec![]).unwrap();
        assert_eq!(half.hyperbolicity_witness().unwrap(), int(0));
        let p = Polyhedron::from_vrep(2, vec![v(&[3, 0])], vec![v(&[0, 1])], vec![]).unwrap();
        assert_eq!(p.hyperbolicity_witness().unwrap(), int(3));
    }

    #[test]
    fn lineality_canonical() {
        let a = Polyhedron::from_vrep(2, vec![v(&[1, 1])], vec![], vec![v(&[1, 1])]).unwrap();
        let b = Polyhedron::from_vrep(2, vec![v(&[3, 3]), v(&[0, 0])], vec![], vec![v(&[-2, -2])]).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.eqs().len(), 1);
    }
}

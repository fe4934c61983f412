//! Set-valued maps given by graph polyhedra, and their iterates.

mod eigen;

pub use eigen::{cone_eigen_search, cone_eigen_search_with, ConeTag, EigenCertificate, EigenSearch, Interval, Scalar};

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;

use crate::exactla::{Rat, RatMatrix};
use crate::geomctrl::{recursive_matrices, GeomError, Sigma};
use crate::polyhedra::{PolyError, Polyhedron};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MapTag {
    F,
    Fcon,
    Frec,
    Fpolar,
    Fminus,
    Fb,
    Raw,
}

impl MapTag {
    pub fn name(self) -> &'static str {
        match self {
            MapTag::F => "F",
            MapTag::Fcon => "Fcon",
            MapTag::Frec => "Frec",
            MapTag::Fpolar => "Fpolar",
            MapTag::Fminus => "Fminus",
            MapTag::Fb => "Fb",
            MapTag::Raw => "Raw",
        }
    }
    pub fn is_primal(self) -> bool {
        matches!(self, MapTag::F | MapTag::Fcon | MapTag::Frec)
    }
    pub fn is_dual(self) -> bool {
        matches!(self, MapTag::Fpolar | MapTag::Fminus | MapTag::Fb)
    }
}

impl fmt::Display for MapTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MapTag {
    type Err = MapError;
    fn from_str(s: &str) -> Result<Self, MapError> {
        Ok(match s {
            "F" => MapTag::F,
            "Fcon" => MapTag::Fcon,
            "Frec" => MapTag::Frec,
            "Fpolar" => MapTag::Fpolar,
            "Fminus" => MapTag::Fminus,
            "Fb" => MapTag::Fb,
            "Raw" => MapTag::Raw,
            other => return Err(MapError::UnknownTag(other.to_string())),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MapError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("the constraint set does not contain the origin")]
    OriginOutside,
    #[error("unknown map tag {0:?}")]
    UnknownTag(String),
    #[error("map {0} is not a process (graph is not a cone)")]
    NotCone(MapTag),
    #[error("direct formulas need the system and constraint set of an F or Fpolar map")]
    NoProvenance,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// A set-valued map `H : R^dim ⇉ R^dim` stored by `gr(H) ⊆ R^{2·dim}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstrainedMap {
    dim: usize,
    graph: Polyhedron,
    tag: MapTag,
    provenance: Option<(Sigma, Polyhedron)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqMode {
    /// `R_ℓ(H) = H^ℓ(0)`
    Reach,
    /// `X_ℓ(H) = H^{-ℓ}(R^dim)`
    Feasible,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeqMethod {
    Iterate,
    Direct,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    pub domain: Polyhedron,
    pub onto: bool,
    pub strict: bool,
}

fn check_y(sys: &Sigma, y: &Polyhedron) -> Result<(), MapError> {
    if y.dim() != sys.s() {
        return Err(MapError::Dimension(format!("constraint set in R^{}, system has {} outputs", y.dim(), sys.s())));
    }
    if !y.contains_origin() {
        return Err(MapError::OriginOutside);
    }
    Ok(())
}

impl ConstrainedMap {
    pub fn raw(graph: Polyhedron) -> Result<Self, MapError> {
        if !graph.dim().is_multiple_of(2) {
            return Err(MapError::Dimension(format!("graph lives in odd dimension {}", graph.dim())));
        }
        Ok(ConstrainedMap { dim: graph.dim() / 2, graph, tag: MapTag::Raw, provenance: None })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
    pub fn graph(&self) -> &Polyhedron {
        &self.graph
    }
    pub fn tag(&self) -> MapTag {
        self.tag
    }
    pub fn provenance(&self) -> Option<&(Sigma, Polyhedron)> {
        self.provenance.as_ref()
    }

    /// `F`, `F_con` or `F_rec`: `gr = [[I,0],[A,B]] · [C D]^{-1} S` with
    /// `S = Y`, `cone(Y)` or `0⁺Y`.
    pub fn build_primal(sys: &Sigma, y: &Polyhedron, which: MapTag) -> Result<Self, MapError> {
        check_y(sys, y)?;
        let s = match which {
            MapTag::F => y.clone(),
            MapTag::Fcon => y.conic_hull()?,
            MapTag::Frec => y.recession_cone()?,
            other => return Err(MapError::UnknownTag(format!("{other} is not a primal map"))),
        };
        let (n, m) = (sys.n(), sys.m());
        let lifted = s.preimage(&sys.cd())?;
        let top = RatMatrix::identity(n).hstack(&RatMatrix::zeros(n, m));
        let graph = lifted.image(&top.vstack(&sys.ab()))?;
        Ok(ConstrainedMap { dim: n, graph, tag: which, provenance: Some((sys.clone(), y.clone())) })
    }

    /// Same graph as [`build_primal`](Self::build_primal), computed by
    /// Fourier–Motzkin elimination of `u` from `{(x, x', u)}`.
    pub fn build_primal_fm(sys: &Sigma, y: &Polyhedron, which: MapTag) -> Result<Self, MapError> {
        let base = Self::build_primal(sys, y, which)?;
        let s = match which {
            MapTag::F => y.clone(),
            MapTag::Fcon => y.conic_hull()?,
            _ => y.recession_cone()?,
        };
        let (n, m) = (sys.n(), sys.m());
        // variables (x, x', u): [C 0 D] ∈ S, x' = A x + B u
        let out = RatMatrix::block(&[vec![&sys.c, &RatMatrix::zeros(sys.s(), n), &sys.d]]);
        let mut lifted = s.preimage(&out)?;
        let dyn_rows = RatMatrix::block(&[vec![&sys.a, &RatMatrix::identity(n).neg(), &sys.b]]);
        let dyn_set = Polyhedron::from_subspace(&dyn_rows.kernel());
        lifted = lifted.intersect(&dyn_set)?;
        let keep: Vec<usize> = (0..2 * n).collect();
        let graph = lifted.project_fm(&keep);
        debug_assert_eq!(m, sys.m());
        Ok(ConstrainedMap { graph, ..base })
    }

    /// `F°`, `F⁻` or `F^b`: `H(q) = {A^T q + C^T v : v ∈ K, B^T q + D^T v = 0}`
    /// with `K = −Y°`, `Y⁺` or `−Y^b`.
    pub fn build_dual(sys: &Sigma, y: &Polyhedron, which: MapTag) -> Result<Self, MapError> {
        check_y(sys, y)?;
        let k = dual_cone_set(y, which)?;
        let (n, s) = (sys.n(), sys.s());
        let lifted = Polyhedron::universe(n).product(&k);
        let bd = sys.b.transpose().hstack(&sys.d.transpose());
        let lifted = lifted.intersect(&Polyhedron::from_subspace(&bd.kernel()))?;
        let top = RatMatrix::identity(n).hstack(&RatMatrix::zeros(n, s));
        let bottom = sys.a.transpose().hstack(&sys.c.transpose());
        let graph = lifted.image(&top.vstack(&bottom))?;
        Ok(ConstrainedMap { dim: n, graph, tag: which, provenance: Some((sys.clone(), y.clone())) })
    }

    pub fn build(sys: &Sigma, y: &Polyhedron, which: MapTag) -> Result<Self, MapError> {
        if which.is_primal() {
            Self::build_primal(sys, y, which)
        } else if which.is_dual() {
            Self::build_dual(sys, y, which)
        } else {
            Err(MapError::NoProvenance)
        }
    }

    fn lift(&self, p: &Polyhedron, first: bool) -> Polyhedron {
        let free = Polyhedron::universe(self.dim);
        if first {
            p.product(&free)
        } else {
            free.product(p)
        }
    }

    /// `H(P)`
    pub fn image(&self, p: &Polyhedron) -> Result<Polyhedron, MapError> {
        self.check(p)?;
        Ok(self.graph.image_of_intersection(&self.lift(p, true), &self.selector(false))?)
    }

    /// `H^{-1}(P) = {x : H(x) ∩ P ≠ ∅}`
    pub fn preimage(&self, p: &Polyhedron) -> Result<Polyhedron, MapError> {
        self.check(p)?;
        Ok(self.graph.image_of_intersection(&self.lift(p, false), &self.selector(true))?)
    }

    /// Picks the first or second block of `(x, x')`.
    fn selector(&self, first: bool) -> RatMatrix {
        let (i, z) = (RatMatrix::identity(self.dim), RatMatrix::zeros(self.dim, self.dim));
        if first {
            i.hstack(&z)
        } else {
            z.hstack(&i)
        }
    }

    fn check(&self, p: &Polyhedron) -> Result<(), MapError> {
        if p.dim() != self.dim {
            return Err(MapError::Dimension(format!("set in R^{}, map on R^{}", p.dim(), self.dim)));
        }
        Ok(())
    }

    /// The first `l` sets of the reach (`R_1..R_l`) or feasibility
    /// (`X_1..X_l`) sequence.
    pub fn sequence(&self, l: usize, mode: SeqMode, method: SeqMethod) -> Result<Vec<Polyhedron>, MapError> {
        match method {
            SeqMethod::Iterate => {
                let mut out = Vec::with_capacity(l);
                let mut cur = match mode {
                    SeqMode::Reach => Polyhedron::origin(self.dim),
                    SeqMode::Feasible => Polyhedron::universe(self.dim),
                };
                for _ in 0..l {
                    cur = match mode {
                        SeqMode::Reach => self.image(&cur)?,
                        SeqMode::Feasible => self.preimage(&cur)?,
                    };
                    out.push(cur.clone());
                }
                Ok(out)
            }
            SeqMethod::Direct => (1..=l).map(|k| self.direct(k, mode)).collect(),
        }
    }

    /// One term of the sequence from the stacked-horizon formulas.
    pub fn direct(&self, l: usize, mode: SeqMode) -> Result<Polyhedron, MapError> {
        let (sys, y) = self.provenance.as_ref().ok_or(MapError::NoProvenance)?;
        match (self.tag, mode) {
            (MapTag::F, SeqMode::Feasible) => feasible_direct(sys, y, l),
            (MapTag::F, SeqMode::Reach) => reach_direct(sys, y, l),
            (MapTag::Fpolar, SeqMode::Reach) => dual_reach_direct(sys, y, l),
            _ => Err(MapError::NoProvenance),
        }
    }

    pub fn structure(&self) -> Structure {
        let n = self.dim;
        let domain = self.graph.project(&(0..n).collect::<Vec<_>>());
        let range = self.graph.project(&(n..2 * n).collect::<Vec<_>>());
        Structure { strict: domain.is_universe(), onto: range.is_universe(), domain }
    }

    /// `λ q ∈ H(q)`; defined for processes only.
    pub fn eigen_membership(&self, lambda: &Rat, q: &[Rat]) -> Result<bool, MapError> {
        if !self.graph.is_cone() {
            return Err(MapError::NotCone(self.tag));
        }
        let mut pt = q.to_vec();
        pt.extend(q.iter().map(|x| x * lambda));
        Ok(self.graph.contains_point(&pt))
    }
}

/// `−Y°`, `Y⁺` or `−Y^b`.
pub fn dual_cone_set(y: &Polyhedron, which: MapTag) -> Result<Polyhedron, MapError> {
    Ok(match which {
        MapTag::Fpolar => y.polar()?.negate(),
        MapTag::Fminus => y.pos_polar_cone(),
        MapTag::Fb => y.barrier_cone()?.negate(),
        other => return Err(MapError::UnknownTag(format!("{other} is not a dual map"))),
    })
}

/// `X_ℓ(F) = Γ_ℓ^{-1}[im Θ_ℓ + Y^ℓ]`, as the shadow of
/// `{(x, w) : Γ_ℓ x + Θ_ℓ w ∈ Y^ℓ}`.
pub fn feasible_direct(sys: &Sigma, y: &Polyhedron, l: usize) -> Result<Polyhedron, MapError> {
    let (g, _, t) = recursive_matrices(sys, l)?;
    let lifted = y.power(l).preimage(&g.hstack(&t))?;
    Ok(lifted.project(&(0..sys.n()).collect::<Vec<_>>()))
}

/// `R_ℓ(F) = Λ_ℓ Θ_ℓ^{-1}(Y^ℓ)`.
pub fn reach_direct(sys: &Sigma, y: &Polyhedron, l: usize) -> Result<Polyhedron, MapError> {
    let (_, lam, t) = recursive_matrices(sys, l)?;
    Ok(y.power(l).preimage(&t)?.image(&lam)?)
}

/// `R_ℓ(F°) = Γ_ℓ^T[ker Θ_ℓ^T ∩ (−Y°)^ℓ]`.
pub fn dual_reach_direct(sys: &Sigma, y: &Polyhedron, l: usize) -> Result<Polyhedron, MapError> {
    let (g, _, t) = recursive_matrices(sys, l)?;
    let k = dual_cone_set(y, MapTag::Fpolar)?.power(l);
    let cut = k.intersect(&Polyhedron::from_subspace(&t.transpose().kernel()))?;
    Ok(cut.image(&g.transpose())?)
}

/// `F^ℓ(T*) = Λ_{n+ℓ} Θ_{n+ℓ}^{-1}(Y^ℓ × {0})`.
pub fn forward_from_tstar(sys: &Sigma, y: &Polyhedron, l: usize) -> Result<Polyhedron, MapError> {
    let n = sys.n();
    let (_, lam, t) = recursive_matrices(sys, n + l)?;
    let target = y.power(l).product(&Polyhedron::origin(n * sys.s()));
    Ok(target.preimage(&t)?.image(&lam)?)
}

/// `(q, λq)` check without building the graph: `∃ v ∈ K` with
/// `A^T q + C^T v = λ q` and `B^T q + D^T v = 0`.
pub fn satisfies_eigen_relation(sys: &Sigma, lambda: &Rat, q: &[Rat], v: &[Rat]) -> bool {
    let at = sys.a.transpose().mul_vec(q);
    let ct = sys.c.transpose().mul_vec(v);
    let bt = sys.b.transpose().mul_vec(q);
    let dt = sys.d.transpose().mul_vec(v);
    at.iter().zip(&ct).zip(q).all(|((a, c), x)| a + c == lambda * x)
        && bt.iter().zip(&dt).all(|(b, d)| (b + d).is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int;

    fn v(x: &[i64]) -> Vec<Rat> {
        x.iter().map(|&a| int(a)).collect()
    }

    fn ex1() -> (Sigma, Polyhedron) {
        (
            Sigma::from_i64(&[&[0, 1], &[1, 0]], &[&[1], &[0]], &[&[0, 0], &[0, 1]], &[&[1], &[0]]),
            Polyhedron::cube(2, &int(1)),
        )
    }

    fn ex6() -> ConstrainedMap {
        let g = Polyhedron::from_hrep(
            2,
            vec![(v(&[1, 0]), int(1)), (v(&[-1, 0]), int(1)), (v(&[2, -1]), int(0)), (v(&[-2, -1]), int(0))],
            vec![],
        )
        .unwrap();
        ConstrainedMap::raw(g).unwrap()
    }

    #[test]
    fn primal_graphs() {
        let (s, y) = ex1();
        let f = ConstrainedMap::build_primal(&s, &y, MapTag::F).unwrap();
        // |x2| ≤ 1, x'2 = x1, |x'1 − x2| ≤ 1
        let expect = Polyhedron::from_hrep(
            4,
            vec![
                (v(&[0, 1, 0, 0]), int(1)),
                (v(&[0, -1, 0, 0]), int(1)),
                (v(&[0, -1, 1, 0]), int(1)),
                (v(&[0, 1, -1, 0]), int(1)),
            ],
            vec![(v(&[1, 0, 0, -1]), int(0))],
        )
        .unwrap();
        assert_eq!(f.graph(), &expect);
        assert_eq!(ConstrainedMap::build_primal_fm(&s, &y, MapTag::F).unwrap().graph(), &expect);
        let frec = ConstrainedMap::build_primal(&s, &y, MapTag::Frec).unwrap();
        let expect = Polyhedron::from_hrep(
            4,
            vec![],
            vec![(v(&[0, 1, 0, 0]), int(0)), (v(&[0, 0, 1, 0]), int(0)), (v(&[1, 0, 0, -1]), int(0))],
        )
        .unwrap();
        assert_eq!(frec.graph(), &expect);
        let out = Polyhedron::from_vrep(2, vec![v(&[1, 1])], vec![], vec![v(&[1, 0]), v(&[0, 1])]).unwrap();
        assert!(ConstrainedMap::build_primal(&s, &out, MapTag::F).is_ok());
        let shifted = Polyhedron::boxed(&[int(1), int(1)], &[int(2), int(2)]).unwrap();
        assert_eq!(ConstrainedMap::build_primal(&s, &shifted, MapTag::F), Err(MapError::OriginOutside));
    }

    #[test]
    fn dual_graphs() {
        let (s, y) = ex1();
        let fm = ConstrainedMap::build_dual(&s, &y, MapTag::Fminus).unwrap();
        // F⁻(q) = {(q2, q1)} on q1 = 0
        let expect = Polyhedron::from_hrep(
            4,
            vec![],
            vec![(v(&[1, 0, 0, 0]), int(0)), (v(&[0, 1, -1, 0]), int(0)), (v(&[1, 0, 0, -1]), int(0))],
        )
        .unwrap();
        assert_eq!(fm.graph(), &expect);
        let fb = ConstrainedMap::build_dual(&s, &y, MapTag::Fb).unwrap();
        let expect = Polyhedron::from_hrep(4, vec![], vec![(v(&[0, 1, -1, 0]), int(0))]).unwrap();
        assert_eq!(fb.graph(), &expect);
        assert!(fb.eigen_membership(&int(1), &v(&[1, 1])).unwrap());
        assert!(!fm.eigen_membership(&int(1), &v(&[1, 1])).unwrap());
        assert!(fm.eigen_membership(&int(1), &v(&[0, 0])).unwrap());
        let cone_y = Polyhedron::from_hrep(2, vec![(v(&[-1, 0]), int(0))], vec![]).unwrap();
        let s2 = Sigma::from_i64(&[&[0, 1], &[1, 0]], &[&[1], &[0]], &[&[0, 0], &[0, 1]], &[&[1], &[0]]);
        let a = ConstrainedMap::build_dual(&s2, &cone_y, MapTag::Fpolar).unwrap();
        let b = ConstrainedMap::build_dual(&s2, &cone_y, MapTag::Fminus).unwrap();
        assert_eq!(a.graph(), b.graph());
    }

    #[test]
    fn images() {
        let (s, y) = ex1();
        let f = ConstrainedMap::build_primal(&s, &y, MapTag::F).unwrap();
        let img = f.image(&Polyhedron::origin(2)).unwrap();
        assert_eq!(img, Polyhedron::boxed(&[int(-1), int(0)], &[int(1), int(0)]).unwrap());
        let h = ex6();
        let img = h.image(&Polyhedron::origin(1)).unwrap();
        assert_eq!(img, Polyhedron::from_hrep(1, vec![(v(&[-1]), int(0))], vec![]).unwrap());
        let id =
            ConstrainedMap::raw(Polyhedron::from_subspace(&crate::exactla::Subspace::from_vectors(2, &[v(&[1, 1])])))
                .unwrap();
        let p = Polyhedron::cube(1, &int(3));
        assert_eq!(id.image(&p).unwrap(), p);
    }

    #[test]
    fn ex1_sequences() {
        let (s, y) = ex1();
        let f = ConstrainedMap::build_primal(&s, &y, MapTag::F).unwrap();
        let r = f.sequence(5, SeqMode::Reach, SeqMethod::Iterate).unwrap();
        assert_eq!(r[1], Polyhedron::cube(2, &int(1)));
        assert_eq!(r[3], Polyhedron::cube(2, &int(2)));
        assert_eq!(r[4], r[3]);
        let x = f.sequence(3, SeqMode::Feasible, SeqMethod::Iterate).unwrap();
        assert_eq!(x[1], Polyhedron::cube(2, &int(1)));
        assert_eq!(x[2], x[1]);
        assert_eq!(f.sequence(5, SeqMode::Reach, SeqMethod::Direct).unwrap(), r);
        assert_eq!(f.sequence(3, SeqMode::Feasible, SeqMethod::Direct).unwrap(), x);
    }

    #[test]
    fn ex6_feasible_shrinks() {
        let x = ex6().sequence(4, SeqMode::Feasible, SeqMethod::Iterate).unwrap();
        for (l, xl) in x.iter().enumerate() {
            let r = Rat::new(1.into(), (1i64 << l).into());
            assert_eq!(xl, &Polyhedron::cube(1, &r), "step {}", l + 1);
        }
        assert!(ex6().direct(1, SeqMode::Feasible).is_err());
    }

    #[test]
    fn structure_of_ex1() {
        let (s, y) = ex1();
        let f = ConstrainedMap::build_primal(&s, &y, MapTag::F).unwrap();
        let st = f.structure();
        assert_eq!(
            st.domain,
            Polyhedron::boxed(&[int(-1)], &[int(1)])
                .unwrap()
                .product(&Polyhedron::universe(1))
                .image(&RatMatrix::from_i64(&[&[0, 1], &[1, 0]]))
                .unwrap()
        );
        assert!(!st.strict && !st.onto);
        let free = Sigma::from_i64(&[&[1]], &[&[1]], &[&[0]], &[&[1]]);
        let g = ConstrainedMap::build_primal(&free, &Polyhedron::universe(1), MapTag::F).unwrap();
        let st = g.structure();
        assert!(st.strict && st.onto);
    }

    #[test]
    fn tags_parse() {
        assert_eq!("Fb".parse::<MapTag>().unwrap(), MapTag::Fb);
        assert!("G".parse::<MapTag>().is_err());
    }
}

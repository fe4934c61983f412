//! Case classification, spectral conditions and reachability verdicts.

mod report;

pub use report::{ConsistencyReport, Report, StepProfile, SubspacesJson};

use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

pub use crate::exactla::DEFAULT_TOL;
use crate::exactla::{Rat, Subspace};
use crate::geomctrl::{kalman_controllable, kl_subspaces, vstar_g_with, GeomError, Sigma, VStarG};
use crate::polyhedra::{PolyError, Polyhedron};
use crate::setmaps::{
    cone_eigen_search_with, dual_cone_set, dual_reach_direct, ConeTag, ConstrainedMap, EigenCertificate, EigenSearch,
    Interval, MapError, MapTag, SeqMethod, SeqMode,
};

pub const DEFAULT_CAP: usize = 25;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    Dimension(String),
    OriginOutside,
    NotSurjective { rank: usize, outputs: usize },
    NotSolid,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Dimension(s) => write!(f, "dimension mismatch: {s}"),
            Violation::OriginOutside => f.write_str("Y does not contain the origin"),
            Violation::NotSurjective { rank, outputs } => {
                write!(f, "[C D] has rank {rank}, needs {outputs} (surjective)")
            }
            Violation::NotSolid => f.write_str("Y has empty interior"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecideError {
    #[error("invalid instance: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("oracle comparison needs a case-1 instance, got {0:?}")]
    NotCase1(Case),
    #[error(transparent)]
    Map(#[from] MapError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

/// Checks `0 ∈ Y`, `[C D]` surjective and `Y` solid; every failure is listed.
pub fn validate(sys: &Sigma, y: &Polyhedron) -> Result<(), DecideError> {
    if y.dim() != sys.s() {
        return Err(DecideError::Invalid(vec![Violation::Dimension(format!(
            "Y lives in R^{}, the system has {} outputs",
            y.dim(),
            sys.s()
        ))]));
    }
    let mut bad = Vec::new();
    if !y.contains_origin() {
        bad.push(Violation::OriginOutside);
    }
    let rank = sys.cd().rank();
    if rank != sys.s() {
        bad.push(Violation::NotSurjective { rank, outputs: sys.s() });
    }
    if !y.interior().solid {
        bad.push(Violation::NotSolid);
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(DecideError::Invalid(bad))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Case {
    Case1Strong,
    Case1Weak,
    Case2,
    Case3,
}

impl Case {
    pub fn is_case1(self) -> bool {
        matches!(self, Case::Case1Strong | Case::Case1Weak)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseTag {
    pub variant: Case,
    pub k: Subspace,
    pub k_plus_y_full: bool,
    pub k_meets_interior: bool,
    pub interior_witness: Option<Vec<Rat>>,
    pub k_meets_y_only_at_origin: bool,
}

pub fn classify(sys: &Sigma, y: &Polyhedron) -> Result<CaseTag, DecideError> {
    let k = kl_subspaces(sys).ksub;
    let k_plus_y_full = Polyhedron::from_subspace(&k).minkowski_sum(y)?.is_universe();
    let inner = y.subspace_meets_interior(&k)?;
    let trivial = y.meets_subspace_only_at_origin(&k)?;
    // with 0 ∈ int(Y), K = {0} meets the interior only at the origin; the
    // trivial intersection case is the one that carries information then
    let variant = if k_plus_y_full {
        Case::Case1Strong
    } else if inner.solid && !k.is_zero() {
        Case::Case1Weak
    } else if trivial {
        Case::Case2
    } else {
        Case::Case3
    };
    Ok(CaseTag {
        variant,
        k,
        k_plus_y_full,
        k_meets_interior: inner.solid,
        interior_witness: inner.witness,
        k_meets_y_only_at_origin: trivial,
    })
}

/// The four spectral conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct Conditions {
    /// Kalman rank of `(A, B)` (controllable iff it equals `n`).
    pub kalman_rank: usize,
    pub a: bool,
    /// No eigenpair with `u ∈ Y⁺`, `λ ≥ 0`.
    pub b: EigenSearch,
    /// `V*_g([0⁺Y]^⊥, Σ^T)`; the condition holds when it is `{0}`.
    pub c: VStarG,
    /// No eigenpair with `u ∈ −Y^b`, `λ ∈ [0, 1]`.
    pub d: EigenSearch,
}

impl Conditions {
    pub fn holds(&self) -> [bool; 4] {
        [self.a, self.b.is_none(), self.c.is_zero(), self.d.is_none()]
    }
    pub fn all_hold(&self) -> bool {
        self.holds().iter().all(|&h| h)
    }
    pub fn certificates(&self) -> Vec<EigenCertificate> {
        [&self.b, &self.d].into_iter().filter_map(|s| s.certificate().cloned()).collect()
    }
}

fn kalman_rank(sys: &Sigma) -> usize {
    let mut k = sys.b.clone();
    let mut blk = sys.b.clone();
    for _ in 1..sys.n() {
        blk = sys.a.mul(&blk);
        k = k.hstack(&blk);
    }
    k.rank()
}

pub fn check_conditions(sys: &Sigma, y: &Polyhedron) -> Result<Conditions, DecideError> {
    check_conditions_with(sys, y, DEFAULT_TOL)
}

/// [`check_conditions`] with the tolerance of the floating-point fallbacks.
pub fn check_conditions_with(sys: &Sigma, y: &Polyhedron, tol: f64) -> Result<Conditions, DecideError> {
    let yplus = dual_cone_set(y, MapTag::Fminus)?;
    let neg_yb = dual_cone_set(y, MapTag::Fb)?;
    let rec = y.recession_cone()?;
    let span: Vec<Vec<Rat>> = rec.rays().iter().chain(rec.lineality()).cloned().collect();
    let u = Subspace::from_vectors(sys.s(), &span).perp();
    let zero = Rat::zero();
    let b = cone_eigen_search_with(sys, &yplus, &Interval::from(zero.clone()), ConeTag::Yplus, tol)?;
    let c = vstar_g_with(&sys.dual(), &u, tol)?;
    let d = cone_eigen_search_with(sys, &neg_yb, &Interval::closed(zero, Rat::one()), ConeTag::NegYb, tol)?;
    let a = kalman_controllable(sys);
    Ok(Conditions { kalman_rank: kalman_rank(sys), a, b, c, d })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Status {
    Reachable,
    NotReachable,
    Inconclusive,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Inconclusive => 2,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Route {
    Spectral,
    DirectIteration,
    Case2Subspace,
}

/// Evidence attached to a `NotReachable` verdict, besides eigen certificates.
#[derive(Debug, Clone, PartialEq)]
pub enum Witness {
    /// Condition (a) fails.
    Uncontrollable { rank: usize },
    /// Condition (c) fails: a nonzero bounded subspace of the dual system.
    BoundedSubspace(VStarG),
    /// A feasible state that is not reachable.
    Unreachable { x: Vec<Rat> },
    /// A point of `V*` outside `T*`.
    SubspaceGap { x: Vec<Rat> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub status: Status,
    pub route: Option<Route>,
    pub certificates: Vec<EigenCertificate>,
    pub witness: Option<Witness>,
    pub steps_used: usize,
    pub notes: Vec<String>,
    pub profile: Vec<StepProfile>,
}

impl Verdict {
    fn new(status: Status, route: Option<Route>) -> Self {
        Verdict { status, route, certificates: vec![], witness: None, steps_used: 0, notes: vec![], profile: vec![] }
    }
}

/// Outcome of iterating `X_ℓ(F)` and `R_ℓ(F)` side by side.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectRun {
    /// `Some(true)` reachable, `Some(false)` not reachable, `None` undecided.
    pub decided: Option<bool>,
    pub decided_at: usize,
    pub witness: Option<Vec<Rat>>,
    pub xs: Vec<Polyhedron>,
    pub rs: Vec<Polyhedron>,
    /// First `ℓ` with `X_ℓ = X_{ℓ+1}`.
    pub x_stable_at: Option<usize>,
    /// First `ℓ` with `R_ℓ = R_{ℓ+1}`.
    pub r_stable_at: Option<usize>,
}

impl DirectRun {
    pub fn feasible_limit(&self) -> Option<&Polyhedron> {
        self.x_stable_at.map(|l| &self.xs[l - 1])
    }
    pub fn reach_limit(&self) -> Option<&Polyhedron> {
        self.r_stable_at.map(|l| &self.rs[l - 1])
    }
}

/// A point of `a` outside `b`, from the generators of `a`.
pub fn point_outside(a: &Polyhedron, b: &Polyhedron) -> Option<Vec<Rat>> {
    if a.is_empty() {
        return None;
    }
    if let Some(v) = a.vertices().iter().find(|v| !b.contains_point(v)) {
        return Some(v.clone());
    }
    let base = a.vertices()[0].clone();
    let dirs =
        a.rays().iter().cloned().chain(a.lineality().iter().flat_map(|l| [l.clone(), l.iter().map(|x| -x).collect()]));
    for d in dirs {
        let mut t = Rat::one();
        for _ in 0..256 {
            let p: Vec<Rat> = base.iter().zip(&d).map(|(x, r)| x + &t * r).collect();
            if !b.contains_point(&p) {
                return Some(p);
            }
            t *= Rat::from_integer(2.into());
        }
    }
    None
}

/// Iterates both sequences of `F` up to `cap` steps. Stops at the first
/// decision unless `exhaust`, in which case it continues until both
/// sequences stabilize (or the cap).
pub fn direct_route(f: &ConstrainedMap, cap: usize, exhaust: bool) -> Result<DirectRun, DecideError> {
    let n = f.dim();
    let mut run = DirectRun {
        decided: None,
        decided_at: 0,
        witness: None,
        xs: vec![],
        rs: vec![],
        x_stable_at: None,
        r_stable_at: None,
    };
    let mut x = Polyhedron::universe(n);
    let mut r = Polyhedron::origin(n);
    for l in 1..=cap {
        let nx = if run.x_stable_at.is_some() { x.clone() } else { f.preimage(&x)? };
        let nr = if run.r_stable_at.is_some() { r.clone() } else { f.image(&r)? };
        if l > 1 {
            if run.x_stable_at.is_none() && nx == x {
                run.x_stable_at = Some(l - 1);
            }
            if run.r_stable_at.is_none() && nr == r {
                run.r_stable_at = Some(l - 1);
            }
        }
        run.xs.push(nx.clone());
        run.rs.push(nr.clone());
        x = nx;
        r = nr;
        if run.decided.is_none() {
            if x.subset_eq(&r)? {
                run.decided = Some(true);
                run.decided_at = l;
            } else if run.x_stable_at.is_some() && run.r_stable_at.is_some() {
                run.decided = Some(false);
                run.decided_at = l;
                run.witness = point_outside(&x, &r);
            }
        }
        let both = run.x_stable_at.is_some() && run.r_stable_at.is_some();
        if run.decided.is_some() && (!exhaust || both) {
            break;
        }
    }
    Ok(run)
}

fn extent(p: &Polyhedron) -> Option<Rat> {
    if p.is_empty() || !p.is_bounded() {
        return None;
    }
    Some(
        p.vertices().iter().flat_map(|v| v.iter().map(|x| x.abs())).fold(Rat::zero(), |a, b| if b > a { b } else { a }),
    )
}

fn profile(xs: &[Polyhedron], rs: &[Polyhedron]) -> Vec<StepProfile> {
    (0..xs.len().max(rs.len()))
        .map(|i| StepProfile::new(i + 1, xs.get(i).map(|p| (p, extent(p))), rs.get(i).map(|p| (p, extent(p)))))
        .collect()
}

fn spectral_failure(cond: &Conditions) -> Verdict {
    let mut v = Verdict::new(Status::NotReachable, Some(Route::Spectral));
    v.certificates = cond.certificates();
    let [a, _, c, _] = cond.holds();
    if !a {
        v.witness = Some(Witness::Uncontrollable { rank: cond.kalman_rank });
    } else if !c {
        v.witness = Some(Witness::BoundedSubspace(cond.c.clone()));
    }
    if v.certificates.iter().any(|c| !c.exact) || matches!(cond.c, VStarG::Numerical { .. }) {
        v.notes.push("decided with a floating-point certificate".into());
    }
    v
}

/// Result of a case-1 decision, with the sequences it computed.
#[derive(Debug, Clone, PartialEq)]
pub struct Case1Outcome {
    pub verdict: Verdict,
    pub run: Option<DirectRun>,
}

pub fn decide_case1(
    sys: &Sigma,
    y: &Polyhedron,
    tag: &CaseTag,
    cond: &Conditions,
    cap: usize,
) -> Result<Case1Outcome, DecideError> {
    assert!(tag.variant.is_case1(), "decide_case1 on {:?}", tag.variant);
    if cond.all_hold() {
        let mut v = Verdict::new(Status::Reachable, Some(Route::Spectral));
        v.notes.push("conditions (a)-(d) hold: R(F) = R^n".into());
        return Ok(Case1Outcome { verdict: v, run: None });
    }
    if tag.variant == Case::Case1Strong {
        return Ok(Case1Outcome { verdict: spectral_failure(cond), run: None });
    }
    let f = ConstrainedMap::build_primal(sys, y, MapTag::F)?;
    let run = direct_route(&f, cap, true)?;
    let mut v = match run.decided {
        Some(true) => Verdict::new(Status::Reachable, Some(Route::DirectIteration)),
        Some(false) => {
            let mut v = Verdict::new(Status::NotReachable, Some(Route::DirectIteration));
            v.witness = run.witness.clone().map(|x| Witness::Unreachable { x });
            v
        }
        None => {
            let mut v = Verdict::new(Status::Inconclusive, Some(Route::DirectIteration));
            v.notes.push(format!("no decision within {cap} steps"));
            v
        }
    };
    v.steps_used = if run.decided.is_some() { run.decided_at } else { run.xs.len() };
    v.notes.push("spectral conditions fail; they are only sufficient when K(Σ)+Y ≠ R^s".into());
    v.profile = profile(&run.xs, &run.rs);
    Ok(Case1Outcome { verdict: v, run: Some(run) })
}

pub fn decide_case2(sys: &Sigma, y: &Polyhedron, cap: usize) -> Result<(Verdict, Vec<Polyhedron>), DecideError> {
    let sub = kl_subspaces(sys);
    if sub.vstar != sub.rstar {
        let x = sub.vstar.basis_vectors().into_iter().find(|v| !sub.tstar.contains_vector(v)).expect("V* ⊄ T*");
        let mut v = Verdict::new(Status::NotReachable, Some(Route::Case2Subspace));
        v.witness = Some(Witness::SubspaceGap { x });
        return Ok((v, vec![]));
    }
    let f = ConstrainedMap::build_primal(sys, y, MapTag::F)?;
    let vset = Polyhedron::from_subspace(&sub.vstar);
    let tset = Polyhedron::from_subspace(&sub.tstar);
    let mut xs: Vec<Polyhedron> = Vec::new();
    let mut x = Polyhedron::universe(sys.n());
    for l in 1..=cap {
        let nx = f.preimage(&x)?;
        xs.push(nx.clone());
        let verdict = if nx.subset_eq(&vset)? {
            Some(Verdict::new(Status::Reachable, Some(Route::Case2Subspace)))
        } else if l > 1 && nx == x {
            if nx.subset_eq(&tset)? {
                Some(Verdict::new(Status::Reachable, Some(Route::Case2Subspace)))
            } else {
                let mut v = Verdict::new(Status::NotReachable, Some(Route::Case2Subspace));
                v.witness = point_outside(&nx, &tset).map(|x| Witness::Unreachable { x });
                Some(v)
            }
        } else {
            None
        };
        if let Some(mut v) = verdict {
            v.steps_used = l;
            v.profile = profile(&xs, &[]);
            return Ok((v, xs));
        }
        x = nx;
    }
    let mut v = Verdict::new(Status::Inconclusive, Some(Route::Case2Subspace));
    v.steps_used = cap;
    v.profile = profile(&xs, &[]);
    let shrinking = xs.windows(2).all(|w| w[0] != w[1]);
    let extents: Vec<String> = v.profile.iter().filter_map(|p| p.x.as_ref().and_then(|x| x.extent.clone())).collect();
    v.notes.push(format!(
        "contraction: X_l {} over {cap} steps without reaching V*; extents {}",
        if shrinking { "strictly decreasing" } else { "decreasing" },
        extents.join(", ")
    ));
    Ok((v, xs))
}

/// Full pipeline for one instance.
pub fn analyze(sys: &Sigma, y: &Polyhedron, cap: usize) -> Result<Report, DecideError> {
    analyze_with(sys, y, cap, DEFAULT_TOL)
}

pub fn analyze_with(sys: &Sigma, y: &Polyhedron, cap: usize, tol: f64) -> Result<Report, DecideError> {
    validate(sys, y)?;
    let tag = classify(sys, y)?;
    let sub = kl_subspaces(sys);
    let cond = check_conditions_with(sys, y, tol)?;
    let mut xs = vec![];
    let mut rs = vec![];
    let mut stable = (None, None);
    let verdict = match tag.variant {
        Case::Case1Strong | Case::Case1Weak => {
            let out = decide_case1(sys, y, &tag, &cond, cap)?;
            if let Some(run) = out.run {
                stable = (run.x_stable_at, run.r_stable_at);
                xs = run.xs;
                rs = run.rs;
            }
            out.verdict
        }
        Case::Case2 => {
            let (v, x) = decide_case2(sys, y, cap)?;
            xs = x;
            v
        }
        Case::Case3 => {
            let mut v = Verdict::new(Status::Inconclusive, None);
            v.notes.push("the last case will not be studied in this paper".into());
            v
        }
    };
    Ok(Report::build(&tag, &sub, &cond, verdict, xs, rs, stable, (cap, tol)))
}

/// Spectral and direct routes side by side, plus finite-step duality
/// `[X_ℓ(F)]° = −R_ℓ(F°)` for `ℓ ≤ min(cap, 4)`.
pub fn oracle_compare(sys: &Sigma, y: &Polyhedron, cap: usize) -> Result<ConsistencyReport, DecideError> {
    oracle_compare_with(sys, y, cap, DEFAULT_TOL)
}

pub fn oracle_compare_with(
    sys: &Sigma,
    y: &Polyhedron,
    cap: usize,
    tol: f64,
) -> Result<ConsistencyReport, DecideError> {
    validate(sys, y)?;
    let tag = classify(sys, y)?;
    if !tag.variant.is_case1() {
        return Err(DecideError::NotCase1(tag.variant));
    }
    let cond = check_conditions_with(sys, y, tol)?;
    let spectral = if cond.all_hold() {
        Some(Status::Reachable)
    } else if tag.variant == Case::Case1Strong {
        Some(Status::NotReachable)
    } else {
        None
    };
    let f = ConstrainedMap::build_primal(sys, y, MapTag::F)?;
    let run = direct_route(&f, cap, false)?;
    let direct = run.decided.map(|r| if r { Status::Reachable } else { Status::NotReachable });
    let l = cap.min(4);
    let mut notes = Vec::new();
    let mut duality = Vec::with_capacity(l);
    if tag.variant == Case::Case1Strong {
        let xs = f.sequence(l, SeqMode::Feasible, SeqMethod::Iterate)?;
        let fp = ConstrainedMap::build_dual(sys, y, MapTag::Fpolar)?;
        let it = fp.sequence(l, SeqMode::Reach, SeqMethod::Iterate)?;
        for (k, (x, r)) in xs.iter().zip(&it).enumerate() {
            let direct = dual_reach_direct(sys, y, k + 1)?;
            let polar = x.polar()?;
            let ok = polar == r.negate() && direct == *r;
            if !ok {
                notes.push(format!(
                    "duality fails at step {}: polar(X) = {polar:?}, -R(F°) = {:?}, stacked formula = {:?}",
                    k + 1,
                    r.negate(),
                    direct.negate()
                ));
            }
            duality.push(ok);
        }
    } else {
        notes.push("finite-step duality needs K(Σ) + Y = R^s; not checked".into());
    }
    let agree = match (spectral, direct) {
        (Some(a), Some(b)) => a == b,
        _ => true,
    };
    if !agree {
        notes.push(format!("spectral {spectral:?} vs direct {direct:?}"));
    }
    Ok(ConsistencyReport {
        case: tag.variant,
        spectral,
        direct,
        direct_steps: run.decided_at.max(if run.decided.is_none() { run.xs.len() } else { 0 }),
        passed: agree && duality.iter().all(|&d| d),
        agree,
        duality,
        notes,
    })
}

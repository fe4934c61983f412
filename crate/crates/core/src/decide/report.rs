use serde::ser::{Serialize, SerializeStruct, Serializer};
use serde::Serialize as DeriveSerialize;

use super::{Case, CaseTag, Conditions, Status, Verdict, Witness};
use crate::exactla::{fmt_rat, Rat, Subspace};
use crate::geomctrl::{SubspaceReport, VStarG};
use crate::polyhedra::json::{vec_to_json, vecs_to_json, PolyhedronJson};
use crate::polyhedra::Polyhedron;
use crate::setmaps::{EigenCertificate, EigenSearch};

fn basis_json(s: &Subspace) -> Vec<Vec<String>> {
    vecs_to_json(&s.basis_vectors())
}

#[derive(Debug, Clone, PartialEq, Eq, DeriveSerialize)]
pub struct SetProfile {
    pub ineqs: usize,
    pub eqs: usize,
    pub vertices: usize,
    pub rays: usize,
    pub lineality: usize,
    /// Largest absolute vertex coordinate when bounded.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extent: Option<String>,
}

/// Size of `X_ℓ` and `R_ℓ` at one step.
#[derive(Debug, Clone, PartialEq, Eq, DeriveSerialize)]
pub struct StepProfile {
    pub step: usize,
    #[serde(rename = "X", skip_serializing_if = "Option::is_none")]
    pub x: Option<SetProfile>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub r: Option<SetProfile>,
}

impl StepProfile {
    pub(super) fn new(
        step: usize,
        x: Option<(&Polyhedron, Option<Rat>)>,
        r: Option<(&Polyhedron, Option<Rat>)>,
    ) -> Self {
        let f = |(p, e): (&Polyhedron, Option<Rat>)| SetProfile {
            ineqs: p.ineqs().len(),
            eqs: p.eqs().len(),
            vertices: p.vertices().len(),
            rays: p.rays().len(),
            lineality: p.lineality().len(),
            extent: e.as_ref().map(fmt_rat),
        };
        StepProfile { step, x: x.map(f), r: r.map(f) }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, DeriveSerialize)]
pub struct SubspacesJson {
    pub vstar: Vec<Vec<String>>,
    pub tstar: Vec<Vec<String>>,
    pub rstar: Vec<Vec<String>>,
    #[serde(rename = "K")]
    pub k: Vec<Vec<String>>,
    #[serde(rename = "L")]
    pub l: Vec<Vec<String>>,
    pub right_invertible: bool,
    pub left_invertible: bool,
    pub vstar_steps: usize,
    pub tstar_steps: usize,
    pub cross_checks_hold: bool,
}

impl From<&SubspaceReport> for SubspacesJson {
    fn from(s: &SubspaceReport) -> Self {
        SubspacesJson {
            vstar: basis_json(&s.vstar),
            tstar: basis_json(&s.tstar),
            rstar: basis_json(&s.rstar),
            k: basis_json(&s.ksub),
            l: basis_json(&s.lsub),
            right_invertible: s.right_invertible,
            left_invertible: s.left_invertible,
            vstar_steps: s.vstar_steps,
            tstar_steps: s.tstar_steps,
            cross_checks_hold: s.cross_checks_hold,
        }
    }
}

impl Serialize for CaseTag {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let t = self;
        let mut st = s.serialize_struct("Case", 5)?;
        st.serialize_field("tag", &t.variant)?;
        st.serialize_field("k_plus_y_full", &t.k_plus_y_full)?;
        st.serialize_field("k_meets_interior", &t.k_meets_interior)?;
        if let Some(w) = &t.interior_witness {
            st.serialize_field("interior_witness", &vec_to_json(w))?;
        }
        st.serialize_field("k_meets_y_only_at_origin", &t.k_meets_y_only_at_origin)?;
        st.end()
    }
}

struct SearchJson<'a>(&'a EigenSearch);

impl Serialize for SearchJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Search", 3)?;
        match self.0 {
            EigenSearch::Found(c) => {
                st.serialize_field("holds", &false)?;
                st.serialize_field("certificate", c)?;
            }
            EigenSearch::NoEigenpair { numerical, singular } => {
                st.serialize_field("holds", &true)?;
                st.serialize_field("numerical", numerical)?;
                st.serialize_field("singular_pencil", singular)?;
            }
        }
        st.end()
    }
}

struct BoundedJson<'a>(&'a VStarG, bool);

impl Serialize for BoundedJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Bounded", 4)?;
        if self.1 {
            st.serialize_field("kind", "BoundedSubspace")?;
        } else {
            st.serialize_field("holds", &self.0.is_zero())?;
        }
        st.serialize_field("dim", &self.0.dim())?;
        match self.0 {
            VStarG::Exact(sub) => {
                st.serialize_field("exact", &true)?;
                st.serialize_field("basis", &basis_json(sub))?;
            }
            VStarG::Numerical { basis, .. } => {
                st.serialize_field("exact", &false)?;
                st.serialize_field("basis", basis)?;
            }
        }
        st.end()
    }
}

impl Serialize for Conditions {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(DeriveSerialize)]
        struct A {
            holds: bool,
            kalman_rank: usize,
        }
        let c = self;
        let mut st = s.serialize_struct("Conditions", 4)?;
        st.serialize_field("a", &A { holds: c.a, kalman_rank: c.kalman_rank })?;
        st.serialize_field("b", &SearchJson(&c.b))?;
        st.serialize_field("c", &BoundedJson(&c.c, false))?;
        st.serialize_field("d", &SearchJson(&c.d))?;
        st.end()
    }
}

impl Serialize for Witness {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Witness::BoundedSubspace(v) => BoundedJson(v, true).serialize(s),
            Witness::Uncontrollable { rank } => {
                let mut st = s.serialize_struct("Witness", 2)?;
                st.serialize_field("kind", "Uncontrollable")?;
                st.serialize_field("kalman_rank", rank)?;
                st.end()
            }
            Witness::Unreachable { x } | Witness::SubspaceGap { x } => {
                let mut st = s.serialize_struct("Witness", 2)?;
                let kind = if matches!(self, Witness::Unreachable { .. }) { "Unreachable" } else { "SubspaceGap" };
                st.serialize_field("kind", kind)?;
                st.serialize_field("x", &vec_to_json(x))?;
                st.end()
            }
        }
    }
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Verdict", 7)?;
        st.serialize_field("status", &self.status)?;
        st.serialize_field("route", &self.route)?;
        st.serialize_field("steps_used", &self.steps_used)?;
        if let Some(w) = &self.witness {
            st.serialize_field("witness", w)?;
        }
        if !self.certificates.is_empty() {
            st.serialize_field("certificates", &self.certificates)?;
        }
        st.serialize_field("notes", &self.notes)?;
        if !self.profile.is_empty() {
            st.serialize_field("profile", &self.profile)?;
        }
        st.end()
    }
}

#[derive(Debug, Clone, PartialEq, DeriveSerialize)]
pub struct Meta {
    pub cap: usize,
    pub tol: f64,
    pub interpretations: Vec<String>,
}

#[derive(DeriveSerialize)]
struct SequencesJson {
    #[serde(rename = "X")]
    x: Vec<PolyhedronJson>,
    #[serde(rename = "R")]
    r: Vec<PolyhedronJson>,
    x_stable_at: Option<usize>,
    r_stable_at: Option<usize>,
}

/// Everything `analyze` computed for one instance.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub case: CaseTag,
    pub subspaces: SubspaceReport,
    pub conditions: Conditions,
    pub verdict: Verdict,
    /// `X_1, X_2, …` as computed (empty when not needed).
    pub feasible: Vec<Polyhedron>,
    pub reach: Vec<Polyhedron>,
    pub x_stable_at: Option<usize>,
    pub r_stable_at: Option<usize>,
    pub meta: Meta,
}

impl Report {
    #[allow(clippy::too_many_arguments)]
    pub(super) fn build(
        tag: &CaseTag,
        sub: &SubspaceReport,
        cond: &Conditions,
        verdict: Verdict,
        feasible: Vec<Polyhedron>,
        reach: Vec<Polyhedron>,
        stable: (Option<usize>, Option<usize>),
        (cap, tol): (usize, f64),
    ) -> Self {
        Report {
            case: tag.clone(),
            subspaces: sub.clone(),
            conditions: cond.clone(),
            verdict,
            feasible,
            reach,
            x_stable_at: stable.0,
            r_stable_at: stable.1,
            meta: Meta { cap, tol, interpretations: vec!["controllable=Kalman(A,B)".into()] },
        }
    }

    pub fn status(&self) -> Status {
        self.verdict.status
    }

    pub fn certificates(&self) -> Vec<EigenCertificate> {
        self.conditions.certificates()
    }

    /// `X(F)` when the feasible sequence stabilized.
    pub fn feasible_limit(&self) -> Option<&Polyhedron> {
        self.x_stable_at.map(|l| &self.feasible[l - 1])
    }

    pub fn reach_limit(&self) -> Option<&Polyhedron> {
        self.r_stable_at.map(|l| &self.reach[l - 1])
    }
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let seq = !self.feasible.is_empty() || !self.reach.is_empty();
        let mut st = s.serialize_struct("Report", if seq { 7 } else { 6 })?;
        st.serialize_field("case", &self.case)?;
        st.serialize_field("subspaces", &SubspacesJson::from(&self.subspaces))?;
        st.serialize_field("conditions", &self.conditions)?;
        st.serialize_field("verdict", &self.verdict)?;
        st.serialize_field("certificates", &self.certificates())?;
        if seq {
            st.serialize_field(
                "sequences",
                &SequencesJson {
                    x: self.feasible.iter().map(Polyhedron::to_json).collect(),
                    r: self.reach.iter().map(Polyhedron::to_json).collect(),
                    x_stable_at: self.x_stable_at,
                    r_stable_at: self.r_stable_at,
                },
            )?;
        }
        st.serialize_field("meta", &self.meta)?;
        st.end()
    }
}

/// Output of `oracle_compare`.
#[derive(Debug, Clone, PartialEq, Eq, DeriveSerialize)]
pub struct ConsistencyReport {
    pub case: Case,
    pub spectral: Option<Status>,
    pub direct: Option<Status>,
    pub direct_steps: usize,
    pub agree: bool,
    /// `[X_ℓ(F)]° = −R_ℓ(F°)` for `ℓ = 1, 2, …`
    pub duality: Vec<bool>,
    pub passed: bool,
    pub notes: Vec<String>,
}

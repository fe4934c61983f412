//! System files: a system with its constraint set, or a raw map graph.

use serde::{Deserialize, Serialize};

use crate::decide::{DEFAULT_CAP, DEFAULT_TOL};
use crate::geomctrl::{Sigma, SigmaJson};
use crate::polyhedra::json::{JsonError, PolyhedronJson};
use crate::polyhedra::Polyhedron;
use crate::setmaps::ConstrainedMap;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Options {
    #[serde(default = "default_cap")]
    pub cap: usize,
    #[serde(default = "default_tol")]
    pub tol: f64,
}

fn default_cap() -> usize {
    DEFAULT_CAP
}

fn default_tol() -> f64 {
    DEFAULT_TOL
}

impl Default for Options {
    fn default() -> Self {
        Options { cap: DEFAULT_CAP, tol: DEFAULT_TOL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemFileJson {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<SigmaJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constraint: Option<PolyhedronJson>,
    /// Graph of a raw map, in place of `sigma` and `constraint`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<PolyhedronJson>,
    #[serde(default)]
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    System { sigma: Sigma, y: Polyhedron },
    Raw(ConstrainedMap),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SystemFile {
    pub name: Option<String>,
    pub instance: Instance,
    pub options: Options,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum IoError {
    #[error("{0}")]
    Syntax(String),
    #[error("{field}: {msg}")]
    Field { field: String, msg: String },
}

fn within(prefix: &str, e: JsonError) -> IoError {
    match e {
        JsonError::Field { field, msg } => IoError::Field { field: format!("{prefix}.{field}"), msg },
        JsonError::Poly(p) => IoError::Field { field: prefix.to_string(), msg: p.to_string() },
    }
}

fn field(f: &str, msg: impl ToString) -> IoError {
    IoError::Field { field: f.to_string(), msg: msg.to_string() }
}

impl SystemFile {
    pub fn parse(text: &str) -> Result<Self, IoError> {
        let j: SystemFileJson = serde_json::from_str(text).map_err(|e| IoError::Syntax(e.to_string()))?;
        Self::from_json(&j)
    }

    pub fn from_json(j: &SystemFileJson) -> Result<Self, IoError> {
        let instance = match (&j.sigma, &j.constraint, &j.graph) {
            (Some(s), Some(c), None) => {
                let sigma = Sigma::from_json(s).map_err(|e| within("sigma", e))?;
                let y = Polyhedron::from_json(c).map_err(|e| within("constraint", e))?;
                if y.dim() != sigma.s() {
                    return Err(field(
                        "constraint.dim",
                        format!("constraint set in R^{} but C has {} rows", y.dim(), sigma.s()),
                    ));
                }
                Instance::System { sigma, y }
            }
            (None, None, Some(g)) => {
                let graph = Polyhedron::from_json(g).map_err(|e| within("graph", e))?;
                Instance::Raw(ConstrainedMap::raw(graph).map_err(|e| field("graph.dim", e))?)
            }
            _ => return Err(field("<root>", "expected either `sigma` with `constraint`, or `graph`")),
        };
        if j.options.cap == 0 {
            return Err(field("options.cap", "cap must be positive"));
        }
        if !(j.options.tol > 0.0 && j.options.tol.is_finite()) {
            return Err(field("options.tol", "tol must be a positive number"));
        }
        Ok(SystemFile { name: j.name.clone(), instance, options: j.options })
    }

    pub fn to_json(&self) -> SystemFileJson {
        let (sigma, constraint, graph) = match &self.instance {
            Instance::System { sigma, y } => (Some(sigma.to_json()), Some(y.to_json()), None),
            Instance::Raw(h) => (None, None, Some(h.graph().to_json())),
        };
        SystemFileJson { name: self.name.clone(), sigma, constraint, graph, options: self.options }
    }

    /// The system and constraint set, or `None` for a raw map.
    pub fn system(&self) -> Option<(&Sigma, &Polyhedron)> {
        match &self.instance {
            Instance::System { sigma, y } => Some((sigma, y)),
            Instance::Raw(_) => None,
        }
    }
}

//! Serialized forms with rationals as canonical strings.

use serde::{Deserialize, Serialize};

use super::{PolyError, Polyhedron, Row};
use crate::exactla::{fmt_rat, parse_rat, Rat};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IneqJson {
    #[serde(rename = "G")]
    pub g: Vec<Vec<String>>,
    pub h: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EqJson {
    #[serde(rename = "E")]
    pub e: Vec<Vec<String>>,
    pub f: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyhedronJson {
    pub dim: usize,
    pub ineq: IneqJson,
    #[serde(default = "EqJson::none")]
    pub eq: EqJson,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VrepJson {
    pub vertices: Vec<Vec<String>>,
    pub rays: Vec<Vec<String>>,
    pub lineality: Vec<Vec<String>>,
}

impl EqJson {
    fn none() -> Self {
        EqJson { e: vec![], f: vec![] }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum JsonError {
    #[error("{field}: {msg}")]
    Field { field: String, msg: String },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

fn field(field: impl Into<String>, msg: impl Into<String>) -> JsonError {
    JsonError::Field { field: field.into(), msg: msg.into() }
}

pub fn vec_to_json(v: &[Rat]) -> Vec<String> {
    v.iter().map(fmt_rat).collect()
}

pub fn vecs_to_json(vs: &[Vec<Rat>]) -> Vec<Vec<String>> {
    vs.iter().map(|v| vec_to_json(v)).collect()
}

pub fn parse_vec(v: &[String], ctx: &str) -> Result<Vec<Rat>, JsonError> {
    v.iter().enumerate().map(|(i, s)| parse_rat(s).map_err(|e| field(format!("{ctx}[{i}]"), e.to_string()))).collect()
}

pub fn parse_rows(m: &[Vec<String>], width: usize, ctx: &str) -> Result<Vec<Vec<Rat>>, JsonError> {
    m.iter()
        .enumerate()
        .map(|(i, r)| {
            if r.len() != width {
                return Err(field(format!("{ctx}[{i}]"), format!("expected {width} entries, found {}", r.len())));
            }
            parse_vec(r, &format!("{ctx}[{i}]"))
        })
        .collect()
}

impl Polyhedron {
    pub fn to_json(&self) -> PolyhedronJson {
        let split = |rows: &[Row]| -> (Vec<Vec<String>>, Vec<String>) {
            (rows.iter().map(|(g, _)| vec_to_json(g)).collect(), rows.iter().map(|(_, h)| fmt_rat(h)).collect())
        };
        let (g, h) = split(&self.ineq);
        let (e, f) = split(&self.eq);
        PolyhedronJson { dim: self.dim, ineq: IneqJson { g, h }, eq: EqJson { e, f } }
    }

    pub fn vrep_json(&self) -> VrepJson {
        VrepJson {
            vertices: vecs_to_json(&self.vertices),
            rays: vecs_to_json(&self.rays),
            lineality: vecs_to_json(&self.lineality),
        }
    }

    pub fn from_json(j: &PolyhedronJson) -> Result<Polyhedron, JsonError> {
        if j.ineq.g.len() != j.ineq.h.len() {
            return Err(field("ineq", format!("G has {} rows but h has {} entries", j.ineq.g.len(), j.ineq.h.len())));
        }
        if j.eq.e.len() != j.eq.f.len() {
            return Err(field("eq", format!("E has {} rows but f has {} entries", j.eq.e.len(), j.eq.f.len())));
        }
        let g = parse_rows(&j.ineq.g, j.dim, "ineq.G")?;
        let h = parse_vec(&j.ineq.h, "ineq.h")?;
        let e = parse_rows(&j.eq.e, j.dim, "eq.E")?;
        let f = parse_vec(&j.eq.f, "eq.f")?;
        Ok(Polyhedron::from_hrep(j.dim, g.into_iter().zip(h).collect(), e.into_iter().zip(f).collect())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactla::int;

    #[test]
    fn round_trip() {
        let b = Polyhedron::cube(2, &int(1));
        let j = b.to_json();
        assert_eq!(j.ineq.h, vec!["1", "1", "1", "1"]);
        assert_eq!(Polyhedron::from_json(&j).unwrap(), b);
    }

    #[test]
    fn bad_rational_has_context() {
        let mut j = Polyhedron::cube(1, &int(1)).to_json();
        j.ineq.h[0] = "1/0".into();
        let err = Polyhedron::from_json(&j).unwrap_err().to_string();
        assert!(err.starts_with("ineq.h[0]"), "{err}");
    }
}

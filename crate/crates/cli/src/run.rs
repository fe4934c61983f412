use std::fs;

use serde::Serialize;
use serde_json::{json, Value};

use conreach::decide::{self, SubspacesJson};
use conreach::geomctrl::{kl_subspaces, Sigma};
use conreach::io::{Instance, SystemFile};
use conreach::polyhedra::Polyhedron;
use conreach::setmaps::{ConstrainedMap, MapTag, SeqMode};

use crate::{text, Common, Format, SetArgs};

pub struct Output {
    pub body: String,
    pub code: u8,
}

type Res = Result<Output, String>;

pub struct Loaded {
    pub file: SystemFile,
    pub cap: usize,
    pub tol: f64,
}

pub fn load(c: &Common) -> Result<Loaded, String> {
    let raw = fs::read_to_string(&c.file).map_err(|e| format!("{}: {e}", c.file.display()))?;
    let file = SystemFile::parse(&raw).map_err(|e| format!("{}: {e}", c.file.display()))?;
    let cap = c.cap.unwrap_or(file.options.cap);
    if cap == 0 {
        return Err("cap must be positive".into());
    }
    let tol = c.tol.unwrap_or(file.options.tol);
    if !(tol > 0.0 && tol.is_finite()) {
        return Err("tol must be a positive number".into());
    }
    Ok(Loaded { file, cap, tol })
}

impl Loaded {
    fn system(&self) -> Result<(&Sigma, &Polyhedron), String> {
        self.file
            .system()
            .ok_or_else(|| "this command needs a system and constraint set, the file holds a raw map graph".to_string())
    }
}

fn emit<T: Serialize>(c: &Common, title: &str, v: &T, code: u8) -> Res {
    let value = serde_json::to_value(v).map_err(|e| e.to_string())?;
    let body = match c.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&value).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
        Format::Text => text::render(title, &value),
    };
    Ok(Output { body, code })
}

pub fn analyze(c: &Common) -> Res {
    let l = load(c)?;
    let (sys, y) = l.system()?;
    let report = decide::analyze_with(sys, y, l.cap, l.tol).map_err(|e| e.to_string())?;
    let code = report.status().exit_code() as u8;
    let title =
        format!("{}: {:?} ({:?})", l.file.name.as_deref().unwrap_or("system"), report.status(), report.case.variant);
    emit(c, &title, &report, code)
}

pub fn classify(c: &Common) -> Res {
    let l = load(c)?;
    let (sys, y) = l.system()?;
    let tag = decide::classify(sys, y).map_err(|e| e.to_string())?;
    emit(c, &format!("case: {:?}", tag.variant), &tag, 0)
}

pub fn subspaces(c: &Common) -> Res {
    let l = load(c)?;
    let (sys, _) = l.system()?;
    let s = SubspacesJson::from(&kl_subspaces(sys));
    emit(c, "subspaces", &s, 0)
}

pub fn check_conditions(c: &Common) -> Res {
    let l = load(c)?;
    let (sys, y) = l.system()?;
    let cond = decide::check_conditions_with(sys, y, l.tol).map_err(|e| e.to_string())?;
    let holds = cond.holds();
    let title = format!("conditions (a) {} (b) {} (c) {} (d) {}", holds[0], holds[1], holds[2], holds[3]);
    emit(c, &title, &cond, 0)
}

pub fn oracle_compare(c: &Common) -> Res {
    let l = load(c)?;
    let (sys, y) = l.system()?;
    let r = decide::oracle_compare_with(sys, y, l.cap, l.tol).map_err(|e| e.to_string())?;
    let code = if r.passed { 0 } else { 1 };
    emit(c, &format!("oracle comparison: {}", if r.passed { "passed" } else { "FAILED" }), &r, code)
}

fn map_for(l: &Loaded, requested: Option<&str>) -> Result<ConstrainedMap, String> {
    let tag = requested.map(|s| s.parse::<MapTag>().map_err(|e| e.to_string())).transpose()?;
    match &l.file.instance {
        Instance::Raw(h) => match tag {
            None | Some(MapTag::Raw) => Ok(h.clone()),
            Some(t) => Err(format!("map {t} needs a system; the file holds a raw map graph")),
        },
        Instance::System { sigma, y } => match tag.unwrap_or(MapTag::F) {
            MapTag::Raw => Err("map Raw needs a file with a graph".into()),
            t => ConstrainedMap::build(sigma, y, t).map_err(|e| e.to_string()),
        },
    }
}

pub fn set_sequence(a: &SetArgs, mode: SeqMode) -> Res {
    let l = load(&a.common)?;
    let h = map_for(&l, a.map.as_deref())?;
    let start = match mode {
        SeqMode::Reach => Polyhedron::origin(h.dim()),
        SeqMode::Feasible => Polyhedron::universe(h.dim()),
    };
    let step = |p: &Polyhedron| match mode {
        SeqMode::Reach => h.image(p),
        SeqMode::Feasible => h.preimage(p),
    };
    let limit = a.steps.unwrap_or(l.cap);
    let mut sets: Vec<Polyhedron> = Vec::new();
    let mut stable_at = None;
    let mut cur = start;
    // with an explicit step count all terms are kept; otherwise stop once the
    // sequence repeats
    for k in 1..=limit {
        let next = step(&cur).map_err(|e| e.to_string())?;
        if k > 1 && stable_at.is_none() && next == cur {
            stable_at = Some(k - 1);
            if a.steps.is_none() {
                break;
            }
        }
        sets.push(next.clone());
        cur = next;
    }
    let name = if mode == SeqMode::Reach { "R" } else { "X" };
    let body = json!({
        "map": h.tag().name(),
        "sequence": name,
        "steps": sets.len(),
        "stable_at": stable_at,
        "sets": sets.iter().enumerate().map(|(i, p)| json!({
            "step": i + 1,
            "hrep": p.to_json(),
            "vrep": p.vrep_json(),
        })).collect::<Vec<Value>>(),
    });
    let code = if a.steps.is_none() && stable_at.is_none() { 2 } else { 0 };
    let title = match stable_at {
        Some(s) => format!("{name}_l({}): stable at l = {s}", h.tag()),
        None if a.steps.is_some() => format!("{name}_l({}): {} steps", h.tag(), sets.len()),
        None => format!("{name}_l({}): {} steps, not stable", h.tag(), sets.len()),
    };
    emit(&a.common, &title, &body, code)
}

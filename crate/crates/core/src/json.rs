//! JSON documents: lattice description files and result exports.
//!
//! Integers are written as plain JSON numbers of any size.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::cone::{ChamberGraph, WalkTrace};
use crate::cusps::CuspReport;
use crate::error::{Error, Result};
use crate::lattice::{Inertia, LatVec, Lattice, LatticeDescription};

pub fn int(n: &BigInt) -> Value {
    Value::Number(n.to_string().parse::<Number>().expect("integers are valid JSON numbers"))
}

pub fn vec(v: &LatVec) -> Value {
    Value::Array(v.coords().iter().map(int).collect())
}

pub fn vecs<'a>(vs: impl IntoIterator<Item = &'a LatVec>) -> Value {
    Value::Array(vs.into_iter().map(vec).collect())
}

pub fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("{n} is not an integer"))),
        other => Err(Error::Parse(format!("expected integer, found {other}"))),
    }
}

pub fn parse_vec(v: &Value) -> Result<LatVec> {
    match v {
        Value::Array(items) => Ok(LatVec::new(items.iter().map(parse_int).collect::<Result<_>>()?)),
        other => Err(Error::Parse(format!("expected integer array, found {other}"))),
    }
}

pub fn parse_vecs(v: &Value) -> Result<Vec<LatVec>> {
    match v {
        Value::Array(items) => items.iter().map(parse_vec).collect(),
        other => Err(Error::Parse(format!("expected array of vectors, found {other}"))),
    }
}

/// Parses `{"name", "gram", "wall_squares"?, "orientation"?}`.
pub fn parse_lattice_description(text: &str) -> Result<LatticeDescription> {
    let doc: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let obj = doc
        .as_object()
        .ok_or_else(|| Error::Parse("lattice description must be a JSON object".into()))?;
    let name = obj
        .get("name")
        .and_then(Value::as_str)
        .ok_or_else(|| Error::Parse("missing string field \"name\"".into()))?
        .to_string();
    let gram = obj
        .get("gram")
        .ok_or_else(|| Error::Parse("missing field \"gram\"".into()))
        .and_then(parse_vecs)?
        .into_iter()
        .map(|row| row.0)
        .collect();
    let wall_squares = match obj.get("wall_squares") {
        None | Some(Value::Null) => None,
        Some(Value::Array(items)) => Some(items.iter().map(parse_int).collect::<Result<Vec<_>>>()?),
        Some(other) => return Err(Error::Parse(format!("wall_squares must be an array, found {other}"))),
    };
    let orientation = match obj.get("orientation") {
        None | Some(Value::Null) => None,
        Some(v) => Some(parse_vec(v)?),
    };
    Ok(LatticeDescription {
        name,
        gram,
        wall_squares,
        orientation,
    })
}

pub fn load_lattice(text: &str) -> Result<Lattice> {
    Lattice::from_description(parse_lattice_description(text)?)
}

pub fn lattice(l: &Lattice) -> Value {
    let squares: BTreeSet<&BigInt> = l.wall_squares().iter().collect();
    json!({
        "name": l.name(),
        "gram": Value::Array(l.gram().iter().map(|r| Value::Array(r.iter().map(int).collect())).collect()),
        "wall_squares": Value::Array(squares.into_iter().map(int).collect()),
        "orientation": vec(l.orientation()),
    })
}

pub fn signature(s: Inertia) -> Value {
    json!({"pos": s.pos, "neg": s.neg, "zero": s.zero})
}

/// `{"start", "steps": [{"wall", "image", "pairing"}], "final"}`.
pub fn walk_trace(t: &WalkTrace) -> Value {
    let steps: Vec<Value> = t
        .steps
        .iter()
        .map(|s| {
            json!({
                "wall": vec(s.wall.vector()),
                "image": vec(&s.image),
                "pairing": int(&s.pairing),
            })
        })
        .collect();
    json!({
        "start": vec(&t.start),
        "steps": steps,
        "final": vec(&t.final_class),
    })
}

/// `{"nodes": [{"signature", "representative", "orbit"}], "edges": [[a, b, wall]]}`.
pub fn chamber_graph(g: &ChamberGraph) -> Value {
    let nodes: Vec<Value> = g
        .nodes
        .iter()
        .map(|n| {
            json!({
                "signature": vecs(n.chamber.signature_walls.iter().map(|w| w.vector())),
                "representative": vec(&n.chamber.representative),
                "orbit": n.orbit,
            })
        })
        .collect();
    let edges: Vec<Value> = g
        .edges
        .iter()
        .map(|e| json!([e.a, e.b, vec(&e.wall)]))
        .collect();
    json!({"nodes": nodes, "edges": edges})
}

/// `{"lattice", "bounds", "orbits": [{"representative", "members", "words"}], "upper_bound_only"}`.
pub fn cusp_report(r: &CuspReport) -> Value {
    let orbits: Vec<Value> = r
        .orbits
        .iter()
        .map(|o| {
            json!({
                "representative": vec(&o.representative),
                "members": vecs(&o.members),
                "words": Value::Array(o.words.iter().map(vecs).collect()),
            })
        })
        .collect();
    let mut bounds = Map::new();
    bounds.insert("iso_bound".into(), json!(r.bounds.iso_bound));
    bounds.insert("wall_bound".into(), json!(r.bounds.wall_bound));
    bounds.insert("bfs_depth".into(), json!(r.bounds.bfs_depth));
    json!({
        "lattice": r.lattice,
        "bounds": Value::Object(bounds),
        "orbits": orbits,
        "upper_bound_only": r.upper_bound_only,
    })
}

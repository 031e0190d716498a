//! JSON serialization: lattices, recipes and posets. Rationals travel as
//! canonical `"num/den"` strings so no consumer ever rounds them.

use serde::{Deserialize, Serialize};

use crate::constructions::Recipe;
use crate::diagram::{Coord, LatticeDiagram};
use crate::error::Result;
use crate::poset::Poset;
use crate::rat::{fmt_rat, parse_rat};

#[derive(Serialize, Deserialize)]
struct VertexJson {
    id: String,
    p: String,
    q: String,
}

#[derive(Serialize, Deserialize)]
struct LatticeJson {
    vertices: Vec<VertexJson>,
    covers: Vec<(String, String)>,
}

/// Canonical form: vertices sorted by id, covers sorted; identical diagrams
/// serialize to identical bytes.
pub fn lattice_to_json(d: &LatticeDiagram) -> String {
    let mut vertices: Vec<VertexJson> = d
        .vertices()
        .map(|(_, label, c)| VertexJson {
            id: label.to_string(),
            p: fmt_rat(&c.p),
            q: fmt_rat(&c.q),
        })
        .collect();
    vertices.sort_by(|a, b| a.id.cmp(&b.id));
    let mut covers: Vec<(String, String)> = d
        .covers()
        .iter()
        .map(|&(u, v)| (d.label(u).to_string(), d.label(v).to_string()))
        .collect();
    covers.sort();
    serde_json::to_string_pretty(&LatticeJson { vertices, covers }).expect("serializable")
}

pub fn lattice_from_json(s: &str) -> Result<LatticeDiagram> {
    let raw: LatticeJson = serde_json::from_str(s)?;
    let mut vertices = Vec::with_capacity(raw.vertices.len());
    for v in raw.vertices {
        vertices.push((v.id, Coord::new(parse_rat(&v.p)?, parse_rat(&v.q)?)));
    }
    LatticeDiagram::build(vertices, &raw.covers)
}

pub fn recipe_to_json(r: &Recipe) -> String {
    serde_json::to_string_pretty(r).expect("serializable")
}

pub fn recipe_from_json(s: &str) -> Result<Recipe> {
    Ok(serde_json::from_str(s)?)
}

#[derive(Serialize, Deserialize)]
struct PosetJson {
    elements: Vec<String>,
    covers: Vec<(String, String)>,
}

pub fn poset_to_json(p: &Poset) -> String {
    let mut elements: Vec<String> = p.labels().to_vec();
    elements.sort();
    let mut covers: Vec<(String, String)> = p
        .covers()
        .iter()
        .map(|&(a, b)| (p.label(a).to_string(), p.label(b).to_string()))
        .collect();
    covers.sort();
    serde_json::to_string_pretty(&PosetJson { elements, covers }).expect("serializable")
}

pub fn poset_from_json(s: &str) -> Result<Poset> {
    let raw: PosetJson = serde_json::from_str(s)?;
    Poset::from_labels(raw.elements, &raw.covers)
}

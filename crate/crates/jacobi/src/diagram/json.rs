//! JSON exchange format for diagrams.
//!
//! Vertex, half-edge and edge ids share one numeric namespace. A univalent vertex's
//! only half-edge has the vertex's own id; a trivalent vertex lists the ids of its
//! three half-edges in cyclic order.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{Edge, HalfEdge, OpenJacobiDiagram, Vertex};
use crate::error::{Error, Result};
use crate::freegroup::Word;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonVertex {
    pub id: u64,
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<Vec<u64>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonEdge {
    pub id: u64,
    pub from: u64,
    pub to: u64,
    #[serde(default)]
    pub beads: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JsonDiagram {
    pub vertices: Vec<JsonVertex>,
    pub edges: Vec<JsonEdge>,
}

fn invalid<T>(msg: String) -> Result<T> {
    Err(Error::InvalidDiagram(msg))
}

impl JsonDiagram {
    pub fn from_diagram(d: &OpenJacobiDiagram) -> Self {
        let n = d.vertices().len() as u64;
        let mut next = n;
        let mut half_ids: Vec<[u64; 3]> = Vec::new();
        let vertices = d
            .vertices()
            .iter()
            .enumerate()
            .map(|(v, kind)| match *kind {
                Vertex::Uni(label) => {
                    half_ids.push([v as u64; 3]);
                    JsonVertex { id: v as u64, kind: "uni".into(), label: Some(label), cyclic: None }
                }
                Vertex::Tri => {
                    let ids = [next, next + 1, next + 2];
                    next += 3;
                    half_ids.push(ids);
                    JsonVertex { id: v as u64, kind: "tri".into(), label: None, cyclic: Some(ids.to_vec()) }
                }
            })
            .collect();
        let hid = |h: HalfEdge| half_ids[h.vertex][h.slot as usize];
        let edges = d
            .edges()
            .iter()
            .enumerate()
            .map(|(e, edge)| JsonEdge {
                id: next + e as u64,
                from: hid(edge.from),
                to: hid(edge.to),
                beads: edge.beads.iter().map(Word::to_string).collect(),
            })
            .collect();
        JsonDiagram { vertices, edges }
    }

    pub fn to_diagram(&self) -> Result<OpenJacobiDiagram> {
        let mut ids = BTreeSet::new();
        let mut claim = |id: u64, what: &str| {
            if ids.insert(id) {
                Ok(())
            } else {
                invalid(format!("id {id} ({what}) is already in use"))
            }
        };
        let mut half: BTreeMap<u64, HalfEdge> = BTreeMap::new();
        let mut vertices = Vec::new();
        for (v, jv) in self.vertices.iter().enumerate() {
            claim(jv.id, "vertex")?;
            match jv.kind.as_str() {
                "uni" => {
                    let Some(label) = jv.label else {
                        return invalid(format!("univalent vertex {} has no label", jv.id));
                    };
                    if jv.cyclic.is_some() {
                        return invalid(format!("univalent vertex {} must not list a cyclic order", jv.id));
                    }
                    half.insert(jv.id, HalfEdge::new(v, 0));
                    vertices.push(Vertex::Uni(label));
                }
                "tri" => {
                    if jv.label.is_some() {
                        return invalid(format!("trivalent vertex {} must not carry a label", jv.id));
                    }
                    let Some(cyc) = jv.cyclic.as_ref().filter(|c| c.len() == 3) else {
                        return invalid(format!("trivalent vertex {} needs a cyclic order of exactly 3 half-edges", jv.id));
                    };
                    for (s, &h) in cyc.iter().enumerate() {
                        claim(h, "half-edge")?;
                        half.insert(h, HalfEdge::new(v, s as u8));
                    }
                    vertices.push(Vertex::Tri);
                }
                other => return invalid(format!("vertex {} has unknown kind {other:?}", jv.id)),
            }
        }
        let mut edges = Vec::new();
        for je in &self.edges {
            claim(je.id, "edge")?;
            let end = |h: u64| {
                half.get(&h).copied().ok_or_else(|| Error::InvalidDiagram(format!("edge {} references unknown half-edge {h}", je.id)))
            };
            let beads = je
                .beads
                .iter()
                .map(|b| b.parse::<Word>())
                .collect::<Result<Vec<_>>>()
                .map_err(|e| Error::InvalidDiagram(format!("edge {}: {e}", je.id)))?;
            edges.push(Edge { from: end(je.from)?, to: end(je.to)?, beads });
        }
        OpenJacobiDiagram::new(vertices, edges)
    }
}

pub fn to_json(d: &OpenJacobiDiagram) -> serde_json::Value {
    serde_json::to_value(JsonDiagram::from_diagram(d)).expect("diagram serializes")
}

pub fn from_json(v: &serde_json::Value) -> Result<OpenJacobiDiagram> {
    let jd: JsonDiagram = serde_json::from_value(v.clone()).map_err(|e| Error::InvalidDiagram(format!("schema: {e}")))?;
    jd.to_diagram()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn round_trip() {
        let d = OpenJacobiDiagram::tadpole("x1*x2^-1".parse().unwrap())
            .disjoint_union(&OpenJacobiDiagram::strut(1, 2, "x2".parse().unwrap()).unwrap());
        let v = to_json(&d);
        assert_eq!(from_json(&v).unwrap(), d);
    }

    #[test]
    fn parses_hand_written_tripod() {
        let v = json!({
            "vertices": [
                {"id": 1, "kind": "uni", "label": 1},
                {"id": 2, "kind": "uni", "label": 2},
                {"id": 3, "kind": "uni", "label": 3},
                {"id": 4, "kind": "tri", "cyclic": [10, 11, 12]}
            ],
            "edges": [
                {"id": 20, "from": 1, "to": 10, "beads": ["x1"]},
                {"id": 21, "from": 2, "to": 11, "beads": []},
                {"id": 22, "from": 12, "to": 3, "beads": ["x1^-1", "x2"]}
            ]
        });
        let d = from_json(&v).unwrap();
        assert_eq!((d.num_legs(), d.num_trivalent()), (3, 1));
    }

    #[test]
    fn rejects_with_precise_messages() {
        let msg = |v: serde_json::Value| match from_json(&v) {
            Err(Error::InvalidDiagram(m)) => m,
            other => panic!("expected rejection, got {other:?}"),
        };
        let m = msg(json!({"vertices": [{"id": 1, "kind": "uni"}], "edges": []}));
        assert!(m.contains("no label"), "{m}");
        let m = msg(json!({"vertices": [{"id": 1, "kind": "tri", "cyclic": [2, 3]}], "edges": []}));
        assert!(m.contains("exactly 3"), "{m}");
        let m = msg(json!({
            "vertices": [{"id": 1, "kind": "uni", "label": 1}, {"id": 2, "kind": "uni", "label": 2}],
            "edges": [{"id": 3, "from": 1, "to": 9, "beads": []}]
        }));
        assert!(m.contains("unknown half-edge 9"), "{m}");
        let m = msg(json!({
            "vertices": [{"id": 1, "kind": "uni", "label": 1}, {"id": 2, "kind": "uni", "label": 2}],
            "edges": [{"id": 3, "from": 1, "to": 2, "beads": ["y7"]}]
        }));
        assert!(m.contains("edge 3"), "{m}");
        let m = msg(json!({
            "vertices": [{"id": 1, "kind": "uni", "label": 1}, {"id": 1, "kind": "uni", "label": 2}],
            "edges": []
        }));
        assert!(m.contains("already in use"), "{m}");
        let m = msg(json!({
            "vertices": [{"id": 1, "kind": "uni", "label": 1}, {"id": 2, "kind": "uni", "label": 3}],
            "edges": [{"id": 3, "from": 1, "to": 2}]
        }));
        assert!(m.contains("label 3"), "{m}");
    }
}

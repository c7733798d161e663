//! Canonical forms modulo bead moves, isomorphism and AS.
//!
//! Every component contains a labelled leg, so once the cyclic orientation of each
//! trivalent vertex is fixed a depth-first walk is forced: components in order of
//! their smallest label, rooted at that leg, and at a trivalent vertex reached
//! through slot `a` the walk continues through `next(a)` then `next(next(a))`.
//! The walk numbers vertices and slots; gauge fixing clears the bead on every tree
//! edge that ends at a trivalent vertex. Trying all orientation flips and keeping
//! the smallest encoding gives the canonical form; each flip costs one AS sign.

use serde::{Deserialize, Serialize};

use super::{Edge, HalfEdge, OpenJacobiDiagram, Vertex};
use crate::freegroup::Word;

/// An edge between canonical slots `a < b`, bead read from `a` to `b`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalEdge {
    pub a: (u32, u8),
    pub b: (u32, u8),
    pub bead: Word,
}

/// `kinds[v]` is the leg label of canonical vertex `v`, or 0 for a trivalent vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalDiagram {
    kinds: Vec<u32>,
    edges: Vec<CanonicalEdge>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Canonical {
    /// The input equals `sign` times `diagram`.
    Nonzero { diagram: CanonicalDiagram, sign: i8 },
    /// The input equals its own negative.
    Zero,
}

impl Canonical {
    pub fn is_zero(&self) -> bool {
        matches!(self, Canonical::Zero)
    }

    pub fn diagram(&self) -> Option<&CanonicalDiagram> {
        match self {
            Canonical::Nonzero { diagram, .. } => Some(diagram),
            Canonical::Zero => None,
        }
    }
}

impl CanonicalDiagram {
    pub fn kinds(&self) -> &[u32] {
        &self.kinds
    }

    pub fn edges(&self) -> &[CanonicalEdge] {
        &self.edges
    }

    pub fn num_legs(&self) -> usize {
        self.kinds.iter().filter(|&&k| k > 0).count()
    }

    pub fn num_trivalent(&self) -> usize {
        self.kinds.iter().filter(|&&k| k == 0).count()
    }

    pub fn degree(&self) -> usize {
        self.kinds.len() / 2
    }

    pub fn beads(&self) -> impl Iterator<Item = &Word> {
        self.edges.iter().map(|e| &e.bead)
    }

    /// Edges joining two distinct trivalent vertices, by canonical edge index.
    pub fn internal_edges(&self) -> Vec<usize> {
        self.edges
            .iter()
            .enumerate()
            .filter(|(_, e)| e.a.0 != e.b.0 && self.kinds[e.a.0 as usize] == 0 && self.kinds[e.b.0 as usize] == 0)
            .map(|(i, _)| i)
            .collect()
    }

    /// The representative this form was read from; it canonicalizes to `(self, +1)`.
    pub fn to_diagram(&self) -> OpenJacobiDiagram {
        let vertices = self
            .kinds
            .iter()
            .map(|&k| if k == 0 { Vertex::Tri } else { Vertex::Uni(k) })
            .collect();
        let edges = self
            .edges
            .iter()
            .map(|e| {
                Edge::with_bead(
                    HalfEdge::new(e.a.0 as usize, e.a.1),
                    HalfEdge::new(e.b.0 as usize, e.b.1),
                    e.bead.clone(),
                )
            })
            .collect();
        OpenJacobiDiagram::new(vertices, edges).expect("canonical forms are valid diagrams")
    }
}

struct Walk<'a> {
    d: &'a OpenJacobiDiagram,
    flip: &'a [bool],
    cid: Vec<u32>,
    arrival: Vec<u8>,
    via: Vec<Option<HalfEdge>>,
    order: Vec<usize>,
}

const UNSEEN: u32 = u32::MAX;

impl Walk<'_> {
    fn next(&self, v: usize, s: u8) -> u8 {
        if self.flip[v] {
            (s + 2) % 3
        } else {
            (s + 1) % 3
        }
    }

    fn visit(&mut self, v: usize, arrival: u8, via: Option<HalfEdge>) {
        self.cid[v] = self.order.len() as u32;
        self.arrival[v] = arrival;
        self.via[v] = via;
        self.order.push(v);
        let exits: Vec<u8> = match self.d.vertices[v] {
            Vertex::Uni(_) if via.is_none() => vec![0],
            Vertex::Uni(_) => vec![],
            Vertex::Tri => {
                let s1 = self.next(v, arrival);
                vec![s1, self.next(v, s1)]
            }
        };
        for s in exits {
            let other = self.d.other_end(HalfEdge::new(v, s));
            if self.cid[other.vertex] == UNSEEN {
                self.visit(other.vertex, other.slot, Some(other));
            }
        }
    }

    fn canonical_slot(&self, h: HalfEdge) -> u8 {
        match self.d.vertices[h.vertex] {
            Vertex::Uni(_) => 0,
            Vertex::Tri => {
                let a = self.arrival[h.vertex];
                let forward = (h.slot + 3 - a) % 3;
                if self.flip[h.vertex] {
                    (3 - forward) % 3
                } else {
                    forward
                }
            }
        }
    }
}

/// Encoding of `d` (single-bead holonomies `hol`) under the orientation flips `flip`.
fn encode(d: &OpenJacobiDiagram, hol: &[Word], flip: &[bool], roots: &[usize]) -> CanonicalDiagram {
    let n = d.vertices.len();
    let mut walk = Walk { d, flip, cid: vec![UNSEEN; n], arrival: vec![0; n], via: vec![None; n], order: Vec::with_capacity(n) };
    for &r in roots {
        if walk.cid[r] == UNSEEN {
            walk.visit(r, 0, None);
        }
    }
    let mut gauge: Vec<Word> = vec![Word::identity(); n];
    for &v in &walk.order {
        if d.vertices[v] != Vertex::Tri {
            continue;
        }
        let h = walk.via[v].expect("trivalent vertices are never roots");
        let (e, end) = d.edge_at(h);
        let parent = d.other_end(h).vertex;
        // Holonomy from the parent into v.
        let b = if end == 1 { hol[e].clone() } else { hol[e].inv() };
        gauge[v] = b.inv().mul(&gauge[parent]);
    }
    let mut edges: Vec<CanonicalEdge> = d
        .edges
        .iter()
        .zip(hol)
        .map(|(e, h)| {
            let bead = gauge[e.from.vertex].inv().mul(h).mul(&gauge[e.to.vertex]);
            let a = (walk.cid[e.from.vertex], walk.canonical_slot(e.from));
            let b = (walk.cid[e.to.vertex], walk.canonical_slot(e.to));
            if a <= b {
                CanonicalEdge { a, b, bead }
            } else {
                CanonicalEdge { a: b, b: a, bead: bead.inv() }
            }
        })
        .collect();
    edges.sort();
    let kinds = walk
        .order
        .iter()
        .map(|&v| match d.vertices[v] {
            Vertex::Uni(l) => l,
            Vertex::Tri => 0,
        })
        .collect();
    CanonicalDiagram { kinds, edges }
}

pub(super) fn canonicalize(d: &OpenJacobiDiagram) -> Canonical {
    match minimal_encoding(d) {
        (diagram, Some(sign)) => Canonical::Nonzero { diagram, sign },
        (_, None) => Canonical::Zero,
    }
}

/// The minimal encoding, with the sign relating it to `d`, or `None` when both
/// orientation parities reach it.
pub(super) fn minimal_encoding(d: &OpenJacobiDiagram) -> (CanonicalDiagram, Option<i8>) {
    let hol: Vec<Word> = d.edges.iter().map(Edge::holonomy).collect();
    let tri: Vec<usize> = (0..d.vertices.len()).filter(|&v| d.vertices[v] == Vertex::Tri).collect();
    let roots = d.legs.clone();
    let mut flip = vec![false; d.vertices.len()];
    let mut best: Option<(CanonicalDiagram, [bool; 2])> = None;
    for mask in 0u64..(1u64 << tri.len()) {
        for (i, &v) in tri.iter().enumerate() {
            flip[v] = mask >> i & 1 == 1;
        }
        let parity = (mask.count_ones() % 2) as usize;
        let enc = encode(d, &hol, &flip, &roots);
        match &mut best {
            Some((b, parities)) if enc == *b => parities[parity] = true,
            Some((b, _)) if enc > *b => {}
            _ => {
                let mut parities = [false; 2];
                parities[parity] = true;
                best = Some((enc, parities));
            }
        }
    }
    let (diagram, parities) = best.expect("at least one orientation");
    let sign = match parities {
        [true, true] => None,
        [true, false] => Some(1),
        _ => Some(-1),
    };
    (diagram, sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::HalfEdge;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn tadpole_vanishes_only_without_bead() {
        assert!(OpenJacobiDiagram::tadpole(Word::identity()).canonicalize().is_zero());
        let a = OpenJacobiDiagram::tadpole(w("x1")).canonicalize();
        let b = OpenJacobiDiagram::tadpole(w("x1^-1")).canonicalize();
        let (Canonical::Nonzero { diagram: da, sign: sa }, Canonical::Nonzero { diagram: db, sign: sb }) = (a, b) else {
            panic!("beaded tadpole must not vanish");
        };
        assert_eq!(da, db);
        assert_eq!(sa, -sb);
    }

    #[test]
    fn strut_orientation_reversal() {
        let a = OpenJacobiDiagram::strut(1, 2, w("x1*x2")).unwrap();
        let b = a.reverse_edge(0);
        assert_eq!(b.edges()[0].beads, vec![w("x2^-1*x1^-1")]);
        assert_eq!(a.canonicalize(), b.canonicalize());
        assert!(matches!(a.canonicalize(), Canonical::Nonzero { sign: 1, .. }));
    }

    #[test]
    fn as_swap_flips_sign() {
        let d = OpenJacobiDiagram::tadpole(w("x1")).disjoint_union(&OpenJacobiDiagram::strut(1, 2, w("x2")).unwrap());
        let Canonical::Nonzero { diagram, sign } = d.canonicalize() else { panic!() };
        let swapped = d.as_swap(1).unwrap().canonicalize();
        assert_eq!(swapped, Canonical::Nonzero { diagram, sign: -sign });
        assert_eq!(d.rotate_slots(1).unwrap().canonicalize(), d.canonicalize());
    }

    #[test]
    fn representative_is_idempotent() {
        let theta_leg = OpenJacobiDiagram::new(
            vec![Vertex::Uni(1), Vertex::Uni(2), Vertex::Tri, Vertex::Tri],
            vec![
                Edge::with_bead(HalfEdge::new(0, 0), HalfEdge::new(2, 0), w("x1")),
                Edge::with_bead(HalfEdge::new(2, 1), HalfEdge::new(3, 1), w("x2")),
                Edge::with_bead(HalfEdge::new(2, 2), HalfEdge::new(3, 2), w("x1^-1")),
                Edge::new(HalfEdge::new(3, 0), HalfEdge::new(1, 0)),
            ],
        )
        .unwrap();
        let Canonical::Nonzero { diagram, .. } = theta_leg.canonicalize() else { panic!() };
        assert_eq!(diagram.to_diagram().canonicalize(), Canonical::Nonzero { diagram: diagram.clone(), sign: 1 });
        assert!(diagram.edges().iter().all(|e| e.a < e.b));
        // Walk order 0 -> 1 -> 2 makes both of these tree edges into trivalent vertices.
        assert!(diagram.edges().iter().filter(|e| e.b.0 == 1 || (e.a.0 == 1 && e.b.0 == 2 && e.b.1 == 0)).all(|e| e.bead.is_identity()));
    }
}

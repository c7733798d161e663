//! Beaded open Jacobi diagrams.
//!
//! Each edge is oriented `from -> to` and carries a list of beads read along that
//! orientation; its holonomy is their product. A trivalent vertex has slots
//! `0, 1, 2` in cyclic order; a univalent vertex has the single slot `0` and a leg label.
//!
//! Gauge convention at a vertex `v` with `g`: an edge entering `v` with bead `b`
//! becomes `b·g`, an edge leaving `v` becomes `g⁻¹·b`, a loop at `v` becomes
//! `g⁻¹·b·g`. Pushing a bead `w` entering a trivalent vertex through it is the gauge
//! `g = w⁻¹`: the entering edge is cleared and both leaving edges pick up `w` in front.

mod canonical;
mod enumerate;
pub mod json;

pub use canonical::{Canonical, CanonicalDiagram, CanonicalEdge};
pub use enumerate::{enumerate_diagrams, enumerate_structures};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freegroup::Word;
use crate::linalg::{Field, SparseVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HalfEdge {
    pub vertex: usize,
    pub slot: u8,
}

impl HalfEdge {
    pub fn new(vertex: usize, slot: u8) -> Self {
        HalfEdge { vertex, slot }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Vertex {
    /// Univalent vertex with its leg label, counted from 1.
    Uni(u32),
    Tri,
}

impl Vertex {
    pub fn valence(self) -> u8 {
        match self {
            Vertex::Uni(_) => 1,
            Vertex::Tri => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: HalfEdge,
    pub to: HalfEdge,
    pub beads: Vec<Word>,
}

impl Edge {
    pub fn new(from: HalfEdge, to: HalfEdge) -> Self {
        Edge { from, to, beads: Vec::new() }
    }

    pub fn with_bead(from: HalfEdge, to: HalfEdge, bead: Word) -> Self {
        let beads = if bead.is_identity() { Vec::new() } else { vec![bead] };
        Edge { from, to, beads }
    }

    pub fn holonomy(&self) -> Word {
        self.beads.iter().fold(Word::identity(), |acc, b| acc.mul(b))
    }

    pub fn is_loop(&self) -> bool {
        self.from.vertex == self.to.vertex
    }
}

const NO_EDGE: usize = usize::MAX;

/// A validated uni-trivalent graph; see the module docs for conventions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenJacobiDiagram {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
    /// `attach[v][slot] = 2 * edge + end`, end 0 for `from` and 1 for `to`.
    attach: Vec<[usize; 3]>,
    /// `legs[label - 1]` is the univalent vertex carrying that label.
    legs: Vec<usize>,
}

impl OpenJacobiDiagram {
    /// Checks every structural invariant.
    pub fn new(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Result<Self> {
        let bad = |msg: String| Err(Error::InvalidDiagram(msg));
        let mut attach = vec![[NO_EDGE; 3]; vertices.len()];
        for (e, edge) in edges.iter().enumerate() {
            for (end, h) in [edge.from, edge.to].into_iter().enumerate() {
                let Some(kind) = vertices.get(h.vertex) else {
                    return bad(format!("edge {e} references missing vertex {}", h.vertex));
                };
                if h.slot >= kind.valence() {
                    return bad(format!("edge {e} uses slot {} of vertex {} of valence {}", h.slot, h.vertex, kind.valence()));
                }
                let cell = &mut attach[h.vertex][h.slot as usize];
                if *cell != NO_EDGE {
                    return bad(format!("half-edge {}:{} is used by edges {} and {e}", h.vertex, h.slot, *cell / 2));
                }
                *cell = 2 * e + end;
            }
        }
        let mut legs = vec![usize::MAX; vertices.iter().filter(|v| matches!(v, Vertex::Uni(_))).count()];
        for (v, kind) in vertices.iter().enumerate() {
            for s in 0..kind.valence() {
                if attach[v][s as usize] == NO_EDGE {
                    return bad(format!("half-edge {v}:{s} is not attached to any edge"));
                }
            }
            if let Vertex::Uni(label) = *kind {
                if label == 0 || label as usize > legs.len() {
                    return bad(format!("leg label {label} outside 1..={}", legs.len()));
                }
                if legs[label as usize - 1] != usize::MAX {
                    return bad(format!("leg label {label} used twice"));
                }
                legs[label as usize - 1] = v;
            }
        }
        let d = OpenJacobiDiagram { vertices, edges, attach, legs };
        if let Some(v) = d.component_without_leg() {
            return bad(format!("the component of vertex {v} has no univalent vertex"));
        }
        Ok(d)
    }

    fn component_without_leg(&self) -> Option<usize> {
        let n = self.vertices.len();
        let mut seen = vec![false; n];
        let mut stack: Vec<usize> = self.legs.clone();
        for &v in &stack {
            seen[v] = true;
        }
        while let Some(v) = stack.pop() {
            for s in 0..self.vertices[v].valence() {
                let w = self.other_end(HalfEdge::new(v, s)).vertex;
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().position(|&x| !x)
    }

    fn rebuild(vertices: Vec<Vertex>, edges: Vec<Edge>) -> Self {
        Self::new(vertices, edges).expect("local moves preserve validity")
    }

    /// The empty diagram (degree 0, no legs).
    pub fn empty() -> Self {
        Self::rebuild(Vec::new(), Vec::new())
    }

    /// A single edge between legs `a` and `b`, oriented `a -> b`. Labels must be `{1, 2}`.
    pub fn strut(a: u32, b: u32, bead: Word) -> Result<Self> {
        Self::new(
            vec![Vertex::Uni(a), Vertex::Uni(b)],
            vec![Edge::with_bead(HalfEdge::new(0, 0), HalfEdge::new(1, 0), bead)],
        )
    }

    /// Leg 1 attached to a trivalent vertex carrying a loop with bead `bead`.
    pub fn tadpole(bead: Word) -> Self {
        Self::rebuild(
            vec![Vertex::Uni(1), Vertex::Tri],
            vec![
                Edge::new(HalfEdge::new(0, 0), HalfEdge::new(1, 0)),
                Edge::with_bead(HalfEdge::new(1, 1), HalfEdge::new(1, 2), bead),
            ],
        )
    }

    /// Disjoint union; the legs of `other` are shifted past those of `self`.
    pub fn disjoint_union(&self, other: &Self) -> Self {
        let shift = self.vertices.len();
        let lshift = self.num_legs() as u32;
        let mut vertices = self.vertices.clone();
        vertices.extend(other.vertices.iter().map(|v| match *v {
            Vertex::Uni(l) => Vertex::Uni(l + lshift),
            Vertex::Tri => Vertex::Tri,
        }));
        let mut edges = self.edges.clone();
        let mv = |h: HalfEdge| HalfEdge::new(h.vertex + shift, h.slot);
        edges.extend(other.edges.iter().map(|e| Edge { from: mv(e.from), to: mv(e.to), beads: e.beads.clone() }));
        Self::rebuild(vertices, edges)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn into_parts(self) -> (Vec<Vertex>, Vec<Edge>) {
        (self.vertices, self.edges)
    }

    pub fn num_legs(&self) -> usize {
        self.legs.len()
    }

    pub fn num_trivalent(&self) -> usize {
        self.vertices.len() - self.legs.len()
    }

    pub fn degree(&self) -> usize {
        self.vertices.len() / 2
    }

    /// The univalent vertex carrying `label`.
    pub fn leg_vertex(&self, label: u32) -> usize {
        self.legs[label as usize - 1]
    }

    /// The edge attached at `h` and which end of it (`0` = from, `1` = to).
    pub fn edge_at(&self, h: HalfEdge) -> (usize, usize) {
        let code = self.attach[h.vertex][h.slot as usize];
        (code / 2, code % 2)
    }

    pub fn other_end(&self, h: HalfEdge) -> HalfEdge {
        let (e, end) = self.edge_at(h);
        let edge = &self.edges[e];
        if end == 0 {
            edge.to
        } else {
            edge.from
        }
    }

    /// Merges the beads on every edge into one and drops identities.
    pub fn normalize_beads(&self) -> Self {
        let edges = self
            .edges
            .iter()
            .map(|e| Edge::with_bead(e.from, e.to, e.holonomy()))
            .collect();
        Self::rebuild(self.vertices.clone(), edges)
    }

    /// Gauge transformation at a trivalent vertex; an equivalence of diagrams.
    pub fn gauge_at_vertex(&self, v: usize, g: &Word) -> Result<Self> {
        if self.vertices.get(v) != Some(&Vertex::Tri) {
            return Err(Error::NotTrivalent(v));
        }
        Ok(self.gauge_any(v, g))
    }

    /// Gauge at any vertex. At a univalent vertex this is not an equivalence of
    /// open diagrams; it models an attachment point sliding past an arc bead.
    pub(crate) fn gauge_any(&self, v: usize, g: &Word) -> Self {
        if g.is_identity() {
            return self.clone();
        }
        let mut edges = self.edges.clone();
        for e in edges.iter_mut() {
            if e.from.vertex == v {
                e.beads.insert(0, g.inv());
            }
            if e.to.vertex == v {
                e.beads.push(g.clone());
            }
        }
        Self::rebuild(self.vertices.clone(), edges)
    }

    /// Reverses an edge, inverting and reversing its beads; an equivalence.
    pub fn reverse_edge(&self, e: usize) -> Self {
        let mut edges = self.edges.clone();
        let edge = &mut edges[e];
        std::mem::swap(&mut edge.from, &mut edge.to);
        edge.beads = edge.beads.iter().rev().map(Word::inv).collect();
        Self::rebuild(self.vertices.clone(), edges)
    }

    fn remap_slots(&self, v: usize, map: [u8; 3]) -> Self {
        let mut edges = self.edges.clone();
        for e in edges.iter_mut() {
            for h in [&mut e.from, &mut e.to] {
                if h.vertex == v {
                    h.slot = map[h.slot as usize];
                }
            }
        }
        Self::rebuild(self.vertices.clone(), edges)
    }

    /// Swaps slots 1 and 2 at `v`. By AS the result equals the negative of `self`.
    pub fn as_swap(&self, v: usize) -> Result<Self> {
        if self.vertices.get(v) != Some(&Vertex::Tri) {
            return Err(Error::NotTrivalent(v));
        }
        Ok(self.remap_slots(v, [0, 2, 1]))
    }

    /// Rotates the slot numbering at `v`; the cyclic order, hence the diagram, is unchanged.
    pub fn rotate_slots(&self, v: usize) -> Result<Self> {
        if self.vertices.get(v) != Some(&Vertex::Tri) {
            return Err(Error::NotTrivalent(v));
        }
        Ok(self.remap_slots(v, [1, 2, 0]))
    }

    /// Renumbers vertices: old vertex `v` becomes `perm[v]`.
    pub fn renumber_vertices(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm)?;
        if perm.len() != self.vertices.len() {
            return Err(Error::ArityMismatch { expected: self.vertices.len(), found: perm.len() });
        }
        let mut vertices = self.vertices.clone();
        for (v, &p) in perm.iter().enumerate() {
            vertices[p] = self.vertices[v];
        }
        let mv = |h: HalfEdge| HalfEdge::new(perm[h.vertex], h.slot);
        let edges = self.edges.iter().map(|e| Edge { from: mv(e.from), to: mv(e.to), beads: e.beads.clone() }).collect();
        Ok(Self::rebuild(vertices, edges))
    }

    /// Reorders the edge list: old edge `e` moves to position `perm[e]`.
    pub fn permute_edges(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm)?;
        if perm.len() != self.edges.len() {
            return Err(Error::ArityMismatch { expected: self.edges.len(), found: perm.len() });
        }
        let mut edges = self.edges.clone();
        for (e, &p) in perm.iter().enumerate() {
            edges[p] = self.edges[e].clone();
        }
        Ok(Self::rebuild(self.vertices.clone(), edges))
    }

    /// Replaces the bead list of one edge. Equivalence holds iff the holonomy is kept.
    pub fn with_edge_beads(&self, e: usize, beads: Vec<Word>) -> Self {
        let mut edges = self.edges.clone();
        edges[e].beads = beads;
        Self::rebuild(self.vertices.clone(), edges)
    }

    /// Relabels legs: label `l` becomes `sigma[l - 1]`.
    pub fn relabel_legs(&self, sigma: &[u32]) -> Result<Self> {
        if sigma.len() != self.num_legs() {
            return Err(Error::ArityMismatch { expected: self.num_legs(), found: sigma.len() });
        }
        let perm: Vec<usize> = sigma.iter().map(|&s| s as usize).collect();
        if perm.contains(&0) {
            return Err(Error::Precondition("labels start at 1".into()));
        }
        check_permutation(&perm.iter().map(|s| s - 1).collect::<Vec<_>>())?;
        let vertices = self
            .vertices
            .iter()
            .map(|v| match *v {
                Vertex::Uni(l) => Vertex::Uni(sigma[l as usize - 1]),
                Vertex::Tri => Vertex::Tri,
            })
            .collect();
        Ok(Self::rebuild(vertices, self.edges.clone()))
    }

    /// Glues legs along left-normed trees.
    ///
    /// `fibers` partitions the labels `1..=m`; fiber `t` becomes the single leg `t + 1`.
    /// A fiber `(a1, a2, .., aj)` with `j >= 2` is joined by a comb of `j - 1` new
    /// trivalent vertices; each has cyclic order (left input, right input, output),
    /// the first one taking the edges formerly at `a1` and `a2`. Reattached edges keep
    /// their beads and orientation; new edges carry no bead.
    pub fn glue_forest(&self, fibers: &[Vec<u32>]) -> Result<Self> {
        let m = self.num_legs();
        let mut seen = vec![false; m];
        for &l in fibers.iter().flatten() {
            if l == 0 || l as usize > m || std::mem::replace(&mut seen[l as usize - 1], true) {
                return Err(Error::Precondition(format!("fibers do not partition the labels 1..={m}")));
            }
        }
        if seen.iter().any(|&s| !s) || fibers.iter().any(|f| f.is_empty()) {
            return Err(Error::Precondition(format!("fibers do not partition the labels 1..={m}")));
        }
        let mut vertices: Vec<Vertex> = self.vertices.clone();
        let mut edges = self.edges.clone();
        // Where the edge formerly attached at each leg's half-edge now ends.
        let mut redirect: Vec<Option<HalfEdge>> = vec![None; self.vertices.len()];
        let mut removed = vec![false; self.vertices.len()];
        for (t, fiber) in fibers.iter().enumerate() {
            let target = t as u32 + 1;
            if fiber.len() == 1 {
                vertices[self.leg_vertex(fiber[0])] = Vertex::Uni(target);
                continue;
            }
            let mut previous_out: Option<HalfEdge> = None;
            for (k, &label) in fiber.iter().enumerate().skip(1) {
                let node = vertices.len();
                vertices.push(Vertex::Tri);
                match previous_out {
                    None => {
                        let first = self.leg_vertex(fiber[0]);
                        redirect[first] = Some(HalfEdge::new(node, 0));
                        removed[first] = true;
                    }
                    Some(out) => edges.push(Edge::new(out, HalfEdge::new(node, 0))),
                }
                let leg = self.leg_vertex(label);
                redirect[leg] = Some(HalfEdge::new(node, 1));
                removed[leg] = true;
                previous_out = Some(HalfEdge::new(node, 2));
                if k == fiber.len() - 1 {
                    let uni = vertices.len();
                    vertices.push(Vertex::Uni(target));
                    edges.push(Edge::new(HalfEdge::new(node, 2), HalfEdge::new(uni, 0)));
                }
            }
        }
        for e in edges.iter_mut().take(self.edges.len()) {
            for h in [&mut e.from, &mut e.to] {
                if let Some(r) = redirect[h.vertex] {
                    *h = r;
                }
            }
        }
        // Drop the glued univalent vertices and compact indices.
        let mut new_index = vec![usize::MAX; vertices.len()];
        let mut kept = Vec::new();
        for (v, kind) in vertices.into_iter().enumerate() {
            if v < removed.len() && removed[v] {
                continue;
            }
            new_index[v] = kept.len();
            kept.push(kind);
        }
        for e in edges.iter_mut() {
            e.from.vertex = new_index[e.from.vertex];
            e.to.vertex = new_index[e.to.vertex];
        }
        Self::new(kept, edges)
    }

    pub fn canonicalize(&self) -> Canonical {
        canonical::canonicalize(self)
    }

    /// The class of this diagram as a combination of canonical diagrams.
    pub fn to_vector<F: Field>(&self) -> SparseVector<CanonicalDiagram, F> {
        match self.canonicalize() {
            Canonical::Zero => SparseVector::zero(),
            Canonical::Nonzero { diagram, sign } => SparseVector::term(diagram, F::from_int(sign as i64)),
        }
    }
}

pub(crate) fn check_permutation(perm: &[usize]) -> Result<()> {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || std::mem::replace(&mut seen[p], true) {
            return Err(Error::Precondition(format!("{perm:?} is not a permutation")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn tripod() -> OpenJacobiDiagram {
        OpenJacobiDiagram::new(
            vec![Vertex::Uni(1), Vertex::Uni(2), Vertex::Uni(3), Vertex::Tri],
            vec![
                Edge::with_bead(HalfEdge::new(0, 0), HalfEdge::new(3, 0), w("x1")),
                Edge::with_bead(HalfEdge::new(1, 0), HalfEdge::new(3, 1), w("x2")),
                Edge::with_bead(HalfEdge::new(2, 0), HalfEdge::new(3, 2), w("x3")),
            ],
        )
        .unwrap()
    }

    #[test]
    fn validation_rejects_bad_input() {
        let closed = OpenJacobiDiagram::new(
            vec![Vertex::Uni(1), Vertex::Uni(2), Vertex::Tri, Vertex::Tri],
            vec![
                Edge::new(HalfEdge::new(0, 0), HalfEdge::new(1, 0)),
                Edge::new(HalfEdge::new(2, 0), HalfEdge::new(3, 0)),
                Edge::new(HalfEdge::new(2, 1), HalfEdge::new(3, 1)),
                Edge::new(HalfEdge::new(2, 2), HalfEdge::new(3, 2)),
            ],
        );
        assert!(matches!(closed, Err(Error::InvalidDiagram(m)) if m.contains("no univalent")));
        let dup = OpenJacobiDiagram::new(
            vec![Vertex::Uni(1), Vertex::Uni(1)],
            vec![Edge::new(HalfEdge::new(0, 0), HalfEdge::new(1, 0))],
        );
        assert!(matches!(dup, Err(Error::InvalidDiagram(m)) if m.contains("used twice")));
        let dangling = OpenJacobiDiagram::new(vec![Vertex::Uni(1), Vertex::Uni(2)], vec![]);
        assert!(matches!(dangling, Err(Error::InvalidDiagram(m)) if m.contains("not attached")));
    }

    #[test]
    fn push_through_vertex_matches_the_move() {
        // Bead w entering the vertex moves onto both leaving edges.
        let d = OpenJacobiDiagram::new(
            vec![Vertex::Uni(1), Vertex::Uni(2), Vertex::Uni(3), Vertex::Tri],
            vec![
                Edge::with_bead(HalfEdge::new(0, 0), HalfEdge::new(3, 0), w("x1")),
                Edge::new(HalfEdge::new(3, 1), HalfEdge::new(1, 0)),
                Edge::new(HalfEdge::new(3, 2), HalfEdge::new(2, 0)),
            ],
        )
        .unwrap();
        let moved = d.gauge_at_vertex(3, &w("x1^-1")).unwrap().normalize_beads();
        let hol: Vec<Word> = moved.edges().iter().map(Edge::holonomy).collect();
        assert_eq!(hol, vec![Word::identity(), w("x1"), w("x1")]);
        assert_eq!(moved.canonicalize(), d.canonicalize());
    }

    #[test]
    fn gauge_identity_and_inverse() {
        let d = tripod();
        assert_eq!(d.gauge_at_vertex(3, &Word::identity()).unwrap(), d);
        let g = w("x1*x2^-1");
        let back = d.gauge_at_vertex(3, &g).unwrap().gauge_at_vertex(3, &g.inv()).unwrap();
        assert_eq!(back.normalize_beads(), d.normalize_beads());
        let strut = OpenJacobiDiagram::strut(1, 2, w("x1")).unwrap();
        assert_eq!(strut.gauge_at_vertex(0, &g), Err(Error::NotTrivalent(0)));
    }

    #[test]
    fn normalize_merges_and_drops() {
        let d = OpenJacobiDiagram::strut(1, 2, Word::identity()).unwrap().with_edge_beads(0, vec![w("x1"), w("x2")]);
        assert_eq!(d.normalize_beads().edges()[0].beads, vec![w("x1*x2")]);
        let d = d.with_edge_beads(0, vec![Word::identity()]);
        assert!(d.normalize_beads().edges()[0].beads.is_empty());
        let r = OpenJacobiDiagram::strut(1, 2, w("x1")).unwrap().reverse_edge(0);
        assert_eq!(r.edges()[0].beads, vec![w("x1^-1")]);
    }

    #[test]
    fn glue_forest_builds_combs() {
        let d = OpenJacobiDiagram::strut(1, 2, w("x1")).unwrap();
        let t = d.glue_forest(&[vec![1, 2]]).unwrap();
        assert_eq!(t.num_legs(), 1);
        assert_eq!(t.num_trivalent(), 1);
        assert_eq!(t.degree(), 1);
        let four = d.disjoint_union(&d);
        let comb = four.glue_forest(&[vec![1, 3, 4], vec![2]]).unwrap();
        assert_eq!((comb.num_legs(), comb.num_trivalent()), (2, 2));
        assert!(four.glue_forest(&[vec![1, 2], vec![2, 3, 4]]).is_err());
    }
}

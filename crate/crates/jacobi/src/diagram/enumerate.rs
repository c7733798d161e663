//! Exhaustive enumeration of labelled uni-trivalent diagrams.

use std::collections::BTreeSet;

use super::canonical::minimal_encoding;
use super::{Canonical, CanonicalDiagram, Edge, HalfEdge, OpenJacobiDiagram, Vertex};
use crate::freegroup::{BeadAlphabet, Word};

/// Half-edge matching search. Legs are vertices `0..m`, trivalent vertices follow.
struct Matcher {
    m: usize,
    t: usize,
    used: Vec<[bool; 3]>,
    pairs: Vec<(HalfEdge, HalfEdge)>,
    keep_zero: bool,
    out: BTreeSet<CanonicalDiagram>,
}

impl Matcher {
    fn valence(&self, v: usize) -> u8 {
        if v < self.m {
            1
        } else {
            3
        }
    }

    fn first_free(&self) -> Option<HalfEdge> {
        (0..self.m + self.t).find_map(|v| (0..self.valence(v)).find(|&s| !self.used[v][s as usize]).map(|s| HalfEdge::new(v, s)))
    }

    fn used_count(&self, v: usize) -> usize {
        self.used[v].iter().filter(|&&u| u).count()
    }

    /// Partners for `h`, one per class of interchangeable choices.
    fn candidates(&self, h: HalfEdge) -> Vec<HalfEdge> {
        let mut out = Vec::new();
        let mut fresh_taken = false;
        for v in 0..self.m + self.t {
            if v < self.m {
                if !self.used[v][0] && v != h.vertex {
                    out.push(HalfEdge::new(v, 0));
                }
                continue;
            }
            let free: Vec<u8> = (0..3).filter(|&s| !self.used[v][s as usize] && !(v == h.vertex && s == h.slot)).collect();
            if free.is_empty() {
                continue;
            }
            if self.used_count(v) == 0 {
                // Untouched trivalent vertices are interchangeable, as are their slots.
                if !fresh_taken {
                    fresh_taken = true;
                    out.push(HalfEdge::new(v, 0));
                }
            } else {
                // The two remaining slots differ only by orientation, i.e. by a sign.
                if self.used_count(v) == 1 && free.len() == 2 {
                    out.push(HalfEdge::new(v, free[0]));
                } else {
                    out.extend(free.iter().map(|&s| HalfEdge::new(v, s)));
                }
            }
        }
        out
    }

    fn search(&mut self) {
        let Some(h) = self.first_free() else {
            self.emit();
            return;
        };
        self.used[h.vertex][h.slot as usize] = true;
        for p in self.candidates(h) {
            self.used[p.vertex][p.slot as usize] = true;
            self.pairs.push((h, p));
            self.search();
            self.pairs.pop();
            self.used[p.vertex][p.slot as usize] = false;
        }
        self.used[h.vertex][h.slot as usize] = false;
    }

    fn emit(&mut self) {
        let vertices: Vec<Vertex> =
            (0..self.m).map(|i| Vertex::Uni(i as u32 + 1)).chain((0..self.t).map(|_| Vertex::Tri)).collect();
        let edges = self.pairs.iter().map(|&(a, b)| Edge::new(a, b)).collect();
        if let Ok(d) = OpenJacobiDiagram::new(vertices, edges) {
            let (diagram, sign) = minimal_encoding(&d);
            if sign.is_some() || self.keep_zero {
                self.out.insert(diagram);
            }
        }
    }
}

/// Unbeaded degree-`d` diagrams with `m` legs, AS-vanishing ones excluded.
pub fn enumerate_structures(d: usize, m: usize) -> Vec<CanonicalDiagram> {
    structures(d, m, false)
}

fn structures(d: usize, m: usize, keep_zero: bool) -> Vec<CanonicalDiagram> {
    if m > 2 * d || (m == 0 && d > 0) {
        return Vec::new();
    }
    let t = 2 * d - m;
    let mut matcher = Matcher { m, t, used: vec![[false; 3]; m + t], pairs: Vec::new(), keep_zero, out: BTreeSet::new() };
    matcher.search();
    matcher.out.into_iter().collect()
}

/// Degree-`d`, `m`-legged diagrams whose canonical beads all lie in `beads`.
pub fn enumerate_diagrams(d: usize, m: usize, beads: &BeadAlphabet) -> Vec<CanonicalDiagram> {
    if beads.is_trivial() {
        return enumerate_structures(d, m);
    }
    // Beads can break the symmetry that makes a bare structure vanish.
    let structures = structures(d, m, true);
    let mut out = BTreeSet::new();
    for s in &structures {
        let base = s.to_diagram();
        let n_edges = base.edges().len();
        let mut choice = vec![0usize; n_edges];
        loop {
            let (vertices, mut edges) = base.clone().into_parts();
            for (e, &c) in edges.iter_mut().zip(&choice) {
                let b: &Word = &beads.elements[c];
                e.beads = if b.is_identity() { Vec::new() } else { vec![b.clone()] };
            }
            let d = OpenJacobiDiagram::new(vertices, edges).expect("same structure");
            if let Canonical::Nonzero { diagram, .. } = d.canonicalize() {
                if diagram.beads().all(|b| beads.contains(b)) {
                    out.insert(diagram);
                }
            }
            // Odometer over bead assignments.
            let mut i = 0;
            while i < n_edges {
                choice[i] += 1;
                if choice[i] < beads.len() {
                    break;
                }
                choice[i] = 0;
                i += 1;
            }
            if i == n_edges {
                break;
            }
        }
    }
    out.into_iter().collect()
}

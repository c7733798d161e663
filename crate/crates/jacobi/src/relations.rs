//! IHX relations, relation closure, and the quotient spaces `J_d(m)`.
//!
//! AS is already folded into canonical signs, so IHX is the only relation stored.
//! At an internal edge `e` joining `u = (e, A, B)` and `v = (e, C, D)` (cyclic
//! orders), with the bead of `e` gauged away, the relation is the Jacobi sum
//!
//! ```text
//!   (u: e,A,B  v: e,C,D) + (u: e,B,C  v: e,A,D) + (u: e,C,A  v: e,B,D) = 0
//! ```
//!
//! which is `I - H + X = 0` once the middle term is written with the opposite
//! orientation at `u`.

use std::collections::{BTreeSet, VecDeque};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::diagram::{enumerate_diagrams, CanonicalDiagram, Edge, HalfEdge, OpenJacobiDiagram};
use crate::error::{Error, Result};
use crate::freegroup::BeadAlphabet;
use crate::linalg::{EchelonBasis, Field, SparseVector};
use crate::{DiagramVector, Rational};

/// Closures larger than this are reported as errors rather than computed.
pub const DEFAULT_CLOSURE_LIMIT: usize = 250_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationInstance<F: Field = Rational> {
    /// Index of the internal edge in the canonical diagram.
    pub site: usize,
    pub terms: DiagramVector<F>,
}

fn rewire(d: &OpenJacobiDiagram, map: &[(HalfEdge, HalfEdge)]) -> OpenJacobiDiagram {
    let (vertices, mut edges) = d.clone().into_parts();
    for e in edges.iter_mut() {
        for h in [&mut e.from, &mut e.to] {
            if let Some(&(_, to)) = map.iter().find(|(from, _)| from == h) {
                *h = to;
            }
        }
    }
    OpenJacobiDiagram::new(vertices, edges).expect("rewiring keeps the graph connected to its legs")
}

/// The three local resolutions at an internal edge of `d`, bead already cleared.
fn ihx_terms(d: &OpenJacobiDiagram, e: usize) -> [OpenJacobiDiagram; 3] {
    let Edge { from, to, .. } = d.edges()[e].clone();
    let (u, su) = (from.vertex, from.slot);
    let (v, sv) = (to.vertex, to.slot);
    let at = |x: usize, s: u8| HalfEdge::new(x, s % 3);
    let (a, b) = (at(u, su + 1), at(u, su + 2));
    let (c, dd) = (at(v, sv + 1), at(v, sv + 2));
    let _ = dd;
    let t2 = rewire(d, &[(b, a), (c, b), (a, c)]);
    let t3 = rewire(d, &[(c, a), (a, b), (b, c)]);
    [d.clone(), t2, t3]
}

/// One relation per internal edge, each term re-canonicalized.
pub fn ihx_relations<F: Field>(c: &CanonicalDiagram) -> Vec<RelationInstance<F>> {
    let rep = c.to_diagram();
    let mut out = Vec::new();
    for site in c.internal_edges() {
        let edge = &rep.edges()[site];
        let hol = edge.holonomy();
        let cleared = if hol.is_identity() {
            rep.clone()
        } else {
            rep.gauge_at_vertex(edge.to.vertex, &hol.inv()).expect("internal edges end at trivalent vertices").normalize_beads()
        };
        let mut terms = DiagramVector::<F>::zero();
        for t in ihx_terms(&cleared, site) {
            terms.add(&t.to_vector());
        }
        if !terms.is_zero() {
            out.push(RelationInstance { site, terms });
        }
    }
    out
}

/// A closed spanning set and the relations found while closing it.
pub(crate) type Closure<K, F> = (Vec<K>, Vec<SparseVector<K, F>>);

/// Smallest superset of `seeds` closed under relation neighbours, with every
/// relation generated along the way.
pub(crate) fn close<K: Ord + Clone, F: Field>(
    seeds: impl IntoIterator<Item = K>,
    limit: usize,
    mut relations_of: impl FnMut(&K) -> Vec<SparseVector<K, F>>,
) -> Result<Closure<K, F>> {
    let mut seen: BTreeSet<K> = BTreeSet::new();
    let mut queue: VecDeque<K> = VecDeque::new();
    for s in seeds {
        if seen.insert(s.clone()) {
            queue.push_back(s);
        }
    }
    let mut relations = Vec::new();
    while let Some(k) = queue.pop_front() {
        for r in relations_of(&k) {
            for key in r.keys() {
                if !seen.contains(key) {
                    if seen.len() >= limit {
                        return Err(Error::ClosureLimit(limit));
                    }
                    seen.insert(key.clone());
                    queue.push_back(key.clone());
                }
            }
            relations.push(r);
        }
    }
    Ok((seen.into_iter().collect(), relations))
}

/// IHX closure of a seed set.
pub fn closure(seeds: &[CanonicalDiagram]) -> Result<Vec<CanonicalDiagram>> {
    close(seeds.iter().cloned(), DEFAULT_CLOSURE_LIMIT, |c| {
        ihx_relations::<Rational>(c).into_iter().map(|r| r.terms).collect()
    })
    .map(|(members, _)| members)
}

/// A truncated `J_d(m)`: a relation-closed spanning set and its IHX relations.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Serialize", deserialize = "F: DeserializeOwned"))]
pub struct JSpace<F: Field = Rational> {
    pub d: usize,
    pub m: usize,
    pub alphabet: String,
    span: Vec<CanonicalDiagram>,
    relations: Vec<DiagramVector<F>>,
    echelon: EchelonBasis<CanonicalDiagram, F>,
}

impl<F: Field> JSpace<F> {
    pub fn from_seeds(d: usize, m: usize, alphabet: &str, seeds: impl IntoIterator<Item = CanonicalDiagram>) -> Result<Self> {
        let seeds: Vec<CanonicalDiagram> = seeds.into_iter().collect();
        if let Some(bad) = seeds.iter().find(|c| c.degree() != d || c.num_legs() != m) {
            return Err(Error::Precondition(format!(
                "seed of degree {} with {} legs in J_{d}({m})",
                bad.degree(),
                bad.num_legs()
            )));
        }
        let (span, relations) = close(seeds, DEFAULT_CLOSURE_LIMIT, |c| {
            ihx_relations::<F>(c).into_iter().map(|r| r.terms).collect()
        })?;
        let mut echelon = EchelonBasis::new();
        for r in &relations {
            echelon.insert(r);
        }
        Ok(JSpace { d, m, alphabet: alphabet.to_string(), span, relations, echelon })
    }

    pub fn dim(&self) -> usize {
        self.span.len() - self.echelon.rank()
    }

    pub fn span(&self) -> &[CanonicalDiagram] {
        &self.span
    }

    pub fn relations(&self) -> &[DiagramVector<F>] {
        &self.relations
    }

    pub fn relation_rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn contains(&self, c: &CanonicalDiagram) -> bool {
        self.span.binary_search(c).is_ok()
    }

    /// Normal form modulo relations, supported on [`Self::quotient_basis`].
    pub fn reduce(&self, v: &DiagramVector<F>) -> Result<DiagramVector<F>> {
        if v.keys().any(|k| !self.contains(k)) {
            return Err(Error::RelationOutsideSpan);
        }
        Ok(self.echelon.reduce(v))
    }

    /// Spanning diagrams that are not pivots; their classes form a basis.
    pub fn quotient_basis(&self) -> Vec<&CanonicalDiagram> {
        self.span.iter().filter(|c| !self.echelon.is_pivot(c)).collect()
    }
}

/// `J_d(m)` spanned by the closure of the enumerated diagrams with beads in `beads`.
pub fn j_space(d: usize, m: usize, beads: &BeadAlphabet) -> Result<JSpace> {
    JSpace::from_seeds(d, m, &beads.label, enumerate_diagrams(d, m, beads))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Canonical, Vertex};
    use crate::linalg::quotient_dim;

    fn h_diagram() -> OpenJacobiDiagram {
        OpenJacobiDiagram::new(
            vec![Vertex::Uni(1), Vertex::Uni(2), Vertex::Uni(3), Vertex::Uni(4), Vertex::Tri, Vertex::Tri],
            vec![
                Edge::new(HalfEdge::new(4, 0), HalfEdge::new(5, 0)),
                Edge::new(HalfEdge::new(4, 1), HalfEdge::new(0, 0)),
                Edge::new(HalfEdge::new(4, 2), HalfEdge::new(1, 0)),
                Edge::new(HalfEdge::new(5, 1), HalfEdge::new(2, 0)),
                Edge::new(HalfEdge::new(5, 2), HalfEdge::new(3, 0)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn strut_has_no_relation() {
        let Canonical::Nonzero { diagram, .. } = OpenJacobiDiagram::strut(1, 2, Default::default()).unwrap().canonicalize() else {
            panic!()
        };
        assert!(ihx_relations::<Rational>(&diagram).is_empty());
    }

    #[test]
    fn h_shape_relation_has_three_trees() {
        let Canonical::Nonzero { diagram, .. } = h_diagram().canonicalize() else { panic!() };
        let rels = ihx_relations::<Rational>(&diagram);
        assert_eq!(rels.len(), 1);
        let terms = &rels[0].terms;
        assert_eq!(terms.len(), 3);
        // The three trees pair the legs as 12|34, 13|24 (via the swap), 14|23.
        let pairings: BTreeSet<Vec<u32>> = terms
            .keys()
            .map(|c| {
                let rep = c.to_diagram();
                let mut near: Vec<u32> = Vec::new();
                for l in 1..=4u32 {
                    let v = rep.other_end(HalfEdge::new(rep.leg_vertex(l), 0)).vertex;
                    near.push(v as u32);
                }
                let first = near[0];
                near.iter().map(|&x| u32::from(x == first)).collect()
            })
            .collect();
        assert_eq!(pairings.len(), 3);
    }

    #[test]
    fn applying_the_relation_at_a_term_stays_in_the_span() {
        let Canonical::Nonzero { diagram, .. } = h_diagram().canonicalize() else { panic!() };
        let first = ihx_relations::<Rational>(&diagram)[0].terms.clone();
        let b = crate::linalg::echelonize(vec![first.clone()]);
        for c in first.keys() {
            for r in ihx_relations::<Rational>(c) {
                assert!(b.contains(&r.terms));
            }
        }
    }

    #[test]
    fn small_spaces() {
        let t = BeadAlphabet::trivial();
        assert_eq!(j_space(1, 2, &t).unwrap().dim(), 1);
        assert_eq!(j_space(1, 1, &t).unwrap().dim(), 0);
        assert_eq!(j_space(2, 4, &t).unwrap().dim(), 3);
        assert_eq!(j_space(1, 1, &BeadAlphabet::generated(1, 1)).unwrap().dim(), 1);
        for m in 5..=6 {
            assert_eq!(j_space(2, m, &t).unwrap().dim(), 0);
        }
    }

    #[test]
    fn closure_examples() {
        assert!(closure(&[]).unwrap().is_empty());
        let struts = enumerate_diagrams(2, 4, &BeadAlphabet::trivial());
        let struts: Vec<_> = struts.into_iter().filter(|c| c.num_trivalent() == 0).collect();
        assert_eq!(closure(&struts).unwrap(), struts);
    }

    #[test]
    fn dimension_matches_quotient_dim_and_is_seed_stable() {
        let t = BeadAlphabet::trivial();
        for (d, m) in [(2, 2), (2, 3), (3, 4)] {
            let s = j_space(d, m, &t).unwrap();
            let units: Vec<DiagramVector> = s.span().iter().cloned().map(SparseVector::unit).collect();
            assert_eq!(quotient_dim(&units, s.relations()).unwrap(), s.dim());
            let one = JSpace::<Rational>::from_seeds(d, m, "trivial", s.span()[..1].to_vec()).unwrap();
            let again = JSpace::<Rational>::from_seeds(d, m, "trivial", one.span().to_vec()).unwrap();
            assert_eq!(one.dim(), again.dim());
        }
    }

    #[test]
    fn two_leg_bubble_space() {
        // Known values: J_2(2) is spanned by the 2-wheel, J_2(3) by the sign representation.
        let t = BeadAlphabet::trivial();
        assert_eq!(j_space(2, 2, &t).unwrap().dim(), 1);
        assert_eq!(j_space(2, 3, &t).unwrap().dim(), 1);
        assert_eq!(j_space(2, 1, &t).unwrap().dim(), 0);
    }
}

//! Jacobi diagrams on the oriented arcs `X_m`.
//!
//! An attachment point behaves like a vertex for the gauge convention of
//! [`crate::diagram`], with the leg oriented away from the arc: moving a bead `w`
//! from just after a leg to just before it changes the leg bead `y` to `w⁻¹·y`.
//! The normal form pushes every arc bead to the start of its arc, so an arc is
//! described by its holonomy and its number of legs, and the legs are labelled
//! `1..c` in reading order (arc 1 first).
//!
//! STU at adjacent legs `p` before `q` on one arc reads `T - U = S`, where `U`
//! swaps the two legs and `S` joins them at a new vertex with cyclic order
//! (edge from `p`, edge from `q`, new leg), the new leg taking their place.

mod cross;
mod gr;
mod laws;
mod space;

pub use cross::{cross_effect, cross_effect_dim, epsilon_embed, nonpoly_witness, CrossEffect, FunctorKind, FunctorSpec, NonpolyWitness};
pub use gr::{apply_hom, compose_homs, gr_act, GrGenerator};
pub use laws::{gr_laws, homotopy_invariance, hopf_axioms};
pub use space::{a_space, enumerate_arc_diagrams, AParams, ASpace};

use serde::{Deserialize, Serialize};

use crate::diagram::{Canonical, CanonicalDiagram, OpenJacobiDiagram};
use crate::error::{Error, Result};
use crate::freegroup::Word;
use crate::linalg::{Field, SparseVector};
use crate::relations::ihx_relations;
use crate::Rational;

pub type ArcVector<F = Rational> = SparseVector<CanonicalArcDiagram, F>;

/// Products of arc beads, one per arc.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HomotopyClass(pub Vec<Word>);

impl HomotopyClass {
    pub fn is_trivial(&self) -> bool {
        self.0.iter().all(Word::is_identity)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ArcItem {
    Bead(Word),
    /// Attachment of the univalent vertex with this label.
    Leg(u32),
}

/// Arc diagram with beads and attachment points interleaved freely.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawArcDiagram {
    arcs: Vec<Vec<ArcItem>>,
    jacobi: OpenJacobiDiagram,
}

impl RawArcDiagram {
    pub fn new(arcs: Vec<Vec<ArcItem>>, jacobi: OpenJacobiDiagram) -> Result<Self> {
        let mut seen = vec![false; jacobi.num_legs()];
        for item in arcs.iter().flatten() {
            if let ArcItem::Leg(l) = *item {
                if l == 0 || l as usize > seen.len() || std::mem::replace(&mut seen[l as usize - 1], true) {
                    return Err(Error::InvalidDiagram(format!("leg {l} is not attached exactly once")));
                }
            }
        }
        if let Some(l) = seen.iter().position(|&s| !s) {
            return Err(Error::InvalidDiagram(format!("leg {} is not attached to any arc", l + 1)));
        }
        Ok(RawArcDiagram { arcs, jacobi })
    }

    pub fn arcs(&self) -> &[Vec<ArcItem>] {
        &self.arcs
    }

    pub fn jacobi(&self) -> &OpenJacobiDiagram {
        &self.jacobi
    }

    pub fn homotopy_class(&self) -> HomotopyClass {
        HomotopyClass(
            self.arcs
                .iter()
                .map(|arc| {
                    arc.iter().fold(Word::identity(), |acc, it| match it {
                        ArcItem::Bead(b) => acc.mul(b),
                        ArcItem::Leg(_) => acc,
                    })
                })
                .collect(),
        )
    }

    /// Pushes every arc bead to the start of its arc and relabels legs in reading order.
    pub fn normalize(&self) -> ArcDiagram {
        let mut jacobi = self.jacobi.clone();
        let mut holonomies = Vec::with_capacity(self.arcs.len());
        let mut legs = Vec::with_capacity(self.arcs.len());
        let mut reading: Vec<u32> = Vec::new();
        for arc in &self.arcs {
            let mut acc = Word::identity();
            for item in arc.iter().rev() {
                match item {
                    ArcItem::Bead(b) => acc = b.mul(&acc),
                    ArcItem::Leg(l) => jacobi = jacobi.gauge_any(jacobi.leg_vertex(*l), &acc),
                }
            }
            holonomies.push(acc);
            let on_arc: Vec<u32> = arc
                .iter()
                .filter_map(|it| match it {
                    ArcItem::Leg(l) => Some(*l),
                    ArcItem::Bead(_) => None,
                })
                .collect();
            legs.push(on_arc.len());
            reading.extend(on_arc);
        }
        let mut sigma = vec![0u32; reading.len()];
        for (pos, &l) in reading.iter().enumerate() {
            sigma[l as usize - 1] = pos as u32 + 1;
        }
        let jacobi = jacobi.relabel_legs(&sigma).expect("reading order is a permutation").normalize_beads();
        ArcDiagram { holonomies, legs, jacobi }
    }
}

/// Arc diagram in normal form: holonomy at the start of each arc, legs labelled in reading order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArcDiagram {
    holonomies: Vec<Word>,
    legs: Vec<usize>,
    jacobi: OpenJacobiDiagram,
}

impl ArcDiagram {
    pub fn new(holonomies: Vec<Word>, legs: Vec<usize>, jacobi: OpenJacobiDiagram) -> Result<Self> {
        if holonomies.len() != legs.len() {
            return Err(Error::ArityMismatch { expected: holonomies.len(), found: legs.len() });
        }
        let total: usize = legs.iter().sum();
        if total != jacobi.num_legs() {
            return Err(Error::ArityMismatch { expected: jacobi.num_legs(), found: total });
        }
        Ok(ArcDiagram { holonomies, legs, jacobi })
    }

    /// Arcs without legs.
    pub fn bare(holonomies: Vec<Word>) -> Self {
        let legs = vec![0; holonomies.len()];
        ArcDiagram { holonomies, legs, jacobi: OpenJacobiDiagram::empty() }
    }

    pub fn num_arcs(&self) -> usize {
        self.holonomies.len()
    }

    pub fn holonomies(&self) -> &[Word] {
        &self.holonomies
    }

    pub fn legs(&self) -> &[usize] {
        &self.legs
    }

    pub fn jacobi(&self) -> &OpenJacobiDiagram {
        &self.jacobi
    }

    pub fn homotopy_class(&self) -> HomotopyClass {
        HomotopyClass(self.holonomies.clone())
    }

    pub fn to_raw(&self) -> RawArcDiagram {
        let mut next = 1u32;
        let arcs = self
            .holonomies
            .iter()
            .zip(&self.legs)
            .map(|(h, &k)| {
                let mut items = vec![ArcItem::Bead(h.clone())];
                for _ in 0..k {
                    items.push(ArcItem::Leg(next));
                    next += 1;
                }
                items
            })
            .collect();
        RawArcDiagram { arcs, jacobi: self.jacobi.clone() }
    }

    pub fn canonicalize(&self) -> Option<(CanonicalArcDiagram, i8)> {
        match self.jacobi.canonicalize() {
            Canonical::Zero => None,
            Canonical::Nonzero { diagram, sign } => Some((
                CanonicalArcDiagram {
                    holonomies: self.holonomies.clone(),
                    legs: self.legs.iter().map(|&k| k as u32).collect(),
                    jacobi: diagram,
                },
                sign,
            )),
        }
    }

    pub fn to_vector<F: Field>(&self) -> ArcVector<F> {
        match self.canonicalize() {
            None => ArcVector::zero(),
            Some((c, sign)) => ArcVector::term(c, F::from_int(sign as i64)),
        }
    }
}

pub fn arc_canonicalize(d: &ArcDiagram) -> Option<(CanonicalArcDiagram, i8)> {
    d.canonicalize()
}

pub fn homotopy_class(d: &RawArcDiagram) -> HomotopyClass {
    d.homotopy_class()
}

/// Canonical arc diagram: the normal form with its open part canonicalized.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalArcDiagram {
    holonomies: Vec<Word>,
    legs: Vec<u32>,
    jacobi: CanonicalDiagram,
}

impl CanonicalArcDiagram {
    pub fn holonomies(&self) -> &[Word] {
        &self.holonomies
    }

    pub fn legs(&self) -> &[u32] {
        &self.legs
    }

    pub fn jacobi(&self) -> &CanonicalDiagram {
        &self.jacobi
    }

    pub fn num_arcs(&self) -> usize {
        self.legs.len()
    }

    pub fn num_trivalent(&self) -> usize {
        self.jacobi.num_trivalent()
    }

    pub fn degree(&self) -> usize {
        self.jacobi.degree()
    }

    pub fn homotopy_class(&self) -> HomotopyClass {
        HomotopyClass(self.holonomies.clone())
    }

    /// Arc `a` carries no legs and holonomy 1.
    pub fn is_bare(&self, a: usize) -> bool {
        self.legs[a] == 0 && self.holonomies[a].is_identity()
    }

    pub fn to_arc_diagram(&self) -> ArcDiagram {
        ArcDiagram {
            holonomies: self.holonomies.clone(),
            legs: self.legs.iter().map(|&k| k as usize).collect(),
            jacobi: self.jacobi.to_diagram(),
        }
    }

    fn with_jacobi(&self, legs: Vec<u32>, jacobi: CanonicalDiagram) -> Self {
        CanonicalArcDiagram { holonomies: self.holonomies.clone(), legs, jacobi }
    }

    fn lift<F: Field>(&self, legs: &[u32], v: &SparseVector<CanonicalDiagram, F>) -> ArcVector<F> {
        v.map_keys(|j| self.with_jacobi(legs.to_vec(), j.clone()))
    }
}

/// One relation `T - U - S` per pair of adjacent legs on an arc.
pub fn stu_relations<F: Field>(c: &CanonicalArcDiagram) -> Vec<ArcVector<F>> {
    let rep = c.jacobi.to_diagram();
    let total = rep.num_legs() as u32;
    let mut out = Vec::new();
    let mut start = 0u32;
    for (a, &k) in c.legs.iter().enumerate() {
        for p in start + 1..start + k {
            let mut swap: Vec<u32> = (1..=total).collect();
            swap.swap(p as usize - 1, p as usize);
            let u = rep.relabel_legs(&swap).expect("swap is a permutation").to_vector::<F>();
            let fibers: Vec<Vec<u32>> =
                (1..=total).filter(|&q| q != p + 1).map(|q| if q == p { vec![p, p + 1] } else { vec![q] }).collect();
            let s = rep.glue_forest(&fibers).expect("adjacent legs").to_vector::<F>();
            let mut merged = c.legs.clone();
            merged[a] -= 1;
            let mut rel = ArcVector::unit(c.clone());
            rel.sub(&c.lift(&c.legs, &u));
            rel.sub(&c.lift(&merged, &s));
            if !rel.is_zero() {
                out.push(rel);
            }
        }
        start += k;
    }
    out
}

/// IHX relations of the open part, arcs unchanged.
pub fn arc_ihx_relations<F: Field>(c: &CanonicalArcDiagram) -> Vec<ArcVector<F>> {
    ihx_relations::<F>(&c.jacobi).into_iter().map(|r| c.lift(&c.legs, &r.terms)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Edge, HalfEdge, Vertex};

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn strut() -> OpenJacobiDiagram {
        OpenJacobiDiagram::strut(1, 2, Word::identity()).unwrap()
    }

    #[test]
    fn beads_slide_to_the_start() {
        // x1 after the first leg of a strut across two arcs.
        let raw = RawArcDiagram::new(
            vec![vec![ArcItem::Leg(1), ArcItem::Bead(w("x1"))], vec![ArcItem::Leg(2)]],
            strut(),
        )
        .unwrap();
        let norm = raw.normalize();
        assert_eq!(norm.holonomies(), &[w("x1"), Word::identity()]);
        // The strut, oriented away from leg 1, now starts with x1^-1.
        assert_eq!(norm.jacobi().edges()[0].holonomy(), w("x1^-1"));
        assert_eq!(norm.homotopy_class(), raw.homotopy_class());
    }

    #[test]
    fn equivalent_placements_agree() {
        // Bead before the leg, vs after the leg with the compensating leg bead.
        let before = RawArcDiagram::new(
            vec![vec![ArcItem::Bead(w("x2")), ArcItem::Leg(1)], vec![ArcItem::Leg(2)]],
            strut(),
        )
        .unwrap();
        let after = RawArcDiagram::new(
            vec![vec![ArcItem::Leg(1), ArcItem::Bead(w("x2"))], vec![ArcItem::Leg(2)]],
            OpenJacobiDiagram::strut(1, 2, w("x2")).unwrap(),
        )
        .unwrap();
        assert_eq!(before.normalize().canonicalize(), after.normalize().canonicalize());
        let with_one = RawArcDiagram::new(
            vec![vec![ArcItem::Bead(Word::identity()), ArcItem::Leg(1)], vec![ArcItem::Leg(2), ArcItem::Bead(Word::identity())]],
            strut(),
        )
        .unwrap();
        let plain = ArcDiagram::new(vec![Word::identity(); 2], vec![1, 1], strut()).unwrap();
        assert_eq!(with_one.normalize().canonicalize(), plain.canonicalize());
    }

    #[test]
    fn merge_of_arc_beads() {
        let raw = RawArcDiagram::new(vec![vec![ArcItem::Bead(w("x1")), ArcItem::Bead(w("x2"))]], OpenJacobiDiagram::empty()).unwrap();
        assert_eq!(raw.homotopy_class(), HomotopyClass(vec![w("x1*x2")]));
        let bare = ArcDiagram::bare(vec![Word::identity()]);
        let (c, _) = bare.canonicalize().unwrap();
        assert!(c.is_bare(0));
        assert!(c.homotopy_class().is_trivial());
    }

    #[test]
    fn stu_on_two_legs() {
        let d = ArcDiagram::new(vec![Word::identity()], vec![2], strut()).unwrap();
        let (c, _) = d.canonicalize().unwrap();
        let rels = stu_relations::<Rational>(&c);
        // T and U coincide for the bare strut and S is the vanishing tadpole.
        assert!(rels.is_empty());
        let beaded = ArcDiagram::new(vec![Word::identity()], vec![2], OpenJacobiDiagram::strut(1, 2, w("x1")).unwrap()).unwrap();
        let (c, _) = beaded.canonicalize().unwrap();
        let rels = stu_relations::<Rational>(&c);
        assert_eq!(rels.len(), 1);
        assert_eq!(rels[0].len(), 3);
        for k in rels[0].keys() {
            assert_eq!(k.homotopy_class(), c.homotopy_class());
        }
        let spread = ArcDiagram::new(vec![Word::identity(); 2], vec![1, 1], strut()).unwrap();
        assert!(stu_relations::<Rational>(&spread.canonicalize().unwrap().0).is_empty());
    }

    #[test]
    fn stu_with_tripod() {
        // Tripod with all three legs on one arc: two STU sites.
        let tripod = OpenJacobiDiagram::new(
            vec![Vertex::Uni(1), Vertex::Uni(2), Vertex::Uni(3), Vertex::Tri],
            vec![
                Edge::new(HalfEdge::new(3, 0), HalfEdge::new(0, 0)),
                Edge::new(HalfEdge::new(3, 1), HalfEdge::new(1, 0)),
                Edge::new(HalfEdge::new(3, 2), HalfEdge::new(2, 0)),
            ],
        )
        .unwrap();
        let d = ArcDiagram::new(vec![Word::identity()], vec![3], tripod).unwrap();
        let (c, _) = d.canonicalize().unwrap();
        assert_eq!(stu_relations::<Rational>(&c).len(), 2);
    }
}

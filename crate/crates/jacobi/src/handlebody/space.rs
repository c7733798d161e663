use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use super::{arc_ihx_relations, stu_relations, ArcDiagram, ArcVector, CanonicalArcDiagram};
use crate::diagram::enumerate_diagrams;
use crate::error::{Error, Result};
use crate::freegroup::{BeadAlphabet, Word};
use crate::linalg::{EchelonBasis, Field};
use crate::relations::{close, DEFAULT_CLOSURE_LIMIT};
use crate::Rational;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AParams {
    pub n: u32,
    pub m: usize,
    pub d: usize,
    pub alphabet: String,
    pub class0: bool,
    pub min_trivalent: usize,
}

/// A truncated `A_d(n, m)`: an STU/IHX-closed spanning set and its relations.
/// With `min_trivalent = t` the dimension is that of the image of diagrams with
/// at least `t` trivalent vertices.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "F: Serialize", deserialize = "F: DeserializeOwned"))]
pub struct ASpace<F: Field = Rational> {
    pub params: AParams,
    span: Vec<CanonicalArcDiagram>,
    relations: Vec<ArcVector<F>>,
    echelon: EchelonBasis<CanonicalArcDiagram, F>,
    dim: usize,
}

impl<F: Field> ASpace<F> {
    pub fn from_seeds(params: AParams, seeds: impl IntoIterator<Item = CanonicalArcDiagram>) -> Result<Self> {
        let seeds: Vec<CanonicalArcDiagram> = seeds.into_iter().collect();
        if let Some(bad) = seeds.iter().find(|c| c.degree() != params.d || c.num_arcs() != params.m) {
            return Err(Error::Precondition(format!(
                "seed of degree {} on {} arcs in A_{}(.., {})",
                bad.degree(),
                bad.num_arcs(),
                params.d,
                params.m
            )));
        }
        if params.class0 && seeds.iter().any(|c| !c.homotopy_class().is_trivial()) {
            return Err(Error::Precondition("seed outside homotopy class 0".into()));
        }
        let (span, relations) = close(seeds, DEFAULT_CLOSURE_LIMIT, |c| {
            let mut rels = stu_relations::<F>(c);
            rels.extend(arc_ihx_relations::<F>(c));
            rels
        })?;
        let mut echelon = EchelonBasis::new();
        for r in &relations {
            echelon.insert(r);
        }
        let dim = if params.min_trivalent == 0 {
            span.len() - echelon.rank()
        } else {
            let mut image = EchelonBasis::new();
            for c in span.iter().filter(|c| c.num_trivalent() >= params.min_trivalent) {
                image.insert(&echelon.reduce(&ArcVector::unit(c.clone())));
            }
            image.rank()
        };
        Ok(ASpace { params, span, relations, echelon, dim })
    }

    /// Dimension of the filtration level `min_trivalent`.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Dimension of the whole space, ignoring `min_trivalent`.
    pub fn full_dim(&self) -> usize {
        self.span.len() - self.echelon.rank()
    }

    pub fn span(&self) -> &[CanonicalArcDiagram] {
        &self.span
    }

    pub fn relations(&self) -> &[ArcVector<F>] {
        &self.relations
    }

    pub fn relation_rank(&self) -> usize {
        self.echelon.rank()
    }

    pub fn contains(&self, c: &CanonicalArcDiagram) -> bool {
        self.span.binary_search(c).is_ok()
    }

    /// Normal form modulo STU and IHX, supported on [`Self::quotient_basis`].
    pub fn reduce(&self, v: &ArcVector<F>) -> Result<ArcVector<F>> {
        if v.keys().any(|k| !self.contains(k)) {
            return Err(Error::RelationOutsideSpan);
        }
        Ok(self.echelon.reduce(v))
    }

    pub fn quotient_basis(&self) -> Vec<&CanonicalArcDiagram> {
        self.span.iter().filter(|c| !self.echelon.is_pivot(c)).collect()
    }

    /// Same parameters, spanning set enlarged by `extra`.
    pub fn extended(&self, extra: impl IntoIterator<Item = CanonicalArcDiagram>) -> Result<Self> {
        let mut seeds = self.span.clone();
        seeds.extend(extra.into_iter().filter(|c| !self.contains(c)));
        Self::from_seeds(self.params.clone(), seeds)
    }
}

/// Compositions of `c` into `m` non-negative parts, lexicographic.
pub(crate) fn compositions(c: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return if c == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 0..=c {
        for mut rest in compositions(c - first, m - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All `m`-tuples of alphabet elements, or the identity tuple for class 0.
pub(crate) fn holonomy_tuples(m: usize, beads: &BeadAlphabet, class0: bool) -> Vec<Vec<Word>> {
    let mut out: Vec<Vec<Word>> = vec![vec![]];
    for _ in 0..m {
        let choices: &[Word] = if class0 { &[] } else { &beads.elements };
        out = out
            .into_iter()
            .flat_map(|t| {
                let mut ext = Vec::new();
                if choices.is_empty() {
                    let mut t = t.clone();
                    t.push(Word::identity());
                    ext.push(t);
                }
                for h in choices {
                    let mut t = t.clone();
                    t.push(h.clone());
                    ext.push(t);
                }
                ext
            })
            .collect();
    }
    out
}

/// Canonical arc diagrams of degree `d` on `m` arcs whose open part has beads in
/// `beads`, with arc holonomies in `beads` (all 1 when `class0`).
pub fn enumerate_arc_diagrams(m: usize, d: usize, beads: &BeadAlphabet, class0: bool) -> Vec<CanonicalArcDiagram> {
    let tuples = holonomy_tuples(m, beads, class0);
    let mut out = Vec::new();
    for c in 0..=2 * d {
        let comps = compositions(c, m);
        for j in enumerate_diagrams(d, c, beads) {
            let rep = j.to_diagram();
            for comp in &comps {
                for hol in &tuples {
                    let diagram = ArcDiagram::new(hol.clone(), comp.clone(), rep.clone()).expect("leg count matches");
                    if let Some((canonical, _)) = diagram.canonicalize() {
                        out.push(canonical);
                    }
                }
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// `A_d(n, m)` (class 0 when `class0`) truncated to the bead alphabet.
pub fn a_space(n: u32, m: usize, d: usize, beads: &BeadAlphabet, class0: bool, min_trivalent: usize) -> Result<ASpace> {
    if beads.rank > n {
        return Err(Error::Precondition(format!("alphabet {} has rank above n = {n}", beads.label)));
    }
    let params = AParams { n, m, d, alphabet: beads.label.clone(), class0, min_trivalent };
    ASpace::from_seeds(params, enumerate_arc_diagrams(m, d, beads, class0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(2, 3).len(), 6);
        assert_eq!(compositions(0, 0), vec![Vec::<usize>::new()]);
        assert!(compositions(1, 0).is_empty());
    }

    #[test]
    fn degree_one_class_zero() {
        for m in 1..=4 {
            let a = a_space(0, m, 1, &BeadAlphabet::trivial(), true, 0).unwrap();
            assert_eq!(a.dim(), m * (m + 1) / 2, "m = {m}");
            assert_eq!(a_space(0, m, 1, &BeadAlphabet::trivial(), true, 1).unwrap().dim(), 0);
        }
    }

    #[test]
    fn degree_zero_is_group_ring() {
        for n in 1..=2u32 {
            let beads = BeadAlphabet::generated(n, 2);
            for m in 1..=2 {
                let a = a_space(n, m, 0, &beads, false, 0).unwrap();
                assert_eq!(a.dim(), beads.len().pow(m as u32));
            }
        }
        assert_eq!(a_space(0, 0, 0, &BeadAlphabet::trivial(), true, 0).unwrap().dim(), 1);
    }

    #[test]
    fn beaded_single_arc() {
        // Struts with bead 1, x, x^-1 and the beaded tadpole, modulo one STU relation.
        let a = a_space(1, 1, 1, &BeadAlphabet::generated(1, 1), true, 0).unwrap();
        assert_eq!(a.dim(), 3);
        assert!(a_space(0, 1, 1, &BeadAlphabet::generated(1, 1), true, 0).is_err());
    }

    #[test]
    fn stu_relations_stay_in_one_class() {
        let a = a_space(1, 2, 1, &BeadAlphabet::generated(1, 1), false, 0).unwrap();
        for r in a.relations() {
            let classes: Vec<_> = r.keys().map(CanonicalArcDiagram::homotopy_class).collect();
            assert!(classes.windows(2).all(|w| w[0] == w[1]));
        }
    }
}

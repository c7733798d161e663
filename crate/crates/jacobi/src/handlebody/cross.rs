//! Cross-effects as cokernels of the bare-arc insertions.
//!
//! `cr_k N` is the cokernel of `⊕_l N(F_{k-1}) → N(F_k)`, the `l`-th map induced
//! by `x_l ↦ 1`; on arc diagrams it inserts a bare arc at position `l`.

use serde::{Deserialize, Serialize};

use super::space::{enumerate_arc_diagrams, AParams};
use super::{gr_act, ArcDiagram, ArcVector, ASpace, CanonicalArcDiagram, GrGenerator};
use crate::diagram::OpenJacobiDiagram;
use crate::error::{Error, Result};
use crate::freegroup::{BeadAlphabet, Word};
use crate::linalg::{EchelonBasis, Field};
use crate::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum FunctorKind {
    /// `A_d(n, -)`.
    Full,
    /// `A_d(n, -)_0`.
    Class0,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FunctorSpec {
    pub kind: FunctorKind,
    pub n: u32,
    pub d: usize,
    pub alphabet: BeadAlphabet,
}

impl FunctorSpec {
    fn params(&self, m: usize) -> AParams {
        AParams {
            n: self.n,
            m,
            d: self.d,
            alphabet: self.alphabet.label.clone(),
            class0: self.kind == FunctorKind::Class0,
            min_trivalent: 0,
        }
    }

    /// The truncated value on `F_m`, seeded with `extra`.
    fn space(&self, m: usize, extra: Vec<CanonicalArcDiagram>) -> Result<ASpace> {
        if self.alphabet.rank > self.n {
            return Err(Error::Precondition(format!("alphabet {} has rank above n = {}", self.alphabet.label, self.n)));
        }
        let mut seeds = enumerate_arc_diagrams(m, self.d, &self.alphabet, self.kind == FunctorKind::Class0);
        seeds.extend(extra);
        ASpace::from_seeds(self.params(m), seeds)
    }
}

/// `N(F_k)` with the relations and the bare-arc images spanning the kernel of the projection.
#[derive(Clone, Debug)]
pub struct CrossEffect {
    pub k: usize,
    pub space: ASpace,
    kernel: EchelonBasis<CanonicalArcDiagram, Rational>,
}

impl CrossEffect {
    pub fn dim(&self) -> usize {
        self.space.span().len() - self.kernel.rank()
    }

    /// Normal form of the class of `v` in the cross-effect.
    pub fn reduce(&self, v: &ArcVector) -> Result<ArcVector> {
        if v.keys().any(|c| !self.space.contains(c)) {
            return Err(Error::RelationOutsideSpan);
        }
        Ok(self.kernel.reduce(v))
    }
}

pub fn cross_effect(spec: &FunctorSpec, k: usize) -> Result<CrossEffect> {
    let mut images: Vec<ArcVector> = Vec::new();
    if k > 0 {
        let prev = spec.space(k - 1, Vec::new())?;
        for c in prev.span() {
            let v = ArcVector::unit(c.clone());
            for at in 1..=k {
                images.push(gr_act(&GrGenerator::Unit { at }, k - 1, &v)?);
            }
        }
    }
    let extra = images.iter().flat_map(|v| v.keys().cloned()).collect();
    let space = spec.space(k, extra)?;
    let mut kernel = EchelonBasis::new();
    for r in space.relations().iter().chain(&images) {
        kernel.insert(r);
    }
    Ok(CrossEffect { k, space, kernel })
}

pub fn cross_effect_dim(spec: &FunctorSpec, k: usize) -> Result<usize> {
    cross_effect(spec, k).map(|c| c.dim())
}

#[derive(Clone, Debug)]
pub struct NonpolyWitness {
    pub vector: ArcVector,
    /// Class of `vector` in the cross-effect; nonzero certifies it.
    pub class: ArcVector,
    pub cross_effect_dim: usize,
}

impl NonpolyWitness {
    pub fn certified(&self) -> bool {
        !self.class.is_zero()
    }
}

/// Struts on arcs `(2i-1, 2i)` for `i ≤ d`, then bare arcs carrying the first
/// nontrivial bead `w`; its class in `cr_k A_d(n, -)` is nonzero.
pub fn nonpoly_witness(n: u32, d: usize, k: usize, beads: &BeadAlphabet) -> Result<NonpolyWitness> {
    if n == 0 {
        return Err(Error::Precondition("the witness needs n >= 1".into()));
    }
    if k < 2 * d + 1 {
        return Err(Error::Precondition(format!("k = {k} is below 2d + 1 = {}", 2 * d + 1)));
    }
    let w = beads
        .elements
        .iter()
        .find(|w| !w.is_identity())
        .ok_or_else(|| Error::Precondition(format!("alphabet {} has no bead other than 1", beads.label)))?
        .clone();
    let mut jacobi = OpenJacobiDiagram::empty();
    for _ in 0..d {
        jacobi = jacobi.disjoint_union(&OpenJacobiDiagram::strut(1, 2, Word::identity())?);
    }
    let mut holonomies = vec![Word::identity(); 2 * d];
    holonomies.extend(std::iter::repeat_n(w, k - 2 * d));
    let mut legs = vec![1; 2 * d];
    legs.extend(std::iter::repeat_n(0, k - 2 * d));
    let vector = ArcDiagram::new(holonomies, legs, jacobi)?.to_vector::<Rational>();
    let spec = FunctorSpec { kind: FunctorKind::Full, n, d, alphabet: beads.clone() };
    let cr = cross_effect(&spec, k)?;
    let class = cr.reduce(&vector)?;
    Ok(NonpolyWitness { vector, class, cross_effect_dim: cr.dim() })
}

/// Inclusion `A(n, m) → A(n + 1, m)` induced by `F_n ⊂ F_{n+1}`; words are unchanged.
pub fn epsilon_embed<F: Field>(v: &ArcVector<F>) -> ArcVector<F> {
    v.clone()
}

//! Gluing open diagrams onto arcs.
//!
//! A fiber-ordered map `f: {1..c} → {1..l}` glues the legs of a `c`-legged open
//! diagram onto `l` arcs, the legs in `f⁻¹(k)` landing on arc `k` in the fiber
//! order. The resulting diagrams carry no arc beads, so they lie in class 0.

use std::collections::BTreeSet;

use num_traits::{ToPrimitive, Zero};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::catlie::{mu_action, perm_action, JFamily};
use crate::diagram::{CanonicalDiagram, OpenJacobiDiagram};
use crate::error::{Error, Result};
use crate::freegroup::{BeadAlphabet, Letter, Word};
use crate::handlebody::{enumerate_arc_diagrams, gr_act, AParams, ASpace, ArcDiagram, ArcVector, CanonicalArcDiagram, GrGenerator};
use crate::linalg::{EchelonBasis, Field};
pub use crate::report::Check;
use crate::perm::{cycle_count, factorial, next_permutation, permutations};
use crate::{DiagramVector, Rational};

/// A set map `{1..c} → {1..l}` with a total order on each fiber.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FiberOrderedMap {
    /// `fibers[k]` lists `f⁻¹(k + 1)` in order.
    fibers: Vec<Vec<u32>>,
}

impl FiberOrderedMap {
    pub fn new(fibers: Vec<Vec<u32>>) -> Result<Self> {
        let c: usize = fibers.iter().map(Vec::len).sum();
        let mut seen = vec![false; c];
        for &x in fibers.iter().flatten() {
            if x == 0 || x as usize > c || std::mem::replace(&mut seen[x as usize - 1], true) {
                return Err(Error::Precondition(format!("fibers {fibers:?} do not partition 1..={c}")));
            }
        }
        Ok(FiberOrderedMap { fibers })
    }

    pub fn fibers(&self) -> &[Vec<u32>] {
        &self.fibers
    }

    pub fn source(&self) -> usize {
        self.fibers.iter().map(Vec::len).sum()
    }

    pub fn target(&self) -> usize {
        self.fibers.len()
    }

    /// The map seen from a diagram relabelled by `sigma`: `glue(f.relabel(σ), σ·D) = glue(f, D)`.
    pub fn relabel(&self, sigma: &[u32]) -> Self {
        FiberOrderedMap { fibers: self.fibers.iter().map(|fb| fb.iter().map(|&x| sigma[x as usize - 1]).collect()).collect() }
    }

    /// Reading position (from 1) of each source element after gluing.
    fn positions(&self) -> Vec<u32> {
        let mut sigma = vec![0u32; self.source()];
        for (pos, &x) in self.fibers.iter().flatten().enumerate() {
            sigma[x as usize - 1] = pos as u32 + 1;
        }
        sigma
    }
}

/// `CatAss^u(c, l)`: set maps in lexicographic order of their values, each with
/// its fiber orders in lexicographic order.
pub fn cat_ass_basis(c: usize, l: usize) -> Vec<FiberOrderedMap> {
    let mut out = Vec::new();
    if l == 0 {
        if c == 0 {
            out.push(FiberOrderedMap { fibers: vec![] });
        }
        return out;
    }
    let mut values = vec![0usize; c];
    loop {
        let mut fibers: Vec<Vec<u32>> = vec![Vec::new(); l];
        for (i, &v) in values.iter().enumerate() {
            fibers[v].push(i as u32 + 1);
        }
        let mut orders = vec![FiberOrderedMap { fibers: fibers.clone() }];
        for k in 0..l {
            orders = orders
                .into_iter()
                .flat_map(|f| {
                    let mut fiber = f.fibers[k].clone();
                    let mut variants = vec![f.clone()];
                    while next_permutation(&mut fiber) {
                        let mut g = f.clone();
                        g.fibers[k] = fiber.clone();
                        variants.push(g);
                    }
                    variants
                })
                .collect();
        }
        out.extend(orders);
        let mut p = c;
        loop {
            if p == 0 {
                return out;
            }
            p -= 1;
            values[p] += 1;
            if values[p] < l {
                break;
            }
            values[p] = 0;
        }
    }
}

pub fn glue_diagram(f: &FiberOrderedMap, d: &OpenJacobiDiagram) -> Result<ArcDiagram> {
    if d.num_legs() != f.source() {
        return Err(Error::ArityMismatch { expected: f.source(), found: d.num_legs() });
    }
    let jacobi = d.relabel_legs(&f.positions())?;
    ArcDiagram::new(vec![Word::identity(); f.target()], f.fibers.iter().map(Vec::len).collect(), jacobi)
}

/// `f_l(f ⊗ v)`.
pub fn glue<F: Field>(f: &FiberOrderedMap, v: &DiagramVector<F>) -> Result<ArcVector<F>> {
    v.flat_map(|c| Ok(glue_diagram(f, &c.to_diagram())?.to_vector()))
}

/// The action of the homomorphism with `images[j] = φ(x_{j+1})` on fiber-ordered
/// maps: each element follows one copy of its arc, reversed copies flip the fiber
/// order and cost a sign per element.
pub fn cat_ass_act(images: &[Word], f: &FiberOrderedMap) -> Vec<(i64, FiberOrderedMap)> {
    let mut occ: Vec<Vec<(usize, usize)>> = vec![Vec::new(); f.target()];
    for (j, w) in images.iter().enumerate() {
        for (o, letter) in w.letters().iter().enumerate() {
            occ[letter.gen as usize - 1].push((j, o));
        }
    }
    if f.fibers.iter().zip(&occ).any(|(fb, oc)| !fb.is_empty() && oc.is_empty()) {
        return Vec::new();
    }
    // Every element of fiber a picks one of the copies of arc a.
    let elements: Vec<(usize, u32)> =
        f.fibers.iter().enumerate().flat_map(|(a, fb)| fb.iter().map(move |&x| (a, x))).collect();
    let mut choice = vec![0usize; elements.len()];
    let mut out = Vec::new();
    loop {
        let mut sign = 1i64;
        let fibers = images
            .iter()
            .enumerate()
            .map(|(j, w)| {
                let mut fiber = Vec::new();
                for (o, &Letter { gen, inv }) in w.letters().iter().enumerate() {
                    let a = gen as usize - 1;
                    let mut part: Vec<u32> = elements
                        .iter()
                        .zip(&choice)
                        .filter(|&(&(arc, _), &ch)| arc == a && occ[a][ch] == (j, o))
                        .map(|(&(_, x), _)| x)
                        .collect();
                    if inv {
                        part.reverse();
                        if part.len() % 2 == 1 {
                            sign = -sign;
                        }
                    }
                    fiber.extend(part);
                }
                fiber
            })
            .collect();
        out.push((sign, FiberOrderedMap { fibers }));
        let mut p = 0;
        while p < choice.len() {
            choice[p] += 1;
            if choice[p] < occ[elements[p].0].len() {
                break;
            }
            choice[p] = 0;
            p += 1;
        }
        if p == choice.len() {
            return out;
        }
    }
}

/// `tr(σ | J(i))` on the quotient basis.
fn trace(family: &JFamily, i: usize, sigma: &[u32]) -> Result<Rational> {
    let cell = family.cell(i).ok_or_else(|| Error::Precondition(format!("arity {i} outside the family")))?;
    let mut tr = Rational::zero();
    for b in cell.quotient_basis() {
        let img = cell.reduce(&perm_action(sigma, &DiagramVector::unit(b.clone()))?)?;
        if let Some(c) = img.get(b) {
            tr += c;
        }
    }
    Ok(tr)
}

/// `Σ_{i ≤ max_arity} dim (K Fin(i, l) ⊗ J_d(i))_{S_i}` by the character formula.
pub fn alpha_dim_family(family: &JFamily, l: usize, max_arity: usize) -> Result<usize> {
    let mut total = Rational::zero();
    for i in 0..=max_arity.min(2 * family.d) {
        if family.cell(i).map_or(0, |c| c.dim()) == 0 {
            continue;
        }
        let mut sum = Rational::zero();
        for sigma in permutations(i) {
            let fixed_maps = Rational::from_int((l as i64).pow(cycle_count(&sigma) as u32));
            sum += fixed_maps * trace(family, i, &sigma)?;
        }
        total += sum / Rational::from_int(factorial(i) as i64);
    }
    if !total.is_integer() {
        return Err(Error::Precondition(format!("non-integral coinvariant dimension {total}")));
    }
    Ok(total.to_integer().to_usize().expect("dimension fits"))
}

pub fn alpha_dim(d: usize, beads: &BeadAlphabet, l: usize) -> Result<usize> {
    alpha_dim_family(&JFamily::build(d, beads)?, l, 2 * d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BridgeReport {
    pub d: usize,
    pub alphabet: String,
    pub l: usize,
    pub checks: Vec<Check>,
}

impl BridgeReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| !c.pass)
    }
}

/// Which glued generators the naturality and coequalizer checks visit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SamplePolicy {
    pub seed: u64,
    /// Per arity, for `d >= exhaustive_up_to + 1`.
    pub samples: usize,
    pub exhaustive_up_to: usize,
}

impl Default for SamplePolicy {
    fn default() -> Self {
        SamplePolicy { seed: 0x5eed, samples: 200, exhaustive_up_to: 2 }
    }
}

fn glue_unit(f: &FiberOrderedMap, c: &CanonicalDiagram) -> Result<ArcVector> {
    glue(f, &DiagramVector::unit(c.clone()))
}

/// Class-0 arc space on `l` arcs containing every glued generator.
fn glued_space(family: &JFamily, l: usize, min_trivalent: usize) -> Result<ASpace> {
    let mut seeds: BTreeSet<CanonicalArcDiagram> =
        enumerate_arc_diagrams(l, family.d, &family.alphabet, true).into_iter().collect();
    for c in 0..=2 * family.d {
        let cell = family.cell(c).expect("all arities built");
        for f in cat_ass_basis(c, l) {
            for x in cell.span() {
                seeds.extend(glue_unit(&f, x)?.keys().cloned());
            }
        }
    }
    let params = AParams {
        n: family.alphabet.rank,
        m: l,
        d: family.d,
        alphabet: family.alphabet.label.clone(),
        class0: true,
        min_trivalent,
    };
    ASpace::from_seeds(params, seeds)
}

fn generators(l: usize) -> Vec<GrGenerator> {
    let mut gens: Vec<GrGenerator> = (1..=l + 1).map(|at| GrGenerator::Unit { at }).collect();
    for at in 1..=l {
        gens.extend([GrGenerator::Counit { at }, GrGenerator::Antipode { at }, GrGenerator::Coproduct { at }]);
    }
    gens.extend((1..l).map(|at| GrGenerator::Product { at }));
    if l >= 2 {
        let mut cycle: Vec<u32> = (2..=l as u32).collect();
        cycle.push(1);
        gens.push(GrGenerator::Permutation(cycle));
        let mut swap: Vec<u32> = (1..=l as u32).collect();
        swap.swap(0, 1);
        gens.push(GrGenerator::Permutation(swap));
    }
    gens
}

/// `lhs - rhs` vanishes in `space`, enlarged when its support leaves the span.
fn vanishes(space: &ASpace, v: &ArcVector) -> Result<bool> {
    if v.is_zero() {
        return Ok(true);
    }
    match space.reduce(v) {
        Ok(r) => Ok(r.is_zero()),
        Err(Error::RelationOutsideSpan) => Ok(space.extended(v.keys().cloned())?.reduce(v)?.is_zero()),
        Err(e) => Err(e),
    }
}

pub fn verify_bridge(d: usize, beads: &BeadAlphabet, l: usize) -> Result<BridgeReport> {
    verify_bridge_with(d, beads, l, &SamplePolicy::default())
}

/// Checks the gluing presentation of `A_d(n, l')_0` for every `l' <= l`.
pub fn verify_bridge_with(d: usize, beads: &BeadAlphabet, l: usize, policy: &SamplePolicy) -> Result<BridgeReport> {
    let family = JFamily::<Rational>::build(d, beads)?;
    let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
    let mut checks = Vec::new();
    for lp in 0..=l {
        let space = glued_space(&family, lp, 0)?;

        // IHX relations glue to zero.
        let mut failure = None;
        'ihx: for c in 0..=2 * d {
            let cell = family.cell(c).expect("built");
            for f in cat_ass_basis(c, lp) {
                for r in cell.relations() {
                    if !space.reduce(&glue(&f, r)?)?.is_zero() {
                        failure = Some(format!("{f:?} on {r:?}"));
                        break 'ihx;
                    }
                }
            }
        }
        checks.push(Check::new(format!("ihx_vanishing(l={lp})"), failure));

        // Surjectivity.
        let mut image = EchelonBasis::new();
        let mut generators_glued: Vec<(FiberOrderedMap, CanonicalDiagram)> = Vec::new();
        for c in 0..=2 * d {
            for f in cat_ass_basis(c, lp) {
                for x in family.cell(c).expect("built").span() {
                    image.insert(&space.reduce(&glue_unit(&f, x)?)?);
                    generators_glued.push((f.clone(), x.clone()));
                }
            }
        }
        let failure = (image.rank() != space.dim())
            .then(|| format!("glued rank {} below dim {}", image.rank(), space.dim()));
        checks.push(Check::new(format!("surjectivity(l={lp})"), failure));

        // Dimensions.
        let alpha = alpha_dim_family(&family, lp, 2 * d)?;
        let failure = (alpha != space.dim()).then(|| format!("alpha {alpha} vs A {}", space.dim()));
        checks.push(Check::new(format!("dimension(l={lp})"), failure));

        let sample: Vec<&(FiberOrderedMap, CanonicalDiagram)> = if d <= policy.exhaustive_up_to {
            generators_glued.iter().collect()
        } else {
            generators_glued.choose_multiple(&mut rng, policy.samples).collect()
        };

        // Naturality of gluing for the gr generators.
        let mut failure = None;
        let mut targets: Vec<Option<ASpace>> = vec![None; lp + 2];
        'nat: for g in generators(lp) {
            let images = g.images(lp)?;
            let m2 = images.len();
            for (f, x) in &sample {
                let lhs = gr_act(&g, lp, &glue_unit(f, x)?)?;
                let mut rhs = ArcVector::zero();
                for (sign, f2) in cat_ass_act(&images, f) {
                    rhs.add_scaled(&glue_unit(&f2, x)?, &Rational::from_int(sign));
                }
                let mut diff = lhs;
                diff.sub(&rhs);
                if diff.is_zero() {
                    continue;
                }
                if targets[m2].is_none() {
                    targets[m2] = Some(glued_space(&family, m2, 0)?);
                }
                if !vanishes(targets[m2].as_ref().expect("just built"), &diff)? {
                    failure = Some(format!("{g:?} on {f:?} glued with {x:?}"));
                    break 'nat;
                }
            }
        }
        checks.push(Check::new(format!("naturality(l={lp})"), failure));

        // Coequalizer: placing leg c+1 just after or just before i differs by glue(f, μ_i D).
        let mut failure = None;
        'coeq: for c in 0..2 * d {
            let upper = family.cell(c + 1).expect("built");
            let maps = cat_ass_basis(c, lp);
            let mut pairs: Vec<(&FiberOrderedMap, &CanonicalDiagram)> =
                maps.iter().flat_map(|f| upper.span().iter().map(move |x| (f, x))).collect();
            if d > policy.exhaustive_up_to {
                pairs.shuffle(&mut rng);
                pairs.truncate(policy.samples);
            }
            for (f, x) in pairs {
                let unit = DiagramVector::<Rational>::unit(x.clone());
                for i in 1..=c as u32 {
                    let insert = |after: bool| {
                        let fibers = f
                            .fibers
                            .iter()
                            .map(|fb| {
                                fb.iter()
                                    .flat_map(|&y| match (y == i, after) {
                                        (true, true) => vec![y, c as u32 + 1],
                                        (true, false) => vec![c as u32 + 1, y],
                                        _ => vec![y],
                                    })
                                    .collect()
                            })
                            .collect();
                        FiberOrderedMap { fibers }
                    };
                    let mut rel = glue(&insert(true), &unit)?;
                    rel.sub(&glue(&insert(false), &unit)?);
                    rel.sub(&glue(f, &mu_action(i, &unit)?)?);
                    if !vanishes(&space, &rel)? {
                        failure = Some(format!("{f:?}, i = {i}, on {x:?}"));
                        break 'coeq;
                    }
                }
            }
        }
        checks.push(Check::new(format!("coequalizer(l={lp})"), failure));
    }
    Ok(BridgeReport { d, alphabet: beads.label.clone(), l, checks })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiltrationReport {
    pub d: usize,
    pub alphabet: String,
    pub l: usize,
    pub t: usize,
    pub alpha_dim: usize,
    pub a_dim: usize,
    pub pass: bool,
}

/// `α` of the truncation to arities `<= 2d - t` against the filtration level `t` of `A_d(n, l)_0`.
pub fn verify_filtration(d: usize, beads: &BeadAlphabet, l: usize, t: usize) -> Result<FiltrationReport> {
    let family = JFamily::<Rational>::build(d, beads)?;
    let alpha = if t > 2 * d { 0 } else { alpha_dim_family(&family, l, 2 * d - t)? };
    let a_dim = glued_space(&family, l, t)?.dim();
    Ok(FiltrationReport { d, alphabet: beads.label.clone(), l, t, alpha_dim: alpha, a_dim, pass: alpha == a_dim })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::quotient_dim;
    use crate::perm::{compose, inverse};

    #[test]
    fn cat_ass_counts() {
        assert_eq!(cat_ass_basis(0, 3).len(), 1);
        assert_eq!(cat_ass_basis(2, 1).len(), 2);
        assert_eq!(cat_ass_basis(2, 2).len(), 6);
        assert_eq!(cat_ass_basis(1, 0).len(), 0);
        for c in 0..=4 {
            for l in 1..=3 {
                let rising: u64 = (0..c as u64).map(|i| l as u64 + i).product();
                assert_eq!(cat_ass_basis(c, l).len() as u64, rising, "c = {c}, l = {l}");
            }
        }
        let b = cat_ass_basis(3, 2);
        assert!(b.windows(2).all(|w| w[0] != w[1]));
    }

    #[test]
    fn glue_examples() {
        let strut = OpenJacobiDiagram::strut(1, 2, Word::identity()).unwrap();
        let across = glue_diagram(&FiberOrderedMap::new(vec![vec![1], vec![2]]).unwrap(), &strut).unwrap();
        assert_eq!(across.legs(), &[1, 1]);
        let one_arc = glue_diagram(&FiberOrderedMap::new(vec![vec![2, 1]]).unwrap(), &strut).unwrap();
        assert_eq!(one_arc.legs(), &[2]);
        assert!(one_arc.homotopy_class().is_trivial());
        assert!(glue_diagram(&FiberOrderedMap::new(vec![vec![1]]).unwrap(), &strut).is_err());
        assert!(FiberOrderedMap::new(vec![vec![1], vec![1]]).is_err());
    }

    #[test]
    fn glue_is_balanced() {
        let family = JFamily::<Rational>::build(2, &BeadAlphabet::trivial()).unwrap();
        for c in 2..=4 {
            for x in family.cell(c).unwrap().span() {
                let v = DiagramVector::<Rational>::unit(x.clone());
                for sigma in permutations(c) {
                    let moved = perm_action(&sigma, &v).unwrap();
                    for f in cat_ass_basis(c, 2) {
                        assert_eq!(glue(&f.relabel(&sigma), &moved).unwrap(), glue(&f, &v).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn cat_ass_act_matches_counts() {
        // Δ on one arc with c elements: 2^c terms, all positive.
        let f = FiberOrderedMap::new(vec![vec![2, 1, 3]]).unwrap();
        let terms = cat_ass_act(&GrGenerator::Coproduct { at: 1 }.images(1).unwrap(), &f);
        assert_eq!(terms.len(), 8);
        assert!(terms.iter().all(|(s, _)| *s == 1));
        let s = cat_ass_act(&GrGenerator::Antipode { at: 1 }.images(1).unwrap(), &f);
        assert_eq!(s, vec![(-1, FiberOrderedMap::new(vec![vec![3, 1, 2]]).unwrap())]);
        assert!(cat_ass_act(&GrGenerator::Counit { at: 1 }.images(1).unwrap(), &f).is_empty());
    }

    /// Coinvariants of `K Fin(i, l) ⊗ J(i)` as an explicit quotient.
    fn coinvariant_oracle(family: &JFamily, l: usize) -> usize {
        let mut total = 0;
        for i in 0..=2 * family.d {
            let cell = family.cell(i).unwrap();
            let maps: Vec<Vec<u32>> = {
                let mut out = vec![vec![]];
                for _ in 0..i {
                    out = out.into_iter().flat_map(|m: Vec<u32>| (1..=l as u32).map(move |v| [m.clone(), vec![v]].concat())).collect();
                }
                out
            };
            type Key = (Vec<u32>, CanonicalDiagram);
            let mut span: Vec<crate::linalg::SparseVector<Key, Rational>> = Vec::new();
            let mut rels: Vec<crate::linalg::SparseVector<Key, Rational>> = Vec::new();
            for m in &maps {
                for x in cell.span() {
                    span.push(crate::linalg::SparseVector::unit((m.clone(), x.clone())));
                }
                for r in cell.relations() {
                    rels.push(r.map_keys(|x| (m.clone(), x.clone())));
                }
                for sigma in permutations(i) {
                    // (f, D) ~ (f ∘ σ⁻¹, σ·D).
                    let moved_map = compose(m, &inverse(&sigma));
                    for x in cell.span() {
                        let moved = perm_action(&sigma, &DiagramVector::<Rational>::unit(x.clone())).unwrap();
                        let mut rel = moved.map_keys(|y| (moved_map.clone(), y.clone()));
                        rel.sub(&crate::linalg::SparseVector::unit((m.clone(), x.clone())));
                        rels.push(rel);
                    }
                }
            }
            total += quotient_dim(&span, &rels).unwrap();
        }
        total
    }

    #[test]
    fn alpha_matches_coinvariant_oracle() {
        for d in 1..=2 {
            let family = JFamily::<Rational>::build(d, &BeadAlphabet::trivial()).unwrap();
            for l in 0..=3 {
                assert_eq!(alpha_dim_family(&family, l, 2 * d).unwrap(), coinvariant_oracle(&family, l), "d = {d}, l = {l}");
            }
        }
        let family = JFamily::<Rational>::build(1, &BeadAlphabet::generated(1, 1)).unwrap();
        for l in 0..=2 {
            assert_eq!(alpha_dim_family(&family, l, 2).unwrap(), coinvariant_oracle(&family, l));
        }
    }

    #[test]
    fn alpha_small_values() {
        for m in 0..=4 {
            assert_eq!(alpha_dim(1, &BeadAlphabet::trivial(), m).unwrap(), m * (m + 1) / 2);
        }
        assert_eq!(alpha_dim(2, &BeadAlphabet::trivial(), 0).unwrap(), 0);
    }

    #[test]
    fn bridge_degree_one() {
        let report = verify_bridge(1, &BeadAlphabet::trivial(), 2).unwrap();
        assert!(report.all_pass(), "{:?}", report.first_failure());
    }

    #[test]
    fn filtration_degree_one() {
        for t in 0..=2 {
            let r = verify_filtration(1, &BeadAlphabet::trivial(), 2, t).unwrap();
            assert!(r.pass, "{r:?}");
        }
        assert_eq!(verify_filtration(1, &BeadAlphabet::trivial(), 3, 2).unwrap().a_dim, 0);
    }
}

//! The action of `gr^op` on arc diagrams.
//!
//! A homomorphism `φ: F_{m'} → F_m` is given by the words `φ(x_j)` and maps
//! diagrams on `m` arcs to diagrams on `m'` arcs: target arc `j` is the
//! concatenation of copies of the source arcs spelled by `φ(x_j)`, an inverse
//! letter contributing the reversed arc. The legs of a source arc are
//! distributed over its copies in every possible way; a reversed copy with `k`
//! legs costs `(-1)^k`. A source arc with legs and no copy gives 0, a bare one
//! is forgotten.

use serde::{Deserialize, Serialize};

use super::{ArcItem, ArcVector, RawArcDiagram};
use crate::error::{Error, Result};
use crate::freegroup::{Letter, Word};
use crate::linalg::Field;

/// Generators of `gr^op` acting on `m` arcs; positions count from 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrGenerator {
    /// η: insert a bare arc at position `at` (1..=m+1).
    Unit { at: usize },
    /// μ: concatenate arcs `at` and `at + 1`.
    Product { at: usize },
    /// ε: delete arc `at`.
    Counit { at: usize },
    /// S: reverse arc `at`.
    Antipode { at: usize },
    /// Δ: double arc `at`.
    Coproduct { at: usize },
    /// Arc `j` moves to position `sigma[j - 1]`.
    Permutation(Vec<u32>),
}

impl GrGenerator {
    /// The words `φ(x_j)` in `F_m`.
    pub fn images(&self, m: usize) -> Result<Vec<Word>> {
        let x = |j: usize| Word::gen(j as u32);
        let bad = |at: usize, max: usize| Error::Precondition(format!("arc position {at} outside 1..={max}"));
        Ok(match *self {
            GrGenerator::Unit { at } => {
                if at == 0 || at > m + 1 {
                    return Err(bad(at, m + 1));
                }
                let mut v: Vec<Word> = (1..=m).map(x).collect();
                v.insert(at - 1, Word::identity());
                v
            }
            GrGenerator::Product { at } => {
                if at == 0 || at >= m {
                    return Err(bad(at, m.saturating_sub(1)));
                }
                let mut v: Vec<Word> = (1..=m).map(x).collect();
                v[at - 1] = x(at).mul(&x(at + 1));
                v.remove(at);
                v
            }
            GrGenerator::Counit { at } => {
                if at == 0 || at > m {
                    return Err(bad(at, m));
                }
                (1..=m).filter(|&j| j != at).map(x).collect()
            }
            GrGenerator::Antipode { at } => {
                if at == 0 || at > m {
                    return Err(bad(at, m));
                }
                (1..=m).map(|j| if j == at { x(j).inv() } else { x(j) }).collect()
            }
            GrGenerator::Coproduct { at } => {
                if at == 0 || at > m {
                    return Err(bad(at, m));
                }
                let mut v: Vec<Word> = (1..=m).map(x).collect();
                v.insert(at, x(at));
                v
            }
            GrGenerator::Permutation(ref sigma) => {
                if sigma.len() != m {
                    return Err(Error::ArityMismatch { expected: m, found: sigma.len() });
                }
                let mut v = vec![Word::identity(); m];
                let mut seen = vec![false; m];
                for (j, &s) in sigma.iter().enumerate() {
                    if s == 0 || s as usize > m || std::mem::replace(&mut seen[s as usize - 1], true) {
                        return Err(Error::Precondition(format!("{sigma:?} is not a permutation")));
                    }
                    v[s as usize - 1] = x(j + 1);
                }
                v
            }
        })
    }

    pub fn target_arity(&self, m: usize) -> Result<usize> {
        self.images(m).map(|v| v.len())
    }
}

/// The words of `ψ ∘ φ` where `ψ` acts after `φ` on diagrams.
pub fn compose_homs(first: &[Word], then: &[Word]) -> Vec<Word> {
    then.iter().map(|w| w.substitute(first)).collect()
}

/// Acts on `v`, a combination of diagrams on `m` arcs.
pub fn gr_act<F: Field>(g: &GrGenerator, m: usize, v: &ArcVector<F>) -> Result<ArcVector<F>> {
    apply_hom(&g.images(m)?, m, v)
}

/// Acts by the homomorphism with `images[j] = φ(x_{j+1})`, words in `x_1..x_m`.
pub fn apply_hom<F: Field>(images: &[Word], m: usize, v: &ArcVector<F>) -> Result<ArcVector<F>> {
    if let Some(w) = images.iter().find(|w| w.rank() as usize > m) {
        return Err(Error::Precondition(format!("{w} is not a word in x_1..x_{m}")));
    }
    let mut out = ArcVector::zero();
    for (c, coef) in v.iter() {
        if c.num_arcs() != m {
            return Err(Error::ArityMismatch { expected: m, found: c.num_arcs() });
        }
        // Occurrences of each source arc: (target arc, letter index, inverted).
        let mut occ: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); m];
        for (j, w) in images.iter().enumerate() {
            for (o, &Letter { gen, inv }) in w.letters().iter().enumerate() {
                occ[gen as usize - 1].push((j, o, inv));
            }
        }
        let legs = c.legs();
        let mut owner: Vec<usize> = Vec::new();
        for (a, &k) in legs.iter().enumerate() {
            owner.extend(std::iter::repeat_n(a, k as usize));
        }
        if owner.iter().any(|&a| occ[a].is_empty()) {
            continue;
        }
        let jacobi = c.jacobi().to_diagram();
        let hol = c.holonomies();
        let mut choice = vec![0usize; owner.len()];
        loop {
            let mut sign = 1i64;
            let arcs: Vec<Vec<ArcItem>> = images
                .iter()
                .enumerate()
                .map(|(j, w)| {
                    let mut items = Vec::new();
                    for (o, &Letter { gen, inv }) in w.letters().iter().enumerate() {
                        let a = gen as usize - 1;
                        let slot = occ[a].iter().position(|&(jj, oo, _)| jj == j && oo == o).expect("occurrence");
                        let mut here: Vec<ArcItem> = (0..owner.len())
                            .filter(|&p| owner[p] == a && choice[p] == slot)
                            .map(|p| ArcItem::Leg(p as u32 + 1))
                            .collect();
                        if inv {
                            if here.len() % 2 == 1 {
                                sign = -sign;
                            }
                            here.reverse();
                            items.extend(here);
                            items.push(ArcItem::Bead(hol[a].inv()));
                        } else {
                            items.push(ArcItem::Bead(hol[a].clone()));
                            items.extend(here);
                        }
                    }
                    items
                })
                .collect();
            let raw = RawArcDiagram::new(arcs, jacobi.clone())?;
            out.add_scaled(&raw.normalize().to_vector::<F>(), &(coef.clone() * F::from_int(sign)));
            // Odometer over the leg distributions.
            let mut p = 0;
            while p < choice.len() {
                choice[p] += 1;
                if choice[p] < occ[owner[p]].len() {
                    break;
                }
                choice[p] = 0;
                p += 1;
            }
            if p == choice.len() {
                break;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::super::a_space;
    use super::*;
    use crate::freegroup::BeadAlphabet;
    use crate::Rational;

    fn act(gens: &[GrGenerator], mut m: usize, v: &ArcVector) -> ArcVector {
        let mut v = v.clone();
        for g in gens {
            v = gr_act(g, m, &v).unwrap();
            m = g.target_arity(m).unwrap();
        }
        v
    }

    #[test]
    fn composition_matches_word_substitution() {
        use GrGenerator::*;
        let space = a_space(1, 2, 1, &BeadAlphabet::generated(1, 1), false, 0).unwrap();
        let seqs = [
            vec![Product { at: 1 }, Coproduct { at: 1 }],
            vec![Permutation(vec![2, 1]), Antipode { at: 1 }, Product { at: 1 }],
            vec![Coproduct { at: 2 }, Permutation(vec![3, 1, 2])],
        ];
        for seq in &seqs {
            let mut words: Vec<Word> = (1..=2).map(Word::gen).collect();
            let mut m = 2;
            for g in seq {
                words = compose_homs(&words, &g.images(m).unwrap());
                m = g.target_arity(m).unwrap();
            }
            for c in space.span() {
                let v = ArcVector::unit(c.clone());
                assert_eq!(act(seq, 2, &v), apply_hom(&words, 2, &v).unwrap());
            }
        }
    }

    #[test]
    fn grading_and_filtration() {
        use GrGenerator::*;
        let spaces = [a_space(1, 2, 1, &BeadAlphabet::generated(1, 1), true, 0).unwrap(), a_space(0, 2, 2, &BeadAlphabet::trivial(), true, 0).unwrap()];
        for c in spaces.iter().flat_map(|s| s.span()) {
            let v = ArcVector::<Rational>::unit(c.clone());
            for g in [Coproduct { at: 1 }, Product { at: 1 }, Antipode { at: 2 }] {
                for k in gr_act(&g, 2, &v).unwrap().keys() {
                    assert_eq!(k.degree(), c.degree());
                    assert!(k.num_trivalent() >= c.num_trivalent());
                    assert!(k.homotopy_class().is_trivial());
                }
            }
        }
    }

    #[test]
    fn shuffles_and_bare_arcs() {
        use GrGenerator::*;
        let space = a_space(0, 1, 1, &BeadAlphabet::trivial(), true, 0).unwrap();
        let strut = space.span().iter().find(|c| c.legs() == [2]).unwrap();
        let v = ArcVector::<Rational>::unit(strut.clone());
        // Four shuffles, two of which coincide up to canonical form.
        let d = gr_act(&Coproduct { at: 1 }, 1, &v).unwrap();
        let total: i64 = d.iter().map(|(_, c)| c.to_integer().try_into().unwrap_or(0i64)).sum();
        assert_eq!(total, 4);
        assert!(gr_act(&Counit { at: 1 }, 1, &v).unwrap().is_zero());
        assert!(gr_act(&Counit { at: 2 }, 1, &v).is_err());
        assert!(gr_act(&Coproduct { at: 1 }, 2, &v).is_err());
    }
}

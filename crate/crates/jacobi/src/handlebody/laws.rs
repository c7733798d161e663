//! The defining relations of `gr`, checked on the spanning set of an arc space.

use super::{gr_act, ArcVector, ASpace, AParams, CanonicalArcDiagram, GrGenerator, HomotopyClass};
use crate::error::Result;
use crate::report::Check;
use crate::Rational;

fn act(gens: &[GrGenerator], mut m: usize, v: &ArcVector) -> Result<ArcVector> {
    let mut v = v.clone();
    for g in gens {
        v = gr_act(g, m, &v)?;
        m = g.target_arity(m)?;
    }
    Ok(v)
}

/// `lhs - rhs` vanishes in `space` enlarged by its support.
fn equal_in_quotient(space: &ASpace, lhs: &ArcVector, rhs: &ArcVector) -> Result<bool> {
    let mut diff = lhs.clone();
    diff.sub(rhs);
    if diff.is_zero() {
        return Ok(true);
    }
    let extra: Vec<CanonicalArcDiagram> = diff.keys().filter(|k| !space.contains(k)).cloned().collect();
    if extra.is_empty() {
        return Ok(space.reduce(&diff)?.is_zero());
    }
    Ok(space.extended(extra)?.reduce(&diff)?.is_zero())
}

/// Runs `law` on every spanning diagram and arc position, keeping the first failure.
fn each(space: &ASpace, name: &str, mut law: impl FnMut(&ArcVector, usize) -> Result<bool>) -> Result<Check> {
    let m = space.params.m;
    for c in space.span() {
        let v = ArcVector::unit(c.clone());
        for at in 1..=m {
            if !law(&v, at)? {
                return Ok(Check::new(name, Some(format!("arc {at} of {c:?}"))));
            }
        }
    }
    Ok(Check::new(name, None))
}

/// `μ ∘ (S ⊗ id) ∘ Δ = η ∘ ε = μ ∘ (id ⊗ S) ∘ Δ` on each arc, modulo relations.
pub fn hopf_axioms(space: &ASpace) -> Result<Vec<Check>> {
    use GrGenerator::*;
    let m = space.params.m;
    let mut checks = Vec::new();
    for (name, s_at) in [("antipode_left", 0), ("antipode_right", 1)] {
        checks.push(each(space, name, |v, at| {
            let rhs = act(&[Counit { at }, Unit { at }], m, v)?;
            let lhs = act(&[Coproduct { at }, Antipode { at: at + s_at }, Product { at }], m, v)?;
            equal_in_quotient(space, &lhs, &rhs)
        })?);
    }
    Ok(checks)
}

/// Coalgebra laws, unit and antipode identities, compatibility with the
/// relations, and the gradings, on the spanning set of `space`.
pub fn gr_laws(space: &ASpace) -> Result<Vec<Check>> {
    use GrGenerator::*;
    let m = space.params.m;
    let mut checks = vec![
        each(space, "coassociativity", |v, at| {
            Ok(act(&[Coproduct { at }, Coproduct { at }], m, v)? == act(&[Coproduct { at }, Coproduct { at: at + 1 }], m, v)?)
        })?,
        each(space, "counit", |v, at| {
            Ok(act(&[Coproduct { at }, Counit { at }], m, v)? == *v && act(&[Coproduct { at }, Counit { at: at + 1 }], m, v)? == *v)
        })?,
        each(space, "cocommutativity", |v, at| {
            let mut swap: Vec<u32> = (1..=m as u32 + 1).collect();
            swap.swap(at - 1, at);
            Ok(act(&[Coproduct { at }, Permutation(swap)], m, v)? == act(&[Coproduct { at }], m, v)?)
        })?,
        each(space, "unit_then_counit", |v, at| Ok(act(&[Unit { at }, Counit { at }], m, v)? == *v))?,
        each(space, "antipode_involution", |v, at| Ok(act(&[Antipode { at }, Antipode { at }], m, v)? == *v))?,
    ];
    if m >= 3 {
        checks.push(each(space, "associativity", |v, at| {
            if at + 2 > m {
                return Ok(true);
            }
            Ok(act(&[Product { at }, Product { at }], m, v)? == act(&[Product { at: at + 1 }, Product { at }], m, v)?)
        })?);
    }

    let mut gens = vec![Unit { at: 1 }, Unit { at: m + 1 }];
    for at in 1..=m {
        gens.extend([Counit { at }, Antipode { at }, Coproduct { at }]);
    }
    gens.extend((1..m).map(|at| Product { at }));
    if m >= 2 {
        let mut cycle: Vec<u32> = (2..=m as u32).collect();
        cycle.push(1);
        gens.push(Permutation(cycle));
    }

    // Relations map to relations.
    let mut failure = None;
    for g in &gens {
        let images: Vec<ArcVector> = space.relations().iter().map(|r| gr_act(g, m, r)).collect::<Result<_>>()?;
        let params = AParams { m: g.target_arity(m)?, min_trivalent: 0, ..space.params.clone() };
        let target = ASpace::from_seeds(params, images.iter().flat_map(|v| v.keys().cloned()).collect::<Vec<_>>())?;
        if let Some(bad) = images.iter().position(|img| !target.reduce(img).map(|r| r.is_zero()).unwrap_or(false)) {
            failure = Some(format!("{g:?} on relation {bad}"));
            break;
        }
    }
    checks.push(Check::new("relations_preserved", failure));

    // Degree, trivalent count and homotopy class.
    let mut failure = None;
    'grading: for g in &gens {
        let images = g.images(m)?;
        for c in space.span() {
            let expected = HomotopyClass(images.iter().map(|w| w.substitute(c.holonomies())).collect());
            for k in gr_act(g, m, &ArcVector::<Rational>::unit(c.clone()))?.keys() {
                if k.degree() != c.degree() || k.num_trivalent() < c.num_trivalent() || k.homotopy_class() != expected {
                    failure = Some(format!("{g:?} on {c:?}"));
                    break 'grading;
                }
            }
        }
    }
    checks.push(Check::new("gradings", failure));
    Ok(checks)
}

/// Every STU and IHX relation of `space` lies in a single homotopy class.
pub fn homotopy_invariance(space: &ASpace) -> Check {
    let bad = space.relations().iter().position(|r| {
        let mut classes = r.keys().map(CanonicalArcDiagram::homotopy_class);
        let first = classes.next();
        classes.any(|c| Some(c) != first)
    });
    Check::new("homotopy_invariance", bad.map(|i| format!("relation {i}")))
}

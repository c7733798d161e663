//! The CatLie-module structure on the spaces `J_d(k)`.
//!
//! `μ_i` glues legs `i` and `k + 1` of a `(k + 1)`-legged diagram to a new trivalent
//! vertex with cyclic order (edge from leg `i`, edge from leg `k + 1`, new leg), the
//! new leg taking label `i`. A Lie tree acts the same way through left-normed combs,
//! so the bracket `[a, b]` is the vertex (a, b, out).

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::diagram::{enumerate_diagrams, CanonicalDiagram};
use crate::error::{Error, Result};
use crate::freegroup::BeadAlphabet;
use crate::linalg::{EchelonBasis, Field};
use crate::perm::{next_permutation, permutations};
use crate::relations::JSpace;
use crate::report::Check;
use crate::{DiagramVector, Rational};

fn check_legs(c: &CanonicalDiagram, expected: usize) -> Result<()> {
    if c.num_legs() == expected {
        Ok(())
    } else {
        Err(Error::ArityMismatch { expected, found: c.num_legs() })
    }
}

/// Relabels legs by `sigma` (label `l` becomes `sigma[l - 1]`).
pub fn perm_action<F: Field>(sigma: &[u32], v: &DiagramVector<F>) -> Result<DiagramVector<F>> {
    v.flat_map(|c| {
        check_legs(c, sigma.len())?;
        Ok(c.to_diagram().relabel_legs(sigma)?.to_vector())
    })
}

/// A basis element of `CatLie(m, n)`: fiber `t` is a left-normed bracket of its
/// labels, the first being the fiber minimum; it becomes leg `t + 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CatLieElement {
    pub fibers: Vec<Vec<u32>>,
}

impl CatLieElement {
    pub fn source(&self) -> usize {
        self.fibers.iter().map(Vec::len).sum()
    }

    pub fn target(&self) -> usize {
        self.fibers.len()
    }

    pub fn act<F: Field>(&self, v: &DiagramVector<F>) -> Result<DiagramVector<F>> {
        v.flat_map(|c| {
            check_legs(c, self.source())?;
            Ok(c.to_diagram().glue_forest(&self.fibers)?.to_vector())
        })
    }
}

/// `μ_i : J(k+1) -> J(k)`.
pub fn mu_action<F: Field>(i: u32, v: &DiagramVector<F>) -> Result<DiagramVector<F>> {
    v.flat_map(|c| {
        let k = c.num_legs().checked_sub(1).ok_or(Error::ArityMismatch { expected: 1, found: 0 })?;
        if i == 0 || i as usize > k {
            return Err(Error::Precondition(format!("mu_{i} needs 1 <= i <= {k}")));
        }
        Ok(c.to_diagram().glue_forest(&mu_fibers(i, k))?.to_vector())
    })
}

fn mu_fibers(i: u32, k: usize) -> Vec<Vec<u32>> {
    (1..=k as u32).map(|j| if j == i { vec![i, k as u32 + 1] } else { vec![j] }).collect()
}

/// `Σ_{i=1..k} μ_i` on a vector of `(k + 1)`-legged diagrams.
pub fn mu_sum<F: Field>(v: &DiagramVector<F>) -> Result<DiagramVector<F>> {
    let mut out = DiagramVector::zero();
    let Some(k) = v.keys().next().map(|c| c.num_legs().saturating_sub(1)) else {
        return Ok(out);
    };
    for i in 1..=k as u32 {
        out.add(&mu_action(i, v)?);
    }
    Ok(out)
}

/// Basis of `CatLie(m, n)`: surjections with a left-normed comb on each fiber.
pub fn catlie_basis(m: usize, n: usize) -> Vec<CatLieElement> {
    let mut out = Vec::new();
    if n > m || (n == 0 && m > 0) {
        return out;
    }
    let mut f = vec![0usize; m];
    loop {
        let mut fibers: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (a, &t) in f.iter().enumerate() {
            fibers[t].push(a as u32 + 1);
        }
        if fibers.iter().all(|x| !x.is_empty()) {
            let mut acc = vec![Vec::<Vec<u32>>::new()];
            for fiber in &fibers {
                let mut rest = fiber[1..].to_vec();
                let mut words = Vec::new();
                loop {
                    let mut w = vec![fiber[0]];
                    w.extend(&rest);
                    words.push(w);
                    if !next_permutation(&mut rest) {
                        break;
                    }
                }
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        words.iter().map(move |w| {
                            let mut p = prefix.clone();
                            p.push(w.clone());
                            p
                        })
                    })
                    .collect();
            }
            out.extend(acc.into_iter().map(|fibers| CatLieElement { fibers }));
        }
        // Next set map in lexicographic order.
        let mut i = m;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            f[i] += 1;
            if f[i] < n {
                break;
            }
            f[i] = 0;
        }
    }
}

/// The cells `J_d(0..=2d+1)` truncated compatibly with the CatLie structure: each
/// cell is closed under leg permutations, IHX, and contains the `μ` images of the
/// cell above it.
#[derive(Clone, Debug)]
pub struct JFamily<F: Field = Rational> {
    pub d: usize,
    pub alphabet: BeadAlphabet,
    pub cells: Vec<JSpace<F>>,
}

fn orbit_closure(seeds: BTreeSet<CanonicalDiagram>, k: usize) -> BTreeSet<CanonicalDiagram> {
    let mut out = BTreeSet::new();
    let perms = permutations(k);
    for c in &seeds {
        let rep = c.to_diagram();
        for p in &perms {
            if let Some(x) = rep.relabel_legs(p).expect("arity checked").canonicalize().diagram() {
                out.insert(x.clone());
            }
        }
    }
    out
}

impl<F: Field> JFamily<F> {
    pub fn build(d: usize, alphabet: &BeadAlphabet) -> Result<Self> {
        let mut cells: Vec<Option<JSpace<F>>> = (0..=2 * d + 1).map(|_| None).collect();
        cells[2 * d + 1] = Some(JSpace::from_seeds(d, 2 * d + 1, &alphabet.label, [])?);
        for k in (0..=2 * d).rev() {
            let mut seeds: BTreeSet<CanonicalDiagram> = enumerate_diagrams(d, k, alphabet).into_iter().collect();
            let above = cells[k + 1].as_ref().expect("built top-down");
            for c in above.span() {
                for i in 1..=k as u32 {
                    let img = mu_action::<F>(i, &DiagramVector::unit(c.clone()))?;
                    seeds.extend(img.keys().cloned());
                }
            }
            if !alphabet.is_trivial() {
                seeds = orbit_closure(seeds, k);
            }
            cells[k] = Some(JSpace::from_seeds(d, k, &alphabet.label, seeds)?);
        }
        Ok(JFamily { d, alphabet: alphabet.clone(), cells: cells.into_iter().map(|c| c.expect("all built")).collect() })
    }

    pub fn cell(&self, k: usize) -> Option<&JSpace<F>> {
        self.cells.get(k)
    }

    /// Dimensions of `J_d(k)` for `k <= l`, zero above.
    pub fn truncate(&self, l: usize) -> Vec<usize> {
        (0..self.cells.len()).map(|k| if k <= l { self.cells[k].dim() } else { 0 }).collect()
    }
}

/// The matrix of `Σ μ_i : J(k+1) -> J(k)`, one reduced column per basis class.
#[derive(Clone, Debug)]
pub struct MuMatrix<F: Field = Rational> {
    pub k: usize,
    pub columns: Vec<(CanonicalDiagram, DiagramVector<F>)>,
}

impl<F: Field> MuMatrix<F> {
    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(|(_, img)| img.is_zero())
    }

    pub fn rank(&self) -> usize {
        let mut b = EchelonBasis::new();
        for (_, img) in &self.columns {
            b.insert(img);
        }
        b.rank()
    }
}

pub fn mu_transform<F: Field>(family: &JFamily<F>, k: usize) -> Result<MuMatrix<F>> {
    let (Some(source), Some(target)) = (family.cell(k + 1), family.cell(k)) else {
        return Err(Error::Precondition(format!("arity {k} outside the family")));
    };
    let mut columns = Vec::new();
    for b in source.quotient_basis() {
        let img = mu_sum(&DiagramVector::<F>::unit(b.clone()))?;
        columns.push((b.clone(), target.reduce(&img)?));
    }
    Ok(MuMatrix { k, columns })
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OuterWitness {
    pub k: usize,
    pub source: CanonicalDiagram,
    /// Reduced image in `J(k)`.
    pub image: DiagramVector,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct OuterReport {
    pub d: usize,
    pub alphabet: String,
    pub outer: bool,
    pub witness: Option<OuterWitness>,
}

pub fn outer_check_family(family: &JFamily) -> Result<OuterReport> {
    let d = family.d;
    for k in 0..2 * d {
        let mu = mu_transform(family, k)?;
        if let Some((source, image)) = mu.columns.into_iter().find(|(_, img)| !img.is_zero()) {
            return Ok(OuterReport {
                d,
                alphabet: family.alphabet.label.clone(),
                outer: false,
                witness: Some(OuterWitness { k, source, image }),
            });
        }
    }
    Ok(OuterReport { d, alphabet: family.alphabet.label.clone(), outer: true, witness: None })
}

/// Whether `μ` vanishes on `J_d` at every arity `k <= 2d - 1`.
pub fn outer_check(d: usize, beads: &BeadAlphabet) -> Result<OuterReport> {
    outer_check_family(&JFamily::build(d, beads)?)
}

/// `dim coker(μ : J(k+1) -> J(k))`.
pub fn outer_quotient<F: Field>(family: &JFamily<F>, k: usize) -> Result<usize> {
    let target = family.cell(k).ok_or_else(|| Error::Precondition(format!("arity {k} outside the family")))?;
    Ok(target.dim() - mu_transform(family, k)?.rank())
}

/// The class of `Σ μ_i(v)` in a `J_d(k)` built from the closure of its own terms;
/// nonzero here certifies nonzero in the untruncated space.
pub fn mu_image_class(d: usize, v: &DiagramVector) -> Result<(JSpace, DiagramVector)> {
    let img = mu_sum(v)?;
    let k = v.keys().next().map(|c| c.num_legs().saturating_sub(1)).unwrap_or(0);
    let space = JSpace::from_seeds(d, k, "closure", img.keys().cloned())?;
    let reduced = space.reduce(&img)?;
    Ok((space, reduced))
}

/// Sum of the three cyclic combs on legs 1, 2, 3 and the sum of the two orders on
/// legs 1, 2, other legs kept as singletons, each zero modulo IHX on every basis diagram.
pub fn jacobi_identity(family: &JFamily) -> Result<Vec<Check>> {
    let singletons = |from: u32, to: u32| (from..=to).map(|l| vec![l]);
    let vanishes = |d: usize, k: usize, v: &DiagramVector| -> Result<bool> {
        // Zero in the closure of its own terms implies zero in J_d(k).
        Ok(JSpace::<Rational>::from_seeds(d, k, "closure", v.keys().cloned())?.reduce(v)?.is_zero())
    };
    let mut jacobi = None;
    let mut antisymmetry = None;
    for (s, cell) in family.cells.iter().enumerate() {
        for b in cell.quotient_basis() {
            let v = DiagramVector::unit(b.clone());
            if s >= 3 && jacobi.is_none() {
                let mut sum = DiagramVector::zero();
                for fiber in [[1, 2, 3], [2, 3, 1], [3, 1, 2]] {
                    let fibers = std::iter::once(fiber.to_vec()).chain(singletons(4, s as u32)).collect();
                    sum.add(&CatLieElement { fibers }.act(&v)?);
                }
                if !vanishes(family.d, s - 2, &sum)? {
                    jacobi = Some(format!("{b:?}"));
                }
            }
            if s >= 2 && antisymmetry.is_none() {
                let mut sum = DiagramVector::zero();
                for fiber in [[1, 2], [2, 1]] {
                    let fibers = std::iter::once(fiber.to_vec()).chain(singletons(3, s as u32)).collect();
                    sum.add(&CatLieElement { fibers }.act(&v)?);
                }
                if !vanishes(family.d, s - 1, &sum)? {
                    antisymmetry = Some(format!("{b:?}"));
                }
            }
        }
    }
    Ok(vec![Check::new("jacobi", jacobi), Check::new("antisymmetry", antisymmetry)])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::OpenJacobiDiagram;
    use crate::freegroup::Word;
    use crate::perm::inverse;

    fn vec_of(d: &OpenJacobiDiagram) -> DiagramVector {
        d.to_vector()
    }

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn perm_action_on_struts() {
        let plain = vec_of(&OpenJacobiDiagram::strut(1, 2, Word::identity()).unwrap());
        assert_eq!(perm_action(&[1, 2], &plain).unwrap(), plain);
        assert_eq!(perm_action(&[2, 1], &plain).unwrap(), plain);
        let beaded = vec_of(&OpenJacobiDiagram::strut(1, 2, w("x1")).unwrap());
        let inverse_bead = vec_of(&OpenJacobiDiagram::strut(1, 2, w("x1^-1")).unwrap());
        assert_eq!(perm_action(&[2, 1], &beaded).unwrap(), inverse_bead);
    }

    #[test]
    fn mu_on_struts() {
        let plain = vec_of(&OpenJacobiDiagram::strut(1, 2, Word::identity()).unwrap());
        assert!(mu_action(1, &plain).unwrap().is_zero());
        let a = mu_action(1, &vec_of(&OpenJacobiDiagram::strut(1, 2, w("x1")).unwrap())).unwrap();
        let b = mu_action(1, &vec_of(&OpenJacobiDiagram::strut(1, 2, w("x1^-1")).unwrap())).unwrap();
        assert!(!a.is_zero());
        let mut sum = a.clone();
        sum.add(&b);
        assert!(sum.is_zero());
        assert_eq!(a, vec_of(&OpenJacobiDiagram::tadpole(w("x1"))));
        assert!(mu_action(2, &plain).is_err());
    }

    #[test]
    fn catlie_dimensions() {
        assert_eq!(catlie_basis(2, 1).len(), 1);
        assert_eq!(catlie_basis(2, 2).len(), 2);
        assert!(catlie_basis(2, 3).is_empty());
        assert_eq!(catlie_basis(3, 1).len(), 2);
        assert_eq!(catlie_basis(4, 1).len(), 6);
        // brute-force sum over surjections of the product of (|fiber| - 1)!
        let brute: usize = {
            let mut total = 0;
            for f in 0..16usize {
                let fibers = [(0..4).filter(|a| f >> a & 1 == 0).count(), (0..4).filter(|a| f >> a & 1 == 1).count()];
                if fibers.iter().all(|&s| s > 0) {
                    total += fibers.iter().map(|&s| crate::perm::factorial(s - 1) as usize).product::<usize>();
                }
            }
            total
        };
        assert_eq!(catlie_basis(4, 2).len(), brute);
        assert_eq!(catlie_basis(0, 0).len(), 1);
    }

    #[test]
    fn jacobi_identity_of_combs() {
        for (d, beads) in [(1, BeadAlphabet::trivial()), (2, BeadAlphabet::trivial()), (3, BeadAlphabet::trivial()), (1, BeadAlphabet::generated(1, 1))] {
            let checks = jacobi_identity(&JFamily::build(d, &beads).unwrap()).unwrap();
            assert!(crate::report::all_pass(&checks), "d = {d}: {checks:?}");
        }
    }

    #[test]
    fn mu_is_equivariant() {
        let fam = JFamily::<Rational>::build(2, &BeadAlphabet::trivial()).unwrap();
        let k = 3;
        for b in fam.cell(k + 1).unwrap().span() {
            let v = DiagramVector::<Rational>::unit(b.clone());
            for sigma in permutations(k) {
                let mut ext = sigma.clone();
                ext.push(k as u32 + 1);
                for i in 1..=k as u32 {
                    let lhs = mu_action(i, &perm_action(&ext, &v).unwrap()).unwrap();
                    let j = inverse(&sigma)[i as usize - 1];
                    let rhs = perm_action(&sigma, &mu_action(j, &v).unwrap()).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn outer_for_trivial_beads_small_degree() {
        for d in 0..=2 {
            assert!(outer_check(d, &BeadAlphabet::trivial()).unwrap().outer, "d = {d}");
        }
        let fam = JFamily::<Rational>::build(1, &BeadAlphabet::trivial()).unwrap();
        assert!(mu_transform(&fam, 1).unwrap().is_zero());
        assert_eq!(outer_quotient(&fam, 2).unwrap(), fam.cell(2).unwrap().dim());
        assert_eq!(fam.truncate(1), vec![0, 0, 0, 0]);
        assert_eq!(fam.truncate(2), vec![0, 0, 1, 0]);
    }

    #[test]
    fn beaded_degree_one_is_not_outer() {
        let a = BeadAlphabet::generated(1, 1);
        let report = outer_check(1, &a).unwrap();
        assert!(!report.outer);
        let wit = report.witness.unwrap();
        assert_eq!(wit.k, 1);
        let fam = JFamily::<Rational>::build(1, &a).unwrap();
        assert_eq!(outer_quotient(&fam, 1).unwrap(), 0);
        assert!(!mu_transform(&fam, 1).unwrap().is_zero());
    }

    #[test]
    fn surjective_below_top_arity() {
        let d = 2;
        let fam = JFamily::<Rational>::build(d, &BeadAlphabet::trivial()).unwrap();
        let top = fam.cell(2 * d).unwrap();
        for j in 1..2 * d {
            let target = fam.cell(j).unwrap();
            let mut b = EchelonBasis::new();
            for e in catlie_basis(2 * d, j) {
                for c in top.quotient_basis() {
                    b.insert(&target.reduce(&e.act(&DiagramVector::unit(c.clone())).unwrap()).unwrap());
                }
            }
            assert_eq!(b.rank(), target.dim(), "arity {j}");
        }
    }
}

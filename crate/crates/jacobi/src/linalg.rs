//! Exact sparse linear algebra over a field of characteristic zero.
//!
//! Vectors are keyed by any ordered type; the pivot of a row is its smallest key.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;
use std::ops::Neg;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Num;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact scalars. Implemented only for rational types; floating point is excluded on purpose.
pub trait Field: Clone + PartialEq + Debug + Num + Neg<Output = Self> + Send + Sync + 'static {
    fn from_int(v: i64) -> Self;

    /// `Some(n)` when the value is an integer that fits.
    fn to_int(&self) -> Option<i64>;
}

impl Field for BigRational {
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }

    fn to_int(&self) -> Option<i64> {
        if self.is_integer() {
            i64::try_from(self.to_integer()).ok()
        } else {
            None
        }
    }
}

macro_rules! small_ratio_field {
    ($t:ty) => {
        impl Field for Ratio<$t> {
            fn from_int(v: i64) -> Self {
                Ratio::from_integer(v as $t)
            }

            fn to_int(&self) -> Option<i64> {
                if self.is_integer() {
                    i64::try_from(self.to_integer()).ok()
                } else {
                    None
                }
            }
        }
    };
}

small_ratio_field!(i64);
small_ratio_field!(i128);

/// Finite linear combination; never stores a zero coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    into = "Vec<(K, F)>",
    from = "Vec<(K, F)>",
    bound(serialize = "K: Ord + Clone + Serialize, F: Field + Serialize"),
    bound(deserialize = "K: Ord + Clone + Deserialize<'de>, F: Field + Deserialize<'de>")
)]
pub struct SparseVector<K: Ord + Clone, F: Field> {
    entries: BTreeMap<K, F>,
}

impl<K: Ord + Clone, F: Field> From<SparseVector<K, F>> for Vec<(K, F)> {
    fn from(v: SparseVector<K, F>) -> Self {
        v.entries.into_iter().collect()
    }
}

impl<K: Ord + Clone, F: Field> From<Vec<(K, F)>> for SparseVector<K, F> {
    fn from(v: Vec<(K, F)>) -> Self {
        let mut out = SparseVector::zero();
        for (k, c) in v {
            out.add_term(k, c);
        }
        out
    }
}

impl<K: Ord + Clone, F: Field> Default for SparseVector<K, F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<K: Ord + Clone, F: Field> SparseVector<K, F> {
    pub fn zero() -> Self {
        SparseVector { entries: BTreeMap::new() }
    }

    pub fn unit(k: K) -> Self {
        Self::term(k, F::one())
    }

    pub fn term(k: K, c: F) -> Self {
        let mut v = Self::zero();
        v.add_term(k, c);
        v
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, k: &K) -> Option<&F> {
        self.entries.get(k)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &F)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &K> {
        self.entries.keys()
    }

    pub fn leading_key(&self) -> Option<&K> {
        self.entries.keys().next()
    }

    pub fn add_term(&mut self, k: K, c: F) {
        if c.is_zero() {
            return;
        }
        match self.entries.get_mut(&k) {
            Some(e) => {
                *e = e.clone() + c;
                if e.is_zero() {
                    self.entries.remove(&k);
                }
            }
            None => {
                self.entries.insert(k, c);
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &F) {
        if c.is_zero() {
            return;
        }
        for (k, x) in &other.entries {
            self.add_term(k.clone(), x.clone() * c.clone());
        }
    }

    pub fn add(&mut self, other: &Self) {
        self.add_scaled(other, &F::one());
    }

    pub fn sub(&mut self, other: &Self) {
        self.add_scaled(other, &-F::one());
    }

    pub fn scaled(&self, c: &F) -> Self {
        let mut out = Self::zero();
        out.add_scaled(self, c);
        out
    }

    /// Reindexes through `f`, summing colliding keys.
    pub fn map_keys<K2: Ord + Clone>(&self, mut f: impl FnMut(&K) -> K2) -> SparseVector<K2, F> {
        let mut out = SparseVector::zero();
        for (k, c) in &self.entries {
            out.add_term(f(k), c.clone());
        }
        out
    }

    /// Linear extension of `f`, which maps a key to a vector.
    pub fn flat_map<K2: Ord + Clone, E>(
        &self,
        mut f: impl FnMut(&K) -> std::result::Result<SparseVector<K2, F>, E>,
    ) -> std::result::Result<SparseVector<K2, F>, E> {
        let mut out = SparseVector::zero();
        for (k, c) in &self.entries {
            out.add_scaled(&f(k)?, c);
        }
        Ok(out)
    }
}

/// Fully reduced row echelon form, rows indexed by pivot key.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(
    into = "Vec<SparseVector<K, F>>",
    from = "Vec<SparseVector<K, F>>",
    bound(serialize = "K: Ord + Clone + Serialize, F: Field + Serialize"),
    bound(deserialize = "K: Ord + Clone + Deserialize<'de>, F: Field + Deserialize<'de>")
)]
pub struct EchelonBasis<K: Ord + Clone, F: Field> {
    rows: BTreeMap<K, SparseVector<K, F>>,
}

impl<K: Ord + Clone, F: Field> From<EchelonBasis<K, F>> for Vec<SparseVector<K, F>> {
    fn from(b: EchelonBasis<K, F>) -> Self {
        b.rows.into_values().collect()
    }
}

impl<K: Ord + Clone, F: Field> From<Vec<SparseVector<K, F>>> for EchelonBasis<K, F> {
    fn from(rows: Vec<SparseVector<K, F>>) -> Self {
        echelonize(rows)
    }
}

impl<K: Ord + Clone, F: Field> Default for EchelonBasis<K, F> {
    fn default() -> Self {
        Self::new()
    }
}

impl<K: Ord + Clone, F: Field> EchelonBasis<K, F> {
    pub fn new() -> Self {
        EchelonBasis { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, k: &K) -> bool {
        self.rows.contains_key(k)
    }

    pub fn pivots(&self) -> impl Iterator<Item = &K> {
        self.rows.keys()
    }

    pub fn rows(&self) -> impl Iterator<Item = &SparseVector<K, F>> {
        self.rows.values()
    }

    /// `v` minus a combination of rows; the result has no pivot support.
    pub fn reduce(&self, v: &SparseVector<K, F>) -> SparseVector<K, F> {
        let hits: Vec<(&K, F)> = v
            .iter()
            .filter_map(|(k, c)| self.rows.get_key_value(k).map(|(pk, _)| (pk, c.clone())))
            .collect();
        let mut out = v.clone();
        // Rows carry no foreign pivots, so each pivot coefficient is read once.
        for (k, c) in hits {
            out.add_scaled(&self.rows[k], &-c);
        }
        out
    }

    pub fn contains(&self, v: &SparseVector<K, F>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the row space. Returns whether the rank grew.
    pub fn insert(&mut self, v: &SparseVector<K, F>) -> bool {
        let r = self.reduce(v);
        let Some(p) = r.leading_key().cloned() else {
            return false;
        };
        let lead = r.get(&p).expect("leading key present").clone();
        let r = r.scaled(&(F::one() / lead));
        for row in self.rows.values_mut() {
            if let Some(c) = row.get(&p).cloned() {
                row.add_scaled(&r, &-c);
            }
        }
        self.rows.insert(p, r);
        true
    }
}

pub fn echelonize<K: Ord + Clone, F: Field>(vectors: impl IntoIterator<Item = SparseVector<K, F>>) -> EchelonBasis<K, F> {
    let mut b = EchelonBasis::new();
    for v in vectors {
        b.insert(&v);
    }
    b
}

pub fn reduce_mod<K: Ord + Clone, F: Field>(v: &SparseVector<K, F>, b: &EchelonBasis<K, F>) -> SparseVector<K, F> {
    b.reduce(v)
}

pub fn rank<K: Ord + Clone, F: Field>(vectors: impl IntoIterator<Item = SparseVector<K, F>>) -> usize {
    echelonize(vectors).rank()
}

/// Dimension of `span(span)` modulo `span(relations)`.
///
/// Every relation must be supported on keys occurring in `span`.
pub fn quotient_dim<K: Ord + Clone, F: Field>(
    span: &[SparseVector<K, F>],
    relations: &[SparseVector<K, F>],
) -> Result<usize> {
    let universe: BTreeSet<&K> = span.iter().flat_map(|v| v.keys()).collect();
    if relations.iter().any(|r| r.keys().any(|k| !universe.contains(k))) {
        return Err(Error::RelationOutsideSpan);
    }
    let rel = echelonize(relations.iter().cloned());
    Ok(rank(span.iter().map(|v| rel.reduce(v))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    type Q = BigRational;
    type V = SparseVector<u32, Q>;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn vec_of(pairs: &[(u32, i64)]) -> V {
        pairs.iter().map(|&(k, c)| (k, q(c))).collect::<Vec<_>>().into()
    }

    #[test]
    fn sparse_vector_drops_zeros() {
        let mut v = vec_of(&[(1, 2), (2, 3)]);
        v.add_term(1, q(-2));
        assert_eq!(v, vec_of(&[(2, 3)]));
        assert!(vec_of(&[(1, 0)]).is_zero());
    }

    #[test]
    fn echelonize_examples() {
        assert_eq!(echelonize(vec![vec_of(&[(1, 1), (2, 1)]), vec_of(&[(2, 1)])]).rank(), 2);
        assert_eq!(echelonize(vec![vec_of(&[(1, 1)]), vec_of(&[(1, 2)])]).rank(), 1);
        assert_eq!(echelonize(Vec::<V>::new()).rank(), 0);
    }

    #[test]
    fn echelon_rows_are_fully_reduced() {
        let b = echelonize(vec![vec_of(&[(3, 1), (4, 2)]), vec_of(&[(1, 1), (3, 5)]), vec_of(&[(2, 7), (4, 1)])]);
        let pivots: Vec<u32> = b.pivots().copied().collect();
        for row in b.rows() {
            let p = *row.leading_key().unwrap();
            assert_eq!(row.get(&p), Some(&q(1)));
            for other in &pivots {
                if *other != p {
                    assert!(row.get(other).is_none());
                }
            }
        }
    }

    #[test]
    fn reduce_mod_examples() {
        let b = echelonize(vec![vec_of(&[(1, 1)])]);
        assert_eq!(reduce_mod(&vec_of(&[(1, 1), (2, 1)]), &b), vec_of(&[(2, 1)]));
        assert!(reduce_mod(&vec_of(&[(1, 1)]), &b).is_zero());
        let empty = EchelonBasis::new();
        assert_eq!(reduce_mod(&vec_of(&[(5, 3)]), &empty), vec_of(&[(5, 3)]));
    }

    #[test]
    fn quotient_dim_examples() {
        let e = |k| vec_of(&[(k, 1)]);
        assert_eq!(quotient_dim(&[e(1), e(2)], &[vec_of(&[(1, 1), (2, 1)])]).unwrap(), 1);
        assert_eq!(quotient_dim(&[e(1)], &[]).unwrap(), 1);
        let rels = [vec_of(&[(1, 1), (2, -1)]), vec_of(&[(2, 1), (3, -1)])];
        assert_eq!(quotient_dim(&[e(1), e(2), e(3)], &rels).unwrap(), 1);
        assert_eq!(quotient_dim(&[e(1)], &[e(2)]), Err(Error::RelationOutsideSpan));
    }

    #[test]
    fn small_ratio_types_agree() {
        let rows = |f: fn(i64) -> Ratio<i64>| {
            vec![
                SparseVector::<u32, Ratio<i64>>::from(vec![(1, f(2)), (2, f(3))]),
                SparseVector::from(vec![(1, f(4)), (2, f(6))]),
                SparseVector::from(vec![(3, f(1))]),
            ]
        };
        assert_eq!(echelonize(rows(Ratio::from_integer)).rank(), 2);
    }

    fn arb_vectors() -> impl Strategy<Value = Vec<Vec<(u32, i64)>>> {
        prop::collection::vec(prop::collection::vec((0u32..6, -3i64..4), 0..5), 0..6)
    }

    proptest! {
        #[test]
        fn rank_invariant_under_permutation_and_scaling(raw in arb_vectors(), scale in 1i64..5, shift in 0usize..6) {
            let vs: Vec<V> = raw.iter().map(|p| vec_of(p)).collect();
            let r = echelonize(vs.clone()).rank();
            let mut permuted = vs.clone();
            if !permuted.is_empty() {
                let s = shift % permuted.len();
                permuted.rotate_left(s);
            }
            let scaled: Vec<V> = permuted.iter().map(|v| v.scaled(&Q::new(scale.into(), 3.into()))).collect();
            prop_assert_eq!(echelonize(scaled).rank(), r);
        }

        #[test]
        fn reduce_is_idempotent_and_kills_span(raw in arb_vectors(), probe in prop::collection::vec((0u32..6, -3i64..4), 0..5)) {
            let vs: Vec<V> = raw.iter().map(|p| vec_of(p)).collect();
            let b = echelonize(vs.clone());
            let v = vec_of(&probe);
            let once = b.reduce(&v);
            prop_assert_eq!(b.reduce(&once), once.clone());
            for k in b.pivots() {
                prop_assert!(once.get(k).is_none());
            }
            for row in &vs {
                prop_assert!(b.contains(row));
            }
        }

        #[test]
        fn quotient_dim_matches_joint_rank(raw in arb_vectors(), rel in arb_vectors()) {
            let span: Vec<V> = (0u32..6).map(|k| vec_of(&[(k, 1)])).chain(raw.iter().map(|p| vec_of(p))).collect();
            let rels: Vec<V> = rel.iter().map(|p| vec_of(p)).collect();
            let joint = rank(span.iter().chain(rels.iter()).cloned());
            prop_assert_eq!(quotient_dim(&span, &rels).unwrap(), joint - rank(rels.clone()));
        }
    }
}

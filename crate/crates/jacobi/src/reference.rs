//! Closed-form dimensions that do not go through diagram spaces on arcs.

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::catlie::perm_action;
use crate::error::{Error, Result};
use crate::freegroup::BeadAlphabet;
use crate::linalg::{rank, Field, SparseVector};
use crate::perm::{cycle_count, factorial, permutations};
use crate::relations::j_space;
use crate::{DiagramVector, Rational};

/// `P_2(F_m) = a ⊕ a^{⊗2}` as a vector space, with the involution induced by inversion.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PassiSpace {
    pub m: usize,
    /// Row-major, `(m + m²)²` entries; indices `0..m` span `a`, then `m + i·m + j` spans `e_i ⊗ e_j`.
    pub sigma: Vec<Vec<i64>>,
}

impl PassiSpace {
    pub fn dim(&self) -> usize {
        self.sigma.len()
    }

    pub fn is_involution(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..n).all(|j| (0..n).map(|k| self.sigma[i][k] * self.sigma[k][j]).sum::<i64>() == i64::from(i == j)))
    }

    pub fn trace(&self) -> i64 {
        (0..self.dim()).map(|i| self.sigma[i][i]).sum()
    }
}

/// `-1` on `a`, the place permutation on `a^{⊗2}`.
pub fn passi_sigma(m: usize) -> PassiSpace {
    let n = m + m * m;
    let mut sigma = vec![vec![0i64; n]; n];
    for i in 0..m {
        sigma[i][i] = -1;
        for j in 0..m {
            sigma[m + j * m + i][m + i * m + j] = 1;
        }
    }
    PassiSpace { m, sigma }
}

/// `dim (P_2(F_m)^# ⊗ K[S])_{S_2}`, the involution acting on `S` by inversion.
pub fn a11_reference_dim(beads: &BeadAlphabet, m: usize) -> Result<usize> {
    if !beads.elements.iter().all(|w| beads.contains(&w.inv())) {
        return Err(Error::Precondition(format!("alphabet {} is not closed under inversion", beads.label)));
    }
    let inv = beads.inversion();
    let p = passi_sigma(m);
    let s = beads.len();
    // Columns of (1 + σᵀ ⊗ inv) / 2; the factor 1/2 does not change the rank.
    let columns = (0..p.dim()).flat_map(|a| {
        let p = &p;
        let inv = &inv;
        (0..s).map(move |x| {
            let mut col: SparseVector<usize, Rational> = SparseVector::unit(a * s + x);
            for b in 0..p.dim() {
                if p.sigma[a][b] != 0 {
                    col.add_term(b * s + inv[x], Rational::from_int(p.sigma[a][b]));
                }
            }
            col
        })
    });
    Ok(rank(columns))
}

/// A weakly decreasing sequence of positive parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Partition(pub Vec<usize>);

impl Partition {
    pub fn size(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn doubled(&self) -> Partition {
        Partition(self.0.iter().map(|p| 2 * p).collect())
    }
}

/// Partitions of `d` in decreasing lexicographic order.
pub fn partitions(d: usize) -> Vec<Partition> {
    fn go(rest: usize, max: usize, prefix: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rest == 0 {
            out.push(Partition(prefix.clone()));
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            prefix.push(part);
            go(rest - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(d, d, &mut Vec::new(), &mut out);
    out
}

/// `dim S_λ(K^m)` by the hook-content formula.
pub fn schur_dim(lambda: &Partition, m: usize) -> usize {
    if lambda.0.len() > m {
        return 0;
    }
    let conj: Vec<usize> = (0..lambda.0.first().copied().unwrap_or(0)).map(|j| lambda.0.iter().filter(|&&r| r > j).count()).collect();
    let mut num = BigUint::one();
    let mut den = BigUint::one();
    for (i, &row) in lambda.0.iter().enumerate() {
        for (j, &col) in conj.iter().enumerate().take(row) {
            num *= BigUint::from(m + j - i);
            den *= BigUint::from((row - j - 1) + (col - i - 1) + 1);
        }
    }
    debug_assert!((&num % &den).is_zero());
    (num / den).to_usize().expect("dimension fits")
}

/// `Σ_{λ ⊢ d} dim S_{2λ}(K^m)`.
pub fn b_d0_reference(d: usize, m: usize) -> usize {
    partitions(d).iter().map(|l| schur_dim(&l.doubled(), m)).sum()
}

/// `dim ((K^m)^{⊗k} ⊗ D_k)_{S_k}` with `k = 2d - i` and `D_k = J_d(k)` without beads.
pub fn b_di_dim(d: usize, i: usize, m: usize) -> Result<usize> {
    if i > 2 * d {
        return Err(Error::Precondition(format!("i = {i} exceeds 2d = {}", 2 * d)));
    }
    let k = 2 * d - i;
    let space = j_space(d, k, &BeadAlphabet::trivial())?;
    let basis = space.quotient_basis();
    if basis.is_empty() {
        return Ok(0);
    }
    let mut total = Rational::zero();
    for sigma in permutations(k) {
        let mut tr = Rational::zero();
        for b in &basis {
            let img = space.reduce(&perm_action(&sigma, &DiagramVector::unit((*b).clone()))?)?;
            if let Some(c) = img.get(b) {
                tr += c;
            }
        }
        total += Rational::from_int((m as i64).pow(cycle_count(&sigma) as u32)) * tr;
    }
    total /= Rational::from_int(factorial(k) as i64);
    total.to_int().map(|v| v as usize).ok_or_else(|| Error::Precondition(format!("non-integral coinvariant dimension {total}")))
}

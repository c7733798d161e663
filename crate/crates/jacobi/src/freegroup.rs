//! Reduced words in the free groups `F_n` and finite symmetric bead alphabets.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator `x_gen` or its inverse. Generators are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: u32,
    pub inv: bool,
}

impl Letter {
    pub fn new(gen: u32, inv: bool) -> Self {
        assert!(gen >= 1, "generator indices start at 1");
        Letter { gen, inv }
    }

    pub fn inverse(self) -> Self {
        Letter { gen: self.gen, inv: !self.inv }
    }

    fn sign_key(self) -> u8 {
        // x^-1 sorts before x.
        if self.inv {
            0
        } else {
            1
        }
    }
}

impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.gen, self.sign_key()).cmp(&(other.gen, other.sign_key()))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A freely reduced word. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word { letters: Vec::new() }
    }

    /// The generator `x_i`.
    pub fn gen(i: u32) -> Self {
        Word { letters: vec![Letter::new(i, false)] }
    }

    /// Reduces an arbitrary letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            push_reduced(&mut out, l);
        }
        Word { letters: out }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    /// Largest generator index occurring, 0 for the identity.
    pub fn rank(&self) -> u32 {
        self.letters.iter().map(|l| l.gen).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Word { letters: out }
    }

    pub fn inv(&self) -> Word {
        Word { letters: self.letters.iter().rev().map(|l| l.inverse()).collect() }
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inv() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..e.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Image under the homomorphism `x_i -> images[i-1]`.
    pub fn substitute(&self, images: &[Word]) -> Word {
        let mut out = Word::identity();
        for l in &self.letters {
            let img = &images[(l.gen - 1) as usize];
            out = if l.inv { out.mul(&img.inv()) } else { out.mul(img) };
        }
        out
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    if out.last() == Some(&l.inverse()) {
        out.pop();
    } else {
        out.push(l);
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for (i, l) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "x{}", l.gen)?;
            if l.inv {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts `1`, or factors `xI` / `xI^K` joined by `*`.
    fn from_str(s: &str) -> Result<Word> {
        let err = |reason: &str| Error::ParseWord { input: s.to_string(), reason: reason.to_string() };
        let t = s.trim();
        if t == "1" {
            return Ok(Word::identity());
        }
        if t.is_empty() {
            return Err(err("empty input"));
        }
        let mut letters = Vec::new();
        for factor in t.split('*') {
            let factor = factor.trim();
            let body = factor.strip_prefix('x').ok_or_else(|| err("factor must start with `x`"))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e.parse::<i64>().map_err(|_| err("bad exponent"))?),
                None => (body, 1),
            };
            let gen: u32 = idx.parse().map_err(|_| err("bad generator index"))?;
            if gen == 0 {
                return Err(err("generator indices start at 1"));
            }
            for _ in 0..exp.unsigned_abs() {
                letters.push(Letter::new(gen, exp < 0));
            }
        }
        Ok(Word::from_letters(letters))
    }
}

impl From<Word> for String {
    fn from(w: Word) -> String {
        w.to_string()
    }
}

impl TryFrom<String> for Word {
    type Error = Error;
    fn try_from(s: String) -> Result<Word> {
        s.parse()
    }
}

/// A finite symmetric set of words containing 1, sorted by the word order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BeadAlphabet {
    pub rank: u32,
    pub depth: usize,
    pub elements: Vec<Word>,
    pub label: String,
}

impl BeadAlphabet {
    /// `{1}`.
    pub fn trivial() -> Self {
        BeadAlphabet { rank: 0, depth: 0, elements: vec![Word::identity()], label: "trivial".into() }
    }

    /// Closure of `x_1..x_n` at the given depth, written `gen:n:depth`.
    pub fn generated(n: u32, depth: usize) -> Self {
        let gens: Vec<Word> = (1..=n).map(Word::gen).collect();
        let mut a = alphabet_closure(&gens, depth);
        a.rank = n;
        a.label = format!("gen:{n}:{depth}");
        a
    }

    /// Parses `trivial` or `gen:N:DEPTH`.
    pub fn parse_spec(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        if spec == "trivial" {
            return Ok(Self::trivial());
        }
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() == 3 && parts[0] == "gen" {
            if let (Ok(n), Ok(depth)) = (parts[1].parse::<u32>(), parts[2].parse::<usize>()) {
                return Ok(Self::generated(n, depth));
            }
        }
        Err(Error::AlphabetSpec(spec.to_string()))
    }

    pub fn contains(&self, w: &Word) -> bool {
        self.elements.binary_search(w).is_ok()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.elements.len() == 1
    }

    /// The elements lying in `F_n`, i.e. using only `x_1..x_n`.
    pub fn restricted_to(&self, n: u32) -> Self {
        if n >= self.rank {
            return self.clone();
        }
        let elements: Vec<Word> = self.elements.iter().filter(|w| w.rank() <= n).cloned().collect();
        if elements.len() == 1 {
            return Self::trivial();
        }
        BeadAlphabet { rank: n, depth: self.depth, elements, label: format!("{}|{n}", self.label) }
    }

    /// Index of `w^{-1}` for each element.
    pub fn inversion(&self) -> Vec<usize> {
        self.elements
            .iter()
            .map(|w| self.elements.binary_search(&w.inv()).expect("alphabet is symmetric"))
            .collect()
    }
}

/// All reduced products of at most `depth` factors from `generators` and their inverses.
pub fn alphabet_closure(generators: &[Word], depth: usize) -> BeadAlphabet {
    let mut factors: BTreeSet<Word> = BTreeSet::new();
    for g in generators {
        if !g.is_identity() {
            factors.insert(g.clone());
            factors.insert(g.inv());
        }
    }
    let mut all: BTreeSet<Word> = BTreeSet::from([Word::identity()]);
    let mut frontier: Vec<Word> = vec![Word::identity()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &factors {
                let p = w.mul(g);
                if all.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    let rank = all.iter().map(Word::rank).max().unwrap_or(0);
    let label = format!(
        "closure[{}]:{depth}",
        generators.iter().map(Word::to_string).collect::<Vec<_>>().join(",")
    );
    BeadAlphabet { rank, depth, elements: all.into_iter().collect(), label }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn restriction_keeps_lower_generators() {
        let a = BeadAlphabet::generated(2, 1);
        assert_eq!(a.restricted_to(0), BeadAlphabet::trivial());
        let one = a.restricted_to(1);
        assert_eq!(one.elements, BeadAlphabet::generated(1, 1).elements);
        assert_eq!(one.rank, 1);
        assert_eq!(a.restricted_to(3), a);
    }

    #[test]
    fn multiplication_examples() {
        assert_eq!(w("x1").mul(&w("x1^-1")), Word::identity());
        assert_eq!(w("x1*x2").mul(&w("x2^-1*x3")), w("x1*x3"));
        assert_eq!(Word::identity().mul(&w("x2*x1")), w("x2*x1"));
    }

    #[test]
    fn inversion_examples() {
        assert_eq!(w("x1*x2").inv(), w("x2^-1*x1^-1"));
        assert_eq!(Word::identity().inv(), Word::identity());
        assert_eq!(w("x1^-1").inv(), w("x1"));
    }

    #[test]
    fn parse_print_round_trip() {
        for s in ["1", "x1", "x1^-1", "x1*x2^-1", "x3*x3*x1^-1*x2"] {
            assert_eq!(w(s).to_string(), s);
        }
        assert_eq!(w("x1^3").to_string(), "x1*x1*x1");
        assert_eq!(w("x1*x1^-1"), Word::identity());
        assert!("x0".parse::<Word>().is_err());
        assert!("y1".parse::<Word>().is_err());
        assert!("".parse::<Word>().is_err());
    }

    #[test]
    fn order_is_length_then_letters() {
        let mut v = [w("x1"), w("1"), w("x1^-1"), w("x2"), w("x1*x1")];
        v.sort();
        let s: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        assert_eq!(s, ["1", "x1^-1", "x1", "x2", "x1*x1"]);
    }

    #[test]
    fn closure_examples() {
        let x1 = Word::gen(1);
        let a = alphabet_closure(std::slice::from_ref(&x1), 1);
        assert_eq!(a.elements, vec![w("1"), w("x1^-1"), w("x1")]);
        let a = alphabet_closure(&[x1], 2);
        assert_eq!(a.elements, vec![w("1"), w("x1^-1"), w("x1"), w("x1^-2"), w("x1^2")]);
        assert_eq!(alphabet_closure(&[], 4).elements, vec![Word::identity()]);
    }

    #[test]
    fn generated_alphabet_sizes() {
        // 1 + 2n + 2n(2n-1) reduced words of length <= 2
        assert_eq!(BeadAlphabet::generated(1, 2).len(), 5);
        assert_eq!(BeadAlphabet::generated(2, 2).len(), 17);
        assert_eq!(BeadAlphabet::parse_spec("gen:1:1").unwrap().len(), 3);
        assert!(BeadAlphabet::parse_spec("gen:1").is_err());
        let a = BeadAlphabet::generated(2, 2);
        let inv = a.inversion();
        for (i, &j) in inv.iter().enumerate() {
            assert_eq!(a.elements[i].inv(), a.elements[j]);
        }
    }

    fn arb_word() -> impl Strategy<Value = Word> {
        prop::collection::vec((1u32..=3, any::<bool>()), 0..12)
            .prop_map(|v| Word::from_letters(v.into_iter().map(|(g, i)| Letter::new(g, i))))
    }

    proptest! {
        #[test]
        fn associativity(a in arb_word(), b in arb_word(), c in arb_word()) {
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        }

        #[test]
        fn inverse_of_product(a in arb_word(), b in arb_word()) {
            prop_assert_eq!(a.mul(&b).inv(), b.inv().mul(&a.inv()));
            prop_assert!(a.mul(&a.inv()).is_identity());
        }

        #[test]
        fn reduction_is_idempotent(a in arb_word()) {
            prop_assert_eq!(Word::from_letters(a.letters().iter().copied()), a.clone());
            prop_assert_eq!(a.to_string().parse::<Word>().unwrap(), a);
        }

        #[test]
        fn closure_is_monotone(n in 0u32..3, depth in 0usize..3) {
            let small = BeadAlphabet::generated(n, depth);
            let big = BeadAlphabet::generated(n, depth + 1);
            for x in &small.elements {
                prop_assert!(big.contains(x));
                prop_assert!(small.contains(&x.inv()));
            }
        }
    }
}

//! Tagged letters, multilinear words and free Lie monomials.
//!
//! Only multilinear components are ever needed: every tag occurs at most
//! once in a word or Lie monomial. The free Lie basis is the Lyndon basis
//! with standard bracketing.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::kernel::Scalar;

/// A letter label, local to its host object.
pub type Tag = u8;

/// A multilinear associative word.
pub type AssocWord = Vec<Tag>;

/// Word expansion with integer coefficients.
pub type WordSum = BTreeMap<AssocWord, i64>;

/// A binary bracket tree with tag leaves.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LieMono {
    Leaf(Tag),
    Br(Box<LieMono>, Box<LieMono>),
}

impl LieMono {
    pub fn leaf(t: Tag) -> Self {
        LieMono::Leaf(t)
    }

    pub fn br(a: LieMono, b: LieMono) -> Self {
        LieMono::Br(Box::new(a), Box::new(b))
    }

    /// Number of leaves.
    pub fn len(&self) -> usize {
        match self {
            LieMono::Leaf(_) => 1,
            LieMono::Br(a, b) => a.len() + b.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Leaves from left to right.
    pub fn tags(&self) -> Vec<Tag> {
        let mut out = Vec::with_capacity(self.len());
        self.collect_tags(&mut out);
        out
    }

    fn collect_tags(&self, out: &mut Vec<Tag>) {
        match self {
            LieMono::Leaf(t) => out.push(*t),
            LieMono::Br(a, b) => {
                a.collect_tags(out);
                b.collect_tags(out);
            }
        }
    }

    pub fn contains(&self, t: Tag) -> bool {
        match self {
            LieMono::Leaf(s) => *s == t,
            LieMono::Br(a, b) => a.contains(t) || b.contains(t),
        }
    }

    /// Replace the leaf `t` by `with`; returns false if `t` does not occur.
    pub fn graft(&mut self, t: Tag, with: &LieMono) -> bool {
        match self {
            LieMono::Leaf(s) if *s == t => {
                *self = with.clone();
                true
            }
            LieMono::Leaf(_) => false,
            LieMono::Br(a, b) => a.graft(t, with) || b.graft(t, with),
        }
    }

    /// Apply a tag relabeling.
    pub fn relabel(&self, f: &impl Fn(Tag) -> Tag) -> LieMono {
        match self {
            LieMono::Leaf(t) => LieMono::Leaf(f(*t)),
            LieMono::Br(a, b) => LieMono::br(a.relabel(f), b.relabel(f)),
        }
    }

    fn has_distinct_leaves(&self) -> bool {
        let mut t = self.tags();
        t.sort_unstable();
        t.windows(2).all(|w| w[0] != w[1])
    }
}

impl fmt::Debug for LieMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LieMono::Leaf(t) => write!(f, "{t}"),
            LieMono::Br(a, b) => write!(f, "[{a:?},{b:?}]"),
        }
    }
}

/// Image of a Lie monomial in the free associative algebra.
pub fn expand_mono(m: &LieMono) -> WordSum {
    match m {
        LieMono::Leaf(t) => BTreeMap::from([(vec![*t], 1)]),
        LieMono::Br(a, b) => {
            let ea = expand_mono(a);
            let eb = expand_mono(b);
            let mut out = WordSum::new();
            for (u, cu) in &ea {
                for (v, cv) in &eb {
                    let mut uv = u.clone();
                    uv.extend_from_slice(v);
                    *out.entry(uv).or_insert(0) += cu * cv;
                    let mut vu = v.clone();
                    vu.extend_from_slice(u);
                    *out.entry(vu).or_insert(0) -= cu * cv;
                }
            }
            out.retain(|_, c| *c != 0);
            out
        }
    }
}

/// A multilinear word is Lyndon exactly when its first letter is its minimum.
pub fn is_lyndon(w: &[Tag]) -> bool {
    match w.split_first() {
        None => false,
        Some((first, rest)) => rest.iter().all(|t| t > first),
    }
}

/// Strict Lyndon test for words that may repeat letters.
fn is_lyndon_general(w: &[Tag]) -> bool {
    !w.is_empty() && (1..w.len()).all(|i| w < &w[i..])
}

/// Standard bracketing of a Lyndon word: `w = uv` with `v` its longest proper Lyndon suffix.
pub fn standard_bracket(w: &[Tag]) -> LieMono {
    assert!(is_lyndon_general(w), "not a Lyndon word: {w:?}");
    if w.len() == 1 {
        return LieMono::Leaf(w[0]);
    }
    let split = (1..w.len()).find(|&i| is_lyndon_general(&w[i..])).expect("suffix of length one is Lyndon");
    LieMono::br(standard_bracket(&w[..split]), standard_bracket(&w[split..]))
}

/// Lyndon words (multilinear) on a tag set, in lexicographic order.
pub fn lyndon_words(tags: &[Tag]) -> Vec<AssocWord> {
    let mut sorted = tags.to_vec();
    sorted.sort_unstable();
    let Some((&first, rest)) = sorted.split_first() else { return Vec::new() };
    let mut out = Vec::new();
    for p in permutations(rest) {
        let mut w = vec![first];
        w.extend(p);
        out.push(w);
    }
    out
}

/// All permutations of a slice, in lexicographic order of positions.
pub fn permutations<T: Clone>(items: &[T]) -> Vec<Vec<T>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let x = rest.remove(i);
        for mut p in permutations(&rest) {
            p.insert(0, x.clone());
            out.push(p);
        }
    }
    out
}

/// An element of the free Lie algebra in the Lyndon basis (keys are Lyndon words).
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LieElement {
    terms: BTreeMap<AssocWord, Scalar>,
}

impl fmt::Debug for LieElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, c) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "{c:?}*{:?}", standard_bracket(w))?;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl LieElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn generator(t: Tag) -> Self {
        LieElement { terms: BTreeMap::from([(vec![t], Scalar::one())]) }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms keyed by Lyndon word.
    pub fn terms(&self) -> &BTreeMap<AssocWord, Scalar> {
        &self.terms
    }

    /// Basis monomials with coefficients, in standard bracketing.
    pub fn monomials(&self) -> impl Iterator<Item = (LieMono, &Scalar)> {
        self.terms.iter().map(|(w, c)| (standard_bracket(w), c))
    }

    fn tag_set(&self) -> Vec<Tag> {
        let mut t: Vec<Tag> = self.terms.keys().flatten().copied().collect();
        t.sort_unstable();
        t.dedup();
        t
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LieElement { terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        for (w, c) in &other.terms {
            let e = terms.entry(w.clone()).or_insert_with(Scalar::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(w);
            }
        }
        LieElement { terms }
    }

    /// Decompose a word sum known to be a Lie element. Returns `None` if it is not.
    pub fn from_words(words: &BTreeMap<AssocWord, Scalar>) -> Option<Self> {
        let mut rest = words.clone();
        rest.retain(|_, c| !c.is_zero());
        let mut terms = BTreeMap::new();
        while let Some((w, c)) = rest.iter().next().map(|(w, c)| (w.clone(), c.clone())) {
            if !is_lyndon(&w) {
                return None;
            }
            for (v, k) in expand_mono(&standard_bracket(&w)) {
                let e = rest.entry(v.clone()).or_insert_with(Scalar::zero);
                *e -= c.mul_int(k);
                if e.is_zero() {
                    rest.remove(&v);
                }
            }
            terms.insert(w, c);
        }
        Some(LieElement { terms })
    }
}

/// Rewrite a Lie monomial in the Lyndon basis.
pub fn lyndon_normalize(m: &LieMono) -> Result<LieElement> {
    if !m.has_distinct_leaves() {
        return Err(Error::invalid(format!("repeated leaf tag in {m:?}")));
    }
    let words = expand_mono(m).into_iter().map(|(w, c)| (w, Scalar::from_int(c))).collect();
    Ok(LieElement::from_words(&words).expect("bracket expansions are Lie elements"))
}

/// The normalized bracket of two Lie elements on disjoint tags.
pub fn bracket(a: &LieElement, b: &LieElement) -> Result<LieElement> {
    let ta = a.tag_set();
    if b.tag_set().iter().any(|t| ta.binary_search(t).is_ok()) {
        return Err(Error::invalid("bracket of Lie elements with overlapping tags"));
    }
    let mut words: BTreeMap<AssocWord, Scalar> = BTreeMap::new();
    for (ma, ca) in a.monomials() {
        for (mb, cb) in b.monomials() {
            let c = ca * cb;
            for (w, k) in expand_mono(&LieMono::br(ma.clone(), mb)) {
                *words.entry(w).or_insert_with(Scalar::zero) += c.mul_int(k);
            }
        }
    }
    Ok(LieElement::from_words(&words).expect("bracket expansions are Lie elements"))
}

/// Image of a Lie element among associative words.
pub fn expand_to_words(e: &LieElement) -> BTreeMap<AssocWord, Scalar> {
    let mut out: BTreeMap<AssocWord, Scalar> = BTreeMap::new();
    for (m, c) in e.monomials() {
        for (w, k) in expand_mono(&m) {
            *out.entry(w).or_insert_with(Scalar::zero) += c.mul_int(k);
        }
    }
    out.retain(|_, c| !c.is_zero());
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(t: Tag) -> LieMono {
        LieMono::leaf(t)
    }

    fn br(a: LieMono, b: LieMono) -> LieMono {
        LieMono::br(a, b)
    }

    /// Commutator expansion written independently of `expand_mono`.
    fn oracle(m: &LieMono) -> BTreeMap<AssocWord, i64> {
        fn go(m: &LieMono) -> Vec<(i64, AssocWord)> {
            match m {
                LieMono::Leaf(t) => vec![(1, vec![*t])],
                LieMono::Br(a, b) => {
                    let (ea, eb) = (go(a), go(b));
                    let mut out = Vec::new();
                    for (x, u) in &ea {
                        for (y, v) in &eb {
                            out.push((x * y, [u.as_slice(), v.as_slice()].concat()));
                            out.push((-x * y, [v.as_slice(), u.as_slice()].concat()));
                        }
                    }
                    out
                }
            }
        }
        let mut acc = BTreeMap::new();
        for (c, w) in go(m) {
            *acc.entry(w).or_insert(0) += c;
        }
        acc.retain(|_, c| *c != 0);
        acc
    }

    #[test]
    fn normalize_examples() {
        let e = lyndon_normalize(&br(l(1), l(2))).unwrap();
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.terms()[&vec![1, 2]], Scalar::one());
        let e = lyndon_normalize(&br(l(2), l(1))).unwrap();
        assert_eq!(e.terms()[&vec![1, 2]], Scalar::from_int(-1));
        let m = br(br(l(1), l(3)), l(2));
        let e = lyndon_normalize(&m).unwrap();
        let back: BTreeMap<_, _> = expand_to_words(&e).into_iter().map(|(w, c)| (w, c.to_i64().unwrap())).collect();
        assert_eq!(back, oracle(&m));
        assert!(lyndon_normalize(&br(l(1), l(1))).is_err());
    }

    #[test]
    fn expand_examples() {
        assert_eq!(expand_mono(&l(1)), BTreeMap::from([(vec![1], 1)]));
        assert_eq!(expand_mono(&br(l(1), l(2))), BTreeMap::from([(vec![1, 2], 1), (vec![2, 1], -1)]));
        let m = br(br(l(1), l(2)), l(3));
        assert_eq!(expand_mono(&m).len(), 4);
        assert_eq!(expand_mono(&m), oracle(&m));
    }

    #[test]
    fn lyndon_dimension_is_factorial() {
        for n in 1..=5u8 {
            let tags: Vec<Tag> = (1..=n).collect();
            let words = lyndon_words(&tags);
            let expected: usize = (1..n as usize).product();
            assert_eq!(words.len(), expected);
            // Injectivity of the expansion: leading words are distinct Lyndon words.
            for w in &words {
                let exp = expand_mono(&standard_bracket(w));
                assert_eq!(exp.keys().next(), Some(w));
                assert_eq!(exp[w], 1);
            }
        }
    }

    #[test]
    fn bracket_examples() {
        let a = LieElement::generator(1);
        let b = LieElement::generator(2);
        let ab = bracket(&a, &b).unwrap();
        assert_eq!(ab.terms()[&vec![1, 2]], Scalar::one());
        assert_eq!(bracket(&b, &a).unwrap(), ab.scale(&Scalar::from_int(-1)));
        assert!(bracket(&a, &a).is_err());
    }
}

//! Chord diagram algebras `T_n`.
//!
//! Generators `t_ij = t_ji` (`i != j`) subject to the infinitesimal braid
//! relations. Elements are kept in the block normal form: a word in the
//! generators whose letters are sorted by their larger index, with arbitrary
//! order inside each block. Normalization rewrites the leftmost out-of-order
//! pair until none is left.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::kernel::Scalar;

/// A generator `t_ij` stored with `i < j`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Chord(pub u8, pub u8);

impl Chord {
    pub fn new(i: u8, j: u8) -> Self {
        assert!(i != j && i > 0 && j > 0, "bad chord t_{i}{j}");
        if i < j {
            Chord(i, j)
        } else {
            Chord(j, i)
        }
    }

    /// The block a letter belongs to: its larger strand index.
    pub fn block(self) -> u8 {
        self.1
    }
}

impl fmt::Debug for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}{}", self.0, self.1)
    }
}

/// A monomial: a word in the generators.
pub type ChordWord = Vec<Chord>;

fn is_normal(w: &[Chord]) -> bool {
    w.windows(2).all(|p| p[0].block() <= p[1].block())
}

thread_local! {
    static NF_CACHE: RefCell<FxHashMap<ChordWord, Rc<Vec<(ChordWord, i64)>>>> = RefCell::new(FxHashMap::default());
}

/// Normal form of a word as an integer combination of normal words.
pub fn normalize_word(w: &[Chord]) -> Rc<Vec<(ChordWord, i64)>> {
    if is_normal(w) {
        return Rc::new(vec![(w.to_vec(), 1)]);
    }
    if let Some(hit) = NF_CACHE.with(|c| c.borrow().get(w).cloned()) {
        return hit;
    }
    let k = (0..w.len() - 1).find(|&k| w[k].block() > w[k + 1].block()).expect("word is not normal");
    let (left, right) = (w[k], w[k + 1]);
    let (alpha, n) = (left.0, left.1);
    let mut rewrites: Vec<(i64, ChordWord)> = Vec::with_capacity(3);
    let splice = |mid: &[Chord]| {
        let mut v = Vec::with_capacity(w.len() + 1);
        v.extend_from_slice(&w[..k]);
        v.extend_from_slice(mid);
        v.extend_from_slice(&w[k + 2..]);
        v
    };
    rewrites.push((1, splice(&[right, left])));
    let other = if right.0 == alpha {
        Some(right.1)
    } else if right.1 == alpha {
        Some(right.0)
    } else {
        None
    };
    if let Some(delta) = other {
        // t_{αn} t_{αδ} = t_{αδ} t_{αn} + t_{δn} t_{αn} − t_{αn} t_{δn}
        let dn = Chord::new(delta, n);
        rewrites.push((1, splice(&[dn, left])));
        rewrites.push((-1, splice(&[left, dn])));
    }
    let mut acc: BTreeMap<ChordWord, i64> = BTreeMap::new();
    for (c, v) in rewrites {
        for (u, d) in normalize_word(&v).iter() {
            *acc.entry(u.clone()).or_insert(0) += c * d;
        }
    }
    let out: Rc<Vec<(ChordWord, i64)>> = Rc::new(acc.into_iter().filter(|(_, c)| *c != 0).collect());
    NF_CACHE.with(|c| c.borrow_mut().insert(w.to_vec(), out.clone()));
    out
}

/// An element of `T_n` in normal form.
#[derive(Clone, PartialEq, Eq)]
pub struct ChordElement {
    n: usize,
    terms: BTreeMap<ChordWord, Scalar>,
}

impl fmt::Debug for ChordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(w, c)| format!("{c:?}*{w:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl ChordElement {
    pub fn zero(n: usize) -> Self {
        ChordElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Scalar::one())
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        let mut e = Self::zero(n);
        if !c.is_zero() {
            e.terms.insert(Vec::new(), c);
        }
        e
    }

    /// The generator `t_ij`.
    pub fn t(n: usize, i: u8, j: u8) -> Self {
        assert!((i as usize) <= n && (j as usize) <= n, "strand out of range");
        let mut e = Self::zero(n);
        e.terms.insert(vec![Chord::new(i, j)], Scalar::one());
        e
    }

    /// Linear combination of arbitrary words, normalized.
    pub fn from_words(n: usize, words: impl IntoIterator<Item = (ChordWord, Scalar)>) -> Self {
        let mut e = Self::zero(n);
        for (w, c) in words {
            e.add_word(&w, &c);
        }
        e
    }

    fn add_word(&mut self, w: &[Chord], c: &Scalar) {
        for (u, k) in normalize_word(w).iter() {
            add_term(&mut self.terms, u.clone(), c.mul_int(*k));
        }
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<ChordWord, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &[Chord]) -> Scalar {
        self.terms.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Homogeneous component of the given degree.
    pub fn part(&self, d: usize) -> Self {
        ChordElement { n: self.n, terms: self.terms.iter().filter(|(w, _)| w.len() == d).map(|(w, c)| (w.clone(), c.clone())).collect() }
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|w| w.len()).max()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "strand mismatch");
        let mut terms = self.terms.clone();
        for (w, c) in &o.terms {
            add_term(&mut terms, w.clone(), c.clone());
        }
        ChordElement { n: self.n, terms }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        ChordElement { n: self.n, terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        chord_product(self, o).expect("strand mismatch")
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }
}

fn add_term(terms: &mut BTreeMap<ChordWord, Scalar>, w: ChordWord, c: Scalar) {
    if c.is_zero() {
        return;
    }
    let e = terms.entry(w.clone()).or_insert_with(Scalar::zero);
    *e += c;
    if e.is_zero() {
        terms.remove(&w);
    }
}

/// Product in `T_n`.
pub fn chord_product(a: &ChordElement, b: &ChordElement) -> Result<ChordElement> {
    if a.n != b.n {
        return Err(Error::usage(format!("strand mismatch: {} vs {}", a.n, b.n)));
    }
    let mut out = ChordElement::zero(a.n);
    for (u, cu) in &a.terms {
        for (v, cv) in &b.terms {
            let mut w = u.clone();
            w.extend_from_slice(v);
            out.add_word(&w, &(cu * cv));
        }
    }
    Ok(out)
}

/// Insertion-coproduct `t_ij ↦ Σ_{α∈I_i, β∈I_j} t_αβ` into `T_m`.
pub fn chord_insert(a: &ChordElement, parts: &[Vec<u8>], m: usize) -> Result<ChordElement> {
    if parts.len() != a.n {
        return Err(Error::usage(format!("{} subsets given for {} strands", parts.len(), a.n)));
    }
    let mut seen = vec![false; m + 1];
    for p in parts {
        for &s in p {
            if s == 0 || s as usize > m {
                return Err(Error::invalid(format!("strand {s} outside 1..={m}")));
            }
            if std::mem::replace(&mut seen[s as usize], true) {
                return Err(Error::invalid(format!("strand {s} appears in two subsets")));
            }
        }
    }
    let mut out = ChordElement::zero(m);
    for (w, c) in &a.terms {
        let mut words: Vec<ChordWord> = vec![Vec::new()];
        for l in w {
            let (pi, pj) = (&parts[l.0 as usize - 1], &parts[l.1 as usize - 1]);
            let mut next = Vec::with_capacity(words.len() * pi.len() * pj.len());
            for u in &words {
                for &x in pi {
                    for &y in pj {
                        let mut v = u.clone();
                        v.push(Chord::new(x, y));
                        next.push(v);
                    }
                }
            }
            words = next;
        }
        for v in words {
            out.add_word(&v, c);
        }
    }
    Ok(out)
}

/// Index action `t_ij ↦ t_{σ(i)σ(j)}`; `sigma[k-1]` is the image of strand `k`.
pub fn chord_permute(a: &ChordElement, sigma: &[u8]) -> Result<ChordElement> {
    let parts: Vec<Vec<u8>> = sigma.iter().map(|&s| vec![s]).collect();
    let mut sorted = sigma.to_vec();
    sorted.sort_unstable();
    if sorted != (1..=a.n as u8).collect::<Vec<_>>() {
        return Err(Error::invalid(format!("{sigma:?} is not a permutation of 1..={}", a.n)));
    }
    chord_insert(a, &parts, a.n)
}

/// The normal monomials of `T_n` in degree `d`.
pub fn chord_basis(n: usize, d: usize) -> Vec<ChordWord> {
    let letters: Vec<Chord> = (2..=n as u8).flat_map(|j| (1..j).map(move |i| Chord(i, j))).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn go(letters: &[Chord], d: usize, cur: &mut ChordWord, out: &mut Vec<ChordWord>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        let min_block = cur.last().map_or(0, |c: &Chord| c.block());
        for &l in letters.iter().filter(|l| l.block() >= min_block) {
            cur.push(l);
            go(letters, d, cur, out);
            cur.pop();
        }
    }
    go(&letters, d, &mut cur, &mut out);
    out
}

/// A truncated element of the completion of `T_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChordSeries {
    n: usize,
    order: usize,
    comps: Vec<ChordElement>,
}

impl ChordSeries {
    pub fn zero(n: usize, order: usize) -> Self {
        ChordSeries { n, order, comps: vec![ChordElement::zero(n); order + 1] }
    }

    pub fn one(n: usize, order: usize) -> Self {
        let mut s = Self::zero(n, order);
        s.comps[0] = ChordElement::one(n);
        s
    }

    /// Split an element into degree components, discarding those above `order`.
    pub fn from_element(e: &ChordElement, order: usize) -> Self {
        let mut s = Self::zero(e.n, order);
        for (w, c) in &e.terms {
            if w.len() <= order {
                s.comps[w.len()].terms.insert(w.clone(), c.clone());
            }
        }
        s
    }

    pub fn strands(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn comp(&self, d: usize) -> &ChordElement {
        &self.comps[d]
    }

    /// Replace the degree-`d` component; panics if it is not homogeneous of degree `d`.
    pub fn set_comp(&mut self, d: usize, e: ChordElement) {
        assert!(e.terms.keys().all(|w| w.len() == d), "component is not homogeneous");
        self.comps[d] = e;
    }

    pub fn to_element(&self) -> ChordElement {
        self.comps.iter().fold(ChordElement::zero(self.n), |acc, c| acc.add(c))
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = Self::zero(self.n, order);
        for d in 0..=order.min(self.order) {
            s.comps[d] = self.comps[d].clone();
        }
        s
    }

    pub fn add(&self, o: &Self) -> Self {
        let order = self.order.min(o.order);
        let mut s = Self::zero(self.n, order);
        for d in 0..=order {
            s.comps[d] = self.comps[d].add(&o.comps[d]);
        }
        s
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ChordSeries { n: self.n, order: self.order, comps: self.comps.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    /// First degree with a nonzero component.
    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.comps.iter().position(|c| !c.is_zero())
    }

    /// Apply a degree-preserving linear map componentwise.
    pub fn map(&self, n: usize, f: impl Fn(&ChordElement) -> Result<ChordElement>) -> Result<Self> {
        let mut s = Self::zero(n, self.order);
        for d in 0..=self.order {
            s.comps[d] = f(&self.comps[d])?;
        }
        Ok(s)
    }
}

/// Truncated product.
pub fn series_mul(a: &ChordSeries, b: &ChordSeries) -> ChordSeries {
    assert_eq!(a.n, b.n, "strand mismatch");
    let order = a.order.min(b.order);
    let mut s = ChordSeries::zero(a.n, order);
    for i in 0..=order {
        if a.comps[i].is_zero() {
            continue;
        }
        for j in 0..=order - i {
            if b.comps[j].is_zero() {
                continue;
            }
            s.comps[i + j] = s.comps[i + j].add(&a.comps[i].mul(&b.comps[j]));
        }
    }
    s
}

fn constant(s: &ChordSeries) -> Option<Scalar> {
    let c = &s.comps[0];
    if c.terms.keys().all(|w| w.is_empty()) {
        Some(c.coeff(&[]))
    } else {
        None
    }
}

/// Truncated inverse; requires an invertible constant term.
pub fn series_inverse(s: &ChordSeries) -> Result<ChordSeries> {
    let c0 = constant(s).filter(|c| !c.is_zero()).ok_or_else(|| Error::invalid("constant term is not invertible"))?;
    let inv0 = c0.recip();
    let mut out = ChordSeries::zero(s.n, s.order);
    out.comps[0] = ChordElement::scalar(s.n, inv0.clone());
    for d in 1..=s.order {
        let mut acc = ChordElement::zero(s.n);
        for k in 1..=d {
            if s.comps[k].is_zero() {
                continue;
            }
            acc = acc.add(&s.comps[k].mul(&out.comps[d - k]));
        }
        out.comps[d] = acc.scale(&-inv0.clone());
    }
    Ok(out)
}

/// Truncated exponential; requires zero constant term.
pub fn series_exp(s: &ChordSeries) -> Result<ChordSeries> {
    if !s.comps[0].is_zero() {
        return Err(Error::invalid("exponential needs a zero constant term"));
    }
    let mut out = ChordSeries::one(s.n, s.order);
    let mut power = ChordSeries::one(s.n, s.order);
    for k in 1..=s.order {
        power = series_mul(&power, s).scale(&Scalar::frac(1, k as i64));
        out = out.add(&power);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(n: usize, i: u8, j: u8) -> ChordElement {
        ChordElement::t(n, i, j)
    }

    #[test]
    fn product_examples() {
        let p = t(3, 1, 2).mul(&t(3, 1, 3));
        assert_eq!(p.terms().len(), 1);
        assert_eq!(p.coeff(&[Chord(1, 2), Chord(1, 3)]), Scalar::one());
        let q = t(3, 1, 3).mul(&t(3, 1, 2));
        let expected = ChordElement::from_words(
            3,
            [
                (vec![Chord(1, 2), Chord(1, 3)], Scalar::one()),
                (vec![Chord(2, 3), Chord(1, 3)], Scalar::one()),
                (vec![Chord(1, 3), Chord(2, 3)], Scalar::from_int(-1)),
            ],
        );
        assert_eq!(q, expected);
    }

    #[test]
    fn relations_hold() {
        for n in 3..=4usize {
            for i in 1..=n as u8 {
                for j in (i + 1)..=n as u8 {
                    for k in 1..=n as u8 {
                        if k == i || k == j {
                            continue;
                        }
                        let rel = t(n, i, j).commutator(&t(n, i, k).add(&t(n, j, k)));
                        assert!(rel.is_zero(), "relation t{i}{j},t{i}{k}+t{j}{k}");
                        for l in (k + 1)..=n as u8 {
                            if l == i || l == j {
                                continue;
                            }
                            assert!(t(n, i, j).commutator(&t(n, k, l)).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn dimensions_of_t3() {
        for d in 0..=6 {
            assert_eq!(chord_basis(3, d).len(), (1usize << (d + 1)) - 1);
        }
    }

    #[test]
    fn insert_and_permute() {
        let x = chord_insert(&t(2, 1, 2), &[vec![1], vec![2, 3]], 3).unwrap();
        assert_eq!(x, t(3, 1, 2).add(&t(3, 1, 3)));
        assert!(chord_insert(&t(2, 1, 2), &[vec![1], vec![1, 3]], 3).is_err());
        assert_eq!(chord_permute(&t(2, 1, 2), &[2, 1]).unwrap(), t(2, 1, 2));
        let b = t(3, 1, 2).commutator(&t(3, 2, 3));
        let pb = chord_permute(&b, &[3, 2, 1]).unwrap();
        assert_eq!(pb, t(3, 2, 3).commutator(&t(3, 1, 2)));
        assert_eq!(pb, t(3, 2, 3).commutator(&t(3, 1, 3)).scale(&Scalar::from_int(-1)));
    }

    #[test]
    fn series_examples() {
        let s = ChordSeries::from_element(&ChordElement::one(2).add(&t(2, 1, 2)), 2);
        let inv = series_inverse(&s).unwrap();
        let t2 = t(2, 1, 2);
        let expected = ChordElement::one(2).sub(&t2).add(&t2.mul(&t2));
        assert_eq!(inv.to_element(), expected);
        let e = series_exp(&ChordSeries::from_element(&t2.scale(&Scalar::frac(1, 2)), 2)).unwrap();
        assert_eq!(e.comp(2), &t2.mul(&t2).scale(&Scalar::frac(1, 8)));
        assert!(series_mul(&s, &inv).sub(&ChordSeries::one(2, 2)).is_zero());
    }
}

//! The universal algebras `U_n`.
//!
//! A basis element of `U_n` in degree `N` is a [`Diagram`]: `n` slots, each
//! holding an x-word (letters of the `a` side) followed by a y-word (letters
//! of the `b` side), where every tag `1..=N` occurs once among the x-words
//! and once among the y-words, modulo simultaneous relabeling of tags.
//! Diagrams are stored canonically: the x-side reads `1, 2, ..., N` from the
//! first slot to the last, so only the x-slot lengths and the y-words carry
//! information.
//!
//! The product concatenates slotwise and restores the normal order (x before
//! y in every slot) by the grafting rule for `[y_j, x_i]`.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::fmt;
use std::rc::Rc;

use rustc_hash::FxHashMap;

use crate::chord::{ChordElement, ChordWord};
use crate::error::{Error, Result};
use crate::kernel::Scalar;
use crate::words::{expand_mono, AssocWord, LieMono, Tag};

/// A canonical basis diagram.
///
/// Encoded as `[n, xlen_1..xlen_n, ylen_1..ylen_n, y-tags...]`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagram {
    code: Box<[u8]>,
}

impl Diagram {
    /// The empty diagram (unit) on `n` slots.
    pub fn unit(n: usize) -> Self {
        let mut code = vec![0u8; 2 * n + 1];
        code[0] = n as u8;
        Diagram { code: code.into_boxed_slice() }
    }

    /// Build from explicit x- and y-words, validating the tag constraints.
    pub fn new(x: &[AssocWord], y: &[AssocWord]) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::invalid("x- and y-sides have different slot counts"));
        }
        if x.len() > 255 {
            return Err(Error::invalid("too many slots"));
        }
        let nx: usize = x.iter().map(|w| w.len()).sum();
        let ny: usize = y.iter().map(|w| w.len()).sum();
        if nx != ny || nx > 255 {
            return Err(Error::invalid("x- and y-sides carry different numbers of letters"));
        }
        let check = |side: &[AssocWord]| {
            let mut seen = [false; 256];
            for &t in side.iter().flatten() {
                if t == 0 || t as usize > nx || std::mem::replace(&mut seen[t as usize], true) {
                    return false;
                }
            }
            true
        };
        if !check(x) || !check(y) {
            return Err(Error::invalid("every tag 1..=N must occur exactly once on each side"));
        }
        Ok(Self::canonical(x, y))
    }

    /// Canonicalize a labeled diagram whose tags are distinct on each side.
    pub(crate) fn canonical<X: AsRef<[Tag]>, Y: AsRef<[Tag]>>(x: &[X], y: &[Y]) -> Self {
        let n = x.len();
        let mut map = [0u8; 256];
        let mut next = 1u8;
        let mut len = 1 + 2 * n;
        for w in x {
            for &t in w.as_ref() {
                map[t as usize] = next;
                next += 1;
            }
        }
        for w in y {
            len += w.as_ref().len();
        }
        let mut code = Vec::with_capacity(len);
        code.push(n as u8);
        code.extend(x.iter().map(|w| w.as_ref().len() as u8));
        code.extend(y.iter().map(|w| w.as_ref().len() as u8));
        for w in y {
            code.extend(w.as_ref().iter().map(|&t| map[t as usize]));
        }
        Diagram { code: code.into_boxed_slice() }
    }

    pub fn slots(&self) -> usize {
        self.code[0] as usize
    }

    /// Total degree `N`.
    pub fn degree(&self) -> usize {
        let n = self.slots();
        self.code[1..=n].iter().map(|&l| l as usize).sum()
    }

    fn xlen(&self, s: usize) -> usize {
        self.code[1 + s] as usize
    }

    fn ylen(&self, s: usize) -> usize {
        self.code[1 + self.slots() + s] as usize
    }

    /// The x-word of slot `s` (0-based).
    pub fn x_word(&self, s: usize) -> AssocWord {
        let start: usize = (0..s).map(|k| self.xlen(k)).sum();
        (start + 1..=start + self.xlen(s)).map(|t| t as Tag).collect()
    }

    /// The y-word of slot `s` (0-based).
    pub fn y_word(&self, s: usize) -> &[Tag] {
        let n = self.slots();
        let start = 1 + 2 * n + (0..s).map(|k| self.ylen(k)).sum::<usize>();
        &self.code[start..start + self.ylen(s)]
    }

    pub fn x_words(&self) -> Vec<AssocWord> {
        (0..self.slots()).map(|s| self.x_word(s)).collect()
    }

    pub fn y_words(&self) -> Vec<AssocWord> {
        (0..self.slots()).map(|s| self.y_word(s).to_vec()).collect()
    }

    /// Per-slot a-degrees (x-word lengths) and b-degrees (y-word lengths).
    pub fn ab_degrees(&self) -> (Vec<usize>, Vec<usize>) {
        let n = self.slots();
        ((0..n).map(|s| self.xlen(s)).collect(), (0..n).map(|s| self.ylen(s)).collect())
    }

    /// Whether slot `s` is empty on both sides.
    pub fn slot_empty(&self, s: usize) -> bool {
        self.xlen(s) == 0 && self.ylen(s) == 0
    }
}

impl fmt::Debug for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |ws: Vec<AssocWord>| ws.iter().map(|w| format!("{w:?}")).collect::<Vec<_>>().join(",");
        write!(f, "<x:{} | y:{}>", show(self.x_words()), show(self.y_words()))
    }
}

/// An element of `U_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct UElement {
    n: usize,
    terms: BTreeMap<Diagram, Scalar>,
}

impl fmt::Debug for UElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(d, c)| format!("{c:?}*{d:?}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

fn accumulate(map: &mut FxHashMap<Diagram, Scalar>, d: Diagram, c: Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(d) {
        std::collections::hash_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::hash_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

impl UElement {
    pub fn zero(n: usize) -> Self {
        UElement { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Scalar::one())
    }

    pub fn scalar(n: usize, c: Scalar) -> Self {
        let mut e = Self::zero(n);
        if !c.is_zero() {
            e.terms.insert(Diagram::unit(n), c);
        }
        e
    }

    pub fn basis(d: Diagram) -> Self {
        let n = d.slots();
        UElement { n, terms: BTreeMap::from([(d, Scalar::one())]) }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Diagram, Scalar)>) -> Self {
        let mut map = FxHashMap::default();
        for (d, c) in terms {
            assert_eq!(d.slots(), n, "slot mismatch");
            accumulate(&mut map, d, c);
        }
        Self::from_map(n, map)
    }

    fn from_map(n: usize, map: FxHashMap<Diagram, Scalar>) -> Self {
        UElement { n, terms: map.into_iter().collect() }
    }

    pub fn slots(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Diagram, Scalar> {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, d: &Diagram) -> Scalar {
        self.terms.get(d).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Homogeneous component of degree `deg`.
    pub fn part(&self, deg: usize) -> Self {
        UElement { n: self.n, terms: self.terms.iter().filter(|(d, _)| d.degree() == deg).map(|(d, c)| (d.clone(), c.clone())).collect() }
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|d| d.degree()).max()
    }

    pub fn add(&self, o: &Self) -> Self {
        assert_eq!(self.n, o.n, "slot mismatch");
        let (big, small) = if self.terms.len() >= o.terms.len() { (self, o) } else { (o, self) };
        let mut terms = big.terms.clone();
        for (d, c) in &small.terms {
            let e = terms.entry(d.clone()).or_insert_with(Scalar::zero);
            *e += c;
            if e.is_zero() {
                terms.remove(d);
            }
        }
        UElement { n: self.n, terms }
    }

    pub fn add_scaled(&mut self, o: &Self, c: &Scalar) {
        assert_eq!(self.n, o.n, "slot mismatch");
        if c.is_zero() {
            return;
        }
        for (d, x) in &o.terms {
            let e = self.terms.entry(d.clone()).or_insert_with(Scalar::zero);
            *e += c * x;
            if e.is_zero() {
                self.terms.remove(d);
            }
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut s = self.clone();
        s.add_scaled(o, &Scalar::from_int(-1));
        s
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        UElement { n: self.n, terms: self.terms.iter().map(|(d, x)| (d.clone(), x * c)).collect() }
    }

    pub fn neg(&self) -> Self {
        self.scale(&Scalar::from_int(-1))
    }

    pub fn mul(&self, o: &Self) -> Self {
        u_product(self, o).expect("slot mismatch")
    }

    pub fn commutator(&self, o: &Self) -> Self {
        self.mul(o).sub(&o.mul(self))
    }

    /// Image under `x ↦ x^{σ(1),…,σ(n)}` (slot `k` goes to slot `sigma[k-1]`).
    pub fn permute(&self, sigma: &[usize]) -> Self {
        let parts: Vec<Vec<usize>> = sigma.iter().map(|&s| vec![s]).collect();
        u_insert(self, &parts, self.n).expect("invalid permutation")
    }

    /// Place into `m` slots with slot `k` going to `targets[k-1]`.
    pub fn place(&self, targets: &[usize], m: usize) -> Self {
        let parts: Vec<Vec<usize>> = targets.iter().map(|&s| vec![s]).collect();
        u_insert(self, &parts, m).expect("invalid placement")
    }

    pub fn insert(&self, parts: &[Vec<usize>], m: usize) -> Self {
        u_insert(self, parts, m).expect("invalid insertion")
    }
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
struct Letter {
    y: bool,
    m: LieMono,
}

/// A diagram during normal ordering: slots of unexpanded Lie letters.
#[derive(Clone, Debug)]
struct Work {
    slots: Vec<Vec<Letter>>,
}

impl Work {
    /// Replace the leaf `t` on the given side by `with`.
    fn graft(&mut self, y: bool, t: Tag, with: &LieMono) {
        for slot in &mut self.slots {
            for l in slot.iter_mut() {
                if l.y == y && l.m.graft(t, with) {
                    return;
                }
            }
        }
        panic!("grafting target {}{t} not found", if y { 'y' } else { 'x' });
    }

    fn first_violation(&self) -> Option<(usize, usize)> {
        for (s, slot) in self.slots.iter().enumerate() {
            if let Some(k) = slot.windows(2).position(|p| p[0].y && !p[1].y) {
                return Some((s, k));
            }
        }
        None
    }
}

type Branches = Vec<(i64, Work, Letter)>;

/// `[q, p]` for a y-letter `q` and an x-letter `p` removed from `ctx`.
///
/// Each branch is a coefficient, the context after remote grafts and the
/// single letter left in place.
fn mixed(q: &LieMono, p: &LieMono, ctx: &Work) -> Branches {
    match (q, p) {
        (LieMono::Leaf(j), LieMono::Leaf(i)) => {
            let mut gx = ctx.clone();
            gx.graft(false, *j, &LieMono::br(LieMono::leaf(*j), LieMono::leaf(*i)));
            let mut gy = ctx.clone();
            gy.graft(true, *i, &LieMono::br(LieMono::leaf(*j), LieMono::leaf(*i)));
            vec![(-1, gx, Letter { y: true, m: q.clone() }), (-1, gy, Letter { y: false, m: p.clone() })]
        }
        (LieMono::Leaf(_), LieMono::Br(p1, p2)) => {
            // [q,[p1,p2]] = [[q,p1],p2] + [p1,[q,p2]]
            let mut out = Vec::new();
            for (c, w, l) in mixed(q, p1, ctx) {
                if l.y {
                    out.extend(mixed(&l.m, p2, &w).into_iter().map(|(c2, w2, l2)| (c * c2, w2, l2)));
                } else {
                    out.push((c, w, Letter { y: false, m: LieMono::br(l.m, (**p2).clone()) }));
                }
            }
            for (c, w, l) in mixed(q, p2, ctx) {
                if l.y {
                    out.extend(mixed(&l.m, p1, &w).into_iter().map(|(c2, w2, l2)| (-c * c2, w2, l2)));
                } else {
                    out.push((c, w, Letter { y: false, m: LieMono::br((**p1).clone(), l.m) }));
                }
            }
            out
        }
        (LieMono::Br(q1, q2), _) => {
            // [[q1,q2],p] = [q1,[q2,p]] − [q2,[q1,p]]
            let mut out = Vec::new();
            for (sign, first, second) in [(1i64, q2, q1), (-1, q1, q2)] {
                for (c, w, l) in mixed(first, p, ctx) {
                    if l.y {
                        out.push((sign * c, w, Letter { y: true, m: LieMono::br((**second).clone(), l.m) }));
                    } else {
                        out.extend(mixed(second, &l.m, &w).into_iter().map(|(c2, w2, l2)| (sign * c * c2, w2, l2)));
                    }
                }
            }
            out
        }
    }
}

/// Expand a normally ordered work diagram into canonical diagrams.
fn finalize(w: &Work, out: &mut FxHashMap<Diagram, i64>, coef: i64) {
    let n = w.slots.len();
    // Per (slot, side) the list of word expansions of the letter product.
    let mut sides: Vec<Vec<(AssocWord, i64)>> = Vec::with_capacity(2 * n);
    for y in [false, true] {
        for slot in &w.slots {
            let mut acc: Vec<(AssocWord, i64)> = vec![(Vec::new(), 1)];
            for l in slot.iter().filter(|l| l.y == y) {
                let e = expand_mono(&l.m);
                let mut next = Vec::with_capacity(acc.len() * e.len());
                for (u, cu) in &acc {
                    for (v, cv) in &e {
                        let mut uv = u.clone();
                        uv.extend_from_slice(v);
                        next.push((uv, cu * cv));
                    }
                }
                acc = next;
            }
            sides.push(acc);
        }
    }
    let mut idx = vec![0usize; 2 * n];
    loop {
        let mut c = coef;
        for (k, &i) in idx.iter().enumerate() {
            c *= sides[k][i].1;
        }
        let x: Vec<&[Tag]> = (0..n).map(|s| sides[s][idx[s]].0.as_slice()).collect();
        let y: Vec<&[Tag]> = (0..n).map(|s| sides[n + s][idx[n + s]].0.as_slice()).collect();
        *out.entry(Diagram::canonical(&x, &y)).or_insert(0) += c;
        let mut k = 0;
        loop {
            if k == 2 * n {
                return;
            }
            idx[k] += 1;
            if idx[k] < sides[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

fn letters(word: impl IntoIterator<Item = Tag>, y: bool, shift: Tag) -> impl Iterator<Item = Letter> {
    word.into_iter().map(move |t| Letter { y, m: LieMono::leaf(t + shift) })
}

fn diagram_product_uncached(a: &Diagram, b: &Diagram) -> Vec<(Diagram, i64)> {
    let n = a.slots();
    let shift = a.degree() as Tag;
    let mut slots = Vec::with_capacity(n);
    for s in 0..n {
        let mut slot: Vec<Letter> = Vec::new();
        slot.extend(letters(a.x_word(s), false, 0));
        slot.extend(letters(a.y_word(s).iter().copied(), true, 0));
        slot.extend(letters(b.x_word(s), false, shift));
        slot.extend(letters(b.y_word(s).iter().copied(), true, shift));
        slots.push(slot);
    }
    let mut stack = vec![(1i64, Work { slots })];
    let mut out: FxHashMap<Diagram, i64> = FxHashMap::default();
    while let Some((c, w)) = stack.pop() {
        let Some((s, k)) = w.first_violation() else {
            finalize(&w, &mut out, c);
            continue;
        };
        let mut swapped = w.clone();
        swapped.slots[s].swap(k, k + 1);
        stack.push((c, swapped));
        let mut ctx = w;
        let p = ctx.slots[s].remove(k + 1);
        let q = ctx.slots[s].remove(k);
        for (c2, mut w2, l) in mixed(&q.m, &p.m, &ctx) {
            w2.slots[s].insert(k, l);
            stack.push((c * c2, w2));
        }
    }
    let mut v: Vec<(Diagram, i64)> = out.into_iter().filter(|(_, c)| *c != 0).collect();
    v.sort();
    v
}

thread_local! {
    static PRODUCT_CACHE: RefCell<FxHashMap<(Diagram, Diagram), Rc<Vec<(Diagram, i64)>>>> = RefCell::new(FxHashMap::default());
}

/// Product of two basis diagrams, memoized per thread.
pub fn diagram_product(a: &Diagram, b: &Diagram) -> Rc<Vec<(Diagram, i64)>> {
    if a.degree() == 0 {
        return Rc::new(vec![(b.clone(), 1)]);
    }
    if b.degree() == 0 {
        return Rc::new(vec![(a.clone(), 1)]);
    }
    let key = (a.clone(), b.clone());
    if let Some(hit) = PRODUCT_CACHE.with(|c| c.borrow().get(&key).cloned()) {
        return hit;
    }
    let v = Rc::new(diagram_product_uncached(a, b));
    PRODUCT_CACHE.with(|c| c.borrow_mut().insert(key, v.clone()));
    v
}

/// Drop the memoized diagram products of the current thread.
pub fn clear_product_cache() {
    PRODUCT_CACHE.with(|c| c.borrow_mut().clear());
}

/// The universal product.
pub fn u_product(a: &UElement, b: &UElement) -> Result<UElement> {
    if a.n != b.n {
        return Err(Error::usage(format!("slot mismatch: {} vs {}", a.n, b.n)));
    }
    let mut map: FxHashMap<Diagram, Scalar> = FxHashMap::default();
    for (da, ca) in &a.terms {
        for (db, cb) in &b.terms {
            let c = ca * cb;
            for (d, k) in diagram_product(da, db).iter() {
                accumulate(&mut map, d.clone(), c.mul_int(*k));
            }
        }
    }
    Ok(UElement::from_map(a.n, map))
}

fn check_parts(parts: &[Vec<usize>], m: usize) -> Result<()> {
    let mut seen = vec![false; m + 1];
    for p in parts {
        for &s in p {
            if s == 0 || s > m {
                return Err(Error::invalid(format!("slot {s} outside 1..={m}")));
            }
            if std::mem::replace(&mut seen[s], true) {
                return Err(Error::invalid(format!("slot {s} appears in two subsets")));
            }
        }
    }
    Ok(())
}

/// Insertion-coproduct `x ↦ x^{I_1,…,I_n}` into `U_m`.
///
/// The subsets must be disjoint. A slot whose subset is empty is sent to the
/// counit, and target slots not covered by any subset stay empty, so
/// placements, slot permutations and partial counits are special cases.
pub fn u_insert(a: &UElement, parts: &[Vec<usize>], m: usize) -> Result<UElement> {
    if parts.len() != a.n {
        return Err(Error::usage(format!("{} subsets for {} slots", parts.len(), a.n)));
    }
    check_parts(parts, m)?;
    let mut map: FxHashMap<Diagram, Scalar> = FxHashMap::default();
    for (d, c) in &a.terms {
        for e in insert_diagram(d, parts, m) {
            accumulate(&mut map, e, c.clone());
        }
    }
    Ok(UElement::from_map(m, map))
}

fn insert_diagram(d: &Diagram, parts: &[Vec<usize>], m: usize) -> Vec<Diagram> {
    let n = d.slots();
    for s in 0..n {
        if parts[s].is_empty() && !d.slot_empty(s) {
            return Vec::new();
        }
    }
    // Each letter (slot, side, tag) is sent to one target of its slot's subset.
    let mut states: Vec<(Vec<AssocWord>, Vec<AssocWord>)> = vec![(vec![Vec::new(); m], vec![Vec::new(); m])];
    for s in 0..n {
        let targets = &parts[s];
        for y in [false, true] {
            let word: AssocWord = if y { d.y_word(s).to_vec() } else { d.x_word(s) };
            for t in word {
                let mut next = Vec::with_capacity(states.len() * targets.len());
                for st in &states {
                    for &g in targets {
                        let mut st2 = st.clone();
                        if y {
                            st2.1[g - 1].push(t);
                        } else {
                            st2.0[g - 1].push(t);
                        }
                        next.push(st2);
                    }
                }
                states = next;
            }
        }
    }
    states.into_iter().map(|(x, y)| Diagram::canonical(&x, &y)).collect()
}

/// Apply the counit in one slot (1-based) and drop it.
pub fn partial_counit(a: &UElement, slot: usize) -> Result<UElement> {
    if slot == 0 || slot > a.n {
        return Err(Error::usage(format!("slot {slot} outside 1..={}", a.n)));
    }
    let parts: Vec<Vec<usize>> = (1..=a.n)
        .map(|k| match k.cmp(&slot) {
            std::cmp::Ordering::Less => vec![k],
            std::cmp::Ordering::Equal => vec![],
            std::cmp::Ordering::Greater => vec![k - 1],
        })
        .collect();
    u_insert(a, &parts, a.n - 1)
}

/// `r`, the canonical element of `a ⊗ b` in `U_2`.
pub fn make_r() -> UElement {
    UElement::basis(Diagram::new(&[vec![1], vec![]], &[vec![], vec![1]]).expect("valid"))
}

/// `t = r + r^{2,1}`.
pub fn make_t() -> UElement {
    let r = make_r();
    r.add(&r.permute(&[2, 1]))
}

/// `m(r)` in `U_1`.
pub fn make_mr() -> UElement {
    UElement::basis(Diagram::new(&[vec![1]], &[vec![1]]).expect("valid"))
}

/// `r^{i,j}` in `U_n`.
pub fn r_ij(n: usize, i: usize, j: usize) -> UElement {
    make_r().place(&[i, j], n)
}

/// `t^{i,j}` in `U_n`.
pub fn t_ij(n: usize, i: usize, j: usize) -> UElement {
    make_t().place(&[i, j], n)
}

/// The algebra morphism `T_n → U_n`, `t_ij ↦ t^{i,j}`.
pub fn mu_embed(c: &ChordElement) -> UElement {
    let n = c.strands();
    let mut prefix: FxHashMap<ChordWord, UElement> = FxHashMap::default();
    prefix.insert(Vec::new(), UElement::one(n));
    let mut gens: FxHashMap<(u8, u8), UElement> = FxHashMap::default();
    let mut out = UElement::zero(n);
    for (w, coef) in c.terms() {
        for k in 1..=w.len() {
            if prefix.contains_key(&w[..k]) {
                continue;
            }
            let g = gens.entry((w[k - 1].0, w[k - 1].1)).or_insert_with(|| t_ij(n, w[k - 1].0 as usize, w[k - 1].1 as usize)).clone();
            let p = prefix[&w[..k - 1]].mul(&g);
            prefix.insert(w[..k].to_vec(), p);
        }
        out.add_scaled(&prefix[w.as_slice()], coef);
    }
    out
}

/// Per-slot constraint on a word's length.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LenRule {
    Any,
    Empty,
    NonEmpty,
    Exactly(usize),
}

impl LenRule {
    fn accepts(self, len: usize) -> bool {
        match self {
            LenRule::Any => true,
            LenRule::Empty => len == 0,
            LenRule::NonEmpty => len > 0,
            LenRule::Exactly(k) => len == k,
        }
    }
}

/// A component of `U_n` described slot by slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pattern {
    pub x: Vec<LenRule>,
    pub y: Vec<LenRule>,
}

impl Pattern {
    pub fn any(n: usize) -> Self {
        Pattern { x: vec![LenRule::Any; n], y: vec![LenRule::Any; n] }
    }

    pub fn with_x(mut self, slot: usize, r: LenRule) -> Self {
        self.x[slot - 1] = r;
        self
    }

    pub fn with_y(mut self, slot: usize, r: LenRule) -> Self {
        self.y[slot - 1] = r;
        self
    }

    pub fn matches(&self, d: &Diagram) -> bool {
        let (a, b) = d.ab_degrees();
        self.x.iter().zip(&a).all(|(r, &l)| r.accepts(l)) && self.y.iter().zip(&b).all(|(r, &l)| r.accepts(l))
    }
}

/// Sum of the terms whose diagrams match `pattern`.
pub fn project_component(a: &UElement, pattern: &Pattern) -> Result<UElement> {
    if pattern.x.len() != a.n || pattern.y.len() != a.n {
        return Err(Error::usage(format!("pattern has {} slots, element has {}", pattern.x.len(), a.n)));
    }
    Ok(UElement { n: a.n, terms: a.terms.iter().filter(|(d, _)| pattern.matches(d)).map(|(d, c)| (d.clone(), c.clone())).collect() })
}

/// All canonical diagrams of `(U_n)_N`.
pub fn diagram_basis(n: usize, degree: usize) -> Vec<Diagram> {
    let comps = compositions(degree, n);
    let tags: Vec<Tag> = (1..=degree as Tag).collect();
    let perms = crate::words::permutations(&tags);
    let mut out = Vec::with_capacity(comps.len() * comps.len() * perms.len());
    for xl in &comps {
        let mut x = Vec::with_capacity(n);
        let mut next = 1u8;
        for &l in xl {
            x.push((next..next + l as u8).collect::<AssocWord>());
            next += l as u8;
        }
        for yl in &comps {
            for p in &perms {
                let mut y = Vec::with_capacity(n);
                let mut k = 0;
                for &l in yl {
                    y.push(p[k..k + l].to_vec());
                    k += l;
                }
                out.push(Diagram::canonical(&x, &y));
            }
        }
    }
    out.sort();
    out
}

/// Weak compositions of `total` into `parts` parts.
pub fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// A truncated element of the completion of `U_n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct USeries {
    n: usize,
    order: usize,
    comps: Vec<UElement>,
}

impl USeries {
    pub fn zero(n: usize, order: usize) -> Self {
        USeries { n, order, comps: vec![UElement::zero(n); order + 1] }
    }

    pub fn one(n: usize, order: usize) -> Self {
        let mut s = Self::zero(n, order);
        s.comps[0] = UElement::one(n);
        s
    }

    pub fn from_element(e: &UElement, order: usize) -> Self {
        let mut s = Self::zero(e.n, order);
        for (d, c) in &e.terms {
            if d.degree() <= order {
                s.comps[d.degree()].terms.insert(d.clone(), c.clone());
            }
        }
        s
    }

    pub fn slots(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn comp(&self, d: usize) -> &UElement {
        &self.comps[d]
    }

    pub fn comps(&self) -> &[UElement] {
        &self.comps
    }

    /// Replace the degree-`d` component; panics if it is not homogeneous of degree `d`.
    pub fn set_comp(&mut self, d: usize, e: UElement) {
        assert!(e.terms.keys().all(|x| x.degree() == d), "component is not homogeneous of degree {d}");
        assert_eq!(e.n, self.n, "slot mismatch");
        self.comps[d] = e;
    }

    pub fn to_element(&self) -> UElement {
        let mut e = UElement::zero(self.n);
        for c in &self.comps {
            e.add_scaled(c, &Scalar::one());
        }
        e
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = Self::zero(self.n, order);
        for d in 0..=order.min(self.order) {
            s.comps[d] = self.comps[d].clone();
        }
        s
    }

    /// Same components, with the order raised or lowered (new components are zero).
    pub fn with_order(&self, order: usize) -> Self {
        self.truncate(order)
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
        USeries { n: self.n, order: self.order, comps: self.comps.iter().map(|x| x.scale(c)).collect() }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    pub fn lowest_nonzero(&self) -> Option<usize> {
        self.comps.iter().position(|c| !c.is_zero())
    }

    /// Apply a degree-preserving linear map componentwise.
    pub fn map(&self, n: usize, f: impl Fn(&UElement) -> UElement) -> Self {
        USeries { n, order: self.order, comps: self.comps.iter().map(f).collect() }
    }

    pub fn insert(&self, parts: &[Vec<usize>], m: usize) -> Self {
        self.map(m, |c| c.insert(parts, m))
    }

    pub fn permute(&self, sigma: &[usize]) -> Self {
        self.map(self.n, |c| c.permute(sigma))
    }

    pub fn place(&self, targets: &[usize], m: usize) -> Self {
        self.map(m, |c| c.place(targets, m))
    }

    pub fn mul(&self, o: &Self) -> Self {
        useries_mul(self, o)
    }
}

/// Truncated product.
pub fn useries_mul(a: &USeries, b: &USeries) -> USeries {
    assert_eq!(a.n, b.n, "slot mismatch");
    let order = a.order.min(b.order);
    let mut s = USeries::zero(a.n, order);
    for i in 0..=order {
        if a.comps[i].is_zero() {
            continue;
        }
        for j in 0..=order - i {
            if b.comps[j].is_zero() {
                continue;
            }
            let p = a.comps[i].mul(&b.comps[j]);
            s.comps[i + j].add_scaled(&p, &Scalar::one());
        }
    }
    s
}

fn constant(s: &USeries) -> Option<Scalar> {
    let c = &s.comps[0];
    if c.terms.keys().all(|d| d.degree() == 0) {
        Some(c.coeff(&Diagram::unit(s.n)))
    } else {
        None
    }
}

/// Truncated inverse; requires an invertible constant term.
pub fn useries_inverse(s: &USeries) -> Result<USeries> {
    let c0 = constant(s).filter(|c| !c.is_zero()).ok_or_else(|| Error::invalid("constant term is not invertible"))?;
    let inv0 = c0.recip();
    let mut out = USeries::zero(s.n, s.order);
    out.comps[0] = UElement::scalar(s.n, inv0.clone());
    let neg = -inv0;
    for d in 1..=s.order {
        let mut acc = UElement::zero(s.n);
        for k in 1..=d {
            if s.comps[k].is_zero() || out.comps[d - k].is_zero() {
                continue;
            }
            acc.add_scaled(&s.comps[k].mul(&out.comps[d - k]), &Scalar::one());
        }
        out.comps[d] = acc.scale(&neg);
    }
    Ok(out)
}

/// Truncated exponential; requires zero constant term.
pub fn useries_exp(s: &USeries) -> Result<USeries> {
    if !s.comps[0].is_zero() {
        return Err(Error::invalid("exponential needs a zero constant term"));
    }
    let mut out = USeries::one(s.n, s.order);
    let mut power = USeries::one(s.n, s.order);
    for k in 1..=s.order {
        power = useries_mul(&power, s).scale(&Scalar::frac(1, k as i64));
        out = out.add(&power);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chord::ChordElement;

    fn d(x: &[&[Tag]], y: &[&[Tag]]) -> Diagram {
        let x: Vec<AssocWord> = x.iter().map(|w| w.to_vec()).collect();
        let y: Vec<AssocWord> = y.iter().map(|w| w.to_vec()).collect();
        Diagram::new(&x, &y).unwrap()
    }

    #[test]
    fn canonical_relabeling() {
        let a = d(&[&[2], &[1]], &[&[1], &[2]]);
        let b = d(&[&[1], &[2]], &[&[2], &[1]]);
        assert_eq!(a, b);
        assert_eq!(a.x_words(), vec![vec![1], vec![2]]);
        assert_eq!(a.y_words(), vec![vec![2], vec![1]]);
        assert!(Diagram::new(&[vec![1], vec![1]], &[vec![1], vec![2]]).is_err());
    }

    #[test]
    fn unit_laws() {
        let r = make_r();
        assert_eq!(UElement::one(2).mul(&r), r);
        assert_eq!(r.mul(&UElement::one(2)), r);
    }

    #[test]
    fn cybe_rearrangement() {
        let (r12, r13, r23) = (r_ij(3, 1, 2), r_ij(3, 1, 3), r_ij(3, 2, 3));
        let lhs = r12.commutator(&r23);
        let rhs = r12.commutator(&r13).add(&r13.commutator(&r23)).neg();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn worked_product_example() {
        let t23 = t_ij(3, 2, 3);
        let t13 = t_ij(3, 1, 3);
        let r = |i, j| r_ij(3, i, j);
        let expected = r(2, 3)
            .mul(&r(1, 3))
            .add(&r(3, 2).mul(&r(1, 3)))
            .add(&r(3, 1).mul(&r(2, 3)))
            .add(&r(2, 1).commutator(&r(2, 3)))
            .add(&r(3, 1).commutator(&r(2, 1)))
            .add(&r(3, 2).mul(&r(3, 1)));
        assert_eq!(t23.mul(&t13), expected);
        let c = ChordElement::t(3, 2, 3).mul(&ChordElement::t(3, 1, 3));
        assert_eq!(mu_embed(&c), expected);
    }

    #[test]
    fn insertion_examples() {
        let r = make_r();
        assert_eq!(r.insert(&[vec![1, 2], vec![3]], 3), r_ij(3, 1, 3).add(&r_ij(3, 2, 3)));
        assert_eq!(r.insert(&[vec![1], vec![2]], 2), r);
        assert!(u_insert(&r, &[vec![1], vec![1]], 2).is_err());
        assert!(partial_counit(&r, 2).unwrap().is_zero());
        let mr1 = make_mr().place(&[1], 2);
        assert_eq!(partial_counit(&mr1, 2).unwrap(), make_mr());
    }

    #[test]
    fn degrees_and_projection() {
        let r = make_r();
        let (d, _) = r.terms().iter().next().unwrap();
        assert_eq!(d.ab_degrees(), (vec![1, 0], vec![0, 1]));
        let mr1 = make_mr().place(&[1], 2);
        assert_eq!(mr1.terms().keys().next().unwrap().ab_degrees(), (vec![1, 0], vec![1, 0]));
        let p = Pattern::any(2).with_y(2, LenRule::NonEmpty);
        assert_eq!(project_component(&r, &p).unwrap(), r);
        let p = Pattern::any(2).with_y(2, LenRule::Empty);
        assert!(project_component(&r, &p).unwrap().is_zero());
    }

    #[test]
    fn basis_dimensions() {
        fn binom(n: usize, k: usize) -> usize {
            (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
        }
        for n in 1..=3 {
            for big_n in 0..=4 {
                let fact: usize = (1..=big_n).product();
                let c = binom(big_n + n - 1, n - 1);
                let b = diagram_basis(n, big_n);
                let mut dedup = b.clone();
                dedup.dedup();
                assert_eq!(dedup.len(), b.len());
                assert_eq!(b.len(), fact * c * c, "n={n} N={big_n}");
            }
        }
    }

    #[test]
    fn series_examples() {
        let r = make_r();
        let s = USeries::from_element(&UElement::one(2).sub(&r.scale(&Scalar::frac(1, 2))), 2);
        let inv = useries_inverse(&s).unwrap();
        let expected = UElement::one(2).add(&r.scale(&Scalar::frac(1, 2))).add(&r.mul(&r).scale(&Scalar::frac(1, 4)));
        assert_eq!(inv.to_element(), expected);
        let e = useries_exp(&USeries::from_element(&make_t().scale(&Scalar::frac(1, 2)), 1)).unwrap();
        assert_eq!(e.to_element(), UElement::one(2).add(&make_t().scale(&Scalar::frac(1, 2))));
    }

    #[test]
    fn mr_central_and_t_invariant_small() {
        for n in 1..=2 {
            let m: UElement = (1..=n).map(|k| make_mr().place(&[k], n)).fold(UElement::zero(n), |a, b| a.add(&b));
            for big_n in 0..=2 {
                for d in diagram_basis(n, big_n) {
                    let y = UElement::basis(d);
                    assert!(m.commutator(&y).is_zero(), "{y:?}");
                    let mut parts = vec![vec![1, 2]];
                    parts.extend((2..=n).map(|k| vec![k + 1]));
                    let lifted = y.insert(&parts, n + 1);
                    assert!(t_ij(n + 1, 1, 2).commutator(&lifted).is_zero(), "{y:?}");
                }
            }
        }
    }
}

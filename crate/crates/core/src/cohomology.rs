//! Co-Hochschild differentials and the universal exterior algebra.
//!
//! `(Λ^n g)_univ` is realized inside `U_n`: every slot holds one Lie
//! monomial, either in x-letters (an `a`-slot) or in y-letters (a `b`-slot),
//! and the element is totally antisymmetric. The mixed pieces
//! `C^{p,q} = (Λ^p a ⊗ Λ^q b)_univ` live on `p + q` slots with the `a`-slots
//! first and are antisymmetric within each group.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::rc::Rc;

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::kernel::{kernel_basis, Echelon, Scalar, SparseMatrix, SparseVec};
use crate::ualg::{diagram_basis, make_r, Diagram, UElement};
use crate::words::{expand_mono, lyndon_words, permutations, standard_bracket, AssocWord, Tag};

/// Parity of a permutation given as images of `0..n` (or any distinct keys).
pub fn perm_sign<T: Ord>(p: &[T]) -> i64 {
    let mut inv = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Partial antisymmetrizer over the given slots (1-based), including `1/k!`.
pub fn alt(a: &UElement, slots: &[usize]) -> UElement {
    let n = a.slots();
    if slots.len() <= 1 || a.is_zero() {
        return a.clone();
    }
    let mut out = UElement::zero(n);
    for perm in permutations(slots) {
        let mut sigma: Vec<usize> = (1..=n).collect();
        for (src, dst) in slots.iter().zip(&perm) {
            sigma[src - 1] = *dst;
        }
        out.add_scaled(&a.permute(&sigma), &Scalar::from_int(perm_sign(&perm)));
    }
    out.scale(&Scalar::factorial(slots.len() as u32).recip())
}

/// Total antisymmetrizer `Alt` on all slots.
pub fn alt_full(a: &UElement) -> UElement {
    let slots: Vec<usize> = (1..=a.slots()).collect();
    alt(a, &slots)
}

/// The co-Hochschild differential `U_n → U_{n+1}`.
pub fn cohoch_d(a: &UElement) -> UElement {
    let n = a.slots();
    let m = n + 1;
    let mut out = UElement::zero(m);
    for k in 1..=n {
        let parts: Vec<Vec<usize>> = (1..=n)
            .map(|i| match i.cmp(&k) {
                std::cmp::Ordering::Less => vec![i],
                std::cmp::Ordering::Equal => vec![k, k + 1],
                std::cmp::Ordering::Greater => vec![i + 1],
            })
            .collect();
        let sign = if k % 2 == 1 { 1 } else { -1 };
        out.add_scaled(&a.insert(&parts, m), &Scalar::from_int(sign));
    }
    let shifted: Vec<Vec<usize>> = (1..=n).map(|i| vec![i + 1]).collect();
    out.add_scaled(&a.insert(&shifted, m), &Scalar::from_int(-1));
    let kept: Vec<Vec<usize>> = (1..=n).map(|i| vec![i]).collect();
    out.add_scaled(&a.insert(&kept, m), &Scalar::from_int(if n % 2 == 0 { 1 } else { -1 }));
    out
}

/// Coordinates of elements of one `U_n` against an incrementally built diagram index.
#[derive(Clone, Debug, Default)]
pub struct Coords {
    index: FxHashMap<Diagram, usize>,
    diagrams: Vec<Diagram>,
}

impl Coords {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.diagrams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diagrams.is_empty()
    }

    /// Coordinates of `e`, registering unseen diagrams.
    pub fn vec(&mut self, e: &UElement) -> SparseVec {
        let mut v = SparseVec::new();
        for (d, c) in e.terms() {
            let next = self.diagrams.len();
            let k = *self.index.entry(d.clone()).or_insert(next);
            if k == next {
                self.diagrams.push(d.clone());
            }
            v.insert(k, c.clone());
        }
        v
    }

    /// Coordinates of `e`, or `None` if it uses an unregistered diagram.
    pub fn try_vec(&self, e: &UElement) -> Option<SparseVec> {
        let mut v = SparseVec::new();
        for (d, c) in e.terms() {
            v.insert(*self.index.get(d)?, c.clone());
        }
        Some(v)
    }

    pub fn element(&self, n: usize, v: &SparseVec) -> UElement {
        UElement::from_terms(n, v.iter().map(|(k, c)| (self.diagrams[*k].clone(), c.clone())))
    }
}

/// Rank of a family of elements of one `U_n`.
pub fn span_rank(elems: &[UElement]) -> usize {
    let mut coords = Coords::new();
    let mut ech = Echelon::new(false);
    for e in elems {
        ech.insert(coords.vec(e));
    }
    ech.rank()
}

/// Linear combination `Σ c_k v_k`.
pub fn combine(n: usize, vs: &[UElement], cs: &SparseVec) -> UElement {
    let mut out = UElement::zero(n);
    for (k, c) in cs {
        out.add_scaled(&vs[*k], c);
    }
    out
}

/// Subset of `elems` forming a basis of their span, in input order.
fn independent_subset(elems: Vec<UElement>) -> Vec<UElement> {
    let mut coords = Coords::new();
    let mut ech = Echelon::new(false);
    elems.into_iter().filter(|e| ech.insert(coords.vec(e))).collect()
}

/// An element of `C^{p,q}` realized on `p + q` slots.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WedgeElement {
    p: usize,
    q: usize,
    element: UElement,
}

fn slot_pattern_ok(d: &Diagram, p: usize) -> bool {
    let (a, b) = d.ab_degrees();
    (0..a.len()).all(|s| if s < p { a[s] > 0 && b[s] == 0 } else { a[s] == 0 && b[s] > 0 })
}

impl WedgeElement {
    /// Validates the slot pattern and the partial antisymmetry.
    pub fn new(p: usize, q: usize, element: UElement) -> Result<Self> {
        if element.slots() != p + q {
            return Err(Error::invalid(format!("element has {} slots, expected {}", element.slots(), p + q)));
        }
        if !element.terms().keys().all(|d| slot_pattern_ok(d, p)) {
            return Err(Error::invalid("element is not supported on the (a^p, b^q) slot pattern"));
        }
        let (sa, sb) = groups(p, q);
        if alt(&alt(&element, &sa), &sb) != element {
            return Err(Error::invalid("element is not antisymmetric within its slot groups"));
        }
        Ok(WedgeElement { p, q, element })
    }

    pub fn zero(p: usize, q: usize) -> Self {
        WedgeElement { p, q, element: UElement::zero(p + q) }
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn element(&self) -> &UElement {
        &self.element
    }

    pub fn is_zero(&self) -> bool {
        self.element.is_zero()
    }
}

fn groups(p: usize, q: usize) -> (Vec<usize>, Vec<usize>) {
    ((1..=p).collect(), (p + 1..=p + q).collect())
}

/// `C^{p,q} → (Λ^{p+q} g)_univ`: the signed sum over `(p,q)`-shuffles.
pub fn wedge_embed(w: &WedgeElement) -> UElement {
    let n = w.p + w.q;
    let mut out = UElement::zero(n);
    for set in subsets(n, w.p) {
        let mut sigma: Vec<usize> = set.clone();
        sigma.extend((1..=n).filter(|k| !set.contains(k)));
        out.add_scaled(&w.element.permute(&sigma), &Scalar::from_int(perm_sign(&sigma)));
    }
    out
}

/// Component on the `(a^p, b^q)` slot pattern, antisymmetrized within groups.
pub fn alt_project(a: &UElement, p: usize, q: usize) -> Result<WedgeElement> {
    if a.slots() != p + q {
        return Err(Error::invalid(format!("element has {} slots, pattern has {}", a.slots(), p + q)));
    }
    for d in a.terms().keys() {
        let (xa, yb) = d.ab_degrees();
        if xa.iter().zip(&yb).any(|(&x, &y)| (x == 0) == (y == 0)) {
            return Err(Error::invalid(format!("diagram {d:?} is not in the tensor power of g")));
        }
    }
    let comp = UElement::from_terms(a.slots(), a.terms().iter().filter(|(d, _)| slot_pattern_ok(d, p)).map(|(d, c)| (d.clone(), c.clone())));
    let (sa, sb) = groups(p, q);
    Ok(WedgeElement { p, q, element: alt(&alt(&comp, &sa), &sb) })
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..=n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, k, &mut Vec::new(), &mut out);
    out
}

/// Nonincreasing partitions of `total` into exactly `parts` positive parts.
pub fn partitions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    fn go(total: usize, parts: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if parts == 0 {
            if total == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for first in (1..=max.min(total)).rev() {
            if total - first < parts - 1 {
                continue;
            }
            cur.push(first);
            go(total - first, parts - 1, first, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(total, parts, total, &mut Vec::new(), &mut out);
    out
}

/// Ordered set partitions of `tags` into blocks of the given sizes.
fn ordered_set_partitions(tags: &[Tag], sizes: &[usize]) -> Vec<Vec<Vec<Tag>>> {
    if sizes.is_empty() {
        return if tags.is_empty() { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for chosen in subsets(tags.len(), sizes[0]) {
        let block: Vec<Tag> = chosen.iter().map(|&i| tags[i - 1]).collect();
        let rest: Vec<Tag> = tags.iter().copied().filter(|t| !block.contains(t)).collect();
        for mut tail in ordered_set_partitions(&rest, &sizes[1..]) {
            tail.insert(0, block.clone());
            out.push(tail);
        }
    }
    out
}

/// Word expansions of the Lyndon basis of the multilinear free Lie part on `tags`.
fn lie_basis_words(tags: &[Tag]) -> Vec<BTreeMap<AssocWord, i64>> {
    lyndon_words(tags).iter().map(|w| expand_mono(&standard_bracket(w))).collect()
}

/// Spanning elements of one fine-degree block of `C^{p,q}` of total degree `n`.
fn cpq_spanning(p: usize, q: usize, kx: &[usize], ky: &[usize]) -> Vec<UElement> {
    let total: usize = kx.iter().sum();
    let slots = p + q;
    let mut xblocks: Vec<Vec<BTreeMap<AssocWord, i64>>> = Vec::new();
    let mut next = 1 as Tag;
    for &l in kx {
        let tags: Vec<Tag> = (next..next + l as Tag).collect();
        next += l as Tag;
        xblocks.push(lie_basis_words(&tags));
    }
    let all: Vec<Tag> = (1..=total as Tag).collect();
    let (sa, sb) = groups(p, q);
    let mut out = Vec::new();
    for ypart in ordered_set_partitions(&all, ky) {
        let yblocks: Vec<Vec<BTreeMap<AssocWord, i64>>> = ypart.iter().map(|b| lie_basis_words(b)).collect();
        let choices: Vec<&Vec<BTreeMap<AssocWord, i64>>> = xblocks.iter().chain(yblocks.iter()).collect();
        let mut idx = vec![0usize; slots];
        'outer: loop {
            let mut terms: Vec<(Vec<AssocWord>, i64)> = vec![(Vec::new(), 1)];
            for (s, &i) in idx.iter().enumerate() {
                let sum = &choices[s][i];
                terms = terms
                    .iter()
                    .flat_map(|(ws, c)| {
                        sum.iter().map(move |(w, k)| {
                            let mut ws2 = ws.clone();
                            ws2.push(w.clone());
                            (ws2, c * k)
                        })
                    })
                    .collect();
            }
            let e = UElement::from_terms(
                slots,
                terms.into_iter().map(|(ws, c)| {
                    let mut x: Vec<AssocWord> = vec![Vec::new(); slots];
                    let mut y: Vec<AssocWord> = vec![Vec::new(); slots];
                    for (s, w) in ws.into_iter().enumerate() {
                        if s < p {
                            x[s] = w;
                        } else {
                            y[s] = w;
                        }
                    }
                    (Diagram::canonical(&x, &y), Scalar::from_int(c))
                }),
            );
            let e = alt(&alt(&e, &sa), &sb);
            if !e.is_zero() {
                out.push(e);
            }
            let mut k = 0;
            loop {
                if k == slots {
                    break 'outer;
                }
                idx[k] += 1;
                if idx[k] < choices[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
        }
    }
    out
}

/// A fine-degree block of `C^{p,q}`: sorted slot degrees on each side.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FineDegree {
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

/// Basis of `C^{p,q}` in total degree `n`, one block per fine degree.
pub fn cpq_basis_blocks(p: usize, q: usize, n: usize) -> Vec<(FineDegree, Vec<UElement>)> {
    let mut out = Vec::new();
    for kx in partitions(n, p) {
        for ky in partitions(n, q) {
            let block = independent_subset(cpq_spanning(p, q, &kx, &ky));
            out.push((FineDegree { a: kx.clone(), b: ky }, block));
        }
    }
    out
}

/// Basis of `C^{p,q}` in total degree `n`, reduced as a single family.
pub fn cpq_basis(p: usize, q: usize, n: usize) -> Vec<UElement> {
    let mut span = Vec::new();
    for kx in partitions(n, p) {
        for ky in partitions(n, q) {
            span.extend(cpq_spanning(p, q, &kx, &ky));
        }
    }
    independent_subset(span)
}

thread_local! {
    static WEDGE_BASES: RefCell<FxHashMap<(usize, usize), Rc<Vec<UElement>>>> = RefCell::new(FxHashMap::default());
}

/// Basis of `(Λ^k g)_univ` in total degree `n`, embedded in `U_k`.
pub fn wedge_basis(k: usize, n: usize) -> Rc<Vec<UElement>> {
    if let Some(hit) = WEDGE_BASES.with(|c| c.borrow().get(&(k, n)).cloned()) {
        return hit;
    }
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(UElement::one(0));
        }
    } else {
        for p in 1..k {
            for b in cpq_basis(p, k - p, n) {
                out.push(wedge_embed(&WedgeElement { p, q: k - p, element: b }));
            }
        }
    }
    let out = Rc::new(out);
    WEDGE_BASES.with(|c| c.borrow_mut().insert((k, n), out.clone()));
    out
}

/// The universal cobracket inserted at slot `k` (1-based) of an element of `(g^{⊗n})_univ`.
pub fn partial_del(k: usize, w: &UElement) -> UElement {
    let n = w.slots();
    assert!(k >= 1 && k <= n, "slot {k} outside 1..={n}");
    let m = n + 1;
    let first: Vec<usize> = (1..=n).map(|i| if i <= k { i } else { i + 1 }).collect();
    let second: Vec<usize> = (1..=n).map(|i| if i < k { i } else { i + 1 }).collect();
    let r = make_r().place(&[k, k + 1], m);
    r.commutator(&w.place(&first, m).add(&w.place(&second, m)))
}

/// The differential `∂^k : (Λ^k g)_univ → (Λ^{k+1} g)_univ`.
pub fn wedge_partial(x: &UElement) -> UElement {
    if x.slots() == 0 {
        return UElement::zero(1);
    }
    alt_full(&partial_del(1, x))
}

/// The six-commutator bracket `[[a, b]]` of two elements of `U_2`.
pub fn big_bracket(a: &UElement, b: &UElement) -> UElement {
    let at = |i, j| a.place(&[i, j], 3);
    let bt = |i, j| b.place(&[i, j], 3);
    let mut out = at(1, 2).commutator(&bt(1, 3));
    for term in [
        at(1, 2).commutator(&bt(2, 3)),
        at(1, 3).commutator(&bt(2, 3)),
        bt(1, 2).commutator(&at(1, 3)),
        bt(1, 2).commutator(&at(2, 3)),
        bt(1, 3).commutator(&at(2, 3)),
    ] {
        out.add_scaled(&term, &Scalar::one());
    }
    out
}

/// Result of splitting a 3-cocycle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub k: UElement,
    pub mu: UElement,
}

/// Echelon form of `[d((U_2)_n basis) | (Λ³ g)_{univ,n} basis]` in `(U_3)_n`.
pub struct CoboundarySolver {
    degree: usize,
    coords: Coords,
    ech: Echelon,
    basis2: Vec<Diagram>,
    wedge3: Rc<Vec<UElement>>,
    rank_d: usize,
}

impl CoboundarySolver {
    pub fn new(degree: usize) -> Result<Self> {
        let basis2 = diagram_basis(2, degree);
        let wedge3 = wedge_basis(3, degree);
        let mut coords = Coords::new();
        let mut ech = Echelon::new(true);
        for d in &basis2 {
            ech.insert(coords.vec(&cohoch_d(&UElement::basis(d.clone()))));
        }
        let rank_d = ech.rank();
        for w in wedge3.iter() {
            if !ech.insert(coords.vec(w)) {
                return Err(Error::Solver { degree, detail: "a wedge-3 basis element is a coboundary".into() });
            }
        }
        debug_assert_eq!(ech.rank(), rank_d + wedge3.len());
        Ok(CoboundarySolver { degree, coords, ech, basis2, wedge3, rank_d })
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Dimension of the 2-cocycles `{K | d(K) = 0}` in this degree.
    pub fn cocycle_dim(&self) -> usize {
        self.basis2.len() - self.rank_d
    }

    fn coefficients(&self, z: &UElement) -> Option<SparseVec> {
        self.ech.solve(&self.coords.try_vec(z)?)
    }

    fn assemble(&self, x: &SparseVec) -> Split {
        let nd = self.basis2.len();
        let mut k = UElement::zero(2);
        let mut mu = UElement::zero(3);
        for (i, c) in x {
            if *i < nd {
                k.add_scaled(&UElement::basis(self.basis2[*i].clone()), c);
            } else {
                mu.add_scaled(&self.wedge3[*i - nd], c);
            }
        }
        Split { k, mu }
    }

    /// `z = d(K) + μ` with `μ ∈ (Λ³ g)_univ`.
    pub fn split(&self, z: &UElement) -> Result<Split> {
        let residual = cohoch_d(z);
        if !residual.is_zero() {
            return Err(Error::Precondition { what: "input of split_cocycle is not a cocycle".into(), residual_terms: residual.len() });
        }
        let x = self
            .coefficients(z)
            .ok_or_else(|| Error::Solver { degree: self.degree, detail: "cocycle not spanned by coboundaries and wedge-3 classes".into() })?;
        Ok(self.assemble(&x))
    }

    /// Some `K` with `d(K) = z`; fails if `z` is not a coboundary.
    pub fn solve_coboundary(&self, z: &UElement) -> Result<UElement> {
        let s = self.split(z)?;
        if !s.mu.is_zero() {
            return Err(Error::Solver { degree: self.degree, detail: "right-hand side has a nonzero wedge-3 class".into() });
        }
        Ok(s.k)
    }
}

thread_local! {
    static COBOUNDARY: RefCell<FxHashMap<usize, Rc<CoboundarySolver>>> = RefCell::new(FxHashMap::default());
    static LAMBDA: RefCell<FxHashMap<usize, Rc<(Coords, Echelon, Rc<Vec<UElement>>)>>> = RefCell::new(FxHashMap::default());
}

/// The memoized [`CoboundarySolver`] for total degree `n`.
pub fn coboundary_solver(n: usize) -> Result<Rc<CoboundarySolver>> {
    if let Some(hit) = COBOUNDARY.with(|c| c.borrow().get(&n).cloned()) {
        return Ok(hit);
    }
    let s = Rc::new(CoboundarySolver::new(n)?);
    COBOUNDARY.with(|c| c.borrow_mut().insert(n, s.clone()));
    Ok(s)
}

/// Split a degree-`n` 3-cocycle `z` as `d(K) + μ`.
pub fn split_cocycle(z: &UElement, n: usize) -> Result<Split> {
    if z.slots() != 3 {
        return Err(Error::usage(format!("split_cocycle expects 3 slots, got {}", z.slots())));
    }
    if z.terms().keys().any(|d| d.degree() != n) {
        return Err(Error::invalid(format!("input is not homogeneous of degree {n}")));
    }
    coboundary_solver(n)?.split(z)
}

fn lambda_system(n: usize) -> Rc<(Coords, Echelon, Rc<Vec<UElement>>)> {
    if let Some(hit) = LAMBDA.with(|c| c.borrow().get(&n).cloned()) {
        return hit;
    }
    let basis = wedge_basis(2, n - 1);
    let r = make_r();
    let mut coords = Coords::new();
    let mut ech = Echelon::new(true);
    let c = Scalar::frac(-1, 3);
    for b in basis.iter() {
        ech.insert(coords.vec(&big_bracket(&r, b).scale(&c)));
    }
    let sys = Rc::new((coords, ech, basis));
    LAMBDA.with(|cache| cache.borrow_mut().insert(n, sys.clone()));
    sys
}

/// The `λ ∈ (Λ² g)_{univ,n−1}` with `μ = −(1/3)[[r, λ]]`.
pub fn solve_lambda(mu: &UElement, n: usize) -> Result<UElement> {
    if mu.slots() != 3 {
        return Err(Error::usage(format!("solve_lambda expects 3 slots, got {}", mu.slots())));
    }
    if mu.is_zero() {
        return Ok(UElement::zero(2));
    }
    if n == 0 {
        return Err(Error::Solver { degree: n, detail: "no wedge-2 space below degree 0".into() });
    }
    let check = wedge_partial(mu);
    if !check.is_zero() {
        return Err(Error::Precondition { what: "Alt((δ⊗id⊗id)(μ)) ≠ 0".into(), residual_terms: check.len() });
    }
    let sys = lambda_system(n);
    let (coords, ech, basis) = &*sys;
    let x = coords
        .try_vec(mu)
        .and_then(|v| ech.solve(&v))
        .ok_or_else(|| Error::Solver { degree: n, detail: "wedge-3 class is not of the form −(1/3)[[r,λ]] (H³ obstruction)".into() })?;
    Ok(combine(2, basis, &x))
}

/// Which complex a report describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Complex {
    /// `(U_•, d)`.
    Cohoch,
    /// `((Λ^• g)_univ, ∂)`.
    Wedge,
}

impl Complex {
    pub fn name(self) -> &'static str {
        match self {
            Complex::Cohoch => "cohoch",
            Complex::Wedge => "wedge",
        }
    }
}

/// Dimensions around one cohomology group `H^h` in total degree `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CohomReport {
    pub complex: Complex,
    pub h: usize,
    pub degree: usize,
    pub dim_space: usize,
    pub rank_in: usize,
    pub rank_out: usize,
    pub dim_kernel: usize,
    pub dim_cohomology: usize,
    /// Representatives of a basis of the cohomology.
    pub generators: Vec<UElement>,
    /// Per-block dimensions of the mixed pieces (wedge complex, fine mode only).
    pub fine_blocks: Vec<(usize, usize, FineDegree, usize)>,
}

/// `(space basis, images under the outgoing map, images of the incoming map)`.
type Complexes = (Vec<UElement>, Vec<UElement>, Vec<UElement>);

fn cohoch_pieces(h: usize, n: usize) -> Complexes {
    let basis: Vec<UElement> = diagram_basis(h, n).into_iter().map(UElement::basis).collect();
    let out = basis.iter().map(cohoch_d).collect();
    let inc = if h == 0 { Vec::new() } else { diagram_basis(h - 1, n).into_iter().map(|d| cohoch_d(&UElement::basis(d))).collect() };
    (basis, out, inc)
}

fn wedge_pieces(h: usize, n: usize) -> Complexes {
    let basis: Vec<UElement> = wedge_basis(h, n).to_vec();
    let out = basis.iter().map(wedge_partial).collect();
    let inc = if h == 0 || n == 0 { Vec::new() } else { wedge_basis(h - 1, n - 1).iter().map(wedge_partial).collect() };
    (basis, out, inc)
}

/// Assemble the differentials on canonical bases and compute `H^h` in total degree `n`.
pub fn cohomology_report(complex: Complex, h: usize, n: usize, fine: bool) -> Result<CohomReport> {
    if h > 4 {
        return Err(Error::usage("cohomology is only implemented for h ≤ 4"));
    }
    let (basis, out, inc) = match complex {
        Complex::Cohoch => cohoch_pieces(h, n),
        Complex::Wedge => wedge_pieces(h, n),
    };
    let dim_space = basis.len();
    let mut out_coords = Coords::new();
    let cols: Vec<SparseVec> = out.iter().map(|e| out_coords.vec(e)).collect();
    let m = SparseMatrix::from_columns(out_coords.len(), &cols);
    let kernel = kernel_basis(&m);
    let rank_out = dim_space - kernel.len();
    let mut coords = Coords::new();
    let mut ech = Echelon::new(false);
    for e in &inc {
        ech.insert(coords.vec(e));
    }
    let rank_in = ech.rank();
    let mut generators = Vec::new();
    for kv in &kernel {
        let mut e = UElement::zero(h);
        for (i, c) in kv.iter().enumerate() {
            e.add_scaled(&basis[i], c);
        }
        if ech.insert(coords.vec(&e)) {
            generators.push(e);
        }
    }
    let mut fine_blocks = Vec::new();
    if fine && complex == Complex::Wedge {
        for p in 1..h {
            for (fd, block) in cpq_basis_blocks(p, h - p, n) {
                fine_blocks.push((p, h - p, fd, block.len()));
            }
        }
    }
    Ok(CohomReport {
        complex,
        h,
        degree: n,
        dim_space,
        rank_in,
        rank_out,
        dim_kernel: kernel.len(),
        dim_cohomology: kernel.len() - rank_in,
        generators,
        fine_blocks,
    })
}

/// Whether `z ∈ (Λ^h g)_{univ,n}` is a cocycle that is not a coboundary.
pub fn is_nontrivial_wedge_class(z: &UElement, n: usize) -> bool {
    let h = z.slots();
    if !wedge_partial(z).is_zero() {
        return false;
    }
    if h == 0 || n == 0 {
        return !z.is_zero();
    }
    let mut coords = Coords::new();
    let mut ech = Echelon::new(false);
    for b in wedge_basis(h - 1, n - 1).iter() {
        ech.insert(coords.vec(&wedge_partial(b)));
    }
    ech.insert(coords.vec(z))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ualg::{make_mr, make_t, r_ij, t_ij};

    fn r() -> UElement {
        make_r()
    }

    #[test]
    fn d_examples() {
        assert!(cohoch_d(&r()).is_zero());
        assert!(cohoch_d(&UElement::one(0)).is_zero());
        assert_eq!(cohoch_d(&make_mr()), make_t());
        for n in 0..=3 {
            for d in diagram_basis(2, n) {
                assert!(cohoch_d(&cohoch_d(&UElement::basis(d))).is_zero());
            }
        }
    }

    #[test]
    fn projection_examples() {
        let lam = r().sub(&r().permute(&[2, 1]));
        let w = alt_project(&lam, 1, 1).unwrap();
        assert_eq!(w.element(), &r());
        assert_eq!(wedge_embed(&w), lam);
        assert!(alt_project(&make_t(), 2, 0).unwrap().is_zero());
        assert!(alt_project(&make_mr(), 1, 0).is_err());
        for b in wedge_basis(2, 2).iter() {
            let w = alt_project(b, 1, 1).unwrap();
            assert_eq!(&wedge_embed(&w), b);
        }
    }

    #[test]
    fn blocks_agree_with_unblocked() {
        for n in 1..=3 {
            for (p, q) in [(1, 1), (2, 1), (1, 2)] {
                let total: usize = cpq_basis_blocks(p, q, n).iter().map(|(_, b)| b.len()).sum();
                assert_eq!(total, cpq_basis(p, q, n).len(), "p={p} q={q} n={n}");
            }
        }
    }

    #[test]
    fn partial_del_example() {
        let expected = r_ij(3, 1, 2).commutator(&r_ij(3, 1, 3).add(&r_ij(3, 2, 3)));
        assert_eq!(partial_del(1, &r()), expected);
        assert!(partial_del(1, &UElement::one(2)).is_zero());
    }

    #[test]
    fn wedge_partial_squares_to_zero() {
        for n in 1..=2 {
            for b in wedge_basis(2, n).iter() {
                assert!(wedge_partial(&wedge_partial(b)).is_zero());
            }
        }
    }

    #[test]
    fn cohoch_low_degree() {
        let rep = cohomology_report(Complex::Cohoch, 2, 1, false).unwrap();
        assert_eq!(rep.dim_space, 4);
        assert_eq!(rep.dim_kernel, 2);
        assert_eq!(rep.rank_in, 1);
        assert_eq!(rep.dim_cohomology, 1);
        let kernel_ok = [make_t(), r().sub(&r().permute(&[2, 1]))];
        for k in &kernel_ok {
            assert!(cohoch_d(k).is_zero());
        }
    }

    #[test]
    fn degree_two_wedge_class() {
        let z = t_ij(3, 1, 2).commutator(&t_ij(3, 2, 3));
        assert_eq!(alt_full(&z), z);
        assert!(wedge_partial(&z).is_zero());
        let lam = r().sub(&r().permute(&[2, 1]));
        assert_eq!(wedge_partial(&lam).scale(&Scalar::from_int(3)), z);
        assert!(!is_nontrivial_wedge_class(&z, 2));
    }

    #[test]
    fn partial_two_is_a_third_of_big_bracket() {
        let third = Scalar::frac(1, 3);
        for n in 1..=3 {
            for b in wedge_basis(2, n).iter() {
                let bb = big_bracket(&r(), b);
                assert_eq!(wedge_partial(b), bb.scale(&third));
                assert_eq!(alt_full(&bb), bb);
            }
        }
    }

    #[test]
    fn lambda_round_trip() {
        for n in 2..=3 {
            for b in wedge_basis(2, n).iter() {
                let mu = big_bracket(&r(), b).scale(&Scalar::frac(-1, 3));
                assert_eq!(&solve_lambda(&mu, n + 1).unwrap(), b);
            }
        }
        assert!(solve_lambda(&UElement::zero(3), 3).unwrap().is_zero());
    }

    #[test]
    fn split_examples() {
        let s = split_cocycle(&UElement::zero(3), 2).unwrap();
        assert!(s.k.is_zero() && s.mu.is_zero());
        let k0 = UElement::basis(diagram_basis(2, 2)[5].clone()).add(&UElement::basis(diagram_basis(2, 2)[11].clone()));
        let z = cohoch_d(&k0);
        let s = split_cocycle(&z, 2).unwrap();
        assert!(s.mu.is_zero());
        assert_eq!(cohoch_d(&s.k), z);
        let w = t_ij(3, 1, 2).commutator(&t_ij(3, 2, 3));
        let s = split_cocycle(&w.add(&z), 2).unwrap();
        assert_eq!(s.mu, w);
        assert_eq!(cohoch_d(&s.k), z);
        assert!(matches!(split_cocycle(&r_ij(3, 1, 2).mul(&r_ij(3, 1, 3)), 2), Err(Error::Precondition { .. })));
    }
}

//! Exact rationals and sparse linear algebra over them.
//!
//! Everything downstream (cohomology splits, associator and twist solves,
//! rank certificates) reduces to the routines here, so they are exact and
//! fully deterministic: pivots are chosen by column, then row.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Scalar(BigRational);

impl Scalar {
    pub fn zero() -> Self {
        Scalar(BigRational::zero())
    }

    pub fn one() -> Self {
        Scalar(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(BigRational::from_integer(BigInt::from(n)))
    }

    /// `p/q`; panics if `q == 0`.
    pub fn frac(p: i64, q: i64) -> Self {
        assert!(q != 0, "zero denominator");
        Scalar(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn from_bigs(p: BigInt, q: BigInt) -> Option<Self> {
        if q.is_zero() {
            None
        } else {
            Some(Scalar(BigRational::new(p, q)))
        }
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    /// Multiplicative inverse; panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Scalar(self.0.recip())
    }

    pub fn abs(&self) -> Self {
        Scalar(self.0.abs())
    }

    /// Small-integer view, if the value is an integer that fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.0.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn factorial(n: u32) -> Self {
        let mut acc = BigInt::one();
        for k in 2..=n {
            acc *= k;
        }
        Scalar(BigRational::from_integer(acc))
    }

    pub fn mul_int(&self, k: i64) -> Self {
        Scalar(&self.0 * BigRational::from_integer(BigInt::from(k)))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    /// Accepts `p/q` or a bare integer `p`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::parse(format!("malformed rational {s:?}"));
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p, q),
            None => (s, "1"),
        };
        let valid = |t: &str, signed: bool| {
            let digits = if signed { t.strip_prefix('-').unwrap_or(t) } else { t };
            !digits.is_empty() && digits.bytes().all(|b| b.is_ascii_digit())
        };
        if !valid(p, true) || !valid(q, false) {
            return Err(bad());
        }
        let p: BigInt = p.parse().map_err(|_| bad())?;
        let q: BigInt = q.parse().map_err(|_| bad())?;
        Scalar::from_bigs(p, q).ok_or_else(bad)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $atr:ident, $am:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                Scalar($tr::$m(self.0, rhs.0))
            }
        }
        impl<'a> $tr<&'a Scalar> for &'a Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                Scalar($tr::$m(&self.0, &rhs.0))
            }
        }
        impl<'a> $tr<&'a Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &'a Scalar) -> Scalar {
                Scalar($tr::$m(self.0, &rhs.0))
            }
        }
        impl $atr for Scalar {
            fn $am(&mut self, rhs: Scalar) {
                $atr::$am(&mut self.0, rhs.0)
            }
        }
        impl<'a> $atr<&'a Scalar> for Scalar {
            fn $am(&mut self, rhs: &'a Scalar) {
                $atr::$am(&mut self.0, &rhs.0)
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);

impl Div for Scalar {
    type Output = Scalar;
    fn div(self, rhs: Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        Scalar(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Scalar> for &'a Scalar {
    type Output = Scalar;
    fn div(self, rhs: &'a Scalar) -> Scalar {
        assert!(!rhs.is_zero(), "division by zero");
        Scalar(&self.0 / &rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-&self.0)
    }
}

/// Sparse vector: index to nonzero coefficient.
pub type SparseVec = BTreeMap<usize, Scalar>;

/// `v += c * w`, dropping cancelled entries.
pub fn axpy(v: &mut SparseVec, c: &Scalar, w: &SparseVec) {
    if c.is_zero() {
        return;
    }
    for (k, x) in w {
        let delta = c * x;
        match v.entry(*k) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += delta;
                if e.get().is_zero() {
                    e.remove();
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(delta);
            }
        }
    }
}

/// A sparse matrix over the rationals, stored row-major without zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseVec>,
}

impl SparseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, data: vec![SparseVec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    /// Build from dense rows of small integers.
    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "ragged rows");
            for (j, &x) in r.iter().enumerate() {
                m.set(i, j, Scalar::from_int(x));
            }
        }
        m
    }

    /// Build from column vectors (index = row).
    pub fn from_columns(rows: usize, columns: &[SparseVec]) -> Self {
        let mut m = Self::zeros(rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            for (i, x) in c {
                m.set(*i, j, x.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &SparseVec {
        &self.data[i]
    }

    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i].get(&j).cloned().unwrap_or_else(Scalar::zero)
    }

    /// Set an entry; storing zero removes it. Panics when out of range.
    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        if x.is_zero() {
            self.data[i].remove(&j);
        } else {
            self.data[i].insert(j, x);
        }
    }

    /// Nonzero entries in row-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data.iter().enumerate().flat_map(|(i, r)| r.iter().map(move |(j, x)| (i, *j, x)))
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    pub fn mul_vec(&self, x: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(x.len(), self.cols);
        self.data.iter().map(|r| r.iter().fold(Scalar::zero(), |acc, (j, a)| acc + a * &x[*j])).collect()
    }

    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = SparseMatrix::zeros(self.rows, other.cols);
        for (i, r) in self.data.iter().enumerate() {
            let mut acc = SparseVec::new();
            for (k, a) in r {
                axpy(&mut acc, a, &other.data[*k]);
            }
            out.data[i] = acc;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(false);
        for r in &self.data {
            e.insert(r.clone());
        }
        e.rank()
    }
}

/// Reduced row-echelon form and its pivot columns.
pub fn rref(m: &SparseMatrix) -> (SparseMatrix, Vec<usize>) {
    let mut rows: Vec<SparseVec> = m.data.iter().filter(|r| !r.is_empty()).cloned().collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..m.cols {
        let Some(p) = (rank..rows.len()).find(|&i| rows[i].contains_key(&col)) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][&col].recip();
        for x in rows[rank].values_mut() {
            *x *= &inv;
        }
        let pivot_row = rows[rank].clone();
        for (i, r) in rows.iter_mut().enumerate() {
            if i == rank {
                continue;
            }
            if let Some(c) = r.get(&col).cloned() {
                axpy(r, &-c, &pivot_row);
            }
        }
        pivots.push(col);
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rows.truncate(rank);
    let mut out = SparseMatrix::zeros(m.rows, m.cols);
    for (i, r) in rows.into_iter().enumerate() {
        out.data[i] = r;
    }
    (out, pivots)
}

/// One solution of `m x = b` with free variables zero, or `None` if inconsistent.
pub fn solve(m: &SparseMatrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != m.rows {
        return Err(Error::usage(format!("right-hand side has length {}, expected {}", b.len(), m.rows)));
    }
    let mut e = Echelon::new(true);
    for j in 0..m.cols {
        let mut c = SparseVec::new();
        for i in 0..m.rows {
            if let Some(x) = m.data[i].get(&j) {
                c.insert(i, x.clone());
            }
        }
        e.insert(c);
    }
    let rhs: SparseVec = b.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (i, x.clone())).collect();
    Ok(e.solve(&rhs).map(|x| {
        let mut out = vec![Scalar::zero(); m.cols];
        for (j, v) in x {
            out[j] = v;
        }
        out
    }))
}

/// Null-space basis, one vector per free column in increasing column order.
pub fn kernel_basis(m: &SparseMatrix) -> Vec<Vec<Scalar>> {
    let (r, pivots) = rref(m);
    let mut is_pivot = vec![false; m.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::new();
    for f in (0..m.cols).filter(|&j| !is_pivot[j]) {
        let mut v = vec![Scalar::zero(); m.cols];
        v[f] = Scalar::one();
        for (i, &p) in pivots.iter().enumerate() {
            if let Some(x) = r.data[i].get(&f) {
                v[p] = -x;
            }
        }
        out.push(v);
    }
    out
}

/// Incremental echelon basis of a growing set of sparse vectors.
///
/// Each stored vector is normalized so its lowest index (its pivot) has
/// coefficient one. With tracking enabled, every stored vector remembers how
/// it was combined from the inserted inputs, so [`Echelon::solve`] returns
/// coefficients over the insertion order; dependent inputs get coefficient 0.
#[derive(Clone, Debug)]
pub struct Echelon {
    track: bool,
    inserted: usize,
    basis: Vec<(SparseVec, SparseVec)>,
    pivot_of: FxHashMap<usize, usize>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(track: bool) -> Self {
        Echelon { track, inserted: 0, basis: Vec::new(), pivot_of: FxHashMap::default(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Number of vectors offered so far, independent or not.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Positions (in insertion order) of the inputs that were independent.
    pub fn independent_inputs(&self) -> &[usize] {
        &self.pivots
    }

    fn reduce(&self, mut v: SparseVec, combo: &mut SparseVec) -> SparseVec {
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).find(|(k, _)| self.pivot_of.contains_key(k)).map(|(k, c)| (*k, c.clone()));
            let Some((k, c)) = next else { break };
            let (bv, bc) = &self.basis[self.pivot_of[&k]];
            let neg = -c;
            axpy(&mut v, &neg, bv);
            if self.track {
                axpy(combo, &neg, bc);
            }
            cursor = k + 1;
        }
        v
    }

    /// True when `v` lies in the span of what has been inserted.
    pub fn contains(&self, v: &SparseVec) -> bool {
        let mut scratch = SparseVec::new();
        self.reduce(v.clone(), &mut scratch).is_empty()
    }

    /// Insert a vector; returns whether it enlarged the span.
    pub fn insert(&mut self, v: SparseVec) -> bool {
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo = SparseVec::new();
        if self.track {
            combo.insert(idx, Scalar::one());
        }
        let mut rem = self.reduce(v, &mut combo);
        let Some((&p, lead)) = rem.iter().next() else { return false };
        let inv = lead.recip();
        for x in rem.values_mut() {
            *x *= &inv;
        }
        for x in combo.values_mut() {
            *x *= &inv;
        }
        self.pivot_of.insert(p, self.basis.len());
        self.basis.push((rem, combo));
        self.pivots.push(idx);
        true
    }

    /// Coefficients `x` over the inserted vectors with `Σ x_k v_k = b`.
    pub fn solve(&self, b: &SparseVec) -> Option<SparseVec> {
        assert!(self.track, "solve requires tracking");
        let mut combo = SparseVec::new();
        let rem = self.reduce(b.clone(), &mut combo);
        if !rem.is_empty() {
            return None;
        }
        for x in combo.values_mut() {
            *x = -x.clone();
        }
        Some(combo)
    }

    /// Residual of `b` after reduction against the current span.
    pub fn remainder(&self, b: &SparseVec) -> SparseVec {
        let mut scratch = SparseVec::new();
        self.reduce(b.clone(), &mut scratch)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn scalar_normalizes() {
        let x = Scalar::frac(6, -4);
        assert_eq!(x.to_string(), "-3/2");
        assert_eq!(Scalar::frac(0, 5).to_string(), "0/1");
        assert_eq!("-3/2".parse::<Scalar>().unwrap(), x);
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("1/-2".parse::<Scalar>().is_err());
        assert!("".parse::<Scalar>().is_err());
    }

    #[test]
    fn rref_examples() {
        let (r, p) = rref(&SparseMatrix::identity(2));
        assert_eq!(r, SparseMatrix::identity(2));
        assert_eq!(p, vec![0, 1]);
        let (r, p) = rref(&SparseMatrix::from_dense(&[vec![1, 2], vec![2, 4]]));
        assert_eq!(r, SparseMatrix::from_dense(&[vec![1, 2], vec![0, 0]]));
        assert_eq!(p, vec![0]);
    }

    #[test]
    fn solve_examples() {
        let b = vec![s(3), s(-7)];
        assert_eq!(solve(&SparseMatrix::identity(2), &b).unwrap(), Some(b));
        let m = SparseMatrix::from_dense(&[vec![1, 1]]);
        assert_eq!(solve(&m, &[s(2)]).unwrap(), Some(vec![s(2), s(0)]));
        let m = SparseMatrix::from_dense(&[vec![1], vec![1]]);
        assert_eq!(solve(&m, &[s(0), s(1)]).unwrap(), None);
        assert!(matches!(solve(&m, &[s(0)]), Err(Error::Usage(_))));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&SparseMatrix::identity(3)).is_empty());
        assert_eq!(kernel_basis(&SparseMatrix::zeros(2, 3)).len(), 3);
        let k = kernel_basis(&SparseMatrix::from_dense(&[vec![1, 2]]));
        assert_eq!(k, vec![vec![s(-2), s(1)]]);
    }
}

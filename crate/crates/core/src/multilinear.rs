//! Index combinatorics for exterior and symmetric algebras, and every sign
//! convention used by the rest of the crate.
//!
//! Subsets of `1..=n` are stored as bitmasks (bit `j-1` for index `j`);
//! enumerating masks in increasing numeric order is colexicographic order.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_traits::Zero;

use crate::exact_linalg::{int, Scalar};

pub const MAX_GENERATORS: usize = 31;

/// `(-1)^e`.
pub fn sign_pow(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Sign picked up when swapping homogeneous elements of degrees `p` and `q`.
pub fn koszul_sign(p: i64, q: i64) -> i64 {
    sign_pow(p * q)
}

/// `(-1)^(l(l-1)/2)`, the sign reversing the order of `l` odd elements.
pub fn koszul_epsilon(l: usize) -> i64 {
    let l = l as i64;
    sign_pow(l * (l - 1) / 2)
}

/// Sign for the cohomological shift by `m`.
pub fn shift_sign(m: i64) -> i64 {
    sign_pow(m)
}

pub fn binomial(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        0
    } else {
        num_integer::binomial(n as u64, k as u64)
    }
}

#[derive(Copy, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetIndex(u32);

impl SubsetIndex {
    pub const EMPTY: SubsetIndex = SubsetIndex(0);

    pub fn from_bits(bits: u32) -> Self {
        SubsetIndex(bits)
    }

    /// Builds a subset from strictly increasing 1-based indices.
    pub fn new(elements: &[usize]) -> Option<Self> {
        let mut bits = 0u32;
        let mut last = 0;
        for &e in elements {
            if e == 0 || e <= last || e > MAX_GENERATORS {
                return None;
            }
            bits |= 1 << (e - 1);
            last = e;
        }
        Some(SubsetIndex(bits))
    }

    pub fn singleton(j: usize) -> Self {
        SubsetIndex(1 << (j - 1))
    }

    /// The full set `{1, ..., n}`.
    pub fn full(n: usize) -> Self {
        SubsetIndex(((1u64 << n) - 1) as u32)
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, j: usize) -> bool {
        j >= 1 && self.0 & (1 << (j - 1)) != 0
    }

    pub fn elements(self) -> Vec<usize> {
        (1..=32).filter(|&j| self.contains(j)).collect()
    }

    pub fn max_element(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn fits(self, n: usize) -> bool {
        self.max_element() <= n
    }

    pub fn without(self, j: usize) -> Self {
        SubsetIndex(self.0 & !(1 << (j - 1)))
    }

    pub fn with(self, j: usize) -> Self {
        SubsetIndex(self.0 | (1 << (j - 1)))
    }

    pub fn union(self, other: Self) -> Self {
        SubsetIndex(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        SubsetIndex(self.0 & other.0)
    }

    pub fn complement(self, n: usize) -> Self {
        SubsetIndex(Self::full(n).0 & !self.0)
    }
}

impl fmt::Debug for SubsetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.elements())
    }
}

/// `(-1)^(k-1)` when `j` is the k-th element of `J`, and 0 when `j` is not in `J`.
pub fn sgn(set: SubsetIndex, j: usize) -> i64 {
    if !set.contains(j) {
        return 0;
    }
    let below = set.0 & ((1u32 << (j - 1)) - 1);
    sign_pow(below.count_ones() as i64)
}

/// `e_J ∧ e_K = sign * e_{J ∪ K}`; zero when the sets overlap.
pub fn wedge_sign(a: SubsetIndex, b: SubsetIndex) -> i64 {
    if a.0 & b.0 != 0 {
        return 0;
    }
    let mut inversions = 0i64;
    let mut rest = b.0;
    while rest != 0 {
        let pos = rest.trailing_zeros();
        inversions += (a.0 >> pos).count_ones() as i64;
        rest &= rest - 1;
    }
    sign_pow(inversions)
}

/// Subsets of `{1..n}` of the given size, in colexicographic order.
pub fn subsets(n: usize, size: usize) -> Vec<SubsetIndex> {
    if size > n {
        return Vec::new();
    }
    all_subsets(n).into_iter().filter(|s| s.len() == size).collect()
}

/// All subsets of `{1..n}`, in colexicographic order.
pub fn all_subsets(n: usize) -> Vec<SubsetIndex> {
    assert!(n <= MAX_GENERATORS, "too many generators");
    (0..(1u64 << n)).map(|b| SubsetIndex(b as u32)).collect()
}

/// Element of the exterior algebra on `n` generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtElement {
    n: usize,
    coeffs: BTreeMap<SubsetIndex, Scalar>,
}

impl ExtElement {
    pub fn zero(n: usize) -> Self {
        ExtElement { n, coeffs: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::basis(n, SubsetIndex::EMPTY)
    }

    pub fn basis(n: usize, set: SubsetIndex) -> Self {
        assert!(set.fits(n), "index out of range");
        let mut coeffs = BTreeMap::new();
        coeffs.insert(set, int(1));
        ExtElement { n, coeffs }
    }

    pub fn generator(n: usize, j: usize) -> Self {
        Self::basis(n, SubsetIndex::singleton(j))
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (SubsetIndex, Scalar)>) -> Self {
        let mut e = Self::zero(n);
        for (s, c) in terms {
            e.add_term(s, &c);
        }
        e
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SubsetIndex, &Scalar)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, set: SubsetIndex) -> Scalar {
        self.coeffs.get(&set).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add_term(&mut self, set: SubsetIndex, c: &Scalar) {
        assert!(set.fits(self.n), "index out of range");
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(set).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&set);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (s, c) in &other.coeffs {
            out.add_term(*s, c);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        Self::from_terms(self.n, self.coeffs.iter().map(|(s, v)| (*s, v * c)))
    }

    /// Degree if all terms share one, `None` for zero or mixed elements.
    pub fn degree(&self) -> Option<usize> {
        let mut degs = self.coeffs.keys().map(|s| s.len());
        let first = degs.next()?;
        degs.all(|d| d == first).then_some(first)
    }

    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "ambient rank");
        let mut out = Self::zero(self.n);
        for (a, ca) in &self.coeffs {
            for (b, cb) in &other.coeffs {
                let s = wedge_sign(*a, *b);
                if s != 0 {
                    out.add_term(a.union(*b), &(ca * cb * int(s)));
                }
            }
        }
        out
    }

    /// Removal of index `j` by the sgn rule, extended linearly.
    pub fn contract(&self, j: usize) -> Self {
        let mut out = Self::zero(self.n);
        for (set, c) in &self.coeffs {
            let s = sgn(*set, j);
            if s != 0 {
                out.add_term(set.without(j), &(c * int(s)));
            }
        }
        out
    }
}

/// A monomial in `n` commuting variables, stored as an exponent vector.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultisetIndex {
    exps: Vec<u32>,
}

impl MultisetIndex {
    pub fn one(n: usize) -> Self {
        MultisetIndex { exps: vec![0; n] }
    }

    /// From a weakly increasing list of 1-based variable indices.
    pub fn from_elements(n: usize, elements: &[usize]) -> Option<Self> {
        let mut exps = vec![0; n];
        let mut last = 1;
        for &e in elements {
            if e < last || e == 0 || e > n {
                return None;
            }
            exps[e - 1] += 1;
            last = e;
        }
        Some(MultisetIndex { exps })
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        MultisetIndex { exps }
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exps
    }

    pub fn n(&self) -> usize {
        self.exps.len()
    }

    pub fn degree(&self) -> usize {
        self.exps.iter().map(|&e| e as usize).sum()
    }

    pub fn elements(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (j, &e) in self.exps.iter().enumerate() {
            out.extend(std::iter::repeat_n(j + 1, e as usize));
        }
        out
    }

    pub fn times_variable(&self, j: usize) -> Self {
        let mut exps = self.exps.clone();
        exps[j - 1] += 1;
        MultisetIndex { exps }
    }

    pub fn multiply(&self, other: &Self) -> Self {
        assert_eq!(self.n(), other.n(), "ambient rank");
        MultisetIndex { exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect() }
    }
}

impl fmt::Debug for MultisetIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{:?}", self.elements())
    }
}

/// Element of the symmetric algebra on `n` generators.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SymElement {
    n: usize,
    coeffs: BTreeMap<MultisetIndex, Scalar>,
}

impl SymElement {
    pub fn monomial(m: MultisetIndex) -> Self {
        let n = m.n();
        let mut coeffs = BTreeMap::new();
        coeffs.insert(m, int(1));
        SymElement { n, coeffs }
    }

    pub fn variable(n: usize, j: usize) -> Self {
        Self::monomial(MultisetIndex::one(n).times_variable(j))
    }

    pub fn coeff(&self, m: &MultisetIndex) -> Scalar {
        self.coeffs.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultisetIndex, &Scalar)> {
        self.coeffs.iter()
    }
}

pub fn sym_multiply(a: &SymElement, b: &SymElement) -> SymElement {
    assert_eq!(a.n, b.n, "ambient rank");
    let mut coeffs: BTreeMap<MultisetIndex, Scalar> = BTreeMap::new();
    for (ma, ca) in &a.coeffs {
        for (mb, cb) in &b.coeffs {
            let e = coeffs.entry(ma.multiply(mb)).or_insert_with(Scalar::zero);
            *e += ca * cb;
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    SymElement { n: a.n, coeffs }
}

/// Monomials of a fixed degree, ordered lexicographically by their element lists.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    list: Vec<MultisetIndex>,
    index: HashMap<MultisetIndex, usize>,
}

impl MonomialBasis {
    pub fn new(n: usize, degree: i64) -> Self {
        let mut list = Vec::new();
        if degree >= 0 {
            let mut current = Vec::new();
            push_multisets(n, degree as usize, 1, &mut current, &mut list);
        }
        let index = list.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MonomialBasis { list, index }
    }

    pub fn len(&self) -> usize {
        self.list.len()
    }

    pub fn is_empty(&self) -> bool {
        self.list.is_empty()
    }

    pub fn get(&self, i: usize) -> &MultisetIndex {
        &self.list[i]
    }

    pub fn position(&self, m: &MultisetIndex) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = &MultisetIndex> {
        self.list.iter()
    }
}

fn push_multisets(n: usize, remaining: usize, min: usize, current: &mut Vec<usize>, out: &mut Vec<MultisetIndex>) {
    if remaining == 0 {
        out.push(MultisetIndex::from_elements(n, current).expect("weakly increasing"));
        return;
    }
    for j in min..=n {
        current.push(j);
        push_multisets(n, remaining - 1, j, current, out);
        current.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(e: &[usize]) -> SubsetIndex {
        SubsetIndex::new(e).unwrap()
    }

    #[test]
    fn sgn_examples() {
        assert_eq!(sgn(set(&[2]), 2), 1);
        assert_eq!(sgn(set(&[1, 3]), 3), -1);
        assert_eq!(sgn(set(&[1, 3]), 2), 0);
    }

    #[test]
    fn wedge_examples() {
        let d1 = ExtElement::generator(2, 1);
        let d2 = ExtElement::generator(2, 2);
        assert_eq!(d1.wedge(&d2), ExtElement::basis(2, set(&[1, 2])));
        assert_eq!(d2.wedge(&d1), ExtElement::basis(2, set(&[1, 2])).scale(&int(-1)));
        assert!(d1.wedge(&d1).is_zero());
    }

    #[test]
    fn contract_examples() {
        let d12 = ExtElement::basis(2, set(&[1, 2]));
        assert_eq!(d12.contract(1), ExtElement::generator(2, 2));
        assert_eq!(d12.contract(2), ExtElement::generator(2, 1).scale(&int(-1)));
        assert!(ExtElement::generator(2, 1).contract(2).is_zero());
    }

    #[test]
    fn epsilon_values() {
        // l(l-1)/2 for l = 0..5 is 0, 0, 1, 3, 6, 10
        let expected = [1, 1, -1, -1, 1, 1];
        for (l, e) in expected.iter().enumerate() {
            assert_eq!(koszul_epsilon(l), *e, "l = {l}");
        }
    }

    #[test]
    fn sym_multiply_examples() {
        let x1 = SymElement::variable(2, 1);
        let x2 = SymElement::variable(2, 2);
        let x1x2 = SymElement::monomial(MultisetIndex::from_elements(2, &[1, 2]).unwrap());
        assert_eq!(sym_multiply(&x1, &x2), x1x2);
        assert_eq!(sym_multiply(&x2, &x1), x1x2);
        let x1sq = SymElement::monomial(MultisetIndex::from_elements(2, &[1, 1]).unwrap());
        assert_eq!(sym_multiply(&x1, &x1), x1sq);
    }

    #[test]
    fn colex_order() {
        let s = subsets(3, 2);
        assert_eq!(s, vec![set(&[1, 2]), set(&[1, 3]), set(&[2, 3])]);
        assert_eq!(all_subsets(2).len(), 4);
    }

    #[test]
    fn monomial_counts() {
        for n in 1..=4usize {
            for d in 0..=5i64 {
                let expected = binomial(n as i64 + d - 1, d);
                assert_eq!(MonomialBasis::new(n, d).len() as u64, expected);
            }
        }
        assert!(MonomialBasis::new(3, -1).is_empty());
    }

    #[test]
    fn subset_validation() {
        assert!(SubsetIndex::new(&[2, 1]).is_none());
        assert!(SubsetIndex::new(&[0]).is_none());
        assert!(MultisetIndex::from_elements(2, &[2, 1]).is_none());
    }
}

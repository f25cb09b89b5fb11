//! sl2-triples on multigraded spaces: hard Lefschetz, completion of `(X, H)`
//! to a triple, primitive decompositions and Weil elements.
//!
//! The weight of a degree tuple is an affine integer functional of it, so
//! the same space can carry several commuting sl2 actions.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::exact_linalg::{factorial, int, Matrix, Scalar};
use crate::gradedcat::{Degree, GradedOperator, GradedVector, MultiGradedSpace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Sl2Error {
    #[error("operator does not raise the weight by 2 on the block {0:?} -> {1:?}")]
    NotRaising(Degree, Degree),
    #[error("hard Lefschetz fails: X^{0} is not an isomorphism from weight -{0} to weight {0}")]
    HardLefschetz(i64),
    #[error("bracket identity {0} fails")]
    Bracket(&'static str),
    #[error("operator is not of pure weight")]
    NotPureWeight,
    #[error("{0}")]
    Shape(String),
}

/// `weight(d) = Σ_a functional[a] · d[a] + offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weights {
    pub functional: Vec<i64>,
    pub offset: i64,
}

impl Weights {
    pub fn new(functional: Vec<i64>, offset: i64) -> Self {
        Weights { functional, offset }
    }

    /// Weight equal to the degree along one axis.
    pub fn axis(axes: usize, axis: usize) -> Self {
        let mut f = vec![0; axes];
        f[axis] = 1;
        Weights { functional: f, offset: 0 }
    }

    pub fn weight(&self, d: &[i64]) -> i64 {
        self.functional.iter().zip(d).map(|(a, b)| a * b).sum::<i64>() + self.offset
    }
}

/// The components of a space grouped by weight, each weight space laid out degree by degree.
#[derive(Clone, Debug)]
struct WeightLayout {
    spaces: BTreeMap<i64, Vec<(Degree, usize, usize)>>,
}

impl WeightLayout {
    fn new(space: &MultiGradedSpace, weights: &Weights) -> Self {
        let mut spaces: BTreeMap<i64, Vec<(Degree, usize, usize)>> = BTreeMap::new();
        for (d, n) in space.components() {
            let entry = spaces.entry(weights.weight(d)).or_default();
            let off = entry.last().map_or(0, |(_, m, o)| m + o);
            entry.push((d.clone(), n, off));
        }
        WeightLayout { spaces }
    }

    fn dim(&self, w: i64) -> usize {
        self.spaces.get(&w).and_then(|v| v.last()).map_or(0, |(_, m, o)| m + o)
    }

    /// Matrix of `op` from weight `ws` to weight `wt`.
    fn block(&self, op: &GradedOperator, ws: i64, wt: i64) -> Matrix {
        let mut triplets = Vec::new();
        for (sd, _, so) in self.spaces.get(&ws).into_iter().flatten() {
            for (td, _, to) in self.spaces.get(&wt).into_iter().flatten() {
                if let Some(m) = op.block(sd, td) {
                    triplets.extend(m.nonzeros().map(|(r, c, v)| (r + to, c + so, v.clone())));
                }
            }
        }
        Matrix::from_triplets(self.dim(wt), self.dim(ws), triplets)
    }

    /// Splits a weight-to-weight matrix back into degree blocks of `op`.
    fn insert(&self, op: &mut GradedOperator, ws: i64, wt: i64, m: &Matrix) {
        for (sd, sn, so) in self.spaces.get(&ws).into_iter().flatten() {
            for (td, tn, to) in self.spaces.get(&wt).into_iter().flatten() {
                let b = m.submatrix(*to..to + tn, *so..so + sn);
                op.insert_block(sd.clone(), td.clone(), b);
            }
        }
    }

    fn vector_part(&self, v: &GradedVector, w: i64) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim(w)];
        for (d, n, o) in self.spaces.get(&w).into_iter().flatten() {
            if let Some(p) = v.part(d) {
                assert_eq!(p.len(), *n, "vector part length");
                out[*o..o + n].clone_from_slice(p);
            }
        }
        out
    }

    fn to_vector(&self, w: i64, coords: &[Scalar]) -> GradedVector {
        let mut v = GradedVector::new();
        for (d, n, o) in self.spaces.get(&w).into_iter().flatten() {
            let part = coords[*o..o + n].to_vec();
            if part.iter().any(|x| !x.is_zero()) {
                v.set_part(d.clone(), part);
            }
        }
        v
    }
}

fn check_raising(x: &GradedOperator, weights: &Weights, by: i64) -> Result<(), Sl2Error> {
    for ((s, t), _) in x.blocks() {
        if weights.weight(t) - weights.weight(s) != by {
            return Err(Sl2Error::NotRaising(s.clone(), t.clone()));
        }
    }
    Ok(())
}

/// True iff `X^i` maps weight `-i` isomorphically onto weight `i` for every `i >= 1`.
pub fn check_hard_lefschetz(x: &GradedOperator, weights: &Weights) -> bool {
    if check_raising(x, weights, 2).is_err() {
        return false;
    }
    hard_lefschetz_failure(x, weights).is_none()
}

fn hard_lefschetz_failure(x: &GradedOperator, weights: &Weights) -> Option<i64> {
    let layout = WeightLayout::new(x.source(), weights);
    let top = layout.spaces.keys().map(|w| w.abs()).max().unwrap_or(0);
    let mut power = x.clone();
    for i in 1..=top {
        let m = layout.block(&power, -i, i);
        if !(m.rows() == m.cols() && m.rank() == m.rows()) {
            return Some(i);
        }
        power = x.compose(&power);
    }
    None
}

/// An sl2-triple `(X, Y, H)`; `H` is the weight operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Sl2Action {
    space: MultiGradedSpace,
    weights: Weights,
    x: GradedOperator,
    y: GradedOperator,
    h: GradedOperator,
}

impl Sl2Action {
    pub fn new(x: GradedOperator, y: GradedOperator, weights: Weights) -> Result<Self, Sl2Error> {
        let space = x.source().clone();
        if x.target() != &space || y.source() != &space || y.target() != &space {
            return Err(Sl2Error::Shape("X and Y must be endomorphisms of one space".into()));
        }
        check_raising(&x, &weights, 2)?;
        check_raising(&y, &weights, -2)?;
        let h = GradedOperator::diagonal(&space, |d| int(weights.weight(d)));
        if h.commutator(&x) != x.scale(&int(2)) {
            return Err(Sl2Error::Bracket("[H, X] = 2X"));
        }
        if h.commutator(&y) != y.scale(&int(-2)) {
            return Err(Sl2Error::Bracket("[H, Y] = -2Y"));
        }
        if x.commutator(&y) != h {
            return Err(Sl2Error::Bracket("[X, Y] = H"));
        }
        Ok(Sl2Action { space, weights, x, y, h })
    }

    pub fn space(&self) -> &MultiGradedSpace {
        &self.space
    }

    pub fn weights(&self) -> &Weights {
        &self.weights
    }

    pub fn x(&self) -> &GradedOperator {
        &self.x
    }

    pub fn y(&self) -> &GradedOperator {
        &self.y
    }

    pub fn h(&self) -> &GradedOperator {
        &self.h
    }

    /// Blockwise sum of two actions with the same weights.
    pub fn direct_sum(&self, other: &Self) -> Self {
        let spaces = [&self.space, &other.space];
        let diag = |a: &GradedOperator, b: &GradedOperator| {
            GradedOperator::from_grid(&spaces, &spaces, &[vec![Some(a), None], vec![None, Some(b)]])
        };
        Sl2Action {
            space: self.space.direct_sum(&other.space),
            weights: self.weights.clone(),
            x: diag(&self.x, &other.x),
            y: diag(&self.y, &other.y),
            h: diag(&self.h, &other.h),
        }
    }
}

/// For each lowest weight `-k`: a basis of the primitive space `ker X^{k+1}` in weight `-k`.
fn primitive_bases(x: &GradedOperator, layout: &WeightLayout) -> BTreeMap<i64, Matrix> {
    let mut out = BTreeMap::new();
    for &w in layout.spaces.keys() {
        if w > 0 {
            continue;
        }
        let k = -w;
        let power = x.pow((k + 1) as usize);
        let m = layout.block(&power, w, w + 2 * (k + 1));
        let ker = m.kernel_basis();
        if ker.cols() > 0 {
            out.insert(k, ker);
        }
    }
    out
}

/// `(k, column of p, j)` for the vector `X^j p`.
type Label = (i64, usize, i64);

/// Basis `X^j p` of each weight space, with its labels.
struct LefschetzBasis {
    by_weight: BTreeMap<i64, (Matrix, Vec<Label>)>,
}

fn lefschetz_basis(x: &GradedOperator, layout: &WeightLayout) -> LefschetzBasis {
    let prims = primitive_bases(x, layout);
    let mut cols: BTreeMap<i64, (Vec<Vec<Scalar>>, Vec<Label>)> = BTreeMap::new();
    for (&k, basis) in &prims {
        for c in 0..basis.cols() {
            let mut v = basis.column(c);
            let mut w = -k;
            for j in 0..=k {
                let e = cols.entry(w).or_default();
                e.0.push(v.clone());
                e.1.push((k, c, j));
                if j < k {
                    v = layout.block(x, w, w + 2).mul_vec(&v);
                    w += 2;
                }
            }
        }
    }
    let by_weight = cols
        .into_iter()
        .map(|(w, (vs, labels))| (w, (Matrix::from_columns(layout.dim(w), &vs), labels)))
        .collect();
    LefschetzBasis { by_weight }
}

/// The unique `Y` completing `(X, H)` to an sl2-triple, from `Y(X^j p) = j(k - j + 1) X^{j-1} p`.
pub fn complete_sl2(x: &GradedOperator, weights: &Weights) -> Result<Sl2Action, Sl2Error> {
    if x.source() != x.target() {
        return Err(Sl2Error::Shape("X must be an endomorphism".into()));
    }
    check_raising(x, weights, 2)?;
    if let Some(i) = hard_lefschetz_failure(x, weights) {
        return Err(Sl2Error::HardLefschetz(i));
    }
    let layout = WeightLayout::new(x.source(), weights);
    let basis = lefschetz_basis(x, &layout);
    let mut y = GradedOperator::zero(x.source(), x.source());
    for (&w, (b, labels)) in &basis.by_weight {
        let Some((below, below_labels)) = basis.by_weight.get(&(w - 2)) else { continue };
        let inv = b.inverse().ok_or(Sl2Error::HardLefschetz(w.abs()))?;
        // Y in the Lefschetz bases, then back to the degree bases
        let mut triplets = Vec::new();
        for (c, &(k, p, j)) in labels.iter().enumerate() {
            if j == 0 {
                continue;
            }
            let r = below_labels.iter().position(|&l| l == (k, p, j - 1)).expect("lower basis vector");
            triplets.push((r, c, int(j * (k - j + 1))));
        }
        let coeff = Matrix::from_triplets(below.cols(), b.cols(), triplets);
        let m = &(below * &coeff) * &inv;
        layout.insert(&mut y, w, w - 2, &m);
    }
    Sl2Action::new(x.clone(), y, weights.clone())
}

/// `v = Σ_j X^j p_j / j!` with each `p_j` primitive; terms with `p_j = 0` are omitted.
pub fn primitive_decomposition(v: &GradedVector, act: &Sl2Action) -> Vec<(usize, GradedVector)> {
    let layout = WeightLayout::new(&act.space, &act.weights);
    let basis = lefschetz_basis(&act.x, &layout);
    let prims = primitive_bases(&act.x, &layout);
    let mut parts: BTreeMap<usize, GradedVector> = BTreeMap::new();
    for (&w, (b, labels)) in &basis.by_weight {
        let coords = b.solve(&layout.vector_part(v, w)).expect("shape").expect("Lefschetz basis spans");
        for (c, &(k, p, j)) in labels.iter().enumerate() {
            if coords[c].is_zero() {
                continue;
            }
            let prim = prims[&k].column(p);
            let scaled: Vec<Scalar> = prim.iter().map(|x| x * &coords[c] * factorial(j as usize)).collect();
            let piece = layout.to_vector(-k, &scaled);
            let e = parts.entry(j as usize).or_default();
            *e = e.add(&piece);
        }
    }
    parts.into_iter().filter(|(_, p)| !p.is_zero()).collect()
}

/// `exp(A) = Σ A^m / m!` for nilpotent `A`.
pub fn nilpotent_exp(a: &GradedOperator) -> GradedOperator {
    let mut acc = GradedOperator::identity(a.source());
    let mut term = GradedOperator::identity(a.source());
    let mut m = 1usize;
    loop {
        term = a.compose(&term).scale(&(int(1) / int(m as i64)));
        if term.is_zero() {
            return acc;
        }
        acc = acc.add(&term);
        m += 1;
        assert!(m <= 4096, "operator is not nilpotent");
    }
}

/// `w = exp(X) exp(-Y) exp(X)` together with its inverse `exp(-X) exp(Y) exp(-X)`.
#[derive(Clone, Debug)]
pub struct WeilElement {
    pub w: GradedOperator,
    pub w_inv: GradedOperator,
    pub action: Sl2Action,
}

pub fn weil_element(act: &Sl2Action) -> WeilElement {
    let ex = nilpotent_exp(&act.x);
    let emx = nilpotent_exp(&act.x.neg());
    let ey = nilpotent_exp(&act.y);
    let emy = nilpotent_exp(&act.y.neg());
    WeilElement { w: ex.compose(&emy).compose(&ex), w_inv: emx.compose(&ey).compose(&emx), action: act.clone() }
}

impl WeilElement {
    /// `w · op · w⁻¹`.
    pub fn conjugate(&self, op: &GradedOperator) -> Result<GradedOperator, Sl2Error> {
        let space = self.action.space();
        if op.source() != space || op.target() != space {
            return Err(Sl2Error::Shape("operator acts on a different space".into()));
        }
        Ok(self.w.compose(op).compose(&self.w_inv))
    }

    /// `w H w⁻¹ = -H`, `w X w⁻¹ = -Y`, `w Y w⁻¹ = -X`, and `w w⁻¹ = id`.
    pub fn check_identities(&self) -> bool {
        let a = &self.action;
        let c = |op: &GradedOperator| self.conjugate(op).expect("same space");
        self.w.compose(&self.w_inv) == GradedOperator::identity(a.space())
            && c(&a.h) == a.h.neg()
            && c(&a.x) == a.y.neg()
            && c(&a.y) == a.x.neg()
    }
}

pub fn ad_weil(w: &WeilElement, op: &GradedOperator) -> Result<GradedOperator, Sl2Error> {
    w.conjugate(op)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Primitivity {
    /// Eigenvalue of `ad H`.
    pub weight: i64,
    /// Least `m` with `(ad X)^m op = 0`.
    pub nilpotency: usize,
    /// Whether `[Y, op] = 0`.
    pub commutes_with_y: bool,
}

pub fn primitivity_degree(op: &GradedOperator, act: &Sl2Action) -> Result<Primitivity, Sl2Error> {
    let space = act.space();
    if op.source() != space || op.target() != space {
        return Err(Sl2Error::Shape("operator acts on a different space".into()));
    }
    let mut weight = None;
    for ((s, t), _) in op.blocks() {
        let w = act.weights.weight(t) - act.weights.weight(s);
        if weight.is_some_and(|x| x != w) {
            return Err(Sl2Error::NotPureWeight);
        }
        weight = Some(w);
    }
    let mut m = 0;
    let mut cur = op.clone();
    while !cur.is_zero() {
        cur = act.x.commutator(&cur);
        m += 1;
    }
    Ok(Primitivity { weight: weight.unwrap_or(0), nilpotency: m, commutes_with_y: act.y.commutator(op).is_zero() })
}

/// The standard two-dimensional representation on degrees `-1` and `1` (one axis).
pub fn standard_rep() -> Sl2Action {
    let space = MultiGradedSpace::from_dims(1, [(vec![-1], 1), (vec![1], 1)]);
    let x = GradedOperator::homogeneous(&space, &space, &[2], [(vec![-1], Matrix::identity(1))]).expect("shape");
    complete_sl2(&x, &Weights::axis(1, 0)).expect("standard representation")
}

/// Flattens an operator on a space into one matrix, components in degree order.
pub fn total_matrix(op: &GradedOperator) -> Matrix {
    let offsets = |s: &MultiGradedSpace| {
        let mut acc = 0;
        s.components()
            .map(|(d, n)| {
                let o = acc;
                acc += n;
                (d.clone(), o)
            })
            .collect::<BTreeMap<Degree, usize>>()
    };
    let (so, to) = (offsets(op.source()), offsets(op.target()));
    let mut triplets = Vec::new();
    for ((s, t), m) in op.blocks() {
        triplets.extend(m.nonzeros().map(|(r, c, v)| (r + to[t], c + so[s], v.clone())));
    }
    Matrix::from_triplets(op.target().total_dim(), op.source().total_dim(), triplets)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn standard_rep_y_and_weil() {
        let s = standard_rep();
        // basis order is (weight -1, weight 1); in the order (1, -1) these read [[0,0],[1,0]] and [[0,1],[-1,0]]
        assert_eq!(total_matrix(s.y()), Matrix::from_i64(2, 2, &[0, 1, 0, 0]));
        let w = weil_element(&s);
        assert_eq!(total_matrix(&w.w), Matrix::from_i64(2, 2, &[0, -1, 1, 0]));
        assert!(w.check_identities());
    }

    #[test]
    fn zero_x_fails_lefschetz() {
        let space = MultiGradedSpace::from_dims(1, [(vec![-2], 1), (vec![0], 1), (vec![2], 1)]);
        let x = GradedOperator::zero(&space, &space);
        assert!(!check_hard_lefschetz(&x, &Weights::axis(1, 0)));
        // weight -1 is empty, so the first failure is at i = 2
        assert_eq!(complete_sl2(&x, &Weights::axis(1, 0)).unwrap_err(), Sl2Error::HardLefschetz(2));
    }

    #[test]
    fn primitivity_examples() {
        let s = standard_rep();
        let p = primitivity_degree(s.y(), &s).unwrap();
        assert_eq!(p, Primitivity { weight: -2, nilpotency: 3, commutes_with_y: true });
        let id = GradedOperator::identity(s.space());
        let p = primitivity_degree(&id, &s).unwrap();
        assert_eq!(p, Primitivity { weight: 0, nilpotency: 1, commutes_with_y: true });
        let mixed = s.x().add(s.y());
        assert_eq!(primitivity_degree(&mixed, &s).unwrap_err(), Sl2Error::NotPureWeight);
    }
}

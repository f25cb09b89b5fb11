//! Multigraded spaces, block operators between them, chain complexes,
//! homology with canonical representatives, cones and the two splitting lemmas.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exact_linalg::{int, Matrix, Scalar};
use crate::multilinear::shift_sign;

pub type Degree = Vec<i64>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GradedError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("differential does not square to zero at degree {0:?}")]
    NotAComplex(Degree),
    #[error("map does not commute with the differentials at degree {0:?}")]
    NotAChainMap(Degree),
    #[error("hypothesis fails: {0}")]
    Hypothesis(String),
}

pub fn unit_degree(axes: usize, axis: usize) -> Degree {
    let mut d = vec![0; axes];
    d[axis] = 1;
    d
}

pub fn add_degrees(a: &[i64], b: &[i64]) -> Degree {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub_degrees(a: &[i64], b: &[i64]) -> Degree {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale_degree(a: &[i64], k: i64) -> Degree {
    a.iter().map(|x| x * k).collect()
}

/// Finite-dimensional space graded by integer tuples of a fixed length.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct MultiGradedSpace {
    axes: usize,
    dims: BTreeMap<Degree, usize>,
}

impl MultiGradedSpace {
    pub fn new(axes: usize) -> Self {
        MultiGradedSpace { axes, dims: BTreeMap::new() }
    }

    pub fn from_dims(axes: usize, dims: impl IntoIterator<Item = (Degree, usize)>) -> Self {
        let mut s = Self::new(axes);
        for (d, n) in dims {
            s.set_dim(d, n);
        }
        s
    }

    pub fn axes(&self) -> usize {
        self.axes
    }

    pub fn set_dim(&mut self, degree: Degree, dim: usize) {
        assert_eq!(degree.len(), self.axes, "degree length");
        if dim == 0 {
            self.dims.remove(&degree);
        } else {
            self.dims.insert(degree, dim);
        }
    }

    pub fn dim(&self, degree: &[i64]) -> usize {
        self.dims.get(degree).copied().unwrap_or(0)
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Degree, usize)> {
        self.dims.iter().map(|(d, n)| (d, *n))
    }

    pub fn degrees(&self) -> impl Iterator<Item = &Degree> {
        self.dims.keys()
    }

    /// Relabels every degree `d` as `f(d)`; `f` must be injective.
    pub fn relabel(&self, f: impl Fn(&Degree) -> Degree) -> Self {
        self.relabel_to(self.axes, f)
    }

    /// Like [`relabel`](Self::relabel) into a space with `axes` axes.
    pub fn relabel_to(&self, axes: usize, f: impl Fn(&Degree) -> Degree) -> Self {
        let mut out = Self::new(axes);
        for (d, n) in &self.dims {
            let nd = f(d);
            assert!(out.dim(&nd) == 0, "relabeling is not injective");
            out.set_dim(nd, *n);
        }
        out
    }

    /// Componentwise direct sum; `self` comes first inside each component.
    pub fn direct_sum(&self, other: &Self) -> Self {
        assert_eq!(self.axes, other.axes, "axis counts");
        let mut out = self.clone();
        for (d, n) in &other.dims {
            let cur = out.dim(d);
            out.set_dim(d.clone(), cur + n);
        }
        out
    }

    /// Sum of dimensions over components whose degree satisfies `pred`.
    pub fn dim_where(&self, pred: impl Fn(&Degree) -> bool) -> usize {
        self.dims.iter().filter(|(d, _)| pred(d)).map(|(_, n)| n).sum()
    }
}

/// Vector in a multigraded space, stored by component.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GradedVector {
    parts: BTreeMap<Degree, Vec<Scalar>>,
}

impl GradedVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn homogeneous(degree: Degree, coords: Vec<Scalar>) -> Self {
        let mut v = Self::new();
        v.set_part(degree, coords);
        v
    }

    pub fn unit(degree: Degree, dim: usize, index: usize) -> Self {
        let mut coords = vec![Scalar::zero(); dim];
        coords[index] = Scalar::one();
        Self::homogeneous(degree, coords)
    }

    pub fn set_part(&mut self, degree: Degree, coords: Vec<Scalar>) {
        if coords.iter().all(Zero::is_zero) {
            self.parts.remove(&degree);
        } else {
            self.parts.insert(degree, coords);
        }
    }

    pub fn part(&self, degree: &[i64]) -> Option<&Vec<Scalar>> {
        self.parts.get(degree)
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Degree, &Vec<Scalar>)> {
        self.parts.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (d, v) in &other.parts {
            let sum = match out.parts.get(d) {
                Some(cur) => cur.iter().zip(v).map(|(a, b)| a + b).collect(),
                None => v.clone(),
            };
            out.set_part(d.clone(), sum);
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::new();
        for (d, v) in &self.parts {
            out.set_part(d.clone(), v.iter().map(|x| x * c).collect());
        }
        out
    }
}

/// Linear map between multigraded spaces given by blocks between components.
///
/// Blocks are keyed by (source degree, target degree); absent blocks are zero
/// and zero blocks are never stored, so structural equality is equality of maps.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedOperator {
    source: MultiGradedSpace,
    target: MultiGradedSpace,
    blocks: BTreeMap<(Degree, Degree), Matrix>,
}

impl fmt::Debug for GradedOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GradedOperator").field("blocks", &self.blocks).finish()
    }
}

impl GradedOperator {
    pub fn zero(source: &MultiGradedSpace, target: &MultiGradedSpace) -> Self {
        GradedOperator { source: source.clone(), target: target.clone(), blocks: BTreeMap::new() }
    }

    pub fn identity(space: &MultiGradedSpace) -> Self {
        Self::scalar(space, &Scalar::one())
    }

    pub fn scalar(space: &MultiGradedSpace, c: &Scalar) -> Self {
        Self::diagonal(space, |_| c.clone())
    }

    /// Multiplication by `f(d)` on the component of degree `d`.
    pub fn diagonal(space: &MultiGradedSpace, f: impl Fn(&Degree) -> Scalar) -> Self {
        let mut op = Self::zero(space, space);
        for (d, n) in space.components() {
            let c = f(d);
            op.insert_block(d.clone(), d.clone(), Matrix::identity(n).scale(&c));
        }
        op
    }

    /// Operator with a single degree shift, given by its blocks keyed by source degree.
    pub fn homogeneous(
        source: &MultiGradedSpace,
        target: &MultiGradedSpace,
        shift: &[i64],
        blocks: impl IntoIterator<Item = (Degree, Matrix)>,
    ) -> Result<Self, GradedError> {
        let mut op = Self::zero(source, target);
        for (d, m) in blocks {
            let t = add_degrees(&d, shift);
            op.try_insert_block(d, t, m)?;
        }
        Ok(op)
    }

    pub fn from_blocks(
        source: &MultiGradedSpace,
        target: &MultiGradedSpace,
        blocks: impl IntoIterator<Item = ((Degree, Degree), Matrix)>,
    ) -> Result<Self, GradedError> {
        let mut op = Self::zero(source, target);
        for ((s, t), m) in blocks {
            op.try_insert_block(s, t, m)?;
        }
        Ok(op)
    }

    fn try_insert_block(&mut self, s: Degree, t: Degree, m: Matrix) -> Result<(), GradedError> {
        let (rows, cols) = (self.target.dim(&t), self.source.dim(&s));
        if m.rows() != rows || m.cols() != cols {
            if m.is_zero() {
                return Ok(());
            }
            return Err(GradedError::Shape(format!(
                "block {s:?} -> {t:?} is {}x{}, components need {rows}x{cols}",
                m.rows(),
                m.cols()
            )));
        }
        self.insert_block(s, t, m);
        Ok(())
    }

    /// Adds `m` to the block `s -> t`.
    pub fn insert_block(&mut self, s: Degree, t: Degree, m: Matrix) {
        if m.is_zero() {
            return;
        }
        assert_eq!((m.rows(), m.cols()), (self.target.dim(&t), self.source.dim(&s)), "block shape");
        let key = (s, t);
        let sum = match self.blocks.remove(&key) {
            Some(cur) => &cur + &m,
            None => m,
        };
        if !sum.is_zero() {
            self.blocks.insert(key, sum);
        }
    }

    /// Adds `c` to a single matrix entry.
    pub fn add_entry(&mut self, s: &Degree, si: usize, t: &Degree, ti: usize, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let key = (s.clone(), t.clone());
        let (rows, cols) = (self.target.dim(t), self.source.dim(s));
        let block = self.blocks.entry(key.clone()).or_insert_with(|| Matrix::zeros(rows, cols));
        block.add_at(ti, si, c);
        if block.get(ti, si).is_zero() && block.is_zero() {
            self.blocks.remove(&key);
        }
    }

    pub fn source(&self) -> &MultiGradedSpace {
        &self.source
    }

    pub fn target(&self) -> &MultiGradedSpace {
        &self.target
    }

    pub fn blocks(&self) -> impl Iterator<Item = (&(Degree, Degree), &Matrix)> {
        self.blocks.iter()
    }

    pub fn block(&self, s: &[i64], t: &[i64]) -> Option<&Matrix> {
        self.blocks.get(&(s.to_vec(), t.to_vec()))
    }

    pub fn block_or_zero(&self, s: &[i64], t: &[i64]) -> Matrix {
        self.block(s, t).cloned().unwrap_or_else(|| Matrix::zeros(self.target.dim(t), self.source.dim(s)))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    /// The common degree shift of all blocks, if there is exactly one.
    pub fn shift(&self) -> Option<Degree> {
        let mut shifts = self.blocks.keys().map(|(s, t)| sub_degrees(t, s));
        let first = shifts.next()?;
        shifts.all(|s| s == first).then_some(first)
    }

    /// True when every block shifts degrees by `shift` (vacuous for zero).
    pub fn has_shift(&self, shift: &[i64]) -> bool {
        self.blocks.keys().all(|(s, t)| sub_degrees(t, s) == shift)
    }

    pub fn same_spaces(&self, other: &Self) -> bool {
        self.source == other.source && self.target == other.target
    }

    fn check_same_spaces(&self, other: &Self) {
        assert!(self.same_spaces(other), "operators act between different spaces");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_same_spaces(other);
        let mut out = self.clone();
        for ((s, t), m) in &other.blocks {
            out.insert_block(s.clone(), t.clone(), m.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&int(-1))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = Self::zero(&self.source, &self.target);
        for ((s, t), m) in &self.blocks {
            out.insert_block(s.clone(), t.clone(), m.scale(c));
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        assert_eq!(other.target, self.source, "composition through different spaces");
        let mut by_source: BTreeMap<&Degree, Vec<(&Degree, &Matrix)>> = BTreeMap::new();
        for ((s, t), m) in &self.blocks {
            by_source.entry(s).or_default().push((t, m));
        }
        let mut out = Self::zero(&other.source, &self.target);
        for ((s, mid), b) in &other.blocks {
            if let Some(list) = by_source.get(mid) {
                for (t, a) in list {
                    out.insert_block(s.clone(), (*t).clone(), *a * b);
                }
            }
        }
        out
    }

    pub fn pow(&self, k: usize) -> Self {
        let mut out = Self::identity(&self.source);
        for _ in 0..k {
            out = self.compose(&out);
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        self.compose(other).sub(&other.compose(self))
    }

    pub fn anticommutator(&self, other: &Self) -> Self {
        self.compose(other).add(&other.compose(self))
    }

    /// The dual map between dual spaces (same degree labels).
    pub fn transpose(&self) -> Self {
        let mut out = Self::zero(&self.target, &self.source);
        for ((s, t), m) in &self.blocks {
            out.insert_block(t.clone(), s.clone(), m.transpose());
        }
        out
    }

    /// Same blocks, with every source and target degree relabeled.
    pub fn relabel(
        &self,
        source: &MultiGradedSpace,
        target: &MultiGradedSpace,
        fs: impl Fn(&Degree) -> Degree,
        ft: impl Fn(&Degree) -> Degree,
    ) -> Self {
        let mut out = Self::zero(source, target);
        for ((s, t), m) in &self.blocks {
            out.insert_block(fs(s), ft(t), m.clone());
        }
        out
    }

    /// Keeps only blocks whose (source, target) pair satisfies `pred`.
    pub fn filter_blocks(&self, pred: impl Fn(&Degree, &Degree) -> bool) -> Self {
        let mut out = Self::zero(&self.source, &self.target);
        for ((s, t), m) in &self.blocks {
            if pred(s, t) {
                out.insert_block(s.clone(), t.clone(), m.clone());
            }
        }
        out
    }

    pub fn apply(&self, v: &GradedVector) -> GradedVector {
        let mut out = GradedVector::new();
        for ((s, t), m) in &self.blocks {
            if let Some(x) = v.part(s) {
                out = out.add(&GradedVector::homogeneous(t.clone(), m.mul_vec(x)));
            }
        }
        out
    }

    /// A basis vector on which `self` and `other` differ, if any.
    pub fn difference_witness(&self, other: &Self) -> Option<GradedVector> {
        let diff = self.sub(other);
        let ((s, _), m) = diff.blocks.iter().next()?;
        let col = (0..m.cols()).find(|&c| (0..m.rows()).any(|r| !m.get(r, c).is_zero()))?;
        Some(GradedVector::unit(s.clone(), self.source.dim(s), col))
    }

    /// Block-matrix operator from `⊕ sources` to `⊕ targets`; `grid[r][c]` maps `sources[c]` to `targets[r]`.
    pub fn from_grid(
        sources: &[&MultiGradedSpace],
        targets: &[&MultiGradedSpace],
        grid: &[Vec<Option<&GradedOperator>>],
    ) -> Self {
        let src = direct_sum_all(sources);
        let tgt = direct_sum_all(targets);
        let mut out = Self::zero(&src, &tgt);
        for (r, row) in grid.iter().enumerate() {
            for (c, entry) in row.iter().enumerate() {
                let Some(op) = entry else { continue };
                assert_eq!(&op.source, sources[c], "grid source mismatch");
                assert_eq!(&op.target, targets[r], "grid target mismatch");
                for ((s, t), m) in &op.blocks {
                    let c0 = summand_offset(sources, c, s);
                    let r0 = summand_offset(targets, r, t);
                    let mut big = Matrix::zeros(tgt.dim(t), src.dim(s));
                    big.set_block(r0, c0, m);
                    out.insert_block(s.clone(), t.clone(), big);
                }
            }
        }
        out
    }
}

fn direct_sum_all(spaces: &[&MultiGradedSpace]) -> MultiGradedSpace {
    let mut out = MultiGradedSpace::new(spaces.first().map_or(0, |s| s.axes()));
    for s in spaces {
        out = out.direct_sum(s);
    }
    out
}

fn summand_offset(spaces: &[&MultiGradedSpace], k: usize, degree: &[i64]) -> usize {
    spaces[..k].iter().map(|s| s.dim(degree)).sum()
}

/// Inclusion of the `k`-th summand into `⊕ spaces`.
pub fn summand_inclusion(spaces: &[&MultiGradedSpace], k: usize) -> GradedOperator {
    let id = GradedOperator::identity(spaces[k]);
    let mut col: Vec<Vec<Option<&GradedOperator>>> = vec![vec![None]; spaces.len()];
    col[k][0] = Some(&id);
    GradedOperator::from_grid(&[spaces[k]], spaces, &col)
}

/// Projection of `⊕ spaces` onto the `k`-th summand.
pub fn summand_projection(spaces: &[&MultiGradedSpace], k: usize) -> GradedOperator {
    let id = GradedOperator::identity(spaces[k]);
    let mut row: Vec<Option<&GradedOperator>> = vec![None; spaces.len()];
    row[k] = Some(&id);
    GradedOperator::from_grid(spaces, &[spaces[k]], &[row])
}

/// Cochain complex: differential of degree +1 along `axis`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainComplex {
    space: MultiGradedSpace,
    axis: usize,
    d: GradedOperator,
}

impl ChainComplex {
    pub fn new(space: MultiGradedSpace, axis: usize, d: GradedOperator) -> Result<Self, GradedError> {
        if d.source() != &space || d.target() != &space {
            return Err(GradedError::Shape("differential acts on a different space".into()));
        }
        let e = unit_degree(space.axes(), axis);
        if !d.has_shift(&e) {
            return Err(GradedError::Shape(format!("differential must have shift {e:?}")));
        }
        let dd = d.compose(&d);
        if let Some(((s, _), _)) = dd.blocks().next() {
            return Err(GradedError::NotAComplex(s.clone()));
        }
        Ok(ChainComplex { space, axis, d })
    }

    pub fn with_zero_differential(space: MultiGradedSpace, axis: usize) -> Self {
        let d = GradedOperator::zero(&space, &space);
        ChainComplex { space, axis, d }
    }

    pub fn zero(axes: usize, axis: usize) -> Self {
        Self::with_zero_differential(MultiGradedSpace::new(axes), axis)
    }

    pub fn space(&self) -> &MultiGradedSpace {
        &self.space
    }

    pub fn axis(&self) -> usize {
        self.axis
    }

    pub fn differential(&self) -> &GradedOperator {
        &self.d
    }

    fn step(&self) -> Degree {
        unit_degree(self.space.axes(), self.axis)
    }

    /// `c⟦m⟧`: the component in degree `i` is the old component in degree `i + m`; d becomes `(-1)^m d`.
    pub fn shift(&self, m: i64) -> ChainComplex {
        let axis = self.axis;
        let f = move |d: &Degree| {
            let mut n = d.clone();
            n[axis] -= m;
            n
        };
        let space = self.space.relabel(f);
        let d = self.d.relabel(&space, &space, f, f).scale(&int(shift_sign(m)));
        ChainComplex { space, axis, d }
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        assert_eq!(self.axis, other.axis, "cohomological axes differ");
        let spaces = [&self.space, &other.space];
        let d = GradedOperator::from_grid(&spaces, &spaces, &[vec![Some(&self.d), None], vec![None, Some(&other.d)]]);
        ChainComplex { space: self.space.direct_sum(&other.space), axis: self.axis, d }
    }

    pub fn homology(&self) -> Homology {
        let e = self.step();
        let mut dims = MultiGradedSpace::new(self.space.axes());
        let mut pieces = BTreeMap::new();
        for (deg, n) in self.space.components() {
            let out_deg = add_degrees(deg, &e);
            let in_deg = sub_degrees(deg, &e);
            let cycles = match self.d.block(deg, &out_deg) {
                Some(m) => m.kernel_basis(),
                None => Matrix::identity(n),
            };
            if cycles.cols() == 0 {
                continue;
            }
            let boundaries = match self.d.block(&in_deg, deg) {
                Some(m) => m.image_basis(),
                None => Matrix::zeros(n, 0),
            };
            let b = boundaries.cols();
            let joined = boundaries.hstack(&cycles);
            let reps_cols: Vec<usize> = joined.rref().pivots.into_iter().filter(|&p| p >= b).collect();
            if reps_cols.is_empty() {
                continue;
            }
            let reps = Matrix::from_fn(n, reps_cols.len(), |i, j| joined.get(i, reps_cols[j]).clone());
            let basis = boundaries.hstack(&reps);
            let left = basis.left_inverse().expect("independent columns");
            let coords = left.submatrix(b..b + reps.cols(), 0..n);
            dims.set_dim(deg.clone(), reps.cols());
            pieces.insert(deg.clone(), HomologyPiece { reps, coords });
        }
        Homology { dims, pieces }
    }

    /// Rank count only: `rank d_out + rank d_in = dim` in every degree.
    ///
    /// Since `d∘d = 0` the left side is at most `dim`; ranks modulo a prime bound the rational
    /// ranks from below, so a modular count reaching `dim` proves exactness. Otherwise the
    /// rational ranks decide.
    pub fn is_exact(&self) -> bool {
        let e = self.step();
        let modular: BTreeMap<&Degree, Option<usize>> = self.d.blocks().map(|((s, _), m)| (s, m.rank_mod_prime())).collect();
        let mut exact_ranks: BTreeMap<Degree, usize> = BTreeMap::new();
        let mut rank = |deg: &Degree| -> usize {
            if let Some(&r) = exact_ranks.get(deg) {
                return r;
            }
            let r = self.d.block(deg, &add_degrees(deg, &e)).map_or(0, Matrix::rank);
            exact_ranks.insert(deg.clone(), r);
            r
        };
        self.space.components().all(|(deg, n)| {
            let in_deg = sub_degrees(deg, &e);
            let lower = |d: &Degree| modular.get(d).copied().unwrap_or(Some(0));
            if let (Some(a), Some(b)) = (lower(deg), lower(&in_deg)) {
                if a + b == n {
                    return true;
                }
            }
            rank(deg) + rank(&in_deg) == n
        })
    }
}

/// Canonical representatives of one homology component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyPiece {
    /// Columns are cycles representing a basis of homology.
    pub reps: Matrix,
    /// Sends a cycle to its homology coordinates.
    pub coords: Matrix,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homology {
    pub dims: MultiGradedSpace,
    pub pieces: BTreeMap<Degree, HomologyPiece>,
}

impl Homology {
    pub fn total_dim(&self) -> usize {
        self.dims.total_dim()
    }

    /// Representatives as a map from the homology space (zero differential) into the complex.
    pub fn representative_map(&self, complex: &ChainComplex) -> GradedOperator {
        let mut op = GradedOperator::zero(&self.dims, complex.space());
        for (d, p) in &self.pieces {
            op.insert_block(d.clone(), d.clone(), p.reps.clone());
        }
        op
    }

    /// The homology viewed as a complex with zero differential.
    pub fn as_complex(&self, axis: usize) -> ChainComplex {
        ChainComplex::with_zero_differential(self.dims.clone(), axis)
    }
}

/// Degree-preserving map of complexes commuting with the differentials.
#[derive(Clone, Debug)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    map: GradedOperator,
}

impl ChainMap {
    pub fn new(source: ChainComplex, target: ChainComplex, map: GradedOperator) -> Result<Self, GradedError> {
        if map.source() != source.space() || map.target() != target.space() {
            return Err(GradedError::Shape("chain map acts between other spaces".into()));
        }
        if source.axis != target.axis {
            return Err(GradedError::Shape("cohomological axes differ".into()));
        }
        if !map.has_shift(&vec![0; source.space.axes()]) {
            return Err(GradedError::Shape("chain map must preserve degrees".into()));
        }
        let lhs = map.compose(&source.d);
        let rhs = target.d.compose(&map);
        if let Some(w) = lhs.difference_witness(&rhs) {
            let deg = w.parts().next().map(|(d, _)| d.clone()).unwrap_or_default();
            return Err(GradedError::NotAChainMap(deg));
        }
        Ok(ChainMap { source, target, map })
    }

    pub fn identity(c: &ChainComplex) -> Self {
        ChainMap { source: c.clone(), target: c.clone(), map: GradedOperator::identity(&c.space) }
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> Self {
        ChainMap { source: source.clone(), target: target.clone(), map: GradedOperator::zero(&source.space, &target.space) }
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn map(&self) -> &GradedOperator {
        &self.map
    }

    pub fn compose(&self, first: &ChainMap) -> ChainMap {
        ChainMap { source: first.source.clone(), target: self.target.clone(), map: self.map.compose(&first.map) }
    }

    /// Induced maps on homology, one matrix per degree where either side is nonzero.
    pub fn induced(&self) -> InducedMap {
        let hs = self.source.homology();
        let ht = self.target.homology();
        self.induced_with(&hs, &ht)
    }

    pub fn induced_with(&self, hs: &Homology, ht: &Homology) -> InducedMap {
        let degrees: BTreeSet<Degree> = hs.dims.degrees().chain(ht.dims.degrees()).cloned().collect();
        let mut blocks = BTreeMap::new();
        for d in degrees {
            let m = match (hs.pieces.get(&d), ht.pieces.get(&d)) {
                (Some(s), Some(t)) => {
                    let f = self.map.block_or_zero(&d, &d);
                    &(&t.coords * &f) * &s.reps
                }
                (Some(s), None) => Matrix::zeros(0, s.reps.cols()),
                (None, Some(t)) => Matrix::zeros(t.reps.cols(), 0),
                (None, None) => continue,
            };
            blocks.insert(d, m);
        }
        InducedMap { source_dims: hs.dims.clone(), target_dims: ht.dims.clone(), blocks }
    }

    /// Decided by exactness of the mapping cone.
    pub fn is_quasi_iso(&self) -> bool {
        cone(self).is_exact()
    }
}

#[derive(Clone, Debug)]
pub struct InducedMap {
    pub source_dims: MultiGradedSpace,
    pub target_dims: MultiGradedSpace,
    pub blocks: BTreeMap<Degree, Matrix>,
}

impl InducedMap {
    pub fn is_isomorphism(&self) -> bool {
        self.blocks.values().all(Matrix::is_isomorphism)
    }

    pub fn as_operator(&self) -> GradedOperator {
        let mut op = GradedOperator::zero(&self.source_dims, &self.target_dims);
        for (d, m) in &self.blocks {
            if m.rows() > 0 && m.cols() > 0 {
                op.insert_block(d.clone(), d.clone(), m.clone());
            }
        }
        op
    }
}

/// `Cone(f)` in degree `i` is `A^{i+1} ⊕ C^i` with `d(a, c) = (-d a, f a + d c)`.
pub fn cone(f: &ChainMap) -> ChainComplex {
    let a = &f.source;
    let c = &f.target;
    let a1 = a.shift(1);
    // a1 has differential -d_A; its degree i component is A^{i+1}
    let axis = a.axis;
    let e = unit_degree(a.space.axes(), axis);
    // f sends A^{i+1} (cone degree i) to C^{i+1} (cone degree i+1)
    let f_next = f.map.relabel(&a1.space, &c.space, |d| sub_degrees(d, &e), |d| d.clone());
    let spaces = [&a1.space, &c.space];
    let d = GradedOperator::from_grid(
        &spaces,
        &spaces,
        &[vec![Some(&a1.d), None], vec![Some(&f_next), Some(&c.d)]],
    );
    ChainComplex::new(a1.space.direct_sum(&c.space), axis, d).expect("cone of a chain map is a complex")
}

/// Inclusion `C -> Cone(f)`, `c ↦ (0, c)`.
pub fn cone_inclusion(f: &ChainMap, cone_complex: &ChainComplex) -> ChainMap {
    let a1 = f.source.shift(1);
    let incl = summand_inclusion(&[a1.space(), f.target.space()], 1);
    ChainMap::new(f.target.clone(), cone_complex.clone(), incl).expect("cone inclusion is a chain map")
}

/// Output of the abelian splitting lemma, degree by degree.
#[derive(Clone, Debug)]
pub struct AbelianSplitting {
    pub coker: MultiGradedSpace,
    /// `C -> coker f`.
    pub projection: GradedOperator,
    /// `coker f -> B`, with `projection ∘ g ∘ section = id`.
    pub section: GradedOperator,
    /// `A ⊕ coker f -> C`, `(a, x) ↦ f a + g(section x)`.
    pub c_iso: GradedOperator,
    /// `B -> coker f ⊕ D`, `b ↦ (projection(g b), h b)`.
    pub b_iso: GradedOperator,
}

fn check_blockwise_iso(op: &GradedOperator, what: &str) -> Result<(), GradedError> {
    let degrees: BTreeSet<&Degree> = op.source().degrees().chain(op.target().degrees()).collect();
    for d in degrees {
        if !op.block_or_zero(d, d).is_isomorphism() {
            return Err(GradedError::Hypothesis(format!("{what} is not an isomorphism at degree {d:?}")));
        }
    }
    Ok(())
}

/// Splits a block-triangular isomorphism `(f g; 0 h): A ⊕ B -> C ⊕ D` of graded spaces.
pub fn split_abelian(
    f: &GradedOperator,
    g: &GradedOperator,
    h: &GradedOperator,
) -> Result<AbelianSplitting, GradedError> {
    let (a, c) = (f.source(), f.target());
    let (b, dsp) = (h.source(), h.target());
    if g.source() != b || g.target() != c {
        return Err(GradedError::Shape("g must map B to C".into()));
    }
    let zero = vec![0; a.axes()];
    if !(f.has_shift(&zero) && g.has_shift(&zero) && h.has_shift(&zero)) {
        return Err(GradedError::Shape("maps must preserve degrees".into()));
    }
    let block = GradedOperator::from_grid(&[a, b], &[c, dsp], &[vec![Some(f), Some(g)], vec![None, Some(h)]]);
    check_blockwise_iso(&block, "the block map")?;

    let mut coker = MultiGradedSpace::new(a.axes());
    let mut proj_blocks = Vec::new();
    for (deg, n) in c.components() {
        let fm = f.block_or_zero(deg, deg);
        if fm.rank() != fm.cols() {
            // cannot happen for an isomorphism, kept as a guard
            return Err(GradedError::Hypothesis(format!("f is not injective at {deg:?}")));
        }
        let joined = fm.hstack(&Matrix::identity(n));
        let extra: Vec<usize> = joined.rref().pivots.into_iter().filter(|&p| p >= fm.cols()).collect();
        let complement = Matrix::from_fn(n, extra.len(), |i, j| joined.get(i, extra[j]).clone());
        let inv = fm.hstack(&complement).inverse().expect("basis of C");
        coker.set_dim(deg.clone(), extra.len());
        if !extra.is_empty() {
            proj_blocks.push((deg.clone(), inv.submatrix(fm.cols()..n, 0..n)));
        }
    }
    let projection = GradedOperator::homogeneous(c, &coker, &zero, proj_blocks)?;
    let b_iso = GradedOperator::from_grid(&[b], &[&coker, dsp], &[vec![Some(&projection.compose(g))], vec![Some(h)]]);
    check_blockwise_iso(&b_iso, "B -> coker f ⊕ D")?;
    let mut section = GradedOperator::zero(&coker, b);
    for (deg, q) in coker.components() {
        let inv = b_iso.block_or_zero(deg, deg).inverse().expect("checked above");
        section.insert_block(deg.clone(), deg.clone(), inv.submatrix(0..inv.rows(), 0..q));
    }
    let gs = g.compose(&section);
    let c_iso = GradedOperator::from_grid(&[a, &coker], &[c], &[vec![Some(f), Some(&gs)]]);
    check_blockwise_iso(&c_iso, "A ⊕ coker f -> C")?;
    if projection.compose(&gs) != GradedOperator::identity(&coker) {
        return Err(GradedError::Hypothesis("coker f -> B -> C -> coker f is not the identity".into()));
    }
    Ok(AbelianSplitting { coker, projection, section, c_iso, b_iso })
}

/// Output of the derived splitting lemma.
#[derive(Clone, Debug)]
pub struct DerivedSplitting {
    pub cone: ChainComplex,
    /// Quasi-isomorphism `B -> Cone(f) ⊕ D`.
    pub b_to_cone_d: ChainMap,
    /// Quasi-isomorphism `A ⊕ H(Cone f) -> C`, using cycles of B lifting the cone classes.
    pub a_cone_to_c: ChainMap,
    /// Quasi-isomorphism `H(Cone f) -> Cone(f)` choosing representatives.
    pub cone_model: ChainMap,
}

/// Derived version: `(f g; 0 h): A ⊕ B -> C ⊕ D` a quasi-isomorphism of complexes.
pub fn split_derived(f: &ChainMap, g: &ChainMap, h: &ChainMap) -> Result<DerivedSplitting, GradedError> {
    let (a, c) = (&f.source, &f.target);
    let (b, dcx) = (&h.source, &h.target);
    if g.source.space != b.space || g.target.space != c.space {
        return Err(GradedError::Shape("g must map B to C".into()));
    }
    let ab = a.direct_sum(b);
    let cd = c.direct_sum(dcx);
    let block_op = GradedOperator::from_grid(
        &[&a.space, &b.space],
        &[&c.space, &dcx.space],
        &[vec![Some(&f.map), Some(&g.map)], vec![None, Some(&h.map)]],
    );
    let block = ChainMap::new(ab, cd, block_op)?;
    if !block.is_quasi_iso() {
        return Err(GradedError::Hypothesis("the block map is not a quasi-isomorphism".into()));
    }

    let cone_cx = cone(f);
    let iota = cone_inclusion(f, &cone_cx);
    let ig = iota.compose(g);
    let cone_d = cone_cx.direct_sum(dcx);
    let phi_op = GradedOperator::from_grid(&[&b.space], &[&cone_cx.space, &dcx.space], &[vec![Some(&ig.map)], vec![Some(&h.map)]]);
    let phi = ChainMap::new(b.clone(), cone_d.clone(), phi_op)?;
    let hb = b.homology();
    let hcd = cone_d.homology();
    let phi_h = phi.induced_with(&hb, &hcd);
    if !phi_h.is_isomorphism() {
        return Err(GradedError::Hypothesis("B -> Cone(f) ⊕ D is not a quasi-isomorphism".into()));
    }

    // lift each cone class to a cycle of B through the inverse of H(phi)
    let hcone = cone_cx.homology();
    let cone_model_cx = hcone.as_complex(cone_cx.axis);
    let cone_model = ChainMap::new(cone_model_cx.clone(), cone_cx.clone(), hcone.representative_map(&cone_cx))?;
    let cone_to_sum = ChainMap::new(
        cone_cx.clone(),
        cone_d.clone(),
        summand_inclusion(&[&cone_cx.space, &dcx.space], 0),
    )?;
    let class_in_sum = cone_to_sum.compose(&cone_model).induced_with(&cone_model_cx.homology(), &hcd);
    let mut lift = GradedOperator::zero(&hcone.dims, &b.space);
    for (deg, q) in hcone.dims.components() {
        let inv = phi_h.blocks[deg].inverse().expect("checked above");
        let classes = &inv * &class_in_sum.blocks[deg];
        let cycles = &hb.pieces[deg].reps * &classes;
        debug_assert_eq!(cycles.cols(), q);
        lift.insert_block(deg.clone(), deg.clone(), cycles);
    }
    let s = ChainMap::new(cone_model_cx.clone(), b.clone(), lift)?;
    let gs = g.compose(&s);
    let xi_op = GradedOperator::from_grid(&[&a.space, &cone_model_cx.space], &[&c.space], &[vec![Some(&f.map), Some(&gs.map)]]);
    let xi = ChainMap::new(a.direct_sum(&cone_model_cx), c.clone(), xi_op)?;
    if !xi.is_quasi_iso() {
        return Err(GradedError::Hypothesis("A ⊕ Cone(f) -> C is not a quasi-isomorphism".into()));
    }
    // Cone(f) -> B -> C -> Cone(f) is the identity on homology
    let round = iota.compose(&gs);
    let round_h = round.induced_with(&cone_model_cx.homology(), &hcone);
    let model_h = cone_model.induced_with(&cone_model_cx.homology(), &hcone);
    if round_h.as_operator() != model_h.as_operator() {
        return Err(GradedError::Hypothesis("Cone(f) -> B -> C -> Cone(f) is not the identity".into()));
    }
    Ok(DerivedSplitting { cone: cone_cx, b_to_cone_d: phi, a_cone_to_c: xi, cone_model })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_term(m: Matrix) -> ChainComplex {
        // degree 0 -> degree 1
        let space = MultiGradedSpace::from_dims(1, [(vec![0], m.cols()), (vec![1], m.rows())]);
        let d = GradedOperator::homogeneous(&space, &space, &[1], [(vec![0], m)]).unwrap();
        ChainComplex::new(space, 0, d).unwrap()
    }

    #[test]
    fn rejects_non_complex() {
        let space = MultiGradedSpace::from_dims(1, [(vec![0], 1), (vec![1], 1), (vec![2], 1)]);
        let one = Matrix::identity(1);
        let d = GradedOperator::homogeneous(&space, &space, &[1], [(vec![0], one.clone()), (vec![1], one)]).unwrap();
        assert_eq!(ChainComplex::new(space, 0, d), Err(GradedError::NotAComplex(vec![0])));
    }

    #[test]
    fn homology_examples() {
        let space = MultiGradedSpace::from_dims(1, [(vec![0], 2), (vec![3], 1)]);
        let c = ChainComplex::with_zero_differential(space.clone(), 0);
        assert_eq!(c.homology().dims, space);
        assert!(two_term(Matrix::identity(2)).is_exact());
        let h = two_term(Matrix::from_i64(1, 2, &[1, 1])).homology();
        assert_eq!(h.dims, MultiGradedSpace::from_dims(1, [(vec![0], 1)]));
    }

    #[test]
    fn shift_round_trip() {
        let c = two_term(Matrix::from_i64(2, 1, &[1, 2]));
        assert_eq!(c.shift(0), c);
        assert_eq!(c.shift(1).shift(-1), c);
        assert_eq!(c.shift(1).space().dim(&[-1]), 1);
    }

    #[test]
    fn cone_of_identity_is_exact() {
        let c = two_term(Matrix::from_i64(1, 2, &[1, 3]));
        assert!(cone(&ChainMap::identity(&c)).is_exact());
    }

    #[test]
    fn cone_of_zero_adds_homology() {
        let a = two_term(Matrix::from_i64(1, 2, &[1, 3]));
        let b = ChainComplex::with_zero_differential(MultiGradedSpace::from_dims(1, [(vec![0], 2)]), 0);
        let cn = cone(&ChainMap::zero(&a, &b));
        let h = cn.homology().dims;
        // H(a) = 1 in degree 0, shifted to degree -1; plus B in degree 0
        assert_eq!(h, MultiGradedSpace::from_dims(1, [(vec![-1], 1), (vec![0], 2)]));
    }

    #[test]
    fn split_abelian_identity_case() {
        let a = MultiGradedSpace::from_dims(1, [(vec![0], 2)]);
        let b = MultiGradedSpace::from_dims(1, [(vec![0], 1)]);
        let id_a = GradedOperator::identity(&a);
        let id_b = GradedOperator::identity(&b);
        let g = GradedOperator::zero(&b, &a);
        let s = split_abelian(&id_a, &g, &id_b).unwrap();
        assert!(s.coker.is_zero());
    }

    #[test]
    fn split_abelian_zero_a() {
        let a = MultiGradedSpace::new(1);
        let c = MultiGradedSpace::from_dims(1, [(vec![0], 2)]);
        let b = MultiGradedSpace::from_dims(1, [(vec![0], 3)]);
        let dsp = MultiGradedSpace::from_dims(1, [(vec![0], 1)]);
        let f = GradedOperator::zero(&a, &c);
        let g = GradedOperator::homogeneous(&b, &c, &[0], [(vec![0], Matrix::from_i64(2, 3, &[1, 0, 0, 0, 1, 0]))]).unwrap();
        let h = GradedOperator::homogeneous(&b, &dsp, &[0], [(vec![0], Matrix::from_i64(1, 3, &[0, 0, 1]))]).unwrap();
        let s = split_abelian(&f, &g, &h).unwrap();
        assert_eq!(s.coker, c);
    }

    #[test]
    fn split_abelian_rejects_non_iso() {
        let a = MultiGradedSpace::from_dims(1, [(vec![0], 1)]);
        let f = GradedOperator::zero(&a, &a);
        let g = GradedOperator::zero(&a, &a);
        assert!(matches!(split_abelian(&f, &g, &f), Err(GradedError::Hypothesis(_))));
    }
}

/// Random inputs for the splitting lemmas.
pub mod sample {
    use rand::Rng;

    use super::*;

    fn entry<R: Rng>(rng: &mut R) -> Scalar {
        int(rng.gen_range(-3..=3))
    }

    fn random_matrix<R: Rng>(rng: &mut R, rows: usize, cols: usize) -> Matrix {
        Matrix::from_fn(rows, cols, |_, _| entry(rng))
    }

    /// Random operator of the given shift between two spaces.
    pub fn random_operator<R: Rng>(rng: &mut R, source: &MultiGradedSpace, target: &MultiGradedSpace, shift: &[i64]) -> GradedOperator {
        let mut op = GradedOperator::zero(source, target);
        for (d, n) in source.components() {
            let t = add_degrees(d, shift);
            let m = target.dim(&t);
            if m > 0 {
                op.insert_block(d.clone(), t, random_matrix(rng, m, n));
            }
        }
        op
    }

    /// Complex in degrees `0..len` (one axis); each differential factors through the cokernel
    /// of the previous one, so `d∘d = 0`.
    pub fn random_complex<R: Rng>(rng: &mut R, len: i64, max_dim: usize) -> ChainComplex {
        let dims: Vec<usize> = (0..len).map(|_| rng.gen_range(0..=max_dim)).collect();
        let space = MultiGradedSpace::from_dims(1, (0..len).map(|i| (vec![i], dims[i as usize])));
        let mut d = GradedOperator::zero(&space, &space);
        let mut prev: Option<Matrix> = None;
        for i in 0..len - 1 {
            let (src, tgt) = (dims[i as usize], dims[i as usize + 1]);
            let m = match &prev {
                None => random_matrix(rng, tgt, src),
                Some(p) => {
                    let left = p.transpose().kernel_basis().transpose();
                    &random_matrix(rng, tgt, left.rows()) * &left
                }
            };
            if src > 0 && tgt > 0 {
                d.insert_block(vec![i], vec![i + 1], m.clone());
            }
            prev = Some(if src == 0 { Matrix::zeros(tgt, 0) } else { m });
        }
        ChainComplex::new(space, 0, d).expect("d squares to zero")
    }

    /// `(f g; 0 h): A ⊕ B → C ⊕ D`, degreewise invertible, with `f` injective and `h` surjective.
    pub fn random_abelian_instance<R: Rng>(rng: &mut R, max_dim: usize) -> (GradedOperator, GradedOperator, GradedOperator) {
        loop {
            let mut dims = Vec::new();
            for deg in 0..rng.gen_range(1..=3i64) {
                let a = rng.gen_range(0..=max_dim);
                let b = rng.gen_range(0..=max_dim);
                let r = rng.gen_range(0..=b);
                dims.push((deg, a, b, a + r, b - r));
            }
            let sp = |pick: fn(&(i64, usize, usize, usize, usize)) -> usize| {
                MultiGradedSpace::from_dims(1, dims.iter().map(|t| (vec![t.0], pick(t))))
            };
            let (a, b, c, d) = (sp(|t| t.1), sp(|t| t.2), sp(|t| t.3), sp(|t| t.4));
            let f = random_operator(rng, &a, &c, &[0]);
            let g = random_operator(rng, &b, &c, &[0]);
            let h = random_operator(rng, &b, &d, &[0]);
            let block = GradedOperator::from_grid(&[&a, &b], &[&c, &d], &[vec![Some(&f), Some(&g)], vec![None, Some(&h)]]);
            let iso = block.source().degrees().chain(block.target().degrees()).all(|deg| block.block_or_zero(deg, deg).is_isomorphism());
            if iso {
                return (f, g, h);
            }
        }
    }

    /// `f: A → A ⊕ K₁`, `g: B → A ⊕ K₁`, `h: B → B ⊕ K₂` with `K₁`, `K₂` contractible; `f` and `h`
    /// are the inclusions plus null-homotopic terms and `g` is null-homotopic, so the block map
    /// is a quasi-isomorphism.
    pub fn random_derived_instance<R: Rng>(rng: &mut R, max_dim: usize) -> (ChainMap, ChainMap, ChainMap) {
        let a = random_complex(rng, 3, max_dim);
        let b = random_complex(rng, 3, max_dim);
        let k1 = cone(&ChainMap::identity(&random_complex(rng, 2, max_dim)));
        let k2 = cone(&ChainMap::identity(&random_complex(rng, 2, max_dim)));
        let c = a.direct_sum(&k1);
        let dcx = b.direct_sum(&k2);
        let null = |rng: &mut R, s: &ChainComplex, t: &ChainComplex| {
            let h = random_operator(rng, s.space(), t.space(), &[-1]);
            t.differential().compose(&h).add(&h.compose(s.differential()))
        };
        let f_op = summand_inclusion(&[a.space(), k1.space()], 0).add(&null(rng, &a, &c));
        let g_op = null(rng, &b, &c);
        let h_op = summand_inclusion(&[b.space(), k2.space()], 0).add(&null(rng, &b, &dcx));
        (
            ChainMap::new(a, c.clone(), f_op).expect("chain map"),
            ChainMap::new(b.clone(), c, g_op).expect("chain map"),
            ChainMap::new(b, dcx, h_op).expect("chain map"),
        )
    }
}

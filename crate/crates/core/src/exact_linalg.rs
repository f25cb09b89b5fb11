//! Exact rational scalars and matrices.
//!
//! Scalars are `num_rational::BigRational`, which keeps every value reduced
//! with a positive denominator. Matrices behave as dense arrays but store only
//! nonzero entries. Reduced row echelon forms are unique, so pivot columns and
//! kernel bases do not depend on the elimination order.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::OnceLock;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Scalar = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("cannot parse rational from {0:?}")]
    Parse(String),
}

pub fn int(v: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn factorial(k: usize) -> Scalar {
    let mut acc = BigInt::one();
    for m in 2..=k {
        acc *= m;
    }
    BigRational::from_integer(acc)
}

/// "p/q" with q omitted when it is 1.
pub fn format_scalar(s: &Scalar) -> String {
    if s.denom().is_one() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

pub fn parse_scalar(text: &str) -> Result<Scalar, LinalgError> {
    let t = text.trim();
    let bad = || LinalgError::Parse(text.to_string());
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => {
            let p: BigInt = t.parse().map_err(|_| bad())?;
            Ok(BigRational::from_integer(p))
        }
    }
}

/// Matrix stored as sorted sparse rows without explicit zeros.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<SparseRow>,
}

type SparseRow = Vec<(usize, Scalar)>;

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

fn zero_scalar() -> &'static Scalar {
    static ZERO: OnceLock<Scalar> = OnceLock::new();
    ZERO.get_or_init(Scalar::zero)
}

/// `a + f * b` for sorted sparse rows.
fn axpy(a: &[(usize, Scalar)], f: &Scalar, b: &[(usize, Scalar)]) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i == a.len() || b[j].0 < a[i].0 {
            out.push((b[j].0, f * &b[j].1));
            j += 1;
        } else {
            let v = &a[i].1 + f * &b[j].1;
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Row echelon basis of the row space: leading column -> row with leading entry 1.
fn echelon(rows: impl IntoIterator<Item = SparseRow>) -> BTreeMap<usize, SparseRow> {
    let mut rows: Vec<SparseRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    rows.sort_by_key(|r| r.len());
    let mut pivots: BTreeMap<usize, SparseRow> = BTreeMap::new();
    for mut v in rows {
        while let Some((lead, val)) = v.first().cloned() {
            match pivots.get(&lead) {
                Some(p) => v = axpy(&v[1..], &-val, &p[1..]),
                None => {
                    let inv = val.recip();
                    for e in v.iter_mut() {
                        e.1 = &e.1 * &inv;
                    }
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots
}

/// Prime used for modular rank certificates, `2^61 - 1`.
pub const CERT_PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % CERT_PRIME as u128) as u64
}

fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut acc = 1;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    acc
}

fn bigint_mod(x: &BigInt) -> u64 {
    let p = BigInt::from(CERT_PRIME);
    let r = ((x % &p) + &p) % &p;
    r.try_into().expect("reduced below the prime")
}

fn reduce_mod(v: &Scalar) -> Option<u64> {
    let d = bigint_mod(v.denom());
    if d == 0 {
        return None;
    }
    Some(mul_mod(bigint_mod(v.numer()), pow_mod(d, CERT_PRIME - 2)))
}

fn modular_echelon_rank(mut rows: Vec<Vec<(usize, u64)>>) -> usize {
    rows.retain(|r| !r.is_empty());
    rows.sort_by_key(|r| r.len());
    let mut pivots: std::collections::HashMap<usize, Vec<(usize, u64)>> = std::collections::HashMap::new();
    for mut v in rows {
        while let Some(&(lead, val)) = v.first() {
            match pivots.get(&lead) {
                Some(p) => {
                    // v <- v - val * p, where p has leading entry 1
                    let f = CERT_PRIME - val;
                    let (a, b) = (&v[1..], &p[1..]);
                    let mut out = Vec::with_capacity(a.len() + b.len());
                    let (mut i, mut j) = (0, 0);
                    while i < a.len() || j < b.len() {
                        if j == b.len() || (i < a.len() && a[i].0 < b[j].0) {
                            out.push(a[i]);
                            i += 1;
                        } else if i == a.len() || b[j].0 < a[i].0 {
                            out.push((b[j].0, mul_mod(f, b[j].1)));
                            j += 1;
                        } else {
                            let x = (a[i].1 + mul_mod(f, b[j].1)) % CERT_PRIME;
                            if x != 0 {
                                out.push((a[i].0, x));
                            }
                            i += 1;
                            j += 1;
                        }
                    }
                    v = out;
                }
                None => {
                    let inv = pow_mod(val, CERT_PRIME - 2);
                    for e in v.iter_mut() {
                        e.1 = mul_mod(e.1, inv);
                    }
                    pivots.insert(lead, v);
                    break;
                }
            }
        }
    }
    pivots.len()
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Vec::new(); rows] }
    }

    pub fn identity(n: usize) -> Self {
        Matrix { rows: n, cols: n, data: (0..n).map(|i| vec![(i, Scalar::one())]).collect() }
    }

    /// Row-major dense entries.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self, LinalgError> {
        if entries.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        let mut it = entries.into_iter();
        Ok(Matrix::from_fn(rows, cols, |_, _| it.next().expect("counted")))
    }

    pub fn from_i64(rows: usize, cols: usize, values: &[i64]) -> Self {
        assert_eq!(values.len(), rows * cols, "entry count");
        Matrix::from_fn(rows, cols, |i, j| int(values[i * cols + j]))
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let c = rows.first().map_or(0, |row| row.len());
        let mut data = Vec::with_capacity(rows.len());
        for row in rows {
            if row.len() != c {
                return Err(LinalgError::DimensionMismatch { expected: c, found: row.len() });
            }
            data.push(row.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect());
        }
        Ok(Matrix { rows: data.len(), cols: c, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let data = (0..rows)
            .map(|i| (0..cols).map(|j| (j, f(i, j))).filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        Matrix { rows, cols, data }
    }

    /// Sums the given `(row, column, value)` entries.
    pub fn from_triplets(rows: usize, cols: usize, triplets: impl IntoIterator<Item = (usize, usize, Scalar)>) -> Self {
        let mut data: Vec<SparseRow> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "index out of range");
            data[r].push((c, v));
        }
        for row in data.iter_mut() {
            row.sort_by_key(|e| e.0);
            let mut merged: SparseRow = Vec::with_capacity(row.len());
            for (c, v) in row.drain(..) {
                match merged.last_mut() {
                    Some(last) if last.0 == c => last.1 += v,
                    _ => merged.push((c, v)),
                }
            }
            merged.retain(|e| !e.1.is_zero());
            *row = merged;
        }
        Matrix { rows, cols, data }
    }

    /// Matrix whose columns are the given vectors, all of length `rows`.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, v) in col.iter().enumerate() {
                if !v.is_zero() {
                    m.data[i].push((j, v.clone()));
                }
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

    /// Number of nonzero entries.
    pub fn nnz(&self) -> usize {
        self.data.iter().map(Vec::len).sum()
    }

    /// Nonzero entries of row `r` as `(column, value)`, sorted by column.
    pub fn row_entries(&self, r: usize) -> &[(usize, Scalar)] {
        &self.data[r]
    }

    /// All nonzero entries as `(row, column, value)`.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &Scalar)> {
        self.data.iter().enumerate().flat_map(|(i, row)| row.iter().map(move |(j, v)| (i, *j, v)))
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let row = &self.data[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(k) => &row[k].1,
            Err(_) => zero_scalar(),
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        assert!(r < self.rows && c < self.cols, "index out of range");
        let row = &mut self.data[r];
        match row.binary_search_by_key(&c, |e| e.0) {
            Ok(k) if v.is_zero() => {
                row.remove(k);
            }
            Ok(k) => row[k].1 = v,
            Err(_) if v.is_zero() => {}
            Err(k) => row.insert(k, (c, v)),
        }
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let cur = self.get(r, c) + v;
        self.set(r, c, cur);
    }

    pub fn row(&self, r: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.cols];
        for (c, v) in &self.data[r] {
            out[*c] = v.clone();
        }
        out
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        let t = self.transpose();
        (0..self.cols).map(|c| t.row(c)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Vec::is_empty)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = vec![Vec::new(); self.cols];
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row {
                data[*j].push((i, v.clone()));
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        if s.is_zero() {
            return Matrix::zeros(self.rows, self.cols);
        }
        let data = self.data.iter().map(|row| row.iter().map(|(j, v)| (*j, v * s)).collect()).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.cols, "vector length");
        self.data
            .iter()
            .map(|row| {
                let mut acc = Scalar::zero();
                for (j, a) in row {
                    if !v[*j].is_zero() {
                        acc += a * &v[*j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn hstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.rows, other.rows, "hstack row counts");
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.iter().cloned().chain(b.iter().map(|(j, v)| (j + self.cols, v.clone()))).collect())
            .collect();
        Matrix { rows: self.rows, cols: self.cols + other.cols, data }
    }

    pub fn vstack(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.cols, "vstack column counts");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Matrix { rows: self.rows + other.rows, cols: self.cols, data }
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Matrix {
        let data = self.data[rows.clone()]
            .iter()
            .map(|row| row.iter().filter(|(j, _)| cols.contains(j)).map(|(j, v)| (j - cols.start, v.clone())).collect())
            .collect();
        Matrix { rows: rows.len(), cols: cols.len(), data }
    }

    /// Keeps the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut place = vec![usize::MAX; self.cols];
        for (k, &c) in cols.iter().enumerate() {
            place[c] = k;
        }
        let data = self
            .data
            .iter()
            .map(|row| {
                let mut r: SparseRow = row.iter().filter(|(j, _)| place[*j] != usize::MAX).map(|(j, v)| (place[*j], v.clone())).collect();
                r.sort_by_key(|e| e.0);
                r
            })
            .collect();
        Matrix { rows: self.rows, cols: cols.len(), data }
    }

    /// Writes `block` with its top-left corner at (r0, c0).
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "block out of range");
        for (i, brow) in block.data.iter().enumerate() {
            let row = &mut self.data[r0 + i];
            row.retain(|(j, _)| *j < c0 || *j >= c0 + block.cols);
            row.extend(brow.iter().map(|(j, v)| (j + c0, v.clone())));
            row.sort_by_key(|e| e.0);
        }
    }

    pub fn rref(&self) -> Rref {
        let mut pivots = echelon(self.data.iter().cloned());
        let cols: Vec<usize> = pivots.keys().copied().collect();
        // back substitution, last pivot first; reduced rows have no other pivot entries
        for &c in cols.iter().rev() {
            let row = pivots[&c].clone();
            let hits: Vec<(usize, Scalar)> = row[1..].iter().filter(|(j, _)| pivots.contains_key(j)).cloned().collect();
            if hits.is_empty() {
                continue;
            }
            let mut r = row;
            for (j, v) in hits {
                let p = &pivots[&j];
                r = axpy(&r, &-v, p);
            }
            pivots.insert(c, r);
        }
        let mut data: Vec<SparseRow> = pivots.into_values().collect();
        data.resize(self.rows, Vec::new());
        Rref { reduced: Matrix { rows: self.rows, cols: self.cols, data }, pivots: cols }
    }

    pub fn rank(&self) -> usize {
        if self.rows <= self.cols {
            echelon(self.data.iter().cloned()).len()
        } else {
            echelon(self.transpose().data).len()
        }
    }

    /// Columns form a basis of the null space, one per free column of the rref.
    pub fn kernel_basis(&self) -> Matrix {
        let Rref { reduced, pivots } = self.rref();
        let mut free_index = vec![usize::MAX; self.cols];
        let free: Vec<usize> = (0..self.cols).filter(|c| pivots.binary_search(c).is_err()).collect();
        for (k, &f) in free.iter().enumerate() {
            free_index[f] = k;
        }
        let mut data: Vec<SparseRow> = vec![Vec::new(); self.cols];
        for (k, &f) in free.iter().enumerate() {
            data[f].push((k, Scalar::one()));
        }
        for (r, &p) in pivots.iter().enumerate() {
            data[p] = reduced.data[r][1..].iter().map(|(j, v)| (free_index[*j], -v.clone())).collect();
        }
        Matrix { rows: self.cols, cols: free.len(), data }
    }

    /// The pivot columns of `self`, a basis of the column space.
    pub fn image_basis(&self) -> Matrix {
        let cols = self.pivot_columns();
        self.select_columns(&cols)
    }

    /// Leading columns of a row echelon form, i.e. the greedy column basis.
    pub fn pivot_columns(&self) -> Vec<usize> {
        echelon(self.data.iter().cloned()).keys().copied().collect()
    }

    /// Rank of the reduction modulo [`CERT_PRIME`], or `None` when a denominator vanishes there.
    ///
    /// Never exceeds the rational rank, so it certifies lower bounds.
    pub fn rank_mod_prime(&self) -> Option<usize> {
        let mut rows: Vec<Vec<(usize, u64)>> = Vec::with_capacity(self.rows);
        for row in &self.data {
            let mut r = Vec::with_capacity(row.len());
            for (j, v) in row {
                let x = reduce_mod(v)?;
                if x != 0 {
                    r.push((*j, x));
                }
            }
            rows.push(r);
        }
        Some(modular_echelon_rank(rows))
    }

    pub fn is_isomorphism(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let Rref { reduced, pivots } = self.hstack(&Matrix::identity(n)).rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(reduced.submatrix(0..n, n..2 * n))
    }

    /// Exact solution of `self * x = b`; `Ok(None)` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, found: b.len() });
        }
        let x = self.solve_matrix(&Matrix::from_columns(self.rows, &[b.to_vec()]))?;
        Ok(x.map(|m| m.column(0)))
    }

    /// Solves `self * X = rhs` column by column.
    pub fn solve_matrix(&self, rhs: &Matrix) -> Result<Option<Matrix>, LinalgError> {
        if rhs.rows != self.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.rows, found: rhs.rows });
        }
        let aug = self.hstack(rhs);
        let Rref { reduced, pivots } = aug.rref();
        if pivots.iter().any(|&p| p >= self.cols) {
            return Ok(None);
        }
        let mut x = Matrix::zeros(self.cols, rhs.cols);
        for (r, &p) in pivots.iter().enumerate() {
            x.data[p] = reduced.data[r].iter().filter(|(j, _)| *j >= self.cols).map(|(j, v)| (j - self.cols, v.clone())).collect();
        }
        Ok(Some(x))
    }

    /// A left inverse of a matrix with independent columns.
    ///
    /// Inverts a square submatrix on a greedy set of independent rows and is zero on the other rows.
    pub fn left_inverse(&self) -> Option<Matrix> {
        let t = self.transpose();
        let rows = t.pivot_columns();
        if rows.len() != self.cols {
            return None;
        }
        let square = t.select_columns(&rows).transpose();
        let inv = square.inverse()?;
        let mut out = Matrix::zeros(self.cols, self.rows);
        for (i, row) in inv.data.iter().enumerate() {
            let mut r: SparseRow = row.iter().map(|(j, v)| (rows[*j], v.clone())).collect();
            r.sort_by_key(|e| e.0);
            out.data[i] = r;
        }
        Some(out)
    }

    pub fn max_abs_entry(&self) -> Scalar {
        self.nonzeros().map(|(_, _, e)| e.abs()).max().unwrap_or_else(Scalar::zero)
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(format_scalar).collect();
            write!(f, "[{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix add shapes");
        let one = Scalar::one();
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| axpy(a, &one, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols), "matrix sub shapes");
        let m1 = -Scalar::one();
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| axpy(a, &m1, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }
}

impl Neg for &Matrix {
    type Output = Matrix;
    fn neg(self) -> Matrix {
        self.scale(&-Scalar::one())
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product shapes");
        let mut acc = vec![Scalar::zero(); rhs.cols];
        let mut touched: Vec<usize> = Vec::new();
        let mut seen = vec![false; rhs.cols];
        let mut data = Vec::with_capacity(self.rows);
        for row in &self.data {
            for (k, a) in row {
                for (j, b) in &rhs.data[*k] {
                    if !seen[*j] {
                        seen[*j] = true;
                        touched.push(*j);
                    }
                    acc[*j] += a * b;
                }
            }
            touched.sort_unstable();
            let mut out = Vec::with_capacity(touched.len());
            for &j in &touched {
                let v = std::mem::replace(&mut acc[j], Scalar::zero());
                if !v.is_zero() {
                    out.push((j, v));
                }
                seen[j] = false;
            }
            touched.clear();
            data.push(out);
        }
        Matrix { rows: self.rows, cols: rhs.cols, data }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_examples() {
        assert_eq!(Matrix::identity(2).rank(), 2);
        assert_eq!(Matrix::zeros(3, 4).rank(), 0);
        assert_eq!(Matrix::from_i64(2, 2, &[1, 2, 2, 4]).rank(), 1);
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(Matrix::identity(3).kernel_basis().cols(), 0);
        assert_eq!(Matrix::zeros(2, 3).kernel_basis().cols(), 3);
        let k = Matrix::from_i64(1, 2, &[1, 1]).kernel_basis();
        assert_eq!(k.cols(), 1);
        // spans (1, -1): the free column is the second one
        assert_eq!(k.column(0), vec![int(-1), int(1)]);
    }

    #[test]
    fn isomorphism_examples() {
        assert!(Matrix::identity(4).is_isomorphism());
        assert!(Matrix::from_i64(2, 2, &[0, 1, -1, 0]).is_isomorphism());
        assert!(!Matrix::zeros(2, 3).is_isomorphism());
    }

    #[test]
    fn solve_examples() {
        let b = vec![int(3), frac(1, 2)];
        assert_eq!(Matrix::identity(2).solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(Matrix::from_i64(1, 1, &[2]).solve(&[int(1)]).unwrap(), Some(vec![frac(1, 2)]));
        let singular = Matrix::from_i64(2, 2, &[1, 1, 1, 1]);
        assert_eq!(singular.solve(&[int(0), int(1)]).unwrap(), None);
        assert!(matches!(
            singular.solve(&[int(0)]),
            Err(LinalgError::DimensionMismatch { expected: 2, found: 1 })
        ));
    }

    #[test]
    fn inverse_round_trip() {
        let m = Matrix::from_i64(3, 3, &[2, 1, 0, 0, 1, 3, 1, 0, 1]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(3));
        assert!(Matrix::from_i64(2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }

    #[test]
    fn modular_rank_bounds_rational_rank() {
        let m = Matrix::from_i64(3, 3, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        assert_eq!(m.rank_mod_prime(), Some(2));
        let big = Matrix::from_i64(1, 1, &[CERT_PRIME as i64]);
        assert_eq!(big.rank(), 1);
        assert_eq!(big.rank_mod_prime(), Some(0));
        let bad = Matrix::from_entries(1, 1, vec![frac(1, CERT_PRIME as i64)]).unwrap();
        assert_eq!(bad.rank_mod_prime(), None);
    }

    #[test]
    fn scalar_text_round_trip() {
        for s in ["0", "-3", "7/4", "-1/2"] {
            assert_eq!(format_scalar(&parse_scalar(s).unwrap()), s);
        }
        assert_eq!(parse_scalar("4/8").unwrap(), frac(1, 2));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("x").is_err());
    }
}

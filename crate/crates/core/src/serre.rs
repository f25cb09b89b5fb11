//! Chevalley systems of graded operators for types A2 and A3, their Serre
//! relations, and finite groups generated by lattice reflections.

use std::collections::{HashMap, VecDeque};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exact_linalg::{format_scalar, int};
use crate::gradedcat::{GradedOperator, MultiGradedSpace};
use crate::sl2::{weil_element, Sl2Action, Sl2Error, Weights};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SerreError {
    #[error("actions live on different spaces")]
    SpaceMismatch,
    #[error("required identity fails: {0}")]
    Precondition(String),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error("reflections generate more than {0} elements")]
    NotFinite(usize),
    #[error("{0}")]
    Shape(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanMatrix {
    pub entries: Vec<Vec<i64>>,
}

impl CartanMatrix {
    pub fn a2() -> Self {
        CartanMatrix { entries: vec![vec![2, -1], vec![-1, 2]] }
    }

    pub fn a3() -> Self {
        CartanMatrix { entries: vec![vec![2, -1, 0], vec![-1, 2, -1], vec![0, -1, 2]] }
    }

    pub fn size(&self) -> usize {
        self.entries.len()
    }
}

/// Operators `e_i`, `f_i` and diagonal `h_i` (given by weight functionals) on one space.
#[derive(Clone, Debug)]
pub struct ChevalleySystem {
    pub space: MultiGradedSpace,
    pub e: Vec<GradedOperator>,
    pub f: Vec<GradedOperator>,
    pub h: Vec<Weights>,
}

impl ChevalleySystem {
    pub fn h_op(&self, i: usize) -> GradedOperator {
        GradedOperator::diagonal(&self.space, |d| int(self.h[i].weight(d)))
    }

    pub fn rank(&self) -> usize {
        self.e.len()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct RelationCheck {
    pub relation: String,
    pub passed: bool,
    /// On failure: a basis vector, given as degree and index, on which the two sides differ,
    /// and the nonzero entries of the difference applied to it.
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Witness {
    pub degree: Vec<i64>,
    pub index: usize,
    pub difference: Vec<(Vec<i64>, usize, String)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SerreReport {
    pub checks: Vec<RelationCheck>,
}

impl SerreReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &RelationCheck> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

fn compare(relation: String, lhs: &GradedOperator, rhs: &GradedOperator) -> RelationCheck {
    let diff = lhs.sub(rhs);
    let witness = diff.blocks().next().map(|((s, _), m)| {
        let col = (0..m.cols()).find(|&c| (0..m.rows()).any(|r| !m.get(r, c).is_zero())).unwrap_or(0);
        let mut difference = Vec::new();
        for ((s2, t), m2) in diff.blocks() {
            if s2 != s {
                continue;
            }
            for r in 0..m2.rows() {
                let v = m2.get(r, col);
                if !v.is_zero() {
                    difference.push((t.clone(), r, format_scalar(v)));
                }
            }
        }
        Witness { degree: s.clone(), index: col, difference }
    });
    RelationCheck { relation, passed: witness.is_none(), witness }
}

fn ad_pow(a: &GradedOperator, b: &GradedOperator, m: usize) -> GradedOperator {
    (0..m).fold(b.clone(), |acc, _| a.commutator(&acc))
}

/// Evaluates every relation of the Chevalley–Serre presentation; generators are 1-based in the names.
pub fn check_serre(sys: &ChevalleySystem, cartan: &CartanMatrix) -> Result<SerreReport, SerreError> {
    let r = cartan.size();
    if sys.e.len() != r || sys.f.len() != r || sys.h.len() != r {
        return Err(SerreError::Shape(format!("system of rank {} against a Cartan matrix of size {r}", sys.e.len())));
    }
    let h: Vec<GradedOperator> = (0..r).map(|i| sys.h_op(i)).collect();
    let zero = GradedOperator::zero(&sys.space, &sys.space);
    let mut checks = Vec::new();
    for i in 0..r {
        for j in 0..r {
            let (a, ni, nj) = (cartan.entries[i][j], i + 1, j + 1);
            if i < j {
                checks.push(compare(format!("[h{ni}, h{nj}] = 0"), &h[i].commutator(&h[j]), &zero));
            }
            checks.push(compare(format!("[h{ni}, e{nj}] = {a} e{nj}"), &h[i].commutator(&sys.e[j]), &sys.e[j].scale(&int(a))));
            checks.push(compare(format!("[h{ni}, f{nj}] = {} f{nj}", -a), &h[i].commutator(&sys.f[j]), &sys.f[j].scale(&int(-a))));
            let expected = if i == j { h[j].clone() } else { zero.clone() };
            let rhs = if i == j { format!("h{nj}") } else { "0".into() };
            checks.push(compare(format!("[e{ni}, f{nj}] = {rhs}"), &sys.e[i].commutator(&sys.f[j]), &expected));
            if i != j {
                let m = (1 - a) as usize;
                checks.push(compare(format!("(ad e{ni})^{m} e{nj} = 0"), &ad_pow(&sys.e[i], &sys.e[j], m), &zero));
                checks.push(compare(format!("(ad f{ni})^{m} f{nj} = 0"), &ad_pow(&sys.f[i], &sys.f[j], m), &zero));
            }
        }
    }
    Ok(SerreReport { checks })
}

fn require_commute(a: &GradedOperator, b: &GradedOperator, what: &str) -> Result<(), SerreError> {
    if a.commutator(b).is_zero() {
        Ok(())
    } else {
        Err(SerreError::Precondition(format!("[{what}] = 0")))
    }
}

/// Requires `[h_a, X_b] = c X_b`, i.e. the weight functional of `a` changes by `c` along `X_b`.
fn require_weight_step(h: &Weights, x: &GradedOperator, c: i64, what: &str) -> Result<(), SerreError> {
    for ((s, t), _) in x.blocks() {
        if h.weight(t) - h.weight(s) != c {
            return Err(SerreError::Precondition(format!("{what} shifts by {c}")));
        }
    }
    Ok(())
}

fn negate(w: &Weights) -> Weights {
    Weights::new(w.functional.iter().map(|a| -a).collect(), -w.offset)
}

/// `e1 = X_1`, `f1 = Y_1`, `h1 = H_1`, `e2 = Y_2`, `f2 = X_2`, `h2 = -H_2`.
pub fn build_sl3(first: &Sl2Action, second: &Sl2Action) -> Result<ChevalleySystem, SerreError> {
    if first.space() != second.space() {
        return Err(SerreError::SpaceMismatch);
    }
    require_commute(first.x(), second.x(), "X_1, X_2")?;
    require_weight_step(first.weights(), second.x(), 1, "X_2 in the first weight")?;
    require_weight_step(second.weights(), first.x(), 1, "X_1 in the second weight")?;
    Ok(ChevalleySystem {
        space: first.space().clone(),
        e: vec![first.x().clone(), second.y().clone()],
        f: vec![first.y().clone(), second.x().clone()],
        h: vec![first.weights().clone(), negate(second.weights())],
    })
}

/// Adds `e3 = X_3`, `f3 = Y_3`, `h3 = H_3` to [`build_sl3`].
pub fn build_sl4(first: &Sl2Action, second: &Sl2Action, third: &Sl2Action) -> Result<ChevalleySystem, SerreError> {
    let mut sys = build_sl3(first, second)?;
    if third.space() != first.space() {
        return Err(SerreError::SpaceMismatch);
    }
    require_commute(first.x(), third.x(), "X_1, X_3")?;
    require_commute(second.x(), third.x(), "X_2, X_3")?;
    require_weight_step(third.weights(), second.x(), 1, "X_2 in the third weight")?;
    require_weight_step(second.weights(), third.x(), 1, "X_3 in the second weight")?;
    require_weight_step(first.weights(), third.x(), 0, "X_3 in the first weight")?;
    require_weight_step(third.weights(), first.x(), 0, "X_1 in the third weight")?;
    sys.e.push(third.x().clone());
    sys.f.push(third.y().clone());
    sys.h.push(third.weights().clone());
    Ok(sys)
}

/// `(Ad w1 ∘ Ad w2 ∘ Ad w1)(e1) = f2`, with `w1` the Weil element of `(e1, f1, h1)` and `w2` that of `(f2, e2, -h2)`.
pub fn check_reflection_identity(sys: &ChevalleySystem) -> Result<bool, SerreError> {
    if sys.rank() < 2 {
        return Err(SerreError::Shape("need two simple roots".into()));
    }
    let a1 = Sl2Action::new(sys.e[0].clone(), sys.f[0].clone(), sys.h[0].clone())?;
    let a2 = Sl2Action::new(sys.f[1].clone(), sys.e[1].clone(), negate(&sys.h[1]))?;
    let (w1, w2) = (weil_element(&a1), weil_element(&a2));
    let img = w1.conjugate(&w2.conjugate(&w1.conjugate(&sys.e[0])?)?)?;
    Ok(img == sys.f[1])
}

/// Affine map `v ↦ A v + b` of an integer lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticeMap {
    pub linear: Vec<Vec<i64>>,
    pub translation: Vec<i64>,
}

impl LatticeMap {
    pub fn linear(rows: Vec<Vec<i64>>) -> Self {
        let n = rows.len();
        LatticeMap { linear: rows, translation: vec![0; n] }
    }

    pub fn identity(n: usize) -> Self {
        LatticeMap::linear((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.linear.len()
    }

    pub fn apply(&self, v: &[i64]) -> Vec<i64> {
        self.linear.iter().zip(&self.translation).map(|(row, b)| row.iter().zip(v).map(|(a, x)| a * x).sum::<i64>() + b).collect()
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.dim();
        let linear = (0..n)
            .map(|i| (0..n).map(|j| (0..n).map(|k| self.linear[i][k] * other.linear[k][j]).sum()).collect())
            .collect();
        let translation = self.apply(&other.translation);
        LatticeMap { linear, translation }
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self) == LatticeMap::identity(self.dim())
    }
}

/// Group generated by lattice maps: its elements (identity first) and multiplication table
/// `table[a][b] = index of elements[a] ∘ elements[b]`.
#[derive(Clone, Debug, Serialize)]
pub struct FiniteGroup {
    pub elements: Vec<LatticeMap>,
    pub table: Vec<Vec<usize>>,
}

impl FiniteGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn orbit(&self, v: &[i64]) -> Vec<Vec<i64>> {
        let mut out: Vec<Vec<i64>> = self.elements.iter().map(|g| g.apply(v)).collect();
        out.sort();
        out.dedup();
        out
    }
}

pub const WEYL_ORBIT_BOUND: usize = 10_000;

pub fn weyl_orbit(reflections: &[LatticeMap]) -> Result<FiniteGroup, SerreError> {
    let n = reflections.first().map_or(0, LatticeMap::dim);
    if reflections.iter().any(|r| r.dim() != n || !r.is_involution()) {
        return Err(SerreError::Shape("generators must be involutions of one lattice".into()));
    }
    let mut elements = vec![LatticeMap::identity(n)];
    let mut index: HashMap<LatticeMap, usize> = HashMap::from([(elements[0].clone(), 0)]);
    let mut queue = VecDeque::from([0]);
    while let Some(a) = queue.pop_front() {
        for r in reflections {
            let g = r.compose(&elements[a]);
            if !index.contains_key(&g) {
                if elements.len() >= WEYL_ORBIT_BOUND {
                    return Err(SerreError::NotFinite(WEYL_ORBIT_BOUND));
                }
                index.insert(g.clone(), elements.len());
                queue.push_back(elements.len());
                elements.push(g);
            }
        }
    }
    let table = elements
        .iter()
        .map(|a| elements.iter().map(|b| index[&a.compose(b)]).collect())
        .collect();
    Ok(FiniteGroup { elements, table })
}

/// `(i, k) ↦ (-i, k - i)` and `(i, k) ↦ (i - k, -k)`.
pub fn hexagon_reflections() -> Vec<LatticeMap> {
    vec![LatticeMap::linear(vec![vec![-1, 0], vec![-1, 1]]), LatticeMap::linear(vec![vec![1, -1], vec![0, -1]])]
}

/// `(i,j,k) ↦ (-i, j, k-i)`, `(i, -j, k-j)` and `(i-k, j-k, -k)`.
pub fn tri_reflections() -> Vec<LatticeMap> {
    vec![
        LatticeMap::linear(vec![vec![-1, 0, 0], vec![0, 1, 0], vec![-1, 0, 1]]),
        LatticeMap::linear(vec![vec![1, 0, 0], vec![0, -1, 0], vec![0, -1, 1]]),
        LatticeMap::linear(vec![vec![1, 0, -1], vec![0, 1, -1], vec![0, 0, -1]]),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_orders() {
        assert_eq!(weyl_orbit(&hexagon_reflections()).unwrap().order(), 6);
        assert_eq!(weyl_orbit(&tri_reflections()).unwrap().order(), 24);
        assert_eq!(weyl_orbit(&hexagon_reflections()[..1]).unwrap().order(), 2);
    }

    #[test]
    fn orbits_contain_the_swaps() {
        let g = weyl_orbit(&hexagon_reflections()).unwrap();
        assert!(g.orbit(&[2, -1]).contains(&vec![-1, 2]));
        let g = weyl_orbit(&tri_reflections()).unwrap();
        let (i, j, k) = (1, -2, 3);
        assert!(g.orbit(&[i, j, k]).contains(&vec![j, i, i + j - k]));
    }

    #[test]
    fn rejects_non_involution() {
        let shear = LatticeMap::linear(vec![vec![1, 1], vec![0, 1]]);
        assert!(matches!(weyl_orbit(&[shear]), Err(SerreError::Shape(_))));
    }

    #[test]
    fn infinite_group_is_reported() {
        // two reflections whose product is a translation
        let r1 = LatticeMap::linear(vec![vec![-1]]);
        let r2 = LatticeMap { linear: vec![vec![-1]], translation: vec![1] };
        assert_eq!(weyl_orbit(&[r1, r2]).unwrap_err(), SerreError::NotFinite(WEYL_ORBIT_BOUND));
    }
}

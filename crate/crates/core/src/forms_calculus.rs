//! Constant-coefficient forms on C^{2n}: `dz_1..dz_{2n}` are generators `1..2n` and
//! `dz̄_1..dz̄_{2n}` are generators `2n+1..4n` of one exterior algebra. The first `n`
//! holomorphic directions are the base, the remaining `n` the fiber.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::exact_linalg::{factorial, int, Matrix, Scalar};
use crate::gradedcat::{Degree, GradedOperator, GradedVector, MultiGradedSpace};
use crate::multilinear::{sgn, wedge_sign, ExtElement, SubsetIndex};
use crate::sl2::{complete_sl2, weil_element, Sl2Action, Sl2Error, Weights};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormsError {
    #[error("form is not a 1-form pulled back from the base")]
    NotBaseSupported,
    #[error("no vector field contracts sigma to the given form")]
    NotSolvable,
    #[error("n = {0} is out of range")]
    OutOfRange(usize),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
}

/// How basis forms are graded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Grading {
    /// `(p, q)`.
    Bidegree,
    /// `(i, j, k)` = (fiber degree − n, base degree − n, p − n).
    TriGraded,
}

#[derive(Clone, Debug)]
pub struct FormSpace {
    n: usize,
    gens: usize,
    grading: Grading,
    space: MultiGradedSpace,
    basis: BTreeMap<Degree, Vec<SubsetIndex>>,
    position: HashMap<SubsetIndex, (Degree, usize)>,
}

impl FormSpace {
    /// All `(p, q)`-forms on C^{2n}.
    pub fn new(n: usize) -> Self {
        Self::build(n, 4 * n, Grading::Bidegree)
    }

    /// Holomorphic forms only: `⋀(Q^{2n})`, graded by `(p, 0)`.
    pub fn holomorphic(n: usize) -> Self {
        Self::build(n, 2 * n, Grading::Bidegree)
    }

    pub fn tri_graded(n: usize) -> Self {
        Self::build(n, 4 * n, Grading::TriGraded)
    }

    fn build(n: usize, gens: usize, grading: Grading) -> Self {
        assert!(n >= 1 && gens <= 16, "form space too large");
        let mut fs = FormSpace {
            n,
            gens,
            grading,
            space: MultiGradedSpace::new(if grading == Grading::Bidegree { 2 } else { 3 }),
            basis: BTreeMap::new(),
            position: HashMap::new(),
        };
        for bits in 0..(1u32 << gens) {
            let s = SubsetIndex::from_bits(bits);
            let d = fs.degree(s);
            let list = fs.basis.entry(d.clone()).or_default();
            fs.position.insert(s, (d, list.len()));
            list.push(s);
        }
        for (d, list) in &fs.basis {
            fs.space.set_dim(d.clone(), list.len());
        }
        fs
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn grading(&self) -> Grading {
        self.grading
    }

    pub fn has_antiholomorphic(&self) -> bool {
        self.gens == 4 * self.n
    }

    pub fn space(&self) -> &MultiGradedSpace {
        &self.space
    }

    pub fn dim(&self) -> usize {
        1 << self.gens
    }

    /// Generator index of `dz_a`, `a` in `1..=2n`.
    pub fn dz(&self, a: usize) -> usize {
        a
    }

    /// Generator index of `dz̄_a`, `a` in `1..=2n`.
    pub fn dzbar(&self, a: usize) -> usize {
        assert!(self.has_antiholomorphic(), "no antiholomorphic generators");
        2 * self.n + a
    }

    /// Counts `(base holomorphic, fiber holomorphic, base antiholomorphic, fiber antiholomorphic)`.
    pub fn type_counts(&self, s: SubsetIndex) -> [i64; 4] {
        let n = self.n;
        let mut c = [0; 4];
        for e in s.elements() {
            c[(e - 1) / n] += 1;
        }
        c
    }

    pub fn degree(&self, s: SubsetIndex) -> Degree {
        let [a, b, c, d] = self.type_counts(s);
        let n = self.n as i64;
        match self.grading {
            Grading::Bidegree => vec![a + b, c + d],
            Grading::TriGraded => vec![b + d - n, a + c - n, a + b - n],
        }
    }

    pub fn basis(&self, d: &[i64]) -> &[SubsetIndex] {
        self.basis.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn zero_form(&self) -> ExtElement {
        ExtElement::zero(self.gens)
    }

    pub fn one(&self) -> ExtElement {
        ExtElement::one(self.gens)
    }

    pub fn generator(&self, g: usize) -> ExtElement {
        ExtElement::generator(self.gens, g)
    }

    pub fn to_vector(&self, a: &ExtElement) -> GradedVector {
        let mut parts: BTreeMap<Degree, Vec<Scalar>> = BTreeMap::new();
        for (s, c) in a.terms() {
            let (d, i) = &self.position[s];
            let v = parts.entry(d.clone()).or_insert_with(|| vec![Scalar::zero(); self.space.dim(d)]);
            v[*i] = c.clone();
        }
        let mut out = GradedVector::new();
        for (d, v) in parts {
            out.set_part(d, v);
        }
        out
    }

    pub fn from_vector(&self, v: &GradedVector) -> ExtElement {
        let mut out = self.zero_form();
        for (d, coords) in v.parts() {
            for (s, c) in self.basis(d).iter().zip(coords) {
                out.add_term(*s, c);
            }
        }
        out
    }

    /// Linear endomorphism given on basis forms.
    pub fn operator(&self, f: impl Fn(SubsetIndex) -> ExtElement) -> GradedOperator {
        let mut op = GradedOperator::zero(&self.space, &self.space);
        for (d, list) in &self.basis {
            for (i, s) in list.iter().enumerate() {
                for (t, c) in f(*s).terms() {
                    let (td, ti) = &self.position[t];
                    op.add_entry(d, i, td, *ti, c);
                }
            }
        }
        op
    }

    pub fn apply(&self, op: &GradedOperator, a: &ExtElement) -> ExtElement {
        self.from_vector(&op.apply(&self.to_vector(a)))
    }

    /// `a ↦ form ∧ a`.
    pub fn wedge_operator(&self, form: &ExtElement) -> GradedOperator {
        self.operator(|s| form.wedge(&ExtElement::basis(self.gens, s)))
    }

    pub fn contraction_operator(&self, x: &ConstantVectorField) -> GradedOperator {
        self.operator(|s| contract_vf(x, &ExtElement::basis(self.gens, s)))
    }

    pub fn tvalued_operator(&self, t: &TValuedForm01) -> GradedOperator {
        self.operator(|s| contract_tvalued(self, t, &ExtElement::basis(self.gens, s)))
    }

    /// `σ = Σ_a dz_a ∧ dz_{n+a}`.
    pub fn sigma(&self) -> ExtElement {
        let mut out = self.zero_form();
        for a in 1..=self.n {
            out = out.add(&self.generator(a).wedge(&self.generator(self.n + a)));
        }
        out
    }

    /// `Σ_a dz_a ∧ dz̄_a` over the given holomorphic directions.
    fn kahler_part(&self, dirs: impl Iterator<Item = usize>) -> ExtElement {
        let mut out = self.zero_form();
        for a in dirs {
            out = out.add(&self.generator(self.dz(a)).wedge(&self.generator(self.dzbar(a))));
        }
        out
    }

    /// `ω = Σ_{a ≤ 2n} dz_a ∧ dz̄_a`.
    pub fn omega(&self) -> ExtElement {
        self.kahler_part(1..=2 * self.n)
    }

    /// `π*λ = Σ_{a ≤ n} dz_a ∧ dz̄_a`.
    pub fn pullback_lambda(&self) -> ExtElement {
        self.kahler_part(1..=self.n)
    }

    /// Fiber part `Σ_{a > n} dz_a ∧ dz̄_a` of `ω`.
    pub fn omega_fiber(&self) -> ExtElement {
        self.kahler_part(self.n + 1..=2 * self.n)
    }

    /// `π*(dt_b) = dz_b` for a base direction `b` in `1..=n`.
    pub fn base_form(&self, b: usize) -> ExtElement {
        assert!((1..=self.n).contains(&b), "base direction out of range");
        self.generator(b)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TwoFormClass {
    Sigma,
    Omega,
    PullbackLambda,
}

pub fn class_form(fs: &FormSpace, c: TwoFormClass) -> ExtElement {
    match c {
        TwoFormClass::Sigma => fs.sigma(),
        TwoFormClass::Omega => fs.omega(),
        TwoFormClass::PullbackLambda => fs.pullback_lambda(),
    }
}

pub fn wedge_class(fs: &FormSpace, c: TwoFormClass, a: &ExtElement) -> ExtElement {
    class_form(fs, c).wedge(a)
}

/// `Σ_j c_j ∂_{z_j}`, `j` in `1..=2n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConstantVectorField {
    pub coeffs: Vec<Scalar>,
}

impl ConstantVectorField {
    pub fn zero(n: usize) -> Self {
        ConstantVectorField { coeffs: vec![Scalar::zero(); 2 * n] }
    }

    /// `c ∂_{z_j}`.
    pub fn basis(n: usize, j: usize, c: Scalar) -> Self {
        let mut v = Self::zero(n);
        v.coeffs[j - 1] = c;
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

pub fn contract_vf(x: &ConstantVectorField, a: &ExtElement) -> ExtElement {
    let mut out = ExtElement::zero(a.n());
    for (j, c) in x.coeffs.iter().enumerate() {
        if !c.is_zero() {
            out = out.add(&a.contract(j + 1).scale(c));
        }
    }
    out
}

/// The constant field `ξ` with `ξ ⌟ σ = α` for a holomorphic 1-form `α`.
pub fn vector_field_of(fs: &FormSpace, alpha: &ExtElement) -> Result<ConstantVectorField, FormsError> {
    let m = 2 * fs.n();
    let mut rhs = vec![Scalar::zero(); m];
    for (s, c) in alpha.terms() {
        let e = s.elements();
        if e.len() != 1 || e[0] > m {
            return Err(FormsError::NotSolvable);
        }
        rhs[e[0] - 1] = c.clone();
    }
    let sigma = fs.sigma();
    let columns: Vec<Vec<Scalar>> = (1..=m)
        .map(|j| {
            let u = sigma.contract(j);
            (1..=m).map(|g| u.coeff(SubsetIndex::singleton(g))).collect()
        })
        .collect();
    let a = Matrix::from_columns(m, &columns);
    let sol = a.solve(&rhs).expect("shape").ok_or(FormsError::NotSolvable)?;
    Ok(ConstantVectorField { coeffs: sol })
}

/// `v(β)` for a base 1-form `β`: the unique constant field with `v(β) ⌟ σ = π*β`.
pub fn v_of_beta(fs: &FormSpace, beta: &ExtElement) -> Result<ConstantVectorField, FormsError> {
    let base = beta.terms().all(|(s, _)| s.len() == 1 && s.max_element() <= fs.n());
    if !base {
        return Err(FormsError::NotBaseSupported);
    }
    vector_field_of(fs, beta)
}

/// `θ = −ξ ⌟ ω`.
pub fn theta_of(fs: &FormSpace, xi: &ConstantVectorField) -> ExtElement {
    contract_vf(xi, &fs.omega()).scale(&int(-1))
}

/// True iff `ξ` is supported on the fiber directions `∂_{z_{n+1}}..∂_{z_{2n}}`.
pub fn tangency_check(n: usize, xi: &ConstantVectorField) -> bool {
    xi.coeffs[..n].iter().all(Zero::is_zero)
}

/// `Σ f_{j,k} ∂_{z_j} ⊗ dz̄_k`, stored as `coeffs[j-1][k-1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TValuedForm01 {
    pub coeffs: Vec<Vec<Scalar>>,
}

impl TValuedForm01 {
    pub fn zero(n: usize) -> Self {
        TValuedForm01 { coeffs: vec![vec![Scalar::zero(); 2 * n]; 2 * n] }
    }
}

/// `dz_J ∧ dz̄_K ↦ (−1)^p Σ f_{j,k} sgn(J, j) dz_{J∖j} ∧ dz̄_k ∧ dz̄_K`.
pub fn contract_tvalued(fs: &FormSpace, t: &TValuedForm01, a: &ExtElement) -> ExtElement {
    let m = 2 * fs.n();
    let hol_mask = (1u32 << m) - 1;
    let mut out = fs.zero_form();
    for (s, c) in a.terms() {
        let hol = SubsetIndex::from_bits(s.bits() & hol_mask);
        let anti = SubsetIndex::from_bits(s.bits() & !hol_mask);
        let p = hol.len() as i64;
        for j in hol.elements() {
            let sj = sgn(hol, j) * if p % 2 == 0 { 1 } else { -1 };
            for (k, f) in t.coeffs[j - 1].iter().enumerate() {
                if f.is_zero() {
                    continue;
                }
                let kbar = SubsetIndex::singleton(fs.dzbar(k + 1));
                let sk = wedge_sign(kbar, anti);
                if sk != 0 {
                    out.add_term(hol.without(j).union(kbar).union(anti), &(c * f * int(sj * sk)));
                }
            }
        }
    }
    out
}

/// `i(α)` for a (1,1)-form `α = Σ c_{a,k} dz_a ∧ dz̄_k`: `Σ c_{a,k} v(dz_a) ⊗ dz̄_k`.
pub fn i_of(fs: &FormSpace, alpha: &ExtElement) -> Result<TValuedForm01, FormsError> {
    let m = 2 * fs.n();
    let mut t = TValuedForm01::zero(fs.n());
    for (s, c) in alpha.terms() {
        let e = s.elements();
        if e.len() != 2 || e[0] > m || e[1] <= m {
            return Err(FormsError::NotSolvable);
        }
        let v = vector_field_of(fs, &fs.generator(e[0]))?;
        for (j, vj) in v.coeffs.iter().enumerate() {
            t.coeffs[j][e[1] - m - 1] += vj * c;
        }
    }
    Ok(t)
}

/// `Θ = −i(ω) ⌟ ω`.
pub fn big_theta(fs: &FormSpace) -> ExtElement {
    let io = i_of(fs, &fs.omega()).expect("omega has type (1,1)");
    contract_tvalued(fs, &io, &fs.omega()).scale(&int(-1))
}

/// `[c ∧, i(c) ⌟]`.
pub fn lefschetz_commutator(fs: &FormSpace, c: &ExtElement) -> Result<GradedOperator, FormsError> {
    let t = i_of(fs, c)?;
    Ok(fs.wedge_operator(c).commutator(&fs.tvalued_operator(&t)))
}

/// sl2 action of `σ ∧` with weight `p − n`.
pub fn sigma_action(fs: &FormSpace) -> Result<Sl2Action, FormsError> {
    let w = match fs.grading() {
        Grading::Bidegree => Weights::new(vec![1, 0], -(fs.n() as i64)),
        Grading::TriGraded => Weights::axis(3, 2),
    };
    Ok(complete_sl2(&fs.wedge_operator(&fs.sigma()), &w)?)
}

/// sl2 action of `ω ∧` with weight `p + q − 2n`.
pub fn omega_action(fs: &FormSpace) -> Result<Sl2Action, FormsError> {
    assert_eq!(fs.grading(), Grading::Bidegree, "total degree weight needs the bidegree grading");
    let w = Weights::new(vec![1, 1], -2 * fs.n() as i64);
    Ok(complete_sl2(&fs.wedge_operator(&fs.omega()), &w)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, passed: bool) {
        self.checks.push(Check { name: name.into(), passed });
    }

    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }
}

fn check_n(n: usize, max: usize) -> Result<(), FormsError> {
    if n == 0 || n > max {
        return Err(FormsError::OutOfRange(n));
    }
    Ok(())
}

/// On `⋀(Q^{2n})` under `σ`: `w(σ^j α / j!) = (−1)^j σ^{k−j} α / (k−j)!` for every primitive `α`
/// of weight `−k`, plus the conjugation identities of the Weil element.
pub fn verify_weil_formulas(n: usize) -> Result<Report, FormsError> {
    check_n(n, 3)?;
    let fs = FormSpace::holomorphic(n);
    let act = sigma_action(&fs)?;
    let w = weil_element(&act);
    let mut rep = Report::default();
    rep.push("w H w^-1 = -H, w X w^-1 = -Y, w Y w^-1 = -X", w.check_identities());
    let sigma = fs.sigma();
    let pow = |a: &ExtElement, j: i64| (0..j).fold(a.clone(), |acc, _| sigma.wedge(&acc));
    for p in 0..=n {
        let k = (n - p) as i64;
        let d = vec![p as i64, 0];
        let xk1 = act.x().pow(k as usize + 1);
        let block = xk1.block_or_zero(&d, &[p as i64 + 2 * (k + 1), 0]);
        let ker = block.kernel_basis();
        let mut ok = true;
        for c in 0..ker.cols() {
            let alpha = fs.from_vector(&GradedVector::homogeneous(d.clone(), ker.column(c)));
            for j in 0..=k {
                let lhs = fs.apply(&w.w, &pow(&alpha, j).scale(&(Scalar::one() / factorial(j as usize))));
                let sign = if j % 2 == 0 { 1 } else { -1 };
                let rhs = pow(&alpha, k - j).scale(&(int(sign) / factorial((k - j) as usize)));
                ok &= lhs == rhs;
            }
        }
        rep.push(format!("Weil formula on primitives of degree {p} ({} of them)", ker.cols()), ok);
    }
    Ok(rep)
}

/// `w_σ ∘ (π*β ∧) = (v(β) ⌟) ∘ w_σ` on the full form space, for every base generator.
pub fn verify_weil_exchange_sigma(n: usize) -> Result<Report, FormsError> {
    check_n(n, 3)?;
    let fs = FormSpace::new(n);
    let w = weil_element(&sigma_action(&fs)?);
    let mut rep = Report::default();
    for b in 1..=n {
        let beta = fs.base_form(b);
        let xi = v_of_beta(&fs, &beta)?;
        let lhs = w.w.compose(&fs.wedge_operator(&beta));
        let rhs = fs.contraction_operator(&xi).compose(&w.w);
        rep.push(format!("w_sigma exchanges dz_{b} wedge and v(dz_{b}) contraction"), lhs == rhs);
    }
    Ok(rep)
}

/// `w_ω ∘ (ξ ⌟) = (θ ∧) ∘ w_ω` with `ξ = v(β)`, `θ = −ξ ⌟ ω`.
pub fn verify_weil_exchange_omega(n: usize) -> Result<Report, FormsError> {
    check_n(n, 2)?;
    let fs = FormSpace::new(n);
    let w = weil_element(&omega_action(&fs)?);
    let mut rep = Report::default();
    for b in 1..=n {
        let xi = v_of_beta(&fs, &fs.base_form(b))?;
        let theta = theta_of(&fs, &xi);
        let lhs = w.w.compose(&fs.contraction_operator(&xi));
        let rhs = fs.wedge_operator(&theta).compose(&w.w);
        rep.push(format!("w_omega exchanges v(dz_{b}) contraction and theta wedge"), lhs == rhs);
    }
    Ok(rep)
}

/// `θ∧ = [ω∧, ξ⌟]`, `[ω∧, i(ω)⌟] = Θ∧` and `[π*λ∧, i(π*λ)⌟] = 0`.
pub fn verify_commutators(n: usize) -> Result<Report, FormsError> {
    check_n(n, 2)?;
    let fs = FormSpace::new(n);
    let omega = fs.wedge_operator(&fs.omega());
    let mut rep = Report::default();
    for b in 1..=n {
        let xi = v_of_beta(&fs, &fs.base_form(b))?;
        let lhs = fs.wedge_operator(&theta_of(&fs, &xi));
        rep.push(format!("theta wedge = [omega, v(dz_{b})] (b = {b})"), lhs == omega.commutator(&fs.contraction_operator(&xi)));
    }
    let theta_big = fs.wedge_operator(&big_theta(&fs));
    rep.push("[omega, i(omega)] = Theta wedge", lefschetz_commutator(&fs, &fs.omega())? == theta_big);
    rep.push("[lambda, i(lambda)] = 0", lefschetz_commutator(&fs, &fs.pullback_lambda())?.is_zero());
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions_of_bidegree_pieces() {
        let fs = FormSpace::new(1);
        assert_eq!(fs.dim(), 16);
        assert_eq!(fs.space().dim(&[1, 1]), 4);
        assert_eq!(FormSpace::new(2).space().dim(&[2, 1]), 24);
    }

    #[test]
    fn contraction_sign() {
        let fs = FormSpace::new(1);
        let a = fs.generator(1).wedge(&fs.generator(2));
        let x = ConstantVectorField::basis(1, 2, int(1));
        assert_eq!(contract_vf(&x, &a), fs.generator(1).scale(&int(-1)));
        let x1 = ConstantVectorField::basis(1, 1, int(1));
        assert!(contract_vf(&x1, &fs.generator(fs.dzbar(1))).is_zero());
    }

    #[test]
    fn v_of_beta_and_theta_in_one_dimension() {
        let fs = FormSpace::new(1);
        let xi = v_of_beta(&fs, &fs.base_form(1)).unwrap();
        assert_eq!(xi, ConstantVectorField::basis(1, 2, int(-1)));
        assert_eq!(theta_of(&fs, &xi), fs.generator(fs.dzbar(2)));
        assert!(tangency_check(1, &xi));
        assert!(!tangency_check(1, &ConstantVectorField::basis(1, 1, int(1))));
        assert_eq!(v_of_beta(&fs, &fs.generator(2)), Err(FormsError::NotBaseSupported));
    }
}

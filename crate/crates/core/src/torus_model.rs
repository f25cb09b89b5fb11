//! The constant-coefficient Lagrangian fibration `M = C^{2n}/Λ → B = C^n/Λ'`: the
//! perverse summands, the complexes `G_{i,k}`, the tri-graded cohomology `H^{i,j,k}`,
//! and the operators `ω₂`, `σ₁`, `λ` acting on it.
//!
//! `H^{i,j,k}` is spanned by the forms with fiber degree `n+i`, base degree `n+j` and
//! holomorphic degree `n+k`. `G_{i,k}` is realized twice: through the de Rham pieces of
//! a graded `Sym(T_B)`-module, and as forms without base antiholomorphic factors.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::bgg::{dr_graded_piece, BggError, SymModule};
use crate::exact_linalg::{int, Matrix};
use crate::forms_calculus::{contract_vf, v_of_beta, FormSpace, FormsError, Report};
use crate::gradedcat::{ChainComplex, Degree, GradedOperator, MultiGradedSpace};
use crate::multilinear::{binomial, ExtElement, SubsetIndex};
use crate::serre::{build_sl3, build_sl4, check_reflection_identity, check_serre, CartanMatrix, SerreError, SerreReport};
use crate::sl2::{complete_sl2, primitivity_degree, weil_element, Sl2Action, Sl2Error, Weights};

pub const MAX_N: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TorusError {
    #[error("n = {0} is out of range 1..=3")]
    OutOfRange(usize),
    #[error(transparent)]
    Forms(#[from] FormsError),
    #[error(transparent)]
    Sl2(#[from] Sl2Error),
    #[error(transparent)]
    Bgg(#[from] BggError),
    #[error(transparent)]
    Serre(#[from] SerreError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    /// `M` a 2n-dimensional torus over an n-dimensional torus.
    Torus,
    /// `A × B → B`; with constant coefficients this is the same computation, with `σ`
    /// pairing the generators of `A` to those of `B`.
    Product,
}

#[derive(Clone, Debug)]
pub struct TorusFibration {
    n: usize,
    kind: ModelKind,
    forms: FormSpace,
}

impl TorusFibration {
    pub fn build(n: usize) -> Result<Self, TorusError> {
        Self::with_kind(n, ModelKind::Torus)
    }

    pub fn product(n: usize) -> Result<Self, TorusError> {
        Self::with_kind(n, ModelKind::Product)
    }

    fn with_kind(n: usize, kind: ModelKind) -> Result<Self, TorusError> {
        if n == 0 || n > MAX_N {
            return Err(TorusError::OutOfRange(n));
        }
        let t = TorusFibration { n, kind, forms: FormSpace::tri_graded(n) };
        debug_assert!(t.is_lagrangian());
        Ok(t)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn forms(&self) -> &FormSpace {
        &self.forms
    }

    /// Every term of `σ` pairs one base generator with one fiber generator.
    pub fn is_lagrangian(&self) -> bool {
        self.forms.sigma().terms().all(|(s, _)| {
            let [a, b, c, d] = self.forms.type_counts(*s);
            (a, b, c, d) == (1, 1, 0, 0)
        })
    }

    pub fn omega2(&self) -> GradedOperator {
        self.forms.wedge_operator(&self.forms.omega_fiber())
    }

    pub fn sigma1(&self) -> GradedOperator {
        self.forms.wedge_operator(&self.forms.sigma())
    }

    pub fn lambda(&self) -> GradedOperator {
        self.forms.wedge_operator(&self.forms.pullback_lambda())
    }

    /// `ω₂` with weight `i`.
    pub fn omega2_action(&self) -> Result<Sl2Action, TorusError> {
        Ok(complete_sl2(&self.omega2(), &Weights::axis(3, 0))?)
    }

    /// `σ₁` with weight `k`.
    pub fn sigma1_action(&self) -> Result<Sl2Action, TorusError> {
        Ok(complete_sl2(&self.sigma1(), &Weights::axis(3, 2))?)
    }

    /// `λ` with weight `j`.
    pub fn lambda_action(&self) -> Result<Sl2Action, TorusError> {
        Ok(complete_sl2(&self.lambda(), &Weights::axis(3, 1))?)
    }

    /// The graded `Sym(T_B)`-module `gr^F 𝒫_i`: `gr_{-b}` is spanned by the fiber classes with
    /// `b` holomorphic and `n+i-b` antiholomorphic factors. The family is constant, so `T_B`
    /// acts by zero.
    pub fn perverse_summand(&self, i: i64) -> SymModule {
        let n = self.n as i64;
        let dims = (0..=n)
            .map(|b| (-b, (binomial(n, b) * binomial(n, n + i - b)) as usize))
            .filter(|&(_, d)| d > 0);
        SymModule::with_zero_action(self.n, dims)
    }

    /// `G_{i,k} = gr_{-k} DR(𝒫_i)⟦−i⟧`.
    pub fn g_complex(&self, i: i64, k: i64) -> Result<ChainComplex, TorusError> {
        Ok(dr_graded_piece(&self.perverse_summand(i), -k)?.shift(-i))
    }

    /// Homology dimensions of `G_{i,k}` by degree.
    pub fn g_profile(&self, i: i64, k: i64) -> Result<Profile, TorusError> {
        Ok(profile_of(&self.g_complex(i, k)?))
    }

    /// The same profile counted on forms: `G_{i,k}` in degree `m` is spanned by the forms with
    /// fiber degree `n+i`, holomorphic degree `n+k`, `n+m-i` base holomorphic and no base
    /// antiholomorphic factors.
    pub fn g_profile_from_forms(&self, i: i64, k: i64) -> Profile {
        let n = self.n as i64;
        let mut out = Profile::new();
        for s in self.g_basis_all(i, k) {
            let [a, ..] = self.forms.type_counts(s);
            *out.entry(a - n + i).or_default() += 1;
        }
        out
    }

    fn g_basis_all(&self, i: i64, k: i64) -> Vec<SubsetIndex> {
        let n = self.n as i64;
        (-n..=n)
            .flat_map(|j| self.forms.basis(&[i, j, k]).to_vec())
            .filter(|s| self.forms.type_counts(*s)[2] == 0)
            .collect()
    }

    /// Positions inside the component `(i, j, k)` of the forms without base antiholomorphic factors.
    fn g_positions(&self, d: &[i64]) -> Vec<usize> {
        self.forms
            .basis(d)
            .iter()
            .enumerate()
            .filter(|(_, s)| self.forms.type_counts(**s)[2] == 0)
            .map(|(p, _)| p)
            .collect()
    }

    pub fn tri_grading(&self) -> TriGradedCohomology {
        TriGradedCohomology { n: self.n, space: self.forms.space().clone() }
    }

    /// `dim H^{i+j}(B, G_{i,k})`, from the profile of `G_{i,k}` and `H^m(B, 𝒪_B) = ⋀^m`.
    pub fn hypercohomology_dim(&self, i: i64, k: i64, total: i64) -> Result<usize, TorusError> {
        let n = self.n as i64;
        let p = self.g_profile(i, k)?;
        Ok(p.iter().map(|(&m, &d)| d * binomial(n, total - m) as usize).sum())
    }
}

pub type Profile = BTreeMap<i64, usize>;

pub fn profile_of(c: &ChainComplex) -> Profile {
    let h = c.homology();
    h.dims.components().filter(|(_, d)| *d > 0).map(|(deg, d)| (deg[c.axis()], d)).collect()
}

/// Dimensions of `H^{i,j,k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TriGradedCohomology {
    pub n: usize,
    pub space: MultiGradedSpace,
}

impl TriGradedCohomology {
    pub fn dim(&self, i: i64, j: i64, k: i64) -> usize {
        self.space.dim(&[i, j, k])
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (&Degree, usize)> {
        self.space.components().filter(|(_, d)| *d > 0)
    }
}

pub fn in_dodecahedron(n: usize, d: &[i64]) -> bool {
    let (i, j, k) = (d[0], d[1], d[2]);
    [i, j, k, i - k, j - k, i + j - k].iter().all(|x| x.abs() <= n as i64)
}

pub fn check_dodecahedron(c: &TriGradedCohomology) -> bool {
    c.nonzero().all(|(d, _)| in_dodecahedron(c.n, d))
}

/// Lattice points of the region where three independent bounding planes meet.
pub fn dodecahedron_vertices(n: usize) -> Vec<Degree> {
    let normals: [[i64; 3]; 6] = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 0, -1], [0, 1, -1], [1, 1, -1]];
    let r = n as i64;
    let mut out = Vec::new();
    for i in -r..=r {
        for j in -r..=r {
            for k in -r..=r {
                let d = [i, j, k];
                if !in_dodecahedron(n, &d) {
                    continue;
                }
                let tight: Vec<Vec<i64>> = normals
                    .iter()
                    .filter(|v| (v[0] * i + v[1] * j + v[2] * k).abs() == r)
                    .map(|v| v.to_vec())
                    .collect();
                if tight.len() >= 3 && Matrix::from_rows(tight.iter().map(|v| v.iter().map(|&x| int(x)).collect()).collect()).unwrap().rank() == 3 {
                    out.push(d.to_vec());
                }
            }
        }
    }
    out
}

/// Vertices at which `H^{i,j,k}` is nonzero.
pub fn attained_vertices(c: &TriGradedCohomology) -> Vec<Degree> {
    dodecahedron_vertices(c.n).into_iter().filter(|d| c.dim(d[0], d[1], d[2]) > 0).collect()
}

/// `(i, k) ↦` homology profile of `G_{i,k}`, for the nonzero complexes.
pub fn hexagon_table(t: &TorusFibration) -> Result<BTreeMap<(i64, i64), Profile>, TorusError> {
    let n = t.n as i64;
    let mut out = BTreeMap::new();
    for i in -n..=n {
        for k in -n..=n {
            let p = t.g_profile(i, k)?;
            if !p.is_empty() {
                out.insert((i, k), p);
            }
        }
    }
    Ok(out)
}

/// Amplitude bound, `G_{i,k} ≃ G_{k,i}` profiles, duality `G_{−i,−k}` in degree `m` against
/// `G_{i,k}` in degree `−m−n`, and agreement of the two constructions of `G_{i,k}`.
pub fn check_hexagon(t: &TorusFibration) -> Result<Report, TorusError> {
    let n = t.n as i64;
    let mut rep = Report::default();
    let (mut amp, mut sym, mut dual, mut routes, mut shape) = (true, true, true, true, true);
    for i in -n - 1..=n + 1 {
        for k in -n - 1..=n + 1 {
            let p = t.g_profile(i, k)?;
            let lo = -n + i.max(k).max(i + k);
            let hi = i.min(k).min(i + k);
            amp &= p.keys().all(|&m| lo <= m && m <= hi);
            shape &= p.is_empty() || (i.abs() <= n && k.abs() <= n && (i - k).abs() <= n);
            sym &= p == t.g_profile(k, i)?;
            let mirrored: Profile = p.iter().map(|(&m, &d)| (-m - n, d)).collect();
            dual &= t.g_profile(-i, -k)? == mirrored;
            routes &= p == t.g_profile_from_forms(i, k);
        }
    }
    rep.push("G_{i,k} lives in degrees -n+max(i,k,i+k) ..= min(i,k,i+k)", amp);
    rep.push("G_{i,k} is exact outside the hexagon", shape);
    rep.push("G_{i,k} and G_{k,i} have equal profiles", sym);
    rep.push("duality exchanges G_{i,k} and G_{-i,-k}", dual);
    rep.push("de Rham pieces agree with the form count", routes);
    Ok(rep)
}

/// Tri-graded checks: dodecahedron, duality, Hodge numbers, the three relative Hard
/// Lefschetz isomorphisms and `H^{i,j,k} = H^{i+j}(B, G_{i,k})`.
pub fn check_tri_graded(t: &TorusFibration) -> Result<Report, TorusError> {
    let c = t.tri_grading();
    let n = t.n as i64;
    let mut rep = Report::default();
    rep.push("H^{i,j,k} vanishes outside the rhombic dodecahedron", check_dodecahedron(&c));
    rep.push("dim H^{i,j,k} = dim H^{-i,-j,-k}", c.nonzero().all(|(d, m)| c.dim(-d[0], -d[1], -d[2]) == m));
    let mut via_g = true;
    for i in -n..=n {
        for j in -n..=n {
            for k in -n..=n {
                via_g &= t.hypercohomology_dim(i, k, i + j)? == c.dim(i, j, k);
            }
        }
    }
    rep.push("H^{i,j,k} = H^{i+j}(B, G_{i,k})", via_g);
    let hodge = hodge_numbers(t.n);
    let recovered = hodge.iter().all(|(&(p, q), &h)| {
        let (k, j) = (p - n, q - n);
        (-n..=n).map(|i| c.dim(i, j + k - i, k)).sum::<usize>() == h
    });
    rep.push("h^{n+k,n+j} = sum_i dim H^{i,j+k-i,k}", recovered);
    rep.push("h^{p,q} = h^{q,p}", hodge.iter().all(|(&(p, q), h)| hodge[&(q, p)] == *h));
    rep.push("omega2^i: H^{-i,j,k} -> H^{i,j,k+i} is an isomorphism", lefschetz_isos(&t.omega2(), &c, [2, 0, 1], 0));
    rep.push("sigma1^k: H^{i,j,-k} -> H^{i+k,j+k,k} is an isomorphism", lefschetz_isos(&t.sigma1(), &c, [1, 1, 2], 2));
    rep.push("lambda^j: H^{i,-j,k} -> H^{i,j,k+j} is an isomorphism", lefschetz_isos(&t.lambda(), &c, [0, 2, 1], 1));
    Ok(rep)
}

/// `op^w` maps weight `−w` to weight `w` isomorphically, along the given axis.
fn lefschetz_isos(op: &GradedOperator, c: &TriGradedCohomology, shift: [i64; 3], axis: usize) -> bool {
    let n = c.n as i64;
    (1..=2 * n).all(|w| {
        let pw = op.pow(w as usize);
        c.space.degrees().filter(|d| d[axis] == -w).all(|d| {
            let t: Degree = (0..3).map(|a| d[a] + w * shift[a]).collect();
            pw.block_or_zero(d, &t).is_isomorphism()
        })
    })
}

/// `h^{p,q}(M) = C(2n,p) C(2n,q)`, counted on forms.
pub fn hodge_numbers(n: usize) -> BTreeMap<(i64, i64), usize> {
    let fs = FormSpace::new(n);
    fs.space().components().map(|(d, m)| ((d[0], d[1]), m)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub a: bool,
    pub b: bool,
    pub c: bool,
}

/// (a) `G_{i,k} ≃ G_{k,i}`; (b) `⊕_i G_{i,k}⟦i+k⟧ ≃ ⊕_i G_{k,i}⟦i+k⟧` for each `k`;
/// (c) `σ₁^k: G_{i,−k} → G_{i+k,k}⟦2k⟧` is an isomorphism for `k ≥ 1`.
pub fn check_equivalence_abc(t: &TorusFibration) -> Result<EquivalenceReport, TorusError> {
    let n = t.n as i64;
    let mut a = true;
    for i in -n..=n {
        for k in -n..=n {
            a &= t.g_profile(i, k)? == t.g_profile(k, i)?;
        }
    }
    let mut b = true;
    for k in -n..=n {
        let (mut lhs, mut rhs) = (Profile::new(), Profile::new());
        for i in -n..=n {
            for (m, d) in t.g_profile(i, k)? {
                *lhs.entry(m - i - k).or_default() += d;
            }
            for (m, d) in t.g_profile(k, i)? {
                *rhs.entry(m - i - k).or_default() += d;
            }
        }
        b &= lhs == rhs;
    }
    Ok(EquivalenceReport { a, b, c: check_symplectic_hl(t) })
}

/// `σ₁^k: G_{i,−k} → G_{i+k,k}⟦2k⟧` on the form model of `G`, degree by degree.
pub fn check_symplectic_hl(t: &TorusFibration) -> bool {
    let n = t.n as i64;
    let s = t.sigma1();
    (1..=n).all(|k| {
        let sk = s.pow(k as usize);
        (-n..=n).all(|i| {
            (-2 * n..=2 * n).all(|m| {
                let src = [i, m - i, -k];
                let dst = [i + k, m - i + k, k];
                let (rows, cols) = (t.g_positions(&dst), t.g_positions(&src));
                if rows.len() != cols.len() {
                    return false;
                }
                let block = sk.block_or_zero(&src, &dst).select_columns(&cols);
                block.transpose().select_columns(&rows).is_isomorphism()
            })
        })
    })
}

/// `R^j π_* 𝒪_M`: forms with only fiber antiholomorphic factors, by degree.
pub fn matsushita_dims(t: &TorusFibration) -> Vec<usize> {
    let mut out = vec![0; t.n + 1];
    for bits in 0..(1u32 << t.forms.gens()) {
        let [a, b, c, d] = t.forms.type_counts(SubsetIndex::from_bits(bits));
        if a == 0 && b == 0 && c == 0 {
            out[d as usize] += 1;
        }
    }
    out
}

/// `rank gr_{−n} 𝒫_{n−k}` for `k = 0..=n`.
pub fn lowest_piece_ranks(t: &TorusFibration) -> Vec<usize> {
    let n = t.n as i64;
    (0..=n).map(|k| t.perverse_summand(n - k).dim(-n)).collect()
}

/// `gr^F 𝒫_i` is generated in degree `−i`.
pub fn check_generation(t: &TorusFibration) -> bool {
    let n = t.n as i64;
    (-n..=n).all(|i| t.perverse_summand(i).generated_below(-i + 1))
}

/// Components of an operator by the shift in `i`.
pub fn decompose_operator(op: &GradedOperator) -> BTreeMap<i64, GradedOperator> {
    let mut out: BTreeMap<i64, GradedOperator> = BTreeMap::new();
    for ((s, t), m) in op.blocks() {
        out.entry(t[0] - s[0])
            .or_insert_with(|| GradedOperator::zero(op.source(), op.target()))
            .insert_block(s.clone(), t.clone(), m.clone());
    }
    out
}

/// `σ₂ = 0`, `(π*β)_k = 0` for `k ≠ 0`, `ξ_k = 0` for `k ≠ −1` with `(ad ω₂)² ξ_{−1} = 0`.
pub fn check_components(t: &TorusFibration) -> Result<Report, TorusError> {
    let mut rep = Report::default();
    let sigma = decompose_operator(&t.sigma1());
    rep.push("sigma_2 = 0", !sigma.contains_key(&2));
    rep.push("sigma = sigma_1", sigma.keys().eq([1].iter()));
    let w2 = t.omega2_action()?;
    for b in 1..=t.n {
        let beta = t.forms.base_form(b);
        let pb = decompose_operator(&t.forms.wedge_operator(&beta));
        rep.push(format!("(pi*dt_{b})_k = 0 for k != 0"), pb.keys().eq([0].iter()));
        let xi = t.forms.contraction_operator(&v_of_beta(&t.forms, &beta)?);
        let parts = decompose_operator(&xi);
        rep.push(format!("v(dt_{b})_k = 0 for k != -1"), parts.keys().eq([-1].iter()));
        let prim = primitivity_degree(&xi, &w2)?;
        rep.push(format!("(ad omega2)^2 v(dt_{b}) = 0"), prim.nilpotency <= 2);
    }
    Ok(rep)
}

/// The conjugation identities along `w₁ w₂ w₁`, with `w₁` from `ω₂` and `w₂` from `σ₁`.
pub fn weil_chain_conjugation(t: &TorusFibration, beta: &ExtElement) -> Result<Report, TorusError> {
    let (a1, a2) = (t.omega2_action()?, t.sigma1_action()?);
    let (w1, w2) = (weil_element(&a1), weil_element(&a2));
    let pb = t.forms.wedge_operator(beta);
    let v = t.forms.contraction_operator(&v_of_beta(&t.forms, beta)?);
    let f1 = a1.x().commutator(&v);
    let mut rep = Report::default();
    rep.push("Ad w1 (pi*beta) = pi*beta", w1.conjugate(&pb)? == pb);
    rep.push("Ad w1 (v(beta)) = [X1, v(beta)] = f(beta)_1", w1.conjugate(&v)? == f1);
    let ad_w2 = w2.conjugate(&pb)?;
    rep.push("Ad w2 (pi*beta) = -[Y2, pi*beta] = v(beta)", ad_w2 == a2.y().commutator(&pb).neg() && ad_w2 == v);
    let chain = w1.conjugate(&w2.conjugate(&w1.conjugate(&pb)?)?)?;
    rep.push("w1 w2 w1 carries pi*beta to f(beta)_1", chain == f1);
    Ok(rep)
}

/// Sanity check on the contraction used above: `v(β) ⌟ π*(dt_j) = 0`.
pub fn xi_is_tangent(t: &TorusFibration, beta: &ExtElement) -> Result<bool, TorusError> {
    let xi = v_of_beta(&t.forms, beta)?;
    Ok((1..=t.n).all(|j| contract_vf(&xi, &t.forms.base_form(j)).is_zero()))
}

/// `e = (ω₂, Y_{σ₁})`, `f = (Y_{ω₂}, σ₁)`.
pub fn serre_sl3(t: &TorusFibration) -> Result<(SerreReport, bool), TorusError> {
    let sys = build_sl3(&t.omega2_action()?, &t.sigma1_action()?)?;
    Ok((check_serre(&sys, &CartanMatrix::a2())?, check_reflection_identity(&sys)?))
}

pub fn serre_sl4(t: &TorusFibration) -> Result<SerreReport, TorusError> {
    let sys = build_sl4(&t.omega2_action()?, &t.sigma1_action()?, &t.lambda_action()?)?;
    Ok(check_serre(&sys, &CartanMatrix::a3())?)
}

/// `[Y_{ω₂}, Y_{σ₁}] = 0` and `[Y_λ, Y_{σ₁}] = 0`.
pub fn lowering_operators_commute(t: &TorusFibration) -> Result<(bool, bool), TorusError> {
    let (w, s, l) = (t.omega2_action()?, t.sigma1_action()?, t.lambda_action()?);
    Ok((w.y().commutator(s.y()).is_zero(), l.y().commutator(s.y()).is_zero()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_dimensions() {
        let c = TorusFibration::build(1).unwrap().tri_grading();
        assert_eq!(c.dim(0, 0, 0), 2);
        assert_eq!(c.dim(1, -1, 0), 1);
        assert_eq!(c.dim(-1, 1, 0), 1);
        assert_eq!(c.dim(1, 1, 0), 0);
    }

    #[test]
    fn out_of_range() {
        assert_eq!(TorusFibration::build(0).unwrap_err(), TorusError::OutOfRange(0));
        assert!(TorusFibration::build(4).is_err());
    }
}

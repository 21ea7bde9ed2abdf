//! Standard forms for finite-order automorphisms `π_A` of `u₂(H_K)`.
//!
//! The input operator `A` acts on `C^d` (real inputs have real entries,
//! quaternionic inputs commute with `σ̃ = Ω∘conj`). The output certificate
//! gives a unitary basis change `U`, a standard twist `ψ` and a functional
//! `μ` such that `U⁻¹AU = U₁·B_ψ` with `U₁ = exp(−2πi·μ♯)` diagonal.

use crate::affine::{lars_contains, AffineRoot, AffinisationSpec, ExtCartanVector, LarsKind};
use crate::cyclo::CycScalar;
use crate::loopalg::model::omega;
use crate::loopalg::{standard_model, LoopContext, LoopError, MatrixAlgebra, Twist, TwistOp};
use crate::matrix::CMat;
use crate::rational::{lcm_u64, q, qf, Q};
use crate::rootdata::{Functional, Root};
use crate::weyl::reflect_affine;
use num_integer::Integer;
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeSet;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AutError {
    #[error("malformed operator: {0}")]
    Shape(String),
    #[error("operator is not unitary")]
    NotUnitary,
    #[error("antiunitary operators are only allowed over C")]
    AntiunitaryField,
    #[error("real operator has non-real entries")]
    NotReal,
    #[error("quaternionic operator does not commute with σ̃")]
    NotQuaternionic,
    #[error("B^{0} is not a scalar: no finite projective order {0}")]
    NotFiniteOrder(u64),
    #[error("declared order {declared} but the projective order is {actual}")]
    OrderMismatch { declared: u64, actual: u64 },
    #[error("B^N is a scalar that is not an admissible root of unity")]
    BadScalar,
    #[error("operator violates A^{0} = id")]
    OrderViolated(u64),
    #[error("no normalisation in the working field: {0}")]
    Normalization(String),
    #[error("normalization needs the larger conductor {0}")]
    NeedsConductor(u64),
    #[error("standard form has rank {0}; at least 2 is required")]
    RankTooSmall(usize),
    #[error(transparent)]
    Loop(#[from] LoopError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Field {
    R,
    C,
    H,
}

/// The four operator families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    ComplexUnitary,
    Quaternionic,
    Real,
    ComplexAntiunitary,
}

impl Family {
    pub const ALL: [Family; 4] =
        [Family::ComplexUnitary, Family::Quaternionic, Family::Real, Family::ComplexAntiunitary];
}

/// An operator on `C^dim`; antiunitary operators are `matrix ∘ conj`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorSpec {
    pub field: Field,
    #[serde(default)]
    pub antiunitary: bool,
    pub dim: usize,
    #[serde(rename = "order", alias = "declared_order")]
    pub declared_order: u64,
    pub matrix: CMat,
}

impl OperatorSpec {
    pub fn new(field: Field, antiunitary: bool, declared_order: u64, matrix: CMat) -> Result<Self, AutError> {
        let s = OperatorSpec { field, antiunitary, dim: matrix.rows(), declared_order, matrix };
        s.validate()?;
        Ok(s)
    }

    pub fn family(&self) -> Family {
        match (self.field, self.antiunitary) {
            (Field::C, true) => Family::ComplexAntiunitary,
            (Field::C, false) => Family::ComplexUnitary,
            (Field::R, _) => Family::Real,
            (Field::H, _) => Family::Quaternionic,
        }
    }

    pub fn validate(&self) -> Result<(), AutError> {
        let m = &self.matrix;
        if !m.is_square() || m.rows() != self.dim || self.dim == 0 {
            return Err(AutError::Shape(format!("matrix is {}x{}, dim is {}", m.rows(), m.cols(), self.dim)));
        }
        if self.declared_order == 0 {
            return Err(AutError::Shape("order must be positive".into()));
        }
        if self.antiunitary && self.field != Field::C {
            return Err(AutError::AntiunitaryField);
        }
        if !m.is_unitary() {
            return Err(AutError::NotUnitary);
        }
        match self.field {
            Field::R if m.conj() != *m => Err(AutError::NotReal),
            Field::H => {
                if self.dim % 2 == 1 {
                    return Err(AutError::Shape("quaternionic operators need even dim".into()));
                }
                let om = omega(self.dim / 2, m.conductor());
                if m.mul(&om) != om.mul(&m.conj()) {
                    return Err(AutError::NotQuaternionic);
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// `B^k` as a linear map, `None` when it is antilinear.
    fn linear_power(&self, k: u64) -> Option<CMat> {
        if !self.antiunitary {
            return Some(self.matrix.pow(k));
        }
        (k % 2 == 0).then(|| self.matrix.mul(&self.matrix.conj()).pow(k / 2))
    }

    /// The twist `π_A` on `k_C` with the given period.
    pub fn twist(&self, period: u64) -> Twist {
        let op = if self.antiunitary {
            TwistOp::Antiunitary(self.matrix.clone())
        } else {
            TwistOp::Unitary(self.matrix.clone())
        };
        Twist::new(op, period)
    }

    /// The form cutting out `k_C` in the original coordinates.
    pub fn ambient_form(&self) -> Option<CMat> {
        let l = self.matrix.conductor();
        match self.field {
            Field::C => None,
            Field::R => Some(CMat::identity(self.dim, l)),
            Field::H => Some(omega(self.dim / 2, l)),
        }
    }

    fn lift(&self, l: u64) -> OperatorSpec {
        OperatorSpec { matrix: self.matrix.lift(l), ..self.clone() }
    }

    fn apply(&self, v: &CMat) -> CMat {
        if self.antiunitary {
            self.matrix.mul(&v.conj())
        } else {
            self.matrix.mul(v)
        }
    }
}

/// An operator with `A^order = id` and the scalar relating it to the input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LiftedOperator {
    /// `A = scalar · B`, with `order` the exact order of `A`.
    pub operator: OperatorSpec,
    pub scalar: CycScalar,
    pub projective_order: u64,
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn exact_order(op: &OperatorSpec, multiple: u64) -> u64 {
    let mut n = multiple;
    for p in prime_factors(multiple) {
        while n % p == 0 && op.linear_power(n / p).map(|m| m.is_identity()).unwrap_or(false) {
            n /= p;
        }
    }
    n
}

/// Finds `A = ν·B` of finite order with `π_A = π_B`.
///
/// The declared order must be the projective order of `B`: the least `N`
/// with `B^N` scalar.
pub fn finite_order_lift(spec: &OperatorSpec) -> Result<LiftedOperator, AutError> {
    spec.validate()?;
    let n = spec.declared_order;
    let l0 = lcm_u64(spec.matrix.conductor(), 8);
    let b = spec.lift(l0);
    let scalar_at = |k: u64| b.linear_power(k).and_then(|m| m.as_scalar());
    let lambda = scalar_at(n).ok_or(AutError::NotFiniteOrder(n))?;
    for p in prime_factors(n) {
        if scalar_at(n / p).is_some() {
            let actual = (1..n).find(|k| n % k == 0 && scalar_at(*k).is_some()).unwrap();
            return Err(AutError::OrderMismatch { declared: n, actual });
        }
    }
    let (scalar, a) = if spec.family() == Family::ComplexUnitary {
        let k = (0..l0 as i64).find(|&k| CycScalar::zeta_pow(l0, k) == lambda).ok_or(AutError::BadScalar)?;
        // ν = exp(−2πi·k/(l0·N)).
        let den = l0 as i64 * n as i64;
        let g = k.gcd(&den);
        let (num, den) = (k / g, den / g);
        let l1 = lcm_u64(l0, den as u64);
        let nu = CycScalar::root_of_unity(l1, -num, den);
        let a = b.lift(l1);
        let m = a.matrix.scale(&nu);
        (nu, OperatorSpec { matrix: m, ..a })
    } else {
        let one = CycScalar::one(l0);
        if lambda != one && lambda != CycScalar::from_i64(l0, -1) {
            return Err(AutError::BadScalar);
        }
        (one, b)
    };
    let order = exact_order(&a, 2 * n);
    let l = lcm_u64(lcm_u64(a.matrix.conductor(), 8), 2 * order);
    let operator = OperatorSpec { declared_order: order, ..a.lift(l) };
    Ok(LiftedOperator { operator, scalar: scalar.lift(l), projective_order: n })
}

/// Spectral projectors `P_k = (1/M)·Σ_j ζ_M^{−kj} A^j` of a unitary `A`
/// with `A^M = id`; only nonzero projectors are returned.
pub fn eigensplit(a: &CMat, m: u64) -> Result<Vec<(u64, CMat)>, AutError> {
    let l = lcm_u64(lcm_u64(a.conductor(), m), 4);
    let a = a.lift(l);
    let mut powers = vec![CMat::identity(a.rows(), l)];
    for _ in 1..m {
        powers.push(powers.last().unwrap().mul(&a));
    }
    if !powers.last().unwrap().mul(&a).is_identity() {
        return Err(AutError::OrderViolated(m));
    }
    let mut out = Vec::new();
    for k in 0..m {
        let mut p = CMat::zeros(a.rows(), a.cols(), l);
        for (j, pw) in powers.iter().enumerate() {
            p = p.add(&pw.scale(&CycScalar::root_of_unity(l, -((k * j as u64) as i64), m as i64)));
        }
        let p = p.scale_q(&qf(1, m as i64));
        if !p.is_zero() {
            out.push((k, p));
        }
    }
    Ok(out)
}

fn rank_of(p: &CMat) -> usize {
    let t = p.trace().as_rational().expect("projector trace is rational");
    crate::rational::to_i64(&t).expect("integral trace") as usize
}

fn proj_coeff(v: &CMat, u: &CMat) -> CycScalar {
    let nu = CMat::inner(u, u);
    &CMat::inner(v, u) * &nu.inv().unwrap()
}

/// Candidate vectors spanning the range of `p`: `P e_i`, `P i·e_i`,
/// `P(e_i + e_j)`.
fn candidates(p: &CMat) -> Vec<CMat> {
    let d = p.rows();
    let l = p.conductor();
    let mut out: Vec<CMat> = (0..d).map(|i| p.column(i)).collect();
    let i = CycScalar::i(l);
    out.extend((0..d).map(|c| p.column(c).scale(&i)));
    for a in 0..d {
        for b in a + 1..d {
            out.push(p.column(a).add(&p.column(b)));
        }
    }
    out
}

/// Exact Gram–Schmidt keeping squared norms; `partner` vectors (an
/// antiunitary image orthogonal to its source) are removed alongside.
/// Stops once `want` vectors (counting partners) have been collected.
fn gram_schmidt(cands: &[CMat], partner: Option<&dyn Fn(&CMat) -> CMat>, want: usize) -> Vec<CMat> {
    let mut basis: Vec<CMat> = Vec::new();
    let mut all: Vec<CMat> = Vec::new();
    for c in cands {
        if all.len() >= want {
            break;
        }
        let mut v = c.clone();
        for u in &all {
            v = v.sub(&u.scale(&proj_coeff(&v, u)));
        }
        if v.is_zero() {
            continue;
        }
        all.push(v.clone());
        if let Some(f) = partner {
            all.push(f(&v));
        }
        basis.push(v);
    }
    basis
}

fn normalize(v: &CMat) -> Result<CMat, AutError> {
    let n = CMat::inner(v, v);
    match n.sqrt_rational() {
        Some(s) => Ok(v.scale(&s.inv().unwrap())),
        None => {
            let x = n.as_rational().ok_or_else(|| AutError::Normalization(format!("squared norm {n:?}")))?;
            let need = crate::cyclo::sqrt_conductor(&x)
                .ok_or_else(|| AutError::Normalization(format!("squared norm {n:?}")))?;
            Err(AutError::NeedsConductor(lcm_u64(need, v.conductor())))
        }
    }
}

/// Real-orthonormal basis of the `A`-fixed vectors in the range of `p`,
/// for an antiunitary `A` with `A² = 1` there (or real `p` with `A = conj`).
fn real_basis(p: &CMat, fix: &dyn Fn(&CMat) -> CMat) -> Result<Vec<CMat>, AutError> {
    let want = rank_of(p);
    let fixed: Vec<CMat> = candidates(p).iter().map(|c| c.add(&fix(c))).filter(|v| !v.is_zero()).collect();
    let b = gram_schmidt(&fixed, None, want);
    if b.len() != want {
        return Err(AutError::Normalization("real form has the wrong dimension".into()));
    }
    b.iter().map(normalize).collect()
}

fn complex_basis(p: &CMat) -> Result<Vec<CMat>, AutError> {
    let want = rank_of(p);
    let b = gram_schmidt(&candidates(p), None, want);
    assert_eq!(b.len(), want);
    b.iter().map(normalize).collect()
}

/// Orthonormal `v` such that `{v, f(v)}` together form an orthonormal basis.
fn paired_basis(p: &CMat, f: &dyn Fn(&CMat) -> CMat) -> Result<Vec<CMat>, AutError> {
    let want = rank_of(p);
    let b = gram_schmidt(&candidates(p), Some(f), want);
    if 2 * b.len() != want {
        return Err(AutError::Normalization("odd quaternionic dimension".into()));
    }
    b.iter().map(normalize).collect()
}

/// One `2×2` block `[[0, ζ^n], [ζ^{−n}, 0]]∘conj` on columns `(plus, minus)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiunitaryBlock {
    pub n: i64,
    pub plus: usize,
    pub minus: usize,
}

/// Normal form of an antiunitary operator of order `order = 2N`.
///
/// Columns of `basis_change` are `e⁺_1..e⁺_r`, then `e_{j₀}` if present,
/// then `e⁻_1..e⁻_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AntiunitaryBlockForm {
    pub order: u64,
    pub blocks: Vec<AntiunitaryBlock>,
    pub fixed_vector: Option<usize>,
    pub basis_change: CMat,
}

impl AntiunitaryBlockForm {
    /// The matrix `M'` with `U⁻¹AU = M'∘conj`.
    pub fn block_matrix(&self) -> CMat {
        let l = self.basis_change.conductor();
        let d = self.basis_change.rows();
        let mut m = CMat::zeros(d, d, l);
        for b in &self.blocks {
            m.set(b.minus, b.plus, CycScalar::root_of_unity(l, -b.n, self.order as i64));
            m.set(b.plus, b.minus, CycScalar::root_of_unity(l, b.n, self.order as i64));
        }
        if let Some(f) = self.fixed_vector {
            m.set(f, f, CycScalar::one(l));
        }
        m
    }

    /// `U·M'·Uᵀ`, the matrix part of `U∘(M'∘conj)∘U⁻¹`.
    pub fn reconstruct(&self) -> CMat {
        self.basis_change.mul(&self.block_matrix()).mul(&self.basis_change.transpose())
    }
}

/// Splits `A²` spectrally and pairs basis vectors into blocks. The
/// conductor is enlarged as normalization requires.
pub fn antiunitary_normal_form(a: &OperatorSpec) -> Result<AntiunitaryBlockForm, AutError> {
    let mut l = a.matrix.conductor();
    for _ in 0..8 {
        match normal_form_at(&a.lift(l)) {
            Err(AutError::NeedsConductor(m)) => l = lcm_u64(l, m),
            other => return other,
        }
    }
    Err(AutError::Normalization(format!("no suitable conductor up to {l}")))
}

fn normal_form_at(a: &OperatorSpec) -> Result<AntiunitaryBlockForm, AutError> {
    assert!(a.antiunitary);
    let order = a.declared_order;
    if order % 2 == 1 || !a.linear_power(order).map(|m| m.is_identity()).unwrap_or(false) {
        return Err(AutError::OrderViolated(order));
    }
    let l = a.matrix.conductor();
    let half = order / 2;
    let sq = a.linear_power(2).unwrap();
    let apply = |v: &CMat| a.apply(v);
    let mut plus: Vec<(i64, CMat, CMat)> = Vec::new();
    let mut fixed = None;
    for (k, p) in eigensplit(&sq, half)? {
        let p = p.lift(l);
        let k = k as i64;
        let zk = CycScalar::root_of_unity(l, k, order as i64);
        if k == 0 {
            let vs = real_basis(&p, &apply)?;
            let s = CycScalar::sqrt_rational(&CycScalar::from_q(l, qf(1, 2))).unwrap();
            let i = CycScalar::i(l);
            for pair in vs.chunks(2) {
                if pair.len() == 1 {
                    fixed = Some(pair[0].clone());
                } else {
                    let ip = pair[1].scale(&i);
                    plus.push((0, pair[0].add(&ip).scale(&s), pair[0].sub(&ip).scale(&s)));
                }
            }
        } else if 2 * k < half as i64 {
            for v in complex_basis(&p)? {
                let m = apply(&v).scale(&zk);
                plus.push((k, v, m));
            }
        } else if 2 * k == half as i64 {
            for v in paired_basis(&p, &apply)? {
                let m = apply(&v).scale(&zk);
                plus.push((k, v, m));
            }
        }
    }
    let r = plus.len();
    let mut cols: Vec<CMat> = plus.iter().map(|t| t.1.clone()).collect();
    let fixed_vector = fixed.map(|f| {
        cols.push(f);
        r
    });
    let off = cols.len();
    cols.extend(plus.iter().map(|t| t.2.clone()));
    let blocks = plus.iter().enumerate().map(|(j, t)| AntiunitaryBlock { n: t.0, plus: j, minus: off + j }).collect();
    Ok(AntiunitaryBlockForm { order, blocks, fixed_vector, basis_change: CMat::from_columns(l, &cols) })
}

/// The standard twist `ψ` of the target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PsiKind {
    Identity,
    StandardB,
    StandardC,
    StandardBc,
}

impl PsiKind {
    pub fn of(kind: LarsKind) -> PsiKind {
        match kind {
            LarsKind::B2 => PsiKind::StandardB,
            LarsKind::C2 => PsiKind::StandardC,
            LarsKind::BC2 => PsiKind::StandardBc,
            _ => PsiKind::Identity,
        }
    }

    pub fn order(self) -> u64 {
        if self == PsiKind::Identity {
            1
        } else {
            2
        }
    }
}

/// Slot positions of the special basis vectors (columns of the basis change).
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct IndexPartition {
    /// Indices `j` of the Cartan basis `E_j`, always `1..=rank`.
    pub j_prime: Vec<usize>,
    pub s1: Option<usize>,
    pub s_minus1: Option<usize>,
    pub fixed_vector: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Orders {
    pub phi: u64,
    pub psi: u64,
}

/// Everything needed to rebuild `A` from the standard data.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StandardizationCertificate {
    pub family: Family,
    pub psi_kind: PsiKind,
    pub lars: LarsKind,
    pub rank: usize,
    /// `n_j` for `j = 1..=rank`.
    pub exponents: Vec<i64>,
    pub mu: Functional,
    #[serde(serialize_with = "ser_col_major", deserialize_with = "de_col_major")]
    pub basis_change: CMat,
    pub index_partition: IndexPartition,
    pub orders: Orders,
    pub declared_order: u64,
    pub order_adjusted: bool,
    /// The scalar `c` with `A = c·B` for the input `B`.
    pub lift_scalar: CycScalar,
}

fn ser_col_major<S: Serializer>(m: &CMat, s: S) -> Result<S::Ok, S::Error> {
    m.transpose().serialize(s)
}

fn de_col_major<'de, D: Deserializer<'de>>(d: D) -> Result<CMat, D::Error> {
    Ok(CMat::deserialize(d)?.transpose())
}

impl StandardizationCertificate {
    pub fn conductor(&self) -> u64 {
        self.basis_change.conductor()
    }

    /// `μ_j` recomputed from the exponents.
    pub fn expected_mu(&self) -> Functional {
        let n = self.orders.phi as i64;
        let shift = if self.psi_kind == PsiKind::StandardC { qf(-1, 4) } else { Q::zero() };
        let pairs: Vec<(usize, Q)> =
            self.exponents.iter().enumerate().map(|(j, &e)| (j + 1, qf(-e, n) + &shift)).collect();
        Functional::from_pairs(&pairs)
    }

    pub fn model(&self) -> (MatrixAlgebra, Twist) {
        standard_model(self.lars, self.rank, self.conductor())
    }

    /// `r_p = −μ(wt(p))`, so that `U₁ = diag(e^{2πi r_p})`.
    pub fn slot_exponents(&self, alg: &MatrixAlgebra) -> Vec<Q> {
        alg.weights.iter().map(|w| -w.iter().enumerate().map(|(j, &c)| q(c) * self.mu.get(j + 1)).sum::<Q>()).collect()
    }

    /// `U₁·B_ψ` as a twist of period `N_φ` in model coordinates.
    pub fn source_twist(&self) -> Result<Twist, AutError> {
        let (alg, psi) = self.model();
        let l = self.conductor();
        let d: Vec<CycScalar> = self
            .slot_exponents(&alg)
            .iter()
            .map(|r| {
                let (num, den) = (r.numer().clone(), r.denom().clone());
                let den: i64 = den.try_into().unwrap();
                if l as i64 % den != 0 {
                    return Err(AutError::Normalization(format!("e^(2πi·{r}) is outside Q(ζ_{l})")));
                }
                Ok(CycScalar::root_of_unity(l, num.try_into().unwrap(), den))
            })
            .collect::<Result<_, _>>()?;
        let u1 = CMat::diag(l, &d);
        let op = match psi.op() {
            TwistOp::Identity => TwistOp::Unitary(u1),
            TwistOp::Unitary(b) => TwistOp::Unitary(u1.mul(b)),
            TwistOp::Antiunitary(m) => TwistOp::Antiunitary(u1.mul(m)),
        };
        Ok(Twist::new(op, self.orders.phi))
    }

    /// The `φ`-side affinisation with slant `ν`.
    pub fn source_spec(&self, nu: &Functional) -> AffinisationSpec {
        AffinisationSpec::standard(self.lars, self.rank).with_order(self.orders.phi).with_nu(nu.clone())
    }

    /// The `ψ`-side affinisation with slants `μ` and `ν`.
    pub fn target_spec(&self, nu: &Functional) -> AffinisationSpec {
        AffinisationSpec::standard(self.lars, self.rank).with_mu(self.mu.clone()).with_nu(nu.clone())
    }

    pub fn source_context(&self, nu: &Functional) -> Result<LoopContext, AutError> {
        let (alg, _) = self.model();
        Ok(LoopContext::new(self.source_spec(nu), alg, self.source_twist()?)?)
    }

    pub fn target_context(&self, nu: &Functional) -> Result<LoopContext, AutError> {
        Ok(LoopContext::standard(self.target_spec(nu), self.conductor())?)
    }

    /// `N_ψ(n/N_φ − μ(α♯))`, or `None` when not an integer.
    pub fn relabel(&self, a: Option<&Root>, n: i64) -> Option<i64> {
        let mut x = qf(n, self.orders.phi as i64);
        if let Some(a) = a {
            x -= a.coeffs().iter().map(|(&j, &c)| q(c) * self.mu.get(j)).sum::<Q>();
        }
        let y = x * q(self.orders.psi as i64);
        y.is_integer().then(|| crate::rational::to_i64(&y).unwrap())
    }
}

fn sorted_by_exponent(mut v: Vec<(i64, CMat)>) -> Vec<(i64, CMat)> {
    v.sort_by_key(|t| t.0);
    v
}

struct Standard {
    lars: LarsKind,
    rank: usize,
    exponents: Vec<i64>,
    columns: Vec<CMat>,
    partition: IndexPartition,
}

fn unitary_family(a: &OperatorSpec) -> Result<Standard, AutError> {
    let n = a.declared_order;
    let mut cols = Vec::new();
    let mut exps = Vec::new();
    for (k, p) in eigensplit(&a.matrix, n)? {
        for v in complex_basis(&p)? {
            cols.push(v);
            exps.push(k as i64);
        }
    }
    Ok(Standard {
        lars: LarsKind::A1,
        rank: cols.len(),
        exponents: exps,
        columns: cols,
        partition: IndexPartition::default(),
    })
}

fn quaternionic_family(a: &OperatorSpec) -> Result<Standard, AutError> {
    let n = a.declared_order as i64;
    let l = a.matrix.conductor();
    let om = omega(a.dim / 2, l);
    let sigma = |v: &CMat| om.mul(&v.conj());
    let mut plus = Vec::new();
    for (k, p) in eigensplit(&a.matrix, n as u64)? {
        let k = k as i64;
        if 2 * k < n && k > 0 {
            plus.extend(complex_basis(&p)?.into_iter().map(|v| (k, v)));
        } else if k == 0 || 2 * k == n {
            plus.extend(paired_basis(&p, &sigma)?.into_iter().map(|v| (k, v)));
        }
    }
    let plus = sorted_by_exponent(plus);
    let mut cols: Vec<CMat> = plus.iter().map(|t| t.1.clone()).collect();
    cols.extend(plus.iter().map(|t| sigma(&t.1)));
    Ok(Standard {
        lars: LarsKind::C1,
        rank: plus.len(),
        exponents: plus.iter().map(|t| t.0).collect(),
        columns: cols,
        partition: IndexPartition::default(),
    })
}

/// `None` when `−A` should be used instead.
fn real_family(a: &OperatorSpec) -> Result<Option<Standard>, AutError> {
    let n = a.declared_order as i64;
    let l = a.matrix.conductor();
    let s = CycScalar::from_q(l, qf(1, 2)).sqrt_rational().unwrap();
    let i = CycScalar::i(l);
    let mut planes: Vec<(i64, CMat)> = Vec::new();
    let mut singles: [Option<CMat>; 2] = [None, None];
    for (k, p) in eigensplit(&a.matrix, n as u64)? {
        let k = k as i64;
        if k > 0 && 2 * k < n {
            planes.extend(complex_basis(&p)?.into_iter().map(|v| (k, v)));
        } else if k == 0 || 2 * k == n {
            let vs = real_basis(&p, &|v: &CMat| v.conj())?;
            for pair in vs.chunks(2) {
                if pair.len() == 1 {
                    singles[(k != 0) as usize] = Some(pair[0].clone());
                } else {
                    planes.push((k, pair[0].sub(&pair[1].scale(&i)).scale(&s)));
                }
            }
        }
    }
    if singles[0].is_none() && singles[1].is_some() {
        return Ok(None);
    }
    let planes = sorted_by_exponent(planes);
    let r = planes.len();
    let mut cols: Vec<CMat> = planes.iter().map(|t| t.1.clone()).collect();
    cols.extend(planes.iter().map(|t| t.1.conj()));
    let mut partition = IndexPartition::default();
    let lars = match singles {
        [None, None] => LarsKind::D1,
        [Some(e), None] => {
            partition.s1 = Some(cols.len());
            cols.push(e);
            LarsKind::B1
        }
        [Some(e), Some(f)] => {
            partition.s1 = Some(cols.len());
            cols.push(e);
            partition.s_minus1 = Some(cols.len());
            cols.push(f);
            LarsKind::B2
        }
        [None, Some(_)] => unreachable!(),
    };
    Ok(Some(Standard { lars, rank: r, exponents: planes.iter().map(|t| t.0).collect(), columns: cols, partition }))
}

fn antiunitary_family(a: &OperatorSpec) -> Result<Standard, AutError> {
    let nf = normal_form_at(a)?;
    let l = a.matrix.conductor();
    let r = nf.blocks.len();
    let mut cols: Vec<CMat> = (0..nf.basis_change.cols()).map(|c| nf.basis_change.column(c)).collect();
    let mut partition = IndexPartition::default();
    let lars = match nf.fixed_vector {
        Some(f) => {
            partition.fixed_vector = Some(f);
            LarsKind::BC2
        }
        None => {
            // f⁻ = i·e⁻ turns σ̃ into the quaternionic Ω∘conj.
            let i = CycScalar::i(l);
            for b in &nf.blocks {
                cols[b.minus] = cols[b.minus].scale(&i);
            }
            LarsKind::C2
        }
    };
    Ok(Standard { lars, rank: r, exponents: nf.blocks.iter().map(|b| b.n).collect(), columns: cols, partition })
}

/// Runs the family recipe and assembles the certificate.
/// Gram–Schmidt can need square roots outside the working field; each
/// retry enlarges the conductor by what the failing norm asked for.
pub fn standardize(spec: &OperatorSpec) -> Result<StandardizationCertificate, AutError> {
    let lifted = finite_order_lift(spec)?;
    let mut l = lifted.operator.matrix.conductor();
    for _ in 0..8 {
        match standardize_at(spec, &lifted, l) {
            Err(AutError::NeedsConductor(m)) => l = lcm_u64(l, m),
            other => return other,
        }
    }
    Err(AutError::Normalization(format!("no suitable conductor up to {l}")))
}

fn standardize_at(
    spec: &OperatorSpec,
    lifted: &LiftedOperator,
    l: u64,
) -> Result<StandardizationCertificate, AutError> {
    let mut a = lifted.operator.lift(l);
    let mut scalar = lifted.scalar.lift(l);
    let st = match spec.family() {
        Family::ComplexUnitary => unitary_family(&a)?,
        Family::Quaternionic => quaternionic_family(&a)?,
        Family::ComplexAntiunitary => antiunitary_family(&a)?,
        Family::Real => match real_family(&a)? {
            Some(s) => s,
            None => {
                let neg = a.matrix.neg();
                let n = exact_order(&OperatorSpec { matrix: neg.clone(), ..a.clone() }, 2 * a.declared_order);
                a = OperatorSpec { matrix: neg, declared_order: n, ..a };
                let l = lcm_u64(a.matrix.conductor(), 2 * n);
                a = a.lift(l);
                scalar = scalar.lift(l).scale(&q(-1));
                real_family(&a)?.expect("S1 is nonempty after negation")
            }
        },
    };
    if st.rank < 2 {
        return Err(AutError::RankTooSmall(st.rank));
    }
    let l = a.matrix.conductor();
    let n_phi = a.declared_order;
    let mut cert = StandardizationCertificate {
        family: spec.family(),
        psi_kind: PsiKind::of(st.lars),
        lars: st.lars,
        rank: st.rank,
        exponents: st.exponents,
        mu: Functional::zero(),
        basis_change: CMat::from_columns(l, &st.columns),
        index_partition: IndexPartition { j_prime: (1..=st.rank).collect(), ..st.partition },
        orders: Orders { phi: n_phi, psi: st.lars.twist_order() },
        declared_order: spec.declared_order,
        order_adjusted: n_phi != spec.declared_order,
        lift_scalar: scalar.lift(l),
    };
    cert.mu = cert.expected_mu();
    Ok(cert)
}

/// One named check of a certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub passed: bool,
    pub items: Vec<CheckItem>,
}

impl VerificationReport {
    pub fn failed(&self) -> Vec<&str> {
        self.items.iter().filter(|i| !i.passed).map(|i| i.name.as_str()).collect()
    }
}

fn span_rank(vs: &[Vec<CycScalar>]) -> usize {
    let mut rows: Vec<Vec<CycScalar>> = vs.to_vec();
    let width = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for col in 0..width {
        let Some(piv) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else { continue };
        rows.swap(rank, piv);
        let inv = rows[rank][col].inv().unwrap();
        for r in 0..rows.len() {
            if r != rank && !rows[r][col].is_zero() {
                let f = &rows[r][col] * &inv;
                for c in col..width {
                    let t = &f * &rows[rank][c];
                    rows[r][c] = &rows[r][c] - &t;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Dimension of the centraliser of `t₀` inside the twist-fixed subalgebra.
fn fixed_centralizer_dim(alg: &MatrixAlgebra, tw: &Twist) -> usize {
    let l = alg.conductor;
    let mut vs = Vec::new();
    for p in 0..alg.dim {
        for r in 0..alg.dim {
            if alg.unit_weight(p, r).iter().all(|&c| c == 0) {
                let x = tw.project_mode(0, &alg.project(&CMat::unit(alg.dim, l, p, r)));
                if !x.is_zero() {
                    vs.push(x.entries().map(|e| e.2.clone()).collect());
                }
            }
        }
    }
    span_rank(&vs)
}

fn expected_partition(kind: LarsKind, rank: usize) -> IndexPartition {
    let mut p = IndexPartition { j_prime: (1..=rank).collect(), ..Default::default() };
    match kind {
        LarsKind::B1 => p.s1 = Some(2 * rank),
        LarsKind::B2 => {
            p.s1 = Some(2 * rank);
            p.s_minus1 = Some(2 * rank + 1);
        }
        LarsKind::BC2 => p.fixed_vector = Some(rank),
        _ => {}
    }
    p
}

fn family_kinds(f: Family) -> &'static [LarsKind] {
    match f {
        Family::ComplexUnitary => &[LarsKind::A1],
        Family::Quaternionic => &[LarsKind::C1],
        Family::Real => &[LarsKind::D1, LarsKind::B1, LarsKind::B2],
        Family::ComplexAntiunitary => &[LarsKind::C2, LarsKind::BC2],
    }
}

/// Checks the certificate against the operator; every failure is itemised.
pub fn verify_certificate(spec: &OperatorSpec, cert: &StandardizationCertificate) -> VerificationReport {
    let mut items = Vec::new();
    let mut push = |name: &str, passed: bool, detail: String| {
        items.push(CheckItem { name: name.into(), passed, detail });
    };
    let structure_ok = cert.family == spec.family()
        && family_kinds(cert.family).contains(&cert.lars)
        && cert.psi_kind == PsiKind::of(cert.lars)
        && cert.orders.psi == cert.lars.twist_order()
        && cert.rank >= 2
        && cert.index_partition == expected_partition(cert.lars, cert.rank);
    push(
        "structure",
        structure_ok,
        format!("family {:?}, LARS {}, ψ {:?}, N_ψ {}", cert.family, cert.lars, cert.psi_kind, cert.orders.psi),
    );
    let (alg, psi) = standard_model(cert.lars, cert.rank, cert.conductor().max(4));
    let u = &cert.basis_change;
    let dims_ok = u.is_square() && u.rows() == spec.dim && alg.dim == spec.dim && cert.exponents.len() == cert.rank;
    push("dimensions", dims_ok, format!("operator dim {}, model dim {}", spec.dim, alg.dim));
    if !structure_ok || !dims_ok {
        return VerificationReport { passed: false, items };
    }
    let l = cert.conductor();
    let roots_fit = cert.orders.phi > 0 && l % lcm_u64(8, 2 * cert.orders.phi) == 0;
    if l % spec.matrix.conductor() != 0 || cert.lift_scalar.conductor() != l || !roots_fit {
        push(
            "conductor",
            false,
            format!("certificate conductor {l} vs operator {}, N_φ {}", spec.matrix.conductor(), cert.orders.phi),
        );
        return VerificationReport { passed: false, items };
    }
    let input_ok = spec.validate();
    push("operator", input_ok.is_ok(), format!("{input_ok:?}"));
    let b = spec.lift(l);
    let order_ok = {
        let proj =
            (1..=cert.declared_order).find(|&k| b.linear_power(k).and_then(|m| m.as_scalar()).is_some()).unwrap_or(0);
        proj == cert.declared_order && spec.declared_order == cert.declared_order
    };
    let a = OperatorSpec { matrix: b.matrix.scale(&cert.lift_scalar), ..b.clone() };
    let n_phi = cert.orders.phi;
    let a_order = a.linear_power(n_phi).map(|m| m.is_identity()).unwrap_or(false) && exact_order(&a, n_phi) == n_phi;
    push(
        "orders",
        order_ok && a_order && cert.order_adjusted == (n_phi != cert.declared_order),
        format!("declared {}, N_φ {}, adjusted {}", cert.declared_order, n_phi, cert.order_adjusted),
    );
    let unitary = u.is_unitary();
    let form_ok = match (spec.ambient_form(), &alg.form) {
        (Some(j0), Some(j)) => u.transpose().mul(&j0.lift(l)).mul(u) == *j,
        (None, _) => true,
        _ => false,
    };
    push("basis_change", unitary && form_ok, format!("unitary {unitary}, form compatible {form_ok}"));
    let mu_ok = cert.mu == cert.expected_mu();
    push("mu", mu_ok, format!("μ {:?}, from exponents {:?}", cert.mu, cert.expected_mu()));
    let range_ok = cert.exponents.iter().all(|&e| {
        let n = n_phi as i64;
        match cert.family {
            Family::ComplexUnitary => (0..n).contains(&e),
            Family::ComplexAntiunitary => 0 <= e && 4 * e <= n,
            _ => 0 <= e && 2 * e <= n,
        }
    });
    push("exponent_range", range_ok, format!("{:?}", cert.exponents));
    let src = match cert.source_twist() {
        Ok(t) => t,
        Err(e) => {
            push("reconstruction", false, e.to_string());
            return VerificationReport { passed: false, items };
        }
    };
    let recon = match src.op() {
        TwistOp::Unitary(m) => u.mul(m).mul(&u.inverse().unwrap_or_else(|| u.adjoint())),
        TwistOp::Antiunitary(m) => u.mul(m).mul(&u.transpose()),
        TwistOp::Identity => unreachable!(),
    };
    let recon_ok = unitary && src.op_is_antiunitary() == spec.antiunitary && recon == a.matrix.lift(l);
    push("reconstruction", recon_ok, "A = U·U₁B_ψ·U⁻¹".into());
    let (comm_ok, detail) = one_parameter_check(cert, &alg, &psi);
    push("one_parameter_group", comm_ok, detail);
    let src_fix = fixed_centralizer_dim(&alg, &src);
    let psi_fix = fixed_centralizer_dim(&alg, &psi.lift(l));
    let cartan_fixed = (1..=cert.rank).all(|j| {
        let h = alg.cartan_matrix(&crate::rootdata::CartanVector::basis(j));
        src.apply(&h) == h && psi.lift(l).apply(&h) == h
    });
    push(
        "maximal_torus",
        cartan_fixed && src_fix == cert.rank && psi_fix == cert.rank,
        format!("centraliser dims φ {src_fix}, ψ {psi_fix}, rank {}", cert.rank),
    );
    VerificationReport { passed: items.iter().all(|i| i.passed), items }
}

impl Twist {
    fn op_is_antiunitary(&self) -> bool {
        matches!(self.op(), TwistOp::Antiunitary(_))
    }
}

/// `U_t` commutes with `B_ψ` symbolically for all `t` and exactly at
/// `t = k/(2N_φ)`, `k = 1, 2, 3`.
fn one_parameter_check(cert: &StandardizationCertificate, alg: &MatrixAlgebra, psi: &Twist) -> (bool, String) {
    let r = cert.slot_exponents(alg);
    let (b, anti) = match psi.op() {
        TwistOp::Identity => return (true, "ψ = id".into()),
        TwistOp::Unitary(b) => (b, false),
        TwistOp::Antiunitary(m) => (m, true),
    };
    // B_ψ is a signed permutation: slot p goes to slot σ(p).
    let sigma: Vec<usize> = (0..alg.dim).map(|p| (0..alg.dim).find(|&s| !b.get(s, p).is_zero()).unwrap()).collect();
    let symbolic = (0..alg.dim).all(|p| if anti { r[sigma[p]] == -&r[p] } else { r[sigma[p]] == r[p] });
    let n = cert.orders.phi as i64;
    let mut sampled = true;
    for k in 1..=3 {
        let t = qf(k, 2 * n);
        let exps: Vec<Q> = r.iter().map(|x| x * &t).collect();
        let l = exps.iter().fold(4u64, |acc, e| lcm_u64(acc, e.denom().try_into().unwrap()));
        let ut = CMat::diag(
            l,
            &exps
                .iter()
                .map(|e| CycScalar::root_of_unity(l, e.numer().try_into().unwrap(), e.denom().try_into().unwrap()))
                .collect::<Vec<_>>(),
        );
        let lb = lcm_u64(l, b.conductor());
        let (ut, bl) = (ut.lift(lb), b.lift(lb));
        let rhs = if anti { bl.mul(&ut.conj()) } else { bl.mul(&ut) };
        sampled &= ut.mul(&bl) == rhs;
    }
    (symbolic && sampled, format!("symbolic {symbolic}, sampled {sampled}"))
}

/// Least `k ≤ max` with `B^k` a scalar (even `k` only when antiunitary).
pub fn projective_order(m: &CMat, antiunitary: bool, max: u64) -> Option<u64> {
    let b = OperatorSpec { field: Field::C, antiunitary, dim: m.rows(), declared_order: 1, matrix: m.clone() };
    (1..=max).find(|&k| b.linear_power(k).and_then(|p| p.as_scalar()).is_some())
}

impl StandardizationCertificate {
    /// `x ↦ U⁻¹xU`, from the operator's coordinates to model coordinates.
    pub fn to_model(&self, x: &crate::loopalg::LoopElement) -> crate::loopalg::LoopElement {
        let u = &self.basis_change;
        x.lift(self.conductor()).conjugate(u, &u.adjoint())
    }

    /// A seeded element of the `φ`-twisted loop algebra, drawn in the
    /// operator's own coordinates and carried to model coordinates.
    pub fn random_source_element<R: rand::Rng>(
        &self,
        spec: &OperatorSpec,
        rng: &mut R,
        modes: &[i64],
        density: f64,
    ) -> crate::loopalg::DoubleExtElement {
        let l = self.conductor();
        let b = spec.lift(l);
        let tw = b.twist(self.orders.phi);
        let form = b.ambient_form();
        let mut x = crate::loopalg::LoopElement::zero(spec.dim, l);
        for &n in modes {
            let m = crate::loopalg::random_matrix(rng, spec.dim, l, density);
            x.add_term(n, tw.project_mode(n, &crate::loopalg::project_form(form.as_ref(), &m)));
        }
        let mut e = crate::loopalg::DoubleExtElement::from_loop(self.to_model(&x));
        e.z = CycScalar::from_i64(l, rng.gen_range(-2..=2));
        e.t = CycScalar::from_i64(l, rng.gen_range(-2..=2));
        e
    }
}

/// Residues mod `N_φ` of the modes carrying the weight `a`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModeClass {
    pub modulus: u64,
    pub residues: Vec<i64>,
}

impl ModeClass {
    pub fn contains(&self, n: i64) -> bool {
        self.residues.contains(&n.rem_euclid(self.modulus as i64))
    }

    pub fn neg(&self) -> ModeClass {
        let m = self.modulus as i64;
        let mut residues: Vec<i64> = self.residues.iter().map(|r| (-r).rem_euclid(m)).collect();
        residues.sort();
        ModeClass { modulus: self.modulus, residues }
    }
}

pub fn mode_class(cert: &StandardizationCertificate, a: &Root) -> Result<ModeClass, AutError> {
    let ctx = cert.source_context(&Functional::zero())?;
    Ok(ModeClass { modulus: cert.orders.phi, residues: crate::loopalg::mode_residues(&ctx, Some(a)) })
}

/// One line of the root map `(α, n) ↦ (α, n')`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootMapRow {
    pub root: AffineRoot,
    pub image: Option<AffineRoot>,
    pub in_target: bool,
    pub reflection_match: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RootMapReport {
    pub window: i64,
    pub rows: Vec<RootMapRow>,
    /// Nonzero `t₀`-weights of the model agree with the target's finite roots.
    pub weights_match: bool,
    /// Every relabelled mode is an integer in the target LARS.
    pub integral_and_member: bool,
    /// The image of each root's window is exactly the target's window.
    pub bijective: bool,
    pub reflections_match: bool,
}

impl RootMapReport {
    pub fn passed(&self) -> bool {
        self.weights_match && self.integral_and_member && self.bijective && self.reflections_match
    }
}

/// The map on roots induced by the certificate, over `|n| ≤ window`.
pub fn root_map(cert: &StandardizationCertificate, nu: &Functional, window: i64) -> Result<RootMapReport, AutError> {
    let ctx = cert.source_context(nu)?;
    let src = cert.source_spec(nu);
    let dst = cert.target_spec(nu);
    let alg = &ctx.algebra;
    let mut weights = BTreeSet::new();
    for p in 0..alg.dim {
        for r in 0..alg.dim {
            if let Some(w) = crate::loopalg::weight_root(&alg.unit_weight(p, r)) {
                if !alg.project(&CMat::unit(alg.dim, alg.conductor, p, r)).is_zero() {
                    weights.insert(w);
                }
            }
        }
    }
    let finite: BTreeSet<Root> = dst.finite_roots().into_iter().collect();
    let weights_match = weights == finite;
    let basis = ExtCartanVector::basis(cert.rank);
    let mut rows = Vec::new();
    let (mut integral_and_member, mut bijective, mut reflections_match) = (true, true, true);
    let mut roots: Vec<Option<Root>> = finite.iter().cloned().map(Some).collect();
    roots.push(None);
    for a in roots {
        let residues = crate::loopalg::mode_residues(&ctx, a.as_ref());
        let nphi = cert.orders.phi as i64;
        let mut images = BTreeSet::new();
        for n in -window..=window {
            if !residues.contains(&n.rem_euclid(nphi)) || (a.is_none() && n == 0) {
                continue;
            }
            let root = AffineRoot { finite_part: a.clone(), mode: n };
            let image = cert.relabel(a.as_ref(), n).map(|m| AffineRoot { finite_part: a.clone(), mode: m });
            let in_target = match &image {
                Some(im) => lars_contains(cert.lars, im, &dst.base).unwrap_or(false),
                None => false,
            };
            let reflection_match = match (&a, &image) {
                (Some(_), Some(im)) => basis.iter().all(|b| {
                    reflect_affine(&src, &root, b).ok() == reflect_affine(&dst, im, b).ok()
                        && reflect_affine(&src, &root, b).is_ok()
                }),
                (None, Some(_)) => true,
                _ => false,
            };
            if let Some(im) = &image {
                images.insert(im.mode);
            }
            integral_and_member &= in_target;
            reflections_match &= reflection_match;
            rows.push(RootMapRow { root, image, in_target, reflection_match });
        }
        if let (Some(&lo), Some(&hi)) = (images.iter().next(), images.iter().last()) {
            let expect: BTreeSet<i64> = (lo..=hi)
                .filter(|&m| {
                    let r = AffineRoot { finite_part: a.clone(), mode: m };
                    lars_contains(cert.lars, &r, &dst.base).unwrap_or(false)
                })
                .collect();
            bijective &= expect == images;
        } else {
            bijective = false;
        }
    }
    Ok(RootMapReport { window, rows, weights_match, integral_and_member, bijective, reflections_match })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    const L: u64 = 24;

    fn z(k: i64) -> CycScalar {
        CycScalar::zeta_pow(L, k)
    }

    fn diag(ks: &[i64]) -> CMat {
        CMat::diag(L, &ks.iter().map(|&k| z(k)).collect::<Vec<_>>())
    }

    #[test]
    fn lift_examples() {
        // B = ζ₃·id with N = 1 lifts to the identity.
        let b = CMat::identity(2, L).scale(&z(8));
        let lifted = finite_order_lift(&OperatorSpec::new(Field::C, false, 1, b).unwrap()).unwrap();
        assert!(lifted.operator.matrix.is_identity());
        assert_eq!(lifted.scalar, CycScalar::root_of_unity(lifted.scalar.conductor(), -1, 3));
        // Antiunitary with A² = −id stays as it is, with order 4.
        let m = omega(1, L);
        let lifted = finite_order_lift(&OperatorSpec::new(Field::C, true, 2, m.clone()).unwrap()).unwrap();
        assert_eq!(lifted.operator.declared_order, 4);
        assert_eq!(lifted.operator.matrix, m.lift(lifted.operator.matrix.conductor()));
        // Declared order must be the projective order.
        let e = finite_order_lift(&OperatorSpec::new(Field::C, false, 4, diag(&[0, 12])).unwrap());
        assert_eq!(e, Err(AutError::OrderMismatch { declared: 4, actual: 2 }));
        let e = finite_order_lift(&OperatorSpec::new(Field::C, false, 3, diag(&[0, 12])).unwrap());
        assert_eq!(e, Err(AutError::NotFiniteOrder(3)));
    }

    #[test]
    fn eigensplit_projectors() {
        let perm = CMat::from_fn(3, 3, L, |r, c| if r == (c + 1) % 3 { z(0) } else { CycScalar::zero(L) });
        for (a, m) in [(diag(&[0, 12]), 2u64), (perm, 3), (CMat::identity(3, L), 1)] {
            let ps = eigensplit(&a, m).unwrap();
            let mut sum = CMat::zeros(a.rows(), a.rows(), L);
            for (k, p) in &ps {
                assert_eq!(p.mul(p), *p);
                assert_eq!(a.mul(p), p.scale(&CycScalar::root_of_unity(L, *k as i64, m as i64)));
                for (k2, p2) in &ps {
                    if k2 != k {
                        assert!(p.mul(p2).is_zero());
                    }
                }
                sum = sum.add(p);
            }
            assert!(sum.is_identity());
        }
        assert_eq!(
            eigensplit(&diag(&[0, 12]), 2).unwrap()[0].1,
            diag(&[0, 12]).add(&CMat::identity(2, L)).scale_q(&qf(1, 2))
        );
    }

    #[test]
    fn antiunitary_normal_form_examples() {
        let conj2 = OperatorSpec::new(Field::C, true, 2, CMat::identity(2, L)).unwrap();
        let nf = antiunitary_normal_form(&finite_order_lift(&conj2).unwrap().operator).unwrap();
        assert_eq!((nf.blocks.len(), nf.fixed_vector, nf.blocks[0].n), (1, None, 0));
        let conj3 = OperatorSpec::new(Field::C, true, 2, CMat::identity(3, L)).unwrap();
        let lifted = finite_order_lift(&conj3).unwrap().operator;
        let nf = antiunitary_normal_form(&lifted).unwrap();
        assert_eq!((nf.blocks.len(), nf.fixed_vector), (1, Some(1)));
        assert_eq!(nf.reconstruct(), lifted.matrix);
        let quat = OperatorSpec::new(Field::C, true, 2, omega(1, L)).unwrap();
        let lifted = finite_order_lift(&quat).unwrap().operator;
        let nf = antiunitary_normal_form(&lifted).unwrap();
        assert_eq!(nf.blocks, vec![AntiunitaryBlock { n: 1, plus: 0, minus: 1 }]);
        assert_eq!(nf.reconstruct(), lifted.matrix);
    }

    #[test]
    fn unitary_standardization_example() {
        let a = OperatorSpec::new(Field::C, false, 3, diag(&[0, 8, 16])).unwrap();
        let cert = standardize(&a).unwrap();
        assert_eq!(cert.psi_kind, PsiKind::Identity);
        assert_eq!(cert.lars, LarsKind::A1);
        assert_eq!(cert.exponents, vec![0, 1, 2]);
        assert_eq!(cert.mu, Functional::from_pairs(&[(2, qf(-1, 3)), (3, qf(-2, 3))]));
        assert!(verify_certificate(&a, &cert).passed);
        // ε1 − ε2 sits at modes ≡ n_2 − n_1.
        let mc = mode_class(&cert, &Root::pair(1, 1, 2, -1)).unwrap();
        assert_eq!(mc.residues, vec![1]);
        assert_eq!(mode_class(&cert, &Root::pair(1, -1, 2, 1)).unwrap(), mc.neg());
    }

    #[test]
    fn diag_one_minus_one_mode_class() {
        let a = OperatorSpec::new(Field::C, false, 2, diag(&[0, 12])).unwrap();
        let cert = standardize(&a).unwrap();
        assert_eq!(mode_class(&cert, &Root::pair(1, 1, 2, -1)).unwrap().residues, vec![1]);
        assert!(root_map(&cert, &Functional::zero(), 8).unwrap().passed());
    }

    #[test]
    fn identity_certificate() {
        let a = OperatorSpec::new(Field::C, false, 1, CMat::identity(3, L)).unwrap();
        let cert = standardize(&a).unwrap();
        assert!(cert.mu.is_zero());
        for r in AffinisationSpec::standard(LarsKind::A1, 3).finite_roots() {
            assert_eq!(mode_class(&cert, &r).unwrap().residues, vec![0]);
        }
    }

    #[test]
    fn real_family_with_both_singletons_is_b2() {
        // Rotation by 2π/6 in the (e1, e2) plane and (e3, e4) plane, +1 on e5, −1 on e6.
        let l = L;
        let c = CycScalar::from_q(l, qf(1, 2));
        let s = CycScalar::from_q(l, qf(3, 4)).sqrt_rational().unwrap();
        let mut m = CMat::zeros(6, 6, l);
        for b in [0, 2] {
            m.set(b, b, c.clone());
            m.set(b + 1, b + 1, c.clone());
            m.set(b + 1, b, s.clone());
            m.set(b, b + 1, s.scale(&q(-1)));
        }
        m.set(4, 4, CycScalar::one(l));
        m.set(5, 5, CycScalar::from_i64(l, -1));
        let a = OperatorSpec::new(Field::R, false, 6, m).unwrap();
        let cert = standardize(&a).unwrap();
        assert_eq!((cert.psi_kind, cert.lars, cert.orders.psi), (PsiKind::StandardB, LarsKind::B2, 2));
        assert_eq!(cert.exponents, vec![1, 1]);
        let rep = verify_certificate(&a, &cert);
        assert!(rep.passed, "{:?}", rep.failed());
        assert!(root_map(&cert, &Functional::zero(), 24).unwrap().passed());
    }

    #[test]
    fn odd_antiunitary_is_bc2() {
        let a = OperatorSpec::new(Field::C, true, 2, CMat::identity(5, L)).unwrap();
        let cert = standardize(&a).unwrap();
        assert_eq!((cert.lars, cert.psi_kind), (LarsKind::BC2, PsiKind::StandardBc));
        let rep = verify_certificate(&a, &cert);
        assert!(rep.passed, "{:?}", rep.failed());
        assert!(root_map(&cert, &Functional::zero(), 8).unwrap().passed());
    }

    #[test]
    fn certificate_json_round_trip() {
        let a = OperatorSpec::new(Field::C, true, 2, CMat::identity(4, L)).unwrap();
        let cert = standardize(&a).unwrap();
        let s = serde_json::to_string(&cert).unwrap();
        assert_eq!(serde_json::from_str::<StandardizationCertificate>(&s).unwrap(), cert);
        let s = serde_json::to_string(&a).unwrap();
        assert!(s.contains("\"order\":2"));
        assert_eq!(serde_json::from_str::<OperatorSpec>(&s).unwrap(), a);
    }
}

//! Twisted loop algebras and their double extensions in matrix models.
//!
//! An element of the double extension is `(z, ξ, t)` with `ξ` a finite sum
//! of `e_n ⊗ x_n`. The bracket is
//! `[(z₁,ξ₁,t₁), (z₂,ξ₂,t₂)] = (⟨Dξ₁, ξ₂⟩, [ξ₁,ξ₂] + t₁Dξ₂ − t₂Dξ₁, 0)`
//! with `D(e_n ⊗ x_α) = i(n/N + ν(α♯))·e_n ⊗ x_α`.

pub mod model;

use crate::affine::{AffineError, AffinisationSpec, LarsKind};
use crate::autnorm::StandardizationCertificate;
use crate::cyclo::CycScalar;
use crate::matrix::CMat;
use crate::rational::{q, Q};
use crate::rootdata::{Functional, Root};
pub use model::{project_form, standard_model, weight_root, MatrixAlgebra, Twist, TwistOp};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum LoopError {
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error("twist order {twist} does not match the affinisation's {spec}")]
    OrderMismatch { twist: u64, spec: u64 },
    #[error("model rank {model} does not match the affinisation's {spec}")]
    RankMismatch { model: usize, spec: usize },
    #[error("component at mode {0} is not in the twisted loop algebra")]
    NotInLoopAlgebra(i64),
    #[error("element lives in a different model (dim {0}, conductor {1})")]
    ModelMismatch(usize, u64),
    #[error("image component at mode {0} fails the target eigenspace check")]
    TargetCheck(i64),
    #[error("relabelled mode {0} is not an integer")]
    FractionalMode(String),
    #[error("affinisation does not match the certificate: {0}")]
    SpecMismatch(String),
    #[error("certificate: {0}")]
    Certificate(String),
}

/// An affinisation together with a matrix model and twist realising it.
#[derive(Debug, Clone)]
pub struct LoopContext {
    pub spec: AffinisationSpec,
    pub algebra: MatrixAlgebra,
    pub twist: Twist,
}

impl LoopContext {
    pub fn new(spec: AffinisationSpec, algebra: MatrixAlgebra, twist: Twist) -> Result<Self, LoopError> {
        spec.validate()?;
        if twist.order() != spec.twist_order {
            return Err(LoopError::OrderMismatch { twist: twist.order(), spec: spec.twist_order });
        }
        if algebra.rank != spec.rank() {
            return Err(LoopError::RankMismatch { model: algebra.rank, spec: spec.rank() });
        }
        Ok(LoopContext { spec, algebra, twist })
    }

    /// The standard model of `spec.lars` over `Q(ζ_conductor)`.
    pub fn standard(spec: AffinisationSpec, conductor: u64) -> Result<Self, LoopError> {
        let (alg, tw) = standard_model(spec.lars, spec.rank(), conductor);
        Self::new(spec, alg, tw)
    }

    pub fn conductor(&self) -> u64 {
        self.algebra.conductor
    }

    pub fn dim(&self) -> usize {
        self.algebra.dim
    }

    /// Whether `x` lies in `k_C` and in the mode-`n` eigenspace of the twist.
    pub fn in_mode(&self, n: i64, x: &CMat) -> bool {
        self.algebra.contains(x) && self.twist.in_mode(n, x)
    }

    pub fn contains(&self, a: &LoopElement) -> bool {
        a.dim == self.dim() && a.terms.iter().all(|(&n, x)| self.in_mode(n, x))
    }

    /// `i(n/N + ν(w♯))` for the weight `w`, with `ν` the total slant.
    pub fn derivation_scalar(&self, n: i64, w: &[i64]) -> CycScalar {
        let nu = self.spec.total_slant();
        let s: Q = Q::new(n.into(), (self.spec.twist_order as i64).into())
            + w.iter().enumerate().map(|(j, &c)| q(c) * nu.get(j + 1)).sum::<Q>();
        CycScalar::i(self.conductor()).scale(&s)
    }

    fn check(&self, a: &LoopElement) -> Result<(), LoopError> {
        if a.dim != self.dim() || a.conductor != self.conductor() {
            return Err(LoopError::ModelMismatch(a.dim, a.conductor));
        }
        Ok(())
    }

    /// A seeded element supported on the given modes. Entries are drawn
    /// from `{0, ±1, ±i}` and projected onto the twisted loop algebra.
    pub fn random_loop<R: Rng>(&self, rng: &mut R, modes: &[i64], density: f64) -> LoopElement {
        let l = self.conductor();
        let d = self.dim();
        let mut out = LoopElement::zero(d, l);
        for &n in modes {
            let x = random_matrix(rng, d, l, density);
            let y = self.twist.project_mode(n, &self.algebra.project(&x));
            out.add_term(n, y);
        }
        out
    }

    /// A seeded element `(z, e_0⊗h, t)` of `t₀ᵉ`, with `h` diagonal.
    pub fn random_cartan<R: Rng>(&self, rng: &mut R) -> DoubleExtElement {
        let l = self.conductor();
        let d = self.dim();
        let x = random_matrix(rng, d, l, 1.0);
        let mut h = CMat::zeros(d, d, l);
        for j in 0..d {
            h.set(j, j, x.get(j, j).clone());
        }
        let h = self.twist.project_mode(0, &self.algebra.project(&h));
        DoubleExtElement { z: random_scalar(rng, l), loop_part: LoopElement::monomial(0, h), t: random_scalar(rng, l) }
    }

    pub fn random_element<R: Rng>(&self, rng: &mut R, modes: &[i64], density: f64) -> DoubleExtElement {
        let l = self.conductor();
        DoubleExtElement {
            z: random_scalar(rng, l),
            loop_part: self.random_loop(rng, modes, density),
            t: random_scalar(rng, l),
        }
    }
}

fn random_scalar<R: Rng>(rng: &mut R, l: u64) -> CycScalar {
    match rng.gen_range(0..5) {
        0 => CycScalar::zero(l),
        1 => CycScalar::one(l),
        2 => CycScalar::from_i64(l, -1),
        3 => CycScalar::i(l),
        _ => CycScalar::i(l).scale(&q(-1)),
    }
}

pub(crate) fn random_matrix<R: Rng>(rng: &mut R, d: usize, l: u64, density: f64) -> CMat {
    let mut x = CMat::zeros(d, d, l);
    for r in 0..d {
        for c in 0..d {
            if rng.gen_bool(density) {
                x.set(r, c, random_scalar(rng, l));
            }
        }
    }
    x
}

/// `Σ_n e_n ⊗ x_n` with nonzero components only.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoopElement {
    dim: usize,
    conductor: u64,
    terms: BTreeMap<i64, CMat>,
}

impl LoopElement {
    pub fn zero(dim: usize, conductor: u64) -> Self {
        LoopElement { dim, conductor, terms: BTreeMap::new() }
    }

    pub fn monomial(n: i64, x: CMat) -> Self {
        let mut e = Self::zero(x.rows(), x.conductor());
        e.add_term(n, x);
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn terms(&self) -> &BTreeMap<i64, CMat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, n: i64, x: CMat) {
        assert_eq!((x.rows(), x.conductor()), (self.dim, self.conductor));
        let y = match self.terms.remove(&n) {
            Some(old) => old.add(&x),
            None => x,
        };
        if !y.is_zero() {
            self.terms.insert(n, y);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&n, x) in &o.terms {
            out.add_term(n, x.clone());
        }
        out
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        let mut out = Self::zero(self.dim, self.conductor);
        for (&n, x) in &self.terms {
            out.add_term(n, x.scale(s));
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&CycScalar::from_i64(self.conductor, -1)))
    }

    /// Pointwise bracket `[e_m⊗x, e_n⊗y] = e_{m+n}⊗[x,y]`.
    pub fn bracket(&self, o: &Self) -> Self {
        let mut out = Self::zero(self.dim, self.conductor);
        for (&m, x) in &self.terms {
            for (&n, y) in &o.terms {
                out.add_term(m + n, x.commutator(y));
            }
        }
        out
    }

    /// Conjugates every component: `x ↦ P⁻¹ x P`.
    pub fn conjugate(&self, p: &CMat, p_inv: &CMat) -> Self {
        let mut out = Self::zero(p.cols(), p.conductor());
        for (&n, x) in &self.terms {
            out.add_term(n, p_inv.mul(x).mul(p));
        }
        out
    }

    pub fn lift(&self, conductor: u64) -> Self {
        let mut out = Self::zero(self.dim, conductor);
        for (&n, x) in &self.terms {
            out.add_term(n, x.lift(conductor));
        }
        out
    }
}

#[derive(Serialize, Deserialize)]
struct LoopTerm {
    mode: i64,
    matrix: CMat,
}

impl Serialize for LoopElement {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let terms: Vec<LoopTerm> = self.terms.iter().map(|(&mode, m)| LoopTerm { mode, matrix: m.clone() }).collect();
        #[derive(Serialize)]
        struct Repr {
            dim: usize,
            conductor: u64,
            terms: Vec<LoopTerm>,
        }
        Repr { dim: self.dim, conductor: self.conductor, terms }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for LoopElement {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            dim: usize,
            conductor: u64,
            terms: Vec<LoopTerm>,
        }
        let r = Repr::deserialize(d)?;
        let mut out = LoopElement::zero(r.dim, r.conductor);
        for t in r.terms {
            if t.matrix.rows() != r.dim || t.matrix.cols() != r.dim {
                return Err(serde::de::Error::custom(format!("mode {} matrix is not {}x{}", t.mode, r.dim, r.dim)));
            }
            out.add_term(t.mode, t.matrix.lift(r.conductor));
        }
        Ok(out)
    }
}

/// `(z, ξ, t)` in `C ⊕ L ⊕ C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DoubleExtElement {
    pub z: CycScalar,
    #[serde(rename = "loop")]
    pub loop_part: LoopElement,
    pub t: CycScalar,
}

impl DoubleExtElement {
    pub fn from_loop(x: LoopElement) -> Self {
        let l = x.conductor();
        DoubleExtElement { z: CycScalar::zero(l), loop_part: x, t: CycScalar::zero(l) }
    }

    pub fn add(&self, o: &Self) -> Self {
        DoubleExtElement { z: &self.z + &o.z, loop_part: self.loop_part.add(&o.loop_part), t: &self.t + &o.t }
    }

    pub fn scale(&self, s: &CycScalar) -> Self {
        DoubleExtElement { z: &self.z * s, loop_part: self.loop_part.scale(s), t: &self.t * s }
    }

    pub fn is_zero(&self) -> bool {
        self.z.is_zero() && self.t.is_zero() && self.loop_part.is_zero()
    }
}

/// `D_ν` applied to the loop part; `z` and `t` are killed.
pub fn apply_derivation(ctx: &LoopContext, a: &DoubleExtElement) -> DoubleExtElement {
    DoubleExtElement::from_loop(derive_loop(ctx, &a.loop_part))
}

fn derive_loop(ctx: &LoopContext, x: &LoopElement) -> LoopElement {
    let alg = &ctx.algebra;
    let mut out = LoopElement::zero(x.dim, x.conductor);
    for (&n, m) in &x.terms {
        let mut y = CMat::zeros(x.dim, x.dim, x.conductor);
        for (r, c, e) in m.entries() {
            if !e.is_zero() {
                y.set(r, c, e * &ctx.derivation_scalar(n, &alg.unit_weight(r, c)));
            }
        }
        out.add_term(n, y);
    }
    out
}

/// `b(ξ, η) = Σ_n ⟨x_n, y_{−n}⟩`.
pub fn loop_pairing(ctx: &LoopContext, x: &LoopElement, y: &LoopElement) -> CycScalar {
    let mut s = CycScalar::zero(ctx.conductor());
    for (&n, a) in &x.terms {
        if let Some(b) = y.terms.get(&-n) {
            s = &s + &ctx.algebra.pairing(a, b);
        }
    }
    s
}

pub fn bracket(ctx: &LoopContext, a: &DoubleExtElement, b: &DoubleExtElement) -> Result<DoubleExtElement, LoopError> {
    ctx.check(&a.loop_part)?;
    ctx.check(&b.loop_part)?;
    let da = derive_loop(ctx, &a.loop_part);
    let db = derive_loop(ctx, &b.loop_part);
    let z = loop_pairing(ctx, &da, &b.loop_part);
    let loop_part = a.loop_part.bracket(&b.loop_part).add(&db.scale(&a.t)).sub(&da.scale(&b.t));
    Ok(DoubleExtElement { z, loop_part, t: CycScalar::zero(ctx.conductor()) })
}

/// `κ((z₁,ξ₁,t₁), (z₂,ξ₂,t₂)) = b(ξ₁,ξ₂) + z₁t₂ + z₂t₁`.
pub fn kappa_form(ctx: &LoopContext, a: &DoubleExtElement, b: &DoubleExtElement) -> Result<CycScalar, LoopError> {
    ctx.check(&a.loop_part)?;
    ctx.check(&b.loop_part)?;
    let s = loop_pairing(ctx, &a.loop_part, &b.loop_part);
    Ok(&(&s + &(&a.z * &b.t)) + &(&b.z * &a.t))
}

/// One weight component `e_mode ⊗ x` with `x` of weight `root` (or zero).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightComponent {
    pub mode: i64,
    pub root: Option<Root>,
    pub matrix: CMat,
}

/// Splits each mode component into `t₀`-weight components.
pub fn weight_decompose(ctx: &LoopContext, x: &LoopElement) -> Vec<WeightComponent> {
    let alg = &ctx.algebra;
    let mut out = Vec::new();
    for (&n, m) in &x.terms {
        let mut parts: BTreeMap<Vec<i64>, CMat> = BTreeMap::new();
        for (r, c, e) in m.entries() {
            if e.is_zero() {
                continue;
            }
            let p = parts.entry(alg.unit_weight(r, c)).or_insert_with(|| CMat::zeros(x.dim, x.dim, x.conductor));
            p.set(r, c, e.clone());
        }
        for (w, matrix) in parts {
            out.push(WeightComponent { mode: n, root: weight_root(&w), matrix });
        }
    }
    out
}

/// Modes at which the weight `a` (or the zero weight) occurs in the twisted
/// loop algebra, as residues mod the twist order.
pub fn mode_residues(ctx: &LoopContext, a: Option<&Root>) -> Vec<i64> {
    let alg = &ctx.algebra;
    let l = ctx.conductor();
    let mut units = Vec::new();
    for p in 0..alg.dim {
        for r in 0..alg.dim {
            if weight_root(&alg.unit_weight(p, r)).as_ref() == a {
                let x = alg.project(&CMat::unit(alg.dim, l, p, r));
                if !x.is_zero() {
                    units.push(x);
                }
            }
        }
    }
    (0..ctx.twist.order() as i64).filter(|&n| units.iter().any(|x| !ctx.twist.project_mode(n, x).is_zero())).collect()
}

/// Outcome of the bracket identities on one triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityChecks {
    pub antisymmetry: bool,
    pub jacobi: bool,
    pub invariance: bool,
    pub derivation_skew: bool,
}

impl IdentityChecks {
    pub fn all(&self) -> bool {
        self.antisymmetry && self.jacobi && self.invariance && self.derivation_skew
    }
}

/// Antisymmetry, Jacobi, `κ`-invariance and skewness of `D_ν` on `(a, b, c)`.
pub fn identity_checks(
    ctx: &LoopContext,
    a: &DoubleExtElement,
    b: &DoubleExtElement,
    c: &DoubleExtElement,
) -> Result<IdentityChecks, LoopError> {
    let ab = bracket(ctx, a, b)?;
    let bc = bracket(ctx, b, c)?;
    let antisymmetry = ab.add(&bracket(ctx, b, a)?).is_zero();
    let j = bracket(ctx, a, &bc)?.add(&bracket(ctx, b, &bracket(ctx, c, a)?)?).add(&bracket(ctx, c, &ab)?);
    let invariance = kappa_form(ctx, &ab, c)? == kappa_form(ctx, a, &bc)?;
    let da = apply_derivation(ctx, a);
    let db = apply_derivation(ctx, b);
    let skew = &kappa_form(ctx, &da, b)? + &kappa_form(ctx, a, &db)?;
    Ok(IdentityChecks { antisymmetry, jacobi: j.is_zero(), invariance, derivation_skew: skew.is_zero() })
}

/// The standard context `(standard model, ψ)` for a kind with slant `mu`.
pub fn standard_context(kind: LarsKind, rank: usize, mu: Functional, conductor: u64) -> Result<LoopContext, LoopError> {
    LoopContext::standard(AffinisationSpec::standard(kind, rank).with_mu(mu), conductor)
}

/// The isomorphism `Φ̂` of double extensions given by a certificate.
///
/// Each weight component `e_n ⊗ x_α` goes to `e_{n'} ⊗ x_α` with
/// `n' = N_ψ(n/N_φ − μ(α♯))`; `z` and `t` are kept. The input is in model
/// coordinates (see [`StandardizationCertificate::to_model`]).
pub fn phi_hat(
    cert: &StandardizationCertificate,
    spec_src: &AffinisationSpec,
    spec_dst: &AffinisationSpec,
    a: &DoubleExtElement,
) -> Result<DoubleExtElement, LoopError> {
    let nu = &spec_src.slant_nu;
    if *spec_src != cert.source_spec(nu) {
        return Err(LoopError::SpecMismatch("source".into()));
    }
    if *spec_dst != cert.target_spec(nu) {
        return Err(LoopError::SpecMismatch("target".into()));
    }
    let cerr = |e: crate::autnorm::AutError| LoopError::Certificate(e.to_string());
    let src = cert.source_context(nu).map_err(cerr)?;
    let dst = cert.target_context(nu).map_err(cerr)?;
    src.check(&a.loop_part)?;
    if let Some((&n, _)) = a.loop_part.terms.iter().find(|(&n, x)| !src.in_mode(n, x)) {
        return Err(LoopError::NotInLoopAlgebra(n));
    }
    let mut out = LoopElement::zero(a.loop_part.dim, a.loop_part.conductor);
    for w in weight_decompose(&src, &a.loop_part) {
        let m = cert.relabel(w.root.as_ref(), w.mode).ok_or_else(|| {
            LoopError::FractionalMode(format!("{} at {}", w.mode, w.root.map(|r| r.to_string()).unwrap_or("0".into())))
        })?;
        if !dst.in_mode(m, &w.matrix) {
            return Err(LoopError::TargetCheck(m));
        }
        out.add_term(m, w.matrix);
    }
    Ok(DoubleExtElement { z: a.z.clone(), loop_part: out, t: a.t.clone() })
}

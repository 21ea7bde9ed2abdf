//! Locally affine root systems, affinisation data and the i-picture Cartan.
//!
//! Cartan-side vectors are stored as real triples `(Z, H, T)`; the complex
//! vector they stand for is `(iZ, H, −iT)`. In these coordinates
//! `(α, n)(Z, H, T) = α(H) + T·(n/N + ν(α♯))` with no complex scalars.

use crate::rational::{q, Q};
use crate::rootdata::{coroot, enumerate_roots, sharp, CartanVector, Functional, Root, RootSystem, RootSystemKind};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LarsKind {
    A1,
    B1,
    C1,
    D1,
    B2,
    C2,
    BC2,
}

impl LarsKind {
    pub const ALL: [LarsKind; 7] =
        [LarsKind::A1, LarsKind::B1, LarsKind::C1, LarsKind::D1, LarsKind::B2, LarsKind::C2, LarsKind::BC2];

    /// Order of the standard twist: 1 or 2.
    pub fn twist_order(self) -> u64 {
        match self {
            LarsKind::B2 | LarsKind::C2 | LarsKind::BC2 => 2,
            _ => 1,
        }
    }

    /// Whether `base` can carry this kind. `BC2` accepts B or C bases; its
    /// finite parts are `B ∪ C` either way.
    pub fn compatible(self, base: RootSystemKind) -> bool {
        use RootSystemKind as K;
        matches!(
            (self, base),
            (LarsKind::A1, K::A)
                | (LarsKind::B1, K::B)
                | (LarsKind::C1, K::C)
                | (LarsKind::D1, K::D)
                | (LarsKind::B2, K::B)
                | (LarsKind::C2, K::C)
                | (LarsKind::BC2, K::B)
                | (LarsKind::BC2, K::C)
        )
    }

    /// The base kind used by the standard models.
    pub fn base_kind(self) -> RootSystemKind {
        match self {
            LarsKind::A1 => RootSystemKind::A,
            LarsKind::B1 | LarsKind::B2 | LarsKind::BC2 => RootSystemKind::B,
            LarsKind::C1 | LarsKind::C2 => RootSystemKind::C,
            LarsKind::D1 => RootSystemKind::D,
        }
    }
}

impl fmt::Display for LarsKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum AffineError {
    #[error("{lars} is not compatible with a base of type {base:?}")]
    KindMismatch { lars: LarsKind, base: RootSystemKind },
    #[error("{0} is not a finite root of this affinisation")]
    RootNotInBase(String),
    #[error("the root (0, {0}) is not compact")]
    NonCompact(i64),
    #[error("twist order must be positive")]
    ZeroOrder,
    #[error("functional index {index} outside rank {rank}")]
    RankMismatch { index: usize, rank: usize },
}

/// Base roots, twist order and slants of an affinisation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffinisationSpec {
    pub base: RootSystem,
    pub lars: LarsKind,
    pub twist_order: u64,
    #[serde(default)]
    pub slant_mu: Functional,
    #[serde(default)]
    pub slant_nu: Functional,
}

impl AffinisationSpec {
    pub fn new(
        base: RootSystem,
        lars: LarsKind,
        twist_order: u64,
        slant_mu: Functional,
        slant_nu: Functional,
    ) -> Result<Self, AffineError> {
        let s = AffinisationSpec { base, lars, twist_order, slant_mu, slant_nu };
        s.validate()?;
        Ok(s)
    }

    /// The standard unslanted affinisation of the given kind.
    pub fn standard(lars: LarsKind, rank: usize) -> Self {
        let base = RootSystem::new(lars.base_kind(), rank).expect("rank >= 2");
        AffinisationSpec {
            base,
            lars,
            twist_order: lars.twist_order(),
            slant_mu: Functional::zero(),
            slant_nu: Functional::zero(),
        }
    }

    pub fn with_mu(mut self, mu: Functional) -> Self {
        self.slant_mu = mu;
        self
    }

    pub fn with_nu(mut self, nu: Functional) -> Self {
        self.slant_nu = nu;
        self
    }

    pub fn with_order(mut self, n: u64) -> Self {
        self.twist_order = n;
        self
    }

    pub fn validate(&self) -> Result<(), AffineError> {
        if !self.lars.compatible(self.base.kind) {
            return Err(AffineError::KindMismatch { lars: self.lars, base: self.base.kind });
        }
        if self.twist_order == 0 {
            return Err(AffineError::ZeroOrder);
        }
        for f in [&self.slant_mu, &self.slant_nu] {
            if f.max_index() > self.base.rank {
                return Err(AffineError::RankMismatch { index: f.max_index(), rank: self.base.rank });
            }
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.base.rank
    }

    /// `μ + ν`, the slant that enters root evaluation.
    pub fn total_slant(&self) -> Functional {
        self.slant_mu.add(&self.slant_nu)
    }

    /// Finite parts of compact roots: the base roots, plus `±2ε_j` and
    /// `±ε_j` for `BC2`.
    pub fn finite_roots(&self) -> Vec<Root> {
        if self.lars == LarsKind::BC2 {
            let mut b = enumerate_roots(&RootSystem { kind: RootSystemKind::B, rank: self.base.rank });
            b.extend(enumerate_roots(&RootSystem { kind: RootSystemKind::C, rank: self.base.rank }));
            b.sort();
            b.dedup();
            b
        } else {
            enumerate_roots(&self.base)
        }
    }

    pub fn is_finite_root(&self, a: &Root) -> bool {
        if self.lars == LarsKind::BC2 {
            RootSystem { kind: RootSystemKind::B, rank: self.base.rank }.contains(a)
                || RootSystem { kind: RootSystemKind::C, rank: self.base.rank }.contains(a)
        } else {
            self.base.contains(a)
        }
    }

    /// The spec with slants removed.
    pub fn unslanted(&self) -> Self {
        AffinisationSpec { slant_mu: Functional::zero(), slant_nu: Functional::zero(), ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AffineRoot {
    #[serde(rename = "root")]
    pub finite_part: Option<Root>,
    pub mode: i64,
}

impl AffineRoot {
    pub fn new(a: Root, n: i64) -> Self {
        AffineRoot { finite_part: Some(a), mode: n }
    }

    pub fn imaginary(n: i64) -> Self {
        assert!(n != 0, "(0, 0) is not a root");
        AffineRoot { finite_part: None, mode: n }
    }

    pub fn is_compact(&self) -> bool {
        self.finite_part.is_some()
    }

    pub fn compact_part(&self) -> Result<&Root, AffineError> {
        self.finite_part.as_ref().ok_or(AffineError::NonCompact(self.mode))
    }
}

impl fmt::Display for AffineRoot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.finite_part {
            Some(a) => write!(f, "({a}, {})", self.mode),
            None => write!(f, "(0, {})", self.mode),
        }
    }
}

/// `(Z, H, T)` in the i-picture.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ExtCartanVector {
    #[serde(with = "crate::rational::ser")]
    pub z: Q,
    pub h: CartanVector,
    #[serde(with = "crate::rational::ser")]
    pub t: Q,
}

impl ExtCartanVector {
    pub fn new(z: Q, h: CartanVector, t: Q) -> Self {
        ExtCartanVector { z, h, t }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// The central element `bc`.
    pub fn bc() -> Self {
        Self::new(q(1), CartanVector::zero(), q(0))
    }

    /// The derivation element `bd`.
    pub fn bd() -> Self {
        Self::new(q(0), CartanVector::zero(), q(1))
    }

    pub fn from_h(h: CartanVector) -> Self {
        Self::new(q(0), h, q(0))
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(&self.z + &o.z, self.h.add(&o.h), &self.t + &o.t)
    }

    pub fn sub(&self, o: &Self) -> Self {
        Self::new(&self.z - &o.z, self.h.sub(&o.h), &self.t - &o.t)
    }

    pub fn scale(&self, s: &Q) -> Self {
        Self::new(&self.z * s, self.h.scale(s), &self.t * s)
    }

    /// The invariant form `p(H, H′) − Z·T′ − Z′·T`, the i-picture image of `κ`.
    pub fn form(&self, o: &Self) -> Q {
        self.h.pairing(&o.h) - &self.z * &o.t - &o.z * &self.t
    }

    /// `bc`, `E_1..E_rank`, `bd`.
    pub fn basis(rank: usize) -> Vec<Self> {
        let mut out = vec![Self::bc()];
        out.extend((1..=rank).map(|j| Self::from_h(CartanVector::basis(j))));
        out.push(Self::bd());
        out
    }
}

/// `λ = (λ_c, λ⁰, λ_d)`, paired as `λ_c·Z + λ⁰(H) + λ_d·T`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Weight {
    #[serde(with = "crate::rational::ser")]
    pub lc: Q,
    pub l0: Functional,
    #[serde(with = "crate::rational::ser")]
    pub ld: Q,
}

impl Weight {
    pub fn new(lc: Q, l0: Functional, ld: Q) -> Self {
        Weight { lc, l0, ld }
    }

    pub fn pair(&self, v: &ExtCartanVector) -> Q {
        &self.lc * &v.z + self.l0.eval(&v.h) + &self.ld * &v.t
    }
}

pub fn lars_contains(kind: LarsKind, r: &AffineRoot, base: &RootSystem) -> Result<bool, AffineError> {
    if !kind.compatible(base.kind) {
        return Err(AffineError::KindMismatch { lars: kind, base: base.kind });
    }
    let a = match &r.finite_part {
        None => return Ok(r.mode != 0),
        Some(a) => a,
    };
    let spec = AffinisationSpec::standard(kind, base.rank);
    if !spec.is_finite_root(a) {
        return Ok(false);
    }
    let (res, step) = admissible_mode_step(kind, a)?;
    Ok((r.mode - res).rem_euclid(step) == 0)
}

/// Residue and step of the modes admissible for `a`.
pub fn admissible_mode_step(kind: LarsKind, a: &Root) -> Result<(i64, i64), AffineError> {
    let support = a.coeffs().len();
    let mag = a.coeffs().values().next().map(|c| c.abs()).unwrap_or(0);
    let short_b = support == 1 && mag == 1;
    let long_c = support == 1 && mag == 2;
    let mixed = support == 2;
    let bad = || AffineError::RootNotInBase(a.to_string());
    match kind {
        LarsKind::A1 | LarsKind::B1 | LarsKind::C1 | LarsKind::D1 => {
            let ok = match kind {
                LarsKind::A1 => mixed && a.coeffs().values().sum::<i64>() == 0,
                LarsKind::B1 => mixed || short_b,
                LarsKind::C1 => mixed || long_c,
                _ => mixed,
            };
            if ok && (mixed || short_b || long_c) {
                Ok((0, 1))
            } else {
                Err(bad())
            }
        }
        LarsKind::B2 => {
            if short_b {
                Ok((0, 1))
            } else if mixed {
                Ok((0, 2))
            } else {
                Err(bad())
            }
        }
        LarsKind::C2 => {
            if long_c {
                Ok((0, 2))
            } else if mixed {
                Ok((0, 1))
            } else {
                Err(bad())
            }
        }
        LarsKind::BC2 => {
            if long_c {
                Ok((1, 2))
            } else if short_b || mixed {
                Ok((0, 1))
            } else {
                Err(bad())
            }
        }
    }
}

fn check_rank(spec: &AffinisationSpec, h: &CartanVector) -> Result<(), AffineError> {
    if h.max_index() > spec.rank() {
        return Err(AffineError::RankMismatch { index: h.max_index(), rank: spec.rank() });
    }
    Ok(())
}

/// `n/N + (μ+ν)(α♯)`, the coefficient of `T` in `(α, n)`.
pub fn t_coefficient(spec: &AffinisationSpec, r: &AffineRoot) -> Q {
    let n = Q::new(r.mode.into(), (spec.twist_order as i64).into());
    match &r.finite_part {
        Some(a) => n + spec.total_slant().eval(&sharp(&a.as_functional())),
        None => n,
    }
}

pub fn eval_root(spec: &AffinisationSpec, r: &AffineRoot, v: &ExtCartanVector) -> Result<Q, AffineError> {
    check_rank(spec, &v.h)?;
    let fin = match &r.finite_part {
        Some(a) => a.eval(&v.h),
        None => Q::zero(),
    };
    Ok(fin + &v.t * t_coefficient(spec, r))
}

pub fn affine_coroot(spec: &AffinisationSpec, r: &AffineRoot) -> Result<ExtCartanVector, AffineError> {
    let a = r.compact_part()?;
    if a.coeffs().keys().any(|&j| j > spec.rank()) {
        return Err(AffineError::RankMismatch { index: *a.coeffs().keys().last().unwrap(), rank: spec.rank() });
    }
    let z = q(-2) * t_coefficient(spec, r) / q(a.norm_sq());
    Ok(ExtCartanVector::new(z, coroot(a), q(0)))
}

/// Weight in the `2π`-periodic convention: `(λ_c/N, λ⁰, N·λ_d)`.
pub fn reparam_weight(w: &Weight, n: u64) -> Weight {
    let nq = q(n as i64);
    Weight::new(&w.lc / &nq, w.l0.clone(), &w.ld * &nq)
}

/// Vector in the `2π`-periodic convention: `(N·Z, H, T/N)`.
pub fn reparam_vector(v: &ExtCartanVector, n: u64) -> ExtCartanVector {
    let nq = q(n as i64);
    ExtCartanVector::new(&v.z * &nq, v.h.clone(), &v.t / &nq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;

    fn e(j: usize) -> CartanVector {
        CartanVector::basis(j)
    }

    #[test]
    fn membership_examples() {
        let b3 = RootSystem::new(RootSystemKind::B, 3).unwrap();
        let c3 = RootSystem::new(RootSystemKind::C, 3).unwrap();
        assert!(lars_contains(LarsKind::BC2, &AffineRoot::new(Root::short(1, 1), 1), &b3).unwrap());
        assert!(!lars_contains(LarsKind::BC2, &AffineRoot::new(Root::short(1, 2), 2), &b3).unwrap());
        assert!(lars_contains(LarsKind::C2, &AffineRoot::new(Root::pair(1, 1, 2, -1), 1), &c3).unwrap());
        assert!(lars_contains(LarsKind::A1, &AffineRoot::new(Root::short(1, 1), 0), &b3).is_err());
        assert_eq!(admissible_mode_step(LarsKind::B2, &Root::short(1, 1)), Ok((0, 1)));
        assert_eq!(admissible_mode_step(LarsKind::B2, &Root::pair(1, 1, 2, 1)), Ok((0, 2)));
        assert_eq!(admissible_mode_step(LarsKind::BC2, &Root::short(1, 2)), Ok((1, 2)));
        assert!(admissible_mode_step(LarsKind::D1, &Root::short(1, 1)).is_err());
    }

    // Membership straight from the realization sets, written independently
    // of the residue/step table.
    fn realization(kind: LarsKind, a: &Root, n: i64) -> bool {
        let rank = 4;
        let in_sys = |k: RootSystemKind| RootSystem { kind: k, rank }.contains(a);
        let even = n % 2 == 0;
        use RootSystemKind as K;
        match kind {
            LarsKind::A1 => in_sys(K::A),
            LarsKind::B1 => in_sys(K::B),
            LarsKind::C1 => in_sys(K::C),
            LarsKind::D1 => in_sys(K::D),
            LarsKind::B2 => (in_sys(K::B) && even) || (a.coeffs().len() == 1 && a.norm_sq() == 1 && !even),
            LarsKind::C2 => (in_sys(K::C) && even) || (in_sys(K::D) && !even),
            LarsKind::BC2 => (in_sys(K::B) && even) || ((in_sys(K::B) || in_sys(K::C)) && !even),
        }
    }

    #[test]
    fn membership_matches_realization_sets() {
        let rank = 4;
        let mut all = Vec::new();
        for k in [RootSystemKind::B, RootSystemKind::C] {
            all.extend(enumerate_roots(&RootSystem { kind: k, rank }));
        }
        all.sort();
        all.dedup();
        for kind in LarsKind::ALL {
            let base = RootSystem::new(kind.base_kind(), rank).unwrap();
            for a in &all {
                for n in -8..=8 {
                    let got = lars_contains(kind, &AffineRoot::new(a.clone(), n), &base).unwrap();
                    assert_eq!(got, realization(kind, a, n), "{kind} {a} {n}");
                    if kind.twist_order() == 1 && base.contains(a) {
                        assert!(got);
                    }
                }
            }
        }
    }

    #[test]
    fn root_evaluation() {
        let a2 = RootSystem::new(RootSystemKind::A, 2).unwrap();
        let s1 = AffinisationSpec::new(a2, LarsKind::A1, 1, Functional::zero(), Functional::zero()).unwrap();
        let a = Root::pair(1, 1, 2, -1);
        let v = ExtCartanVector::new(q(5), e(1), q(2));
        assert_eq!(eval_root(&s1, &AffineRoot::new(a.clone(), 3), &v).unwrap(), q(7));
        let zv = ExtCartanVector::new(q(5), CartanVector::zero(), q(0));
        assert_eq!(eval_root(&s1, &AffineRoot::new(a.clone(), 3), &zv).unwrap(), q(0));
        let mu = Functional::from_pairs(&[(2, qf(-1, 2))]);
        let s2 = AffinisationSpec::new(a2, LarsKind::A1, 2, mu, Functional::zero()).unwrap();
        let v2 = ExtCartanVector::new(q(0), CartanVector::zero(), q(2));
        assert_eq!(eval_root(&s2, &AffineRoot::new(a, 1), &v2).unwrap(), q(2));
    }

    #[test]
    fn coroot_examples() {
        let s1 = AffinisationSpec::standard(LarsKind::A1, 2);
        let a = Root::pair(1, 1, 2, -1);
        let c = affine_coroot(&s1, &AffineRoot::new(a.clone(), 3)).unwrap();
        assert_eq!(c, ExtCartanVector::new(q(-3), e(1).sub(&e(2)), q(0)));
        let c0 = affine_coroot(&s1, &AffineRoot::new(a.clone(), 0)).unwrap();
        assert_eq!(c0, ExtCartanVector::from_h(coroot(&a)));
        // μ(α♯) = −1/2 with μ = −ε1/2
        let s2 = s1.clone().with_order(2).with_mu(Functional::from_pairs(&[(1, qf(-1, 2))]));
        let c2 = affine_coroot(&s2, &AffineRoot::new(a, 1)).unwrap();
        assert_eq!(c2.z, q(0));
        assert!(affine_coroot(&s1, &AffineRoot::imaginary(1)).is_err());
    }

    #[test]
    fn coroot_evaluates_to_two() {
        for kind in LarsKind::ALL {
            for rank in 2..=4 {
                let nu = Functional::from_dense(&(1..=rank).map(|j| qf(j as i64, 7)).collect::<Vec<_>>());
                let spec = AffinisationSpec::standard(kind, rank).with_nu(nu);
                for a in spec.finite_roots() {
                    for n in -8..=8 {
                        let r = AffineRoot::new(a.clone(), n);
                        let c = affine_coroot(&spec, &r).unwrap();
                        assert_eq!(eval_root(&spec, &r, &c).unwrap(), q(2));
                    }
                }
            }
        }
    }

    #[test]
    fn reparametrization() {
        let w = Weight::new(q(2), Functional::basis(1), q(3));
        assert_eq!(reparam_weight(&w, 2), Weight::new(q(1), Functional::basis(1), q(6)));
        assert_eq!(reparam_weight(&w, 1), w);
        let w0 = Weight::new(q(0), Functional::zero(), q(1));
        assert_eq!(reparam_weight(&w0, 3).ld, q(3));
        assert_eq!(reparam_vector(&ExtCartanVector::bc(), 2), ExtCartanVector::bc().scale(&q(2)));
        let v = ExtCartanVector::new(q(0), e(1), q(4));
        assert_eq!(reparam_vector(&v, 4), ExtCartanVector::new(q(0), e(1), q(1)));
        assert_eq!(reparam_vector(&v, 1), v);
    }

    #[test]
    fn spec_json() {
        let s: AffinisationSpec = serde_json::from_str(
            r#"{"base":{"kind":"C","rank":3},"lars":"C2","twist_order":2,"slant_mu":{"coords":{"1":"1/2"}},"slant_nu":{"coords":{}}}"#,
        )
        .unwrap();
        assert_eq!(s.slant_mu, Functional::from_pairs(&[(1, qf(1, 2))]));
        let r: AffineRoot = serde_json::from_str(r#"{"root":null,"mode":3}"#).unwrap();
        assert!(!r.is_compact());
    }
}

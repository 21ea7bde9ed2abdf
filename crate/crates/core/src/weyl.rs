//! Affine Weyl groups as translations ⋊ signed permutations.

use crate::affine::{
    admissible_mode_step, affine_coroot, eval_root, lars_contains, AffineError, AffineRoot, AffinisationSpec,
    ExtCartanVector, LarsKind, Weight,
};
use crate::rational::{q, Q};
use crate::rootdata::{coroot, reflect_finite, sharp, CartanVector, Functional, Root};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum WeylError {
    #[error(transparent)]
    Affine(#[from] AffineError),
    #[error("{0} is not a root of this affinisation")]
    NotAdmissible(String),
    #[error("invalid signed permutation: {0}")]
    BadElement(String),
}

/// Which sign patterns the finite Weyl group allows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignRule {
    /// Type A: permutations only.
    None,
    /// Type D: an even number of sign changes.
    Even,
    /// Types B, C, BC.
    Any,
}

impl SignRule {
    pub fn of(kind: LarsKind) -> SignRule {
        match kind {
            LarsKind::A1 => SignRule::None,
            LarsKind::D1 => SignRule::Even,
            _ => SignRule::Any,
        }
    }
}

/// `w(E_j) = signs[j-1] · E_{perm[j-1]}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWeylElement {
    perm: Vec<usize>,
    signs: Vec<i8>,
}

impl FiniteWeylElement {
    pub fn identity(rank: usize) -> Self {
        FiniteWeylElement { perm: (1..=rank).collect(), signs: vec![1; rank] }
    }

    pub fn new(perm: Vec<usize>, signs: Vec<i8>) -> Result<Self, WeylError> {
        let n = perm.len();
        if signs.len() != n {
            return Err(WeylError::BadElement("perm and signs differ in length".into()));
        }
        let mut seen = vec![false; n + 1];
        for &p in &perm {
            if p == 0 || p > n || seen[p] {
                return Err(WeylError::BadElement(format!("{perm:?} is not a permutation of 1..{n}")));
            }
            seen[p] = true;
        }
        if signs.iter().any(|s| *s != 1 && *s != -1) {
            return Err(WeylError::BadElement("signs must be ±1".into()));
        }
        Ok(FiniteWeylElement { perm, signs })
    }

    pub fn rank(&self) -> usize {
        self.perm.len()
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn allowed(&self, rule: SignRule) -> bool {
        let neg = self.signs.iter().filter(|s| **s < 0).count();
        match rule {
            SignRule::None => neg == 0,
            SignRule::Even => neg % 2 == 0,
            SignRule::Any => true,
        }
    }

    /// The finite reflection `r_α`.
    pub fn reflection(a: &Root, rank: usize) -> Self {
        let mut perm = vec![0; rank];
        let mut signs = vec![1i8; rank];
        for j in 1..=rank {
            let img = reflect_finite(a, &CartanVector::basis(j));
            let (&k, v) = img.coords().iter().next().expect("reflection image is nonzero");
            perm[j - 1] = k;
            signs[j - 1] = if v.is_positive() { 1 } else { -1 };
        }
        FiniteWeylElement { perm, signs }
    }

    pub fn apply(&self, h: &CartanVector) -> CartanVector {
        let mut out = BTreeMap::new();
        for (&j, v) in h.coords() {
            assert!(j <= self.rank(), "vector index {j} outside rank {}", self.rank());
            let x = if self.signs[j - 1] > 0 { v.clone() } else { -v };
            out.insert(self.perm[j - 1], x);
        }
        CartanVector::from_map(out)
    }

    /// `self ∘ other`
    pub fn compose(&self, other: &Self) -> Self {
        let n = self.rank();
        let mut perm = vec![0; n];
        let mut signs = vec![1i8; n];
        for j in 0..n {
            let k = other.perm[j];
            perm[j] = self.perm[k - 1];
            signs[j] = other.signs[j] * self.signs[k - 1];
        }
        FiniteWeylElement { perm, signs }
    }

    pub fn inverse(&self) -> Self {
        let n = self.rank();
        let mut perm = vec![0; n];
        let mut signs = vec![1i8; n];
        for j in 0..n {
            let k = self.perm[j];
            perm[k - 1] = j + 1;
            signs[k - 1] = self.signs[j];
        }
        FiniteWeylElement { perm, signs }
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p == i + 1) && self.signs.iter().all(|&s| s == 1)
    }

    /// Every element allowed by `rule`, in a fixed order.
    pub fn all(rank: usize, rule: SignRule) -> Vec<Self> {
        let mut perms = Vec::new();
        let mut cur: Vec<usize> = (1..=rank).collect();
        permutations(&mut cur, 0, &mut perms);
        perms.sort();
        let sign_patterns: Vec<Vec<i8>> = match rule {
            SignRule::None => vec![vec![1; rank]],
            _ => (0..1u32 << rank)
                .map(|m| (0..rank).map(|j| if m >> j & 1 == 1 { -1 } else { 1 }).collect::<Vec<i8>>())
                .filter(|s| rule == SignRule::Any || s.iter().filter(|x| **x < 0).count() % 2 == 0)
                .collect(),
        };
        let mut out = Vec::with_capacity(perms.len() * sign_patterns.len());
        for p in &perms {
            for s in &sign_patterns {
                out.push(FiniteWeylElement { perm: p.clone(), signs: s.clone() });
            }
        }
        out
    }
}

fn permutations(cur: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == cur.len() {
        out.push(cur.clone());
        return;
    }
    for i in k..cur.len() {
        cur.swap(k, i);
        permutations(cur, k + 1, out);
        cur.swap(k, i);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Translation {
    pub y: CartanVector,
}

/// `τ_y ∘ w`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffWeylElement {
    pub trans: Translation,
    pub fin: FiniteWeylElement,
}

impl AffWeylElement {
    pub fn identity(rank: usize) -> Self {
        AffWeylElement { trans: Translation::default(), fin: FiniteWeylElement::identity(rank) }
    }

    pub fn new(y: CartanVector, fin: FiniteWeylElement) -> Self {
        AffWeylElement { trans: Translation { y }, fin }
    }

    pub fn translation(y: CartanVector, rank: usize) -> Self {
        Self::new(y, FiniteWeylElement::identity(rank))
    }

    /// `(y, w)·(y′, w′) = (y + w·y′, ww′)`
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.trans.y.add(&self.fin.apply(&other.trans.y)), self.fin.compose(&other.fin))
    }

    pub fn inverse(&self) -> Self {
        let wi = self.fin.inverse();
        Self::new(wi.apply(&self.trans.y).neg(), wi)
    }

    pub fn is_identity(&self) -> bool {
        self.trans.y.is_zero() && self.fin.is_identity()
    }
}

impl Serialize for AffWeylElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            translation: &'a CartanVector,
            perm: &'a [usize],
            signs: &'a [i8],
        }
        Raw { translation: &self.trans.y, perm: &self.fin.perm, signs: &self.fin.signs }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for AffWeylElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            translation: CartanVector,
            perm: Vec<usize>,
            signs: Vec<i8>,
        }
        let r = Raw::deserialize(d)?;
        let fin = FiniteWeylElement::new(r.perm, r.signs).map_err(serde::de::Error::custom)?;
        if r.translation.max_index() > fin.rank() {
            return Err(serde::de::Error::custom("translation outside the rank of the permutation"));
        }
        Ok(AffWeylElement::new(r.translation, fin))
    }
}

/// Row-echelon basis of an integer lattice.
fn integer_echelon(mut rows: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let n = rows.first().map(|r| r.len()).unwrap_or(0);
    let mut out = Vec::new();
    for col in 0..n {
        loop {
            let nonzero: Vec<usize> = (0..rows.len()).filter(|&i| !rows[i][col].is_zero()).collect();
            if nonzero.is_empty() {
                break;
            }
            let piv = *nonzero.iter().min_by_key(|&&i| rows[i][col].abs()).unwrap();
            let p = rows[piv].clone();
            let mut done = true;
            for &i in &nonzero {
                if i == piv {
                    continue;
                }
                let f = rows[i][col].div_floor(&p[col]);
                for c in 0..n {
                    let t = &f * &p[c];
                    rows[i][c] -= t;
                }
                if !rows[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                let mut p = rows.remove(piv);
                if p[col].is_negative() {
                    p.iter_mut().for_each(|x| *x = -x.clone());
                }
                out.push(p);
                break;
            }
        }
        rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    out
}

/// Generators `(d_α/N)·α̌` of the translation lattice, reduced to a Z-basis.
pub fn translation_lattice(spec: &AffinisationSpec) -> Vec<CartanVector> {
    let rank = spec.rank();
    let nq = q(spec.twist_order as i64);
    let mut gens = Vec::new();
    for a in spec.finite_roots() {
        let (res, step) = admissible_mode_step(spec.lars, &a).expect("finite roots are admissible");
        let d = res.gcd(&step);
        gens.push(coroot(&a).scale(&(q(d) / &nq)).to_dense(rank));
    }
    let den = gens.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let rows: Vec<Vec<BigInt>> =
        gens.iter().map(|g| g.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect()).collect();
    let denq = Q::from_integer(den);
    integer_echelon(rows)
        .into_iter()
        .map(|r| CartanVector::from_dense(&r.into_iter().map(|x| Q::from_integer(x) / &denq).collect::<Vec<_>>()))
        .collect()
}

/// Coordinates of `y` in an echelon `basis` when `y` lies in the lattice.
pub fn lattice_coords(basis: &[CartanVector], y: &CartanVector, rank: usize) -> Option<Vec<BigInt>> {
    let mut rest = y.to_dense(rank);
    let mut coords = Vec::with_capacity(basis.len());
    for b in basis {
        let bd = b.to_dense(rank);
        let col = bd.iter().position(|x| !x.is_zero())?;
        let k = &rest[col] / &bd[col];
        if !k.is_integer() {
            return None;
        }
        for c in 0..rank {
            rest[c] -= &k * &bd[c];
        }
        coords.push(k.to_integer());
    }
    rest.iter().all(|x| x.is_zero()).then_some(coords)
}

pub fn reflect_affine(
    spec: &AffinisationSpec,
    r: &AffineRoot,
    v: &ExtCartanVector,
) -> Result<ExtCartanVector, WeylError> {
    let c = affine_coroot(spec, r)?;
    let a = eval_root(spec, r, v)?;
    Ok(v.sub(&c.scale(&a)))
}

/// `τ_y(Z, H, T) = (Z − p(H,y) + T·p(y,y)/2, H − T·y, T)`
pub fn translate(y: &CartanVector, v: &ExtCartanVector) -> ExtCartanVector {
    let z = &v.z - v.h.pairing(y) + &v.t * y.pairing(y) / q(2);
    ExtCartanVector::new(z, v.h.sub(&y.scale(&v.t)), v.t.clone())
}

/// Finite part with slant `ν`: `(Z + ν(f), H − f, T)` where
/// `f = H′ − w·H′` and `H′ = H + T·ν♯`.
pub fn finite_act_slanted(nu: &Functional, w: &FiniteWeylElement, v: &ExtCartanVector) -> ExtCartanVector {
    let hp = v.h.add(&sharp(nu).scale(&v.t));
    let f = hp.sub(&w.apply(&hp));
    ExtCartanVector::new(&v.z + nu.eval(&f), v.h.sub(&f), v.t.clone())
}

/// Unslanted action: `w` on `H` only, then `τ_y`.
pub fn act(w: &AffWeylElement, v: &ExtCartanVector) -> ExtCartanVector {
    let fv = ExtCartanVector::new(v.z.clone(), w.fin.apply(&v.h), v.t.clone());
    translate(&w.trans.y, &fv)
}

/// Action with slant `ν` on the finite part.
pub fn act_slanted(nu: &Functional, w: &AffWeylElement, v: &ExtCartanVector) -> ExtCartanVector {
    translate(&w.trans.y, &finite_act_slanted(nu, &w.fin, v))
}

/// Action in the spec's own (total) slant; agrees with its reflections.
pub fn act_in(spec: &AffinisationSpec, w: &AffWeylElement, v: &ExtCartanVector) -> ExtCartanVector {
    act_slanted(&spec.total_slant(), w, v)
}

/// Normal form of a single reflection: `r_(α,n) = τ_{(n/N)α̌} ∘ r_α`.
pub fn letter(spec: &AffinisationSpec, r: &AffineRoot) -> Result<AffWeylElement, WeylError> {
    let a = r.compact_part()?;
    if !spec.is_finite_root(a) {
        return Err(WeylError::NotAdmissible(r.to_string()));
    }
    // Mode sets are only known here for standard specs; twisted source specs
    // are checked against their certificate by the caller.
    if spec.twist_order == spec.lars.twist_order() && !lars_contains(spec.lars, r, &spec.base)? {
        return Err(WeylError::NotAdmissible(r.to_string()));
    }
    let y = coroot(a).scale(&Q::new(r.mode.into(), (spec.twist_order as i64).into()));
    Ok(AffWeylElement::new(y, FiniteWeylElement::reflection(a, spec.rank())))
}

/// Operator product of the letters, leftmost outermost.
pub fn word_reduce(spec: &AffinisationSpec, word: &[AffineRoot]) -> Result<AffWeylElement, WeylError> {
    let mut acc = AffWeylElement::identity(spec.rank());
    for r in word {
        acc = acc.compose(&letter(spec, r)?);
    }
    Ok(acc)
}

/// `Σ_s (α_s(H) + T·ν(α_s♯)) · r_{α_n}…r_{α_{s+1}}(α̌_s)`, with `α_1`
/// applied first.
pub fn f_word(nu: &Functional, letters: &[Root], v: &ExtCartanVector) -> CartanVector {
    let mut f = CartanVector::zero();
    for (s, a) in letters.iter().enumerate() {
        let coef = a.eval(&v.h) + &v.t * nu.eval(&sharp(&a.as_functional()));
        let mut img = coroot(a);
        for b in &letters[s + 1..] {
            img = reflect_finite(b, &img);
        }
        f = f.add(&img.scale(&coef));
    }
    f
}

/// `λ_ν = (λ_c, λ⁰ − λ_c·ν, λ_d)`
pub fn slant_weight(lam: &Weight, nu: &Functional) -> Weight {
    Weight::new(lam.lc.clone(), lam.l0.sub(&nu.scale(&lam.lc)), lam.ld.clone())
}

/// `χ_ν = (χ_c, χ⁰ + χ_d·ν♯, χ_d)`
pub fn slant_vector(chi: &ExtCartanVector, nu: &Functional) -> ExtCartanVector {
    ExtCartanVector::new(chi.z.clone(), chi.h.add(&sharp(nu).scale(&chi.t)), chi.t.clone())
}

/// Both sides of `λ(ŵ.χ − χ) = λ_ν(ŵ₀.χ_ν − χ_ν)`, slanted on the left.
pub fn unslanted_action_check(nu: &Functional, w: &AffWeylElement, lam: &Weight, chi: &ExtCartanVector) -> (Q, Q) {
    let lhs = lam.pair(&act_slanted(nu, w, chi).sub(chi));
    let lam_nu = slant_weight(lam, nu);
    let chi_nu = slant_vector(chi, nu);
    let rhs = lam_nu.pair(&act(w, &chi_nu).sub(&chi_nu));
    (lhs, rhs)
}

/// Images of the basis `bc, E_1..E_rank, bd` under a linear map.
pub fn operator_matrix(rank: usize, f: impl Fn(&ExtCartanVector) -> ExtCartanVector) -> Vec<ExtCartanVector> {
    ExtCartanVector::basis(rank).iter().map(f).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use crate::rootdata::RootSystemKind;

    fn e(j: usize) -> CartanVector {
        CartanVector::basis(j)
    }

    // Compose reflections one at a time, rightmost first.
    fn compose_reflections(spec: &AffinisationSpec, word: &[AffineRoot], v: &ExtCartanVector) -> ExtCartanVector {
        word.iter().rev().fold(v.clone(), |acc, r| reflect_affine(spec, r, &acc).unwrap())
    }

    #[test]
    fn reflection_examples() {
        let s = AffinisationSpec::standard(LarsKind::A1, 2);
        let a = Root::pair(1, 1, 2, -1);
        let v = ExtCartanVector::from_h(e(1));
        assert_eq!(reflect_affine(&s, &AffineRoot::new(a.clone(), 0), &v).unwrap(), ExtCartanVector::from_h(e(2)));
        let w = reflect_affine(&s, &AffineRoot::new(a.clone(), 1), &ExtCartanVector::bd()).unwrap();
        assert_eq!(w, ExtCartanVector::new(q(1), e(2).sub(&e(1)), q(1)));
        let fixed = ExtCartanVector::from_h(e(1).add(&e(2)));
        assert_eq!(reflect_affine(&s, &AffineRoot::new(a, 3), &fixed).unwrap(), fixed);
        assert!(reflect_affine(&s, &AffineRoot::imaginary(1), &fixed).is_err());
    }

    #[test]
    fn translation_examples() {
        assert_eq!(translate(&e(1), &ExtCartanVector::bd()), ExtCartanVector::new(qf(1, 2), e(1).neg(), q(1)));
        let v = ExtCartanVector::new(q(3), e(2), q(5));
        assert_eq!(translate(&CartanVector::zero(), &v), v);
        assert_eq!(translate(&e(1), &ExtCartanVector::from_h(e(1))), ExtCartanVector::new(q(-1), e(1), q(0)));
    }

    #[test]
    fn lattice_examples() {
        let a1 = translation_lattice(&AffinisationSpec::standard(LarsKind::A1, 2));
        assert_eq!(a1, vec![e(1).sub(&e(2))]);
        let b2 = translation_lattice(&AffinisationSpec::standard(LarsKind::B2, 3));
        for j in 1..=3 {
            assert!(lattice_coords(&b2, &e(j), 3).is_some());
            assert!(lattice_coords(&b2, &e(j).scale(&qf(1, 2)), 3).is_none());
        }
        let bc2 = translation_lattice(&AffinisationSpec::standard(LarsKind::BC2, 2));
        assert!(lattice_coords(&bc2, &e(1).scale(&qf(1, 2)), 2).is_some());
        let c2 = translation_lattice(&AffinisationSpec::standard(LarsKind::C2, 2));
        assert!(lattice_coords(&c2, &e(1).add(&e(2)).scale(&qf(1, 2)), 2).is_some());
        assert!(lattice_coords(&c2, &e(1).scale(&qf(1, 2)), 2).is_none());
    }

    #[test]
    fn word_reduction_examples() {
        let s = AffinisationSpec::standard(LarsKind::A1, 3);
        let a = Root::pair(1, 1, 2, -1);
        let n = 3;
        let w = word_reduce(&s, &[AffineRoot::new(a.clone(), 0), AffineRoot::new(a.clone(), n)]).unwrap();
        assert_eq!(w, AffWeylElement::translation(coroot(&a).scale(&q(-n)), 3));
        let r = word_reduce(&s, &[AffineRoot::new(a.clone(), 0)]).unwrap();
        assert_eq!(r, AffWeylElement::new(CartanVector::zero(), FiniteWeylElement::reflection(&a, 3)));
        let id = word_reduce(&s, &[AffineRoot::new(a.clone(), 0), AffineRoot::new(a, 0)]).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn reduced_words_act_like_composed_reflections() {
        for kind in LarsKind::ALL {
            let nu = Functional::from_pairs(&[(1, qf(1, 3)), (2, qf(-2, 5))]);
            let spec = AffinisationSpec::standard(kind, 2).with_nu(nu);
            let letters: Vec<AffineRoot> = spec
                .finite_roots()
                .into_iter()
                .flat_map(|a| (-2..=2).map(move |n| AffineRoot::new(a.clone(), n)))
                .filter(|r| lars_contains(kind, r, &spec.base).unwrap())
                .collect();
            for (i, l1) in letters.iter().enumerate() {
                let l2 = &letters[(i * 7 + 3) % letters.len()];
                let word = [l1.clone(), l2.clone()];
                let w = word_reduce(&spec, &word).unwrap();
                for b in ExtCartanVector::basis(2) {
                    assert_eq!(act_in(&spec, &w, &b), compose_reflections(&spec, &word, &b), "{kind} {word:?}");
                }
            }
        }
    }

    #[test]
    fn finite_group_sizes() {
        assert_eq!(FiniteWeylElement::all(3, SignRule::None).len(), 6);
        assert_eq!(FiniteWeylElement::all(3, SignRule::Even).len(), 24);
        assert_eq!(FiniteWeylElement::all(3, SignRule::Any).len(), 48);
        let ws = FiniteWeylElement::all(3, SignRule::Any);
        for a in &ws[..10] {
            assert!(a.compose(&a.inverse()).is_identity());
            for b in &ws[20..25] {
                let h = CartanVector::from_dense(&[q(1), q(2), q(5)]);
                assert_eq!(a.compose(b).apply(&h), a.apply(&b.apply(&h)));
            }
        }
    }

    #[test]
    fn reflections_respect_sign_rules() {
        for kind in LarsKind::ALL {
            let spec = AffinisationSpec::standard(kind, 3);
            for a in spec.finite_roots() {
                assert!(FiniteWeylElement::reflection(&a, 3).allowed(SignRule::of(kind)));
            }
        }
        let _ = RootSystemKind::A;
    }

    #[test]
    fn f_word_single_letter_and_pair() {
        let nu = Functional::from_pairs(&[(1, qf(1, 2))]);
        let spec = AffinisationSpec::standard(LarsKind::B1, 3).with_nu(nu.clone());
        let v = ExtCartanVector::new(q(2), CartanVector::from_dense(&[q(1), q(-3), qf(1, 4)]), q(3));
        let a = Root::pair(1, 1, 3, 1);
        let b = Root::short(2, 1);
        let f1 = f_word(&nu, &[a.clone()], &v);
        let direct = reflect_affine(&spec, &AffineRoot::new(a.clone(), 0), &v).unwrap().sub(&v);
        assert_eq!(direct, ExtCartanVector::new(nu.eval(&f1), f1.neg(), q(0)));
        let f2 = f_word(&nu, &[a.clone(), b.clone()], &v);
        let step = reflect_affine(&spec, &AffineRoot::new(a, 0), &v).unwrap();
        let both = reflect_affine(&spec, &AffineRoot::new(b, 0), &step).unwrap().sub(&v);
        assert_eq!(both, ExtCartanVector::new(nu.eval(&f2), f2.neg(), q(0)));
        assert!(f_word(&nu, &[], &v).is_zero());
    }

    #[test]
    fn slanted_action_is_conjugation_by_nu_sharp() {
        let nu = Functional::from_pairs(&[(1, q(1)), (2, q(-2))]);
        let spec = AffinisationSpec::standard(LarsKind::C1, 2);
        let w =
            word_reduce(&spec, &[AffineRoot::new(Root::short(1, 2), 1), AffineRoot::new(Root::pair(1, 1, 2, -1), 0)])
                .unwrap();
        let s = sharp(&nu);
        for b in ExtCartanVector::basis(2) {
            let conj = translate(&s, &act(&w, &translate(&s.neg(), &b)));
            assert_eq!(act_slanted(&nu, &w, &b), conj);
        }
    }

    #[test]
    fn slanted_and_unslanted_orbit_values_agree() {
        let nu = Functional::from_pairs(&[(1, qf(1, 3)), (3, qf(-1, 2))]);
        let spec = AffinisationSpec::standard(LarsKind::B2, 3);
        let w =
            word_reduce(&spec, &[AffineRoot::new(Root::short(1, 1), 1), AffineRoot::new(Root::pair(2, 1, 3, 1), 2)])
                .unwrap();
        let lam = Weight::new(q(2), Functional::from_dense(&[q(1), qf(-1, 2), q(3)]), q(7));
        let chi = ExtCartanVector::new(q(4), CartanVector::from_dense(&[qf(1, 5), q(0), q(1)]), q(1));
        let (l, r) = unslanted_action_check(&nu, &w, &lam, &chi);
        assert_eq!(l, r);
        let (l0, r0) = unslanted_action_check(&Functional::zero(), &w, &lam, &chi);
        assert_eq!(l0, r0);
    }

    #[test]
    fn json_shape() {
        let w = AffWeylElement::new(e(1), FiniteWeylElement::new(vec![2, 1, 3], vec![1, -1, 1]).unwrap());
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"translation":{"coords":{"1":"1/1"}},"perm":[2,1,3],"signs":[1,-1,1]}"#);
        assert_eq!(serde_json::from_str::<AffWeylElement>(&s).unwrap(), w);
    }
}

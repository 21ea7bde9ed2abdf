//! Exact arithmetic in cyclotomic fields `Q(ζ_L)`.
//!
//! Elements are stored in the power basis `1, ζ, …, ζ^(φ(L)-1)` reduced
//! modulo the `L`-th cyclotomic polynomial. Field tables are built once per
//! conductor and shared.

use crate::rational::{self, Q};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::LazyLock;
use std::sync::{Arc, Mutex};

#[derive(Debug)]
pub struct CycField {
    pub conductor: u64,
    pub degree: usize,
    /// `pow[k]` is `ζ^k` reduced, for `0 <= k < L`.
    pow: Vec<Vec<i64>>,
}

static FIELDS: LazyLock<Mutex<HashMap<u64, Arc<CycField>>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

fn poly_div_exact(num: &[i64], den: &[i64]) -> Vec<i64> {
    // Both monic-ish integer polynomials, coefficients low to high.
    let mut r = num.to_vec();
    let dd = den.len() - 1;
    let lead = *den.last().unwrap();
    let mut out = vec![0i64; r.len() - dd];
    for i in (0..out.len()).rev() {
        let c = r[i + dd] / lead;
        out[i] = c;
        for (j, d) in den.iter().enumerate() {
            r[i + j] -= c * d;
        }
    }
    debug_assert!(r.iter().all(|&x| x == 0));
    out
}

fn cyclotomic_poly(n: u64, memo: &mut HashMap<u64, Vec<i64>>) -> Vec<i64> {
    if let Some(p) = memo.get(&n) {
        return p.clone();
    }
    let mut p = vec![0i64; n as usize + 1];
    p[0] = -1;
    p[n as usize] = 1;
    for d in 1..n {
        if n % d == 0 {
            let pd = cyclotomic_poly(d, memo);
            p = poly_div_exact(&p, &pd);
        }
    }
    memo.insert(n, p.clone());
    p
}

impl CycField {
    fn build(conductor: u64) -> CycField {
        let mut memo = HashMap::new();
        let phi = cyclotomic_poly(conductor, &mut memo);
        let degree = phi.len() - 1;
        let mut pow = Vec::with_capacity(conductor as usize);
        let mut cur = vec![0i64; degree];
        cur[0] = 1;
        for _ in 0..conductor {
            pow.push(cur.clone());
            // multiply by x and reduce
            let top = cur[degree - 1];
            let mut next = vec![0i64; degree];
            for i in (1..degree).rev() {
                next[i] = cur[i - 1];
            }
            next[0] = 0;
            if top != 0 {
                for i in 0..degree {
                    next[i] -= top * phi[i];
                }
            }
            cur = next;
        }
        CycField { conductor, degree, pow }
    }

    pub fn get(conductor: u64) -> Arc<CycField> {
        assert!(conductor >= 1, "conductor must be positive");
        let mut map = FIELDS.lock().unwrap();
        map.entry(conductor).or_insert_with(|| Arc::new(CycField::build(conductor))).clone()
    }
}

/// An element of `Q(ζ_L)`.
#[derive(Clone)]
pub struct CycScalar {
    field: Arc<CycField>,
    coeffs: Vec<Q>,
}

impl PartialEq for CycScalar {
    fn eq(&self, other: &Self) -> bool {
        self.field.conductor == other.field.conductor && self.coeffs == other.coeffs
    }
}
impl Eq for CycScalar {}

impl fmt::Debug for CycScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                parts.push(format!("{}·z{}^{}", rational::to_string(c), self.field.conductor, k));
            }
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CycError {
    #[error("conductor {0} must be a positive multiple of 4")]
    BadConductor(u64),
    #[error("expected {expected} coefficients for conductor {conductor}, got {got}")]
    BadLength { conductor: u64, expected: usize, got: usize },
}

impl CycScalar {
    pub fn zero(conductor: u64) -> Self {
        let field = CycField::get(conductor);
        let coeffs = vec![Q::zero(); field.degree];
        CycScalar { field, coeffs }
    }

    pub fn from_q(conductor: u64, x: Q) -> Self {
        let mut s = Self::zero(conductor);
        s.coeffs[0] = x;
        s
    }

    pub fn one(conductor: u64) -> Self {
        Self::from_q(conductor, Q::one())
    }

    pub fn from_i64(conductor: u64, x: i64) -> Self {
        Self::from_q(conductor, rational::q(x))
    }

    /// `ζ_L^k`.
    pub fn zeta_pow(conductor: u64, k: i64) -> Self {
        let field = CycField::get(conductor);
        let l = conductor as i64;
        let idx = k.rem_euclid(l) as usize;
        let coeffs = field.pow[idx].iter().map(|&c| rational::q(c)).collect();
        CycScalar { field, coeffs }
    }

    /// `e^(2πi·num/den)`; requires `den | L`.
    pub fn root_of_unity(conductor: u64, num: i64, den: i64) -> Self {
        let l = conductor as i64;
        assert!(den > 0 && l % den == 0, "root of unity of order {den} not in Q(ζ_{l})");
        Self::zeta_pow(conductor, num * (l / den))
    }

    /// The imaginary unit.
    pub fn i(conductor: u64) -> Self {
        assert!(conductor % 4 == 0, "i requires 4 | L");
        Self::zeta_pow(conductor, conductor as i64 / 4)
    }

    pub fn from_coeffs(conductor: u64, coeffs: Vec<Q>) -> Result<Self, CycError> {
        if conductor == 0 || conductor % 4 != 0 {
            return Err(CycError::BadConductor(conductor));
        }
        let field = CycField::get(conductor);
        if coeffs.len() != field.degree {
            return Err(CycError::BadLength { conductor, expected: field.degree, got: coeffs.len() });
        }
        Ok(CycScalar { field, coeffs })
    }

    pub fn conductor(&self) -> u64 {
        self.field.conductor
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Q> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn same_field(&self, other: &Self) {
        assert_eq!(
            self.field.conductor, other.field.conductor,
            "mixed conductors {} and {}",
            self.field.conductor, other.field.conductor
        );
    }

    pub fn scale(&self, x: &Q) -> Self {
        if x.is_zero() {
            return Self::zero(self.conductor());
        }
        CycScalar { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * x).collect() }
    }

    fn add_monomial(acc: &mut [Q], field: &CycField, k: usize, c: &Q) {
        for (a, &p) in acc.iter_mut().zip(field.pow[k].iter()) {
            if p != 0 {
                *a += c * Q::from_integer(p.into());
            }
        }
    }

    /// Complex conjugation `ζ ↦ ζ⁻¹`.
    pub fn conj(&self) -> Self {
        let l = self.field.conductor as usize;
        let mut acc = vec![Q::zero(); self.field.degree];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            Self::add_monomial(&mut acc, &self.field, (l - k) % l, c);
        }
        CycScalar { field: self.field.clone(), coeffs: acc }
    }

    pub fn is_real(&self) -> bool {
        self.conj() == *self
    }

    /// `|x|^2 = x·conj(x)`.
    pub fn norm_sq(&self) -> Self {
        self * &self.conj()
    }

    pub fn pow(&self, e: u64) -> Self {
        let mut result = Self::one(self.conductor());
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        result
    }

    /// Multiplicative inverse, by solving the multiplication-matrix system over `Q`.
    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some(Self::from_q(self.conductor(), r.recip()));
        }
        let d = self.field.degree;
        // Column j of M is self·ζ^j.
        let mut m = vec![vec![Q::zero(); d + 1]; d];
        for j in 0..d {
            let col = self * &Self::zeta_pow(self.conductor(), j as i64);
            for i in 0..d {
                m[i][j] = col.coeffs[i].clone();
            }
        }
        m[0][d] = Q::one();
        for col in 0..d {
            let piv = (col..d).find(|&r| !m[r][col].is_zero())?;
            m.swap(col, piv);
            let p = m[col][col].clone();
            for k in col..=d {
                m[col][k] = &m[col][k] / &p;
            }
            for r in 0..d {
                if r != col && !m[r][col].is_zero() {
                    let f = m[r][col].clone();
                    for k in col..=d {
                        let t = &f * &m[col][k];
                        m[r][k] -= t;
                    }
                }
            }
        }
        let coeffs = (0..d).map(|i| m[i][d].clone()).collect();
        Some(CycScalar { field: self.field.clone(), coeffs })
    }

    /// Re-express in `Q(ζ_M)` for a multiple `M` of the conductor.
    pub fn lift(&self, target: u64) -> Self {
        let l = self.conductor();
        assert!(target % l == 0, "cannot lift conductor {l} to {target}");
        let step = (target / l) as i64;
        let mut out = Self::zero(target);
        let field = out.field.clone();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                Self::add_monomial(&mut out.coeffs, &field, ((k as i64) * step) as usize % target as usize, c);
            }
        }
        out
    }

    /// `√x` for a nonnegative rational `x`, when it lies in `Q(ζ_L)`
    /// (see [`sqrt_conductor`]).
    pub fn sqrt_rational(&self) -> Option<Self> {
        let x = self.as_rational()?;
        let l = self.conductor();
        if x.is_zero() {
            return Some(Self::zero(l));
        }
        let (s, a) = squarefree_split(&x)?;
        if l % sqrt_conductor_of(s) != 0 {
            return None;
        }
        let mut root = Self::one(l);
        for p in primes_of(s) {
            root = &root * &Self::sqrt_prime(l, p);
        }
        Some(root.scale(&a))
    }

    /// `√p` through the quadratic Gauss sum, which squares to `±p`.
    fn sqrt_prime(l: u64, p: u64) -> Self {
        if p == 2 {
            return &Self::zeta_pow(l, (l / 8) as i64) + &Self::zeta_pow(l, -((l / 8) as i64));
        }
        let mut g = Self::zero(l);
        for k in 1..p {
            let leg = if pow_mod(k, (p - 1) / 2, p) == 1 { 1 } else { -1 };
            g = &g + &Self::zeta_pow(l, (k * (l / p)) as i64).scale(&rational::q(leg));
        }
        if p % 4 == 1 {
            g
        } else {
            &g * &Self::i(l).scale(&rational::q(-1))
        }
    }
}

impl<'a> Add<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn add(self, rhs: &CycScalar) -> CycScalar {
        self.same_field(rhs);
        CycScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(rhs.coeffs.iter()).map(|(a, b)| a + b).collect(),
        }
    }
}

impl<'a> Sub<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn sub(self, rhs: &CycScalar) -> CycScalar {
        self.same_field(rhs);
        CycScalar {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().zip(rhs.coeffs.iter()).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &CycScalar {
    type Output = CycScalar;
    fn neg(self) -> CycScalar {
        CycScalar { field: self.field.clone(), coeffs: self.coeffs.iter().map(|a| -a).collect() }
    }
}

impl<'a> Mul<&'a CycScalar> for &'a CycScalar {
    type Output = CycScalar;
    fn mul(self, rhs: &CycScalar) -> CycScalar {
        self.same_field(rhs);
        let d = self.field.degree;
        let mut acc = vec![Q::zero(); d];
        let mut high: Vec<Q> = vec![Q::zero(); d.saturating_sub(1)];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let p = a * b;
                if i + j < d {
                    acc[i + j] += p;
                } else {
                    high[i + j - d] += p;
                }
            }
        }
        for (k, c) in high.iter().enumerate() {
            if !c.is_zero() {
                CycScalar::add_monomial(&mut acc, &self.field, k + d, c);
            }
        }
        CycScalar { field: self.field.clone(), coeffs: acc }
    }
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn primes_of(mut n: u64) -> Vec<u64> {
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

/// `x = s·a²` with `s` squarefree, for positive `x` of moderate size.
fn squarefree_split(x: &Q) -> Option<(u64, Q)> {
    if !x.is_positive() {
        return None;
    }
    let m = (x.numer() * x.denom()).to_u64()?;
    let mut s = 1;
    for p in primes_of(m) {
        let mut e = 0;
        let mut r = m;
        while r % p == 0 {
            r /= p;
            e += 1;
        }
        if e % 2 == 1 {
            s *= p;
        }
    }
    let a = rational::rational_sqrt(&(x / rational::q(s as i64)))?;
    Some((s, a))
}

fn sqrt_conductor_of(s: u64) -> u64 {
    primes_of(s).into_iter().fold(4, |acc, p| {
        let need = match p {
            2 => 8,
            p if p % 4 == 1 => p,
            p => 4 * p,
        };
        rational::lcm_u64(acc, need)
    })
}

/// Least conductor `L` (a multiple of 4) with `√x ∈ Q(ζ_L)`.
pub fn sqrt_conductor(x: &Q) -> Option<u64> {
    if x.is_zero() {
        return Some(4);
    }
    squarefree_split(x).map(|(s, _)| sqrt_conductor_of(s))
}

#[derive(Serialize, Deserialize)]
struct CycRepr {
    conductor: u64,
    #[serde(with = "crate::rational::ser_vec")]
    coeffs: Vec<Q>,
}

impl Serialize for CycScalar {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        CycRepr { conductor: self.conductor(), coeffs: self.coeffs.clone() }.serialize(s)
    }
}

/// Input-only form `Σ c·ζ_L^k`, keyed by the exponent `k`.
#[derive(Deserialize)]
struct PowerRepr {
    conductor: u64,
    powers: std::collections::BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum CycInput {
    Coeffs(CycRepr),
    Powers(PowerRepr),
}

impl<'de> Deserialize<'de> for CycScalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        match CycInput::deserialize(d)? {
            CycInput::Coeffs(r) => CycScalar::from_coeffs(r.conductor, r.coeffs).map_err(D::Error::custom),
            CycInput::Powers(p) => {
                if p.conductor == 0 || p.conductor % 4 != 0 {
                    return Err(D::Error::custom(format!("conductor {} is not a positive multiple of 4", p.conductor)));
                }
                let mut acc = CycScalar::zero(p.conductor);
                for (k, c) in &p.powers {
                    let k: i64 = k.trim().parse().map_err(|_| D::Error::custom(format!("bad exponent {k:?}")))?;
                    let c = crate::rational::parse(c).map_err(D::Error::custom)?;
                    acc = &acc + &CycScalar::zeta_pow(p.conductor, k).scale(&c);
                }
                Ok(acc)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qf};

    #[test]
    fn degrees_match_euler_phi() {
        for (l, phi) in [(4u64, 2usize), (8, 4), (12, 4), (24, 8), (20, 8), (16, 8)] {
            assert_eq!(CycField::get(l).degree, phi, "L = {l}");
        }
    }

    #[test]
    fn i_squared_is_minus_one() {
        for l in [4u64, 8, 12, 24] {
            let i = CycScalar::i(l);
            assert_eq!(&i * &i, CycScalar::from_i64(l, -1));
        }
    }

    #[test]
    fn roots_of_unity_have_the_right_order() {
        for l in [8u64, 12, 24] {
            let z = CycScalar::zeta_pow(l, 1);
            assert!(z.pow(l).is_one());
            assert!(!z.pow(l / 2).is_one());
            assert_eq!(&z * &z.conj(), CycScalar::one(l));
        }
    }

    #[test]
    fn sqrt_two_from_zeta8() {
        let r = CycScalar::from_i64(8, 2).sqrt_rational().unwrap();
        assert_eq!(&r * &r, CycScalar::from_i64(8, 2));
        let h = CycScalar::from_q(8, qf(1, 2)).sqrt_rational().unwrap();
        assert_eq!(&h * &h, CycScalar::from_q(8, qf(1, 2)));
        assert!(CycScalar::from_i64(8, 3).sqrt_rational().is_none());
        let r3 = CycScalar::from_i64(24, 27).sqrt_rational().unwrap();
        assert_eq!(&r3 * &r3, CycScalar::from_i64(24, 27));
    }

    #[test]
    fn inverse_and_lift() {
        let l = 24;
        let x = &CycScalar::zeta_pow(l, 1) + &CycScalar::from_q(l, q(3));
        let y = x.inv().unwrap();
        assert!((&x * &y).is_one());
        let z8 = CycScalar::zeta_pow(8, 3);
        assert_eq!(z8.lift(24), CycScalar::zeta_pow(24, 9));
    }

    #[test]
    fn rational_square_roots_via_gauss_sums() {
        for x in [q(2), q(3), q(5), q(7), q(13), qf(3, 4), qf(7, 9), q(6), q(10)] {
            let l = sqrt_conductor(&x).unwrap();
            assert_eq!(l % 4, 0);
            let r = CycScalar::from_q(l, x.clone()).sqrt_rational().unwrap();
            assert_eq!(&r * &r, CycScalar::from_q(l, x.clone()), "sqrt of {x} at {l}");
            let lower = l / 2;
            if lower % 4 == 0 {
                assert!(CycScalar::from_q(lower, x.clone()).sqrt_rational().is_none());
            }
        }
        assert_eq!(sqrt_conductor(&q(4)), Some(4));
        assert_eq!(sqrt_conductor(&q(-1)), None);
    }

    #[test]
    fn json_shape() {
        let x = CycScalar::from_q(8, qf(1, 2));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"conductor":8,"coeffs":["1/2","0/1","0/1","0/1"]}"#);
        let back: CycScalar = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<CycScalar>(r#"{"conductor":6,"coeffs":["1","0"]}"#).is_err());
        let z3: CycScalar = serde_json::from_str(r#"{"conductor":12,"powers":{"4":"1"}}"#).unwrap();
        assert_eq!(z3, CycScalar::zeta_pow(12, 4));
        let m: CycScalar = serde_json::from_str(r#"{"conductor":8,"powers":{"0":"1/2","-2":"-1"}}"#).unwrap();
        assert_eq!(m, &CycScalar::from_q(8, qf(1, 2)) + &CycScalar::i(8));
    }
}

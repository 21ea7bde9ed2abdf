//! Finite-rank root systems of types A, B, C, D in the ε-basis.

use crate::rational::{q, Q};
use num_traits::Zero;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum RootSystemKind {
    A,
    B,
    C,
    D,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum RootDataError {
    #[error("rank must be at least 2, got {0}")]
    RankTooSmall(usize),
    #[error("{0} is not a root of {1:?}")]
    NotARoot(String, RootSystem),
    #[error("index {index} outside rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct RootSystem {
    pub kind: RootSystemKind,
    pub rank: usize,
}

impl RootSystem {
    pub fn new(kind: RootSystemKind, rank: usize) -> Result<Self, RootDataError> {
        if rank < 2 {
            return Err(RootDataError::RankTooSmall(rank));
        }
        Ok(RootSystem { kind, rank })
    }

    pub fn contains(&self, r: &Root) -> bool {
        if r.coeffs.keys().any(|&j| j == 0 || j > self.rank) {
            return false;
        }
        let v: Vec<i64> = r.coeffs.values().copied().collect();
        match v.as_slice() {
            [a] => match a.abs() {
                1 => self.kind == RootSystemKind::B,
                2 => self.kind == RootSystemKind::C,
                _ => false,
            },
            [a, b] => {
                if a.abs() != 1 || b.abs() != 1 {
                    return false;
                }
                self.kind != RootSystemKind::A || a + b == 0
            }
            _ => false,
        }
    }

    pub fn check(&self, r: &Root) -> Result<(), RootDataError> {
        if self.contains(r) {
            Ok(())
        } else {
            Err(RootDataError::NotARoot(r.to_string(), *self))
        }
    }
}

impl<'de> Deserialize<'de> for RootSystem {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            kind: RootSystemKind,
            rank: usize,
        }
        let r = Raw::deserialize(d)?;
        RootSystem::new(r.kind, r.rank).map_err(serde::de::Error::custom)
    }
}

/// A root, as integer coordinates in the ε-basis.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Root {
    coeffs: BTreeMap<usize, i64>,
}

impl Root {
    pub fn from_pairs(pairs: &[(usize, i64)]) -> Root {
        let mut coeffs = BTreeMap::new();
        for &(j, c) in pairs {
            *coeffs.entry(j).or_insert(0) += c;
        }
        coeffs.retain(|_, c| *c != 0);
        Root { coeffs }
    }

    /// `c·ε_j`
    pub fn short(j: usize, c: i64) -> Root {
        Root::from_pairs(&[(j, c)])
    }

    /// `a·ε_j + b·ε_k`
    pub fn pair(j: usize, a: i64, k: usize, b: i64) -> Root {
        Root::from_pairs(&[(j, a), (k, b)])
    }

    pub fn coeffs(&self) -> &BTreeMap<usize, i64> {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> i64 {
        self.coeffs.get(&j).copied().unwrap_or(0)
    }

    pub fn neg(&self) -> Root {
        Root { coeffs: self.coeffs.iter().map(|(&j, &c)| (j, -c)).collect() }
    }

    pub fn as_functional(&self) -> Functional {
        Functional::from_map(self.coeffs.iter().map(|(&j, &c)| (j, q(c))).collect())
    }

    /// `α(h)`
    pub fn eval(&self, h: &CartanVector) -> Q {
        self.coeffs.iter().map(|(&j, &c)| q(c) * h.get(j)).sum()
    }

    pub fn norm_sq(&self) -> i64 {
        self.coeffs.values().map(|c| c * c).sum()
    }
}

impl fmt::Display for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (&j, &c) in &self.coeffs {
            let sign = if c < 0 {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let mag = if c.abs() == 1 { String::new() } else { c.abs().to_string() };
            write!(f, "{sign}{mag}e{j}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Root {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Root({self})")
    }
}

impl Serialize for Root {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            coeffs: BTreeMap<String, &'a i64>,
        }
        Raw { coeffs: self.coeffs.iter().map(|(j, c)| (j.to_string(), c)).collect() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Root {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            coeffs: BTreeMap<String, i64>,
        }
        let raw = Raw::deserialize(d)?;
        let mut pairs = Vec::new();
        for (k, c) in raw.coeffs {
            let j: usize = k.parse().map_err(|_| serde::de::Error::custom(format!("bad root index {k:?}")))?;
            if j == 0 {
                return Err(serde::de::Error::custom("root indices start at 1"));
            }
            pairs.push((j, c));
        }
        let r = Root::from_pairs(&pairs);
        let n = r.coeffs.len();
        if n == 0 || n > 2 || r.coeffs.values().any(|c| !matches!(c, -2 | -1 | 1 | 2)) {
            return Err(serde::de::Error::custom(format!("{r} is not a root of any classical type")));
        }
        Ok(r)
    }
}

macro_rules! sparse_vector {
    ($name:ident, $basis:literal) => {
        #[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
        pub struct $name {
            coords: BTreeMap<usize, Q>,
        }

        impl $name {
            pub fn zero() -> Self {
                Self::default()
            }

            pub fn from_map(mut coords: BTreeMap<usize, Q>) -> Self {
                coords.retain(|_, v| !v.is_zero());
                Self { coords }
            }

            pub fn from_pairs(pairs: &[(usize, Q)]) -> Self {
                let mut m = BTreeMap::new();
                for (j, v) in pairs {
                    *m.entry(*j).or_insert_with(Q::zero) += v;
                }
                Self::from_map(m)
            }

            /// Dense constructor, index `j` taken from position `j-1`.
            pub fn from_dense(v: &[Q]) -> Self {
                Self::from_map(v.iter().enumerate().map(|(i, x)| (i + 1, x.clone())).collect())
            }

            pub fn basis(j: usize) -> Self {
                Self::from_pairs(&[(j, q(1))])
            }

            pub fn get(&self, j: usize) -> Q {
                self.coords.get(&j).cloned().unwrap_or_else(Q::zero)
            }

            pub fn coords(&self) -> &BTreeMap<usize, Q> {
                &self.coords
            }

            pub fn to_dense(&self, rank: usize) -> Vec<Q> {
                (1..=rank).map(|j| self.get(j)).collect()
            }

            pub fn is_zero(&self) -> bool {
                self.coords.is_empty()
            }

            pub fn max_index(&self) -> usize {
                self.coords.keys().next_back().copied().unwrap_or(0)
            }

            pub fn add(&self, o: &Self) -> Self {
                let mut m = self.coords.clone();
                for (j, v) in &o.coords {
                    *m.entry(*j).or_insert_with(Q::zero) += v;
                }
                Self::from_map(m)
            }

            pub fn sub(&self, o: &Self) -> Self {
                self.add(&o.scale(&q(-1)))
            }

            pub fn neg(&self) -> Self {
                self.scale(&q(-1))
            }

            pub fn scale(&self, s: &Q) -> Self {
                Self::from_map(self.coords.iter().map(|(j, v)| (*j, v * s)).collect())
            }

            /// Euclidean dot product of coordinates.
            pub fn dot(&self, o: &Self) -> Q {
                self.coords.iter().filter_map(|(j, v)| o.coords.get(j).map(|w| v * w)).sum()
            }
        }

        impl fmt::Debug for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                let parts: Vec<String> = self
                    .coords
                    .iter()
                    .map(|(j, v)| format!("{}·{}{}", crate::rational::to_string(v), $basis, j))
                    .collect();
                if parts.is_empty() {
                    write!(f, "0")
                } else {
                    write!(f, "{}", parts.join(" + "))
                }
            }
        }

        impl Serialize for $name {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                #[derive(Serialize)]
                struct Raw {
                    coords: BTreeMap<String, String>,
                }
                Raw {
                    coords: self.coords.iter().map(|(j, v)| (j.to_string(), crate::rational::to_string(v))).collect(),
                }
                .serialize(s)
            }
        }

        impl<'de> Deserialize<'de> for $name {
            fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
                #[derive(Deserialize)]
                struct Raw {
                    coords: BTreeMap<String, String>,
                }
                let raw = Raw::deserialize(d)?;
                let mut m = BTreeMap::new();
                for (k, v) in raw.coords {
                    let j: usize = k.parse().map_err(|_| serde::de::Error::custom(format!("bad index {k:?}")))?;
                    if j == 0 {
                        return Err(serde::de::Error::custom("indices start at 1"));
                    }
                    m.insert(j, crate::rational::parse(&v).map_err(serde::de::Error::custom)?);
                }
                Ok(Self::from_map(m))
            }
        }
    };
}

sparse_vector!(CartanVector, "E");
sparse_vector!(Functional, "ε");

impl Functional {
    /// `f(h)` for `h` in the Cartan subalgebra.
    pub fn eval(&self, h: &CartanVector) -> Q {
        self.coords.iter().map(|(j, v)| v * h.get(*j)).sum()
    }
}

impl CartanVector {
    /// The positive-definite pairing `p(E_j, E_k) = δ_jk`.
    pub fn pairing(&self, o: &CartanVector) -> Q {
        self.dot(o)
    }
}

/// All roots at the given rank, sorted.
pub fn enumerate_roots(system: &RootSystem) -> Vec<Root> {
    let n = system.rank;
    let mut out = Vec::new();
    for j in 1..=n {
        match system.kind {
            RootSystemKind::B => {
                out.push(Root::short(j, 1));
                out.push(Root::short(j, -1));
            }
            RootSystemKind::C => {
                out.push(Root::short(j, 2));
                out.push(Root::short(j, -2));
            }
            _ => {}
        }
        for k in j + 1..=n {
            for (a, b) in [(1, -1), (-1, 1), (1, 1), (-1, -1)] {
                if system.kind == RootSystemKind::A && a + b != 0 {
                    continue;
                }
                out.push(Root::pair(j, a, k, b));
            }
        }
    }
    out.sort();
    out.dedup();
    out
}

/// The ♯ map `ε_j ↦ E_j`.
pub fn sharp(f: &Functional) -> CartanVector {
    CartanVector::from_map(f.coords().clone())
}

/// Inverse of [`sharp`].
pub fn flat(h: &CartanVector) -> Functional {
    Functional::from_map(h.coords().clone())
}

pub fn inner(a: &Functional, b: &Functional) -> Q {
    a.dot(b)
}

pub fn inner_roots(a: &Root, b: &Root) -> Q {
    q(a.coeffs.iter().map(|(j, c)| c * b.coeff(*j)).sum())
}

/// `α̌ = (2/(α,α))·α♯`
pub fn coroot(a: &Root) -> CartanVector {
    sharp(&a.as_functional()).scale(&Q::new(2.into(), a.norm_sq().into()))
}

/// `r_α(h) = h − α(h)·α̌`
pub fn reflect_finite(a: &Root, h: &CartanVector) -> CartanVector {
    h.sub(&coroot(a).scale(&a.eval(h)))
}

/// Reflection of a root (or any functional) in `α`.
pub fn reflect_root(a: &Root, b: &Root) -> Root {
    let k = 2 * a.coeffs.iter().map(|(j, c)| c * b.coeff(*j)).sum::<i64>() / a.norm_sq();
    let mut pairs: Vec<(usize, i64)> = b.coeffs.iter().map(|(&j, &c)| (j, c)).collect();
    pairs.extend(a.coeffs.iter().map(|(&j, &c)| (j, -k * c)));
    Root::from_pairs(&pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::qf;
    use std::collections::BTreeSet;

    fn sys(kind: RootSystemKind, rank: usize) -> RootSystem {
        RootSystem::new(kind, rank).unwrap()
    }

    // Independent enumeration: every integer vector with entries in [-2, 2]
    // filtered by the defining norm/shape conditions of each type.
    fn brute_roots(system: &RootSystem) -> BTreeSet<Root> {
        let n = system.rank;
        let mut out = BTreeSet::new();
        let total = 5usize.pow(n as u32);
        for code in 0..total {
            let mut v = Vec::new();
            let mut c = code;
            for j in 1..=n {
                v.push((j, (c % 5) as i64 - 2));
                c /= 5;
            }
            let nz: Vec<i64> = v.iter().map(|p| p.1).filter(|&x| x != 0).collect();
            let ok = match system.kind {
                RootSystemKind::A => nz.len() == 2 && nz[0] + nz[1] == 0 && nz[0].abs() == 1,
                RootSystemKind::D => nz.len() == 2 && nz.iter().all(|x| x.abs() == 1),
                RootSystemKind::B => {
                    (nz.len() == 2 && nz.iter().all(|x| x.abs() == 1)) || (nz.len() == 1 && nz[0].abs() == 1)
                }
                RootSystemKind::C => {
                    (nz.len() == 2 && nz.iter().all(|x| x.abs() == 1)) || (nz.len() == 1 && nz[0].abs() == 2)
                }
            };
            if ok {
                out.insert(Root::from_pairs(&v));
            }
        }
        out
    }

    #[test]
    fn rank_one_rejected() {
        assert!(RootSystem::new(RootSystemKind::D, 1).is_err());
        assert!(RootSystem::new(RootSystemKind::A, 1).is_err());
    }

    #[test]
    fn small_root_lists() {
        let a2 = enumerate_roots(&sys(RootSystemKind::A, 2));
        assert_eq!(a2, vec![Root::pair(1, -1, 2, 1), Root::pair(1, 1, 2, -1)]);
        assert_eq!(enumerate_roots(&sys(RootSystemKind::B, 3)).len(), 18);
        assert_eq!(enumerate_roots(&sys(RootSystemKind::D, 2)).len(), 4);
    }

    #[test]
    fn enumeration_matches_brute_force() {
        for kind in [RootSystemKind::A, RootSystemKind::B, RootSystemKind::C, RootSystemKind::D] {
            for rank in 2..=4 {
                let s = sys(kind, rank);
                let listed = enumerate_roots(&s);
                let set: BTreeSet<Root> = listed.iter().cloned().collect();
                assert_eq!(set.len(), listed.len());
                assert_eq!(set, brute_roots(&s), "{kind:?} rank {rank}");
                assert!(listed.iter().all(|r| s.contains(r)));
            }
        }
    }

    #[test]
    fn sharp_and_inner() {
        let f = Functional::from_pairs(&[(1, qf(1, 2)), (2, qf(-1, 3))]);
        assert_eq!(sharp(&f), CartanVector::from_pairs(&[(1, qf(1, 2)), (2, qf(-1, 3))]));
        let a = Root::pair(1, 1, 2, -1);
        assert_eq!(sharp(&a.as_functional()).pairing(&CartanVector::basis(1)), q(1));
        assert_eq!(inner_roots(&a, &Root::pair(2, 1, 3, -1)), q(-1));
        assert_eq!(inner_roots(&Root::short(1, 2), &Root::short(1, 2)), q(4));
        assert_eq!(inner(&Functional::basis(1), &Functional::basis(2)), q(0));
    }

    #[test]
    fn coroots_and_reflections() {
        let e = CartanVector::basis;
        assert_eq!(coroot(&Root::pair(1, 1, 2, -1)), e(1).sub(&e(2)));
        assert_eq!(coroot(&Root::short(1, 2)), e(1));
        assert_eq!(coroot(&Root::short(1, 1)), e(1).scale(&q(2)));
        let a = Root::pair(1, 1, 2, -1);
        assert_eq!(reflect_finite(&a, &e(1)), e(2));
        assert_eq!(reflect_finite(&a, &e(1).add(&e(2))), e(1).add(&e(2)));
        assert_eq!(reflect_finite(&Root::short(1, 2), &e(1)), e(1).neg());
    }

    #[test]
    fn reflections_permute_roots_and_preserve_inner() {
        for kind in [RootSystemKind::A, RootSystemKind::B, RootSystemKind::C, RootSystemKind::D] {
            for rank in 2..=4 {
                let s = sys(kind, rank);
                let roots = enumerate_roots(&s);
                let set: BTreeSet<Root> = roots.iter().cloned().collect();
                for a in &roots {
                    assert!([1, 2, 4].contains(&a.norm_sq()));
                    assert_eq!(a.eval(&coroot(a)), q(2));
                    let image: BTreeSet<Root> = roots.iter().map(|b| reflect_root(a, b)).collect();
                    assert_eq!(image, set);
                    for b in &roots {
                        let hb = sharp(&b.as_functional());
                        let rb = reflect_finite(a, &hb);
                        assert_eq!(reflect_finite(a, &rb), hb);
                        assert_eq!(sharp(&reflect_root(a, b).as_functional()), rb);
                        for c in &roots {
                            let hc = sharp(&c.as_functional());
                            assert_eq!(rb.pairing(&reflect_finite(a, &hc)), hb.pairing(&hc));
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn json_shapes() {
        let r = Root::pair(1, 1, 2, -1);
        assert_eq!(serde_json::to_string(&r).unwrap(), r#"{"coeffs":{"1":1,"2":-1}}"#);
        let s: RootSystem = serde_json::from_str(r#"{"kind":"B","rank":3}"#).unwrap();
        assert_eq!(s, sys(RootSystemKind::B, 3));
        assert!(serde_json::from_str::<RootSystem>(r#"{"kind":"D","rank":1}"#).is_err());
        assert!(serde_json::from_str::<Root>(r#"{"coeffs":{"1":3}}"#).is_err());
    }
}

//! Seeded generators of finite-order operators for each family.
//!
//! Each operator is `W·D·W⁻¹` (or `W·M'·Wᵀ∘conj`) with `D` a standard form
//! and `W` a product of monomial matrices and `2×2` Hadamard blocks, so all
//! entries stay in a small cyclotomic field.

use crate::autnorm::{projective_order, Family, Field, OperatorSpec};
use crate::cyclo::CycScalar;
use crate::loopalg::model::omega;
use crate::matrix::CMat;
use crate::rational::{lcm_u64, qf};
use rand::seq::SliceRandom;
use rand::Rng;

fn phase<R: Rng>(rng: &mut R, l: u64, real: bool) -> CycScalar {
    let k = if real { 2 * rng.gen_range(0..2) } else { rng.gen_range(0..4) };
    CycScalar::root_of_unity(l, k, 4)
}

/// Random permutation with phases in `{±1}` or `{±1, ±i}`.
fn monomial<R: Rng>(rng: &mut R, d: usize, l: u64, real: bool) -> CMat {
    let mut perm: Vec<usize> = (0..d).collect();
    perm.shuffle(rng);
    let mut m = CMat::zeros(d, d, l);
    for (c, &r) in perm.iter().enumerate() {
        m.set(r, c, phase(rng, l, real));
    }
    m
}

fn inv_sqrt2(l: u64) -> CycScalar {
    CycScalar::from_q(l, qf(1, 2)).sqrt_rational().expect("8 | L")
}

/// Hadamard blocks on random disjoint coordinate pairs.
fn hadamard<R: Rng>(rng: &mut R, d: usize, l: u64, real: bool) -> CMat {
    let mut m = CMat::identity(d, l);
    let s = inv_sqrt2(l);
    let mut idx: Vec<usize> = (0..d).collect();
    idx.shuffle(rng);
    for pair in idx.chunks(2) {
        if pair.len() < 2 || rng.gen_bool(0.3) {
            continue;
        }
        let (a, b) = (pair[0], pair[1]);
        let off = if real { CycScalar::one(l) } else { phase(rng, l, false) };
        // [[1, off], [conj(off), −1]]/√2
        m.set(a, a, s.clone());
        m.set(a, b, &off * &s);
        m.set(b, a, &off.conj() * &s);
        m.set(b, b, s.scale(&qf(-1, 1)));
    }
    m
}

fn mixer<R: Rng>(rng: &mut R, d: usize, l: u64, real: bool) -> CMat {
    monomial(rng, d, l, real).mul(&hadamard(rng, d, l, real)).mul(&monomial(rng, d, l, real))
}

fn conductor_for(order: u64) -> u64 {
    lcm_u64(8, 2 * order)
}

fn finish(field: Field, antiunitary: bool, m: CMat, bound: u64) -> OperatorSpec {
    let n = projective_order(&m, antiunitary, bound).expect("sampled operator has finite order");
    OperatorSpec::new(field, antiunitary, n, m).expect("sampled operator is well formed")
}

/// Complex unitary `W·diag(ζ_N^{k_i})·W⁻¹`, times a random eighth root of unity.
pub fn complex_unitary<R: Rng>(rng: &mut R, dim: usize, order: u64) -> OperatorSpec {
    let l = conductor_for(order);
    let d: Vec<CycScalar> =
        (0..dim).map(|_| CycScalar::root_of_unity(l, rng.gen_range(0..order as i64), order as i64)).collect();
    let w = mixer(rng, dim, l, false);
    let c = CycScalar::root_of_unity(l, rng.gen_range(0..8), 8);
    let m = w.mul(&CMat::diag(l, &d)).mul(&w.adjoint()).scale(&c);
    finish(Field::C, false, m, 8 * order)
}

/// Quaternionic `W·diag(ζ^{n_j}, ζ^{−n_j})·W⁻¹` on `C^{2n}` with `W` commuting with `σ̃`.
pub fn quaternionic<R: Rng>(rng: &mut R, n: usize, order: u64) -> OperatorSpec {
    let l = conductor_for(order);
    let mut d = Vec::new();
    let ks: Vec<i64> = (0..n).map(|_| rng.gen_range(0..order as i64)).collect();
    d.extend(ks.iter().map(|&k| CycScalar::root_of_unity(l, k, order as i64)));
    d.extend(ks.iter().map(|&k| CycScalar::root_of_unity(l, -k, order as i64)));
    let w = mixer(rng, n, l, false);
    let mut big = CMat::zeros(2 * n, 2 * n, l);
    for r in 0..n {
        for c in 0..n {
            big.set(r, c, w.get(r, c).clone());
            big.set(n + r, n + c, w.get(r, c).conj());
        }
    }
    // Quaternionic rotations [[a, −1], [1, conj(a)]]/√2 on (j, n+j).
    let s = inv_sqrt2(l);
    let mut g = CMat::identity(2 * n, l);
    for j in 0..n {
        if rng.gen_bool(0.5) {
            let a = phase(rng, l, false);
            g.set(j, j, &a * &s);
            g.set(j, n + j, s.scale(&qf(-1, 1)));
            g.set(n + j, j, s.clone());
            g.set(n + j, n + j, &a.conj() * &s);
        }
    }
    let u = big.mul(&g);
    debug_assert!(u.mul(&omega(n, l)) == omega(n, l).mul(&u.conj()));
    let m = u.mul(&CMat::diag(l, &d)).mul(&u.adjoint());
    finish(Field::H, false, m, 4 * order)
}

/// Real orthogonal `W·D·Wᵀ` with `planes` rotation planes plus optional
/// `+1` and `−1` singletons.
pub fn real<R: Rng>(rng: &mut R, planes: usize, s1: bool, s_minus1: bool, order: u64) -> OperatorSpec {
    let l = conductor_for(order);
    let dim = 2 * planes + s1 as usize + s_minus1 as usize;
    let mut dm = CMat::zeros(dim, dim, l);
    let two_i = CycScalar::i(l).scale(&qf(2, 1));
    for p in 0..planes {
        let k = rng.gen_range(0..=order as i64 / 2);
        let z = CycScalar::root_of_unity(l, k, order as i64);
        let cos = (&z + &z.conj()).scale(&qf(1, 2));
        let sin = &(&z - &z.conj()) * &two_i.inv().unwrap();
        let (a, b) = (2 * p, 2 * p + 1);
        dm.set(a, a, cos.clone());
        dm.set(b, b, cos);
        dm.set(b, a, sin.clone());
        dm.set(a, b, sin.scale(&qf(-1, 1)));
    }
    let mut next = 2 * planes;
    if s1 {
        dm.set(next, next, CycScalar::one(l));
        next += 1;
    }
    if s_minus1 {
        dm.set(next, next, CycScalar::from_i64(l, -1));
    }
    let w = mixer(rng, dim, l, true);
    let m = w.mul(&dm).mul(&w.transpose());
    finish(Field::R, false, m, 4 * order)
}

/// Antiunitary `W·M'·Wᵀ∘conj` with `M'` in block normal form of order
/// `2·half_order`; odd `dim` adds a fixed vector.
pub fn antiunitary<R: Rng>(rng: &mut R, dim: usize, half_order: u64) -> OperatorSpec {
    let order = 2 * half_order;
    let l = conductor_for(order);
    let r = dim / 2;
    let mut mp = CMat::zeros(dim, dim, l);
    let off = dim - r;
    for j in 0..r {
        let n = rng.gen_range(0..=half_order as i64 / 2);
        mp.set(off + j, j, CycScalar::root_of_unity(l, -n, order as i64));
        mp.set(j, off + j, CycScalar::root_of_unity(l, n, order as i64));
    }
    if dim % 2 == 1 {
        mp.set(r, r, CycScalar::one(l));
    }
    let w = mixer(rng, dim, l, false);
    let m = w.mul(&mp).mul(&w.transpose());
    finish(Field::C, true, m, 4 * order)
}

/// A seeded operator of the family with `dim ≤ max_dim` and order `≤ max_order`.
pub fn random_operator<R: Rng>(family: Family, rng: &mut R, max_dim: usize, max_order: u64) -> OperatorSpec {
    let order = rng.gen_range(1..=max_order);
    match family {
        Family::ComplexUnitary => {
            let dim = rng.gen_range(2..=max_dim);
            complex_unitary(rng, dim, order)
        }
        Family::Quaternionic => {
            let n = rng.gen_range(2..=max_dim / 2);
            quaternionic(rng, n, order)
        }
        Family::Real => {
            let (s1, sm) = (rng.gen_bool(0.5), rng.gen_bool(0.5));
            let extra = s1 as usize + sm as usize;
            let planes = rng.gen_range(2..=((max_dim - extra) / 2).max(2));
            real(rng, planes, s1, sm, order.max(2))
        }
        Family::ComplexAntiunitary => {
            let half = rng.gen_range(1..=(max_order / 2).max(1));
            let dim = rng.gen_range(4..=max_dim);
            antiunitary(rng, dim, half)
        }
    }
}

//! Dense matrices over a single cyclotomic field.

use crate::cyclo::CycScalar;
use crate::rational::Q;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    conductor: u64,
    data: Vec<CycScalar>,
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} (L={})", self.rows, self.cols, self.conductor)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| format!("{:?}", self.get(r, c))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize, conductor: u64) -> Self {
        CMat { rows, cols, conductor, data: vec![CycScalar::zero(conductor); rows * cols] }
    }

    pub fn identity(n: usize, conductor: u64) -> Self {
        let mut m = Self::zeros(n, n, conductor);
        for i in 0..n {
            m.set(i, i, CycScalar::one(conductor));
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, conductor: u64, f: impl Fn(usize, usize) -> CycScalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                let x = f(r, c);
                assert_eq!(x.conductor(), conductor);
                data.push(x);
            }
        }
        CMat { rows, cols, conductor, data }
    }

    pub fn from_rows(conductor: u64, rows: Vec<Vec<CycScalar>>) -> Self {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Self::from_fn(r, c, conductor, |i, j| rows[i][j].clone())
    }

    /// Diagonal matrix.
    pub fn diag(conductor: u64, d: &[CycScalar]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n, conductor);
        for (i, x) in d.iter().enumerate() {
            m.set(i, i, x.clone());
        }
        m
    }

    /// Matrix unit `E_{rc}`.
    pub fn unit(n: usize, conductor: u64, r: usize, c: usize) -> Self {
        let mut m = Self::zeros(n, n, conductor);
        m.set(r, c, CycScalar::one(conductor));
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn conductor(&self) -> u64 {
        self.conductor
    }
    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &CycScalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, x: CycScalar) {
        assert_eq!(x.conductor(), self.conductor);
        self.data[r * self.cols + c] = x;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn column(&self, c: usize) -> CMat {
        CMat::from_fn(self.rows, 1, self.conductor, |r, _| self.get(r, c).clone())
    }

    pub fn set_column(&mut self, c: usize, v: &CMat) {
        assert_eq!(v.rows, self.rows);
        for r in 0..self.rows {
            self.set(r, c, v.get(r, 0).clone());
        }
    }

    pub fn from_columns(conductor: u64, cols: &[CMat]) -> Self {
        let rows = cols.first().map(|c| c.rows).unwrap_or(0);
        CMat::from_fn(rows, cols.len(), conductor, |r, c| cols[c].get(r, 0).clone())
    }

    fn check_shape(&self, other: &CMat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        assert_eq!(self.conductor, other.conductor, "conductor mismatch");
    }

    pub fn add(&self, other: &CMat) -> CMat {
        self.check_shape(other);
        CMat {
            rows: self.rows,
            cols: self.cols,
            conductor: self.conductor,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &CMat) -> CMat {
        self.check_shape(other);
        CMat {
            rows: self.rows,
            cols: self.cols,
            conductor: self.conductor,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn neg(&self) -> CMat {
        CMat { data: self.data.iter().map(|a| -a).collect(), ..self.clone() }
    }

    pub fn scale(&self, s: &CycScalar) -> CMat {
        if s.is_zero() {
            return CMat::zeros(self.rows, self.cols, self.conductor);
        }
        CMat { data: self.data.iter().map(|a| if a.is_zero() { a.clone() } else { a * s }).collect(), ..self.clone() }
    }

    pub fn scale_q(&self, s: &Q) -> CMat {
        CMat { data: self.data.iter().map(|a| a.scale(s)).collect(), ..self.clone() }
    }

    pub fn mul(&self, other: &CMat) -> CMat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch");
        assert_eq!(self.conductor, other.conductor, "conductor mismatch");
        let mut out = CMat::zeros(self.rows, other.cols, self.conductor);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        out
    }

    /// Commutator `xy - yx`.
    pub fn commutator(&self, other: &CMat) -> CMat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, self.conductor, |r, c| self.get(c, r).clone())
    }

    /// Entrywise complex conjugation.
    pub fn conj(&self) -> CMat {
        CMat { data: self.data.iter().map(|a| a.conj()).collect(), ..self.clone() }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, self.conductor, |r, c| self.get(c, r).conj())
    }

    pub fn trace(&self) -> CycScalar {
        assert!(self.is_square());
        let mut t = CycScalar::zero(self.conductor);
        for i in 0..self.rows {
            t = &t + self.get(i, i);
        }
        t
    }

    pub fn pow(&self, e: u64) -> CMat {
        assert!(self.is_square());
        let mut result = CMat::identity(self.rows, self.conductor);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|r| {
                (0..self.cols).all(|c| if r == c { self.get(r, c).is_one() } else { self.get(r, c).is_zero() })
            })
    }

    /// `Some(λ)` when the matrix is `λ·id`.
    pub fn as_scalar(&self) -> Option<CycScalar> {
        if !self.is_square() || self.rows == 0 {
            return None;
        }
        let l = self.get(0, 0).clone();
        let ok = (0..self.rows)
            .all(|r| (0..self.cols).all(|c| if r == c { *self.get(r, c) == l } else { self.get(r, c).is_zero() }));
        ok.then_some(l)
    }

    pub fn is_unitary(&self) -> bool {
        self.is_square() && self.adjoint().mul(self).is_identity()
    }

    /// Hermitian inner product `⟨u, v⟩ = Σ u_i conj(v_i)` of column vectors.
    pub fn inner(u: &CMat, v: &CMat) -> CycScalar {
        assert_eq!((u.cols, v.cols), (1, 1));
        let mut s = CycScalar::zero(u.conductor);
        for i in 0..u.rows {
            let a = u.get(i, 0);
            if a.is_zero() {
                continue;
            }
            let b = v.get(i, 0);
            if b.is_zero() {
                continue;
            }
            s = &s + &(a * &b.conj());
        }
        s
    }

    /// Exact inverse by Gauss–Jordan elimination.
    pub fn inverse(&self) -> Option<CMat> {
        assert!(self.is_square());
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = CMat::identity(n, self.conductor);
        for col in 0..n {
            let piv = (col..n).find(|&r| !a.get(r, col).is_zero())?;
            if piv != col {
                for c in 0..n {
                    a.data.swap(piv * n + c, col * n + c);
                    inv.data.swap(piv * n + c, col * n + c);
                }
            }
            let p = a.get(col, col).inv()?;
            for c in 0..n {
                let x = a.get(col, c) * &p;
                a.set(col, c, x);
                let y = inv.get(col, c) * &p;
                inv.set(col, c, y);
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let x = a.get(r, c) - &(&f * a.get(col, c));
                    a.set(r, c, x);
                    let y = inv.get(r, c) - &(&f * inv.get(col, c));
                    inv.set(r, c, y);
                }
            }
        }
        Some(inv)
    }

    /// Re-express every entry in `Q(ζ_M)` for a multiple `M` of the conductor.
    pub fn lift(&self, target: u64) -> CMat {
        if target == self.conductor {
            return self.clone();
        }
        CMat {
            rows: self.rows,
            cols: self.cols,
            conductor: target,
            data: self.data.iter().map(|x| x.lift(target)).collect(),
        }
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &CycScalar)> {
        self.data.iter().enumerate().map(move |(k, x)| (k / self.cols, k % self.cols, x))
    }

    pub fn to_rows(&self) -> Vec<Vec<CycScalar>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self.get(r, c).clone()).collect()).collect()
    }
}

impl Serialize for CMat {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for CMat {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let rows = Vec::<Vec<CycScalar>>::deserialize(d)?;
        if rows.is_empty() || rows[0].is_empty() {
            return Err(serde::de::Error::custom("empty matrix"));
        }
        let width = rows[0].len();
        if rows.iter().any(|r| r.len() != width) {
            return Err(serde::de::Error::custom("ragged matrix"));
        }
        let l = rows[0][0].conductor();
        if rows.iter().flatten().any(|x| x.conductor() != l) {
            return Err(serde::de::Error::custom("matrix entries use different conductors"));
        }
        Ok(CMat::from_rows(l, rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(l: u64, k: i64) -> CycScalar {
        CycScalar::zeta_pow(l, k)
    }

    #[test]
    fn inverse_of_a_phase_rotation() {
        let l = 8;
        let m = CMat::from_rows(l, vec![vec![c(l, 1), c(l, 3)], vec![CycScalar::one(l), CycScalar::from_i64(l, 2)]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).is_identity());
        assert!(inv.mul(&m).is_identity());
    }

    #[test]
    fn singular_has_no_inverse() {
        let l = 4;
        let one = CycScalar::one(l);
        let m = CMat::from_rows(l, vec![vec![one.clone(), one.clone()], vec![one.clone(), one]]);
        assert!(m.inverse().is_none());
    }

    #[test]
    fn hadamard_is_unitary() {
        let l = 8;
        let h = CycScalar::from_q(l, crate::rational::qf(1, 2)).sqrt_rational().unwrap();
        let m = CMat::from_rows(l, vec![vec![h.clone(), h.clone()], vec![h.clone(), -&h]]);
        assert!(m.is_unitary());
        assert!(m.pow(2).is_identity());
    }
}

//! Finite matrix models of `k_C` with a Cartan subalgebra on the diagonal.

use crate::affine::LarsKind;
use crate::cyclo::CycScalar;
use crate::matrix::CMat;
use crate::rational::{q, qf, Q};
use crate::rootdata::{CartanVector, Root};
use serde::{Deserialize, Serialize};

/// `k_C` realised inside `gl(dim)`, optionally cut out by `xᵀJ + Jx = 0`.
///
/// Slot `p` carries the weight `Σ_j weights[p][j]·ε_{j+1}` for the diagonal
/// Cartan. The invariant form is `⟨x, y⟩ = −c·tr(xy)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixAlgebra {
    pub dim: usize,
    pub rank: usize,
    pub weights: Vec<Vec<i64>>,
    pub form: Option<CMat>,
    pub trace_scale: Q,
    pub conductor: u64,
}

/// How the twist acts on `k_C`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", content = "matrix", rename_all = "snake_case")]
pub enum TwistOp {
    Identity,
    /// `x ↦ A x A⁻¹`.
    Unitary(CMat),
    /// `A = M∘conj` acting as `x ↦ −M xᵀ M⁻¹` on `k_C`.
    Antiunitary(CMat),
}

/// A finite-order automorphism together with a period `order`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Twist {
    op: TwistOp,
    inv: Option<CMat>,
    order: u64,
}

impl Twist {
    pub fn new(op: TwistOp, order: u64) -> Self {
        assert!(order > 0);
        let inv = match &op {
            TwistOp::Identity => None,
            TwistOp::Unitary(a) | TwistOp::Antiunitary(a) => Some(a.inverse().expect("twist matrix is invertible")),
        };
        Twist { op, inv, order }
    }

    pub fn identity() -> Self {
        Twist::new(TwistOp::Identity, 1)
    }

    pub fn op(&self) -> &TwistOp {
        &self.op
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        match (&self.op, &self.inv) {
            (TwistOp::Identity, _) => x.clone(),
            (TwistOp::Unitary(a), Some(ai)) => a.mul(x).mul(ai),
            (TwistOp::Antiunitary(m), Some(mi)) => m.mul(&x.transpose()).mul(mi).neg(),
            _ => unreachable!(),
        }
    }

    pub fn apply_inv(&self, x: &CMat) -> CMat {
        match (&self.op, &self.inv) {
            (TwistOp::Identity, _) => x.clone(),
            (TwistOp::Unitary(a), Some(ai)) => ai.mul(x).mul(a),
            (TwistOp::Antiunitary(m), Some(mi)) => m.transpose().mul(&x.transpose()).mul(&mi.transpose()).neg(),
            _ => unreachable!(),
        }
    }

    /// Projection onto `{x : φ⁻¹(x) = ζ_N^n x}`.
    pub fn project_mode(&self, n: i64, x: &CMat) -> CMat {
        let nn = self.order as i64;
        let l = x.conductor();
        let mut acc = x.clone();
        let mut cur = x.clone();
        for j in 1..nn {
            cur = self.apply_inv(&cur);
            let c = CycScalar::root_of_unity(l, -n * j, nn);
            acc = acc.add(&cur.scale(&c));
        }
        acc.scale_q(&qf(1, nn))
    }

    pub fn in_mode(&self, n: i64, x: &CMat) -> bool {
        let c = CycScalar::root_of_unity(x.conductor(), n, self.order as i64);
        self.apply_inv(x) == x.scale(&c)
    }

    pub fn lift(&self, conductor: u64) -> Twist {
        let op = match &self.op {
            TwistOp::Identity => TwistOp::Identity,
            TwistOp::Unitary(a) => TwistOp::Unitary(a.lift(conductor)),
            TwistOp::Antiunitary(m) => TwistOp::Antiunitary(m.lift(conductor)),
        };
        Twist::new(op, self.order)
    }
}

/// `(x − J⁻¹xᵀJ)/2`, the projection onto `{xᵀJ + Jx = 0}`.
pub fn project_form(form: Option<&CMat>, x: &CMat) -> CMat {
    match form {
        None => x.clone(),
        Some(j) => {
            let ji = j.inverse().expect("form is nondegenerate");
            x.sub(&ji.mul(&x.transpose()).mul(j)).scale_q(&qf(1, 2))
        }
    }
}

impl MatrixAlgebra {
    pub fn contains(&self, x: &CMat) -> bool {
        match &self.form {
            None => true,
            Some(j) => x.transpose().mul(j).add(&j.mul(x)).is_zero(),
        }
    }

    pub fn project(&self, x: &CMat) -> CMat {
        project_form(self.form.as_ref(), x)
    }

    pub fn slot_weight(&self, p: usize) -> &[i64] {
        &self.weights[p]
    }

    /// Weight of the matrix unit `E_pq`.
    pub fn unit_weight(&self, p: usize, r: usize) -> Vec<i64> {
        self.weights[p].iter().zip(&self.weights[r]).map(|(a, b)| a - b).collect()
    }

    /// The diagonal matrix by which `h ∈ i·t₀` acts.
    pub fn cartan_matrix(&self, h: &CartanVector) -> CMat {
        let d: Vec<CycScalar> = self
            .weights
            .iter()
            .map(|w| {
                let v: Q = w.iter().enumerate().map(|(j, &c)| q(c) * h.get(j + 1)).sum();
                CycScalar::from_q(self.conductor, v)
            })
            .collect();
        CMat::diag(self.conductor, &d)
    }

    /// `−c·tr(xy)`.
    pub fn pairing(&self, x: &CMat, y: &CMat) -> CycScalar {
        let mut s = CycScalar::zero(self.conductor);
        for (r, c, a) in x.entries() {
            if a.is_zero() {
                continue;
            }
            let b = y.get(c, r);
            if !b.is_zero() {
                s = &s + &(a * b);
            }
        }
        s.scale(&-&self.trace_scale)
    }

    pub fn lift(&self, conductor: u64) -> MatrixAlgebra {
        MatrixAlgebra { form: self.form.as_ref().map(|j| j.lift(conductor)), conductor, ..self.clone() }
    }
}

/// Converts a weight vector to a root, or `None` for the zero weight.
pub fn weight_root(w: &[i64]) -> Option<Root> {
    let pairs: Vec<(usize, i64)> = w.iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j + 1, c)).collect();
    if pairs.is_empty() {
        None
    } else {
        Some(Root::from_pairs(&pairs))
    }
}

fn eps(rank: usize, j: usize, c: i64) -> Vec<i64> {
    let mut v = vec![0; rank];
    v[j] = c;
    v
}

fn pm_weights(rank: usize) -> Vec<Vec<i64>> {
    let mut w: Vec<Vec<i64>> = (0..rank).map(|j| eps(rank, j, 1)).collect();
    w.extend((0..rank).map(|j| eps(rank, j, -1)));
    w
}

/// Symmetric form pairing slot `j` with slot `rank + j`, plus `extra` slots
/// paired with themselves.
fn orthogonal_form(rank: usize, extra: usize, l: u64) -> CMat {
    let dim = 2 * rank + extra;
    let mut j = CMat::zeros(dim, dim, l);
    for a in 0..rank {
        j.set(a, rank + a, CycScalar::one(l));
        j.set(rank + a, a, CycScalar::one(l));
    }
    for e in 0..extra {
        j.set(2 * rank + e, 2 * rank + e, CycScalar::one(l));
    }
    j
}

/// `Ω = [[0, −I], [I, 0]]`.
pub fn omega(rank: usize, l: u64) -> CMat {
    let mut m = CMat::zeros(2 * rank, 2 * rank, l);
    for a in 0..rank {
        m.set(a, rank + a, CycScalar::from_i64(l, -1));
        m.set(rank + a, a, CycScalar::one(l));
    }
    m
}

/// The standard model of a kind at the given rank, with its standard twist
/// `ψ` of order `N_ψ`. Requires `4 | conductor`.
pub fn standard_model(kind: LarsKind, rank: usize, conductor: u64) -> (MatrixAlgebra, Twist) {
    let l = conductor;
    let half = qf(1, 2);
    let alg = |dim, weights, form, c| MatrixAlgebra { dim, rank, weights, form, trace_scale: c, conductor: l };
    match kind {
        LarsKind::A1 => {
            let w = (0..rank).map(|j| eps(rank, j, 1)).collect();
            (alg(rank, w, None, q(1)), Twist::identity())
        }
        LarsKind::C1 => (alg(2 * rank, pm_weights(rank), Some(omega(rank, l)), half), Twist::identity()),
        LarsKind::D1 => (alg(2 * rank, pm_weights(rank), Some(orthogonal_form(rank, 0, l)), half), Twist::identity()),
        LarsKind::B1 => {
            let mut w = pm_weights(rank);
            w.push(vec![0; rank]);
            (alg(2 * rank + 1, w, Some(orthogonal_form(rank, 1, l)), half), Twist::identity())
        }
        LarsKind::B2 => {
            let mut w = pm_weights(rank);
            w.push(vec![0; rank]);
            w.push(vec![0; rank]);
            let dim = 2 * rank + 2;
            let mut b = CMat::identity(dim, l);
            b.set(dim - 1, dim - 1, CycScalar::from_i64(l, -1));
            (alg(dim, w, Some(orthogonal_form(rank, 2, l)), half), Twist::new(TwistOp::Unitary(b), 2))
        }
        LarsKind::C2 => {
            (alg(2 * rank, pm_weights(rank), None, half), Twist::new(TwistOp::Antiunitary(omega(rank, l)), 2))
        }
        LarsKind::BC2 => {
            // Slots e⁺_1..e⁺_r, e_0, e⁻_1..e⁻_r.
            let dim = 2 * rank + 1;
            let mut w: Vec<Vec<i64>> = (0..rank).map(|j| eps(rank, j, 1)).collect();
            w.push(vec![0; rank]);
            w.extend((0..rank).map(|j| eps(rank, j, -1)));
            let mut p = CMat::zeros(dim, dim, l);
            for a in 0..rank {
                p.set(a, rank + 1 + a, CycScalar::one(l));
                p.set(rank + 1 + a, a, CycScalar::one(l));
            }
            p.set(rank, rank, CycScalar::one(l));
            (alg(dim, w, None, half), Twist::new(TwistOp::Antiunitary(p), 2))
        }
    }
}

//! Local operators taking a 3-qubit state to its class representative.
//!
//! GHZ-class states need the two roots of the slice pencil, which lie in a
//! quadratic extension of the amplitude field; exact inputs are therefore
//! canonicalized over [`Radical`].

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::hyperdet::explicit::require_format;
use crate::linalg::Matrix;
use crate::scalar::{Exact, Float, Radical, Scalar, Tolerance};
use crate::tensor::{apply_local, flatten, LocalOperatorTuple, StateTensor};

use super::{classify, ClassLabel, ClassName};

/// A field together with the extension holding square roots of its elements.
pub trait SplittingField: Scalar {
    type Ext: Scalar;

    fn lift(&self) -> Self::Ext;

    fn sqrt_ext(&self) -> Self::Ext;
}

impl SplittingField for Exact {
    type Ext = Radical;

    fn lift(&self) -> Radical {
        Radical::lift(self.clone())
    }

    fn sqrt_ext(&self) -> Radical {
        Radical::sqrt_of(self)
    }
}

impl SplittingField for Float {
    type Ext = Float;

    fn lift(&self) -> Float {
        *self
    }

    fn sqrt_ext(&self) -> Float {
        self.sqrt()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Canonical<E> {
    /// `apply_local(T, g)` is proportional to `representative(label)`.
    pub g: LocalOperatorTuple<E>,
    pub label: ClassLabel,
}

fn slices<E: Scalar>(t: &StateTensor<E>) -> [Matrix<E>; 2] {
    let a = t.amplitudes();
    [
        Matrix::from_row_major(2, 2, a[0..4].to_vec()),
        Matrix::from_row_major(2, 2, a[4..8].to_vec()),
    ]
}

/// Coefficients of `det(x₀A₀ + x₁A₁) = c₀x₀² + c₁x₀x₁ + c₂x₁²`.
fn pencil<E: Scalar>(t: &StateTensor<E>) -> [E; 3] {
    let [a0, a1] = slices(t);
    let c0 = a0.determinant();
    let c2 = a1.determinant();
    let c1 = a0.add(&a1).determinant() - c0.clone() - c2.clone();
    [c0, c1, c2]
}

fn pencil_member<E: Scalar>(t: &StateTensor<E>, x: &[E; 2]) -> Matrix<E> {
    let [a0, a1] = slices(t);
    a0.scale(&x[0]).add(&a1.scale(&x[1]))
}

/// Largest-modulus nonzero entry, used as pivot.
fn pivot<E: Scalar>(m: &Matrix<E>) -> Result<(usize, usize)> {
    let mut best: Option<((usize, usize), f64)> = None;
    for i in 0..m.rows() {
        for j in 0..m.cols() {
            let v = &m[(i, j)];
            if v.is_zero() {
                continue;
            }
            let r = v.modulus();
            if best.is_none_or(|(_, b)| r > b) {
                best = Some(((i, j), r));
            }
        }
    }
    best.map(|(p, _)| p).ok_or(Error::ZeroState)
}

/// `m = col · rowᵀ` for a rank-one matrix.
fn rank_one<E: Scalar>(m: &Matrix<E>) -> Result<(Vec<E>, Vec<E>)> {
    let (i, j) = pivot(m)?;
    let p = m[(i, j)].clone();
    let row = m.row(i).iter().map(|v| v.clone() / p.clone()).collect();
    Ok((m.column(j), row))
}

fn columns<E: Scalar>(a: &[E], b: &[E]) -> Matrix<E> {
    Matrix::from_rows(vec![vec![a[0].clone(), b[0].clone()], vec![a[1].clone(), b[1].clone()]])
}

/// Inverse of `[u, e_k]`, the standard vector chosen so the matrix is invertible;
/// it sends `u` to `|0⟩`.
fn send_to_zero<E: Scalar>(u: &[E]) -> Result<Matrix<E>> {
    let (z, o) = (E::zero(), E::one());
    let other = if u[0].modulus() >= u[1].modulus() && !u[0].is_zero() {
        [z, o]
    } else {
        [o, z]
    };
    columns(u, &other).inverse().ok_or(Error::ZeroState)
}

fn invert<E: Scalar>(m: &Matrix<E>) -> Result<Matrix<E>> {
    m.inverse().ok_or(Error::ZeroState)
}

fn ghz_ops<S: SplittingField>(t: &StateTensor<S>, tl: &StateTensor<S::Ext>) -> Result<Vec<Matrix<S::Ext>>> {
    let [c0, c1, c2] = pencil(tl);
    let [b0, b1, b2] = pencil(t);
    let s = (b1.clone() * b1 - S::from_i64(4) * b0 * b2).sqrt_ext();
    // q = -(c1 ± s)/2, sign chosen against cancellation
    let aligned = (c1.to_c64().conj() * s.to_c64()).re >= 0.0;
    let half = S::Ext::from_ratio(1, 2);
    let q_of = |plus: bool| {
        let sum = if plus { c1.clone() + s.clone() } else { c1.clone() - s.clone() };
        -(sum * half.clone())
    };
    let mut q = q_of(aligned);
    if q.is_zero() {
        q = q_of(!aligned);
    }
    // roots x₁/x₀ = q/c₂ and c₀/q, as projective points
    let mut roots = [[c2, q.clone()], [q, c0]];
    let diag = (roots[0][0].clone() * roots[1][1].clone()).modulus();
    let anti = (roots[0][1].clone() * roots[1][0].clone()).modulus();
    if diag < anti {
        roots.swap(0, 1);
    }
    let r = Matrix::from_rows(roots.iter().map(|x| x.to_vec()).collect());
    let (v0, w0) = rank_one(&pencil_member(tl, &roots[0]))?;
    let (v1, w1) = rank_one(&pencil_member(tl, &roots[1]))?;
    Ok(vec![r, invert(&columns(&v0, &v1))?, invert(&columns(&w0, &w1))?])
}

fn w_ops<E: Scalar>(tl: &StateTensor<E>, tol: Tolerance) -> Result<Vec<Matrix<E>>> {
    let [c0, c1, c2] = pencil(tl);
    let two = E::from_i64(2);
    let rho = if c2.modulus() >= c0.modulus() && !c2.is_zero() {
        [two * c2, -c1]
    } else {
        [-c1, two * c0]
    };
    let (v, w) = rank_one(&pencil_member(tl, &rho))?;
    let (z, o) = (E::zero(), E::one());
    let sigma = if rho[0].modulus() >= rho[1].modulus() && !rho[0].is_zero() {
        [z.clone(), o.clone()]
    } else {
        [o.clone(), z.clone()]
    };
    let r = Matrix::from_rows(vec![rho.to_vec(), sigma.to_vec()]);
    let step = vec![r, send_to_zero(&v)?, send_to_zero(&w)?];
    let t1 = apply_local(tl, &LocalOperatorTuple::new(step.clone())?)?;
    // t1 = |000⟩ + b00|100⟩ + b01|101⟩ + b10|110⟩, up to the scale of |000⟩
    let a = t1.amplitudes();
    let scale = t1.norm();
    if a[0b000].is_negligible(scale, tol) || a[0b101].is_negligible(scale, tol) || a[0b110].is_negligible(scale, tol) {
        return Err(Error::NoCanonicalRepresentative("W reduction lost a pivot".into()));
    }
    let (a000, b00, b01, b10) = (a[0b000].clone(), a[0b100].clone(), a[0b101].clone(), a[0b110].clone());
    // party 1: |0⟩ + (b00/a000)|1⟩ ↦ |0⟩, then swap |0⟩ ↔ |1⟩
    let h1 = Matrix::from_rows(vec![vec![-(b00 / a000.clone()), o.clone()], vec![o.clone(), z.clone()]]);
    let h2 = Matrix::from_rows(vec![vec![o.clone(), z.clone()], vec![z.clone(), a000.clone() / b10]]);
    let h3 = Matrix::from_rows(vec![vec![o, z.clone()], vec![z, a000 / b01]]);
    Ok(vec![h1.mul(&step[0]), h2.mul(&step[1]), h3.mul(&step[2])])
}

fn biseparable_ops<E: Scalar>(tl: &StateTensor<E>, party: usize) -> Result<Vec<Matrix<E>>> {
    let (u, phi) = rank_one(&flatten(tl, &[party])?)?;
    let phi = Matrix::from_row_major(2, 2, phi);
    let (z, o) = (E::zero(), E::one());
    let swap = Matrix::from_rows(vec![vec![z.clone(), o.clone()], vec![o, z]]);
    let rest: Vec<usize> = (0..3).filter(|&p| p != party).collect();
    let mut ops = vec![Matrix::identity(2); 3];
    ops[party] = send_to_zero(&u)?;
    ops[rest[0]] = swap.mul(&invert(&phi)?);
    Ok(ops)
}

fn separable_ops<E: Scalar>(tl: &StateTensor<E>) -> Result<Vec<Matrix<E>>> {
    (0..3)
        .map(|p| {
            let (u, _) = rank_one(&flatten(tl, &[p])?)?;
            send_to_zero(&u)
        })
        .collect()
}

/// Invertible local operators taking a 3-qubit state onto its class
/// representative, up to an overall scalar.
pub fn canonicalize_3qubit<S: SplittingField>(t: &StateTensor<S>, tol: Tolerance) -> Result<Canonical<S::Ext>> {
    require_format(t, &[2, 2, 2])?;
    let label = classify(t, tol)?;
    let tl = t.map(|v| v.lift())?;
    let ops = match label.name {
        ClassName::Ghz => ghz_ops(t, &tl)?,
        ClassName::W => w_ops(&tl, tol)?,
        ClassName::B1 => biseparable_ops(&tl, 0)?,
        ClassName::B2 => biseparable_ops(&tl, 1)?,
        ClassName::B3 => biseparable_ops(&tl, 2)?,
        ClassName::S => separable_ops(&tl)?,
        other => return Err(Error::NoCanonicalRepresentative(other.to_string())),
    };
    Ok(Canonical {
        g: LocalOperatorTuple::new(ops)?,
        label,
    })
}

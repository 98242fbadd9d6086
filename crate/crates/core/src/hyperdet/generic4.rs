//! The 4-qubit hyperdeterminant (degree 24) via the Schläfli lift of the
//! Cayley 2×2×2 determinant, and the closed-form value on the generic family
//! `α(|0000⟩+|1111⟩) + β(|0011⟩+|1100⟩) + γ(|0101⟩+|1010⟩) + δ(|0110⟩+|1001⟩)`.

use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;

use super::explicit::{det3_raw, require_format};
use super::schlafli::{binary_form_coeffs, schlafli_lift, BinaryFormCoefficients, LiftOutcome};
use crate::error::Result;
use crate::scalar::{Exact, Scalar, Tolerance};
use crate::tensor::StateTensor;

/// Calibration of the 4-qubit lift: `eval_closed_form(2,1,1,1) / raw_lift(generic4(2,1,1,1))`.
/// Frozen from one exact evaluation; `calibration_constant_reproduces_pinned_point`
/// re-derives it.
pub const K4: &str = "1/256";

pub fn k4() -> &'static Exact {
    static VALUE: OnceLock<Exact> = OnceLock::new();
    VALUE.get_or_init(|| {
        let re: BigRational = K4.parse().expect("K4 literal is a rational");
        Exact::new(re, BigRational::zero())
    })
}

fn k4_in<S: Scalar>() -> S {
    S::from_exact(k4())
}

/// Slice-pencil coefficients of a 2⁴ tensor over the Cayley determinant (degree 4).
pub fn pencil4<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<BinaryFormCoefficients<S>> {
    require_format(t, &[2, 2, 2, 2])?;
    binary_form_coeffs(t, det3_raw, 4, tol)
}

/// Uncalibrated lift: Sylvester determinant over `c_4`, with the same
/// determinant-one retry as the calibrated path.
pub fn det4_uncalibrated<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<LiftOutcome<S>> {
    let c = pencil4(t, tol)?;
    schlafli_lift(&c, &S::one(), tol)
}

pub fn det4_outcome<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<LiftOutcome<S>> {
    let c = pencil4(t, tol)?;
    schlafli_lift(&c, &k4_in::<S>(), tol)
}

/// Hyperdeterminant of format 2×2×2×2, homogeneous of degree 24.
pub fn det4<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<S> {
    Ok(det4_outcome(t, tol)?.value)
}

/// The eight amplitudes of the generic 4-qubit family.
pub fn build_generic4<S: Scalar>(alpha: &S, beta: &S, gamma: &S, delta: &S) -> Result<StateTensor<S>> {
    StateTensor::from_terms(
        &[2, 2, 2, 2],
        &[
            ("0000", alpha.clone()),
            ("1111", alpha.clone()),
            ("0011", beta.clone()),
            ("1100", beta.clone()),
            ("0101", gamma.clone()),
            ("1010", gamma.clone()),
            ("0110", delta.clone()),
            ("1001", delta.clone()),
        ],
    )
}

/// The twelve linear factors whose squares multiply to the closed form.
pub fn closed_form_factors<S: Scalar>(alpha: &S, beta: &S, gamma: &S, delta: &S) -> [S; 12] {
    let (a, b, g, d) = (alpha.clone(), beta.clone(), gamma.clone(), delta.clone());
    [
        a.clone(),
        b.clone(),
        g.clone(),
        d.clone(),
        a.clone() + b.clone() + g.clone() + d.clone(),
        a.clone() + b.clone() + g.clone() - d.clone(),
        a.clone() + b.clone() - g.clone() + d.clone(),
        a.clone() - b.clone() + g.clone() + d.clone(),
        -a.clone() + b.clone() + g.clone() + d.clone(),
        a.clone() + b.clone() - g.clone() - d.clone(),
        a.clone() - b.clone() + g.clone() - d.clone(),
        a - b - g + d,
    ]
}

/// `α²β²γ²δ² ∏ (±α±β±γ±δ)²` over the eight sign patterns of the closed form.
pub fn eval_closed_form<S: Scalar>(alpha: &S, beta: &S, gamma: &S, delta: &S) -> S {
    closed_form_factors(alpha, beta, gamma, delta)
        .into_iter()
        .fold(S::one(), |acc, f| acc * f.clone() * f)
}

/// Re-derives the calibration constant from the pinned point `(2,1,1,1)`.
pub fn derive_k4() -> Result<Exact> {
    let [a, b, g, d] = [2, 1, 1, 1].map(Exact::from_i64);
    let t = build_generic4(&a, &b, &g, &d)?;
    let raw = det4_uncalibrated(&t, Tolerance::default())?.value;
    Ok(eval_closed_form(&a, &b, &g, &d) / raw)
}

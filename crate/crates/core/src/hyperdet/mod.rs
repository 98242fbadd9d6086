//! Hyperdeterminant evaluation for the supported formats, the pairing with
//! product vectors, and the entanglement measures derived from `Det`.

pub mod explicit;
pub mod generic4;
pub mod schlafli;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Float, Scalar, Tolerance};
use crate::tensor::{flatten, multi_index, ProductVector, StateTensor};

pub use explicit::{det2, det2_raw, det3_explicit, det3_raw, det_3x2x2, minors_3x2x2};
pub use generic4::{build_generic4, det4, eval_closed_form};
pub use schlafli::{binary_form_coeffs, schlafli_lift, BinaryFormCoefficients, LiftOutcome};

/// Calibration of the 3-qubit lift over `det2`: makes the lift equal
/// `c₁² − 4c₀c₂`, the Cayley determinant.
pub const K3: i64 = -1;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HyperdetResult<S> {
    /// False when the dual variety is not a hypersurface; `value` is then one.
    pub defined: bool,
    #[serde(skip)]
    pub value: S,
    pub degree: usize,
    pub format: Vec<usize>,
    /// The Schläfli pencil vanished identically (4-qubit path only).
    pub degenerate_pencil: bool,
}

/// Polygon inequality `k₁ ≤ k₂ + ⋯ + kₙ` with `kⱼ = dimⱼ − 1` sorted descending.
pub fn polygon_inequality(format: &[usize]) -> bool {
    let mut k: Vec<usize> = format.iter().map(|d| d - 1).collect();
    k.sort_unstable_by(|a, b| b.cmp(a));
    match k.split_first() {
        Some((first, rest)) => *first <= rest.iter().sum(),
        None => false,
    }
}

/// Degree of homogeneity for the implemented formats (parties in any order).
pub fn degree(format: &[usize]) -> Option<usize> {
    let mut sorted = format.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    match sorted.as_slice() {
        [a, b] if a == b => Some(*a),
        [2, 2, 2] => Some(4),
        [3, 2, 2] => Some(6),
        [2, 2, 2, 2] => Some(24),
        _ => None,
    }
}

/// Exponent of `det(gⱼ)` in the relative invariance of `Det`: `l / dimⱼ`.
pub fn weight_exponents(format: &[usize]) -> Option<Vec<u32>> {
    let l = degree(format)?;
    Some(format.iter().map(|&d| (l / d) as u32).collect())
}

/// Hyperdeterminant of any supported format.
///
/// Dispatches to the matrix determinant (square bipartite), the Cayley formula
/// (2×2×2), the boundary-format minor formula (3×2×2, parties reordered so
/// the three-level party comes first) and the Schläfli lift (2×2×2×2).
pub fn hyperdet<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<HyperdetResult<S>> {
    let format = t.format().to_vec();
    if !polygon_inequality(&format) {
        return Ok(HyperdetResult {
            defined: false,
            value: S::one(),
            degree: 0,
            format,
            degenerate_pencil: false,
        });
    }
    let unsupported = || Error::UnsupportedFormat(format.clone());
    let l = degree(&format).ok_or_else(unsupported)?;
    let mut degenerate_pencil = false;
    let value = match format.as_slice() {
        [_, _] => flatten(t, &[0])?.determinant(),
        [2, 2, 2] => det3_explicit(t)?,
        [_, _, _] => {
            let three = format.iter().position(|&d| d == 3).ok_or_else(unsupported)?;
            let mut perm = vec![three];
            perm.extend((0..3).filter(|&p| p != three));
            det_3x2x2(&t.permute_parties(&perm))?
        }
        [2, 2, 2, 2] => {
            let out = generic4::det4_outcome(t, tol)?;
            degenerate_pencil = out.degenerate_pencil;
            out.value
        }
        _ => return Err(unsupported()),
    };
    Ok(HyperdetResult {
        defined: true,
        value,
        degree: l,
        format,
        degenerate_pencil,
    })
}

/// Scale against which a degree-`l` invariant is compared in float mode.
pub fn invariant_scale<S: Scalar>(t: &StateTensor<S>, degree: usize) -> f64 {
    t.norm().powi(degree as i32)
}

/// `F(A, x) = Σ a_{i₁…iₙ} x⁽¹⁾_{i₁} ⋯ x⁽ⁿ⁾_{iₙ}`.
pub fn pairing<S: Scalar>(a: &StateTensor<S>, x: &ProductVector<S>) -> Result<S> {
    if x.format() != a.format() {
        return Err(Error::SizeMismatch(format!(
            "product vector {:?} vs tensor {:?}",
            x.format(),
            a.format()
        )));
    }
    Ok(a.amplitudes()
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .fold(S::zero(), |acc, (flat, v)| {
            let idx = multi_index(a.format(), flat);
            let term = idx
                .iter()
                .enumerate()
                .fold(v.clone(), |p, (j, &i)| p * x.factors()[j][i].clone());
            acc + term
        }))
}

/// `C = 2|Det A₂|`.
pub fn concurrence(t: &StateTensor<Float>) -> Result<f64> {
    Ok(2.0 * det2(t)?.norm())
}

/// `C² = 4|Det A₂|²`, exact in exact mode.
pub fn concurrence_squared<S: Scalar>(t: &StateTensor<S>) -> Result<S> {
    Ok(S::from_i64(4) * det2(t)?.norm_sqr())
}

/// `τ = 4|Det A₃|`.
pub fn tangle3(t: &StateTensor<Float>) -> Result<f64> {
    Ok(4.0 * det3_explicit(t)?.norm())
}

/// `τ² = 16|Det A₃|²`, exact in exact mode.
pub fn tangle3_squared<S: Scalar>(t: &StateTensor<S>) -> Result<S> {
    Ok(S::from_i64(16) * det3_explicit(t)?.norm_sqr())
}

/// The 2×2×2 hyperdeterminant recomputed through the Schläfli lift of `det2`.
pub fn det3_schlafli<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<S> {
    explicit::require_format(t, &[2, 2, 2])?;
    let c = binary_form_coeffs(t, det2_raw, 2, tol)?;
    Ok(schlafli_lift(&c, &S::from_i64(K3), tol)?.value)
}

/// Square matrix determinant helper re-exported for callers that hold a
/// flattening already.
pub fn matrix_det<S: Scalar>(m: &Matrix<S>) -> S {
    m.determinant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn kets(format: &[usize], k: &[&str]) -> StateTensor<Exact> {
        StateTensor::from_kets(format, k).unwrap()
    }

    fn pv(f: &[&[i64]]) -> ProductVector<Exact> {
        ProductVector::new(f.iter().map(|v| v.iter().map(|&x| Exact::from_i64(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let x = pv(&[&[1, 0], &[1, 0], &[1, 0]]);
        assert_eq!(pairing(&kets(&[2, 2, 2], &["000"]), &x).unwrap(), Exact::from_i64(1));
        let x = pv(&[&[1, 0], &[1, 0], &[0, 1]]);
        assert_eq!(pairing(&kets(&[2, 2, 2], &["000", "111"]), &x).unwrap(), Exact::from_i64(0));
        let x = pv(&[&[1, 1], &[1, 1], &[1, 1]]);
        assert_eq!(pairing(&kets(&[2, 2, 2], &["001", "010", "100"]), &x).unwrap(), Exact::from_i64(3));
        let x = pv(&[&[1, 1], &[1, 1]]);
        assert!(pairing(&kets(&[2, 2, 2], &["000"]), &x).is_err());
    }

    #[test]
    fn measures() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let bell = StateTensor::<Float>::from_kets(&[2, 2], &["00", "11"]).unwrap().scaled(&Float::new(h, 0.0)).unwrap();
        assert!((concurrence(&bell).unwrap() - 1.0).abs() < 1e-12);
        let ghz = StateTensor::<Float>::from_kets(&[2, 2, 2], &["000", "111"]).unwrap().scaled(&Float::new(h, 0.0)).unwrap();
        assert!((tangle3(&ghz).unwrap() - 1.0).abs() < 1e-12);
        let w = StateTensor::<Float>::from_kets(&[2, 2, 2], &["001", "010", "100"]).unwrap();
        assert_eq!(tangle3(&w).unwrap(), 0.0);

        let half = crate::scalar::rational(1, 2);
        let ghz_exact = kets(&[2, 2, 2], &["000", "111"]);
        // amplitudes 1/2 each: τ² = 16 · (1/16)² = 1/16
        let t = ghz_exact.scaled(&half).unwrap();
        assert_eq!(tangle3_squared(&t).unwrap(), crate::scalar::rational(1, 16));
        assert_eq!(concurrence_squared(&kets(&[2, 2], &["00", "11"])).unwrap(), Exact::from_i64(4));
    }

    #[test]
    fn dispatch_examples() {
        let tol = Tolerance::default();
        let bell = hyperdet(&kets(&[2, 2], &["00", "11"]), tol).unwrap();
        assert!(bell.defined);
        assert_eq!(bell.value, Exact::from_i64(1));
        assert_eq!(bell.degree, 2);

        let off = hyperdet(&kets(&[4, 2, 2], &["000", "311"]), tol).unwrap();
        assert!(!off.defined);
        assert_eq!(off.value, Exact::from_i64(1));

        assert_eq!(
            hyperdet(&kets(&[2, 2, 2, 2, 2], &["00000"]), tol),
            Err(Error::UnsupportedFormat(vec![2, 2, 2, 2, 2]))
        );
        assert!(!hyperdet(&kets(&[2, 3], &["00"]), tol).unwrap().defined);
        assert_eq!(hyperdet(&kets(&[3, 3, 2], &["000"]), tol), Err(Error::UnsupportedFormat(vec![3, 3, 2])));
    }

    #[test]
    fn permuted_boundary_format_matches() {
        let tol = Tolerance::default();
        let t = kets(&[3, 2, 2], &["000", "101", "110", "211"]);
        let p = t.permute_parties(&[1, 0, 2]);
        assert_eq!(hyperdet(&p, tol).unwrap().value, hyperdet(&t, tol).unwrap().value);
    }

    #[test]
    fn degree_table() {
        assert_eq!(degree(&[2, 2]), Some(2));
        assert_eq!(degree(&[2, 2, 2]), Some(4));
        assert_eq!(degree(&[2, 2, 2, 2]), Some(24));
        assert_eq!(degree(&[3, 2, 2]), Some(6));
        assert_eq!(weight_exponents(&[3, 2, 2]), Some(vec![2, 3, 3]));
        assert_eq!(weight_exponents(&[2, 2, 2, 2]), Some(vec![12; 4]));
        assert!(polygon_inequality(&[3, 2, 2]));
        assert!(!polygon_inequality(&[4, 2, 2]));
        assert!(polygon_inequality(&[2, 2, 2, 2, 2]));
    }

    #[test]
    fn schlafli_det3_matches_cayley_on_examples() {
        let tol = Tolerance::default();
        for k in [
            &["000", "111"][..],
            &["001", "010", "100"],
            &["000", "111", "011"],
            &["000"],
            &["011", "101", "110", "111"],
        ] {
            let t = kets(&[2, 2, 2], k);
            assert_eq!(det3_schlafli(&t, tol).unwrap(), det3_explicit(&t).unwrap(), "{k:?}");
        }
    }
}

//! Schläfli's construction: the hyperdeterminant of a `2 × f₂ × ⋯` tensor is,
//! up to a constant, the discriminant of the binary form
//! `Det(x₀ A₀ + x₁ A₁)` built from the two slices of the first party.
//!
//! The discriminant is taken through the Sylvester determinant of the form
//! and its `x₁`-derivative, divided by the leading coefficient.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::random::rng_from_seed;
use crate::scalar::{Scalar, Tolerance};
use crate::tensor::StateTensor;

/// Maximum number of determinant-one substitutions tried when `c_l = 0`.
pub const LIFT_RETRIES: usize = 8;

const LIFT_SEED: u64 = 0x5c41_af11;

/// Coefficients `c₀ … c_l` of a binary form, `c_j` multiplying `x₀^{l-j} x₁^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct BinaryFormCoefficients<S> {
    coeffs: Vec<S>,
    /// Magnitude scale of the coefficients for float zero tests.
    scale: f64,
}

impl<S: Scalar> BinaryFormCoefficients<S> {
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "binary form needs at least one coefficient");
        let scale = coeffs.iter().map(Scalar::modulus).fold(0.0, f64::max);
        BinaryFormCoefficients { coeffs, scale }
    }

    pub fn with_scale(coeffs: Vec<S>, scale: f64) -> Self {
        BinaryFormCoefficients { coeffs, scale }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// `Σ c_j x₀^{l-j} x₁^j`.
    pub fn evaluate(&self, x0: &S, x1: &S) -> S {
        let l = self.degree() as u32;
        self.coeffs
            .iter()
            .enumerate()
            .fold(S::zero(), |acc, (j, c)| {
                acc + c.clone() * x0.powu(l - j as u32) * x1.powu(j as u32)
            })
    }

    /// The form after the substitution `x ↦ gᵀ x`, i.e. the pencil of the
    /// slices mixed by `g` on the first party.
    pub fn substitute(&self, g: &Matrix<S>) -> Self {
        let l = self.degree();
        // linear forms as coefficient vectors in powers of x₁
        let l0 = [g[(0, 0)].clone(), g[(1, 0)].clone()];
        let l1 = [g[(0, 1)].clone(), g[(1, 1)].clone()];
        let powers = |lin: &[S; 2]| -> Vec<Vec<S>> {
            let mut out = vec![vec![S::one()]];
            for _ in 0..l {
                out.push(poly_mul(out.last().unwrap(), lin));
            }
            out
        };
        let p0 = powers(&l0);
        let p1 = powers(&l1);
        let mut coeffs = vec![S::zero(); l + 1];
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let term = poly_mul(&p0[l - j], &p1[j]);
            for (k, t) in term.into_iter().enumerate() {
                coeffs[k] = coeffs[k].clone() + c.clone() * t;
            }
        }
        let g_scale = g.max_modulus().max(1.0).powi(l as i32);
        BinaryFormCoefficients {
            coeffs,
            scale: self.scale * g_scale,
        }
    }
}

fn poly_mul<S: Scalar>(a: &[S], b: &[S]) -> Vec<S> {
    let mut out = vec![S::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    out
}

/// Coefficients of `Det(x₀ A₀ + x₁ A₁)` where `A₀, A₁` are the slices of the
/// first party and `base_det` (homogeneous of degree `degree`) evaluates the
/// hyperdeterminant of the slice format on raw amplitudes.
///
/// `c₀ … c_l` come from interpolation at the nodes `(1, t)`, `t = 0, …, l`;
/// `c_l` is then read from `base_det(A₁)` and checked against the
/// interpolated value.
pub fn binary_form_coeffs<S: Scalar>(
    t: &StateTensor<S>,
    base_det: impl Fn(&[S]) -> S,
    degree: usize,
    tol: Tolerance,
) -> Result<BinaryFormCoefficients<S>> {
    if t.format().first() != Some(&2) || t.parties() < 2 {
        let mut expected = vec![2];
        expected.extend_from_slice(t.format().get(1..).unwrap_or(&[]));
        return Err(Error::WrongFormat {
            expected,
            got: t.format().to_vec(),
        });
    }
    let a0 = t.slice(0, 0);
    let a1 = t.slice(0, 1);
    let l = degree;

    let nodes: Vec<S> = (0..=l).map(|k| S::from_i64(k as i64)).collect();
    let values: Vec<S> = nodes
        .iter()
        .map(|node| {
            let pencil: Vec<S> = a0
                .iter()
                .zip(&a1)
                .map(|(x, y)| x.clone() + node.clone() * y.clone())
                .collect();
            base_det(&pencil)
        })
        .collect();
    let vandermonde = Matrix::from_rows(
        nodes
            .iter()
            .map(|node| (0..=l).map(|j| node.powu(j as u32)).collect())
            .collect(),
    );
    let mut coeffs = vandermonde
        .solve(&values)
        .expect("Vandermonde matrix on distinct nodes is invertible");

    let leading = base_det(&a1);
    let scale = t.norm().powi(l as i32);
    let residual = (coeffs[l].clone() - leading.clone()).modulus();
    if !(coeffs[l].clone() - leading.clone()).is_negligible(scale, Tolerance::new(tol.eps.max(1e-9) * 1e3)) {
        return Err(Error::InterpolationInconsistent { residual });
    }
    coeffs[l] = leading;
    Ok(BinaryFormCoefficients::with_scale(coeffs, scale))
}

/// The `(2l-1)`-order Sylvester matrix of the form and its derivative:
/// `l-1` shifted rows of `(c₀ … c_l)` above `l` shifted rows of
/// `(1·c₁, 2·c₂, …, l·c_l)`.
pub fn sylvester_matrix<S: Scalar>(c: &BinaryFormCoefficients<S>) -> Matrix<S> {
    let l = c.degree();
    let n = 2 * l - 1;
    let mut m = Matrix::zeros(n, n);
    for r in 0..l - 1 {
        for (j, cj) in c.coeffs().iter().enumerate() {
            m[(r, r + j)] = cj.clone();
        }
    }
    for r in 0..l {
        for j in 1..=l {
            m[(l - 1 + r, r + j - 1)] = S::from_i64(j as i64) * c.coeffs()[j].clone();
        }
    }
    m
}

/// Sylvester determinant divided by `c_l`; requires `c_l ≠ 0`.
pub fn raw_lift<S: Scalar>(c: &BinaryFormCoefficients<S>) -> S {
    let l = c.degree();
    sylvester_matrix(c).determinant() / c.coeffs()[l].clone()
}

#[derive(Clone, Debug, PartialEq)]
pub struct LiftOutcome<S> {
    pub value: S,
    /// The form vanished identically; the value is reported as zero.
    pub degenerate_pencil: bool,
    /// Number of determinant-one substitutions applied to clear `c_l = 0`.
    pub retries: usize,
}

fn random_sl2<S: Scalar>(rng: &mut impl Rng) -> Matrix<S> {
    loop {
        let e: [i64; 4] = std::array::from_fn(|_| rng.random_range(-3..=3));
        if e[0] * e[3] - e[1] * e[2] == 1 {
            return Matrix::from_rows(vec![
                vec![S::from_i64(e[0]), S::from_i64(e[1])],
                vec![S::from_i64(e[2]), S::from_i64(e[3])],
            ]);
        }
    }
}

/// `calibration × sylvester(c) / c_l`.
///
/// When `c_l` vanishes the pencil variables are changed by a random integer
/// matrix of determinant one (the discriminant is invariant under it) and the
/// coefficients recomputed; the draws come from a fixed seed so the outcome is
/// reproducible.
pub fn schlafli_lift<S: Scalar>(
    c: &BinaryFormCoefficients<S>,
    calibration: &S,
    tol: Tolerance,
) -> Result<LiftOutcome<S>> {
    let l = c.degree();
    assert!(l >= 2, "Schläfli lift needs a form of degree >= 2");
    if c.coeffs().iter().all(|v| v.is_negligible(c.scale(), tol)) {
        return Ok(LiftOutcome {
            value: S::zero(),
            degenerate_pencil: true,
            retries: 0,
        });
    }
    let leading_ok = |f: &BinaryFormCoefficients<S>| {
        let largest = f.coeffs().iter().map(Scalar::modulus).fold(0.0, f64::max);
        !f.coeffs()[l].is_negligible(largest, tol)
    };
    let mut form = c.clone();
    let mut rng = rng_from_seed(LIFT_SEED);
    let mut retries = 0;
    while !leading_ok(&form) {
        if retries == LIFT_RETRIES {
            return Err(Error::AllLeadingZero(LIFT_RETRIES));
        }
        form = c.substitute(&random_sl2(&mut rng));
        retries += 1;
    }
    Ok(LiftOutcome {
        value: calibration.clone() * raw_lift(&form),
        degenerate_pencil: false,
        retries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyperdet::explicit::{det2_raw, det3_explicit};
    use crate::scalar::Exact;

    fn coeffs(v: &[i64]) -> BinaryFormCoefficients<Exact> {
        BinaryFormCoefficients::new(v.iter().map(|&x| Exact::from_i64(x)).collect())
    }

    fn form_of(kets: &[&str]) -> BinaryFormCoefficients<Exact> {
        let t = StateTensor::<Exact>::from_kets(&[2, 2, 2], kets).unwrap();
        binary_form_coeffs(&t, det2_raw, 2, Tolerance::default()).unwrap()
    }

    #[test]
    fn pencil_coefficients() {
        assert_eq!(form_of(&["000", "111"]).coeffs(), coeffs(&[0, 1, 0]).coeffs());
        assert_eq!(form_of(&["000", "111", "011"]).coeffs(), coeffs(&[1, 1, 0]).coeffs());
        assert_eq!(form_of(&["000"]).coeffs(), coeffs(&[0, 0, 0]).coeffs());
    }

    #[test]
    fn pencil_rejects_wrong_first_party() {
        let t = StateTensor::<Exact>::from_kets(&[3, 2, 2], &["000"]).unwrap();
        assert!(matches!(
            binary_form_coeffs(&t, det2_raw, 2, Tolerance::default()),
            Err(Error::WrongFormat { .. })
        ));
    }

    #[test]
    fn sylvester_order_three_closed_form() {
        // 4 c0 c2² − c1² c2
        let c = coeffs(&[3, -5, 7]);
        assert_eq!(sylvester_matrix(&c).determinant(), Exact::from_i64(4 * 3 * 49 - 25 * 7));
    }

    #[test]
    fn lift_examples() {
        let tol = Tolerance::default();
        let k3 = Exact::from_i64(-1);
        let out = schlafli_lift(&coeffs(&[0, 1, 0]), &k3, tol).unwrap();
        assert_eq!(out.value, Exact::from_i64(1));
        assert!(out.retries > 0);

        let out = schlafli_lift(&coeffs(&[1, 1, 0]), &k3, tol).unwrap();
        let t = StateTensor::<Exact>::from_kets(&[2, 2, 2], &["000", "111", "011"]).unwrap();
        assert_eq!(out.value, det3_explicit(&t).unwrap());
        assert_eq!(out.value, Exact::from_i64(1));

        let out = schlafli_lift(&coeffs(&[0, 0, 0]), &k3, tol).unwrap();
        assert!(out.degenerate_pencil);
        assert_eq!(out.value, Exact::from_i64(0));

        // c1² − 4 c0 c2 without retries
        let out = schlafli_lift(&coeffs(&[2, 3, 5]), &k3, tol).unwrap();
        assert_eq!(out.retries, 0);
        assert_eq!(out.value, Exact::from_i64(9 - 40));
    }

    #[test]
    fn substitution_preserves_discriminant() {
        let c = coeffs(&[1, -2, 3, 5, -1]);
        let g = Matrix::<Exact>::from_i64_rows(&[&[2, 1], &[1, 1]]);
        let s = c.substitute(&g);
        assert_eq!(raw_lift(&c), raw_lift(&s));
        // f'(x) = f(gᵀx)
        let (x0, x1) = (Exact::from_i64(3), Exact::from_i64(-2));
        let y0 = Exact::from_i64(2 * 3 + 1 * -2);
        let y1 = Exact::from_i64(1 * 3 + 1 * -2);
        assert_eq!(s.evaluate(&x0, &x1), c.evaluate(&y0, &y1));
    }
}

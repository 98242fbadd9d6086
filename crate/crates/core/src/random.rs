//! Seeded random states and local operators.
//!
//! All generators are driven by ChaCha8 so a seed reproduces the same values
//! on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::Matrix;
use crate::scalar::{rational, Exact, Float, Scalar};
use crate::tensor::{check_format, LocalOperatorTuple, StateTensor};

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// I.i.d. standard complex Gaussian amplitudes scaled to unit norm.
pub fn random_state(format: &[usize], seed: u64) -> Result<StateTensor<Float>> {
    let mut rng = rng_from_seed(seed);
    random_state_with(format, &mut rng)
}

pub fn random_state_with(format: &[usize], rng: &mut impl Rng) -> Result<StateTensor<Float>> {
    let total = check_format(format)?;
    loop {
        let amps: Vec<Float> = (0..total)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Float::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
            })
            .collect();
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 0.0 {
            return StateTensor::new(format.to_vec(), amps.into_iter().map(|a| a / norm).collect());
        }
    }
}

/// Small random Gaussian rational: parts `p/q` with `|p| <= 6`, `1 <= q <= 5`.
pub fn random_exact_scalar(rng: &mut impl Rng) -> Exact {
    let mut part = || rational(rng.random_range(-6..=6), rng.random_range(1..=5));
    let re = part();
    let im = part();
    Exact::new(re.re, im.re)
}

/// Random nonzero tensor with small Gaussian-rational amplitudes.
pub fn random_exact_state(format: &[usize], seed: u64) -> Result<StateTensor<Exact>> {
    let mut rng = rng_from_seed(seed);
    random_exact_state_with(format, &mut rng)
}

pub fn random_exact_state_with(format: &[usize], rng: &mut impl Rng) -> Result<StateTensor<Exact>> {
    let total = check_format(format)?;
    loop {
        let amps: Vec<Exact> = (0..total).map(|_| random_exact_scalar(rng)).collect();
        if let Ok(t) = StateTensor::new(format.to_vec(), amps) {
            return Ok(t);
        }
    }
}

fn random_small_matrix<S: Scalar>(dim: usize, rng: &mut impl Rng) -> Matrix<S> {
    let data = (0..dim * dim)
        .map(|_| S::from_i64(rng.random_range(-3..=3)) + S::from_i64(rng.random_range(-2..=2)) * imaginary_unit::<S>())
        .collect();
    Matrix::from_row_major(dim, dim, data)
}

fn imaginary_unit<S: Scalar>() -> S {
    S::from_c64(Float::new(0.0, 1.0))
}

/// Random invertible Gaussian-integer operator per party.
pub fn random_invertible<S: Scalar>(format: &[usize], rng: &mut impl Rng) -> LocalOperatorTuple<S> {
    let ops = format
        .iter()
        .map(|&d| loop {
            let m = random_small_matrix::<S>(d, rng);
            if m.determinant().modulus() > 0.5 {
                break m;
            }
        })
        .collect();
    LocalOperatorTuple::new(ops).expect("square operators")
}

/// Random operator tuple in which at least one party's operator is
/// rank-deficient; the rest are arbitrary (possibly also singular).
pub fn random_singular<S: Scalar>(format: &[usize], rng: &mut impl Rng) -> LocalOperatorTuple<S> {
    let forced = rng.random_range(0..format.len());
    let ops = format
        .iter()
        .enumerate()
        .map(|(party, &d)| {
            if party == forced || rng.random_bool(0.25) {
                let rank = rng.random_range(1..d);
                // product of d×rank and rank×d factors
                let left = Matrix::from_row_major(
                    d,
                    rank,
                    (0..d * rank).map(|_| S::from_i64(rng.random_range(-3..=3))).collect(),
                );
                let right = Matrix::from_row_major(
                    rank,
                    d,
                    (0..d * rank).map(|_| S::from_i64(rng.random_range(-3..=3))).collect(),
                );
                left.mul(&right)
            } else {
                loop {
                    let m = random_small_matrix::<S>(d, rng);
                    if m.determinant().modulus() > 0.5 {
                        break m;
                    }
                }
            }
        })
        .collect();
    LocalOperatorTuple::new(ops).expect("square operators")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_state_is_deterministic_and_unit_norm() {
        let a = random_state(&[2, 2, 2], 7).unwrap();
        let b = random_state(&[2, 2, 2], 7).unwrap();
        let c = random_state(&[2, 2, 2], 8).unwrap();
        let bits = |t: &StateTensor<Float>| -> Vec<(u64, u64)> {
            t.amplitudes()
                .iter()
                .map(|z| (z.re.to_bits(), z.im.to_bits()))
                .collect()
        };
        assert_eq!(bits(&a), bits(&b));
        assert_ne!(bits(&a), bits(&c));
        assert!((a.norm() - 1.0).abs() < 1e-12);
        assert!(random_state(&[2, 1], 7).is_err());
    }

    #[test]
    fn singular_tuples_have_a_rank_deficient_operator() {
        let mut rng = rng_from_seed(3);
        for _ in 0..50 {
            let g = random_singular::<Exact>(&[3, 2, 2], &mut rng);
            assert!(g.determinants().iter().any(num_traits::Zero::is_zero));
            let h = random_invertible::<Exact>(&[3, 2, 2], &mut rng);
            assert!(h.determinants().iter().all(|d| !num_traits::Zero::is_zero(d)));
        }
    }
}

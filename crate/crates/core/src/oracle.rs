//! Independent checks that do not go through the hyperdeterminant formulas:
//! a numerical search for critical points of the pairing `F(A, x)`, whose
//! existence is equivalent to `Det A = 0`, and random-evaluation identity
//! testing of polynomial functions.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::random::{random_exact_state_with, rng_from_seed};
use crate::scalar::{Exact, Float, Scalar};
use crate::tensor::{multi_index, ProductVector, StateTensor};

pub const DEFAULT_RESTARTS: usize = 64;
pub const DEFAULT_ORACLE_TOL: f64 = 1e-8;
const MAX_ITERATIONS: usize = 200;
const MAX_POLISH: usize = 200;
const GRADIENT_TOL: f64 = 1e-12;
const MAX_HALVINGS: usize = 60;

#[derive(Clone, Debug, PartialEq)]
pub struct CriticalSearchResult {
    pub found: bool,
    /// Unit-norm factors of the best point, present when `found`.
    pub witness: Option<ProductVector<Float>>,
    /// Smallest residual over all restarts.
    pub residual: f64,
    pub restarts_used: usize,
}

type Factors = Vec<Vec<Float>>;

fn normalized(x: &[Vec<Float>]) -> Factors {
    x.iter()
        .map(|f| {
            let n = f.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            f.iter().map(|v| v / n).collect()
        })
        .collect()
}

/// Contraction of `a` with every factor except those of `skip` (ascending),
/// indexed by the skipped parties.
fn contract_except(format: &[usize], a: &[Float], x: &[Vec<Float>], skip: &[usize]) -> Vec<Float> {
    let out_len: usize = skip.iter().map(|&p| format[p]).product();
    let mut out = vec![Float::new(0.0, 0.0); out_len];
    for (flat, v) in a.iter().enumerate() {
        if *v == Float::new(0.0, 0.0) {
            continue;
        }
        let idx = multi_index(format, flat);
        let mut term = *v;
        let mut o = 0;
        for (p, &i) in idx.iter().enumerate() {
            if skip.contains(&p) {
                o = o * format[p] + i;
            } else {
                term *= x[p][i];
            }
        }
        out[o] += term;
    }
    out
}

/// Partial derivatives `∂F/∂x⁽ʲ⁾`, one vector per party.
fn partials(format: &[usize], a: &[Float], x: &[Vec<Float>]) -> Factors {
    (0..format.len()).map(|j| contract_except(format, a, x, &[j])).collect()
}

fn residual_of(format: &[usize], a: &[Float], x: &[Vec<Float>]) -> f64 {
    partials(format, a, x)
        .iter()
        .flatten()
        .map(|v| v.norm_sqr())
        .sum()
}

/// Wirtinger gradient `∂r/∂x̄` projected onto the tangent space of the
/// product of unit spheres.
fn gradient(format: &[usize], a: &[Float], x: &[Vec<Float>]) -> Factors {
    let n = format.len();
    let g = partials(format, a, x);
    let mut grad: Factors = format.iter().map(|&d| vec![Float::new(0.0, 0.0); d]).collect();
    for m in 0..n {
        for j in (0..n).filter(|&j| j != m) {
            // H[l, k] = ∂g_j[l] / ∂x⁽ᵐ⁾_k
            let (lo, hi) = if j < m { (j, m) } else { (m, j) };
            let h = contract_except(format, a, x, &[lo, hi]);
            for l in 0..format[j] {
                for k in 0..format[m] {
                    let hv = if j < m { h[l * format[m] + k] } else { h[k * format[j] + l] };
                    grad[m][k] += g[j][l] * hv.conj();
                }
            }
        }
        let along: Float = x[m].iter().zip(&grad[m]).map(|(xi, gi)| xi.conj() * gi).sum();
        let along = Float::new(along.re, 0.0);
        for (gi, xi) in grad[m].iter_mut().zip(&x[m]) {
            *gi -= along * xi;
        }
    }
    grad
}

fn to_float_parts<S: Scalar>(t: &StateTensor<S>) -> (Vec<usize>, Vec<Float>) {
    (t.format().to_vec(), t.amplitudes().iter().map(Scalar::to_c64).collect())
}

/// `Σⱼ Σᵢ |∂F/∂x⁽ʲ⁾ᵢ|²` at `x` with every factor scaled to unit norm.
pub fn critical_residual<S: Scalar>(t: &StateTensor<S>, x: &ProductVector<S>) -> Result<f64> {
    if x.format() != t.format() {
        return Err(Error::SizeMismatch(format!(
            "product vector {:?} vs tensor {:?}",
            x.format(),
            t.format()
        )));
    }
    let (format, a) = to_float_parts(t);
    let xf: Factors = x.factors().iter().map(|f| f.iter().map(Scalar::to_c64).collect()).collect();
    Ok(residual_of(&format, &a, &normalized(&xf)))
}

fn descend(format: &[usize], a: &[Float], mut x: Factors) -> (f64, Factors) {
    let mut r = residual_of(format, a, &x);
    for _ in 0..MAX_ITERATIONS {
        let g = gradient(format, a, &x);
        let gnorm2: f64 = g.iter().flatten().map(|v| v.norm_sqr()).sum();
        if gnorm2.sqrt() < GRADIENT_TOL || r == 0.0 {
            break;
        }
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial: Factors = x
                .iter()
                .zip(&g)
                .map(|(xi, gi)| xi.iter().zip(gi).map(|(v, d)| v - d * step).collect())
                .collect();
            let trial = normalized(&trial);
            let rt = residual_of(format, a, &trial);
            if rt <= r - 1e-4 * step * gnorm2 {
                accepted = Some((rt, trial));
                break;
            }
            step *= 0.5;
        }
        match accepted {
            Some((rt, trial)) => {
                r = rt;
                x = trial;
            }
            None => break,
        }
    }
    (r, x)
}

/// Jacobian of the stacked partials with respect to the stacked factors.
/// The partials are holomorphic in `x`, so the complex Jacobian suffices.
fn jacobian(format: &[usize], a: &[Float], x: &[Vec<Float>]) -> DMatrix<Float> {
    let offsets: Vec<usize> = format.iter().scan(0, |acc, &d| Some(std::mem::replace(acc, *acc + d))).collect();
    let dim: usize = format.iter().sum();
    let mut jac = DMatrix::zeros(dim, dim);
    for j in 0..format.len() {
        for m in (j + 1)..format.len() {
            let h = contract_except(format, a, x, &[j, m]);
            for l in 0..format[j] {
                for k in 0..format[m] {
                    let v = h[l * format[m] + k];
                    jac[(offsets[j] + l, offsets[m] + k)] = v;
                    jac[(offsets[m] + k, offsets[j] + l)] = v;
                }
            }
        }
    }
    jac
}

/// Levenberg-Marquardt on the partials. Gradient descent on the residual
/// stalls at degenerate critical points; this converges there too.
fn polish(format: &[usize], a: &[Float], mut x: Factors, mut r: f64) -> (f64, Factors) {
    let mut mu = 1e-3;
    for _ in 0..MAX_POLISH {
        if r < 1e-30 || mu > 1e12 {
            break;
        }
        let g = DVector::from_iterator(format.iter().sum(), partials(format, a, &x).into_iter().flatten());
        let jac = jacobian(format, a, &x);
        let jh = jac.adjoint();
        let lhs = &jh * &jac + DMatrix::identity(g.len(), g.len()) * Float::new(mu, 0.0);
        let Some(step) = lhs.lu().solve(&(-(&jh * g))) else { break };
        let mut it = step.iter();
        let trial: Factors = x.iter().map(|f| f.iter().map(|v| v + it.next().expect("sized")).collect()).collect();
        let trial = normalized(&trial);
        let rt = residual_of(format, a, &trial);
        if rt < r {
            r = rt;
            x = trial;
            mu = (mu / 3.0).max(1e-15);
        } else {
            mu *= 4.0;
        }
    }
    (r, x)
}

fn random_start(format: &[usize], seed: u64) -> Factors {
    let mut rng = rng_from_seed(seed);
    let x: Factors = format
        .iter()
        .map(|&d| {
            (0..d)
                .map(|_| {
                    let re: f64 = rng.sample(StandardNormal);
                    let im: f64 = rng.sample(StandardNormal);
                    Float::new(re, im)
                })
                .collect()
        })
        .collect();
    normalized(&x)
}

/// Multi-start search for a critical point of the pairing.
///
/// Restart `i` starts from a point drawn with seed `seed + i`; all restarts
/// run to completion and the minimum is selected by `(residual, i)`, so the
/// outcome does not depend on scheduling. A found witness certifies
/// `Det = 0` up to `tol`; a miss is only evidence of `Det ≠ 0`.
pub fn degenerate_oracle<S: Scalar>(t: &StateTensor<S>, restarts: usize, tol: f64, seed: u64) -> CriticalSearchResult {
    let (format, a) = to_float_parts(t);
    let norm = a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
    let a: Vec<Float> = a.iter().map(|v| v / norm).collect();
    let runs: Vec<(f64, Factors)> = (0..restarts.max(1))
        .into_par_iter()
        .map(|i| {
            let (r, x) = descend(&format, &a, random_start(&format, seed.wrapping_add(i as u64)));
            polish(&format, &a, x, r)
        })
        .collect();
    let (residual, x) = runs
        .into_iter()
        .enumerate()
        .min_by(|(i, (ra, _)), (j, (rb, _))| ra.total_cmp(rb).then(i.cmp(j)))
        .map(|(_, best)| best)
        .expect("at least one restart");
    let found = residual <= tol;
    CriticalSearchResult {
        found,
        witness: if found { ProductVector::new(x).ok() } else { None },
        residual,
        restarts_used: restarts.max(1),
    }
}

/// Exact agreement of `f` and `g` on `trials` random Gaussian-rational tensors.
pub fn identity_check<F, G>(f: F, g: G, format: &[usize], trials: usize, seed: u64) -> Result<bool>
where
    F: Fn(&StateTensor<Exact>) -> Result<Exact>,
    G: Fn(&StateTensor<Exact>) -> Result<Exact>,
{
    let mut rng = rng_from_seed(seed);
    for _ in 0..trials {
        let t = random_exact_state_with(format, &mut rng)?;
        if f(&t)? != g(&t)? {
            return Ok(false);
        }
    }
    Ok(true)
}

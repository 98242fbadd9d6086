//! Numeric fields used for amplitudes and invariant values.
//!
//! Two backends share one trait: exact Gaussian rationals ([`Exact`]) with
//! true zero tests, and double-precision complex numbers ([`Float`]) whose
//! zero tests are relative to a [`Tolerance`].

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

/// Gaussian rational: a complex number with arbitrary-precision rational parts.
pub type Exact = Complex<BigRational>;

/// Floating complex number.
pub type Float = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldTag {
    Exact,
    Float,
}

/// Relative tolerance for float-mode zero tests. Ignored in exact mode.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerance {
    pub eps: f64,
}

impl Tolerance {
    pub const DEFAULT_EPS: f64 = 1e-9;

    pub fn new(eps: f64) -> Self {
        Tolerance { eps }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance {
            eps: Self::DEFAULT_EPS,
        }
    }
}

pub trait Scalar:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const FIELD: FieldTag;

    fn from_i64(v: i64) -> Self;

    /// Exact conversion of a floating value (binary fractions are rational).
    fn from_c64(z: Complex64) -> Self;

    fn to_c64(&self) -> Complex64;

    fn from_exact(v: &Exact) -> Self;

    fn conj(&self) -> Self;

    fn modulus(&self) -> f64 {
        self.to_c64().norm()
    }

    /// Zero test: exact equality in exact fields, `|v| <= eps * scale` otherwise.
    fn is_negligible(&self, scale: f64, tol: Tolerance) -> bool;

    fn from_ratio(num: i64, den: i64) -> Self {
        Self::from_i64(num) / Self::from_i64(den)
    }

    fn powu(&self, mut exp: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc * base.clone();
            }
            exp >>= 1;
            if exp > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    /// `|v|^2` as a scalar of the same field (real-valued).
    fn norm_sqr(&self) -> Self {
        self.clone() * self.conj()
    }

    fn is_exact() -> bool {
        Self::FIELD == FieldTag::Exact
    }

    /// Human-readable value: `p/q` parts in exact fields, decimals otherwise.
    fn render(&self) -> String;
}

fn join_parts(re: String, im: String, im_zero: bool, im_negative: bool) -> String {
    if im_zero {
        re
    } else if im_negative {
        format!("{re}{im}i")
    } else {
        format!("{re}+{im}i")
    }
}

/// `p/q` rendering with an explicit denominator, `1/1` for one.
pub fn ratio_string(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn ratio_from_f64(v: f64) -> BigRational {
    BigRational::from_float(v).unwrap_or_else(BigRational::zero)
}

pub(crate) fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl Scalar for Exact {
    const FIELD: FieldTag = FieldTag::Exact;

    fn from_i64(v: i64) -> Self {
        Complex::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    fn from_c64(z: Complex64) -> Self {
        Complex::new(ratio_from_f64(z.re), ratio_from_f64(z.im))
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(ratio_to_f64(&self.re), ratio_to_f64(&self.im))
    }

    fn from_exact(v: &Exact) -> Self {
        v.clone()
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn is_negligible(&self, _scale: f64, _tol: Tolerance) -> bool {
        self.is_zero()
    }

    fn render(&self) -> String {
        join_parts(ratio_string(&self.re), ratio_string(&self.im), self.im.is_zero(), self.im.is_negative())
    }
}

impl Scalar for Float {
    const FIELD: FieldTag = FieldTag::Float;

    fn from_i64(v: i64) -> Self {
        Complex64::new(v as f64, 0.0)
    }

    fn from_c64(z: Complex64) -> Self {
        z
    }

    fn to_c64(&self) -> Complex64 {
        *self
    }

    fn from_exact(v: &Exact) -> Self {
        v.to_c64()
    }

    fn conj(&self) -> Self {
        Complex::conj(self)
    }

    fn modulus(&self) -> f64 {
        self.norm()
    }

    fn is_negligible(&self, scale: f64, tol: Tolerance) -> bool {
        self.norm() <= tol.eps * scale
    }

    fn render(&self) -> String {
        join_parts(format!("{}", self.re), format!("{}", self.im), self.im == 0.0, self.im < 0.0)
    }
}

/// Builds a Gaussian rational from integer parts.
pub fn gauss(re: i64, im: i64) -> Exact {
    Complex::new(
        BigRational::from_integer(BigInt::from(re)),
        BigRational::from_integer(BigInt::from(im)),
    )
}

/// Builds a real Gaussian rational `num/den`.
pub fn rational(num: i64, den: i64) -> Exact {
    Complex::new(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        BigRational::zero(),
    )
}

fn rational_sqrt(r: &BigRational) -> Option<BigRational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(BigRational::new(n, d))
    } else {
        None
    }
}

/// Square root inside the Gaussian rationals, if one exists.
pub fn gaussian_sqrt(z: &Exact) -> Option<Exact> {
    let two = BigRational::from_integer(BigInt::from(2));
    let modulus = rational_sqrt(&(&z.re * &z.re + &z.im * &z.im))?;
    let re = rational_sqrt(&((&modulus + &z.re) / &two))?;
    let mut im = rational_sqrt(&((&modulus - &z.re) / &two))?;
    if z.im.is_negative() {
        im = -im;
    }
    let root = Complex::new(re, im);
    debug_assert_eq!(&(root.clone() * root.clone()), z);
    Some(root)
}

/// Element `rational + radical * sqrt(radicand)` of a quadratic extension of
/// the Gaussian rationals.
///
/// The radicand is fixed per computation and must not be a square in the base
/// field; mixing elements with different radicands panics.
#[derive(Clone, Debug)]
pub struct Radical {
    pub rational: Exact,
    pub radical: Exact,
    pub radicand: Option<std::sync::Arc<Exact>>,
}

impl Radical {
    pub fn lift(value: Exact) -> Self {
        Radical {
            rational: value,
            radical: Exact::zero(),
            radicand: None,
        }
    }

    /// A square root of `d`: a base-field element when `d` is a perfect square,
    /// otherwise the formal generator of the extension.
    pub fn sqrt_of(d: &Exact) -> Self {
        match gaussian_sqrt(d) {
            Some(root) => Radical::lift(root),
            None => Radical {
                rational: Exact::zero(),
                radical: Exact::one(),
                radicand: Some(std::sync::Arc::new(d.clone())),
            },
        }
    }

    pub fn is_rational(&self) -> bool {
        self.radical.is_zero()
    }

    fn merge_radicand(&self, other: &Self) -> Option<std::sync::Arc<Exact>> {
        match (&self.radicand, &other.radicand) {
            (Some(a), Some(b)) => {
                assert!(a == b, "mixing quadratic extensions with different radicands");
                Some(a.clone())
            }
            (Some(a), None) => Some(a.clone()),
            (None, Some(b)) => Some(b.clone()),
            (None, None) => None,
        }
    }
}

impl PartialEq for Radical {
    fn eq(&self, other: &Self) -> bool {
        if self.rational != other.rational || self.radical != other.radical {
            return false;
        }
        self.radical.is_zero() || self.radicand == other.radicand
    }
}

impl Add for Radical {
    type Output = Radical;
    fn add(self, rhs: Self) -> Self {
        let radicand = self.merge_radicand(&rhs);
        Radical {
            rational: self.rational + rhs.rational,
            radical: self.radical + rhs.radical,
            radicand,
        }
    }
}

impl Sub for Radical {
    type Output = Radical;
    fn sub(self, rhs: Self) -> Self {
        let radicand = self.merge_radicand(&rhs);
        Radical {
            rational: self.rational - rhs.rational,
            radical: self.radical - rhs.radical,
            radicand,
        }
    }
}

impl Neg for Radical {
    type Output = Radical;
    fn neg(self) -> Self {
        Radical {
            rational: -self.rational,
            radical: -self.radical,
            radicand: self.radicand,
        }
    }
}

impl Mul for Radical {
    type Output = Radical;
    fn mul(self, rhs: Self) -> Self {
        let radicand = self.merge_radicand(&rhs);
        let mut rational = self.rational.clone() * rhs.rational.clone();
        if !self.radical.is_zero() && !rhs.radical.is_zero() {
            let d = radicand.as_deref().expect("radical part without radicand");
            rational = rational + self.radical.clone() * rhs.radical.clone() * d.clone();
        }
        Radical {
            rational,
            radical: self.rational * rhs.radical + self.radical * rhs.rational,
            radicand,
        }
    }
}

impl Div for Radical {
    type Output = Radical;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Self) -> Self {
        if rhs.radical.is_zero() {
            let inv = Exact::one() / rhs.rational;
            return Radical {
                rational: self.rational * inv.clone(),
                radical: self.radical * inv,
                radicand: self.radicand,
            };
        }
        let d = rhs.radicand.as_deref().expect("radical part without radicand").clone();
        let norm = rhs.rational.clone() * rhs.rational.clone()
            - rhs.radical.clone() * rhs.radical.clone() * d;
        let conj = Radical {
            rational: rhs.rational,
            radical: -rhs.radical,
            radicand: rhs.radicand,
        };
        let num = self * conj;
        Radical {
            rational: num.rational / norm.clone(),
            radical: num.radical / norm,
            radicand: num.radicand,
        }
    }
}

impl Zero for Radical {
    fn zero() -> Self {
        Radical::lift(Exact::zero())
    }
    fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.radical.is_zero()
    }
}

impl One for Radical {
    fn one() -> Self {
        Radical::lift(Exact::one())
    }
}

impl Scalar for Radical {
    const FIELD: FieldTag = FieldTag::Exact;

    fn from_i64(v: i64) -> Self {
        Radical::lift(Exact::from_i64(v))
    }

    fn from_c64(z: Complex64) -> Self {
        Radical::lift(Exact::from_c64(z))
    }

    fn from_exact(v: &Exact) -> Self {
        Radical::lift(v.clone())
    }

    fn to_c64(&self) -> Complex64 {
        let mut v = self.rational.to_c64();
        if let Some(d) = &self.radicand {
            v += self.radical.to_c64() * d.to_c64().sqrt();
        }
        v
    }

    /// Complex conjugation of the coefficients; this is a field automorphism
    /// only of the base field, so it is meaningful for rational elements.
    fn conj(&self) -> Self {
        Radical {
            rational: Complex::conj(&self.rational),
            radical: Complex::conj(&self.radical),
            radicand: self.radicand.clone(),
        }
    }

    fn is_negligible(&self, _scale: f64, _tol: Tolerance) -> bool {
        self.is_zero()
    }

    fn render(&self) -> String {
        match &self.radicand {
            Some(d) if !self.radical.is_zero() => {
                format!("({}) + ({})*sqrt({})", self.rational.render(), self.radical.render(), d.render())
            }
            _ => self.rational.render(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gaussian_sqrt_finds_perfect_squares() {
        // (2 + 3i)^2 = -5 + 12i
        let z = gauss(-5, 12);
        let r = gaussian_sqrt(&z).unwrap();
        assert_eq!(r.clone() * r, z);
        assert_eq!(gaussian_sqrt(&gauss(-4, 0)).unwrap(), gauss(0, 2));
        assert_eq!(gaussian_sqrt(&rational(9, 4)).unwrap(), rational(3, 2));
        assert!(gaussian_sqrt(&gauss(2, 0)).is_none());
        assert!(gaussian_sqrt(&gauss(1, 1)).is_none());
    }

    #[test]
    fn radical_arithmetic_is_a_field() {
        let s = Radical::sqrt_of(&gauss(2, 0));
        assert!(!s.is_rational());
        let two = Radical::from_i64(2);
        assert_eq!(s.clone() * s.clone(), two);
        let x = Radical::from_i64(3) + s.clone() * Radical::lift(gauss(1, 1));
        let y = Radical::from_i64(-1) + s.clone();
        let q = x.clone() / y.clone();
        assert_eq!(q * y, x);
        let approx = s.to_c64();
        assert!((approx.re - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn perfect_square_radicand_stays_rational() {
        let s = Radical::sqrt_of(&gauss(-5, 12));
        assert!(s.is_rational());
    }

    #[test]
    fn float_zero_test_is_relative() {
        let tol = Tolerance::default();
        assert!(Float::new(1e-12, 0.0).is_negligible(1.0, tol));
        assert!(!Float::new(1e-12, 0.0).is_negligible(1e-6, tol));
        assert!(!rational(1, 1_000_000_000).is_negligible(1e12, tol));
    }

    #[test]
    fn powu_matches_repeated_multiplication() {
        let z = gauss(1, 2);
        let mut acc = Exact::one();
        for _ in 0..7 {
            acc = acc * z.clone();
        }
        assert_eq!(z.powu(7), acc);
        assert_eq!(z.powu(0), Exact::one());
    }
}

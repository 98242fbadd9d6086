//! Dense amplitude tensors, flattenings, local ranks and the local group action.
//!
//! Amplitudes are stored with the last party index running fastest, so a
//! `(2,2,2)` tensor lists `a000, a001, a010, a011, a100, ...`. States are rays:
//! nothing here normalizes implicitly. Party indices in this API are 0-based.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::{Exact, FieldTag, Float, Scalar, Tolerance};

#[derive(Clone, Debug, PartialEq)]
pub struct StateTensor<S> {
    format: Vec<usize>,
    amplitudes: Vec<S>,
}

pub(crate) fn check_format(format: &[usize]) -> Result<usize> {
    if let Some(&d) = format.iter().find(|&&d| d < 2) {
        return Err(Error::BadDimension(d));
    }
    Ok(format.iter().product())
}

/// Row-major strides for a format.
pub(crate) fn strides(format: &[usize]) -> Vec<usize> {
    let mut s = vec![1; format.len()];
    for j in (0..format.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * format[j + 1];
    }
    s
}

pub(crate) fn multi_index(format: &[usize], mut flat: usize) -> Vec<usize> {
    let mut idx = vec![0; format.len()];
    for j in (0..format.len()).rev() {
        idx[j] = flat % format[j];
        flat /= format[j];
    }
    idx
}

impl<S: Scalar> StateTensor<S> {
    pub fn new(format: Vec<usize>, amplitudes: Vec<S>) -> Result<Self> {
        let expected = check_format(&format)?;
        if amplitudes.len() != expected {
            return Err(Error::FormatMismatch {
                expected,
                got: amplitudes.len(),
            });
        }
        if amplitudes.iter().all(Zero::is_zero) {
            return Err(Error::ZeroState);
        }
        Ok(StateTensor { format, amplitudes })
    }

    /// Sum of unit-coefficient basis kets written as digit strings, e.g.
    /// `["001", "010", "100"]` for the W state.
    pub fn from_kets(format: &[usize], kets: &[&str]) -> Result<Self> {
        let terms: Vec<(&str, S)> = kets.iter().map(|k| (*k, S::one())).collect();
        Self::from_terms(format, &terms)
    }

    pub fn from_terms(format: &[usize], terms: &[(&str, S)]) -> Result<Self> {
        let total = check_format(format)?;
        let st = strides(format);
        let mut amps = vec![S::zero(); total];
        for (ket, coeff) in terms {
            let digits: Vec<usize> = ket
                .chars()
                .map(|c| c.to_digit(10).map(|d| d as usize))
                .collect::<Option<_>>()
                .ok_or_else(|| Error::SizeMismatch(format!("bad ket label {ket:?}")))?;
            if digits.len() != format.len() || digits.iter().zip(format).any(|(d, f)| d >= f) {
                return Err(Error::SizeMismatch(format!(
                    "ket {ket:?} does not fit format {format:?}"
                )));
            }
            let flat: usize = digits.iter().zip(&st).map(|(d, s)| d * s).sum();
            amps[flat] = amps[flat].clone() + coeff.clone();
        }
        Self::new(format.to_vec(), amps)
    }

    pub fn format(&self) -> &[usize] {
        &self.format
    }

    pub fn parties(&self) -> usize {
        self.format.len()
    }

    pub fn amplitudes(&self) -> &[S] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<S> {
        self.amplitudes
    }

    pub fn field(&self) -> FieldTag {
        S::FIELD
    }

    pub fn amplitude(&self, index: &[usize]) -> &S {
        let flat: usize = index
            .iter()
            .zip(strides(&self.format))
            .map(|(i, s)| i * s)
            .sum();
        &self.amplitudes[flat]
    }

    /// Euclidean norm (double precision); the scale of float zero tests.
    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.to_c64().norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scaled(&self, factor: &S) -> Result<Self> {
        Self::new(
            self.format.clone(),
            self.amplitudes
                .iter()
                .map(|a| a.clone() * factor.clone())
                .collect(),
        )
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Result<StateTensor<T>> {
        StateTensor::new(self.format.clone(), self.amplitudes.iter().map(f).collect())
    }

    pub fn to_float(&self) -> StateTensor<Float> {
        StateTensor {
            format: self.format.clone(),
            amplitudes: self.amplitudes.iter().map(Scalar::to_c64).collect(),
        }
    }

    /// The sub-tensor with `party` fixed to `index` (raw amplitudes, may be zero).
    pub fn slice(&self, party: usize, index: usize) -> Vec<S> {
        let st = strides(&self.format);
        (0..self.amplitudes.len())
            .filter(|flat| (flat / st[party]) % self.format[party] == index)
            .map(|flat| self.amplitudes[flat].clone())
            .collect()
    }

    /// Reorders parties so that new party `k` is old party `perm[k]`.
    pub fn permute_parties(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.parties());
        let new_format: Vec<usize> = perm.iter().map(|&p| self.format[p]).collect();
        let old_strides = strides(&self.format);
        let amps = (0..self.amplitudes.len())
            .map(|flat| {
                let idx = multi_index(&new_format, flat);
                let old: usize = idx
                    .iter()
                    .zip(perm)
                    .map(|(&i, &p)| i * old_strides[p])
                    .sum();
                self.amplitudes[old].clone()
            })
            .collect();
        StateTensor {
            format: new_format,
            amplitudes: amps,
        }
    }

    /// Zero-pads into a larger format with the same number of parties.
    pub fn embed(&self, format: &[usize]) -> Result<Self> {
        if format.len() != self.parties() || format.iter().zip(&self.format).any(|(n, o)| n < o) {
            return Err(Error::SizeMismatch(format!(
                "cannot embed {:?} into {format:?}",
                self.format
            )));
        }
        let total = check_format(format)?;
        let st = strides(format);
        let mut amps = vec![S::zero(); total];
        for (flat, a) in self.amplitudes.iter().enumerate() {
            let idx = multi_index(&self.format, flat);
            let target: usize = idx.iter().zip(&st).map(|(i, s)| i * s).sum();
            amps[target] = a.clone();
        }
        Self::new(format.to_vec(), amps)
    }
}

impl StateTensor<Exact> {
    pub fn from_i64(format: Vec<usize>, amplitudes: &[i64]) -> Result<Self> {
        Self::new(format, amplitudes.iter().map(|&v| Exact::from_i64(v)).collect())
    }
}

fn validate_cut(parties: usize, cut: &[usize]) -> Result<Vec<usize>> {
    let mut sorted = cut.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty()
        || sorted.len() >= parties
        || sorted.len() != cut.len()
        || sorted.iter().any(|&p| p >= parties)
    {
        return Err(Error::BadCut(cut.to_vec()));
    }
    Ok(sorted)
}

/// Bipartite-cut matrix: rows indexed by the multi-index over `cut`
/// (row-major, parties ascending), columns by the complement.
pub fn flatten<S: Scalar>(t: &StateTensor<S>, cut: &[usize]) -> Result<Matrix<S>> {
    let cut = validate_cut(t.parties(), cut)?;
    let rest: Vec<usize> = (0..t.parties()).filter(|p| !cut.contains(p)).collect();
    let row_format: Vec<usize> = cut.iter().map(|&p| t.format[p]).collect();
    let col_format: Vec<usize> = rest.iter().map(|&p| t.format[p]).collect();
    let rows: usize = row_format.iter().product();
    let cols: usize = col_format.iter().product();
    let row_st = strides(&row_format);
    let col_st = strides(&col_format);
    let mut m = Matrix::zeros(rows, cols);
    for (flat, a) in t.amplitudes.iter().enumerate() {
        let idx = multi_index(&t.format, flat);
        let r: usize = cut.iter().zip(&row_st).map(|(&p, s)| idx[p] * s).sum();
        let c: usize = rest.iter().zip(&col_st).map(|(&p, s)| idx[p] * s).sum();
        m[(r, c)] = a.clone();
    }
    Ok(m)
}

/// Inverse of [`flatten`].
pub fn unflatten<S: Scalar>(format: &[usize], cut: &[usize], m: &Matrix<S>) -> Result<StateTensor<S>> {
    let cut = validate_cut(format.len(), cut)?;
    let total = check_format(format)?;
    let rest: Vec<usize> = (0..format.len()).filter(|p| !cut.contains(p)).collect();
    let row_st = strides(&cut.iter().map(|&p| format[p]).collect::<Vec<_>>());
    let col_st = strides(&rest.iter().map(|&p| format[p]).collect::<Vec<_>>());
    let amps = (0..total)
        .map(|flat| {
            let idx = multi_index(format, flat);
            let r: usize = cut.iter().zip(&row_st).map(|(&p, s)| idx[p] * s).sum();
            let c: usize = rest.iter().zip(&col_st).map(|(&p, s)| idx[p] * s).sum();
            m[(r, c)].clone()
        })
        .collect();
    StateTensor::new(format.to_vec(), amps)
}

pub fn cut_rank<S: Scalar>(t: &StateTensor<S>, cut: &[usize], tol: Tolerance) -> Result<usize> {
    Ok(flatten(t, cut)?.rank(tol))
}

/// Single-party cut ranks, one per party.
pub fn local_ranks<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Vec<usize> {
    (0..t.parties())
        .map(|p| cut_rank(t, &[p], tol).expect("singleton cut is valid for n >= 2"))
        .collect()
}

/// All cuts up to complement: subsets not containing the last party.
pub fn all_cuts(parties: usize) -> Vec<Vec<usize>> {
    (1..(1usize << (parties - 1)))
        .map(|mask| (0..parties).filter(|p| mask >> p & 1 == 1).collect())
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum SchmidtSpectrum<S> {
    /// Singular values of the 1|2 flattening, descending.
    Coefficients(Vec<f64>),
    /// Exact mode: the squared coefficients are the eigenvalues of the Gram
    /// matrix `M M^H`; its characteristic polynomial stays in the field.
    Squared {
        gram: Matrix<S>,
        characteristic_polynomial: Vec<S>,
        /// Present when the Gram matrix is diagonal, descending.
        exact_values: Option<Vec<S>>,
        approx: Vec<f64>,
    },
}

pub fn schmidt_spectrum<S: Scalar>(t: &StateTensor<S>) -> Result<SchmidtSpectrum<S>> {
    if t.parties() != 2 {
        return Err(Error::NotBipartite(t.parties()));
    }
    let m = flatten(t, &[0])?;
    let sv = m.singular_values();
    match S::FIELD {
        FieldTag::Float => Ok(SchmidtSpectrum::Coefficients(sv)),
        FieldTag::Exact => {
            let gram = m.mul(&m.adjoint());
            let n = gram.rows();
            let diagonal = (0..n).all(|i| (0..n).all(|j| i == j || gram[(i, j)].is_zero()));
            let exact_values = diagonal.then(|| {
                let mut vals: Vec<S> = (0..n).map(|i| gram[(i, i)].clone()).collect();
                vals.sort_by(|a, b| b.to_c64().re.total_cmp(&a.to_c64().re));
                vals
            });
            Ok(SchmidtSpectrum::Squared {
                characteristic_polynomial: gram.characteristic_polynomial(),
                gram,
                exact_values,
                approx: sv.iter().map(|s| s * s).collect(),
            })
        }
    }
}

pub fn schmidt_coefficients(t: &StateTensor<Float>) -> Result<Vec<f64>> {
    match schmidt_spectrum(t)? {
        SchmidtSpectrum::Coefficients(c) => Ok(c),
        SchmidtSpectrum::Squared { .. } => unreachable!("float field"),
    }
}

/// A product vector `x = (x⁽¹⁾, …, x⁽ⁿ⁾)`; compared projectively.
#[derive(Clone, Debug)]
pub struct ProductVector<S> {
    factors: Vec<Vec<S>>,
}

impl<S: Scalar> ProductVector<S> {
    pub fn new(factors: Vec<Vec<S>>) -> Result<Self> {
        if factors.iter().any(|f| f.iter().all(Zero::is_zero)) {
            return Err(Error::ZeroState);
        }
        Ok(ProductVector { factors })
    }

    pub fn factors(&self) -> &[Vec<S>] {
        &self.factors
    }

    pub fn format(&self) -> Vec<usize> {
        self.factors.iter().map(Vec::len).collect()
    }

    /// The separable tensor `b_{i1…in} = x⁽¹⁾_{i1} ⋯ x⁽ⁿ⁾_{in}`.
    pub fn to_tensor(&self) -> StateTensor<S> {
        let format = self.format();
        let total: usize = format.iter().product();
        let amps = (0..total)
            .map(|flat| {
                multi_index(&format, flat)
                    .iter()
                    .enumerate()
                    .fold(S::one(), |acc, (j, &i)| acc * self.factors[j][i].clone())
            })
            .collect();
        StateTensor {
            format,
            amplitudes: amps,
        }
    }

    pub fn projectively_equal(&self, other: &Self, tol: Tolerance) -> bool {
        self.factors.len() == other.factors.len()
            && self
                .factors
                .iter()
                .zip(&other.factors)
                .all(|(a, b)| proportional(a, b, tol))
    }
}

impl<S: Scalar> PartialEq for ProductVector<S> {
    fn eq(&self, other: &Self) -> bool {
        self.projectively_equal(other, Tolerance::default())
    }
}

/// Whether `a = λ b` for some nonzero `λ`.
pub fn proportional<S: Scalar>(a: &[S], b: &[S], tol: Tolerance) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let pick = |v: &[S]| -> Option<usize> {
        match S::FIELD {
            FieldTag::Exact => v.iter().position(|x| !x.is_zero()),
            FieldTag::Float => (0..v.len())
                .max_by(|&i, &j| v[i].modulus().total_cmp(&v[j].modulus()))
                .filter(|&i| !v[i].is_zero()),
        }
    };
    let (Some(k), Some(_)) = (pick(b), pick(a)) else {
        return false;
    };
    let lambda = a[k].clone() / b[k].clone();
    if lambda.is_zero() {
        return false;
    }
    let scale = a.iter().map(Scalar::modulus).fold(0.0, f64::max);
    a.iter()
        .zip(b)
        .all(|(x, y)| (x.clone() - lambda.clone() * y.clone()).is_negligible(scale, tol))
}

/// One square matrix per party; `g · T` contracts each index with its operator.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalOperatorTuple<S> {
    operators: Vec<Matrix<S>>,
    determinants: Vec<S>,
}

impl<S: Scalar> LocalOperatorTuple<S> {
    pub fn new(operators: Vec<Matrix<S>>) -> Result<Self> {
        if let Some(m) = operators.iter().find(|m| !m.is_square()) {
            return Err(Error::SizeMismatch(format!(
                "local operator is {}x{}, not square",
                m.rows(),
                m.cols()
            )));
        }
        let determinants = operators.iter().map(Matrix::determinant).collect();
        Ok(LocalOperatorTuple {
            operators,
            determinants,
        })
    }

    pub fn identity(format: &[usize]) -> Self {
        Self::new(format.iter().map(|&d| Matrix::identity(d)).collect())
            .expect("identity is square")
    }

    pub fn operators(&self) -> &[Matrix<S>] {
        &self.operators
    }

    pub fn determinants(&self) -> &[S] {
        &self.determinants
    }

    pub fn format(&self) -> Vec<usize> {
        self.operators.iter().map(Matrix::rows).collect()
    }

    /// Per-operator invertibility under the active zero test.
    pub fn invertible(&self, tol: Tolerance) -> Vec<bool> {
        self.operators
            .iter()
            .zip(&self.determinants)
            .map(|(m, d)| {
                let scale = m.max_modulus().powi(m.rows() as i32);
                !d.is_negligible(scale, tol)
            })
            .collect()
    }

    /// `g · h`, party by party.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if self.format() != inner.format() {
            return Err(Error::SizeMismatch("operator tuple formats differ".into()));
        }
        Self::new(
            self.operators
                .iter()
                .zip(&inner.operators)
                .map(|(a, b)| a.mul(b))
                .collect(),
        )
    }
}

/// Applies `m` to the index of `party`: `a'_{..i..} = Σ_j m_{ij} a_{..j..}`.
pub(crate) fn apply_to_party<S: Scalar>(
    format: &[usize],
    amps: &[S],
    party: usize,
    m: &Matrix<S>,
) -> Vec<S> {
    let st = strides(format);
    let stride = st[party];
    let dim = format[party];
    let mut out = vec![S::zero(); amps.len()];
    for (flat, slot) in out.iter_mut().enumerate() {
        let i = (flat / stride) % dim;
        let base = flat - i * stride;
        let mut acc = S::zero();
        for j in 0..dim {
            let g = &m[(i, j)];
            if g.is_zero() {
                continue;
            }
            let a = &amps[base + j * stride];
            if a.is_zero() {
                continue;
            }
            acc = acc + g.clone() * a.clone();
        }
        *slot = acc;
    }
    out
}

pub fn apply_local<S: Scalar>(t: &StateTensor<S>, g: &LocalOperatorTuple<S>) -> Result<StateTensor<S>> {
    if g.format() != t.format {
        return Err(Error::SizeMismatch(format!(
            "operators {:?} do not match format {:?}",
            g.format(),
            t.format
        )));
    }
    let mut amps = t.amplitudes.clone();
    for (party, m) in g.operators.iter().enumerate() {
        amps = apply_to_party(&t.format, &amps, party, m);
    }
    StateTensor::new(t.format.clone(), amps)
}

/// The finest partition of the parties into blocks such that the state is a
/// product across every cut separating blocks. Blocks are sorted.
pub fn separability_pattern<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Vec<Vec<usize>> {
    let n = t.parties();
    let full = (1usize << n) - 1;
    let mut product_masks = vec![full];
    for cut in all_cuts(n) {
        if cut_rank(t, &cut, tol).expect("valid cut") == 1 {
            let mask: usize = cut.iter().map(|p| 1 << p).sum();
            product_masks.push(mask);
            product_masks.push(full & !mask);
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    for p in 0..n {
        let block_mask = product_masks
            .iter()
            .filter(|&&m| m >> p & 1 == 1)
            .fold(full, |acc, m| acc & m);
        let block: Vec<usize> = (0..n).filter(|q| block_mask >> q & 1 == 1).collect();
        if !blocks.contains(&block) {
            blocks.push(block);
        }
    }
    blocks
}

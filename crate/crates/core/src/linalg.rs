//! Small dense matrices over any [`Scalar`] field.
//!
//! Exact fields use fraction-free (Bareiss) elimination for determinants and
//! ranks; float ranks and row bases come from a singular value decomposition.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::scalar::{FieldTag, Scalar, Tolerance};

#[derive(Clone, Debug, PartialEq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![S::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = S::one();
        }
        m
    }

    /// Row-major construction. Panics if `data.len() != rows * cols`.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<S>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let data: Vec<S> = rows.into_iter().flatten().collect();
        Self::from_row_major(r, c, data)
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&v| S::from_i64(v)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[S] {
        &self.data
    }

    pub fn into_data(self) -> Vec<S> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<S> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn adjoint(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].conj();
            }
        }
        t
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "matrix product dimensions");
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a.clone() * rhs[(k, j)].clone();
                    out[(i, j)] = out[(i, j)].clone() + prod;
                }
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v.clone() * s.clone()).collect(),
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn trace(&self) -> S {
        (0..self.rows.min(self.cols)).fold(S::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    /// Largest entry modulus, used as the scale of float zero tests.
    pub fn max_modulus(&self) -> f64 {
        self.data.iter().map(Scalar::modulus).fold(0.0, f64::max)
    }

    pub fn submatrix_without_column(&self, col: usize) -> Self {
        let mut data = Vec::with_capacity(self.rows * (self.cols - 1));
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j != col {
                    data.push(self[(i, j)].clone());
                }
            }
        }
        Self::from_row_major(self.rows, self.cols - 1, data)
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn pivot_row(&self, col: usize, from: usize) -> Option<usize> {
        match S::FIELD {
            FieldTag::Exact => (from..self.rows).find(|&i| !self[(i, col)].is_zero()),
            FieldTag::Float => (from..self.rows)
                .filter(|&i| !self[(i, col)].is_zero())
                .max_by(|&a, &b| {
                    self[(a, col)]
                        .modulus()
                        .total_cmp(&self[(b, col)].modulus())
                }),
        }
    }

    /// Determinant by Bareiss elimination with row pivoting.
    pub fn determinant(&self) -> S {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return S::one();
        }
        let mut a = self.clone();
        let mut negate = false;
        let mut prev = S::one();
        for k in 0..n {
            let Some(p) = a.pivot_row(k, k) else {
                return S::zero();
            };
            if p != k {
                a.swap_rows(p, k);
                negate = !negate;
            }
            if k + 1 == n {
                break;
            }
            let pivot = a[(k, k)].clone();
            for i in k + 1..n {
                let lead = a[(i, k)].clone();
                for j in k + 1..n {
                    let v = (a[(i, j)].clone() * pivot.clone() - lead.clone() * a[(k, j)].clone())
                        / prev.clone();
                    a[(i, j)] = v;
                }
                a[(i, k)] = S::zero();
            }
            prev = pivot;
        }
        let det = a[(n - 1, n - 1)].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// Rank with exact zero tests (fraction-free elimination).
    pub fn rank_exact(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut prev = S::one();
        for col in 0..a.cols {
            if rank == a.rows {
                break;
            }
            let Some(p) = a.pivot_row(col, rank) else {
                continue;
            };
            a.swap_rows(p, rank);
            let pivot = a[(rank, col)].clone();
            for i in rank + 1..a.rows {
                let lead = a[(i, col)].clone();
                for j in col + 1..a.cols {
                    let v = (a[(i, j)].clone() * pivot.clone()
                        - lead.clone() * a[(rank, j)].clone())
                        / prev.clone();
                    a[(i, j)] = v;
                }
                a[(i, col)] = S::zero();
            }
            prev = pivot;
            rank += 1;
        }
        rank
    }

    /// Rank under the active zero test: exact elimination for exact fields,
    /// count of singular values above `eps * largest` for floats.
    pub fn rank(&self, tol: Tolerance) -> usize {
        match S::FIELD {
            FieldTag::Exact => self.rank_exact(),
            FieldTag::Float => {
                let sv = self.singular_values();
                let largest = sv.first().copied().unwrap_or(0.0);
                if largest == 0.0 {
                    return 0;
                }
                sv.iter().filter(|&&s| s > tol.eps * largest).count()
            }
        }
    }

    pub fn to_nalgebra(&self) -> DMatrix<Complex64> {
        DMatrix::from_fn(self.rows, self.cols, |i, j| self[(i, j)].to_c64())
    }

    pub fn from_nalgebra(m: &DMatrix<Complex64>) -> Self {
        let mut out = Self::zeros(m.nrows(), m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                out[(i, j)] = S::from_c64(m[(i, j)]);
            }
        }
        out
    }

    /// Singular values in descending order (computed in double precision).
    pub fn singular_values(&self) -> Vec<f64> {
        if self.rows == 0 || self.cols == 0 {
            return Vec::new();
        }
        let mut sv: Vec<f64> = self.to_nalgebra().singular_values().iter().copied().collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }

    /// Inverse by Gauss-Jordan elimination; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert!(self.is_square(), "inverse of a non-square matrix");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let p = a.pivot_row(col, col)?;
            a.swap_rows(p, col);
            inv.swap_rows(p, col);
            let pivot = a[(col, col)].clone();
            for j in 0..n {
                a[(col, j)] = a[(col, j)].clone() / pivot.clone();
                inv[(col, j)] = inv[(col, j)].clone() / pivot.clone();
            }
            for i in 0..n {
                if i == col || a[(i, col)].is_zero() {
                    continue;
                }
                let f = a[(i, col)].clone();
                for j in 0..n {
                    a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(col, j)].clone();
                    inv[(i, j)] = inv[(i, j)].clone() - f.clone() * inv[(col, j)].clone();
                }
            }
        }
        Some(inv)
    }

    /// Solves `self * x = rhs` for square nonsingular `self`.
    pub fn solve(&self, rhs: &[S]) -> Option<Vec<S>> {
        let inv = self.inverse()?;
        let b = Matrix::from_row_major(rhs.len(), 1, rhs.to_vec());
        Some(inv.mul(&b).into_data())
    }

    /// An invertible `P` with `P * self` zero below the first `rank` rows.
    ///
    /// Exact fields track the row operations of Gauss-Jordan elimination;
    /// floats take `P = U^H` from the SVD and clear the trailing rows of the
    /// product, which lie below the tolerance.
    pub fn row_basis_change(&self, tol: Tolerance) -> (Self, usize) {
        match S::FIELD {
            FieldTag::Exact => {
                let mut a = self.clone();
                let mut p = Self::identity(self.rows);
                let mut rank = 0;
                for col in 0..a.cols {
                    if rank == a.rows {
                        break;
                    }
                    let Some(piv) = a.pivot_row(col, rank) else {
                        continue;
                    };
                    a.swap_rows(piv, rank);
                    p.swap_rows(piv, rank);
                    let pivot = a[(rank, col)].clone();
                    for i in rank + 1..a.rows {
                        if a[(i, col)].is_zero() {
                            continue;
                        }
                        let f = a[(i, col)].clone() / pivot.clone();
                        for j in 0..a.cols {
                            a[(i, j)] = a[(i, j)].clone() - f.clone() * a[(rank, j)].clone();
                        }
                        for j in 0..p.cols {
                            p[(i, j)] = p[(i, j)].clone() - f.clone() * p[(rank, j)].clone();
                        }
                    }
                    rank += 1;
                }
                (p, rank)
            }
            FieldTag::Float => {
                let rank = self.rank(tol);
                let svd = self.to_nalgebra().svd(true, false);
                let u = svd.u.expect("svd u");
                let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
                order.sort_by(|&a, &b| {
                    svd.singular_values[b].total_cmp(&svd.singular_values[a])
                });
                // Complete U to a full unitary when the matrix is wide or tall.
                let m = self.rows;
                let mut basis: Vec<nalgebra::DVector<Complex64>> =
                    order.iter().map(|&k| u.column(k).into_owned()).collect();
                let mut e = 0;
                while basis.len() < m {
                    let mut v = nalgebra::DVector::<Complex64>::zeros(m);
                    v[e] = Complex64::new(1.0, 0.0);
                    for b in &basis {
                        let proj = b.dotc(&v);
                        v -= b * proj;
                    }
                    let norm = v.norm();
                    if norm > 1e-8 {
                        basis.push(v / Complex64::new(norm, 0.0));
                    }
                    e += 1;
                }
                let mut p = Self::zeros(m, m);
                for (i, b) in basis.iter().enumerate() {
                    for j in 0..m {
                        p[(i, j)] = S::from_c64(b[j].conj());
                    }
                }
                (p, rank)
            }
        }
    }

    /// Characteristic polynomial `det(λI - A)` by Faddeev-LeVerrier,
    /// coefficients from the leading `λ^n` term down.
    pub fn characteristic_polynomial(&self) -> Vec<S> {
        assert!(self.is_square());
        let n = self.rows;
        let mut coeffs = vec![S::zero(); n + 1];
        coeffs[0] = S::one();
        let mut m = Self::zeros(n, n);
        for k in 1..=n {
            let shifted = Self::identity(n).scale(&coeffs[k - 1]);
            m = self.mul(&m).add(&shifted);
            let am = self.mul(&m);
            coeffs[k] = -am.trace() / S::from_i64(k as i64);
        }
        coeffs
    }

    /// Eigenvalues of a Hermitian matrix, ascending (double precision).
    pub fn hermitian_eigenvalues(&self) -> Vec<f64> {
        let eig = nalgebra::SymmetricEigen::new(self.to_nalgebra());
        let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }
}

impl<S> std::ops::Index<(usize, usize)> for Matrix<S> {
    type Output = S;
    fn index(&self, (i, j): (usize, usize)) -> &S {
        &self.data[i * self.cols + j]
    }
}

impl<S> std::ops::IndexMut<(usize, usize)> for Matrix<S> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut S {
        &mut self.data[i * self.cols + j]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{gauss, Exact, Float};
    use num_traits::Zero;

    fn cofactor_det(m: &Matrix<Exact>) -> Exact {
        let n = m.rows();
        if n == 1 {
            return m[(0, 0)].clone();
        }
        let mut acc = Exact::from_i64(0);
        for j in 0..n {
            let mut rows = Vec::new();
            for i in 1..n {
                rows.push(
                    (0..n)
                        .filter(|&c| c != j)
                        .map(|c| m[(i, c)].clone())
                        .collect(),
                );
            }
            let minor = cofactor_det(&Matrix::from_rows(rows));
            let term = m[(0, j)].clone() * minor;
            acc = if j % 2 == 0 { acc + term } else { acc - term };
        }
        acc
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = Matrix::<Exact>::from_rows(vec![
            vec![gauss(0, 0), gauss(2, 1), gauss(-1, 0), gauss(3, 0)],
            vec![gauss(1, 0), gauss(0, 0), gauss(4, -2), gauss(1, 1)],
            vec![gauss(0, 0), gauss(5, 0), gauss(0, 0), gauss(-2, 0)],
            vec![gauss(7, 3), gauss(1, 0), gauss(2, 0), gauss(0, 0)],
        ]);
        assert_eq!(m.determinant(), cofactor_det(&m));
    }

    #[test]
    fn determinant_of_singular_matrix_is_zero() {
        let m = Matrix::<Exact>::from_i64_rows(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.determinant(), Exact::from_i64(0));
    }

    #[test]
    fn ranks_agree_between_backends() {
        let rows: &[&[i64]] = &[&[1, 0, 0, 0], &[0, 1, 1, 0], &[1, 1, 1, 0]];
        let e = Matrix::<Exact>::from_i64_rows(rows);
        let f = Matrix::<Float>::from_i64_rows(rows);
        assert_eq!(e.rank(Tolerance::default()), 2);
        assert_eq!(f.rank(Tolerance::default()), 2);
    }

    #[test]
    fn inverse_round_trips() {
        let m = Matrix::<Exact>::from_i64_rows(&[&[2, 1, 0], &[0, 1, 3], &[1, 0, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), Matrix::identity(3));
        assert!(Matrix::<Exact>::from_i64_rows(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn row_basis_change_clears_trailing_rows() {
        let rows: &[&[i64]] = &[&[1, 2, 0, 1], &[2, 4, 0, 2], &[0, 1, 1, 0]];
        let m = Matrix::<Exact>::from_i64_rows(rows);
        let (p, r) = m.row_basis_change(Tolerance::default());
        assert_eq!(r, 2);
        assert!(!p.determinant().is_zero());
        let pm = p.mul(&m);
        assert!(pm.row(2).iter().all(|v| v.is_zero()));

        let mf = Matrix::<Float>::from_i64_rows(rows);
        let (pf, rf) = mf.row_basis_change(Tolerance::default());
        assert_eq!(rf, 2);
        let pmf = pf.mul(&mf);
        assert!(pmf.row(2).iter().all(|v| v.norm() < 1e-12));
        assert!(pf.determinant().norm() > 0.5);
    }

    #[test]
    fn characteristic_polynomial_of_gram_example() {
        let g = Matrix::<Exact>::from_i64_rows(&[&[5, 11], &[11, 25]]);
        let cp = g.characteristic_polynomial();
        assert_eq!(
            cp,
            vec![Exact::from_i64(1), Exact::from_i64(-30), Exact::from_i64(4)]
        );
    }

}

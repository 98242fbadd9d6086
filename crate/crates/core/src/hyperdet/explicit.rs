//! Closed-form hyperdeterminants: 2×2, 2×2×2 (Cayley) and the boundary
//! format 3×2×2.
//!
//! The `*_raw` variants take bare amplitude slices (last index fastest) and
//! accept the zero tensor, which the slice pencils of the Schläfli
//! construction can produce.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::tensor::{flatten, StateTensor};

pub(crate) fn require_format<S: Scalar>(t: &StateTensor<S>, format: &[usize]) -> Result<()> {
    if t.format() != format {
        return Err(Error::WrongFormat {
            expected: format.to_vec(),
            got: t.format().to_vec(),
        });
    }
    Ok(())
}

/// `a00 a11 - a01 a10`.
pub fn det2_raw<S: Scalar>(a: &[S]) -> S {
    a[0].clone() * a[3].clone() - a[1].clone() * a[2].clone()
}

pub fn det2<S: Scalar>(t: &StateTensor<S>) -> Result<S> {
    require_format(t, &[2, 2])?;
    Ok(det2_raw(t.amplitudes()))
}

/// Cayley's hyperdeterminant of a 2×2×2 array, term by term.
pub fn det3_raw<S: Scalar>(a: &[S]) -> S {
    let [a000, a001, a010, a011, a100, a101, a110, a111] = [0, 1, 2, 3, 4, 5, 6, 7].map(|i| a[i].clone());
    let sq = |x: &S, y: &S| x.clone() * x.clone() * y.clone() * y.clone();
    let q = |w: &S, x: &S, y: &S, z: &S| w.clone() * x.clone() * y.clone() * z.clone();

    let squares = sq(&a000, &a111) + sq(&a001, &a110) + sq(&a010, &a101) + sq(&a100, &a011);
    let mixed = q(&a000, &a001, &a110, &a111)
        + q(&a000, &a010, &a101, &a111)
        + q(&a000, &a100, &a011, &a111)
        + q(&a001, &a010, &a101, &a110)
        + q(&a001, &a100, &a011, &a110)
        + q(&a010, &a100, &a011, &a101);
    let cross = q(&a000, &a011, &a101, &a110) + q(&a001, &a010, &a100, &a111);

    squares - S::from_i64(2) * mixed + S::from_i64(4) * cross
}

pub fn det3_explicit<S: Scalar>(t: &StateTensor<S>) -> Result<S> {
    require_format(t, &[2, 2, 2])?;
    Ok(det3_raw(t.amplitudes()))
}

/// The four 3×3 minors `m_j` of the party-1 flattening, column `j` removed.
pub fn minors_3x2x2<S: Scalar>(t: &StateTensor<S>) -> Result<[S; 4]> {
    require_format(t, &[3, 2, 2])?;
    let m: Matrix<S> = flatten(t, &[0])?;
    Ok([0, 1, 2, 3].map(|j| m.submatrix_without_column(j).determinant()))
}

/// `m1 m4 - m2 m3`, degree 6.
pub fn det_3x2x2<S: Scalar>(t: &StateTensor<S>) -> Result<S> {
    let [m1, m2, m3, m4] = minors_3x2x2(t)?;
    Ok(m1 * m4 - m2 * m3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Exact;

    fn kets(format: &[usize], k: &[&str]) -> StateTensor<Exact> {
        StateTensor::from_kets(format, k).unwrap()
    }

    #[test]
    fn det2_examples() {
        assert_eq!(det2(&kets(&[2, 2], &["00", "11"])).unwrap(), Exact::from_i64(1));
        assert_eq!(det2(&kets(&[2, 2], &["00"])).unwrap(), Exact::from_i64(0));
        let t = StateTensor::<Exact>::from_i64(vec![2, 2], &[1, 2, 3, 4]).unwrap();
        assert_eq!(det2(&t).unwrap(), Exact::from_i64(-2));
        assert!(matches!(det2(&kets(&[2, 2, 2], &["000"])), Err(Error::WrongFormat { .. })));
    }

    #[test]
    fn det3_examples() {
        assert_eq!(det3_explicit(&kets(&[2, 2, 2], &["000", "111"])).unwrap(), Exact::from_i64(1));
        assert_eq!(det3_explicit(&kets(&[2, 2, 2], &["001", "010", "100"])).unwrap(), Exact::from_i64(0));
        assert_eq!(det3_explicit(&kets(&[2, 2, 2], &["001", "010"])).unwrap(), Exact::from_i64(0));
        assert_eq!(
            det3_explicit(&kets(&[2, 2, 2], &["000", "111", "011"])).unwrap(),
            Exact::from_i64(1)
        );
    }

    #[test]
    fn det_3x2x2_examples() {
        let gen = kets(&[3, 2, 2], &["000", "101", "110", "211"]);
        let [m1, m2, m3, m4] = minors_3x2x2(&gen).unwrap();
        assert_eq!([m1, m2, m3, m4], [0, 1, 1, 0].map(Exact::from_i64));
        assert_eq!(det_3x2x2(&gen).unwrap(), Exact::from_i64(-1));

        let deg = kets(&[3, 2, 2], &["000", "101", "211"]);
        let [m1, m2, _, _] = minors_3x2x2(&deg).unwrap();
        assert_eq!([m1, m2], [0, 0].map(Exact::from_i64));
        assert_eq!(det_3x2x2(&deg).unwrap(), Exact::from_i64(0));

        let ghz = kets(&[3, 2, 2], &["000", "111"]);
        assert_eq!(minors_3x2x2(&ghz).unwrap(), [0, 0, 0, 0].map(Exact::from_i64));
        assert_eq!(det_3x2x2(&ghz).unwrap(), Exact::from_i64(0));
    }
}

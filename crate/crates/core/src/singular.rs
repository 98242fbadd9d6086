//! Node and cusp singularities of the dual variety for the 2×2×2 and 3×2×2
//! formats, and the x°-section helpers for three qubits.
//!
//! Party arguments are 0-based; node labels in reports are 1-based
//! (`node1`, `node2`, ...) to line up with the biseparable class names.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::hyperdet::explicit::require_format;
use crate::hyperdet::{det3_explicit, det_3x2x2, invariant_scale};
use crate::linalg::Matrix;
use crate::scalar::{Scalar, Tolerance};
use crate::tensor::{apply_local, cut_rank, LocalOperatorTuple, StateTensor};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SingularityReport<S> {
    pub in_dual: bool,
    pub node_flags: BTreeMap<String, bool>,
    pub cusp_flag: bool,
    #[serde(skip)]
    pub hessian_det: Option<S>,
}

/// Membership in the party-`j` node component: the party-`j` flattening has
/// rank at most one.
pub fn node_test_2x2x2<S: Scalar>(t: &StateTensor<S>, party: usize, tol: Tolerance) -> Result<bool> {
    require_format(t, &[2, 2, 2])?;
    if party > 2 {
        return Err(Error::BadCut(vec![party]));
    }
    Ok(cut_rank(t, &[party], tol)? <= 1)
}

pub fn cusp_test_2x2x2<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<bool> {
    for j in 0..3 {
        if node_test_2x2x2(t, j, tol)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// All four 3×3 minors of the party-1 flattening vanish, i.e. its rank is at most two.
pub fn node1_test_3x2x2<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<bool> {
    require_format(t, &[3, 2, 2])?;
    Ok(cut_rank(t, &[0], tol)? <= 2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SectionFlags {
    /// `a000 = a001 = a010 = a100 = 0`.
    pub in_xv_section: bool,
    /// Additionally `a011 = a111 = 0`.
    pub node1_section: bool,
    /// Additionally `a101 = a111 = 0`.
    pub node2_section: bool,
    /// Additionally `a110 = a111 = 0`.
    pub node3_section: bool,
}

fn zero_at<S: Scalar>(t: &StateTensor<S>, flat: &[usize], tol: Tolerance) -> bool {
    let scale = t.norm();
    flat.iter().all(|&i| t.amplitudes()[i].is_negligible(scale, tol))
}

pub fn xo_section_flags<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<SectionFlags> {
    require_format(t, &[2, 2, 2])?;
    let in_xv_section = zero_at(t, &[0b000, 0b001, 0b010, 0b100], tol);
    Ok(SectionFlags {
        in_xv_section,
        node1_section: in_xv_section && zero_at(t, &[0b011, 0b111], tol),
        node2_section: in_xv_section && zero_at(t, &[0b101, 0b111], tol),
        node3_section: in_xv_section && zero_at(t, &[0b110, 0b111], tol),
    })
}

/// Quadric part of the pairing at `x° = (|0⟩,|0⟩,|0⟩)` and its determinant
/// `2 a011 a101 a110`.
pub fn hessian_at_xo<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<(Matrix<S>, S)> {
    if !xo_section_flags(t, tol)?.in_xv_section {
        return Err(Error::NotInSection);
    }
    let a = |i: usize| t.amplitudes()[i].clone();
    let (a011, a101, a110) = (a(0b011), a(0b101), a(0b110));
    let z = S::zero();
    let y = Matrix::from_rows(vec![
        vec![z.clone(), a110.clone(), a101.clone()],
        vec![a110.clone(), z.clone(), a011.clone()],
        vec![a101.clone(), a011.clone(), z],
    ]);
    let det = y.determinant();
    Ok((y, det))
}

/// Node, cusp and dual-variety membership for the 2×2×2 and 3×2×2 formats.
///
/// For 3×2×2 the labels are `node1` (rank of the party-1 flattening ≤ 2),
/// `node_empty` (party-1 local rank ≤ 1), `node2` and `node3` (local rank of
/// that party ≤ 1). The cusp flag there is `node1` together with a vanishing
/// 2×2×2 hyperdeterminant after projecting party 1 onto its row space.
pub fn singularity_report<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<SingularityReport<S>> {
    match t.format() {
        [2, 2, 2] => {
            let det = det3_explicit(t)?;
            let mut node_flags = BTreeMap::new();
            for j in 0..3 {
                node_flags.insert(format!("node{}", j + 1), node_test_2x2x2(t, j, tol)?);
            }
            let cusp_flag = node_flags.values().any(|&b| b);
            let hessian_det = match hessian_at_xo(t, tol) {
                Ok((_, d)) => Some(d),
                Err(_) => None,
            };
            Ok(SingularityReport {
                in_dual: det.is_negligible(invariant_scale(t, 4), tol),
                node_flags,
                cusp_flag,
                hessian_det,
            })
        }
        [3, 2, 2] => {
            let det = det_3x2x2(t)?;
            let node1 = node1_test_3x2x2(t, tol)?;
            let r1 = cut_rank(t, &[0], tol)?;
            let mut node_flags = BTreeMap::new();
            node_flags.insert("node1".to_string(), node1);
            node_flags.insert("node_empty".to_string(), r1 <= 1);
            node_flags.insert("node2".to_string(), cut_rank(t, &[1], tol)? <= 1);
            node_flags.insert("node3".to_string(), cut_rank(t, &[2], tol)? <= 1);
            let cusp_flag = node1 && {
                let q = project_322(t, tol)?;
                det3_explicit(&q)?.is_negligible(invariant_scale(&q, 4), tol)
            };
            Ok(SingularityReport {
                in_dual: det.is_negligible(invariant_scale(t, 6), tol),
                node_flags,
                cusp_flag,
                hessian_det: None,
            })
        }
        other => Err(Error::UnsupportedFormat(other.to_vec())),
    }
}

/// Rotates party 1 of a 3×2×2 tensor with party-1 flattening rank ≤ 2 so
/// that its third slice vanishes, and returns the first two slices as a
/// 2×2×2 tensor. The basis change is invertible, so SLOCC class data is kept.
pub fn project_322<S: Scalar>(t: &StateTensor<S>, tol: Tolerance) -> Result<StateTensor<S>> {
    require_format(t, &[3, 2, 2])?;
    let m = crate::tensor::flatten(t, &[0])?;
    let (p, rank) = m.row_basis_change(tol);
    if rank > 2 {
        return Err(Error::WrongFormat {
            expected: vec![2, 2, 2],
            got: t.format().to_vec(),
        });
    }
    let g = LocalOperatorTuple::new(vec![p, Matrix::identity(2), Matrix::identity(2)])?;
    let rotated = apply_local(t, &g)?;
    StateTensor::new(vec![2, 2, 2], rotated.amplitudes()[..8].to_vec())
}

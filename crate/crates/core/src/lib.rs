//! Hyperdeterminants and the onion classification of multipartite entanglement.
//!
//! The crate evaluates hyperdeterminants of small state tensors (2×2, 2×2×2,
//! 3×2×2 and 2×2×2×2), tests membership in the node and cusp singularities of
//! the dual variety where explicit criteria exist, and classifies states into
//! nested SLOCC-invariant classes together with their reachability order under
//! noninvertible local operations.
//!
//! Every algorithm is generic over [`Scalar`]: exact Gaussian rationals give
//! true zero tests; floating complex numbers use a relative [`Tolerance`].

pub mod classify;
pub mod error;
pub mod hyperdet;
pub mod linalg;
pub mod mixed;
pub mod oracle;
pub mod random;
pub mod scalar;
pub mod selftest;
pub mod singular;
pub mod tensor;

pub use error::{Error, Result};
pub use hyperdet::{hyperdet, HyperdetResult};
pub use linalg::Matrix;
pub use scalar::{Exact, FieldTag, Float, Radical, Scalar, Tolerance};
pub use tensor::{apply_local, LocalOperatorTuple, ProductVector, StateTensor};
pub use classify::{
    canonicalize_3qubit, classify, reachable, representative, Canonical, ClassLabel, ClassName,
    Family,
};

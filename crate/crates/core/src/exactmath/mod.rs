//! Exact field arithmetic over ℚ and ℚ(√d), and exact linear algebra:
//! kernels, characteristic polynomials, in-field eigenvalues, generalized
//! eigenspaces.

mod matrix;
mod poly;
mod scalar;

pub use matrix::{ExactMatrix, SpanBuilder};
pub use poly::{charpoly, roots_in_field, Poly};
pub use scalar::{rational_sqrt, FieldConfig, Scalar};

use thiserror::Error;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not a valid quadratic field parameter: {0}")]
    BadField(i64),
    #[error("cannot parse scalar: {0}")]
    ParseScalar(String),
}

/// In-field eigenvalues of a square matrix. `complete` is set when the
/// characteristic polynomial splits into the eigenvalues found (with
/// multiplicity) over the configured field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenResult {
    pub eigenvalues: Vec<Scalar>,
    pub complete: bool,
}

pub fn eigenvalues_in_field(m: &ExactMatrix) -> EigenResult {
    let p = charpoly(m);
    let (roots, complete) = roots_in_field(&p);
    EigenResult {
        eigenvalues: roots.into_iter().map(|(r, _)| r).collect(),
        complete,
    }
}

/// Basis of ker (m − λI)^n, computed by iterating kernels to stabilization.
pub fn generalized_eigenspace(m: &ExactMatrix, lambda: &Scalar) -> Vec<Vec<Scalar>> {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    let shifted = m.sub(&ExactMatrix::identity(n, m.field()).scale(lambda));
    let mut power = shifted.clone();
    let mut best: Vec<Vec<Scalar>> = power.kernel();
    for _ in 1..n {
        power = power.mul(&shifted);
        let next = power.kernel();
        if next.len() == best.len() {
            break;
        }
        best = next;
    }
    best
}

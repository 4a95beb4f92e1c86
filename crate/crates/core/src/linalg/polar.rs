use super::matrix::CMatrix;
use super::svd::{svd, Svd};
use crate::error::Result;

/// `A = unitary · positive`, with `positive = (A*A)^{1/2}`.
///
/// The unitary factor is always unitary: when `A` is singular, the SVD's
/// left basis is completed on the kernel of `A*`.
#[derive(Debug, Clone)]
pub struct PolarParts {
    pub unitary: CMatrix,
    pub positive: CMatrix,
    pub svd: Svd,
}

impl PolarParts {
    /// `|A*| = U |A| U* = W Σ W*`.
    pub fn adjoint_positive(&self) -> CMatrix {
        spectral_sum(&self.svd.left, &self.svd.sigma)
    }
}

/// `Q diag(values) Q*`, Hermitian by construction.
fn spectral_sum(q: &CMatrix, values: &[f64]) -> CMatrix {
    let n = values.len();
    let mut out = CMatrix::from_fn(n, n, |i, j| (0..n).map(|k| q[(i, k)] * values[k] * q[(j, k)].conj()).sum());
    for i in 0..n {
        out[(i, i)].im = 0.0;
    }
    out
}

pub fn polar(a: &CMatrix) -> Result<PolarParts> {
    a.require_square("polar")?;
    let svd = svd(a)?;
    let unitary = &svd.left * &svd.right.adjoint();
    let positive = spectral_sum(&svd.right, &svd.sigma);
    Ok(PolarParts { unitary, positive, svd })
}

/// `|A| = (A*A)^{1/2}`.
pub fn abs(a: &CMatrix) -> Result<CMatrix> {
    Ok(polar(a)?.positive)
}

/// `|A*| = (AA*)^{1/2}`, computed from the SVD of `A*`.
pub fn abs_adjoint(a: &CMatrix) -> Result<CMatrix> {
    Ok(polar(&a.adjoint())?.positive)
}

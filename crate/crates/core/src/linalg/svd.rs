//! One-sided (Hestenes) Jacobi SVD.
//!
//! Columns of `G = M V` are rotated pairwise until mutually orthogonal; then
//! `σ_i = ‖g_i‖` and `w_i = g_i / σ_i`. Columns belonging to numerically zero
//! singular values are completed to an orthonormal basis.

use num_complex::Complex64;

use super::eigen::Rotation;
use super::matrix::{basis, inner, vec_norm, CMatrix, CVector};
use crate::error::Result;

const MAX_SWEEPS: usize = 80;
const ORTHO_TOL: f64 = 1e-15;

/// `M = left · diag(sigma) · right*`, `sigma` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    pub left: CMatrix,
    pub sigma: Vec<f64>,
    pub right: CMatrix,
}

impl Svd {
    pub fn reconstruct(&self) -> CMatrix {
        let n = self.sigma.len();
        let scaled = CMatrix::from_fn(self.left.rows(), n, |i, j| self.left[(i, j)] * self.sigma[j]);
        &scaled * &self.right.adjoint()
    }
}

fn column_inner(g: &CMatrix, i: usize, j: usize) -> Complex64 {
    // g_i* g_j
    (0..g.rows()).map(|k| g[(k, i)].conj() * g[(k, j)]).sum()
}

fn column_norm_sqr(g: &CMatrix, i: usize) -> f64 {
    (0..g.rows()).map(|k| g[(k, i)].norm_sqr()).sum()
}

/// Orthogonalizes the columns of `m` in place, returning the accumulated
/// right rotations `V` with `m_in · V = m_out`.
fn orthogonalize_columns(g: &mut CMatrix) -> CMatrix {
    let n = g.cols();
    let mut v = CMatrix::identity(n);
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha = column_norm_sqr(g, p);
                let beta = column_norm_sqr(g, q);
                let gamma = column_inner(g, p, q);
                if gamma.norm() <= ORTHO_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                let Some(rot) = Rotation::for_block(alpha, beta, gamma) else { continue };
                rotated = true;
                rot.apply_right(g, p, q);
                rot.apply_right(&mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }
    v
}

/// Singular values of any matrix, descending.
pub fn singular_values(m: &CMatrix) -> Vec<f64> {
    let mut g = if m.rows() >= m.cols() { m.clone() } else { m.adjoint() };
    orthogonalize_columns(&mut g);
    let mut s: Vec<f64> = (0..g.cols()).map(|j| column_norm_sqr(&g, j).sqrt()).collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Full SVD of a square matrix.
pub fn svd(m: &CMatrix) -> Result<Svd> {
    let n = m.require_square("svd")?;
    let mut g = m.clone();
    let v = orthogonalize_columns(&mut g);

    let norms: Vec<f64> = (0..n).map(|j| column_norm_sqr(&g, j).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let right = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    let cutoff = sigma[0] * n as f64 * f64::EPSILON;
    let mut cols: Vec<CVector> = Vec::with_capacity(n);
    let mut missing = Vec::new();
    for (j, &k) in order.iter().enumerate() {
        if sigma[j] > cutoff && sigma[j] > 0.0 {
            let s = sigma[j];
            cols.push(g.column(k).into_iter().map(|z| z / s).collect());
        } else {
            cols.push(Vec::new());
            missing.push(j);
        }
    }
    for j in missing {
        cols[j] = completion_vector(n, &cols);
    }
    let mut left = CMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        left.set_column(j, col);
    }
    Ok(Svd { left, sigma, right })
}

/// A unit vector orthogonal to every non-empty column in `cols`.
fn completion_vector(n: usize, cols: &[CVector]) -> CVector {
    let mut best: Option<(f64, CVector)> = None;
    for k in 0..n {
        let mut x = basis(n, k);
        // two passes of modified Gram-Schmidt
        for _ in 0..2 {
            for c in cols.iter().filter(|c| !c.is_empty()) {
                let proj = inner(&x, c);
                for (xi, &ci) in x.iter_mut().zip(c) {
                    *xi -= proj * ci;
                }
            }
        }
        let norm = vec_norm(&x);
        if best.as_ref().is_none_or(|(b, _)| norm > *b) {
            best = Some((norm, x));
        }
    }
    let (norm, x) = best.expect("n > 0");
    x.into_iter().map(|z| z / norm).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_singular_values() {
        let s = svd(&CMatrix::identity(4)).unwrap();
        assert!(s.sigma.iter().all(|&x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn nilpotent_rank_one() {
        let m = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        let s = svd(&m).unwrap();
        assert_eq!(s.sigma, vec![1.0, 0.0]);
        assert!(s.left.is_unitary(1e-14) && s.right.is_unitary(1e-14));
        assert!((&m - &s.reconstruct()).frobenius_norm() < 1e-15);
    }

    #[test]
    fn zero_matrix_gets_unitary_factors() {
        let s = svd(&CMatrix::zeros(3, 3)).unwrap();
        assert_eq!(s.sigma, vec![0.0; 3]);
        assert!(s.left.is_unitary(1e-14));
    }

    #[test]
    fn rank_deficient_complex() {
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        // rank 1: outer product of (1, i, 2) and (1, -1, i)
        let u = [one, i, one * 2.0];
        let w = [one, -one, i];
        let m = CMatrix::from_fn(3, 3, |r, c| u[r] * w[c].conj());
        let s = svd(&m).unwrap();
        assert!((s.sigma[0] - 6f64.sqrt() * 3f64.sqrt()).abs() < 1e-14);
        assert!(s.sigma[1] < 1e-14 && s.sigma[2] < 1e-14);
        assert!(s.left.is_unitary(1e-13));
        assert!((&m - &s.reconstruct()).frobenius_norm() < 1e-14);
    }

    #[test]
    fn rectangular_singular_values() {
        let m = CMatrix::from_real_rows(&[&[3.0, 0.0, 0.0], &[0.0, 4.0, 0.0]]).unwrap();
        assert_eq!(singular_values(&m), vec![4.0, 3.0]);
        assert_eq!(singular_values(&m.adjoint()), vec![4.0, 3.0]);
    }
}

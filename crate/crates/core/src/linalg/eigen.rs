//! Cyclic Jacobi eigensolver for Hermitian matrices.
//!
//! Each step annihilates one off-diagonal pair `(p, q)` with a unitary
//! `G = D R`, where `D = diag(1, conj(e))` makes the pivot real (`e` is the
//! phase of `a_pq`) and `R` is the real Jacobi rotation of the resulting
//! symmetric 2x2 block.

use num_complex::Complex64;

use super::matrix::CMatrix;
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Eigenvalues in ascending order, orthonormal eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct EigSystem {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl EigSystem {
    /// `V diag(f(λ)) V*`.
    pub fn map_values(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let n = self.values.len();
        let mapped: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = CMatrix::from_fn(n, n, |i, j| {
            (0..n).map(|k| v[(i, k)] * mapped[k] * v[(j, k)].conj()).sum()
        });
        // exact Hermitian symmetry
        for i in 0..n {
            out[(i, i)].im = 0.0;
        }
        out
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.map_values(|l| l)
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }
}

/// Plane rotation `G = D R` acting on coordinates `(p, q)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Rotation {
    pub c: f64,
    pub s: f64,
    /// conj(phase of the pivot)
    pub phase_conj: Complex64,
    pub t: f64,
}

impl Rotation {
    /// Rotation diagonalizing `[[a, b], [conj(b), d]]`; `None` when `b = 0`.
    pub fn for_block(a: f64, d: f64, b: Complex64) -> Option<Self> {
        let m = b.norm();
        if m == 0.0 {
            return None;
        }
        let theta = (d - a) / (2.0 * m);
        let t = if theta.abs() > 1e150 {
            0.5 / theta
        } else {
            theta.signum() / (theta.abs() + theta.hypot(1.0))
        };
        let c = 1.0 / t.hypot(1.0);
        Some(Self { c, s: t * c, phase_conj: (b / m).conj(), t })
    }

    /// Entries `(G_pp, G_pq, G_qp, G_qq)`.
    #[inline]
    pub fn entries(&self) -> (Complex64, Complex64, Complex64, Complex64) {
        (
            Complex64::new(self.c, 0.0),
            Complex64::new(self.s, 0.0),
            self.phase_conj * (-self.s),
            self.phase_conj * self.c,
        )
    }

    /// `M ← M G` on columns `p`, `q`.
    pub fn apply_right(&self, m: &mut CMatrix, p: usize, q: usize) {
        let (gpp, gpq, gqp, gqq) = self.entries();
        for k in 0..m.rows() {
            let mp = m[(k, p)];
            let mq = m[(k, q)];
            m[(k, p)] = mp * gpp + mq * gqp;
            m[(k, q)] = mp * gpq + mq * gqq;
        }
    }

    /// `M ← G* M` on rows `p`, `q`.
    pub fn apply_left_adjoint(&self, m: &mut CMatrix, p: usize, q: usize) {
        let (gpp, gpq, gqp, gqq) = self.entries();
        for k in 0..m.cols() {
            let mp = m[(p, k)];
            let mq = m[(q, k)];
            m[(p, k)] = gpp.conj() * mp + gqp.conj() * mq;
            m[(q, k)] = gpq.conj() * mp + gqq.conj() * mq;
        }
    }
}

fn check_hermitian(m: &CMatrix, tol: f64) -> Result<usize> {
    let n = m.require_square("hermitian_eig")?;
    let defect = m.hermitian_defect();
    let allowed = tol * m.frobenius_norm();
    if !(defect <= allowed) {
        return Err(Error::NotHermitian { defect, tol: allowed });
    }
    Ok(n)
}

fn off_diagonal_norm(a: &CMatrix) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

fn jacobi(m: &CMatrix, mut vectors: Option<&mut CMatrix>) -> Vec<f64> {
    let n = m.rows();
    let mut a = m.hermitian_part();
    let scale = a.frobenius_norm();
    if scale == 0.0 {
        return vec![0.0; n];
    }
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&a) <= 1e-16 * scale {
            break;
        }
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[(p, q)];
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let bn = b.norm();
                if bn <= 1e-18 * scale || bn <= 1e-17 * (app.abs() * aqq.abs()).sqrt() {
                    continue;
                }
                let Some(rot) = Rotation::for_block(app, aqq, b) else { continue };
                rotated = true;
                rot.apply_right(&mut a, p, q);
                rot.apply_left_adjoint(&mut a, p, q);
                a[(p, p)] = Complex64::new(app - rot.t * bn, 0.0);
                a[(q, q)] = Complex64::new(aqq + rot.t * bn, 0.0);
                a[(p, q)] = Complex64::new(0.0, 0.0);
                a[(q, p)] = Complex64::new(0.0, 0.0);
                if let Some(v) = vectors.as_deref_mut() {
                    rot.apply_right(v, p, q);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    a.real_diagonal()
}

/// Full eigendecomposition of a Hermitian matrix (Hermitian within `tol`,
/// relative to the Frobenius norm).
pub fn hermitian_eig(m: &CMatrix, tol: f64) -> Result<EigSystem> {
    let n = check_hermitian(m, tol)?;
    let mut vecs = CMatrix::identity(n);
    let values = jacobi(m, Some(&mut vecs));

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| values[i].total_cmp(&values[j]));
    let sorted_values = order.iter().map(|&k| values[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| vecs[(i, order[j])]);
    Ok(EigSystem { values: sorted_values, vectors })
}

/// Ascending eigenvalues only.
pub fn hermitian_eigenvalues(m: &CMatrix, tol: f64) -> Result<Vec<f64>> {
    check_hermitian(m, tol)?;
    let mut values = jacobi(m, None);
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Largest eigenvalue of a matrix already known to be Hermitian.
pub(crate) fn max_eigenvalue_unchecked(m: &CMatrix) -> f64 {
    jacobi(m, None).into_iter().fold(f64::NEG_INFINITY, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residual(m: &CMatrix, e: &EigSystem) -> f64 {
        (m - &e.reconstruct()).frobenius_norm() / m.frobenius_norm().max(1.0)
    }

    #[test]
    fn diagonal_input() {
        let e = hermitian_eig(&CMatrix::from_diag(&[3.0, 1.0]), 1e-12).unwrap();
        assert_eq!(e.values, vec![1.0, 3.0]);
        assert_eq!(e.vectors[(1, 0)].norm(), 1.0);
        assert_eq!(e.vectors[(0, 1)].norm(), 1.0);
    }

    #[test]
    fn pauli_x() {
        let x = CMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = hermitian_eig(&x, 1e-12).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        assert!(residual(&x, &e) < 1e-15);
    }

    #[test]
    fn complex_pivot() {
        let i = Complex64::new(0.0, 1.0);
        // Pauli-Y
        let y = CMatrix::new(2, 2, vec![Complex64::new(0.0, 0.0), -i, i, Complex64::new(0.0, 0.0)]).unwrap();
        let e = hermitian_eig(&y, 1e-12).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15 && (e.values[1] - 1.0).abs() < 1e-15);
        assert!(residual(&y, &e) < 1e-15);
        assert!(e.vectors.is_unitary(1e-14));
    }

    #[test]
    fn rejects_non_hermitian() {
        let nil = CMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        match hermitian_eig(&nil, 1e-12) {
            Err(Error::NotHermitian { defect, .. }) => assert!((defect - 2f64.sqrt()).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
        assert!(hermitian_eig(&CMatrix::zeros(2, 3), 1e-12).is_err());
    }

    #[test]
    fn zero_matrix() {
        let e = hermitian_eig(&CMatrix::zeros(3, 3), 1e-12).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
    }

    #[test]
    fn repeated_eigenvalues() {
        let m = CMatrix::from_real_rows(&[&[2.0, 0.0, 0.0], &[0.0, 2.0, 1e-20], &[0.0, 1e-20, 2.0]]).unwrap();
        let e = hermitian_eig(&m, 1e-12).unwrap();
        assert!(e.values.iter().all(|&v| (v - 2.0).abs() < 1e-15));
    }
}

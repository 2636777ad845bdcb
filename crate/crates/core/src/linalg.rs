//! Dense complex linear-algebra helpers shared by the constructions and the oracle.

use nalgebra::{ComplexField, DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CVector = DVector<C64>;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

pub fn real_vector(values: &[f64]) -> CVector {
    CVector::from_iterator(values.len(), values.iter().map(|&x| c(x, 0.0)))
}

pub fn norm_sqr(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum()
}

/// `<u, v>` conjugate-linear in the first slot.
pub fn inner(u: &CVector, v: &CVector) -> C64 {
    u.dotc(v)
}

pub fn max_abs(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .copied()
        .fold(0.0, f64::max)
}

/// Modified Gram–Schmidt with two passes. Returns an orthonormal basis whose span equals
/// that of `vectors`, or `RankLoss` when a vector is (numerically) dependent on its
/// predecessors.
pub fn gram_schmidt(vectors: &[CVector], dim: usize, block: &str) -> Result<CMatrix> {
    let mut basis: Vec<CVector> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let original = v.norm();
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let proj = q.dotc(&w);
                w -= q * proj;
            }
        }
        let n = w.norm();
        if original == 0.0 || n <= 1e-8 * original {
            return Err(Error::RankLoss {
                block: block.to_string(),
            });
        }
        basis.push(w / c(n, 0.0));
    }
    Ok(columns(&basis, dim))
}

pub fn columns(vectors: &[CVector], dim: usize) -> CMatrix {
    let mut m = CMatrix::zeros(dim, vectors.len());
    for (j, v) in vectors.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// Orthogonal projector `Q Q*` for a matrix with orthonormal columns.
pub fn projector(q: &CMatrix) -> CMatrix {
    q * q.adjoint()
}

/// Orthonormal basis of the right null space: right singular vectors whose singular value
/// is at most `tol`. Wide matrices are padded with zero rows so that the full set of right
/// singular vectors is available.
pub fn null_space<T: ComplexField>(m: &DMatrix<T>, tol: T::RealField) -> DMatrix<T> {
    let (rows, cols) = m.shape();
    if cols == 0 {
        return DMatrix::zeros(0, 0);
    }
    if rows == 0 {
        return DMatrix::identity(cols, cols);
    }
    let padded = if rows < cols {
        let mut p = DMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (rows, cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = padded.svd(false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let kept: Vec<usize> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= tol)
        .map(|(i, _)| i)
        .collect();
    let mut out = DMatrix::zeros(cols, kept.len());
    for (j, &i) in kept.iter().enumerate() {
        for r in 0..cols {
            out[(r, j)] = v_t[(i, r)].clone().conjugate();
        }
    }
    out
}

/// Least squares via Householder QR of a tall matrix; returns the solution and the residual
/// norm `||A x - b||`.
pub fn least_squares(a: &CMatrix, b: &CVector) -> Result<(CVector, f64)> {
    let (rows, cols) = a.shape();
    if rows < cols {
        return Err(Error::InconsistentSystem(f64::INFINITY));
    }
    if cols == 0 {
        return Ok((CVector::zeros(0), b.norm()));
    }
    let qr = a.clone().qr();
    let q = qr.q();
    let r = qr.r();
    let rhs = q.adjoint() * b;
    let scale = r.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max);
    if r.diagonal().iter().any(|z| z.norm() <= 1e-12 * scale.max(1.0)) {
        return Err(Error::InconsistentSystem(f64::NAN));
    }
    let x = r
        .solve_upper_triangular(&rhs)
        .ok_or(Error::InconsistentSystem(f64::NAN))?;
    let residual = (a * &x - b).norm();
    Ok((x, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_schmidt_detects_dependence() {
        let a = real_vector(&[1.0, 0.0, 0.0]);
        let b = real_vector(&[2.0, 0.0, 0.0]);
        assert!(matches!(
            gram_schmidt(&[a, b], 3, "test"),
            Err(Error::RankLoss { .. })
        ));
    }

    #[test]
    fn null_space_of_wide_matrix() {
        let m = DMatrix::from_row_slice(1, 3, &[1.0_f64, 1.0, 0.0]);
        let n = null_space(&m, 1e-9);
        assert_eq!(n.ncols(), 2);
        assert!((&m * &n).norm() < 1e-12);
    }

    #[test]
    fn null_space_without_rows_is_everything() {
        let m = DMatrix::<f64>::zeros(0, 3);
        assert_eq!(null_space(&m, 1e-9).ncols(), 3);
    }

    #[test]
    fn least_squares_recovers_consistent_solution() {
        let a = CMatrix::from_row_slice(
            3,
            2,
            &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(1.0, 0.0)],
        );
        let b = real_vector(&[1.0, 2.0, 3.0]);
        let (x, res) = least_squares(&a, &b).unwrap();
        assert!(res < 1e-12);
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-12);
        assert!((x[1] - c(2.0, 0.0)).norm() < 1e-12);
    }
}

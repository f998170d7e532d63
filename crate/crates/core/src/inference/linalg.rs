//! Small dense symmetric solves for the 7-parameter problems.

use crate::scalar::Scalar;

/// Lower Cholesky factor of the row-major `d x d` matrix `a`, or `None` if not positive definite.
pub(crate) fn cholesky<T: Scalar>(a: &[T], d: usize) -> Option<Vec<T>> {
    let mut l = vec![T::zero(); d * d];
    for i in 0..d {
        for j in 0..=i {
            let mut s = a[i * d + j];
            for k in 0..j {
                s = s - l[i * d + k] * l[j * d + k];
            }
            if i == j {
                if !(s > T::zero()) || !s.is_finite() {
                    return None;
                }
                l[i * d + i] = s.sqrt();
            } else {
                l[i * d + j] = s / l[j * d + j];
            }
        }
    }
    Some(l)
}

/// Solves `L L^T x = b`.
pub(crate) fn cholesky_solve<T: Scalar>(l: &[T], d: usize, b: &[T]) -> Vec<T> {
    let mut y = b.to_vec();
    for i in 0..d {
        for k in 0..i {
            y[i] = y[i] - l[i * d + k] * y[k];
        }
        y[i] = y[i] / l[i * d + i];
    }
    for i in (0..d).rev() {
        for k in (i + 1)..d {
            y[i] = y[i] - l[k * d + i] * y[k];
        }
        y[i] = y[i] / l[i * d + i];
    }
    y
}

/// Inverse of the matrix whose Cholesky factor is `l`.
pub(crate) fn cholesky_inverse<T: Scalar>(l: &[T], d: usize) -> Vec<T> {
    let mut inv = vec![T::zero(); d * d];
    for c in 0..d {
        let mut e = vec![T::zero(); d];
        e[c] = T::one();
        let col = cholesky_solve(l, d, &e);
        for r in 0..d {
            inv[r * d + c] = col[r];
        }
    }
    inv
}

/// `L z` for lower-triangular `L`.
pub(crate) fn lower_mul<T: Scalar>(l: &[T], d: usize, z: &[T]) -> Vec<T> {
    (0..d).map(|i| (0..=i).map(|k| l[i * d + k] * z[k]).sum()).collect()
}

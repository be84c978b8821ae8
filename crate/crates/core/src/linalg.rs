//! Small dense linear algebra on `ndarray` matrices.
//!
//! Channel counts are at most a few dozen, so a cyclic Jacobi
//! eigensolver is accurate and fast enough.

use ndarray::{Array1, Array2, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Eigen-decomposition of a symmetric matrix: `m = vectors * diag(values) * vectors^T`.
/// Values are sorted descending; column `k` of `vectors` pairs with `values[k]`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen<T> {
    pub values: Array1<T>,
    pub vectors: Array2<T>,
}

pub fn is_symmetric<T: Scalar>(m: ArrayView2<'_, T>, tol: T) -> bool {
    let n = m.nrows();
    if m.ncols() != n {
        return false;
    }
    let scale = m.iter().fold(T::one(), |a, &b| a.max(b.abs()));
    (0..n).all(|i| (0..i).all(|j| (m[[i, j]] - m[[j, i]]).abs() <= tol * scale))
}

/// Cyclic Jacobi eigensolver for a symmetric matrix. Only the lower triangle
/// is trusted; the input is symmetrized first.
pub fn symmetric_eigen<T: Scalar>(m: ArrayView2<'_, T>) -> Result<SymmetricEigen<T>> {
    let n = m.nrows();
    if m.ncols() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n}x{n}"),
            got: format!("{}x{}", n, m.ncols()),
        });
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::NotSpd);
    }
    let half = T::lit(0.5);
    let mut a = Array2::from_shape_fn((n, n), |(i, j)| (m[[i, j]] + m[[j, i]]) * half);
    let mut v = Array2::<T>::eye(n);

    let eps = T::epsilon();
    for _sweep in 0..100 {
        let off: T = (0..n)
            .flat_map(|i| (0..i).map(move |j| (i, j)))
            .fold(T::zero(), |s, (i, j)| s + a[[i, j]] * a[[i, j]]);
        let diag: T = (0..n).fold(T::zero(), |s, i| s + a[[i, i]] * a[[i, i]]);
        if off <= eps * eps * diag || off == T::zero() {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[[p, q]];
                if apq == T::zero() {
                    continue;
                }
                let theta = (a[[q, q]] - a[[p, p]]) / (apq + apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + T::one()).sqrt());
                let c = T::one() / (t * t + T::one()).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[[k, p]];
                    let akq = a[[k, q]];
                    a[[k, p]] = c * akp - s * akq;
                    a[[k, q]] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[[p, k]];
                    let aqk = a[[q, k]];
                    a[[p, k]] = c * apk - s * aqk;
                    a[[q, k]] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[[k, p]];
                    let vkq = v[[k, q]];
                    v[[k, p]] = c * vkp - s * vkq;
                    v[[k, q]] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[[j, j]]
            .partial_cmp(&a[[i, i]])
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    let values = Array1::from_iter(order.iter().map(|&i| a[[i, i]]));
    let vectors = v.select(Axis(1), &order);
    Ok(SymmetricEigen { values, vectors })
}

/// `Q * diag(f(lambda)) * Q^T` for a symmetric matrix.
pub fn spectral_map<T: Scalar>(
    m: ArrayView2<'_, T>,
    f: impl Fn(T) -> Result<T>,
) -> Result<Array2<T>> {
    let eig = symmetric_eigen(m)?;
    let n = m.nrows();
    let mapped: Vec<T> = eig.values.iter().map(|&l| f(l)).collect::<Result<_>>()?;
    let mut scaled = eig.vectors.clone();
    for (mut col, &s) in scaled.columns_mut().into_iter().zip(&mapped) {
        col.mapv_inplace(|x| x * s);
    }
    let out = scaled.dot(&eig.vectors.t());
    // exact symmetry
    let half = T::lit(0.5);
    Ok(Array2::from_shape_fn((n, n), |(i, j)| (out[[i, j]] + out[[j, i]]) * half))
}

/// Solves `a x = b` for symmetric positive-definite `a` via Cholesky.
pub fn cholesky_solve<T: Scalar>(a: ArrayView2<'_, T>, b: &Array1<T>) -> Result<Array1<T>> {
    let n = a.nrows();
    if a.ncols() != n || b.len() != n {
        return Err(Error::ShapeMismatch {
            expected: format!("{n}x{n} and {n}"),
            got: format!("{}x{} and {}", a.nrows(), a.ncols(), b.len()),
        });
    }
    let mut l = Array2::<T>::zeros((n, n));
    for j in 0..n {
        let mut d = a[[j, j]];
        for k in 0..j {
            d -= l[[j, k]] * l[[j, k]];
        }
        if !(d > T::zero()) || !d.is_finite() {
            return Err(Error::Degenerate);
        }
        let d = d.sqrt();
        l[[j, j]] = d;
        for i in j + 1..n {
            let mut s = a[[i, j]];
            for k in 0..j {
                s -= l[[i, k]] * l[[j, k]];
            }
            l[[i, j]] = s / d;
        }
    }
    let mut y = Array1::<T>::zeros(n);
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[[i, k]] * y[k];
        }
        y[i] = s / l[[i, i]];
    }
    let mut x = Array1::<T>::zeros(n);
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[[k, i]] * x[k];
        }
        x[i] = s / l[[i, i]];
    }
    Ok(x)
}

pub fn trace<T: Scalar>(m: ArrayView2<'_, T>) -> T {
    m.diag().iter().fold(T::zero(), |a, &b| a + b)
}

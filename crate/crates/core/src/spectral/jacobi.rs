//! Cyclic Jacobi eigensolver for dense symmetric matrices.
//!
//! Deterministic sweep order (row-cyclic), so repeated calls on the same
//! input produce bit-identical output.

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};

const MAX_SWEEPS: usize = 64;

pub(crate) struct DenseEigen<T> {
    /// Eigenvalues in ascending order.
    pub values: Vec<T>,
    /// `vectors[j]` is the unit eigenvector paired with `values[j]`.
    pub vectors: Vec<Vec<T>>,
}

/// Frobenius norm of the off-diagonal part.
fn off_norm<T: Scalar>(a: &[T], n: usize) -> T {
    let mut acc = T::zero();
    for p in 0..n {
        for q in (p + 1)..n {
            let x = a[p * n + q];
            acc += x * x;
        }
    }
    (acc + acc).sqrt()
}

fn frobenius<T: Scalar>(a: &[T]) -> T {
    a.iter().map(|&x| x * x).sum::<T>().sqrt()
}

/// Diagonalizes a symmetric matrix in place, returning eigenpairs sorted
/// by ascending eigenvalue.
pub(crate) fn sym_eigen<T: Scalar>(a: &mut [T], n: usize) -> Result<DenseEigen<T>> {
    debug_assert_eq!(a.len(), n * n);
    let mut v = vec![T::zero(); n * n];
    for i in 0..n {
        v[i * n + i] = T::one();
    }

    let scale = frobenius(a);
    let tol = T::epsilon() * scale;
    let mut converged = false;
    let mut sweeps = 0usize;
    for sweep in 0..MAX_SWEEPS {
        sweeps = sweep;
        if off_norm(a, n) <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq == T::zero() {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / ((apq + apq) + T::zero());
                let t = if theta.abs() > cast::<T>(1e150) {
                    // theta^2 would overflow; asymptotic root
                    ((theta + theta) + T::zero()).recip()
                } else {
                    let root = theta.abs() + (theta * theta + T::one()).sqrt();
                    if theta >= T::zero() {
                        root.recip()
                    } else {
                        -root.recip()
                    }
                };
                let c = (t * t + T::one()).sqrt().recip();
                let s = t * c;
                let tau = s / (T::one() + c);

                a[p * n + p] = app - t * apq;
                a[q * n + q] = aqq + t * apq;
                a[p * n + q] = T::zero();
                a[q * n + p] = T::zero();
                for r in 0..n {
                    if r == p || r == q {
                        continue;
                    }
                    let arp = a[r * n + p];
                    let arq = a[r * n + q];
                    let new_rp = arp - s * (arq + tau * arp);
                    let new_rq = arq + s * (arp - tau * arq);
                    a[r * n + p] = new_rp;
                    a[p * n + r] = new_rp;
                    a[r * n + q] = new_rq;
                    a[q * n + r] = new_rq;
                }
                for r in 0..n {
                    let vrp = v[r * n + p];
                    let vrq = v[r * n + q];
                    v[r * n + p] = vrp - s * (vrq + tau * vrp);
                    v[r * n + q] = vrq + s * (vrp - tau * vrq);
                }
            }
        }
    }
    if !converged && off_norm(a, n) > tol {
        return Err(Error::Numerical(format!(
            "jacobi eigensolver did not converge after {sweeps} sweeps \
             (off-diagonal norm {:e}, tolerance {:e})",
            off_norm(a, n).to_f64().unwrap_or(f64::NAN),
            tol.to_f64().unwrap_or(f64::NAN),
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        a[i * n + i]
            .partial_cmp(&a[j * n + j])
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(i.cmp(&j))
    });
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let vectors = order
        .iter()
        .map(|&j| (0..n).map(|r| v[r * n + j]).collect())
        .collect();
    Ok(DenseEigen { values, vectors })
}

//! Graph Laplacian `L = D - W` with `D = diag(row sums of W)`, exposed
//! through matrix-vector actions of `L` and of the filter operator `D⁻¹W`.

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};
use crate::weights::WeightMatrix;

/// Relative row-sum tolerance below which the graph is degenerate.
const D_MIN_REL: f64 = 1e-12;
/// Absolute floor for the degeneracy tolerance.
const D_MIN_ABS: f64 = 1e-300;

/// The pair `(D, L)` for a weight matrix.
///
/// Row sums are accumulated in fixed ascending-column order, so
/// `L·ones = 0` holds exactly in floating point.
#[derive(Debug, Clone)]
pub struct GraphLaplacian<T> {
    w: WeightMatrix<T>,
    d: Vec<T>,
}

/// Computes row sums and validates that none is (near) zero.
pub fn build_laplacian<T: Scalar>(w: WeightMatrix<T>) -> Result<GraphLaplacian<T>> {
    let n = w.n();
    let d: Vec<T> = (0..n).map(|i| w.row_sum(i)).collect();
    let d_max = d.iter().fold(T::zero(), |m, &x| m.max(x.abs()));
    let tol = (cast::<T>(D_MIN_REL) * d_max).max(cast::<T>(D_MIN_ABS));
    if let Some(i) = d.iter().position(|&x| x.abs() <= tol) {
        return Err(Error::DegenerateGraph {
            index: i,
            value: d[i].to_f64().unwrap_or(f64::NAN),
            tolerance: tol.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(GraphLaplacian { w, d })
}

impl<T: Scalar> GraphLaplacian<T> {
    pub fn n(&self) -> usize {
        self.w.n()
    }

    pub fn weights(&self) -> &WeightMatrix<T> {
        &self.w
    }

    /// Diagonal of `D`.
    pub fn degrees(&self) -> &[T] {
        &self.d
    }

    /// `(D - W)·v` in one pass over the band structure.
    ///
    /// Computed in the edge-difference form `Σ_j w_ij (v_i - v_j)`, which
    /// annihilates constant vectors exactly in floating point (the
    /// diagonal term drops out identically).
    pub fn apply_l(&self, v: &[T]) -> Result<Vec<T>> {
        let n = self.n();
        if v.len() != n {
            return Err(Error::Usage(format!(
                "vector length {} does not match laplacian dimension {n}",
                v.len()
            )));
        }
        let b = self.w.stored_bands();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let lo = i.saturating_sub(b);
            let hi = (i + b).min(n - 1);
            let mut acc = T::zero();
            for j in lo..=hi {
                if j != i {
                    acc += self.w.get(i, j) * (v[i] - v[j]);
                }
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Filter operator `D⁻¹W·v`, evaluated as `v - D⁻¹(L·v)` so constant
    /// vectors are exact fixed points.
    pub fn apply_filter_operator(&self, v: &[T]) -> Result<Vec<T>> {
        let lv = self.apply_l(v)?;
        Ok(v.iter()
            .zip(lv.iter().zip(&self.d))
            .map(|(&vi, (&li, &di))| vi - li / di)
            .collect())
    }

    /// Max absolute row sum of `L`.
    pub fn l_inf_norm(&self) -> T {
        let n = self.n();
        let b = self.w.stored_bands();
        let mut norm = T::zero();
        for i in 0..n {
            let lo = i.saturating_sub(b);
            let hi = (i + b).min(n - 1);
            let mut acc = T::zero();
            for j in lo..=hi {
                let l_ij = if i == j {
                    self.d[i] - self.w.get(i, i)
                } else {
                    -self.w.get(i, j)
                };
                acc += l_ij.abs();
            }
            norm = norm.max(acc);
        }
        norm
    }

    /// Entry `L[i][j]`.
    pub fn l_entry(&self, i: usize, j: usize) -> T {
        if i == j {
            self.d[i] - self.w.get(i, i)
        } else {
            -self.w.get(i, j)
        }
    }

    /// Dense row-major copy of `L` for the eigensolver.
    pub(crate) fn dense_l(&self) -> Vec<T> {
        let n = self.n();
        let mut a = vec![T::zero(); n * n];
        for i in 0..n {
            let b = self.w.stored_bands();
            let lo = i.saturating_sub(b);
            let hi = (i + b).min(n - 1);
            for j in lo..=hi {
                a[i * n + j] = self.l_entry(i, j);
            }
        }
        a
    }

    /// Dense row-major copy of `D^{-1/2} W D^{-1/2}`; requires `d > 0`.
    pub(crate) fn dense_normalized_w(&self) -> Result<Vec<T>> {
        let n = self.n();
        if let Some(i) = self.d.iter().position(|&d| d <= T::zero()) {
            return Err(Error::Unsupported(format!(
                "generalized eigenproblem requires positive row sums, d[{i}] = {}",
                self.d[i]
            )));
        }
        let inv_sqrt: Vec<T> = self.d.iter().map(|&d| d.sqrt().recip()).collect();
        let mut a = vec![T::zero(); n * n];
        let b = self.w.stored_bands();
        for i in 0..n {
            let lo = i.saturating_sub(b);
            let hi = (i + b).min(n - 1);
            for j in lo..=hi {
                a[i * n + j] = inv_sqrt[i] * self.w.get(i, j) * inv_sqrt[j];
            }
        }
        Ok(a)
    }
}

//! Bilateral weight matrices on the 1D nearest-neighbor graph, with
//! optional signed per-edge overrides.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};
use crate::signal::Signal;

/// Parameters of the bilateral weight formula
/// `w_ij = exp(-(i-j)²/(2σ_d²)) · exp(-(y[i]-y[j])²/(2σ_r²))`.
///
/// The spatial factor can be switched off, in which case only the
/// intensity term remains.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeightParams<T> {
    pub sigma_d: T,
    pub sigma_r: T,
    pub radius: usize,
    pub spatial_term_enabled: bool,
}

impl<T: Scalar> WeightParams<T> {
    /// Nearest-neighbor weights with both factors enabled.
    pub fn new(sigma_d: T, sigma_r: T) -> Self {
        Self {
            sigma_d,
            sigma_r,
            radius: 1,
            spatial_term_enabled: true,
        }
    }

    pub fn without_spatial_term(mut self) -> Self {
        self.spatial_term_enabled = false;
        self
    }

    pub fn with_radius(mut self, radius: usize) -> Self {
        self.radius = radius;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_d.is_finite() && self.sigma_d > T::zero()) {
            return Err(Error::Config(format!("sigma_d must be > 0, got {}", self.sigma_d)));
        }
        if !(self.sigma_r.is_finite() && self.sigma_r > T::zero()) {
            return Err(Error::Config(format!("sigma_r must be > 0, got {}", self.sigma_r)));
        }
        if self.radius < 1 {
            return Err(Error::Config("radius must be >= 1".into()));
        }
        Ok(())
    }
}

/// Symmetric banded weight matrix.
///
/// `bands[k][i]` stores `w_{i,i+k}`; band 0 is the diagonal. Symmetry is
/// structural: `w_ij` and `w_ji` are the same stored entry.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix<T> {
    n: usize,
    radius: usize,
    bands: Vec<Vec<T>>,
}

impl<T: Scalar> WeightMatrix<T> {
    fn zeros(n: usize, radius: usize) -> Self {
        let stored = radius.min(n - 1);
        let bands = (0..=stored).map(|k| vec![T::zero(); n - k]).collect();
        Self { n, radius, bands }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Requested neighbor radius (bands beyond `n-1` are implicitly zero).
    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Number of stored off-diagonal bands.
    pub fn stored_bands(&self) -> usize {
        self.bands.len() - 1
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        assert!(i < self.n && j < self.n, "weight index out of range");
        let k = i.abs_diff(j);
        if k >= self.bands.len() {
            return T::zero();
        }
        self.bands[k][i.min(j)]
    }

    fn set(&mut self, i: usize, j: usize, w: T) {
        let k = i.abs_diff(j);
        self.bands[k][i.min(j)] = w;
    }

    /// Weight on the grid edge `(i, i+1)`.
    pub fn edge_weight(&self, i: usize) -> T {
        self.get(i, i + 1)
    }

    /// Row sum in fixed ascending-column order.
    pub fn row_sum(&self, i: usize) -> T {
        let lo = i.saturating_sub(self.stored_bands());
        let hi = (i + self.stored_bands()).min(self.n - 1);
        let mut acc = T::zero();
        for j in lo..=hi {
            acc += self.get(i, j);
        }
        acc
    }

    /// Max row sum of absolute values.
    pub fn inf_norm(&self) -> T {
        let mut norm = T::zero();
        for i in 0..self.n {
            let lo = i.saturating_sub(self.stored_bands());
            let hi = (i + self.stored_bands()).min(self.n - 1);
            let mut acc = T::zero();
            for j in lo..=hi {
                acc += self.get(i, j).abs();
            }
            norm = norm.max(acc);
        }
        norm
    }

    /// `W·v` in one pass over the band structure.
    pub fn multiply(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.n {
            return Err(Error::Usage(format!(
                "vector length {} does not match matrix dimension {}",
                v.len(),
                self.n
            )));
        }
        let b = self.stored_bands();
        let mut out = Vec::with_capacity(self.n);
        for i in 0..self.n {
            let lo = i.saturating_sub(b);
            let hi = (i + b).min(self.n - 1);
            let mut acc = T::zero();
            for j in lo..=hi {
                acc += self.get(i, j) * v[j];
            }
            out.push(acc);
        }
        Ok(out)
    }

    /// Upper-triangle entries (including the diagonal) in row-major order.
    pub fn upper_triangle(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |i| {
            let hi = (i + self.stored_bands()).min(self.n - 1);
            (i..=hi).map(move |j| (i, j, self.get(i, j)))
        })
    }
}

/// Override of one nearest-neighbor edge weight `w_{i,i+1} = w_{i+1,i}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NegativeOverride<T> {
    pub edge_index: usize,
    pub value: T,
}

impl<T: Scalar> NegativeOverride<T> {
    pub fn new(edge_index: usize, value: T) -> Self {
        Self { edge_index, value }
    }
}

/// Builds the bilateral weight matrix from a guide signal.
///
/// Entries are computed for `|i-j| <= radius` and are zero elsewhere. The
/// diagonal is exactly one.
pub fn bilateral_weights<T: Scalar>(
    guide: &Signal<T>,
    params: &WeightParams<T>,
) -> Result<WeightMatrix<T>> {
    params.validate()?;
    let n = guide.len();
    let mut w = WeightMatrix::zeros(n, params.radius);
    let two = cast::<T>(2.0);
    let inv_2d2 = (two * params.sigma_d * params.sigma_d).recip();
    let inv_2r2 = (two * params.sigma_r * params.sigma_r).recip();
    for k in 0..=w.stored_bands() {
        let spatial = if params.spatial_term_enabled && k > 0 {
            (-cast::<T>((k * k) as f64) * inv_2d2).exp()
        } else {
            T::one()
        };
        for i in 0..n - k {
            let dy = guide[i] - guide[i + k];
            let intensity = (-dy * dy * inv_2r2).exp();
            w.bands[k][i] = spatial * intensity;
        }
    }
    Ok(w)
}

/// Returns a copy of `w` with each listed edge weight replaced.
///
/// Overrides substitute the stored value; both `(i,i+1)` and `(i+1,i)`
/// refer to the same entry, so symmetry is preserved structurally.
pub fn apply_overrides<T: Scalar>(
    w: &WeightMatrix<T>,
    overrides: &[NegativeOverride<T>],
) -> Result<WeightMatrix<T>> {
    let mut seen: Vec<usize> = Vec::with_capacity(overrides.len());
    let mut out = w.clone();
    for ov in overrides {
        if ov.edge_index + 1 >= w.n() {
            return Err(Error::Config(format!(
                "override edge index {} out of range for n = {}",
                ov.edge_index,
                w.n()
            )));
        }
        if seen.contains(&ov.edge_index) {
            return Err(Error::Config(format!(
                "duplicate override for edge {}",
                ov.edge_index
            )));
        }
        if !ov.value.is_finite() {
            return Err(Error::Config(format!(
                "override value for edge {} is not finite",
                ov.edge_index
            )));
        }
        seen.push(ov.edge_index);
        out.set(ov.edge_index, ov.edge_index + 1, ov.value);
    }
    Ok(out)
}

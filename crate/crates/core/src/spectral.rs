//! Eigenpairs of the guiding Laplacian, analytic cosine reference modes,
//! and eigenmode diagnostics (flatness, localization).

mod jacobi;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laplacian::GraphLaplacian;
use crate::scalar::{cast, dot, inf_norm, Scalar};

/// Largest dimension accepted by the dense eigensolver.
pub const MAX_EIGEN_DIM: usize = 2000;

/// Residual and orthonormality bound enforced on every returned system,
/// relative to the operator norm.
const EIGEN_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scaling {
    EuclideanOrthonormal,
    DOrthonormal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EigenProblem {
    /// Eigenpairs of `L`, smallest eigenvalues first.
    StandardL,
    /// Pairs of `W v = mu D v`, largest `|mu|` first.
    GeneralizedWd,
}

/// A computed set of eigenpairs.
#[derive(Debug, Clone)]
pub struct EigenSystem<T> {
    eigenvalues: Vec<T>,
    eigenvectors: Vec<Vec<T>>,
    scaling: Scaling,
    problem: EigenProblem,
}

impl<T: Scalar> EigenSystem<T> {
    pub fn k(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn n(&self) -> usize {
        self.eigenvectors.first().map_or(0, Vec::len)
    }

    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    pub fn eigenvector(&self, mode: usize) -> &[T] {
        &self.eigenvectors[mode]
    }

    pub fn scaling(&self) -> Scaling {
        self.scaling
    }

    pub fn problem(&self) -> EigenProblem {
        self.problem
    }
}

fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::Usage("eigenmode count k must be >= 1".into()));
    }
    if k > n {
        return Err(Error::Usage(format!("k = {k} exceeds dimension n = {n}")));
    }
    if n > MAX_EIGEN_DIM {
        return Err(Error::Unsupported(format!(
            "dense eigensolver limited to n <= {MAX_EIGEN_DIM}, got {n}"
        )));
    }
    Ok(())
}

/// Deterministic sign convention: first component whose magnitude exceeds
/// `1e-8 * max|v|` is made positive.
fn fix_sign<T: Scalar>(v: &mut [T]) {
    let m = inf_norm(v);
    if m == T::zero() {
        return;
    }
    let tol = cast::<T>(1e-8) * m;
    if let Some(&lead) = v.iter().find(|x| x.abs() > tol) {
        if lead < T::zero() {
            for x in v.iter_mut() {
                *x = -*x;
            }
        }
    }
}

/// The `k` smallest-eigenvalue pairs of `L`, Euclidean-orthonormal.
pub fn eig_smallest<T: Scalar>(gl: &GraphLaplacian<T>, k: usize) -> Result<EigenSystem<T>> {
    let n = gl.n();
    check_k(k, n)?;
    let mut a = gl.dense_l();
    let eig = jacobi::sym_eigen(&mut a, n)?;
    let mut eigenvalues = Vec::with_capacity(k);
    let mut eigenvectors = Vec::with_capacity(k);
    for m in 0..k {
        eigenvalues.push(eig.values[m]);
        let mut v = eig.vectors[m].clone();
        fix_sign(&mut v);
        eigenvectors.push(v);
    }
    let es = EigenSystem {
        eigenvalues,
        eigenvectors,
        scaling: Scaling::EuclideanOrthonormal,
        problem: EigenProblem::StandardL,
    };
    validate_standard(gl, &es)?;
    Ok(es)
}

/// The `k` largest-`|mu|` pairs of `W v = mu D v`, `D`-orthonormal.
///
/// Solved through the symmetric reduction `D^{-1/2} W D^{-1/2}`, which
/// requires every row sum to be positive.
pub fn eig_generalized<T: Scalar>(gl: &GraphLaplacian<T>, k: usize) -> Result<EigenSystem<T>> {
    let n = gl.n();
    check_k(k, n)?;
    let mut b = gl.dense_normalized_w()?;
    let eig = jacobi::sym_eigen(&mut b, n)?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        let (a, b) = (eig.values[i], eig.values[j]);
        b.abs()
            .partial_cmp(&a.abs())
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(b.partial_cmp(&a).unwrap_or(std::cmp::Ordering::Equal))
            .then(i.cmp(&j))
    });
    let inv_sqrt_d: Vec<T> = gl.degrees().iter().map(|&d| d.sqrt().recip()).collect();
    let mut eigenvalues = Vec::with_capacity(k);
    let mut eigenvectors = Vec::with_capacity(k);
    for &idx in order.iter().take(k) {
        eigenvalues.push(eig.values[idx]);
        let mut v: Vec<T> = eig.vectors[idx]
            .iter()
            .zip(&inv_sqrt_d)
            .map(|(&u, &s)| u * s)
            .collect();
        fix_sign(&mut v);
        eigenvectors.push(v);
    }
    let es = EigenSystem {
        eigenvalues,
        eigenvectors,
        scaling: Scaling::DOrthonormal,
        problem: EigenProblem::GeneralizedWd,
    };
    validate_generalized(gl, &es)?;
    Ok(es)
}

fn validate_standard<T: Scalar>(gl: &GraphLaplacian<T>, es: &EigenSystem<T>) -> Result<()> {
    let tol = cast::<T>(EIGEN_TOL);
    let scale = gl.l_inf_norm().max(T::one() * T::epsilon());
    for m in 0..es.k() {
        let v = es.eigenvector(m);
        let lv = gl.apply_l(v)?;
        let lam = es.eigenvalues[m];
        let resid = lv
            .iter()
            .zip(v)
            .fold(T::zero(), |r, (&a, &b)| r.max((a - lam * b).abs()));
        if resid > tol * scale {
            return Err(Error::Numerical(format!(
                "eigenpair {m} residual {:e} exceeds {:e}",
                resid.to_f64().unwrap_or(f64::NAN),
                (tol * scale).to_f64().unwrap_or(f64::NAN)
            )));
        }
    }
    check_orthonormal(es, None)
}

fn validate_generalized<T: Scalar>(gl: &GraphLaplacian<T>, es: &EigenSystem<T>) -> Result<()> {
    let tol = cast::<T>(EIGEN_TOL);
    let scale = gl.weights().inf_norm().max(T::one() * T::epsilon());
    for m in 0..es.k() {
        let v = es.eigenvector(m);
        let wv = gl.weights().multiply(v)?;
        let mu = es.eigenvalues[m];
        let resid = wv
            .iter()
            .zip(v.iter().zip(gl.degrees()))
            .fold(T::zero(), |r, (&a, (&vi, &di))| {
                r.max((a - mu * di * vi).abs())
            });
        if resid > tol * scale {
            return Err(Error::Numerical(format!(
                "generalized eigenpair {m} residual {:e} exceeds {:e}",
                resid.to_f64().unwrap_or(f64::NAN),
                (tol * scale).to_f64().unwrap_or(f64::NAN)
            )));
        }
    }
    check_orthonormal(es, Some(gl.degrees()))
}

fn check_orthonormal<T: Scalar>(es: &EigenSystem<T>, d: Option<&[T]>) -> Result<()> {
    let tol = cast::<T>(EIGEN_TOL);
    for i in 0..es.k() {
        for j in i..es.k() {
            let g = match d {
                None => dot(es.eigenvector(i), es.eigenvector(j)),
                Some(d) => {
                    let weighted: Vec<T> = es
                        .eigenvector(j)
                        .iter()
                        .zip(d)
                        .map(|(&v, &di)| v * di)
                        .collect();
                    dot(es.eigenvector(i), &weighted)
                }
            };
            let target = if i == j { T::one() } else { T::zero() };
            if (g - target).abs() > tol {
                return Err(Error::Numerical(format!(
                    "eigenvectors {i},{j} not orthonormal: inner product {g}"
                )));
            }
        }
    }
    Ok(())
}

/// Unit-normalized cosine modes `u_m[i] = cos(pi m (i + 1/2) / n)` for
/// `m = 0..k-1`. These are the exact eigenvectors of the constant-guide
/// Laplacian with eigenvalues `2 - 2 cos(pi m / n)`.
pub fn dct_reference_modes<T: Scalar>(n: usize, k: usize) -> Result<Vec<Vec<T>>> {
    check_k(k, n)?;
    let pi = cast::<T>(std::f64::consts::PI);
    let nf = cast::<T>(n as f64);
    let half = cast::<T>(0.5);
    let mut modes = Vec::with_capacity(k);
    for m in 0..k {
        let mf = cast::<T>(m as f64);
        let mut u: Vec<T> = (0..n)
            .map(|i| (pi * mf * (cast::<T>(i as f64) + half) / nf).cos())
            .collect();
        let norm = dot(&u, &u).sqrt();
        for x in u.iter_mut() {
            *x = *x / norm;
        }
        modes.push(u);
    }
    Ok(modes)
}

/// Eigenvalue of the constant-guide Laplacian paired with cosine mode `m`.
pub fn dct_eigenvalue<T: Scalar>(n: usize, m: usize) -> T {
    let two = cast::<T>(2.0);
    let angle = cast::<T>(std::f64::consts::PI * m as f64 / n as f64);
    two - two * angle.cos()
}

/// Max absolute one-step difference over the `margin` differences
/// immediately left and right of the edge `(edge_index, edge_index + 1)`,
/// excluding the across-edge difference itself.
pub fn flatness_profile<T: Scalar>(
    v: &[T],
    edge_index: usize,
    margin: usize,
) -> Result<(T, T)> {
    if margin < 1 {
        return Err(Error::Usage("flatness margin must be >= 1".into()));
    }
    let n = v.len();
    if edge_index + 1 >= n {
        return Err(Error::Usage(format!(
            "edge index {edge_index} out of range for length {n}"
        )));
    }
    if edge_index < margin || edge_index + 1 + margin > n - 1 {
        return Err(Error::Usage(format!(
            "flatness window (edge {edge_index}, margin {margin}) out of bounds for length {n}"
        )));
    }
    let diff = |j: usize| (v[j + 1] - v[j]).abs();
    let left = (edge_index - margin..edge_index).fold(T::zero(), |m, j| m.max(diff(j)));
    let right = (edge_index + 1..=edge_index + margin).fold(T::zero(), |m, j| m.max(diff(j)));
    Ok((left, right))
}

/// Across-edge jump magnitude `|v[e+1] - v[e]|`.
pub fn across_edge_jump<T: Scalar>(v: &[T], edge_index: usize) -> T {
    (v[edge_index + 1] - v[edge_index]).abs()
}

/// Participation ratio `(Σv²)² / (n·Σv⁴)`, in `(0, 1]`; 1 for constant
/// vectors, `1/n` for a single spike.
pub fn localization_width<T: Scalar>(v: &[T]) -> Result<T> {
    let n = cast::<T>(v.len() as f64);
    let sum2 = v.iter().map(|&x| x * x).sum::<T>();
    if sum2 == T::zero() {
        return Err(Error::Usage("localization width undefined for zero vector".into()));
    }
    let sum4 = v.iter().map(|&x| x * x * x * x).sum::<T>();
    Ok(sum2 * sum2 / (n * sum4))
}

//! Signal containers, synthetic piecewise-constant generation, additive
//! Gaussian noise, and PSNR.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{cast, Scalar};

/// Identifier of the pseudo-random generator used by [`add_noise`],
/// recorded in experiment manifests for reproducibility.
pub const NOISE_GENERATOR: &str = "chacha8(seed_from_u64) + ziggurat standard normal";

/// A finite real-valued 1D signal on a uniform grid.
#[derive(Debug, Clone, PartialEq)]
pub struct Signal<T> {
    values: Vec<T>,
}

impl<T: Scalar> Signal<T> {
    /// Wraps raw samples. Requires at least two finite samples.
    pub fn new(values: Vec<T>) -> Result<Self> {
        if values.len() < 2 {
            return Err(Error::Config(format!(
                "signal length must be >= 2, got {}",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!("signal value at index {i} is not finite")));
        }
        Ok(Self { values })
    }

    /// Constant signal of length `n`.
    pub fn constant(n: usize, level: T) -> Result<Self> {
        Self::new(vec![level; n])
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn into_values(self) -> Vec<T> {
        self.values
    }

    pub fn min(&self) -> T {
        self.values.iter().fold(T::infinity(), |m, &v| m.min(v))
    }

    pub fn max(&self) -> T {
        self.values.iter().fold(T::neg_infinity(), |m, &v| m.max(v))
    }

    /// Dynamic range `max - min`.
    pub fn range(&self) -> T {
        self.max() - self.min()
    }

    pub fn mean(&self) -> T {
        self.values.iter().copied().sum::<T>() / cast(self.len() as f64)
    }

    pub fn variance(&self) -> T {
        let mu = self.mean();
        self.values
            .iter()
            .map(|&v| (v - mu) * (v - mu))
            .sum::<T>()
            / cast(self.len() as f64)
    }
}

impl<T> std::ops::Index<usize> for Signal<T> {
    type Output = T;
    fn index(&self, i: usize) -> &T {
        &self.values[i]
    }
}

/// Description of a piecewise-constant signal: each breakpoint is the
/// index where a new segment starts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PiecewiseConstantSpec<T> {
    pub n: usize,
    pub breakpoints: Vec<usize>,
    pub levels: Vec<T>,
}

impl<T: Scalar> PiecewiseConstantSpec<T> {
    pub fn new(n: usize, breakpoints: Vec<usize>, levels: Vec<T>) -> Self {
        Self { n, breakpoints, levels }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::Config(format!(
                "piecewise signal length must be >= 2, got {}",
                self.n
            )));
        }
        if self.levels.len() != self.breakpoints.len() + 1 {
            return Err(Error::Config(format!(
                "expected {} levels for {} breakpoints, got {}",
                self.breakpoints.len() + 1,
                self.breakpoints.len(),
                self.levels.len()
            )));
        }
        let mut prev = 0usize;
        for &b in &self.breakpoints {
            if b == 0 || b >= self.n {
                return Err(Error::Config(format!(
                    "breakpoint {b} outside interior of 0..{}",
                    self.n
                )));
            }
            if b <= prev {
                return Err(Error::Config(format!(
                    "breakpoints must be strictly increasing, {b} follows {prev}"
                )));
            }
            prev = b;
        }
        if let Some(i) = self.levels.iter().position(|v| !v.is_finite()) {
            return Err(Error::Config(format!("level {i} is not finite")));
        }
        Ok(())
    }

    /// Edge indices `(b-1, b)` where adjacent samples straddle a breakpoint.
    pub fn jump_edges(&self) -> Vec<usize> {
        self.breakpoints.iter().map(|&b| b - 1).collect()
    }
}

/// Additive Gaussian noise parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec<T> {
    pub sigma: T,
    pub seed: u64,
}

impl<T: Scalar> NoiseSpec<T> {
    pub fn new(sigma: T, seed: u64) -> Self {
        Self { sigma, seed }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.sigma.is_finite() || self.sigma < T::zero() {
            return Err(Error::Config(format!("noise sigma must be >= 0, got {}", self.sigma)));
        }
        Ok(())
    }

    /// Same noise spec with a different seed.
    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }
}

/// Realizes a piecewise-constant signal: `values[i]` takes the level of
/// the segment containing `i`.
pub fn generate_piecewise<T: Scalar>(spec: &PiecewiseConstantSpec<T>) -> Result<Signal<T>> {
    spec.validate()?;
    let mut values = Vec::with_capacity(spec.n);
    let mut seg = 0usize;
    for i in 0..spec.n {
        while seg < spec.breakpoints.len() && i >= spec.breakpoints[seg] {
            seg += 1;
        }
        values.push(spec.levels[seg]);
    }
    Signal::new(values)
}

/// Adds i.i.d. Gaussian noise drawn deterministically from the seed.
pub fn add_noise<T>(clean: &Signal<T>, noise: &NoiseSpec<T>) -> Result<Signal<T>>
where
    T: Scalar,
    StandardNormal: Distribution<T>,
{
    noise.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let values = clean
        .values()
        .iter()
        .map(|&v| {
            let e: T = StandardNormal.sample(&mut rng);
            v + noise.sigma * e
        })
        .collect();
    Signal::new(values)
}

/// Peak signal-to-noise ratio in decibels: `10·log10(R²/MSE)` with `R`
/// the dynamic range of the reference. Zero error reports `+inf`; a
/// zero-range reference is rejected.
pub fn psnr<T: Scalar>(reference: &Signal<T>, test: &Signal<T>) -> Result<T> {
    if reference.len() != test.len() {
        return Err(Error::Usage(format!(
            "psnr length mismatch: reference {} vs test {}",
            reference.len(),
            test.len()
        )));
    }
    let range = reference.range();
    if range == T::zero() {
        return Err(Error::Config(
            "psnr undefined: reference has zero dynamic range".into(),
        ));
    }
    let n = cast::<T>(reference.len() as f64);
    let mse = reference
        .values()
        .iter()
        .zip(test.values())
        .map(|(&a, &b)| (a - b) * (a - b))
        .sum::<T>()
        / n;
    if mse == T::zero() {
        return Ok(T::infinity());
    }
    Ok(cast::<T>(10.0) * (range * range / mse).log10())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_basic_segments() {
        let spec = PiecewiseConstantSpec::new(4, vec![2], vec![0.0f64, 1.0]);
        let s = generate_piecewise(&spec).unwrap();
        assert_eq!(s.values(), &[0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn piecewise_single_segment() {
        let spec = PiecewiseConstantSpec::new(3, vec![], vec![5.0]);
        let s = generate_piecewise(&spec).unwrap();
        assert_eq!(s.values(), &[5.0, 5.0, 5.0]);
    }

    #[test]
    fn piecewise_jump_count_matches_breakpoints() {
        let spec = PiecewiseConstantSpec::new(400, vec![100, 250, 350], vec![0.0, 1.0, 0.4, 1.2]);
        let s = generate_piecewise(&spec).unwrap();
        let jumps: Vec<usize> = (1..s.len()).filter(|&i| s[i] != s[i - 1]).collect();
        assert_eq!(jumps, vec![100, 250, 350]);
        assert_eq!(spec.jump_edges(), vec![99, 249, 349]);
    }

    #[test]
    fn piecewise_rejects_bad_specs() {
        let dec = PiecewiseConstantSpec::new(10, vec![5, 5], vec![0.0, 1.0, 2.0]);
        assert!(matches!(generate_piecewise(&dec), Err(Error::Config(_))));
        let out = PiecewiseConstantSpec::new(10, vec![10], vec![0.0, 1.0]);
        assert!(matches!(generate_piecewise(&out), Err(Error::Config(_))));
        let levels = PiecewiseConstantSpec::new(10, vec![5], vec![0.0]);
        assert!(matches!(generate_piecewise(&levels), Err(Error::Config(_))));
    }

    #[test]
    fn zero_sigma_is_identity() {
        let clean = Signal::new(vec![1.0, -2.0, 0.5]).unwrap();
        let noisy = add_noise(&clean, &NoiseSpec::new(0.0, 7)).unwrap();
        assert_eq!(noisy, clean);
    }

    #[test]
    fn noise_is_deterministic_per_seed() {
        let clean = Signal::constant(64, 0.0f64).unwrap();
        let spec = NoiseSpec::new(0.3, 42);
        let a = add_noise(&clean, &spec).unwrap();
        let b = add_noise(&clean, &spec).unwrap();
        assert_eq!(a, b);
        let c = add_noise(&clean, &spec.with_seed(43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn noise_sample_mean_is_small() {
        // law-of-large-numbers sanity: |mean| <= 4 sigma / sqrt(n)
        let n = 400;
        let sigma = 0.3;
        let clean = Signal::constant(n, 0.0f64).unwrap();
        let noisy = add_noise(&clean, &NoiseSpec::new(sigma, 12345)).unwrap();
        let mean = noisy.mean();
        assert!(
            mean.abs() <= 4.0 * sigma / (n as f64).sqrt(),
            "sample mean {mean} too large"
        );
    }

    #[test]
    fn psnr_zero_error_is_infinite() {
        let s = Signal::new(vec![0.0, 1.0]).unwrap();
        assert_eq!(psnr(&s, &s).unwrap(), f64::INFINITY);
    }

    #[test]
    fn psnr_direct_formula() {
        // R = 1, MSE = 0.5 -> 10 log10(2)
        let r = Signal::new(vec![0.0f64, 1.0]).unwrap();
        let t = Signal::new(vec![0.0f64, 0.0]).unwrap();
        let got = psnr(&r, &t).unwrap();
        assert!((got - 10.0 * 2.0f64.log10()).abs() < 1e-12, "got {got}");
    }

    #[test]
    fn psnr_scale_invariant() {
        let r = Signal::new(vec![0.0f64, 1.0, 0.25, 0.75]).unwrap();
        let t = Signal::new(vec![0.1f64, 0.9, 0.30, 0.70]).unwrap();
        let r2 = Signal::new(r.values().iter().map(|v| v * 2.0).collect()).unwrap();
        let t2 = Signal::new(t.values().iter().map(|v| v * 2.0).collect()).unwrap();
        let a = psnr(&r, &t).unwrap();
        let b = psnr(&r2, &t2).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn psnr_symmetric_in_error_sign() {
        let r = Signal::new(vec![0.0f64, 1.0, 0.5]).unwrap();
        let up = Signal::new(vec![0.2f64, 1.2, 0.7]).unwrap();
        let dn = Signal::new(vec![-0.2f64, 0.8, 0.3]).unwrap();
        assert!((psnr(&r, &up).unwrap() - psnr(&r, &dn).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn psnr_zero_range_rejected() {
        let r = Signal::constant(4, 3.0f64).unwrap();
        let t = Signal::constant(4, 3.0f64).unwrap();
        assert!(matches!(psnr(&r, &t), Err(Error::Config(_))));
    }

    #[test]
    fn signal_rejects_short_and_nonfinite() {
        assert!(Signal::new(vec![1.0f64]).is_err());
        assert!(Signal::new(vec![1.0, f64::NAN]).is_err());
        assert!(Signal::new(vec![1.0, f64::INFINITY]).is_err());
    }
}

//! The three denoising filters: iterated power-method filter, self-guided
//! bilateral iteration, and the conjugate-gradient guided filter.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::laplacian::{build_laplacian, GraphLaplacian};
use crate::scalar::{cast, dot, Scalar};
use crate::signal::Signal;
use crate::weights::{apply_overrides, bilateral_weights, NegativeOverride, WeightParams};

/// Breakdown threshold for the CG scalar products.
const CG_BREAKDOWN: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FilterMethod {
    Power,
    SelfGuidedBf,
    CgGuided,
}

impl FilterMethod {
    pub fn name(&self) -> &'static str {
        match self {
            FilterMethod::Power => "power",
            FilterMethod::SelfGuidedBf => "self_guided_bf",
            FilterMethod::CgGuided => "cg_guided",
        }
    }
}

/// One filter run: method, iteration count, and the weight construction
/// it uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilterConfig<T> {
    pub method: FilterMethod,
    pub iterations: usize,
    pub weight_params: WeightParams<T>,
    #[serde(default = "Vec::new")]
    pub overrides: Vec<NegativeOverride<T>>,
}

impl<T: Scalar> FilterConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::Config("iteration count m must be >= 1".into()));
        }
        self.weight_params.validate()
    }
}

fn ensure_finite<T: Scalar>(v: &[T], context: &str) -> Result<()> {
    if let Some(i) = v.iter().position(|x| !x.is_finite()) {
        return Err(Error::Numerical(format!(
            "{context}: non-finite value at index {i}"
        )));
    }
    Ok(())
}

/// Applies the filter operator `D⁻¹W` of a fixed guide Laplacian `m`
/// times (never by forming a matrix power).
pub fn power_filter<T: Scalar>(
    gl: &GraphLaplacian<T>,
    x0: &Signal<T>,
    m: usize,
) -> Result<Signal<T>> {
    if m == 0 {
        return Err(Error::Usage("power filter requires m >= 1".into()));
    }
    let mut x = x0.values().to_vec();
    for step in 0..m {
        x = gl.apply_filter_operator(&x)?;
        ensure_finite(&x, &format!("power filter iteration {step}"))?;
    }
    Signal::new(x)
}

/// Self-guided bilateral iteration: weights and Laplacian are rebuilt
/// from the current iterate on every step. Overrides, when given, are
/// re-applied after every rebuild.
pub fn self_guided_bf<T: Scalar>(
    x0: &Signal<T>,
    params: &WeightParams<T>,
    m: usize,
    overrides: Option<&[NegativeOverride<T>]>,
) -> Result<Signal<T>> {
    if m == 0 {
        return Err(Error::Usage("self-guided BF requires m >= 1".into()));
    }
    params.validate()?;
    let mut x = x0.clone();
    for step in 0..m {
        let mut w = bilateral_weights(&x, params)?;
        if let Some(ovs) = overrides {
            w = apply_overrides(&w, ovs)?;
        }
        let gl = build_laplacian(w).map_err(|e| {
            Error::Numerical(format!("self-guided BF iteration {step}: {e}"))
        })?;
        let next = gl.apply_filter_operator(x.values())?;
        ensure_finite(&next, &format!("self-guided BF iteration {step}"))?;
        x = Signal::new(next)?;
    }
    Ok(x)
}

/// Why a CG run stopped before completing its configured iterations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum CgBreakdown {
    /// `(s_k, r_k)` vanished; the residual is (numerically) zero.
    ResidualProductVanished { iteration: usize },
    /// `(p_k, q_k)` vanished; the search direction has no curvature.
    CurvatureVanished { iteration: usize },
}

/// Result of the CG guided filter: the filtered signal plus an optional
/// breakdown marker when the iteration terminated early.
#[derive(Debug, Clone, PartialEq)]
pub struct CgOutcome<T> {
    pub output: Signal<T>,
    pub breakdown: Option<CgBreakdown>,
}

/// Conjugate-gradient guided filter with diagonal preconditioner `D`.
///
/// Starting from the input signal, runs `m` steps of preconditioned CG
/// on the guide Laplacian:
/// `r_0 = -L x_0`; per step `s_k = D⁻¹ r_k`, `p_k = s_k + beta_k p_{k-1}`,
/// `q_k = L p_k`, `alpha_k = (s_k,r_k)/(p_k,q_k)`, then `x` and `r`
/// updates. With negative overrides `L` may be indefinite; the iteration
/// is still executed verbatim and vanishing scalar products terminate
/// early instead of dividing toward NaN.
pub fn cg_guided_filter<T: Scalar>(
    gl: &GraphLaplacian<T>,
    x0: &Signal<T>,
    m: usize,
) -> Result<CgOutcome<T>> {
    if m == 0 {
        return Err(Error::Usage("CG guided filter requires m >= 1".into()));
    }
    let breakdown_tol = cast::<T>(CG_BREAKDOWN);
    let mut x = x0.values().to_vec();
    let mut r: Vec<T> = gl.apply_l(&x)?.iter().map(|&v| -v).collect();
    let mut p: Vec<T> = Vec::new();
    let mut sr_prev = T::zero();
    for k in 0..m {
        let s: Vec<T> = r.iter().zip(gl.degrees()).map(|(&ri, &di)| ri / di).collect();
        let sr = dot(&s, &r);
        if sr.abs() <= breakdown_tol {
            return Ok(CgOutcome {
                output: Signal::new(x)?,
                breakdown: Some(CgBreakdown::ResidualProductVanished { iteration: k }),
            });
        }
        if k == 0 {
            p = s;
        } else {
            let beta = sr / sr_prev;
            for (pi, &si) in p.iter_mut().zip(&s) {
                *pi = si + beta * *pi;
            }
        }
        let q = gl.apply_l(&p)?;
        let pq = dot(&p, &q);
        if pq.abs() <= breakdown_tol {
            return Ok(CgOutcome {
                output: Signal::new(x)?,
                breakdown: Some(CgBreakdown::CurvatureVanished { iteration: k }),
            });
        }
        let alpha = sr / pq;
        for (xi, &pi) in x.iter_mut().zip(&p) {
            *xi = *xi + alpha * pi;
        }
        for (ri, &qi) in r.iter_mut().zip(&q) {
            *ri = *ri - alpha * qi;
        }
        ensure_finite(&x, &format!("CG guided filter iteration {k}"))?;
        ensure_finite(&r, &format!("CG guided filter iteration {k}"))?;
        sr_prev = sr;
    }
    Ok(CgOutcome {
        output: Signal::new(x)?,
        breakdown: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{add_noise, generate_piecewise, NoiseSpec, PiecewiseConstantSpec};

    fn guide_laplacian(guide: &Signal<f64>, params: &WeightParams<f64>) -> GraphLaplacian<f64> {
        build_laplacian(bilateral_weights(guide, params).unwrap()).unwrap()
    }

    #[test]
    fn all_filters_fix_constants() {
        let params = WeightParams::new(0.5, 0.1);
        let x0 = Signal::constant(20, 4.2).unwrap();
        let gl = guide_laplacian(&x0, &params);

        let p = power_filter(&gl, &x0, 7).unwrap();
        let b = self_guided_bf(&x0, &params, 7, None).unwrap();
        let cg = cg_guided_filter(&gl, &x0, 7).unwrap();
        for i in 0..20 {
            assert!((p[i] - 4.2).abs() < 1e-12);
            assert!((b[i] - 4.2).abs() < 1e-12);
            assert_eq!(cg.output[i], 4.2);
        }
        // constant input: r0 = 0 exactly, so CG reports immediate breakdown
        assert_eq!(
            cg.breakdown,
            Some(CgBreakdown::ResidualProductVanished { iteration: 0 })
        );
    }

    #[test]
    fn power_filter_single_step_is_filter_operator() {
        let guide = Signal::new(vec![0.0, 0.3, 0.1, 0.7, 0.2]).unwrap();
        let params = WeightParams::new(0.5, 0.2);
        let gl = guide_laplacian(&guide, &params);
        let x0 = Signal::new(vec![1.0, -1.0, 2.0, 0.0, 0.5]).unwrap();
        let one = power_filter(&gl, &x0, 1).unwrap();
        let direct = gl.apply_filter_operator(x0.values()).unwrap();
        assert_eq!(one.values(), &direct[..]);
    }

    #[test]
    fn self_guided_first_step_matches_power_filter() {
        let spec = PiecewiseConstantSpec::new(30, vec![15], vec![0.0, 1.0]);
        let clean = generate_piecewise(&spec).unwrap();
        let x0 = add_noise(&clean, &NoiseSpec::new(0.2, 9)).unwrap();
        let params = WeightParams::new(0.5, 0.1);
        let bf1 = self_guided_bf(&x0, &params, 1, None).unwrap();
        let gl = guide_laplacian(&x0, &params);
        let pw1 = power_filter(&gl, &x0, 1).unwrap();
        assert_eq!(bf1, pw1);
    }

    #[test]
    fn self_guided_bf_smooths_noise() {
        let spec = PiecewiseConstantSpec::new(120, vec![60], vec![0.0, 1.0]);
        let clean = generate_piecewise(&spec).unwrap();
        let noisy = add_noise(&clean, &NoiseSpec::new(0.3, 31)).unwrap();
        let out = self_guided_bf(&noisy, &WeightParams::new(0.5, 0.1), 100, None).unwrap();
        assert!(
            out.variance() < noisy.variance(),
            "variance did not decrease: {} vs {}",
            out.variance(),
            noisy.variance()
        );
    }

    #[test]
    fn linearity_of_fixed_guide_filters() {
        let guide = Signal::new(vec![0.1, 0.9, 0.4, 0.6, 0.2, 0.8, 0.3]).unwrap();
        let params = WeightParams::new(0.5, 0.3);
        let gl = guide_laplacian(&guide, &params);
        let x = Signal::new(vec![1.0, 0.0, -2.0, 3.0, 0.5, -0.5, 1.5]).unwrap();
        let y = Signal::new(vec![0.2, 1.4, 0.1, -0.3, 2.0, 0.8, -1.0]).unwrap();
        let (a, b) = (2.5, -1.25);
        let combo = Signal::new(
            x.values()
                .iter()
                .zip(y.values())
                .map(|(&xi, &yi)| a * xi + b * yi)
                .collect(),
        )
        .unwrap();
        for m in [1usize, 4] {
            let fx = power_filter(&gl, &x, m).unwrap();
            let fy = power_filter(&gl, &y, m).unwrap();
            let fc = power_filter(&gl, &combo, m).unwrap();
            for i in 0..7 {
                assert!((fc[i] - (a * fx[i] + b * fy[i])).abs() < 1e-10, "power m={m}");
            }
        }
        // CG is linear in x0 only once converged (the step sizes are
        // Rayleigh-quotient ratios); at m = n it is the exact projector.
        let m = 7;
        let cx = cg_guided_filter(&gl, &x, m).unwrap().output;
        let cy = cg_guided_filter(&gl, &y, m).unwrap().output;
        let cc = cg_guided_filter(&gl, &combo, m).unwrap().output;
        for i in 0..7 {
            assert!((cc[i] - (a * cx[i] + b * cy[i])).abs() < 1e-10, "cg m={m}");
        }
    }

    #[test]
    fn cg_single_step_hand_computed() {
        // 3-point constant guide, no spatial term: W all ones, d = (2,3,2),
        // L rows: (1,-1,0), (-1,2,-1), (0,-1,1). x0 = (1,0,0).
        let guide = Signal::constant(3, 0.0).unwrap();
        let params = WeightParams::new(0.5, 0.1).without_spatial_term();
        let gl = guide_laplacian(&guide, &params);
        let x0 = Signal::new(vec![1.0, 0.0, 0.0]).unwrap();
        // r0 = -L x0 = (-1, 1, 0); s0 = (-1/2, 1/3, 0); p0 = s0
        // (s0,r0) = 1/2 + 1/3 = 5/6
        // q0 = L p0 = (-5/6, 7/6, -1/3)
        // (p0,q0) = 5/12 + 7/18 + 0 = 29/36
        // alpha0 = (5/6)/(29/36) = 30/29
        // x1 = x0 + alpha0 p0 = (1 - 15/29, 10/29, 0) = (14/29, 10/29, 0)
        let got = cg_guided_filter(&gl, &x0, 1).unwrap();
        assert!(got.breakdown.is_none());
        let expect = [14.0 / 29.0, 10.0 / 29.0, 0.0];
        for i in 0..3 {
            assert!(
                (got.output[i] - expect[i]).abs() < 1e-14,
                "component {i}: {} vs {}",
                got.output[i],
                expect[i]
            );
        }
    }

    #[test]
    fn cg_residual_drops_and_orthogonality_holds() {
        let guide = Signal::new((0..24).map(|i| (i as f64 * 0.37).sin()).collect()).unwrap();
        let params = WeightParams::new(0.5, 0.4);
        let gl = guide_laplacian(&guide, &params);
        let x0 = Signal::new((0..24).map(|i| ((i * 11 + 3) % 7) as f64).collect()).unwrap();
        let n = 24;

        // replicate the recurrence to observe residuals
        let mut x = x0.values().to_vec();
        let mut r: Vec<f64> = gl.apply_l(&x).unwrap().iter().map(|v| -v).collect();
        let r0_norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        let mut p: Vec<f64> = Vec::new();
        let mut s_prev: Vec<f64> = Vec::new();
        let mut sr_prev = 0.0;
        for k in 0..n {
            let s: Vec<f64> = r.iter().zip(gl.degrees()).map(|(ri, di)| ri / di).collect();
            let sr: f64 = s.iter().zip(&r).map(|(a, b)| a * b).sum();
            if sr.abs() < 1e-28 {
                break;
            }
            if k == 0 {
                p = s.clone();
            } else {
                let beta = sr / sr_prev;
                for (pi, si) in p.iter_mut().zip(&s) {
                    *pi = si + beta * *pi;
                }
            }
            let q = gl.apply_l(&p).unwrap();
            let pq: f64 = p.iter().zip(&q).map(|(a, b)| a * b).sum();
            let alpha = sr / pq;
            for (xi, pi) in x.iter_mut().zip(&p) {
                *xi += alpha * pi;
            }
            for (ri, qi) in r.iter_mut().zip(&q) {
                *ri -= alpha * qi;
            }
            if k >= 1 {
                let s_norm = s_prev.iter().map(|v| v * v).sum::<f64>().sqrt();
                let cross: f64 = r.iter().zip(&s_prev).map(|(a, b)| a * b).sum();
                assert!(
                    cross.abs() <= 1e-10 * r0_norm * s_norm.max(1.0),
                    "iteration {k}: lost orthogonality {cross}"
                );
            }
            s_prev = s;
            sr_prev = sr;
        }
        let r_final = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        assert!(r_final <= 1e-8 * r0_norm, "residual {r_final} vs {r0_norm}");

        // and the black-box filter agrees with the replica
        let out = cg_guided_filter(&gl, &x0, n).unwrap();
        for i in 0..n {
            assert!((out.output[i] - x[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_iterations_rejected() {
        let x0 = Signal::constant(4, 1.0).unwrap();
        let params = WeightParams::new(0.5, 0.1);
        let gl = guide_laplacian(&x0, &params);
        assert!(matches!(power_filter(&gl, &x0, 0), Err(Error::Usage(_))));
        assert!(matches!(
            self_guided_bf(&x0, &params, 0, None),
            Err(Error::Usage(_))
        ));
        assert!(matches!(cg_guided_filter(&gl, &x0, 0), Err(Error::Usage(_))));
    }

    #[test]
    fn filter_config_validation() {
        let ok = FilterConfig {
            method: FilterMethod::CgGuided,
            iterations: 15,
            weight_params: WeightParams::new(0.5, 0.1),
            overrides: vec![],
        };
        assert!(ok.validate().is_ok());
        let bad = FilterConfig { iterations: 0, ..ok };
        assert!(bad.validate().is_err());
    }
}

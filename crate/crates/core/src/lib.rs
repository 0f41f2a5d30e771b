//! Guided graph-Laplacian filtering of 1D signals.
//!
//! The building blocks: bilateral weight matrices computed from a guide
//! signal (optionally with negative per-edge overrides), the graph
//! Laplacian `L = D - W` and its normalized filter operator `D⁻¹W`,
//! dense symmetric eigensolvers for spectral diagnostics, and three
//! denoising filters (iterated power filter, self-guided bilateral
//! iteration, and a conjugate-gradient guided filter).
//!
//! All numerics are generic over the scalar type through [`Scalar`];
//! `f64` aliases are exported at the crate root.

pub mod error;
pub mod filters;
pub mod io;
pub mod laplacian;
pub mod scalar;
pub mod signal;
pub mod spectral;
pub mod weights;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use filters::{cg_guided_filter, power_filter, self_guided_bf};
pub use filters::{CgBreakdown, CgOutcome, FilterConfig, FilterMethod};
pub use laplacian::{build_laplacian, GraphLaplacian};
pub use signal::{add_noise, generate_piecewise, psnr};
pub use signal::{NoiseSpec, PiecewiseConstantSpec, Signal};
pub use spectral::{
    dct_reference_modes, eig_generalized, eig_smallest, flatness_profile, localization_width,
    EigenProblem, EigenSystem, Scaling,
};
pub use weights::{apply_overrides, bilateral_weights};
pub use weights::{NegativeOverride, WeightMatrix, WeightParams};

/// Concrete `f64` aliases for the main domain types.
pub type Signal64 = Signal<f64>;
pub type PiecewiseConstantSpec64 = PiecewiseConstantSpec<f64>;
pub type NoiseSpec64 = NoiseSpec<f64>;
pub type WeightParams64 = WeightParams<f64>;
pub type WeightMatrix64 = WeightMatrix<f64>;
pub type NegativeOverride64 = NegativeOverride<f64>;
pub type GraphLaplacian64 = GraphLaplacian<f64>;
pub type EigenSystem64 = EigenSystem<f64>;
pub type FilterConfig64 = FilterConfig<f64>;

/// Concrete `f32` aliases.
pub type Signal32 = Signal<f32>;
pub type WeightMatrix32 = WeightMatrix<f32>;
pub type GraphLaplacian32 = GraphLaplacian<f32>;

//! Numerics for the Riemann-Liouville time-fractional diffusion-wave equation
//!
//! ```text
//! D^α_{0+} u = Δu   in (0,T) × Ω,   u = 0 on ∂Ω,
//! D^{α-1}_{0+} u(0) = u₁,   I^{2-α}_{0+} u(0) = u₂,        1 < α < 2
//! ```
//!
//! on intervals and rectangles, solved in the Dirichlet eigenbasis with
//! Mittag-Leffler modal factors.
//!
//! | module              | contents                                                    |
//! |---------------------|-------------------------------------------------------------|
//! | [`mittag_leffler`]  | Γ, E_{α,β} on the real line, bound and identity checks       |
//! | [`fractional_ops`]  | time grids, product-trapezoid I^β, RL and Caputo derivatives |
//! | [`spectral_domain`] | eigenpairs, projection, synthesis, graded norms              |
//! | [`rl_solver`]       | series solution and its fractional derivatives               |
//! | [`trace_duality`]   | normal traces, exponent windows, Rellich and duality checks  |
//! | [`sampling`]        | seeded random modal data                                     |
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the aliases at the
//! crate root fix the scalar to `f64`.

// `!(x > y)` is the NaN-rejecting form used throughout for parameter checks.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod fractional_ops;
pub mod mittag_leffler;
pub mod real;
pub mod rl_solver;
pub mod sampling;
pub mod spectral_domain;
pub mod trace_duality;

pub use error::{Error, Result};
pub use real::Real;

/// `f64` instantiations of the main data types.
pub type MlParams = mittag_leffler::MlParams<f64>;
pub type MlResult = mittag_leffler::MlResult<f64>;
pub type TimeGrid = fractional_ops::TimeGrid<f64>;
pub type SampledFunction = fractional_ops::SampledFunction<f64>;
pub type DomainSpec = spectral_domain::DomainSpec<f64>;
pub type ModalData = spectral_domain::ModalData<f64>;
pub type SpatialGrid = spectral_domain::SpatialGrid<f64>;
pub type SeriesSolution = rl_solver::SeriesSolution<f64>;
pub type FieldSnapshot = rl_solver::FieldSnapshot<f64>;
pub type ExponentWindow = trace_duality::ExponentWindow<f64>;
pub type TraceSeries = trace_duality::TraceSeries<f64>;
pub type DataSampler = sampling::DataSampler<f64>;

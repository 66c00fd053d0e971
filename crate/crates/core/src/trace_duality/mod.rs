//! Boundary traces, exponent windows and the trace/duality checks.
//!
//! For `3/2 < α < 2` the data regularity `u₁, ∇u₂ ∈ D((−Δ)^μ)` controls
//! `∇u` in `L²(0,T; D((−Δ)^θ))` for `θ ∈ (μ, (2α−3)/(2α) + μ)` and `D^αu` in
//! `L²(0,T; D((−Δ)^{−θ}))` for `θ ∈ ((3−α)/(2α) − μ, 1/2 − μ)`. A common θ
//! exists exactly when `3(2−α)/(4α) < μ < 1/4`, and then the normal
//! derivative `∂_ν u` is square integrable on `(0,T) × ∂Ω`.
//!
//! This module measures those quantities on finite-mode solutions:
//!
//! * [`admissible_intervals`] and [`xi_sweep`]: the interval arithmetic.
//! * [`normal_trace`], [`trace_series`], [`trace_energy`]: `∂_ν u` and its energy.
//! * [`regularity_ratio`]: the two norm ratios.
//! * [`rellich_residual`]: both sides of the boundary identity obtained by
//!   testing the equation with `h·∇u`.
//! * [`adjoint_solve`], [`caputo_fd_solve`], [`duality_check`]: the backward
//!   problem and the pairing of its trace with a boundary-driven Caputo problem.

mod duality;
mod regularity;
mod rellich;
mod trace;
mod windows;

#[cfg(test)]
mod tests;

pub use duality::{
    adjoint_solve, caputo_fd_solve, duality_check, solve_fd, DualityReport, FdProblem, FdTerminal,
    ReversibleSeries,
};
pub use regularity::{
    divergence_indicator, envelope_exponents, regularity_ratio, RegularityNorm, RegularityRatio,
};
pub use rellich::{rellich_residual, RellichReport, VectorFieldH, RELLICH_THETA};
pub use trace::{
    boundary_nodes, normal_trace, trace_energy, trace_ratio, trace_series, BoundaryNode,
    TraceSeries,
};
pub use windows::{
    admissible_intervals, dalpha_interval, exponent_window, mu_range, nabla_interval, xi_sweep,
    Admissible, ExponentWindow, XiSample,
};

use crate::fractional_ops::TimeGrid;
use crate::{Error, Real, Result};

/// Exponents above which the trace and regularity features are defined.
pub(crate) fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::lit(1.5) && alpha < T::lit(2.0) {
        Ok(())
    } else {
        Err(Error::param("alpha", alpha, "must lie in (3/2, 2)"))
    }
}

/// `∫₀ᵀ f dt` from samples `f(t₁), …, f(t_M)` on `grid` (the value at 0 is
/// not used). The first cell assumes `f ≈ f(t₁)(t/t₁)^p`; the rest is the
/// trapezoid rule.
pub(crate) fn singular_integral<T: Real>(points: &[T], values: &[T], p: T) -> T {
    debug_assert_eq!(points.len(), values.len());
    let half = T::lit(0.5);
    let mut acc = values[1] * points[1] / (p + T::one());
    for j in 1..points.len() - 1 {
        acc += half * (points[j + 1] - points[j]) * (values[j] + values[j + 1]);
    }
    acc
}

/// [`singular_integral`] on `grid` and on every other point of it; fails with
/// `UnderResolved` when the two differ by more than 10%.
pub(crate) fn checked_integral<T: Real>(
    what: &str,
    grid: &TimeGrid<T>,
    values: &[T],
    p: T,
) -> Result<T> {
    let points = grid.points();
    let fine = singular_integral(points, values, p);
    if let Some(coarse) = grid.coarsen() {
        let cv: Vec<T> = values.iter().step_by(2).copied().collect();
        let coarse = singular_integral(coarse.points(), &cv, p);
        let scale = fine.abs().max(coarse.abs());
        if scale > T::zero() && (fine - coarse).abs() > T::lit(0.1) * scale {
            return Err(Error::UnderResolved(format!(
                "{what}: {coarse} on the half grid vs {fine} (M = {})",
                grid.steps()
            )));
        }
    }
    Ok(fine)
}

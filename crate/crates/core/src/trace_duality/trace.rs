use super::{check_alpha, checked_integral};
use crate::fractional_ops::TimeGrid;
use crate::rl_solver::SeriesSolution;
use crate::sampling::data_norm;
use crate::spectral_domain::{simpson_weights, DomainKind, DomainSpec};
use crate::{Real, Result};

/// A boundary quadrature node with its outward unit normal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryNode<T> {
    pub x: T,
    pub y: T,
    pub normal: (T, T),
    /// Arc-length weight; 1 for the two endpoints of an interval.
    pub weight: T,
}

/// Sampled `∂_ν u` at [`BoundaryNode`]s; `values[j][i]` is node `i` at `times[j]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceSeries<T> {
    pub nodes: Vec<BoundaryNode<T>>,
    pub times: Vec<T>,
    pub values: Vec<Vec<T>>,
}

impl<T: Real> TraceSeries<T> {
    /// `∫_{∂Ω} |∂_ν u(t)|² dσ` for every row.
    pub fn energy_density(&self) -> Vec<T> {
        self.values
            .iter()
            .map(|row| density(&self.nodes, row))
            .collect()
    }
}

fn density<T: Real>(nodes: &[BoundaryNode<T>], row: &[T]) -> T {
    nodes.iter().zip(row).map(|(n, &g)| n.weight * g * g).sum()
}

/// The two endpoints of an interval, or Simpson nodes along the four edges of
/// a rectangle (corners appear on both adjacent edges).
pub fn boundary_nodes<T: Real>(domain: &DomainSpec<T>) -> Vec<BoundaryNode<T>> {
    let (zero, one) = (T::zero(), T::one());
    match domain.kind() {
        DomainKind::Interval { length } => vec![
            BoundaryNode {
                x: zero,
                y: zero,
                normal: (-one, zero),
                weight: one,
            },
            BoundaryNode {
                x: length,
                y: zero,
                normal: (one, zero),
                weight: one,
            },
        ],
        DomainKind::Rectangle { lx, ly } => {
            let (imax, jmax) = domain.max_axis_index();
            let edge = |len: T, top: usize| -> (Vec<T>, Vec<T>) {
                let cells = (8 * top).max(32);
                let s: Vec<T> = (0..=cells)
                    .map(|i| len * T::from_index(i) / T::from_index(cells))
                    .collect();
                let w = simpson_weights(&s);
                (s, w)
            };
            let (xs, wx) = edge(lx, imax);
            let (ys, wy) = edge(ly, jmax);
            let mut nodes = Vec::with_capacity(2 * (xs.len() + ys.len()));
            for (y, ny) in [(zero, -one), (ly, one)] {
                nodes.extend(xs.iter().zip(&wx).map(|(&x, &w)| BoundaryNode {
                    x,
                    y,
                    normal: (zero, ny),
                    weight: w,
                }));
            }
            for (x, nx) in [(zero, -one), (lx, one)] {
                nodes.extend(ys.iter().zip(&wy).map(|(&y, &w)| BoundaryNode {
                    x,
                    y,
                    normal: (nx, zero),
                    weight: w,
                }));
            }
            nodes
        }
    }
}

/// `∂_ν e_k` at every node: `rows[i][k]`.
pub(crate) fn trace_matrix<T: Real>(
    domain: &DomainSpec<T>,
    nodes: &[BoundaryNode<T>],
) -> Vec<Vec<T>> {
    nodes
        .iter()
        .map(|n| {
            (0..domain.n_modes())
                .map(|k| {
                    let (gx, gy) = domain.grad_mode(k, n.x, n.y);
                    gx * n.normal.0 + gy * n.normal.1
                })
                .collect()
        })
        .collect()
}

pub(crate) fn apply<T: Real>(matrix: &[Vec<T>], modal: &[T]) -> Vec<T> {
    matrix
        .iter()
        .map(|row| row.iter().zip(modal).map(|(&a, &b)| a * b).sum())
        .collect()
}

/// `∂_ν u(t, ·)` at [`boundary_nodes`].
pub fn normal_trace<T: Real>(sol: &SeriesSolution<T>, t: T) -> Result<Vec<T>> {
    let nodes = boundary_nodes(sol.domain());
    let m = trace_matrix(sol.domain(), &nodes);
    Ok(apply(&m, &sol.modal_values(t)?))
}

/// [`normal_trace`] at every grid time `t > 0`.
pub fn trace_series<T: Real>(
    sol: &SeriesSolution<T>,
    grid: &TimeGrid<T>,
) -> Result<TraceSeries<T>> {
    let nodes = boundary_nodes(sol.domain());
    let m = trace_matrix(sol.domain(), &nodes);
    let times: Vec<T> = grid
        .points()
        .iter()
        .copied()
        .filter(|&t| t > T::zero())
        .collect();
    let values = times
        .iter()
        .map(|&t| Ok(apply(&m, &sol.modal_values(t)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(TraceSeries {
        nodes,
        times,
        values,
    })
}

/// `∫₀ᵀ ∫_{∂Ω} |∂_ν u|² dσ dt` with `T` the horizon of `grid`.
///
/// Trapezoid rule in time; on `(0, t₁)` the density is taken as a power law
/// with the exponent of the leading term, `2α−4` (or `2α−2` when `u₂ = 0`).
/// Fails with `UnderResolved` if every other grid point gives a value more
/// than 10% off.
pub fn trace_energy<T: Real>(sol: &SeriesSolution<T>, grid: &TimeGrid<T>) -> Result<T> {
    check_alpha(sol.alpha())?;
    if sol.data().is_zero() {
        return Ok(T::zero());
    }
    let sol = sol.with_horizon(grid.horizon())?;
    let series = trace_series(&sol, grid)?;
    let mut values = vec![T::zero()];
    values.extend(series.energy_density());
    let two = T::lit(2.0);
    let p = if sol.data().c2().iter().any(|&c| c != T::zero()) {
        two * sol.alpha() - T::lit(4.0)
    } else {
        two * sol.alpha() - two
    };
    checked_integral("trace energy", grid, &values, p)
}

/// `trace_energy / (‖u₁‖_{D((−Δ)^μ)} + ‖∇u₂‖_{D((−Δ)^μ)})²`; 0 for zero data.
pub fn trace_ratio<T: Real>(sol: &SeriesSolution<T>, mu: T, grid: &TimeGrid<T>) -> Result<T> {
    let rhs = data_norm(sol.data(), mu);
    if rhs == T::zero() {
        return Ok(T::zero());
    }
    Ok(trace_energy(sol, grid)? / (rhs * rhs))
}

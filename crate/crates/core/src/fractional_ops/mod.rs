//! Discrete Riemann-Liouville and Caputo operators on time grids.
//!
//! * [`frac_integral`]: product-trapezoid I^β from either end. The integrand
//!   is piecewise linear and the kernel `(t−s)^{β−1}` is integrated exactly on
//!   each cell. Power-law singularities at the ends ride along as exact
//!   [`PowerTerm`]s, so `t^{α−2}`-type solutions keep full accuracy.
//! * [`rl_derivative`], [`caputo_derivative`]: finite differences composed
//!   with `I^{2−α}`, in the two possible orders.
//! * [`property_residual`]: discrepancies of the semigroup law, the
//!   integration-by-parts rule and the Mittag-Leffler integral identity.

mod derivative;
mod grid;
mod quadrature;
mod residual;
mod sampled;

pub use derivative::{
    caputo_derivative, differentiate, fd_weights, rl_derivative, RlOrder, FIRST_RELIABLE,
    MIN_DERIVATIVE_STEPS,
};
pub use grid::{Grading, TimeGrid, DEFAULT_RATIO};
pub use quadrature::{frac_integral, integrate_product, left_weights, product_trapezoid, Side};
pub use residual::{ml_kernel, property_residual, PropertyCheck};
pub use sampled::{Anchor, PowerTerm, SampledFunction};

#[cfg(test)]
mod tests;

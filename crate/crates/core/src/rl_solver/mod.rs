//! Series solution of the Riemann-Liouville problem.
//!
//! Mode `n` evolves as
//!
//! ```text
//! uₙ(t) = c1ₙ t^{α−1} E_{α,α}(−λₙt^α) + c2ₙ t^{α−2} E_{α,α−1}(−λₙt^α)
//! ```
//!
//! with `c1 = ⟨u₁, eₙ⟩`, `c2 = ⟨u₂, eₙ⟩`. The fractional derivatives and
//! `I^{2−α}u` have closed forms of the same shape; the checks in this module
//! compare them with the numerical operators of [`crate::fractional_ops`]
//! or with finite differences.

mod checks;


pub(crate) use checks::log_space;
pub use checks::{
    caputo_transform_check, decay_bound_ratio, decay_slopes, envelope_slopes, initial_check,
    weak_form_residual, DecaySlopes, EnvelopeFit, InitialCheck,
};

use crate::fractional_ops::{PowerTerm, SampledFunction, TimeGrid};
use crate::mittag_leffler::{ml_value, rgamma};
use crate::spectral_domain::{graded_norm, synthesize, DomainSpec, ModalData, SpatialGrid};
use crate::{Error, Real, Result};

/// Default modal truncation.
pub const DEFAULT_MODES: usize = 32;

fn check_alpha<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::one() && alpha < T::lit(2.0) {
        Ok(())
    } else {
        Err(Error::param("alpha", alpha, "must lie in (1, 2)"))
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if t > T::zero() && t.is_finite() {
        Ok(())
    } else {
        Err(Error::param("t", t, "must be positive"))
    }
}

/// Solution of `D^α u + λu = 0`, `D^{α−1}u(0) = u1`, `I^{2−α}u(0) = u2`.
///
/// `t = 0` is accepted only when `u2 = 0`, where the value is 0.
pub fn scalar_solution<T: Real>(alpha: T, lambda: T, u1: T, u2: T, t: T) -> Result<T> {
    check_alpha(alpha)?;
    if !(lambda >= T::zero()) {
        return Err(Error::param("lambda", lambda, "must be nonnegative"));
    }
    if t == T::zero() && u2 == T::zero() {
        return Ok(T::zero());
    }
    check_time(t)?;
    let z = -lambda * t.powf(alpha);
    let mut v = T::zero();
    if u1 != T::zero() {
        v += u1 * t.powf(alpha - T::one()) * ml_value(alpha, alpha, z)?;
    }
    if u2 != T::zero() {
        v += u2 * t.powf(alpha - T::lit(2.0)) * ml_value(alpha, alpha - T::one(), z)?;
    }
    Ok(v)
}

/// The scalar solution on `grid` with its leading singular behaviour as exact
/// power terms: `u1 t^{α−1}/Γ(α) + u2 t^{α−2}/Γ(α−1)` plus samples of the
/// remainder `−λ(u1 t^{2α−1}E_{α,2α} + u2 t^{2α−2}E_{α,2α−1})`, which vanishes at 0.
pub fn scalar_sampled<T: Real>(
    alpha: T,
    lambda: T,
    u1: T,
    u2: T,
    grid: &TimeGrid<T>,
) -> Result<SampledFunction<T>> {
    check_alpha(alpha)?;
    let one = T::one();
    let two = T::lit(2.0);
    let mut values = Vec::with_capacity(grid.points().len());
    for &t in grid.points() {
        if t == T::zero() || lambda == T::zero() {
            values.push(T::zero());
            continue;
        }
        let z = -lambda * t.powf(alpha);
        let mut r = T::zero();
        if u1 != T::zero() {
            r += u1 * t.powf(two * alpha - one) * ml_value(alpha, two * alpha, z)?;
        }
        if u2 != T::zero() {
            r += u2 * t.powf(two * alpha - two) * ml_value(alpha, two * alpha - one, z)?;
        }
        values.push(-lambda * r);
    }
    Ok(SampledFunction::new(grid.clone(), values)?
        .with_term(PowerTerm::origin(u1 * rgamma(alpha), alpha - one))
        .with_term(PowerTerm::origin(u2 * rgamma(alpha - one), alpha - two)))
}

/// Series solution with modal data on a horizon `(0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSolution<T> {
    alpha: T,
    data: ModalData<T>,
    horizon: T,
}

/// The solution at one time: modal values and, on request, spatial samples.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSnapshot<T> {
    pub t: T,
    pub modal_values: Vec<T>,
    pub samples: Option<Vec<T>>,
}

impl<T: Real> SeriesSolution<T> {
    pub fn new(alpha: T, data: ModalData<T>, horizon: T) -> Result<Self> {
        check_alpha(alpha)?;
        if !(horizon > T::zero() && horizon.is_finite()) {
            return Err(Error::param("T", horizon, "horizon must be positive"));
        }
        Ok(SeriesSolution {
            alpha,
            data,
            horizon,
        })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn data(&self) -> &ModalData<T> {
        &self.data
    }

    pub fn domain(&self) -> &DomainSpec<T> {
        self.data.domain()
    }

    pub fn horizon(&self) -> T {
        self.horizon
    }

    /// The same problem with other data.
    pub fn with_data(&self, data: ModalData<T>) -> Self {
        SeriesSolution {
            data,
            ..self.clone()
        }
    }

    pub fn with_horizon(&self, horizon: T) -> Result<Self> {
        Self::new(self.alpha, self.data.clone(), horizon)
    }

    fn check_in_horizon(&self, t: T) -> Result<()> {
        check_time(t)?;
        // allow a few ulps of slack at the horizon
        if t > self.horizon * (T::one() + T::lit(8.0) * T::epsilon()) {
            return Err(Error::param("t", t, "beyond the horizon"));
        }
        Ok(())
    }

    /// `uₙ(t)` for every mode.
    pub fn modal_values(&self, t: T) -> Result<Vec<T>> {
        self.check_in_horizon(t)?;
        let (c1, c2) = (self.data.c1(), self.data.c2());
        self.domain()
            .eigenpairs()
            .iter()
            .enumerate()
            .map(|(k, m)| scalar_solution(self.alpha, m.lambda, c1[k], c2[k], t))
            .collect()
    }

    pub fn snapshot(&self, t: T, grid: Option<&SpatialGrid<T>>) -> Result<FieldSnapshot<T>> {
        let modal_values = self.modal_values(t)?;
        let samples = grid.map(|g| synthesize(self.domain(), &modal_values, g));
        Ok(FieldSnapshot {
            t,
            modal_values,
            samples,
        })
    }

    /// `‖u(t)‖` in `D((−Δ)^θ)`: θ = 1/2 gives H¹₀, θ = 1 gives H².
    pub fn norm(&self, t: T, theta: T) -> Result<T> {
        Ok(graded_norm(
            &self.modal_values(t)?,
            theta,
            &self.domain().lambdas(),
        ))
    }

    /// `λ_N^θ · max(|c1_N|, |c2_N|)`, a cheap indicator of truncation error.
    pub fn tail_bound(&self, theta: T) -> T {
        let n = self.domain().n_modes() - 1;
        let lambda = self.domain().eigenpairs()[n].lambda;
        lambda.powf(theta) * self.data.c1()[n].abs().max(self.data.c2()[n].abs())
    }
}

/// Snapshots at every grid time `t > 0` (the origin is skipped).
pub fn solve_series<T: Real>(
    sol: &SeriesSolution<T>,
    times: &TimeGrid<T>,
    grid: Option<&SpatialGrid<T>>,
) -> Result<Vec<FieldSnapshot<T>>> {
    times
        .points()
        .iter()
        .filter(|&&t| t > T::zero())
        .map(|&t| sol.snapshot(t, grid))
        .collect()
}

/// `D^{α−1}uₙ(t) = c1ₙE_α(−λₙt^α) − λₙc2ₙ t^{α−1}E_{α,α}(−λₙt^α)`.
pub fn d_alpha_minus1<T: Real>(sol: &SeriesSolution<T>, t: T) -> Result<Vec<T>> {
    check_time(t)?;
    let a = sol.alpha;
    let (c1, c2) = (sol.data.c1(), sol.data.c2());
    sol.domain()
        .eigenpairs()
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let z = -m.lambda * t.powf(a);
            let mut v = T::zero();
            if c1[k] != T::zero() {
                v += c1[k] * ml_value(a, T::one(), z)?;
            }
            if c2[k] != T::zero() && m.lambda != T::zero() {
                v -= m.lambda * c2[k] * t.powf(a - T::one()) * ml_value(a, a, z)?;
            }
            Ok(v)
        })
        .collect()
}

/// `D^αuₙ(t) = −λₙuₙ(t)`.
pub fn d_alpha<T: Real>(sol: &SeriesSolution<T>, t: T) -> Result<Vec<T>> {
    check_time(t)?;
    let u = sol.modal_values(t)?;
    Ok(sol
        .domain()
        .eigenpairs()
        .iter()
        .zip(u)
        .map(|(m, v)| -m.lambda * v)
        .collect())
}

/// `I^{2−α}uₙ(t) = c1ₙ t E_{α,2}(−λₙt^α) + c2ₙ E_α(−λₙt^α)`; finite at `t = 0`.
pub fn i_two_minus_alpha<T: Real>(sol: &SeriesSolution<T>, t: T) -> Result<Vec<T>> {
    if !(t >= T::zero()) {
        return Err(Error::param("t", t, "must be nonnegative"));
    }
    let a = sol.alpha;
    let (c1, c2) = (sol.data.c1(), sol.data.c2());
    sol.domain()
        .eigenpairs()
        .iter()
        .enumerate()
        .map(|(k, m)| {
            let z = -m.lambda * t.powf(a);
            let mut v = T::zero();
            if c1[k] != T::zero() && t > T::zero() {
                v += c1[k] * t * ml_value(a, T::lit(2.0), z)?;
            }
            if c2[k] != T::zero() {
                v += c2[k] * ml_value(a, T::one(), z)?;
            }
            Ok(v)
        })
        .collect()
}

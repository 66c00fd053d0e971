use super::{frac_integral, integrate_product, Anchor, PowerTerm, SampledFunction, Side, TimeGrid};
use crate::mittag_leffler::{ml_value, rgamma};
use crate::{Error, Real, Result};

/// Operator identities whose discrete residual [`property_residual`] measures.
#[derive(Debug, Clone, Copy)]
pub enum PropertyCheck<'a, T> {
    /// `I^β I^γ f = I^{β+γ} f`, max norm over t > 0.
    Semigroup {
        beta: T,
        gamma: T,
        f: &'a SampledFunction<T>,
    },
    /// `∫₀ᵀ (I^β_{0+} f) g = ∫₀ᵀ f (I^β_{T−} g)`, absolute difference.
    IntByParts {
        beta: T,
        f: &'a SampledFunction<T>,
        g: &'a SampledFunction<T>,
    },
    /// `I^{2−α}[τ^{β−1}E_{α,β}(λτ^α)](t) = t^{1−α+β}E_{α,2−α+β}(λt^α)`, max
    /// norm over the grid points t > 0.
    MlIntegral {
        alpha: T,
        beta: T,
        lambda: T,
        grid: &'a TimeGrid<T>,
    },
}

/// `τ^{β−1}E_{α,β}(λτ^α)` on `grid`: the leading `τ^{β−1}/Γ(β)` as an exact
/// term, the rest `λτ^{α+β−1}E_{α,α+β}(λτ^α)` sampled.
pub fn ml_kernel<T: Real>(
    alpha: T,
    beta: T,
    lambda: T,
    grid: &TimeGrid<T>,
) -> Result<SampledFunction<T>> {
    let one = T::one();
    let f = SampledFunction::from_fn(grid.clone(), |t| {
        if t == T::zero() {
            return T::zero();
        }
        let z = lambda * t.powf(alpha);
        lambda * t.powf(alpha + beta - one) * ml_value(alpha, alpha + beta, z).unwrap_or(T::nan())
    })?;
    Ok(f.with_term(PowerTerm::origin(rgamma(beta), beta - one)))
}

pub fn property_residual<T: Real>(check: PropertyCheck<'_, T>) -> Result<T> {
    match check {
        PropertyCheck::Semigroup { beta, gamma, f } => {
            let twice = frac_integral(Side::Left, beta, &frac_integral(Side::Left, gamma, f)?)?;
            let once = frac_integral(Side::Left, beta + gamma, f)?;
            Ok(max_gap(&twice.evaluate(), &once.evaluate()))
        }
        PropertyCheck::IntByParts { beta, f, g } => {
            let left = frac_integral(Side::Left, beta, f)?;
            let right = frac_integral(Side::Right, beta, g)?;
            let lhs = integrate_product(&left, &plain_samples(g)?)?;
            let rhs = integrate_product(&right, &plain_samples(f)?)?;
            Ok((lhs - rhs).abs())
        }
        PropertyCheck::MlIntegral {
            alpha,
            beta,
            lambda,
            grid,
        } => {
            if !(alpha > T::one() && alpha < T::lit(2.0)) {
                return Err(Error::param("alpha", alpha, "must lie in (1, 2)"));
            }
            if !(beta > T::zero()) {
                return Err(Error::param("beta", beta, "must be positive"));
            }
            let f = ml_kernel(alpha, beta, lambda, grid)?;
            if f.values().iter().any(|v| !v.is_finite()) {
                return Err(Error::NonConvergence {
                    what: "mittag-leffler kernel samples",
                    estimate: f64::INFINITY,
                });
            }
            let lhs = frac_integral(Side::Left, T::lit(2.0) - alpha, &f)?.evaluate();
            let two = T::lit(2.0);
            let mut worst = T::zero();
            for (j, &t) in grid.points().iter().enumerate().skip(1) {
                let rhs = t.powf(T::one() - alpha + beta)
                    * ml_value(alpha, two - alpha + beta, lambda * t.powf(alpha))?;
                worst = worst.max((lhs[j] - rhs).abs());
            }
            Ok(worst)
        }
    }
}

fn plain_samples<T: Real>(f: &SampledFunction<T>) -> Result<Vec<T>> {
    Ok(f.fold(Anchor::Origin)?
        .fold(Anchor::Horizon)?
        .values()
        .to_vec())
}

fn max_gap<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .skip(1)
        .map(|(&x, &y)| (x - y).abs())
        .fold(T::zero(), T::max)
}

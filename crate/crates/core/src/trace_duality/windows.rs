use super::check_alpha;
use crate::{Error, Real, Result};

/// The θ-window shared by the gradient and the `D^α` estimates for one μ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentWindow<T> {
    pub mu: T,
    pub theta_lo: T,
    pub theta_hi: T,
    pub empty: bool,
}

impl<T: Real> ExponentWindow<T> {
    pub fn contains(&self, theta: T) -> bool {
        !self.empty && theta > self.theta_lo && theta < self.theta_hi
    }
}

/// `(3(2−α)/(4α), 1/4)`: the μ for which [`exponent_window`] is non-empty.
pub fn mu_range<T: Real>(alpha: T) -> Result<(T, T)> {
    check_alpha(alpha)?;
    let lo = T::lit(3.0) * (T::lit(2.0) - alpha) / (T::lit(4.0) * alpha);
    Ok((lo, T::lit(0.25)))
}

/// `(μ, (2α−3)/(2α) + μ)`, the θ-range of the gradient estimate.
pub fn nabla_interval<T: Real>(alpha: T, mu: T) -> (T, T) {
    let two_a = T::lit(2.0) * alpha;
    (mu, (two_a - T::lit(3.0)) / two_a + mu)
}

/// `((3−α)/(2α) − μ, 1/2 − μ)`, the θ-range of the `D^α` estimate.
pub fn dalpha_interval<T: Real>(alpha: T, mu: T) -> (T, T) {
    let two_a = T::lit(2.0) * alpha;
    ((T::lit(3.0) - alpha) / two_a - mu, T::lit(0.5) - mu)
}

/// Intersection of [`nabla_interval`] and [`dalpha_interval`].
pub fn exponent_window<T: Real>(alpha: T, mu: T) -> Result<ExponentWindow<T>> {
    check_alpha(alpha)?;
    if !(mu >= T::zero()) || !mu.is_finite() {
        return Err(Error::param("mu", mu, "must be nonnegative"));
    }
    let (a, b) = nabla_interval(alpha, mu);
    let (c, d) = dalpha_interval(alpha, mu);
    let (lo, hi) = (a.max(c), b.min(d));
    Ok(ExponentWindow {
        mu,
        theta_lo: lo,
        theta_hi: hi,
        empty: !(lo < hi),
    })
}

/// Output of [`admissible_intervals`].
pub type Admissible<T> = ((T, T), Option<ExponentWindow<T>>);

/// μ-range and, when `mu` is given, its window.
pub fn admissible_intervals<T: Real>(alpha: T, mu: Option<T>) -> Result<Admissible<T>> {
    let range = mu_range(alpha)?;
    let window = mu.map(|m| exponent_window(alpha, m)).transpose()?;
    Ok((range, window))
}

/// One point of the μ(ξ) curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XiSample<T> {
    pub xi: T,
    pub mu: T,
    pub window: ExponentWindow<T>,
}

/// `μ(ξ) = 3(2−α)ξ/(4α) + (1−ξ)/4` for `ξ = lo, lo+step, …, hi`, each with its
/// window. Endpoints included up to rounding of the step count.
pub fn xi_sweep<T: Real>(alpha: T, lo: T, hi: T, step: T) -> Result<Vec<XiSample<T>>> {
    let (m_lo, m_hi) = mu_range(alpha)?;
    if !(step > T::zero()) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(Error::Invalid(format!(
            "xi sweep needs lo <= hi and step > 0, got {lo},{hi},{step}"
        )));
    }
    let count = ((hi - lo) / step + T::lit(1e-9))
        .floor()
        .to_usize()
        .unwrap_or(0);
    if count > 1_000_000 {
        return Err(Error::Invalid("xi sweep longer than 10^6 points".into()));
    }
    (0..=count)
        .map(|k| {
            let xi = lo + step * T::from_index(k);
            let mu = m_lo * xi + m_hi * (T::one() - xi);
            Ok(XiSample {
                xi,
                mu,
                window: exponent_window(alpha, mu.max(T::zero()))?,
            })
        })
        .collect()
}

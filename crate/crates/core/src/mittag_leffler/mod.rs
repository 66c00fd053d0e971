//! The two-parameter Mittag-Leffler function on the real line.
//!
//! `E_{α,β}(z) = Σ_k z^k / Γ(αk + β)`, evaluated by one of three branches:
//!
//! * `Taylor` for z > 0 and for -5 ≤ z < 0 (unless the asymptotic series is
//!   more accurate there, which happens for small α),
//! * `Crossover`, the same series with compensated summation, for z < -5 while
//!   the cancellation error `ε · Σ|term|` stays small,
//! * `Asymptotic` for large negative z:
//!   `-Σ_{k≥1} z^{-k}/Γ(β-αk)` truncated at its smallest term, plus for α > 1
//!   the conjugate pair of exponentially damped terms
//!   `(1/α) ζ^{1-β} e^ζ`, `ζ = |z|^{1/α} e^{±iπ/α}`. For α near 2 those terms
//!   decay slowly and dominate the algebraic part (α = 2 gives exactly cos and
//!   sin x / x).
//!
//! Below -5 both candidates are formed when needed and the one with the smaller
//! error estimate wins.

mod gamma;

pub use gamma::{gamma, is_pole, ln_gamma, rgamma, sin_pi};

use gamma::{rgamma_split, two_prod, two_sum};

use crate::{Error, Real, Result};

const MAX_TAYLOR_TERMS: usize = 500;
const MAX_ASYMPTOTIC_TERMS: usize = 200;
const TAYLOR_RADIUS: f64 = 5.0;
/// Relative error of a computed series term, in units of ε.
const TERM_ULPS: f64 = 3.0;

/// Which evaluation path produced an [`MlResult`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Taylor,
    Asymptotic,
    Crossover,
}

impl Branch {
    pub fn as_str(self) -> &'static str {
        match self {
            Branch::Taylor => "taylor",
            Branch::Asymptotic => "asymptotic",
            Branch::Crossover => "crossover",
        }
    }
}

/// Parameters (α, β) of `E_{α,β}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlParams<T> {
    alpha: T,
    beta: T,
    internal: bool,
}

impl<T: Real> MlParams<T> {
    /// Requires 0 < α ≤ 2 and β > 0.
    pub fn new(alpha: T, beta: T) -> Result<Self> {
        let p = Self::internal(alpha, beta)?;
        if !(beta > T::zero()) {
            return Err(Error::param("beta", beta, "must be positive"));
        }
        Ok(p)
    }

    /// Same as [`MlParams::new`] but accepts any finite β. Used for the
    /// derivative identities, where `E_{α,α-2}` appears.
    pub fn internal(alpha: T, beta: T) -> Result<Self> {
        if !(alpha > T::zero() && alpha <= T::lit(2.0)) {
            return Err(Error::param("alpha", alpha, "must lie in (0, 2]"));
        }
        if !beta.is_finite() {
            return Err(Error::param("beta", beta, "must be finite"));
        }
        Ok(MlParams {
            alpha,
            beta,
            internal: beta <= T::zero(),
        })
    }

    pub fn alpha(&self) -> T {
        self.alpha
    }

    pub fn beta(&self) -> T {
        self.beta
    }

    /// True when β ≤ 0 was admitted through [`MlParams::internal`].
    pub fn is_internal(&self) -> bool {
        self.internal
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlResult<T> {
    pub value: T,
    pub est_abs_error: T,
    pub branch: Branch,
}

struct Partial<T> {
    value: T,
    error: T,
}

fn fail_tolerance<T: Real>() -> T {
    T::lit(1e-6).max(T::lit(1e4) * T::epsilon())
}

/// `z^k / Γ(αk + β)` with `z^k = zk.0 + zk.1` and αk + β formed without
/// rounding; past the overflow range it falls back to logarithms.
fn taylor_term<T: Real>(alpha: T, beta: T, z: T, k: usize, zk: (T, T)) -> T {
    let kk = T::from_index(k);
    let (p, p_err) = two_prod(alpha, kk);
    let (arg, s_err) = two_sum(p, beta);
    let arg_lo = p_err + s_err;
    if arg <= T::lit(160.0) && zk.0.abs() < T::lit(1e290) {
        let rg = if arg >= T::lit(2.0) {
            rgamma_split(arg, arg_lo)
        } else {
            rgamma(arg)
        };
        return zk.0 * rg + zk.1 * rg;
    }
    if z == T::zero() {
        return T::zero();
    }
    let log_mag = kk * z.abs().ln() - ln_gamma(arg);
    let sign = if z < T::zero() && k % 2 == 1 {
        -T::one()
    } else {
        T::one()
    };
    sign * log_mag.exp()
}

fn taylor<T: Real>(alpha: T, beta: T, z: T, compensated: bool) -> Option<Partial<T>> {
    let eps = T::epsilon();
    let mut sum = T::zero();
    let mut carry = T::zero();
    let mut abs_sum = T::zero();
    let mut prev = T::infinity();
    let mut zk = (T::one(), T::zero());
    for k in 0..=MAX_TAYLOR_TERMS {
        let term = taylor_term(alpha, beta, z, k, zk);
        if !term.is_finite() {
            return None;
        }
        if compensated {
            let y = term - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        } else {
            sum += term;
        }
        let mag = term.abs();
        abs_sum += mag;
        if k > 0
            && alpha * T::from_index(k) + beta > T::zero()
            && mag <= prev
            && (mag <= eps * sum.abs() || mag < T::min_positive_value())
        {
            return Some(Partial {
                value: sum,
                error: mag + T::lit(TERM_ULPS) * eps * abs_sum,
            });
        }
        prev = mag;
        let (hi, lo) = two_prod(zk.0, z);
        zk = (hi, lo + zk.1 * z);
    }
    None
}

/// Algebraic plus exponential asymptotics for z = -μ, μ > 0.
fn asymptotic<T: Real>(alpha: T, beta: T, mu: T) -> Partial<T> {
    let eps = T::epsilon();
    let ln_mu = mu.ln();
    let mut sum = T::zero();
    let mut abs_sum = T::zero();
    let mut prev = T::infinity();
    let mut error = T::zero();
    for k in 1..=MAX_ASYMPTOTIC_TERMS {
        let x = beta - alpha * T::from_index(k);
        if is_pole(x) {
            continue;
        }
        let mag = (-T::from_index(k) * ln_mu - ln_gamma(x)).exp();
        if mag > prev {
            error = prev;
            break;
        }
        // -(-μ)^{-k} / Γ(x)
        let parity = if k % 2 == 1 { T::one() } else { -T::one() };
        let gamma_sign = if x > T::zero() {
            T::one()
        } else {
            sin_pi(x).signum()
        };
        sum += parity * gamma_sign * mag;
        abs_sum += mag;
        prev = mag;
        if mag <= eps * sum.abs() {
            error = mag;
            break;
        }
        if k == MAX_ASYMPTOTIC_TERMS {
            error = mag;
        }
    }

    let one = T::one();
    let two = T::lit(2.0);
    if alpha > one {
        let r = mu.powf(one / alpha);
        let angle = T::PI() / alpha;
        let log_mag = r * angle.cos() + (one - beta) / alpha * ln_mu;
        let phase = r * angle.sin() + (one - beta) * angle;
        let envelope = two / alpha * log_mag.exp();
        sum += envelope * phase.cos();
        // the phase carries an absolute error of about ε·r
        abs_sum += envelope * (one + r);
        // Close to the Stokes line (α → 1) the pair is only partly switched on
        // and the optimally truncated algebraic series absorbs the rest; the
        // fraction still off is about erfc(σ), σ the distance to that line.
        let theta = T::PI() - angle;
        let sigma =
            (r / two).sqrt() * theta.sin() / theta.cos().max(T::min_positive_value()).sqrt();
        error += envelope * T::lit(libm::erfc(sigma.as_f64()));
    } else if alpha == one {
        let mag = (-mu + (one - beta) * ln_mu).exp();
        sum += mag * (T::PI() * (one - beta)).cos();
        abs_sum += mag;
        if beta != beta.round() {
            error += mag;
        }
    }
    Partial {
        value: sum,
        error: error + T::lit(8.0) * eps * abs_sum,
    }
}

/// Evaluates `E_{α,β}(z)`.
///
/// ```
/// use fracwave::mittag_leffler::{ml, MlParams};
/// let r = ml(&MlParams::new(2.0, 1.0).unwrap(), -4.0).unwrap();
/// assert!((r.value - 2.0_f64.cos()).abs() < 1e-12);
/// ```
pub fn ml<T: Real>(p: &MlParams<T>, z: T) -> Result<MlResult<T>> {
    let (alpha, beta) = (p.alpha, p.beta);
    if !z.is_finite() {
        return Err(Error::param("z", z, "must be finite"));
    }
    if z == T::zero() {
        return Ok(MlResult {
            value: rgamma(beta),
            est_abs_error: T::zero(),
            branch: Branch::Taylor,
        });
    }
    let fail = fail_tolerance::<T>();
    let accept = |part: &Partial<T>| part.error <= fail * T::one().max(part.value.abs());

    if z > T::zero() {
        return match taylor(alpha, beta, z, false) {
            Some(part) if accept(&part) => Ok(MlResult {
                value: part.value,
                est_abs_error: part.error,
                branch: Branch::Taylor,
            }),
            other => Err(Error::NonConvergence {
                what: "mittag-leffler taylor series",
                estimate: other.map_or(f64::INFINITY, |p| p.error.as_f64()),
            }),
        };
    }

    let mu = -z;
    let near = mu <= T::lit(TAYLOR_RADIUS);
    // the largest partial sum is about e^{μ^{1/α}}, so this bounds the
    // cancellation error of the series before summing it
    let growth = mu.powf(T::one() / alpha);
    let taylor_hopeless = growth + T::epsilon().ln() > fail.ln() + T::lit(7.0);
    let series = if taylor_hopeless {
        None
    } else {
        taylor(alpha, beta, z, !near)
    };
    let series_branch = if near {
        Branch::Taylor
    } else {
        Branch::Crossover
    };
    if let Some(part) = &series {
        if part.error <= T::lit(1e4) * T::epsilon() {
            return Ok(MlResult {
                value: part.value,
                est_abs_error: part.error,
                branch: series_branch,
            });
        }
    }
    let asym = asymptotic(alpha, beta, mu);
    let (best, branch) = match series {
        Some(part) if part.error < asym.error => (part, series_branch),
        _ => (asym, Branch::Asymptotic),
    };
    if !accept(&best) || !best.value.is_finite() {
        return Err(Error::NonConvergence {
            what: "mittag-leffler",
            estimate: best.error.as_f64(),
        });
    }
    Ok(MlResult {
        value: best.value,
        est_abs_error: best.error,
        branch,
    })
}

/// Shorthand for `ml(&MlParams::internal(alpha, beta)?, z)?.value`.
pub fn ml_value<T: Real>(alpha: T, beta: T, z: T) -> Result<T> {
    Ok(ml(&MlParams::internal(alpha, beta)?, z)?.value)
}

/// Largest sampled value of `(1 + μ)|E_{α,β}(-μ)|` over `n_samples` equally
/// spaced μ in [0, mu_max].
pub fn ml_bound_sup<T: Real>(p: &MlParams<T>, mu_max: T, n_samples: usize) -> Result<T> {
    if !(mu_max >= T::zero()) || !mu_max.is_finite() {
        return Err(Error::param(
            "mu_max",
            mu_max,
            "must be finite and non-negative",
        ));
    }
    if n_samples < 2 {
        return Err(Error::param(
            "n_samples",
            T::from_index(n_samples),
            "need at least 2",
        ));
    }
    let last = T::from_index(n_samples - 1);
    let mut sup = T::zero();
    for i in 0..n_samples {
        let mu = mu_max * T::from_index(i) / last;
        let v = ml(p, -mu)?.value;
        sup = sup.max((T::one() + mu) * v.abs());
    }
    Ok(sup)
}

/// Maximiser and maximum of `x^β / (1 + x)` on x > 0, for β ∈ (0, 1).
pub fn xbeta_max<T: Real>(beta: T) -> Result<(T, T)> {
    if !(beta > T::zero() && beta < T::one()) {
        return Err(Error::param("beta", beta, "must lie in (0, 1)"));
    }
    let one = T::one();
    Ok((
        beta / (one - beta),
        beta.powf(beta) * (one - beta).powf(one - beta),
    ))
}

/// Differentiation identities for Mittag-Leffler kernels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DerivIdentity {
    /// d/dt E_α(-λt^α) = -λ t^{α-1} E_{α,α}(-λt^α)
    Ea1,
    /// d/dt (t E_{α,2}(-λt^α)) = E_α(-λt^α)
    Eaa1,
    /// d/dt (t^{α-1} E_{α,α}(-λt^α)) = t^{α-2} E_{α,α-1}(-λt^α)
    Eaaa,
}

/// |central difference of the left side − closed-form right side| at `t`.
pub fn ml_deriv_residual<T: Real>(
    kind: DerivIdentity,
    alpha: T,
    lambda: T,
    t: T,
    h: T,
) -> Result<T> {
    if !(h > T::zero() && t > h) {
        return Err(Error::Invalid(format!(
            "need t > h > 0, got t = {t}, h = {h}"
        )));
    }
    if !(lambda >= T::zero()) {
        return Err(Error::param("lambda", lambda, "must be non-negative"));
    }
    let one = T::one();
    let left = |s: T| -> Result<T> {
        let z = -lambda * s.powf(alpha);
        match kind {
            DerivIdentity::Ea1 => ml_value(alpha, one, z),
            DerivIdentity::Eaa1 => Ok(s * ml_value(alpha, T::lit(2.0), z)?),
            DerivIdentity::Eaaa => Ok(s.powf(alpha - one) * ml_value(alpha, alpha, z)?),
        }
    };
    let z = -lambda * t.powf(alpha);
    let right = match kind {
        DerivIdentity::Ea1 => -lambda * t.powf(alpha - one) * ml_value(alpha, alpha, z)?,
        DerivIdentity::Eaa1 => ml_value(alpha, one, z)?,
        DerivIdentity::Eaaa => t.powf(alpha - T::lit(2.0)) * ml_value(alpha, alpha - one, z)?,
    };
    let numeric = (left(t + h)? - left(t - h)?) / (h + h);
    Ok((numeric - right).abs())
}

use super::{Anchor, PowerTerm, SampledFunction};
use crate::mittag_leffler::{ln_gamma, rgamma};
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// I^β_{0+}
    Left,
    /// I^β_{T−}
    Right,
}

/// Moments of `σ^{β−1}` over `σ ∈ [a, a+h]` against the two hat functions.
///
/// Returns `(near, far)`: the weight of the endpoint at distance `a` and of
/// the one at distance `a + h`. Their sum is `((a+h)^β − a^β)/β`.
pub(crate) fn cell_weights<T: Real>(a: T, h: T, beta: T) -> (T, T) {
    let one = T::one();
    if a == T::zero() {
        let hb = h.powf(beta);
        return (hb / (beta * (beta + one)), hb / (beta + one));
    }
    let ratio = h / a;
    if ratio < T::lit(0.1) {
        // (a + hu)^{β−1} = a^{β−1} Σ_m C(β−1, m) (hu/a)^m, integrated against 1−u and u
        let (mut near, mut far) = (T::zero(), T::zero());
        let mut c = one;
        for m in 0..60 {
            let mm = T::from_index(m);
            let d = (mm + one) * (mm + T::lit(2.0));
            near += c / d;
            far += c / (mm + T::lit(2.0));
            c = c * (beta - one - mm) / (mm + one) * ratio;
            if c.abs() < T::epsilon() * far.abs() {
                break;
            }
        }
        let scale = h * a.powf(beta - one);
        return (scale * near, scale * far);
    }
    let b = a + h;
    let (ab, bb) = (a.powf(beta), b.powf(beta));
    let ib = (bb - ab) / beta;
    let i1 = (bb * b - ab * a) / (beta + one);
    ((b * ib - i1) / h, (i1 - a * ib) / h)
}

/// Product-trapezoid I^β of piecewise-linear samples on `points`.
pub fn product_trapezoid<T: Real>(side: Side, beta: T, points: &[T], values: &[T]) -> Vec<T> {
    let n = points.len();
    let scale = rgamma(beta);
    let mut out = vec![T::zero(); n];
    match side {
        Side::Left => {
            for j in 1..n {
                let tj = points[j];
                let mut acc = T::zero();
                for i in 0..j {
                    let h = points[i + 1] - points[i];
                    let (near, far) = cell_weights(tj - points[i + 1], h, beta);
                    acc += near * values[i + 1] + far * values[i];
                }
                out[j] = acc * scale;
            }
        }
        Side::Right => {
            for j in 0..n - 1 {
                let tj = points[j];
                let mut acc = T::zero();
                for i in j..n - 1 {
                    let h = points[i + 1] - points[i];
                    let (near, far) = cell_weights(points[i] - tj, h, beta);
                    acc += near * values[i] + far * values[i + 1];
                }
                out[j] = acc * scale;
            }
        }
    }
    out
}

/// Weights `w_i` with `(I^β_{0+} f)(t_j) ≈ Σ_{i≤j} w_i f_i`, for one target `j`.
pub fn left_weights<T: Real>(beta: T, points: &[T], j: usize) -> Vec<T> {
    let scale = rgamma(beta);
    let mut w = vec![T::zero(); j + 1];
    for i in 0..j {
        let h = points[i + 1] - points[i];
        let (near, far) = cell_weights(points[j] - points[i + 1], h, beta);
        w[i + 1] += near * scale;
        w[i] += far * scale;
    }
    w
}

fn power_rule<T: Real>(p: &PowerTerm<T>, beta: T) -> Result<PowerTerm<T>> {
    let one = T::one();
    if !(p.exponent > -one) {
        return Err(Error::Invalid(format!(
            "power term with exponent {} is not integrable",
            p.exponent
        )));
    }
    // Γ(p+1)/Γ(p+β+1), both arguments positive
    let factor = (ln_gamma(p.exponent + one) - ln_gamma(p.exponent + beta + one)).exp();
    Ok(PowerTerm {
        coef: p.coef * factor,
        exponent: p.exponent + beta,
        anchor: p.anchor,
    })
}

/// Riemann-Liouville fractional integral of order `beta` of a sampled function.
///
/// Power terms anchored at the integration start are mapped exactly by the
/// power rule; the value of the regular part at that end is split off as an
/// exact `c·d^β/Γ(β+1)` term and the remainder goes through the product
/// trapezoid rule. Terms anchored at the other end are folded into the samples
/// first, which fails if one of them is singular.
pub fn frac_integral<T: Real>(
    side: Side,
    beta: T,
    f: &SampledFunction<T>,
) -> Result<SampledFunction<T>> {
    if !(beta > T::zero()) || !beta.is_finite() {
        return Err(Error::param("beta", beta, "must be positive"));
    }
    let (anchor, other) = match side {
        Side::Left => (Anchor::Origin, Anchor::Horizon),
        Side::Right => (Anchor::Horizon, Anchor::Origin),
    };
    let f = f.fold(other)?;
    let mut terms = f
        .terms()
        .iter()
        .map(|p| power_rule(p, beta))
        .collect::<Result<Vec<_>>>()?;
    let values = f.values();
    let base = match side {
        Side::Left => values[0],
        Side::Right => values[values.len() - 1],
    };
    if base != T::zero() {
        terms.push(PowerTerm {
            coef: base * rgamma(beta + T::one()),
            exponent: beta,
            anchor,
        });
    }
    let shifted: Vec<T> = values.iter().map(|&v| v - base).collect();
    let out = product_trapezoid(side, beta, f.grid().points(), &shifted);
    Ok(SampledFunction::from_parts(f.grid().clone(), out, terms))
}

/// `∫₀ᵀ f(t) g(t) dt` with `g` piecewise linear through `g_samples`.
///
/// Exact for the power terms of `f` and for piecewise-linear regular parts.
pub fn integrate_product<T: Real>(f: &SampledFunction<T>, g_samples: &[T]) -> Result<T> {
    let points = f.grid().points();
    if g_samples.len() != points.len() {
        return Err(Error::Invalid(
            "sample count does not match the grid".into(),
        ));
    }
    let horizon = f.grid().horizon();
    let six = T::lit(6.0);
    let two = T::lit(2.0);
    let fv = f.values();
    let g = g_samples;
    let mut acc = T::zero();
    for i in 0..points.len() - 1 {
        let h = points[i + 1] - points[i];
        acc += h / six
            * (two * fv[i] * g[i]
                + fv[i] * g[i + 1]
                + fv[i + 1] * g[i]
                + two * fv[i + 1] * g[i + 1]);
    }
    for p in f.terms() {
        if !(p.exponent > -T::one()) {
            return Err(Error::Invalid(format!(
                "power term with exponent {} is not integrable",
                p.exponent
            )));
        }
        let kernel = p.exponent + T::one();
        let mut sum = T::zero();
        for i in 0..points.len() - 1 {
            let h = points[i + 1] - points[i];
            sum += match p.anchor {
                Anchor::Origin => {
                    let (near, far) = cell_weights(points[i], h, kernel);
                    near * g[i] + far * g[i + 1]
                }
                Anchor::Horizon => {
                    let (near, far) = cell_weights(horizon - points[i + 1], h, kernel);
                    near * g[i + 1] + far * g[i]
                }
            };
        }
        acc += p.coef * sum;
    }
    Ok(acc)
}

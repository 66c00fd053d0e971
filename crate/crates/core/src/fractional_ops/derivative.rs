use super::{frac_integral, PowerTerm, SampledFunction, Side};
use crate::{Error, Real, Result};

/// Minimum number of cells for the derivative operators.
pub const MIN_DERIVATIVE_STEPS: usize = 16;

/// Derivative values on the first cells near t = 0 are reported but not
/// trusted: indices below this one.
pub const FIRST_RELIABLE: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RlOrder {
    /// D^α = d²/dt² I^{2−α}
    Alpha,
    /// D^{α−1} = d/dt I^{2−α}
    AlphaMinus1,
    /// D^{α−2} = I^{2−α}
    AlphaMinus2,
}

/// Fornberg's finite-difference weights for derivatives `0..=order` at `x0`.
/// Returns the weights of the highest order.
pub fn fd_weights<T: Real>(x0: T, xs: &[T], order: usize) -> Vec<T> {
    let n = xs.len();
    let mut c = vec![vec![T::zero(); order + 1]; n];
    c[0][0] = T::one();
    let mut c1 = T::one();
    let mut c4 = xs[0] - x0;
    for i in 1..n {
        let mn = i.min(order);
        let mut c2 = T::one();
        let c5 = c4;
        c4 = xs[i] - x0;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    let kk = T::from_index(k);
                    c[i][k] = c1 * (kk * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                let kk = T::from_index(k);
                c[j][k] = (c4 * c[j][k] - kk * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[order]).collect()
}

/// First or second derivative of samples: three-point stencils inside,
/// one-sided stencils at the ends (3 points for d/dt, 5 for d²/dt²).
pub fn differentiate<T: Real>(points: &[T], values: &[T], order: usize) -> Vec<T> {
    let n = points.len();
    let edge = if order == 1 { 3 } else { 5 };
    (0..n)
        .map(|j| {
            let range = if j == 0 {
                0..edge
            } else if j == n - 1 {
                n - edge..n
            } else {
                j - 1..j + 2
            };
            let w = fd_weights(points[j], &points[range.clone()], order);
            w.iter().zip(&values[range]).map(|(&a, &b)| a * b).sum()
        })
        .collect()
}

fn differentiate_function<T: Real>(f: &SampledFunction<T>, order: usize) -> SampledFunction<T> {
    let values = differentiate(f.grid().points(), f.values(), order);
    let terms = f
        .terms()
        .iter()
        .filter_map(|p| {
            let mut q = Some(*p);
            for _ in 0..order {
                q = q.and_then(|q: PowerTerm<T>| q.derivative());
            }
            q
        })
        .collect();
    SampledFunction::from_parts(f.grid().clone(), values, terms)
}

fn check_order<T: Real>(alpha: T) -> Result<()> {
    if alpha > T::one() && alpha < T::lit(2.0) {
        Ok(())
    } else {
        Err(Error::param("alpha", alpha, "must lie in (1, 2)"))
    }
}

fn check_steps<T: Real>(f: &SampledFunction<T>) -> Result<()> {
    let m = f.grid().steps();
    if m < MIN_DERIVATIVE_STEPS {
        return Err(Error::GridTooCoarse(format!(
            "M = {m}, fractional derivatives need M >= {MIN_DERIVATIVE_STEPS}"
        )));
    }
    Ok(())
}

/// Riemann-Liouville derivatives of order α, α−1 or α−2 (1 < α < 2).
///
/// Finite differences act on the sampled part of `I^{2−α} f`; its power terms
/// are differentiated exactly. Values at indices below [`FIRST_RELIABLE`] are
/// of low accuracy when f is singular at 0.
pub fn rl_derivative<T: Real>(
    order: RlOrder,
    alpha: T,
    f: &SampledFunction<T>,
) -> Result<SampledFunction<T>> {
    check_order(alpha)?;
    check_steps(f)?;
    let g = frac_integral(Side::Left, T::lit(2.0) - alpha, f)?;
    Ok(match order {
        RlOrder::AlphaMinus2 => g,
        RlOrder::AlphaMinus1 => differentiate_function(&g, 1),
        RlOrder::Alpha => differentiate_function(&g, 2),
    })
}

/// Caputo derivative `I^{2−α} f''` (1 < α < 2), with f'' from finite
/// differences of the full values of `f`.
pub fn caputo_derivative<T: Real>(alpha: T, f: &SampledFunction<T>) -> Result<SampledFunction<T>> {
    check_order(alpha)?;
    check_steps(f)?;
    let full = f.evaluate();
    if full.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid(
            "Caputo derivative needs a function finite on the closed grid".into(),
        ));
    }
    let second = differentiate(f.grid().points(), &full, 2);
    let f2 = SampledFunction::new(f.grid().clone(), second)?;
    frac_integral(Side::Left, T::lit(2.0) - alpha, &f2)
}

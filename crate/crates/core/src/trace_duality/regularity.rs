use super::windows::{dalpha_interval, nabla_interval};
use super::{check_alpha, singular_integral};
use crate::fractional_ops::TimeGrid;
use crate::mittag_leffler::ml_value;
use crate::rl_solver::SeriesSolution;
use crate::sampling::data_norm;
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularityNorm {
    /// `‖∇u‖_{L²(0,T; D((−Δ)^θ))}`
    Nabla,
    /// `‖D^αu‖_{L²(0,T; D((−Δ)^{−θ}))}`
    DAlpha,
}

impl RegularityNorm {
    /// θ-interval of the estimate for this μ.
    pub fn interval<T: Real>(self, alpha: T, mu: T) -> (T, T) {
        match self {
            RegularityNorm::Nabla => nabla_interval(alpha, mu),
            RegularityNorm::DAlpha => dalpha_interval(alpha, mu),
        }
    }

    /// λ-power multiplying `|uₙ(t)|²` in the squared norm.
    fn weight<T: Real>(self, theta: T) -> T {
        let two = T::lit(2.0);
        match self {
            RegularityNorm::Nabla => T::one() + two * theta,
            RegularityNorm::DAlpha => two - two * theta,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityRatio<T> {
    pub lhs: T,
    /// `‖u₁‖_{D((−Δ)^μ)} + ‖∇u₂‖_{D((−Δ)^μ)}`
    pub rhs: T,
    /// `lhs / rhs`, or 0 with `zero_data` set.
    pub ratio: T,
    pub zero_data: bool,
}

fn check_admissible<T: Real>(which: RegularityNorm, alpha: T, theta: T, mu: T) -> Result<()> {
    let (lo, hi) = which.interval(alpha, mu);
    if theta > lo && theta < hi && mu >= T::zero() {
        Ok(())
    } else {
        Err(Error::InadmissibleExponent {
            theta: theta.as_f64(),
            mu: mu.as_f64(),
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        })
    }
}

/// Ratio of the solution norm `which` over `(0, T]` (T = horizon of `grid`)
/// to the data norm, for `θ` inside the matching interval.
///
/// Each `∫₀ᵀ |uₙ|² dt` is integrated like
/// [`trace_energy`](super::trace_energy), with the same half-grid check on
/// the weighted sum.
pub fn regularity_ratio<T: Real>(
    which: RegularityNorm,
    sol: &SeriesSolution<T>,
    theta: T,
    mu: T,
    grid: &TimeGrid<T>,
) -> Result<RegularityRatio<T>> {
    check_alpha(sol.alpha())?;
    check_admissible(which, sol.alpha(), theta, mu)?;
    let rhs = data_norm(sol.data(), mu);
    if sol.data().is_zero() {
        return Ok(RegularityRatio {
            lhs: T::zero(),
            rhs,
            ratio: T::zero(),
            zero_data: true,
        });
    }
    let sol = sol.with_horizon(grid.horizon())?;
    let n = sol.domain().n_modes();
    let points = grid.points();
    let mut squares = vec![vec![T::zero(); points.len()]; n];
    for (j, &t) in points.iter().enumerate().skip(1) {
        for (k, v) in sol.modal_values(t)?.into_iter().enumerate() {
            squares[k][j] = v * v;
        }
    }
    let coarse = grid.coarsen();
    let a = sol.alpha();
    let two = T::lit(2.0);
    let w = which.weight(theta);
    let (mut fine_sum, mut coarse_sum) = (T::zero(), T::zero());
    for (k, m) in sol.domain().eigenpairs().iter().enumerate() {
        let p = if sol.data().c2()[k] != T::zero() {
            two * a - T::lit(4.0)
        } else {
            two * a - two
        };
        let lw = m.lambda.powf(w);
        fine_sum += lw * singular_integral(points, &squares[k], p);
        if let Some(c) = &coarse {
            let cv: Vec<T> = squares[k].iter().step_by(2).copied().collect();
            coarse_sum += lw * singular_integral(c.points(), &cv, p);
        }
    }
    if coarse.is_some() && (fine_sum - coarse_sum).abs() > T::lit(0.1) * fine_sum {
        return Err(Error::UnderResolved(format!(
            "regularity norm: {coarse_sum} on the half grid vs {fine_sum}"
        )));
    }
    let lhs = fine_sum.sqrt();
    Ok(RegularityRatio {
        lhs,
        rhs,
        ratio: lhs / rhs,
        zero_data: false,
    })
}

/// Time exponents of the squared-norm envelope near `t = 0` for unit data,
/// `(u₁ part, u₂ part)`. The norm is finite for all data iff both exceed −1.
pub fn envelope_exponents<T: Real>(which: RegularityNorm, alpha: T, theta: T, mu: T) -> (T, T) {
    let two = T::lit(2.0);
    let (a1, a2) = data_powers(which, theta, mu);
    (
        two * alpha - two - alpha * a1,
        two * alpha - T::lit(4.0) - alpha * a2,
    )
}

/// λ-powers left on `E(−λt^α)²` after normalising the data to unit
/// `D((−Δ)^μ)` norm.
fn data_powers<T: Real>(which: RegularityNorm, theta: T, mu: T) -> (T, T) {
    let two = T::lit(2.0);
    let w = which.weight(theta);
    (w - two * mu, w - T::one() - two * mu)
}

/// `∫_{t_min}^{T} g(t) dt` for the worst-case envelope
///
/// ```text
/// g(t) = sup_{λ≥1} λ^{a₁} (t^{α−1}E_{α,α}(−λt^α))² + sup_{λ≥1} λ^{a₂} (t^{α−2}E_{α,α−1}(−λt^α))²
/// ```
///
/// of unit data. It converges as `t_min → 0` exactly when θ satisfies the
/// exponent conditions of `which`, and blows up like a power of `t_min`
/// otherwise.
pub fn divergence_indicator<T: Real>(
    which: RegularityNorm,
    alpha: T,
    theta: T,
    mu: T,
    t_min: T,
    horizon: T,
) -> Result<T> {
    check_alpha(alpha)?;
    if !(t_min > T::zero() && horizon > t_min) {
        return Err(Error::Invalid("need 0 < t_min < T".into()));
    }
    let one = T::one();
    let (a1, a2) = data_powers(which, theta, mu);
    // suffix maxima of s^a E(−s)² over a log grid in s = λt^α
    let s_lo = T::lit(1e-16).min(t_min.powf(alpha));
    let s_grid = crate::rl_solver::log_space(s_lo, T::lit(1e6), 1601);
    let profile = |a: T, beta: T| -> Result<Vec<T>> {
        let mut v = s_grid
            .iter()
            .map(|&s| Ok(s.powf(a) * ml_value(alpha, beta, -s)?.powi(2)))
            .collect::<Result<Vec<T>>>()?;
        for i in (0..v.len() - 1).rev() {
            v[i] = v[i].max(v[i + 1]);
        }
        Ok(v)
    };
    let p1 = profile(a1, alpha)?;
    let p2 = profile(a2, alpha - one)?;
    let sup_from = |p: &[T], s: T| -> T {
        let i = s_grid.partition_point(|&x| x < s).min(p.len() - 1);
        p[i]
    };
    let two = T::lit(2.0);
    let ts = crate::rl_solver::log_space(t_min, horizon, 801);
    let g: Vec<T> = ts
        .iter()
        .map(|&t| {
            let s = t.powf(alpha);
            t.powf(two * alpha - two - alpha * a1) * sup_from(&p1, s)
                + t.powf(two * alpha - T::lit(4.0) - alpha * a2) * sup_from(&p2, s)
        })
        .collect();
    let half = T::lit(0.5);
    Ok(ts
        .windows(2)
        .zip(g.windows(2))
        .map(|(t, g)| half * (t[1] - t[0]) * (g[0] + g[1]))
        .sum())
}

use super::{check_time, d_alpha_minus1, i_two_minus_alpha, SeriesSolution};
use crate::fractional_ops::differentiate;
use crate::mittag_leffler::ml_value;
use crate::spectral_domain::{graded_norm, ModalData};
use crate::{Error, Real, Result};

/// Distances to the initial data along a sequence of times.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialCheck<T> {
    pub times: Vec<T>,
    /// `‖D^{α−1}u(t) − u₁‖` in `D((−Δ)^{−θ})`
    pub err1: Vec<T>,
    /// `‖I^{2−α}u(t) − u₂‖` in L²
    pub err2: Vec<T>,
}

impl<T: Real> InitialCheck<T> {
    /// Both errors are nonincreasing along the sequence.
    pub fn is_monotone(&self) -> bool {
        let down = |v: &[T]| v.windows(2).all(|w| w[1] <= w[0]);
        down(&self.err1) && down(&self.err2)
    }

    /// Errors at the last (smallest) time.
    pub fn last(&self) -> (T, T) {
        (
            self.err1[self.err1.len() - 1],
            self.err2[self.err2.len() - 1],
        )
    }
}

/// Evaluates the initial-condition limits along a decreasing sequence `t → 0+`.
///
/// `theta` must lie in `((2−α)/(2α), 1/2)`, where `D^{α−1}u` is continuous
/// into `D((−Δ)^{−θ})`.
pub fn initial_check<T: Real>(
    sol: &SeriesSolution<T>,
    times: &[T],
    theta: T,
) -> Result<InitialCheck<T>> {
    let a = sol.alpha();
    let two = T::lit(2.0);
    let (lo, hi) = ((two - a) / (two * a), T::lit(0.5));
    if !(theta > lo && theta < hi) {
        return Err(Error::InadmissibleExponent {
            theta: theta.as_f64(),
            mu: f64::NAN,
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    if times.is_empty() {
        return Err(Error::Invalid("empty time sequence".into()));
    }
    if times.windows(2).any(|w| !(w[1] < w[0])) {
        return Err(Error::Invalid("times must be strictly decreasing".into()));
    }
    let lambdas = sol.domain().lambdas();
    let (c1, c2) = (sol.data().c1(), sol.data().c2());
    let mut err1 = Vec::with_capacity(times.len());
    let mut err2 = Vec::with_capacity(times.len());
    for &t in times {
        check_time(t)?;
        let d: Vec<T> = d_alpha_minus1(sol, t)?
            .iter()
            .zip(c1)
            .map(|(&v, &c)| v - c)
            .collect();
        let i: Vec<T> = i_two_minus_alpha(sol, t)?
            .iter()
            .zip(c2)
            .map(|(&v, &c)| v - c)
            .collect();
        err1.push(graded_norm(&d, -theta, &lambdas));
        err2.push(graded_norm(&i, T::zero(), &lambdas));
    }
    Ok(InitialCheck {
        times: times.to_vec(),
        err1,
        err2,
    })
}

/// Checks that `v = I^{2−α}u` solves the wave equation `v_tt = Δu` mode by mode.
///
/// `vₙ` comes from its closed form, `v_tt` from second differences on `times`
/// (three-point inside, five-point one-sided at the ends); the result is
/// `max |δ²vₙ + λₙuₙ|` over modes and times.
pub fn caputo_transform_check<T: Real>(sol: &SeriesSolution<T>, times: &[T]) -> Result<T> {
    const MIN_STEPS: usize = 32;
    if times.len() < MIN_STEPS + 1 {
        return Err(Error::GridTooCoarse(format!(
            "{} times, need at least {}",
            times.len(),
            MIN_STEPS + 1
        )));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Invalid("times must be strictly increasing".into()));
    }
    let n = sol.domain().n_modes();
    let mut v = vec![Vec::with_capacity(times.len()); n];
    let mut u = vec![Vec::with_capacity(times.len()); n];
    for &t in times {
        for (k, (vk, uk)) in i_two_minus_alpha(sol, t)?
            .into_iter()
            .zip(sol.modal_values(t)?)
            .enumerate()
        {
            v[k].push(vk);
            u[k].push(uk);
        }
    }
    let mut worst = T::zero();
    for (k, m) in sol.domain().eigenpairs().iter().enumerate() {
        let vtt = differentiate(times, &v[k], 2);
        for (a, b) in vtt.iter().zip(&u[k]) {
            worst = worst.max((*a + m.lambda * *b).abs());
        }
    }
    Ok(worst)
}

/// Weak-form residual against the test function `e_m` (1-based `m`).
///
/// `d/dt⟨D^{α−1}u, e_m⟩` is evaluated from the derivative identities of the
/// Mittag-Leffler functions, `−λ_m c1 t^{α−1}E_{α,α} − λ_m c2 t^{α−2}E_{α,α−1}`,
/// and compared with `−⟨∇u, ∇e_m⟩ = −λ_m u_m(t)` from the solution itself.
pub fn weak_form_residual<T: Real>(sol: &SeriesSolution<T>, m: usize, times: &[T]) -> Result<T> {
    let n = sol.domain().n_modes();
    if m == 0 || m > n {
        return Err(Error::Invalid(format!("test mode {m} outside 1..={n}")));
    }
    let k = m - 1;
    let a = sol.alpha();
    let lambda = sol.domain().eigenpairs()[k].lambda;
    let (c1, c2) = (sol.data().c1()[k], sol.data().c2()[k]);
    let mut worst = T::zero();
    for &t in times {
        check_time(t)?;
        let z = -lambda * t.powf(a);
        let mut deriv = T::zero();
        if c1 != T::zero() {
            deriv -= lambda * c1 * t.powf(a - T::one()) * ml_value(a, a, z)?;
        }
        if c2 != T::zero() {
            deriv -= lambda * c2 * t.powf(a - T::lit(2.0)) * ml_value(a, a - T::one(), z)?;
        }
        let stiffness = lambda * sol.modal_values(t)?[k];
        worst = worst.max((deriv + stiffness).abs());
    }
    Ok(worst)
}

/// `n` log-spaced times in `[lo, hi]`.
pub(crate) fn log_space<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    let r = (hi / lo).ln();
    let d = T::from_index(n - 1);
    (0..n)
        .map(|i| lo * (r * T::from_index(i) / d).exp())
        .collect()
}

/// Ordinary least-squares slope of `ys` against `xs`.
pub(crate) fn ls_slope<T: Real>(xs: &[T], ys: &[T]) -> T {
    let n = T::from_index(xs.len());
    let mx = xs.iter().copied().sum::<T>() / n;
    let my = ys.iter().copied().sum::<T>() / n;
    let (mut sxy, mut sxx) = (T::zero(), T::zero());
    for (&x, &y) in xs.iter().zip(ys) {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
    }
    sxy / sxx
}

fn check_window<T: Real>(window: (T, T), samples: usize) -> Result<()> {
    if samples < 5 {
        return Err(Error::Invalid(format!(
            "{samples} samples in the fit window, need at least 5"
        )));
    }
    let (lo, hi) = window;
    if !(lo > T::zero() && hi > lo && hi.is_finite()) {
        return Err(Error::Invalid("fit window must satisfy 0 < lo < hi".into()));
    }
    Ok(())
}

/// Log-log slopes of `‖u(t)‖_{H²}` for the two halves of the data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecaySlopes<T> {
    /// Data `(u₁, 0)`; `None` when `u₁ = 0`.
    pub u1: Option<T>,
    /// Data `(0, u₂)`; `None` when `u₂ = 0`.
    pub u2: Option<T>,
}

/// Least-squares decay slopes of `‖u(t)‖_{H²}` over `samples` log-spaced
/// times in `window`, separately for the `u₁` and `u₂` parts of the data.
///
/// The solution's horizon is ignored here: decay is a statement about all `t > 0`.
pub fn decay_slopes<T: Real>(
    sol: &SeriesSolution<T>,
    window: (T, T),
    samples: usize,
) -> Result<DecaySlopes<T>> {
    check_window(window, samples)?;
    let domain = sol.domain().clone();
    let zeros = vec![T::zero(); domain.n_modes()];
    let ts = log_space(window.0, window.1, samples);
    let logt: Vec<T> = ts.iter().map(|t| t.ln()).collect();
    let fit = |c1: &[T], c2: &[T]| -> Result<Option<T>> {
        if c1.iter().chain(c2).all(|&c| c == T::zero()) {
            return Ok(None);
        }
        let data = ModalData::new(domain.clone(), c1.to_vec(), c2.to_vec())?;
        let part = SeriesSolution::new(sol.alpha(), data, window.1)?;
        let logn = ts
            .iter()
            .map(|&t| Ok(part.norm(t, T::one())?.ln()))
            .collect::<Result<Vec<T>>>()?;
        Ok(Some(ls_slope(&logt, &logn)))
    };
    Ok(DecaySlopes {
        u1: fit(sol.data().c1(), &zeros)?,
        u2: fit(&zeros, sol.data().c2())?,
    })
}

/// Largest value over `samples` log-spaced times in `window` of
///
/// ```text
/// ‖u(t)‖_{H²} / (K₁‖u₁‖/t + K₂‖u₂‖/t²),   K₁ = sup_s s|E_{α,α}(−s)|,   K₂ = sup_s s|E_{α,α−1}(−s)|
/// ```
///
/// Mode by mode `λₙ|uₙ(t)| ≤ K₁|c1ₙ|/t + K₂|c2ₙ|/t²`, so the result is at
/// most 1 up to the sampling of the suprema (s ∈ [1e-4, 1e6]). Zero data gives 0.
pub fn decay_bound_ratio<T: Real>(
    sol: &SeriesSolution<T>,
    window: (T, T),
    samples: usize,
) -> Result<T> {
    check_window(window, samples)?;
    if sol.data().is_zero() {
        return Ok(T::zero());
    }
    let a = sol.alpha();
    let (mut k1, mut k2) = (T::zero(), T::zero());
    for s in log_space(T::lit(1e-4), T::lit(1e6), 6001) {
        k1 = k1.max(s * ml_value(a, a, -s)?.abs());
        k2 = k2.max(s * ml_value(a, a - T::one(), -s)?.abs());
    }
    let norm = |c: &[T]| c.iter().map(|&v| v * v).sum::<T>().sqrt();
    let (n1, n2) = (norm(sol.data().c1()), norm(sol.data().c2()));
    let long = sol.with_horizon(window.1)?;
    let mut worst = T::zero();
    for t in log_space(window.0, window.1, samples) {
        let bound = (k1 * n1 + k2 * n2 / t) / t;
        worst = worst.max(long.norm(t, T::one())? / bound);
    }
    Ok(worst)
}

/// Worst-case growth of `‖u(t)‖²_{H¹₀}` over a finite set of modes.
///
/// With `g₁(t) = maxₙ λₙ (t^{α−1}E_{α,α}(−λₙt^α))²` and
/// `g₂(t) = maxₙ (t^{α−2}E_{α,α−1}(−λₙt^α))²`,
///
/// ```text
/// ‖u(t)‖²_{H¹₀} ≤ 2 g₁(t) ‖u₁‖² + 2 g₂(t) ‖∇u₂‖²,   g₁ ≤ c1 t^{α−2},   g₂ ≤ c2 t^{2α−4}
/// ```
///
/// where `c1 = sup_s s E_{α,α}(−s)²` and `c2 = sup_s E_{α,α−1}(−s)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeFit<T> {
    /// Maximiser of `s E_{α,α}(−s)²`.
    pub s_star: T,
    pub c1: T,
    pub c2: T,
    /// Fitted log-log slope of `g₁`, over times where the maximising
    /// eigenvalue `s*/t^α` lies between `λ_{⌈N/4⌉}` and `λ_N`.
    pub slope_u1: T,
    /// Fitted log-log slope of `g₂` over `λ₁t^α ∈ [1e-5, 1e-2]`.
    pub slope_u2: T,
    pub window_u1: (T, T),
    pub window_u2: (T, T),
}

/// Fits [`EnvelopeFit`] for the eigenvalues `lambdas` (ascending) with
/// `samples` log-spaced times per window. Needs at least 4 modes.
pub fn envelope_slopes<T: Real>(alpha: T, lambdas: &[T], samples: usize) -> Result<EnvelopeFit<T>> {
    super::check_alpha(alpha)?;
    if lambdas.len() < 4 {
        return Err(Error::Invalid("envelope fit needs at least 4 modes".into()));
    }
    let one = T::one();
    let two = T::lit(2.0);
    let f1 = |s: T| -> Result<T> { Ok(s * ml_value(alpha, alpha, -s)?.powi(2)) };
    let f2 = |s: T| -> Result<T> { Ok(ml_value(alpha, alpha - one, -s)?.powi(2)) };
    let (mut s_star, mut c1, mut c2) = (T::zero(), T::zero(), f2(T::zero())?);
    for s in log_space(T::lit(1e-4), T::lit(1e4), 4001) {
        let v = f1(s)?;
        if v > c1 {
            (s_star, c1) = (s, v);
        }
        c2 = c2.max(f2(s)?);
    }
    let inv = one / alpha;
    let n = lambdas.len();
    let window_u1 = (
        (s_star / lambdas[n - 1]).powf(inv),
        (s_star / lambdas[n.div_ceil(4) - 1]).powf(inv),
    );
    let window_u2 = (
        (T::lit(1e-5) / lambdas[0]).powf(inv),
        (T::lit(1e-2) / lambdas[0]).powf(inv),
    );
    check_window(window_u1, samples)?;
    let fit = |window: (T, T), g: &dyn Fn(T) -> Result<T>| -> Result<T> {
        let ts = log_space(window.0, window.1, samples);
        let mut ys = Vec::with_capacity(samples);
        for &t in &ts {
            ys.push(g(t)?.ln());
        }
        let xs: Vec<T> = ts.iter().map(|t| t.ln()).collect();
        Ok(ls_slope(&xs, &ys))
    };
    let g1 = |t: T| -> Result<T> {
        let mut m = T::zero();
        for &l in lambdas {
            let v = l * (t.powf(alpha - one) * ml_value(alpha, alpha, -l * t.powf(alpha))?).powi(2);
            m = m.max(v);
        }
        Ok(m)
    };
    let g2 = |t: T| -> Result<T> {
        let mut m = T::zero();
        for &l in lambdas {
            let z = -l * t.powf(alpha);
            let v = (t.powf(alpha - two) * ml_value(alpha, alpha - one, z)?).powi(2);
            m = m.max(v);
        }
        Ok(m)
    };
    Ok(EnvelopeFit {
        s_star,
        c1,
        c2,
        slope_u1: fit(window_u1, &g1)?,
        slope_u2: fit(window_u2, &g2)?,
        window_u1,
        window_u2,
    })
}

use super::check_alpha;
use super::trace::{apply, boundary_nodes, trace_energy, trace_matrix, TraceSeries};
use crate::fractional_ops::{left_weights, TimeGrid, DEFAULT_RATIO};
use crate::rl_solver::SeriesSolution;
use crate::spectral_domain::{simpson_weights, synthesize, DomainKind, ModalData, SpatialGrid};
use crate::{Error, Real, Result};

/// Modal rows at `times`, each time stored with its mirror `T − t`.
///
/// [`reversed`](Self::reversed) swaps the two time columns and reverses the
/// row order, so reversing twice gives back the identical series.
#[derive(Debug, Clone, PartialEq)]
pub struct ReversibleSeries<T> {
    pub times: Vec<T>,
    pub mirror: Vec<T>,
    pub rows: Vec<Vec<T>>,
}

impl<T: Real> ReversibleSeries<T> {
    /// Forward solution at every grid time; `t = 0` is kept only when the
    /// solution is finite there (`u₂ = 0`).
    pub fn forward(sol: &SeriesSolution<T>, grid: &TimeGrid<T>) -> Result<Self> {
        let horizon = grid.horizon();
        let sol = sol.with_horizon(horizon)?;
        let finite_at_zero = sol.data().c2().iter().all(|&c| c == T::zero());
        let n = sol.domain().n_modes();
        let (mut times, mut mirror, mut rows) = (Vec::new(), Vec::new(), Vec::new());
        for &t in grid.points() {
            let row = if t > T::zero() {
                sol.modal_values(t)?
            } else if finite_at_zero {
                vec![T::zero(); n]
            } else {
                continue;
            };
            times.push(t);
            mirror.push(horizon - t);
            rows.push(row);
        }
        Ok(ReversibleSeries {
            times,
            mirror,
            rows,
        })
    }

    pub fn reversed(&self) -> Self {
        let rev = |v: &Vec<T>| v.iter().rev().copied().collect::<Vec<T>>();
        ReversibleSeries {
            times: rev(&self.mirror),
            mirror: rev(&self.times),
            rows: self.rows.iter().rev().cloned().collect(),
        }
    }
}

/// Solution `w` of the backward problem `D^α_{T−}w = Δw` with final data
/// `(w₁, w₂)`, as `w(t) = v(T − t)` where `v` solves the forward problem with
/// data `(w₁, w₂)`. `grid` discretises the forward variable `s = T − t` on
/// `[0, T]`.
pub fn adjoint_solve<T: Real>(
    data: &ModalData<T>,
    alpha: T,
    grid: &TimeGrid<T>,
) -> Result<ReversibleSeries<T>> {
    check_alpha(alpha)?;
    let v = SeriesSolution::new(alpha, data.clone(), grid.horizon())?;
    Ok(ReversibleSeries::forward(&v, grid)?.reversed())
}

/// Boundary-driven Caputo problem on `[0, L]` with zero initial data:
///
/// ```text
/// ᶜD^α u = u_xx + f,   u(t, 0) = left(t),   u(t, L) = right(t),   u(0) = u_t(0) = 0
/// ```
pub struct FdProblem<'a, T> {
    pub alpha: T,
    pub length: T,
    /// Spatial nodes including both ends.
    pub points: usize,
    /// Uniform time grid.
    pub times: &'a TimeGrid<T>,
    pub left: &'a [T],
    pub right: &'a [T],
    pub source: Option<&'a dyn Fn(T, T) -> T>,
}

/// Terminal state of [`solve_fd`].
#[derive(Debug, Clone, PartialEq)]
pub struct FdTerminal<T> {
    pub x: Vec<T>,
    pub u: Vec<T>,
    /// One-sided second-order difference at `T`.
    pub u_t: Vec<T>,
}

pub const FD_MIN_STEPS: usize = 256;
pub const FD_MIN_POINTS: usize = 129;
const GROWTH_LIMIT: f64 = 1e6;

/// Finite-difference solve of an [`FdProblem`].
///
/// With zero initial data the Caputo and Riemann-Liouville derivatives agree,
/// so `G = I^{2−α}u` (product-trapezoid weights) obeys `G'' = u_xx + f`,
/// `G(0) = G'(0) = 0`. That is stepped with
///
/// ```text
/// G^{n+1} − 2G^n + G^{n−1} = τ²/4 · (L^{n+1} + 2L^n + L^{n−1}),   L = δₓ²u + f
/// ```
///
/// and `G¹ = τ²(L⁰/3 + L¹/6)` for the first step; each step is one
/// tridiagonal solve for the interior of `u^{n+1}`.
pub fn solve_fd<T: Real>(p: &FdProblem<'_, T>) -> Result<FdTerminal<T>> {
    if !(p.alpha > T::one() && p.alpha < T::lit(2.0)) {
        return Err(Error::param("alpha", p.alpha, "must lie in (1, 2)"));
    }
    if !(p.length > T::zero()) {
        return Err(Error::param("L", p.length, "must be positive"));
    }
    if !p.times.is_uniform() {
        return Err(Error::Invalid(
            "the Caputo solver needs a uniform time grid".into(),
        ));
    }
    let m = p.times.steps();
    if m < FD_MIN_STEPS || p.points < FD_MIN_POINTS {
        return Err(Error::GridTooCoarse(format!(
            "M = {m}, {} spatial points; need M >= {FD_MIN_STEPS} and >= {FD_MIN_POINTS} points",
            p.points
        )));
    }
    if p.left.len() != m + 1 || p.right.len() != m + 1 {
        return Err(Error::Invalid(format!(
            "boundary data has {}/{} samples for {} times",
            p.left.len(),
            p.right.len(),
            m + 1
        )));
    }
    let tp = p.times.points();
    let tau = p.times.horizon() / T::from_index(m);
    let np = p.points;
    let dx = p.length / T::from_index(np - 1);
    let mut x: Vec<T> = (0..np).map(|i| dx * T::from_index(i)).collect();
    x[np - 1] = p.length;

    // lag weights of I^{2−α}: G^j = Σ_i b[j−i] U^i
    let row = left_weights(T::lit(2.0) - p.alpha, tp, m);
    let b: Vec<T> = (0..=m).map(|k| row[m - k]).collect();

    let f_at = |j: usize| -> Vec<T> {
        match p.source {
            Some(f) => x.iter().map(|&xi| f(tp[j], xi)).collect(),
            None => vec![T::zero(); np],
        }
    };
    let lap = |u: &[T], i: usize| (u[i - 1] - T::lit(2.0) * u[i] + u[i + 1]) / (dx * dx);

    let mut u: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    let mut first = vec![T::zero(); np];
    first[0] = p.left[0];
    first[np - 1] = p.right[0];
    u.push(first);
    // G^{n−1}, G^n; G⁰ = 0
    let mut g_prev = vec![T::zero(); np];
    let mut g_cur = vec![T::zero(); np];
    let mut f_prev = f_at(0);
    let mut f_cur = f_prev.clone();
    let bnd_scale = p
        .left
        .iter()
        .chain(p.right)
        .fold(T::zero(), |a, &v| a.max(v.abs()));
    // size the solution may reach: boundary data, or source × T^α
    let t_alpha = p.times.horizon().powf(p.alpha);
    let mut scale = bnd_scale.max(f_prev.iter().fold(T::zero(), |a, &v| a.max(v.abs())) * t_alpha);

    let n_int = np - 2;
    let mut rhs = vec![T::zero(); n_int];
    for n in 0..m {
        let f_next = f_at(n + 1);
        scale = scale.max(f_next.iter().fold(T::zero(), |a, &v| a.max(v.abs())) * t_alpha);
        let mut hist = vec![T::zero(); np];
        for (i, ui) in u.iter().enumerate() {
            let wgt = b[n + 1 - i];
            for (h, &v) in hist.iter_mut().zip(ui) {
                *h += wgt * v;
            }
        }
        let c = if n == 0 {
            tau * tau / T::lit(6.0)
        } else {
            tau * tau / T::lit(4.0)
        };
        for i in 1..np - 1 {
            rhs[i - 1] = if n == 0 {
                -hist[i] + c * (T::lit(2.0) * (lap(&u[0], i) + f_cur[i]) + f_next[i])
            } else {
                let (un, um) = (&u[n], &u[n - 1]);
                -hist[i] + T::lit(2.0) * g_cur[i] - g_prev[i]
                    + c * (T::lit(2.0) * lap(un, i)
                        + lap(um, i)
                        + f_next[i]
                        + T::lit(2.0) * f_cur[i]
                        + f_prev[i])
            };
        }
        let off = -c / (dx * dx);
        let diag = b[0] + T::lit(2.0) * c / (dx * dx);
        let (lb, rb) = (p.left[n + 1], p.right[n + 1]);
        rhs[0] -= off * lb;
        rhs[n_int - 1] -= off * rb;
        let interior = thomas(off, diag, &rhs);
        let mut next = Vec::with_capacity(np);
        next.push(lb);
        next.extend(interior);
        next.push(rb);

        let norm = next.iter().fold(T::zero(), |a, &v| a.max(v.abs()));
        if n == 0 {
            scale = scale.max(norm);
        }
        if !norm.is_finite() || (scale > T::zero() && norm > T::lit(GROWTH_LIMIT) * scale) {
            return Err(Error::Instability {
                operation: "caputo_fd_solve",
                step: n + 1,
                growth: (norm / scale).as_f64(),
            });
        }
        let g_next: Vec<T> = hist
            .iter()
            .zip(&next)
            .map(|(&h, &v)| h + b[0] * v)
            .collect();
        g_prev = std::mem::replace(&mut g_cur, g_next);
        f_prev = std::mem::replace(&mut f_cur, f_next);
        u.push(next);
    }
    let (a, bm, cm) = (&u[m], &u[m - 1], &u[m - 2]);
    let u_t = (0..np)
        .map(|i| (T::lit(3.0) * a[i] - T::lit(4.0) * bm[i] + cm[i]) / (T::lit(2.0) * tau))
        .collect();
    Ok(FdTerminal {
        x,
        u: u.swap_remove(m),
        u_t,
    })
}

/// Constant-coefficient tridiagonal solve.
fn thomas<T: Real>(off: T, diag: T, rhs: &[T]) -> Vec<T> {
    let n = rhs.len();
    let mut c = vec![T::zero(); n];
    let mut d = vec![T::zero(); n];
    c[0] = off / diag;
    d[0] = rhs[0] / diag;
    for i in 1..n {
        let den = diag - off * c[i - 1];
        c[i] = off / den;
        d[i] = (rhs[i] - off * d[i - 1]) / den;
    }
    let mut out = d;
    for i in (0..n - 1).rev() {
        out[i] = out[i] - c[i] * out[i + 1];
    }
    out
}

/// [`solve_fd`] with boundary values taken from an interval trace sampled on
/// `times` (node 0 at `x = 0`, node 1 at `x = L`) and no source.
pub fn caputo_fd_solve<T: Real>(
    g: &TraceSeries<T>,
    alpha: T,
    points: usize,
    times: &TimeGrid<T>,
) -> Result<FdTerminal<T>> {
    if g.nodes.len() != 2 {
        return Err(Error::Invalid(
            "the Caputo solver takes interval traces (two boundary nodes)".into(),
        ));
    }
    let tol = T::lit(1e-12) * times.horizon();
    if g.times.len() != times.points().len()
        || g.times
            .iter()
            .zip(times.points())
            .any(|(&a, &b)| (a - b).abs() > tol)
    {
        return Err(Error::Invalid(
            "trace times do not match the time grid".into(),
        ));
    }
    let left: Vec<T> = g.values.iter().map(|r| r[0]).collect();
    let right: Vec<T> = g.values.iter().map(|r| r[1]).collect();
    solve_fd(&FdProblem {
        alpha,
        length: g.nodes[1].x,
        points,
        times,
        left: &left,
        right: &right,
        source: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DualityReport<T> {
    /// `−⟨u(T), w₁⟩ − ⟨u_t(T), w₂⟩`
    pub lhs: T,
    /// Trace energy of `w`.
    pub rhs: T,
    pub rel_err: T,
    /// `⟨u(T), w₁⟩ − ⟨u_t(T), w₂⟩`, the pairing with the opposite sign on the
    /// state term; equals `−rhs` up to discretisation error.
    pub lhs_alt: T,
}

/// Graded steps used for the trace energy in [`duality_check`].
pub const DUALITY_TRACE_STEPS: usize = 1024;

/// Pairs the terminal state of the Caputo problem driven by `g = ∂_ν w` with
/// the final data `(w₁, w₂)` of the adjoint solution `w`, and compares with
/// `∫₀ᵀ ∫_{∂Ω} |∂_ν w|²`. `steps` and `points` set the FD resolution.
///
/// Only `w₂ = 0` is accepted: otherwise `∂_ν w ~ (T−t)^{α−2}` is unbounded at
/// `t = T` and cannot be sampled as boundary data.
pub fn duality_check<T: Real>(
    data: &ModalData<T>,
    alpha: T,
    horizon: T,
    steps: usize,
    points: usize,
) -> Result<DualityReport<T>> {
    check_alpha(alpha)?;
    let DomainKind::Interval { .. } = data.domain().kind() else {
        return Err(Error::Invalid("the duality check runs on intervals".into()));
    };
    if data.c2().iter().any(|&c| c != T::zero()) {
        return Err(Error::Invalid(
            "duality check needs w2 = 0: the boundary data is singular at t = T otherwise".into(),
        ));
    }
    let times = TimeGrid::uniform(horizon, steps)?;
    let w = adjoint_solve(data, alpha, &times)?;
    let domain = data.domain();
    let nodes = boundary_nodes(domain);
    let tm = trace_matrix(domain, &nodes);
    let g = TraceSeries {
        nodes,
        times: w.times.clone(),
        values: w.rows.iter().map(|r| apply(&tm, r)).collect(),
    };
    let fd = caputo_fd_solve(&g, alpha, points, &times)?;

    let sw = simpson_weights(&fd.x);
    let grid = SpatialGrid::from_axes(fd.x.clone(), None);
    let w1 = synthesize(domain, data.c1(), &grid);
    let w2 = synthesize(domain, data.c2(), &grid);
    let dot = |a: &[T], b: &[T]| -> T {
        sw.iter()
            .zip(a)
            .zip(b)
            .map(|((&s, &p), &q)| s * p * q)
            .sum()
    };
    let (state, velocity) = (dot(&fd.u, &w1), dot(&fd.u_t, &w2));

    let v = SeriesSolution::new(alpha, data.clone(), horizon)?;
    let rhs = trace_energy(
        &v,
        &TimeGrid::geometric(horizon, DUALITY_TRACE_STEPS, T::lit(DEFAULT_RATIO))?,
    )?;
    let lhs = -state - velocity;
    Ok(DualityReport {
        lhs,
        rhs,
        rel_err: (lhs - rhs).abs() / rhs.max(T::min_positive_value()),
        lhs_alt: state - velocity,
    })
}

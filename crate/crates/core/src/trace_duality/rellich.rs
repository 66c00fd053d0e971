use std::fmt;
use std::sync::Arc;

use crate::rl_solver::{d_alpha, SeriesSolution};
use crate::spectral_domain::{check_resolution, DomainKind, SpatialGrid};
use crate::{Error, Real, Result};

/// θ recorded with every Rellich report. For finite-mode solutions the
/// `⟨·,·⟩_{−θ,θ}` pairing is the L² product, so θ does not enter the numbers.
pub const RELLICH_THETA: f64 = 0.3;

type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

/// A C¹ field `h` on `[0, L]` with `h = ν` at both ends, and its derivative.
#[derive(Clone)]
pub struct VectorFieldH<T> {
    h: ScalarFn<T>,
    dh: ScalarFn<T>,
}

impl<T> fmt::Debug for VectorFieldH<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("VectorFieldH { .. }")
    }
}

impl<T: Real> VectorFieldH<T> {
    pub fn new(
        h: impl Fn(T) -> T + Send + Sync + 'static,
        dh: impl Fn(T) -> T + Send + Sync + 'static,
    ) -> Self {
        VectorFieldH {
            h: Arc::new(h),
            dh: Arc::new(dh),
        }
    }

    /// `h(x) = (2x − L)/L`
    pub fn affine(length: T) -> Self {
        let two = T::lit(2.0);
        Self::new(move |x| (two * x - length) / length, move |_| two / length)
    }

    pub fn value(&self, x: T) -> T {
        (self.h)(x)
    }

    pub fn derivative(&self, x: T) -> T {
        (self.dh)(x)
    }

    /// Checks `h(σ)ν(σ) = 1` at both ends to 1e-12 and the derivative
    /// against central differences at interior points.
    pub fn validate(&self, length: T) -> Result<()> {
        let one = T::one();
        let tol = T::lit(1e-12);
        for (x, nu) in [(T::zero(), -one), (length, one)] {
            let hn = self.value(x) * nu;
            if !((hn - one).abs() <= tol) {
                return Err(Error::Invalid(format!(
                    "h·ν = {hn} at x = {x}; h must equal the outward normal on the boundary"
                )));
            }
        }
        let delta = length * T::lit(1e-5);
        for i in 1..64 {
            let x = length * T::from_index(i) / T::lit(64.0);
            let fd = (self.value(x + delta) - self.value(x - delta)) / (T::lit(2.0) * delta);
            let d = self.derivative(x);
            if !((fd - d).abs() <= T::lit(1e-5) * d.abs().max(one / length)) {
                return Err(Error::Invalid(format!(
                    "h is not C¹ or h' is wrong at x = {x}: {d} vs difference quotient {fd}"
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RellichReport<T> {
    /// `Σ_{σ∈∂Ω} [∂_ν u · h·∇u − ½ h·ν |∇u|²]`
    pub lhs: T,
    /// `∫ D^αu · h ∂ₓu + ∫ h' (∂ₓu)² − ½ ∫ h' (∂ₓu)²`
    pub rhs: T,
    pub residual: T,
    pub theta: T,
}

/// Both sides of the Rellich identity for the 1-D solution at time `t`,
/// with interior integrals by Simpson's rule on `points` nodes (odd).
///
/// `D^αu` comes from its modal closed form and `∂ₓu` from differentiated
/// modes, so the two sides share only the modal values `uₙ(t)`.
pub fn rellich_residual<T: Real>(
    sol: &SeriesSolution<T>,
    h: &VectorFieldH<T>,
    t: T,
    theta: T,
    points: usize,
) -> Result<RellichReport<T>> {
    let length = match sol.domain().kind() {
        DomainKind::Interval { length } => length,
        DomainKind::Rectangle { .. } => {
            return Err(Error::Invalid(
                "the Rellich check is implemented on intervals".into(),
            ))
        }
    };
    if !(theta > T::zero() && theta < T::one()) {
        return Err(Error::param("theta", theta, "must lie in (0, 1)"));
    }
    h.validate(length)?;
    let grid = SpatialGrid::uniform(sol.domain(), points)?;
    let w = grid.weights()?;
    check_resolution(sol.domain(), &grid)?;

    let domain = sol.domain();
    let u = sol.modal_values(t)?;
    let du = d_alpha(sol, t)?;
    let slope = |x: T| -> T {
        (0..u.len())
            .map(|k| u[k] * domain.grad_mode(k, x, T::zero()).0)
            .sum()
    };
    let half = T::lit(0.5);
    let (mut pairing, mut stretch) = (T::zero(), T::zero());
    for (&x, &wi) in grid.xs().iter().zip(&w) {
        let ux = slope(x);
        let dau: T = (0..u.len())
            .map(|k| du[k] * domain.eval_mode(k, x, T::zero()))
            .sum();
        pairing += wi * dau * h.value(x) * ux;
        stretch += wi * h.derivative(x) * ux * ux;
    }
    let rhs = pairing + stretch - half * stretch;

    let mut lhs = T::zero();
    for (x, nu) in [(T::zero(), -T::one()), (length, T::one())] {
        let ux = slope(x);
        let hx = h.value(x);
        lhs += nu * ux * hx * ux - half * hx * nu * ux * ux;
    }
    Ok(RellichReport {
        lhs,
        rhs,
        residual: (lhs - rhs).abs(),
        theta,
    })
}

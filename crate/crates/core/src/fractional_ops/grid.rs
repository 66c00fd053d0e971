use crate::{Error, Real, Result};

/// Default ratio of consecutive steps in the graded part of a geometric grid.
pub const DEFAULT_RATIO: f64 = 0.85;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Grading<T> {
    Uniform,
    /// A quarter of the steps shrink geometrically towards 0 inside [0, T/10];
    /// the rest are uniform on [T/10, T].
    Geometric {
        ratio: T,
    },
    /// Points supplied by the caller.
    Custom,
}

/// Strictly increasing times `0 = t₀ < t₁ < … < t_M = T`, M ≥ 8.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeGrid<T> {
    points: Vec<T>,
    grading: Grading<T>,
}

impl<T: Real> TimeGrid<T> {
    pub const MIN_STEPS: usize = 8;

    pub fn uniform(horizon: T, steps: usize) -> Result<Self> {
        check_horizon(horizon)?;
        check_steps(steps)?;
        let m = T::from_index(steps);
        let mut points: Vec<T> = (0..=steps)
            .map(|i| horizon * T::from_index(i) / m)
            .collect();
        points[steps] = horizon;
        Ok(TimeGrid {
            points,
            grading: Grading::Uniform,
        })
    }

    pub fn geometric(horizon: T, steps: usize, ratio: T) -> Result<Self> {
        check_horizon(horizon)?;
        check_steps(steps)?;
        if !(ratio > T::zero() && ratio < T::one()) {
            return Err(Error::param("ratio", ratio, "must lie in (0, 1)"));
        }
        let graded = steps / 4;
        let rest = steps - graded;
        let knee = horizon / T::lit(10.0);
        let mut points = Vec::with_capacity(steps + 1);
        points.push(T::zero());
        for k in 1..graded {
            points.push(knee * ratio.powi((graded - k) as i32));
        }
        let r = T::from_index(rest);
        for i in 0..=rest {
            points.push(knee + (horizon - knee) * T::from_index(i) / r);
        }
        points[steps] = horizon;
        Ok(TimeGrid {
            points,
            grading: Grading::Geometric { ratio },
        })
    }

    /// Builds a grid from explicit points, checking t₀ = 0, monotonicity and M ≥ 8.
    pub fn from_points(points: Vec<T>) -> Result<Self> {
        if points.len() < Self::MIN_STEPS + 1 {
            return Err(Error::GridTooCoarse(format!(
                "{} points, need at least {}",
                points.len(),
                Self::MIN_STEPS + 1
            )));
        }
        if points[0] != T::zero() {
            return Err(Error::param("t0", points[0], "time grids start at 0"));
        }
        if points
            .windows(2)
            .any(|w| !(w[1] > w[0]) || !w[1].is_finite())
        {
            return Err(Error::Invalid(
                "grid points must be finite and strictly increasing".into(),
            ));
        }
        Ok(TimeGrid {
            points,
            grading: Grading::Custom,
        })
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    /// Number of cells M.
    pub fn steps(&self) -> usize {
        self.points.len() - 1
    }

    pub fn horizon(&self) -> T {
        self.points[self.points.len() - 1]
    }

    pub fn grading(&self) -> Grading<T> {
        self.grading
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.grading, Grading::Uniform)
    }

    /// Every other point; `None` when M is odd or the result would be too short.
    pub fn coarsen(&self) -> Option<Self> {
        if !self.steps().is_multiple_of(2) || self.steps() / 2 < Self::MIN_STEPS {
            return None;
        }
        Some(TimeGrid {
            points: self.points.iter().step_by(2).copied().collect(),
            grading: self.grading,
        })
    }
}

fn check_horizon<T: Real>(horizon: T) -> Result<()> {
    if horizon > T::zero() && horizon.is_finite() {
        Ok(())
    } else {
        Err(Error::param("T", horizon, "horizon must be positive"))
    }
}

fn check_steps(steps: usize) -> Result<()> {
    if steps < 8 {
        return Err(Error::GridTooCoarse(format!("M = {steps}, need M >= 8")));
    }
    Ok(())
}

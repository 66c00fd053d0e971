use super::TimeGrid;
use crate::{Error, Real, Result};

/// Where a [`PowerTerm`] is singular: `t = 0` or `t = T`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Anchor {
    Origin,
    Horizon,
}

/// `coef · d(t)^exponent` with `d(t) = t` (origin) or `T − t` (horizon).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerTerm<T> {
    pub coef: T,
    pub exponent: T,
    pub anchor: Anchor,
}

impl<T: Real> PowerTerm<T> {
    pub fn origin(coef: T, exponent: T) -> Self {
        PowerTerm {
            coef,
            exponent,
            anchor: Anchor::Origin,
        }
    }

    pub fn horizon(coef: T, exponent: T) -> Self {
        PowerTerm {
            coef,
            exponent,
            anchor: Anchor::Horizon,
        }
    }

    pub fn eval(&self, t: T, horizon: T) -> T {
        let d = match self.anchor {
            Anchor::Origin => t,
            Anchor::Horizon => horizon - t,
        };
        if self.coef == T::zero() {
            return T::zero();
        }
        if d == T::zero() {
            return if self.exponent == T::zero() {
                self.coef
            } else if self.exponent > T::zero() {
                T::zero()
            } else {
                T::infinity().copysign(self.coef)
            };
        }
        self.coef * d.powf(self.exponent)
    }

    /// d/dt of the term; `None` when the derivative vanishes identically.
    pub fn derivative(&self) -> Option<Self> {
        if self.exponent == T::zero() || self.coef == T::zero() {
            return None;
        }
        let sign = match self.anchor {
            Anchor::Origin => T::one(),
            Anchor::Horizon => -T::one(),
        };
        Some(PowerTerm {
            coef: sign * self.coef * self.exponent,
            exponent: self.exponent - T::one(),
            anchor: self.anchor,
        })
    }
}

/// A function on a [`TimeGrid`]: samples of a regular part, interpolated
/// piecewise linearly, plus exact power terms carrying the endpoint
/// singularities.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction<T> {
    grid: TimeGrid<T>,
    values: Vec<T>,
    terms: Vec<PowerTerm<T>>,
}

impl<T: Real> SampledFunction<T> {
    pub fn new(grid: TimeGrid<T>, values: Vec<T>) -> Result<Self> {
        if values.len() != grid.points().len() {
            return Err(Error::Invalid(format!(
                "{} samples for a grid of {} points",
                values.len(),
                grid.points().len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid("samples must be finite".into()));
        }
        Ok(SampledFunction {
            grid,
            values,
            terms: Vec::new(),
        })
    }

    pub fn from_fn(grid: TimeGrid<T>, f: impl Fn(T) -> T) -> Result<Self> {
        let values = grid.points().iter().map(|&t| f(t)).collect();
        Self::new(grid, values)
    }

    /// The zero function on `grid`.
    pub fn zeros(grid: TimeGrid<T>) -> Self {
        let values = vec![T::zero(); grid.points().len()];
        SampledFunction {
            grid,
            values,
            terms: Vec::new(),
        }
    }

    pub fn with_term(mut self, term: PowerTerm<T>) -> Self {
        if term.coef != T::zero() {
            self.terms.push(term);
        }
        self
    }

    pub fn grid(&self) -> &TimeGrid<T> {
        &self.grid
    }

    /// Samples of the regular part.
    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn terms(&self) -> &[PowerTerm<T>] {
        &self.terms
    }

    /// Full value at grid point `j`.
    pub fn value(&self, j: usize) -> T {
        let t = self.grid.points()[j];
        let horizon = self.grid.horizon();
        self.values[j] + self.terms.iter().map(|p| p.eval(t, horizon)).sum::<T>()
    }

    /// Full values at every grid point (infinite where a term is singular).
    pub fn evaluate(&self) -> Vec<T> {
        (0..self.values.len()).map(|j| self.value(j)).collect()
    }

    /// `a·self + b·other`; both must live on the same grid.
    pub fn axpby(&self, a: T, b: T, other: &Self) -> Result<Self> {
        if self.grid != other.grid {
            return Err(Error::Invalid("functions live on different grids".into()));
        }
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(&x, &y)| a * x + b * y)
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|p| PowerTerm {
                coef: a * p.coef,
                ..*p
            })
            .chain(other.terms.iter().map(|p| PowerTerm {
                coef: b * p.coef,
                ..*p
            }))
            .filter(|p| p.coef != T::zero())
            .collect();
        Ok(SampledFunction {
            grid: self.grid.clone(),
            values,
            terms,
        })
    }

    /// Moves every term anchored at `anchor` into the samples.
    pub fn fold(&self, anchor: Anchor) -> Result<Self> {
        let (folded, kept): (Vec<PowerTerm<T>>, Vec<PowerTerm<T>>) =
            self.terms.iter().partition(|p| p.anchor == anchor);
        let horizon = self.grid.horizon();
        let mut values = self.values.clone();
        for (v, &t) in values.iter_mut().zip(self.grid.points()) {
            for p in &folded {
                *v += p.eval(t, horizon);
            }
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::Invalid(
                "a singular power term cannot be folded into samples".into(),
            ));
        }
        Ok(SampledFunction {
            grid: self.grid.clone(),
            values,
            terms: kept,
        })
    }

    pub(crate) fn from_parts(grid: TimeGrid<T>, values: Vec<T>, terms: Vec<PowerTerm<T>>) -> Self {
        SampledFunction {
            grid,
            values,
            terms: terms.into_iter().filter(|p| p.coef != T::zero()).collect(),
        }
    }
}

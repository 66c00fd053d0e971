use super::{DomainKind, DomainSpec};
use crate::{Error, Real, Result};

/// Projection needs at least this many grid points per shortest wavelength.
pub const MIN_POINTS_PER_WAVELENGTH: usize = 8;

/// Tensor grid of spatial points; samples on a rectangle are stored with the
/// x index running fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct SpatialGrid<T> {
    xs: Vec<T>,
    ys: Option<Vec<T>>,
    /// Uniform, endpoint-inclusive, odd point count per axis.
    simpson: bool,
}

impl<T: Real> SpatialGrid<T> {
    /// Uniform grid with `points` nodes per axis, including the boundary.
    pub fn uniform(domain: &DomainSpec<T>, points: usize) -> Result<Self> {
        if points < 3 {
            return Err(Error::GridTooCoarse(format!(
                "{points} spatial points, need at least 3"
            )));
        }
        let axis = |l: T| -> Vec<T> {
            let m = T::from_index(points - 1);
            let mut v: Vec<T> = (0..points).map(|i| l * T::from_index(i) / m).collect();
            v[points - 1] = l;
            v
        };
        let (xs, ys) = match domain.kind() {
            DomainKind::Interval { length } => (axis(length), None),
            DomainKind::Rectangle { lx, ly } => (axis(lx), Some(axis(ly))),
        };
        Ok(SpatialGrid {
            xs,
            ys,
            simpson: points % 2 == 1,
        })
    }

    /// Arbitrary evaluation points; usable for synthesis only.
    pub fn from_axes(xs: Vec<T>, ys: Option<Vec<T>>) -> Self {
        SpatialGrid {
            xs,
            ys,
            simpson: false,
        }
    }

    pub fn xs(&self) -> &[T] {
        &self.xs
    }

    pub fn ys(&self) -> Option<&[T]> {
        self.ys.as_deref()
    }

    pub fn len(&self) -> usize {
        self.xs.len() * self.ys.as_ref().map_or(1, Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Quadrature weights matching the sample layout.
    pub fn weights(&self) -> Result<Vec<T>> {
        if !self.simpson {
            return Err(Error::Invalid(
                "quadrature needs a uniform grid with an odd number of points per axis".into(),
            ));
        }
        let wx = simpson_weights(&self.xs);
        Ok(match &self.ys {
            None => wx,
            Some(ys) => {
                let wy = simpson_weights(ys);
                wy.iter()
                    .flat_map(|&b| wx.iter().map(move |&a| a * b))
                    .collect()
            }
        })
    }

    fn points(&self) -> Vec<(T, T)> {
        match &self.ys {
            None => self.xs.iter().map(|&x| (x, T::zero())).collect(),
            Some(ys) => ys
                .iter()
                .flat_map(|&y| self.xs.iter().map(move |&x| (x, y)))
                .collect(),
        }
    }
}

/// Composite Simpson weights on uniform nodes (odd count).
pub fn simpson_weights<T: Real>(nodes: &[T]) -> Vec<T> {
    let n = nodes.len();
    debug_assert!(n % 2 == 1 && n >= 3);
    let h = (nodes[n - 1] - nodes[0]) / T::from_index(n - 1);
    let third = h / T::lit(3.0);
    (0..n)
        .map(|i| {
            if i == 0 || i == n - 1 {
                third
            } else if i % 2 == 1 {
                T::lit(4.0) * third
            } else {
                T::lit(2.0) * third
            }
        })
        .collect()
}

pub(crate) fn check_resolution<T: Real>(
    domain: &DomainSpec<T>,
    grid: &SpatialGrid<T>,
) -> Result<()> {
    let (nx, ny) = domain.max_axis_index();
    let axes = [
        (nx, grid.xs.len()),
        (ny, grid.ys.as_ref().map_or(0, Vec::len)),
    ];
    for (n, points) in axes {
        // wavelength 2L/n sampled at spacing L/(points−1)
        if n > 0 && 2 * (points - 1) < MIN_POINTS_PER_WAVELENGTH * n {
            return Err(Error::UnderResolved(format!(
                "{points} points per axis cannot resolve mode {n}; need {}",
                MIN_POINTS_PER_WAVELENGTH * n / 2 + 1
            )));
        }
    }
    Ok(())
}

fn check_layout<T: Real>(domain: &DomainSpec<T>, grid: &SpatialGrid<T>) -> Result<()> {
    let ok = match domain.kind() {
        DomainKind::Interval { length } => {
            grid.ys.is_none() && grid.xs[grid.xs.len() - 1] == length
        }
        DomainKind::Rectangle { lx, ly } => grid
            .ys
            .as_ref()
            .is_some_and(|ys| grid.xs[grid.xs.len() - 1] == lx && ys[ys.len() - 1] == ly),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::Invalid(
            "spatial grid does not cover the domain".into(),
        ))
    }
}

/// Modal coefficients `⟨f, eₙ⟩` of samples on a uniform Simpson grid.
pub fn project<T: Real>(
    domain: &DomainSpec<T>,
    grid: &SpatialGrid<T>,
    samples: &[T],
) -> Result<Vec<T>> {
    check_layout(domain, grid)?;
    if samples.len() != grid.len() {
        return Err(Error::Invalid(format!(
            "{} samples for a grid of {} points",
            samples.len(),
            grid.len()
        )));
    }
    let w = grid.weights()?;
    check_resolution(domain, grid)?;
    let points = grid.points();
    Ok((0..domain.n_modes())
        .map(|k| {
            points
                .iter()
                .zip(&w)
                .zip(samples)
                .map(|((&(x, y), &wi), &f)| wi * f * domain.eval_mode(k, x, y))
                .sum()
        })
        .collect())
}

/// `Σₙ cₙ eₙ` at the grid points.
///
/// Panics if the number of coefficients differs from the number of modes.
pub fn synthesize<T: Real>(
    domain: &DomainSpec<T>,
    coefficients: &[T],
    grid: &SpatialGrid<T>,
) -> Vec<T> {
    assert_eq!(
        coefficients.len(),
        domain.n_modes(),
        "one coefficient per mode"
    );
    grid.points()
        .iter()
        .map(|&(x, y)| {
            coefficients
                .iter()
                .enumerate()
                .filter(|(_, &c)| c != T::zero())
                .map(|(k, &c)| c * domain.eval_mode(k, x, y))
                .sum()
        })
        .collect()
}

//! Dirichlet Laplacian eigenpairs on intervals and rectangles.
//!
//! On `(0, L)` the modes are `eₙ(x) = √(2/L) sin(nπx/L)` with `λₙ = (nπ/L)²`.
//! On `(0, L₁) × (0, L₂)` they are tensor products, and a [`DomainSpec`] keeps
//! the `N` smallest eigenvalues, ties ordered by `(i, j)`.
//!
//! Fields are represented by samples on a [`SpatialGrid`]; [`project`] and
//! [`synthesize`] move between samples and modal coefficients, and
//! [`graded_norm`] gives the norms of `D((−Δ)^θ)` for any real `θ`.

mod quadrature;


pub(crate) use quadrature::check_resolution;
pub use quadrature::{
    project, simpson_weights, synthesize, SpatialGrid, MIN_POINTS_PER_WAVELENGTH,
};

use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DomainKind<T> {
    Interval { length: T },
    Rectangle { lx: T, ly: T },
}

/// 1-based mode numbers: `Line(n)` on an interval, `Tensor(i, j)` on a rectangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ModeIndex {
    Line(usize),
    Tensor(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Eigenpair<T> {
    pub lambda: T,
    pub index: ModeIndex,
}

/// A domain together with its first `N` Dirichlet modes.
#[derive(Debug, Clone, PartialEq)]
pub struct DomainSpec<T> {
    kind: DomainKind<T>,
    modes: Vec<Eigenpair<T>>,
}

fn check_length<T: Real>(name: &'static str, l: T) -> Result<()> {
    if l > T::zero() && l.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, l, "side lengths must be positive"))
    }
}

fn check_modes(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Invalid("at least one mode is required".into()));
    }
    Ok(())
}

fn axis_lambda<T: Real>(n: usize, l: T) -> T {
    let k = T::from_index(n) * T::PI() / l;
    k * k
}

impl<T: Real> DomainSpec<T> {
    pub fn interval(length: T, n_modes: usize) -> Result<Self> {
        check_length("L", length)?;
        check_modes(n_modes)?;
        let modes = (1..=n_modes)
            .map(|n| Eigenpair {
                lambda: axis_lambda(n, length),
                index: ModeIndex::Line(n),
            })
            .collect();
        Ok(DomainSpec {
            kind: DomainKind::Interval { length },
            modes,
        })
    }

    pub fn rectangle(lx: T, ly: T, n_modes: usize) -> Result<Self> {
        check_length("L1", lx)?;
        check_length("L2", ly)?;
        check_modes(n_modes)?;
        // the N smallest pairs have i, j ≤ N
        let mut modes: Vec<Eigenpair<T>> = (1..=n_modes)
            .flat_map(|i| (1..=n_modes).map(move |j| (i, j)))
            .map(|(i, j)| Eigenpair {
                lambda: axis_lambda(i, lx) + axis_lambda(j, ly),
                index: ModeIndex::Tensor(i, j),
            })
            .collect();
        modes.sort_by(|a, b| {
            a.lambda
                .partial_cmp(&b.lambda)
                .unwrap()
                .then_with(|| tensor(a.index).cmp(&tensor(b.index)))
        });
        modes.truncate(n_modes);
        Ok(DomainSpec {
            kind: DomainKind::Rectangle { lx, ly },
            modes,
        })
    }

    pub fn kind(&self) -> DomainKind<T> {
        self.kind
    }

    pub fn n_modes(&self) -> usize {
        self.modes.len()
    }

    pub fn is_interval(&self) -> bool {
        matches!(self.kind, DomainKind::Interval { .. })
    }

    /// Eigenpairs sorted by ascending eigenvalue.
    pub fn eigenpairs(&self) -> &[Eigenpair<T>] {
        &self.modes
    }

    pub fn lambdas(&self) -> Vec<T> {
        self.modes.iter().map(|m| m.lambda).collect()
    }

    /// The same domain with `n_modes` modes.
    pub fn with_modes(&self, n_modes: usize) -> Result<Self> {
        match self.kind {
            DomainKind::Interval { length } => Self::interval(length, n_modes),
            DomainKind::Rectangle { lx, ly } => Self::rectangle(lx, ly, n_modes),
        }
    }

    /// Largest 1-D mode number along x and along y (0 for the missing axis).
    pub(crate) fn max_axis_index(&self) -> (usize, usize) {
        self.modes
            .iter()
            .map(|m| tensor(m.index))
            .fold((0, 0), |(a, b), (i, j)| (a.max(i), b.max(j)))
    }

    /// Value of mode `k` (0-based position in [`eigenpairs`](Self::eigenpairs))
    /// at `(x, y)`; `y` is ignored on an interval.
    pub fn eval_mode(&self, k: usize, x: T, y: T) -> T {
        match (self.kind, self.modes[k].index) {
            (DomainKind::Interval { length }, ModeIndex::Line(n)) => axis_mode(n, length, x),
            (DomainKind::Rectangle { lx, ly }, ModeIndex::Tensor(i, j)) => {
                axis_mode(i, lx, x) * axis_mode(j, ly, y)
            }
            _ => unreachable!("mode index does not match the domain"),
        }
    }

    /// Gradient `(∂ₓ, ∂_y)` of mode `k` at `(x, y)`.
    pub fn grad_mode(&self, k: usize, x: T, y: T) -> (T, T) {
        match (self.kind, self.modes[k].index) {
            (DomainKind::Interval { length }, ModeIndex::Line(n)) => {
                (axis_slope(n, length, x), T::zero())
            }
            (DomainKind::Rectangle { lx, ly }, ModeIndex::Tensor(i, j)) => (
                axis_slope(i, lx, x) * axis_mode(j, ly, y),
                axis_mode(i, lx, x) * axis_slope(j, ly, y),
            ),
            _ => unreachable!("mode index does not match the domain"),
        }
    }
}

fn tensor(index: ModeIndex) -> (usize, usize) {
    match index {
        ModeIndex::Line(n) => (n, 0),
        ModeIndex::Tensor(i, j) => (i, j),
    }
}

/// `√(2/L) sin(nπx/L)`
pub(crate) fn axis_mode<T: Real>(n: usize, l: T, x: T) -> T {
    let two = T::lit(2.0);
    (two / l).sqrt() * (T::from_index(n) * T::PI() * x / l).sin()
}

/// d/dx of [`axis_mode`].
pub(crate) fn axis_slope<T: Real>(n: usize, l: T, x: T) -> T {
    let two = T::lit(2.0);
    let k = T::from_index(n) * T::PI() / l;
    (two / l).sqrt() * k * (k * x).cos()
}

/// `(Σₙ λₙ^{2θ} cₙ²)^{1/2}`: the `D((−Δ)^θ)` norm for θ ≥ 0 and the dual
/// norm for θ < 0.
///
/// Panics if the slices differ in length.
pub fn graded_norm<T: Real>(coefficients: &[T], theta: T, lambdas: &[T]) -> T {
    assert_eq!(
        coefficients.len(),
        lambdas.len(),
        "one eigenvalue per coefficient"
    );
    let two = T::lit(2.0);
    coefficients
        .iter()
        .zip(lambdas)
        .map(|(&c, &l)| l.powf(two * theta) * c * c)
        .sum::<T>()
        .sqrt()
}

/// Initial data `(u₁, u₂)` as modal coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ModalData<T> {
    domain: DomainSpec<T>,
    c1: Vec<T>,
    c2: Vec<T>,
}

impl<T: Real> ModalData<T> {
    pub fn new(domain: DomainSpec<T>, c1: Vec<T>, c2: Vec<T>) -> Result<Self> {
        let n = domain.n_modes();
        if c1.len() != n || c2.len() != n {
            return Err(Error::Invalid(format!(
                "coefficient lengths {} and {} do not match N = {n}",
                c1.len(),
                c2.len()
            )));
        }
        if c1.iter().chain(&c2).any(|c| !c.is_finite()) {
            return Err(Error::Invalid("modal coefficients must be finite".into()));
        }
        Ok(ModalData { domain, c1, c2 })
    }

    pub fn zeros(domain: DomainSpec<T>) -> Self {
        let n = domain.n_modes();
        ModalData {
            domain,
            c1: vec![T::zero(); n],
            c2: vec![T::zero(); n],
        }
    }

    pub fn domain(&self) -> &DomainSpec<T> {
        &self.domain
    }

    /// Coefficients `⟨u₁, eₙ⟩`.
    pub fn c1(&self) -> &[T] {
        &self.c1
    }

    /// Coefficients `⟨u₂, eₙ⟩`.
    pub fn c2(&self) -> &[T] {
        &self.c2
    }

    pub fn scaled(&self, s: T) -> Self {
        ModalData {
            domain: self.domain.clone(),
            c1: self.c1.iter().map(|&c| s * c).collect(),
            c2: self.c2.iter().map(|&c| s * c).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.c1.iter().chain(&self.c2).all(|&c| c == T::zero())
    }
}

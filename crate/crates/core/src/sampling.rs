//! Seeded random modal data.
//!
//! Coefficients are independent standard normals scaled by a profile in the
//! mode number `n` (1-based position in the eigenvalue ordering). One
//! ChaCha8 stream per seed makes every draw reproducible across platforms.

use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::spectral_domain::{graded_norm, DomainSpec, ModalData};
use crate::{Error, Real, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Profile<T> {
    /// `cₙ ~ N(0, 1)`
    Flat,
    /// `cₙ ~ N(0, 1) · n^{−p}`
    PowerLaw(T),
}

impl<T: Real> Profile<T> {
    fn scale(&self, n: usize) -> T {
        match *self {
            Profile::Flat => T::one(),
            Profile::PowerLaw(p) => T::from_index(n).powf(-p),
        }
    }
}

impl<T: Real> fmt::Display for Profile<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Profile::Flat => write!(f, "flat"),
            Profile::PowerLaw(p) => write!(f, "powerlaw({p})"),
        }
    }
}

impl<T: Real> FromStr for Profile<T> {
    type Err = Error;

    /// Accepts `flat` and `powerlaw(p)`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "flat" {
            return Ok(Profile::Flat);
        }
        let p = s
            .strip_prefix("powerlaw(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|p| p.trim().parse::<f64>().ok())
            .filter(|p| p.is_finite())
            .ok_or_else(|| {
                Error::Invalid(format!(
                    "unknown profile '{s}', expected flat or powerlaw(p)"
                ))
            })?;
        Ok(Profile::PowerLaw(T::lit(p)))
    }
}

/// Deterministic generator of modal data sets.
#[derive(Debug, Clone)]
pub struct DataSampler<T> {
    domain: DomainSpec<T>,
    profile: Profile<T>,
    rng: ChaCha8Rng,
}

impl<T: Real> DataSampler<T> {
    pub fn new(domain: DomainSpec<T>, profile: Profile<T>, seed: u64) -> Self {
        DataSampler {
            domain,
            profile,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    fn coefficients(&mut self) -> Vec<T> {
        (1..=self.domain.n_modes())
            .map(|n| {
                let z: f64 = StandardNormal.sample(&mut self.rng);
                T::lit(z) * self.profile.scale(n)
            })
            .collect()
    }

    /// Next data set; `u₁` is drawn before `u₂`.
    pub fn draw(&mut self) -> ModalData<T> {
        let c1 = self.coefficients();
        let c2 = self.coefficients();
        ModalData::new(self.domain.clone(), c1, c2).expect("sampled coefficients are finite")
    }

    /// Next data set rescaled so that `‖u₁‖_{D((−Δ)^μ)} + ‖∇u₂‖_{D((−Δ)^μ)} = 1`.
    pub fn draw_unit(&mut self, mu: T) -> ModalData<T> {
        let d = self.draw();
        let s = data_norm(&d, mu);
        d.scaled(T::one() / s)
    }
}

/// `‖u₁‖_{D((−Δ)^μ)} + ‖∇u₂‖_{D((−Δ)^μ)}`, the latter as `(Σ λₙ^{1+2μ} c2ₙ²)^{1/2}`.
pub fn data_norm<T: Real>(data: &ModalData<T>, mu: T) -> T {
    let l = data.domain().lambdas();
    let half = T::lit(0.5);
    graded_norm(data.c1(), mu, &l) + graded_norm(data.c2(), mu + half, &l)
}

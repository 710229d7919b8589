//! Time-dependent mass profiles m(t) and the reparameterized time
//! μ(t) = ∫₀ᵗ dτ / m(τ).

use crate::error::{Error, Result};
use crate::quadrature::{adaptive, Tolerance};
use crate::scalar::{c, Real};

/// A strictly positive mass history.
///
/// Construct through [`MassProfile::quadratic`], [`MassProfile::constant`] or
/// [`MassProfile::tabulated`]; the constructors enforce positivity.
#[derive(Debug, Clone, PartialEq)]
pub enum MassProfile<T> {
    /// m(t) = m0 (1 + b t)², b ≥ 0.
    Quadratic { m0: T, b: T },
    Constant { m0: T },
    Tabulated(Tabulated<T>),
}

impl<T: Real> MassProfile<T> {
    pub fn quadratic(m0: T, b: T) -> Result<Self> {
        check_mass(m0)?;
        if !b.is_finite() || b < T::zero() {
            return Err(Error::InvalidProfile(format!(
                "growth rate b = {b} must be finite and non-negative"
            )));
        }
        Ok(Self::Quadratic { m0, b })
    }

    pub fn constant(m0: T) -> Result<Self> {
        check_mass(m0)?;
        Ok(Self::Constant { m0 })
    }

    /// Monotone-cubic interpolated profile through `(t, m)` samples. The
    /// first sample must sit at t = 0 so that μ(0) = 0 is anchored.
    pub fn tabulated(samples: Vec<(T, T)>) -> Result<Self> {
        Tabulated::new(samples).map(Self::Tabulated)
    }

    pub fn mass_at(&self, t: T) -> Result<T> {
        check_time(t)?;
        match self {
            Self::Quadratic { m0, b } => {
                let g = T::one() + *b * t;
                Ok(*m0 * g * g)
            }
            Self::Constant { m0 } => Ok(*m0),
            Self::Tabulated(tab) => tab.mass_at(t),
        }
    }

    /// μ̇(t) = 1/m(t).
    pub fn inverse_mass_at(&self, t: T) -> Result<T> {
        self.mass_at(t).map(|m| m.recip())
    }

    pub fn mu_at(&self, t: T) -> Result<T> {
        check_time(t)?;
        match self {
            Self::Quadratic { m0, b } => Ok(t / (*m0 * (T::one() + *b * t))),
            Self::Constant { m0 } => Ok(t / *m0),
            Self::Tabulated(tab) => tab.mu_at(t),
        }
    }

    /// lim_{t→∞} μ(t) when finite.
    pub fn mu_limit(&self) -> Option<T> {
        match self {
            Self::Quadratic { m0, b } if *b > T::zero() => Some((*m0 * *b).recip()),
            _ => None,
        }
    }
}

fn check_mass<T: Real>(m0: T) -> Result<()> {
    if m0.is_finite() && m0 > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidProfile(format!("mass {m0} must be finite and positive")))
    }
}

fn check_time<T: Real>(t: T) -> Result<()> {
    if t.is_finite() && t >= T::zero() {
        Ok(())
    } else {
        Err(Error::OutOfDomain {
            t: t.as_f64(),
            min: 0.0,
            max: f64::INFINITY,
        })
    }
}

/// Sampled mass with a Fritsch-Carlson monotone cubic interpolant. Between
/// two samples the interpolant stays within the bracketing values, so it is
/// positive whenever the samples are.
#[derive(Debug, Clone, PartialEq)]
pub struct Tabulated<T> {
    times: Vec<T>,
    masses: Vec<T>,
    slopes: Vec<T>,
    // μ at each knot
    mu_knots: Vec<T>,
}

impl<T: Real> Tabulated<T> {
    fn new(samples: Vec<(T, T)>) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::InvalidProfile("need at least two samples".into()));
        }
        if samples[0].0 != T::zero() {
            return Err(Error::InvalidProfile(format!(
                "first sample must be at t = 0, got {}",
                samples[0].0
            )));
        }
        for w in samples.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::InvalidProfile(
                    "sample times must be strictly increasing".into(),
                ));
            }
        }
        for &(_, m) in &samples {
            check_mass(m)?;
        }
        let (times, masses): (Vec<T>, Vec<T>) = samples.into_iter().unzip();
        let slopes = monotone_slopes(&times, &masses);
        let mut tab = Self {
            times,
            masses,
            slopes,
            mu_knots: Vec::new(),
        };
        let mut mu = vec![T::zero()];
        for i in 0..tab.times.len() - 1 {
            let seg = tab.integrate_inverse(i, tab.times[i], tab.times[i + 1])?;
            mu.push(mu[i] + seg);
        }
        tab.mu_knots = mu;
        Ok(tab)
    }

    pub fn samples(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.times.iter().copied().zip(self.masses.iter().copied())
    }

    fn range(&self) -> (T, T) {
        (self.times[0], *self.times.last().unwrap())
    }

    fn segment(&self, t: T) -> Result<usize> {
        let (lo, hi) = self.range();
        if !(t >= lo && t <= hi) {
            return Err(Error::OutOfDomain {
                t: t.as_f64(),
                min: lo.as_f64(),
                max: hi.as_f64(),
            });
        }
        let idx = self.times.partition_point(|&x| x <= t);
        Ok(idx.saturating_sub(1).min(self.times.len() - 2))
    }

    fn eval_segment(&self, i: usize, t: T) -> T {
        let h = self.times[i + 1] - self.times[i];
        let s = (t - self.times[i]) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let two = c::<T>(2.0);
        let three = c::<T>(3.0);
        let h00 = two * s3 - three * s2 + T::one();
        let h10 = s3 - two * s2 + s;
        let h01 = three * s2 - two * s3;
        let h11 = s3 - s2;
        h00 * self.masses[i]
            + h10 * h * self.slopes[i]
            + h01 * self.masses[i + 1]
            + h11 * h * self.slopes[i + 1]
    }

    pub fn mass_at(&self, t: T) -> Result<T> {
        let i = self.segment(t)?;
        Ok(self.eval_segment(i, t))
    }

    fn integrate_inverse(&self, i: usize, a: T, b: T) -> Result<T> {
        adaptive(a, b, Tolerance::default(), |t| self.eval_segment(i, t).recip())
    }

    pub fn mu_at(&self, t: T) -> Result<T> {
        let i = self.segment(t)?;
        Ok(self.mu_knots[i] + self.integrate_inverse(i, self.times[i], t)?)
    }
}

fn monotone_slopes<T: Real>(t: &[T], m: &[T]) -> Vec<T> {
    let n = t.len();
    let secants: Vec<T> = (0..n - 1).map(|i| (m[i + 1] - m[i]) / (t[i + 1] - t[i])).collect();
    let mut d = vec![T::zero(); n];
    d[0] = secants[0];
    d[n - 1] = secants[n - 2];
    for i in 1..n - 1 {
        d[i] = if secants[i - 1] * secants[i] <= T::zero() {
            T::zero()
        } else {
            (secants[i - 1] + secants[i]) * c(0.5)
        };
    }
    let three = c::<T>(3.0);
    for i in 0..n - 1 {
        if secants[i] == T::zero() {
            d[i] = T::zero();
            d[i + 1] = T::zero();
            continue;
        }
        let a = d[i] / secants[i];
        let b = d[i + 1] / secants[i];
        let r = a * a + b * b;
        if r > three * three {
            let tau = three / r.sqrt();
            d[i] = tau * a * secants[i];
            d[i + 1] = tau * b * secants[i];
        }
    }
    d
}

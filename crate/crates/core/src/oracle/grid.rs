use num_complex::Complex;
use num_traits::Zero;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::packet::WavePacket;
use crate::scalar::{c, Real};

/// Uniform spatial grid and time stepping for propagation runs. The grid
/// holds `n_points` samples with both endpoints included; endpoints carry the
/// Dirichlet condition ψ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec<T> {
    pub x_min: T,
    pub x_max: T,
    pub n_points: usize,
    pub dt: T,
    pub t_final: T,
}

impl<T: Real> Default for GridSpec<T> {
    fn default() -> Self {
        Self {
            x_min: c(-20.0),
            x_max: c(20.0),
            n_points: 2048,
            dt: c(1e-3),
            t_final: c(2.0),
        }
    }
}

impl<T: Real> GridSpec<T> {
    pub const MIN_POINTS: usize = 64;

    pub fn validate(&self) -> Result<()> {
        if self.n_points < Self::MIN_POINTS {
            return Err(Error::InvalidGrid(format!(
                "n_points = {} is below the minimum of {}",
                self.n_points,
                Self::MIN_POINTS
            )));
        }
        if !(self.x_max > self.x_min) || !self.x_min.is_finite() || !self.x_max.is_finite() {
            return Err(Error::InvalidGrid("x range must be finite and increasing".into()));
        }
        if !(self.dt > T::zero()) || !self.dt.is_finite() {
            return Err(Error::InvalidGrid(format!("time step dt = {} must be positive", self.dt)));
        }
        if !(self.t_final >= T::zero()) || !self.t_final.is_finite() {
            return Err(Error::InvalidGrid(format!("t_final = {} must be non-negative", self.t_final)));
        }
        Ok(())
    }

    pub fn dx(&self) -> T {
        (self.x_max - self.x_min) / T::from_usize_lossy(self.n_points - 1)
    }

    pub fn x_axis(&self) -> Vec<T> {
        let dx = self.dx();
        (0..self.n_points)
            .map(|j| self.x_min + dx * T::from_usize_lossy(j))
            .collect()
    }

    /// Samples a packet on the grid.
    pub fn sample(&self, psi: &WavePacket<T>) -> Vec<Complex<T>> {
        psi.values(&self.x_axis())
    }

    /// Number of steps and the effective step that lands exactly on t_final.
    pub fn steps(&self) -> (usize, T) {
        if self.t_final == T::zero() {
            return (0, self.dt);
        }
        let n = (self.t_final / self.dt - c(1e-9)).ceil().to_usize().unwrap_or(1).max(1);
        (n, self.t_final / T::from_usize_lossy(n))
    }

    pub(crate) fn norm_sqr(&self, a: &[Complex<T>]) -> T {
        a.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()) * self.dx()
    }
}

/// F = |⟨a|b⟩| / (‖a‖ ‖b‖) for grid samples.
pub fn fidelity<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    let (mut ab, mut aa, mut bb) = (Complex::<T>::zero(), T::zero(), T::zero());
    for (u, v) in a.iter().zip(b) {
        ab = ab + u.conj() * v;
        aa = aa + u.norm_sqr();
        bb = bb + v.norm_sqr();
    }
    (ab.norm() / (aa * bb).sqrt()).min(T::one())
}

/// √(1 − F²), the sine of the angle between the two rays. Scales linearly
/// with the state error, whereas 1 − F scales quadratically.
pub fn fidelity_defect<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    let f = fidelity(a, b);
    (T::one() - f * f).max(T::zero()).sqrt()
}

/// First and second derivatives of uniformly spaced, effectively periodic
/// samples via FFT.
pub fn spectral_derivatives<T: Real>(psi: &[Complex<T>], dx: T) -> (Vec<Complex<T>>, Vec<Complex<T>>) {
    let n = psi.len();
    let mut planner = FftPlanner::<T>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut spec = psi.to_vec();
    fwd.process(&mut spec);
    let two_pi_over_l = c::<T>(2.0) * T::PI() / (dx * T::from_usize_lossy(n));
    let mut d1 = spec.clone();
    let mut d2 = spec;
    for j in 0..n {
        let signed = if j <= n / 2 { j as f64 } else { j as f64 - n as f64 };
        let k = two_pi_over_l * c(signed);
        d2[j] = d2[j] * (-k * k);
        d1[j] = if n.is_multiple_of(2) && j == n / 2 {
            Complex::zero()
        } else {
            d1[j] * Complex::new(T::zero(), k)
        };
    }
    inv.process(&mut d1);
    inv.process(&mut d2);
    let scale = T::from_usize_lossy(n).recip();
    for z in d1.iter_mut().chain(d2.iter_mut()) {
        *z = *z * scale;
    }
    (d1, d2)
}

use num_complex::Complex;
use num_traits::Zero;
use rayon::prelude::*;

use super::grid::{spectral_derivatives, GridSpec};
use super::propagate::Snapshot;
use crate::eigenstates::eigenstate;
use crate::error::{Error, Result};
use crate::invariant::{coefficients_at, InvariantParams};
use crate::mass::MassProfile;
use crate::packet::{inner_product, WavePacket};
use crate::scalar::{c, Real};

/// ⟨ψ|Î|ψ⟩ on grid samples (not divided by ‖ψ‖²), with
/// Î = αp̂² + βx̂² + γ(x̂p̂ + p̂x̂) and spectral derivatives.
pub fn invariant_expectation<T: Real>(
    psi: &[Complex<T>],
    x: &[T],
    dx: T,
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
) -> Result<Complex<T>> {
    let s = coefficients_at(params, profile, t)?;
    let hbar = params.hbar();
    let (d1, d2) = spectral_derivatives(psi, dx);
    let xpsi: Vec<Complex<T>> = psi.iter().zip(x).map(|(z, &xi)| *z * xi).collect();
    let (d_xpsi, _) = spectral_derivatives(&xpsi, dx);
    let mut p2 = Complex::zero();
    let mut x2 = T::zero();
    let mut anti = Complex::zero();
    for j in 0..psi.len() {
        let conj = psi[j].conj();
        p2 = p2 + conj * d2[j];
        x2 = x2 + psi[j].norm_sqr() * x[j] * x[j];
        anti = anti + conj * (d1[j] * x[j] + d_xpsi[j]);
    }
    let i_hbar = Complex::new(T::zero(), hbar);
    let total = p2 * (-hbar * hbar * s.alpha) + Complex::from(x2 * params.beta()) - i_hbar * anti * s.gamma;
    Ok(total * dx)
}

/// (t, ⟨ψ|Î|ψ⟩) for each snapshot of a propagation run.
pub fn invariant_expectation_series<T: Real>(
    snapshots: &[Snapshot<T>],
    spec: &GridSpec<T>,
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
) -> Result<Vec<(T, Complex<T>)>> {
    let x = spec.x_axis();
    let dx = spec.dx();
    snapshots
        .par_iter()
        .map(|s| invariant_expectation(&s.psi, &x, dx, params, profile, s.t).map(|v| (s.t, v)))
        .collect()
}

pub const TDSE_STEP: f64 = 1e-5;

/// ‖iħ∂_tψ − Ĥψ‖ / ‖Ĥψ‖ on the grid of `spec`, with a central difference of
/// step 1e-5 in time and a spectral second derivative in space.
pub fn tdse_residual<T, F>(psi: F, profile: &MassProfile<T>, t: T, spec: &GridSpec<T>, hbar: T) -> Result<T>
where
    T: Real,
    F: Fn(T) -> Result<WavePacket<T>>,
{
    let h = c::<T>(TDSE_STEP);
    if t < h {
        return Err(Error::InvalidParameter(format!("tdse residual needs t >= {TDSE_STEP}, got {t}")));
    }
    spec.validate()?;
    let forward = spec.sample(&psi(t + h)?);
    let backward = spec.sample(&psi(t - h)?);
    let now = spec.sample(&psi(t)?);
    let (_, d2) = spectral_derivatives(&now, spec.dx());
    let kinetic = -hbar * hbar / (c::<T>(2.0) * profile.mass_at(t)?);
    let i_hbar = Complex::new(T::zero(), hbar);
    let mut num = T::zero();
    let mut den = T::zero();
    for j in 0..now.len() {
        let h_psi = d2[j] * kinetic;
        let lhs = i_hbar * (forward[j] - backward[j]) / (h + h);
        num = num + (lhs - h_psi).norm_sqr();
        den = den + h_psi.norm_sqr();
    }
    Ok((num / den).sqrt())
}

/// ⟨n|∂_t|n⟩ for unit-norm φ_n, from finite differences of the closed-form
/// eigenstates and quadrature inner products. Falls back to a one-sided
/// stencil when t < h.
pub fn berry_connection_fd<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    n: usize,
    h: T,
) -> Result<Complex<T>> {
    let unit = |tau: T| -> Result<WavePacket<T>> {
        let phi = eigenstate(params, profile, tau, n)?;
        let norm = inner_product(&phi, &phi).re.sqrt();
        Ok(phi.scaled(Complex::from(norm.recip())))
    };
    let phi = unit(t)?;
    if t >= h {
        let d = inner_product(&phi, &unit(t + h)?) - inner_product(&phi, &unit(t - h)?);
        Ok(d / (h + h))
    } else {
        let d = inner_product(&phi, &unit(t + h)?) * c::<T>(4.0)
            - inner_product(&phi, &unit(t + h + h)?)
            - Complex::from(c::<T>(3.0));
        Ok(d / (h + h))
    }
}

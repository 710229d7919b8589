//! Expectation values, variances and the uncertainty ellipse.

use num_complex::Complex;

use crate::eigenstates::vacuum_of;
use crate::error::Result;
use crate::invariant::{coefficients_at, InvariantParams};
use crate::mass::MassProfile;
use crate::packet::{inner_product, WavePacket};
use crate::scalar::{c, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyRecord<T> {
    pub t: T,
    pub dx: T,
    pub dp: T,
    pub product: T,
    /// ħα/κ₀
    pub s1_sq: T,
    /// ħβ/κ₀
    pub s2_sq: T,
}

impl<T: Real> UncertaintyRecord<T> {
    /// Δx²/s₁² + Δp²/s₂².
    pub fn ellipse_lhs(&self) -> T {
        self.dx * self.dx / self.s1_sq + self.dp * self.dp / self.s2_sq
    }
}

/// Uncertainties of the vacuum φ₀(t). Δx and Δp come from the Gaussian
/// widths (Δx² = 1/4k_r, Δp² = ħ²|K|²/k_r); the product is evaluated
/// independently as (ħ/2)√(1 + (γ/κ₀)²).
pub fn uncertainty_at<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
) -> Result<UncertaintyRecord<T>> {
    let s = coefficients_at(params, profile, t)?;
    let hbar = params.hbar();
    let k_r = s.k_r();
    let dx = (c::<T>(4.0) * k_r).recip().sqrt();
    let dp = hbar * s.k.norm() / k_r.sqrt();
    let ratio = s.gamma / params.kappa0();
    let product = hbar * c(0.5) * (T::one() + ratio * ratio).sqrt();
    Ok(UncertaintyRecord {
        t,
        dx,
        dp,
        product,
        s1_sq: hbar * s.alpha / params.kappa0(),
        s2_sq: hbar * params.beta() / params.kappa0(),
    })
}

/// True when the uncertainty ellipse is momentarily a circle, σ² = β.
pub fn is_instantaneously_coherent<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    tol: T,
) -> Result<bool> {
    let s = coefficients_at(params, profile, t)?;
    Ok((s.alpha - params.beta()).abs() < tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Observable {
    H,
    I,
    X,
    P,
    X2,
    P2,
    /// (x̂p̂ + p̂x̂)/2
    XPsym,
}

fn p_op<T: Real>(psi: &WavePacket<T>, hbar: T) -> WavePacket<T> {
    psi.derivative().scaled(Complex::new(T::zero(), -hbar))
}

/// Ô ψ in closed form. Ĥ and Î use the coefficients at `psi.t`.
pub fn apply<T: Real>(
    op: Observable,
    psi: &WavePacket<T>,
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
) -> Result<WavePacket<T>> {
    let hbar = params.hbar();
    let one = Complex::from(T::one());
    Ok(match op {
        Observable::X => psi.times_x(),
        Observable::X2 => psi.times_x().times_x(),
        Observable::P => p_op(psi, hbar),
        Observable::P2 => p_op(&p_op(psi, hbar), hbar),
        Observable::XPsym => {
            let xp = p_op(psi, hbar).times_x();
            let px = p_op(&psi.times_x(), hbar);
            WavePacket::combine(&[(one * c::<T>(0.5), &xp), (one * c::<T>(0.5), &px)])?
        }
        Observable::H => {
            let m = profile.mass_at(psi.t)?;
            let p2 = p_op(&p_op(psi, hbar), hbar);
            p2.scaled(Complex::from((c::<T>(2.0) * m).recip()))
        }
        Observable::I => {
            let s = coefficients_at(params, profile, psi.t)?;
            let p2 = p_op(&p_op(psi, hbar), hbar);
            let x2 = psi.times_x().times_x();
            let xp = p_op(psi, hbar).times_x();
            let px = p_op(&psi.times_x(), hbar);
            WavePacket::combine(&[
                (one * s.alpha, &p2),
                (one * params.beta(), &x2),
                (one * s.gamma, &xp),
                (one * s.gamma, &px),
            ])?
        }
    })
}

/// ⟨a|Ô|b⟩ by quadrature.
pub fn matrix_element<T: Real>(
    a: &WavePacket<T>,
    op: Observable,
    b: &WavePacket<T>,
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
) -> Result<Complex<T>> {
    Ok(inner_product(a, &apply(op, b, params, profile)?))
}

/// ⟨ψ|Ô|ψ⟩ / ⟨ψ|ψ⟩.
pub fn expectation<T: Real>(
    psi: &WavePacket<T>,
    op: Observable,
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
) -> Result<Complex<T>> {
    let num = matrix_element(psi, op, psi, params, profile)?;
    let den = inner_product(psi, psi).re;
    Ok(num / den)
}

/// Variance-based uncertainty of an arbitrary packet, by quadrature.
pub fn spreads<T: Real>(
    psi: &WavePacket<T>,
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
) -> Result<(T, T)> {
    let x = expectation(psi, Observable::X, params, profile)?.re;
    let x2 = expectation(psi, Observable::X2, params, profile)?.re;
    let p = expectation(psi, Observable::P, params, profile)?.re;
    let p2 = expectation(psi, Observable::P2, params, profile)?.re;
    Ok(((x2 - x * x).max(T::zero()).sqrt(), (p2 - p * p).max(T::zero()).sqrt()))
}

/// Vacuum uncertainties computed by quadrature rather than closed form.
pub fn vacuum_spreads<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
) -> Result<(T, T)> {
    let s = coefficients_at(params, profile, t)?;
    spreads(&vacuum_of(params, &s)?, params, profile)
}

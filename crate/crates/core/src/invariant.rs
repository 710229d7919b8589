//! Parameters of the quadratic invariant
//! Î = α(t) p̂² + β x̂² + γ(t) {x̂, p̂}
//! and the closed-form time dependence of its coefficients.
//!
//! Every coefficient is an elementary function of μ(t) and m(t):
//! γ = γ₀ − βμ, α = α₀ − 2γ₀μ + βμ², σ = √α, κ = κ₀/σ, mσ̇ = −γ/σ,
//! with the conserved combination γ² − βα = −κ₀².

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::mass::MassProfile;
use crate::scalar::{c, Real};

/// Constants of one invariant. κ₀ is derived from the others and is always
/// the positive root of β α₀ − γ₀².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InvariantParams<T> {
    alpha0: T,
    beta: T,
    gamma0: T,
    hbar: T,
    kappa0: T,
}

impl<T: Real> InvariantParams<T> {
    /// Validates that the invariant can be brought to oscillator form by a
    /// symplectic transformation, i.e. β α₀ − γ₀² > 0.
    pub fn new(alpha0: T, beta: T, gamma0: T, hbar: T) -> Result<Self> {
        for (name, v) in [("alpha0", alpha0), ("beta", beta), ("gamma0", gamma0), ("hbar", hbar)] {
            if !v.is_finite() {
                return Err(Error::InvalidParameter(format!("{name} = {v} is not finite")));
            }
        }
        if hbar <= T::zero() {
            return Err(Error::InvalidParameter(format!("hbar = {hbar} must be positive")));
        }
        let disc = beta * alpha0 - gamma0 * gamma0;
        if !(disc > T::zero()) {
            return Err(Error::NonDiagonalizable(format!(
                "requires beta*alpha0 - gamma0^2 > 0, got {beta}*{alpha0} - {gamma0}^2 = {disc}"
            )));
        }
        Ok(Self {
            alpha0,
            beta,
            gamma0,
            hbar,
            kappa0: disc.sqrt(),
        })
    }

    /// α₀ = 2, β = 1, γ₀ = 1, ħ = 1.
    pub fn toy() -> Self {
        Self::new(c(2.0), c(1.0), c(1.0), c(1.0)).expect("toy parameters are valid")
    }

    pub fn alpha0(&self) -> T {
        self.alpha0
    }
    pub fn beta(&self) -> T {
        self.beta
    }
    pub fn gamma0(&self) -> T {
        self.gamma0
    }
    pub fn hbar(&self) -> T {
        self.hbar
    }
    pub fn kappa0(&self) -> T {
        self.kappa0
    }
    /// ω = 2κ₀, fixed by [â, â†] = 1.
    pub fn omega(&self) -> T {
        self.kappa0 + self.kappa0
    }

    /// Eigenvalue (n + ½) ħω of the invariant.
    pub fn eigenvalue(&self, n: usize) -> T {
        (T::from_usize_lossy(n) + c(0.5)) * self.hbar * self.omega()
    }

    pub fn gamma_of_mu(&self, mu: T) -> T {
        self.gamma0 - self.beta * mu
    }

    pub fn alpha_of_mu(&self, mu: T) -> T {
        self.alpha0 - c::<T>(2.0) * self.gamma0 * mu + self.beta * mu * mu
    }
}

/// All time-dependent scalars of the invariant at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientState<T> {
    pub t: T,
    pub mu: T,
    pub mass: T,
    pub gamma: T,
    pub alpha: T,
    pub sigma: T,
    pub kappa: T,
    /// m σ̇ = −γ/σ.
    pub m_sigma_dot: T,
    /// Complex Gaussian width K = (κ − i m σ̇) / (2ħσ).
    pub k: Complex<T>,
    pub omega: T,
}

impl<T: Real> CoefficientState<T> {
    pub fn k_r(&self) -> T {
        self.k.re
    }
    pub fn k_i(&self) -> T {
        self.k.im
    }
    pub fn sigma_dot(&self) -> T {
        self.m_sigma_dot / self.mass
    }
}

pub fn validate_params<T: Real>(alpha0: T, beta: T, gamma0: T, hbar: T) -> Result<InvariantParams<T>> {
    InvariantParams::new(alpha0, beta, gamma0, hbar)
}

/// Coefficients for an already known μ and m at time t.
pub fn coefficients_from_mu<T: Real>(
    params: &InvariantParams<T>,
    t: T,
    mu: T,
    mass: T,
) -> Result<CoefficientState<T>> {
    let gamma = params.gamma_of_mu(mu);
    let alpha = params.alpha_of_mu(mu);
    if !(alpha > T::zero()) {
        return Err(Error::SingularCoefficient {
            t: t.as_f64(),
            alpha: alpha.as_f64(),
        });
    }
    let sigma = alpha.sqrt();
    let kappa = params.kappa0 / sigma;
    let m_sigma_dot = -gamma / sigma;
    let two_hbar_sigma = c::<T>(2.0) * params.hbar * sigma;
    let k = Complex::new(kappa / two_hbar_sigma, -m_sigma_dot / two_hbar_sigma);
    Ok(CoefficientState {
        t,
        mu,
        mass,
        gamma,
        alpha,
        sigma,
        kappa,
        m_sigma_dot,
        k,
        omega: params.omega(),
    })
}

pub fn coefficients_at<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
) -> Result<CoefficientState<T>> {
    let mu = profile.mu_at(t)?;
    let mass = profile.mass_at(t)?;
    coefficients_from_mu(params, t, mu, mass)
}

/// γ² − βα + κ₀², zero up to rounding for any state produced here.
pub fn constraint_residual<T: Real>(state: &CoefficientState<T>, params: &InvariantParams<T>) -> T {
    state.gamma * state.gamma - params.beta * state.alpha + params.kappa0 * params.kappa0
}

/// σ̇² − μ̇² (β − κ₀² σ⁻²) with σ̇ from a central difference of step `h`.
pub fn auxiliary_residual<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    h: T,
) -> Result<T> {
    if !(h > T::zero() && t >= h) {
        return Err(Error::InvalidParameter(format!(
            "auxiliary residual needs t >= h > 0, got t = {t}, h = {h}"
        )));
    }
    let plus = coefficients_at(params, profile, t + h)?;
    let minus = coefficients_at(params, profile, t - h)?;
    let here = coefficients_at(params, profile, t)?;
    let sigma_dot = (plus.sigma - minus.sigma) / (h + h);
    let mu_dot = here.mass.recip();
    let k0 = params.kappa0;
    Ok(sigma_dot * sigma_dot
        - mu_dot * mu_dot * (params.beta - k0 * k0 / (here.sigma * here.sigma)))
}

/// First time derivatives of the coefficients, all by the chain rule through
/// μ̇ = 1/m.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientRates<T> {
    pub mu_dot: T,
    pub gamma_dot: T,
    pub alpha_dot: T,
    pub sigma_dot: T,
    pub kappa_dot: T,
    /// d(m σ̇)/dt
    pub m_sigma_dot_dot: T,
}

pub fn rates_of<T: Real>(params: &InvariantParams<T>, s: &CoefficientState<T>) -> CoefficientRates<T> {
    let mu_dot = s.mass.recip();
    let gamma_dot = -params.beta * mu_dot;
    let alpha_dot = -c::<T>(2.0) * s.gamma * mu_dot;
    let sigma_dot = s.sigma_dot();
    let kappa_dot = -params.kappa0 * sigma_dot / (s.sigma * s.sigma);
    let m_sigma_dot_dot = -gamma_dot / s.sigma + s.gamma * sigma_dot / (s.sigma * s.sigma);
    CoefficientRates {
        mu_dot,
        gamma_dot,
        alpha_dot,
        sigma_dot,
        kappa_dot,
        m_sigma_dot_dot,
    }
}

/// Intermediate quantities of the ladder-operator construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivationTerms<T> {
    /// ∂â†/∂t = Λ₁ â + Λ₂ â†
    pub lambda1: Complex<T>,
    pub lambda2: Complex<T>,
    /// k_α = κ + i m σ̇
    pub k_alpha: Complex<T>,
    /// Vacuum normalization (κ / πħσ)^{1/4}.
    pub zeta: T,
    /// Λ = (κ − i m σ̇) / (2ħσ), the same quantity as K.
    pub lambda: Complex<T>,
    pub lambda_r: T,
    pub rates: CoefficientRates<T>,
}

impl<T: Real> DerivationTerms<T> {
    pub fn k_alpha_dot(&self) -> Complex<T> {
        Complex::new(self.rates.kappa_dot, self.rates.m_sigma_dot_dot)
    }
}

pub fn derivation_terms_of<T: Real>(
    params: &InvariantParams<T>,
    s: &CoefficientState<T>,
) -> DerivationTerms<T> {
    let rates = rates_of(params, s);
    let k_alpha = Complex::new(s.kappa, s.m_sigma_dot);
    let k_alpha_dot = Complex::new(rates.kappa_dot, rates.m_sigma_dot_dot);
    let two_kappa_sq = c::<T>(2.0) * s.kappa * s.kappa;
    // d(κ k_α)/dt and d(κ k_α*)/dt
    let d_kk = k_alpha * rates.kappa_dot + k_alpha_dot * s.kappa;
    let d_kk_conj = k_alpha.conj() * rates.kappa_dot + k_alpha_dot.conj() * s.kappa;
    let lambda1 = -d_kk / two_kappa_sq;
    let lambda2 = Complex::from(rates.kappa_dot / s.kappa) - d_kk_conj / two_kappa_sq;
    let zeta = (s.kappa / (T::PI() * params.hbar * s.sigma)).powf(c(0.25));
    DerivationTerms {
        lambda1,
        lambda2,
        k_alpha,
        zeta,
        lambda: s.k,
        lambda_r: s.k.re,
        rates,
    }
}

pub fn derivation_terms_at<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
) -> Result<DerivationTerms<T>> {
    let s = coefficients_at(params, profile, t)?;
    Ok(derivation_terms_of(params, &s))
}

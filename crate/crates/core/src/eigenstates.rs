//! Eigenstates of the invariant by ladder recursion, their phases, and the
//! resulting exact solutions ψ_n = φ_n e^{iθ_n} of the Schrödinger equation.
//!
//! Phase convention: the total phase carries the constant imaginary part
//! (i/4) ln(2/π), so ψ₀ has the amplitude (κ₀ / 2ħσ²)^{1/4} and squared norm
//! √(π/2). Pass `normalize = true` to [`full_solution`] for unit-norm states.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::invariant::{coefficients_at, derivation_terms_of, CoefficientState, InvariantParams};
use crate::mass::MassProfile;
use crate::packet::WavePacket;
use crate::scalar::{c, Real};

/// Highest level built by default; polynomial coefficients lose
/// orthogonality in double precision beyond this.
pub const DEFAULT_LEVEL_CAP: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseTriple<T> {
    pub n: usize,
    pub theta_d: T,
    pub theta_g: Complex<T>,
    pub theta_total: Complex<T>,
}

pub fn vacuum<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
) -> Result<WavePacket<T>> {
    let s = coefficients_at(params, profile, t)?;
    vacuum_of(params, &s)
}

pub fn vacuum_of<T: Real>(params: &InvariantParams<T>, s: &CoefficientState<T>) -> Result<WavePacket<T>> {
    let zeta = (s.kappa / (T::PI() * params.hbar() * s.sigma)).powf(c(0.25));
    WavePacket::gaussian(s.k, T::zero(), Complex::from(zeta), s.t)
}

fn check_ladder_input<T: Real>(packet: &WavePacket<T>, s: &CoefficientState<T>) -> Result<()> {
    if packet.t != s.t {
        return Err(Error::Consistency(format!(
            "packet at t = {} but coefficients at t = {}",
            packet.t, s.t
        )));
    }
    if packet.k != s.k || packet.x_c != T::zero() {
        return Err(Error::Consistency(
            "ladder operators act on packets with the invariant's own width, centred at 0".into(),
        ));
    }
    Ok(())
}

/// â† ψ. On P e^{−Kx²} the Gaussian-derivative terms cancel against the
/// chirp and leave P ↦ (−iħσ P′ + (2iκ₀/σ) x P) / √(2ħκ₀).
pub fn create<T: Real>(
    packet: &WavePacket<T>,
    params: &InvariantParams<T>,
    s: &CoefficientState<T>,
) -> Result<WavePacket<T>> {
    check_ladder_input(packet, s)?;
    let hbar = params.hbar();
    let norm = (c::<T>(2.0) * hbar * params.kappa0()).sqrt().recip();
    let d_coef = Complex::new(T::zero(), -hbar * s.sigma) * norm;
    let x_coef = Complex::new(T::zero(), c::<T>(2.0) * params.kappa0() / s.sigma) * norm;
    let p = &packet.poly;
    let mut out = vec![Complex::from(T::zero()); p.len() + 1];
    for (j, &a) in p.iter().enumerate() {
        if j > 0 {
            out[j - 1] = out[j - 1] + d_coef * a * T::from_usize_lossy(j);
        }
        out[j + 1] = out[j + 1] + x_coef * a;
    }
    Ok(WavePacket { poly: out, ..packet.clone() })
}

/// â ψ. The x-terms cancel identically, leaving P ↦ −iħσ P′ / √(2ħκ₀);
/// on the vacuum this is the zero polynomial.
pub fn annihilate<T: Real>(
    packet: &WavePacket<T>,
    params: &InvariantParams<T>,
    s: &CoefficientState<T>,
) -> Result<WavePacket<T>> {
    check_ladder_input(packet, s)?;
    let hbar = params.hbar();
    let norm = (c::<T>(2.0) * hbar * params.kappa0()).sqrt().recip();
    let d_coef = Complex::new(T::zero(), -hbar * s.sigma) * norm;
    let p = &packet.poly;
    let mut out: Vec<Complex<T>> = (1..p.len())
        .map(|j| d_coef * p[j] * T::from_usize_lossy(j))
        .collect();
    if out.is_empty() {
        out.push(Complex::from(T::zero()));
    }
    Ok(WavePacket { poly: out, ..packet.clone() })
}

/// φ_{n+1} = â† φ_n / √(n+1).
pub fn raise<T: Real>(
    packet: &WavePacket<T>,
    n_current: usize,
    params: &InvariantParams<T>,
    s: &CoefficientState<T>,
) -> Result<WavePacket<T>> {
    let up = create(packet, params, s)?;
    let scale = T::from_usize_lossy(n_current + 1).sqrt().recip();
    Ok(WavePacket {
        poly: up.poly.into_iter().map(|a| a * scale).collect(),
        ..up
    })
}

pub fn eigenstate<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    n: usize,
) -> Result<WavePacket<T>> {
    eigenstate_capped(params, profile, t, n, DEFAULT_LEVEL_CAP)
}

pub fn eigenstate_capped<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    n: usize,
    cap: usize,
) -> Result<WavePacket<T>> {
    if n > cap {
        return Err(Error::LevelTooHigh { n, cap });
    }
    let s = coefficients_at(params, profile, t)?;
    eigenstate_of(params, &s, n)
}

pub fn eigenstate_of<T: Real>(
    params: &InvariantParams<T>,
    s: &CoefficientState<T>,
    n: usize,
) -> Result<WavePacket<T>> {
    let mut phi = vacuum_of(params, s)?;
    for k in 0..n {
        phi = raise(&phi, k, params, s)?;
    }
    Ok(phi)
}

/// h_nn = ⟨n|Ĥ|n⟩ = (ħβ / 2κ₀)(n + ½) μ̇.
pub fn hamiltonian_diagonal<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    n: usize,
) -> Result<T> {
    let mu_dot = profile.inverse_mass_at(t)?;
    Ok(params.hbar() * params.beta() / (c::<T>(2.0) * params.kappa0()) * level(n) * mu_dot)
}

fn level<T: Real>(n: usize) -> T {
    T::from_usize_lossy(n) + c(0.5)
}

/// θ_n^d = −(β / 2κ₀)(n + ½) μ(t).
pub fn dynamical_phase<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    n: usize,
) -> Result<T> {
    let mu = profile.mu_at(t)?;
    Ok(-params.beta() / (c::<T>(2.0) * params.kappa0()) * level(n) * mu)
}

fn amplitude_phase<T: Real>() -> T {
    // Im part (1/4) ln(2/π)
    (c::<T>(2.0) / T::PI()).ln() * c(0.25)
}

/// θ_n^g = (n + ½)[arctan(γ/κ₀) − γ/(2κ₀)] + (i/4) ln(2/π).
///
/// The real part is ∫ i⟨n|∂_t|n⟩ dt for the normalized ladder states up to
/// a constant; the constant imaginary part fixes the amplitude convention.
pub fn geometric_phase<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    n: usize,
) -> Result<Complex<T>> {
    let s = coefficients_at(params, profile, t)?;
    let angle = (s.gamma / params.kappa0()).atan();
    Ok(geometric_phase_with_angle(params, &s, n, angle))
}

fn geometric_phase_with_angle<T: Real>(
    params: &InvariantParams<T>,
    s: &CoefficientState<T>,
    n: usize,
    angle: T,
) -> Complex<T> {
    let re = level::<T>(n) * (angle - s.gamma / (c::<T>(2.0) * params.kappa0()));
    Complex::new(re, amplitude_phase())
}

/// θ_n = θ_n^d + θ_n^g = (n + ½)[arctan(γ/κ₀) − γ₀/(2κ₀)] + (i/4) ln(2/π),
/// evaluated from its own closed form.
pub fn total_phase<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    n: usize,
) -> Result<Complex<T>> {
    let s = coefficients_at(params, profile, t)?;
    let angle = (s.gamma / params.kappa0()).atan();
    Ok(total_phase_with_angle(params, n, angle))
}

fn total_phase_with_angle<T: Real>(params: &InvariantParams<T>, n: usize, angle: T) -> Complex<T> {
    let re = level::<T>(n) * (angle - params.gamma0() / (c::<T>(2.0) * params.kappa0()));
    Complex::new(re, amplitude_phase())
}

pub fn phases<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    n: usize,
) -> Result<PhaseTriple<T>> {
    Ok(PhaseTriple {
        n,
        theta_d: dynamical_phase(params, profile, t, n)?,
        theta_g: geometric_phase(params, profile, t, n)?,
        theta_total: total_phase(params, profile, t, n)?,
    })
}

/// Phases along a time series with arctan(γ/κ₀) unwrapped against the
/// previous sample, so the series is continuous even where the principal
/// branch would jump.
pub fn phase_series<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    times: &[T],
    n: usize,
) -> Result<Vec<(T, PhaseTriple<T>)>> {
    let mut out = Vec::with_capacity(times.len());
    let mut prev: Option<T> = None;
    let mut offset = T::zero();
    let half_pi = T::FRAC_PI_2();
    for &t in times {
        let s = coefficients_at(params, profile, t)?;
        let raw = (s.gamma / params.kappa0()).atan();
        if let Some(p) = prev {
            let jump = raw + offset - p;
            if jump > half_pi {
                offset = offset - T::PI();
            } else if jump < -half_pi {
                offset = offset + T::PI();
            }
        }
        let angle = raw + offset;
        prev = Some(angle);
        let theta_d = dynamical_phase(params, profile, t, n)?;
        out.push((
            t,
            PhaseTriple {
                n,
                theta_d,
                theta_g: geometric_phase_with_angle(params, &s, n, angle),
                theta_total: total_phase_with_angle(params, n, angle),
            },
        ));
    }
    Ok(out)
}

/// ⟨n|∂_t|n⟩ in closed form: ζ̇/ζ − Λ̇/(4Λ_r) for the vacuum, plus n Λ₂
/// from ∂â†/∂t = Λ₁â + Λ₂â†. Purely imaginary for normalized states.
pub fn berry_connection<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    n: usize,
) -> Result<Complex<T>> {
    let s = coefficients_at(params, profile, t)?;
    let d = derivation_terms_of(params, &s);
    let r = d.rates;
    let zeta_rate = (r.kappa_dot / s.kappa - r.sigma_dot / s.sigma) * c(0.25);
    let two_hbar_sigma = c::<T>(2.0) * params.hbar() * s.sigma;
    let lambda_dot =
        Complex::new(r.kappa_dot, -r.m_sigma_dot_dot) / two_hbar_sigma - d.lambda * (r.sigma_dot / s.sigma);
    let vacuum_part = Complex::from(zeta_rate) - lambda_dot / (c::<T>(4.0) * d.lambda_r);
    Ok(vacuum_part + d.lambda2 * T::from_usize_lossy(n))
}

/// ψ_n = φ_n e^{iθ_n}. With `normalize` the imaginary (amplitude) part of
/// the phase is dropped and ‖ψ_n‖ = 1.
pub fn full_solution<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    n: usize,
    normalize: bool,
) -> Result<WavePacket<T>> {
    let phi = eigenstate(params, profile, t, n)?;
    let mut theta = total_phase(params, profile, t, n)?;
    if normalize {
        theta.im = T::zero();
    }
    Ok(phi.scaled((Complex::<T>::i() * theta).exp()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::{inner_product, norm_sqr};
    use proptest::prelude::*;

    fn toy() -> (InvariantParams<f64>, MassProfile<f64>) {
        (InvariantParams::toy(), MassProfile::quadratic(1.0, 0.5).unwrap())
    }

    #[test]
    fn vacuum_examples() {
        let (p, m) = toy();
        let v = vacuum(&p, &m, 0.0).unwrap();
        assert!((v.prefactor.re - (0.5 / std::f64::consts::PI).powf(0.25)).abs() < 1e-15);
        assert!((v.prefactor.re - 0.63162).abs() < 1e-5);
        assert!((v.k - Complex::new(0.25, 0.25)).norm() < 1e-15);
        let v2 = vacuum(&p, &m, 2.0).unwrap();
        assert!((v2.prefactor.re - 0.75112).abs() < 1e-5);
        assert!((v2.k - Complex::new(0.5, 0.0)).norm() < 1e-15);
        for t in [0.0, 0.5, 2.0, 20.0] {
            assert!((norm_sqr(&vacuum(&p, &m, t).unwrap()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn raise_from_vacuum() {
        let (p, m) = toy();
        let s = coefficients_at(&p, &m, 0.0).unwrap();
        let v = vacuum_of(&p, &s).unwrap();
        let one = raise(&v, 0, &p, &s).unwrap();
        assert!(one.poly[0].norm() < 1e-15);
        assert!((one.poly[1] - Complex::new(0.0, 1.0)).norm() < 1e-15);
        assert!((norm_sqr(&one) - 1.0).abs() < 1e-10);
        for t in [0.0, 1.0, 3.3] {
            let s = coefficients_at(&p, &m, t).unwrap();
            let v = vacuum_of(&p, &s).unwrap();
            let one = raise(&v, 0, &p, &s).unwrap();
            assert!(inner_product(&one, &v).norm() < 1e-10);
        }
    }

    #[test]
    fn raise_rejects_time_mismatch() {
        let (p, m) = toy();
        let v = vacuum(&p, &m, 0.0).unwrap();
        let s = coefficients_at(&p, &m, 1.0).unwrap();
        assert!(matches!(raise(&v, 0, &p, &s), Err(Error::Consistency(_))));
    }

    #[test]
    fn lowering_annihilates_vacuum_exactly() {
        let (p, m) = toy();
        for t in [0.0, 1.0, 2.0, 20.0] {
            let s = coefficients_at(&p, &m, t).unwrap();
            let v = vacuum_of(&p, &s).unwrap();
            let z = annihilate(&v, &p, &s).unwrap();
            assert!(z.poly.iter().all(|a| *a == Complex::new(0.0, 0.0)));
            assert!(z.is_zero());
        }
    }

    #[test]
    fn lowering_undoes_raising() {
        let (p, m) = toy();
        let s = coefficients_at(&p, &m, 1.3).unwrap();
        let phi3 = eigenstate_of(&p, &s, 3).unwrap();
        let phi2 = eigenstate_of(&p, &s, 2).unwrap();
        let down = annihilate(&phi3, &p, &s).unwrap();
        // â φ₃ = √3 φ₂
        for x in [-2.0, 0.1, 1.7] {
            assert!((down.value(x) - phi2.value(x) * 3f64.sqrt()).norm() < 1e-12);
        }
    }

    #[test]
    fn eigenstate_level_cap() {
        let (p, m) = toy();
        assert!(matches!(
            eigenstate(&p, &m, 0.0, 65),
            Err(Error::LevelTooHigh { n: 65, cap: 64 })
        ));
        assert!(eigenstate_capped(&p, &m, 0.0, 65, 80).is_ok());
        assert_eq!(eigenstate(&p, &m, 0.0, 0).unwrap(), vacuum(&p, &m, 0.0).unwrap());
    }

    #[test]
    fn dynamical_phase_examples() {
        let (p, m) = toy();
        assert!((dynamical_phase(&p, &m, 2.0, 0).unwrap() + 0.25).abs() < 1e-15);
        assert_eq!(dynamical_phase(&p, &m, 0.0, 0).unwrap(), 0.0);
        assert!((hamiltonian_diagonal(&p, &m, 0.0, 0).unwrap() - 0.25).abs() < 1e-15);
    }

    #[test]
    fn geometric_phase_examples() {
        let (p, m) = toy();
        let g = geometric_phase(&p, &m, 0.0, 0).unwrap();
        assert!((g.re - (std::f64::consts::FRAC_PI_8 - 0.25)).abs() < 1e-15);
        assert!((g.re - 0.14270).abs() < 1e-5);
        assert!((g.im + 0.11290).abs() < 1e-5);
        let g2 = geometric_phase(&p, &m, 2.0, 0).unwrap();
        assert!(g2.re.abs() < 1e-15);
        assert!((g2.im - 0.25 * (2.0 / std::f64::consts::PI).ln()).abs() < 1e-15);
    }

    #[test]
    fn total_is_sum_of_parts() {
        let (p, m) = toy();
        for n in 0..6 {
            for t in [0.0, 0.4, 2.0, 9.0, 20.0] {
                let ph = phases(&p, &m, t, n).unwrap();
                let sum = ph.theta_g + ph.theta_d;
                assert!((sum - ph.theta_total).norm() < 1e-13, "n={n} t={t}");
            }
        }
    }

    #[test]
    fn ground_state_matches_explicit_form() {
        // ψ₀ = (κ₀/2ħσ²)^{1/4} exp(−Kx² − iγ₀/4κ₀ + (i/2) arctan(γ/κ₀))
        let (p, m) = toy();
        for t in [0.0, 1.0, 2.0, 20.0] {
            let psi = full_solution(&p, &m, t, 0, false).unwrap();
            let s = coefficients_at(&p, &m, t).unwrap();
            for x in [-1.5, 0.0, 0.8] {
                let amp = (p.kappa0() / (2.0 * s.alpha)).powf(0.25);
                let expo = -s.k * x * x
                    + Complex::i() * (-p.gamma0() / (4.0 * p.kappa0()) + 0.5 * (s.gamma / p.kappa0()).atan());
                let exact = expo.exp() * amp;
                assert!((psi.value(x) - exact).norm() < 1e-14);
            }
        }
        let psi = full_solution(&p, &m, 0.0, 0, false).unwrap();
        assert!((psi.value(0.0).norm() - 0.25f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn full_solution_norm_convention() {
        let (p, m) = toy();
        let target = (std::f64::consts::PI / 2.0).sqrt();
        for t in [0.0, 1.0, 2.0, 20.0] {
            for n in 0..4 {
                let psi = full_solution(&p, &m, t, n, false).unwrap();
                assert!((norm_sqr(&psi) - target).abs() < 1e-10);
                let psi = full_solution(&p, &m, t, n, true).unwrap();
                assert!((norm_sqr(&psi) - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn phase_series_is_continuous() {
        let (p, m) = toy();
        let times: Vec<f64> = (0..=200).map(|i| i as f64 * 0.1).collect();
        let series = phase_series(&p, &m, &times, 2).unwrap();
        for w in series.windows(2) {
            assert!((w[1].1.theta_total.re - w[0].1.theta_total.re).abs() < 0.5);
        }
        for (t, ph) in &series {
            let direct = phases(&p, &m, *t, 2).unwrap();
            assert!((direct.theta_total - ph.theta_total).norm() < 1e-14);
        }
    }

    #[test]
    fn berry_connection_is_imaginary_and_matches_vacuum_form() {
        let (p, m) = toy();
        let b = berry_connection(&p, &m, 2.0, 0).unwrap();
        // −½ mσ̇² + ¼ d(mσσ̇)/dt at γ = 0: mσ̇ = 0, d(mσσ̇)/dt = β/m = 1/4
        assert!(b.re.abs() < 1e-15);
        assert!((b.im - 1.0 / 16.0).abs() < 1e-14);
        for n in 0..5 {
            for t in [0.1, 1.0, 7.0] {
                assert!(berry_connection(&p, &m, t, n).unwrap().re.abs() < 1e-14);
            }
        }
    }

    fn random_setup() -> impl Strategy<Value = (InvariantParams<f64>, MassProfile<f64>, f64)> {
        (0.5f64..3.0, 0.3f64..2.0, -1.0f64..1.0, 0.5f64..2.0, 0.0f64..1.0, 0.0f64..10.0).prop_filter_map(
            "positive determinant",
            |(a, b, g, m0, rate, t)| {
                let p = InvariantParams::new(a, b, g, 1.0).ok()?;
                Some((p, MassProfile::quadratic(m0, rate).ok()?, t))
            },
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn ladder_states_are_orthonormal_eigenstates((p, m, t) in random_setup(), n in 0usize..5, k in 0usize..5) {
            let a = eigenstate(&p, &m, t, n).unwrap();
            let b = eigenstate(&p, &m, t, k).unwrap();
            let delta = if n == k { 1.0 } else { 0.0 };
            prop_assert!((inner_product(&a, &b) - delta).norm() < 1e-9);
            let lambda = crate::observables::expectation(&a, crate::observables::Observable::I, &p, &m).unwrap();
            prop_assert!((lambda.re - p.eigenvalue(n)).abs() < 1e-9 * p.eigenvalue(n));
        }

        #[test]
        fn total_phase_is_sum_of_parts((p, m, t) in random_setup(), n in 0usize..6) {
            let ph = phases(&p, &m, t, n).unwrap();
            prop_assert!((ph.theta_total - ph.theta_g - ph.theta_d).norm() < 1e-12);
            prop_assert!(berry_connection(&p, &m, t, n).unwrap().re.abs() < 1e-12);
        }
    }
}

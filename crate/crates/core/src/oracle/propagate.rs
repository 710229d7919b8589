use num_complex::Complex;
use num_traits::Zero;

use super::grid::{fidelity, GridSpec};
use super::residual::invariant_expectation;
use super::tridiag::solve_tridiagonal;
use crate::error::{Error, Result};
use crate::invariant::InvariantParams;
use crate::mass::MassProfile;
use crate::scalar::{c, Real};

const INITIAL_BOUNDARY_LIMIT: f64 = 1e-12;
const RUN_BOUNDARY_LIMIT: f64 = 1e-6;

/// Optional diagnostics collected during a run.
#[derive(Debug, Clone, Default)]
pub struct Tracking<T> {
    /// State the final samples are compared against.
    pub reference: Option<Vec<Complex<T>>>,
    /// Track ⟨Î⟩ with these invariant parameters.
    pub invariant: Option<InvariantParams<T>>,
    /// Keep every k-th state (0 keeps none). The initial and final states
    /// are always kept when k > 0.
    pub snapshot_every: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot<T> {
    pub t: T,
    pub psi: Vec<Complex<T>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PropagationReport<T> {
    /// |⟨ψ_num|ψ_ref⟩| / (‖ψ_num‖ ‖ψ_ref‖), when a reference was given.
    pub fidelity: Option<T>,
    /// max |⟨Î⟩(t) − ⟨Î⟩(0)| / |⟨Î⟩(0)| over the tracked states.
    pub invariant_drift: Option<T>,
    /// max |‖ψ(t)‖² / ‖ψ(0)‖² − 1| over all steps.
    pub norm_drift: T,
    pub steps: usize,
    /// dt ħ / (m_min Δx²); governs accuracy, not stability.
    pub stability_ratio: T,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Propagation<T> {
    pub state: Vec<Complex<T>>,
    pub snapshots: Vec<Snapshot<T>>,
    pub report: PropagationReport<T>,
}

fn boundary_amplitude<T: Real>(psi: &[Complex<T>], peak: T) -> T {
    let n = psi.len();
    psi[1].norm().max(psi[n - 2].norm()) / peak
}

/// Crank-Nicolson evolution of iħ∂_tψ = −(ħ²/2m(t))∂_x²ψ from t = 0 to
/// `spec.t_final`, with m evaluated at each step midpoint and ψ = 0 at both
/// grid ends.
pub fn propagate<T: Real>(
    initial: &[Complex<T>],
    profile: &MassProfile<T>,
    spec: &GridSpec<T>,
    hbar: T,
    tracking: &Tracking<T>,
) -> Result<Propagation<T>> {
    spec.validate()?;
    let n = spec.n_points;
    if initial.len() != n {
        return Err(Error::InvalidGrid(format!(
            "initial state has {} samples, grid has {n}",
            initial.len()
        )));
    }
    if let Some(r) = &tracking.reference {
        if r.len() != n {
            return Err(Error::InvalidGrid("reference length differs from grid".into()));
        }
    }
    let peak = initial.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if !(peak > T::zero()) {
        return Err(Error::InvalidParameter("initial state is identically zero".into()));
    }
    let edge = initial[0].norm().max(initial[n - 1].norm()) / peak;
    let near_edge = boundary_amplitude(initial, peak).max(edge);
    if near_edge > c(INITIAL_BOUNDARY_LIMIT) {
        return Err(Error::DomainTooSmall {
            t: 0.0,
            amplitude: near_edge.as_f64(),
            limit: INITIAL_BOUNDARY_LIMIT,
        });
    }

    let (steps, dt) = spec.steps();
    let dx = spec.dx();
    let x = spec.x_axis();
    let mut psi = initial.to_vec();
    psi[0] = Complex::zero();
    psi[n - 1] = Complex::zero();
    let norm0 = spec.norm_sqr(&psi);

    let invariant_at = |psi: &[Complex<T>], t: T| -> Result<Option<Complex<T>>> {
        match &tracking.invariant {
            Some(p) => invariant_expectation(psi, &x, dx, p, profile, t).map(Some),
            None => Ok(None),
        }
    };
    let inv0 = invariant_at(&psi, T::zero())?;
    let mut inv_drift = T::zero();
    let mut norm_drift = T::zero();
    let mut snapshots = Vec::new();
    if tracking.snapshot_every > 0 {
        snapshots.push(Snapshot { t: T::zero(), psi: psi.clone() });
    }

    let m = n - 2;
    let mut lower = vec![Complex::zero(); m];
    let mut diag = vec![Complex::zero(); m];
    let mut upper = vec![Complex::zero(); m];
    let mut rhs = vec![Complex::zero(); m];
    let mut scratch = vec![Complex::zero(); m];
    let mut m_min = T::infinity();

    for step in 0..steps {
        let t0 = dt * T::from_usize_lossy(step);
        let mass = profile.mass_at(t0 + dt * c(0.5))?;
        m_min = m_min.min(mass);
        let s = Complex::new(T::zero(), hbar * dt / (c::<T>(4.0) * mass * dx * dx));
        let two_s = s * c::<T>(2.0);
        for i in 0..m {
            let j = i + 1;
            rhs[i] = psi[j] * (Complex::from(T::one()) - two_s) + (psi[j - 1] + psi[j + 1]) * s;
            lower[i] = -s;
            upper[i] = -s;
            diag[i] = Complex::from(T::one()) + two_s;
        }
        solve_tridiagonal(&lower, &diag, &upper, &mut rhs, &mut scratch)?;
        psi[1..=m].copy_from_slice(&rhs);

        let t1 = if step + 1 == steps { spec.t_final } else { t0 + dt };
        let edge = boundary_amplitude(&psi, peak);
        if edge > c(RUN_BOUNDARY_LIMIT) {
            return Err(Error::DomainTooSmall {
                t: t1.as_f64(),
                amplitude: edge.as_f64(),
                limit: RUN_BOUNDARY_LIMIT,
            });
        }
        norm_drift = norm_drift.max((spec.norm_sqr(&psi) / norm0 - T::one()).abs());
        let keep = tracking.snapshot_every > 0 && ((step + 1) % tracking.snapshot_every == 0 || step + 1 == steps);
        if keep {
            snapshots.push(Snapshot { t: t1, psi: psi.clone() });
        }
        if let (Some(i0), true) = (inv0, keep || step + 1 == steps) {
            if let Some(v) = invariant_at(&psi, t1)? {
                inv_drift = inv_drift.max((v - i0).norm() / i0.norm());
            }
        }
    }

    let stability_ratio = if steps == 0 {
        T::zero()
    } else {
        dt * hbar / (m_min * dx * dx)
    };
    let report = PropagationReport {
        fidelity: tracking.reference.as_deref().map(|r| fidelity(&psi, r)),
        invariant_drift: inv0.map(|_| inv_drift),
        norm_drift,
        steps,
        stability_ratio,
    };
    Ok(Propagation {
        state: psi,
        snapshots,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigenstates::full_solution;
    use crate::packet::WavePacket;

    #[test]
    fn zero_time_is_identity() {
        let p = InvariantParams::<f64>::toy();
        let m = MassProfile::quadratic(1.0, 0.5).unwrap();
        let spec = GridSpec { t_final: 0.0, n_points: 256, ..Default::default() };
        let psi0 = spec.sample(&full_solution(&p, &m, 0.0, 0, false).unwrap());
        let tracking = Tracking {
            reference: Some(psi0.clone()),
            invariant: Some(p),
            snapshot_every: 0,
        };
        let out = propagate(&psi0, &m, &spec, 1.0, &tracking).unwrap();
        assert_eq!(out.report.steps, 0);
        assert!((out.report.fidelity.unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(out.report.invariant_drift, Some(0.0));
        assert_eq!(out.report.norm_drift, 0.0);
        assert_eq!(out.state[1..255], psi0[1..255]);
    }

    #[test]
    fn free_gaussian_spreads_like_textbook() {
        // ψ(x, t) ∝ (1 + 2iħt/m·a)^{-1/2} exp(−a x² / (1 + 2iħ a t/m)), a = 1/2
        let m = MassProfile::constant(1.0).unwrap();
        let spec = GridSpec { t_final: 1.0, ..Default::default() };
        let xs = spec.x_axis();
        let exact = |t: f64| -> Vec<Complex<f64>> {
            let d = Complex::new(1.0, 2.0 * 0.5 * t);
            xs.iter().map(|&x| (-(0.5 * x * x) / d).exp() / d.sqrt()).collect()
        };
        let tracking = Tracking {
            reference: Some(exact(1.0)),
            ..Default::default()
        };
        let out = propagate(&exact(0.0), &m, &spec, 1.0, &tracking).unwrap();
        assert!(out.report.fidelity.unwrap() >= 0.9999);
        assert!(out.report.norm_drift < 1e-8);
    }

    #[test]
    fn domain_too_small_is_reported() {
        let m = MassProfile::constant(1.0).unwrap();
        let spec = GridSpec { x_min: -6.0, x_max: 6.0, n_points: 128, dt: 0.01, t_final: 20.0 };
        let g = WavePacket::gaussian(Complex::new(2.0, 0.0), 0.0, Complex::new(1.0, 0.0), 0.0).unwrap();
        let err = propagate(&spec.sample(&g), &m, &spec, 1.0, &Tracking::default()).unwrap_err();
        assert!(matches!(err, Error::DomainTooSmall { t, .. } if t > 0.0 && t < 20.0));
        let wide = WavePacket::gaussian(Complex::new(0.01, 0.0), 0.0, Complex::new(1.0, 0.0), 0.0).unwrap();
        let err = propagate(&spec.sample(&wide), &m, &spec, 1.0, &Tracking::default()).unwrap_err();
        assert!(matches!(err, Error::DomainTooSmall { t, .. } if t == 0.0));
    }

    #[test]
    fn snapshots_are_kept_in_order() {
        let m = MassProfile::constant(1.0).unwrap();
        let spec = GridSpec { n_points: 128, dt: 0.1, t_final: 0.5, ..Default::default() };
        let g = WavePacket::gaussian(Complex::new(0.5, 0.0), 0.0, Complex::new(1.0, 0.0), 0.0).unwrap();
        let tracking = Tracking { snapshot_every: 2, ..Default::default() };
        let out = propagate(&spec.sample(&g), &m, &spec, 1.0, &tracking).unwrap();
        let ts: Vec<f64> = out.snapshots.iter().map(|s| s.t).collect();
        assert_eq!(ts.len(), 4);
        assert_eq!(ts[0], 0.0);
        assert!((ts[1] - 0.2).abs() < 1e-12 && (ts[2] - 0.4).abs() < 1e-12);
        assert_eq!(ts[3], 0.5);
    }
}

//! The oracle battery behind the `verify` command.

use num_complex::Complex;
use serde::Serialize;
use serde_json::{Map, Value};

use super::config::RunConfig;
use crate::cat::{cat_state, linspace, wigner_grid, WignerMethod};
use crate::eigenstates::{
    berry_connection, dynamical_phase, eigenstate, full_solution, geometric_phase, total_phase,
};
use crate::error::Result;
use crate::invariant::{auxiliary_residual, coefficients_at, constraint_residual, rates_of, InvariantParams};
use crate::mass::MassProfile;
use crate::observables::{expectation, Observable};
use crate::oracle::{berry_connection_fd, propagate, tdse_residual, GridSpec, Tracking};
use crate::packet::{inner_product, WavePacket};
use crate::quadrature::{adaptive, Tolerance};

/// Deliberate defects for checking that the battery catches them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mutation {
    DropDynamicalPhase,
}

impl Mutation {
    pub fn parse(name: &str) -> Option<Self> {
        (name == "drop-dynamical-phase").then_some(Self::DropDynamicalPhase)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckItem {
    /// Worst value observed.
    pub value: f64,
    pub threshold: f64,
    /// `value < threshold`, or `value >= threshold` for lower bounds.
    pub pass: bool,
    pub samples: usize,
}

impl CheckItem {
    fn below(value: f64, threshold: f64, samples: usize) -> Self {
        Self { value, threshold, pass: value < threshold, samples }
    }

    fn at_least(value: f64, threshold: f64, samples: usize) -> Self {
        Self { value, threshold, pass: value >= threshold, samples }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub items: Vec<(&'static str, CheckItem)>,
    pub mutation: Option<Mutation>,
}

impl VerifyReport {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|(_, c)| c.pass)
    }

    pub fn failing(&self) -> Vec<&'static str> {
        self.items.iter().filter(|(_, c)| !c.pass).map(|(k, _)| *k).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (k, c) in &self.items {
            m.insert((*k).to_string(), serde_json::to_value(c).expect("plain struct serializes"));
        }
        m.insert("all_pass".into(), Value::Bool(self.all_pass()));
        if self.mutation.is_some() {
            m.insert("mutation".into(), Value::String("drop-dynamical-phase".into()));
        }
        Value::Object(m)
    }
}

pub const CHECK_TIMES: [f64; 4] = [0.0, 1.0, 2.0, 20.0];
const HORIZON: f64 = 20.0;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Deterministic well-spread points in [lo, hi].
pub fn spread_points(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (1..=n).map(|k| lo + (hi - lo) * (k as f64 * GOLDEN).fract()).collect()
}

fn constraint(p: &InvariantParams<f64>, m: &MassProfile<f64>) -> Result<CheckItem> {
    let mut worst = 0.0f64;
    for t in linspace(0.0, HORIZON, 1000) {
        let s = coefficients_at(p, m, t)?;
        worst = worst.max(constraint_residual(&s, p).abs());
    }
    Ok(CheckItem::below(worst, 1e-12, 1000))
}

fn ode(p: &InvariantParams<f64>, m: &MassProfile<f64>) -> Result<CheckItem> {
    let h = 1e-4;
    let mut worst = 0.0f64;
    let times = spread_points(h, HORIZON - h, 100);
    for &t in &times {
        let plus = coefficients_at(p, m, t + h)?;
        let minus = coefficients_at(p, m, t - h)?;
        let r = rates_of(p, &coefficients_at(p, m, t)?);
        let d_gamma = (plus.gamma - minus.gamma) / (2.0 * h);
        let d_alpha = (plus.alpha - minus.alpha) / (2.0 * h);
        worst = worst
            .max((d_gamma - r.gamma_dot).abs())
            .max((d_alpha - r.alpha_dot).abs())
            .max(auxiliary_residual(p, m, t, h)?.abs());
    }
    Ok(CheckItem::below(worst, 1e-6, times.len()))
}

const MAX_LEVEL: usize = 8;

fn orthonormality(p: &InvariantParams<f64>, m: &MassProfile<f64>) -> Result<(CheckItem, CheckItem)> {
    let mut ortho = 0.0f64;
    let mut eig = 0.0f64;
    for &t in &CHECK_TIMES {
        let states: Vec<WavePacket<f64>> = (0..=MAX_LEVEL).map(|n| eigenstate(p, m, t, n)).collect::<Result<_>>()?;
        for (i, a) in states.iter().enumerate() {
            for (j, b) in states.iter().enumerate() {
                let delta = if i == j { 1.0 } else { 0.0 };
                ortho = ortho.max((inner_product(a, b) - delta).norm());
            }
            let want = p.eigenvalue(i);
            let got = expectation(a, Observable::I, p, m)?;
            eig = eig.max((got - want).norm() / want);
        }
    }
    let cells = CHECK_TIMES.len() * (MAX_LEVEL + 1);
    Ok((CheckItem::below(ortho, 1e-8, cells * (MAX_LEVEL + 1)), CheckItem::below(eig, 1e-8, cells)))
}

const PHASE_CHECKPOINTS: [f64; 7] = [0.0, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0];

/// Integrates −⟨n|Ĥ|n⟩/ħ and i⟨n|∂_t|n⟩ (both from quadrature matrix
/// elements) and compares with the closed-form phases.
fn phase_crosscheck(p: &InvariantParams<f64>, m: &MassProfile<f64>) -> Result<CheckItem> {
    let tol = Tolerance { rel: 1e-10, abs: 1e-9, max_intervals: 500 };
    let mut worst = 0.0f64;
    let mut samples = 0;
    for n in 0..=3 {
        let g0 = geometric_phase(p, m, 0.0, n)?;
        let mut acc_d = 0.0;
        let mut acc_g = Complex::new(0.0, 0.0);
        for w in PHASE_CHECKPOINTS.windows(2) {
            let (a, b) = (w[0], w[1]);
            let mut failure = None;
            let mut guard = |r: Result<f64>| {
                r.unwrap_or_else(|e| {
                    failure.get_or_insert(e);
                    0.0
                })
            };
            acc_d += adaptive(a, b, tol, |t| {
                guard(
                    eigenstate(p, m, t, n)
                        .and_then(|phi| expectation(&phi, Observable::H, p, m))
                        .map(|h| -h.re / p.hbar()),
                )
            })?;
            let mut failure_g = None;
            let conn: Complex<f64> = adaptive(a, b, tol, |t| {
                berry_connection_fd(p, m, t, n, 1e-5).unwrap_or_else(|e| {
                    failure_g.get_or_insert(e);
                    Complex::new(0.0, 0.0)
                })
            })?;
            if let Some(e) = failure.or(failure_g) {
                return Err(e);
            }
            acc_g += Complex::<f64>::i() * conn;
            let d = dynamical_phase(p, m, b, n)?;
            let g = geometric_phase(p, m, b, n)?;
            let total = total_phase(p, m, b, n)?;
            worst = worst
                .max((d - acc_d).abs())
                .max((g - g0 - acc_g).norm())
                .max((total - g - d).norm());
            // closed-form integrand consistency
            let conn_closed = berry_connection(p, m, b, n)?;
            worst = worst.max((conn_closed - berry_connection_fd(p, m, b, n, 1e-5)?).norm());
            samples += 1;
        }
    }
    Ok(CheckItem::below(worst, 1e-6, samples))
}

const TDSE_TIMES: [f64; 4] = [0.5, 1.0, 2.0, 20.0];

fn tdse(p: &InvariantParams<f64>, m: &MassProfile<f64>, mutation: Option<Mutation>) -> Result<CheckItem> {
    let spec = GridSpec::default();
    let mut worst = 0.0f64;
    for n in 0..=3 {
        for &t in &TDSE_TIMES {
            let r = match mutation {
                None => tdse_residual(|tau| full_solution(p, m, tau, n, false), m, t, &spec, p.hbar())?,
                Some(Mutation::DropDynamicalPhase) => tdse_residual(
                    |tau| {
                        let phi = eigenstate(p, m, tau, n)?;
                        let g = geometric_phase(p, m, tau, n)?;
                        Ok(phi.scaled((Complex::<f64>::i() * g).exp()))
                    },
                    m,
                    t,
                    &spec,
                    p.hbar(),
                )?,
            };
            worst = worst.max(r);
        }
    }
    Ok(CheckItem::below(worst, 1e-4, 4 * TDSE_TIMES.len()))
}

fn wigner_checks(cfg: &RunConfig, p: &InvariantParams<f64>, m: &MassProfile<f64>) -> Result<[CheckItem; 3]> {
    let mut oracle = 0.0f64;
    let mut marginal = 0.0f64;
    let xs = spread_points(-8.0, 8.0, 20);
    let mut origin = Vec::new();
    for &t in &CHECK_TIMES {
        let cat = cat_state(p, m, t, cfg.x0, cfg.normalize)?;
        let grid = wigner_grid(&cat, (-8.0, 8.0), (-4.0, 4.0), 41, 41, WignerMethod::Numeric)?;
        for (i, &x) in grid.x_axis.iter().enumerate() {
            for (j, &q) in grid.p_axis.iter().enumerate() {
                oracle = oracle.max((grid.values[i][j] - cat.wigner_closed(x, q)).abs());
            }
        }
        for &x in &xs {
            let rho = cat.momentum_marginal(x, WignerMethod::Closed)?;
            marginal = marginal.max((rho - cat.density(x)).abs());
        }
        origin.push(cat.wigner_closed(0.0, 0.0));
    }
    let spread = origin.iter().map(|w| (w - origin[0]).abs() / origin[0].abs()).fold(0.0, f64::max);
    Ok([
        CheckItem::below(oracle, 1e-6, 41 * 41 * CHECK_TIMES.len()),
        CheckItem::below(marginal, 1e-6, xs.len() * CHECK_TIMES.len()),
        CheckItem::below(spread, 1e-9, CHECK_TIMES.len()),
    ])
}

fn propagation(p: &InvariantParams<f64>, m: &MassProfile<f64>) -> Result<[CheckItem; 3]> {
    let spec = GridSpec::default();
    let start = spec.sample(&full_solution(p, m, 0.0, 0, false)?);
    let target = spec.sample(&full_solution(p, m, spec.t_final, 0, false)?);
    let tracking = Tracking { reference: Some(target), invariant: Some(*p), snapshot_every: 100 };
    let run = propagate(&start, m, &spec, p.hbar(), &tracking)?;
    let r = run.report;
    let tracked = run.snapshots.len();
    Ok([
        CheckItem::at_least(r.fidelity.unwrap_or(0.0), 0.999, 1),
        CheckItem::below(r.invariant_drift.unwrap_or(f64::INFINITY), 1e-3, tracked),
        CheckItem::below(r.norm_drift, 1e-8, r.steps),
    ])
}

pub fn run_verify(cfg: &RunConfig, mutation: Option<Mutation>) -> Result<VerifyReport> {
    let p = cfg.params()?;
    let m = cfg.profile()?;
    let (ortho, eig) = orthonormality(&p, &m)?;
    let [oracle, marginal, origin] = wigner_checks(cfg, &p, &m)?;
    let [fid, drift, norm] = propagation(&p, &m)?;
    let items = vec![
        ("constraint_residuals", constraint(&p, &m)?),
        ("ode_residuals", ode(&p, &m)?),
        ("orthonormality", ortho),
        ("eigenvalue_constancy", eig),
        ("phase_crosscheck", phase_crosscheck(&p, &m)?),
        ("tdse_residuals", tdse(&p, &m, mutation)?),
        ("wigner_oracle_maxerr", oracle),
        ("marginal_maxerr", marginal),
        ("origin_persistence", origin),
        ("fidelity", fid),
        ("invariant_drift", drift),
        ("norm_drift", norm),
    ];
    Ok(VerifyReport { items, mutation })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spread_points_stay_in_range() {
        let pts = spread_points(-8.0, 8.0, 20);
        assert_eq!(pts.len(), 20);
        assert!(pts.iter().all(|&x| (-8.0..=8.0).contains(&x)));
        assert_eq!(Mutation::parse("drop-dynamical-phase"), Some(Mutation::DropDynamicalPhase));
        assert_eq!(Mutation::parse("other"), None);
    }
}

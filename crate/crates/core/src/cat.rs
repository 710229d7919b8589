//! Two-packet superposition ψ_T = [ψ₀(x − x₀) + ψ₀(x + x₀)] / √2, its
//! density, and its Wigner distribution
//! W(x, p) = ∫ ψ_T*(x + y/2) ψ_T(x − y/2) e^{ipy/ħ} dy
//! both in closed form and by direct quadrature.
//!
//! Without normalization the transform is taken exactly as written above on
//! the ground state with its √(π/2) squared norm. With normalization ψ_T is
//! scaled to unit norm and W carries the usual 1/(2πħ), so ∫∫W dx dp = 1.

use num_complex::Complex;
use rayon::prelude::*;

use crate::eigenstates::full_solution;
use crate::error::{Error, Result};
use crate::invariant::InvariantParams;
use crate::mass::MassProfile;
use crate::packet::WavePacket;
use crate::quadrature::{adaptive, GaussLegendre, Tolerance};
use crate::scalar::{c, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct CatState<T> {
    pub x0: T,
    pub t: T,
    pub hbar: T,
    pub normalize: bool,
    /// Components centred at +x₀ and −x₀, each already weighted by 1/√2
    /// (and by the normalization factor when `normalize` is set).
    pub packets: [WavePacket<T>; 2],
    /// Invariant parameters the state was built from, if any.
    pub params: Option<InvariantParams<T>>,
    k: Complex<T>,
    // |A|² of one unweighted component
    amplitude_sq: T,
    // factor multiplying ψ_T (1 unless normalized)
    scale: T,
}

impl<T: Real> CatState<T> {
    /// Superposition of two Gaussians A e^{−K(x ∓ x₀)²} with |A|⁴ = Re K,
    /// the amplitude convention of the ground state.
    pub fn from_gaussian(k: Complex<T>, x0: T, hbar: T, t: T, normalize: bool) -> Result<Self> {
        let amp = Complex::from(k.re.powf(c(0.25)));
        let base = WavePacket::gaussian(k, T::zero(), amp, t)?;
        Self::from_ground_state(base, x0, hbar, normalize, None)
    }

    fn from_ground_state(
        base: WavePacket<T>,
        x0: T,
        hbar: T,
        normalize: bool,
        params: Option<InvariantParams<T>>,
    ) -> Result<Self> {
        if !(x0 >= T::zero()) || !x0.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "half-separation x0 = {x0} must be finite and non-negative"
            )));
        }
        if base.degree() != Some(0) || base.x_c != T::zero() {
            return Err(Error::Consistency("cat components must be centred Gaussians".into()));
        }
        let k = base.k;
        let a = base.prefactor * base.poly[0];
        let amplitude_sq = a.norm_sqr();
        let mut cat = Self {
            x0,
            t: base.t,
            hbar,
            normalize,
            packets: [base.clone(), base],
            params,
            k,
            amplitude_sq,
            scale: T::one(),
        };
        if normalize {
            cat.scale = cat.norm_sqr_unscaled().sqrt().recip();
        }
        let w = Complex::from(cat.scale * c::<T>(0.5).sqrt());
        cat.packets[0] = WavePacket { x_c: x0, ..cat.packets[0].scaled(w) };
        cat.packets[1] = WavePacket { x_c: -x0, ..cat.packets[1].scaled(w) };
        Ok(cat)
    }

    pub fn k(&self) -> Complex<T> {
        self.k
    }

    /// ‖ψ_T‖² before any normalization:
    /// |A|² √(π/2k_r) (1 + e^{−2|K|²x₀²/k_r}).
    pub fn norm_sqr_unscaled(&self) -> T {
        let k_r = self.k.re;
        let single = self.amplitude_sq * (T::PI() / (c::<T>(2.0) * k_r)).sqrt();
        single * (T::one() + (-c::<T>(2.0) * self.k.norm_sqr() / k_r * self.x0 * self.x0).exp())
    }

    pub fn value(&self, x: T) -> Complex<T> {
        self.packets[0].value(x) + self.packets[1].value(x)
    }

    /// ρ_T = ½|A|²[e^{−2k_r(x−x₀)²} + e^{−2k_r(x+x₀)²} + 2e^{−2k_r(x²+x₀²)} cos(4k_i x₀ x)].
    pub fn density(&self, x: T) -> T {
        let (k_r, k_i, x0) = (self.k.re, self.k.im, self.x0);
        let two = c::<T>(2.0);
        let bracket = (-two * k_r * (x - x0) * (x - x0)).exp()
            + (-two * k_r * (x + x0) * (x + x0)).exp()
            + two * (-two * k_r * (x * x + x0 * x0)).exp() * (c::<T>(4.0) * k_i * x0 * x).cos();
        c::<T>(0.5) * self.amplitude_sq * self.scale * self.scale * bracket
    }

    fn wigner_prefactor(&self) -> T {
        let k_r = self.k.re;
        let base = c::<T>(0.5) * self.amplitude_sq * (c::<T>(2.0) * T::PI() / k_r).sqrt();
        let scaled = base * self.scale * self.scale;
        if self.normalize {
            scaled / (c::<T>(2.0) * T::PI() * self.hbar)
        } else {
            scaled
        }
    }

    fn ridge(&self, u: T, p: T) -> T {
        let k_r = self.k.re;
        let two = c::<T>(2.0);
        (-two * self.k.norm_sqr() / k_r * u * u - two * self.k.im / (self.hbar * k_r) * p * u).exp()
    }

    fn momentum_envelope(&self, p: T) -> T {
        (-p * p / (c::<T>(2.0) * self.hbar * self.hbar * self.k.re)).exp()
    }

    /// Closed-form Wigner function.
    pub fn wigner_closed(&self, x: T, p: T) -> T {
        let x0 = self.x0;
        let bracket = self.ridge(x - x0, p)
            + self.ridge(x + x0, p)
            + c::<T>(2.0) * self.ridge(x, p) * (c::<T>(2.0) * x0 * p / self.hbar).cos();
        self.wigner_prefactor() * bracket * self.momentum_envelope(p)
    }

    /// The interference contribution alone.
    pub fn cross_term_closed(&self, x: T, p: T) -> T {
        let osc = (c::<T>(2.0) * self.x0 * p / self.hbar).cos();
        self.wigner_prefactor() * c::<T>(2.0) * self.ridge(x, p) * osc * self.momentum_envelope(p)
    }

    /// Wigner function by quadrature of the defining transform.
    pub fn wigner_numeric(&self, x: T, p: T) -> Result<WignerSample<T>> {
        let mut s = wigner_transform(&self.packets, x, p, self.hbar)?;
        if self.normalize {
            let f = (c::<T>(2.0) * T::PI() * self.hbar).recip();
            s.value = s.value * f;
            s.imag_residue = s.imag_residue * f;
        }
        Ok(s)
    }

    /// (1/2πħ) ∫ W dp (or ∫ W dp when normalized), which must reproduce ρ_T.
    pub fn momentum_marginal(&self, x: T, method: WignerMethod) -> Result<T> {
        let reach = self.hbar * (c::<T>(90.0) * self.k.re).sqrt();
        let tol = Tolerance {
            rel: c(1e-12),
            abs: c(1e-15),
            max_intervals: 4000,
        };
        let integral: T = match method {
            WignerMethod::Closed => adaptive(-reach, reach, tol, |p| self.wigner_closed(x, p))?,
            WignerMethod::Numeric => {
                let mut err = None;
                let v = adaptive(-reach, reach, tol, |p| match self.wigner_numeric(x, p) {
                    Ok(s) => s.value,
                    Err(e) => {
                        err.get_or_insert(e);
                        T::zero()
                    }
                })?;
                if let Some(e) = err {
                    return Err(e);
                }
                v
            }
        };
        Ok(if self.normalize {
            integral
        } else {
            integral / (c::<T>(2.0) * T::PI() * self.hbar)
        })
    }
}

/// ψ_T at time t built from the ground-state solution ψ₀.
pub fn cat_state<T: Real>(
    params: &InvariantParams<T>,
    profile: &MassProfile<T>,
    t: T,
    x0: T,
    normalize: bool,
) -> Result<CatState<T>> {
    let psi0 = full_solution(params, profile, t, 0, false)?;
    CatState::from_ground_state(psi0, x0, params.hbar(), normalize, Some(*params))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerSample<T> {
    pub value: T,
    /// Imaginary part of the quadrature result; zero in exact arithmetic.
    pub imag_residue: T,
}

/// ∫ ψ*(x + y/2) ψ(x − y/2) e^{ipy/ħ} dy for ψ = Σ packets, by composite
/// Gauss-Legendre panels sized from the Gaussian width and the fastest
/// oscillation of the integrand.
pub fn wigner_transform<T: Real>(
    packets: &[WavePacket<T>],
    x: T,
    p: T,
    hbar: T,
) -> Result<WignerSample<T>> {
    let k_r_min = packets.iter().map(|q| q.k.re).fold(T::infinity(), T::min);
    let k_i_max = packets.iter().map(|q| q.k.im.abs()).fold(T::zero(), T::max);
    let deg = packets.iter().filter_map(|q| q.degree()).max().unwrap_or(0);
    let mut lo = T::infinity();
    let mut hi = T::neg_infinity();
    for a in packets {
        for b in packets {
            let centre = a.x_c - b.x_c;
            lo = lo.min(centre);
            hi = hi.max(centre);
        }
    }
    let integrand = |y: T| {
        let half = y * c(0.5);
        let psi_plus: Complex<T> = packets.iter().map(|q| q.value(x + half)).sum();
        let psi_minus: Complex<T> = packets.iter().map(|q| q.value(x - half)).sum();
        psi_plus.conj() * psi_minus * Complex::new(T::zero(), p * y / hbar).exp()
    };
    let peak = packets
        .iter()
        .map(|q| q.prefactor.norm() * q.poly.iter().map(|a| a.norm()).fold(T::zero(), T::max))
        .fold(T::zero(), T::max);
    let scale = (peak * peak).max(T::min_positive_value());
    // |integrand| ≤ e^{−k_r (y − y*)²/2} · poly growth
    let mut reach = (c::<T>(2.0 * 40.0) / k_r_min).sqrt() + c::<T>(4.0) * T::from_usize_lossy(deg).sqrt();
    let rule = GaussLegendre::<T>::new(20);
    for _ in 0..3 {
        let a = lo - reach;
        let b = hi + reach;
        let tail = integrand(a).norm().max(integrand(b).norm()) / scale;
        if tail > c(1e-12) {
            reach = reach + reach;
            continue;
        }
        let span = x.abs() + (hi - lo).abs() + reach;
        let freq = p.abs() / hbar + c::<T>(2.0) * k_i_max * span + T::one();
        let width = (c::<T>(0.7) / k_r_min.sqrt()).min(c::<T>(2.0) * T::PI() / freq);
        let panels = ((b - a) / width).ceil().to_usize().unwrap_or(1).max(1);
        let v: Complex<T> = rule.composite(a, b, panels, integrand);
        return Ok(WignerSample {
            value: v.re,
            imag_residue: v.im,
        });
    }
    let a = lo - reach;
    let b = hi + reach;
    let tail = integrand(a).norm().max(integrand(b).norm()) / scale;
    Err(Error::TailTruncation(tail.as_f64()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WignerMethod {
    Closed,
    Numeric,
}

impl WignerMethod {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Closed => "closed",
            Self::Numeric => "numeric",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridMeta<T> {
    pub t: T,
    pub x0: T,
    pub hbar: T,
    pub normalize: bool,
    pub method: WignerMethod,
    pub params: Option<InvariantParams<T>>,
    /// max |closed − numeric| over a 9×9 subsample of the grid.
    pub selfcheck_max_err: T,
    /// Largest imaginary quadrature residue seen (numeric method only).
    pub max_imag_residue: T,
}

/// Rectangular (x, p) sampling of a real Wigner field; `values[i][j]` is
/// W(x_axis[i], p_axis[j]).
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseSpaceGrid<T> {
    pub x_axis: Vec<T>,
    pub p_axis: Vec<T>,
    pub values: Vec<Vec<T>>,
    pub meta: GridMeta<T>,
}

impl<T: Real> PhaseSpaceGrid<T> {
    pub fn value_at(&self, i: usize, j: usize) -> T {
        self.values[i][j]
    }

    /// Trapezoid estimate of ∫∫ W dx dp.
    pub fn integrate(&self) -> T {
        let wx = trapezoid_weights(&self.x_axis);
        let wp = trapezoid_weights(&self.p_axis);
        self.values
            .iter()
            .zip(&wx)
            .map(|(row, &a)| row.iter().zip(&wp).fold(T::zero(), |acc, (&v, &b)| acc + v * b) * a)
            .fold(T::zero(), |acc, v| acc + v)
    }
}

fn trapezoid_weights<T: Real>(axis: &[T]) -> Vec<T> {
    let n = axis.len();
    let mut w = vec![T::zero(); n];
    for i in 0..n - 1 {
        let h = (axis[i + 1] - axis[i]) * c(0.5);
        w[i] = w[i] + h;
        w[i + 1] = w[i + 1] + h;
    }
    w
}

/// `n` evenly spaced samples over [lo, hi], endpoints included.
pub fn linspace<T: Real>(lo: T, hi: T, n: usize) -> Vec<T> {
    if n == 1 {
        return vec![lo];
    }
    let step = (hi - lo) / T::from_usize_lossy(n - 1);
    (0..n)
        .map(|i| if i == n - 1 { hi } else { lo + step * T::from_usize_lossy(i) })
        .collect()
}

fn subsample(n: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..9).map(|k| (k * (n - 1) + 4) / 8).collect();
    idx.dedup();
    idx
}

pub fn wigner_grid<T: Real>(
    cat: &CatState<T>,
    x_range: (T, T),
    p_range: (T, T),
    nx: usize,
    np: usize,
    method: WignerMethod,
) -> Result<PhaseSpaceGrid<T>> {
    if nx < 2 || np < 2 {
        return Err(Error::InvalidGrid(format!("need at least 2x2 points, got {nx}x{np}")));
    }
    if !(x_range.1 > x_range.0) || !(p_range.1 > p_range.0) {
        return Err(Error::InvalidGrid("ranges must be increasing".into()));
    }
    let x_axis = linspace(x_range.0, x_range.1, nx);
    let p_axis = linspace(p_range.0, p_range.1, np);

    let rows: Vec<Result<(Vec<T>, T)>> = x_axis
        .par_iter()
        .map(|&x| {
            let mut row = Vec::with_capacity(np);
            let mut residue = T::zero();
            for &p in &p_axis {
                match method {
                    WignerMethod::Closed => row.push(cat.wigner_closed(x, p)),
                    WignerMethod::Numeric => {
                        let s = cat.wigner_numeric(x, p)?;
                        residue = residue.max(s.imag_residue.abs());
                        row.push(s.value);
                    }
                }
            }
            Ok((row, residue))
        })
        .collect();
    let mut values = Vec::with_capacity(nx);
    let mut max_imag_residue = T::zero();
    for r in rows {
        let (row, res) = r?;
        max_imag_residue = max_imag_residue.max(res);
        values.push(row);
    }

    let mut selfcheck = T::zero();
    for &i in &subsample(nx) {
        for &j in &subsample(np) {
            let (x, p) = (x_axis[i], p_axis[j]);
            let other = match method {
                WignerMethod::Closed => cat.wigner_numeric(x, p)?.value,
                WignerMethod::Numeric => cat.wigner_closed(x, p),
            };
            selfcheck = selfcheck.max((values[i][j] - other).abs());
        }
    }

    Ok(PhaseSpaceGrid {
        x_axis,
        p_axis,
        values,
        meta: GridMeta {
            t: cat.t,
            x0: cat.x0,
            hbar: cat.hbar,
            normalize: cat.normalize,
            method,
            params: cat.params,
            selfcheck_max_err: selfcheck,
            max_imag_residue,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::packet::norm_sqr;
    use proptest::prelude::*;

    fn toy() -> (InvariantParams<f64>, MassProfile<f64>) {
        (InvariantParams::toy(), MassProfile::quadratic(1.0, 0.5).unwrap())
    }

    const SQRT_HALF_PI: f64 = 1.253_314_137_315_500_3;

    #[test]
    fn cat_state_examples() {
        let (p, m) = toy();
        let cat = cat_state(&p, &m, 0.0, 4.0, false).unwrap();
        assert_eq!(cat.packets[0].x_c, 4.0);
        assert_eq!(cat.packets[1].x_c, -4.0);
        assert!((cat.k() - Complex::new(0.25, 0.25)).norm() < 1e-15);
        assert_eq!(cat.packets[0].prefactor, cat.packets[1].prefactor);
        let cat2 = cat_state(&p, &m, 2.0, 4.0, false).unwrap();
        assert!((cat2.k() - Complex::new(0.5, 0.0)).norm() < 1e-15);
        let psi0 = full_solution(&p, &m, 1.0, 0, false).unwrap();
        let degenerate = cat_state(&p, &m, 1.0, 0.0, false).unwrap();
        for x in [-1.0, 0.0, 0.3] {
            assert!((degenerate.value(x) - psi0.value(x) * 2f64.sqrt()).norm() < 1e-14);
        }
        assert!(cat_state(&p, &m, 1.0, -1.0, false).is_err());
    }

    #[test]
    fn cat_is_even() {
        let (p, m) = toy();
        let cat = cat_state(&p, &m, 0.7, 4.0, false).unwrap();
        for x in [0.3, 1.0, 3.9, 6.2] {
            assert!((cat.value(x) - cat.value(-x)).norm() < 1e-15);
            assert!((cat.density(x) - cat.density(-x)).abs() < 1e-15);
        }
    }

    #[test]
    fn density_examples() {
        let (p, m) = toy();
        let cat = cat_state(&p, &m, 2.0, 4.0, false).unwrap();
        assert!((cat.density(4.0) - 0.5 * 0.5f64.sqrt()).abs() < 1e-12);
        assert!((cat.density(4.0) - 0.35355).abs() < 1e-5);
        let cat0 = cat_state(&p, &m, 0.0, 4.0, false).unwrap();
        assert!((cat0.density(0.0) - (-8.0f64).exp()).abs() < 1e-15);
        for t in [0.0, 1.0, 2.0, 20.0] {
            let cat = cat_state(&p, &m, t, 4.0, false).unwrap();
            for i in 0..41 {
                let x = -10.0 + 0.5 * i as f64;
                assert!((cat.density(x) - cat.value(x).norm_sqr()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn origin_value_is_time_independent() {
        let (p, m) = toy();
        let expected = 2.0 * SQRT_HALF_PI * (1.0 + (-16.0f64).exp());
        for t in [0.0, 1.0, 2.0, 20.0] {
            let cat = cat_state(&p, &m, t, 4.0, false).unwrap();
            let w = cat.wigner_closed(0.0, 0.0);
            assert!(((w - expected) / expected).abs() < 1e-12, "t={t}: {w}");
            assert!((cat.cross_term_closed(0.0, 0.0) - 2.0 * SQRT_HALF_PI).abs() < 1e-14);
        }
        let cat = cat_state(&p, &m, 2.0, 4.0, false).unwrap();
        assert!((cat.wigner_closed(4.0, 0.0) - SQRT_HALF_PI).abs() < 1e-6);
    }

    #[test]
    fn closed_matches_numeric_pointwise() {
        let (p, m) = toy();
        for t in [0.0, 1.0, 20.0] {
            let cat = cat_state(&p, &m, t, 4.0, false).unwrap();
            for &(x, q) in &[(0.0, 0.0), (1.3, -2.2), (-4.0, 0.5), (7.5, 3.9), (-2.0, -4.0)] {
                let n = cat.wigner_numeric(x, q).unwrap();
                assert!((n.value - cat.wigner_closed(x, q)).abs() < 1e-10, "t={t} x={x} p={q}");
                assert!(n.imag_residue.abs() < 1e-10);
            }
        }
    }

    #[test]
    fn single_packet_wigner_is_nonnegative() {
        let k = Complex::new(0.3, -0.2);
        let g = WavePacket::gaussian(k, 1.0, Complex::new(0.7, 0.1), 0.0).unwrap();
        for i in 0..15 {
            for j in 0..15 {
                let x = -5.0 + i as f64 * 0.8;
                let q = -3.0 + j as f64 * 0.45;
                let w = wigner_transform(std::slice::from_ref(&g), x, q, 1.0).unwrap();
                assert!(w.value > -1e-14);
            }
        }
    }

    #[test]
    fn wigner_parity() {
        let (p, m) = toy();
        let cat = cat_state(&p, &m, 0.0, 4.0, false).unwrap();
        for &(x, q) in &[(0.5, 1.0), (3.3, -0.7), (-6.0, 2.5)] {
            assert!((cat.wigner_closed(x, q) - cat.wigner_closed(-x, -q)).abs() < 1e-14);
            let a = cat.wigner_numeric(x, q).unwrap().value;
            let b = cat.wigner_numeric(-x, -q).unwrap().value;
            assert!((a - b).abs() < 1e-10);
        }
    }

    #[test]
    fn normalized_cat() {
        let (p, m) = toy();
        let cat = cat_state(&p, &m, 1.0, 1.0, true).unwrap();
        let n: f64 = norm_sqr(&cat.packets[0]) + norm_sqr(&cat.packets[1])
            + 2.0 * crate::packet::inner_product(&cat.packets[0], &cat.packets[1]).re;
        assert!((n - 1.0).abs() < 1e-12);
        let rho = cat.momentum_marginal(0.4, WignerMethod::Closed).unwrap();
        assert!((rho - cat.density(0.4)).abs() < 1e-10);
        let w = cat.wigner_numeric(0.2, 0.3).unwrap().value;
        assert!((w - cat.wigner_closed(0.2, 0.3)).abs() < 1e-12);
    }

    #[test]
    fn grid_small_and_errors() {
        let (p, m) = toy();
        let cat = cat_state(&p, &m, 0.0, 4.0, false).unwrap();
        let g = wigner_grid(&cat, (-1.0, 1.0), (-1.0, 1.0), 2, 2, WignerMethod::Closed).unwrap();
        assert_eq!(g.values.len(), 2);
        assert_eq!(g.values[0].len(), 2);
        assert_eq!(g.x_axis, vec![-1.0, 1.0]);
        assert!((g.value_at(1, 1) - cat.wigner_closed(1.0, 1.0)).abs() == 0.0);
        assert!(wigner_grid(&cat, (-1.0, 1.0), (-1.0, 1.0), 1, 5, WignerMethod::Closed).is_err());
        assert!(wigner_grid(&cat, (1.0, -1.0), (-1.0, 1.0), 3, 5, WignerMethod::Closed).is_err());
    }

    #[test]
    fn subsample_indices() {
        assert_eq!(subsample(2), vec![0, 1]);
        assert_eq!(subsample(41), vec![0, 5, 10, 15, 20, 25, 30, 35, 40]);
    }

    fn random_cat() -> impl Strategy<Value = CatState<f64>> {
        (0.5f64..3.0, 0.3f64..2.0, -1.0f64..1.0, 0.0f64..1.0, 0.0f64..10.0, 0.0f64..5.0, any::<bool>())
            .prop_filter_map("positive determinant", |(a, b, g, rate, t, x0, normalize)| {
                let p = InvariantParams::new(a, b, g, 1.0).ok()?;
                let m = MassProfile::quadratic(1.0, rate).ok()?;
                cat_state(&p, &m, t, x0, normalize).ok()
            })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closed_and_numeric_agree(cat in random_cat(), x in -8.0f64..8.0, q in -4.0f64..4.0) {
            let n = cat.wigner_numeric(x, q).unwrap();
            prop_assert!((n.value - cat.wigner_closed(x, q)).abs() < 1e-9);
            prop_assert!(n.imag_residue.abs() < 1e-10);
            prop_assert!((cat.wigner_closed(x, q) - cat.wigner_closed(-x, -q)).abs() < 1e-12);
        }

        #[test]
        fn origin_interference_term_is_fixed(cat in random_cat()) {
            prop_assume!(!cat.normalize);
            let expected = 2.0 * SQRT_HALF_PI;
            prop_assert!((cat.cross_term_closed(0.0, 0.0) - expected).abs() < 1e-13);
            let k = cat.k();
            let decay = (-2.0 * k.norm_sqr() / k.re * cat.x0 * cat.x0).exp();
            prop_assert!((cat.wigner_closed(0.0, 0.0) - expected * (1.0 + decay)).abs() < 1e-12);
        }

        #[test]
        fn density_matches_packets(cat in random_cat(), x in -10.0f64..10.0) {
            prop_assert!((cat.density(x) - cat.value(x).norm_sqr()).abs() < 1e-12);
            prop_assert!((cat.density(x) - cat.density(-x)).abs() < 1e-13);
        }
    }

    #[test]
    fn single_precision_agrees() {
        let p = InvariantParams::<f32>::new(2.0, 1.0, 1.0, 1.0).unwrap();
        let m = MassProfile::<f32>::quadratic(1.0, 0.5).unwrap();
        let cat = cat_state(&p, &m, 1.0, 4.0, false).unwrap();
        let w = cat.wigner_closed(0.0, 0.0);
        assert!((w - 2.0 * (std::f32::consts::PI / 2.0).sqrt()).abs() < 1e-5);
        let n = cat.wigner_numeric(0.5, 0.3).unwrap().value;
        assert!((n - cat.wigner_closed(0.5, 0.3)).abs() < 1e-4);
    }
}

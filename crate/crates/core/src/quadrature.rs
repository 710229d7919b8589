//! Quadrature rules: Gauss-Legendre (fixed and composite) and adaptive
//! Gauss-Kronrod 7/15 with global error control.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::scalar::{c, Real};

/// Values that can be integrated: closed under addition and real scaling,
/// with a magnitude for error control.
pub trait Integrand<T>:
    Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<T, Output = Self>
{
    fn magnitude(&self) -> T;
}

impl Integrand<f32> for f32 {
    fn magnitude(&self) -> f32 {
        self.abs()
    }
}

impl Integrand<f64> for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl<T: Real> Integrand<T> for Complex<T> {
    fn magnitude(&self) -> T {
        self.norm()
    }
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre<T> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Real> GaussLegendre<T> {
    /// Builds the `n`-point rule by Newton iteration on P_n.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
        let mut nodes = vec![T::zero(); n];
        let mut weights = vec![T::zero(); n];
        let nf = n as f64;
        for i in 0..n.div_ceil(2) {
            // Tricomi initial guess, refined in f64 then narrowed
            let mut x = ((i as f64 + 0.75) / (nf + 0.5) * std::f64::consts::PI).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    let (_, d) = legendre_with_derivative(n, x);
                    dp = d;
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = c(-x);
            nodes[n - 1 - i] = c(x);
            weights[i] = c(w);
            weights[n - 1 - i] = c(w);
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[T] {
        &self.nodes
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    /// Integrates `f` over [a, b] with a single application of the rule.
    pub fn integrate<V, F>(&self, a: T, b: T, mut f: F) -> V
    where
        V: Integrand<T>,
        F: FnMut(T) -> V,
    {
        let half = (b - a) * c(0.5);
        let mid = (a + b) * c(0.5);
        let mut acc = V::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * x) * w;
        }
        acc * half
    }

    /// Integrates over [a, b] split into `panels` equal sub-intervals.
    pub fn composite<V, F>(&self, a: T, b: T, panels: usize, mut f: F) -> V
    where
        V: Integrand<T>,
        F: FnMut(T) -> V,
    {
        let panels = panels.max(1);
        let h = (b - a) / T::from_usize_lossy(panels);
        (0..panels).fold(V::zero(), |acc, k| {
            let lo = a + h * T::from_usize_lossy(k);
            acc + self.integrate(lo, lo + h, &mut f)
        })
    }

    /// Nodes and weights mapped onto a composite partition of [a, b].
    pub fn composite_points(&self, a: T, b: T, panels: usize) -> Vec<(T, T)> {
        let panels = panels.max(1);
        let h = (b - a) / T::from_usize_lossy(panels);
        let half = h * c(0.5);
        let mut out = Vec::with_capacity(panels * self.len());
        for k in 0..panels {
            let mid = a + h * T::from_usize_lossy(k) + half;
            for (&x, &w) in self.nodes.iter().zip(&self.weights) {
                out.push((mid + half * x, w * half));
            }
        }
        out
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
// 7-point Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gk15<T, V, F>(f: &mut F, a: T, b: T) -> (V, T)
where
    T: Real,
    V: Integrand<T>,
    F: FnMut(T) -> V,
{
    let mid = (a + b) * c(0.5);
    let half = (b - a) * c(0.5);
    let fc = f(mid);
    let mut kron = fc * c::<T>(WGK[7]);
    let mut gauss = fc * c::<T>(WG[3]);
    for j in 0..7 {
        let dx = half * c(XGK[j]);
        let s = f(mid - dx) + f(mid + dx);
        kron = kron + s * c::<T>(WGK[j]);
        if j % 2 == 1 {
            gauss = gauss + s * c::<T>(WG[j / 2]);
        }
    }
    let kron = kron * half;
    let gauss = gauss * half;
    let err = (kron - gauss).magnitude();
    (kron, err)
}

/// Tolerances for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct Tolerance<T> {
    pub rel: T,
    pub abs: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for Tolerance<T> {
    fn default() -> Self {
        Self {
            rel: c(1e-10),
            abs: c(1e-14),
            max_intervals: 2000,
        }
    }
}

/// Adaptive Gauss-Kronrod 7/15 quadrature; always bisects the interval with
/// the largest error estimate until the summed estimate meets
/// `max(abs, rel * |I|)`.
pub fn adaptive<T, V, F>(a: T, b: T, tol: Tolerance<T>, mut f: F) -> Result<V>
where
    T: Real,
    V: Integrand<T>,
    F: FnMut(T) -> V,
{
    if a == b {
        return Ok(V::zero());
    }
    let (v, e) = gk15(&mut f, a, b);
    let mut intervals = vec![(a, b, v, e)];
    loop {
        let total = intervals.iter().fold(V::zero(), |acc, iv| acc + iv.2);
        let err = intervals.iter().fold(T::zero(), |acc, iv| acc + iv.3);
        let target = tol.abs.max(tol.rel * total.magnitude());
        if err <= target {
            return Ok(total);
        }
        if intervals.len() >= tol.max_intervals {
            return Err(Error::Quadrature {
                achieved: err.as_f64(),
                requested: target.as_f64(),
            });
        }
        let (worst, _) = intervals
            .iter()
            .enumerate()
            .fold((0, T::neg_infinity()), |best, (i, iv)| {
                if iv.3 > best.1 {
                    (i, iv.3)
                } else {
                    best
                }
            });
        let (lo, hi, _, _) = intervals.swap_remove(worst);
        let m = (lo + hi) * c(0.5);
        if m <= lo || m >= hi {
            return Err(Error::Quadrature {
                achieved: err.as_f64(),
                requested: target.as_f64(),
            });
        }
        let (v1, e1) = gk15(&mut f, lo, m);
        let (v2, e2) = gk15(&mut f, m, hi);
        intervals.push((lo, m, v1, e1));
        intervals.push((m, hi, v2, e2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rule_is_exact_for_polynomials() {
        let rule = GaussLegendre::<f64>::new(8);
        // exact up to degree 15
        for k in 0..16 {
            let got: f64 = rule.integrate(-1.0, 1.0, |x| x.powi(k));
            let exact = if k % 2 == 0 { 2.0 / (k as f64 + 1.0) } else { 0.0 };
            assert!((got - exact).abs() < 1e-14, "k={k}: {got} vs {exact}");
        }
        let wsum: f64 = rule.weights().iter().sum();
        assert!((wsum - 2.0).abs() < 1e-14);
    }

    #[test]
    fn odd_rule_has_center_node() {
        let rule = GaussLegendre::<f64>::new(5);
        assert!(rule.nodes()[2].abs() < 1e-15);
        assert!((rule.weights()[2] - 128.0 / 225.0).abs() < 1e-14);
    }

    #[test]
    fn adaptive_handles_peaked_integrand() {
        let v: f64 = adaptive(0.0, 10.0, Tolerance::default(), |x: f64| {
            1.0 / (1.0 + 100.0 * (x - 3.0).powi(2))
        })
        .unwrap();
        let exact = ((70.0f64).atan() + (30.0f64).atan()) / 10.0;
        assert!((v - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn adaptive_complex_oscillatory() {
        let v: Complex<f64> = adaptive(0.0, std::f64::consts::PI, Tolerance::default(), |x: f64| {
            Complex::new(0.0, 7.0 * x).exp()
        })
        .unwrap();
        // ∫_0^π e^{7ix} dx = (e^{7iπ} - 1)/(7i) = 2i/7
        assert!((v - Complex::new(0.0, 2.0 / 7.0)).norm() < 1e-12);
    }

    #[test]
    fn adaptive_reports_failure() {
        let tol = Tolerance {
            rel: 1e-15,
            abs: 0.0,
            max_intervals: 3,
        };
        let r: Result<f64> = adaptive(0.0, 1.0, tol, |x: f64| x.sqrt().sin() * 1e3);
        assert!(matches!(r, Err(Error::Quadrature { .. })));
    }

    #[test]
    fn composite_matches_single_for_smooth() {
        let rule = GaussLegendre::<f64>::new(12);
        let a: f64 = rule.composite(0.0, 4.0, 8, |x| (-x * x).exp());
        let pts = rule.composite_points(0.0, 4.0, 8);
        let b: f64 = pts.iter().map(|&(x, w)| w * (-x * x).exp()).sum();
        assert!((a - b).abs() < 1e-15);
        let exact = 0.5 * std::f64::consts::PI.sqrt() * 0.999_999_984_582_742_1;
        assert!((a - exact).abs() < 1e-12);
    }
}

//! Quadrature rules: Gauss-Legendre panels, adaptive Gauss-Kronrod (7/15) and tanh-sinh.

use num_complex::Complex64;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Sub};
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Values that can be integrated.
pub trait Integrand: Copy + Default + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> + Send + Sync {
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

/// Sum with a fixed binary tree, so the result does not depend on how the terms were produced.
pub fn pairwise_sum<T: Integrand>(xs: &[T]) -> T {
    match xs.len() {
        0 => T::default(),
        1 => xs[0],
        n if n <= 8 => xs.iter().fold(T::default(), |a, &b| a + b),
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, 0.0);
            for j in 0..n {
                let p2 = p1;
                p1 = p0;
                p0 = ((2 * j + 1) as f64 * z * p1 - j as f64 * p2) / (j + 1) as f64;
            }
            dp = n as f64 * (z * p0 - p1) / (z * z - 1.0);
            let dz = p0 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
        w[n - 1 - i] = w[i];
    }
    (x, w)
}

fn cached_rule(n: usize) -> &'static (Vec<f64>, Vec<f64>) {
    static R16: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    static R32: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    match n {
        16 => R16.get_or_init(|| gauss_legendre(16)),
        32 => R32.get_or_init(|| gauss_legendre(32)),
        _ => panic!("no cached rule of order {n}"),
    }
}

/// Composite Gauss-Legendre: `panels` equal panels of order 16 or 32.
pub fn gl_panels<T: Integrand>(f: impl Fn(f64) -> T, a: f64, b: f64, panels: usize, order: usize) -> T {
    let (x, w) = cached_rule(order);
    let h = (b - a) / panels as f64;
    let sums: Vec<T> = (0..panels)
        .map(|p| {
            let lo = a + h * p as f64;
            let mid = lo + 0.5 * h;
            let terms: Vec<T> = x.iter().zip(w).map(|(xi, wi)| f(mid + 0.5 * h * xi) * (0.5 * h * wi)).collect();
            pairwise_sum(&terms)
        })
        .collect();
    pairwise_sum(&sums)
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
const WG: [f64; 4] = [0.129_484_966_168_869_7, 0.279_705_391_489_276_7, 0.381_830_050_505_118_9, 0.417_959_183_673_469_4];

fn gk15<T: Integrand>(f: &impl Fn(f64) -> T, a: f64, b: f64) -> (T, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let dx = h * XGK[j];
        let s = f(c - dx) + f(c + dx);
        k = k + s * WGK[j];
        if j % 2 == 1 {
            g = g + s * WG[j / 2];
        }
    }
    let k = k * h;
    let g = g * h;
    (k, (k - g).magnitude())
}

/// Adaptive Gauss-Kronrod 7/15 with a global error target; returns `(value, error estimate)`.
pub fn adaptive<T: Integrand>(f: impl Fn(f64) -> T, a: f64, b: f64, tol: f64) -> Result<(T, f64)> {
    let mut intervals = vec![{
        let (v, e) = gk15(&f, a, b);
        (a, b, v, e)
    }];
    for iter in 0..4000 {
        let total_err: f64 = intervals.iter().map(|i| i.3).sum();
        if total_err <= tol {
            let vals: Vec<T> = intervals.iter().map(|i| i.2).collect();
            return Ok((pairwise_sum(&vals), total_err));
        }
        let (idx, _) = intervals
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .expect("non-empty");
        let (lo, hi, _, _) = intervals.swap_remove(idx);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            return Err(Error::NonConvergence { iterations: iter, residual: total_err });
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        intervals.push((lo, mid, v1, e1));
        intervals.push((mid, hi, v2, e2));
    }
    let total_err: f64 = intervals.iter().map(|i| i.3).sum();
    Err(Error::NonConvergence { iterations: 4000, residual: total_err })
}

/// Tanh-sinh quadrature on `[a, b]`, halving the step until successive levels agree to `tol`.
pub fn tanh_sinh(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> Result<f64> {
    let h2 = 0.5 * (b - a);
    let tmax = 4.5;
    let node = |t: f64| {
        let u = 0.5 * PI * t.sinh();
        let x = u.tanh();
        let w = 0.5 * PI * t.cosh() / (u.cosh() * u.cosh());
        // distance from the nearer endpoint, computed without cancellation
        let d = h2 / (u.abs().exp() * u.cosh());
        (x, w, d)
    };
    let eval = |t: f64| {
        let (x, w, d) = node(t);
        if w < 1e-300 || d == 0.0 {
            return 0.0;
        }
        let p = if x >= 0.0 { b - d } else { a + d };
        f(p) * w
    };
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        let t = k as f64 * h;
        sum += eval(t) + eval(-t);
        k += 1;
    }
    let mut prev = sum * h * h2;
    for level in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            let t = k as f64 * h;
            sum += eval(t) + eval(-t);
            k += 2;
        }
        let cur = sum * h * h2;
        if (cur - prev).abs() <= tol * cur.abs().max(1e-300) && level > 1 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::NonConvergence { iterations: 12, residual: 0.0 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rules_integrate_polynomials() {
        for n in [5, 16, 32] {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for d in 0..(2 * n) {
                let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                let got: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(d as i32)).sum();
                assert!((got - exact).abs() < 1e-13, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn rules_agree_on_smooth_integrals() {
        let f = |t: f64| (t * 3.0).sin() * (-t).exp();
        let exact = {
            // integral of e^{-t} sin 3t on [0, 2]
            let e = (-2.0f64).exp();
            (3.0 - e * (3.0 * (6.0f64).cos() + (6.0f64).sin())) / 10.0
        };
        assert!((gl_panels(f, 0.0, 2.0, 8, 16) - exact).abs() < 1e-14);
        let (v, err) = adaptive(f, 0.0, 2.0, 1e-13).unwrap();
        assert!((v - exact).abs() < 1e-13 && err <= 1e-13);
        assert!((tanh_sinh(f, 0.0, 2.0, 1e-13).unwrap() - exact).abs() < 1e-12);
    }

    #[test]
    fn endpoint_singularity() {
        // integral of t^{-1/2} on [0, 1] is 2
        let v = tanh_sinh(|t: f64| t.powf(-0.5), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn complex_integrand() {
        let f = |t: f64| Complex64::new(0.0, t).exp();
        let (v, _) = adaptive(f, 0.0, PI, 1e-13).unwrap();
        assert!((v - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }
}

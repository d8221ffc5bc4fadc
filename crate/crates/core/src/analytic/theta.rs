//! Inverse-Mellin weights `rho_{a,b}` and the smoothed character sums `theta(chi, M)`.

use num_complex::Complex64;
use rayon::prelude::*;
use std::f64::consts::PI;

use super::gamma::{ln_gamma, ln_gamma_real};
use super::kernel::{ContourConfig, KernelMethod};
use super::quad::{gauss_legendre, pairwise_sum};
use crate::error::{Error, Result};
use crate::family::IdealCharacter;
use crate::ring::{enumerate_ideals, FieldSpec, IdealFilter};

/// `(2 pi i)^{-1} int_{(sigma)} Gamma(s/2)^a Gamma(s)^b t^{-s} ds`, taken through the real saddle.
pub fn rho_weight(a: u32, b: u32, t: f64, cc: &ContourConfig) -> Result<f64> {
    if a == 0 && b == 0 {
        return Err(Error::Domain("rho needs a + b > 0".into()));
    }
    if t <= 0.0 {
        return Err(Error::Domain(format!("rho needs t > 0, got {t}")));
    }
    let (ka, kb, lt) = (a as f64, b as f64, t.ln());
    let sigma = saddle(ka, kb, lt);
    let log_mag = |tau: f64| {
        let s = Complex64::new(sigma, tau);
        ln_gamma(s * 0.5) * ka + ln_gamma(s) * kb - s * lt
    };
    let peak = log_mag(0.0).re;
    // the integrand at -tau is the conjugate, so twice the real part
    let f = |tau: f64| 2.0 * (log_mag(tau) - peak).exp().re;
    let (x, w) = gauss_legendre(cc.order);
    let width = 1.0;
    let limit = cc.t_max.map_or(200_000, |m| (m / width).ceil() as usize);
    let mut sums: Vec<f64> = Vec::new();
    let mut quiet = 0;
    while sums.len() < limit {
        let mid = width * (sums.len() as f64 + 0.5);
        let terms: Vec<f64> = x.iter().zip(&w).map(|(xi, wi)| f(mid + 0.5 * width * xi) * 0.5 * width * wi).collect();
        let v = pairwise_sum(&terms);
        sums.push(v);
        quiet = if v.abs() < 1e-18 { quiet + 1 } else { 0 };
        if cc.t_max.is_none() && quiet >= 4 {
            break;
        }
    }
    let v = pairwise_sum(&sums) / (2.0 * PI) * peak.exp();
    if v <= 0.0 {
        return Err(Error::AxiomViolation(format!("rho_({a},{b})({t}) = {v} is not positive")));
    }
    Ok(v)
}

/// Minimizer of `|Gamma(s/2)^a Gamma(s)^b t^{-s}|` on the real axis, where the integrand is positive.
fn saddle(a: f64, b: f64, lt: f64) -> f64 {
    let g = |x: f64| a * ln_gamma_real(x / 2.0) + b * ln_gamma_real(x) - x * lt;
    let (mut lo, mut hi) = (1e-3, 1e4);
    for _ in 0..200 {
        let m1 = lo + (hi - lo) / 3.0;
        let m2 = hi - (hi - lo) / 3.0;
        if g(m1) < g(m2) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    0.5 * (lo + hi)
}

/// Closed forms: `rho_{1,0}(t) = 2 e^{-t^2}`, `rho_{0,1}(t) = e^{-t}`.
pub fn rho_weight_closed_form(a: u32, b: u32, t: f64) -> Option<f64> {
    match (a, b) {
        (1, 0) => Some(2.0 * (-t * t).exp()),
        (0, 1) => Some((-t).exp()),
        _ => None,
    }
}

fn field_rho(f: &FieldSpec, t: f64, cc: &ContourConfig) -> Result<f64> {
    match (cc.method, rho_weight_closed_form(f.r1, f.r2, t)) {
        (KernelMethod::ClosedForm, Some(v)) => Ok(v),
        _ => rho_weight(f.r1, f.r2, t, cc),
    }
}

/// `theta(chi, M) = sum_{a != 0} chi(a) rho_{r1,r2}(N a / M)`.
pub fn theta_sum(chi: &dyn IdealCharacter, m: f64, f: &FieldSpec, cc: &ContourConfig) -> Result<Complex64> {
    // rho(t) < 1e-17 beyond these multiples of M
    let cut = if f.r1 > 0 { 6.5 } else { 40.0 };
    let nmax = (cut * m).ceil() as u64;
    let ideals = enumerate_ideals(f.id, 0, nmax, &IdealFilter::none());
    let terms: Vec<Complex64> = ideals
        .par_iter()
        .map(|a| Ok(chi.value(a)?.to_complex() * field_rho(f, a.norm() as f64 / m, cc)?))
        .collect::<Result<_>>()?;
    Ok(pairwise_sum(&terms))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn contour_matches_closed_forms() {
        let cc = ContourConfig::default();
        for t in [0.1, 0.5, 1.0, 2.0, 3.0] {
            let a = rho_weight(1, 0, t, &cc).unwrap();
            assert!((a - 2.0 * (-t * t).exp()).abs() < 1e-10, "t={t} {a}");
            let b = rho_weight(0, 1, t, &cc).unwrap();
            assert!((b - (-t).exp()).abs() < 1e-10, "t={t} {b}");
        }
        let r = rho_weight(0, 1, 1.0, &cc).unwrap() / rho_weight(0, 1, 2.0, &cc).unwrap();
        assert!((r - std::f64::consts::E).abs() < 1e-9);
    }

    #[test]
    fn rejects_empty_weight() {
        assert!(rho_weight(0, 0, 1.0, &ContourConfig::default()).is_err());
    }
}

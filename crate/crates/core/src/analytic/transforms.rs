//! Mellin transform and the kernel transforms `h -> h_dot`, `h -> h_ddot`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::{kernel_k, kernel_phase, ContourConfig};
use super::quad::{adaptive, gl_panels, pairwise_sum, tanh_sinh};
use super::testfn::TestFunction;
use crate::error::{Error, Result};
use crate::ring::{FieldId, FieldSpec};

/// `int_0^inf h(t) t^{s-1} dt`.
pub fn mellin(h: &TestFunction, s: Complex64, tol: f64) -> Result<Complex64> {
    let (lo, hi) = h.support();
    if lo <= 0.0 && h.at_zero() != 0.0 && s.re <= 0.0 {
        return Err(Error::Domain(format!("Mellin transform diverges at s = {s} since h(0) != 0")));
    }
    if lo > 0.0 || s.re >= 1.0 {
        let f = |t: f64| if t <= 0.0 { Complex64::new(0.0, 0.0) } else { ((s - 1.0) * t.ln()).exp() * h.eval(t) };
        return Ok(adaptive(f, lo.max(0.0), hi, tol)?.0);
    }
    // t = u^k removes the endpoint singularity of t^{s-1}
    let k = (1.0 / s.re).ceil();
    let f = |u: f64| if u <= 0.0 { Complex64::new(0.0, 0.0) } else { ((s * k - 1.0) * u.ln()).exp() * (h.eval(u.powf(k)) * k) };
    Ok(adaptive(f, 0.0, hi.powf(1.0 / k), tol)?.0)
}

/// Mellin transform at real `s` by tanh-sinh, an independent cross-check.
pub fn mellin_tanh_sinh(h: &TestFunction, s: f64, tol: f64) -> Result<f64> {
    let (lo, hi) = h.support();
    tanh_sinh(|t| h.eval(t) * t.powf(s - 1.0), lo.max(0.0), hi, tol)
}

/// `int_a^b g(t) K(t x) dt` with panels sized to the kernel oscillation. Over `Q(i)` the variable
/// `t = u^2` makes the phase linear.
fn against_kernel(g: impl Fn(f64) -> f64, a: f64, b: f64, x: f64, f: &FieldSpec, cc: &ContourConfig) -> Result<f64> {
    let phase = (kernel_phase(f, b * x) - kernel_phase(f, a * x)).abs();
    let panels = 16 + (phase / 6.0).ceil() as usize;
    let err = std::cell::RefCell::new(None);
    let k = |t: f64| match kernel_k(f, t * x, cc) {
        Ok(k) => k,
        Err(e) => {
            err.borrow_mut().get_or_insert(e);
            0.0
        }
    };
    let v = match f.id {
        FieldId::Qi => gl_panels(|u| 2.0 * u * g(u * u) * k(u * u), a.sqrt(), b.sqrt(), panels, 16),
        FieldId::Q => gl_panels(|t| g(t) * k(t), a, b, panels, 16),
    };
    match err.into_inner() {
        Some(e) => Err(e),
        None => Ok(v),
    }
}

/// `h_dot(x) = int_0^inf h(t) K(t x) dt`.
pub fn dot_transform(h: &TestFunction, x: f64, f: &FieldSpec, cc: &ContourConfig) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("h_dot needs x > 0, got {x}")));
    }
    let (lo, hi) = h.support();
    against_kernel(|t| h.eval(t), lo.max(0.0), hi, x, f, cc)
}

/// `h_ddot(x) = int_0^inf h(t^2) K(t x) dt`.
pub fn ddot_transform(h: &TestFunction, x: f64, f: &FieldSpec, cc: &ContourConfig) -> Result<f64> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("h_ddot needs x > 0, got {x}")));
    }
    let (lo, hi) = h.support();
    against_kernel(|t| h.eval(t * t), lo.max(0.0).sqrt(), hi.sqrt(), x, f, cc)
}

/// Both sides of `int_R h(x^2) dx = int_R h_dot(x^2) dx`.
#[derive(Clone, Copy, Debug)]
pub struct ParsevalReport {
    pub lhs: f64,
    pub rhs: f64,
    pub relative: f64,
    /// Largest panel contribution among the last panels kept.
    pub tail_budget: f64,
}

/// Evaluates both sides of the Parseval identity.
pub fn parseval(h: &TestFunction, f: &FieldSpec, cc: &ContourConfig) -> Result<ParsevalReport> {
    let (lo, hi) = h.support();
    let (a, b) = (lo.max(0.0).sqrt(), hi.sqrt());
    let lhs = 2.0 * gl_panels(|x| h.eval(x * x), a, b, 16, 32);
    let width = 0.25;
    let chunk = 16;
    let max_chunks = 15;
    let mut panel_values: Vec<f64> = Vec::new();
    let mut tail_budget = f64::INFINITY;
    for c in 0..max_chunks {
        let vals: Vec<f64> = (c * chunk..(c + 1) * chunk)
            .into_par_iter()
            .map(|p| {
                let x0 = width * p as f64;
                let (xs, ws) = super::quad::gauss_legendre(16);
                let mut terms = Vec::with_capacity(16);
                for (xi, wi) in xs.iter().zip(&ws) {
                    let x = x0 + 0.5 * width * (1.0 + xi);
                    terms.push(dot_transform(h, x * x, f, cc)? * 0.5 * width * wi);
                }
                Ok(pairwise_sum(&terms))
            })
            .collect::<Result<_>>()?;
        tail_budget = vals.iter().map(|v| v.abs()).fold(0.0, f64::max) * chunk as f64;
        panel_values.extend(vals);
        if tail_budget < 1e-14 * lhs.abs() {
            break;
        }
    }
    let rhs = 2.0 * pairwise_sum(&panel_values);
    Ok(ParsevalReport { lhs, rhs, relative: (lhs - rhs).abs() / lhs.abs(), tail_budget })
}

/// `sup |h_dot(x)| x^power` over the grid.
pub fn decay_sup(h: &TestFunction, f: &FieldSpec, cc: &ContourConfig, grid: &[f64], power: f64) -> Result<f64> {
    let vals: Vec<f64> = grid.par_iter().map(|&x| Ok(dot_transform(h, x, f, cc)?.abs() * x.powf(power))).collect::<Result<_>>()?;
    Ok(vals.into_iter().fold(0.0, f64::max))
}

//! The kernel `K(t) = A^{-1} (2 pi i)^{-1} int G(s) (t/A^2)^{-s} ds` of a field.

use num_complex::Complex64;
use std::f64::consts::PI;

use super::gamma::ln_gamma;
use super::quad::{gauss_legendre, pairwise_sum};
use crate::error::{Error, Result};
use crate::ring::{FieldId, FieldSpec};

/// How kernel values are obtained inside transforms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelMethod {
    /// Closed forms: `pi J0(2 pi sqrt t)` over `Q(i)`, `2 cos(2 pi t)` over `Q`.
    ClosedForm,
    /// The contour integral.
    Contour,
}

/// Contour and quadrature parameters.
#[derive(Clone, Debug, PartialEq)]
pub struct ContourConfig {
    /// Abscissa where the path crosses the real axis.
    pub sigma: f64,
    /// Tilt of the path into the left half-plane; `None` picks `min(1, 3/H)`.
    pub kappa: Option<f64>,
    /// Truncation height; `None` picks `40 H + 60`.
    pub t_max: Option<f64>,
    /// Gauss-Legendre order per unit panel.
    pub order: usize,
    /// Target absolute error.
    pub tolerance: f64,
    pub method: KernelMethod,
}

impl Default for ContourConfig {
    fn default() -> Self {
        ContourConfig { sigma: 0.5, kappa: None, t_max: None, order: 32, tolerance: 1e-9, method: KernelMethod::ClosedForm }
    }
}

impl ContourConfig {
    pub fn contour() -> Self {
        ContourConfig { method: KernelMethod::Contour, ..Default::default() }
    }
}

/// `log G(s)` with `G(s) = (Gamma(s/2)/Gamma((1-s)/2))^{r1} (Gamma(s)/Gamma(1-s))^{r2}`.
pub fn ln_gamma_ratio(f: &FieldSpec, s: Complex64) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    let mut acc = Complex64::new(0.0, 0.0);
    if f.r1 > 0 {
        acc += (ln_gamma(s * 0.5) - ln_gamma((one - s) * 0.5)) * f.r1 as f64;
    }
    if f.r2 > 0 {
        acc += (ln_gamma(s) - ln_gamma(one - s)) * f.r2 as f64;
    }
    acc
}

/// Closed-form kernel.
pub fn kernel_closed_form(f: &FieldSpec, t: f64) -> f64 {
    match f.id {
        FieldId::Q => 2.0 * (2.0 * PI * t).cos(),
        FieldId::Qi => PI * libm::j0(2.0 * PI * t.sqrt()),
    }
}

/// Result of a contour evaluation.
#[derive(Clone, Copy, Debug)]
pub struct ContourValue {
    pub value: Complex64,
    /// Size of the integrand at the truncation height, times a length scale.
    pub tail: f64,
    pub t_max: f64,
}

/// Height of the stationary point of `G(s) y^{-s}` on the path.
fn saddle_height(f: &FieldSpec, y: f64) -> f64 {
    match f.id {
        FieldId::Q => 2.0 * y,
        FieldId::Qi => y.sqrt(),
    }
}

/// `(2 pi i)^{-1} int_C G(s) y^{-s} ds` along the tilted path `s = sigma - kappa |tau| + i tau`.
pub fn contour_integral(f: &FieldSpec, y: f64, cc: &ContourConfig) -> Result<ContourValue> {
    let h = saddle_height(f, y).max(1.0);
    let kappa = cc.kappa.unwrap_or_else(|| (3.0 / h).min(1.0));
    let t_max = cc.t_max.unwrap_or(40.0 * h + 60.0);
    let (x, w) = gauss_legendre(cc.order);
    let ln_y = y.ln();
    let panels = t_max.ceil() as usize;
    let width = t_max / panels as f64;
    let integrand = |tau: f64, sg: f64| {
        let s = Complex64::new(cc.sigma - kappa * tau, sg * tau);
        let ds = Complex64::new(-kappa, sg);
        (ln_gamma_ratio(f, s) - s * ln_y).exp() * ds * sg
    };
    let sums: Vec<Complex64> = (0..panels)
        .map(|p| {
            let mid = width * (p as f64 + 0.5);
            let terms: Vec<Complex64> = x
                .iter()
                .zip(&w)
                .map(|(xi, wi)| {
                    let tau = mid + 0.5 * width * xi;
                    (integrand(tau, 1.0) + integrand(tau, -1.0)) * (0.5 * width * wi)
                })
                .collect();
            pairwise_sum(&terms)
        })
        .collect();
    let total = pairwise_sum(&sums) / Complex64::new(0.0, 2.0 * PI);
    let tail = (integrand(t_max, 1.0).norm() + integrand(t_max, -1.0).norm()) * (1.0 + 1.0 / kappa) / (2.0 * PI);
    Ok(ContourValue { value: total, tail, t_max })
}

/// `K(t)` by contour quadrature.
pub fn kernel_contour(f: &FieldSpec, t: f64, cc: &ContourConfig) -> Result<f64> {
    if t <= 0.0 {
        return Err(Error::Domain(format!("kernel needs t > 0, got {t}")));
    }
    let y = t / (f.a_k * f.a_k);
    let v = contour_integral(f, y, cc)?;
    let scale = 1.0 / f.a_k;
    if v.tail * scale > cc.tolerance {
        return Err(Error::Precision {
            message: format!("kernel tail {:e} at height {} exceeds tolerance", v.tail * scale, v.t_max),
            suggested: 2.0 * v.t_max,
        });
    }
    Ok(v.value.re * scale)
}

/// `K(t)` by the method selected in `cc`.
pub fn kernel_k(f: &FieldSpec, t: f64, cc: &ContourConfig) -> Result<f64> {
    match cc.method {
        KernelMethod::ClosedForm => Ok(kernel_closed_form(f, t)),
        KernelMethod::Contour => kernel_contour(f, t, cc),
    }
}

/// Phase of the kernel oscillation at `u`, used to size quadrature panels.
pub(crate) fn kernel_phase(f: &FieldSpec, u: f64) -> f64 {
    match f.id {
        FieldId::Q => 2.0 * PI * u,
        FieldId::Qi => 2.0 * PI * u.max(0.0).sqrt(),
    }
}

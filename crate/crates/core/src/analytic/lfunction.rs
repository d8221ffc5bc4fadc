//! Completed Hecke L-functions `Lambda(chi, s)` from a table of coefficients.

use num_complex::Complex64;

use super::gamma::upper_incomplete_gamma;
use crate::error::{Error, Result};
use crate::family::IdealCharacter;
use crate::ring::{enumerate_ideals, FieldSpec, IdealFilter};

/// Coefficients `a_n = sum_{N b = n} chi(b)` for `n <= cutoff`.
#[derive(Clone, Debug)]
pub struct LValueTable {
    field: FieldSpec,
    conductor_norm: u64,
    coeffs: Vec<Complex64>,
}

/// `e^{-40}` is below double precision relative to the leading terms.
const DECAY: f64 = 40.0;

impl LValueTable {
    pub fn new(f: &FieldSpec, chi: &dyn IdealCharacter, cutoff: usize) -> Result<LValueTable> {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); cutoff + 1];
        for b in enumerate_ideals(f.id, 0, cutoff as u64, &IdealFilter::none()) {
            coeffs[b.norm() as usize] += chi.value(&b)?.to_complex();
        }
        Ok(LValueTable { field: f.clone(), conductor_norm: chi.conductor().norm(), coeffs })
    }

    pub fn from_coefficients(f: &FieldSpec, conductor_norm: u64, coeffs: Vec<Complex64>) -> LValueTable {
        LValueTable { field: f.clone(), conductor_norm, coeffs }
    }

    pub fn cutoff(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coefficient(&self, n: usize) -> Complex64 {
        self.coeffs.get(n).copied().unwrap_or_default()
    }

    pub fn conductor_norm(&self) -> u64 {
        self.conductor_norm
    }

    /// `A_k sqrt(N f)`.
    fn scale(&self) -> f64 {
        self.field.a_k * (self.conductor_norm as f64).sqrt()
    }

    /// Exponent `p` with `Lambda* = int theta(v) v^{s/p} dv/v`, `theta(v) = sum a_n e^{-(n/Q)^p v}`.
    fn p(&self) -> f64 {
        if self.field.r1 > 0 {
            2.0
        } else {
            1.0
        }
    }

    /// `Lambda*(s) = (A sqrt(N f))^s Gamma-factor(s) L(chi, s)`, splitting the theta integral at `t0`.
    /// Independence of `t0` is equivalent to the functional equation with root number 1.
    pub fn lambda_star(&self, s: Complex64, t0: f64) -> Result<Complex64> {
        let q = self.scale();
        let p = self.p();
        let spread = t0.max(1.0 / t0);
        let needed = q * (DECAY * spread).powf(1.0 / p);
        if (self.cutoff() as f64) < needed {
            return Err(Error::Precision {
                message: format!("L-table cutoff {} below {needed:.0}", self.cutoff()),
                suggested: needed.ceil(),
            });
        }
        let one = Complex64::new(1.0, 0.0);
        let mut terms = Vec::new();
        for (n, a) in self.coeffs.iter().enumerate().skip(1) {
            if *a == Complex64::new(0.0, 0.0) || n as f64 > needed {
                continue;
            }
            let x = (n as f64 / q).powf(p);
            let lx = x.ln();
            let t1 = (-s / p * lx).exp() * upper_incomplete_gamma(s / p, x * t0);
            let t2 = (-(one - s) / p * lx).exp() * upper_incomplete_gamma((one - s) / p, x / t0);
            terms.push(*a * t1 + a.conj() * t2);
        }
        Ok(super::quad::pairwise_sum(&terms))
    }

    /// `Lambda(chi, s)` in the normalisation without the conductor: `A^s Gamma-factor(s) L(chi, s)`.
    pub fn completed(&self, s: Complex64) -> Result<Complex64> {
        let nf = self.conductor_norm as f64;
        Ok((-s * 0.5 * nf.ln()).exp() * self.lambda_star(s, 1.0)?)
    }

    /// `|Lambda(chi,s) N f^{s-1/2} - Lambda(chi_bar, 1-s)| / |Lambda(chi,s) N f^{s-1/2}|`, the two sides
    /// computed with different theta splittings.
    pub fn functional_equation_residual(&self, s: Complex64) -> Result<f64> {
        let one = Complex64::new(1.0, 0.0);
        let lhs = self.lambda_star(s, 1.25)?;
        let rhs = self.lambda_star(one - s, 1.0)?;
        Ok((lhs - rhs).norm() / lhs.norm().max(1e-300))
    }

    /// `sum a_n n^{-s}` for `Re s > 1`.
    pub fn dirichlet_series(&self, s: Complex64) -> Complex64 {
        let terms: Vec<Complex64> =
            self.coeffs.iter().enumerate().skip(1).map(|(n, a)| *a * (-s * (n as f64).ln()).exp()).collect();
        super::quad::pairwise_sum(&terms)
    }
}

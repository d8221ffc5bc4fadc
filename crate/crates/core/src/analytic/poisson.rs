//! Poisson summation over ideals: plain, twisted by a character, and restricted to `(b, m) = 1`.

use num_complex::Complex64;
use rayon::prelude::*;

use super::kernel::ContourConfig;
use super::quad::pairwise_sum;
use super::testfn::TestFunction;
use super::transforms::{dot_transform, mellin};
use super::zeta::{ideal_counts, zeta_special_zero};
use crate::error::{Error, Result};
use crate::family::IdealCharacter;
use crate::ring::{enumerate_ideals, FieldSpec, Ideal, IdealFilter};

/// Which constant term closes the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ConstantVariant {
    /// `Res zeta_k(1) X h_hat(1) + h(0) zeta_k(0)`.
    ZetaZero,
    /// `(alpha/A) X h_hat(1) - [d = 2] h(0) alpha A`, as printed.
    PaperConstant,
}

impl ConstantVariant {
    pub fn name(&self) -> &'static str {
        match self {
            ConstantVariant::ZetaZero => "zeta-zero",
            ConstantVariant::PaperConstant => "paper-constant",
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct PoissonReport {
    pub x: f64,
    pub lhs: f64,
    pub rhs: f64,
    /// `|lhs - rhs| / |lhs|`.
    pub residual: f64,
    pub tail_budget: f64,
    pub dual_terms: u64,
}

/// Both constant variants of the plain formula.
#[derive(Clone, Copy, Debug)]
pub struct PoissonPair {
    pub zeta_zero: PoissonReport,
    pub paper_constant: PoissonReport,
}

impl PoissonPair {
    pub fn get(&self, v: ConstantVariant) -> &PoissonReport {
        match v {
            ConstantVariant::ZetaZero => &self.zeta_zero,
            ConstantVariant::PaperConstant => &self.paper_constant,
        }
    }
}

/// Largest dual norm considered.
const DUAL_CAP: u64 = 1 << 17;

/// A truncated dual series with its tail budget.
#[derive(Clone, Copy, Debug)]
pub(crate) struct DualSum {
    pub value: f64,
    pub tail_budget: f64,
    pub terms: u64,
}

/// `sum_{n >= start} a_n h_dot(c n)` by dyadic blocks `[2^j, 2^{j+1})`; stops once a block's absolute
/// contribution is below `floor`, and reports that contribution as the tail budget.
pub(crate) fn dual_series(
    h: &TestFunction,
    c: f64,
    f: &FieldSpec,
    cc: &ContourConfig,
    start: u64,
    end: Option<u64>,
    floor: f64,
    coeffs: &(dyn Fn(u64, u64) -> Result<Vec<(u64, f64)>> + Sync),
) -> Result<DualSum> {
    let mut total = Vec::new();
    let mut lo = start.max(1);
    let mut terms = 0;
    let cap = end.unwrap_or(DUAL_CAP).min(DUAL_CAP);
    let mut tail_budget = f64::INFINITY;
    while lo <= cap {
        let hi = (2 * lo).min(cap + 1);
        let block = coeffs(lo, hi)?;
        let vals: Vec<(f64, f64)> = block
            .par_iter()
            .map(|&(n, a)| {
                let v = a * dot_transform(h, c * n as f64, f, cc)?;
                Ok((v, v.abs()))
            })
            .collect::<Result<_>>()?;
        terms += vals.len() as u64;
        let abs: f64 = vals.iter().map(|v| v.1).sum();
        total.push(pairwise_sum(&vals.iter().map(|v| v.0).collect::<Vec<_>>()));
        tail_budget = abs;
        lo = hi;
        if end.is_none() && abs < floor && lo > 8 {
            break;
        }
    }
    if end.is_some() {
        tail_budget = 0.0;
    }
    Ok(DualSum { value: pairwise_sum(&total), tail_budget, terms })
}

fn count_coeffs(f: &FieldSpec) -> impl Fn(u64, u64) -> Result<Vec<(u64, f64)>> + Sync + '_ {
    move |lo, hi| {
        let r = ideal_counts(f.id, hi as usize);
        Ok((lo..hi).filter(|&n| r[n as usize] > 0).map(|n| (n, r[n as usize] as f64)).collect())
    }
}

fn lhs_sum(h: &TestFunction, x: f64, f: &FieldSpec) -> f64 {
    let (_, hi) = h.support();
    let nmax = (hi * x).floor() as usize;
    let r = ideal_counts(f.id, nmax);
    let terms: Vec<f64> = (1..=nmax).map(|n| r[n] as f64 * h.eval(n as f64 / x)).collect();
    pairwise_sum(&terms)
}

/// Main and constant terms of the plain formula in the chosen variant.
pub fn main_terms(h: &TestFunction, x: f64, f: &FieldSpec, variant: ConstantVariant, tol: f64) -> Result<(f64, f64)> {
    let h1 = mellin(h, Complex64::new(1.0, 0.0), tol)?.re;
    let h0 = h.at_zero();
    Ok(match variant {
        ConstantVariant::ZetaZero => (f.zeta_residue() * x * h1, h0 * zeta_special_zero(f)),
        ConstantVariant::PaperConstant => {
            let delta = if f.d == 2 { 1.0 } else { 0.0 };
            (f.alpha_k / f.a_k * x * h1, -delta * h0 * f.alpha_k * f.a_k)
        }
    })
}

/// `sum_{b != 0} h(N b / X)` against main term, constant and `X sum h_dot(X N b)`, in both variants.
pub fn check_poisson(h: &TestFunction, x: f64, f: &FieldSpec, cc: &ContourConfig) -> Result<PoissonPair> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("X must be positive, got {x}")));
    }
    let lhs = lhs_sum(h, x, f);
    let floor = cc.tolerance * lhs.abs().max(1.0) / x;
    let dual = dual_series(h, x, f, cc, 1, None, floor, &count_coeffs(f))?;
    let report = |variant| -> Result<PoissonReport> {
        let (main, constant) = main_terms(h, x, f, variant, 1e-13)?;
        let rhs = main + constant + x * dual.value;
        Ok(PoissonReport {
            x,
            lhs,
            rhs,
            residual: (lhs - rhs).abs() / lhs.abs().max(1e-300),
            tail_budget: x * dual.tail_budget,
            dual_terms: dual.terms,
        })
    };
    Ok(PoissonPair { zeta_zero: report(ConstantVariant::ZetaZero)?, paper_constant: report(ConstantVariant::PaperConstant)? })
}

fn character_coeffs<'a>(
    f: &'a FieldSpec,
    chi: &'a dyn IdealCharacter,
    conj: bool,
) -> impl Fn(u64, u64) -> Result<Vec<(u64, f64)>> + Sync + 'a {
    move |lo, hi| {
        let ideals = enumerate_ideals(f.id, lo - 1, hi - 1, &IdealFilter::none());
        let vals: Vec<(u64, Complex64)> = ideals
            .par_iter()
            .map(|b| {
                let v = chi.value(b)?;
                Ok((b.norm(), if conj { v.conj() } else { v }.to_complex()))
            })
            .collect::<Result<_>>()?;
        let mut out: Vec<(u64, f64)> = Vec::new();
        for (n, v) in vals {
            match out.last_mut() {
                Some((m, a)) if *m == n => *a += v.re,
                _ => out.push((n, v.re)),
            }
        }
        out.retain(|p| p.1 != 0.0);
        Ok(out)
    }
}

/// `sum chi(b) h(N b/X)` against `(X / sqrt(N f)) sum chi_bar(b) h_dot(X N b / N f)` (root number 1).
pub fn check_poisson_char(
    h: &TestFunction,
    x: f64,
    chi: &dyn IdealCharacter,
    f: &FieldSpec,
    cc: &ContourConfig,
) -> Result<PoissonReport> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("X must be positive, got {x}")));
    }
    if chi.conductor().is_unit() {
        return Err(Error::Domain("the twisted formula needs a non-trivial character".into()));
    }
    let (_, hi) = h.support();
    let nmax = (hi * x).floor() as u64;
    let ideals = enumerate_ideals(f.id, 0, nmax, &IdealFilter::none());
    let terms: Vec<f64> = ideals
        .par_iter()
        .map(|b| Ok(chi.value(b)?.to_complex().re * h.eval(b.norm() as f64 / x)))
        .collect::<Result<_>>()?;
    let lhs = pairwise_sum(&terms);
    let nf = chi.conductor().norm() as f64;
    let scale = x / nf.sqrt();
    let floor = cc.tolerance * lhs.abs().max(1.0) / scale;
    let dual = dual_series(h, x / nf, f, cc, 1, None, floor, &character_coeffs(f, chi, true))?;
    let rhs = scale * dual.value;
    Ok(PoissonReport {
        x,
        lhs,
        rhs,
        residual: (lhs - rhs).abs() / lhs.abs().max(1e-300),
        tail_budget: scale * dual.tail_budget,
        dual_terms: dual.terms,
    })
}

/// The restricted formula: four explicit terms plus the pieces it leaves to its error terms.
#[derive(Clone, Debug)]
pub struct CoprimeReport {
    pub x: f64,
    pub lhs: f64,
    /// Main term, large-divisor correction, constant term, dual term.
    pub terms: [f64; 4],
    pub rhs: f64,
    /// Sum of what the formula omits: dual sums for `N d <= Y`, the `N d > Z` sums, dual tails beyond `L`.
    pub omitted: f64,
    /// `|omitted pieces|` summed in absolute value.
    pub o_term_budget: f64,
    /// `|lhs - rhs|`.
    pub residual: f64,
    /// `|lhs - rhs - omitted|`: closes the identity exactly up to quadrature and truncation.
    pub closure: f64,
    pub tail_budget: f64,
}

/// Checks the restricted formula with parameters `Y <= X <= Z`, `L >= (Z/X)^2`.
#[allow(clippy::too_many_arguments)]
pub fn check_poisson_coprime(
    h: &TestFunction,
    x: f64,
    m: &Ideal,
    y: f64,
    z: f64,
    l: f64,
    f: &FieldSpec,
    cc: &ContourConfig,
) -> Result<CoprimeReport> {
    if !(y <= x && x <= z) {
        return Err(Error::Domain(format!("need Y <= X <= Z, got Y={y} X={x} Z={z}")));
    }
    if l < (z / x) * (z / x) {
        return Err(Error::Domain(format!("need L >= (Z/X)^2 = {}, got {l}", (z / x) * (z / x))));
    }
    let (_, hi) = h.support();
    let nmax = (hi * x).floor() as u64;
    let lhs_terms: Vec<f64> = enumerate_ideals(f.id, 0, nmax, &IdealFilter::coprime(m))
        .iter()
        .map(|b| h.eval(b.norm() as f64 / x))
        .collect();
    let lhs = pairwise_sum(&lhs_terms);

    let h1 = mellin(h, Complex64::new(1.0, 0.0), 1e-13)?.re;
    let res = f.zeta_residue();
    let nm = m.norm() as f64;
    let mut terms = [m.phi() as f64 / nm * res * x * h1, 0.0, 0.0, 0.0];
    let mut omitted = 0.0;
    let mut budget = 0.0;
    let mut tail_budget = 0.0;
    let floor = cc.tolerance * lhs.abs().max(1.0);
    let lcut = l.floor() as u64;
    for d in m.squarefree_divisors() {
        let mu = d.mobius() as f64;
        let nd = d.norm() as f64;
        let c = x / nd;
        if nd > z {
            terms[1] -= mu * res * c * h1;
            let inner: Vec<f64> = enumerate_ideals(f.id, 0, (hi * c).floor() as u64, &IdealFilter::none())
                .iter()
                .map(|b| h.eval(b.norm() as f64 / c))
                .collect();
            let piece = mu * pairwise_sum(&inner);
            omitted += piece;
            budget += piece.abs();
            continue;
        }
        terms[2] += h.at_zero() * zeta_special_zero(f) * mu;
        if nd > y {
            let kept = dual_series(h, c, f, cc, 1, Some(lcut), 0.0, &count_coeffs(f))?;
            terms[3] += mu * c * kept.value;
            let rest = dual_series(h, c, f, cc, lcut + 1, None, floor / c, &count_coeffs(f))?;
            omitted += mu * c * rest.value;
            budget += (c * rest.value).abs();
            tail_budget += c * rest.tail_budget;
        } else {
            let full = dual_series(h, c, f, cc, 1, None, floor / c, &count_coeffs(f))?;
            omitted += mu * c * full.value;
            budget += (c * full.value).abs();
            tail_budget += c * full.tail_budget;
        }
    }
    let rhs: f64 = terms.iter().sum();
    Ok(CoprimeReport {
        x,
        lhs,
        terms,
        rhs,
        omitted,
        o_term_budget: budget,
        residual: (lhs - rhs).abs(),
        closure: (lhs - rhs - omitted).abs(),
        tail_budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::FieldId;

    #[test]
    fn rational_poisson_is_classical() {
        let f = FieldSpec::q();
        let r = check_poisson(&TestFunction::standard_bump(), 25.0, &f, &ContourConfig::default()).unwrap();
        assert!(r.zeta_zero.residual < 1e-6, "{:?}", r.zeta_zero);
        assert!(r.paper_constant.residual > 1e-2);
    }

    #[test]
    fn gaussian_cap_needs_the_constant() {
        let f = FieldSpec::qi();
        let h = TestFunction::gaussian_cap(1.0);
        let r = check_poisson(&h, 10.0, &f, &ContourConfig::default()).unwrap();
        assert!(r.zeta_zero.residual < 1e-6, "{:?}", r.zeta_zero);
        assert!(r.paper_constant.residual > 1e-4, "{:?}", r.paper_constant);
    }

    #[test]
    fn trivial_modulus_reduces_to_plain() {
        let f = FieldSpec::qi();
        let h = TestFunction::standard_bump();
        let cc = ContourConfig::default();
        let one = Ideal::unit(FieldId::Qi);
        let r = check_poisson_coprime(&h, 10.0, &one, 10.0, 10.0, 1.0, &f, &cc).unwrap();
        let p = check_poisson(&h, 10.0, &f, &cc).unwrap();
        assert!((r.lhs - p.zeta_zero.lhs).abs() < 1e-12);
        assert!(r.closure < 1e-8);
        assert!(check_poisson_coprime(&h, 10.0, &one, 11.0, 12.0, 2.0, &f, &cc).is_err());
    }
}

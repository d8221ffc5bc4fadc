//! Dedekind zeta functions of the supported fields.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ring::{FieldId, FieldSpec};

/// `r[n]` = number of integral ideals of norm `n`, for `n <= n_max`.
pub fn ideal_counts(field: FieldId, n_max: usize) -> Vec<u32> {
    let mut r = vec![0u32; n_max + 1];
    match field {
        FieldId::Q => r.iter_mut().skip(1).for_each(|x| *x = 1),
        FieldId::Qi => {
            // r(n) = sum_{d | n} chi_{-4}(d)
            let mut acc = vec![0i64; n_max + 1];
            for d in (1..=n_max).step_by(2) {
                let c = if d % 4 == 1 { 1 } else { -1 };
                for m in (d..=n_max).step_by(d) {
                    acc[m] += c;
                }
            }
            for (x, a) in r.iter_mut().zip(acc) {
                *x = a as u32;
            }
        }
    }
    r
}

/// A truncated series value with its error budget.
#[derive(Clone, Copy, Debug)]
pub struct SeriesValue {
    pub value: Complex64,
    pub tail_budget: f64,
}

/// `zeta_k(s) = sum N(b)^{-s}` for `Re s > 1`, truncated at `cutoff` with an integral tail correction.
pub fn dedekind_zeta(f: &FieldSpec, s: Complex64, cutoff: usize, tolerance: f64) -> Result<SeriesValue> {
    if s.re <= 1.0 {
        return Err(Error::Domain(format!("the Dirichlet series needs Re s > 1, got {s}")));
    }
    let r = ideal_counts(f.id, cutoff);
    let terms: Vec<Complex64> =
        (1..=cutoff).filter(|&n| r[n] > 0).map(|n| (-s * (n as f64).ln()).exp() * r[n] as f64).collect();
    let n = cutoff as f64;
    let one = Complex64::new(1.0, 0.0);
    // sum_{n > N} r(n) n^{-s} = res N^{1-s}/(s-1) + E, with the counting error |R(x) - res x| <= C x^theta
    let correction = ((one - s) * n.ln()).exp() * f.zeta_residue() / (s - one);
    let (c, theta) = match f.id {
        FieldId::Q => (1.0, 0.0),
        FieldId::Qi => (2.0, 0.5),
    };
    let tail_budget = c * n.powf(theta - s.re) * (1.0 + s.norm() / (s.re - theta));
    if tail_budget > tolerance {
        let need = (c * (1.0 + s.norm() / (s.re - theta)) / tolerance).powf(1.0 / (s.re - theta));
        return Err(Error::Precision { message: format!("zeta tail {tail_budget:e} at cutoff {cutoff}"), suggested: need.ceil() });
    }
    Ok(SeriesValue { value: super::quad::pairwise_sum(&terms) + correction, tail_budget })
}

/// `zeta_k(0)` from the functional equation: `Lambda` has residue `-alpha_k` at `0`, and
/// `A^s Gamma(s/2)^{r1} Gamma(s)^{r2} ~ 2^{r1} s^{-(r1+r2)}` there.
pub fn zeta_special_zero(f: &FieldSpec) -> f64 {
    if f.r1 + f.r2 > 1 {
        0.0
    } else {
        -f.alpha_k / 2f64.powi(f.r1 as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const CATALAN: f64 = 0.915_965_594_177_219;

    #[test]
    fn gaussian_zeta_at_two() {
        let v = dedekind_zeta(&FieldSpec::qi(), Complex64::new(2.0, 0.0), 200_000, 1e-5).unwrap();
        let oracle = PI * PI / 6.0 * CATALAN;
        assert!((v.value.re - oracle).abs() < 1e-5, "{} vs {oracle}", v.value.re);
        assert!((v.value.re - 1.5067).abs() < 1e-4);
    }

    #[test]
    fn rational_zeta() {
        let v = dedekind_zeta(&FieldSpec::q(), Complex64::new(2.0, 0.0), 10_000, 1e-6).unwrap();
        assert!((v.value.re - PI * PI / 6.0).abs() < 1e-7);
        assert!(dedekind_zeta(&FieldSpec::q(), Complex64::new(2.0, 0.0), 10, 1e-9).is_err());
        assert!(dedekind_zeta(&FieldSpec::q(), Complex64::new(0.5, 0.0), 10, 1e-9).is_err());
    }

    #[test]
    fn values_at_zero() {
        assert_eq!(zeta_special_zero(&FieldSpec::q()), -0.5);
        // zeta(0) L(0, chi_{-4}) = (-1/2)(1/2)
        assert_eq!(zeta_special_zero(&FieldSpec::qi()), -0.25);
        let f = FieldSpec::qi();
        assert_eq!(f.alpha_k, 0.25);
        assert!((f.a_k - 1.0 / PI).abs() < 1e-16);
    }

    #[test]
    fn counts_match_lattice() {
        let r = ideal_counts(FieldId::Qi, 100);
        assert_eq!(&r[1..11], &[1, 1, 0, 1, 2, 0, 0, 1, 1, 2]);
        assert_eq!(r[25], 3);
        assert_eq!(r[65], 4);
    }
}

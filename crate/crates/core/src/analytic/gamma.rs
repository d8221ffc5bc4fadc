//! Complex log-gamma (Lanczos, g = 7) with a reflection formula that stays finite far from the real axis.

use num_complex::Complex64;
use std::f64::consts::PI;

const G: f64 = 7.0;
const COEF: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `log(sin(pi z))`, on some branch; finite for large `|Im z|`.
pub fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    if z.im.abs() < 1.0 {
        return (z * PI).sin().ln();
    }
    // sin(pi z) = (e^{i pi z} - e^{-i pi z}) / 2i; keep the dominant exponential symbolic
    if z.im > 0.0 {
        let small = (i * z * (2.0 * PI)).exp();
        -i * PI * z - (2.0 * i).ln() + (Complex64::new(1.0, 0.0) - small).ln() + Complex64::new(0.0, PI)
    } else {
        let small = (-i * z * (2.0 * PI)).exp();
        i * PI * z - (2.0 * i).ln() + (Complex64::new(1.0, 0.0) - small).ln()
    }
}

/// `log Gamma(z)` on some branch; `exp` of the result is `Gamma(z)`.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    if z.re < 0.5 {
        let one = Complex64::new(1.0, 0.0);
        return Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - ln_gamma(one - z);
    }
    let z = z - 1.0;
    let mut x = Complex64::new(COEF[0], 0.0);
    for (k, c) in COEF.iter().enumerate().skip(1) {
        x += *c / (z + k as f64);
    }
    let t = z + G + 0.5;
    Complex64::new(0.5 * (2.0 * PI).ln(), 0.0) + (z + 0.5) * t.ln() - t + x.ln()
}

pub fn gamma(z: Complex64) -> Complex64 {
    ln_gamma(z).exp()
}

/// Real `log |Gamma(x)|`.
pub fn ln_gamma_real(x: f64) -> f64 {
    ln_gamma(Complex64::new(x, 0.0)).re
}

/// Upper incomplete gamma `Gamma(a, x)` for complex `a` and real `x > 0`.
pub fn upper_incomplete_gamma(a: Complex64, x: f64) -> Complex64 {
    assert!(x > 0.0, "upper_incomplete_gamma needs x > 0");
    let one = Complex64::new(1.0, 0.0);
    let lnx = x.ln();
    if x < 1.5 + a.norm() {
        // Gamma(a) - gamma(a, x), gamma(a,x) = x^a e^{-x} sum x^k / (a (a+1) ... (a+k))
        let mut term = one / a;
        let mut sum = term;
        for k in 1..2000 {
            term *= x / (a + k as f64);
            sum += term;
            if term.norm() < 1e-17 * sum.norm() {
                break;
            }
        }
        let lower = (a * lnx - x).exp() * sum;
        gamma(a) - lower
    } else {
        // modified Lentz on the continued fraction for Gamma(a, x)
        let tiny = 1e-300;
        let mut b = Complex64::new(x + 1.0, 0.0) - a;
        let mut c = Complex64::new(1.0 / tiny, 0.0);
        let mut d = one / b;
        let mut h = d;
        for i in 1..5000 {
            let an = -(i as f64) * (Complex64::new(i as f64, 0.0) - a);
            b += 2.0;
            d = an * d + b;
            if d.norm() < tiny {
                d = Complex64::new(tiny, 0.0);
            }
            c = b + an / c;
            if c.norm() < tiny {
                c = Complex64::new(tiny, 0.0);
            }
            d = one / d;
            let delta = d * c;
            h *= delta;
            if (delta - one).norm() < 1e-16 {
                break;
            }
        }
        (a * lnx - x).exp() * h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn factorials_and_half() {
        let mut f = 1.0;
        for n in 1..20 {
            let g = gamma(c(n as f64, 0.0)).re;
            assert!((g - f).abs() < 1e-13 * f, "Gamma({n})");
            f *= n as f64;
        }
        assert!((gamma(c(0.5, 0.0)).re - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(c(-0.5, 0.0)).re + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn modulus_on_critical_line() {
        // |Gamma(1/2 + iy)|^2 = pi / cosh(pi y)
        for y in [0.3, 2.0, 10.0, 50.0, 200.0] {
            let lhs = 2.0 * ln_gamma(c(0.5, y)).re;
            let rhs = PI.ln() - (PI * y).cosh().ln();
            assert!((lhs - rhs).abs() < 1e-11 * rhs.abs().max(1.0), "y = {y}");
        }
    }

    #[test]
    fn far_left_half_plane_is_finite() {
        let z = c(-300.5, 700.0);
        let w = ln_gamma(z);
        assert!(w.re.is_finite() && w.im.is_finite());
        // recurrence Gamma(z+1) = z Gamma(z)
        let d = ln_gamma(z + 1.0) - ln_gamma(z) - z.ln();
        let d = Complex64::new(d.re, d.im.rem_euclid(2.0 * PI));
        assert!(d.re.abs() < 1e-9);
        assert!(d.im.abs() < 1e-7 || (d.im - 2.0 * PI).abs() < 1e-7);
    }

    #[test]
    fn incomplete_gamma_values() {
        // Gamma(1, x) = e^{-x}
        for x in [0.1, 1.0, 3.0, 30.0] {
            let g = upper_incomplete_gamma(c(1.0, 0.0), x);
            assert!((g.re - (-x).exp()).abs() < 1e-14 * (1.0 + (-x).exp()));
        }
        // Gamma(1/2, x) = sqrt(pi) erfc(sqrt x); erfc(1) = 0.157299207050285
        let g = upper_incomplete_gamma(c(0.5, 0.0), 1.0);
        assert!((g.re - PI.sqrt() * 0.157_299_207_050_285_13).abs() < 1e-13);
        // Gamma(a, x) = (a-1) Gamma(a-1, x) + x^{a-1} e^{-x}
        for (a, x) in [(c(0.3, 2.0), 0.7), (c(1.2, -1.0), 4.0), (c(0.15, 0.0), 9.0)] {
            let lhs = upper_incomplete_gamma(a + 1.0, x);
            let rhs = a * upper_incomplete_gamma(a, x) + (a * x.ln() - x).exp();
            assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1e-3), "a={a} x={x}");
        }
    }

    proptest! {
        #[test]
        fn duplication_formula(re in 0.1f64..8.0, im in -30.0f64..30.0) {
            // Gamma(z) Gamma(z + 1/2) = 2^{1-2z} sqrt(pi) Gamma(2z)
            let z = c(re, im);
            let lhs = ln_gamma(z) + ln_gamma(z + 0.5);
            let rhs = (1.0 - 2.0 * z) * 2f64.ln() + 0.5 * PI.ln() + ln_gamma(2.0 * z);
            prop_assert!((lhs.re - rhs.re).abs() < 1e-10 * (1.0 + rhs.re.abs()));
            let di = (lhs.im - rhs.im).rem_euclid(2.0 * PI);
            prop_assert!(di < 1e-8 || 2.0 * PI - di < 1e-8);
        }

        #[test]
        fn reflection(re in -6.0f64..0.45, im in -20.0f64..20.0) {
            let z = c(re, im);
            prop_assume!(z.norm() > 0.05 && (re - re.round()).abs() > 0.05 || im.abs() > 0.1);
            let lhs = ln_gamma(z) + ln_gamma(1.0 - z) + ln_sin_pi(z);
            prop_assert!((lhs.re - PI.ln()).abs() < 1e-9);
        }
    }
}

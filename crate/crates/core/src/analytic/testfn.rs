//! Compactly supported test functions on `[0, inf)`.

use std::fmt;

/// Smoothness class of a test function.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothness {
    Smooth,
}

/// A smooth, compactly supported real function.
#[derive(Clone, Debug, PartialEq)]
pub enum TestFunction {
    /// `exp(-1/(1-u^2))` with `u` the affine coordinate of `[lo, hi]` on `[-1, 1]`.
    Bump { lo: f64, hi: f64 },
    /// `exp(-(t/width)^2)` times a smooth cutoff that equals 1 on `[0, support/2]` and 0 beyond `support`.
    GaussianCap { width: f64, support: f64 },
    /// A finite linear combination.
    Combination(Vec<(f64, TestFunction)>),
}

fn flat(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (-1.0 / x).exp()
    }
}

/// Smooth step: 1 for `v <= 0`, 0 for `v >= 1`.
fn smooth_step(v: f64) -> f64 {
    let a = flat(1.0 - v);
    let b = flat(v);
    if a + b == 0.0 {
        0.0
    } else {
        a / (a + b)
    }
}

impl TestFunction {
    /// The bump supported on `[1/2, 5/2]`.
    pub fn standard_bump() -> Self {
        TestFunction::Bump { lo: 0.5, hi: 2.5 }
    }

    pub fn gaussian_cap(width: f64) -> Self {
        TestFunction::GaussianCap { width, support: 4.0 * width }
    }

    /// Named library functions, used by the CLI and the Parseval sweep.
    pub fn library() -> Vec<(&'static str, TestFunction)> {
        vec![
            ("bump", Self::standard_bump()),
            ("bump-wide", TestFunction::Bump { lo: 0.25, hi: 4.0 }),
            ("gaussian-cap", Self::gaussian_cap(1.0)),
            ("gaussian-cap-narrow", Self::gaussian_cap(0.5)),
        ]
    }

    pub fn by_name(name: &str) -> Option<TestFunction> {
        Self::library().into_iter().find(|(n, _)| *n == name).map(|(_, f)| f)
    }

    pub fn smoothness(&self) -> Smoothness {
        Smoothness::Smooth
    }

    pub fn eval(&self, t: f64) -> f64 {
        match self {
            TestFunction::Bump { lo, hi } => {
                if t <= *lo || t >= *hi {
                    return 0.0;
                }
                let u = (2.0 * t - lo - hi) / (hi - lo);
                (-1.0 / (1.0 - u * u)).exp()
            }
            TestFunction::GaussianCap { width, support } => {
                if t < 0.0 || t >= *support {
                    return 0.0;
                }
                let g = (-(t / width) * (t / width)).exp();
                g * smooth_step(2.0 * t / support - 1.0)
            }
            TestFunction::Combination(parts) => parts.iter().map(|(c, f)| c * f.eval(t)).sum(),
        }
    }

    /// `[lo, hi]` outside which the function vanishes.
    pub fn support(&self) -> (f64, f64) {
        match self {
            TestFunction::Bump { lo, hi } => (*lo, *hi),
            TestFunction::GaussianCap { support, .. } => (0.0, *support),
            TestFunction::Combination(parts) => parts.iter().fold((f64::INFINITY, 0.0f64), |(a, b), (_, f)| {
                let (lo, hi) = f.support();
                (a.min(lo), b.max(hi))
            }),
        }
    }

    pub fn at_zero(&self) -> f64 {
        self.eval(0.0)
    }

    pub fn scaled(self, c: f64) -> TestFunction {
        TestFunction::Combination(vec![(c, self)])
    }

    pub fn plus(self, other: TestFunction) -> TestFunction {
        TestFunction::Combination(vec![(1.0, self), (1.0, other)])
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TestFunction::Bump { lo, hi } => write!(f, "bump[{lo},{hi}]"),
            TestFunction::GaussianCap { width, support } => write!(f, "gaussian-cap(w={width},supp={support})"),
            TestFunction::Combination(parts) => {
                let s: Vec<String> = parts.iter().map(|(c, g)| format!("{c}*{g}")).collect();
                write!(f, "{}", s.join("+"))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn support_and_values() {
        let b = TestFunction::standard_bump();
        assert_eq!(b.support(), (0.5, 2.5));
        assert_eq!(b.eval(0.5), 0.0);
        assert_eq!(b.eval(3.0), 0.0);
        assert!((b.eval(1.5) - (-1.0f64).exp()).abs() < 1e-16);
        let g = TestFunction::gaussian_cap(1.0);
        assert_eq!(g.at_zero(), 1.0);
        assert_eq!(g.eval(4.0), 0.0);
        assert!((g.eval(1.9) - (-(1.9f64 * 1.9)).exp()).abs() < 1e-16);
        assert!(g.eval(3.0) < (-9.0f64).exp());
    }

    #[test]
    fn combinations_are_linear() {
        let f = TestFunction::standard_bump().scaled(2.0).plus(TestFunction::gaussian_cap(1.0));
        for t in [0.0, 0.7, 1.5, 2.2, 3.5] {
            let want = 2.0 * TestFunction::standard_bump().eval(t) + TestFunction::gaussian_cap(1.0).eval(t);
            assert_eq!(f.eval(t), want);
        }
        assert_eq!(f.support(), (0.0, 4.0));
    }
}

//! Exact arithmetic in `Q(sqrt 2, sqrt 3, sqrt 5, ...)`: finite sums `sum_s c_s sqrt(s)` with
//! rational `c_s` and squarefree radicands `s`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// `sum_s c_s sqrt(s)`; zero coefficients are never stored, so equality is structural.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SqrtRational {
    terms: BTreeMap<u64, BigRational>,
}

/// `n = q^2 s` with `s` squarefree.
pub fn split_square(mut n: u64) -> (u64, u64) {
    assert!(n > 0, "split_square needs n > 0");
    let (mut q, mut s) = (1u64, 1u64);
    let mut p = 2u64;
    while p * p <= n {
        let mut e = 0;
        while n.is_multiple_of(p) {
            n /= p;
            e += 1;
        }
        q *= p.pow(e / 2);
        if e % 2 == 1 {
            s *= p;
        }
        p += 1;
    }
    (q, s * n)
}

impl SqrtRational {
    pub fn zero() -> Self {
        SqrtRational::default()
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    pub fn rational(c: BigRational) -> Self {
        Self::term(1, c)
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::rational(BigRational::new(num.into(), den.into()))
    }

    /// `c sqrt(s)` for squarefree `s`.
    fn term(s: u64, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(s, c);
        }
        SqrtRational { terms }
    }

    /// `sqrt(n)`.
    pub fn sqrt(n: u64) -> Self {
        let (q, s) = split_square(n);
        Self::term(s, BigRational::from_integer(q.into()))
    }

    /// `1 / sqrt(n) = sqrt(s) / (q s)`.
    pub fn inv_sqrt(n: u64) -> Self {
        let (q, s) = split_square(n);
        Self::term(s, BigRational::new(BigInt::one(), BigInt::from(q) * BigInt::from(s)))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The rational value when no irrational radicand is present.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.len() {
            0 => Some(BigRational::zero()),
            1 => self.terms.get(&1).cloned(),
            _ => None,
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (u64, &BigRational)> {
        self.terms.iter().map(|(s, c)| (*s, c))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        SqrtRational { terms: self.terms.iter().map(|(s, v)| (*s, v * c)).collect() }
    }

    pub fn to_f64(&self) -> f64 {
        self.terms.iter().map(|(s, c)| c.to_f64().unwrap_or(f64::NAN) * (*s as f64).sqrt()).sum()
    }

    fn add_term(&mut self, s: u64, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(s).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&s);
        }
    }

    /// `(sum m_s sqrt(s)) / d` with integers `m_s` and the least common denominator `d > 0`.
    pub fn over_common_denominator(&self) -> (Vec<(BigInt, u64)>, BigInt) {
        let den = self.terms.values().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let nums = self.terms.iter().map(|(s, c)| ((c * BigRational::from_integer(den.clone())).to_integer(), *s)).collect();
        (nums, den)
    }

    /// Numerator as text (`3*sqrt(5)-2`) and the common denominator.
    pub fn numerator_denominator(&self) -> (String, String) {
        let (nums, den) = self.over_common_denominator();
        if nums.is_empty() {
            return ("0".into(), "1".into());
        }
        let mut out = String::new();
        for (k, (m, s)) in nums.iter().enumerate() {
            let sign = if m.is_negative() { "-" } else if k > 0 { "+" } else { "" };
            let abs = m.abs();
            out.push_str(sign);
            match (*s, abs.is_one()) {
                (1, _) => out.push_str(&abs.to_string()),
                (s, true) => out.push_str(&format!("sqrt({s})")),
                (s, false) => out.push_str(&format!("{abs}*sqrt({s})")),
            }
        }
        (out, den.to_string())
    }
}

impl fmt::Display for SqrtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (num, den) = self.numerator_denominator();
        if den == "1" {
            write!(f, "{num}")
        } else {
            write!(f, "({num})/{den}")
        }
    }
}

impl Add for &SqrtRational {
    type Output = SqrtRational;
    fn add(self, o: &SqrtRational) -> SqrtRational {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl AddAssign<&SqrtRational> for SqrtRational {
    fn add_assign(&mut self, o: &SqrtRational) {
        for (s, c) in &o.terms {
            self.add_term(*s, c.clone());
        }
    }
}

impl Neg for &SqrtRational {
    type Output = SqrtRational;
    fn neg(self) -> SqrtRational {
        SqrtRational { terms: self.terms.iter().map(|(s, c)| (*s, -c)).collect() }
    }
}

impl Sub for &SqrtRational {
    type Output = SqrtRational;
    fn sub(self, o: &SqrtRational) -> SqrtRational {
        self + &(-o)
    }
}

impl Mul for &SqrtRational {
    type Output = SqrtRational;
    fn mul(self, o: &SqrtRational) -> SqrtRational {
        let mut r = SqrtRational::zero();
        for (s, a) in &self.terms {
            for (t, b) in &o.terms {
                // sqrt(s) sqrt(t) = g sqrt(s t / g^2)
                let g = s.gcd(t);
                r.add_term((s / g) * (t / g), a * b * BigRational::from_integer(g.into()));
            }
        }
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn square_split() {
        assert_eq!(split_square(1), (1, 1));
        assert_eq!(split_square(72), (6, 2));
        assert_eq!(split_square(1225), (35, 1));
        assert_eq!(split_square(30), (1, 30));
    }

    #[test]
    fn inverse_square_roots_multiply_back() {
        for n in 1..200u64 {
            let p = &SqrtRational::inv_sqrt(n) * &SqrtRational::sqrt(n);
            assert_eq!(p, SqrtRational::one(), "n={n}");
            let sq = &SqrtRational::inv_sqrt(n) * &SqrtRational::inv_sqrt(n);
            assert_eq!(sq, SqrtRational::from_ratio(1, n as i64));
        }
    }

    #[test]
    fn rendering() {
        let x = &SqrtRational::inv_sqrt(12) - &SqrtRational::from_ratio(1, 3);
        assert_eq!(x.numerator_denominator(), ("-2+sqrt(3)".into(), "6".into()));
        assert_eq!(SqrtRational::zero().to_string(), "0");
        assert!((x.to_f64() - (1.0 / 12f64.sqrt() - 1.0 / 3.0)).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn ring_laws(a in 1u64..60, b in 1u64..60, c in 1u64..60, k in -5i64..5) {
            let x = &SqrtRational::inv_sqrt(a) + &SqrtRational::from_ratio(k, 7);
            let y = SqrtRational::sqrt(b);
            let z = &SqrtRational::inv_sqrt(c) - &SqrtRational::sqrt(a * c);
            prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
            prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            prop_assert!((&(&x * &y) - &(&y * &x)).is_zero());
            let f = (&x * &z).to_f64();
            prop_assert!((f - x.to_f64() * z.to_f64()).abs() < 1e-12 * (1.0 + f.abs()));
        }
    }
}

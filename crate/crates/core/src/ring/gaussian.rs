//! Elements of `Z[i]` (rational integers are the elements with `im == 0`).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

/// A Gaussian integer `re + im*i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct Gaussian {
    pub re: i128,
    pub im: i128,
}

impl Gaussian {
    pub const ZERO: Gaussian = Gaussian { re: 0, im: 0 };
    pub const ONE: Gaussian = Gaussian { re: 1, im: 0 };
    pub const I: Gaussian = Gaussian { re: 0, im: 1 };

    pub const fn new(re: i128, im: i128) -> Self {
        Gaussian { re, im }
    }

    pub const fn int(n: i128) -> Self {
        Gaussian { re: n, im: 0 }
    }

    pub fn is_zero(&self) -> bool {
        self.re == 0 && self.im == 0
    }

    pub fn conj(&self) -> Self {
        Gaussian::new(self.re, -self.im)
    }

    /// `re^2 + im^2`.
    pub fn norm(&self) -> i128 {
        self.re * self.re + self.im * self.im
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        Gaussian::new(-self.im, self.re)
    }

    /// `self / d` when the quotient lies in `Z[i]`.
    pub fn div_exact(&self, d: &Gaussian) -> Option<Gaussian> {
        let n = d.norm();
        if n == 0 {
            return None;
        }
        let t = *self * d.conj();
        if t.re % n == 0 && t.im % n == 0 {
            Some(Gaussian::new(t.re / n, t.im / n))
        } else {
            None
        }
    }

    pub fn divides(&self, z: &Gaussian) -> bool {
        z.div_exact(self).is_some()
    }

    /// Euclidean division with rounded quotient: `self = q*d + r`, `N(r) <= N(d)/2`.
    pub fn div_rem(&self, d: &Gaussian) -> (Gaussian, Gaussian) {
        let n = d.norm();
        let t = *self * d.conj();
        let q = Gaussian::new(div_round(t.re, n), div_round(t.im, n));
        (q, *self - q * *d)
    }

    /// A greatest common divisor (not normalized).
    pub fn gcd(a: Gaussian, b: Gaussian) -> Gaussian {
        let (mut a, mut b) = (a, b);
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a
    }

    pub fn pow(&self, mut e: u32) -> Gaussian {
        let mut acc = Gaussian::ONE;
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * b;
            }
            b = b * b;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(self.re as f64, self.im as f64)
    }
}

fn div_round(a: i128, n: i128) -> i128 {
    // nearest integer to a/n, n > 0
    (2 * a + n).div_euclid(2 * n)
}

impl Add for Gaussian {
    type Output = Gaussian;
    fn add(self, o: Gaussian) -> Gaussian {
        Gaussian::new(self.re + o.re, self.im + o.im)
    }
}

impl Sub for Gaussian {
    type Output = Gaussian;
    fn sub(self, o: Gaussian) -> Gaussian {
        Gaussian::new(self.re - o.re, self.im - o.im)
    }
}

impl Mul for Gaussian {
    type Output = Gaussian;
    fn mul(self, o: Gaussian) -> Gaussian {
        Gaussian::new(
            self.re * o.re - self.im * o.im,
            self.re * o.im + self.im * o.re,
        )
    }
}

impl Neg for Gaussian {
    type Output = Gaussian;
    fn neg(self) -> Gaussian {
        Gaussian::new(-self.re, -self.im)
    }
}

impl fmt::Display for Gaussian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re, self.im) {
            (r, 0) => write!(f, "{r}"),
            (0, 1) => write!(f, "i"),
            (0, -1) => write!(f, "-i"),
            (0, m) => write!(f, "{m}i"),
            (r, 1) => write!(f, "{r}+i"),
            (r, -1) => write!(f, "{r}-i"),
            (r, m) if m > 0 => write!(f, "{r}+{m}i"),
            (r, m) => write!(f, "{r}{m}i"),
        }
    }
}

impl FromStr for Gaussian {
    type Err = Error;

    /// Parses forms such as `7`, `-3`, `i`, `2+i`, `1-2i`, `-4i`.
    fn from_str(s: &str) -> Result<Gaussian> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse(format!("not a Gaussian integer: {s:?}"));
        if t.is_empty() {
            return Err(bad());
        }
        if !t.ends_with('i') {
            return t.parse::<i128>().map(Gaussian::int).map_err(|_| bad());
        }
        let body = &t[..t.len() - 1];
        // split at the last sign that is not leading
        let split = body
            .char_indices()
            .skip(1)
            .filter(|(_, c)| *c == '+' || *c == '-')
            .map(|(k, _)| k)
            .last();
        let (re_s, im_s) = match split {
            Some(k) => (&body[..k], &body[k..]),
            None => ("0", body),
        };
        let re: i128 = re_s.parse().map_err(|_| bad())?;
        let im: i128 = match im_s {
            "" | "+" => 1,
            "-" => -1,
            x => x.parse().map_err(|_| bad())?,
        };
        Ok(Gaussian::new(re, im))
    }
}

/// A field element stored as a quotient `num / den` of Gaussian integers.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct FieldElem {
    pub num: Gaussian,
    pub den: Gaussian,
}

impl FieldElem {
    pub fn new(num: Gaussian, den: Gaussian) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        Ok(FieldElem { num, den })
    }

    pub fn from_int(z: Gaussian) -> Self {
        FieldElem { num: z, den: Gaussian::ONE }
    }

    pub fn mul(&self, o: &FieldElem) -> FieldElem {
        FieldElem { num: self.num * o.num, den: self.den * o.den }
    }

    /// Equality of the represented field elements.
    pub fn same_value(&self, o: &FieldElem) -> bool {
        self.num * o.den == o.num * self.den
    }

    /// The element as a Gaussian integer, if integral.
    pub fn as_integral(&self) -> Option<Gaussian> {
        self.num.div_exact(&self.den)
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Gaussian::ONE {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display_roundtrip() {
        for s in ["7", "-3", "i", "-i", "2+i", "1-2i", "-4i", "-5+3i", "0"] {
            let z: Gaussian = s.parse().unwrap();
            assert_eq!(z.to_string(), s);
        }
        assert!("2+".parse::<Gaussian>().is_err());
        assert!("x".parse::<Gaussian>().is_err());
    }

    #[test]
    fn euclid_remainder_small() {
        let a = Gaussian::new(27, -13);
        let b = Gaussian::new(4, 7);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q * b + r, a);
        assert!(2 * r.norm() <= b.norm());
    }

    #[test]
    fn gcd_of_conjugate_primes_is_unit() {
        let g = Gaussian::gcd(Gaussian::new(2, 1), Gaussian::new(2, -1));
        assert_eq!(g.norm(), 1);
    }

    #[test]
    fn exact_division() {
        let five = Gaussian::int(5);
        assert_eq!(five.div_exact(&Gaussian::new(2, 1)), Some(Gaussian::new(2, -1)));
        assert_eq!(five.div_exact(&Gaussian::new(1, 1)), None);
    }
}

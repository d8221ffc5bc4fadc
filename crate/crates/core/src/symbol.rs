//! Power residue symbols by Euler's criterion, and the Jacobi symbol.

use std::fmt;

use num_complex::Complex64;
use num_integer::Integer;

use crate::error::{domain, Error, Result};
use crate::ring::arith::inv_mod;
use crate::ring::{FieldElem, FieldId, Gaussian, Ideal, PrimeIdeal};

/// An element of `mu_n`, or zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RootOfUnity {
    Zero,
    /// `exp(2 pi i k / n)`.
    Root { order: u32, exp: u32 },
}

impl RootOfUnity {
    pub const ONE: RootOfUnity = RootOfUnity::Root { order: 1, exp: 0 };

    pub fn new(order: u32, exp: i64) -> RootOfUnity {
        assert!(order >= 1);
        RootOfUnity::Root { order, exp: exp.rem_euclid(order as i64) as u32 }.reduced()
    }

    pub fn from_sign(s: i8) -> RootOfUnity {
        match s {
            0 => RootOfUnity::Zero,
            1 => RootOfUnity::ONE,
            -1 => RootOfUnity::Root { order: 2, exp: 1 },
            _ => panic!("not a sign: {s}"),
        }
    }

    /// Lowest-terms form of `k/n`.
    fn reduced(self) -> RootOfUnity {
        match self {
            RootOfUnity::Zero => self,
            RootOfUnity::Root { order, exp } => {
                let g = (order as u64).gcd(&(exp as u64)).max(1) as u32;
                let g = if exp == 0 { order } else { g };
                RootOfUnity::Root { order: order / g, exp: exp / g }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, RootOfUnity::Zero)
    }

    pub fn is_one(&self) -> bool {
        matches!(self.reduced(), RootOfUnity::Root { order: 1, .. })
    }

    pub fn mul(self, o: RootOfUnity) -> RootOfUnity {
        match (self, o) {
            (RootOfUnity::Root { order: n1, exp: k1 }, RootOfUnity::Root { order: n2, exp: k2 }) => {
                let n = (n1 as u64).lcm(&(n2 as u64));
                let k = (k1 as u64) * (n / n1 as u64) + (k2 as u64) * (n / n2 as u64);
                RootOfUnity::new(n as u32, k as i64)
            }
            _ => RootOfUnity::Zero,
        }
    }

    pub fn pow(self, e: u32) -> RootOfUnity {
        match self {
            RootOfUnity::Zero if e == 0 => RootOfUnity::ONE,
            RootOfUnity::Zero => RootOfUnity::Zero,
            RootOfUnity::Root { order, exp } => RootOfUnity::new(order, exp as i64 * e as i64),
        }
    }

    pub fn conj(self) -> RootOfUnity {
        match self {
            RootOfUnity::Zero => self,
            RootOfUnity::Root { order, exp } => RootOfUnity::new(order, -(exp as i64)),
        }
    }

    /// The value as `-1, 0, 1` when it is real.
    pub fn as_sign(&self) -> Option<i8> {
        match self.reduced() {
            RootOfUnity::Zero => Some(0),
            RootOfUnity::Root { order: 1, .. } => Some(1),
            RootOfUnity::Root { order: 2, .. } => Some(-1),
            _ => None,
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        match self.reduced() {
            RootOfUnity::Zero => Complex64::new(0.0, 0.0),
            RootOfUnity::Root { order, exp } => match (order, exp) {
                (1, _) => Complex64::new(1.0, 0.0),
                (2, _) => Complex64::new(-1.0, 0.0),
                (4, 1) => Complex64::new(0.0, 1.0),
                (4, 3) => Complex64::new(0.0, -1.0),
                _ => Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * exp as f64 / order as f64),
            },
        }
    }
}

impl fmt::Display for RootOfUnity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.reduced() {
            RootOfUnity::Zero => f.write_str("0"),
            RootOfUnity::Root { order: 1, .. } => f.write_str("1"),
            RootOfUnity::Root { order: 2, .. } => f.write_str("-1"),
            RootOfUnity::Root { order: 4, exp: 1 } => f.write_str("i"),
            RootOfUnity::Root { order: 4, exp: 3 } => f.write_str("-i"),
            RootOfUnity::Root { order, exp } => write!(f, "e(2pi*{exp}/{order})"),
        }
    }
}

/// Residue field `O/P` for a prime `P`. Elements are pairs `(x, y)`; `y` is used only in `F_{p^2}`.
#[derive(Clone, Copy, Debug)]
enum ResidueField {
    /// `F_p`, with `i` mapped to `i_image` (over `Q(i)`).
    Prime { p: u64, i_image: u64 },
    /// `F_p[i]/(i^2+1)` for inert `p`.
    Inert { p: u64 },
}

type Fq = (u64, u64);

impl ResidueField {
    fn new(pr: &PrimeIdeal) -> ResidueField {
        match (pr.field, pr.residue_degree) {
            (FieldId::Q, _) => ResidueField::Prime { p: pr.p, i_image: 0 },
            (FieldId::Qi, 2) => ResidueField::Inert { p: pr.p },
            (FieldId::Qi, _) => {
                let p = pr.p as i128;
                let (a, b) = (pr.gen.re, pr.gen.im);
                let r = (-a * inv_mod(b, p).expect("split prime generator")).rem_euclid(p);
                ResidueField::Prime { p: pr.p, i_image: r as u64 }
            }
        }
    }

    fn reduce(&self, z: &Gaussian) -> Fq {
        match *self {
            ResidueField::Prime { p, i_image } => {
                let p = p as i128;
                ((z.re.rem_euclid(p) + z.im.rem_euclid(p) * i_image as i128 % p).rem_euclid(p) as u64, 0)
            }
            ResidueField::Inert { p } => {
                let p = p as i128;
                (z.re.rem_euclid(p) as u64, z.im.rem_euclid(p) as u64)
            }
        }
    }

    fn mul(&self, x: Fq, y: Fq) -> Fq {
        match *self {
            ResidueField::Prime { p, .. } => ((x.0 as u128 * y.0 as u128 % p as u128) as u64, 0),
            ResidueField::Inert { p } => {
                let p128 = p as u128;
                let (a, b, c, d) = (x.0 as u128, x.1 as u128, y.0 as u128, y.1 as u128);
                let re = (a * c % p128 + p128 * p128 - b * d % p128) % p128;
                let im = (a * d + b * c) % p128;
                (re as u64, im as u64)
            }
        }
    }

    fn pow(&self, x: Fq, mut e: u64) -> Fq {
        let mut acc: Fq = (1, 0);
        let mut b = x;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        acc
    }
}

/// A generator of `mu_n` inside `Z[i]`, when it exists.
fn root_of_unity_element(field: FieldId, n: u32) -> Option<Gaussian> {
    match (field, n) {
        (_, 1) => Some(Gaussian::ONE),
        (_, 2) => Some(-Gaussian::ONE),
        (FieldId::Qi, 4) => Some(Gaussian::I),
        _ => None,
    }
}

/// The `n`-th power residue symbol `(a/P)` by Euler's criterion.
pub fn symbol_at_prime(a: &Gaussian, p: &PrimeIdeal, n: u32) -> Result<RootOfUnity> {
    if a.is_zero() {
        return domain("symbol of zero");
    }
    if p.field == FieldId::Q && a.im != 0 {
        return domain(format!("{a} is not a rational integer"));
    }
    let zeta = root_of_unity_element(p.field, n)
        .ok_or_else(|| Error::UnsupportedPrime(format!("mu_{n} is not contained in {}", p.field)))?;
    if n == 0 || !(p.norm - 1).is_multiple_of(n as u64) {
        return Err(Error::UnsupportedPrime(format!("{n} does not divide N{p} - 1")));
    }
    if p.contains(a) {
        return Ok(RootOfUnity::Zero);
    }
    let f = ResidueField::new(p);
    let r = f.pow(f.reduce(a), (p.norm - 1) / n as u64);
    let mut hit = None;
    let mut z = Gaussian::ONE;
    for k in 0..n {
        if f.reduce(&z) == r {
            if hit.is_some() {
                return Err(Error::UnsupportedPrime(format!("mu_{n} does not inject into O/{p}")));
            }
            hit = Some(k);
        }
        z = z * zeta;
    }
    let k = hit.ok_or_else(|| Error::Domain(format!("Euler criterion for {a} at {p} left mu_{n}")))?;
    Ok(RootOfUnity::new(n, k as i64))
}

/// `(a/b)` extended multiplicatively over the factorization of `b`.
pub fn symbol(a: &Gaussian, b: &Ideal, n: u32) -> Result<RootOfUnity> {
    let mut acc = RootOfUnity::ONE;
    for (p, e) in b.factors() {
        if n > 1 && (n as u64).is_multiple_of(p.p) {
            return Err(Error::UnsupportedPrime(format!("{p} divides ({n})")));
        }
        acc = acc.mul(symbol_at_prime(a, p, n)?.pow(*e));
        if acc.is_zero() {
            return Ok(acc);
        }
    }
    Ok(acc)
}

/// `(x/b)` for a field element `x = num/den` with `den` prime to `b`.
pub fn symbol_of_quotient(x: &FieldElem, b: &Ideal, n: u32) -> Result<RootOfUnity> {
    let d = symbol(&x.den, b, n)?;
    if d.is_zero() {
        return domain(format!("denominator of {x} is not prime to {b}"));
    }
    Ok(symbol(&x.num, b, n)?.mul(d.conj()))
}

/// The Jacobi symbol `(a/b)` for odd positive `b`.
pub fn jacobi(a: i128, b: i128) -> Result<i8> {
    if b <= 0 || b % 2 == 0 {
        return domain(format!("jacobi denominator {b} must be odd and positive"));
    }
    let mut a = a.rem_euclid(b);
    let mut b = b;
    let mut t = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            let r = b % 8;
            if r == 3 || r == 5 {
                t = -t;
            }
        }
        std::mem::swap(&mut a, &mut b);
        if a % 4 == 3 && b % 4 == 3 {
            t = -t;
        }
        a %= b;
    }
    Ok(if b == 1 { t } else { 0 })
}

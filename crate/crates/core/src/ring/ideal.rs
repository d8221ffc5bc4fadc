//! Integral ideals of `Z` and `Z[i]`, stored by canonical generator.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use super::arith::{factor_u64, factor_with_spf, isqrt, spf_table, sqrt_minus_one};
use super::field::{FieldId, FieldSpec};
use super::gaussian::Gaussian;
use crate::error::{domain, Result};

/// A nonzero prime ideal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeIdeal {
    pub field: FieldId,
    /// Canonical generator.
    pub gen: Gaussian,
    pub norm: u64,
    /// The rational prime below.
    pub p: u64,
    pub residue_degree: u32,
}

impl PrimeIdeal {
    /// Whether `z` lies in this prime.
    pub fn contains(&self, z: &Gaussian) -> bool {
        match self.field {
            FieldId::Q => z.re % self.p as i128 == 0,
            FieldId::Qi => {
                if self.residue_degree == 2 {
                    let p = self.p as i128;
                    z.re % p == 0 && z.im % p == 0
                } else {
                    self.gen.divides(z)
                }
            }
        }
    }

    pub fn ideal(&self) -> Ideal {
        Ideal::from_factors(self.field, vec![(*self, 1)])
    }
}

impl Ord for PrimeIdeal {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.norm, self.gen.re, self.gen.im).cmp(&(o.norm, o.gen.re, o.gen.im))
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.gen)
    }
}

/// A nonzero integral ideal with its factorization.
#[derive(Clone, Debug)]
pub struct Ideal {
    field: FieldId,
    gen: Gaussian,
    norm: u64,
    factors: Arc<[(PrimeIdeal, u32)]>,
}

impl PartialEq for Ideal {
    fn eq(&self, o: &Self) -> bool {
        self.field == o.field && self.gen == o.gen
    }
}

impl Eq for Ideal {}

impl Hash for Ideal {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.hash(state);
        self.gen.hash(state);
    }
}

impl Ord for Ideal {
    fn cmp(&self, o: &Self) -> Ordering {
        (self.field, self.norm, self.gen.re, self.gen.im).cmp(&(o.field, o.norm, o.gen.re, o.gen.im))
    }
}

impl PartialOrd for Ideal {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.gen)
    }
}

impl Ideal {
    /// The principal ideal `(z)`.
    pub fn new(field: FieldId, z: Gaussian) -> Result<Ideal> {
        if z.is_zero() {
            return domain("zero ideal");
        }
        if field == FieldId::Q && z.im != 0 {
            return domain(format!("{z} is not a rational integer"));
        }
        let factors = factor_element(field, z, None);
        Ok(Ideal::from_factors(field, factors))
    }

    /// Shorthand for `Ideal::new(FieldId::Q, n)`.
    pub fn rational(n: i128) -> Result<Ideal> {
        Ideal::new(FieldId::Q, Gaussian::int(n))
    }

    pub fn unit(field: FieldId) -> Ideal {
        Ideal { field, gen: Gaussian::ONE, norm: 1, factors: Arc::from(Vec::new()) }
    }

    /// Builds the ideal from a prime factorization (entries with exponent 0 are dropped).
    pub fn from_factors(field: FieldId, mut factors: Vec<(PrimeIdeal, u32)>) -> Ideal {
        factors.retain(|(_, e)| *e > 0);
        factors.sort_by_key(|a| a.0);
        let spec = FieldSpec::new(field);
        let mut gen = Gaussian::ONE;
        let mut norm = 1u64;
        for (p, e) in &factors {
            gen = gen * p.gen.pow(*e);
            norm *= p.norm.pow(*e);
        }
        Ideal { field, gen: spec.canonical(gen), norm, factors: Arc::from(factors) }
    }

    pub fn field(&self) -> FieldId {
        self.field
    }

    /// Canonical generator.
    pub fn gen(&self) -> Gaussian {
        self.gen
    }

    pub fn norm(&self) -> u64 {
        self.norm
    }

    pub fn factors(&self) -> &[(PrimeIdeal, u32)] {
        &self.factors
    }

    pub fn primes(&self) -> impl Iterator<Item = &PrimeIdeal> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn is_unit(&self) -> bool {
        self.norm == 1
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|(_, e)| *e == 1)
    }

    pub fn exponent(&self, p: &PrimeIdeal) -> u32 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }

    /// Whether the element `z` lies in the ideal.
    pub fn contains(&self, z: &Gaussian) -> bool {
        self.gen.divides(z)
    }

    /// Whether `z` generates an ideal coprime to this one.
    pub fn coprime_to_element(&self, z: &Gaussian) -> bool {
        !z.is_zero() && self.primes().all(|p| !p.contains(z))
    }

    pub fn mul(&self, o: &Ideal) -> Ideal {
        let mut f: Vec<(PrimeIdeal, u32)> = self.factors.to_vec();
        for (p, e) in o.factors.iter() {
            match f.iter_mut().find(|(q, _)| q == p) {
                Some((_, x)) => *x += e,
                None => f.push((*p, *e)),
            }
        }
        Ideal::from_factors(self.field, f)
    }

    pub fn pow(&self, k: u32) -> Ideal {
        Ideal::from_factors(self.field, self.factors.iter().map(|(p, e)| (*p, e * k)).collect())
    }

    /// Whether `self` divides `o`.
    pub fn divides(&self, o: &Ideal) -> bool {
        self.factors.iter().all(|(p, e)| o.exponent(p) >= *e)
    }

    /// `self / o` when `o` divides `self`.
    pub fn div(&self, o: &Ideal) -> Option<Ideal> {
        if !o.divides(self) {
            return None;
        }
        Some(Ideal::from_factors(
            self.field,
            self.factors.iter().map(|(p, e)| (*p, e - o.exponent(p))).collect(),
        ))
    }

    pub fn gcd(&self, o: &Ideal) -> Ideal {
        ideal_gcd(self, o)
    }

    pub fn coprime(&self, o: &Ideal) -> bool {
        self.primes().all(|p| o.exponent(p) == 0)
    }

    /// Product of the distinct primes dividing the ideal.
    pub fn radical(&self) -> Ideal {
        Ideal::from_factors(self.field, self.factors.iter().map(|(p, _)| (*p, 1)).collect())
    }

    /// All integral divisors in `(norm, generator)` order.
    pub fn divisors(&self) -> Vec<Ideal> {
        let mut exps: Vec<Vec<(PrimeIdeal, u32)>> = vec![Vec::new()];
        for (p, e) in self.factors.iter() {
            let mut next = Vec::with_capacity(exps.len() * (*e as usize + 1));
            for base in &exps {
                for k in 0..=*e {
                    let mut v = base.clone();
                    v.push((*p, k));
                    next.push(v);
                }
            }
            exps = next;
        }
        let mut out: Vec<Ideal> = exps.into_iter().map(|f| Ideal::from_factors(self.field, f)).collect();
        out.sort();
        out
    }

    /// Squarefree divisors.
    pub fn squarefree_divisors(&self) -> Vec<Ideal> {
        self.radical().divisors()
    }

    /// Mobius function.
    pub fn mobius(&self) -> i32 {
        if self.is_squarefree() {
            if self.factors.len().is_multiple_of(2) {
                1
            } else {
                -1
            }
        } else {
            0
        }
    }

    /// Euler phi: the order of `(O/a)^*`.
    pub fn phi(&self) -> u64 {
        self.factors.iter().map(|(p, e)| p.norm.pow(e - 1) * (p.norm - 1)).product()
    }
}

/// Factors the ideal `(z)`. An optional precomputed factorization of the norm can be supplied.
fn factor_element(field: FieldId, z: Gaussian, norm_factors: Option<Vec<(u64, u32)>>) -> Vec<(PrimeIdeal, u32)> {
    let spec = FieldSpec::new(field);
    let nf = norm_factors.unwrap_or_else(|| factor_u64(spec.norm(&z) as u64));
    let mut out = Vec::new();
    for (p, e) in nf {
        match field {
            FieldId::Q => out.push((
                PrimeIdeal { field, gen: Gaussian::int(p as i128), norm: p, p, residue_degree: 1 },
                e,
            )),
            FieldId::Qi => {
                if p == 2 {
                    out.push((
                        PrimeIdeal { field, gen: Gaussian::new(1, 1), norm: 2, p: 2, residue_degree: 1 },
                        e,
                    ));
                } else if p % 4 == 3 {
                    out.push((
                        PrimeIdeal {
                            field,
                            gen: Gaussian::int(p as i128),
                            norm: p * p,
                            p,
                            residue_degree: 2,
                        },
                        e / 2,
                    ));
                } else {
                    let (pi, pib) = split_primes(p);
                    let mut w = z;
                    let mut k = 0;
                    while k < e {
                        match w.div_exact(&pi) {
                            Some(q) => {
                                w = q;
                                k += 1;
                            }
                            None => break,
                        }
                    }
                    let mk = |g| PrimeIdeal { field, gen: g, norm: p, p, residue_degree: 1 };
                    if k > 0 {
                        out.push((mk(pi), k));
                    }
                    if e > k {
                        out.push((mk(pib), e - k));
                    }
                }
            }
        }
    }
    out.sort_by_key(|a| a.0);
    out
}

/// The two canonical Gaussian primes above a prime `p = 1 mod 4`, in generator order.
fn split_primes(p: u64) -> (Gaussian, Gaussian) {
    let spec = FieldSpec::qi();
    let x = sqrt_minus_one(p) as i128;
    let pi = spec.canonical(Gaussian::gcd(Gaussian::int(p as i128), Gaussian::new(x, 1)));
    let pib = spec.canonical(pi.conj());
    if (pi.re, pi.im) < (pib.re, pib.im) {
        (pi, pib)
    } else {
        (pib, pi)
    }
}

/// Factorization of a nonzero ideal, in ascending `(norm, generator)` order.
pub fn factor_ideal(a: &Ideal) -> Vec<(PrimeIdeal, u32)> {
    a.factors().to_vec()
}

/// Greatest common divisor via minimum exponents.
pub fn ideal_gcd(a: &Ideal, b: &Ideal) -> Ideal {
    Ideal::from_factors(
        a.field(),
        a.factors().iter().map(|(p, e)| (*p, (*e).min(b.exponent(p)))).collect(),
    )
}

/// `s(a)`: the norm of the squarefree part of `a` coprime to `c`.
pub fn squarefree_part_coprime(a: &Ideal, c: &Ideal) -> u64 {
    a.factors()
        .iter()
        .filter(|(p, e)| e % 2 == 1 && c.exponent(p) == 0)
        .map(|(p, _)| p.norm)
        .product()
}

/// Values of the Mobius, Euler phi and divisor-count functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MultiplicativeValues {
    pub mu: i32,
    pub phi: u64,
    pub tau: u64,
}

pub fn multiplicative_funcs(a: &Ideal) -> MultiplicativeValues {
    MultiplicativeValues {
        mu: a.mobius(),
        phi: a.phi(),
        tau: a.factors().iter().map(|(_, e)| *e as u64 + 1).product(),
    }
}

/// Filter for [`enumerate_ideals`].
#[derive(Clone, Debug, Default)]
pub struct IdealFilter {
    pub squarefree: bool,
    pub coprime_to: Option<Ideal>,
}

impl IdealFilter {
    pub fn none() -> Self {
        IdealFilter::default()
    }

    pub fn squarefree_coprime(c: &Ideal) -> Self {
        IdealFilter { squarefree: true, coprime_to: Some(c.clone()) }
    }

    pub fn coprime(c: &Ideal) -> Self {
        IdealFilter { squarefree: false, coprime_to: Some(c.clone()) }
    }

    pub fn accepts(&self, a: &Ideal) -> bool {
        (!self.squarefree || a.is_squarefree())
            && self.coprime_to.as_ref().is_none_or(|c| c.coprime(a))
    }
}

const SPF_LIMIT: u64 = 20_000_000;

/// All ideals with norm in `(lo, hi]` passing `filter`, sorted by `(norm, generator)`.
pub fn enumerate_ideals(field: FieldId, lo: u64, hi: u64, filter: &IdealFilter) -> Vec<Ideal> {
    if hi <= lo {
        return Vec::new();
    }
    let spf = if hi <= SPF_LIMIT { Some(spf_table(hi as usize)) } else { None };
    let nf = |n: u64| match &spf {
        Some(t) => factor_with_spf(n, t),
        None => factor_u64(n),
    };
    let mut out = Vec::new();
    match field {
        FieldId::Q => {
            for n in lo + 1..=hi {
                let f = factor_element(field, Gaussian::int(n as i128), Some(nf(n)));
                let a = Ideal::from_factors(field, f);
                if filter.accepts(&a) {
                    out.push(a);
                }
            }
        }
        FieldId::Qi => {
            let r = isqrt(hi);
            for x in 1..=r {
                for y in 0..=r {
                    let n = x * x + y * y;
                    if n > hi {
                        break;
                    }
                    if n <= lo {
                        continue;
                    }
                    let z = Gaussian::new(x as i128, y as i128);
                    let a = Ideal::from_factors(field, factor_element(field, z, Some(nf(n))));
                    debug_assert_eq!(a.gen(), z);
                    if filter.accepts(&a) {
                        out.push(a);
                    }
                }
            }
            out.sort();
        }
    }
    out
}

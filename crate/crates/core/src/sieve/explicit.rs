//! `Sigma5`, its closed forms, the main terms `T`, `T'` of the explicit formula and the bracket
//! that makes their difference small.

use num_complex::Complex64;
use num_rational::BigRational;
use std::collections::BTreeMap;

use super::exact::SqrtRational;
use super::lambda::LambdaSeq;
use crate::analytic::quad::adaptive;
use crate::analytic::TestFunction;
use crate::error::{Error, Result};
use crate::family::{HeckeFamily, IdealCharacter, PairChar, RClass};
use crate::ring::{enumerate_ideals, Ideal, IdealFilter};

fn sign(chi: &dyn IdealCharacter, a: &Ideal) -> Result<i64> {
    let v = chi.value(a)?;
    v.as_sign().map(i64::from).ok_or_else(|| Error::Domain(format!("chi({a}) = {v} is not quadratic")))
}

fn ratio(n: u64, d: u64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// `chi(a) / sqrt(N a)`.
fn weighted(chi: &dyn IdealCharacter, a: &Ideal) -> Result<SqrtRational> {
    let s = sign(chi, a)?;
    Ok(SqrtRational::inv_sqrt(a.norm()).scale(&BigRational::from_integer(s.into())))
}

/// `Sigma5(chi, a, b) = sum_{d | a} sum_{e | ab} mu(e) chi(d e) / sqrt(N(d e))`, exactly.
pub fn sigma5(chi: &dyn IdealCharacter, a: &Ideal, b: &Ideal) -> Result<SqrtRational> {
    let ab = a.mul(b);
    let es: Vec<Ideal> = ab.squarefree_divisors();
    let mut total = SqrtRational::zero();
    for d in a.divisors() {
        for e in &es {
            let mu = e.mobius() as i64;
            let t = weighted(chi, &d.mul(e))?.scale(&BigRational::from_integer(mu.into()));
            total += &t;
        }
    }
    Ok(total)
}

/// The prime-to-conductor part `a0` of `a`.
fn prime_to(a: &Ideal, f: &Ideal) -> Ideal {
    Ideal::from_factors(a.field(), a.factors().iter().filter(|(p, _)| f.exponent(p) == 0).cloned().collect())
}

/// `phi(a0) / N a0` for squarefree `a`.
pub fn sigma5_main1(chi: &dyn IdealCharacter, a: &Ideal) -> Result<SqrtRational> {
    if !a.is_squarefree() {
        return Err(Error::Domain(format!("{a} is not squarefree")));
    }
    let a0 = prime_to(a, chi.conductor());
    Ok(SqrtRational::rational(ratio(a0.phi(), a0.norm())))
}

/// `sum_{e | b} mu(e) chi(e) / sqrt(N e)`.
pub fn mobius_twist(chi: &dyn IdealCharacter, b: &Ideal) -> Result<SqrtRational> {
    let mut total = SqrtRational::zero();
    for e in b.squarefree_divisors() {
        total += &weighted(chi, &e)?.scale(&BigRational::from_integer((e.mobius() as i64).into()));
    }
    Ok(total)
}

/// `(phi(a0) / N a0) sum_{e | b} mu(e) chi(e) / sqrt(N e)` for squarefree `a` prime to `b`.
pub fn sigma5_main2(chi: &dyn IdealCharacter, a: &Ideal, b: &Ideal) -> Result<SqrtRational> {
    if !a.coprime(b) {
        return Err(Error::Domain(format!("{a} and {b} must be coprime")));
    }
    Ok(&sigma5_main1(chi, a)? * &mobius_twist(chi, b)?)
}

/// Squarefree ideals prime to `s` with norm at most `k`.
fn small_squarefree(field: crate::ring::FieldId, s: &Ideal, k: f64) -> Vec<Ideal> {
    enumerate_ideals(field, 0, k.floor().max(0.0) as u64, &IdealFilter::squarefree_coprime(s))
}

/// The bracket for one pair, with `chi = chi_b1 chi_b2`:
/// `sum*_{N a <= K} chi(a)/sqrt(N a) sum_{e | g} mu(e) chi(e)/sqrt(N e)
///  - sum*_{N a <= K, (a, g) = 1} chi(a)/sqrt(N a) phi(g)/N g`, over `a` prime to `s`.
pub fn bracket(chi: &dyn IdealCharacter, g: &Ideal, k: f64, s: &Ideal) -> Result<SqrtRational> {
    let twist = mobius_twist(chi, g)?;
    let mut first = SqrtRational::zero();
    let mut second = SqrtRational::zero();
    for a in small_squarefree(chi.field(), s, k) {
        let w = weighted(chi, &a)?;
        first += &w;
        if a.coprime(g) {
            second += &w;
        }
    }
    let phi = SqrtRational::rational(ratio(g.phi(), g.norm()));
    Ok(&(&first * &twist) - &(&second * &phi))
}

/// Coefficients of `chi(b)/sqrt(N b)` in the two inner sums after writing `b = h d e` with
/// `h` squarefree prime to `g` and `d, e | g`; the first sum keeps `N(h d) <= K`, the second `N h <= K`.
pub fn bracket_expansion(field: crate::ring::FieldId, g: &Ideal, k: f64, s: &Ideal) -> BTreeMap<Ideal, (i64, i64)> {
    let bound = (k * (g.norm() * g.norm()) as f64).floor().max(0.0) as u64;
    let divs = g.divisors();
    let mut out = BTreeMap::new();
    for b in enumerate_ideals(field, 0, bound, &IdealFilter::coprime(s)) {
        let (mut first, mut second) = (0i64, 0i64);
        for d in &divs {
            for e in &divs {
                let Some(h) = b.div(&d.mul(e)) else { continue };
                if !h.is_squarefree() || !h.coprime(g) {
                    continue;
                }
                let mu = e.mobius() as i64;
                if (h.norm() * d.norm()) as f64 <= k {
                    first += mu;
                }
                if h.norm() as f64 <= k {
                    second += mu;
                }
            }
        }
        if first != 0 || second != 0 {
            out.insert(b, (first, second));
        }
    }
    out
}

/// The bracket rebuilt from [`bracket_expansion`].
pub fn bracket_from_expansion(chi: &dyn IdealCharacter, g: &Ideal, k: f64, s: &Ideal) -> Result<SqrtRational> {
    let mut total = SqrtRational::zero();
    for (b, (first, second)) in bracket_expansion(chi.field(), g, k, s) {
        if first != second {
            total += &weighted(chi, &b)?.scale(&BigRational::from_integer((first - second).into()));
        }
    }
    Ok(total)
}

/// One pair `(b1, b2)` with `g b1, g b2` in the support of `lambda`.
#[derive(Clone, Debug)]
pub struct PairBracket {
    pub b1: Ideal,
    pub b2: Ideal,
    pub value: SqrtRational,
}

/// `sum_{B <= K} T - T'` and its bracket representation.
#[derive(Clone, Debug)]
pub struct MainTerms {
    pub t_sum: f64,
    pub tprime_sum: f64,
    /// `(alpha/A) sqrt(M) int W(x^2) dx sum lambda lambda_bar phi(s b1 b2)/N(s b1 b2) bracket`.
    pub from_brackets: f64,
    pub brackets: Vec<PairBracket>,
}

/// Dyadic windows `(B, min(2B, K)]` for `B = 1/2, 1, 2, ...` below `K`; together they cover `[1, K]`.
pub fn dyadic_blocks(k: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut b = 0.5;
    while b < k {
        out.push((b, (2.0 * b).min(k)));
        b *= 2.0;
    }
    out
}

struct Pair<'f> {
    b1: Ideal,
    b2: Ideal,
    weight: Complex64,
    chi: PairChar<'f>,
}

fn pairs<'f>(family: &'f HeckeFamily, g_ideal: &Ideal, g_class: RClass, lambda: &LambdaSeq) -> Result<Vec<Pair<'f>>> {
    let target = g_class ^ family.class_of(g_ideal)?;
    let mut reduced = Vec::new();
    for (b, v) in lambda.entries() {
        if let Some(q) = b.div(g_ideal) {
            if family.class_of(&q)? == target {
                reduced.push((q, *v));
            }
        }
    }
    let mut out = Vec::new();
    for (b1, l1) in &reduced {
        for (b2, l2) in &reduced {
            if b1.coprime(b2) {
                let chi = PairChar::same_class(family, b1, b2)?;
                out.push(Pair { b1: b1.clone(), b2: b2.clone(), weight: l1 * l2.conj(), chi });
            }
        }
    }
    Ok(out)
}

fn phi_ratio(a: &Ideal) -> f64 {
    a.phi() as f64 / a.norm() as f64
}

/// `T` and `T'` summed over the dyadic blocks, with `int_R W_dot(x^2) dx` replaced by
/// `int_R W(x^2) dx`, and the per-pair brackets.
#[allow(clippy::too_many_arguments)]
pub fn main_terms_t(
    m: f64,
    k: f64,
    g_ideal: &Ideal,
    g_class: RClass,
    lambda: &LambdaSeq,
    w: &TestFunction,
    family: &HeckeFamily,
) -> Result<MainTerms> {
    if k > m {
        return Err(Error::Domain(format!("need K <= M, got K={k}, M={m}")));
    }
    let f = family.field();
    let s = family.radical();
    let field = f.id;
    let (lo, hi) = w.support();
    let (integral, _) = adaptive(|x: f64| w.eval(x * x), lo.max(0.0).sqrt(), hi.sqrt(), 1e-14)?;
    let w_int = 2.0 * integral;
    let lead = f.alpha_k / f.a_k * w_int;
    let sg = s.mul(g_ideal);
    let es: Vec<Ideal> = sg.squarefree_divisors();
    let s_parts: Vec<Ideal> = s.squarefree_divisors();
    let pairs = pairs(family, g_ideal, g_class, lambda)?;
    let (mut t_sum, mut tprime_sum) = (0.0, 0.0);
    for (blo, bhi) in dyadic_blocks(k) {
        let window = enumerate_ideals(field, blo.floor() as u64, bhi.floor() as u64, &IdealFilter::squarefree_coprime(s));
        for p in &pairs {
            let pb = p.b1.mul(&p.b2);
            let mut t = 0.0;
            for e in &es {
                let mu_e = e.mobius() as f64 / (e.norm() as f64).sqrt();
                for a_odd in &window {
                    for a_s in &s_parts {
                        let a = a_odd.mul(a_s);
                        let chi = sign(&p.chi, &a.mul(e))? as f64;
                        t += mu_e * (m / a.norm() as f64).sqrt() * chi;
                    }
                }
            }
            let mut tp = 0.0;
            for a in window.iter().filter(|a| a.coprime(g_ideal)) {
                tp += (m / a.norm() as f64).sqrt() * sign(&p.chi, a)? as f64;
            }
            t_sum += (p.weight * lead * phi_ratio(&pb) * t).re;
            tprime_sum += (p.weight * lead * phi_ratio(&sg.mul(&pb)) * tp).re;
        }
    }
    let mut brackets = Vec::new();
    let mut from_brackets = 0.0;
    for p in &pairs {
        let value = bracket(&p.chi, g_ideal, k, s)?;
        let pb = s.mul(&p.b1).mul(&p.b2);
        from_brackets += (p.weight * lead * m.sqrt() * phi_ratio(&pb) * value.to_f64()).re;
        brackets.push(PairBracket { b1: p.b1.clone(), b2: p.b2.clone(), value });
    }
    Ok(MainTerms { t_sum, tprime_sum, from_brackets, brackets })
}

/// The parameters `Y_B`, `Z_B`, `L` of the two applications of the restricted Poisson formula.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExplicitParameters {
    pub m: f64,
    pub n: f64,
    pub eps1: f64,
}

impl ExplicitParameters {
    pub fn new(m: f64, n: f64) -> Self {
        ExplicitParameters { m, n, eps1: 0.1 }
    }

    fn power(&self) -> f64 {
        (self.m * self.n).powf(self.eps1)
    }

    /// `Y_{B,e}^{(1)}`.
    pub fn y1(&self, b: f64, norm_e: f64, norm_g: f64) -> f64 {
        self.n * norm_e.sqrt() / (norm_g * (2.0 * b * self.m).sqrt()) / self.power()
    }

    /// `Z_{B,e}^{(1)}`.
    pub fn z1(&self, b: f64, norm_e: f64, norm_g: f64) -> f64 {
        self.n * norm_e.sqrt() / (norm_g * (b * self.m).sqrt()) * self.power()
    }

    pub fn y2(&self, b: f64) -> f64 {
        (self.m / (2.0 * b)).sqrt() / self.power()
    }

    pub fn z2(&self, b: f64) -> f64 {
        (self.m / b).sqrt() * self.power()
    }

    /// `L^{(1)} = L^{(2)} = 2 (M N)^{eps1}`.
    pub fn l(&self) -> f64 {
        2.0 * self.power()
    }

    /// Whether `L >= 2 Z^2 B / X` holds for the second application (`X = M`).
    pub fn l_condition_second(&self, b: f64) -> bool {
        self.l() >= 2.0 * self.z2(b).powi(2) * b / self.m
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{FamilyOptions, HeckeChar};
    use crate::ring::FieldId;

    fn q() -> HeckeFamily {
        HeckeFamily::build(&FamilyOptions::new(FieldId::Q)).unwrap()
    }

    #[test]
    fn trivial_arguments() {
        let f = q();
        let chi = HeckeChar::new(&f, &Ideal::rational(17).unwrap()).unwrap();
        let one = Ideal::unit(FieldId::Q);
        assert_eq!(sigma5(&chi, &one, &one).unwrap(), SqrtRational::one());
    }

    #[test]
    fn double_sum_oracle() {
        let f = q();
        let chi = HeckeChar::new(&f, &Ideal::rational(17).unwrap()).unwrap();
        let (a, b) = (Ideal::rational(3).unwrap(), Ideal::rational(5).unwrap());
        let exact = sigma5(&chi, &a, &b).unwrap();
        let mut direct = 0.0;
        for d in [1i128, 3] {
            for e in [1i128, 3, 5, 15] {
                let mu = if e == 1 || e == 15 { 1.0 } else { -1.0 };
                let de = Ideal::rational(d * e).unwrap();
                let v = chi.value(&de).unwrap().as_sign().unwrap() as f64;
                direct += mu * v / ((d * e) as f64).sqrt();
            }
        }
        assert!((exact.to_f64() - direct).abs() < 1e-14);
        assert_eq!(exact, sigma5_main2(&chi, &a, &b).unwrap());
    }

    #[test]
    fn blocks_cover_up_to_k() {
        assert_eq!(dyadic_blocks(4.0), vec![(0.5, 1.0), (1.0, 2.0), (2.0, 4.0)]);
        assert_eq!(dyadic_blocks(3.0), vec![(0.5, 1.0), (1.0, 2.0), (2.0, 3.0)]);
        assert!(dyadic_blocks(0.5).is_empty());
    }

    #[test]
    fn printed_l_is_below_its_requirement() {
        let p = ExplicitParameters::new(64.0, 64.0);
        assert!(!p.l_condition_second(1.0));
        assert!(p.y2(1.0) < p.z2(1.0));
    }
}

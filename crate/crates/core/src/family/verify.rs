//! Exhaustive checks of the family axioms over small ideals.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;

use super::character::ray_kernel_ideals;
use super::{HeckeFamily, RClass};
use crate::error::{Error, Result};
use crate::ring::{enumerate_ideals, FieldId, Gaussian, Ideal, IdealFilter};

/// The table `C([a],[b]) = chi_a(b) chi_b(a)^{-1}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReciprocityTable {
    entries: BTreeMap<(RClass, RClass), i8>,
}

impl ReciprocityTable {
    pub fn get(&self, g: RClass, h: RClass) -> Option<i8> {
        self.entries.get(&(g, h)).copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = ((RClass, RClass), i8)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// `C(g,h) C(h,g) = 1` wherever both entries are present.
    pub fn is_symmetric(&self) -> bool {
        self.entries.iter().all(|(&(g, h), &v)| self.get(h, g).is_none_or(|w| v * w == 1))
    }

    /// CSV with columns `class_a,class_b,rep_a,rep_b,value`.
    pub fn to_csv(&self, family: &HeckeFamily) -> String {
        let mut s = String::from("class_a,class_b,rep_a,rep_b,value\n");
        for (&(g, h), v) in &self.entries {
            let ra = &family.representative(g).ideal;
            let rb = &family.representative(h).ideal;
            let _ = writeln!(s, "{g},{h},{},{},{v}", ra.gen(), rb.gen());
        }
        s
    }
}

/// One failed instance.
#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub axiom: &'static str,
    pub a: Ideal,
    pub b: Option<Ideal>,
    pub detail: String,
}

/// Outcome of [`verify_axioms`].
#[derive(Clone, Debug)]
pub struct AxiomReport {
    pub field: FieldId,
    pub norm_bound: u64,
    pub ideals: usize,
    pub pairs: usize,
    pub same_class_pairs: usize,
    pub recip_table: ReciprocityTable,
    pub axiom1_ok: bool,
    pub axiom2_ok: bool,
    pub axiom3_ok: bool,
    pub hecke_trivial_ok: bool,
    /// Over `Q`: whether `C` equals `(-1)^{(a-1)(b-1)/4}` on the classes.
    pub q_reciprocity_ok: Option<bool>,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn all_ok(&self) -> bool {
        self.axiom1_ok && self.axiom2_ok && self.axiom3_ok && self.hecke_trivial_ok && self.q_reciprocity_ok != Some(false)
    }

    /// `Err` naming the first witness when any flag is false.
    pub fn into_result(self) -> Result<AxiomReport> {
        if let Some(v) = self.violations.first() {
            let b = v.b.as_ref().map(|b| format!(", {b}")).unwrap_or_default();
            return Err(Error::AxiomViolation(format!("{} at ({}{b}): {}", v.axiom, v.a, v.detail)));
        }
        if !self.all_ok() {
            return Err(Error::AxiomViolation("reciprocity table disagrees with the quadratic reciprocity sign".into()));
        }
        Ok(self)
    }

    pub fn render(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "field: {}", self.field);
        let _ = writeln!(s, "norm_bound: {}", self.norm_bound);
        let _ = writeln!(s, "ideals: {}", self.ideals);
        let _ = writeln!(s, "coprime_pairs: {}", self.pairs);
        let _ = writeln!(s, "same_class_pairs: {}", self.same_class_pairs);
        let _ = writeln!(s, "axiom1_ok: {}", self.axiom1_ok);
        let _ = writeln!(s, "axiom2_ok: {}", self.axiom2_ok);
        let _ = writeln!(s, "axiom3_ok: {}", self.axiom3_ok);
        let _ = writeln!(s, "hecke_trivial_ok: {}", self.hecke_trivial_ok);
        if let Some(q) = self.q_reciprocity_ok {
            let _ = writeln!(s, "q_reciprocity_ok: {q}");
        }
        let _ = writeln!(s, "violations: {}", self.violations.len());
        for v in self.violations.iter().take(20) {
            let b = v.b.as_ref().map(|b| b.to_string()).unwrap_or_else(|| "-".into());
            let _ = writeln!(s, "  {} a={} b={} {}", v.axiom, v.a, b, v.detail);
        }
        s
    }
}

const HECKE_SAMPLES: usize = 50;

#[derive(Default)]
struct PairOutcome {
    key: (RClass, RClass),
    value: Option<i8>,
    violations: Vec<Violation>,
}

fn violation(axiom: &'static str, a: &Ideal, b: Option<&Ideal>, detail: String) -> Violation {
    Violation { axiom, a: a.clone(), b: b.cloned(), detail }
}

/// `chi_a chi_b ((x))` as a sign.
fn product_sign(fam: &HeckeFamily, a: &Ideal, b: &Ideal, x: &Ideal) -> Result<Option<i8>> {
    let u = fam.chi_eval(a, x)?.as_sign();
    let v = fam.chi_eval(b, x)?.as_sign();
    Ok(u.zip(v).map(|(u, v)| u * v))
}

fn check_pair(fam: &HeckeFamily, a: &Ideal, b: &Ideal) -> Result<PairOutcome> {
    let mut out = PairOutcome { key: (fam.class_of(a)?, fam.class_of(b)?), ..Default::default() };
    let ab = fam.chi_eval(a, b)?;
    let ba = fam.chi_eval(b, a)?;
    let (Some(u), Some(v)) = (ab.as_sign(), ba.as_sign()) else {
        out.violations.push(violation("axiom1", a, Some(b), format!("values {ab}, {ba} outside mu_2")));
        return Ok(out);
    };
    if u == 0 || v == 0 {
        out.violations.push(violation("axiom1", a, Some(b), "zero value on a coprime pair".into()));
        return Ok(out);
    }
    out.value = Some(u * v);
    if out.key.0 != out.key.1 {
        return Ok(out);
    }
    let prod = a.mul(b);
    let m = fam.modulus().mul(&prod);
    for x in ray_kernel_ideals(&prod, &m)? {
        if product_sign(fam, a, b, &x)? != Some(1) {
            out.violations.push(violation("axiom3", a, Some(b), format!("chi_a chi_b({x}) != 1")));
            return Ok(out);
        }
    }
    for p in prod.primes() {
        let f = prod.div(&p.ideal()).expect("prime divides its product");
        let mut hit = false;
        for x in ray_kernel_ideals(&f, &m)? {
            if product_sign(fam, a, b, &x)? == Some(-1) {
                hit = true;
                break;
            }
        }
        if !hit {
            out.violations.push(violation("axiom3", a, Some(b), format!("chi_a chi_b is defined modulo {f}")));
            return Ok(out);
        }
    }
    Ok(out)
}

fn hecke_samples(field: FieldId, m: &Ideal) -> Result<Vec<Ideal>> {
    let g = m.gen();
    let mut out = Vec::new();
    match field {
        FieldId::Q => {
            for t in 1..=(HECKE_SAMPLES as i128 / 2) {
                out.push(Ideal::new(field, Gaussian::ONE + g * Gaussian::int(t))?);
                out.push(Ideal::new(field, Gaussian::ONE - g * Gaussian::int(t))?);
            }
        }
        FieldId::Qi => {
            let mut ts: Vec<Gaussian> =
                (-4..=4i128).flat_map(|x| (-4..=4i128).map(move |y| Gaussian::new(x, y))).filter(|t| !t.is_zero()).collect();
            ts.sort_by_key(|z| (z.norm(), z.re, z.im));
            for t in ts.into_iter().take(HECKE_SAMPLES) {
                out.push(Ideal::new(field, Gaussian::ONE + g * t)?);
            }
        }
    }
    Ok(out)
}

fn check_hecke_trivial(fam: &HeckeFamily, a: &Ideal) -> Result<Vec<Violation>> {
    let m = fam.modulus().mul(a);
    for x in hecke_samples(fam.field_id(), &m)? {
        let v = fam.chi_eval(a, &x)?;
        if !v.is_one() {
            return Ok(vec![violation("hecke_trivial", a, Some(&x), format!("value {v} at x = 1 mod {m}"))]);
        }
    }
    Ok(Vec::new())
}

/// Checks the three family axioms and ray triviality on all coprime squarefree pairs in `I(c)`
/// of norm at most `norm_bound`.
pub fn verify_axioms(family: &HeckeFamily, norm_bound: u64) -> Result<AxiomReport> {
    let field = family.field_id();
    let ideals = enumerate_ideals(field, 0, norm_bound, &IdealFilter::squarefree_coprime(family.modulus()));
    let pairs: Vec<(usize, usize)> = (0..ideals.len())
        .flat_map(|i| (i + 1..ideals.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| ideals[i].coprime(&ideals[j]))
        .collect();

    let outcomes: Vec<PairOutcome> = pairs
        .par_iter()
        .map(|&(i, j)| check_pair(family, &ideals[i], &ideals[j]))
        .collect::<Result<_>>()?;
    let hecke: Vec<Vec<Violation>> = ideals.par_iter().map(|a| check_hecke_trivial(family, a)).collect::<Result<_>>()?;

    let mut table = BTreeMap::new();
    let mut violations = Vec::new();
    let mut same_class = 0;
    for ((i, j), o) in pairs.iter().zip(outcomes) {
        if o.key.0 == o.key.1 {
            same_class += 1;
        }
        violations.extend(o.violations);
        let Some(v) = o.value else { continue };
        for (key, val) in [(o.key, v), ((o.key.1, o.key.0), v)] {
            match table.get(&key) {
                None => {
                    table.insert(key, val);
                }
                Some(&w) if w != val => violations.push(violation(
                    "axiom2",
                    &ideals[*i],
                    Some(&ideals[*j]),
                    format!("C{key:?} takes both {w} and {val}"),
                )),
                _ => {}
            }
        }
    }
    violations.extend(hecke.into_iter().flatten());

    let flag = |name: &str| !violations.iter().any(|v| v.axiom == name);
    let recip_table = ReciprocityTable { entries: table };
    let q_reciprocity_ok = (field == FieldId::Q).then(|| {
        recip_table.entries().all(|((g, h), v)| {
            let a = family.representative(g).ideal.gen().re;
            let b = family.representative(h).ideal.gen().re;
            v == if ((a - 1) * (b - 1) / 4) % 2 == 0 { 1 } else { -1 }
        })
    });
    Ok(AxiomReport {
        field,
        norm_bound,
        ideals: ideals.len(),
        pairs: pairs.len(),
        same_class_pairs: same_class,
        axiom1_ok: flag("axiom1"),
        axiom2_ok: flag("axiom2"),
        axiom3_ok: flag("axiom3"),
        hecke_trivial_ok: flag("hecke_trivial"),
        q_reciprocity_ok,
        recip_table,
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyOptions;

    #[test]
    fn q_small_bound() {
        let fam = HeckeFamily::build(&FamilyOptions::new(FieldId::Q)).unwrap();
        let r = verify_axioms(&fam, 60).unwrap();
        assert!(r.all_ok(), "{}", r.render());
        assert_eq!(r.recip_table.len(), 16);
        assert!(r.recip_table.is_symmetric());
        assert_eq!(r.q_reciprocity_ok, Some(true));
    }

    #[test]
    fn qi_small_bound() {
        let fam = HeckeFamily::build(&FamilyOptions::new(FieldId::Qi)).unwrap();
        let r = verify_axioms(&fam, 60).unwrap();
        assert!(r.all_ok(), "{}", r.render());
        assert!(r.same_class_pairs > 0);
    }
}

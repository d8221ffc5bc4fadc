//! The quadratic Hecke family `{chi_a}` attached to a modulus `c`.

mod cache;
mod character;
pub mod modulus;
mod ray_class;
mod verify;

use std::collections::HashMap;
use std::sync::RwLock;

pub use cache::{cache_header, load_cache, write_cache};
pub use character::{conductor_of, HeckeChar, IdealCharacter, PairChar, PrincipalChar};
pub use modulus::build_modulus;
pub use ray_class::{ray_class_group, RClass, RayClassTable};
pub use verify::{verify_axioms, AxiomReport, ReciprocityTable};

use crate::error::{domain, Error, Result};
use crate::ring::{enumerate_ideals, FieldElem, FieldId, FieldSpec, Gaussian, Ideal, IdealFilter};
use crate::symbol::{symbol_of_quotient, RootOfUnity};

/// Build options for [`HeckeFamily`].
#[derive(Clone, Debug)]
pub struct FamilyOptions {
    pub field: FieldId,
    /// Replaces the minimal modulus; must be a multiple of it supported over 2.
    pub modulus: Option<Ideal>,
    /// Rotates the choice among equal-norm candidates when picking representatives.
    pub choices_seed: u64,
    /// Norm bound for the representative and decomposition searches.
    pub search_bound: u64,
}

impl FamilyOptions {
    pub fn new(field: FieldId) -> Self {
        FamilyOptions { field, modulus: None, choices_seed: 0, search_bound: 4000 }
    }
}

/// A representative `E` of a class of `R_c` with its generator `m_E`.
#[derive(Clone, Debug, PartialEq)]
pub struct Representative {
    pub ideal: Ideal,
    pub m: Gaussian,
    pub class: RClass,
}

/// `a = (x) E g^2` with `x = 1 mod c` (and `x > 0` over `Q`).
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub x: FieldElem,
    pub e: Ideal,
    pub g: Ideal,
    /// The unit `eps` with `x = eps gen(a) / (m_E gen(g)^2)`.
    pub eps: Gaussian,
    /// `m_a = x m_E`, stored in lowest form `eps gen(a) / gen(g)^2`.
    pub m_a: FieldElem,
}

/// The family: modulus, ray class data, representatives and the evaluator `chi_a(b)`.
#[derive(Debug)]
pub struct HeckeFamily {
    field: FieldSpec,
    n: u32,
    modulus: Ideal,
    radical: Ideal,
    ray: RayClassTable,
    reps: Vec<Representative>,
    basis: Vec<Representative>,
    choices_seed: u64,
    search_bound: u64,
    candidates: Vec<Ideal>,
    decompositions: RwLock<HashMap<Ideal, Vec<Decomposition>>>,
    memo: RwLock<HashMap<(Gaussian, Gaussian), i8>>,
}

/// How many admissible decompositions are cached per ideal.
const CACHED_DECOMPOSITIONS: usize = 4;

impl HeckeFamily {
    pub fn build(opts: &FamilyOptions) -> Result<HeckeFamily> {
        let field = FieldSpec::new(opts.field);
        let minimal = build_modulus(&field);
        let modulus = match &opts.modulus {
            None => minimal,
            Some(c) => {
                if c.field() != opts.field {
                    return Err(Error::Configuration(format!("modulus {c} is not an ideal of {}", opts.field)));
                }
                if !minimal.divides(c) || c.primes().any(|p| p.p != 2) {
                    return Err(Error::Configuration(format!(
                        "modulus {c} must be a multiple of {minimal} supported over 2"
                    )));
                }
                c.clone()
            }
        };
        let radical = modulus.radical();
        let ray = ray_class_group(&field, &modulus)?;
        let candidates = enumerate_ideals(opts.field, 0, opts.search_bound, &IdealFilter::coprime(&modulus));
        let basis = choose_basis(&ray, &candidates, opts.choices_seed)?;
        let reps = all_products(&field, &basis);
        let fam = HeckeFamily {
            field,
            n: 2,
            modulus,
            radical,
            ray,
            reps,
            basis,
            choices_seed: opts.choices_seed,
            search_bound: opts.search_bound,
            candidates,
            decompositions: RwLock::new(HashMap::new()),
            memo: RwLock::new(HashMap::new()),
        };
        fam.check_transversal()?;
        Ok(fam)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_id(&self) -> FieldId {
        self.field.id
    }

    /// Order of the symbols (always 2 here).
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn radical(&self) -> &Ideal {
        &self.radical
    }

    pub fn ray_class(&self) -> &RayClassTable {
        &self.ray
    }

    /// `|G| = |R_c|`.
    pub fn group_order(&self) -> u64 {
        self.ray.order()
    }

    /// The transversal `E`, indexed by class.
    pub fn representatives(&self) -> &[Representative] {
        &self.reps
    }

    /// The basis `E_0`.
    pub fn basis(&self) -> &[Representative] {
        &self.basis
    }

    pub fn choices_seed(&self) -> u64 {
        self.choices_seed
    }

    pub fn class_of(&self, a: &Ideal) -> Result<RClass> {
        self.ray.class_of(a)
    }

    pub fn representative(&self, class: RClass) -> &Representative {
        &self.reps[class as usize]
    }

    fn check_transversal(&self) -> Result<()> {
        for (k, r) in self.reps.iter().enumerate() {
            if r.class != k as RClass || self.ray.class_of(&r.ideal)? != r.class || !r.ideal.coprime(&self.modulus) {
                return Err(Error::Configuration(format!("representative {} is not a transversal element", r.ideal)));
            }
        }
        if self.reps[0].ideal.norm() != 1 || self.reps[0].m != Gaussian::ONE {
            return Err(Error::Configuration("the trivial class must be represented by O with m = 1".into()));
        }
        Ok(())
    }

    fn require_coprime_to_c(&self, a: &Ideal) -> Result<()> {
        if a.field() != self.field.id {
            return domain(format!("{a} is not an ideal of {}", self.field.id));
        }
        if !a.coprime(&self.modulus) {
            return domain(format!("{a} is not coprime to {}", self.modulus));
        }
        Ok(())
    }

    /// Tests whether `g` gives an admissible decomposition of `a` with respect to `e`.
    fn try_decompose(&self, a: &Ideal, rep: &Representative, g: &Ideal) -> Result<Option<Decomposition>> {
        let gg = g.gen() * g.gen();
        let ring = crate::ring::ResidueRing::new(&self.modulus);
        // eps gen(a) = m_E gen(g)^2 mod c
        let target = rep.m * gg;
        let eps = if self.modulus.is_unit() {
            Some(Gaussian::ONE)
        } else {
            let allowed: Vec<Gaussian> = match self.field.id {
                FieldId::Q => vec![Gaussian::ONE],
                FieldId::Qi => self.field.units.clone(),
            };
            allowed.into_iter().find(|u| ring.equal(*u * a.gen(), target))
        };
        let Some(eps) = eps else { return Ok(None) };
        let x = FieldElem::new(eps * a.gen(), target)?;
        let m_a = FieldElem::new(eps * a.gen(), gg)?;
        Ok(Some(Decomposition { x, e: rep.ideal.clone(), g: g.clone(), eps, m_a }))
    }

    fn search(&self, a: &Ideal, avoid: Option<&Ideal>, want: usize) -> Result<Vec<Decomposition>> {
        self.require_coprime_to_c(a)?;
        let rep = self.representative(self.class_of(a)?).clone();
        let mut found = Vec::new();
        for g in &self.candidates {
            if avoid.is_some_and(|b| !b.coprime(g)) {
                continue;
            }
            if let Some(d) = self.try_decompose(a, &rep, g)? {
                found.push(d);
                if found.len() == want {
                    break;
                }
            }
        }
        if found.is_empty() {
            return Err(Error::Configuration(format!(
                "no admissible g for {a} below norm {}; raise the search bound",
                self.search_bound
            )));
        }
        Ok(found)
    }

    /// `a = (x) E g^2` with `g` the least admissible ideal coprime to `avoid`.
    pub fn decompose(&self, a: &Ideal, avoid: &Ideal) -> Result<Decomposition> {
        self.decompose_nth(a, avoid, 0)
    }

    /// As [`HeckeFamily::decompose`], skipping the first `skip` admissible choices of `g`.
    pub fn decompose_nth(&self, a: &Ideal, avoid: &Ideal, skip: usize) -> Result<Decomposition> {
        let mut v = self.search(a, Some(avoid), skip + 1)?;
        if v.len() <= skip {
            return Err(Error::Configuration(format!("fewer than {} decompositions of {a}", skip + 1)));
        }
        Ok(v.swap_remove(skip))
    }

    fn cached_decomposition(&self, a: &Ideal, avoid: &Ideal) -> Result<Decomposition> {
        if let Some(list) = self.decompositions.read().unwrap().get(a) {
            if let Some(d) = list.iter().find(|d| d.g.coprime(avoid)) {
                return Ok(d.clone());
            }
            return self.decompose(a, avoid);
        }
        let list = self.search(a, None, CACHED_DECOMPOSITIONS)?;
        let hit = list.iter().find(|d| d.g.coprime(avoid)).cloned();
        self.decompositions.write().unwrap().entry(a.clone()).or_insert(list);
        match hit {
            Some(d) => Ok(d),
            None => self.decompose(a, avoid),
        }
    }

    /// `chi_a(b) = (m_a / b)` for `a, b` coprime to `c`; zero when `a` and `b` share a prime.
    pub fn chi_eval(&self, a: &Ideal, b: &Ideal) -> Result<RootOfUnity> {
        if let Some(v) = self.memo.read().unwrap().get(&(a.gen(), b.gen())) {
            if a.field() == self.field.id && b.field() == self.field.id {
                return Ok(RootOfUnity::from_sign(*v));
            }
        }
        let v = self.evaluate(a, b, true)?;
        if let Some(s) = v.as_sign() {
            self.memo.write().unwrap().insert((a.gen(), b.gen()), s);
        }
        Ok(v)
    }

    /// [`HeckeFamily::chi_eval`] without the value memo or the decomposition cache.
    pub fn chi_eval_uncached(&self, a: &Ideal, b: &Ideal) -> Result<RootOfUnity> {
        self.evaluate(a, b, false)
    }

    /// Evaluates through the `skip`-th admissible decomposition; used to test well-definedness.
    pub fn chi_eval_with_choice(&self, a: &Ideal, b: &Ideal, skip: usize) -> Result<RootOfUnity> {
        self.require_coprime_to_c(a)?;
        self.require_coprime_to_c(b)?;
        if !a.coprime(b) {
            return Ok(RootOfUnity::Zero);
        }
        let d = self.decompose_nth(a, b, skip)?;
        symbol_of_quotient(&d.m_a, b, self.n)
    }

    fn evaluate(&self, a: &Ideal, b: &Ideal, cached: bool) -> Result<RootOfUnity> {
        self.require_coprime_to_c(a)?;
        self.require_coprime_to_c(b)?;
        if !a.coprime(b) {
            return Ok(RootOfUnity::Zero);
        }
        let d = if cached { self.cached_decomposition(a, b)? } else { self.decompose(a, b)? };
        symbol_of_quotient(&d.m_a, b, self.n)
    }

    /// `chi_a(b)` as `-1, 0, 1`.
    pub fn chi_sign(&self, a: &Ideal, b: &Ideal) -> Result<i8> {
        let v = self.chi_eval(a, b)?;
        v.as_sign().ok_or_else(|| Error::AxiomViolation(format!("chi_{a}({b}) = {v} is not real")))
    }

    /// Snapshot of the value memo, sorted.
    pub fn memo_entries(&self) -> Vec<((Gaussian, Gaussian), i8)> {
        let mut v: Vec<_> = self.memo.read().unwrap().iter().map(|(k, v)| (*k, *v)).collect();
        v.sort();
        v
    }

    pub(crate) fn memo_insert(&self, a: Gaussian, b: Gaussian, v: i8) {
        self.memo.write().unwrap().insert((a, b), v);
    }

    pub fn clear_memo(&self) {
        self.memo.write().unwrap().clear();
    }
}

/// Greedy `F_2`-basis of `R_c` from ideals in `(norm, generator)` order.
fn choose_basis(ray: &RayClassTable, candidates: &[Ideal], seed: u64) -> Result<Vec<Representative>> {
    let target = ray.order();
    let mut span: Vec<RClass> = vec![0];
    let mut basis = Vec::new();
    let mut i = 0;
    while (span.len() as u64) < target {
        if i >= candidates.len() {
            return Err(Error::Configuration(format!(
                "representative search exhausted {} candidates; raise the search bound",
                candidates.len()
            )));
        }
        // equal-norm shell, rotated by the seed
        let norm = candidates[i].norm();
        let j = candidates[i..].iter().position(|a| a.norm() != norm).map_or(candidates.len(), |k| i + k);
        let mut shell: Vec<&Ideal> = candidates[i..j].iter().collect();
        let len = shell.len();
        shell.rotate_left((seed % len as u64) as usize);
        for a in shell {
            let cl = ray.class_of(a)?;
            if !span.contains(&cl) {
                let extra: Vec<RClass> = span.iter().map(|s| s ^ cl).collect();
                span.extend(extra);
                basis.push(Representative { ideal: a.clone(), m: a.gen(), class: cl });
            }
            if span.len() as u64 == target {
                break;
            }
        }
        i = j;
    }
    Ok(basis)
}

/// All products of basis elements, indexed by their class bitmask.
fn all_products(field: &FieldSpec, basis: &[Representative]) -> Vec<Representative> {
    let count = 1usize << basis.len();
    let mut out: Vec<Option<Representative>> = vec![None; count];
    for mask in 0..count {
        let mut ideal = Ideal::unit(field.id);
        let mut m = Gaussian::ONE;
        let mut class: RClass = 0;
        for (t, b) in basis.iter().enumerate() {
            if mask >> t & 1 == 1 {
                ideal = ideal.mul(&b.ideal);
                m = m * b.m;
                class ^= b.class;
            }
        }
        out[class as usize] = Some(Representative { ideal, m, class });
    }
    out.into_iter().map(|r| r.expect("basis is independent")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(field: FieldId) -> HeckeFamily {
        HeckeFamily::build(&FamilyOptions::new(field)).unwrap()
    }

    #[test]
    fn q_representatives() {
        let f = fam(FieldId::Q);
        let gens: Vec<i128> = f.representatives().iter().map(|r| r.ideal.gen().re).collect();
        let mut sorted = gens.clone();
        sorted.sort();
        assert_eq!(sorted, vec![1, 3, 5, 15]);
        assert_eq!(f.representative(0).m, Gaussian::ONE);
    }

    #[test]
    fn decompose_examples() {
        let f = fam(FieldId::Q);
        let one = Ideal::unit(FieldId::Q);
        let d = f.decompose(&Ideal::rational(17).unwrap(), &one).unwrap();
        assert_eq!(d.x.as_integral(), Some(Gaussian::int(17)));
        assert!(d.e.is_unit() && d.g.is_unit());
        for r in f.representatives() {
            let d = f.decompose(&r.ideal, &one).unwrap();
            assert_eq!(d.x.as_integral(), Some(Gaussian::ONE));
            assert_eq!(d.e, r.ideal);
        }
    }

    #[test]
    fn decomposition_recomposes() {
        for field in [FieldId::Q, FieldId::Qi] {
            let f = fam(field);
            let ring = crate::ring::ResidueRing::new(f.modulus());
            let sq = enumerate_ideals(field, 0, 500, &IdealFilter::squarefree_coprime(f.modulus()));
            for a in &sq {
                let avoid = &sq[(a.norm() as usize * 7) % sq.len()];
                if !avoid.coprime(a) {
                    continue;
                }
                let d = f.decompose(a, avoid).unwrap();
                // x * m_E * gen(g)^2 = eps gen(a)
                let rep = f.representative(f.class_of(a).unwrap());
                let lhs = d.x.mul(&FieldElem::from_int(rep.m * d.g.gen() * d.g.gen()));
                assert!(lhs.same_value(&FieldElem::from_int(d.eps * a.gen())));
                assert!(d.m_a.same_value(&d.x.mul(&FieldElem::from_int(rep.m))));
                assert!(d.g.coprime(avoid));
                // x = 1 mod c: num = den mod c
                assert!(ring.equal(d.x.num, d.x.den));
                if field == FieldId::Q {
                    assert!(d.x.num.re * d.x.den.re > 0);
                }
            }
        }
    }

    #[test]
    fn chi_examples() {
        let f = fam(FieldId::Q);
        let v = f.chi_eval(&Ideal::rational(17).unwrap(), &Ideal::rational(3).unwrap()).unwrap();
        assert_eq!(v.as_sign(), Some(-1));
        for b in [3, 5, 7, 11, 105] {
            let v = f.chi_eval(&Ideal::unit(FieldId::Q), &Ideal::rational(b).unwrap()).unwrap();
            assert!(v.is_one());
        }
        assert!(f.chi_eval(&Ideal::rational(3).unwrap(), &Ideal::rational(2).unwrap()).is_err());
        assert!(f.chi_eval(&Ideal::rational(3).unwrap(), &Ideal::rational(15).unwrap()).unwrap().is_zero());
    }

    #[test]
    fn modulus_override_is_validated() {
        let mut o = FamilyOptions::new(FieldId::Q);
        o.modulus = Some(Ideal::rational(4).unwrap());
        assert!(HeckeFamily::build(&o).is_err());
        o.modulus = Some(Ideal::rational(24).unwrap());
        assert!(HeckeFamily::build(&o).is_err());
        o.modulus = Some(Ideal::rational(16).unwrap());
        assert!(HeckeFamily::build(&o).is_ok());
    }
}

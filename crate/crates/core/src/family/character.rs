//! Characters on ideals: the family characters `chi_a`, their primitive versions and conductors.

use super::HeckeFamily;
use crate::error::{Error, Result};
use crate::ring::{FieldId, Gaussian, Ideal, ResidueRing};
use crate::symbol::RootOfUnity;

/// A character on integral ideals, vanishing off ideals coprime to its conductor.
pub trait IdealCharacter: Sync {
    fn field(&self) -> FieldId;
    fn conductor(&self) -> &Ideal;
    fn value(&self, a: &Ideal) -> Result<RootOfUnity>;
}

/// The principal character of conductor `(1)`.
#[derive(Clone, Debug)]
pub struct PrincipalChar {
    unit: Ideal,
}

impl PrincipalChar {
    pub fn new(field: FieldId) -> Self {
        PrincipalChar { unit: Ideal::unit(field) }
    }
}

impl IdealCharacter for PrincipalChar {
    fn field(&self) -> FieldId {
        self.unit.field()
    }
    fn conductor(&self) -> &Ideal {
        &self.unit
    }
    fn value(&self, _a: &Ideal) -> Result<RootOfUnity> {
        Ok(RootOfUnity::ONE)
    }
}

/// The family character `chi_a` (index `a`), defined mod `c a` and extended to its conductor.
#[derive(Clone, Debug)]
pub struct HeckeChar<'f> {
    family: &'f HeckeFamily,
    index: Ideal,
    modulus: Ideal,
    conductor: Ideal,
}

impl<'f> HeckeChar<'f> {
    /// `chi_a` with its conductor found by [`conductor_search`].
    pub fn new(family: &'f HeckeFamily, index: &Ideal) -> Result<Self> {
        let conductor = conductor_search(family, index)?;
        Ok(Self::with_conductor(family, index, conductor))
    }

    /// `chi_a` with a conductor supplied by the caller (for example `b1 b2` for a same-class pair).
    pub fn with_conductor(family: &'f HeckeFamily, index: &Ideal, conductor: Ideal) -> Self {
        HeckeChar { family, index: index.clone(), modulus: family.modulus().mul(index), conductor }
    }

    pub fn index(&self) -> &Ideal {
        &self.index
    }

    /// `c a`.
    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    pub fn family(&self) -> &'f HeckeFamily {
        self.family
    }

    /// Value of the imprimitive character mod `c a`.
    pub fn value_imprimitive(&self, b: &Ideal) -> Result<RootOfUnity> {
        if !b.coprime(&self.modulus) {
            return Ok(RootOfUnity::Zero);
        }
        self.family.chi_eval(&self.index, b)
    }
}

/// An ideal with generator congruent to `gen(b)` modulo `conductor` and coprime to `modulus`.
fn lift(b: &Ideal, conductor: &Ideal, modulus: &Ideal) -> Result<Ideal> {
    let f = conductor.gen();
    let field = b.field();
    for t in lift_offsets(field) {
        let w = b.gen() + f * t;
        if w.is_zero() || (field == FieldId::Q && w.re < 0) {
            continue;
        }
        if modulus.coprime_to_element(&w) {
            return Ideal::new(field, w);
        }
    }
    Err(Error::Configuration(format!("no lift of {b} modulo {conductor} coprime to {modulus}")))
}

fn lift_offsets(field: FieldId) -> Vec<Gaussian> {
    match field {
        FieldId::Q => (0..400).map(Gaussian::int).collect(),
        FieldId::Qi => {
            let mut v: Vec<Gaussian> = (-12..=12)
                .flat_map(|x| (-12..=12).map(move |y| Gaussian::new(x, y)))
                .collect();
            v.sort_by_key(|z| (z.norm(), z.re, z.im));
            v
        }
    }
}

impl IdealCharacter for HeckeChar<'_> {
    fn field(&self) -> FieldId {
        self.index.field()
    }

    fn conductor(&self) -> &Ideal {
        &self.conductor
    }

    /// The primitive character: `chi(b)` for `b` prime to the conductor, computed through a
    /// lift coprime to `c a` when `b` shares a prime with `c a`.
    fn value(&self, b: &Ideal) -> Result<RootOfUnity> {
        if !b.coprime(&self.conductor) {
            return Ok(RootOfUnity::Zero);
        }
        if b.coprime(&self.modulus) {
            return self.family.chi_eval(&self.index, b);
        }
        let w = lift(b, &self.conductor, &self.modulus)?;
        self.family.chi_eval(&self.index, &w)
    }
}

/// The product `chi_b1 chi_b2` of two family characters, primitive modulo `conductor`.
#[derive(Clone, Debug)]
pub struct PairChar<'f> {
    family: &'f HeckeFamily,
    b1: Ideal,
    b2: Ideal,
    modulus: Ideal,
    conductor: Ideal,
}

impl<'f> PairChar<'f> {
    /// `chi_b1 chi_b2` for a coprime squarefree same-class pair, whose conductor is `b1 b2`.
    pub fn same_class(family: &'f HeckeFamily, b1: &Ideal, b2: &Ideal) -> Result<Self> {
        if !b1.coprime(b2) || family.class_of(b1)? != family.class_of(b2)? {
            return Err(Error::Domain(format!("{b1}, {b2} must be coprime and in the same class")));
        }
        Ok(Self::with_conductor(family, b1, b2, b1.mul(b2)))
    }

    pub fn with_conductor(family: &'f HeckeFamily, b1: &Ideal, b2: &Ideal, conductor: Ideal) -> Self {
        let modulus = family.modulus().mul(b1).mul(b2);
        PairChar { family, b1: b1.clone(), b2: b2.clone(), modulus, conductor }
    }

    pub fn indices(&self) -> (&Ideal, &Ideal) {
        (&self.b1, &self.b2)
    }

    fn product(&self, a: &Ideal) -> Result<RootOfUnity> {
        Ok(self.family.chi_eval(&self.b1, a)?.mul(self.family.chi_eval(&self.b2, a)?))
    }
}

impl IdealCharacter for PairChar<'_> {
    fn field(&self) -> FieldId {
        self.b1.field()
    }

    fn conductor(&self) -> &Ideal {
        &self.conductor
    }

    fn value(&self, a: &Ideal) -> Result<RootOfUnity> {
        if !a.coprime(&self.conductor) {
            return Ok(RootOfUnity::Zero);
        }
        if a.coprime(&self.modulus) {
            return self.product(a);
        }
        self.product(&lift(a, &self.conductor, &self.modulus)?)
    }
}

/// Full residue systems are used for kernels up to this size; larger ones are sampled.
const FULL_KERNEL: u64 = 4096;
const KERNEL_SAMPLES: u64 = 50;

/// Elements `x = 1 mod f`, one per class of `O / (m/f)`, each paired with its negative class
/// over `Q`; only ideals coprime to `m` are returned.
pub(crate) fn ray_kernel_ideals(f: &Ideal, m: &Ideal) -> Result<Vec<Ideal>> {
    let q = m.div(f).ok_or_else(|| Error::Domain(format!("{f} does not divide {m}")))?;
    let field = m.field();
    let ring = ResidueRing::new(&q);
    let size = ring.size();
    let idx: Vec<u64> = if size <= FULL_KERNEL {
        (0..size).collect()
    } else {
        (0..KERNEL_SAMPLES).map(|k| ((k as u128 * 0x9E37_79B9_7F4A_7C15u128) % size as u128) as u64).collect()
    };
    let mg = m.gen();
    let mut out = Vec::new();
    for i in idx {
        let x = Gaussian::ONE + f.gen() * ring.element(i);
        if !m.coprime_to_element(&x) {
            continue;
        }
        out.push(Ideal::new(field, x)?);
        if field == FieldId::Q {
            // a negative element in the same class mod m
            let neg = x - mg * Gaussian::int(x.re / mg.re + 1);
            out.push(Ideal::new(field, neg)?);
        }
    }
    Ok(out)
}

fn trivial_on_ray(family: &HeckeFamily, index: &Ideal, f: &Ideal, m: &Ideal) -> Result<bool> {
    for x in ray_kernel_ideals(f, m)? {
        if !family.chi_eval(index, &x)?.is_one() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The least-norm divisor `f` of `c a` such that `chi_a` is trivial on `x = 1 mod f`.
pub fn conductor_search(family: &HeckeFamily, index: &Ideal) -> Result<Ideal> {
    let m = family.modulus().mul(index);
    for f in m.divisors() {
        if trivial_on_ray(family, index, &f, &m)? {
            return Ok(f);
        }
    }
    Ok(m)
}

/// Conductor of `chi_a` for squarefree `a` prime to `c`, checked to have the shape `c_a a`
/// with `c_a | c`.
pub fn conductor_of(family: &HeckeFamily, a: &Ideal) -> Result<Ideal> {
    if !a.is_squarefree() || !a.coprime(family.modulus()) {
        return Err(Error::Domain(format!("{a} must be squarefree and prime to {}", family.modulus())));
    }
    let f = conductor_search(family, a)?;
    let ok = f.div(a).is_some_and(|ca| ca.divides(family.modulus()));
    if !ok {
        return Err(Error::Shape(format!("conductor {f} of chi_{a} is not of the form c_a {a}")));
    }
    Ok(f)
}

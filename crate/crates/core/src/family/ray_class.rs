//! The (narrow) ray class group `H_c` and its 2-quotient `R_c`.

use crate::error::{domain, Result};
use crate::ring::smith::Quotient;
use crate::ring::{residue_ring_units, FieldId, FieldSpec, Gaussian, Ideal, UnitGroup};

/// An element of `R_c = H_c / H_c^2`, as a bit vector over `F_2`.
pub type RClass = u32;

/// `H_c` as a quotient of `(O/c)^*` (times a sign over `Q`) by the global units.
#[derive(Clone, Debug)]
pub struct RayClassTable {
    field: FieldSpec,
    modulus: Ideal,
    units: Option<UnitGroup>,
    quotient: Quotient,
    /// Positions in the Smith basis with nontrivial invariant.
    h_positions: Vec<usize>,
    /// Positions (into `h_positions`) whose invariant is even; these span `R_c`.
    r_positions: Vec<usize>,
}

impl RayClassTable {
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn modulus(&self) -> &Ideal {
        &self.modulus
    }

    /// Invariants of `H_c`.
    pub fn h_invariants(&self) -> Vec<u64> {
        self.h_positions.iter().map(|j| self.quotient.invariants[*j] as u64).collect()
    }

    pub fn h_order(&self) -> u64 {
        self.h_invariants().iter().product()
    }

    /// Dimension of `R_c` over `F_2`.
    pub fn r_rank(&self) -> usize {
        self.r_positions.len()
    }

    /// `|R_c|`.
    pub fn order(&self) -> u64 {
        1 << self.r_rank()
    }

    fn raw_coords(&self, x: &Gaussian) -> Result<Vec<i128>> {
        let mut v: Vec<i128> = match &self.units {
            Some(u) => u.dlog(*x)?.into_iter().map(|t| t as i128).collect(),
            None => {
                if !self.modulus.coprime_to_element(x) {
                    return domain(format!("{x} is not coprime to {}", self.modulus));
                }
                Vec::new()
            }
        };
        if self.field.id == FieldId::Q {
            v.push((x.re < 0) as i128);
        }
        Ok(v)
    }

    /// Class in `H_c` of the principal ideal generated by the element `x`, in the narrow
    /// sense over `Q` (the sign of `x` is kept).
    pub fn h_class_of_element(&self, x: &Gaussian) -> Result<Vec<u64>> {
        let p = self.quotient.project(&self.raw_coords(x)?);
        Ok(self.h_positions.iter().map(|j| p[*j] as u64).collect())
    }

    /// Class in `H_c` of an ideal coprime to `c`.
    pub fn h_class_of(&self, a: &Ideal) -> Result<Vec<u64>> {
        self.h_class_of_element(&a.gen())
    }

    pub fn r_class_of_h(&self, h: &[u64]) -> RClass {
        self.r_positions
            .iter()
            .enumerate()
            .fold(0, |acc, (bit, j)| acc | (((h[*j] & 1) as u32) << bit))
    }

    /// Class in `R_c` of an ideal coprime to `c`.
    pub fn class_of(&self, a: &Ideal) -> Result<RClass> {
        Ok(self.r_class_of_h(&self.h_class_of(a)?))
    }

    pub fn h_add(&self, x: &[u64], y: &[u64]) -> Vec<u64> {
        self.h_invariants().iter().enumerate().map(|(t, n)| (x[t] + y[t]) % n).collect()
    }

    pub fn h_neg(&self, x: &[u64]) -> Vec<u64> {
        self.h_invariants().iter().enumerate().map(|(t, n)| (n - x[t] % n) % n).collect()
    }

    pub fn h_double(&self, x: &[u64]) -> Vec<u64> {
        self.h_add(x, x)
    }

    /// Whether `x` is congruent mod `c` to a global unit admissible for a positive generator.
    pub fn is_admissible_unit(&self, x: &Gaussian) -> Option<Gaussian> {
        let ring = crate::ring::ResidueRing::new(&self.modulus);
        let allowed: &[Gaussian] = match self.field.id {
            FieldId::Q => &[Gaussian::ONE],
            FieldId::Qi => &self.field.units,
        };
        allowed.iter().copied().find(|u| self.modulus.is_unit() || ring.equal(*u, *x))
    }
}

/// Computes `H_c` (narrow over `Q`) and `R_c`.
pub fn ray_class_group(f: &FieldSpec, c: &Ideal) -> Result<RayClassTable> {
    let units = if c.norm() > 1 { Some(residue_ring_units(c)?) } else { None };
    let k = units.as_ref().map_or(0, |u| u.rank());
    let sign = (f.id == FieldId::Q) as usize;
    let dim = k + sign;
    let mut rels: Vec<Vec<i128>> = Vec::new();
    if let Some(u) = &units {
        for (t, n) in u.invariants.iter().enumerate() {
            let mut r = vec![0i128; dim];
            r[t] = *n as i128;
            rels.push(r);
        }
    }
    if sign == 1 {
        let mut r = vec![0i128; dim];
        r[k] = 2;
        rels.push(r);
    }
    for unit in &f.units {
        let mut r: Vec<i128> = match &units {
            Some(u) => u.dlog(*unit)?.into_iter().map(|t| t as i128).collect(),
            None => Vec::new(),
        };
        if sign == 1 {
            r.push((unit.re < 0) as i128);
        }
        rels.push(r);
    }
    let quotient = if dim == 0 { Quotient { invariants: vec![], v: vec![], v_inv: vec![] } } else { Quotient::new(dim, &rels) };
    let h_positions: Vec<usize> = (0..dim).filter(|j| quotient.invariants[*j] != 1).collect();
    let r_positions: Vec<usize> = h_positions
        .iter()
        .enumerate()
        .filter(|(_, j)| quotient.invariants[**j] % 2 == 0)
        .map(|(t, _)| t)
        .collect();
    Ok(RayClassTable { field: f.clone(), modulus: c.clone(), units, quotient, h_positions, r_positions })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::modulus::default_modulus;
    use crate::ring::{enumerate_ideals, IdealFilter};

    #[test]
    fn orders() {
        let q = ray_class_group(&FieldSpec::q(), &default_modulus(FieldId::Q)).unwrap();
        assert_eq!(q.h_order(), 4);
        assert_eq!(q.order(), 4);
        let qi = ray_class_group(&FieldSpec::qi(), &default_modulus(FieldId::Qi)).unwrap();
        assert_eq!(qi.h_order(), 4);
        assert!(qi.order().is_power_of_two());
    }

    #[test]
    fn q_classes_are_residues_mod_8() {
        let q = ray_class_group(&FieldSpec::q(), &default_modulus(FieldId::Q)).unwrap();
        for a in enumerate_ideals(FieldId::Q, 0, 200, &IdealFilter::coprime(&Ideal::rational(2).unwrap())) {
            for b in enumerate_ideals(FieldId::Q, 0, 60, &IdealFilter::coprime(&Ideal::rational(2).unwrap())) {
                let same = q.class_of(&a).unwrap() == q.class_of(&b).unwrap();
                assert_eq!(same, a.gen().re % 8 == b.gen().re % 8);
            }
        }
    }

    #[test]
    fn class_of_is_a_homomorphism_and_kills_the_ray() {
        for field in [FieldId::Q, FieldId::Qi] {
            let f = FieldSpec::new(field);
            let c = default_modulus(field);
            let rc = ray_class_group(&f, &c).unwrap();
            let ideals = enumerate_ideals(field, 0, 300, &IdealFilter::coprime(&c));
            for a in &ideals {
                for b in ideals.iter().filter(|b| a.norm() * b.norm() <= 300) {
                    let ab = a.mul(b);
                    assert_eq!(rc.class_of(&ab).unwrap(), rc.class_of(a).unwrap() ^ rc.class_of(b).unwrap());
                    assert_eq!(rc.h_class_of(&ab).unwrap(), rc.h_add(&rc.h_class_of(a).unwrap(), &rc.h_class_of(b).unwrap()));
                }
            }
            // x = 1 mod c, x > 0 lies in the trivial class
            for t in -30..30i128 {
                for s in -3..3i128 {
                    let x = Gaussian::ONE + c.gen() * Gaussian::new(t, if field == FieldId::Q { 0 } else { s });
                    if x.is_zero() || (field == FieldId::Q && x.re < 0) {
                        continue;
                    }
                    let id = Ideal::new(field, x).unwrap();
                    assert!(rc.h_class_of(&id).unwrap().iter().all(|v| *v == 0));
                }
            }
        }
    }

    #[test]
    fn non_coprime_ideal_is_rejected() {
        let rc = ray_class_group(&FieldSpec::q(), &default_modulus(FieldId::Q)).unwrap();
        assert!(rc.class_of(&Ideal::rational(6).unwrap()).is_err());
    }
}

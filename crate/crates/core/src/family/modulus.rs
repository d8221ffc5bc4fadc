//! The modulus `c`, found by a Hensel stabilization search at the primes over 2.

use std::collections::HashSet;

use crate::ring::{FieldId, FieldSpec, Gaussian, Ideal, PrimeIdeal, ResidueRing};

/// Whether every unit `x = 1 mod P^e` is a square in the completion at `P`.
///
/// Checked as: `x` is a square modulo `P^{e + 2 v_P(2)}`, which suffices by Hensel's lemma.
pub fn units_are_squares(p: &PrimeIdeal, e: u32) -> bool {
    let v2 = two_valuation(p);
    let big = p.ideal().pow(e + 2 * v2);
    let small = p.ideal().pow(e);
    let ring = ResidueRing::new(&big);
    let mut squares = HashSet::new();
    for idx in 0..ring.size() {
        let z = ring.element(idx);
        if !p.contains(&z) {
            squares.insert(ring.index(z * z));
        }
    }
    (0..ring.size()).all(|idx| {
        let z = ring.element(idx);
        !small.contains(&(z - Gaussian::ONE)) || squares.contains(&idx)
    })
}

fn two_valuation(p: &PrimeIdeal) -> u32 {
    Ideal::new(p.field, Gaussian::int(2)).expect("nonzero").exponent(p)
}

/// Least exponent `e` with `U^(e)` inside the squares at `P`.
pub fn square_forcing_exponent(p: &PrimeIdeal) -> u32 {
    (1..).find(|e| units_are_squares(p, *e)).expect("search terminates")
}

/// The modulus `c = prod_{P | 2} P^{e_P}` of the quadratic family.
pub fn build_modulus(f: &FieldSpec) -> Ideal {
    let two = Ideal::new(f.id, Gaussian::int(2)).expect("nonzero");
    let factors = two.primes().map(|p| (*p, square_forcing_exponent(p))).collect();
    Ideal::from_factors(f.id, factors)
}

/// The minimal modulus for a field id.
pub fn default_modulus(field: FieldId) -> Ideal {
    build_modulus(&FieldSpec::new(field))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_moduli() {
        assert_eq!(default_modulus(FieldId::Q), Ideal::rational(8).unwrap());
        let one_i = Ideal::new(FieldId::Qi, Gaussian::new(1, 1)).unwrap();
        assert_eq!(default_modulus(FieldId::Qi), one_i.pow(5));
    }

    #[test]
    fn search_is_monotone() {
        for field in [FieldId::Q, FieldId::Qi] {
            let two = Ideal::new(field, Gaussian::int(2)).unwrap();
            let p = two.factors()[0].0;
            let e = square_forcing_exponent(&p);
            for k in 1..e {
                assert!(!units_are_squares(&p, k));
            }
            for k in e..e + 3 {
                assert!(units_are_squares(&p, k));
            }
        }
    }

    #[test]
    fn minus_three_is_not_a_square_in_q2i() {
        // -3 = 1 mod (1+i)^4 but it is not a square: the exponent 4 fails
        let p = Ideal::new(FieldId::Qi, Gaussian::new(1, 1)).unwrap().factors()[0].0;
        assert!(!units_are_squares(&p, 4));
    }
}

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::family::HeckeFamily;
use crate::ring::Ideal;

/// `a ~ X`: the norm window `X < N a <= 2X` as integer bounds `(lo, hi]`.
pub fn dyadic_window(x: f64) -> (u64, u64) {
    (x.floor().max(0.0) as u64, (2.0 * x).floor().max(0.0) as u64)
}

/// A coefficient sequence of support `N`: nonzero only on squarefree ideals prime to `c` with
/// norm in `(N, 2N]`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaSeq {
    window: f64,
    entries: Vec<(Ideal, Complex64)>,
}

impl LambdaSeq {
    pub fn new(family: &HeckeFamily, window: f64, mut entries: Vec<(Ideal, Complex64)>) -> Result<Self> {
        let (lo, hi) = dyadic_window(window);
        for (b, _) in &entries {
            if b.norm() <= lo || b.norm() > hi {
                return Err(Error::Domain(format!("{b} has norm outside ({window}, {}]", 2.0 * window)));
            }
            if !b.is_squarefree() || !b.coprime(family.modulus()) {
                return Err(Error::Domain(format!("{b} must be squarefree and prime to {}", family.modulus())));
            }
        }
        entries.sort_by(|x, y| x.0.cmp(&y.0));
        if entries.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(Error::Domain("repeated ideal in lambda".into()));
        }
        Ok(LambdaSeq { window, entries })
    }

    /// Real coefficients on the given ideals.
    pub fn real(family: &HeckeFamily, window: f64, entries: Vec<(Ideal, f64)>) -> Result<Self> {
        Self::new(family, window, entries.into_iter().map(|(b, v)| (b, Complex64::new(v, 0.0))).collect())
    }

    pub fn window(&self) -> f64 {
        self.window
    }

    pub fn entries(&self) -> &[(Ideal, Complex64)] {
        &self.entries
    }

    pub fn get(&self, b: &Ideal) -> Complex64 {
        self.entries.binary_search_by(|e| e.0.cmp(b)).map_or(Complex64::new(0.0, 0.0), |k| self.entries[k].1)
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|(_, v)| v.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn conj(&self) -> Self {
        LambdaSeq { window: self.window, entries: self.entries.iter().map(|(b, v)| (b.clone(), v.conj())).collect() }
    }

    pub fn scaled(&self, c: Complex64) -> Self {
        LambdaSeq { window: self.window, entries: self.entries.iter().map(|(b, v)| (b.clone(), v * c)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyOptions;
    use crate::ring::FieldId;

    #[test]
    fn support_is_enforced() {
        let fam = HeckeFamily::build(&FamilyOptions::new(FieldId::Q)).unwrap();
        let id = |n| Ideal::rational(n).unwrap();
        assert!(LambdaSeq::real(&fam, 4.0, vec![(id(5), 1.0), (id(7), -2.0)]).is_ok());
        assert!(LambdaSeq::real(&fam, 4.0, vec![(id(9), 1.0)]).is_err());
        assert!(LambdaSeq::real(&fam, 4.0, vec![(id(6), 1.0)]).is_err());
        assert!(LambdaSeq::real(&fam, 4.0, vec![(id(3), 1.0)]).is_err());
        assert!(LambdaSeq::real(&fam, 4.0, vec![(id(5), 1.0), (id(5), 1.0)]).is_err());
        let l = LambdaSeq::real(&fam, 4.0, vec![(id(7), 3.0), (id(5), 4.0)]).unwrap();
        assert_eq!(l.norm(), 5.0);
        assert_eq!(l.get(&id(7)).re, 3.0);
        assert_eq!(l.entries()[0].0, id(5));
    }

    #[test]
    fn windows() {
        assert_eq!(dyadic_window(1.0), (1, 2));
        assert_eq!(dyadic_window(2.5), (2, 5));
    }
}

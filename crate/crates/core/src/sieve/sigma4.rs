//! `Sigma4(m, ?K; h, X, chi)` by direct summation and through the twisted Poisson formula.

use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::analytic::{check_poisson_char, ContourConfig, TestFunction};
use crate::error::{Error, Result};
use crate::family::{HeckeFamily, IdealCharacter};
use crate::ring::{enumerate_ideals, squarefree_part_coprime, Ideal, IdealFilter};

/// Which side of `K` the squarefree part `s(a)` must fall on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    AtMost,
    Above,
    All,
}

impl Cmp {
    fn accepts(self, s: f64, k: f64) -> bool {
        match self {
            Cmp::AtMost => s <= k,
            Cmp::Above => s > k,
            Cmp::All => true,
        }
    }
}

/// The exact sum of the floating terms `h(N a / X) chi(a)`, so that the two halves of a
/// partition add up to the whole without rounding.
#[allow(clippy::too_many_arguments)]
pub fn sigma4_exact(
    m: &Ideal,
    cmp: Cmp,
    k: f64,
    h: &TestFunction,
    x: f64,
    chi: &dyn IdealCharacter,
    family: &HeckeFamily,
) -> Result<BigRational> {
    if x <= 0.0 {
        return Err(Error::Domain(format!("X must be positive, got {x}")));
    }
    let (_, hi) = h.support();
    let nmax = (hi * x).floor() as u64;
    let ideals = enumerate_ideals(family.field_id(), 0, nmax, &IdealFilter::coprime(m));
    let terms: Vec<BigRational> = ideals
        .par_iter()
        .filter(|a| cmp.accepts(squarefree_part_coprime(a, family.modulus()) as f64, k))
        .map(|a| {
            let v = chi.value(a)?;
            let s = v.as_sign().ok_or_else(|| Error::Domain(format!("chi({a}) = {v} is not real")))?;
            let t = h.eval(a.norm() as f64 / x) * s as f64;
            Ok(BigRational::from_float(t).unwrap_or_else(BigRational::zero))
        })
        .collect::<Result<_>>()?;
    Ok(terms.into_iter().fold(BigRational::zero(), |acc, t| acc + t))
}

/// `Sigma4` rounded once to `f64`.
#[allow(clippy::too_many_arguments)]
pub fn sigma4_direct(
    m: &Ideal,
    cmp: Cmp,
    k: f64,
    h: &TestFunction,
    x: f64,
    chi: &dyn IdealCharacter,
    family: &HeckeFamily,
) -> Result<f64> {
    Ok(sigma4_exact(m, cmp, k, h, x, chi, family)?.to_f64().unwrap_or(f64::NAN))
}

/// Both sides of `Sigma4((1), >= 1; h, X, chi) = (X / sqrt(N f)) Sigma4((1), >= 1; h_dot, N f / X, chi)`.
#[derive(Clone, Copy, Debug)]
pub struct Sigma4Poisson {
    pub direct: f64,
    pub transformed: f64,
    pub residual: f64,
    pub tail_budget: f64,
}

pub fn sigma4_poisson(
    h: &TestFunction,
    x: f64,
    chi: &dyn IdealCharacter,
    family: &HeckeFamily,
    cc: &ContourConfig,
) -> Result<Sigma4Poisson> {
    let direct = sigma4_direct(&Ideal::unit(family.field_id()), Cmp::All, 0.0, h, x, chi, family)?;
    let r = check_poisson_char(h, x, chi, family.field(), cc)?;
    Ok(Sigma4Poisson {
        direct,
        transformed: r.rhs,
        residual: (direct - r.rhs).abs() / direct.abs().max(1e-300),
        tail_budget: r.tail_budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{FamilyOptions, HeckeChar, PrincipalChar};
    use crate::ring::FieldId;

    #[test]
    fn partition_is_exact() {
        let fam = HeckeFamily::build(&FamilyOptions::new(FieldId::Q)).unwrap();
        let chi = HeckeChar::new(&fam, &Ideal::rational(5).unwrap()).unwrap();
        let h = TestFunction::standard_bump();
        let m = Ideal::rational(3).unwrap();
        for (k, x) in [(1.0, 20.0), (4.0, 20.0), (10.0, 37.5), (0.0, 8.0)] {
            let le = sigma4_exact(&m, Cmp::AtMost, k, &h, x, &chi, &fam).unwrap();
            let gt = sigma4_exact(&m, Cmp::Above, k, &h, x, &chi, &fam).unwrap();
            let all = sigma4_exact(&m, Cmp::All, k, &h, x, &chi, &fam).unwrap();
            assert_eq!(le + gt, all);
        }
    }

    #[test]
    fn empty_support_gives_zero() {
        let fam = HeckeFamily::build(&FamilyOptions::new(FieldId::Qi)).unwrap();
        let one = PrincipalChar::new(FieldId::Qi);
        let v = sigma4_direct(&Ideal::unit(FieldId::Qi), Cmp::All, 0.0, &TestFunction::standard_bump(), 0.3, &one, &fam);
        assert_eq!(v.unwrap(), 0.0);
    }
}

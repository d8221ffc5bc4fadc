use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use super::gaussian::Gaussian;
use crate::error::{Error, Result};

/// The supported base fields.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum FieldId {
    /// The rationals.
    Q,
    /// The Gaussian field `Q(i)`.
    Qi,
}

impl fmt::Display for FieldId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FieldId::Q => "Q",
            FieldId::Qi => "Qi",
        })
    }
}

impl FromStr for FieldId {
    type Err = Error;
    fn from_str(s: &str) -> Result<FieldId> {
        match s {
            "Q" | "q" | "QQ" => Ok(FieldId::Q),
            "Qi" | "qi" | "Q(i)" | "QQ(i)" => Ok(FieldId::Qi),
            _ => Err(Error::Parse(format!("unknown field id {s:?} (expected Q or Qi)"))),
        }
    }
}

/// A supported base field with its analytic constants.
#[derive(Clone, Debug, PartialEq)]
pub struct FieldSpec {
    pub id: FieldId,
    /// Degree over `Q`.
    pub d: u32,
    pub r1: u32,
    pub r2: u32,
    /// Discriminant.
    pub disc: i64,
    /// `(2^{r1} |d_k| (2 pi)^{-d})^{1/2}`.
    pub a_k: f64,
    /// Residue at `s = 1` of `Lambda(s) = A_k^s Gamma(s/2)^{r1} Gamma(s)^{r2} zeta_k(s)`.
    pub alpha_k: f64,
    /// Torsion units.
    pub units: Vec<Gaussian>,
}

impl FieldSpec {
    pub fn new(id: FieldId) -> FieldSpec {
        match id {
            FieldId::Q => FieldSpec {
                id,
                d: 1,
                r1: 1,
                r2: 0,
                disc: 1,
                a_k: (2.0 / (2.0 * PI)).sqrt(),
                alpha_k: 1.0,
                units: vec![Gaussian::ONE, -Gaussian::ONE],
            },
            FieldId::Qi => FieldSpec {
                id,
                d: 2,
                r1: 0,
                r2: 1,
                disc: -4,
                a_k: (4.0 / (4.0 * PI * PI)).sqrt(),
                alpha_k: 0.25,
                units: vec![Gaussian::ONE, Gaussian::I, -Gaussian::ONE, -Gaussian::I],
            },
        }
    }

    pub fn q() -> FieldSpec {
        FieldSpec::new(FieldId::Q)
    }

    pub fn qi() -> FieldSpec {
        FieldSpec::new(FieldId::Qi)
    }

    /// Number of roots of unity.
    pub fn w(&self) -> u32 {
        self.units.len() as u32
    }

    /// Residue of `zeta_k` at `s = 1`: `alpha_k / (A_k Gamma(1/2)^{r1})`.
    pub fn zeta_residue(&self) -> f64 {
        self.alpha_k / (self.a_k * PI.sqrt().powi(self.r1 as i32))
    }

    /// `zeta_k(0)`, which is `-alpha_k / 2^{r1}` when `r1 + r2 = 1` and `0` otherwise.
    pub fn zeta_at_zero(&self) -> f64 {
        if self.r1 + self.r2 == 1 {
            -self.alpha_k / 2f64.powi(self.r1 as i32)
        } else {
            0.0
        }
    }

    /// Canonical associate: a positive integer over `Q`; argument in `[0, pi/2)` over `Q(i)`.
    pub fn canonical(&self, z: Gaussian) -> Gaussian {
        match self.id {
            FieldId::Q => Gaussian::int(z.re.abs()),
            FieldId::Qi => {
                let mut w = z;
                for _ in 0..4 {
                    if w.re > 0 && w.im >= 0 {
                        return w;
                    }
                    w = w.mul_i();
                }
                w
            }
        }
    }

    /// Whether `z` is a legal element of this field's ring of integers.
    pub fn contains(&self, z: &Gaussian) -> bool {
        self.id == FieldId::Qi || z.im == 0
    }

    /// Absolute norm of an element.
    pub fn norm(&self, z: &Gaussian) -> u128 {
        match self.id {
            FieldId::Q => z.re.unsigned_abs(),
            FieldId::Qi => z.norm() as u128,
        }
    }
}

//! Exact arithmetic in `Z` and `Z[i]`: elements, ideals, factorization and residue rings.

pub mod arith;
mod field;
mod gaussian;
mod ideal;
mod residue;
pub mod smith;

pub use field::{FieldId, FieldSpec};
pub use gaussian::{FieldElem, Gaussian};
pub use ideal::{
    enumerate_ideals, factor_ideal, ideal_gcd, multiplicative_funcs, squarefree_part_coprime,
    Ideal, IdealFilter, MultiplicativeValues, PrimeIdeal,
};
pub use residue::{residue_ring_units, ResidueRing, UnitGroup};

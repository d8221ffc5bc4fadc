//! Large-sieve quantities for a quadratic Hecke family: the norms `B1`, `B2`, `B3`, the sums
//! `Sigma3`, `Sigma4`, `Sigma5`, the main terms of the explicit formula and the experiments.

pub mod exact;
pub mod experiment;
pub mod explicit;
pub mod lambda;
pub mod sigma4;
pub mod spectral;

pub use exact::SqrtRational;
pub use experiment::{
    b1_grid_csv, monotonicity_check, scaling_experiment, scaling_fit_text, square_sequence_check, ExperimentGrid,
    ScalingReport, SquareSequenceReport,
};
pub use explicit::{
    bracket, bracket_expansion, bracket_from_expansion, main_terms_t, sigma5, sigma5_main1, sigma5_main2,
    ExplicitParameters, MainTerms, PairBracket,
};
pub use lambda::{dyadic_window, LambdaSeq};
pub use sigma4::{sigma4_direct, sigma4_exact, sigma4_poisson, Cmp, Sigma4Poisson};
pub use spectral::{b1, b2, b3, power_iteration, sigma3, B3Report, ClassForm, GramSpectrum};

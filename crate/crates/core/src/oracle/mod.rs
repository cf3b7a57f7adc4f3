//! Ground truth that does not go through the closed-form kernels: the
//! orthonormal monomial series, and Monte Carlo integration over the domain.
//!
//! Monomials `z1^a z2^b` are mutually orthogonal on any Reinhardt domain and
//! their norms on `H_γ` have a closed form, so normalizing them gives an
//! orthonormal system; completeness is the standard Laurent-expansion fact for
//! Reinhardt domains and is assumed here rather than checked.

mod montecarlo;
mod series;
mod testfn;

pub use montecarlo::{inner_product_mc, reproducing_check, McEstimate, ReproducingReport, MC_CHUNK, MIN_MC_SAMPLES};
pub use series::{
    admissible, b_min, basis_norms, compare_with_closed_form, kernel_series, kernel_series_auto, norm_sq,
    sample_pairs_bounded, MonomialIndex, SeriesComparison, SeriesResult, SeriesTruncation, DEFAULT_SERIES_TOL,
    MAX_TRUNCATION,
};
pub use testfn::Function2C;

pub(crate) fn ser_complex<S: serde::Serializer>(
    z: &num_complex::Complex64,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    serde::Serialize::serialize(&crate::report::ComplexJson::from(*z), s)
}

//! Exact finite-field harmonic analysis for the norm-ratio function
//!
//! ```text
//! phi(x, y) = ||x' - y'|| / ||x'' - y''||   (0 when the denominator vanishes)
//! ```
//!
//! on `F_q^d`, `d` even, where `x'` and `x''` are the two halves of `x`.
//!
//! Every character sum is carried in `(1/q^k) Z[zeta_p]` ([`CycNum`]), so all
//! identities (Gauss sums, zero-sphere transforms, the ratio-sphere transform
//! and the Fourier expansion of the pair count `nu(t)`) are checked by exact
//! equality. Floating point appears only in human-readable embeddings.

pub mod counting;
pub mod cyclotomic;
pub mod error;
pub mod field;
pub mod fourier;
pub mod isotropic;
pub mod pointset;
pub mod suite;
pub mod varieties;

pub use counting::{
    bound_thm_main1, bound_thm_main22, nu_brute, nu_fourier, nu_profile_brute, phi_image,
    threshold_experiment, BoundCase, NuFourier, NuProfile, NuSource, SizeReport, ThresholdConfig,
    ThresholdReport,
};
pub use cyclotomic::{
    chi, completed_square_sum, complex_embed, gauss_sum, orthogonality_sum, verify_gauss_square,
    CycNum,
};
pub use error::{Error, Result};
pub use field::{FieldElem, FieldSpec, DEFAULT_POINT_CAP};
pub use fourier::{dft, inversion_check, plancherel_sum, FourierTable};
pub use isotropic::{
    max_isotropic_brute, max_isotropic_construct, sharpness_set, verify_null, NullVerdict,
    SharpnessClaim, SharpnessSet, SubspaceBasis,
};
pub use pointset::PointSet;
pub use varieties::{
    phi, ratio_sphere, rt_ft_closed, s0_ft_closed, verify_rt_ft, verify_s0_ft, zero_sphere, S0Case,
};

/// Exact rational type used for normalized quantities and bounds.
pub type Rational = num_rational::Ratio<i128>;

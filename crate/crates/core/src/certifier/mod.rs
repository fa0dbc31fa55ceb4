//! Certification of packings and of the algebra behind the distance bound.

mod algebra;
mod identities;
mod lemmas;
mod packing;
mod sqrt3;

pub use algebra::{
    certify_quartic, cross_norm_sq, delta, delta_prime, quartic_coefficients, triple_product, PairGeometry,
    QuarticCertificate, QuarticFailure,
};
pub use identities::{check_identities, direct_pair_values, identity_suite, random_ring_pairs, IdentityReport};
pub use lemmas::{
    check_cos_lemma, check_one_minus_c_bound, check_one_minus_c_pairs, gap_bound, geometric_grid, lemma1_certificate,
    phi, CosLemmaReport, GapBoundReport, GapRow, Lemma1Report, COS_LEMMA_BOUND,
};
pub use packing::{
    verify_nonparallel, verify_packing, ArgMin, Mode, ReportConfig, VerificationReport, VerifyOptions, Violation,
    DEFAULT_MAX_LISTED, DEFAULT_PAIR_BUDGET,
};
pub use sqrt3::{sqrt3_sign, Sign, SqrtThreeInt};

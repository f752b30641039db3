//! Dedekind sums, the multiplier sums built from them, and the truncated
//! exact formulas for `A_n`, `A_n°` and `p(n)`.
//!
//! Phases are reduced in integer arithmetic before conversion to angles and
//! every modulus sum is accumulated in ascending `c` with compensated
//! summation, so results are reproducible bit for bit across runs and
//! thread counts.

mod cache;
mod dedekind;
mod exact;
mod kloosterman;

pub use cache::{Family, KloostermanCache, KloostermanKey, CACHE_FILE_NAME};
pub use dedekind::{dedekind_sum, sawtooth, DedekindMethod, DedekindSumValue, Rational128};
pub use exact::{
    c_max_for_terms, entropy, exact_coeff, exact_coeff_terms, family_of, leading_asymptotic,
    partition_rademacher, RademacherPartial, DEFAULT_C_MAX,
};
pub use kloosterman::{
    cache_lookup, kloosterman, kloosterman_in, kloosterman_quadratic, multiplier_sum, PhaseSign,
};

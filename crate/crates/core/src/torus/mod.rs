//! Affine endomorphisms of tori `R^n / Z^n`.

pub mod classify;
pub mod cover;
pub mod endo;
pub mod periodic;
pub mod point;
pub mod structure;

pub use classify::{classify, classify_only, is_periodic, step};
pub use cover::{cover_transfer, FiberEntry, TorusCover, TransferReport};
pub use endo::TorusEndo;
pub use periodic::{
    conjugate_to_linear, fixed_point, has_periodic_point, periodic_point_of_period, real_periodic_solution,
    translation_periodicity, Conjugation, PeriodicSearch, TranslationPeriodicity,
};
pub use point::{relative_order, TorusPoint};
pub use structure::{
    computeper_trace_check, eper_description, equalizer_defect_is_rational, equalizer_membership,
    notper_trace_check, perd_sufficient, unity_subspace, witness_eper_not_per, EperDescription,
    DEFAULT_PERIOD_SEARCH,
};

//! Flat infra-nilmanifolds `Γ \ R^n` and their affine endomorphisms.

mod classify;
mod endo;
mod group;
mod lift;

pub use classify::{classify_infra, classify_infra_only, CoverCheck, InfraReport};
pub use endo::{validate_endo, InfraEndo};
pub use group::{BieberbachGroup, HolonomyRep, InfraPoint};
pub use lift::{fitting_lift, gamma_power_lattice, gamma_power_lift, InfraCover, LiftKind};

//! Exact classification of periodic and eventually periodic points of
//! affine endomorphisms of tori, flat infra-nilmanifolds and class-2
//! nilmanifolds.

pub mod error;
pub mod exactmath;
pub mod fixture;
pub mod infra;
pub mod nil;
pub mod orbit;
pub mod sweep;
pub mod torus;

pub use error::{Error, Result};

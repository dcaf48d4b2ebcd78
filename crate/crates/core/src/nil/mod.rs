//! Class-2 nilpotent groups, their lattices and endomorphisms.

pub mod dynamics;
pub mod endo;
pub mod group;
pub mod lattice;
pub mod structure;

pub use dynamics::{classify_nil, computeper_check, perd_nil};
pub use endo::{make_endo, NilEndo};
pub use group::{bch_inv, bch_mul, bch_pow, Class2Group, MalcevElement};
pub use lattice::{n_one_over_s, naive_root_subgroup, subgroup_generated, subgroup_index, LatticeSubgroup};
pub use structure::{coset_membership, equalizer_defect_is_rational, equalizer_subalgebra, unity_subalgebra};

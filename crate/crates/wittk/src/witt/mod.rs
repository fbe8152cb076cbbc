//! Big and p-typical Witt vectors over a truncation set.

mod enumerate;
mod ops;
mod trunc;
pub mod universal;
mod vector;

pub use enumerate::{enumerate_witt, witt_cardinality, DEFAULT_WITT_CAP};
pub use ops::{
    change_ring, frobenius, frobenius_into, from_ghost, ghost, restriction, teichmuller, verschiebung,
    witt_add, witt_add_via_ghost, witt_mul, witt_mul_via_ghost, witt_neg, witt_scale, witt_sub,
};
pub use trunc::{TruncationSet, MAX_BIG_INDEX, MAX_P_TYPICAL_LEN};
pub use universal::{universal_polys, UniversalOp};
pub use vector::{GhostVector, WittVector};

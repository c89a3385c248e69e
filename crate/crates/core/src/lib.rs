//! Sorting permutations by right-jumps.
//!
//! * [`perm`]: permutations, right-jumps, jump distance and witnesses.
//! * [`basis`]: recognition and enumeration of the basis `B_p` of the class
//!   of permutations reachable with at most `p` jumps.
//! * [`triangle`]: exact counts `b_{n,p}` by two independent recurrences,
//!   with a plain-text cache format.
//! * [`congruence`]: periods of P-recursive integer sequences modulo `m`.
//! * [`asymptotics`]: the growth constant, the normalized triangle and the
//!   distribution of left-to-right maxima.
//! * [`verify`]: the cross-validation suite behind `rightjump verify`.

pub mod asymptotics;
pub mod basis;
pub mod congruence;
pub mod perm;
pub mod triangle;
pub mod verify;

pub use basis::{check_basis, check_basis_oracle, enumerate_basis, BasisMembership, Condition};
pub use perm::{jump_distance, sort_distance, witness_jumps, Jump, PermError, Permutation};
pub use triangle::{b_sequence, build_triangle, load_triangle, save_triangle, Triangle};

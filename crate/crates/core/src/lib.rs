//! An exact laboratory for one-to-one two-sided matching under symmetry.
//!
//! The crate models the marriage market with women W = {1..n} and men
//! M = {n+1..2n}, the action of partition-preserving permutations on
//! preference profiles, the classical and fairness-driven matching
//! mechanisms, and the machinery needed to check — by exhaustive search at
//! desk scale — which combinations of resoluteness, symmetry and optimality
//! can coexist.
//!
//! ```
//! use matchsym::{MechanismId, PermGroup, PreferenceProfile, Side};
//!
//! let p = PreferenceProfile::parse(
//!     "n=2\n1: 3 4\n2: 4 3\n3: 2 1\n4: 1 2\n",
//! )?;
//!
//! // Deferred acceptance favors the proposing side.
//! let women_best = matchsym::matching::gale_shapley(&p, Side::Women);
//! assert_eq!(women_best.to_string(), "(1 3)(2 4)");
//!
//! // This profile is fixed by a four-cycle renaming, and no matching
//! // commutes with its stabilizer: the container is empty, so no resolute
//! // fully symmetric mechanism can decide it.
//! let gstar = PermGroup::gstar(2);
//! assert_eq!(p.stabilizer(&gstar)?.order(), 4);
//! assert!(matchsym::mechanism::c_u(&p, &gstar)?.is_empty());
//!
//! // The stable set itself is still symmetric and nonempty.
//! assert_eq!(MechanismId::St.evaluate(&p).len(), 2);
//! # Ok::<(), matchsym::Error>(())
//! ```

pub mod action;
pub mod error;
pub mod generalized;
pub mod group;
pub mod matching;
pub mod mechanism;
pub mod perm;
pub mod profile;
pub mod witness;

#[cfg(test)]
pub(crate) mod fixtures;

pub use error::{Error, Result};
pub use group::PermGroup;
pub use matching::{Matching, MechanismId, Side};
pub use perm::{CycleType, Membership, Permutation};
pub use profile::{LinearOrder, PreferenceProfile, ProfileSpace};

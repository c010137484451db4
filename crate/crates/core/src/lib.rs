//! Finite-group computation kernel and inverse-problem search engine.
//!
//! Groups are represented by explicit multiplication tables, which keeps every
//! downstream algorithm (subgroup enumeration, automorphism backtracking,
//! isomorphism testing) a matter of table lookups. On top of the kernel sits a
//! realisability engine: given a construction `f` (center, derived subgroup,
//! Frattini subgroup, Fitting subgroup, Chermak-Delgado subgroup, automorphism
//! or inner automorphism group), it searches a catalog of constructible groups
//! for witnesses `H` with `f(H) ≅ G`, and verifies the stronger
//! "completely realisable" conditions subgroup-by-subgroup.

pub mod bitset;
pub mod catalog;
pub mod constructions;
pub mod ctx;
pub mod error;
pub mod group;
pub mod ingest;
pub mod iso;
pub mod lattice;
pub mod realis;
pub mod spec;
pub mod verify;

pub use bitset::BitSet;
pub use constructions::{AutGroup, CdLattice, Construction};
pub use ctx::{Caps, Ctx};
pub use error::GroupError;
pub use group::{Elem, FiniteGroup, Subgroup};
pub use iso::{Fingerprint, Isomorphism};
pub use lattice::SubgroupLattice;
pub use spec::GroupSpec;

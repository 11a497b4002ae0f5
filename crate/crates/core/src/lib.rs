//! Invariants of free-by-cyclic groups `F_r x|_f Z`.
//!
//! - [`word`]: free and cyclic reduction, canonical conjugacy-class keys.
//! - [`free_auto`]: maps of free groups, composition, Nielsen inversion.
//! - [`intlin`]: Smith normal form, determinants, Perron-Frobenius estimates.
//! - [`mapping_torus`]: mapping-torus presentations and `H_1`.
//! - [`dynamics`]: stretch-factor estimates and periodic conjugacy classes.
//! - [`finite_quotients`]: homomorphism counts into finite groups.
//! - [`text`]: the shared text formats.

pub mod dynamics;
pub mod error;
pub mod finite_quotients;
pub mod free_auto;
pub mod intlin;
pub mod mapping_torus;
pub mod text;
pub mod word;

pub use error::{Error, NotAutomorphism, NotAutomorphismReason, Result};
pub use finite_quotients::{
    compare_fingerprints, count_epis, count_homs, fingerprint, standard_library, Comparison,
    FiniteGroup, Fingerprint, FingerprintCache, HomCounts,
};
pub use free_auto::{FreeMap, NielsenMove};
pub use intlin::{determinant, dominant_eigenvalue, smith_normal_form, IntMatrix, SmithForm};
pub use mapping_torus::{
    abelian_invariants, mapping_torus_invariants, mapping_torus_presentation, AbelianInvariants,
    Presentation,
};
pub use word::{CyclicWord, Letter, Word};

/// Library version, echoed in structured output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

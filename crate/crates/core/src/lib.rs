//! Structure-constant workbench for finite Hopf C*-algebras.
//!
//! Algebras are stored as dense complex structure tensors ([`HopfSpec`]).
//! On top of that the crate provides canonical instances built from finite
//! groups, numerical verification of the Hopf *-algebra and C*-algebra
//! axioms, pairings between two algebras and their actions, the quantum
//! double of a non-degenerate pairing, and the GNS representation that
//! realizes the C*-norm.

pub mod axioms;
pub mod double;
pub mod error;
pub mod gns;
pub mod group;
pub mod hopf;
pub mod io;
pub mod pairing;
pub mod report;
pub mod tensor;

pub use axioms::{verify_cstar, verify_hopf_star};
pub use double::{build_double, compare_with_oracle, group_double_oracle, verify_double, verify_theta, DoubleSpec};
pub use error::{Error, Result};
pub use gns::{
    element_operator_norm, gns_build, hilbert_norms, vector_norm, verify_cstar_identity, verify_isometry, GnsData,
    HilbertNorms,
};
pub use group::GroupTable;
pub use hopf::{dualize, find_invariant_integral, function_algebra, group_algebra, HopfParts, HopfSpec};
pub use pairing::{
    act, canonical_pairing, dual_pairing, nondegeneracy, verify_actions, verify_galois, verify_pairing, Action,
    ActionTensors, Nondegeneracy, PairingSpec,
};
pub use report::{AxiomEntry, AxiomReport};
pub use tensor::{CTensor, Tolerance, C64};

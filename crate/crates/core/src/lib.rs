//! Exact machinery for coherent configurations and Schur rings.
//!
//! The crate constructs, for a prime p ≥ 5, a family of association schemes
//! of degree 4p² as Cayley schemes of the group C₂² × C_p², together with
//! everything needed to verify their structure mechanically: Schur-partition
//! validation with exact structure constants, Weisfeiler-Leman stabilization,
//! intersection-number tensors, thin radicals and quotients, automorphism
//! groups via individualization-refinement backtracking over a Schreier-Sims
//! chain, 2-orbit (schurity) tests, and enumeration of algebraic isomorphisms
//! with a search for inducing point bijections (separability).
//!
//! All arithmetic is exact; nothing here uses floating point or hashing of
//! signatures.

pub mod algiso;
pub mod bundle;
pub mod cayley;
pub mod group;
pub mod io;
pub mod orbits;
pub mod parabolic;
pub mod perm;
pub mod permgroup;
pub mod products;
pub mod scheme;
pub mod search;
pub mod sring;
pub mod tensor;
pub mod wl;

pub use algiso::{
    candidate_census, classify_against_candidates, dihedral_pairs_share_rotations,
    enumerate_algebraic_isos, find_inducing_isomorphism, recover_group_of_regular_scheme,
    separability_audit, AlgisoError, AuditReport, CandidateCensusRow, ColorBijection,
    RecoveredGroup,
};
pub use bundle::{build_paper_group, build_paper_group_with, BundleOptions, PaperGroupBundle};
pub use cayley::{
    cayley_iso_from_algebraic, cayley_scheme, color_basic_sets, schur_automorphisms, CayleyIso,
    CayleyIsoError, SetBijection,
};
pub use group::{
    build_candidate_group, build_candidate_group_with_limit, is_prime, CandidateKind, GroupError,
    GroupTable, Subgroup, DEFAULT_MAX_P,
};
pub use orbits::{
    is_schurian, two_orbit_partition, verify_fixed_point_lemma, FixedPointOutcome, SchurityReport,
};
pub use parabolic::{
    diagonal_parabolic, parabolic_from_colors, quotient_scheme, radical_of_color, thin_radical,
    verify_b_properties, BReport, Parabolic, ThinRadical,
};
pub use perm::{Perm, PermError};
pub use permgroup::{
    right_translation_group, PermGroup, PermGroupError, RegularityClass, ENUMERATION_LIMIT,
};
pub use products::{recognize_products, FusionStructure, WreathFactor};
pub use scheme::{Scheme, SchemeError};
pub use search::{
    automorphism_group, find_isomorphism, is_color_preserving, SearchError, SearchLimits,
};
pub use sring::{
    fusion_partition, meet_partitions, paper_partition, validate_schur, BasicSetPartition,
    FusionLevel, PartitionError, SchurReport, SchurViolation, StructureConstants,
};
pub use tensor::IntersectionTensor;
pub use wl::{wl_stabilize, WlOutcome};

//! Generalized Douglas regions and three ways of counting their tilings.
//!
//! A region `D_a(d_1, …, d_k)` is built on the square lattice with extra
//! southwest-to-northeast diagonals drawn in. Its tilings are perfect
//! matchings of the dual graph, and [`verify`](report::verify) compares
//! the closed form `2^(C - w(w+1)/2)` against:
//!
//! * a direct transfer-matrix count ([`count_matchings`]),
//! * graphical condensation ([`condensation_count`]),
//! * weighted Aztec-diamond reduction ([`shuffle_count`]).

pub mod condensation;
pub mod enumerate;
pub mod matchgraph;
pub mod region;
pub mod render;
pub mod report;
pub mod shuffle;

pub use num_bigint::BigUint;
pub use num_rational::BigRational;

/// Exact tiling counts.
pub type BigCount = BigUint;

pub use condensation::{
    case_recurrence, condensation_count, pick_corners, verify_kuo, CaseId, CaseRecurrence,
    CondensationError, Condenser, CornerQuad, IdentityForm,
};
pub use enumerate::{compositions, valid_specs};
pub use matchgraph::{
    count_matchings, dual_graph, matching_generating_function, permanent_oracle, reduce_forced,
    CountError, Edge, MatchGraph, Part, Vertex,
};
pub use region::{
    build_region, formula_count, lemma_identities, structural_stats, Cell, CellKind, Color,
    FormulaError, IdentityCheck, InvalidReason, LatticePoint, Region, RegionSpec, RegionStats,
    SpecInvalid,
};
pub use report::{verify, VerifyReport};
pub use shuffle::{
    characteristic_matrix, encode, exponent_s, sh, shuffle_count, AztecGraph, EncodedSeq,
    ShuffleError, Sign, WeightMatrix, WeightPattern,
};

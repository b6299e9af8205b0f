//! Projective geometry over small prime fields, used as an independent
//! oracle for stratum point counts.

pub mod field;
pub mod oracle;
pub mod subspace;

pub use field::{FieldError, PrimeField};
pub use oracle::{
    count_a, count_a_star, count_arrangement_complement, count_b, count_open_flag_orbit, count_stratum, cross_ratio,
    cross_ratio_planes, cross_ratio_points, run_oracle, BaseFlag, Geometry, OracleKind,
    OracleResult, TetraConfig,
};
pub use subspace::{enumerate_subspaces, Subspace};

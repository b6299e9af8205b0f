//! Graded commutative algebra over F_p and Q.

pub mod checks;
pub mod field;
pub mod groebner;
pub mod monomial;
pub mod poly;
pub mod presentation;
pub mod quotient;

pub use field::{Field, Fp, Rationals};
pub use groebner::{Budget, DegreeStats, GbError, GbOptions, GroebnerBasis, PairOrder};
pub use monomial::Monomial;
pub use poly::Polynomial;
pub use presentation::{build_completed_presentation, build_presentation, disjointness_relations, eliminate_linear, AlgebraError, Elimination, Family, Presentation, QPoly, Relation, VarId};
pub use quotient::{hilbert_function, pairing_rank, HilbertFunction, QuotientRing, RingError};
pub use checks::{run_ring_checks, RingCheck, RingContext, RingField, RingOptions, RingReport};

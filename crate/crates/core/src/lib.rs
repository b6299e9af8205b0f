//! Exact verification engine for the compactified space of labeled tetrahedra in P³:
//! stratification combinatorics, point counts, a finite-field oracle and
//! the cohomology ring presentation.

pub mod algebra;
pub mod data;
pub mod diagram;
pub mod counting;
pub mod projgeom;
pub mod report;

//! Exact computations on hypermetric cones and polytopes, cut polytopes and
//! metric polytopes.

pub mod catalog;
pub mod exactla;
pub mod formats;
pub mod graphs;
pub mod hypfamilies;
pub mod lattice;
pub mod polyhedra;
pub mod repartition;
pub mod symmetry;

//! Finite real spectral triples of matrix-geometry type, their product with
//! a U(1) internal space, inner fluctuations, gauge transformations, and the
//! exact fermionic integral.

pub mod axioms;
pub mod clifford;
pub mod fermion;
pub mod fluctuations;
pub mod geometry;
pub mod io;
pub mod numerics;
pub mod product;
pub mod sampling;

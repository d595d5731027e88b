//! Exact computations on integral lattices of signature (1, n): wall
//! enumeration, chambers of the positive cone, the reflection walk to nef
//! isotropic classes, hyperbolic distances and cusp orbits.

#![allow(clippy::needless_range_loop)]

pub mod catalog;
pub mod cli;
pub mod cone;
pub mod cusps;
pub mod enumeration;
pub mod error;
pub mod isotropic;
pub mod json;
pub mod lattice;
pub mod render;

pub use cone::{
    chamber_graph, chamber_of, hyperbolic_distance, nef_walk, Chamber, ChamberGraph, WalkOrder,
    WalkStep, WalkTrace,
};
pub use cusps::{canonical_cusp, cusp_orbits, CuspBounds, CuspOrbit, CuspReport};
pub use enumeration::{nef_certificate, separating_walls, vectors_of_square, NefCertificate, Wall};
pub use error::{Error, Result};
pub use isotropic::{enumerate_isotropic_lines, find_isotropic};
pub use lattice::{Inertia, LatVec, Lattice, LatticeDescription};

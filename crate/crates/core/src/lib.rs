//! Convex segment disjointness graphs and convex thrackles.
//!
//! `D_n` has one vertex per chord of `n` points in convex position, with
//! disjoint chords adjacent. Its independent sets are the convex thrackles,
//! so colourings of `D_n` are partitions of the chords into thrackles. The
//! crate covers the structure of maximal thrackles, two ways of finding an
//! edge shared by two of them, the union edge bound for families, and exact
//! chromatic numbers at small `n`.

pub mod bounds;
pub mod chromatic;
pub mod circle;
pub mod common_edge;
pub mod convex;
pub mod error;
pub mod io;
pub mod render;
pub mod thrackle;

pub use bounds::{FamilyStats, ThrackleFamily};
pub use chromatic::{BoundReport, ChromaticOutcome, ColoringCertificate};
pub use circle::{CirclePoint, PlInvolution, Rational};
pub use convex::{build_disjointness_graph, Chord, DisjointnessGraph, PointConfig};
pub use error::{Error, Result};
pub use thrackle::{MaximalThrackleStructure, Thrackle, Wedge};

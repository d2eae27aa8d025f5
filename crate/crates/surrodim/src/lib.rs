//! Exact lower bounds on the prediction dimension of consistent convex
//! surrogate losses for finite-outcome prediction tasks.
//!
//! Everything is computed in exact rational arithmetic: property cells and
//! level sets are polyhedra, bounds come from linear programs with
//! checkable certificates, and verification failures carry concrete
//! witness points.

pub mod bounds;
pub mod bundled;
pub mod cells;
pub mod cli;
pub mod distribution;
pub mod error;
pub mod flats;
pub mod fm;
pub mod indirect;
pub mod io;
pub mod linalg;
pub mod loss;
pub mod lp;
pub mod polyhedron;
pub mod rational;
pub mod recover;
pub mod render;
pub mod surrogate;

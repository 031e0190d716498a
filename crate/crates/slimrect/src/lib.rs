//! Slim rectangular (SR) semimodular lattices with exact-coordinate C1-diagrams.
//!
//! The toolkit builds SR lattices from grids by multifork extensions, thrusting
//! and lamp widening, detects their lamps and trajectories, computes congruence
//! lattices both by a brute-force closure oracle and by the lamp machinery,
//! forms quotient diagrams, and realizes the ordinal-sum-at-an-element and
//! adding-a-brother poset constructions as SR lattices.
//!
//! All geometry is exact: coordinates are merge coordinates `(p, q)` with
//! `p = (x+y)/2`, `q = (y-x)/2`, stored as arbitrary-precision rationals, so
//! every slope and membership predicate is a rational sign test.

pub mod birkhoff;
pub mod congruence;
pub mod constructions;
pub mod diagram;
pub mod error;
pub mod geometry;
pub mod io;
pub mod lamps;
pub mod poset;
pub mod quotient;
pub mod rat;
pub mod realize;
pub mod render;
pub mod report;
pub mod structure;
pub mod suites;

pub use diagram::{Coord, LatticeDiagram, SlopeClass};
pub use error::{Error, Result};
pub use rat::Rat;

//! Chain-level invariants of braid cobordisms over the integers.
//!
//! The crate builds, for each braid word, a complex of graded bimodules over
//! a zigzag algebra, and for each movie of Reidemeister moves, births and
//! deaths between two words, a chain map between the associated complexes.
//! All arithmetic is exact; homotopy statements come with explicit integer
//! witnesses that are verified by substitution, never by numerics.

pub mod bimod;
pub mod braid;
pub mod complex;
pub mod decat;
pub mod equiv;
pub mod functor;
pub mod homotopy;
pub mod intmat;
pub mod rouquier;
pub mod simplify;
pub mod tensorflat;
pub mod zigzag;

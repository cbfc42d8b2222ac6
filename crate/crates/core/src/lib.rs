//! Corner-labeled pentagonal tilings of the sphere: combinatorial maps,
//! anglewise vertex combinations, constructions, exhaustive search,
//! label transforms and orbit counting.

pub mod avc;
pub mod constructors;
pub mod counting;
pub mod enumerator;
pub mod export;
pub mod io;
pub mod label;
pub mod map;
pub mod transforms;

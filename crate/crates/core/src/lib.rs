//! Coset n-valued groups `Sp(1)/G` and `SO(3)/G` for the finite rotation
//! groups `G ⊂ SO(3)`.

pub mod axioms;
pub mod cli;
pub mod coset;
mod matching;
pub mod quaternion;
pub mod rotgroups;
pub mod tol;
pub mod topology;

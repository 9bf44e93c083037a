//! Indices of immersed Lagrangian surfaces in parallelizable symplectic
//! 4-manifolds, computed on orbit surfaces of profile curves.

pub mod acceptance;
pub mod cli;
pub mod fibers;
pub mod framing;
pub mod index;
pub mod profile;
pub mod splin;
pub mod surface;
pub mod surgery;

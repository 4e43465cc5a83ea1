//! Infinitesimal interlocking verification for assemblies of polyhedral blocks.

pub mod assembly;
pub mod cli;
pub mod contacts;
pub mod generators;
pub mod geometry;
pub mod lozenge;
pub mod matrix;
pub mod solver;

//! Exact finite-rank toolkit for twisted affinisations of Hilbert–Lie algebras.

pub mod affine;
pub mod autnorm;
pub mod cli;
pub mod cyclo;
pub mod energy;
pub mod loopalg;
pub mod matrix;
pub mod rational;
pub mod rootdata;
pub mod sample;
pub mod weyl;

//! Finite-scale constructions of approximate subgroups and their
//! certificates: cut-and-project model sets over quadratic fields and
//! `ℤ[1/p]`, Brooks counting quasimorphisms on the free group, and the
//! central extension of `SL₂(ℤ[1/p])` twisted by the bounded Euler cocycle.

pub mod arith;
pub mod cli;
pub mod cutproject;
pub mod euler;
pub mod group;
pub mod quasi;

//! Finite-model toolkit for Fischer-Servi intuitionistic modal logics.

pub mod algebra;
pub mod amalgam;
pub mod cli;
pub mod counterexample;
pub mod formula;
pub mod frame;
pub mod io;
pub mod morphism;
pub mod nodeset;
pub mod random;
pub mod report;
pub mod semantics;

//! Lattice recognition, witness construction and feasibility planning for
//! simple branched coverings of closed oriented 4-manifolds.

#![allow(clippy::needless_range_loop)]

pub mod classify;
pub mod lattice;
pub mod witness;
pub mod monodromy;
pub mod planner;
pub mod selfcheck;

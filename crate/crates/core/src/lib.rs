//! Exact verification toolkit for the Yangians of orthogonal and symplectic
//! Lie algebras in their J, current (Drinfeld) and RTT presentations.

pub mod cli;
pub mod drinfeld;
pub mod isom;
pub mod liealg;
pub mod linalg;
pub mod report;
pub mod rmatrix;
pub mod scalar;
pub mod upbw;
pub mod yangrep;

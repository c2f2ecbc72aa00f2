//! Set-partition calculus, joint cumulants, dependency graphs and multigraph functionals.

pub mod cumulant;
pub mod graph;
pub mod setpart;

pub use cumulant::*;
pub use graph::*;
pub use setpart::*;

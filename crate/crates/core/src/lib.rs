//! Fewnomial systems, their Gale duals, the bound catalog, the Khovanskii–Rolle
//! tower and an exact positive-solution counter for small instances.

pub mod bounds;
pub mod cli;
pub mod count;
pub mod error;
pub mod gale;
pub mod hull;
pub mod hypersurface;
pub mod linalg;
pub mod poly;
pub mod polytope;
pub mod rational;
pub mod real;
pub mod rolle;
pub mod sturm;
pub mod suite;
pub mod system;

pub use error::{FnxError, Result};
pub use rational::Rational;

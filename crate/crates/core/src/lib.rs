//! Spherical averages of measure-preserving F₂-actions, their Markov lift,
//! and the glued ball systems on which the L¹ pointwise ergodic theorem fails.

pub mod ball;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod estimator;
pub mod fgroup;
pub mod finite_system;
pub mod glue;
pub mod prf;
pub mod rational;

pub use dynamics::{Dynamics, PointFunction};
pub use error::{Error, Result};
pub use fgroup::{Letter, ReducedWord};

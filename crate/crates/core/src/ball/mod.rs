//! The infinite ball: interior spheres `Y_n` glued to a two-component boundary.

pub mod chain;
pub mod cylinder;
pub mod digits;
pub mod point;
pub mod survey;
pub mod word;

pub use chain::{ancient_density, calibrate, verify_chain, AncientChain, Calibration, SlotRule};
pub use cylinder::{Atom, CylinderFunction, ProjectedCylinder};
pub use digits::{DigitStream, Direction, TernaryThreshold, DEFAULT_LOOKAHEAD};
pub use point::{BallPoint, BallSystem, Stratum};
pub use survey::{axiom_survey, AxiomReport};
pub use word::LazyWord;

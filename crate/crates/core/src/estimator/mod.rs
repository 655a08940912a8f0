//! Monte Carlo and exact evaluation of spherical averages, chain profiles and
//! population surveys.

pub mod avg;
pub mod ci;
pub mod coverage;
pub mod profile;
pub mod survey;

pub use avg::{exact_avg_small, maximal_profile, mc_avg, AvgEstimate};
pub use ci::{CiRule, Interval};
pub use coverage::{coverage_trials, CoverageReport};
pub use profile::{ChainEvaluator, ComponentFilter, ConstantProfile, Profile, ProfileSource, TimeWindow};
pub use survey::{
    allocate, choose_window, coupling_deviation, mixing_diagnostic, population_survey, CouplingReport, Criterion,
    MixingReport, Statistic, SurveyParams, SurveyReport, WindowChoice,
};

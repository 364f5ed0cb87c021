//! Random sprinkling: the sets `X_p`, the miss probability of a path
//! family, the useful-element exploration, and boosting experiments.

mod boost;
mod exploration;
mod instance;

pub use boost::{boost_experiment, s_i, BoostParams, BoostReport, BoostTrial, SeRequirement};
pub use exploration::{useful_exploration, ExplorationOutcome, ExplorationStep, ExplorationTrace};
pub use instance::{miss_probability, sample_xp, sample_xp_mask, Conflict, MissReport, SprinkleInstance};

//! Monte Carlo experiments over the rotated-and-reduced ensemble.
//!
//! Trial `i` of a run always draws from stream `(seed, i)`, and results are
//! aggregated in trial order, so a run is reproducible bit for bit regardless
//! of how many workers execute it.

pub mod ensemble;
pub mod io;
pub mod lipschitz;
pub mod sweep;
pub mod trial;

pub use ensemble::{run_ensemble, summarize, EnsembleConfig, EnsembleRun, RunSummary, TailFraction, TAIL_LADDER};
pub use lipschitz::{f_of_unitary, lipschitz_bound, lipschitz_probe, LipschitzReport};
pub use sweep::{concentration_sweep, KRule, SweepConfig, SweepPoint};
pub use trial::{run_profile_trial, run_trial, trial_from_unitary, TrialFailure, TrialRecord};

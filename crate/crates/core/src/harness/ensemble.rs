use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::entropy_big_g;
use crate::error::{Error, Result};
use crate::haar::SeededStream;
use crate::harness::trial::{run_profile_trial, run_trial, TrialFailure, TrialRecord};
use crate::profiles::{sample_profile, ProfileSpec};

/// Tail thresholds as multiples of `λ̄⁴`.
pub const TAIL_LADDER: [f64; 5] = [0.01, 0.05, 0.1, 0.5, 1.0];

/// Trials allowed to fail, as a fraction of the run.
pub const FAILURE_BUDGET: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleConfig {
    pub profile: ProfileSpec,
    pub k: usize,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

/// Exceedance fraction of `Δ² > factor · λ̄⁴` over completed trials.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TailFraction {
    pub factor: f64,
    pub fraction: f64,
    /// Markov bound `E[f / λ̄⁴] / (2 factor)`.
    pub markov_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub n: usize,
    pub k: usize,
    /// Completed trials; the statistics below are over these.
    pub samples: usize,
    pub failures: usize,
    pub mean_lambda_bar: f64,
    pub mean_f: f64,
    pub se_f: f64,
    pub mean_tr_jm2: f64,
    pub se_tr_jm2: f64,
    pub mean_tr_jm4: f64,
    pub se_tr_jm4: f64,
    pub mean_entropy: f64,
    pub se_entropy: f64,
    pub std_entropy: f64,
    /// Mean of `k G(λ̄)`, the entropy of the flat thermal spectrum.
    pub thermal_entropy: f64,
    pub tails: Vec<TailFraction>,
    pub max_purity_residual: f64,
    /// Largest relative gap between `f` and `2Δ²` seen in any trial.
    pub max_f_delta_discrepancy: f64,
}

impl RunSummary {
    /// `|mean entropy - k G(λ̄)|`.
    pub fn entropy_gap(&self) -> f64 {
        (self.mean_entropy - self.thermal_entropy).abs()
    }
}

/// Trials in id order plus any flagged failures.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRun {
    pub summary: RunSummary,
    pub trials: Vec<TrialRecord>,
    pub failures: Vec<TrialFailure>,
}

/// Sample mean and standard deviation (`n - 1` denominator, zero for one
/// sample).
fn mean_std(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let count = values.clone().count();
    if count == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.clone().sum::<f64>() / count as f64;
    if count < 2 {
        return (mean, 0.0);
    }
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / (count - 1) as f64;
    (mean, var.sqrt())
}

/// Aggregates trials in the order given. Deterministic for a fixed order.
pub fn summarize(n: usize, k: usize, trials: &[TrialRecord], failures: usize) -> Result<RunSummary> {
    let samples = trials.len();
    let root = (samples as f64).sqrt();
    let stat = |get: fn(&TrialRecord) -> f64| mean_std(trials.iter().map(get));
    let (mean_f, sd_f) = stat(|t| t.f_value);
    let (mean_tr_jm2, sd2) = stat(|t| t.tr_jm2);
    let (mean_tr_jm4, sd4) = stat(|t| t.tr_jm4);
    let (mean_entropy, std_entropy) = stat(|t| t.entropy);
    let (mean_lambda_bar, _) = stat(|t| t.lambda_bar);
    let thermal = trials
        .iter()
        .map(|t| Ok(t.k as f64 * entropy_big_g(t.lambda_bar)?))
        .collect::<Result<Vec<f64>>>()?;
    let thermal_entropy = thermal.iter().sum::<f64>() / samples.max(1) as f64;

    let normalized: Vec<f64> = trials.iter().map(|t| t.f_value / t.lambda_bar.powi(4)).collect();
    let mean_normalized = normalized.iter().sum::<f64>() / samples.max(1) as f64;
    let mut tails = Vec::with_capacity(TAIL_LADDER.len());
    for &factor in &TAIL_LADDER {
        let exceed = trials
            .iter()
            .filter(|t| t.delta * t.delta > factor * t.lambda_bar.powi(4))
            .count();
        let fraction = if samples == 0 {
            0.0
        } else {
            exceed as f64 / samples as f64
        };
        let markov_bound = mean_normalized / (2.0 * factor);
        // Tolerates rounding between f and 2Δ² on the boundary trials.
        if fraction > markov_bound * (1.0 + 1e-6) + 1e-12 {
            return Err(Error::MarkovViolation {
                threshold: factor,
                fraction,
                bound: markov_bound,
            });
        }
        tails.push(TailFraction {
            factor,
            fraction,
            markov_bound,
        });
    }

    Ok(RunSummary {
        n,
        k,
        samples,
        failures,
        mean_lambda_bar,
        mean_f,
        se_f: sd_f / root,
        mean_tr_jm2,
        se_tr_jm2: sd2 / root,
        mean_tr_jm4,
        se_tr_jm4: sd4 / root,
        mean_entropy,
        se_entropy: std_entropy / root,
        std_entropy,
        thermal_entropy,
        tails,
        max_purity_residual: trials.iter().map(|t| t.purity_residual).fold(0.0, f64::max),
        max_f_delta_discrepancy: trials.iter().map(|t| t.f_delta_discrepancy()).fold(0.0, f64::max),
    })
}

/// Runs `samples` independent trials, trial `i` on stream `(seed, i)`.
///
/// Results do not depend on `workers`: trials are collected in id order and
/// aggregated sequentially. Resampled profiles draw a fresh spectrum per
/// trial. The run fails if more than [`FAILURE_BUDGET`] of trials fail.
pub fn run_ensemble(cfg: &EnsembleConfig) -> Result<EnsembleRun> {
    if cfg.samples == 0 {
        return Err(Error::InvalidSpec("samples must be at least 1".into()));
    }
    if cfg.workers == 0 {
        return Err(Error::InvalidSpec("workers must be at least 1".into()));
    }
    cfg.profile.validate()?;
    let n = cfg.profile.modes();
    if cfg.k == 0 || cfg.k > n {
        return Err(Error::InvalidSubsystem { k: cfg.k, n });
    }
    let fixed = if cfg.profile.is_random() {
        None
    } else {
        Some(sample_profile(&cfg.profile, &mut SeededStream::new(cfg.seed, 0).rng())?)
    };

    let one = |i: usize| {
        let stream = SeededStream::new(cfg.seed, i as u64);
        match &fixed {
            Some(z) => run_trial(z, cfg.k, stream),
            None => run_profile_trial(&cfg.profile, cfg.k, stream),
        }
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| Error::WorkerPool(e.to_string()))?;
    let outcomes: Vec<Result<TrialRecord>> = pool.install(|| (0..cfg.samples).into_par_iter().map(one).collect());

    let mut trials = Vec::with_capacity(outcomes.len());
    let mut failures = Vec::new();
    for (i, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(t) => trials.push(t),
            Err(e) => failures.push(TrialFailure {
                trial_id: i as u64,
                reason: e.to_string(),
            }),
        }
    }
    if failures.len() as f64 > FAILURE_BUDGET * cfg.samples as f64 {
        return Err(Error::FailureBudgetExceeded {
            failed: failures.len(),
            total: cfg.samples,
        });
    }
    let summary = summarize(n, cfg.k, &trials, failures.len())?;
    Ok(EnsembleRun {
        summary,
        trials,
        failures,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(profile: ProfileSpec, k: usize, samples: usize, workers: usize) -> EnsembleConfig {
        EnsembleConfig {
            profile,
            k,
            samples,
            seed: 2024,
            workers,
        }
    }

    #[test]
    fn vacuum_ensemble() {
        let run = run_ensemble(&config(ProfileSpec::Constant { z: 1.0, n: 4 }, 2, 50, 2)).unwrap();
        let s = &run.summary;
        assert_eq!(s.samples, 50);
        assert_eq!(s.failures, 0);
        assert!(s.mean_f.abs() < 1e-20);
        assert!(s.std_entropy < 1e-10);
        assert!(s.tails.iter().all(|t| t.fraction == 0.0));
        assert!((s.mean_tr_jm2 + 4.0).abs() < 1e-12);
    }

    #[test]
    fn worker_count_does_not_change_results() {
        let profile = ProfileSpec::Fixed {
            z: vec![3.0, 1.0, 1.0, 1.0],
        };
        let a = run_ensemble(&config(profile.clone(), 1, 200, 1)).unwrap();
        let b = run_ensemble(&config(profile, 1, 200, 4)).unwrap();
        assert_eq!(a.summary, b.summary);
        assert_eq!(a.trials, b.trials);
        let spec = ProfileSpec::Canonical {
            energy: 8.0,
            n: 4,
            temperature: None,
        };
        let a = run_ensemble(&config(spec.clone(), 2, 100, 1)).unwrap();
        let b = run_ensemble(&config(spec, 2, 100, 3)).unwrap();
        assert_eq!(a.summary, b.summary);
    }

    #[test]
    fn tails_are_monotone_and_bounded() {
        let run = run_ensemble(&config(ProfileSpec::Constant { z: 4.0, n: 4 }, 2, 400, 2)).unwrap();
        let tails = &run.summary.tails;
        assert!(tails.windows(2).all(|w| w[1].fraction <= w[0].fraction));
        assert!(tails.iter().all(|t| (0.0..=1.0).contains(&t.fraction)));
        assert!(tails.iter().all(|t| t.fraction <= t.markov_bound));
        assert!(tails[0].fraction > 0.0);
    }

    #[test]
    fn invalid_configs() {
        let p = ProfileSpec::Constant { z: 2.0, n: 3 };
        assert!(run_ensemble(&config(p.clone(), 4, 10, 1)).is_err());
        assert!(run_ensemble(&config(p.clone(), 1, 0, 1)).is_err());
        assert!(run_ensemble(&config(p, 1, 10, 0)).is_err());
    }

    #[test]
    fn summary_statistics() {
        let (m, s) = mean_std([1.0, 2.0, 3.0, 4.0].into_iter());
        assert_eq!(m, 2.5);
        assert!((s - (5.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(mean_std([7.0].into_iter()), (7.0, 0.0));
    }
}

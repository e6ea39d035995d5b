use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::ensemble::{run_ensemble, EnsembleConfig, EnsembleRun};
use crate::profiles::{ProfileSpec, ScalingConfig};

/// Subsystem size as a function of the mode count.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "snake_case")]
pub enum KRule {
    Fixed { k: usize },
    /// `k_n = floor(k_k n^kappa)` from the scaling configuration.
    Scaled,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    /// Profile kind to grow; resized for each `n`.
    pub base_profile: ProfileSpec,
    pub n_list: Vec<usize>,
    pub k_rule: KRule,
    #[serde(default)]
    pub scaling: ScalingConfig,
    pub samples: usize,
    pub seed: u64,
    pub workers: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub n: usize,
    pub k: usize,
    pub profile: ProfileSpec,
    pub run: EnsembleRun,
}

/// Seed for the ensemble at mode count `n`, so each size gets its own
/// streams.
pub fn seed_for_modes(seed: u64, n: usize) -> u64 {
    seed.wrapping_add((n as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15))
}

/// One ensemble per entry of `n_list`, in order.
pub fn concentration_sweep(cfg: &SweepConfig) -> Result<Vec<SweepPoint>> {
    cfg.scaling.validate()?;
    if cfg.n_list.is_empty() {
        return Err(Error::InvalidSpec("empty n list".into()));
    }
    let mut points = Vec::with_capacity(cfg.n_list.len());
    for &n in &cfg.n_list {
        if n < 4 {
            return Err(Error::DimensionTooSmall { n, required: 4 });
        }
        let profile = cfg.scaling.profile_at(&cfg.base_profile, n)?;
        let k = match cfg.k_rule {
            KRule::Fixed { k } => k,
            KRule::Scaled => cfg.scaling.subsystem_size(n),
        };
        let run = run_ensemble(&EnsembleConfig {
            profile: profile.clone(),
            k,
            samples: cfg.samples,
            seed: seed_for_modes(cfg.seed, n),
            workers: cfg.workers,
        })?;
        points.push(SweepPoint { n, k, profile, run });
    }
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sweep(base: ProfileSpec, n_list: Vec<usize>, k_rule: KRule, scaling: ScalingConfig) -> SweepConfig {
        SweepConfig {
            base_profile: base,
            n_list,
            k_rule,
            scaling,
            samples: 40,
            seed: 5,
            workers: 2,
        }
    }

    #[test]
    fn vacuum_sweep_is_flat() {
        let cfg = sweep(
            ProfileSpec::Constant { z: 1.0, n: 1 },
            vec![4, 8, 16],
            KRule::Fixed { k: 2 },
            ScalingConfig::default(),
        );
        for p in concentration_sweep(&cfg).unwrap() {
            let s = &p.run.summary;
            assert_eq!(s.n, p.n);
            assert!(s.mean_f.abs() < 1e-20);
            assert!(s.entropy_gap() < 1e-9);
            assert!(s.tails.iter().all(|t| t.fraction == 0.0));
        }
    }

    #[test]
    fn scaled_rules() {
        let scaling = ScalingConfig {
            zeta: 0.25,
            kappa: 0.5,
            c_z: 1.0,
            k_k: 1.0,
        };
        let cfg = sweep(ProfileSpec::Constant { z: 2.0, n: 1 }, vec![4, 16], KRule::Scaled, scaling);
        let points = concentration_sweep(&cfg).unwrap();
        assert_eq!(points[0].k, 2);
        assert_eq!(points[1].k, 4);
        assert_eq!(points[1].profile, ProfileSpec::Constant { z: 2.0, n: 16 });
    }

    #[test]
    fn rejects_small_modes() {
        let cfg = sweep(
            ProfileSpec::Constant { z: 2.0, n: 1 },
            vec![3],
            KRule::Fixed { k: 1 },
            ScalingConfig::default(),
        );
        assert!(matches!(concentration_sweep(&cfg), Err(Error::DimensionTooSmall { .. })));
    }

    #[test]
    fn sizes_use_distinct_seeds() {
        assert_ne!(seed_for_modes(1, 16), seed_for_modes(1, 32));
        assert_eq!(seed_for_modes(1, 16), seed_for_modes(1, 16));
    }
}

//! Flag and config-file handling. Flags override values from `--config`.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use gaussent::profiles::{ProfileSpec, ScalingConfig};

#[derive(Debug, Parser)]
#[command(name = "gaussent", version, about = "Random passive Gaussian state ensembles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: CommandName,

    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommandName {
    /// Exact Haar moments of tr((JM)^2), tr((JM)^4) and E f.
    Moments,
    /// Monte Carlo ensembles over a list of mode counts.
    Concentration,
    /// Character-formula Weingarten values against the Gram oracle.
    WeingartenCheck,
    /// Draw squeezing spectra from a profile.
    ProfileSample,
    /// Per-trial records of one ensemble.
    TrialDump,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KRuleName {
    Fixed,
    Scaled,
}

#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Flat JSON object with the same field names as the flags (snake_case).
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Mode count.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Subsystem size.
    #[arg(long, global = true)]
    pub k: Option<usize>,
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Worker threads; defaults to GAUSSENT_WORKERS, then the core count.
    #[arg(long, global = true, env = "GAUSSENT_WORKERS")]
    pub workers: Option<usize>,
    /// fixed:<z,..> | constant:<z>x<n> | micro:<E> | canonical:<E>[:<T>]
    #[arg(long, global = true, value_name = "PROFILE")]
    pub z_profile: Option<String>,
    #[arg(long, global = true)]
    pub zeta: Option<f64>,
    #[arg(long, global = true)]
    pub kappa: Option<f64>,
    #[arg(long = "c-z", global = true)]
    pub c_z: Option<f64>,
    #[arg(long = "k-k", global = true)]
    pub k_k: Option<f64>,
    /// Comma-separated mode counts for `concentration`.
    #[arg(long, global = true, value_delimiter = ',')]
    pub n_list: Option<Vec<usize>>,
    #[arg(long, global = true, value_enum)]
    pub k_rule: Option<KRuleName>,
    /// Weingarten order for `weingarten-check`.
    #[arg(long, global = true)]
    pub p: Option<usize>,
    /// Inclusive mode range `a:b` for `weingarten-check`.
    #[arg(long, global = true, value_name = "A:B")]
    pub n_range: Option<String>,
    /// Output file, or directory for `concentration`; standard output if absent.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

/// Contents of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub subcommand: Option<CommandName>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub samples: Option<usize>,
    pub seed: Option<u64>,
    pub workers: Option<usize>,
    pub z_profile: Option<String>,
    pub scaling: Option<ScalingConfig>,
    pub n_list: Option<Vec<usize>>,
    pub k_rule: Option<KRuleName>,
    pub p: Option<usize>,
    pub n_range: Option<String>,
    pub output_path: Option<PathBuf>,
    pub format: Option<Format>,
}

/// Validated configuration. Only fields the subcommand reads are required.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub subcommand: CommandName,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    #[serde(skip)]
    pub workers: usize,
    pub z_profile: Option<ProfileSpec>,
    pub scaling: ScalingConfig,
    pub n_list: Option<Vec<usize>>,
    pub k_rule: KRuleName,
    pub p: Option<usize>,
    pub n_range: Option<(usize, usize)>,
    #[serde(skip)]
    pub output_path: Option<PathBuf>,
    pub format: Format,
}

/// A configuration problem, reported with exit code 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl RunConfig {
    pub fn require<T: Copy>(&self, value: Option<T>, flag: &str) -> Result<T, UsageError> {
        value.ok_or_else(|| UsageError(format!("{:?} requires --{flag}", self.subcommand)))
    }

    /// SHA-256 of the canonical JSON of everything that affects results.
    /// Output location and worker count are excluded.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_vec(self).expect("config serializes");
        let digest = Sha256::digest(&canonical);
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn provenance(&self) -> Vec<String> {
        vec![format!(
            "gaussent {} seed={} config=sha256:{} entropy_unit=nats",
            env!("CARGO_PKG_VERSION"),
            self.seed,
            self.hash()
        )]
    }
}

fn parse_range(text: &str) -> Result<(usize, usize), UsageError> {
    let bad = || UsageError(format!("--n-range `{text}`: expected A:B with A <= B"));
    let (a, b) = text.split_once(':').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

/// Merges flags over the config file and validates field formats.
pub fn resolve(command: CommandName, flags: Flags, file: ConfigFile) -> Result<RunConfig, UsageError> {
    if let Some(sub) = file.subcommand {
        if sub != command {
            return Err(UsageError(format!(
                "config file is for {sub:?} but the subcommand is {command:?}"
            )));
        }
    }
    let n = flags.n.or(file.n);
    let workers = flags.workers.or(file.workers).unwrap_or_else(default_workers);
    if workers == 0 {
        return Err(UsageError("--workers must be at least 1".into()));
    }
    let n_list = flags.n_list.or(file.n_list);
    let z_profile = match flags.z_profile.or(file.z_profile) {
        Some(text) => {
            // A sweep's base profile is sized by its first entry unless --n says otherwise.
            let modes = match command {
                CommandName::Concentration => n.or_else(|| n_list.as_ref().and_then(|l| l.first().copied())),
                _ => n,
            };
            Some(ProfileSpec::parse(&text, modes).map_err(|e| UsageError(format!("--z-profile: {e}")))?)
        }
        None => None,
    };
    let base = file.scaling.unwrap_or_default();
    let scaling = ScalingConfig {
        zeta: flags.zeta.unwrap_or(base.zeta),
        kappa: flags.kappa.unwrap_or(base.kappa),
        c_z: flags.c_z.unwrap_or(base.c_z),
        k_k: flags.k_k.unwrap_or(base.k_k),
    };
    scaling.validate().map_err(|e| UsageError(e.to_string()))?;
    let n_range = flags
        .n_range
        .or(file.n_range)
        .map(|t| parse_range(&t))
        .transpose()?;
    Ok(RunConfig {
        subcommand: command,
        n,
        k: flags.k.or(file.k),
        samples: flags.samples.or(file.samples),
        seed: flags.seed.or(file.seed).unwrap_or(0),
        workers,
        z_profile,
        scaling,
        n_list,
        k_rule: flags.k_rule.or(file.k_rule).unwrap_or(KRuleName::Fixed),
        p: flags.p.or(file.p),
        n_range,
        output_path: flags.output.or(file.output_path),
        format: flags.format.or(file.format).unwrap_or(Format::Json),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn flags() -> Flags {
        Flags {
            workers: Some(1),
            ..Flags::default()
        }
    }

    #[test]
    fn flags_override_file() {
        let file: ConfigFile = serde_json::from_str(r#"{"n": 4, "k": 2, "seed": 9, "z_profile": "micro:20"}"#).unwrap();
        let cfg = resolve(
            CommandName::TrialDump,
            Flags {
                k: Some(1),
                ..flags()
            },
            file,
        )
        .unwrap();
        assert_eq!(cfg.k, Some(1));
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.z_profile, Some(ProfileSpec::Microcanonical { energy: 20.0, n: 4 }));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<ConfigFile>(r#"{"n": 4, "bogus": 1}"#).is_err());
    }

    #[test]
    fn subcommand_mismatch() {
        let file = ConfigFile {
            subcommand: Some(CommandName::Moments),
            ..ConfigFile::default()
        };
        assert!(resolve(CommandName::TrialDump, flags(), file).is_err());
    }

    #[test]
    fn ranges() {
        assert_eq!(parse_range("4:8").unwrap(), (4, 8));
        assert!(parse_range("8:4").is_err());
        assert!(parse_range("4").is_err());
    }

    #[test]
    fn hash_ignores_output_and_workers() {
        let a = resolve(CommandName::Moments, flags(), ConfigFile::default()).unwrap();
        let mut b = a.clone();
        b.workers = 7;
        b.output_path = Some("x.json".into());
        assert_eq!(a.hash(), b.hash());
        b.seed = 1;
        assert_ne!(a.hash(), b.hash());
        assert_eq!(a.hash().len(), 64);
    }
}

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use gaussent::harness::io::{write_json, write_trials_csv};
use gaussent::harness::{concentration_sweep, run_ensemble, EnsembleConfig, KRule, SweepConfig, TrialFailure};
use gaussent::moments::{
    expected_f_exact, fourth_moment_trace_exact, moment_inputs_from_spectrum, moment_report,
    second_moment_trace_exact, tilde_lambda_squared_exact, MomentReport,
};
use gaussent::profiles::{sample_profile_stream, ProfileSpec, ScalingConfig};
use gaussent::weingarten::{gram_weingarten_oracle, partitions, weingarten};
use gaussent::{RunSummary, SeededStream};

use crate::config::{CommandName, Format, KRuleName, RunConfig, UsageError};
use crate::output::{emit, ensure_dir, write_atomic};

pub enum Failure {
    Usage(UsageError),
    Core(gaussent::Error),
    /// A check the command performs did not hold.
    Mismatch(String),
}

impl From<UsageError> for Failure {
    fn from(e: UsageError) -> Self {
        Failure::Usage(e)
    }
}

impl From<gaussent::Error> for Failure {
    fn from(e: gaussent::Error) -> Self {
        Failure::Core(e)
    }
}

type Outcome = Result<(), Failure>;

pub fn run(cfg: &RunConfig) -> Outcome {
    match cfg.subcommand {
        CommandName::Moments => moments(cfg),
        CommandName::Concentration => concentration(cfg),
        CommandName::WeingartenCheck => weingarten_check(cfg),
        CommandName::ProfileSample => profile_sample(cfg),
        CommandName::TrialDump => trial_dump(cfg),
    }
}

fn profile(cfg: &RunConfig) -> Result<&ProfileSpec, UsageError> {
    let spec = cfg
        .z_profile
        .as_ref()
        .ok_or_else(|| UsageError(format!("{:?} requires --z-profile", cfg.subcommand)))?;
    if let Some(n) = cfg.n {
        if spec.modes() != n {
            return Err(UsageError(format!("--z-profile has {} modes but --n is {n}", spec.modes())));
        }
    }
    Ok(spec)
}

fn comment_lines(w: &mut dyn Write, lines: &[String]) -> std::io::Result<()> {
    for line in lines {
        writeln!(w, "# {line}")?;
    }
    Ok(())
}

#[derive(Serialize)]
struct ExactMoments {
    tilde_lambda_sq: String,
    second_moment: String,
    fourth_moment: String,
    expected_f: String,
}

#[derive(Serialize)]
struct MomentsDoc<'a> {
    provenance: &'a str,
    z: &'a [f64],
    report: MomentReport,
    exact: ExactMoments,
}

/// Random profiles are drawn once from stream `(seed, 0)`.
fn moments(cfg: &RunConfig) -> Outcome {
    let spec = profile(cfg)?;
    spec.validate()?;
    let z = sample_profile_stream(spec, SeededStream::new(cfg.seed, 0))?;
    let k = cfg.k.unwrap_or(1);
    let mi = moment_inputs_from_spectrum(&z, k)?;
    let report = moment_report(&mi)?;
    let exact = ExactMoments {
        tilde_lambda_sq: tilde_lambda_squared_exact(&mi)?.to_string(),
        second_moment: second_moment_trace_exact(&mi)?.to_string(),
        fourth_moment: fourth_moment_trace_exact(&mi)?.to_string(),
        expected_f: expected_f_exact(&mi)?.to_string(),
    };
    let provenance = cfg.provenance();
    emit(cfg.output_path.as_deref(), |w| match cfg.format {
        Format::Json => write_json(
            w,
            &MomentsDoc {
                provenance: &provenance[0],
                z: z.values(),
                report,
                exact,
            },
        ),
        Format::Csv => {
            comment_lines(w, &provenance)?;
            writeln!(
                w,
                "n,k,lambda_bar,tilde_lambda_sq,second_moment,fourth_moment,expected_f,\
                 tilde_lambda_sq_exact,second_moment_exact,fourth_moment_exact,expected_f_exact"
            )?;
            writeln!(
                w,
                "{},{},{},{},{},{},{},{},{},{},{}",
                report.n,
                report.k,
                report.lambda_bar,
                report.tilde_lambda_sq,
                report.second_moment,
                report.fourth_moment,
                report.expected_f,
                exact.tilde_lambda_sq,
                exact.second_moment,
                exact.fourth_moment,
                exact.expected_f
            )?;
            Ok(())
        }
    })?;
    Ok(())
}

#[derive(Serialize)]
struct WeingartenRow {
    n: usize,
    p: usize,
    cycle_type: String,
    weingarten: String,
    oracle: String,
    agree: bool,
}

fn weingarten_check(cfg: &RunConfig) -> Outcome {
    let p = cfg.p.unwrap_or(4);
    let (lo, hi) = cfg.n_range.unwrap_or((p, p + 4));
    let mut rows = Vec::new();
    for n in lo..=hi {
        let oracle = gram_weingarten_oracle(n, p)?;
        for class in partitions(p) {
            let value = weingarten(n, &class)?;
            let reference = &oracle[&class];
            rows.push(WeingartenRow {
                n,
                p,
                cycle_type: class.to_string(),
                agree: &value == reference,
                weingarten: value.to_string(),
                oracle: reference.to_string(),
            });
        }
    }
    let provenance = cfg.provenance();
    emit(cfg.output_path.as_deref(), |w| match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                provenance: &'a str,
                rows: &'a [WeingartenRow],
            }
            write_json(
                w,
                &Doc {
                    provenance: &provenance[0],
                    rows: &rows,
                },
            )
        }
        Format::Csv => {
            comment_lines(w, &provenance)?;
            writeln!(w, "n,p,cycle_type,weingarten,oracle,agree")?;
            for r in &rows {
                writeln!(
                    w,
                    "{},{},\"{}\",{},{},{}",
                    r.n, r.p, r.cycle_type, r.weingarten, r.oracle, r.agree
                )?;
            }
            Ok(())
        }
    })?;
    let bad = rows.iter().filter(|r| !r.agree).count();
    if bad > 0 {
        return Err(Failure::Mismatch(format!(
            "{bad} of {} Weingarten values disagree with the oracle",
            rows.len()
        )));
    }
    Ok(())
}

/// Sample `i` is drawn from stream `(seed, i)`.
fn profile_sample(cfg: &RunConfig) -> Outcome {
    let spec = profile(cfg)?;
    spec.validate()?;
    let samples = cfg.samples.unwrap_or(1);
    let spectra = (0..samples)
        .map(|i| sample_profile_stream(spec, SeededStream::new(cfg.seed, i as u64)).map(|z| z.values().to_vec()))
        .collect::<gaussent::Result<Vec<_>>>()?;
    let provenance = cfg.provenance();
    emit(cfg.output_path.as_deref(), |w| match cfg.format {
        Format::Json => {
            #[derive(Serialize)]
            struct Doc<'a> {
                provenance: &'a str,
                profile: &'a ProfileSpec,
                spectra: &'a [Vec<f64>],
            }
            write_json(
                w,
                &Doc {
                    provenance: &provenance[0],
                    profile: spec,
                    spectra: &spectra,
                },
            )
        }
        Format::Csv => {
            comment_lines(w, &provenance)?;
            let n = spec.modes();
            let header: Vec<String> = (1..=n).map(|j| format!("z_{j}")).collect();
            writeln!(w, "sample,{},energy", header.join(","))?;
            for (i, z) in spectra.iter().enumerate() {
                let energy: f64 = z.iter().map(|v| v + 1.0 / v).sum();
                let cols: Vec<String> = z.iter().map(|v| v.to_string()).collect();
                writeln!(w, "{i},{},{energy}", cols.join(","))?;
            }
            Ok(())
        }
    })?;
    Ok(())
}

#[derive(Serialize)]
struct RunDoc<'a> {
    provenance: &'a str,
    profile: &'a ProfileSpec,
    summary: &'a RunSummary,
    failures: &'a [TrialFailure],
    #[serde(skip_serializing_if = "Option::is_none")]
    trials: Option<&'a [gaussent::TrialRecord]>,
}

/// With CSV output to a file, the run summary goes to `<output>.summary.json`.
fn trial_dump(cfg: &RunConfig) -> Outcome {
    let spec = profile(cfg)?;
    let run = run_ensemble(&EnsembleConfig {
        profile: spec.clone(),
        k: cfg.k.unwrap_or(1),
        samples: cfg.require(cfg.samples, "samples")?,
        seed: cfg.seed,
        workers: cfg.workers,
    })?;
    let provenance = cfg.provenance();
    let doc = |trials| RunDoc {
        provenance: &provenance[0],
        profile: spec,
        summary: &run.summary,
        failures: &run.failures,
        trials,
    };
    match cfg.format {
        Format::Json => emit(cfg.output_path.as_deref(), |w| write_json(w, &doc(Some(&run.trials))))?,
        Format::Csv => {
            emit(cfg.output_path.as_deref(), |w| write_trials_csv(w, &provenance, &run.trials))?;
            if let Some(path) = &cfg.output_path {
                let mut name = path.as_os_str().to_owned();
                name.push(".summary.json");
                write_atomic(Path::new(&name), |w| write_json(w, &doc(None)))?;
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    provenance: &'a str,
    base_profile: &'a ProfileSpec,
    scaling: &'a ScalingConfig,
    samples: usize,
    seed: u64,
    points: Vec<PointDoc<'a>>,
    /// `mean_f(n_{i+1}) / mean_f(n_i)`.
    mean_f_ratios: Vec<f64>,
}

#[derive(Serialize)]
struct PointDoc<'a> {
    n: usize,
    k: usize,
    profile: &'a ProfileSpec,
    trials_file: Option<String>,
    summary: &'a RunSummary,
    failures: &'a [TrialFailure],
}

/// With `--output DIR`, writes `trials_n<N>.csv` per size and `summary.json`.
fn concentration(cfg: &RunConfig) -> Outcome {
    let base = profile(cfg)?;
    let n_list = cfg
        .n_list
        .clone()
        .ok_or_else(|| UsageError("concentration requires --n-list".into()))?;
    let k_rule = match cfg.k_rule {
        KRuleName::Fixed => KRule::Fixed { k: cfg.k.unwrap_or(1) },
        KRuleName::Scaled => KRule::Scaled,
    };
    let samples = cfg.require(cfg.samples, "samples")?;
    let points = concentration_sweep(&SweepConfig {
        base_profile: base.clone(),
        n_list,
        k_rule,
        scaling: cfg.scaling,
        samples,
        seed: cfg.seed,
        workers: cfg.workers,
    })?;
    let provenance = cfg.provenance();
    let trials_name = |n: usize| format!("trials_n{n}.csv");
    let doc = SweepDoc {
        provenance: &provenance[0],
        base_profile: base,
        scaling: &cfg.scaling,
        samples,
        seed: cfg.seed,
        points: points
            .iter()
            .map(|p| PointDoc {
                n: p.n,
                k: p.k,
                profile: &p.profile,
                trials_file: cfg.output_path.as_ref().map(|_| trials_name(p.n)),
                summary: &p.run.summary,
                failures: &p.run.failures,
            })
            .collect(),
        mean_f_ratios: points
            .windows(2)
            .map(|w| w[1].run.summary.mean_f / w[0].run.summary.mean_f)
            .collect(),
    };
    match &cfg.output_path {
        Some(dir) => {
            ensure_dir(dir)?;
            for p in &points {
                let mut lines = provenance.clone();
                lines.push(format!("n={} k={} profile={}", p.n, p.k, p.profile));
                write_atomic(&dir.join(trials_name(p.n)), |w| write_trials_csv(w, &lines, &p.run.trials))?;
            }
            write_atomic(&dir.join("summary.json"), |w| write_json(w, &doc))?;
        }
        None => emit(None, |w| match cfg.format {
            Format::Json => write_json(w, &doc),
            Format::Csv => {
                comment_lines(w, &provenance)?;
                writeln!(
                    w,
                    "n,k,samples,failures,mean_lambda_bar,mean_f,se_f,mean_entropy,std_entropy,\
                     thermal_entropy,entropy_gap,max_purity_residual"
                )?;
                for p in &points {
                    let s = &p.run.summary;
                    writeln!(
                        w,
                        "{},{},{},{},{},{},{},{},{},{},{},{}",
                        s.n,
                        s.k,
                        s.samples,
                        s.failures,
                        s.mean_lambda_bar,
                        s.mean_f,
                        s.se_f,
                        s.mean_entropy,
                        s.std_entropy,
                        s.thermal_entropy,
                        s.entropy_gap(),
                        s.max_purity_residual
                    )?;
                }
                Ok(())
            }
        })?,
    }
    Ok(())
}

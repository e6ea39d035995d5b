//! Trial CSV and summary JSON formats.
//!
//! A trial file starts with one or more `#` comment lines carrying
//! provenance, followed by the header
//! `trial_id,n,k,lambda_bar,entropy,f,delta,purity_residual,lambda_1,..,lambda_k`
//! and one row per completed trial. Floats are written in shortest
//! round-trip form, so reading a file back reproduces every value exactly.
//! `tr_jm2` and `tr_jm4` are not stored; the reader recomputes them from the
//! spectrum as `-2 Σ λ²` and `2 Σ λ⁴`.

use std::io::{BufRead, BufReader, Read, Write};

use serde::{de::DeserializeOwned, Serialize};

use crate::error::{Error, Result};
use crate::harness::trial::TrialRecord;

pub const TRIAL_SCHEMA: &str = "gaussent-trials/1";

const FIXED_COLUMNS: [&str; 8] = [
    "trial_id",
    "n",
    "k",
    "lambda_bar",
    "entropy",
    "f",
    "delta",
    "purity_residual",
];

pub fn trial_header(k: usize) -> Vec<String> {
    FIXED_COLUMNS
        .iter()
        .map(|s| s.to_string())
        .chain((1..=k).map(|j| format!("lambda_{j}")))
        .collect()
}

/// Writes `# schema=...` plus one comment line per entry of `provenance`,
/// then the header and rows. All records must share one `k`.
/// Shortest round-trip text, in exponent form outside `[1e-5, 1e16)`.
fn float(x: f64) -> String {
    let mag = x.abs();
    if mag == 0.0 || (1e-5..1e16).contains(&mag) || !x.is_finite() {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

pub fn write_trials_csv<W: Write>(mut out: W, provenance: &[String], trials: &[TrialRecord]) -> Result<()> {
    let k = trials.first().map_or(0, |t| t.k);
    if let Some(t) = trials.iter().find(|t| t.k != k || t.symplectic_spectrum.len() != k) {
        return Err(Error::MalformedCsv(format!(
            "trial {} has k = {}, expected {k}",
            t.trial_id, t.k
        )));
    }
    writeln!(out, "# schema={TRIAL_SCHEMA}")?;
    for line in provenance {
        writeln!(out, "# {line}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    w.write_record(trial_header(k))?;
    for t in trials {
        let mut row = vec![
            t.trial_id.to_string(),
            t.n.to_string(),
            t.k.to_string(),
            float(t.lambda_bar),
            float(t.entropy),
            float(t.f_value),
            float(t.delta),
            float(t.purity_residual),
        ];
        row.extend(t.symplectic_spectrum.iter().map(|&l| float(l)));
        w.write_record(&row)?;
    }
    w.flush()?;
    Ok(())
}

/// Comment lines (without the leading `# `) and records of a trial file.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialFile {
    pub comments: Vec<String>,
    pub trials: Vec<TrialRecord>,
}

pub fn read_trials_csv<R: Read>(input: R) -> Result<TrialFile> {
    let mut reader = BufReader::new(input);
    let mut comments = Vec::new();
    loop {
        let buf = reader.fill_buf()?;
        if buf.first() != Some(&b'#') {
            break;
        }
        let mut line = String::new();
        reader.read_line(&mut line)?;
        let text = line.trim_end().trim_start_matches('#').trim_start();
        comments.push(text.to_string());
    }
    if !comments.iter().any(|c| c == &format!("schema={TRIAL_SCHEMA}")) {
        return Err(Error::MalformedCsv(format!("missing `# schema={TRIAL_SCHEMA}` line")));
    }

    let mut csv_reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(reader);
    let header: Vec<String> = csv_reader.headers()?.iter().map(str::to_string).collect();
    let k = header.len().saturating_sub(FIXED_COLUMNS.len());
    if header != trial_header(k) {
        return Err(Error::MalformedCsv(format!("unexpected header {header:?}")));
    }

    let mut trials = Vec::new();
    for (line, row) in csv_reader.records().enumerate() {
        let row = row?;
        let bad = |field: &str| Error::MalformedCsv(format!("row {}: bad `{field}`", line + 1));
        let int = |i: usize| row[i].parse::<u64>().map_err(|_| bad(&header[i]));
        let real = |i: usize| row[i].parse::<f64>().map_err(|_| bad(&header[i]));
        let spectrum = (8..8 + k).map(real).collect::<Result<Vec<f64>>>()?;
        let record_k = int(2)? as usize;
        if record_k != k {
            return Err(bad("k"));
        }
        trials.push(TrialRecord {
            trial_id: int(0)?,
            n: int(1)? as usize,
            k: record_k,
            lambda_bar: real(3)?,
            entropy: real(4)?,
            f_value: real(5)?,
            delta: real(6)?,
            purity_residual: real(7)?,
            tr_jm2: -2.0 * spectrum.iter().map(|l| l * l).sum::<f64>(),
            tr_jm4: 2.0 * spectrum.iter().map(|l| l.powi(4)).sum::<f64>(),
            symplectic_spectrum: spectrum,
        });
    }
    Ok(TrialFile { comments, trials })
}

/// Pretty-printed JSON with a trailing newline.
pub fn write_json<W: Write, T: Serialize>(mut out: W, value: &T) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

pub fn read_json<R: Read, T: DeserializeOwned>(input: R) -> Result<T> {
    Ok(serde_json::from_reader(input)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::haar::SeededStream;
    use crate::harness::trial::run_trial;
    use crate::symplectic::SqueezingSpectrum;

    fn records() -> Vec<TrialRecord> {
        let z = SqueezingSpectrum::new(vec![3.0, 2.0, 1.0, 1.5]).unwrap();
        (0..5).map(|i| run_trial(&z, 2, SeededStream::new(1, i)).unwrap()).collect()
    }

    #[test]
    fn csv_round_trip() {
        let trials = records();
        let mut buf = Vec::new();
        write_trials_csv(&mut buf, &["seed=1".to_string()], &trials).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("# schema=gaussent-trials/1\n# seed=1\n"));
        assert!(text.contains("\ntrial_id,n,k,lambda_bar,entropy,f,delta,purity_residual,lambda_1,lambda_2\n"));

        let file = read_trials_csv(buf.as_slice()).unwrap();
        assert_eq!(file.comments, vec!["schema=gaussent-trials/1", "seed=1"]);
        assert_eq!(file.trials.len(), trials.len());
        for (a, b) in file.trials.iter().zip(&trials) {
            assert_eq!(a.symplectic_spectrum, b.symplectic_spectrum);
            assert_eq!((a.trial_id, a.n, a.k), (b.trial_id, b.n, b.k));
            assert_eq!(
                (a.lambda_bar, a.entropy, a.f_value, a.delta, a.purity_residual),
                (b.lambda_bar, b.entropy, b.f_value, b.delta, b.purity_residual)
            );
            assert!((a.tr_jm2 - b.tr_jm2).abs() < 1e-9 * b.tr_jm2.abs());
            assert!((a.tr_jm4 - b.tr_jm4).abs() < 1e-9 * b.tr_jm4.abs());
        }
        let mut again = Vec::new();
        write_trials_csv(&mut again, &["seed=1".to_string()], &file.trials).unwrap();
        assert_eq!(again, buf);
    }

    #[test]
    fn rejects_malformed() {
        assert!(read_trials_csv("trial_id,n\n1,2\n".as_bytes()).is_err());
        let text = "# schema=gaussent-trials/1\ntrial_id,n,k,lambda_bar,entropy,f,delta,purity_residual,lambda_1\n0,2,1,x,0,0,0,0,1\n";
        assert!(matches!(read_trials_csv(text.as_bytes()), Err(Error::MalformedCsv(_))));
        let text = "# schema=gaussent-trials/1\ntrial_id,n,k,lambda_bar,entropy,f,delta,purity_residual,lambda_1\n0,2,2,1,0,0,0,0,1\n";
        assert!(read_trials_csv(text.as_bytes()).is_err());
        let mut mixed = records();
        mixed[1].k = 1;
        assert!(write_trials_csv(Vec::new(), &[], &mixed).is_err());
    }

    #[test]
    fn empty_file_round_trip() {
        let mut buf = Vec::new();
        write_trials_csv(&mut buf, &[], &[]).unwrap();
        assert!(read_trials_csv(buf.as_slice()).unwrap().trials.is_empty());
    }

    #[test]
    fn json_round_trip() {
        let trials = records();
        let mut buf = Vec::new();
        write_json(&mut buf, &trials).unwrap();
        let back: Vec<TrialRecord> = read_json(buf.as_slice()).unwrap();
        assert_eq!(back, trials);
    }
}

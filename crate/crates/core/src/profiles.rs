//! Squeezing-spectrum generators: fixed and constant profiles, and the
//! microcanonical and canonical measures over mode energies.
//!
//! Mode energies follow `E_j = z_j + 1/z_j >= 2`; a sampled energy vector is
//! mapped back to squeezing parameters with [`squeezing_from_energy`].

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::haar::SeededStream;
use crate::symplectic::{squeezing_from_energy, SqueezingSpectrum};

/// How the squeezing spectrum of each trial is produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ProfileSpec {
    Fixed { z: Vec<f64> },
    Constant { z: f64, n: usize },
    /// Energies uniform on `{E_j >= 2, Σ E_j <= energy}`.
    Microcanonical { energy: f64, n: usize },
    /// Independent `E_j = 2 + Exp(mean T)`; `T` defaults to `energy / n`.
    Canonical {
        energy: f64,
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        temperature: Option<f64>,
    },
}

impl ProfileSpec {
    pub fn modes(&self) -> usize {
        match self {
            ProfileSpec::Fixed { z } => z.len(),
            ProfileSpec::Constant { n, .. }
            | ProfileSpec::Microcanonical { n, .. }
            | ProfileSpec::Canonical { n, .. } => *n,
        }
    }

    /// True for the two random measures, which draw a fresh spectrum per trial.
    pub fn is_random(&self) -> bool {
        matches!(self, ProfileSpec::Microcanonical { .. } | ProfileSpec::Canonical { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidSpec(msg));
        if self.modes() == 0 {
            return invalid("profile needs at least one mode".into());
        }
        match self {
            ProfileSpec::Fixed { z } => {
                SqueezingSpectrum::new(z.clone())?;
            }
            ProfileSpec::Constant { z, n } => {
                SqueezingSpectrum::constant(*z, *n)?;
            }
            ProfileSpec::Microcanonical { energy, n } => {
                let minimum = 2.0 * *n as f64;
                if !energy.is_finite() {
                    return invalid(format!("energy {energy} is not finite"));
                }
                if *energy < minimum {
                    return Err(Error::EnergyTooSmall {
                        energy: *energy,
                        minimum,
                    });
                }
            }
            ProfileSpec::Canonical {
                energy,
                temperature,
                ..
            } => {
                if !(energy.is_finite() && *energy > 0.0) {
                    return invalid(format!("canonical energy {energy} must be positive"));
                }
                if let Some(t) = temperature {
                    if !(t.is_finite() && *t > 0.0) {
                        return invalid(format!("temperature {t} must be positive"));
                    }
                }
            }
        }
        Ok(())
    }

    /// Mean of the exponential part of each canonical mode energy.
    pub fn temperature(&self) -> Option<f64> {
        match self {
            ProfileSpec::Canonical {
                energy,
                n,
                temperature,
            } => Some(temperature.unwrap_or(energy / *n as f64)),
            _ => None,
        }
    }

    /// The same kind of profile on `n` modes. Energies scale with the mode
    /// count so the energy per mode is unchanged; fixed profiles cannot be
    /// resized.
    pub fn with_modes(&self, n: usize) -> Result<ProfileSpec> {
        let per_mode = |e: f64, n0: usize| e * n as f64 / n0 as f64;
        Ok(match self {
            ProfileSpec::Fixed { z } if z.len() == n => self.clone(),
            ProfileSpec::Fixed { z } => {
                return Err(Error::InvalidSpec(format!(
                    "fixed profile has {} modes, {n} requested",
                    z.len()
                )))
            }
            ProfileSpec::Constant { z, .. } => ProfileSpec::Constant { z: *z, n },
            ProfileSpec::Microcanonical { energy, n: n0 } => ProfileSpec::Microcanonical {
                energy: per_mode(*energy, *n0),
                n,
            },
            ProfileSpec::Canonical {
                energy,
                n: n0,
                temperature,
            } => ProfileSpec::Canonical {
                energy: per_mode(*energy, *n0),
                n,
                temperature: *temperature,
            },
        })
    }

    /// Parses `fixed:<z,..>`, `constant:<z>x<n>`, `micro:<E>`, or
    /// `canonical:<E>[:<T>]`. The last two take their mode count from
    /// `modes`; the first two check it when it is given.
    pub fn parse(text: &str, modes: Option<usize>) -> Result<ProfileSpec> {
        let bad = |why: &str| Error::InvalidSpec(format!("z-profile `{text}`: {why}"));
        let number = |s: &str| -> Result<f64> { s.trim().parse::<f64>().map_err(|_| bad("not a number")) };
        let (kind, rest) = text.split_once(':').ok_or_else(|| bad("expected <kind>:<args>"))?;
        let need_modes = || modes.ok_or_else(|| bad("mode count required (--n)"));
        let spec = match kind.trim() {
            "fixed" => ProfileSpec::Fixed {
                z: rest.split(',').map(number).collect::<Result<_>>()?,
            },
            "constant" => {
                let (z, n) = rest.split_once('x').ok_or_else(|| bad("expected constant:<z>x<n>"))?;
                let n = n.trim().parse::<usize>().map_err(|_| bad("mode count is not an integer"))?;
                ProfileSpec::Constant { z: number(z)?, n }
            }
            "micro" | "microcanonical" => ProfileSpec::Microcanonical {
                energy: number(rest)?,
                n: need_modes()?,
            },
            "canonical" => {
                let (energy, temperature) = match rest.split_once(':') {
                    Some((e, t)) => (number(e)?, Some(number(t)?)),
                    None => (number(rest)?, None),
                };
                ProfileSpec::Canonical {
                    energy,
                    n: need_modes()?,
                    temperature,
                }
            }
            _ => return Err(bad("unknown kind")),
        };
        if let Some(n) = modes {
            if spec.modes() != n {
                return Err(bad(&format!("profile has {} modes but n = {n}", spec.modes())));
            }
        }
        spec.validate()?;
        Ok(spec)
    }
}

impl fmt::Display for ProfileSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileSpec::Fixed { z } => {
                let parts: Vec<String> = z.iter().map(|v| v.to_string()).collect();
                write!(f, "fixed:{}", parts.join(","))
            }
            ProfileSpec::Constant { z, n } => write!(f, "constant:{z}x{n}"),
            ProfileSpec::Microcanonical { energy, .. } => write!(f, "micro:{energy}"),
            ProfileSpec::Canonical {
                energy,
                temperature: Some(t),
                ..
            } => write!(f, "canonical:{energy}:{t}"),
            ProfileSpec::Canonical { energy, .. } => write!(f, "canonical:{energy}"),
        }
    }
}

impl FromStr for ProfileSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProfileSpec::parse(s, None)
    }
}

/// Mode energies for one draw from `spec`.
pub fn sample_energies<R: Rng + ?Sized>(spec: &ProfileSpec, rng: &mut R) -> Result<Vec<f64>> {
    spec.validate()?;
    match spec {
        ProfileSpec::Fixed { .. } | ProfileSpec::Constant { .. } => {
            let z = sample_profile(spec, rng)?;
            Ok(z.values().iter().map(|v| v + 1.0 / v).collect())
        }
        ProfileSpec::Microcanonical { energy, n } => {
            let excess = energy - 2.0 * *n as f64;
            // First n coordinates of a uniform point on the (n+1)-simplex.
            let g: Vec<f64> = (0..=*n).map(|_| Exp1.sample(rng)).collect();
            let total: f64 = g.iter().sum();
            Ok(g[..*n].iter().map(|gj| 2.0 + excess * gj / total).collect())
        }
        ProfileSpec::Canonical { n, .. } => {
            let t = spec.temperature().expect("canonical");
            Ok((0..*n)
                .map(|_| {
                    let x: f64 = Exp1.sample(rng);
                    2.0 + t * x
                })
                .collect())
        }
    }
}

/// One squeezing spectrum drawn from `spec`.
pub fn sample_profile<R: Rng + ?Sized>(spec: &ProfileSpec, rng: &mut R) -> Result<SqueezingSpectrum> {
    spec.validate()?;
    match spec {
        ProfileSpec::Fixed { z } => SqueezingSpectrum::new(z.clone()),
        ProfileSpec::Constant { z, n } => SqueezingSpectrum::constant(*z, *n),
        _ => {
            let z = sample_energies(spec, rng)?
                .into_iter()
                .map(squeezing_from_energy)
                .collect::<Result<Vec<f64>>>()?;
            SqueezingSpectrum::new(z)
        }
    }
}

/// [`sample_profile`] on a fresh stream.
pub fn sample_profile_stream(spec: &ProfileSpec, stream: SeededStream) -> Result<SqueezingSpectrum> {
    sample_profile(spec, &mut stream.rng())
}

/// Growth of squeezing and subsystem size with the mode count:
/// `||Z_n||_∞ <= c_z n^zeta` and `k_n <= k_k n^kappa`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScalingConfig {
    pub zeta: f64,
    pub kappa: f64,
    pub c_z: f64,
    pub k_k: f64,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        Self {
            zeta: 0.0,
            kappa: 0.0,
            c_z: 1.0,
            k_k: 1.0,
        }
    }
}

impl ScalingConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.zeta >= 0.0 && self.kappa >= 0.0 && self.c_z > 0.0 && self.k_k > 0.0;
        if !ok || ![self.zeta, self.kappa, self.c_z, self.k_k].iter().all(|v| v.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "scaling needs zeta, kappa >= 0 and c_z, k_k > 0, got {self:?}"
            )));
        }
        Ok(())
    }

    pub fn squeezing_bound(&self, n: usize) -> f64 {
        self.c_z * (n as f64).powf(self.zeta)
    }

    /// `floor(k_k n^kappa)`, clamped to `1..=n`.
    pub fn subsystem_size(&self, n: usize) -> usize {
        let k = (self.k_k * (n as f64).powf(self.kappa)).floor() as usize;
        k.clamp(1, n)
    }

    /// The profile for `n` modes. Constant profiles with `zeta > 0` take
    /// `z = max(1, c_z n^zeta)`; every other profile is resized with
    /// [`ProfileSpec::with_modes`].
    pub fn profile_at(&self, base: &ProfileSpec, n: usize) -> Result<ProfileSpec> {
        match base {
            ProfileSpec::Constant { .. } if self.zeta > 0.0 => Ok(ProfileSpec::Constant {
                z: self.squeezing_bound(n).max(1.0),
                n,
            }),
            _ => base.with_modes(n),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symplectic::mode_energy_from_squeezing;

    #[test]
    fn parse_round_trip() {
        let cases = [
            ("fixed:3,1,1", None),
            ("constant:2x16", Some(16)),
            ("micro:12", Some(3)),
            ("canonical:8", Some(4)),
            ("canonical:8:0.5", Some(4)),
        ];
        for (text, n) in cases {
            let spec = ProfileSpec::parse(text, n).unwrap();
            assert_eq!(spec.to_string(), text);
            assert_eq!(ProfileSpec::parse(&spec.to_string(), n).unwrap(), spec);
        }
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            ProfileSpec::parse("micro:6", Some(4)),
            Err(Error::EnergyTooSmall { .. })
        ));
        for bad in ["micro:6", "fixed:3,0.5", "constant:2", "gauss:1", "canonical:-1", "fixed:a"] {
            assert!(ProfileSpec::parse(bad, Some(4)).is_err(), "{bad}");
        }
        assert!(ProfileSpec::parse("fixed:3,1,1", Some(4)).is_err());
        assert!(ProfileSpec::parse("canonical:8", None).is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec = ProfileSpec::Canonical {
            energy: 8.0,
            n: 4,
            temperature: None,
        };
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(text, r#"{"kind":"canonical","energy":8.0,"n":4}"#);
        assert_eq!(serde_json::from_str::<ProfileSpec>(&text).unwrap(), spec);
        assert!(serde_json::from_str::<ProfileSpec>(r#"{"kind":"fixed","z":[1],"x":1}"#).is_err());
    }

    #[test]
    fn deterministic_profiles() {
        let mut rng = SeededStream::new(0, 0).rng();
        let spec = ProfileSpec::Fixed { z: vec![3.0, 1.0, 1.0] };
        assert_eq!(sample_profile(&spec, &mut rng).unwrap().values(), &[3.0, 1.0, 1.0]);
        let spec = ProfileSpec::Constant { z: 2.0, n: 5 };
        assert_eq!(sample_profile(&spec, &mut rng).unwrap().values(), &[2.0; 5]);
    }

    #[test]
    fn microcanonical_corner_is_vacuum() {
        let spec = ProfileSpec::Microcanonical { energy: 8.0, n: 4 };
        let z = sample_profile_stream(&spec, SeededStream::new(1, 2)).unwrap();
        assert_eq!(z.values(), &[1.0; 4]);
    }

    #[test]
    fn microcanonical_constraints_and_round_trip() {
        let spec = ProfileSpec::Microcanonical { energy: 20.0, n: 6 };
        let mut rng = SeededStream::new(5, 0).rng();
        for _ in 0..2000 {
            let e = sample_energies(&spec, &mut rng).unwrap();
            assert!(e.iter().all(|&v| v >= 2.0));
            assert!(e.iter().sum::<f64>() <= 20.0 + 1e-12);
        }
        let mut a = SeededStream::new(5, 1).rng();
        let mut b = SeededStream::new(5, 1).rng();
        let e = sample_energies(&spec, &mut a).unwrap();
        let z = sample_profile(&spec, &mut b).unwrap();
        let back: f64 = z.values().iter().map(|&v| mode_energy_from_squeezing(v).unwrap()).sum();
        assert!((back - e.iter().sum::<f64>()).abs() < 1e-10);
    }

    #[test]
    fn canonical_temperature() {
        let spec = ProfileSpec::parse("canonical:8", Some(4)).unwrap();
        assert_eq!(spec.temperature(), Some(2.0));
        let spec = ProfileSpec::parse("canonical:8:0.25", Some(4)).unwrap();
        assert_eq!(spec.temperature(), Some(0.25));
        assert!(spec.is_random());
        assert!(!ProfileSpec::Constant { z: 1.0, n: 1 }.is_random());
    }

    #[test]
    fn resizing_keeps_energy_per_mode() {
        let spec = ProfileSpec::Microcanonical { energy: 12.0, n: 3 };
        assert_eq!(
            spec.with_modes(6).unwrap(),
            ProfileSpec::Microcanonical { energy: 24.0, n: 6 }
        );
        assert!(ProfileSpec::Fixed { z: vec![2.0] }.with_modes(2).is_err());
    }

    #[test]
    fn scaling_rules() {
        let s = ScalingConfig {
            zeta: 0.5,
            kappa: 0.5,
            c_z: 1.0,
            k_k: 0.5,
        };
        s.validate().unwrap();
        assert_eq!(s.subsystem_size(16), 2);
        assert_eq!(s.subsystem_size(1), 1);
        assert_eq!(
            s.profile_at(&ProfileSpec::Constant { z: 9.0, n: 1 }, 16).unwrap(),
            ProfileSpec::Constant { z: 4.0, n: 16 }
        );
        let flat = ScalingConfig::default();
        assert_eq!(
            flat.profile_at(&ProfileSpec::Constant { z: 2.0, n: 1 }, 8).unwrap(),
            ProfileSpec::Constant { z: 2.0, n: 8 }
        );
        assert!(ScalingConfig { c_z: 0.0, ..flat }.validate().is_err());
    }
}

//! Experiment configuration: a flat sectioned `key = value` text format.
//!
//! Sections are `[general]`, `[verify]`, `[saturate]`, `[converge]`,
//! `[transfer]`, `[bch]` and `[plan]`; every CLI flag overrides its config
//! key. The resolved configuration is echoed verbatim into the run manifest
//! so an output directory documents exactly what produced it.

use crate::poly::SpherePolynomial;
use crate::propagator::convergence::geometric_deltas;
use std::collections::BTreeMap;
use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: expected `key = value`, found {found:?}")]
    BadLine { line: usize, found: String },
    #[error("line {line}: unknown section {section:?}")]
    UnknownSection { line: usize, section: String },
    #[error("unknown key {key:?} in section [{section}]")]
    UnknownKey { section: String, key: String },
    #[error("bad value for {key}: {reason}")]
    BadValue { key: String, reason: String },
    #[error("cannot read config {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

const SECTIONS: &[&str] = &[
    "general", "verify", "saturate", "converge", "transfer", "bch", "plan",
];

/// Fully resolved experiment parameters (defaults + config file + flags).
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub j_max: u32,
    pub oversample: u32,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Conjugation phase φ for converge / bch.
    pub phi: SpherePolynomial,
    /// Constant control vector for converge.
    pub u: [f64; 3],
    /// Optional free potential V.
    pub potential: Option<SpherePolynomial>,
    /// δ schedule, strictly decreasing.
    pub deltas: Vec<f64>,
    /// Initial state index (j, m).
    pub psi0: (u32, i32),
    /// Saturation levels n.
    pub levels: u32,
    /// Saturation degree cap.
    pub degree_cap: u32,
    /// Randomized identity-suite sample count.
    pub pairs: u32,
    /// Negative-control switch for verify-lemma.
    pub mutate: bool,
    /// Transfer j.
    pub transfer_j: u32,
    /// Transfer fit-degree sweep.
    pub degrees: Vec<u32>,
    /// "exact" | "fitted" | "synthesized".
    pub transfer_mode: String,
    /// Step size for synthesized transfer / plan execution previews.
    pub exec_delta: f64,
    /// Plan compilation target.
    pub plan_target: SpherePolynomial,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            j_max: 16,
            oversample: 2,
            seed: 7,
            out_dir: PathBuf::from("runs"),
            phi: SpherePolynomial::z(),
            u: [0.0; 3],
            potential: None,
            deltas: geometric_deltas(1e-1, 1e-4, 13),
            psi0: (0, 0),
            levels: 4,
            degree_cap: 4,
            pairs: 20,
            mutate: false,
            transfer_j: 1,
            degrees: vec![1, 2, 4, 8, 16, 24, 32, 48, 64],
            transfer_mode: "fitted".to_string(),
            exec_delta: 1e-3,
            plan_target: SpherePolynomial::monomial(1, 0, 1)
                .scale(&crate::poly::int(4)),
        }
    }
}

impl ExperimentConfig {
    /// Applies a config file on top of the defaults.
    pub fn load(path: &std::path::Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut config = ExperimentConfig::default();
        config.apply_text(&text)?;
        Ok(config)
    }

    pub fn apply_text(&mut self, text: &str) -> Result<(), ConfigError> {
        for ((section, key), value) in parse_sections(text)? {
            self.apply_key(&section, &key, &value)?;
        }
        Ok(())
    }

    fn apply_key(&mut self, section: &str, key: &str, value: &str) -> Result<(), ConfigError> {
        let full = |key: &str| format!("[{section}] {key}");
        match (section, key) {
            ("general", "jmax") => self.j_max = parse_num(value, &full(key))?,
            ("general", "oversample") => {
                let oversample: u32 = parse_num(value, &full(key))?;
                if oversample < 1 {
                    return Err(ConfigError::BadValue {
                        key: full(key),
                        reason: "oversample factor must be at least 1".into(),
                    });
                }
                self.oversample = oversample;
            }
            ("general", "seed") => self.seed = parse_num(value, &full(key))?,
            ("general", "out") => self.out_dir = PathBuf::from(value),
            ("verify", "n") | ("saturate", "n") | ("plan", "n") => {
                self.levels = parse_num(value, &full(key))?
            }
            ("verify", "pairs") => self.pairs = parse_num(value, &full(key))?,
            ("verify", "mutate") => self.mutate = parse_bool(value, &full(key))?,
            ("saturate", "cap") | ("plan", "cap") => {
                self.degree_cap = parse_num(value, &full(key))?
            }
            ("converge", "phi") | ("bch", "phi") => self.phi = parse_poly(value, &full(key))?,
            ("converge", "u") => self.u = parse_triple(value, &full(key))?,
            ("converge", "potential") => {
                self.potential = Some(parse_poly(value, &full(key))?)
            }
            ("converge", "deltas") => self.deltas = parse_deltas(value, &full(key))?,
            ("converge", "psi0") => self.psi0 = parse_state(value, &full(key))?,
            ("transfer", "j") => self.transfer_j = parse_num(value, &full(key))?,
            ("transfer", "degrees") => self.degrees = parse_list(value, &full(key))?,
            ("transfer", "mode") => {
                let mode = value.trim();
                if !["exact", "fitted", "synthesized"].contains(&mode) {
                    return Err(ConfigError::BadValue {
                        key: full(key),
                        reason: format!("unknown mode {mode:?}"),
                    });
                }
                self.transfer_mode = mode.to_string();
            }
            ("transfer", "delta") | ("plan", "delta") => {
                let delta: f64 = parse_num(value, &full(key))?;
                if !(delta > 0.0 && delta.is_finite()) {
                    return Err(ConfigError::BadValue {
                        key: full(key),
                        reason: "step size must be positive and finite".into(),
                    });
                }
                self.exec_delta = delta;
            }
            ("plan", "target") => self.plan_target = parse_poly(value, &full(key))?,
            _ => {
                return Err(ConfigError::UnknownKey {
                    section: section.to_string(),
                    key: key.to_string(),
                })
            }
        }
        Ok(())
    }

    /// Deterministic echo of every resolved value, for the manifest.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let mut map = BTreeMap::new();
        map.insert("general.jmax".into(), self.j_max.to_string());
        map.insert("general.oversample".into(), self.oversample.to_string());
        map.insert("general.seed".into(), self.seed.to_string());
        map.insert("general.out".into(), self.out_dir.display().to_string());
        map.insert("converge.phi".into(), self.phi.to_string());
        map.insert(
            "converge.u".into(),
            format!("{}, {}, {}", self.u[0], self.u[1], self.u[2]),
        );
        map.insert(
            "converge.potential".into(),
            self.potential
                .as_ref()
                .map(|p| p.to_string())
                .unwrap_or_else(|| "none".into()),
        );
        map.insert(
            "converge.deltas".into(),
            self.deltas
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(", "),
        );
        map.insert(
            "converge.psi0".into(),
            format!("{}, {}", self.psi0.0, self.psi0.1),
        );
        map.insert("saturate.n".into(), self.levels.to_string());
        map.insert("saturate.cap".into(), self.degree_cap.to_string());
        map.insert("verify.pairs".into(), self.pairs.to_string());
        map.insert("verify.mutate".into(), self.mutate.to_string());
        map.insert("transfer.j".into(), self.transfer_j.to_string());
        map.insert(
            "transfer.degrees".into(),
            self.degrees
                .iter()
                .map(u32::to_string)
                .collect::<Vec<_>>()
                .join(", "),
        );
        map.insert("transfer.mode".into(), self.transfer_mode.clone());
        map.insert("transfer.delta".into(), self.exec_delta.to_string());
        map.insert("plan.target".into(), self.plan_target.to_string());
        map
    }
}

type SectionedKeys = Vec<((String, String), String)>;

fn parse_sections(text: &str) -> Result<SectionedKeys, ConfigError> {
    let mut section = "general".to_string();
    let mut out = Vec::new();
    for (index, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            let name = name.trim().to_lowercase();
            if !SECTIONS.contains(&name.as_str()) {
                return Err(ConfigError::UnknownSection {
                    line: index + 1,
                    section: name,
                });
            }
            section = name;
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(ConfigError::BadLine {
                line: index + 1,
                found: line.to_string(),
            });
        };
        out.push((
            (section.clone(), key.trim().to_lowercase()),
            value.trim().to_string(),
        ));
    }
    Ok(out)
}

fn parse_num<T: std::str::FromStr>(value: &str, key: &str) -> Result<T, ConfigError> {
    value.trim().parse().map_err(|_| ConfigError::BadValue {
        key: key.to_string(),
        reason: format!("cannot parse {value:?}"),
    })
}

fn parse_bool(value: &str, key: &str) -> Result<bool, ConfigError> {
    match value.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(ConfigError::BadValue {
            key: key.to_string(),
            reason: format!("expected true/false, found {other:?}"),
        }),
    }
}

fn parse_poly(value: &str, key: &str) -> Result<SpherePolynomial, ConfigError> {
    value.parse().map_err(|e| ConfigError::BadValue {
        key: key.to_string(),
        reason: format!("{e}"),
    })
}

fn parse_triple(value: &str, key: &str) -> Result<[f64; 3], ConfigError> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(ConfigError::BadValue {
            key: key.to_string(),
            reason: "expected three comma-separated numbers".into(),
        });
    }
    Ok([
        parse_num(parts[0], key)?,
        parse_num(parts[1], key)?,
        parse_num(parts[2], key)?,
    ])
}

fn parse_state(value: &str, key: &str) -> Result<(u32, i32), ConfigError> {
    let parts: Vec<&str> = value.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(ConfigError::BadValue {
            key: key.to_string(),
            reason: "expected `j, m`".into(),
        });
    }
    let j: u32 = parse_num(parts[0], key)?;
    let m: i32 = parse_num(parts[1], key)?;
    if m.unsigned_abs() > j {
        return Err(ConfigError::BadValue {
            key: key.to_string(),
            reason: format!("|m| > j for ({j}, {m})"),
        });
    }
    Ok((j, m))
}

fn parse_list(value: &str, key: &str) -> Result<Vec<u32>, ConfigError> {
    value
        .split(',')
        .map(|part| parse_num(part.trim(), key))
        .collect()
}

/// `first:last:count` geometric schedule, or an explicit comma list.
pub fn parse_deltas(value: &str, key: &str) -> Result<Vec<f64>, ConfigError> {
    let value = value.trim();
    if value.contains(':') {
        let parts: Vec<&str> = value.split(':').collect();
        if parts.len() != 3 {
            return Err(ConfigError::BadValue {
                key: key.to_string(),
                reason: "expected first:last:count".into(),
            });
        }
        let first: f64 = parse_num(parts[0], key)?;
        let last: f64 = parse_num(parts[1], key)?;
        let count: usize = parse_num(parts[2], key)?;
        if !(first > last && last > 0.0 && count >= 2) {
            return Err(ConfigError::BadValue {
                key: key.to_string(),
                reason: "need first > last > 0 and count ≥ 2".into(),
            });
        }
        Ok(geometric_deltas(first, last, count))
    } else {
        let list: Result<Vec<f64>, _> = value
            .split(',')
            .map(|part| parse_num(part.trim(), key))
            .collect();
        let list = list?;
        if list.is_empty() || list.windows(2).any(|w| w[1] >= w[0]) {
            return Err(ConfigError::BadValue {
                key: key.to_string(),
                reason: "δ list must be strictly decreasing".into(),
            });
        }
        Ok(list)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_then_file_then_validation() {
        let mut config = ExperimentConfig::default();
        config
            .apply_text(
                "# comment\n[general]\njmax = 12\nseed = 99\n\n[converge]\nphi = x + z\nu = 1, 0, 0\ndeltas = 1e-1:1e-2:5\n",
            )
            .unwrap();
        assert_eq!(config.j_max, 12);
        assert_eq!(config.seed, 99);
        assert_eq!(config.u, [1.0, 0.0, 0.0]);
        assert_eq!(config.deltas.len(), 5);
        assert_eq!(
            config.phi,
            &SpherePolynomial::x() + &SpherePolynomial::z()
        );
    }

    #[test]
    fn rejects_unknown_sections_keys_and_bad_values() {
        let mut config = ExperimentConfig::default();
        assert!(matches!(
            config.apply_text("[nope]\nx = 1\n"),
            Err(ConfigError::UnknownSection { .. })
        ));
        assert!(matches!(
            config.apply_text("[general]\nbogus = 1\n"),
            Err(ConfigError::UnknownKey { .. })
        ));
        assert!(matches!(
            config.apply_text("[converge]\ndeltas = 1e-4:1e-1:5\n"),
            Err(ConfigError::BadValue { .. })
        ));
        assert!(matches!(
            config.apply_text("[general]\nnot a pair\n"),
            Err(ConfigError::BadLine { .. })
        ));
    }

    #[test]
    fn echo_is_deterministic_and_complete() {
        let config = ExperimentConfig::default();
        let a = config.echo();
        let b = config.echo();
        assert_eq!(a, b);
        assert!(a.contains_key("general.jmax"));
        assert!(a.contains_key("plan.target"));
    }

    #[test]
    fn explicit_delta_list_parses() {
        let deltas = parse_deltas("0.1, 0.05, 0.01", "test").unwrap();
        assert_eq!(deltas, vec![0.1, 0.05, 0.01]);
        assert!(parse_deltas("0.1, 0.2", "test").is_err());
    }
}

//! Reproducible experiment runs: configuration, commands, manifests and
//! plot emission.
//!
//! Runs are deterministic by construction (seeded randomness, ordered
//! containers on every output path, shortest-roundtrip float formatting),
//! so identical configuration and seed reproduce byte-identical CSV/JSON/
//! SVG outputs, and each run directory carries a checksummed manifest.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod svg;

pub use commands::{
    cmd_bch_check, cmd_converge, cmd_plan, cmd_saturate, cmd_transfer, cmd_verify_lemma,
    CommandOutcome, ExperimentError,
};
pub use config::{ConfigError, ExperimentConfig};
pub use manifest::{sha256_hex, verify_manifest, ManifestError, ManifestWriter, RunManifest};

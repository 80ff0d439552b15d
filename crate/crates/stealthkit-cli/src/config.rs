//! Configuration: TOML file, `STEALTHKIT_CONFIG` env var, flags.
//! Flags win over the file; the file wins over defaults.

use std::path::PathBuf;

use serde::Deserialize;
use stealthkit::antispam::{GasCostModel, PriorityWeights};

use crate::cli::Cli;
use crate::{CliError, CliResult};

pub struct Config {
    pub log_path: PathBuf,
    pub registry_path: PathBuf,
    pub stake_path: PathBuf,
    pub chain_id: String,
    pub weights: PriorityWeights,
    pub cost_model: GasCostModel,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    log_path: Option<PathBuf>,
    registry_path: Option<PathBuf>,
    stake_path: Option<PathBuf>,
    chain_id: Option<String>,
    #[serde(default)]
    weights: WeightsSection,
    #[serde(default)]
    cost_model: Option<GasCostModel>,
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct WeightsSection {
    /// Weight of the capped-stake factor, "n" or "n/d"
    w1: Option<String>,
    /// Weight of the inverse-announcement-count factor
    w2: Option<String>,
    min_stake_value_wei: Option<String>,
    min_unstake_delay_secs: Option<u64>,
}

pub fn load(cli: &Cli) -> CliResult<Config> {
    let file_path = cli
        .config
        .clone()
        .or_else(|| std::env::var_os("STEALTHKIT_CONFIG").map(PathBuf::from));
    let file: ConfigFile = match file_path {
        Some(path) => {
            let text = std::fs::read_to_string(&path).map_err(|e| {
                CliError::other(format!("cannot read config {}: {e}", path.display()))
            })?;
            toml::from_str(&text)
                .map_err(|e| CliError::usage(format!("bad config {}: {e}", path.display())))?
        }
        None => ConfigFile::default(),
    };

    let mut weights = PriorityWeights::default();
    if let Some(w1) = &file.weights.w1 {
        weights.w1 = PriorityWeights::parse_weight(w1).map_err(CliError::from)?;
    }
    if let Some(w2) = &file.weights.w2 {
        weights.w2 = PriorityWeights::parse_weight(w2).map_err(CliError::from)?;
    }
    if let Some(min_stake) = &file.weights.min_stake_value_wei {
        weights.min_stake_value_wei = min_stake
            .parse()
            .map_err(|e| CliError::usage(format!("bad min_stake_value_wei: {e}")))?;
    }
    if let Some(delay) = file.weights.min_unstake_delay_secs {
        weights.min_unstake_delay_secs = delay;
    }

    Ok(Config {
        log_path: cli
            .log_path
            .clone()
            .or(file.log_path)
            .unwrap_or_else(|| PathBuf::from("announcements.jsonl")),
        registry_path: cli
            .registry_path
            .clone()
            .or(file.registry_path)
            .unwrap_or_else(|| PathBuf::from("registry.json")),
        stake_path: cli
            .stake_path
            .clone()
            .or(file.stake_path)
            .unwrap_or_else(|| PathBuf::from("stake.json")),
        chain_id: cli
            .chain_id
            .clone()
            .or(file.chain_id)
            .unwrap_or_else(|| "1".to_string()),
        weights,
        cost_model: file.cost_model.unwrap_or_default(),
    })
}

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{LandmarkSubset, NOSE_TIP};
use crate::model::{ModelConfig, Normalization};
use crate::pipeline::TrainConfig;

/// Everything a run needs, loadable from TOML. Missing keys take their
/// defaults; unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub max_epochs: usize,
    pub batch_size: usize,
    pub lr_gat: f64,
    pub lr_linear: f64,
    pub patience: usize,
    pub frames_per_repetition: usize,
    pub seed: u64,
    pub landmark_indices: Vec<usize>,
    pub hub_index: usize,
    pub edge_weight_in_attention: bool,
    pub hidden_dim: usize,
    pub init_gain: f64,
    /// Subtracted from pixel coordinates before they are scaled.
    pub coord_offset: f64,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        let train = TrainConfig::default();
        let model = ModelConfig::default();
        RunConfig {
            max_epochs: train.max_epochs,
            batch_size: train.batch_size,
            lr_gat: train.lr_gat,
            lr_linear: train.lr_linear,
            patience: train.patience,
            frames_per_repetition: train.frames_per_repetition,
            seed: train.seed,
            landmark_indices: LandmarkSubset::default().indices().to_vec(),
            hub_index: NOSE_TIP,
            edge_weight_in_attention: model.edge_weight_in_attention,
            hidden_dim: model.hidden_dim,
            init_gain: model.init_gain,
            coord_offset: model.normalization.coord_offset,
            output_dir: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        RunConfig::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("run config serialises")
    }

    pub fn validate(&self) -> Result<()> {
        self.train_config().validate()?;
        self.model_config().validate()?;
        self.subset()?;
        Ok(())
    }

    pub fn train_config(&self) -> TrainConfig {
        TrainConfig {
            max_epochs: self.max_epochs,
            batch_size: self.batch_size,
            lr_gat: self.lr_gat,
            lr_linear: self.lr_linear,
            patience: self.patience,
            frames_per_repetition: self.frames_per_repetition,
            seed: self.seed,
        }
    }

    pub fn model_config(&self) -> ModelConfig {
        let defaults = ModelConfig::default();
        ModelConfig {
            hidden_dim: self.hidden_dim,
            edge_weight_in_attention: self.edge_weight_in_attention,
            init_gain: self.init_gain,
            normalization: Normalization {
                coord_offset: self.coord_offset,
                ..defaults.normalization
            },
            ..defaults
        }
    }

    pub fn subset(&self) -> Result<LandmarkSubset> {
        LandmarkSubset::with_hub_landmark(self.landmark_indices.clone(), self.hub_index)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let cfg = RunConfig::default();
        assert_eq!(RunConfig::from_toml(&cfg.to_toml()).unwrap(), cfg);
        assert_eq!(RunConfig::from_toml("").unwrap(), cfg);
        assert_eq!(cfg.subset().unwrap(), LandmarkSubset::default());
    }

    #[test]
    fn partial_override() {
        let cfg = RunConfig::from_toml("max_epochs = 3\nlr_gat = 0.01\n").unwrap();
        assert_eq!(cfg.max_epochs, 3);
        assert_eq!(cfg.lr_gat, 0.01);
        assert_eq!(cfg.batch_size, 64);
    }

    #[test]
    fn rejects_unknown_and_invalid() {
        assert!(matches!(
            RunConfig::from_toml("epochs = 3"),
            Err(Error::Config(_))
        ));
        assert!(RunConfig::from_toml("frames_per_repetition = 4").is_err());
        assert!(RunConfig::from_toml("hub_index = 0").is_err());
        assert!(RunConfig::from_toml("landmark_indices = [1, 2, 3]").is_err());
    }
}

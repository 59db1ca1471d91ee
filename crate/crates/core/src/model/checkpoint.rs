//! JSON checkpoint container.
//!
//! ```json
//! {
//!   "format": "fpg-checkpoint",
//!   "version": 1,
//!   "model": {
//!     "hidden_dim": 17,
//!     "activation": { "leaky_slope": 0.2 },
//!     "edge_weight_in_attention": true,
//!     "normalization": { "coord_scale": 200.0, "edge_scale": 282.84271247461906 }
//!   },
//!   "subset": { "indices": [48, ..., 30], "hub_position": 25 },
//!   "params": [ { "name": "gat0.weight", "value": { "rows": 17, "cols": 2, "data": [...] } }, ... ]
//! }
//! ```
//!
//! Parameters appear in [`FpgModel::params`] order. Floats are written in
//! shortest round-trip form and parsed exactly, so values survive bit for bit.

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{FpgModel, ModelConfig};
use crate::error::{Error, Result};
use crate::geometry::LandmarkSubset;
use crate::io::write_atomic;
use crate::numerics::ParamTensor;

pub const CHECKPOINT_FORMAT: &str = "fpg-checkpoint";
pub const CHECKPOINT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub format: String,
    pub version: u32,
    pub model: ModelConfig,
    pub subset: LandmarkSubset,
    pub params: Vec<ParamTensor>,
}

impl Checkpoint {
    pub fn new(model: &FpgModel, subset: &LandmarkSubset) -> Self {
        Checkpoint {
            format: CHECKPOINT_FORMAT.into(),
            version: CHECKPOINT_VERSION,
            model: *model.config(),
            subset: subset.clone(),
            params: model.params().into_iter().cloned().collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Checkpoint(e.to_string()))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let ck: Checkpoint =
            serde_json::from_str(text).map_err(|e| Error::Checkpoint(e.to_string()))?;
        if ck.format != CHECKPOINT_FORMAT || ck.version != CHECKPOINT_VERSION {
            return Err(Error::Checkpoint(format!(
                "unsupported checkpoint {} v{}",
                ck.format, ck.version
            )));
        }
        for p in &ck.params {
            let (r, c) = p.value.shape();
            if p.value.len() != r * c {
                return Err(Error::Checkpoint(format!(
                    "parameter {} has a bad shape",
                    p.name
                )));
            }
        }
        // re-run subset validation, serde bypasses the constructor
        LandmarkSubset::new(ck.subset.indices().to_vec(), ck.subset.hub_position())?;
        Ok(ck)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        write_atomic(path, self.to_json()?.as_bytes())
    }

    pub fn load(path: &Path) -> Result<Self> {
        Checkpoint::from_json(&std::fs::read_to_string(path)?)
    }

    /// Rebuild the model and landmark subset stored in the checkpoint.
    pub fn restore(&self) -> Result<(FpgModel, LandmarkSubset)> {
        let mut model = FpgModel::new(self.model, 0)?;
        let params: Vec<ParamTensor> = self
            .params
            .iter()
            .map(|p| ParamTensor::new(p.name.clone(), p.value.clone()))
            .collect();
        model
            .load_params(&params)
            .map_err(|e| Error::Checkpoint(e.to_string()))?;
        Ok((model, self.subset.clone()))
    }
}

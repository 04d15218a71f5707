//! JSON representation of a discrete instance.
//!
//! ```json
//! {
//!   "source_alphabet": ["0", "1"],
//!   "recon_alphabet": ["0", "1"],
//!   "side_alphabet": ["lo", "hi"],
//!   "p_x": [0.5, 0.5],
//!   "p_q": [0.5, 0.5],
//!   "dist": [[[0, 0], [1, 2]], [[1, 2], [0, 0]]],
//!   "group": [[0, 1], [1, 0]]
//! }
//! ```
//!
//! `dist[x][x̂][q]` is the distortion; `group` is an optional Cayley table
//! on the source alphabet, needed only by the encoder-side equality check.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sideinfo_core::model::{DiscreteInstance, DistortionTensor, GroupTable};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub source_alphabet: Vec<String>,
    pub recon_alphabet: Vec<String>,
    pub side_alphabet: Vec<String>,
    pub p_x: Vec<f64>,
    pub p_q: Vec<f64>,
    pub dist: Vec<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub group: Option<Vec<Vec<usize>>>,
}

fn labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl InstanceFile {
    /// Numeric labels `0..n` on every axis.
    pub fn from_instance(instance: &DiscreteInstance, group: Option<&GroupTable>) -> Self {
        Self {
            source_alphabet: labels(instance.source_size()),
            recon_alphabet: labels(instance.recon_size()),
            side_alphabet: labels(instance.side_size()),
            p_x: instance.p_x().to_vec(),
            p_q: instance.p_q().to_vec(),
            dist: instance.dist().to_nested(),
            group: group.map(|g| {
                (0..g.order())
                    .map(|a| (0..g.order()).map(|b| g.op(a, b)).collect())
                    .collect()
            }),
        }
    }

    pub fn to_instance(&self) -> Result<(DiscreteInstance, Option<GroupTable>)> {
        let dist = DistortionTensor::from_nested(&self.dist)?;
        let axes = [
            ("source_alphabet", self.source_alphabet.len(), dist.source_size()),
            ("recon_alphabet", self.recon_alphabet.len(), dist.recon_size()),
            ("side_alphabet", self.side_alphabet.len(), dist.side_size()),
        ];
        for (name, labels, size) in axes {
            if labels != size {
                return Err(CliError::Config(format!(
                    "{name} has {labels} labels but the distortion tensor has {size} entries on that axis"
                )));
            }
        }
        let instance = DiscreteInstance::new(self.p_x.clone(), self.p_q.clone(), dist)?;
        let group = match &self.group {
            None => None,
            Some(rows) => {
                let order = rows.len();
                if rows.iter().any(|r| r.len() != order) {
                    return Err(CliError::Config("group table is not square".into()));
                }
                Some(GroupTable::new(order, rows.concat())?)
            }
        };
        Ok((instance, group))
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("instance serializes");
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::io(path, e))
    }
}

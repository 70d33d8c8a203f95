//! Experiment configuration files (TOML).
//!
//! ```toml
//! experiment = "charfn"          # sigma-sweep | charfn | count-fit | fkg-check
//! replicates = 100000
//! master_seed = 42
//! out_dir = "out/charfn"
//! t_values = [0.5, 1.0, 2.0]
//! n_values = [10, 40, 160]
//!
//! [spec]
//! d = 1
//! n = 160
//! lambda = 1.0
//! kind = "pattern"               # or "or"
//! g = [[0], [1]]
//!
//! [f]
//! axes = [[0.0, 0.25, 0.75, 1.0]]
//! amplitude = 1.0
//!
//! [box]
//! lo = [0.0]
//! hi = [1.0]
//! ```
//!
//! `fkg-check` additionally reads `sites` (list of lattice points) and
//! `pairs` (number of random monotone pairs, default 8).

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::lattice::Site;
use crate::measure::{BoxRegion, TestFunction};

pub const DEFAULT_FKG_PAIRS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    SigmaSweep,
    Charfn,
    CountFit,
    FkgCheck,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::SigmaSweep => "sigma-sweep",
            ExperimentKind::Charfn => "charfn",
            ExperimentKind::CountFit => "count-fit",
            ExperimentKind::FkgCheck => "fkg-check",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<ExperimentKind>,
    pub spec: FieldSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<TestFunction>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_values: Option<Vec<u64>>,
    #[serde(default, rename = "box", skip_serializing_if = "Option::is_none")]
    pub region: Option<BoxRegion>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sites: Option<Vec<Site>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pairs: Option<usize>,
    pub replicates: u64,
    pub master_seed: u64,
    /// Not part of the experiment identity; excluded from the config hash.
    #[serde(default, skip_serializing)]
    pub out_dir: Option<PathBuf>,
}

fn invalid(parameter: &str, message: impl Into<String>) -> Error {
    Error::InvalidConfig {
        parameter: parameter.into(),
        message: message.into(),
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| {
            let message = e.message().to_string();
            let parameter = if message.contains("invalid field spec") {
                "spec"
            } else if message.contains("invalid test function") {
                "f"
            } else if message.contains("invalid region") {
                "box"
            } else {
                "config"
            };
            invalid(parameter, message)
        })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| invalid("config", format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Canonical JSON of every field except `out_dir`.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }

    /// Checks that the fields needed by `kind` are present and consistent.
    pub fn validate(&self, kind: ExperimentKind) -> Result<()> {
        if let Some(declared) = self.experiment {
            if declared != kind {
                return Err(invalid(
                    "experiment",
                    format!("config declares `{}` but `{}` was requested", declared.name(), kind.name()),
                ));
            }
        }
        if self.replicates == 0 {
            return Err(invalid("replicates", "must be positive"));
        }
        let d = self.spec.d();
        match kind {
            ExperimentKind::SigmaSweep => {
                let ns = self.n_values.as_ref().ok_or_else(|| invalid("n_values", "required"))?;
                if ns.is_empty() {
                    return Err(invalid("n_values", "must not be empty"));
                }
                for &n in ns {
                    self.spec.with_n(n).map_err(|e| invalid("n_values", e.to_string()))?;
                }
            }
            ExperimentKind::Charfn => {
                let f = self.f.as_ref().ok_or_else(|| invalid("f", "required"))?;
                if f.d() != d {
                    return Err(invalid("f", format!("has dimension {}, field has {d}", f.d())));
                }
                let ts = self.t_values.as_ref().ok_or_else(|| invalid("t_values", "required"))?;
                if ts.is_empty() || ts.iter().any(|t| !t.is_finite()) {
                    return Err(invalid("t_values", "must be a nonempty list of finite reals"));
                }
                if self.replicates < 2 {
                    return Err(invalid("replicates", "charfn needs at least 2"));
                }
                for &n in self.n_values.iter().flatten() {
                    self.spec.with_n(n).map_err(|e| invalid("n_values", e.to_string()))?;
                }
            }
            ExperimentKind::CountFit => {
                let b = self.region.as_ref().ok_or_else(|| invalid("box", "required"))?;
                if b.d() != d {
                    return Err(invalid("box", format!("has dimension {}, field has {d}", b.d())));
                }
                if self.replicates < 2 {
                    return Err(invalid("replicates", "count-fit needs at least 2"));
                }
            }
            ExperimentKind::FkgCheck => {
                let sites = self.sites.as_ref().ok_or_else(|| invalid("sites", "required"))?;
                if sites.is_empty() || sites.len() > 64 {
                    return Err(invalid("sites", "between 1 and 64 sites are required"));
                }
                if sites.iter().any(|s| s.len() != d) {
                    return Err(invalid("sites", format!("every site must be in Z^{d}")));
                }
                if self.replicates < 100 {
                    return Err(invalid("replicates", "fkg-check needs at least 100"));
                }
            }
        }
        Ok(())
    }
}

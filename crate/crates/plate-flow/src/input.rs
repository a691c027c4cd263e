//! Parameter files.

use std::fs;
use std::path::{Path, PathBuf};

use plate_flow_core::params::{DimensionalParams, FlowParams};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

/// Flat parameter file: `Gr, Gc, Pr, Sc, R, K, a` plus the time `t`.
/// Every key is optional so flags can fill the gaps.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointParams {
    #[serde(rename = "Gr", skip_serializing_if = "Option::is_none")]
    pub gr: Option<f64>,
    #[serde(rename = "Gc", skip_serializing_if = "Option::is_none")]
    pub gc: Option<f64>,
    #[serde(rename = "Pr", skip_serializing_if = "Option::is_none")]
    pub pr: Option<f64>,
    #[serde(rename = "Sc", skip_serializing_if = "Option::is_none")]
    pub sc: Option<f64>,
    #[serde(rename = "R", skip_serializing_if = "Option::is_none")]
    pub radiation: Option<f64>,
    #[serde(rename = "K", skip_serializing_if = "Option::is_none")]
    pub reaction: Option<f64>,
    #[serde(rename = "a", skip_serializing_if = "Option::is_none")]
    pub temp_rate: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("missing parameter(s): {}", .0.join(", "))]
pub struct MissingParams(pub Vec<&'static str>);

impl PointParams {
    /// Entries of `other` take precedence.
    pub fn overlay(self, other: &PointParams) -> PointParams {
        PointParams {
            gr: other.gr.or(self.gr),
            gc: other.gc.or(self.gc),
            pr: other.pr.or(self.pr),
            sc: other.sc.or(self.sc),
            radiation: other.radiation.or(self.radiation),
            reaction: other.reaction.or(self.reaction),
            temp_rate: other.temp_rate.or(self.temp_rate),
            t: other.t.or(self.t),
        }
    }

    pub fn flow(&self) -> Result<FlowParams, MissingParams> {
        let mut missing = Vec::new();
        let mut take = |v: Option<f64>, name: &'static str| {
            v.unwrap_or_else(|| {
                missing.push(name);
                f64::NAN
            })
        };
        let p = FlowParams {
            gr: take(self.gr, "Gr"),
            gc: take(self.gc, "Gc"),
            pr: take(self.pr, "Pr"),
            sc: take(self.sc, "Sc"),
            radiation: take(self.radiation, "R"),
            reaction: take(self.reaction, "K"),
            temp_rate: take(self.temp_rate, "a"),
        };
        if missing.is_empty() {
            Ok(p)
        } else {
            Err(MissingParams(missing))
        }
    }

    pub fn time(&self) -> Result<f64, MissingParams> {
        self.t.ok_or_else(|| MissingParams(vec!["t"]))
    }
}

impl From<(FlowParams, f64)> for PointParams {
    fn from((p, t): (FlowParams, f64)) -> Self {
        PointParams {
            gr: Some(p.gr),
            gc: Some(p.gc),
            pr: Some(p.pr),
            sc: Some(p.sc),
            radiation: Some(p.radiation),
            reaction: Some(p.reaction),
            temp_rate: Some(p.temp_rate),
            t: Some(t),
        }
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, InputError> {
    let text = fs::read_to_string(path).map_err(|source| InputError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| InputError::Parse {
        path: path.to_path_buf(),
        source,
    })
}

pub fn read_point_params(path: &Path) -> Result<PointParams, InputError> {
    read_json(path)
}

pub fn read_dimensional(path: &Path) -> Result<DimensionalParams, InputError> {
    read_json(path)
}

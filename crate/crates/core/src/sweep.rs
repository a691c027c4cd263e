//! Figure presets and one-parameter sweeps over the closed-form fields.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{self, FieldKind, Profile, ProfileError};
use crate::oracle::{self, Budget, ComparisonReport, GridSpec, OracleError, SolveOptions};
use crate::params::{validate, FlowParams, ValidatedParams, ValidationError};

pub const FIGURE_IDS: core::ops::RangeInclusive<u8> = 1..=13;
/// Default sampling grid: 161 points on `[0, 8]`.
pub const DEFAULT_Y_POINTS: usize = 161;
pub const DEFAULT_Y_END: f64 = 8.0;
/// Sample points for the monotonicity battery.
pub const TREND_POINTS: [f64; 2] = [0.5, 1.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub enum Param {
    Gr,
    Gc,
    Pr,
    Sc,
    R,
    K,
    #[cfg_attr(feature = "serde", serde(rename = "a"))]
    A,
    #[cfg_attr(feature = "serde", serde(rename = "t"))]
    T,
}

impl Param {
    pub const ALL: [Param; 8] = [
        Param::Gr,
        Param::Gc,
        Param::Pr,
        Param::Sc,
        Param::R,
        Param::K,
        Param::A,
        Param::T,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Param::Gr => "Gr",
            Param::Gc => "Gc",
            Param::Pr => "Pr",
            Param::Sc => "Sc",
            Param::R => "R",
            Param::K => "K",
            Param::A => "a",
            Param::T => "t",
        }
    }

    /// Returns `(base with this parameter set to v, time)`.
    pub fn apply(self, base: &FlowParams, t: f64, v: f64) -> (FlowParams, f64) {
        let mut p = *base;
        let mut t = t;
        match self {
            Param::Gr => p.gr = v,
            Param::Gc => p.gc = v,
            Param::Pr => p.pr = v,
            Param::Sc => p.sc = v,
            Param::R => p.radiation = v,
            Param::K => p.reaction = v,
            Param::A => p.temp_rate = v,
            Param::T => t = v,
        }
        (p, t)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown parameter {0:?} (expected one of Gr, Gc, Pr, Sc, R, K, a, t)")]
pub struct UnknownParam(pub String);

impl FromStr for Param {
    type Err = UnknownParam;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Param::ALL
            .into_iter()
            .find(|p| p.as_str() == s)
            .ok_or_else(|| UnknownParam(s.to_string()))
    }
}

/// Expected ordering of the sampled field as the varied value increases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Trend {
    Increasing,
    Decreasing,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct SweepSpec {
    pub base: FlowParams,
    pub t: f64,
    pub varied: Param,
    pub values: Vec<f64>,
    pub kind: FieldKind,
    pub ys: Vec<f64>,
    pub label: String,
    #[cfg_attr(feature = "serde", serde(default))]
    pub trend: Option<Trend>,
}

impl SweepSpec {
    /// Column label for a varied value, e.g. `R=2`.
    pub fn column_label(&self, v: f64) -> String {
        format!("{}={}", self.varied, v)
    }

    pub fn column_labels(&self) -> Vec<String> {
        self.values.iter().map(|&v| self.column_label(v)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SweepError {
    #[error("figure id {0} out of range 1..=13")]
    UnknownFigure(u32),
    #[error("a sweep needs at least two values, got {0}")]
    TooFewValues(usize),
    #[error("{varied}={value} rejected: {source}")]
    Invalid {
        varied: Param,
        value: f64,
        #[source]
        source: ValidationError,
    },
    #[error("{varied}={value}: time must be finite and > 0")]
    BadTime { varied: Param, value: f64 },
    #[error("{varied}={value}: {source}")]
    Profile {
        varied: Param,
        value: f64,
        #[source]
        source: ProfileError,
    },
    #[error("{varied}={value}: {source}")]
    Oracle {
        varied: Param,
        value: f64,
        #[source]
        source: OracleError,
    },
}

#[allow(clippy::too_many_arguments)]
fn preset(
    varied: Param,
    values: &[f64],
    kind: FieldKind,
    trend: Trend,
    t: f64,
    temp_rate: f64,
    reaction: f64,
    radiation: f64,
    gr: f64,
    gc: f64,
    pr: f64,
    sc: f64,
) -> SweepSpec {
    SweepSpec {
        base: FlowParams {
            gr,
            gc,
            pr,
            sc,
            radiation,
            reaction,
            temp_rate,
        },
        t,
        varied,
        values: values.to_vec(),
        kind,
        ys: analytic::uniform_grid(0.0, DEFAULT_Y_END, DEFAULT_Y_POINTS),
        label: String::new(),
        trend: Some(trend),
    }
}

/// Parameter sets behind Figures 1 to 13. The varied parameter's base entry
/// is overwritten by each value.
pub fn figure_preset(id: u32) -> Result<SweepSpec, SweepError> {
    use FieldKind::{Concentration as C, Temperature as Th, Velocity as U};
    use Param::*;
    use Trend::{Decreasing as Dn, Increasing as Up};
    //                                        t    a    K    R   Gr   Gc    Pr    Sc
    let mut s = match id {
        1 => preset(R, &[2.0, 5.0, 10.0], U, Dn, 0.4, 0.2, 2.0, 2.0, 5.0, 5.0, 0.71, 0.6),
        // Pr = 0.71 is listed twice.
        2 => preset(K, &[0.2, 5.0, 10.0], U, Dn, 0.2, 0.2, 2.0, 2.0, 5.0, 15.0, 0.71, 0.6),
        3 => preset(A, &[5.0, 7.0, 9.0], U, Up, 0.2, 0.2, 4.0, 4.0, 5.0, 5.0, 0.71, 0.6),
        4 => preset(T, &[0.2, 0.4, 0.6], U, Up, 0.4, 0.2, 4.0, 4.0, 5.0, 5.0, 0.71, 0.6),
        5 => preset(Gr, &[5.0, 10.0, 15.0], U, Up, 0.4, 0.2, 2.0, 4.0, 5.0, 5.0, 0.71, 0.6),
        6 => preset(Gc, &[5.0, 10.0, 15.0], U, Up, 0.4, 0.2, 2.0, 4.0, 5.0, 5.0, 0.71, 0.6),
        7 => preset(Sc, &[0.16, 0.3, 0.6], U, Dn, 0.4, 0.2, 2.0, 2.0, 2.0, 5.0, 0.71, 0.6),
        8 => preset(Pr, &[0.17, 0.5, 0.71], U, Dn, 0.4, 0.2, 4.0, 4.0, 15.0, 5.0, 0.71, 0.78),
        9 => preset(Pr, &[5.0, 7.0, 11.62], Th, Dn, 0.4, 0.2, 4.0, 4.0, 15.0, 5.0, 5.0, 0.16),
        10 => preset(T, &[0.2, 0.4, 0.6, 0.8], Th, Up, 0.4, 3.0, 2.0, 2.0, 5.0, 5.0, 0.71, 0.6),
        11 => preset(A, &[3.0, 5.0, 7.0], Th, Up, 0.6, 3.0, 2.0, 2.0, 2.0, 5.0, 0.71, 0.6),
        // R not given; taken from Figure 7.
        12 => preset(Sc, &[0.16, 0.3, 0.6], C, Dn, 0.4, 0.5, 2.0, 2.0, 2.0, 5.0, 0.71, 0.6),
        // R not given; taken from Figure 4. Concentration rises with t.
        13 => preset(T, &[0.2, 0.4, 0.6], C, Up, 0.4, 0.2, 4.0, 4.0, 5.0, 5.0, 0.71, 0.6),
        other => return Err(SweepError::UnknownFigure(other)),
    };
    let first = s.values[0];
    let (base, t) = s.varied.apply(&s.base, s.t, first);
    s.base = base;
    s.t = t;
    s.label = format!("Figure {id}: {} for {}", s.kind, s.column_labels().join(", "));
    Ok(s)
}

/// One validated entry of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Member {
    pub value: f64,
    pub params: ValidatedParams,
    pub t: f64,
}

impl Member {
    pub fn profile(&self, spec: &SweepSpec) -> Result<Profile, SweepError> {
        analytic::profile(spec.kind, &spec.ys, self.t, &self.params).map_err(|source| SweepError::Profile {
            varied: spec.varied,
            value: self.value,
            source,
        })
    }

    pub fn verify(
        &self,
        spec: &SweepSpec,
        grid: &GridSpec,
        budget: &mut dyn Budget,
    ) -> Result<ComparisonReport, SweepError> {
        let wrap = |source| SweepError::Oracle {
            varied: spec.varied,
            value: self.value,
            source,
        };
        let grid = GridSpec::new(grid.y_max, grid.ny, grid.dt, self.t).map_err(wrap)?;
        let sol = oracle::solve_with(&self.params, &grid, &SolveOptions::default(), budget).map_err(wrap)?;
        oracle::compare(&sol, &self.params).map_err(wrap)
    }
}

/// Validate every member before anything is evaluated.
pub fn members(spec: &SweepSpec) -> Result<Vec<Member>, SweepError> {
    if spec.values.len() < 2 {
        return Err(SweepError::TooFewValues(spec.values.len()));
    }
    spec.values
        .iter()
        .map(|&value| {
            let (p, t) = spec.varied.apply(&spec.base, spec.t, value);
            let params = validate(&p).map_err(|source| SweepError::Invalid {
                varied: spec.varied,
                value,
                source,
            })?;
            if !(t.is_finite() && t > 0.0) {
                return Err(SweepError::BadTime {
                    varied: spec.varied,
                    value,
                });
            }
            Ok(Member { value, params, t })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Provenance {
    pub code_version: String,
    pub y_points: usize,
    pub y_first: f64,
    pub y_last: f64,
    pub oracle_grid: Option<GridSpec>,
}

impl Provenance {
    pub fn new(spec: &SweepSpec, oracle_grid: Option<GridSpec>) -> Self {
        Self {
            code_version: env!("CARGO_PKG_VERSION").to_string(),
            y_points: spec.ys.len(),
            y_first: spec.ys.first().copied().unwrap_or(f64::NAN),
            y_last: spec.ys.last().copied().unwrap_or(f64::NAN),
            oracle_grid,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub profiles: Vec<Profile>,
    /// One report per profile when verification ran, otherwise empty.
    pub comparisons: Vec<ComparisonReport>,
    pub provenance: Provenance,
}

pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    let profiles = members(spec)?
        .iter()
        .map(|m| m.profile(spec))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepResult {
        spec: spec.clone(),
        profiles,
        comparisons: Vec::new(),
        provenance: Provenance::new(spec, None),
    })
}

/// `run_sweep` plus an oracle comparison per profile. `grid.t_end` is replaced
/// by each member's time.
pub fn run_sweep_verified(
    spec: &SweepSpec,
    grid: &GridSpec,
    budget: &mut dyn Budget,
) -> Result<SweepResult, SweepError> {
    let members = members(spec)?;
    let profiles = members.iter().map(|m| m.profile(spec)).collect::<Result<Vec<_>, _>>()?;
    let comparisons = members
        .iter()
        .map(|m| m.verify(spec, grid, budget))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SweepResult {
        spec: spec.clone(),
        profiles,
        comparisons,
        provenance: Provenance::new(spec, Some(*grid)),
    })
}

/// A pair of neighbouring varied values whose field values are out of order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendViolation {
    pub y: f64,
    pub lower: f64,
    pub upper: f64,
    pub at_lower: f64,
    pub at_upper: f64,
}

impl fmt::Display for TrendViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Y={}: {} at {} vs {} at {}",
            self.y, self.at_lower, self.lower, self.at_upper, self.upper
        )
    }
}

fn ordered(trend: Trend, lo: f64, hi: f64) -> bool {
    match trend {
        Trend::Increasing => hi > lo,
        Trend::Decreasing => hi < lo,
    }
}

fn pairs_out_of_order(
    spec: &SweepSpec,
    trend: Trend,
    y: f64,
    samples: &[f64],
    out: &mut Vec<TrendViolation>,
) {
    let mut order: Vec<usize> = (0..spec.values.len()).collect();
    order.sort_by(|&i, &j| spec.values[i].total_cmp(&spec.values[j]));
    for w in order.windows(2) {
        let (i, j) = (w[0], w[1]);
        if !ordered(trend, samples[i], samples[j]) {
            out.push(TrendViolation {
                y,
                lower: spec.values[i],
                upper: spec.values[j],
                at_lower: samples[i],
                at_upper: samples[j],
            });
        }
    }
}

impl SweepResult {
    /// Strict ordering check at every sampled `Y` in `(lo, hi]`.
    pub fn trend_violations(&self, lo: f64, hi: f64) -> Vec<TrendViolation> {
        let mut out = Vec::new();
        let Some(trend) = self.spec.trend else {
            return out;
        };
        for (k, &y) in self.spec.ys.iter().enumerate() {
            if y > lo && y <= hi {
                let samples: Vec<f64> = self.profiles.iter().map(|p| p.values[k]).collect();
                pairs_out_of_order(&self.spec, trend, y, &samples, &mut out);
            }
        }
        out
    }
}

/// Strict ordering check at the given points, evaluated directly.
pub fn trend_violations_at(spec: &SweepSpec, ys: &[f64]) -> Result<Vec<TrendViolation>, SweepError> {
    let mut out = Vec::new();
    let Some(trend) = spec.trend else {
        return Ok(out);
    };
    let members = members(spec)?;
    for &y in ys {
        let samples = members
            .iter()
            .map(|m| {
                analytic::evaluate(spec.kind, y, m.t, &m.params).map_err(|e| SweepError::Profile {
                    varied: spec.varied,
                    value: m.value,
                    source: ProfileError::At {
                        index: 0,
                        y,
                        source: e,
                    },
                })
            })
            .collect::<Result<Vec<_>, _>>()?;
        pairs_out_of_order(spec, trend, y, &samples, &mut out);
    }
    Ok(out)
}

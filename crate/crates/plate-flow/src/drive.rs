//! Parallel sweeps and the verification battery.

use std::fmt;
use std::time::Instant;

use plate_flow_core::analytic::residual::convergence_orders;
use plate_flow_core::analytic::{concentration, temperature, velocity, FieldKind};
use plate_flow_core::oracle::{
    ComparisonReport, GridSpec, OracleError, Tolerances, DEFAULT_DT, DEFAULT_NY, DEFAULT_Y_MAX,
};
use plate_flow_core::sweep::{self, members, Member, Provenance, SweepError, SweepResult, SweepSpec, Trend, TREND_POINTS};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::budget::Deadline;

/// Grid steps for the residual convergence check.
pub const RESIDUAL_STEPS: [f64; 3] = [0.04, 0.02, 0.01];
pub const ORDER_TOL: f64 = 0.2;
pub const BOUNDARY_TOL_VELOCITY: f64 = 1e-10;
pub const BOUNDARY_TOL_SCALAR: f64 = 1e-12;

/// Profiles are computed concurrently and collected in value order.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult, SweepError> {
    let members = members(spec)?;
    let profiles = members.par_iter().map(|m| m.profile(spec)).collect::<Result<Vec<_>, _>>()?;
    Ok(SweepResult {
        spec: spec.clone(),
        profiles,
        comparisons: Vec::new(),
        provenance: Provenance::new(spec, None),
    })
}

/// Oracle grid settings; `t_end` comes from each member.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridChoice {
    pub y_max: f64,
    pub dy: f64,
    pub dt: f64,
}

impl Default for GridChoice {
    fn default() -> Self {
        Self {
            y_max: DEFAULT_Y_MAX,
            dy: DEFAULT_Y_MAX / (DEFAULT_NY - 1) as f64,
            dt: DEFAULT_DT,
        }
    }
}

impl GridChoice {
    pub fn for_time(&self, t: f64) -> Result<GridSpec, OracleError> {
        GridSpec::with_spacing(self.y_max, self.dy, self.dt, t)
    }
}

fn verify_member(spec: &SweepSpec, m: &Member, grid: &GridChoice, until: Option<Instant>) -> Result<ComparisonReport, SweepError> {
    let g = grid.for_time(m.t).map_err(|source| SweepError::Oracle {
        varied: spec.varied,
        value: m.value,
        source,
    })?;
    m.verify(spec, &g, &mut Deadline::new(until))
}

/// `run_sweep` plus one oracle comparison per profile.
pub fn run_sweep_verified(spec: &SweepSpec, grid: &GridChoice, until: Option<Instant>) -> Result<SweepResult, SweepError> {
    let mut r = run_sweep(spec)?;
    let members = members(spec)?;
    r.comparisons = members
        .par_iter()
        .map(|m| verify_member(spec, m, grid, until))
        .collect::<Result<Vec<_>, _>>()?;
    let first = grid.for_time(members[0].t).ok();
    r.provenance = Provenance::new(spec, first);
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Check {
    Boundary,
    Residual,
    Oracle,
    Monotonicity,
}

impl Check {
    pub const ALL: [Check; 4] = [Check::Boundary, Check::Residual, Check::Oracle, Check::Monotonicity];

    pub fn as_str(self) -> &'static str {
        match self {
            Check::Boundary => "boundary",
            Check::Residual => "residual",
            Check::Oracle => "oracle",
            Check::Monotonicity => "monotonicity",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub target: String,
    pub check: Check,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BatteryReport {
    pub grid: GridChoice,
    pub outcomes: Vec<Outcome>,
}

impl BatteryReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| !o.passed)
    }
}

/// A named sweep to run the battery on.
#[derive(Debug, Clone)]
pub struct Target {
    pub name: String,
    pub spec: SweepSpec,
}

pub fn figure_targets(ids: &[u32]) -> Result<Vec<Target>, SweepError> {
    ids.iter()
        .map(|&id| {
            Ok(Target {
                name: format!("figure {id}"),
                spec: sweep::figure_preset(id)?,
            })
        })
        .collect()
}

fn outcome(target: &Target, check: Check, result: Result<String, String>) -> Outcome {
    let (passed, detail) = match result {
        Ok(d) => (true, d),
        Err(d) => (false, d),
    };
    Outcome {
        target: target.name.clone(),
        check,
        passed,
        detail,
    }
}

pub fn boundary_check(members: &[Member]) -> Result<String, String> {
    let mut worst = [0.0f64; 3];
    for m in members {
        let t = m.t;
        let wall = (m.params.params().temp_rate * t).exp();
        let dev = [
            velocity(0.0, t, &m.params).map(|u| (u - t * t).abs()),
            temperature(0.0, t, &m.params).map(|v| (v - wall).abs()),
            concentration(0.0, t, &m.params).map(|c| (c - 1.0).abs()),
        ];
        for (w, d) in worst.iter_mut().zip(dev) {
            *w = w.max(d.map_err(|e| e.to_string())?);
        }
    }
    let detail = format!("max dev U {:.1e}, theta {:.1e}, C {:.1e}", worst[0], worst[1], worst[2]);
    if worst[0] <= BOUNDARY_TOL_VELOCITY && worst[1] <= BOUNDARY_TOL_SCALAR && worst[2] <= BOUNDARY_TOL_SCALAR {
        Ok(detail)
    } else {
        Err(detail)
    }
}

/// Interior sample points for the residual check.
pub fn residual_points() -> Vec<f64> {
    (1..=20).map(|i| 0.2 * i as f64).collect()
}

pub fn residual_check(members: &[Member]) -> Result<String, String> {
    let ys = residual_points();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for m in members {
        let orders = convergence_orders(&m.params, m.t, &RESIDUAL_STEPS, &ys).map_err(|e| e.to_string())?;
        for o in orders.iter().flatten() {
            lo = lo.min(*o);
            hi = hi.max(*o);
        }
    }
    let detail = format!("orders in [{lo:.3}, {hi:.3}]");
    if (lo - 2.0).abs() <= ORDER_TOL && (hi - 2.0).abs() <= ORDER_TOL {
        Ok(detail)
    } else {
        Err(detail)
    }
}

pub fn monotonicity_check(spec: &SweepSpec) -> Result<String, String> {
    let Some(trend) = spec.trend else {
        return Ok("no ordering claim".to_string());
    };
    let points = sweep::trend_violations_at(spec, &TREND_POINTS).map_err(|e| e.to_string())?;
    let sampled = run_sweep(spec).map_err(|e| e.to_string())?.trend_violations(0.0, 2.0);
    let trend = match trend {
        Trend::Increasing => "increasing",
        Trend::Decreasing => "decreasing",
    };
    match points.first().or(sampled.first()) {
        None => Ok(format!("{} {trend} in {} on (0, 2]", spec.kind, spec.varied)),
        Some(v) => Err(format!("{} not {trend} in {}: {v}", spec.kind, spec.varied)),
    }
}

fn describe(spec: &SweepSpec, value: f64, rep: &ComparisonReport, tol: &Tolerances) -> (bool, String) {
    let worst = rep
        .fields
        .iter()
        .max_by(|a, b| (a.linf / tol.get(a.kind)).total_cmp(&(b.linf / tol.get(b.kind))))
        .expect("three fields");
    (
        rep.within(tol),
        format!(
            "{}: max |d{}| = {:.3e} at Y = {}",
            spec.column_label(value),
            field_symbol(worst.kind),
            worst.linf,
            crate::format::sig(worst.worst_y, 6)
        ),
    )
}

pub fn field_symbol(kind: FieldKind) -> &'static str {
    match kind {
        FieldKind::Velocity => "U",
        FieldKind::Temperature => "theta",
        FieldKind::Concentration => "C",
    }
}

/// Boundary exactness, residual order, oracle agreement and monotonicity for
/// every target. Oracle solves run concurrently; outcomes keep target order.
pub fn run_battery(targets: &[Target], grid: &GridChoice, tol: &Tolerances, until: Option<Instant>) -> BatteryReport {
    let prepared: Vec<(&Target, Result<Vec<Member>, SweepError>)> =
        targets.iter().map(|t| (t, members(&t.spec))).collect();

    let jobs: Vec<(usize, Member)> = prepared
        .iter()
        .enumerate()
        .flat_map(|(i, (_, m))| m.iter().flatten().map(move |m| (i, *m)))
        .collect();
    let solved: Vec<(usize, f64, Result<ComparisonReport, SweepError>)> = jobs
        .par_iter()
        .map(|(i, m)| (*i, m.value, verify_member(&targets[*i].spec, m, grid, until)))
        .collect();

    let mut outcomes = Vec::new();
    for (i, (target, members)) in prepared.iter().enumerate() {
        let members = match members {
            Ok(m) => m,
            Err(e) => {
                for check in Check::ALL {
                    outcomes.push(outcome(target, check, Err(e.to_string())));
                }
                continue;
            }
        };
        outcomes.push(outcome(target, Check::Boundary, boundary_check(members)));
        outcomes.push(outcome(target, Check::Residual, residual_check(members)));

        let mut ok = true;
        let mut worst: Option<(f64, String)> = None;
        for (_, value, rep) in solved.iter().filter(|(j, _, _)| *j == i) {
            match rep {
                Ok(rep) => {
                    let (within, detail) = describe(&target.spec, *value, rep, tol);
                    let score = rep.fields.iter().map(|d| d.linf / tol.get(d.kind)).fold(0.0, f64::max);
                    ok &= within;
                    if worst.as_ref().is_none_or(|(s, _)| score > *s) {
                        worst = Some((score, detail));
                    }
                }
                Err(e) => {
                    ok = false;
                    worst = Some((f64::INFINITY, e.to_string()));
                }
            }
        }
        let detail = worst.map(|(_, d)| d).unwrap_or_default();
        outcomes.push(outcome(target, Check::Oracle, if ok { Ok(detail) } else { Err(detail) }));
        outcomes.push(outcome(target, Check::Monotonicity, monotonicity_check(&target.spec)));
    }
    BatteryReport { grid: *grid, outcomes }
}

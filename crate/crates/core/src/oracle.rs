//! Finite-difference integration of the dimensionless system
//!
//! ```text
//! Pr theta_t = theta_YY - R theta
//!        C_t = C_YY / Sc - K C
//!        U_t = U_YY + Gr theta + Gc C
//! ```
//!
//! on `[0, y_max]` with Dirichlet data `U = t^2`, `theta = exp(a t)`, `C = 1`
//! at the plate and zero at `y_max`. Time stepping is Crank-Nicolson (second
//! order in `Y` and `t`, sources time-centred), started with two backward
//! Euler half steps to damp the incompatibility between the initial and
//! boundary data at `t = 0`. `theta` and `C` are solved first at each level
//! and feed `U`; nothing flows back.
//!
//! The solver is independent of the closed form and serves as its oracle.

use alloc::vec;
use alloc::vec::Vec;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::analytic::{ClosedForm, EvalError, FieldEvaluator, FieldKind};
use crate::params::ValidatedParams;

pub mod tridiag;

use tridiag::ConstTridiagonal;

/// Default wall-normal extent of the truncated domain.
pub const DEFAULT_Y_MAX: f64 = 12.0;
/// Default node count, `dY = 0.005` on `[0, 12]`.
pub const DEFAULT_NY: usize = 2401;
/// Default time step.
pub const DEFAULT_DT: f64 = 1e-4;
/// Smallest domain the far-field truncation is trusted on.
pub const MIN_Y_MAX: f64 = 8.0;
/// Default cap on `ny * steps * 3` node updates per solve.
pub const DEFAULT_WORK_LIMIT: u64 = 2_000_000_000;
/// Magnitude above which a field is considered to reach the far boundary.
pub const FAR_FIELD_TOL: f64 = 1e-5;
/// The far-field monitor watches `Y >= FAR_FIELD_BAND * y_max`.
pub const FAR_FIELD_BAND: f64 = 0.9;
/// Comparisons against the closed form are taken on `Y <= 8`.
pub const DEFAULT_COMPARE_Y: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct GridSpec {
    pub y_max: f64,
    /// Nodes including both boundaries.
    pub ny: usize,
    pub dt: f64,
    pub t_end: f64,
}

impl GridSpec {
    pub fn new(y_max: f64, ny: usize, dt: f64, t_end: f64) -> Result<Self, OracleError> {
        if !(y_max.is_finite() && y_max >= MIN_Y_MAX) {
            return Err(OracleError::InvalidGrid("y_max must be >= 8"));
        }
        if ny < 16 {
            return Err(OracleError::InvalidGrid("ny must be >= 16"));
        }
        if !(dt.is_finite() && dt > 0.0) {
            return Err(OracleError::InvalidGrid("dt must be > 0"));
        }
        if !(t_end.is_finite() && t_end > 0.0) {
            return Err(OracleError::InvalidGrid("t_end must be > 0"));
        }
        Ok(Self { y_max, ny, dt, t_end })
    }

    /// Grid with node spacing `dy` (rounded to fit `y_max` exactly).
    pub fn with_spacing(y_max: f64, dy: f64, dt: f64, t_end: f64) -> Result<Self, OracleError> {
        if !(dy.is_finite() && dy > 0.0) {
            return Err(OracleError::InvalidGrid("dY must be > 0"));
        }
        let ny = libm::round(y_max / dy) as usize + 1;
        Self::new(y_max, ny, dt, t_end)
    }

    /// `y_max = 12`, `dY = 0.005`, `dt = 1e-4`.
    pub fn default_for(t_end: f64) -> Result<Self, OracleError> {
        Self::new(DEFAULT_Y_MAX, DEFAULT_NY, DEFAULT_DT, t_end)
    }

    pub fn dy(&self) -> f64 {
        self.y_max / (self.ny - 1) as f64
    }

    /// Number of time levels; the step is shrunk so they land on `t_end`.
    pub fn steps(&self) -> usize {
        (libm::ceil(self.t_end / self.dt - 1e-9) as usize).max(1)
    }

    pub fn effective_dt(&self) -> f64 {
        self.t_end / self.steps() as f64
    }

    pub fn work(&self) -> u64 {
        3 * self.ny as u64 * self.steps() as u64
    }

    pub fn nodes(&self) -> Vec<f64> {
        let h = self.dy();
        (0..self.ny)
            .map(|i| if i == self.ny - 1 { self.y_max } else { h * i as f64 })
            .collect()
    }
}

/// Caps the cost of a solve. `charge` is called once per time level.
pub trait Budget {
    fn charge(&mut self, work: u64) -> Result<(), OracleError>;
}

/// Budget counted in node updates.
#[derive(Debug, Clone, Copy)]
pub struct WorkBudget {
    pub limit: u64,
    pub used: u64,
}

impl WorkBudget {
    pub fn new(limit: u64) -> Self {
        Self { limit, used: 0 }
    }
}

impl Default for WorkBudget {
    fn default() -> Self {
        Self::new(DEFAULT_WORK_LIMIT)
    }
}

impl Budget for WorkBudget {
    fn charge(&mut self, work: u64) -> Result<(), OracleError> {
        self.used += work;
        if self.used > self.limit {
            Err(OracleError::BudgetExceeded {
                detail: "work limit reached",
            })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolveOptions {
    /// Store a snapshot every this many full steps; 0 disables snapshots.
    pub snapshot_every: usize,
    pub far_field_tol: f64,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            snapshot_every: 0,
            far_field_tol: FAR_FIELD_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Snapshot {
    pub t: f64,
    pub velocity: Vec<f64>,
    pub temperature: Vec<f64>,
    pub concentration: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct OracleSolution {
    pub grid: GridSpec,
    pub params: ValidatedParams,
    pub ys: Vec<f64>,
    /// Final time (equals `grid.t_end` up to rounding of the step count).
    pub t: f64,
    pub velocity: Vec<f64>,
    pub temperature: Vec<f64>,
    pub concentration: Vec<f64>,
    pub snapshots: Vec<Snapshot>,
    /// Formal order in `(Y, t)`.
    pub scheme_order: (u8, u8),
}

impl OracleSolution {
    pub fn field(&self, kind: FieldKind) -> &[f64] {
        match kind {
            FieldKind::Velocity => &self.velocity,
            FieldKind::Temperature => &self.temperature,
            FieldKind::Concentration => &self.concentration,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("invalid grid: {0}")]
    InvalidGrid(&'static str),
    #[error("oracle budget exceeded: {detail}")]
    BudgetExceeded { detail: &'static str },
    #[error(
        "far-field violation: |{kind}| = {value:e} at Y = {y}, t = {t}; increase y_max"
    )]
    FarField {
        kind: FieldKind,
        y: f64,
        t: f64,
        value: f64,
    },
    #[error("solution was computed for different parameters")]
    ParameterMismatch,
    #[error("closed-form evaluation failed at Y = {y}: {source}")]
    Eval {
        y: f64,
        #[source]
        source: EvalError,
    },
}

/// One diffusion-reaction equation `f_t = diff f_YY - decay f + source`.
struct Equation {
    diff: f64,
    decay: f64,
    startup: ConstTridiagonal,
    main: ConstTridiagonal,
}

impl Equation {
    fn new(diff: f64, decay: f64, h: f64, n_interior: usize, dt_startup: f64, dt_main: f64) -> Self {
        let matrix = |dt: f64, weight: f64| {
            let r = weight * dt * diff / (h * h);
            ConstTridiagonal::new(n_interior, 1.0 + 2.0 * r + weight * dt * decay, -r)
        };
        Self {
            diff,
            decay,
            startup: matrix(dt_startup, 1.0),
            main: matrix(dt_main, 0.5),
        }
    }

    /// Advance `old` to `new` by a theta-scheme step with weight `weight`
    /// (1 = backward Euler, 1/2 = Crank-Nicolson). `sources`, when given, are
    /// the source term at the old and new levels.
    #[allow(clippy::too_many_arguments)]
    fn step(
        &self,
        old: &[f64],
        new: &mut [f64],
        wall: f64,
        dt: f64,
        h: f64,
        weight: f64,
        sources: Option<(&[f64], &[f64])>,
    ) {
        let n = old.len();
        let explicit = 1.0 - weight;
        let r = dt * self.diff / (h * h);
        let rhs = &mut new[1..n - 1];
        for (k, out) in rhs.iter_mut().enumerate() {
            let i = k + 1;
            let lap = old[i + 1] - 2.0 * old[i] + old[i - 1];
            let mut v = old[i] + explicit * (r * lap - dt * self.decay * old[i]);
            if let Some((s_old, s_new)) = sources {
                v += dt * (explicit * s_old[i] + weight * s_new[i]);
            }
            *out = v;
        }
        rhs[0] += weight * r * wall;
        let system = if weight == 1.0 { &self.startup } else { &self.main };
        system.solve_in_place(rhs);
        new[0] = wall;
        new[n - 1] = 0.0;
    }
}

/// Integrate to `grid.t_end` with default options and work budget.
pub fn solve(p: &ValidatedParams, grid: &GridSpec) -> Result<OracleSolution, OracleError> {
    solve_with(p, grid, &SolveOptions::default(), &mut WorkBudget::default())
}

pub fn solve_with(
    p: &ValidatedParams,
    grid: &GridSpec,
    opts: &SolveOptions,
    budget: &mut dyn Budget,
) -> Result<OracleSolution, OracleError> {
    let f = p.params();
    let n = grid.ny;
    let h = grid.dy();
    let steps = grid.steps();
    let dt = grid.effective_dt();
    let half = 0.5 * dt;
    let interior = n - 2;
    let ys = grid.nodes();
    let band_start = ys
        .iter()
        .position(|&y| y >= FAR_FIELD_BAND * grid.y_max)
        .unwrap_or(n - 1);

    let thermal = Equation::new(1.0 / f.pr, f.radiation / f.pr, h, interior, half, dt);
    let species = Equation::new(1.0 / f.sc, f.reaction, h, interior, half, dt);
    let momentum = Equation::new(1.0, 0.0, h, interior, half, dt);

    let mut theta = vec![0.0; n];
    let mut conc = vec![0.0; n];
    let mut vel = vec![0.0; n];
    let mut theta_new = vec![0.0; n];
    let mut conc_new = vec![0.0; n];
    let mut vel_new = vec![0.0; n];
    let mut src_old = vec![0.0; n];
    let mut src_new = vec![0.0; n];
    let mut snapshots = Vec::new();

    // Two backward-Euler half steps cover the first interval.
    let mut levels: Vec<(f64, f64)> = vec![(half, 1.0), (half, 1.0)];
    levels.extend(core::iter::repeat_n((dt, 0.5), steps - 1));

    let work_per_level = 3 * n as u64;
    let mut t = 0.0;
    let mut full_steps = 0usize;
    let mut elapsed = 0.0;
    for (k, &(step, weight)) in levels.iter().enumerate() {
        budget.charge(work_per_level)?;
        elapsed += step;
        // Land exactly on the nominal levels to keep boundary data exact.
        let t_new = if k == 0 { half } else { dt * k as f64 };
        debug_assert!((t_new - elapsed).abs() < 1e-9);

        thermal.step(&theta, &mut theta_new, libm::exp(f.temp_rate * t_new), step, h, weight, None);
        species.step(&conc, &mut conc_new, 1.0, step, h, weight, None);
        for i in 0..n {
            src_old[i] = f.gr * theta[i] + f.gc * conc[i];
            src_new[i] = f.gr * theta_new[i] + f.gc * conc_new[i];
        }
        momentum.step(&vel, &mut vel_new, t_new * t_new, step, h, weight, Some((&src_old, &src_new)));

        core::mem::swap(&mut theta, &mut theta_new);
        core::mem::swap(&mut conc, &mut conc_new);
        core::mem::swap(&mut vel, &mut vel_new);
        t = t_new;

        for (kind, field) in [
            (FieldKind::Velocity, &vel),
            (FieldKind::Temperature, &theta),
            (FieldKind::Concentration, &conc),
        ] {
            if let Some((i, v)) = field[band_start..n - 1]
                .iter()
                .enumerate()
                .find(|(_, v)| v.is_nan() || v.abs() > opts.far_field_tol)
            {
                return Err(OracleError::FarField {
                    kind,
                    y: ys[band_start + i],
                    t,
                    value: *v,
                });
            }
        }

        if k >= 1 {
            full_steps += 1;
            if opts.snapshot_every > 0 && full_steps.is_multiple_of(opts.snapshot_every) {
                snapshots.push(Snapshot {
                    t,
                    velocity: vel.clone(),
                    temperature: theta.clone(),
                    concentration: conc.clone(),
                });
            }
        }
    }

    Ok(OracleSolution {
        grid: *grid,
        params: *p,
        ys,
        t,
        velocity: vel,
        temperature: theta,
        concentration: conc,
        snapshots,
        scheme_order: (2, 2),
    })
}

/// Disagreement of one field between oracle and closed form.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct FieldDiff {
    pub kind: FieldKind,
    pub linf: f64,
    /// Discrete L2 norm, `sqrt(dY * sum e_i^2)`.
    pub l2: f64,
    pub worst_index: usize,
    pub worst_y: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct ComparisonReport {
    pub t: f64,
    pub y_limit: f64,
    pub fields: [FieldDiff; 3],
}

impl ComparisonReport {
    pub fn field(&self, kind: FieldKind) -> &FieldDiff {
        self.fields.iter().find(|d| d.kind == kind).expect("all kinds present")
    }

    pub fn breaches(&self, tol: &Tolerances) -> Vec<FieldDiff> {
        self.fields
            .iter()
            .filter(|d| d.linf.is_nan() || d.linf > tol.get(d.kind))
            .copied()
            .collect()
    }

    pub fn within(&self, tol: &Tolerances) -> bool {
        self.breaches(tol).is_empty()
    }
}

/// L-infinity acceptance thresholds per field.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Tolerances {
    pub velocity: f64,
    pub temperature: f64,
    pub concentration: f64,
}

impl Tolerances {
    pub fn get(&self, kind: FieldKind) -> f64 {
        match kind {
            FieldKind::Velocity => self.velocity,
            FieldKind::Temperature => self.temperature,
            FieldKind::Concentration => self.concentration,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            velocity: 5e-3,
            temperature: 5e-4,
            concentration: 5e-4,
        }
    }
}

/// Compare an oracle solution with the closed form on `Y <= 8`.
pub fn compare(sol: &OracleSolution, p: &ValidatedParams) -> Result<ComparisonReport, OracleError> {
    compare_with(sol, p, &ClosedForm, DEFAULT_COMPARE_Y)
}

pub fn compare_with(
    sol: &OracleSolution,
    p: &ValidatedParams,
    reference: &dyn FieldEvaluator,
    y_limit: f64,
) -> Result<ComparisonReport, OracleError> {
    if sol.params != *p {
        return Err(OracleError::ParameterMismatch);
    }
    let h = sol.grid.dy();
    let fields = FieldKind::ALL.map(|kind| -> Result<FieldDiff, OracleError> {
        let mut diff = FieldDiff {
            kind,
            linf: 0.0,
            l2: 0.0,
            worst_index: 0,
            worst_y: 0.0,
        };
        let mut sum_sq = 0.0;
        for (i, (&y, &v)) in sol.ys.iter().zip(sol.field(kind)).enumerate() {
            if y > y_limit + 1e-12 {
                break;
            }
            let exact = reference
                .evaluate(kind, y, sol.t, p)
                .map_err(|source| OracleError::Eval { y, source })?;
            let e = (exact - v).abs();
            sum_sq += e * e;
            if e.is_nan() || e > diff.linf {
                diff.linf = e;
                diff.worst_index = i;
                diff.worst_y = y;
            }
        }
        diff.l2 = libm::sqrt(h * sum_sq);
        Ok(diff)
    });
    let [u, th, c] = fields;
    Ok(ComparisonReport {
        t: sol.t,
        y_limit,
        fields: [u?, th?, c?],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{validate, FlowParams};

    fn figure1() -> ValidatedParams {
        validate(&FlowParams {
            gr: 5.0,
            gc: 5.0,
            pr: 0.71,
            sc: 0.6,
            radiation: 2.0,
            reaction: 2.0,
            temp_rate: 0.2,
        })
        .unwrap()
    }

    fn coarse(t_end: f64) -> GridSpec {
        GridSpec::with_spacing(12.0, 0.02, 4e-4, t_end).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(7.9, 100, 1e-3, 1.0).is_err());
        assert!(GridSpec::new(12.0, 15, 1e-3, 1.0).is_err());
        assert!(GridSpec::new(12.0, 100, 0.0, 1.0).is_err());
        assert!(GridSpec::new(12.0, 100, 1e-3, 0.0).is_err());
        let g = GridSpec::default_for(0.4).unwrap();
        assert_eq!(g.ny, 2401);
        assert!((g.dy() - 0.005).abs() < 1e-15);
        assert_eq!(g.steps(), 4000);
    }

    #[test]
    fn steps_land_on_t_end() {
        let g = GridSpec::new(12.0, 100, 3e-3, 0.4).unwrap();
        assert_eq!(g.steps(), 134);
        assert!((g.effective_dt() * 134.0 - 0.4).abs() < 1e-15);
    }

    #[test]
    fn boundary_rows_hold_dirichlet_data() {
        let p = figure1();
        let opts = SolveOptions {
            snapshot_every: 100,
            ..SolveOptions::default()
        };
        let sol = solve_with(&p, &coarse(0.4), &opts, &mut WorkBudget::default()).unwrap();
        assert_eq!(sol.snapshots.len(), 10);
        for s in sol.snapshots.iter().chain(core::iter::once(&Snapshot {
            t: sol.t,
            velocity: sol.velocity.clone(),
            temperature: sol.temperature.clone(),
            concentration: sol.concentration.clone(),
        })) {
            assert_eq!(s.velocity[0], s.t * s.t);
            assert_eq!(s.temperature[0], libm::exp(0.2 * s.t));
            assert_eq!(s.concentration[0], 1.0);
            assert_eq!(*s.velocity.last().unwrap(), 0.0);
            assert_eq!(*s.temperature.last().unwrap(), 0.0);
            assert_eq!(*s.concentration.last().unwrap(), 0.0);
        }
    }

    #[test]
    fn comparing_the_closed_form_with_itself_is_zero() {
        struct Sampled<'a>(&'a OracleSolution);
        impl FieldEvaluator for Sampled<'_> {
            fn evaluate(&self, kind: FieldKind, y: f64, _t: f64, _p: &ValidatedParams) -> Result<f64, EvalError> {
                let i = self.0.ys.iter().position(|&v| v == y).unwrap();
                Ok(self.0.field(kind)[i])
            }
        }
        let p = figure1();
        let sol = solve(&p, &coarse(0.2)).unwrap();
        let rep = compare_with(&sol, &p, &Sampled(&sol), 8.0).unwrap();
        for d in rep.fields {
            assert_eq!(d.linf, 0.0);
            assert_eq!(d.l2, 0.0);
        }
    }

    #[test]
    fn coarse_grid_agrees_with_closed_form() {
        let p = figure1();
        let sol = solve(&p, &coarse(0.4)).unwrap();
        let rep = compare(&sol, &p).unwrap();
        assert!(rep.within(&Tolerances::default()), "{rep:?}");
    }

    #[test]
    fn parameter_mismatch_is_reported() {
        let p = figure1();
        let sol = solve(&p, &coarse(0.1)).unwrap();
        let mut other = *p.params();
        other.gr = 6.0;
        let other = validate(&other).unwrap();
        assert_eq!(compare(&sol, &other), Err(OracleError::ParameterMismatch));
    }

    #[test]
    fn work_budget_is_enforced() {
        let p = figure1();
        let err = solve_with(&p, &coarse(0.4), &SolveOptions::default(), &mut WorkBudget::new(10_000)).unwrap_err();
        assert!(matches!(err, OracleError::BudgetExceeded { .. }));
    }

    #[test]
    fn far_field_monitor_trips_on_short_domain() {
        // Sc = 0.16 diffuses mass far enough to reach Y = 7.2 by t = 0.8.
        let p = validate(&FlowParams {
            gr: 2.0,
            gc: 5.0,
            pr: 0.71,
            sc: 0.16,
            radiation: 2.0,
            reaction: 0.2,
            temp_rate: 0.2,
        })
        .unwrap();
        let g = GridSpec::with_spacing(8.0, 0.02, 4e-4, 0.8).unwrap();
        let err = solve(&p, &g).unwrap_err();
        assert!(matches!(err, OracleError::FarField { kind: FieldKind::Concentration, .. }), "{err:?}");
    }

    #[test]
    fn temperature_and_concentration_ignore_buoyancy() {
        let p = figure1();
        let mut q = *p.params();
        q.gr = 50.0;
        q.gc = -3.0;
        let q = validate(&q).unwrap();
        let a = solve(&p, &coarse(0.3)).unwrap();
        let b = solve(&q, &coarse(0.3)).unwrap();
        assert_eq!(a.temperature, b.temperature);
        assert_eq!(a.concentration, b.concentration);
        assert_ne!(a.velocity, b.velocity);
    }

    #[test]
    fn concentration_obeys_maximum_principle() {
        let sol = solve(&figure1(), &coarse(0.6)).unwrap();
        assert!(sol.concentration.iter().all(|&c| (0.0..=1.0 + 1e-9).contains(&c)));
    }
}

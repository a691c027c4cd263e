//! Closed-form temperature, concentration and velocity fields.
//!
//! Every non-polynomial term of the solution is a *transfer pair*
//!
//! ```text
//! P(u; pole, rho) = exp(pole t)/2 * [exp(2uv) erfc(u + v) + exp(-2uv) erfc(u - v)],
//! v = sqrt(rho t)
//! ```
//!
//! the inverse Laplace transform of `exp(-Y sqrt(kappa (s + shift))) / (s - pole)`
//! with `u = eta sqrt(kappa)` and `rho = pole + shift`. `P` is even in `v`,
//! so it is an entire, real function of `rho`; for `rho < 0` it is evaluated
//! through the Faddeeva function instead of complex `erfc`.

use alloc::vec::Vec;
use core::f64::consts::FRAC_2_SQRT_PI;
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64;
#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::params::{similarity_eta, DomainError, ValidatedParams};
use crate::specfun::{self, SpecfunError};

/// Below this magnitude the polynomial group of the velocity is flushed to 0.
const HOMOGENEOUS_FLUSH: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum FieldKind {
    Velocity,
    Temperature,
    Concentration,
}

impl FieldKind {
    pub const ALL: [FieldKind; 3] = [
        FieldKind::Velocity,
        FieldKind::Temperature,
        FieldKind::Concentration,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            FieldKind::Velocity => "velocity",
            FieldKind::Temperature => "temperature",
            FieldKind::Concentration => "concentration",
        }
    }
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown field kind {0:?} (expected velocity, temperature or concentration)")]
pub struct UnknownFieldKind(pub alloc::string::String);

impl FromStr for FieldKind {
    type Err = UnknownFieldKind;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "velocity" | "u" => Ok(FieldKind::Velocity),
            "temperature" | "theta" => Ok(FieldKind::Temperature),
            "concentration" | "c" => Ok(FieldKind::Concentration),
            _ => Err(UnknownFieldKind(s.into())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum EvalError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error(transparent)]
    Specfun(#[from] SpecfunError),
}

/// Quantities shared by every term at one `(Y, t)`.
struct Point {
    t: f64,
    eta: f64,
}

impl Point {
    fn new(y: f64, t: f64) -> Result<Self, DomainError> {
        Ok(Self {
            t,
            eta: similarity_eta(y, t)?,
        })
    }

    /// Transfer pair with diffusivity factor `kappa`, pole `pole` and
    /// branch-point shift `shift`.
    fn pair(&self, kappa: f64, pole: f64, shift: f64) -> Result<f64, SpecfunError> {
        transfer_pair(
            self.eta * libm::sqrt(kappa),
            pole * self.t,
            (pole + shift) * self.t,
        )
    }
}

/// `exp(pole_t)/2 * [exp(2uv) erfc(u+v) + exp(-2uv) erfc(u-v)]`, `v^2 = radicand_t`.
fn transfer_pair(u: f64, pole_t: f64, radicand_t: f64) -> Result<f64, SpecfunError> {
    if u == 0.0 {
        // erfc(v) + erfc(-v) = 2 for every v
        let v = libm::exp(pole_t);
        return if v.is_finite() {
            Ok(v)
        } else {
            Err(SpecfunError::Overflow { p: pole_t, q: 0.0 })
        };
    }
    if radicand_t >= 0.0 {
        let v = libm::sqrt(radicand_t);
        let cross = 2.0 * u * v;
        let plus = specfun::exp_erfc(pole_t + cross, u + v)?;
        let minus = specfun::exp_erfc(pole_t - cross, u - v)?;
        Ok(0.5 * (plus + minus))
    } else {
        // v = i w:  P = exp(pole_t + w^2 - u^2) Re w(-w + i u)
        let omega = libm::sqrt(-radicand_t);
        let w = specfun::faddeeva(Complex64::new(-omega, u))?;
        let scale = pole_t - radicand_t - u * u;
        let v = libm::exp(scale) * w.re;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(SpecfunError::Overflow { p: scale, q: u })
        }
    }
}

/// Dimensionless temperature `theta(Y, t)`.
pub fn temperature(y: f64, t: f64, p: &ValidatedParams) -> Result<f64, EvalError> {
    let pt = Point::new(y, t)?;
    Ok(temperature_at(&pt, p)?)
}

fn temperature_at(pt: &Point, p: &ValidatedParams) -> Result<f64, SpecfunError> {
    let f = p.params();
    pt.pair(f.pr, f.temp_rate, p.derived().thermal_shift)
}

/// Dimensionless concentration `C(Y, t)`.
pub fn concentration(y: f64, t: f64, p: &ValidatedParams) -> Result<f64, EvalError> {
    let pt = Point::new(y, t)?;
    Ok(concentration_at(&pt, p)?)
}

fn concentration_at(pt: &Point, p: &ValidatedParams) -> Result<f64, SpecfunError> {
    let f = p.params();
    pt.pair(f.sc, 0.0, f.reaction)
}

/// The four additive groups of the velocity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VelocityGroups {
    /// Response to the parabolic plate motion alone.
    pub homogeneous: f64,
    /// Mass-buoyancy group, amplitude `A`.
    pub mass: f64,
    /// Thermal-buoyancy group at the wall-temperature pole, amplitude `B`.
    pub wall_pole: f64,
    /// Thermal-buoyancy group at the radiative pole `c`, amplitude `C`.
    pub thermal_pole: f64,
}

impl VelocityGroups {
    pub fn total(&self) -> f64 {
        self.homogeneous + self.mass + self.wall_pole + self.thermal_pole
    }
}

/// Dimensionless velocity `U(Y, t)`.
pub fn velocity(y: f64, t: f64, p: &ValidatedParams) -> Result<f64, EvalError> {
    Ok(velocity_groups(y, t, p)?.total())
}

/// Velocity split into its additive groups.
pub fn velocity_groups(y: f64, t: f64, p: &ValidatedParams) -> Result<VelocityGroups, EvalError> {
    let pt = Point::new(y, t)?;
    let f = p.params();
    let dc = p.derived();
    let eta = pt.eta;
    let erfc_eta = specfun::erfc(eta)?;

    let homogeneous = homogeneous_group(eta, t)?;

    let mass = if dc.amp_mass == 0.0 {
        0.0
    } else {
        let plate = erfc_eta - pt.pair(1.0, dc.mass_pole, 0.0)?;
        let fluid = pt.pair(f.sc, dc.mass_pole, f.reaction)? - concentration_at(&pt, p)?;
        dc.amp_mass * (plate + fluid)
    };

    let (wall_pole, thermal_pole) = if dc.amp_wall_pole == 0.0 && dc.amp_thermal_pole == 0.0 {
        (0.0, 0.0)
    } else {
        let wall = temperature_at(&pt, p)? - pt.pair(1.0, f.temp_rate, 0.0)?;
        let radiative = pt.pair(f.pr, dc.thermal_pole, dc.thermal_shift)?
            - pt.pair(1.0, dc.thermal_pole, 0.0)?;
        (dc.amp_wall_pole * wall, dc.amp_thermal_pole * radiative)
    };

    Ok(VelocityGroups {
        homogeneous,
        mass,
        wall_pole,
        thermal_pole,
    })
}

/// `(t^2/3)[(3 + 12 eta^2 + 4 eta^4) erfc(eta) - (eta/sqrt(pi))(10 + 4 eta^2) exp(-eta^2)]`
fn homogeneous_group(eta: f64, t: f64) -> Result<f64, SpecfunError> {
    let eta2 = eta * eta;
    let gauss = libm::exp(-eta2);
    if gauss == 0.0 {
        return Ok(0.0);
    }
    let poly = 3.0 + eta2 * (12.0 + 4.0 * eta2);
    let odd = 0.5 * FRAC_2_SQRT_PI * eta * (10.0 + 4.0 * eta2);
    let g = t * t / 3.0 * gauss * (poly * specfun::erfcx(eta)? - odd);
    Ok(if g.abs() < HOMOGENEOUS_FLUSH { 0.0 } else { g })
}

/// Evaluate one field.
pub fn evaluate(kind: FieldKind, y: f64, t: f64, p: &ValidatedParams) -> Result<f64, EvalError> {
    match kind {
        FieldKind::Velocity => velocity(y, t, p),
        FieldKind::Temperature => temperature(y, t, p),
        FieldKind::Concentration => concentration(y, t, p),
    }
}

/// Anything that can stand in for the closed form, e.g. in comparisons.
pub trait FieldEvaluator {
    fn evaluate(&self, kind: FieldKind, y: f64, t: f64, p: &ValidatedParams) -> Result<f64, EvalError>;
}

/// The closed-form solution.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedForm;

impl FieldEvaluator for ClosedForm {
    fn evaluate(&self, kind: FieldKind, y: f64, t: f64, p: &ValidatedParams) -> Result<f64, EvalError> {
        evaluate(kind, y, t, p)
    }
}

/// A field sampled on a `Y` grid at fixed `t`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Profile {
    pub kind: FieldKind,
    pub t: f64,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
    pub params: ValidatedParams,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProfileError {
    #[error("empty sampling grid")]
    Empty,
    #[error("Y grid must be finite, >= 0 and strictly increasing (index {index}, Y = {y})")]
    BadGrid { index: usize, y: f64 },
    #[error("evaluation failed at index {index} (Y = {y}): {source}")]
    At {
        index: usize,
        y: f64,
        #[source]
        source: EvalError,
    },
    #[error("non-finite value at index {index} (Y = {y})")]
    NonFinite { index: usize, y: f64 },
}

/// Check the profile grid invariants.
pub fn check_grid(ys: &[f64]) -> Result<(), ProfileError> {
    if ys.is_empty() {
        return Err(ProfileError::Empty);
    }
    let mut prev = f64::NEG_INFINITY;
    for (index, &y) in ys.iter().enumerate() {
        if !(y.is_finite() && y >= 0.0 && y > prev) {
            return Err(ProfileError::BadGrid { index, y });
        }
        prev = y;
    }
    Ok(())
}

/// Sample `kind` on `ys` at time `t`.
pub fn profile(kind: FieldKind, ys: &[f64], t: f64, p: &ValidatedParams) -> Result<Profile, ProfileError> {
    check_grid(ys)?;
    let values = ys
        .iter()
        .enumerate()
        .map(|(index, &y)| {
            let v = evaluate(kind, y, t, p).map_err(|source| ProfileError::At { index, y, source })?;
            if v.is_finite() {
                Ok(v)
            } else {
                Err(ProfileError::NonFinite { index, y })
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Profile {
        kind,
        t,
        ys: ys.to_vec(),
        values,
        params: *p,
    })
}

/// `n` uniformly spaced points on `[lo, hi]`, endpoints included.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => alloc::vec![lo],
        _ => {
            let last = (n - 1) as f64;
            (0..n)
                .map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * i as f64 / last })
                .collect()
        }
    }
}

pub mod residual {
    //! Finite-difference residuals of the governing equations applied to
    //! closed-form samples. For an exact solution they vanish like `h^2`.

    use alloc::vec::Vec;

    use super::{concentration, temperature, velocity, EvalError};
    use crate::params::{DomainError, ValidatedParams};

    /// Largest absolute residual of each equation over the sample points.
    #[derive(Debug, Clone, Copy, PartialEq)]
    pub struct Residuals {
        pub velocity: f64,
        pub temperature: f64,
        pub concentration: f64,
    }

    impl Residuals {
        pub fn as_array(&self) -> [f64; 3] {
            [self.velocity, self.temperature, self.concentration]
        }
    }

    /// Residuals with central differences of step `h` in both `Y` and `t`.
    pub fn max_residuals(p: &ValidatedParams, t: f64, h: f64, ys: &[f64]) -> Result<Residuals, EvalError> {
        if t - h <= 0.0 {
            return Err(DomainError::NonPositiveTime(t - h).into());
        }
        let f = p.params();
        let mut out = Residuals {
            velocity: 0.0,
            temperature: 0.0,
            concentration: 0.0,
        };
        for &y in ys {
            if y - h < 0.0 {
                return Err(DomainError::InvalidCoordinate(y - h).into());
            }
            let stencil = |g: &dyn Fn(f64, f64) -> Result<f64, EvalError>| -> Result<(f64, f64, f64), EvalError> {
                let c = g(y, t)?;
                let dt = (g(y, t + h)? - g(y, t - h)?) / (2.0 * h);
                let dyy = (g(y + h, t)? - 2.0 * c + g(y - h, t)?) / (h * h);
                Ok((c, dt, dyy))
            };
            let (th, th_t, th_yy) = stencil(&|y, t| temperature(y, t, p))?;
            let (c, c_t, c_yy) = stencil(&|y, t| concentration(y, t, p))?;
            let (_, u_t, u_yy) = stencil(&|y, t| velocity(y, t, p))?;

            let r_th = f.pr * th_t - th_yy + f.radiation * th;
            let r_c = c_t - c_yy / f.sc + f.reaction * c;
            let r_u = u_t - u_yy - f.gr * th - f.gc * c;
            out.temperature = out.temperature.max(r_th.abs());
            out.concentration = out.concentration.max(r_c.abs());
            out.velocity = out.velocity.max(r_u.abs());
        }
        Ok(out)
    }

    /// Observed orders `ln(r_i / r_{i+1}) / ln(h_i / h_{i+1})` for successive steps.
    pub fn convergence_orders(
        p: &ValidatedParams,
        t: f64,
        steps: &[f64],
        ys: &[f64],
    ) -> Result<Vec<[f64; 3]>, EvalError> {
        let res = steps
            .iter()
            .map(|&h| max_residuals(p, t, h, ys).map(|r| r.as_array()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(res
            .windows(2)
            .zip(steps.windows(2))
            .map(|(r, h)| {
                let ratio = libm::log(h[0] / h[1]);
                [0, 1, 2].map(|i| libm::log(r[0][i] / r[1][i]) / ratio)
            })
            .collect())
    }
}

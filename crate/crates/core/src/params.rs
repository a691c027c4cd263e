//! Dimensional and dimensionless parameter models.
//!
//! [`FlowParams`] holds the seven dimensionless controls of the problem.
//! [`validate`] checks them against the singular manifolds of the closed
//! form and attaches the [`DerivedConstants`] the solution is built from.

use alloc::vec::Vec;
use core::fmt;

#[cfg(feature = "serde")]
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Minimum distance kept from every singular manifold
/// (Pr = 1, Sc = 1, a = c, K = 0 with Gc != 0).
pub const EPS_SING: f64 = 1e-6;

/// The dimensionless controls.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct FlowParams {
    /// Thermal Grashof number.
    #[cfg_attr(feature = "serde", serde(rename = "Gr"))]
    pub gr: f64,
    /// Mass Grashof number.
    #[cfg_attr(feature = "serde", serde(rename = "Gc"))]
    pub gc: f64,
    /// Prandtl number.
    #[cfg_attr(feature = "serde", serde(rename = "Pr"))]
    pub pr: f64,
    /// Schmidt number.
    #[cfg_attr(feature = "serde", serde(rename = "Sc"))]
    pub sc: f64,
    /// Radiation parameter `R`.
    #[cfg_attr(feature = "serde", serde(rename = "R"))]
    pub radiation: f64,
    /// First-order reaction parameter `K`.
    #[cfg_attr(feature = "serde", serde(rename = "K"))]
    pub reaction: f64,
    /// Exponential rate `a` of the wall temperature, `theta(0, t) = exp(a t)`.
    #[cfg_attr(feature = "serde", serde(rename = "a"))]
    pub temp_rate: f64,
}

/// Constants of the closed form.
///
/// Naming follows their role in the Laplace-domain solution: the thermal
/// field carries the branch point `s = -b`; the buoyancy transfer functions
/// have poles at `s = c` (thermal) and `s = d` (mass), with residue
/// amplitudes `A`, `B`, `C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// `b = R / Pr`
    pub thermal_shift: f64,
    /// `c = R / (1 - Pr)`
    pub thermal_pole: f64,
    /// `d = K Sc / (1 - Sc)`
    pub mass_pole: f64,
    /// `A = Gc / (d (1 - Sc))`, zero when `Gc = 0`.
    pub amp_mass: f64,
    /// `B = Gr / ((1 - Pr)(a - c))`, zero when `Gr = 0`.
    pub amp_wall_pole: f64,
    /// `C = Gr / ((1 - Pr)(c - a))`, zero when `Gr = 0`.
    pub amp_thermal_pole: f64,
}

impl DerivedConstants {
    fn compute(p: &FlowParams) -> Self {
        let thermal_shift = p.radiation / p.pr;
        let thermal_pole = p.radiation / (1.0 - p.pr);
        let mass_pole = p.reaction * p.sc / (1.0 - p.sc);
        let amp_mass = if p.gc == 0.0 {
            0.0
        } else {
            p.gc / (mass_pole * (1.0 - p.sc))
        };
        let (amp_wall_pole, amp_thermal_pole) = if p.gr == 0.0 {
            (0.0, 0.0)
        } else {
            (
                p.gr / ((1.0 - p.pr) * (p.temp_rate - thermal_pole)),
                p.gr / ((1.0 - p.pr) * (thermal_pole - p.temp_rate)),
            )
        };
        Self {
            thermal_shift,
            thermal_pole,
            mass_pole,
            amp_mass,
            amp_wall_pole,
            amp_thermal_pole,
        }
    }

    /// `(symbol, defining expression, value)` for each constant.
    pub fn expressions(&self) -> [(&'static str, &'static str, f64); 6] {
        [
            ("b", "R/Pr", self.thermal_shift),
            ("c", "R/(1-Pr)", self.thermal_pole),
            ("d", "K*Sc/(1-Sc)", self.mass_pole),
            ("A", "Gc/(d*(1-Sc))", self.amp_mass),
            ("B", "Gr/((1-Pr)*(a-c))", self.amp_wall_pole),
            ("C", "Gr/((1-Pr)*(c-a))", self.amp_thermal_pole),
        ]
    }
}

/// Parameters that passed [`validate`], together with their derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(try_from = "FlowParams", into = "FlowParams"))]
pub struct ValidatedParams {
    params: FlowParams,
    derived: DerivedConstants,
}

impl ValidatedParams {
    pub fn params(&self) -> &FlowParams {
        &self.params
    }

    pub fn derived(&self) -> &DerivedConstants {
        &self.derived
    }
}

impl TryFrom<FlowParams> for ValidatedParams {
    type Error = ValidationError;

    fn try_from(p: FlowParams) -> Result<Self, Self::Error> {
        validate(&p)
    }
}

impl From<ValidatedParams> for FlowParams {
    fn from(v: ValidatedParams) -> Self {
        v.params
    }
}

/// A single violated invariant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("NonFinite: {0} is not a finite number")]
    NonFinite(&'static str),
    #[error("NonPositivePr: Pr must be > 0")]
    NonPositivePr,
    #[error("NonPositiveSc: Sc must be > 0")]
    NonPositiveSc,
    #[error("NegativeRadiation: R must be >= 0")]
    NegativeRadiation,
    #[error("NegativeReaction: K must be >= 0")]
    NegativeReaction,
    #[error("SingularPr: |Pr - 1| < {EPS_SING}")]
    SingularPr,
    #[error("SingularSc: |Sc - 1| < {EPS_SING}")]
    SingularSc,
    #[error("SingularResonance: a is within {EPS_SING} (relative) of c = R/(1-Pr)")]
    SingularResonance,
    #[error("ZeroReactionWithBuoyancy: K < {EPS_SING} while Gc != 0")]
    ZeroReactionWithBuoyancy,
}

/// Every invariant a parameter set violated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationError {
    pub violations: Vec<Violation>,
}

impl ValidationError {
    pub fn contains(&self, v: Violation) -> bool {
        self.violations.contains(&v)
    }
}

impl fmt::Display for ValidationError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("invalid flow parameters: ")?;
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl core::error::Error for ValidationError {}

/// Check `p` against the validity domain of the closed form.
///
/// Rejection is total: no constants are returned for a parameter set that
/// sits within [`EPS_SING`] of a singular manifold.
pub fn validate(p: &FlowParams) -> Result<ValidatedParams, ValidationError> {
    let mut violations = Vec::new();
    let fields = [
        ("Gr", p.gr),
        ("Gc", p.gc),
        ("Pr", p.pr),
        ("Sc", p.sc),
        ("R", p.radiation),
        ("K", p.reaction),
        ("a", p.temp_rate),
    ];
    for (name, v) in fields {
        if !v.is_finite() {
            violations.push(Violation::NonFinite(name));
        }
    }
    if !violations.is_empty() {
        return Err(ValidationError { violations });
    }

    if p.pr <= 0.0 {
        violations.push(Violation::NonPositivePr);
    }
    if p.sc <= 0.0 {
        violations.push(Violation::NonPositiveSc);
    }
    if p.radiation < 0.0 {
        violations.push(Violation::NegativeRadiation);
    }
    if p.reaction < 0.0 {
        violations.push(Violation::NegativeReaction);
    }
    let pr_singular = (p.pr - 1.0).abs() < EPS_SING;
    if pr_singular {
        violations.push(Violation::SingularPr);
    }
    if (p.sc - 1.0).abs() < EPS_SING {
        violations.push(Violation::SingularSc);
    }
    if p.gr != 0.0 && !pr_singular {
        let c = p.radiation / (1.0 - p.pr);
        if (p.temp_rate - c).abs() < EPS_SING * c.abs().max(1.0) {
            violations.push(Violation::SingularResonance);
        }
    }
    if p.gc != 0.0 && p.reaction < EPS_SING {
        violations.push(Violation::ZeroReactionWithBuoyancy);
    }

    if !violations.is_empty() {
        return Err(ValidationError { violations });
    }
    Ok(ValidatedParams {
        params: *p,
        derived: DerivedConstants::compute(p),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DomainError {
    #[error("time must be positive and finite, got t = {0}")]
    NonPositiveTime(f64),
    #[error("Y must be finite and >= 0, got Y = {0}")]
    InvalidCoordinate(f64),
}

/// Similarity variable `eta = Y / (2 sqrt(t))`.
pub fn similarity_eta(y: f64, t: f64) -> Result<f64, DomainError> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(DomainError::NonPositiveTime(t));
    }
    if !(y >= 0.0 && y.is_finite()) {
        return Err(DomainError::InvalidCoordinate(y));
    }
    Ok(y / (2.0 * libm::sqrt(t)))
}

/// Physical (SI) inputs of the dimensional problem.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
#[cfg_attr(feature = "serde", serde(deny_unknown_fields))]
pub struct DimensionalParams {
    /// Kinematic viscosity, m^2/s.
    pub nu: f64,
    /// Gravitational acceleration, m/s^2.
    pub g: f64,
    /// Thermal expansion coefficient, 1/K.
    pub beta: f64,
    /// Concentration expansion coefficient.
    pub beta_star: f64,
    /// Density, kg/m^3.
    pub rho: f64,
    /// Specific heat, J/(kg K).
    pub cp: f64,
    /// Thermal conductivity, W/(m K).
    #[cfg_attr(feature = "serde", serde(rename = "k"))]
    pub conductivity: f64,
    /// Mass diffusivity, m^2/s.
    #[cfg_attr(feature = "serde", serde(rename = "D"))]
    pub diffusivity: f64,
    /// Reaction rate, 1/s.
    #[cfg_attr(feature = "serde", serde(rename = "K_l"))]
    pub reaction_rate: f64,
    /// Plate velocity scale.
    pub u0: f64,
    /// Exponential rate of the wall temperature, 1/s.
    #[cfg_attr(feature = "serde", serde(rename = "a_prime"))]
    pub temp_rate: f64,
    #[cfg_attr(feature = "serde", serde(rename = "T_w"))]
    pub t_wall: f64,
    #[cfg_attr(feature = "serde", serde(rename = "T_inf"))]
    pub t_inf: f64,
    #[cfg_attr(feature = "serde", serde(rename = "C_w"))]
    pub c_wall: f64,
    #[cfg_attr(feature = "serde", serde(rename = "C_inf"))]
    pub c_inf: f64,
    /// Radiation absorption coefficient.
    #[cfg_attr(feature = "serde", serde(rename = "a_star"))]
    pub absorption: f64,
    /// Stefan-Boltzmann constant.
    pub sigma: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum DimensionalError {
    #[error("{0} must be finite")]
    NonFinite(&'static str),
    #[error("{0} must be > 0")]
    NonPositive(&'static str),
    #[error("T_w equals T_inf: the temperature scale is degenerate")]
    DegenerateTemperature,
    #[error("C_w equals C_inf: the concentration scale is degenerate")]
    DegenerateConcentration,
}

/// Maps between dimensional and dimensionless fields.
///
/// `y = Y * length`, `t' = t * time`, `u = U * velocity`,
/// `T = t_inf + theta * delta_t`, `C' = c_inf + C * delta_c`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Scales {
    pub length: f64,
    pub time: f64,
    pub velocity: f64,
    pub t_inf: f64,
    pub delta_t: f64,
    pub c_inf: f64,
    pub delta_c: f64,
}

impl Scales {
    pub fn to_dimensional_y(&self, y: f64) -> f64 {
        y * self.length
    }
    pub fn to_dimensionless_y(&self, y: f64) -> f64 {
        y / self.length
    }
    pub fn to_dimensional_t(&self, t: f64) -> f64 {
        t * self.time
    }
    pub fn to_dimensionless_t(&self, t: f64) -> f64 {
        t / self.time
    }
    pub fn to_dimensional_u(&self, u: f64) -> f64 {
        u * self.velocity
    }
    pub fn to_dimensionless_u(&self, u: f64) -> f64 {
        u / self.velocity
    }
    pub fn to_dimensional_temperature(&self, theta: f64) -> f64 {
        self.t_inf + theta * self.delta_t
    }
    pub fn to_dimensionless_temperature(&self, temp: f64) -> f64 {
        (temp - self.t_inf) / self.delta_t
    }
    pub fn to_dimensional_concentration(&self, c: f64) -> f64 {
        self.c_inf + c * self.delta_c
    }
    pub fn to_dimensionless_concentration(&self, conc: f64) -> f64 {
        (conc - self.c_inf) / self.delta_c
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(Serialize, Deserialize))]
pub struct Nondimensionalized {
    pub params: FlowParams,
    pub scales: Scales,
}

/// Dimensionless groups of a physical configuration.
pub fn nondimensionalize(d: &DimensionalParams) -> Result<Nondimensionalized, DimensionalError> {
    let all = [
        ("nu", d.nu),
        ("g", d.g),
        ("beta", d.beta),
        ("beta_star", d.beta_star),
        ("rho", d.rho),
        ("cp", d.cp),
        ("k", d.conductivity),
        ("D", d.diffusivity),
        ("K_l", d.reaction_rate),
        ("u0", d.u0),
        ("a_prime", d.temp_rate),
        ("T_w", d.t_wall),
        ("T_inf", d.t_inf),
        ("C_w", d.c_wall),
        ("C_inf", d.c_inf),
        ("a_star", d.absorption),
        ("sigma", d.sigma),
    ];
    if let Some((name, _)) = all.iter().find(|(_, v)| !v.is_finite()) {
        return Err(DimensionalError::NonFinite(name));
    }
    let positive = [
        ("nu", d.nu),
        ("rho", d.rho),
        ("cp", d.cp),
        ("k", d.conductivity),
        ("D", d.diffusivity),
        ("u0", d.u0),
    ];
    if let Some((name, _)) = positive.iter().find(|(_, v)| *v <= 0.0) {
        return Err(DimensionalError::NonPositive(name));
    }
    let delta_t = d.t_wall - d.t_inf;
    if delta_t == 0.0 {
        return Err(DimensionalError::DegenerateTemperature);
    }
    let delta_c = d.c_wall - d.c_inf;
    if delta_c == 0.0 {
        return Err(DimensionalError::DegenerateConcentration);
    }

    let nu = d.nu;
    // (u0/nu^2)^(1/3) multiplies y and u; (u0^2/nu)^(1/3) multiplies t'.
    let inv_length = libm::cbrt(d.u0 / (nu * nu));
    let inv_time = libm::cbrt(d.u0 * d.u0 / nu);
    let time = 1.0 / inv_time;
    let buoyancy_scale = libm::cbrt(nu * d.u0);
    let mu = d.rho * nu;

    let params = FlowParams {
        gr: d.g * d.beta * delta_t / buoyancy_scale,
        gc: d.g * d.beta_star * delta_c / buoyancy_scale,
        pr: mu * d.cp / d.conductivity,
        sc: nu / d.diffusivity,
        radiation: 16.0 * d.absorption * d.sigma * d.t_inf * d.t_inf * d.t_inf / d.conductivity
            * libm::pow(nu * nu / d.u0, 2.0 / 3.0),
        reaction: d.reaction_rate * time,
        temp_rate: d.temp_rate * time,
    };
    let scales = Scales {
        length: 1.0 / inv_length,
        time,
        velocity: 1.0 / inv_length,
        t_inf: d.t_inf,
        delta_t,
        c_inf: d.c_inf,
        delta_c,
    };
    Ok(Nondimensionalized { params, scales })
}

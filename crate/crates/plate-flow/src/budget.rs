//! Wall-clock cap on oracle runs.

use std::time::{Duration, Instant};

use plate_flow_core::oracle::{Budget, OracleError, WorkBudget};
use thiserror::Error;

pub const BUDGET_ENV: &str = "PLATE_FLOW_BUDGET_SECS";

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{BUDGET_ENV} must be a positive number of seconds, got {0:?}")]
pub struct BadBudget(pub String);

/// Seconds from `PLATE_FLOW_BUDGET_SECS`, if set.
pub fn budget_from_env() -> Result<Option<Duration>, BadBudget> {
    match std::env::var(BUDGET_ENV) {
        Ok(s) => parse_budget(&s).map(Some),
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(std::env::VarError::NotUnicode(s)) => Err(BadBudget(s.to_string_lossy().into_owned())),
    }
}

pub fn parse_budget(s: &str) -> Result<Duration, BadBudget> {
    match s.trim().parse::<f64>() {
        Ok(v) if v.is_finite() && v > 0.0 => Ok(Duration::from_secs_f64(v)),
        _ => Err(BadBudget(s.to_string())),
    }
}

/// Work cap plus an optional shared deadline.
#[derive(Debug, Clone, Copy)]
pub struct Deadline {
    work: WorkBudget,
    until: Option<Instant>,
}

impl Deadline {
    pub fn new(until: Option<Instant>) -> Self {
        Self {
            work: WorkBudget::default(),
            until,
        }
    }
}

impl Budget for Deadline {
    fn charge(&mut self, work: u64) -> Result<(), OracleError> {
        self.work.charge(work)?;
        match self.until {
            Some(t) if Instant::now() > t => Err(OracleError::BudgetExceeded {
                detail: "wall-clock limit reached",
            }),
            _ => Ok(()),
        }
    }
}

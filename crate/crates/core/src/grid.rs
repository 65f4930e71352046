//! Evaluation grids for δ sweeps and CDF tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `count` points from `start` to `stop` inclusive, linear or log-spaced.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
    pub log: bool,
}

impl GridSpec {
    pub fn linear(start: f64, stop: f64, count: usize) -> Self {
        GridSpec {
            start,
            stop,
            count,
            log: false,
        }
    }

    pub fn log(start: f64, stop: f64, count: usize) -> Self {
        GridSpec {
            start,
            stop,
            count,
            log: true,
        }
    }

    /// 100 log-spaced points on `[0.01, 1]`.
    pub fn default_delta() -> Self {
        GridSpec::log(0.01, 1.0, 100)
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        if self.count == 0 || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(Error::Config(format!("bad grid {self}")));
        }
        if self.log && !(self.start > 0.0 && self.stop > 0.0) {
            return Err(Error::Config(format!(
                "log grid needs positive bounds, got {self}"
            )));
        }
        if self.count == 1 {
            return Ok(vec![self.start]);
        }
        let last = (self.count - 1) as f64;
        let pts = (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                if i + 1 == self.count {
                    self.stop
                } else if self.log {
                    (self.start.ln() + t * (self.stop.ln() - self.start.ln())).exp()
                } else {
                    self.start + t * (self.stop - self.start)
                }
            })
            .collect();
        Ok(pts)
    }
}

impl std::fmt::Display for GridSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.count)?;
        if self.log {
            write!(f, ":log")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for GridSpec {
    type Err = Error;

    /// `start:stop:count`, optionally suffixed with `:log`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || {
            Error::Config(format!(
                "grid must look like start:stop:count[:log], got {s:?}"
            ))
        };
        let parts: Vec<&str> = s.split(':').collect();
        let log = match parts.len() {
            3 => false,
            4 if parts[3] == "log" => true,
            _ => return Err(bad()),
        };
        let start: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let stop: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let count: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let spec = GridSpec {
            start,
            stop,
            count,
            log,
        };
        spec.points()?;
        Ok(spec)
    }
}

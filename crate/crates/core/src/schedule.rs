//! Linear field ramps `g(s) = g₀ + s (g₁ − g₀)` with `s = t/T`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FieldSchedule {
    pub g_start: f64,
    pub g_end: f64,
    /// Sweep duration `T` in units of `ħ/J`.
    pub duration: f64,
}

impl FieldSchedule {
    pub fn new(g_start: f64, g_end: f64, duration: f64) -> Result<Self> {
        if !(duration > 0.0 && duration.is_finite()) {
            return Err(Error::invalid(format!(
                "sweep duration must be positive, got {duration}"
            )));
        }
        if !g_start.is_finite() || !g_end.is_finite() {
            return Err(Error::invalid("field endpoints must be finite"));
        }
        Ok(FieldSchedule {
            g_start,
            g_end,
            duration,
        })
    }

    /// Builds a ramp from its change rate `ġ = (g₁ − g₀)/T`.
    pub fn from_rate(g_start: f64, g_end: f64, rate: f64) -> Result<Self> {
        let span = g_end - g_start;
        if rate == 0.0 || span == 0.0 || span.signum() != rate.signum() {
            return Err(Error::invalid(format!(
                "rate {rate} cannot carry g from {g_start} to {g_end}"
            )));
        }
        Self::new(g_start, g_end, span / rate)
    }

    /// A ramp that leaves the field at `g` for a time `duration`.
    pub fn constant(g: f64, duration: f64) -> Result<Self> {
        Self::new(g, g, duration)
    }

    /// Change rate `ġ` (per unit time).
    pub fn rate(&self) -> f64 {
        (self.g_end - self.g_start) / self.duration
    }

    /// `dg/ds`, constant for a linear ramp.
    pub fn dg_ds(&self) -> f64 {
        self.g_end - self.g_start
    }

    pub fn field_at(&self, s: f64) -> f64 {
        if s == 1.0 {
            return self.g_end;
        }
        self.g_start + s * (self.g_end - self.g_start)
    }

    pub fn field_at_time(&self, t: f64) -> f64 {
        self.field_at(t / self.duration)
    }

    /// The same ramp run backwards.
    pub fn reversed(&self) -> Self {
        FieldSchedule {
            g_start: self.g_end,
            g_end: self.g_start,
            duration: self.duration,
        }
    }

    /// The prefix of this ramp (same rate) that stops at `g`.
    ///
    /// `g` must lie between the endpoints.
    pub fn truncated_at(&self, g: f64) -> Result<Self> {
        let span = self.g_end - self.g_start;
        let frac = if span == 0.0 {
            return Err(Error::invalid("cannot truncate a zero ramp"));
        } else {
            (g - self.g_start) / span
        };
        if !(frac > 0.0 && frac <= 1.0 + 1e-12) {
            return Err(Error::invalid(format!(
                "field {g} is not reached by the ramp {} -> {}",
                self.g_start, self.g_end
            )));
        }
        Ok(FieldSchedule {
            g_start: self.g_start,
            g_end: g,
            duration: self.duration * frac.min(1.0),
        })
    }

    pub fn is_stationary(&self) -> bool {
        self.g_start == self.g_end
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoints_are_exact() {
        let s = FieldSchedule::new(5.0, 0.3, 17.0).unwrap();
        assert_eq!(s.field_at(0.0), 5.0);
        assert_eq!(s.field_at(1.0), 0.3);
        assert_eq!(s.field_at_time(17.0), 0.3);
    }

    #[test]
    fn rate_round_trips() {
        let s = FieldSchedule::from_rate(5.0, 1.0, -0.01).unwrap();
        assert!((s.duration - 400.0).abs() < 1e-9);
        assert!((s.rate() + 0.01).abs() < 1e-15);
        assert!(FieldSchedule::from_rate(5.0, 1.0, 0.01).is_err());
        assert!(FieldSchedule::new(1.0, 2.0, 0.0).is_err());
    }

    #[test]
    fn truncation_keeps_rate() {
        let s = FieldSchedule::from_rate(5.0, 0.0, -0.01).unwrap();
        let t = s.truncated_at(1.2).unwrap();
        assert!((t.rate() - s.rate()).abs() < 1e-15);
        assert_eq!(t.g_end, 1.2);
        assert!(s.truncated_at(6.0).is_err());
    }
}

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Default cap on the charge-basis dimension, `21³` (`n_trunc = 10`).
pub const DEFAULT_DIM_CAP: usize = 21 * 21 * 21;

/// Device parameters.
///
/// Junction sizes are relative to the reference junction whose charging
/// energy is `ec_ghz`. `r5 = 0` describes a device with a fixed (single)
/// coupling junction of size `r4`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircuitSpec {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    pub r5: f64,
    /// `E_J/h` in GHz.
    pub ej_ghz: f64,
    /// `E_C/h` in GHz for a junction of size 1.
    pub ec_ghz: f64,
    /// Loop-area ratio `A_ε/A_β`; the SQUID flux follows `f_β = f_ε/area_ratio + beta_offset`.
    pub area_ratio: f64,
    #[serde(default)]
    pub beta_offset: f64,
    /// Charges per node range over `-n_trunc..=n_trunc`.
    pub n_trunc: usize,
    #[serde(default = "default_dim_cap")]
    pub dim_cap: usize,
}

fn default_dim_cap() -> usize {
    DEFAULT_DIM_CAP
}

impl Default for CircuitSpec {
    fn default() -> Self {
        Self::tunable()
    }
}

impl CircuitSpec {
    /// Tunable-coupling device, labeling with the larger SQUID junction as
    /// `r5`: `r = (1, 0.6, 1, 1, 2.6)`, `E_J/h = 300 GHz`, `E_J/E_C = 70`,
    /// `A_ε/A_β = 8.3`.
    pub fn tunable() -> Self {
        CircuitSpec {
            r1: 1.0,
            r2: 0.6,
            r3: 1.0,
            r4: 1.0,
            r5: 2.6,
            ej_ghz: 300.0,
            ec_ghz: 300.0 / 70.0,
            area_ratio: 8.3,
            beta_offset: 0.0,
            n_trunc: 10,
            dim_cap: DEFAULT_DIM_CAP,
        }
    }

    /// Tunable-coupling device with the larger SQUID junction labeled `r4`:
    /// `r = (1, 0.62, 1, 2.6, 1)`, `E_J/h = 350 GHz`, `E_J/E_C = 70`.
    pub fn tunable_swapped() -> Self {
        CircuitSpec {
            r2: 0.62,
            r4: 2.6,
            r5: 1.0,
            ej_ghz: 350.0,
            ec_ghz: 350.0 / 70.0,
            ..Self::tunable()
        }
    }

    /// Single coupling junction of size `beta` (no SQUID loop).
    pub fn fixed(beta: f64) -> Self {
        CircuitSpec {
            r4: beta,
            r5: 0.0,
            area_ratio: f64::INFINITY,
            ..Self::tunable()
        }
    }

    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "tunable" => Ok(Self::tunable()),
            "tunable-swapped" => Ok(Self::tunable_swapped()),
            "fixed-3.5" => Ok(Self::fixed(3.5)),
            "fixed-1.8" => Ok(Self::fixed(1.8)),
            other => Err(Error::UnknownPreset(other.to_string())),
        }
    }

    pub const PRESETS: [&'static str; 4] = ["tunable", "tunable-swapped", "fixed-3.5", "fixed-1.8"];

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("r1", self.r1),
            ("r2", self.r2),
            ("r3", self.r3),
            ("r4", self.r4),
            ("ej_ghz", self.ej_ghz),
            ("ec_ghz", self.ec_ghz),
            ("area_ratio", self.area_ratio),
        ];
        for (name, v) in positive {
            if !(v > 0.0) {
                return Err(Error::invalid(name, format!("must be > 0, got {v}")));
            }
        }
        if !(self.r5 >= 0.0 && self.r5.is_finite()) {
            return Err(Error::invalid("r5", format!("must be >= 0, got {}", self.r5)));
        }
        for (name, v) in [("r1", self.r1), ("r2", self.r2), ("r3", self.r3), ("r4", self.r4)] {
            if !v.is_finite() {
                return Err(Error::invalid(name, "must be finite"));
            }
        }
        if !self.beta_offset.is_finite() {
            return Err(Error::invalid("beta_offset", "must be finite"));
        }
        if self.n_trunc < 1 {
            return Err(Error::invalid("n_trunc", "must be >= 1"));
        }
        Ok(())
    }

    /// `E_J/E_C`
    pub fn ej_over_ec(&self) -> f64 {
        self.ej_ghz / self.ec_ghz
    }

    /// SQUID frustration slaved to the main-loop frustration.
    pub fn slaved_beta(&self, f_eps: f64) -> f64 {
        f_eps / self.area_ratio + self.beta_offset
    }

    pub fn flux_at(&self, f_eps: f64) -> FluxPoint {
        FluxPoint::new(f_eps, self.slaved_beta(f_eps))
    }

    pub fn with_n_trunc(mut self, n_trunc: usize) -> Self {
        self.n_trunc = n_trunc;
        self
    }
}

/// External frustrations `Φ/Φ₀` of the main loop and the SQUID loop.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FluxPoint {
    pub f_eps: f64,
    pub f_beta: f64,
}

impl FluxPoint {
    pub fn new(f_eps: f64, f_beta: f64) -> Self {
        FluxPoint { f_eps, f_beta }
    }

    pub fn validate(&self) -> Result<()> {
        if self.f_eps.is_finite() && self.f_beta.is_finite() {
            Ok(())
        } else {
            Err(Error::NonFiniteFlux {
                f_eps: self.f_eps,
                f_beta: self.f_beta,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_validate() {
        for name in CircuitSpec::PRESETS {
            CircuitSpec::preset(name).unwrap().validate().unwrap();
        }
        assert!(matches!(CircuitSpec::preset("nope"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn rejects_bad_fields() {
        let mut s = CircuitSpec::tunable();
        s.r2 = 0.0;
        assert!(s.validate().is_err());
        let mut s = CircuitSpec::tunable();
        s.n_trunc = 0;
        assert!(s.validate().is_err());
        let mut s = CircuitSpec::tunable();
        s.ec_ghz = f64::NAN;
        assert!(s.validate().is_err());
        let mut s = CircuitSpec::tunable();
        s.r5 = -1.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn infinite_area_ratio_pins_beta() {
        let s = CircuitSpec::fixed(3.5);
        assert_eq!(s.slaved_beta(7.3), 0.0);
    }
}

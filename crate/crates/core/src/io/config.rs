//! Run configuration read from TOML.
//!
//! Every section is optional. `[device]` starts from a named preset and
//! overrides individual fields.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::circuit::{symmetry_point_for_beta, CircuitSpec, FluxPoint, SolverOptions};
use crate::linalg::LanczosOptions;
use crate::scattering::linear_grid;
use crate::spinboson::{EnvironmentSpec, RenormalizationMode};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub device: DeviceConfig,
    #[serde(default)]
    pub environment: EnvironmentConfig,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub point: PointConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
    #[serde(default)]
    pub symmetry: SymmetryConfig,
    #[serde(default)]
    pub coupling: CouplingConfig,
    #[serde(default)]
    pub drive: DriveConfig,
    #[serde(default)]
    pub fit: FitConfig,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            seed: 0,
            output_dir: default_output_dir(),
            device: DeviceConfig::default(),
            environment: EnvironmentConfig::default(),
            solver: SolverConfig::default(),
            point: PointConfig::default(),
            sweep: SweepConfig::default(),
            symmetry: SymmetryConfig::default(),
            coupling: CouplingConfig::default(),
            drive: DriveConfig::default(),
            fit: FitConfig::default(),
        }
    }
}

/// Preset name plus optional per-field overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeviceConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r3: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r4: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r5: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ej_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ec_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub area_ratio: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta_offset: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_trunc: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim_cap: Option<usize>,
}

impl DeviceConfig {
    pub fn resolve(&self) -> Result<CircuitSpec> {
        let mut spec = CircuitSpec::preset(self.preset.as_deref().unwrap_or("tunable"))?;
        macro_rules! apply {
            ($($f:ident),*) => { $( if let Some(v) = self.$f { spec.$f = v; } )* };
        }
        apply!(
            r1,
            r2,
            r3,
            r4,
            r5,
            ej_ghz,
            ec_ghz,
            area_ratio,
            beta_offset,
            n_trunc,
            dim_cap
        );
        spec.validate().map_err(|e| with_section("device", e))?;
        Ok(spec)
    }
}

fn with_section(section: &str, e: Error) -> Error {
    match e {
        Error::InvalidParameter { field, reason } => Error::Config(format!("{section}.{field}: {reason}")),
        other => other,
    }
}

fn config_err(path: &str, reason: impl std::fmt::Display) -> Error {
    Error::Config(format!("{path}: {reason}"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentConfig {
    #[serde(default = "EnvironmentConfig::default_z0")]
    pub z0_ohm: f64,
    #[serde(default = "EnvironmentConfig::default_cutoff")]
    pub cutoff_ghz: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_const: Option<f64>,
    #[serde(default)]
    pub renormalization: RenormalizationMode,
}

impl EnvironmentConfig {
    fn default_z0() -> f64 {
        EnvironmentSpec::default().z0_ohm
    }

    fn default_cutoff() -> f64 {
        EnvironmentSpec::default().cutoff_ghz
    }

    pub fn spec(&self) -> Result<EnvironmentSpec> {
        let env = EnvironmentSpec {
            z0_ohm: self.z0_ohm,
            cutoff_ghz: self.cutoff_ghz,
            p_const: self.p_const.unwrap_or(EnvironmentSpec::default().p_const),
        };
        env.validate().map_err(|e| with_section("environment", e))?;
        Ok(env)
    }
}

impl Default for EnvironmentConfig {
    fn default() -> Self {
        EnvironmentConfig {
            z0_ohm: Self::default_z0(),
            cutoff_ghz: Self::default_cutoff(),
            p_const: None,
            renormalization: RenormalizationMode::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverConfig {
    #[serde(default = "SolverConfig::default_levels")]
    pub levels: usize,
    #[serde(default = "SolverConfig::default_tol")]
    pub tol: f64,
    #[serde(default = "SolverConfig::default_max_iter")]
    pub max_iter: usize,
}

impl SolverConfig {
    fn default_levels() -> usize {
        3
    }

    fn default_tol() -> f64 {
        LanczosOptions::default().tol
    }

    fn default_max_iter() -> usize {
        LanczosOptions::default().max_iter
    }

    pub fn options(&self) -> Result<SolverOptions> {
        if self.levels < 2 {
            return Err(config_err("solver.levels", "must be >= 2"));
        }
        if !(self.tol > 0.0) {
            return Err(config_err("solver.tol", "must be > 0"));
        }
        if self.max_iter < self.levels {
            return Err(config_err("solver.max_iter", "must be >= solver.levels"));
        }
        Ok(SolverOptions {
            levels: self.levels,
            lanczos: LanczosOptions {
                tol: self.tol,
                max_iter: self.max_iter,
                ..LanczosOptions::default()
            },
        })
    }
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            levels: Self::default_levels(),
            tol: Self::default_tol(),
            max_iter: Self::default_max_iter(),
        }
    }
}

/// Flux point for single solves. With only `f_eps` the SQUID flux is slaved;
/// with only `f_beta` (or nothing, meaning `f_beta = 0`) the main loop sits at
/// the symmetry point.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PointConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_eps: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f_beta: Option<f64>,
}

impl PointConfig {
    pub fn resolve(&self, spec: &CircuitSpec) -> Result<FluxPoint> {
        let p = match (self.f_eps, self.f_beta) {
            (Some(e), Some(b)) => FluxPoint::new(e, b),
            (Some(e), None) => spec.flux_at(e),
            (None, b) => symmetry_point_for_beta(spec, b.unwrap_or(0.0)),
        };
        p.validate().map_err(|e| config_err("point", e))?;
        Ok(p)
    }
}

/// Main-loop flux grid; `f_β` follows through the slaving ratio.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default = "SweepConfig::default_start")]
    pub start: f64,
    #[serde(default = "SweepConfig::default_stop")]
    pub stop: f64,
    #[serde(default = "SweepConfig::default_count")]
    pub count: usize,
    /// Overrides `device.area_ratio` for the sweep.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slaving_ratio: Option<f64>,
}

impl SweepConfig {
    fn default_start() -> f64 {
        0.45
    }

    fn default_stop() -> f64 {
        0.55
    }

    fn default_count() -> usize {
        21
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        if self.count < 1 {
            return Err(config_err("sweep.count", "must be >= 1"));
        }
        if !self.start.is_finite() || !self.stop.is_finite() {
            return Err(config_err("sweep", "start and stop must be finite"));
        }
        Ok(linear_grid(self.start, self.stop, self.count))
    }

    pub fn device(&self, spec: &CircuitSpec) -> Result<CircuitSpec> {
        let mut spec = spec.clone();
        if let Some(r) = self.slaving_ratio {
            if !(r > 0.0) {
                return Err(config_err("sweep.slaving_ratio", "must be > 0"));
            }
            spec.area_ratio = r;
        }
        Ok(spec)
    }
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            start: Self::default_start(),
            stop: Self::default_stop(),
            count: Self::default_count(),
            slaving_ratio: None,
        }
    }
}

/// Main-loop flux window searched for symmetry points. `hi` defaults to
/// `lo` plus one SQUID period.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymmetryConfig {
    #[serde(default)]
    pub lo: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hi: Option<f64>,
}

impl SymmetryConfig {
    pub fn window(&self, spec: &CircuitSpec) -> Result<(f64, f64)> {
        let hi = match self.hi {
            Some(h) => h,
            None if spec.area_ratio.is_finite() => self.lo + spec.area_ratio,
            None => self.lo + 1.0,
        };
        if !(self.lo.is_finite() && hi.is_finite() && hi > self.lo) {
            return Err(config_err("symmetry", format!("need lo < hi, got [{}, {hi}]", self.lo)));
        }
        Ok((self.lo, hi))
    }
}

/// `f_β` grid for the coupling table; each point sits at its symmetry point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CouplingConfig {
    #[serde(default)]
    pub f_beta_start: f64,
    #[serde(default = "CouplingConfig::default_stop")]
    pub f_beta_stop: f64,
    #[serde(default = "CouplingConfig::default_count")]
    pub count: usize,
}

impl CouplingConfig {
    fn default_stop() -> f64 {
        0.5
    }

    fn default_count() -> usize {
        11
    }

    pub fn grid(&self) -> Result<Vec<f64>> {
        if self.count < 1 {
            return Err(config_err("coupling.count", "must be >= 1"));
        }
        if !self.f_beta_start.is_finite() || !self.f_beta_stop.is_finite() {
            return Err(config_err("coupling", "f_beta_start and f_beta_stop must be finite"));
        }
        Ok(linear_grid(self.f_beta_start, self.f_beta_stop, self.count))
    }
}

impl Default for CouplingConfig {
    fn default() -> Self {
        CouplingConfig {
            f_beta_start: 0.0,
            f_beta_stop: Self::default_stop(),
            count: Self::default_count(),
        }
    }
}

/// Explicitly specified qubit for synthetic spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QubitConfig {
    pub delta_ghz: f64,
    pub gamma1_ghz: f64,
    #[serde(default)]
    pub gamma_phi_ghz: f64,
    /// Thermal occupation; taken from `drive.temperature_mk` if absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_th: Option<f64>,
}

/// Probe and noise settings for synthetic spectra.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriveConfig {
    #[serde(default)]
    pub rabi_ghz: f64,
    /// Fixed frequency grid; without it each trace spans `Δ ± span_gamma2·Γ₂`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq_start: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub freq_stop: Option<f64>,
    #[serde(default = "DriveConfig::default_points")]
    pub points: usize,
    #[serde(default = "DriveConfig::default_span")]
    pub span_gamma2: f64,
    #[serde(default)]
    pub noise_sigma: f64,
    #[serde(default)]
    pub temperature_mk: f64,
    #[serde(default)]
    pub gamma_phi_ghz: f64,
    /// Place the resonance at the renormalized gap when it exists.
    #[serde(default = "DriveConfig::default_renormalized")]
    pub renormalized_gap: bool,
    /// When non-empty, spectra are generated for these qubits instead of
    /// the device's coupling table.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub qubits: Vec<QubitConfig>,
}

impl DriveConfig {
    fn default_points() -> usize {
        401
    }

    fn default_span() -> f64 {
        8.0
    }

    fn default_renormalized() -> bool {
        true
    }

    pub fn validate(&self) -> Result<()> {
        if self.points < 1 {
            return Err(config_err("drive.points", "must be >= 1"));
        }
        for (key, v) in [
            ("drive.rabi_ghz", self.rabi_ghz),
            ("drive.noise_sigma", self.noise_sigma),
            ("drive.temperature_mk", self.temperature_mk),
            ("drive.gamma_phi_ghz", self.gamma_phi_ghz),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(config_err(key, format!("must be >= 0, got {v}")));
            }
        }
        if !(self.span_gamma2 > 0.0) {
            return Err(config_err("drive.span_gamma2", "must be > 0"));
        }
        match (self.freq_start, self.freq_stop) {
            (Some(a), Some(b)) if !(a < b) => return Err(config_err("drive", "freq_start must be below freq_stop")),
            (Some(_), None) | (None, Some(_)) => {
                return Err(config_err("drive", "freq_start and freq_stop go together"))
            }
            _ => {}
        }
        for (i, q) in self.qubits.iter().enumerate() {
            if !(q.delta_ghz > 0.0) || !(q.gamma1_ghz >= 0.0) || !(q.gamma_phi_ghz >= 0.0) {
                return Err(config_err(
                    &format!("drive.qubits[{i}]"),
                    "need delta > 0 and rates >= 0",
                ));
            }
            if q.n_th.is_some_and(|n| !(n >= 0.0)) {
                return Err(config_err(&format!("drive.qubits[{i}].n_th"), "must be >= 0"));
            }
        }
        Ok(())
    }

    /// Frequency grid for a resonance at `delta` with width `gamma2`.
    pub fn grid_for(&self, delta_ghz: f64, gamma2_ghz: f64) -> Vec<f64> {
        let (lo, hi) = match (self.freq_start, self.freq_stop) {
            (Some(a), Some(b)) => (a, b),
            _ => {
                let half = self.span_gamma2 * gamma2_ghz.max(1e-6 * delta_ghz);
                ((delta_ghz - half).max(1e-3 * delta_ghz), delta_ghz + half)
            }
        };
        linear_grid(lo, hi, self.points)
    }
}

impl Default for DriveConfig {
    fn default() -> Self {
        DriveConfig {
            rabi_ghz: 0.0,
            freq_start: None,
            freq_stop: None,
            points: Self::default_points(),
            span_gamma2: Self::default_span(),
            noise_sigma: 0.0,
            temperature_mk: 0.0,
            gamma_phi_ghz: 0.0,
            renormalized_gap: Self::default_renormalized(),
            qubits: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitConfig {
    /// `[lo, hi]` in GHz.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<[f64; 2]>,
    #[serde(default = "FitConfig::default_min_depth")]
    pub min_depth: f64,
    /// Relative slack when checking that a fitted `Γ₁` interval contains
    /// the generating rate.
    #[serde(default = "FitConfig::default_closure_tol")]
    pub closure_tol: f64,
    /// Standard errors of `r₀` and `Γ₂` by which the closure interval is
    /// widened.
    #[serde(default = "FitConfig::default_closure_sigma")]
    pub closure_sigma: f64,
}

impl FitConfig {
    fn default_min_depth() -> f64 {
        1e-6
    }

    fn default_closure_tol() -> f64 {
        1e-3
    }

    fn default_closure_sigma() -> f64 {
        3.0
    }

    pub fn mask(&self) -> Result<Option<(f64, f64)>> {
        match self.mask {
            Some([lo, hi]) if !(lo < hi) => Err(config_err("fit.mask", format!("need lo < hi, got [{lo}, {hi}]"))),
            Some([lo, hi]) => Ok(Some((lo, hi))),
            None => Ok(None),
        }
    }
}

impl Default for FitConfig {
    fn default() -> Self {
        FitConfig {
            mask: None,
            min_depth: Self::default_min_depth(),
            closure_tol: Self::default_closure_tol(),
            closure_sigma: Self::default_closure_sigma(),
        }
    }
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml_str(&text).map_err(|e| match e {
            Error::Config(msg) => Error::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Checks every section, reporting the offending key path.
    pub fn validate(&self) -> Result<()> {
        let spec = self.device.resolve()?;
        self.environment.spec()?;
        self.solver.options()?;
        self.point.resolve(&spec)?;
        self.sweep.grid()?;
        self.sweep.device(&spec)?;
        self.symmetry.window(&spec)?;
        self.coupling.grid()?;
        self.drive.validate()?;
        self.fit.mask()?;
        for (key, v) in [
            ("fit.closure_tol", self.fit.closure_tol),
            ("fit.closure_sigma", self.fit.closure_sigma),
        ] {
            if !(v >= 0.0) {
                return Err(config_err(key, format!("must be non-negative, got {v}")));
            }
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config is always representable as TOML")
    }

    /// SHA-256 of the canonical TOML form, lowercase hex. The output
    /// directory does not affect results and is left out.
    pub fn hash(&self) -> String {
        let canonical = RunConfig {
            output_dir: default_output_dir(),
            ..self.clone()
        };
        Sha256::digest(canonical.to_toml().as_bytes())
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

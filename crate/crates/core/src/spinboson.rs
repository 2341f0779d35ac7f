//! Ohmic spin-boson mapping of the circuit quantities: emission rate,
//! coupling constant `α`, dynamical regime and adiabatic gap
//! renormalization.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::circuit::{solve, symmetry_point_for_beta, CircuitSpec, FluxPoint, SolverOptions};
use crate::constants::{exponential_cutoff_prefactor, RESISTANCE_QUANTUM_OHM};
use crate::{Error, Result};

const SELF_CONSISTENT_MAX_ITER: usize = 100;
const SELF_CONSISTENT_TOL: f64 = 1e-10;

/// Transmission-line environment seen by the qubit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnvironmentSpec {
    /// Characteristic impedance, Ω.
    #[serde(default = "default_z0")]
    pub z0_ohm: f64,
    /// Bath cutoff `ω_C/2π`, GHz.
    #[serde(default = "default_cutoff")]
    pub cutoff_ghz: f64,
    /// Prefactor `p` in `Δ = Δ₀(pΔ₀/ω_C)^{α/(1-α)}`.
    #[serde(default = "exponential_cutoff_prefactor")]
    pub p_const: f64,
}

fn default_z0() -> f64 {
    50.0
}

fn default_cutoff() -> f64 {
    50.0
}

impl Default for EnvironmentSpec {
    fn default() -> Self {
        EnvironmentSpec {
            z0_ohm: default_z0(),
            cutoff_ghz: default_cutoff(),
            p_const: exponential_cutoff_prefactor(),
        }
    }
}

impl EnvironmentSpec {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("z0_ohm", self.z0_ohm),
            ("cutoff_ghz", self.cutoff_ghz),
            ("p_const", self.p_const),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be > 0, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Underdamped,
    Overdamped,
    Localized,
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Underdamped => "underdamped",
            Regime::Overdamped => "overdamped",
            Regime::Localized => "localized",
        })
    }
}

/// Ties at 0.5 and 1 go to the stronger-coupling regime.
pub fn classify_regime(alpha_sb: f64) -> Regime {
    if alpha_sb >= 1.0 {
        Regime::Localized
    } else if alpha_sb >= 0.5 {
        Regime::Overdamped
    } else {
        Regime::Underdamped
    }
}

/// Normalized emission rate `Γ₁/Δ = (1/2π)(R_Q/Z₀)|φ_β|²`.
pub fn coupling_ratio(phi_beta_abs: f64, env: &EnvironmentSpec) -> Result<f64> {
    env.validate()?;
    if !(phi_beta_abs >= 0.0 && phi_beta_abs.is_finite()) {
        return Err(Error::invalid(
            "phi_beta_abs",
            format!("must be >= 0, got {phi_beta_abs}"),
        ));
    }
    Ok(RESISTANCE_QUANTUM_OHM / env.z0_ohm * phi_beta_abs * phi_beta_abs / (2.0 * PI))
}

/// `α = Γ₁/(πΔ)`
pub fn alpha_from_ratio(gamma1_over_delta: f64) -> f64 {
    gamma1_over_delta / PI
}

pub fn ratio_from_alpha(alpha_sb: f64) -> f64 {
    alpha_sb * PI
}

/// Ohmic spectral density `J(ω) = παω`, in the units of `omega_ghz`.
pub fn spectral_density(omega_ghz: f64, alpha_sb: f64) -> f64 {
    PI * alpha_sb * omega_ghz
}

/// Adiabatically renormalized gap `Δ = Δ₀(pΔ₀/ω_C)^{α/(1-α)}`.
pub fn renormalize_gap(delta0_ghz: f64, alpha_sb: f64, env: &EnvironmentSpec) -> Result<f64> {
    env.validate()?;
    if !(delta0_ghz > 0.0 && delta0_ghz.is_finite()) {
        return Err(Error::invalid("delta0_ghz", format!("must be > 0, got {delta0_ghz}")));
    }
    if !(alpha_sb >= 0.0) {
        return Err(Error::invalid("alpha_sb", format!("must be >= 0, got {alpha_sb}")));
    }
    if alpha_sb >= 1.0 {
        return Err(Error::Localized { alpha: alpha_sb });
    }
    if delta0_ghz >= env.cutoff_ghz {
        log::warn!(
            "bare gap {delta0_ghz} GHz is not below the cutoff {} GHz",
            env.cutoff_ghz
        );
    }
    Ok(delta0_ghz * (env.p_const * delta0_ghz / env.cutoff_ghz).powf(alpha_sb / (1.0 - alpha_sb)))
}

/// Renormalization with `α` re-evaluated from the renormalized gap at fixed
/// `Γ₁ = παΔ₀` until the gap stops moving.
pub fn renormalize_gap_self_consistent(delta0_ghz: f64, alpha_bare: f64, env: &EnvironmentSpec) -> Result<f64> {
    let gamma1 = ratio_from_alpha(alpha_bare) * delta0_ghz;
    let mut delta = renormalize_gap(delta0_ghz, alpha_bare, env)?;
    for _ in 0..SELF_CONSISTENT_MAX_ITER {
        let alpha = alpha_from_ratio(gamma1 / delta);
        let next = renormalize_gap(delta0_ghz, alpha, env)?;
        if (next - delta).abs() <= SELF_CONSISTENT_TOL * delta.abs() {
            return Ok(next);
        }
        delta = next;
    }
    Err(Error::RenormalizationNotConverged {
        iterations: SELF_CONSISTENT_MAX_ITER,
    })
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RenormalizationMode {
    #[default]
    SinglePass,
    SelfConsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingResult {
    pub gamma1_over_delta: f64,
    pub alpha_sb: f64,
    pub delta0_ghz: f64,
    /// `None` in the localized regime.
    pub delta_ren_ghz: Option<f64>,
    pub regime: Regime,
    /// Above `α = 0.5` the Born-Markov value of `α` only bounds the true
    /// coupling from below.
    pub is_lower_bound: bool,
}

impl CouplingResult {
    /// Emission rate at the renormalized frequency, `Γ₁ = παΔ`.
    pub fn gamma1_ghz(&self) -> Option<f64> {
        self.delta_ren_ghz.map(|d| ratio_from_alpha(self.alpha_sb) * d)
    }
}

pub fn coupling_result(
    phi_beta_abs: f64,
    delta0_ghz: f64,
    env: &EnvironmentSpec,
    mode: RenormalizationMode,
) -> Result<CouplingResult> {
    let gamma1_over_delta = coupling_ratio(phi_beta_abs, env)?;
    let alpha_sb = alpha_from_ratio(gamma1_over_delta);
    let regime = classify_regime(alpha_sb);
    let delta_ren_ghz = match regime {
        Regime::Localized => None,
        _ => Some(match mode {
            RenormalizationMode::SinglePass => renormalize_gap(delta0_ghz, alpha_sb, env)?,
            RenormalizationMode::SelfConsistent => renormalize_gap_self_consistent(delta0_ghz, alpha_sb, env)?,
        }),
    };
    Ok(CouplingResult {
        gamma1_over_delta,
        alpha_sb,
        delta0_ghz,
        delta_ren_ghz,
        regime,
        is_lower_bound: alpha_sb > 0.5,
    })
}

/// `dΔ₀/dΦ_β` (GHz per Φ₀) along the symmetry-point line: the main-loop flux
/// follows the symmetry point as `f_β` moves. Central difference with the
/// given step.
pub fn gap_flux_sensitivity(spec: &CircuitSpec, f_beta: f64, step: f64, opts: &SolverOptions) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::invalid("step", "must be > 0"));
    }
    let gap = |fb: f64| -> Result<f64> { Ok(solve(spec, symmetry_point_for_beta(spec, fb), opts)?.gap0_ghz) };
    Ok((gap(f_beta + step)? - gap(f_beta - step)?) / (2.0 * step))
}

/// `dω_qb/dΦ_ε` (GHz per Φ₀) at fixed `f_β`, central difference.
pub fn epsilon_flux_sensitivity(spec: &CircuitSpec, flux: FluxPoint, step: f64, opts: &SolverOptions) -> Result<f64> {
    if !(step > 0.0) {
        return Err(Error::invalid("step", "must be > 0"));
    }
    let gap = |fe: f64| -> Result<f64> { Ok(solve(spec, FluxPoint::new(fe, flux.f_beta), opts)?.gap0_ghz) };
    Ok((gap(flux.f_eps + step)? - gap(flux.f_eps - step)?) / (2.0 * step))
}

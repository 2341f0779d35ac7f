//! Physical constants (exact SI values) and derived conversion factors.

/// Planck constant, J·s.
pub const PLANCK: f64 = 6.626_070_15e-34;
/// Elementary charge, C.
pub const ELEMENTARY_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Superconducting resistance quantum `h/(2e)²` in ohms (≈ 6.45 kΩ).
pub const RESISTANCE_QUANTUM_OHM: f64 = PLANCK / (4.0 * ELEMENTARY_CHARGE * ELEMENTARY_CHARGE);

/// `h·(1 GHz)/k_B` expressed in millikelvin.
pub const MK_PER_GHZ: f64 = PLANCK * 1e9 / BOLTZMANN * 1e3;

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Renormalization prefactor `exp(1 + γ)` of the exponential-cutoff ohmic bath.
pub fn exponential_cutoff_prefactor() -> f64 {
    (1.0 + EULER_GAMMA).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resistance_quantum() {
        assert!((RESISTANCE_QUANTUM_OHM - 6453.2).abs() < 0.1);
    }

    #[test]
    fn prefactor_close_to_4_8() {
        assert!((exponential_cutoff_prefactor() - 4.841).abs() < 1e-3);
    }

    #[test]
    fn thermal_scale() {
        // 1 GHz ↔ 48 mK
        assert!((MK_PER_GHZ - 47.992_43).abs() < 1e-4);
    }
}

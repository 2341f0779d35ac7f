use crate::constants::MK_PER_GHZ;
use crate::{Error, Result};

/// Thermal occupation `1/(e^{hν/k_BT} − 1)`; zero at `T = 0`.
pub fn bose_einstein(freq_ghz: f64, temp_mk: f64) -> Result<f64> {
    if !(freq_ghz > 0.0 && freq_ghz.is_finite()) {
        return Err(Error::invalid("freq_ghz", format!("must be > 0, got {freq_ghz}")));
    }
    if !(temp_mk >= 0.0) {
        return Err(Error::invalid("temp_mk", format!("must be >= 0, got {temp_mk}")));
    }
    if temp_mk == 0.0 {
        return Ok(0.0);
    }
    Ok(1.0 / (MK_PER_GHZ * freq_ghz / temp_mk).exp_m1())
}

/// Inverse of [`bose_einstein`]: `T = hν / (k_B ln(1 + 1/n))`; zero at
/// `n = 0`.
pub fn effective_temperature(n: f64, freq_ghz: f64) -> Result<f64> {
    if !(freq_ghz > 0.0 && freq_ghz.is_finite()) {
        return Err(Error::invalid("freq_ghz", format!("must be > 0, got {freq_ghz}")));
    }
    if !(n >= 0.0 && n.is_finite()) {
        return Err(Error::invalid("n", format!("must be >= 0, got {n}")));
    }
    if n == 0.0 {
        return Ok(0.0);
    }
    Ok(MK_PER_GHZ * freq_ghz / (1.0 / n).ln_1p())
}

/// `Γ_φ = Γ₂(1 − r₀(1 + 2n)²)`, from `Γ₂ = Γ_φ + Γ₁(1 + 2n)/2` and
/// `Γ₁ = 2Γ₂r₀(1 + 2n)`.
pub fn dephasing_rate(gamma2_ghz: f64, r0: f64, n_th: f64) -> f64 {
    let k = 1.0 + 2.0 * n_th;
    gamma2_ghz * (1.0 - r0 * k * k)
}

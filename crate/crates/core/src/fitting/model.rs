use num_complex::Complex64 as C64;

use crate::scattering::weak_drive_transmission;

/// Fit model `t(f) = 1 + r₀(−1 + ix)/(1 + x²)`, `x = (f − Δ)/Γ₂`.
pub fn model(freq_ghz: f64, r0: f64, gamma2_ghz: f64, delta_ghz: f64) -> C64 {
    weak_drive_transmission(freq_ghz - delta_ghz, r0, gamma2_ghz)
}

/// `∂t/∂(r₀, Γ₂, Δ)`
pub fn model_jacobian(freq_ghz: f64, r0: f64, gamma2_ghz: f64, delta_ghz: f64) -> [C64; 3] {
    let x = (freq_ghz - delta_ghz) / gamma2_ghz;
    let l = 1.0 / (1.0 + x * x);
    let dt_dx = r0 * l * l * C64::new(2.0 * x, 1.0 - x * x);
    [
        C64::new(-1.0, x) * l,
        dt_dx * (-x / gamma2_ghz),
        dt_dx * (-1.0 / gamma2_ghz),
    ]
}

pub(crate) fn logistic(u: f64) -> f64 {
    1.0 / (1.0 + (-u).exp())
}

pub(crate) fn logit(p: f64) -> f64 {
    (p / (1.0 - p)).ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn jacobian_matches_central_differences(
            f in 0.5..12.0f64, r0 in 0.01..1.0f64, g2 in 0.05..6.0f64, d in 1.0..10.0f64,
        ) {
            let jac = model_jacobian(f, r0, g2, d);
            let p = [r0, g2, d];
            for k in 0..3 {
                let h = 1e-6 * p[k].abs().max(1e-3);
                let (mut up, mut dn) = (p, p);
                up[k] += h;
                dn[k] -= h;
                let fd = (model(f, up[0], up[1], up[2]) - model(f, dn[0], dn[1], dn[2])) / (2.0 * h);
                let scale = jac[k].norm().max(1.0);
                prop_assert!((fd - jac[k]).norm() < 1e-6 * scale, "k={} fd={} an={}", k, fd, jac[k]);
            }
        }
    }

    #[test]
    fn logistic_round_trip() {
        for p in [1e-6, 0.25, 0.5, 0.9, 0.999] {
            assert!((logistic(logit(p)) - p).abs() < 1e-12);
        }
    }
}

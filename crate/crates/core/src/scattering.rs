//! Driven, thermally damped two-level system in front of a mirrorless
//! transmission line: steady state, coherent reflection and transmission.
//!
//! Rates and frequencies are cyclic (GHz). The Bloch equations are linear
//! and homogeneous in the rates, so the steady state does not depend on
//! whether they are read as angular or cyclic.

use num_complex::Complex64 as C64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::circuit::FluxPoint;
use crate::parallel::Exec;
use crate::{Error, Result};

/// `Γ₁/Δ` above which the rotating-wave line shape is flagged.
pub const RWA_WARNING_RATIO: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateSet {
    pub gamma1_ghz: f64,
    pub gamma_phi_ghz: f64,
    pub n_th: f64,
}

impl RateSet {
    pub fn new(gamma1_ghz: f64, gamma_phi_ghz: f64, n_th: f64) -> Self {
        RateSet {
            gamma1_ghz,
            gamma_phi_ghz,
            n_th,
        }
    }

    /// Rates with a prescribed `Γ₂` and `n_th`; fails if that needs a
    /// negative dephasing rate.
    pub fn from_gamma2(gamma1_ghz: f64, gamma2_ghz: f64, n_th: f64) -> Result<Self> {
        let rates = RateSet::new(gamma1_ghz, gamma2_ghz - 0.5 * gamma1_ghz * (1.0 + 2.0 * n_th), n_th);
        rates.validate()?;
        Ok(rates)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("gamma1_ghz", self.gamma1_ghz),
            ("gamma_phi_ghz", self.gamma_phi_ghz),
            ("n_th", self.n_th),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::invalid(name, format!("must be >= 0, got {v}")));
            }
        }
        Ok(())
    }

    /// `Γ₂ = Γ_φ + (Γ₁/2)(1 + 2n_th)`
    pub fn gamma2_ghz(&self) -> f64 {
        self.gamma_phi_ghz + 0.5 * self.gamma1_ghz * self.thermal_factor()
    }

    /// `1 + 2n_th`
    pub fn thermal_factor(&self) -> f64 {
        1.0 + 2.0 * self.n_th
    }

    /// On-resonance weak-drive reflection `r₀ = Γ₁/(2Γ₂(1+2n_th))`.
    pub fn r0(&self) -> f64 {
        if self.gamma1_ghz == 0.0 {
            return 0.0;
        }
        self.gamma1_ghz / (2.0 * self.gamma2_ghz() * self.thermal_factor())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveSpec {
    pub omega_d_ghz: f64,
    pub rabi_ghz: f64,
    pub delta_qubit_ghz: f64,
}

impl DriveSpec {
    pub fn new(omega_d_ghz: f64, rabi_ghz: f64, delta_qubit_ghz: f64) -> Self {
        DriveSpec {
            omega_d_ghz,
            rabi_ghz,
            delta_qubit_ghz,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rabi_ghz >= 0.0 && self.rabi_ghz.is_finite()) {
            return Err(Error::invalid(
                "rabi_ghz",
                format!("must be >= 0, got {}", self.rabi_ghz),
            ));
        }
        if !self.omega_d_ghz.is_finite() || !self.delta_qubit_ghz.is_finite() {
            return Err(Error::invalid("drive", "frequencies must be finite"));
        }
        Ok(())
    }

    /// `δω = ω_d − Δ`
    pub fn detuning_ghz(&self) -> f64 {
        self.omega_d_ghz - self.delta_qubit_ghz
    }

    /// `Ω_R = Ω/√(1+2n_th)`
    pub fn rabi_renormalized(&self, n_th: f64) -> f64 {
        self.rabi_ghz / (1.0 + 2.0 * n_th).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityMatrix {
    pub rho_ee: f64,
    pub rho_gg: f64,
    pub rho_eg: C64,
    pub rho_ge: C64,
}

/// Closed-form steady state of the Bloch equations.
pub fn steady_state(rates: &RateSet, drive: &DriveSpec) -> Result<DensityMatrix> {
    rates.validate()?;
    drive.validate()?;
    let g1 = rates.gamma1_ghz;
    let g2 = rates.gamma2_ghz();
    let omega = drive.rabi_ghz;
    if g1 == 0.0 && (omega == 0.0 || g2 == 0.0) {
        return Err(Error::DegenerateRates(
            "no relaxation and either no drive or no dephasing: the steady state is not unique",
        ));
    }
    let dw = drive.detuning_ghz();
    let lorentz = g2 * g2 + dw * dw;
    // population inversion -(ρ_ee − ρ_gg)
    let w = g1 * lorentz / (g1 * lorentz * rates.thermal_factor() + omega * omega * g2);
    let rho_ee = 0.5 * (1.0 - w);
    let rho_ge = C64::new(0.0, 0.5 * omega) * w * C64::new(g2, dw) / lorentz;
    Ok(DensityMatrix {
        rho_ee,
        rho_gg: 1.0 - rho_ee,
        rho_eg: rho_ge.conj(),
        rho_ge,
    })
}

/// Coherent reflection amplitude including power broadening.
pub fn reflection(rates: &RateSet, drive: &DriveSpec) -> C64 {
    let g1 = rates.gamma1_ghz;
    if g1 == 0.0 {
        return C64::new(0.0, 0.0);
    }
    let g2 = rates.gamma2_ghz();
    let x = drive.detuning_ghz() / g2;
    let omega_r = drive.rabi_renormalized(rates.n_th);
    rates.r0() * C64::new(-1.0, x) / (1.0 + x * x + omega_r * omega_r / (g1 * g2))
}

/// `t = 1 + r`
pub fn transmission(rates: &RateSet, drive: &DriveSpec) -> C64 {
    1.0 + reflection(rates, drive)
}

/// Linear-response transmission `1 + r₀(−1 + ix)/(1 + x²)`, `x = δω/Γ₂`.
/// This is also the fit model.
pub fn weak_drive_transmission(detuning_ghz: f64, r0: f64, gamma2_ghz: f64) -> C64 {
    let x = detuning_ghz / gamma2_ghz;
    1.0 + r0 * C64::new(-1.0, x) / (1.0 + x * x)
}

/// Closed-form on-resonance transmission in the weak-drive limit.
pub fn t_min(rates: &RateSet) -> f64 {
    let (g1, gp, n) = (rates.gamma1_ghz, rates.gamma_phi_ghz, rates.n_th);
    let num = 4.0 * g1 * n + 2.0 * gp * (1.0 + 2.0 * n) + 4.0 * g1 * n * n;
    let den = (1.0 + 2.0 * n) * (g1 + 2.0 * gp + 2.0 * g1 * n);
    num / den
}

/// Amplitude extinction `1 − |t|`.
pub fn extinction(t: C64) -> f64 {
    1.0 - t.norm()
}

/// Power extinction `1 − |t|²`.
pub fn power_extinction(t: C64) -> f64 {
    1.0 - t.norm_sqr()
}

fn bloch_rhs(rates: &RateSet, drive: &DriveSpec, s: &[C64; 4]) -> [C64; 4] {
    let [ee, gg, eg, ge] = *s;
    let g1 = rates.gamma1_ghz;
    let g2 = rates.gamma2_ghz();
    let n = rates.n_th;
    let dw = drive.detuning_ghz();
    let half_drive = C64::new(0.0, 0.5 * drive.rabi_ghz);
    let i = C64::i();
    let dee = -half_drive * (ge - eg) + n * g1 * (gg - ee) - g1 * ee;
    [
        dee,
        -dee,
        -half_drive * (gg - ee) - i * dw * eg - g2 * eg,
        half_drive * (gg - ee) + i * dw * ge - g2 * ge,
    ]
}

/// Fixed-step RK4 integration of the Bloch equations from `initial`.
pub fn integrate_bloch(
    rates: &RateSet,
    drive: &DriveSpec,
    initial: DensityMatrix,
    horizon: f64,
    step: f64,
) -> DensityMatrix {
    let mut s = [
        C64::from(initial.rho_ee),
        C64::from(initial.rho_gg),
        initial.rho_eg,
        initial.rho_ge,
    ];
    let steps = (horizon / step).ceil() as usize;
    let h = horizon / steps as f64;
    let axpy = |a: &[C64; 4], k: &[C64; 4], c: f64| -> [C64; 4] { std::array::from_fn(|j| a[j] + k[j] * c) };
    for _ in 0..steps {
        let k1 = bloch_rhs(rates, drive, &s);
        let k2 = bloch_rhs(rates, drive, &axpy(&s, &k1, 0.5 * h));
        let k3 = bloch_rhs(rates, drive, &axpy(&s, &k2, 0.5 * h));
        let k4 = bloch_rhs(rates, drive, &axpy(&s, &k3, h));
        for j in 0..4 {
            s[j] += (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]) * (h / 6.0);
        }
    }
    DensityMatrix {
        rho_ee: s[0].re,
        rho_gg: s[1].re,
        rho_eg: s[2],
        rho_ge: s[3],
    }
}

/// Long-time RK4 relaxation from the ground state: step `1/(200·fastest
/// rate)`, horizon `50/slowest decay rate`.
pub fn relax_to_steady_state(rates: &RateSet, drive: &DriveSpec) -> Result<DensityMatrix> {
    rates.validate()?;
    drive.validate()?;
    let decay = [rates.gamma1_ghz * rates.thermal_factor(), rates.gamma2_ghz()];
    let slowest = decay.iter().copied().filter(|&r| r > 0.0).fold(f64::INFINITY, f64::min);
    if !slowest.is_finite() {
        return Err(Error::DegenerateRates("all decay rates vanish"));
    }
    let fastest = decay
        .iter()
        .copied()
        .chain([drive.rabi_ghz, drive.detuning_ghz().abs()])
        .fold(0.0, f64::max);
    let ground = DensityMatrix {
        rho_ee: 0.0,
        rho_gg: 1.0,
        rho_eg: C64::new(0.0, 0.0),
        rho_ge: C64::new(0.0, 0.0),
    };
    Ok(integrate_bloch(
        rates,
        drive,
        ground,
        50.0 / slowest,
        1.0 / (200.0 * fastest),
    ))
}

/// Complex Gaussian noise added to generated traces.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Standard deviation of each quadrature.
    pub sigma: f64,
    pub seed: u64,
}

/// Generation parameters stored alongside a trace.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceMeta {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rates: Option<RateSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rabi_ghz: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise: Option<NoiseSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub flux: Option<FluxPoint>,
    /// Frequency window `[lo, hi]` to use when fitting.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<(f64, f64)>,
    #[serde(default)]
    pub rwa_warning: bool,
}

/// Transmission sampled on a frequency grid. The off-resonance baseline is 1.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SpectrumTrace {
    pub freq_ghz: Vec<f64>,
    pub t: Vec<C64>,
    pub meta: TraceMeta,
}

impl SpectrumTrace {
    pub fn len(&self) -> usize {
        self.freq_ghz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.freq_ghz.is_empty()
    }
}

/// `count` evenly spaced points from `start` to `stop` inclusive.
pub fn linear_grid(start: f64, stop: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![start],
        _ => (0..count)
            .map(|i| start + (stop - start) * i as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Evaluates the exact transmission on `freq_ghz` and optionally adds seeded
/// complex Gaussian noise. The noise sequence depends only on the seed and
/// the grid length.
pub fn generate_trace(
    rates: &RateSet,
    delta_ghz: f64,
    freq_ghz: &[f64],
    rabi_ghz: f64,
    noise: Option<NoiseSpec>,
    exec: Exec,
) -> Result<SpectrumTrace> {
    rates.validate()?;
    DriveSpec::new(delta_ghz, rabi_ghz, delta_ghz).validate()?;
    if !(delta_ghz > 0.0) {
        return Err(Error::invalid("delta_ghz", format!("must be > 0, got {delta_ghz}")));
    }
    let mut t = exec.map(freq_ghz, |&f| {
        transmission(rates, &DriveSpec::new(f, rabi_ghz, delta_ghz))
    });
    if let Some(ns) = noise {
        if !(ns.sigma >= 0.0 && ns.sigma.is_finite()) {
            return Err(Error::invalid("noise.sigma", format!("must be >= 0, got {}", ns.sigma)));
        }
        let normal = Normal::new(0.0, ns.sigma).expect("sigma validated");
        let mut rng = ChaCha8Rng::seed_from_u64(ns.seed);
        for z in &mut t {
            let re = normal.sample(&mut rng);
            let im = normal.sample(&mut rng);
            *z += C64::new(re, im);
        }
    }
    let ratio = rates.gamma1_ghz / delta_ghz;
    if ratio > RWA_WARNING_RATIO {
        log::warn!("Γ₁/Δ = {ratio:.3} exceeds {RWA_WARNING_RATIO}; line shape read as renormalized");
    }
    Ok(SpectrumTrace {
        freq_ghz: freq_ghz.to_vec(),
        t,
        meta: TraceMeta {
            rates: Some(*rates),
            delta_ghz: Some(delta_ghz),
            rabi_ghz: Some(rabi_ghz),
            noise,
            flux: None,
            mask: None,
            rwa_warning: ratio > RWA_WARNING_RATIO,
        },
    })
}

//! Inverse pipeline: complex Lorentzian fits of transmission traces, bounds
//! on `Γ₁` and the thermal occupation, effective temperatures.
//!
//! The fit model is the weak-drive transmission with the off-resonance
//! baseline fixed at 1. Real and imaginary residuals are fitted together.

mod lm;
mod model;
mod thermal;

use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::circuit::FluxPoint;
use crate::parallel::Exec;
use crate::scattering::SpectrumTrace;
use crate::{Error, Result};

pub use lm::{levenberg_marquardt, LeastSquares, LmOptions, LmReport};
pub use model::{model, model_jacobian};
pub use thermal::{bose_einstein, dephasing_rate, effective_temperature};

use model::{logistic, logit};

pub const MIN_POINTS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InitialGuess {
    pub r0: f64,
    pub gamma2_ghz: f64,
    pub delta_ghz: f64,
}

#[derive(Debug, Clone)]
pub struct FitOptions {
    /// Frequency window `[lo, hi]` in GHz; the whole trace if `None`.
    pub mask: Option<(f64, f64)>,
    /// Starting point; derived from the trace if `None`.
    pub init: Option<InitialGuess>,
    /// Per-point standard deviations, same length as the trace.
    pub sigma: Option<Vec<f64>>,
    pub lm: LmOptions,
    /// Traces with `max |1 − t|` below this are reported as featureless.
    pub min_depth: f64,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            mask: None,
            init: None,
            sigma: None,
            lm: LmOptions::default(),
            min_depth: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub r0: f64,
    pub gamma2_ghz: f64,
    pub delta_ghz: f64,
    pub r0_err: f64,
    pub gamma2_err: f64,
    pub delta_err: f64,
    /// `√RSS` over the concatenated real and imaginary residuals.
    pub residual_norm: f64,
    pub iterations: usize,
    pub converged: bool,
    pub mask: (f64, f64),
    pub points: usize,
}

struct TraceProblem {
    freq: Vec<f64>,
    t: Vec<C64>,
    weight: Vec<f64>,
}

impl TraceProblem {
    /// `(u, Γ₂, Δ)` with `r₀ = logistic(u)` → natural parameters.
    fn natural(p: &DVector<f64>) -> (f64, f64, f64) {
        (logistic(p[0]), p[1], p[2])
    }

    fn natural_jacobian(&self, r0: f64, g2: f64, delta: f64) -> DMatrix<f64> {
        let n = self.freq.len();
        let mut j = DMatrix::zeros(2 * n, 3);
        for (i, (&f, &w)) in self.freq.iter().zip(&self.weight).enumerate() {
            let d = model_jacobian(f, r0, g2, delta);
            for k in 0..3 {
                j[(2 * i, k)] = w * d[k].re;
                j[(2 * i + 1, k)] = w * d[k].im;
            }
        }
        j
    }
}

impl LeastSquares for TraceProblem {
    fn residuals(&self, p: &DVector<f64>) -> DVector<f64> {
        let (r0, g2, delta) = Self::natural(p);
        let mut r = DVector::zeros(2 * self.freq.len());
        for (i, ((&f, &t), &w)) in self.freq.iter().zip(&self.t).zip(&self.weight).enumerate() {
            let diff = model(f, r0, g2, delta) - t;
            r[2 * i] = w * diff.re;
            r[2 * i + 1] = w * diff.im;
        }
        r
    }

    fn jacobian(&self, p: &DVector<f64>) -> DMatrix<f64> {
        let (r0, g2, delta) = Self::natural(p);
        let mut j = self.natural_jacobian(r0, g2, delta);
        let dr0_du = r0 * (1.0 - r0);
        j.column_mut(0).scale_mut(dr0_du);
        j
    }

    fn is_feasible(&self, p: &DVector<f64>) -> bool {
        p[1] > 0.0 && p.iter().all(|x| x.is_finite())
    }
}

/// Starting point from the trace shape: `Δ` at the transmission minimum,
/// `r₀ = 1 − |t|_min`, `Γ₂` from the half width of the `1 − |t|` dip.
pub fn initial_guess(freq: &[f64], t: &[C64]) -> InitialGuess {
    let depth: Vec<f64> = t.iter().map(|z| 1.0 - z.norm()).collect();
    let imin = depth
        .iter()
        .enumerate()
        .fold(0, |best, (i, &d)| if d > depth[best] { i } else { best });
    let half = 0.5 * depth[imin];
    let left = (0..imin).rev().find(|&i| depth[i] < half).map(|i| freq[imin] - freq[i]);
    let right = (imin + 1..freq.len())
        .find(|&i| depth[i] < half)
        .map(|i| freq[i] - freq[imin]);
    let span = freq[freq.len() - 1] - freq[0];
    let half_width = match (left, right) {
        (Some(l), Some(r)) => 0.5 * (l + r),
        (Some(w), None) | (None, Some(w)) => w,
        (None, None) => 0.5 * span.abs(),
    };
    InitialGuess {
        r0: depth[imin].clamp(0.02, 0.98),
        gamma2_ghz: half_width.max(1e-6 * span.abs()).max(f64::MIN_POSITIVE),
        delta_ghz: freq[imin],
    }
}

/// Least-squares fit of one trace.
///
/// Hitting the iteration cap is not an error: the best point found is
/// returned with `converged = false`.
pub fn fit_trace(trace: &SpectrumTrace, opts: &FitOptions) -> Result<FitResult> {
    if trace.t.len() != trace.freq_ghz.len() {
        return Err(Error::DimensionMismatch {
            expected: trace.freq_ghz.len(),
            found: trace.t.len(),
        });
    }
    if let Some(s) = &opts.sigma {
        if s.len() != trace.len() {
            return Err(Error::DimensionMismatch {
                expected: trace.len(),
                found: s.len(),
            });
        }
        if s.iter().any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::invalid("sigma", "must be > 0"));
        }
    }
    let mask = opts.mask.or(trace.meta.mask);
    let mut problem = TraceProblem {
        freq: Vec::new(),
        t: Vec::new(),
        weight: Vec::new(),
    };
    for (i, (&f, &t)) in trace.freq_ghz.iter().zip(&trace.t).enumerate() {
        if !f.is_finite() || !t.re.is_finite() || !t.im.is_finite() {
            return Err(Error::invalid("trace", format!("non-finite sample at index {i}")));
        }
        if mask.is_some_and(|(lo, hi)| f < lo || f > hi) {
            continue;
        }
        problem.freq.push(f);
        problem.t.push(t);
        problem.weight.push(opts.sigma.as_ref().map_or(1.0, |s| 1.0 / s[i]));
    }
    let n = problem.freq.len();
    if n < MIN_POINTS {
        if let Some((lo, hi)) = mask {
            if n == 0 {
                return Err(Error::EmptyWindow { lo, hi });
            }
        }
        return Err(Error::InsufficientPoints {
            found: n,
            required: MIN_POINTS,
        });
    }
    let (fmin, fmax) = problem
        .freq
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &f| (a.min(f), b.max(f)));
    let window = mask.unwrap_or((fmin, fmax));

    let depth = problem.t.iter().map(|t| (1.0 - t).norm()).fold(0.0, f64::max);
    if depth < opts.min_depth {
        return Err(Error::NoResonance { depth });
    }

    let init = opts.init.unwrap_or_else(|| initial_guess(&problem.freq, &problem.t));
    if !(init.r0 > 0.0 && init.r0 < 1.0 && init.gamma2_ghz > 0.0) {
        return Err(Error::invalid("init", "need 0 < r0 < 1 and gamma2 > 0"));
    }
    let p0 = DVector::from_vec(vec![logit(init.r0), init.gamma2_ghz, init.delta_ghz]);
    let report = levenberg_marquardt(&problem, p0, &opts.lm);
    let (r0, gamma2, delta) = TraceProblem::natural(&report.params);
    if !report.converged {
        log::warn!("fit stopped after {} iterations without converging", report.iterations);
    }
    if delta < window.0 || delta > window.1 {
        return Err(Error::ResonanceOutsideMask {
            delta_ghz: delta,
            lo: window.0,
            hi: window.1,
        });
    }

    let j = problem.natural_jacobian(r0, gamma2, delta);
    let dof = (2 * n - 3) as f64;
    let s2 = report.rss / dof;
    let errs = (j.transpose() * &j)
        .try_inverse()
        .map(|cov| [0, 1, 2].map(|k| (s2 * cov[(k, k)]).max(0.0).sqrt()))
        .unwrap_or([f64::NAN; 3]);

    Ok(FitResult {
        r0,
        gamma2_ghz: gamma2,
        delta_ghz: delta,
        r0_err: errs[0],
        gamma2_err: errs[1],
        delta_err: errs[2],
        residual_norm: report.rss.sqrt(),
        iterations: report.iterations,
        converged: report.converged,
        mask: window,
        points: n,
    })
}

/// Thermal bounds implied by a fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundsResult {
    pub n_max: f64,
    pub gamma1_low_ghz: f64,
    pub gamma1_high_ghz: f64,
    pub t_eff_mk: f64,
}

impl BoundsResult {
    /// Midpoint of the `Γ₁` interval.
    pub fn gamma1_mid_ghz(&self) -> f64 {
        0.5 * (self.gamma1_low_ghz + self.gamma1_high_ghz)
    }

    /// Distances from the midpoint down and up to the bounds.
    pub fn gamma1_error_bars(&self) -> (f64, f64) {
        let mid = self.gamma1_mid_ghz();
        (mid - self.gamma1_low_ghz, self.gamma1_high_ghz - mid)
    }

    pub fn contains_gamma1(&self, gamma1_ghz: f64, rel_tol: f64) -> bool {
        gamma1_ghz >= self.gamma1_low_ghz * (1.0 - rel_tol) && gamma1_ghz <= self.gamma1_high_ghz * (1.0 + rel_tol)
    }
}

/// `Γ₁` bounds with `r₀` and `Γ₂` each moved `n_sigma` standard errors
/// outward. Both bounds grow with both parameters, so the corners are the
/// extremes.
pub fn widened_gamma1_bounds(fit: &FitResult, n_sigma: f64) -> (f64, f64) {
    let r_lo = (fit.r0 - n_sigma * fit.r0_err).max(0.0);
    let r_hi = (fit.r0 + n_sigma * fit.r0_err).min(1.0);
    let g_lo = (fit.gamma2_ghz - n_sigma * fit.gamma2_err).max(0.0);
    let g_hi = fit.gamma2_ghz + n_sigma * fit.gamma2_err;
    (2.0 * g_lo * r_lo, 2.0 * g_hi * r_hi.sqrt())
}

/// `n_max = (1/√r₀ − 1)/2`. Requiring `Γ_φ ≥ 0` caps `n_th` there; with
/// `Γ₁ = 2Γ₂r₀(1 + 2n_th)` this gives `2Γ₂r₀ ≤ Γ₁ ≤ 2Γ₂√r₀`.
pub fn bounds_from(r0: f64, gamma2_ghz: f64, delta_ghz: f64) -> Result<BoundsResult> {
    if !(r0 > 0.0 && r0 <= 1.0) {
        return Err(Error::invalid("r0", format!("must be in (0, 1], got {r0}")));
    }
    if !(gamma2_ghz > 0.0) {
        return Err(Error::invalid("gamma2_ghz", format!("must be > 0, got {gamma2_ghz}")));
    }
    let sq = r0.sqrt();
    let n_max = (0.5 * (1.0 / sq - 1.0)).max(0.0);
    Ok(BoundsResult {
        n_max,
        gamma1_low_ghz: 2.0 * gamma2_ghz * r0,
        gamma1_high_ghz: 2.0 * gamma2_ghz * sq,
        t_eff_mk: effective_temperature(n_max, delta_ghz)?,
    })
}

pub fn derive_bounds(fit: &FitResult) -> Result<BoundsResult> {
    bounds_from(fit.r0, fit.gamma2_ghz, fit.delta_ghz)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitFlag {
    NoResonance,
    NotConverged,
    ResonanceOutsideMask,
    InsufficientPoints,
    FitFailed,
    RwaWarning,
}

impl fmt::Display for FitFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FitFlag::NoResonance => "no_resonance",
            FitFlag::NotConverged => "not_converged",
            FitFlag::ResonanceOutsideMask => "resonance_outside_mask",
            FitFlag::InsufficientPoints => "insufficient_points",
            FitFlag::FitFailed => "fit_failed",
            FitFlag::RwaWarning => "rwa_warning",
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BatchRow {
    pub flux: Option<FluxPoint>,
    pub fit: Option<FitResult>,
    pub bounds: Option<BoundsResult>,
    pub flags: Vec<FitFlag>,
    /// Message of the error that stopped the fit, if any.
    pub error: Option<String>,
}

/// Fits every trace; failures become flagged rows rather than errors.
pub fn batch_fit(traces: &[SpectrumTrace], opts: &FitOptions, exec: Exec) -> Vec<BatchRow> {
    exec.map(traces, |trace| {
        let mut flags = Vec::new();
        if trace.meta.rwa_warning {
            flags.push(FitFlag::RwaWarning);
        }
        let mut row = BatchRow {
            flux: trace.meta.flux,
            fit: None,
            bounds: None,
            flags,
            error: None,
        };
        let outcome = fit_trace(trace, opts).and_then(|fit| Ok((fit, derive_bounds(&fit)?)));
        match outcome {
            Ok((fit, bounds)) => {
                if !fit.converged {
                    row.flags.push(FitFlag::NotConverged);
                }
                row.fit = Some(fit);
                row.bounds = Some(bounds);
            }
            Err(e) => {
                row.flags.push(match e {
                    Error::NoResonance { .. } => FitFlag::NoResonance,
                    Error::ResonanceOutsideMask { .. } => FitFlag::ResonanceOutsideMask,
                    Error::InsufficientPoints { .. } | Error::EmptyWindow { .. } => FitFlag::InsufficientPoints,
                    _ => FitFlag::FitFailed,
                });
                row.error = Some(e.to_string());
            }
        }
        row
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scattering::{generate_trace, linear_grid, NoiseSpec, RateSet};
    use proptest::prelude::*;

    fn synthetic(r0: f64, g2: f64, delta: f64, lo: f64, hi: f64, n: usize) -> SpectrumTrace {
        let freq = linear_grid(lo, hi, n);
        let t = freq.iter().map(|&f| model(f, r0, g2, delta)).collect();
        SpectrumTrace {
            freq_ghz: freq,
            t,
            meta: Default::default(),
        }
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn noiseless_round_trip() {
        let tr = synthetic(0.8, 1.2, 5.2, 1.0, 10.0, 401);
        let fit = fit_trace(&tr, &FitOptions::default()).unwrap();
        assert!(fit.converged);
        assert!(rel(fit.r0, 0.8) < 1e-8, "{fit:?}");
        assert!(rel(fit.gamma2_ghz, 1.2) < 1e-8);
        assert!(rel(fit.delta_ghz, 5.2) < 1e-8);
        assert!(fit.residual_norm < 1e-8);
    }

    #[test]
    fn masked_broad_resonance() {
        // 2Γ₂ = 10.9 GHz line centered at 7.68 GHz, seen through 3-11 GHz
        let tr = synthetic(0.848, 5.45, 7.68, 0.5, 16.0, 600);
        let opts = FitOptions {
            mask: Some((3.0, 11.0)),
            ..Default::default()
        };
        let fit = fit_trace(&tr, &opts).unwrap();
        assert!(rel(fit.gamma2_ghz, 5.45) < 0.02);
        assert!(rel(fit.delta_ghz, 7.68) < 0.02);
        assert!(rel(fit.r0, 0.848) < 0.02);
        assert_eq!(fit.mask, (3.0, 11.0));
    }

    #[test]
    fn mask_invariance() {
        let tr = synthetic(0.6, 0.3, 5.0, 2.0, 8.0, 1201);
        let wide = fit_trace(
            &tr,
            &FitOptions {
                mask: Some((2.0, 8.0)),
                ..Default::default()
            },
        )
        .unwrap();
        let narrow = fit_trace(
            &tr,
            &FitOptions {
                mask: Some((3.5, 6.5)),
                ..Default::default()
            },
        )
        .unwrap();
        assert!(rel(wide.r0, narrow.r0) < 5e-3);
        assert!(rel(wide.gamma2_ghz, narrow.gamma2_ghz) < 5e-3);
        assert!(rel(wide.delta_ghz, narrow.delta_ghz) < 5e-3);
    }

    #[test]
    fn error_cases() {
        let tr = synthetic(0.5, 0.2, 5.0, 4.0, 6.0, 101);
        let few = FitOptions {
            mask: Some((4.99, 5.01)),
            ..Default::default()
        };
        assert!(matches!(fit_trace(&tr, &few), Err(Error::InsufficientPoints { .. })));
        let empty = FitOptions {
            mask: Some((7.0, 8.0)),
            ..Default::default()
        };
        assert!(matches!(fit_trace(&tr, &empty), Err(Error::EmptyWindow { .. })));
        let flat = synthetic(0.0, 0.2, 5.0, 4.0, 6.0, 101);
        assert!(matches!(
            fit_trace(&flat, &FitOptions::default()),
            Err(Error::NoResonance { .. })
        ));
        let edge = FitOptions {
            mask: Some((5.5, 6.0)),
            ..Default::default()
        };
        assert!(matches!(fit_trace(&tr, &edge), Err(Error::ResonanceOutsideMask { .. })));
    }

    #[test]
    fn bounds_examples() {
        let b = bounds_from(0.25, 1.0, 5.0).unwrap();
        assert!((b.n_max - 0.5).abs() < 1e-15);
        assert!((b.gamma1_low_ghz - 0.5).abs() < 1e-15);
        assert!((b.gamma1_high_ghz - 1.0).abs() < 1e-15);
        let (lo, hi) = b.gamma1_error_bars();
        assert!((lo - 0.25).abs() < 1e-15 && (hi - 0.25).abs() < 1e-15);
        let ideal = bounds_from(1.0, 0.7, 5.0).unwrap();
        assert_eq!(ideal.n_max, 0.0);
        assert_eq!(ideal.gamma1_low_ghz, ideal.gamma1_high_ghz);
        assert_eq!(ideal.gamma1_low_ghz, 1.4);
        assert_eq!(ideal.t_eff_mk, 0.0);
        assert!(bounds_from(0.0, 1.0, 5.0).is_err());
        assert!(bounds_from(1.1, 1.0, 5.0).is_err());
    }

    #[test]
    fn bounds_contain_generator_rate() {
        for (g1, gp, n) in [(0.5, 0.1, 0.0), (0.5, 0.0, 0.3), (2.0, 0.4, 0.1)] {
            let rates = RateSet::new(g1, gp, n);
            let b = bounds_from(rates.r0(), rates.gamma2_ghz(), 5.0).unwrap();
            assert!(b.contains_gamma1(g1, 1e-12), "{b:?}");
            assert!(n <= b.n_max + 1e-12);
        }
    }

    #[test]
    fn dephasing_vanishes_at_n_max() {
        for r0 in [0.05, 0.3, 0.77, 1.0] {
            let b = bounds_from(r0, 1.3, 5.0).unwrap();
            assert!(dephasing_rate(1.3, r0, b.n_max).abs() < 1e-12);
            assert!(dephasing_rate(1.3, r0, 0.0) >= 0.0);
        }
    }

    #[test]
    fn batch_flags_and_order() {
        let rates = RateSet::new(0.5, 0.05, 0.0);
        let grid = linear_grid(4.0, 6.0, 201);
        let mut good = generate_trace(&rates, 5.0, &grid, 0.0, None, Exec::Sequential).unwrap();
        good.meta.flux = Some(FluxPoint::new(0.5, 0.0));
        let flat = generate_trace(&RateSet::new(0.0, 0.1, 0.0), 5.0, &grid, 0.0, None, Exec::Sequential).unwrap();
        let rows = batch_fit(&[good.clone(), flat, good], &FitOptions::default(), Exec::Parallel);
        assert_eq!(rows.len(), 3);
        assert!(rows[0].flags.is_empty() && rows[2].flags.is_empty());
        assert_eq!(rows[0].flux, Some(FluxPoint::new(0.5, 0.0)));
        assert_eq!(rows[1].flags, vec![FitFlag::NoResonance]);
        assert!(rows[1].fit.is_none());
        assert!(batch_fit(&[], &FitOptions::default(), Exec::Parallel).is_empty());
    }

    #[test]
    fn noisy_errors_are_calibrated() {
        let rates = RateSet::new(0.8, 0.1, 0.0);
        let grid = linear_grid(3.0, 7.0, 201);
        let (r0, g2) = (rates.r0(), rates.gamma2_ghz());
        let mut worst: f64 = 0.0;
        for seed in 0..100 {
            let noise = Some(NoiseSpec { sigma: 0.01, seed });
            let tr = generate_trace(&rates, 5.0, &grid, 0.0, noise, Exec::Sequential).unwrap();
            let fit = fit_trace(&tr, &FitOptions::default()).unwrap();
            for (est, err, truth) in [
                (fit.r0, fit.r0_err, r0),
                (fit.gamma2_ghz, fit.gamma2_err, g2),
                (fit.delta_ghz, fit.delta_err, 5.0),
            ] {
                worst = worst.max((est - truth).abs() / err);
            }
        }
        assert!(worst < 5.0, "worst deviation {worst} standard errors");
    }

    #[test]
    fn widened_bounds_reduce_to_point_bounds() {
        let tr = synthetic(0.7, 0.9, 5.0, 2.0, 8.0, 401);
        let fit = fit_trace(&tr, &FitOptions::default()).unwrap();
        let b = derive_bounds(&fit).unwrap();
        let (lo, hi) = widened_gamma1_bounds(&fit, 0.0);
        assert!(rel(lo, b.gamma1_low_ghz) < 1e-12 && rel(hi, b.gamma1_high_ghz) < 1e-12);
        let (lo3, hi3) = widened_gamma1_bounds(&fit, 3.0);
        assert!(lo3 <= lo && hi3 >= hi);
    }

    #[test]
    fn widened_bounds_cover_noisy_truth() {
        // n_th = 0 puts the truth on the lower bound, the hardest case
        let rates = RateSet::new(0.8, 0.05, 0.0);
        let grid = linear_grid(3.0, 7.0, 201);
        let covered = (0..100)
            .filter(|&seed| {
                let noise = Some(NoiseSpec { sigma: 0.01, seed });
                let tr = generate_trace(&rates, 5.0, &grid, 0.0, noise, Exec::Sequential).unwrap();
                let fit = fit_trace(&tr, &FitOptions::default()).unwrap();
                let (lo, hi) = widened_gamma1_bounds(&fit, 3.0);
                (lo..=hi).contains(&rates.gamma1_ghz)
            })
            .count();
        assert!(covered >= 97, "covered {covered} of 100");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn round_trip_property(r0 in 0.05..0.99f64, g2 in 0.05..2.0f64, delta in 3.0..7.0f64) {
            let tr = synthetic(r0, g2, delta, delta - 8.0 * g2, delta + 8.0 * g2, 161);
            let fit = fit_trace(&tr, &FitOptions::default()).unwrap();
            prop_assert!(rel(fit.r0, r0) < 1e-6);
            prop_assert!(rel(fit.gamma2_ghz, g2) < 1e-6);
            prop_assert!(rel(fit.delta_ghz, delta) < 1e-6);
        }

        #[test]
        fn bound_ordering(r0 in 1e-4..=1.0f64, g2 in 0.01..10.0f64) {
            let b = bounds_from(r0, g2, 5.0).unwrap();
            prop_assert!(b.gamma1_low_ghz <= b.gamma1_high_ghz);
            prop_assert!(b.n_max >= 0.0);
        }

        #[test]
        fn n_max_decreasing(a in 1e-4..1.0f64, b in 1e-4..1.0f64) {
            prop_assume!(a < b);
            let (na, nb) = (bounds_from(a, 1.0, 5.0).unwrap().n_max, bounds_from(b, 1.0, 5.0).unwrap().n_max);
            prop_assert!(na > nb);
        }
    }
}

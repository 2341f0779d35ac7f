use std::f64::consts::TAU;

use num_complex::Complex64 as C64;

use super::spec::{CircuitSpec, FluxPoint};
use crate::{Error, Result};

/// Grid step used to bracket roots before refinement.
const SCAN_STEP: f64 = 1e-3;
const ROOT_TOL: f64 = 1e-12;

/// Combined SQUID phasor `r₄e^{2πi f_ε} + r₅e^{2πi(f_ε+f_β)}`.
///
/// Junctions 4 and 5 act together like one junction of size `|P|` under
/// frustration `arg P/2π`; the qubit potential is symmetric when `P` is real
/// and negative.
pub fn symmetry_phasor(spec: &CircuitSpec, flux: FluxPoint) -> C64 {
    C64::from_polar(spec.r4, TAU * flux.f_eps) + C64::from_polar(spec.r5, TAU * (flux.f_eps + flux.f_beta))
}

/// `|Im P|/|P|`: zero exactly at a symmetry point.
pub fn symmetry_residual(spec: &CircuitSpec, flux: FluxPoint) -> f64 {
    let p = symmetry_phasor(spec, flux);
    p.im.abs() / p.norm()
}

/// Main-loop symmetry point (reduced to `[0, 1)`) for a SQUID frustration
/// held at `f_beta`.
pub fn symmetry_point_for_beta(spec: &CircuitSpec, f_beta: f64) -> FluxPoint {
    let squid = C64::new(spec.r4, 0.0) + C64::from_polar(spec.r5, TAU * f_beta);
    let f_eps = (0.5 - squid.arg() / TAU).rem_euclid(1.0);
    FluxPoint::new(f_eps, f_beta)
}

/// Symmetry points with `f_β` slaved to `f_ε`, inside `[lo, hi]`.
///
/// Roots of `r₄ sin 2πf_ε + r₅ sin 2π(f_ε+f_β) = 0` are bracketed on a
/// fine grid and refined by bisection, then kept only where
/// `r₄ cos 2πf_ε + r₅ cos 2π(f_ε+f_β) < 0`.
pub fn symmetry_points(spec: &CircuitSpec, lo: f64, hi: f64) -> Result<Vec<FluxPoint>> {
    spec.validate()?;
    if !(lo.is_finite() && hi.is_finite()) || hi <= lo {
        return Err(Error::EmptyWindow { lo, hi });
    }
    let phasor = |f: f64| symmetry_phasor(spec, spec.flux_at(f));
    let g = |f: f64| phasor(f).im;

    let steps = ((hi - lo) / SCAN_STEP).ceil() as usize;
    let mut points = Vec::new();
    let mut a = lo;
    let mut ga = g(a);
    for i in 1..=steps {
        let b = if i == steps { hi } else { lo + i as f64 * SCAN_STEP };
        let gb = g(b);
        let root = if ga == 0.0 {
            Some(a)
        } else if ga * gb < 0.0 {
            Some(bisect(&g, a, b, ga))
        } else {
            None
        };
        if let Some(r) = root {
            let duplicate = points.last().is_some_and(|p: &FluxPoint| (p.f_eps - r).abs() < 1e-9);
            if phasor(r).re < 0.0 && !duplicate {
                points.push(spec.flux_at(r));
            }
        }
        a = b;
        ga = gb;
    }
    // the upper edge is never the left end of an interval
    if ga == 0.0 && phasor(hi).re < 0.0 && points.last().is_none_or(|p| (p.f_eps - hi).abs() >= 1e-9) {
        points.push(spec.flux_at(hi));
    }
    Ok(points)
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut ga: f64) -> f64 {
    while b - a > ROOT_TOL {
        let m = 0.5 * (a + b);
        let gm = g(m);
        if gm == 0.0 {
            return m;
        }
        if ga * gm < 0.0 {
            b = m;
        } else {
            a = m;
            ga = gm;
        }
    }
    0.5 * (a + b)
}

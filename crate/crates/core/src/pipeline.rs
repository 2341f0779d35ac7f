//! Figure-level workflows built from the library pieces: flux sweeps,
//! symmetry-point tables, coupling tables, synthetic spectra and the
//! forward/inverse closure check.

use crate::circuit::{
    solve_at_symmetry, sweep_gap, symmetry_points, symmetry_residual, CircuitSpec, FluxPoint, SolverOptions,
};
use crate::fitting::{batch_fit, bose_einstein, widened_gamma1_bounds, BatchRow, FitOptions};
use crate::io::{ClosureRow, CouplingRow, DriveConfig, RunConfig, SweepRow, SymmetryRow};
use crate::parallel::Exec;
use crate::scattering::{generate_trace, NoiseSpec, RateSet, SpectrumTrace};
use crate::spinboson::{coupling_result, EnvironmentSpec, Regime, RenormalizationMode};
use crate::Result;

pub fn sweep_table(spec: &CircuitSpec, f_eps: &[f64], opts: &SolverOptions, exec: Exec) -> Result<Vec<SweepRow>> {
    Ok(sweep_gap(spec, f_eps, opts, exec)?.iter().map(SweepRow::from).collect())
}

pub fn symmetry_table(spec: &CircuitSpec, lo: f64, hi: f64) -> Result<Vec<SymmetryRow>> {
    let points = symmetry_points(spec, lo, hi)?;
    Ok(points
        .iter()
        .enumerate()
        .map(|(i, p)| SymmetryRow {
            index: i,
            f_eps: p.f_eps,
            f_beta: p.f_beta,
            spacing: (i > 0).then(|| p.f_eps - points[i - 1].f_eps),
            residual: symmetry_residual(spec, *p),
        })
        .collect())
}

/// `(max − min)/mean` of the symmetry-point spacings; `None` with fewer
/// than two spacings.
pub fn spacing_modulation(rows: &[SymmetryRow]) -> Option<f64> {
    let s: Vec<f64> = rows.iter().filter_map(|r| r.spacing).collect();
    if s.len() < 2 {
        return None;
    }
    let max = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = s.iter().copied().fold(f64::INFINITY, f64::min);
    let mean = s.iter().sum::<f64>() / s.len() as f64;
    Some((max - min) / mean)
}

/// Coupling quantities at the symmetry point of each `f_β`.
pub fn coupling_table(
    spec: &CircuitSpec,
    env: &EnvironmentSpec,
    mode: RenormalizationMode,
    f_beta: &[f64],
    opts: &SolverOptions,
    exec: Exec,
) -> Result<Vec<CouplingRow>> {
    exec.map(f_beta, |&fb| {
        let sol = solve_at_symmetry(spec, fb, opts)?;
        let c = coupling_result(sol.abs_phi_beta(), sol.gap0_ghz, env, mode)?;
        Ok(CouplingRow {
            f_beta: sol.flux.f_beta,
            f_eps: sol.flux.f_eps,
            delta0_ghz: sol.gap0_ghz,
            abs_phi_beta: sol.abs_phi_beta(),
            gamma1_over_delta: c.gamma1_over_delta,
            alpha_sb: c.alpha_sb,
            regime: c.regime,
            delta_ren_ghz: c.delta_ren_ghz,
            is_lower_bound: c.is_lower_bound,
            gamma1_ghz: c.gamma1_ghz(),
        })
    })
    .into_iter()
    .collect()
}

/// One synthetic spectrum to generate.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceJob {
    pub flux: Option<FluxPoint>,
    pub delta_ghz: f64,
    pub rates: RateSet,
}

/// Jobs for each coupling row: resonance at the renormalized (or bare) gap,
/// `Γ₁ = (Γ₁/Δ)·Δ`, thermal occupation from the drive temperature. Rows in
/// the localized regime have no resonance and are skipped.
pub fn trace_jobs_from_coupling(rows: &[CouplingRow], drive: &DriveConfig) -> Result<Vec<TraceJob>> {
    let mut jobs = Vec::new();
    for row in rows {
        let delta = if drive.renormalized_gap {
            match row.delta_ren_ghz {
                Some(d) => d,
                None => {
                    log::warn!("f_beta = {}: {} regime, no trace generated", row.f_beta, row.regime);
                    continue;
                }
            }
        } else {
            row.delta0_ghz
        };
        let n_th = bose_einstein(delta, drive.temperature_mk)?;
        jobs.push(TraceJob {
            flux: Some(FluxPoint::new(row.f_eps, row.f_beta)),
            delta_ghz: delta,
            rates: RateSet::new(row.gamma1_over_delta * delta, drive.gamma_phi_ghz, n_th),
        });
    }
    Ok(jobs)
}

/// Jobs for the qubits listed explicitly in the drive section.
pub fn trace_jobs_from_qubits(drive: &DriveConfig) -> Result<Vec<TraceJob>> {
    drive
        .qubits
        .iter()
        .map(|q| {
            let n_th = match q.n_th {
                Some(n) => n,
                None => bose_einstein(q.delta_ghz, drive.temperature_mk)?,
            };
            Ok(TraceJob {
                flux: None,
                delta_ghz: q.delta_ghz,
                rates: RateSet::new(q.gamma1_ghz, q.gamma_phi_ghz, n_th),
            })
        })
        .collect()
}

/// Trace `i` uses noise seed `seed + i`.
pub fn generate_traces(jobs: &[TraceJob], drive: &DriveConfig, seed: u64, exec: Exec) -> Result<Vec<SpectrumTrace>> {
    let indexed: Vec<(usize, &TraceJob)> = jobs.iter().enumerate().collect();
    exec.map(&indexed, |&(i, job)| {
        let grid = drive.grid_for(job.delta_ghz, job.rates.gamma2_ghz());
        let noise = (drive.noise_sigma > 0.0).then(|| NoiseSpec {
            sigma: drive.noise_sigma,
            seed: seed.wrapping_add(i as u64),
        });
        // grid points are already spread over the outer parallel map
        let mut trace = generate_trace(
            &job.rates,
            job.delta_ghz,
            &grid,
            drive.rabi_ghz,
            noise,
            Exec::Sequential,
        )?;
        trace.meta.flux = job.flux;
        Ok(trace)
    })
    .into_iter()
    .collect()
}

/// Whether each fitted `Γ₁` interval, widened by `n_sigma` standard errors
/// and a relative slack `rel_tol`, contains the generating rate.
pub fn closure_table(jobs: &[TraceJob], fits: &[BatchRow], rel_tol: f64, n_sigma: f64) -> Vec<ClosureRow> {
    jobs.iter()
        .zip(fits)
        .enumerate()
        .map(|(i, (job, row))| {
            let ci = row
                .fit
                .as_ref()
                .filter(|_| row.bounds.is_some())
                .map(|f| widened_gamma1_bounds(f, n_sigma));
            let g1 = job.rates.gamma1_ghz;
            ClosureRow {
                index: i,
                f_beta: job.flux.map(|f| f.f_beta),
                delta_ghz: job.delta_ghz,
                gamma1_ghz: g1,
                gamma1_low_ghz: row.bounds.map(|b| b.gamma1_low_ghz),
                gamma1_high_ghz: row.bounds.map(|b| b.gamma1_high_ghz),
                gamma1_low_ci_ghz: ci.map(|c| c.0),
                gamma1_high_ci_ghz: ci.map(|c| c.1),
                contained: ci.is_some_and(|(lo, hi)| g1 >= lo * (1.0 - rel_tol) && g1 <= hi * (1.0 + rel_tol)),
            }
        })
        .collect()
}

pub fn fit_options(cfg: &RunConfig) -> Result<FitOptions> {
    Ok(FitOptions {
        mask: cfg.fit.mask()?,
        min_depth: cfg.fit.min_depth,
        ..FitOptions::default()
    })
}

/// Everything `report` produces.
#[derive(Debug, Clone)]
pub struct Report {
    pub sweep: Vec<SweepRow>,
    pub symmetry: Vec<SymmetryRow>,
    pub spacing_modulation: Option<f64>,
    pub coupling: Vec<CouplingRow>,
    pub traces: Vec<SpectrumTrace>,
    pub fits: Vec<BatchRow>,
    pub closure: Vec<ClosureRow>,
}

impl Report {
    pub fn closure_holds(&self) -> bool {
        self.closure.iter().all(|c| c.contained)
    }
}

/// Spectra for the configured device (or the explicit qubit list).
pub fn spectra(cfg: &RunConfig, exec: Exec) -> Result<(Vec<CouplingRow>, Vec<TraceJob>, Vec<SpectrumTrace>)> {
    let (coupling, jobs) = if cfg.drive.qubits.is_empty() {
        let spec = cfg.device.resolve()?;
        let coupling = coupling_table(
            &spec,
            &cfg.environment.spec()?,
            cfg.environment.renormalization,
            &cfg.coupling.grid()?,
            &cfg.solver.options()?,
            exec,
        )?;
        let jobs = trace_jobs_from_coupling(&coupling, &cfg.drive)?;
        (coupling, jobs)
    } else {
        (Vec::new(), trace_jobs_from_qubits(&cfg.drive)?)
    };
    let traces = generate_traces(&jobs, &cfg.drive, cfg.seed, exec)?;
    Ok((coupling, jobs, traces))
}

/// Device → sweep → symmetry points → coupling → spectra → fits → bounds.
pub fn run_report(cfg: &RunConfig, exec: Exec) -> Result<Report> {
    let spec = cfg.device.resolve()?;
    let opts = cfg.solver.options()?;
    let sweep = sweep_table(&cfg.sweep.device(&spec)?, &cfg.sweep.grid()?, &opts, exec)?;
    let (lo, hi) = cfg.symmetry.window(&spec)?;
    let symmetry = symmetry_table(&spec, lo, hi)?;
    let (coupling, jobs, traces) = spectra(cfg, exec)?;
    let fits = batch_fit(&traces, &fit_options(cfg)?, exec);
    let closure = closure_table(&jobs, &fits, cfg.fit.closure_tol, cfg.fit.closure_sigma);
    for c in closure.iter().filter(|c| !c.contained) {
        log::warn!(
            "trace {}: fitted Γ₁ interval misses the generating rate {}",
            c.index,
            c.gamma1_ghz
        );
    }
    Ok(Report {
        spacing_modulation: spacing_modulation(&symmetry),
        sweep,
        symmetry,
        coupling,
        traces,
        fits,
        closure,
    })
}

/// Counts of coupling rows per regime, in regime order.
pub fn regime_counts(rows: &[CouplingRow]) -> [(Regime, usize); 3] {
    [Regime::Underdamped, Regime::Overdamped, Regime::Localized]
        .map(|r| (r, rows.iter().filter(|row| row.regime == r).count()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::QubitConfig;

    #[test]
    fn modulation_of_uniform_spacings_is_zero() {
        let rows: Vec<SymmetryRow> = (0..4)
            .map(|i| SymmetryRow {
                index: i,
                f_eps: i as f64,
                f_beta: 0.0,
                spacing: (i > 0).then_some(1.0),
                residual: 0.0,
            })
            .collect();
        assert_eq!(spacing_modulation(&rows), Some(0.0));
        assert_eq!(spacing_modulation(&rows[..2]), None);
    }

    #[test]
    fn fixed_device_symmetry_points_are_half_integers() {
        let rows = symmetry_table(&CircuitSpec::fixed(3.5), 0.0, 3.0).unwrap();
        let f: Vec<f64> = rows.iter().map(|r| r.f_eps).collect();
        assert_eq!(f.len(), 3);
        for (x, want) in f.iter().zip([0.5, 1.5, 2.5]) {
            assert!((x - want).abs() < 1e-9);
        }
        assert!(spacing_modulation(&rows).unwrap() < 1e-9);
    }

    #[test]
    fn explicit_qubits_close() {
        let mut cfg = RunConfig::default();
        cfg.drive.qubits = vec![
            QubitConfig {
                delta_ghz: 3.996,
                gamma1_ghz: 0.088,
                gamma_phi_ghz: 0.0023,
                n_th: None,
            },
            QubitConfig {
                delta_ghz: 2.9,
                gamma1_ghz: 2.61,
                gamma_phi_ghz: 1.026,
                n_th: Some(0.2373),
            },
        ];
        cfg.drive.temperature_mk = 50.0;
        let (coupling, jobs, traces) = spectra(&cfg, Exec::Parallel).unwrap();
        assert!(coupling.is_empty());
        assert_eq!(traces.len(), 2);
        let fits = batch_fit(&traces, &fit_options(&cfg).unwrap(), Exec::Parallel);
        let closure = closure_table(&jobs, &fits, 1e-6, 0.0);
        assert!(closure.iter().all(|c| c.contained), "{closure:?}");
    }
}

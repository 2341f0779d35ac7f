//! Forward model against its independent oracles and the inverse pipeline.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use fluxqed::circuit::{sweep_gap, CircuitSpec, SolverOptions};
use fluxqed::fitting::{batch_fit, bose_einstein, derive_bounds, fit_trace, FitOptions};
use fluxqed::io::SweepRow;
use fluxqed::scattering::{
    generate_trace, linear_grid, reflection, relax_to_steady_state, steady_state, DriveSpec, NoiseSpec, RateSet,
};
use fluxqed::spinboson::{coupling_result, renormalize_gap, EnvironmentSpec, RenormalizationMode};
use fluxqed::{Complex64, Exec};

#[test]
fn steady_state_matches_rk4_over_random_sample() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for _ in 0..40 {
        let rates = RateSet::new(
            rng.random_range(0.05..1.0),
            rng.random_range(0.0..0.5),
            rng.random_range(0.0..1.0),
        );
        let drive = DriveSpec::new(5.0 + rng.random_range(-1.0..1.0), rng.random_range(0.0..1.0), 5.0);
        let exact = steady_state(&rates, &drive).unwrap();
        let ode = relax_to_steady_state(&rates, &drive).unwrap();
        assert!((exact.rho_ge - ode.rho_ge).norm() < 1e-6);
        assert!((exact.rho_ee - ode.rho_ee).abs() < 1e-6);
        assert!((ode.rho_ee + ode.rho_gg - 1.0).abs() < 1e-9);
        if drive.rabi_ghz > 0.0 {
            let via_rho = Complex64::new(0.0, -rates.gamma1_ghz / drive.rabi_ghz) * exact.rho_eg;
            let r = reflection(&rates, &drive);
            assert!((via_rho - r).norm() <= 1e-12 * r.norm().max(1e-300));
        }
    }
}

#[test]
fn thermal_family_round_trip() {
    // Fourteen qubits from 7 GHz down to 2.5 GHz at 90 mK, Γ₁/Δ rising.
    let deltas = linear_grid(7.0, 2.5, 14);
    let traces: Vec<_> = deltas
        .iter()
        .enumerate()
        .map(|(i, &d)| {
            let n = bose_einstein(d, 90.0).unwrap();
            let rates = RateSet::new(d * (0.3 + 0.08 * i as f64), 0.02, n);
            let grid = linear_grid(
                (d - 8.0 * rates.gamma2_ghz()).max(0.05),
                d + 8.0 * rates.gamma2_ghz(),
                301,
            );
            (
                rates,
                generate_trace(&rates, d, &grid, 0.0, None, Exec::Sequential).unwrap(),
            )
        })
        .collect();
    let only: Vec<_> = traces.iter().map(|(_, t)| t.clone()).collect();
    let rows = batch_fit(&only, &FitOptions::default(), Exec::Parallel);
    assert_eq!(rows.len(), 14);
    for ((rates, _), row) in traces.iter().zip(&rows) {
        let fit = row.fit.expect("fit");
        assert!((fit.r0 / rates.r0() - 1.0).abs() < 1e-3);
        assert!((fit.gamma2_ghz / rates.gamma2_ghz() - 1.0).abs() < 1e-3);
        let b = row.bounds.unwrap();
        assert!(b.contains_gamma1(rates.gamma1_ghz, 1e-6));
        assert!(b.n_max >= rates.n_th - 1e-9);
        assert!(b.t_eff_mk >= 90.0 * (1.0 - 1e-6));
    }
}

#[test]
fn renormalized_gap_decreases_with_coupling() {
    let env = EnvironmentSpec {
        p_const: 4.8,
        ..EnvironmentSpec::default()
    };
    let mut last = f64::INFINITY;
    for i in 0..100 {
        let alpha = i as f64 / 100.0;
        let d = renormalize_gap(5.0, alpha, &env).unwrap();
        assert!(d < last);
        last = d;
    }
}

#[test]
fn coupling_modes_agree_for_weak_coupling() {
    let env = EnvironmentSpec::default();
    let a = coupling_result(0.02, 5.0, &env, RenormalizationMode::SinglePass).unwrap();
    let b = coupling_result(0.02, 5.0, &env, RenormalizationMode::SelfConsistent).unwrap();
    let (da, db) = (a.delta_ren_ghz.unwrap(), b.delta_ren_ghz.unwrap());
    assert!((da - db).abs() / da < 1e-3);
}

#[test]
fn noisy_fit_of_generated_trace() {
    let rates = RateSet::new(1.0, 0.1, 0.05);
    let grid = linear_grid(2.0, 8.0, 301);
    let noise = Some(fluxqed::scattering::NoiseSpec { sigma: 0.005, seed: 99 });
    let trace = generate_trace(&rates, 5.0, &grid, 0.0, noise, Exec::Parallel).unwrap();
    let fit = fit_trace(&trace, &FitOptions::default()).unwrap();
    let b = derive_bounds(&fit).unwrap();
    assert!((fit.delta_ghz - 5.0).abs() < 5.0 * fit.delta_err);
    assert!(b.gamma1_low_ghz < b.gamma1_high_ghz);
}

#[test]
fn parallel_and_sequential_agree() {
    let spec = CircuitSpec::tunable().with_n_trunc(4);
    let grid = linear_grid(0.47, 0.53, 4);
    let sweep = |exec| -> Vec<SweepRow> {
        sweep_gap(&spec, &grid, &SolverOptions::default(), exec)
            .unwrap()
            .iter()
            .map(SweepRow::from)
            .collect()
    };
    assert_eq!(sweep(Exec::Sequential), sweep(Exec::Parallel));

    let rates = RateSet::new(0.5, 0.05, 0.1);
    let freqs = linear_grid(3.0, 7.0, 2001);
    let noise = Some(NoiseSpec { sigma: 0.01, seed: 3 });
    let seq = generate_trace(&rates, 5.0, &freqs, 0.0, noise, Exec::Sequential).unwrap();
    let par = generate_trace(&rates, 5.0, &freqs, 0.0, noise, Exec::Parallel).unwrap();
    assert_eq!(seq, par);

    let traces = vec![seq.clone(); 6];
    let fits = |exec| serde_json::to_string(&batch_fit(&traces, &FitOptions::default(), exec)).unwrap();
    assert_eq!(fits(Exec::Sequential), fits(Exec::Parallel));
}

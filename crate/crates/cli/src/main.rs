//! Command-line front end for the `fluxqed` library.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::json;

use fluxqed::circuit::solve;
use fluxqed::fitting::batch_fit;
use fluxqed::io::{read_trace, write_json, write_table, write_trace, FitRow, Manifest, RunConfig, SweepRow};
use fluxqed::parallel::configure_threads;
use fluxqed::pipeline::{
    coupling_table, fit_options, regime_counts, run_report, spacing_modulation, spectra, sweep_table, symmetry_table,
};
use fluxqed::scattering::SpectrumTrace;
use fluxqed::Exec;

#[derive(Debug, Parser)]
#[command(
    name = "fluxqed",
    version,
    about = "Flux qubit ultrastrong-coupling simulation and spectroscopy fits"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Noise seed (overrides `seed`).
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,
    /// Fit window in GHz, e.g. `3,11` (overrides `fit.mask`).
    #[arg(long, global = true, value_name = "LO,HI", value_parser = parse_mask)]
    mask: Option<(f64, f64)>,
    /// Device preset (overrides `device.preset`).
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,
    /// Worker threads for parallel stages.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Spectrum and coupling operator at one flux point.
    Solve,
    /// Gap and coupling along a main-loop flux sweep with slaved SQUID flux.
    Sweep,
    /// Symmetry points over a flux window and their spacing modulation.
    Symmetry,
    /// Γ₁/Δ, α, regime and renormalized gap against the SQUID flux.
    Coupling,
    /// Synthetic transmission traces.
    Spectrum,
    /// Fit transmission traces and derive thermal bounds.
    Fit {
        /// Trace CSV files (`freq_ghz,re_t,im_t`), each with an optional JSON sidecar.
        #[arg(required = true)]
        traces: Vec<PathBuf>,
    },
    /// Full chain from device to fitted bounds, with a closure check.
    Report,
}

fn parse_mask(s: &str) -> std::result::Result<(f64, f64), String> {
    let (lo, hi) = s.split_once(',').ok_or("expected LO,HI")?;
    let lo: f64 = lo.trim().parse().map_err(|e| format!("bad LO: {e}"))?;
    let hi: f64 = hi.trim().parse().map_err(|e| format!("bad HI: {e}"))?;
    if lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Less) {
        return Err(format!("need LO < HI, got {lo},{hi}"));
    }
    Ok((lo, hi))
}

fn load_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut cfg = match &g.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    if let Some(p) = &g.preset {
        cfg.device.preset = Some(p.clone());
    }
    if let Some(s) = g.seed {
        cfg.seed = s;
    }
    if let Some(o) = &g.out {
        cfg.output_dir = o.clone();
    }
    if let Some((lo, hi)) = g.mask {
        cfg.fit.mask = Some([lo, hi]);
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Collects written files for the manifest.
struct Output {
    dir: PathBuf,
    files: Vec<String>,
}

impl Output {
    fn new(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create output directory {}", dir.display()))?;
        Ok(Output {
            dir: dir.to_path_buf(),
            files: Vec::new(),
        })
    }

    fn path(&mut self, name: &str) -> PathBuf {
        self.files.push(name.to_string());
        self.dir.join(name)
    }

    fn traces(&mut self, traces: &[SpectrumTrace]) -> Result<()> {
        std::fs::create_dir_all(self.dir.join("traces"))?;
        for (i, tr) in traces.iter().enumerate() {
            let name = format!("traces/trace_{i:03}.csv");
            write_trace(&self.path(&name), tr)?;
            self.files.push(format!("traces/trace_{i:03}.json"));
        }
        Ok(())
    }

    fn finish(mut self, command: &str, cfg: &RunConfig) -> Result<()> {
        let manifest = Manifest::new(command, cfg.hash(), cfg.seed, std::mem::take(&mut self.files));
        write_json(&self.dir.join("manifest.json"), &manifest)?;
        Ok(())
    }
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.global.threads {
        if n == 0 {
            bail!("--threads must be at least 1");
        }
        if !configure_threads(n) {
            log::warn!("thread count not applied (pool already initialized or built without `parallel`)");
        }
    }
    let cfg = load_config(&cli.global)?;
    let exec = Exec::default();
    let mut out = Output::new(&cfg.output_dir)?;
    let spec = cfg.device.resolve()?;
    let opts = cfg.solver.options()?;

    let name = match &cli.command {
        Command::Solve => {
            let flux = cfg.point.resolve(&spec)?;
            let sol = solve(&spec, flux, &opts).context("solve failed")?;
            let report = json!({
                "flux": sol.flux,
                "energies_ghz": sol.energies_ghz,
                "gap0_ghz": sol.gap0_ghz,
                "abs_phi_beta": sol.abs_phi_beta(),
                "pauli": sol.pauli,
                "residuals": sol.residuals,
            });
            write_json(&out.path("solve.json"), &report)?;
            write_table(&out.path("solve.csv"), &[SweepRow::from(&sol)])?;
            println!("{}", serde_json::to_string_pretty(&report)?);
            "solve"
        }
        Command::Sweep => {
            let rows =
                sweep_table(&cfg.sweep.device(&spec)?, &cfg.sweep.grid()?, &opts, exec).context("sweep failed")?;
            write_table(&out.path("sweep.csv"), &rows)?;
            "sweep"
        }
        Command::Symmetry => {
            let (lo, hi) = cfg.symmetry.window(&spec)?;
            let rows = symmetry_table(&spec, lo, hi)?;
            write_table(&out.path("symmetry.csv"), &rows)?;
            let summary = json!({
                "window": [lo, hi],
                "points": rows.len(),
                "spacing_modulation": spacing_modulation(&rows),
            });
            write_json(&out.path("symmetry.json"), &summary)?;
            "symmetry"
        }
        Command::Coupling => {
            let rows = coupling_table(
                &spec,
                &cfg.environment.spec()?,
                cfg.environment.renormalization,
                &cfg.coupling.grid()?,
                &opts,
                exec,
            )
            .context("coupling table failed")?;
            write_table(&out.path("coupling.csv"), &rows)?;
            "coupling"
        }
        Command::Spectrum => {
            let (coupling, _, traces) = spectra(&cfg, exec).context("spectrum generation failed")?;
            if !coupling.is_empty() {
                write_table(&out.path("coupling.csv"), &coupling)?;
            }
            out.traces(&traces)?;
            "spectrum"
        }
        Command::Fit { traces } => {
            let inputs = traces
                .iter()
                .map(|p| read_trace(p).with_context(|| format!("reading {}", p.display())))
                .collect::<Result<Vec<_>>>()?;
            let rows = batch_fit(&inputs, &fit_options(&cfg)?, exec);
            let table: Vec<FitRow> = rows.iter().map(FitRow::from).collect();
            write_table(&out.path("fits.csv"), &table)?;
            for (p, r) in traces.iter().zip(&rows) {
                if let Some(e) = &r.error {
                    log::warn!("{}: {e}", p.display());
                }
            }
            "fit"
        }
        Command::Report => {
            let report = run_report(&cfg, exec).context("report pipeline failed")?;
            write_table(&out.path("sweep.csv"), &report.sweep)?;
            write_table(&out.path("symmetry.csv"), &report.symmetry)?;
            write_table(&out.path("coupling.csv"), &report.coupling)?;
            out.traces(&report.traces)?;
            let fits: Vec<FitRow> = report.fits.iter().map(FitRow::from).collect();
            write_table(&out.path("fits.csv"), &fits)?;
            write_table(&out.path("closure.csv"), &report.closure)?;
            let counts: serde_json::Map<String, serde_json::Value> = regime_counts(&report.coupling)
                .iter()
                .map(|(r, n)| (r.to_string(), json!(n)))
                .collect();
            let summary = json!({
                "spacing_modulation": report.spacing_modulation,
                "regimes": counts,
                "traces": report.traces.len(),
                "closure_holds": report.closure_holds(),
            });
            write_json(&out.path("summary.json"), &summary)?;
            out.finish("report", &cfg)?;
            if !report.closure_holds() {
                return Err(ClosureFailed.into());
            }
            return Ok(());
        }
    };
    out.finish(name, &cfg)
}

#[derive(Debug)]
struct ClosureFailed;

impl std::fmt::Display for ClosureFailed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("a fitted Γ₁ interval does not contain the generating rate (see closure.csv)")
    }
}

impl std::error::Error for ClosureFailed {}

fn error_kind(err: &anyhow::Error) -> &'static str {
    if err.downcast_ref::<ClosureFailed>().is_some() {
        return "closure_failed";
    }
    err.chain()
        .find_map(|e| e.downcast_ref::<fluxqed::Error>())
        .map_or("cli", |e| e.kind())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .target(env_logger::Target::Stderr)
        .init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            let report = json!({
                "kind": error_kind(&err),
                "error": format!("{err:#}"),
            });
            eprintln!("{report}");
            ExitCode::FAILURE
        }
    }
}

//! CSV row types and readers/writers.

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::circuit::QubitSolution;
use crate::fitting::BatchRow;
use crate::scattering::{SpectrumTrace, TraceMeta};
use crate::spinboson::Regime;
use crate::{Error, Result};

/// A CSV row type with a fixed column order.
pub trait Table: Serialize {
    const COLUMNS: &'static [&'static str];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub f_eps: f64,
    pub f_beta: f64,
    #[serde(rename = "E0_ghz")]
    pub e0_ghz: f64,
    #[serde(rename = "E1_ghz")]
    pub e1_ghz: f64,
    #[serde(rename = "E2_ghz")]
    pub e2_ghz: Option<f64>,
    pub gap0_ghz: f64,
    pub abs_phi_beta: f64,
    pub pauli_x: f64,
    pub pauli_y: f64,
    pub pauli_z: f64,
}

impl Table for SweepRow {
    const COLUMNS: &'static [&'static str] = &[
        "f_eps",
        "f_beta",
        "E0_ghz",
        "E1_ghz",
        "E2_ghz",
        "gap0_ghz",
        "abs_phi_beta",
        "pauli_x",
        "pauli_y",
        "pauli_z",
    ];
}

impl From<&QubitSolution> for SweepRow {
    fn from(s: &QubitSolution) -> Self {
        SweepRow {
            f_eps: s.flux.f_eps,
            f_beta: s.flux.f_beta,
            e0_ghz: s.energies_ghz[0],
            e1_ghz: s.energies_ghz[1],
            e2_ghz: s.energies_ghz.get(2).copied(),
            gap0_ghz: s.gap0_ghz,
            abs_phi_beta: s.abs_phi_beta(),
            pauli_x: s.pauli.x,
            pauli_y: s.pauli.y,
            pauli_z: s.pauli.z,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetryRow {
    pub index: usize,
    pub f_eps: f64,
    pub f_beta: f64,
    /// Distance in `f_eps` to the previous symmetry point.
    pub spacing: Option<f64>,
    pub residual: f64,
}

impl Table for SymmetryRow {
    const COLUMNS: &'static [&'static str] = &["index", "f_eps", "f_beta", "spacing", "residual"];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingRow {
    pub f_beta: f64,
    pub f_eps: f64,
    pub delta0_ghz: f64,
    pub abs_phi_beta: f64,
    pub gamma1_over_delta: f64,
    pub alpha_sb: f64,
    pub regime: Regime,
    pub delta_ren_ghz: Option<f64>,
    pub is_lower_bound: bool,
    pub gamma1_ghz: Option<f64>,
}

impl Table for CouplingRow {
    const COLUMNS: &'static [&'static str] = &[
        "f_beta",
        "f_eps",
        "delta0_ghz",
        "abs_phi_beta",
        "gamma1_over_delta",
        "alpha_sb",
        "regime",
        "delta_ren_ghz",
        "is_lower_bound",
        "gamma1_ghz",
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub freq_ghz: f64,
    pub re_t: f64,
    pub im_t: f64,
    pub abs_t: f64,
    pub arg_t: f64,
}

impl Table for TraceRow {
    const COLUMNS: &'static [&'static str] = &["freq_ghz", "re_t", "im_t", "abs_t", "arg_t"];
}

#[derive(Debug, Deserialize)]
struct TraceInputRow {
    freq_ghz: f64,
    re_t: f64,
    im_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitRow {
    pub flux_f_eps: Option<f64>,
    pub flux_f_beta: Option<f64>,
    pub r0: Option<f64>,
    pub r0_err: Option<f64>,
    pub gamma2_ghz: Option<f64>,
    pub gamma2_err: Option<f64>,
    pub delta_ghz: Option<f64>,
    pub delta_err: Option<f64>,
    pub n_max: Option<f64>,
    pub t_eff_mk: Option<f64>,
    pub gamma1_low_ghz: Option<f64>,
    pub gamma1_high_ghz: Option<f64>,
    /// `;`-separated.
    pub flags: String,
}

impl Table for FitRow {
    const COLUMNS: &'static [&'static str] = &[
        "flux_f_eps",
        "flux_f_beta",
        "r0",
        "r0_err",
        "gamma2_ghz",
        "gamma2_err",
        "delta_ghz",
        "delta_err",
        "n_max",
        "t_eff_mk",
        "gamma1_low_ghz",
        "gamma1_high_ghz",
        "flags",
    ];
}

impl From<&BatchRow> for FitRow {
    fn from(row: &BatchRow) -> Self {
        let fit = row.fit.as_ref();
        let b = row.bounds.as_ref();
        FitRow {
            flux_f_eps: row.flux.map(|f| f.f_eps),
            flux_f_beta: row.flux.map(|f| f.f_beta),
            r0: fit.map(|f| f.r0),
            r0_err: fit.map(|f| f.r0_err),
            gamma2_ghz: fit.map(|f| f.gamma2_ghz),
            gamma2_err: fit.map(|f| f.gamma2_err),
            delta_ghz: fit.map(|f| f.delta_ghz),
            delta_err: fit.map(|f| f.delta_err),
            n_max: b.map(|b| b.n_max),
            t_eff_mk: b.map(|b| b.t_eff_mk),
            gamma1_low_ghz: b.map(|b| b.gamma1_low_ghz),
            gamma1_high_ghz: b.map(|b| b.gamma1_high_ghz),
            flags: row.flags.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(";"),
        }
    }
}

/// Forward/inverse comparison for one generated trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClosureRow {
    pub index: usize,
    pub f_beta: Option<f64>,
    pub delta_ghz: f64,
    pub gamma1_ghz: f64,
    pub gamma1_low_ghz: Option<f64>,
    pub gamma1_high_ghz: Option<f64>,
    pub gamma1_low_ci_ghz: Option<f64>,
    pub gamma1_high_ci_ghz: Option<f64>,
    pub contained: bool,
}

impl Table for ClosureRow {
    const COLUMNS: &'static [&'static str] = &[
        "index",
        "f_beta",
        "delta_ghz",
        "gamma1_ghz",
        "gamma1_low_ghz",
        "gamma1_high_ghz",
        "gamma1_low_ci_ghz",
        "gamma1_high_ci_ghz",
        "contained",
    ];
}

pub fn to_csv_string<T: Table>(rows: &[T]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(T::COLUMNS)?;
    for row in rows {
        w.serialize(row)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Csv(e.into_error().into()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn write_table<T: Table>(path: &Path, rows: &[T]) -> Result<()> {
    std::fs::write(path, to_csv_string(rows)?).map_err(|e| Error::io(path, e))
}

pub fn read_table<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    csv::Reader::from_reader(file)
        .deserialize()
        .collect::<std::result::Result<Vec<T>, _>>()
        .map_err(Error::from)
}

pub fn trace_rows(trace: &SpectrumTrace) -> Vec<TraceRow> {
    trace
        .freq_ghz
        .iter()
        .zip(&trace.t)
        .map(|(&f, t)| TraceRow {
            freq_ghz: f,
            re_t: t.re,
            im_t: t.im,
            abs_t: t.norm(),
            arg_t: t.arg(),
        })
        .collect()
}

/// Sidecar metadata path: the trace path with a `.json` extension.
pub fn sidecar_path(trace_csv: &Path) -> PathBuf {
    trace_csv.with_extension("json")
}

/// Writes the trace CSV and its JSON sidecar.
pub fn write_trace(path: &Path, trace: &SpectrumTrace) -> Result<()> {
    write_table(path, &trace_rows(trace))?;
    write_json(&sidecar_path(path), &trace.meta)
}

/// Reads a trace CSV (`freq_ghz, re_t, im_t`, extra columns ignored) and its
/// sidecar if present.
pub fn read_trace(path: &Path) -> Result<SpectrumTrace> {
    let rows: Vec<TraceInputRow> = read_table(path)?;
    let side = sidecar_path(path);
    let meta: TraceMeta = if side.exists() {
        let text = std::fs::read_to_string(&side).map_err(|e| Error::io(&side, e))?;
        serde_json::from_str(&text)?
    } else {
        TraceMeta::default()
    };
    Ok(SpectrumTrace {
        freq_ghz: rows.iter().map(|r| r.freq_ghz).collect(),
        t: rows.iter().map(|r| C64::new(r.re_t, r.im_t)).collect(),
        meta,
    })
}

pub fn write_json<T: Serialize + ?Sized>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

/// Provenance record written next to every command's output.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config_sha256: String,
    pub seed: u64,
    pub files: Vec<String>,
}

impl Manifest {
    pub fn new(command: &str, config_sha256: String, seed: u64, files: Vec<String>) -> Self {
        Manifest {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config_sha256,
            seed,
            files,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::FluxPoint;
    use crate::scattering::{generate_trace, linear_grid, NoiseSpec, RateSet};
    use crate::Exec;

    fn header_of<T: Table>(row: &T) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.serialize(row).unwrap();
        let text = String::from_utf8(w.into_inner().unwrap()).unwrap();
        text.lines().next().unwrap().to_string()
    }

    #[test]
    fn columns_match_serde_names() {
        let sweep = SweepRow {
            f_eps: 0.5,
            f_beta: 0.0,
            e0_ghz: 0.0,
            e1_ghz: 1.0,
            e2_ghz: None,
            gap0_ghz: 1.0,
            abs_phi_beta: 0.1,
            pauli_x: 0.1,
            pauli_y: 0.0,
            pauli_z: 0.0,
        };
        assert_eq!(header_of(&sweep), SweepRow::COLUMNS.join(","));
        let coupling = CouplingRow {
            f_beta: 0.0,
            f_eps: 0.5,
            delta0_ghz: 5.0,
            abs_phi_beta: 0.1,
            gamma1_over_delta: 0.2,
            alpha_sb: 0.06,
            regime: Regime::Underdamped,
            delta_ren_ghz: Some(4.0),
            is_lower_bound: false,
            gamma1_ghz: Some(0.8),
        };
        assert_eq!(header_of(&coupling), CouplingRow::COLUMNS.join(","));
        let fit = FitRow {
            flux_f_eps: None,
            flux_f_beta: None,
            r0: None,
            r0_err: None,
            gamma2_ghz: None,
            gamma2_err: None,
            delta_ghz: None,
            delta_err: None,
            n_max: None,
            t_eff_mk: None,
            gamma1_low_ghz: None,
            gamma1_high_ghz: None,
            flags: String::new(),
        };
        assert_eq!(header_of(&fit), FitRow::COLUMNS.join(","));
        let sym = SymmetryRow {
            index: 0,
            f_eps: 0.5,
            f_beta: 0.0,
            spacing: None,
            residual: 0.0,
        };
        assert_eq!(header_of(&sym), SymmetryRow::COLUMNS.join(","));
        let closure = ClosureRow {
            index: 0,
            f_beta: None,
            delta_ghz: 1.0,
            gamma1_ghz: 1.0,
            gamma1_low_ghz: None,
            gamma1_high_ghz: None,
            gamma1_low_ci_ghz: None,
            gamma1_high_ci_ghz: None,
            contained: false,
        };
        assert_eq!(header_of(&closure), ClosureRow::COLUMNS.join(","));
    }

    #[test]
    fn empty_table_has_header() {
        assert_eq!(to_csv_string::<FitRow>(&[]).unwrap(), FitRow::COLUMNS.join(",") + "\n");
    }

    #[test]
    fn trace_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.csv");
        let mut trace = generate_trace(
            &RateSet::new(0.4, 0.02, 0.1),
            5.0,
            &linear_grid(4.0, 6.0, 51),
            0.0,
            Some(NoiseSpec { sigma: 0.01, seed: 3 }),
            Exec::Sequential,
        )
        .unwrap();
        trace.meta.flux = Some(FluxPoint::new(0.5, 0.1));
        trace.meta.mask = Some((4.2, 5.8));
        write_trace(&path, &trace).unwrap();
        let back = read_trace(&path).unwrap();
        assert_eq!(back, trace);
    }

    #[test]
    fn trace_without_sidecar() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        std::fs::write(&path, "freq_ghz,re_t,im_t\n1.0,0.5,-0.25\n2.0,1,0\n").unwrap();
        let tr = read_trace(&path).unwrap();
        assert_eq!(tr.freq_ghz, vec![1.0, 2.0]);
        assert_eq!(tr.t[0], C64::new(0.5, -0.25));
        assert_eq!(tr.meta, TraceMeta::default());
    }

    #[test]
    fn missing_file_reports_path() {
        let e = read_trace(Path::new("/nonexistent/trace.csv")).unwrap_err();
        assert!(e.to_string().contains("/nonexistent/trace.csv"));
    }
}

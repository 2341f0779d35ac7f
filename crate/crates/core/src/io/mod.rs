//! Configuration files and CSV/JSON exports.

mod config;
mod tables;

pub use config::{
    CouplingConfig, DeviceConfig, DriveConfig, EnvironmentConfig, FitConfig, PointConfig, QubitConfig, RunConfig,
    SolverConfig, SweepConfig, SymmetryConfig,
};
pub use tables::{
    read_table, read_trace, sidecar_path, to_csv_string, trace_rows, write_json, write_table, write_trace, ClosureRow,
    CouplingRow, FitRow, Manifest, SweepRow, SymmetryRow, Table, TraceRow,
};

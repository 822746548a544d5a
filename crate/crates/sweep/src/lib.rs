//! Parameter sweeps over detector configurations.
//!
//! A [`SweepSpec`] names the trajectory families and the grids of
//! acceleration a·σ, gap Ω·σ and separation L/σ; [`run_sweep`] evaluates
//! every grid point concurrently and returns (and optionally writes) one
//! [`ResultRow`] per point in canonical order. Results are in units of λ²,
//! in which every matrix element and both correlation measures are
//! independent of the coupling.
//!
//! The [`verify`] module holds the oracle and identity suites run by the
//! `harvest verify` command.

pub mod engine;
pub mod error;
pub mod grid;
pub mod spec;
pub mod table;
pub mod verify;

pub use engine::{evaluate, evaluate_point, run_sweep};
pub use error::SweepError;
pub use grid::Grid;
pub use spec::{GridPoint, SweepSpec, DEFAULT_COUPLING, WORKERS_ENV};
pub use table::{read_csv, read_csv_str, Metadata, ResultRow, RowFailure, SweepTable, HEADER};

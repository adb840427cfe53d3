//! Execution layer around `hsf-core`: timed engine runs with timeouts and
//! worker parallelism, JSON reports, circuit/amplitude/manifest file
//! formats, and the benchmark harness behind the `hsf-sim` binary.

pub mod bench;
pub mod engines;
pub mod io;
pub mod report;

pub use engines::{run_engines, EngineKind, EngineOptions, EngineRun, SimulationResult};
pub use report::RunReport;

//! Library side of the experiment CLI: manifests, trial runners, the
//! lemma-verification suites, calibration sweeps, and query-complexity
//! profiling. The binary in `main.rs` is a thin argument layer over this.

pub mod experiments;
pub mod manifest;

pub use manifest::ExperimentManifest;

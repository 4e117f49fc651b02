//! Experiment orchestration: configuration, code preparation, FER
//! sweeps with early stopping, and CSV output.

mod config;
mod output;
mod run;

pub use config::{InterleaverMode, SimConfig};
pub use output::{emit_results, read_results, ResultRow};
pub use run::{
    code_from_histogram, design_code, frozen_set_files, frozen_set_paths, load_code,
    load_sim_codebook, monotonicity_flags, prepare_code, run_fer_experiment, simulate_frame,
    simulate_point, write_code, FerPoint, FrameOutcome, MonotonicityFlag,
};

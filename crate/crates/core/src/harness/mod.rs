//! Monte Carlo experiments: single trials, phase-diagram sweeps, the
//! spectral scaling experiment, and their file outputs.

mod output;
mod spectral;
mod sweep;
mod trial;

pub use output::{strip_timestamp, sweep_svg, write_sweep_csv, write_trials_csv, TIMESTAMP_PREFIX};
pub use spectral::{
    median_ratios, spectral_scaling_experiment, write_spectral_csv, PRule, SpectralRow,
};
pub use sweep::{
    crossing_half, is_audited, sweep_phase_diagram, theory_boundary, wilson_interval,
    BoundaryPoint, PointResult, SweepConfig, SweepResult,
};
pub use trial::{
    problem_kind, run_trial, run_trial_with, theory_margin, Method, TrialConfig, TrialRecord,
};

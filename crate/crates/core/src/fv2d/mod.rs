//! Finite-volume simulator on the strip ℝ × (ℝ/2πℤ).

pub mod config;
pub mod dump;
pub mod flux;
pub mod grid;
pub mod init;
pub mod simulate;
pub mod step;

pub use config::{Limiter, PerturbationKind, RunConfig, Support};
pub use grid::Grid2D;
pub use simulate::{run_grid, simulate, simulate_with, triple_schedule, RunRecord, SimOptions};
pub use step::{step, step_dt, StepInfo, StepParams};

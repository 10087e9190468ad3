//! Geometric identities, PDE residuals and energy functionals evaluated on grids.
//!
//! Every identity is taken in the planar frame T̂ = (−1, 0), X̂ = (0, 1). All
//! statistics skip cells within [`fields::MASK_DILATION`] cells of a density or
//! velocity jump and the [`fields::EDGE_CELLS`] columns at each x₁ edge.

pub mod energy;
pub mod fan;
pub mod fields;
pub mod metric;
pub mod report;
pub mod residual;

pub use energy::{log_log_slope, mathring_energies, EnergyReport, FluxSeries, WaveEnergy};
pub use fan::{fan_profile_check, fan_slope, mathring_quantities, MathringQuantities};
pub use fields::{analytic_grid, analytic_triple, discontinuity_mask, grid_from_fn, Level, Mesh, Region, SnapshotTriple};
pub use metric::{AcousticMetric, PlanarFrame};
pub use report::{DiagnosticsReport, Stat};
pub use residual::{
    box_g, sup_vorticity, transport_residual_omega, vorticity_frame_identity, wave_transport_fields,
    wave_transport_residual,
};

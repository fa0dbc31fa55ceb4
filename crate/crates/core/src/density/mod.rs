//! Monte Carlo density of cylinder families inside balls.

mod clearance;
mod congruence;
mod estimate;
mod index;
mod oracle;
mod series;

pub use clearance::{axis_clearance, Clearance, ClearanceProfile};
pub use congruence::{
    congruence_check, cylinder_ball_volume, CongruenceReport, CylinderComparison, TiltParam, VolumeEstimate,
    AGGREGATE_SIGMAS, PER_CYLINDER_SIGMAS,
};
pub use estimate::{
    ball_volume, covered_volume, covered_volume_with_multiplicity, local_density, write_estimates_csv,
    DensityEstimate, MIN_SAMPLES,
};
pub use oracle::{perpendicular_density_oracle, vertical_cylinder_volume};
pub use series::{family_seed, global_density_series, DensitySeries, SeriesRow, MIN_SERIES_R};

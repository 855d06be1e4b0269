//! Parameter sweeps over the Monte Carlo estimator and noise-free
//! optimization of the filter schedule.

mod grid;
mod optimize;

pub use grid::{grid_sweep, grid_sweep_with, optimize_epsilon, Cell, CellResult, Family, SweepReport, SweepRow, SweepSpec};
pub use optimize::{fit_quadratic_optimum, optimize_schedule, EpsilonFit, ScheduleOptimum};

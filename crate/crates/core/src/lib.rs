//! Coulomb-coupled double quantum dot: a detector dot and a system dot, each
//! holding at most one electron, exchanging electrons with thermal
//! reservoirs.
//!
//! The crate builds the four-state bipartite rate generator, solves for its
//! stationary distribution, and measures integrated information as the
//! Kullback–Leibler divergence between the interacting steady state and the
//! steady state of the same device with the Coulomb coupling removed.
//! A seeded kinetic Monte Carlo sampler provides an independent estimate of
//! the stationary distribution.
//!
//! ```
//! use dqd_core::{figure_preset, run_sweep, Figure};
//!
//! let family = figure_preset(Figure::Fig3b);
//! let records = run_sweep(&family[0].spec).unwrap();
//! let last = records.last().unwrap();
//! assert!((last.phi - 4f64.ln()).abs() < 0.02);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod error;
pub mod generator;
pub mod info;
pub mod oracle;
pub mod params;
pub mod solver;
pub mod sweep;

pub use error::{Error, Result};
pub use generator::{build_generator, jump_channels, Channel, Generator, Jump};
pub use info::{
    disconnected_distribution, kl_divergence, phi_mi, phi_mi_against, shannon_entropy,
    standard_mutual_information, Divergence, PhiResult,
};
pub use oracle::{sample_steady, TrajectoryStats};
pub use params::{
    detector_fill_fraction, fermi, system_fill_fraction, DotState, Param, Reservoir, SystemParams,
};
pub use solver::{evolve, steady_state, StateDistribution};
pub use sweep::{
    emit_csv, figure_preset, run_sweep, Binding, Disconnection, Figure, PresetMember, SweepRecord,
    SweepSpec,
};

//! Resource leveling with a discrete Hopfield network as the state generator
//! inside simulated annealing.
//!
//! Schedules are binary job-by-day matrices ([`ScheduleMatrix`]). Their
//! quality is a penalty energy made of a load-smoothing term and three
//! constraint terms (duration, non-interrupt, precedence). The network's
//! weights and biases come from the first three terms; the precedence term
//! only enters the Metropolis acceptance test.
//!
//! ```
//! use hopfield_leveling::{Job, PenaltyParams, ProjectInstance, SolverConfig};
//!
//! let instance = ProjectInstance::with_precedence(
//!     vec![Job::new("A", 2, 1), Job::new("B", 2, 1)],
//!     4,
//!     &[],
//! )
//! .unwrap();
//! let params = PenaltyParams::for_instance(&instance);
//! let config = SolverConfig { chain_length: 200, seed: 1, ..SolverConfig::default() };
//! let (result, trace) = hopfield_leveling::run(&instance, &params, &config).unwrap();
//! assert!(result.best_energy.total <= trace.initial_energy);
//! ```

pub mod batch;
pub mod energy;
pub mod error;
pub mod instance;
pub mod oracle;
pub mod report;
pub mod schedule;
pub mod solver;
pub mod synapse;
pub mod trace;

#[cfg(feature = "parallel")]
pub use batch::run_batch_parallel;
pub use batch::{run_batch, run_batch_sequential, run_batch_with_workers, BatchSummary, TrialRow};
pub use energy::{delta_energy, total_energy, EnergyBreakdown, NeuronIndex, PenaltyParams};
pub use error::{DimensionMismatch, InstanceError, OracleError, ScheduleError, SolverError};
pub use instance::{parse_instance, Diagnostic, Job, ProjectInstance, Severity};
pub use oracle::{
    enumerate_schedules, optimal_variance, optimal_variance_sequential, OracleReport,
    PrecedenceMode,
};
pub use schedule::{decode, profile, variance, DecodedSchedule, ResourceProfile, ScheduleMatrix};
pub use solver::{run, InitStrategy, SolverConfig, TrialResult};
pub use synapse::{SynapseMode, SynapticSystem};
pub use trace::{EnergyTrace, TraceRecord};

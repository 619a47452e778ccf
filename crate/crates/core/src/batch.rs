//! Independent trials with consecutive seeds.
//!
//! Trial `k` uses seed `config.seed + k`. With the `parallel` feature the
//! trials are spread over a rayon pool; results are always returned in trial
//! order and are identical to the sequential path.

use std::time::Duration;

use crate::energy::PenaltyParams;
use crate::error::SolverError;
use crate::instance::ProjectInstance;
use crate::solver::{anneal, check_inputs, SolverConfig, TrialResult};
use crate::synapse::SynapticSystem;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialRow {
    pub index: usize,
    pub seed: u64,
    pub steps: u64,
    pub outer_iterations: usize,
    pub wall_time: Duration,
    pub min_energy: f64,
    pub variance: f64,
}

impl TrialRow {
    fn from_result(index: usize, r: &TrialResult) -> Self {
        Self {
            index,
            seed: r.seed,
            steps: r.iteration_steps,
            outer_iterations: r.outer_iterations,
            wall_time: r.wall_time,
            min_energy: r.best_energy.total,
            variance: r.best_variance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BatchAverages {
    pub steps: f64,
    pub wall_time: Duration,
    pub min_energy: f64,
    pub variance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BatchSummary {
    pub rows: Vec<TrialRow>,
    pub averages: BatchAverages,
    pub results: Vec<TrialResult>,
}

impl BatchSummary {
    fn from_results(results: Vec<TrialResult>) -> Self {
        let rows: Vec<TrialRow> = results
            .iter()
            .enumerate()
            .map(|(k, r)| TrialRow::from_result(k, r))
            .collect();
        let count = rows.len() as f64;
        let mean = |f: fn(&TrialRow) -> f64| rows.iter().map(f).sum::<f64>() / count;
        let averages = BatchAverages {
            steps: mean(|r| r.steps as f64),
            wall_time: Duration::from_secs_f64(mean(|r| r.wall_time.as_secs_f64())),
            min_energy: mean(|r| r.min_energy),
            variance: mean(|r| r.variance),
        };
        Self {
            rows,
            averages,
            results,
        }
    }
}

fn trial_config(config: &SolverConfig, index: usize) -> SolverConfig {
    SolverConfig {
        seed: config.seed.wrapping_add(index as u64),
        ..config.clone()
    }
}

fn prepare(
    instance: &ProjectInstance,
    params: &PenaltyParams,
    config: &SolverConfig,
    trials: usize,
) -> Result<SynapticSystem, SolverError> {
    if trials == 0 {
        return Err(SolverError::Config("trials must be at least 1".into()));
    }
    check_inputs(instance, params, config)?;
    Ok(SynapticSystem::build(instance, params, config.synapse_mode))
}

/// Runs trials one after another on the calling thread.
pub fn run_batch_sequential(
    instance: &ProjectInstance,
    params: &PenaltyParams,
    config: &SolverConfig,
    trials: usize,
) -> Result<BatchSummary, SolverError> {
    let synapses = prepare(instance, params, config, trials)?;
    let results = (0..trials)
        .map(|k| anneal(instance, params, &synapses, &trial_config(config, k)).0)
        .collect();
    Ok(BatchSummary::from_results(results))
}

/// Runs trials on the global rayon pool, or on a dedicated pool of `workers`
/// threads when given.
#[cfg(feature = "parallel")]
pub fn run_batch_parallel(
    instance: &ProjectInstance,
    params: &PenaltyParams,
    config: &SolverConfig,
    trials: usize,
    workers: Option<usize>,
) -> Result<BatchSummary, SolverError> {
    use rayon::prelude::*;

    let synapses = prepare(instance, params, config, trials)?;
    let work = || -> Vec<TrialResult> {
        (0..trials)
            .into_par_iter()
            .map(|k| anneal(instance, params, &synapses, &trial_config(config, k)).0)
            .collect()
    };
    let results = match workers {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| SolverError::Config(format!("cannot start worker pool: {e}")))?
            .install(work),
        None => work(),
    };
    Ok(BatchSummary::from_results(results))
}

/// Runs `trials` independent trials, concurrently when the `parallel`
/// feature is enabled.
pub fn run_batch(
    instance: &ProjectInstance,
    params: &PenaltyParams,
    config: &SolverConfig,
    trials: usize,
) -> Result<BatchSummary, SolverError> {
    run_batch_with_workers(instance, params, config, trials, None)
}

/// Like [`run_batch`] with an optional cap on worker threads. The cap is
/// ignored when the crate is built without the `parallel` feature.
pub fn run_batch_with_workers(
    instance: &ProjectInstance,
    params: &PenaltyParams,
    config: &SolverConfig,
    trials: usize,
    workers: Option<usize>,
) -> Result<BatchSummary, SolverError> {
    #[cfg(feature = "parallel")]
    {
        run_batch_parallel(instance, params, config, trials, workers)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        run_batch_sequential(instance, params, config, trials)
    }
}

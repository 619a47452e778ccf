//! Annealing with a Hopfield state generator.
//!
//! Each inner step picks one neuron at random and lets the network propose
//! its thresholded output from the local field. The proposal is then judged
//! by the Metropolis rule against the full penalty energy, precedence term
//! included. After `L` inner steps the temperature is multiplied by the
//! cooling rate; the run stops once it falls to the stop temperature.

use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::energy::{delta_energy, total_energy, EnergyBreakdown, NeuronIndex, PenaltyParams};
use crate::error::SolverError;
use crate::instance::ProjectInstance;
use crate::schedule::{decode, profile, DecodedSchedule, ScheduleMatrix};
use crate::synapse::{SynapseMode, SynapticSystem};
use crate::trace::{EnergyTrace, TraceRecord};

/// Random stream owned by one trial.
pub type SolverRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SolverRng {
    ChaCha8Rng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InitStrategy {
    /// Every cell on with probability 1/2.
    #[default]
    Random,
    /// Every job active on days `1..=duration`.
    EarliestStart,
}

impl FromStr for InitStrategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "random" => Ok(Self::Random),
            "earliest" | "earliest_start" => Ok(Self::EarliestStart),
            other => Err(format!(
                "unknown init strategy {other:?} (expected random|earliest)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// `T0`
    pub initial_temperature: f64,
    /// `a`, with `T' = a T` after every outer iteration.
    pub cooling_rate: f64,
    /// `L`, inner steps per temperature.
    pub chain_length: usize,
    /// `K` in `exp(-dE / (K T))`.
    pub metropolis_scale: f64,
    pub stop_temperature: f64,
    pub max_outer: usize,
    pub init: InitStrategy,
    pub seed: u64,
    pub synapse_mode: SynapseMode,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            initial_temperature: 100.0,
            cooling_rate: 0.90,
            chain_length: 1000,
            metropolis_scale: 1.0,
            stop_temperature: 0.01,
            max_outer: 200,
            init: InitStrategy::Random,
            seed: 0,
            synapse_mode: SynapseMode::Faithful,
        }
    }
}

impl SolverConfig {
    pub fn check(&self) -> Result<(), SolverError> {
        let bad = |msg: String| Err(SolverError::Config(msg));
        let t0 = self.initial_temperature;
        if !(t0.is_finite() && t0 > 0.0) {
            return bad(format!("T0 must be positive, got {t0}"));
        }
        if !(self.cooling_rate > 0.0 && self.cooling_rate < 1.0) {
            return bad(format!("a must lie in (0,1), got {}", self.cooling_rate));
        }
        if self.chain_length == 0 {
            return bad("L must be at least 1".into());
        }
        if !(self.metropolis_scale.is_finite() && self.metropolis_scale > 0.0) {
            return bad(format!("K must be positive, got {}", self.metropolis_scale));
        }
        if !(self.stop_temperature > 0.0 && self.stop_temperature < t0) {
            return bad(format!(
                "Estop must lie in (0, T0={t0}), got {}",
                self.stop_temperature
            ));
        }
        Ok(())
    }
}

/// Lowest-energy state among those that decode as feasible.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibleBest {
    pub schedule: ScheduleMatrix,
    pub energy: EnergyBreakdown,
    pub variance: f64,
    pub decoded: DecodedSchedule,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrialResult {
    pub seed: u64,
    pub best_schedule: ScheduleMatrix,
    pub best_energy: EnergyBreakdown,
    pub best_variance: f64,
    pub decoded: DecodedSchedule,
    pub best_feasible: Option<FeasibleBest>,
    pub initial_energy: f64,
    pub final_schedule: ScheduleMatrix,
    pub final_energy: f64,
    /// Inner steps executed.
    pub iteration_steps: u64,
    /// Completed temperature levels.
    pub outer_iterations: usize,
    pub wall_time: Duration,
}

pub fn initial_state<R: Rng + ?Sized>(
    instance: &ProjectInstance,
    strategy: InitStrategy,
    rng: &mut R,
) -> ScheduleMatrix {
    let m = instance.job_count();
    let n = instance.horizon();
    match strategy {
        InitStrategy::Random => {
            let mut s = ScheduleMatrix::zeros(m, n);
            for x in 1..=m {
                for i in 1..=n {
                    s.set(x, i, rng.gen::<bool>());
                }
            }
            s
        }
        InitStrategy::EarliestStart => {
            let lengths: Vec<usize> = instance
                .jobs()
                .iter()
                .map(|j| j.duration as usize)
                .collect();
            ScheduleMatrix::from_runs(n, &vec![1; m], &lengths)
        }
    }
}

/// Outcome of one asynchronous network update.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Proposal {
    /// The thresholded output equals the current value.
    Null,
    Flip(NeuronIndex),
}

impl Proposal {
    pub fn apply_to(&self, state: &ScheduleMatrix) -> ScheduleMatrix {
        let mut next = state.clone();
        if let Proposal::Flip(ni) = *self {
            next.flip(ni.row, ni.col);
        }
        next
    }
}

/// Thresholds the local field of `neuron`: output 1 when `h >= 0`.
pub fn propose(state: &ScheduleMatrix, synapses: &SynapticSystem, neuron: NeuronIndex) -> Proposal {
    let h = synapses.local_field(state, neuron);
    let output = h >= 0.0;
    if output == state.get(neuron.row, neuron.col) {
        Proposal::Null
    } else {
        Proposal::Flip(neuron)
    }
}

/// Metropolis acceptance: downhill always, otherwise when
/// `exp(-dE / (K T)) > u` for `u` uniform on `[0, 1)`.
pub fn metropolis<R: Rng + ?Sized>(
    delta_e: f64,
    temperature: f64,
    scale: f64,
    rng: &mut R,
) -> bool {
    if delta_e <= 0.0 {
        // exp(-dE/(KT)) >= 1 > u for every draw
        return true;
    }
    let threshold = (-delta_e / (scale * temperature)).exp();
    threshold > rng.gen::<f64>()
}

pub fn cool(temperature: f64, rate: f64) -> f64 {
    rate * temperature
}

pub fn run(
    instance: &ProjectInstance,
    params: &PenaltyParams,
    config: &SolverConfig,
) -> Result<(TrialResult, EnergyTrace), SolverError> {
    check_inputs(instance, params, config)?;
    let synapses = SynapticSystem::build(instance, params, config.synapse_mode);
    Ok(anneal(instance, params, &synapses, config))
}

pub(crate) fn check_inputs(
    instance: &ProjectInstance,
    params: &PenaltyParams,
    config: &SolverConfig,
) -> Result<(), SolverError> {
    config.check()?;
    params.check().map_err(SolverError::Config)?;
    let fatal: Vec<String> = instance
        .validate()
        .into_iter()
        .filter(|d| d.is_fatal())
        .map(|d| d.message)
        .collect();
    if !fatal.is_empty() {
        return Err(SolverError::Instance(fatal.join("; ")));
    }
    Ok(())
}

/// Runs one trial against prebuilt synapses. Inputs are assumed checked.
pub(crate) fn anneal(
    instance: &ProjectInstance,
    params: &PenaltyParams,
    synapses: &SynapticSystem,
    config: &SolverConfig,
) -> (TrialResult, EnergyTrace) {
    let started = Instant::now();
    let n = instance.horizon();
    let neurons = instance.job_count() * n;
    let mut rng = seeded_rng(config.seed);

    let mut state = initial_state(instance, config.init, &mut rng);
    let mut energy = total(&state, instance, params);
    let initial_energy = energy;

    let mut best = state.clone();
    let mut best_energy = energy;
    let mut feasible: Option<(ScheduleMatrix, f64)> =
        is_feasible(&state, instance).then(|| (state.clone(), energy));

    let mut trace = EnergyTrace {
        initial_energy,
        records: Vec::with_capacity(config.max_outer.min(256) * config.chain_length),
    };
    let mut temperature = config.initial_temperature;
    let mut steps = 0u64;
    let mut outer = 0usize;

    while outer < config.max_outer {
        for _ in 0..config.chain_length {
            steps += 1;
            let neuron = NeuronIndex::from_linear(rng.gen_range(1..=neurons), n);
            let proposal = propose(&state, synapses, neuron);
            let delta = match proposal {
                Proposal::Null => 0.0,
                Proposal::Flip(ni) => delta_energy(&state, instance, params, ni),
            };
            let accepted = metropolis(delta, temperature, config.metropolis_scale, &mut rng);

            if let Proposal::Flip(ni) = proposal {
                let candidate = energy + delta;
                let beats_best = candidate < best_energy;
                let beats_feasible = feasible.as_ref().is_none_or(|(_, e)| candidate < *e);
                if beats_best || beats_feasible {
                    state.flip(ni.row, ni.col);
                    if beats_best {
                        best.clone_from(&state);
                        best_energy = candidate;
                    }
                    if beats_feasible && is_feasible(&state, instance) {
                        feasible = Some((state.clone(), candidate));
                    }
                    state.flip(ni.row, ni.col);
                }
                if accepted {
                    state.flip(ni.row, ni.col);
                    energy = candidate;
                }
            }

            trace.records.push(TraceRecord {
                outer,
                temperature,
                step: steps,
                energy,
                best_energy,
                accepted,
            });
        }
        outer += 1;
        temperature = cool(temperature, config.cooling_rate);
        if temperature <= config.stop_temperature {
            break;
        }
    }

    let best_breakdown = total_energy(&best, instance, params).expect("shape checked");
    let decoded = decode(&best, instance).expect("shape checked");
    let best_variance = variance_of(&best, instance);
    let best_feasible = feasible.map(|(schedule, _)| FeasibleBest {
        energy: total_energy(&schedule, instance, params).expect("shape checked"),
        variance: variance_of(&schedule, instance),
        decoded: decode(&schedule, instance).expect("shape checked"),
        schedule,
    });

    let result = TrialResult {
        seed: config.seed,
        best_schedule: best,
        best_energy: best_breakdown,
        best_variance,
        decoded,
        best_feasible,
        initial_energy,
        final_schedule: state,
        final_energy: energy,
        iteration_steps: steps,
        outer_iterations: outer,
        wall_time: started.elapsed(),
    };
    (result, trace)
}

fn total(state: &ScheduleMatrix, instance: &ProjectInstance, params: &PenaltyParams) -> f64 {
    total_energy(state, instance, params)
        .expect("shape checked")
        .total
}

fn variance_of(state: &ScheduleMatrix, instance: &ProjectInstance) -> f64 {
    profile(state, instance)
        .expect("shape checked")
        .variance()
        .expect("horizon is at least one day")
}

fn is_feasible(state: &ScheduleMatrix, instance: &ProjectInstance) -> bool {
    decode(state, instance).is_ok_and(|d| d.is_feasible())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{continuity_energy, duration_energy};
    use crate::instance::Job;

    fn disjointable() -> ProjectInstance {
        ProjectInstance::with_precedence(vec![Job::new("A", 2, 1), Job::new("B", 2, 1)], 4, &[])
            .unwrap()
    }

    #[test]
    fn earliest_start_rows() {
        let i = ProjectInstance::with_precedence(vec![Job::new("A", 3, 1)], 5, &[]).unwrap();
        let s = initial_state(&i, InitStrategy::EarliestStart, &mut seeded_rng(0));
        assert_eq!(s.row(1), &[1, 1, 1, 0, 0]);

        let i = disjointable();
        let p = PenaltyParams::for_instance(&i);
        let s = initial_state(&i, InitStrategy::EarliestStart, &mut seeded_rng(0));
        assert_eq!(duration_energy(&s, &i, &p).unwrap(), 0.0);
        assert_eq!(continuity_energy(&s, &i, &p).unwrap(), 2.0 * p.continuity);
    }

    #[test]
    fn random_init_is_seeded() {
        let i = disjointable();
        let a = initial_state(&i, InitStrategy::Random, &mut seeded_rng(11));
        let b = initial_state(&i, InitStrategy::Random, &mut seeded_rng(11));
        assert_eq!(a, b);
    }

    #[test]
    fn proposal_threshold() {
        // single job, n = 2, Q = 3: field at (1,1) is 609 on the empty state,
        // 100 with (1,1) on, and the zero-coefficient field is exactly 0
        let i = ProjectInstance::with_precedence(vec![Job::new("A", 2, 3)], 2, &[]).unwrap();
        let p = PenaltyParams {
            load: 1.0,
            duration: 300.0,
            continuity: 200.0,
            precedence: 200.0,
            z: 200.0,
            average_demand: 3.0,
        };
        let syn = SynapticSystem::build(&i, &p, SynapseMode::Faithful);
        let a = NeuronIndex::new(1, 1);
        let empty = ScheduleMatrix::zeros(1, 2);
        assert_eq!(propose(&empty, &syn, a), Proposal::Flip(a));

        let zero = SynapticSystem::build(&i, &PenaltyParams::zero(), SynapseMode::Faithful);
        assert_eq!(zero.local_field(&empty, a), 0.0);
        assert_eq!(propose(&empty, &zero, a), Proposal::Flip(a));

        // duration-only network: h(1,3) = A (J_x - row sum)
        let dur = |j: u32| {
            let inst = ProjectInstance::with_precedence(vec![Job::new("A", j, 0)], 3, &[]).unwrap();
            let p = PenaltyParams {
                duration: 1.0,
                ..PenaltyParams::zero()
            };
            SynapticSystem::build(&inst, &p, SynapseMode::Faithful)
        };
        let c = NeuronIndex::new(1, 3);
        let two_on = ScheduleMatrix::from_rows(&[[1, 1, 0]]).unwrap();
        assert_eq!(dur(1).local_field(&two_on, c), -1.0);
        assert_eq!(propose(&two_on, &dur(1), c), Proposal::Null);
        assert_eq!(dur(2).local_field(&two_on, c), 0.0);
        assert_eq!(propose(&two_on, &dur(2), c), Proposal::Flip(c));
        let full = ScheduleMatrix::from_rows(&[[1, 1, 1]]).unwrap();
        assert_eq!(propose(&full, &dur(2), c), Proposal::Flip(c));
        assert_eq!(Proposal::Flip(c).apply_to(&full), two_on);
        assert_eq!(Proposal::Null.apply_to(&full), full);
    }

    #[test]
    fn metropolis_edges() {
        let mut rng = seeded_rng(3);
        assert!(metropolis(-5.0, 1.0, 1.0, &mut rng));
        assert!((0..1000).all(|_| metropolis(0.0, 1e-9, 1.0, &mut rng)));
        assert!(!(0..1000).any(|_| metropolis(10.0, 1e-6, 1.0, &mut rng)));
    }

    #[test]
    fn cooling() {
        assert_eq!(cool(100.0, 0.9), 90.0);
        let mut t = 100.0;
        for _ in 0..5 {
            let next = cool(t, 0.9);
            assert!(next < t);
            t = next;
        }
        assert!((t - 100.0 * 0.9f64.powi(5)).abs() < 1e-12);
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().check().is_ok());
        let bad = |f: fn(&mut SolverConfig)| {
            let mut c = SolverConfig::default();
            f(&mut c);
            c.check().is_err()
        };
        assert!(bad(|c| c.cooling_rate = 1.5));
        assert!(bad(|c| c.cooling_rate = 0.0));
        assert!(bad(|c| c.stop_temperature = 100.0));
        assert!(bad(|c| c.chain_length = 0));
        assert!(bad(|c| c.metropolis_scale = 0.0));
    }

    #[test]
    fn zero_outer_returns_initial_state() {
        let i = disjointable();
        let p = PenaltyParams::for_instance(&i);
        let cfg = SolverConfig {
            max_outer: 0,
            seed: 5,
            ..SolverConfig::default()
        };
        let (res, trace) = run(&i, &p, &cfg).unwrap();
        let init = initial_state(&i, cfg.init, &mut seeded_rng(5));
        assert_eq!(res.best_schedule, init);
        assert_eq!(res.final_schedule, init);
        assert_eq!(res.best_energy, total_energy(&init, &i, &p).unwrap());
        assert!(trace.is_empty());
        assert_eq!(res.iteration_steps, 0);
    }

    #[test]
    fn stops_at_stop_temperature() {
        let i = disjointable();
        let p = PenaltyParams::for_instance(&i);
        let cfg = SolverConfig {
            chain_length: 10,
            ..SolverConfig::default()
        };
        let (res, trace) = run(&i, &p, &cfg).unwrap();
        // 100 * 0.9^k <= 0.01 first holds at k = 88
        assert_eq!(res.outer_iterations, 88);
        assert_eq!(res.iteration_steps, 880);
        assert_eq!(trace.len(), 880);
        assert_eq!(trace.records.last().unwrap().outer, 87);
    }

    #[test]
    fn deterministic_for_seed() {
        let i = disjointable();
        let p = PenaltyParams::for_instance(&i);
        let cfg = SolverConfig {
            chain_length: 50,
            seed: 42,
            ..SolverConfig::default()
        };
        let (a, ta) = run(&i, &p, &cfg).unwrap();
        let (b, tb) = run(&i, &p, &cfg).unwrap();
        assert_eq!(ta, tb);
        assert_eq!(a.best_schedule, b.best_schedule);
        assert_eq!(a.best_energy, b.best_energy);
        assert_eq!(a.final_schedule, b.final_schedule);
    }

    #[test]
    fn disjointable_reaches_level_load() {
        let i = disjointable();
        let p = PenaltyParams::for_instance(&i);
        let hits = (0..20u64)
            .filter(|&seed| {
                let cfg = SolverConfig {
                    chain_length: 200,
                    seed,
                    ..SolverConfig::default()
                };
                run(&i, &p, &cfg).unwrap().0.best_variance == 0.0
            })
            .count();
        assert!(hits >= 15, "{hits}/20");
    }

    #[test]
    fn rejects_fatal_instance() {
        let i = ProjectInstance::with_precedence(vec![Job::new("A", 5, 1)], 4, &[]).unwrap();
        let p = PenaltyParams::for_instance(&i);
        assert!(matches!(
            run(&i, &p, &SolverConfig::default()),
            Err(SolverError::Instance(_))
        ));
    }
}

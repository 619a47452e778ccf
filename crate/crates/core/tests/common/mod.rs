#![allow(dead_code)]

use std::path::PathBuf;

use hopfield_leveling::{Job, PenaltyParams, ProjectInstance, ScheduleMatrix};
use rand::Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn instance(jobs: &[(u32, u32)], horizon: usize, pairs: &[(usize, usize)]) -> ProjectInstance {
    let jobs = jobs
        .iter()
        .enumerate()
        .map(|(k, &(d, q))| Job::new(format!("J{}", k + 1), d, q))
        .collect();
    ProjectInstance::with_precedence(jobs, horizon, pairs).unwrap()
}

/// Two jobs of duration 2 and demand 1 over four days, no precedence.
pub fn disjointable() -> ProjectInstance {
    instance(&[(2, 1), (2, 1)], 4, &[])
}

/// Three jobs over eight days, job 1 in front of job 2; 7^3 start vectors.
pub fn three_jobs() -> ProjectInstance {
    instance(&[(2, 2), (2, 1), (2, 1)], 8, &[(1, 2)])
}

pub fn random_instance<R: Rng>(rng: &mut R, m: usize, n: usize) -> ProjectInstance {
    let jobs: Vec<(u32, u32)> = (0..m)
        .map(|_| (rng.gen_range(1..=n as u32), rng.gen_range(0..=9)))
        .collect();
    let mut pairs = Vec::new();
    for pred in 1..=m {
        for succ in 1..=m {
            if pred != succ && rng.gen_bool(0.2) {
                pairs.push((pred, succ));
            }
        }
    }
    instance(&jobs, n, &pairs)
}

pub fn random_schedule<R: Rng>(rng: &mut R, m: usize, n: usize) -> ScheduleMatrix {
    let density: f64 = rng.gen_range(0.05..0.95);
    let rows: Vec<Vec<u8>> = (0..m)
        .map(|_| (0..n).map(|_| u8::from(rng.gen_bool(density))).collect())
        .collect();
    ScheduleMatrix::from_rows(&rows).unwrap()
}

pub fn random_params<R: Rng>(rng: &mut R, instance: &ProjectInstance) -> PenaltyParams {
    PenaltyParams {
        load: rng.gen_range(0.0..5.0),
        duration: rng.gen_range(0.0..400.0),
        continuity: rng.gen_range(0.0..400.0),
        precedence: rng.gen_range(0.0..400.0),
        z: 0.0,
        average_demand: instance.average_demand(),
    }
}

/// Energy terms written out literally from their defining sums.
#[derive(Debug, Clone, Copy)]
pub struct Reference {
    pub load: f64,
    pub duration: f64,
    pub continuity: f64,
    pub precedence: f64,
}

impl Reference {
    pub fn total(&self) -> f64 {
        self.load + self.duration + self.continuity + self.precedence
    }

    pub fn quadratic_part(&self) -> f64 {
        self.load + self.duration + self.continuity
    }
}

pub fn reference_energy(
    s: &ScheduleMatrix,
    inst: &ProjectInstance,
    p: &PenaltyParams,
) -> Reference {
    let m = inst.job_count();
    let n = inst.horizon();
    let v = |x: usize, i: usize| if s.get(x, i) { 1.0 } else { 0.0 };
    let q = |x: usize| f64::from(inst.job(x).demand);

    let mut load = 0.0;
    for i in 1..=n {
        let mut col = 0.0;
        for x in 1..=m {
            col += q(x) * v(x, i);
        }
        load += (col - p.average_demand).powi(2);
    }

    let mut duration = 0.0;
    for x in 1..=m {
        let mut row = 0.0;
        for i in 1..=n {
            row += v(x, i);
        }
        duration += (row - f64::from(inst.job(x).duration)).powi(2);
    }

    let mut continuity = 0.0;
    for x in 1..=m {
        for i in 1..=n {
            continuity += (v(x, i) - v(x, i % n + 1)).powi(2);
        }
    }

    let pos = |x: usize| (1..=n).find(|&i| s.get(x, i)).unwrap_or(n + 1) as f64;
    let sgn = |d: f64| if d < 0.0 { 0.0 } else { 1.0 };
    let mut precedence = 0.0;
    for x in 1..=m {
        for y in 1..=m {
            let front = if inst.front(x, y) { 1.0 } else { 0.0 };
            let d = pos(y) - pos(x);
            precedence += d * sgn(d) * front;
        }
    }

    Reference {
        load: 0.5 * p.load * load,
        duration: 0.5 * p.duration * duration,
        continuity: 0.5 * p.continuity * continuity,
        precedence: p.precedence * precedence,
    }
}

/// `(M/2) n Qm^2 + (A/2) sum_x J_x^2`
pub fn quadratic_constant(inst: &ProjectInstance, p: &PenaltyParams) -> f64 {
    let sq: f64 = inst
        .jobs()
        .iter()
        .map(|j| f64::from(j.duration).powi(2))
        .sum();
    0.5 * p.load * inst.horizon() as f64 * p.average_demand.powi(2) + 0.5 * p.duration * sq
}

//! Exhaustive reference solver for small instances.
//!
//! Enumerates every schedule in which each job is one unbroken run of exactly
//! its duration, keeps those that satisfy the precedence table, and returns
//! the minimum-variance placement. Ties go to the lexicographically smallest
//! start vector.

use std::fmt;
use std::str::FromStr;

use crate::error::OracleError;
use crate::instance::ProjectInstance;
use crate::schedule::{ResourceProfile, ScheduleMatrix};

/// Largest start-vector space the oracle will walk.
pub const ENUMERATION_LIMIT: u128 = 10_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PrecedenceMode {
    /// Predecessor starts no later than its successor.
    #[default]
    Paper,
    /// Predecessor finishes before its successor starts.
    Strict,
}

impl FromStr for PrecedenceMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper" => Ok(Self::Paper),
            "strict" => Ok(Self::Strict),
            other => Err(format!(
                "unknown precedence mode {other:?} (expected paper|strict)"
            )),
        }
    }
}

impl fmt::Display for PrecedenceMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Paper => "paper",
            Self::Strict => "strict",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleReport {
    pub optimal_variance: f64,
    pub optimal_schedule: ScheduleMatrix,
    /// 1-based start day of every job in the optimal schedule.
    pub optimal_starts: Vec<usize>,
    pub feasible_count: u64,
    pub precedence_mode: PrecedenceMode,
}

/// Number of start vectors, `prod_x (n - J_x + 1)`; zero if some job cannot fit.
pub fn state_space(instance: &ProjectInstance) -> u128 {
    let n = instance.horizon();
    instance
        .jobs()
        .iter()
        .map(|j| (n + 1).saturating_sub(j.duration as usize) as u128)
        .product()
}

fn guard(instance: &ProjectInstance) -> Result<(), OracleError> {
    let size = state_space(instance);
    if size > ENUMERATION_LIMIT {
        Err(OracleError::GuardExceeded {
            size,
            limit: ENUMERATION_LIMIT,
        })
    } else {
        Ok(())
    }
}

fn satisfies(instance: &ProjectInstance, starts: &[usize], mode: PrecedenceMode) -> bool {
    instance.front_pairs().all(|(x, y)| {
        let (sx, sy) = (starts[x - 1], starts[y - 1]);
        match mode {
            PrecedenceMode::Paper => sy <= sx,
            PrecedenceMode::Strict => sy + instance.job(y).duration as usize <= sx,
        }
    })
}

/// Odometer over start vectors in lexicographic order, last job fastest.
#[derive(Debug, Clone)]
struct StartVectors {
    last: Vec<usize>,
    current: Option<Vec<usize>>,
    first_end: usize,
}

impl StartVectors {
    fn new(instance: &ProjectInstance) -> Self {
        let n = instance.horizon();
        let last: Vec<usize> = instance
            .jobs()
            .iter()
            .map(|j| (n + 1).saturating_sub(j.duration as usize))
            .collect();
        let current = last.iter().all(|&l| l >= 1).then(|| vec![1; last.len()]);
        let first_end = last[0];
        Self {
            last,
            current,
            first_end,
        }
    }

    /// Restricts the first job's start to `first`.
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn with_first(mut self, first: usize) -> Self {
        self.first_end = first;
        if let Some(c) = self.current.as_mut() {
            c[0] = first;
        }
        self
    }
}

impl Iterator for StartVectors {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let cur = self.current.as_mut().expect("checked above");
        let mut k = cur.len();
        loop {
            if k == 0 {
                self.current = None;
                break;
            }
            k -= 1;
            let end = if k == 0 { self.first_end } else { self.last[k] };
            if cur[k] < end {
                cur[k] += 1;
                break;
            }
            if k == 0 {
                self.current = None;
                break;
            }
            cur[k] = 1;
        }
        Some(out)
    }
}

fn schedule_for(instance: &ProjectInstance, starts: &[usize]) -> ScheduleMatrix {
    let lengths: Vec<usize> = instance
        .jobs()
        .iter()
        .map(|j| j.duration as usize)
        .collect();
    ScheduleMatrix::from_runs(instance.horizon(), starts, &lengths)
}

/// Every duration-exact, unbroken placement that satisfies `mode`.
pub fn enumerate_schedules(
    instance: &ProjectInstance,
    mode: PrecedenceMode,
) -> Result<impl Iterator<Item = ScheduleMatrix> + '_, OracleError> {
    guard(instance)?;
    Ok(StartVectors::new(instance)
        .filter(move |s| satisfies(instance, s, mode))
        .map(move |s| schedule_for(instance, &s)))
}

#[derive(Debug, Clone, Default)]
struct Scan {
    count: u64,
    best: Option<(u128, Vec<usize>)>,
}

impl Scan {
    #[cfg_attr(not(feature = "parallel"), allow(dead_code))]
    fn merge(self, other: Scan) -> Scan {
        let best = match (self.best, other.best) {
            (Some(a), Some(b)) => Some(if b < a { b } else { a }),
            (a, b) => a.or(b),
        };
        Scan {
            count: self.count + other.count,
            best,
        }
    }
}

fn scan(instance: &ProjectInstance, mode: PrecedenceMode, vectors: StartVectors) -> Scan {
    let n = instance.horizon();
    let mut out = Scan::default();
    let mut daily = vec![0u64; n];
    for starts in vectors.filter(|s| satisfies(instance, s, mode)) {
        out.count += 1;
        daily.iter_mut().for_each(|d| *d = 0);
        for (job, &s) in instance.jobs().iter().zip(&starts) {
            for d in &mut daily[s - 1..s - 1 + job.duration as usize] {
                *d += u64::from(job.demand);
            }
        }
        let score = ResourceProfile::new(daily.clone()).scaled_variance();
        // strict < keeps the earliest vector among ties
        if out.best.as_ref().is_none_or(|(b, _)| score < *b) {
            out.best = Some((score, starts));
        }
    }
    out
}

/// Minimum-variance placement under `mode`. With the `parallel` feature the
/// enumeration is split by the first job's start day.
pub fn optimal_variance(
    instance: &ProjectInstance,
    mode: PrecedenceMode,
) -> Result<OracleReport, OracleError> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        let vectors = prepare(instance)?;
        let firsts: Vec<usize> = (1..=vectors.last[0]).collect();
        let total = firsts
            .into_par_iter()
            .map(|first| scan(instance, mode, vectors.clone().with_first(first)))
            .collect::<Vec<_>>()
            .into_iter()
            .fold(Scan::default(), Scan::merge);
        finish(instance, mode, total)
    }
    #[cfg(not(feature = "parallel"))]
    {
        optimal_variance_sequential(instance, mode)
    }
}

/// Single-threaded [`optimal_variance`].
pub fn optimal_variance_sequential(
    instance: &ProjectInstance,
    mode: PrecedenceMode,
) -> Result<OracleReport, OracleError> {
    let vectors = prepare(instance)?;
    finish(instance, mode, scan(instance, mode, vectors))
}

fn prepare(instance: &ProjectInstance) -> Result<StartVectors, OracleError> {
    guard(instance)?;
    let vectors = StartVectors::new(instance);
    if vectors.current.is_none() {
        return Err(OracleError::Infeasible);
    }
    Ok(vectors)
}

fn finish(
    instance: &ProjectInstance,
    mode: PrecedenceMode,
    total: Scan,
) -> Result<OracleReport, OracleError> {
    let (score, starts) = total.best.ok_or(OracleError::Infeasible)?;
    let n = instance.horizon() as f64;
    Ok(OracleReport {
        optimal_variance: score as f64 / (n * n),
        optimal_schedule: schedule_for(instance, &starts),
        optimal_starts: starts,
        feasible_count: total.count,
        precedence_mode: mode,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::Job;

    fn inst(jobs: &[(u32, u32)], horizon: usize, pairs: &[(usize, usize)]) -> ProjectInstance {
        let jobs = jobs
            .iter()
            .enumerate()
            .map(|(k, &(d, q))| Job::new(format!("J{}", k + 1), d, q))
            .collect();
        ProjectInstance::with_precedence(jobs, horizon, pairs).unwrap()
    }

    #[test]
    fn single_job_placements() {
        let i = inst(&[(2, 1)], 3, &[]);
        let all: Vec<_> = enumerate_schedules(&i, PrecedenceMode::Paper)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 2);
        assert_eq!(all[0].row(1), &[1, 1, 0]);
        assert_eq!(all[1].row(1), &[0, 1, 1]);
    }

    #[test]
    fn two_jobs_nine_placements() {
        let i = inst(&[(2, 1), (2, 1)], 4, &[]);
        assert_eq!(
            enumerate_schedules(&i, PrecedenceMode::Paper)
                .unwrap()
                .count(),
            9
        );
    }

    #[test]
    fn strict_mode_single_placement() {
        let i = inst(&[(2, 1), (2, 1)], 4, &[(1, 2)]);
        let all: Vec<_> = enumerate_schedules(&i, PrecedenceMode::Strict)
            .unwrap()
            .collect();
        assert_eq!(all.len(), 1);
        assert_eq!(all[0].row(1), &[1, 1, 0, 0]);
        assert_eq!(all[0].row(2), &[0, 0, 1, 1]);
    }

    #[test]
    fn disjointable_optimum() {
        let i = inst(&[(2, 1), (2, 1)], 4, &[]);
        let r = optimal_variance(&i, PrecedenceMode::Paper).unwrap();
        assert_eq!(r.optimal_variance, 0.0);
        assert_eq!(r.feasible_count, 9);
        assert_eq!(r.optimal_starts, vec![1, 3]);
    }

    #[test]
    fn single_job_tie_breaks_to_first_day() {
        let i = inst(&[(3, 2)], 7, &[]);
        let r = optimal_variance(&i, PrecedenceMode::Paper).unwrap();
        assert_eq!(r.optimal_starts, vec![1]);
        assert_eq!(r.feasible_count, 5);
    }

    #[test]
    fn strict_infeasible() {
        let i = inst(&[(3, 1), (3, 1)], 4, &[(1, 2)]);
        assert_eq!(
            optimal_variance(&i, PrecedenceMode::Strict),
            Err(OracleError::Infeasible)
        );
        assert!(optimal_variance(&i, PrecedenceMode::Paper).is_ok());
    }

    #[test]
    fn sequential_matches_default_path() {
        let i = inst(&[(2, 2), (3, 1), (1, 3), (2, 1)], 7, &[(1, 3), (2, 4)]);
        for mode in [PrecedenceMode::Paper, PrecedenceMode::Strict] {
            assert_eq!(
                optimal_variance(&i, mode).unwrap(),
                optimal_variance_sequential(&i, mode).unwrap()
            );
        }
    }

    #[test]
    fn guard_limits_enumeration() {
        let jobs: Vec<(u32, u32)> = vec![(1, 1); 8];
        let i = inst(&jobs, 10, &[]);
        assert_eq!(state_space(&i), 100_000_000);
        assert!(matches!(
            optimal_variance(&i, PrecedenceMode::Paper),
            Err(OracleError::GuardExceeded { .. })
        ));
        assert!(enumerate_schedules(&i, PrecedenceMode::Paper).is_err());
    }

    #[test]
    fn oversized_job_is_infeasible() {
        let i = inst(&[(5, 1)], 4, &[]);
        assert_eq!(state_space(&i), 0);
        assert_eq!(
            optimal_variance(&i, PrecedenceMode::Paper),
            Err(OracleError::Infeasible)
        );
    }
}

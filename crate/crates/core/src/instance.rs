//! Project instances: jobs, horizon and the precedence table.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::InstanceError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Job {
    pub id: String,
    /// Active days required.
    pub duration: u32,
    /// Resource units consumed on each active day.
    pub demand: u32,
}

impl Job {
    pub fn new(id: impl Into<String>, duration: u32, demand: u32) -> Self {
        Self {
            id: id.into(),
            duration,
            demand,
        }
    }
}

/// On-disk instance layout.
///
/// A precedence pair `[a, b]` says job `a` is in front of job `b`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceDocument {
    pub horizon: u32,
    pub jobs: Vec<Job>,
    #[serde(default)]
    pub precedence: Vec<[String; 2]>,
}

/// A single-resource leveling instance with `m` jobs over an `n`-day horizon.
///
/// `front(x, y)` is true when job `y` must come before job `x`. The table is
/// asymmetric; entries are taken exactly as given, without transitive closure.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProjectInstance {
    jobs: Vec<Job>,
    horizon: usize,
    front: Vec<bool>,
}

impl ProjectInstance {
    /// Builds an instance from jobs and a row-major `m x m` front table.
    ///
    /// Durations longer than the horizon are accepted here and reported by
    /// [`ProjectInstance::validate`]; [`parse_instance`] rejects them.
    pub fn new(
        jobs: Vec<Job>,
        horizon: usize,
        front: Vec<Vec<bool>>,
    ) -> Result<Self, InstanceError> {
        let m = jobs.len();
        if m == 0 {
            return Err(InstanceError::NoJobs);
        }
        if horizon == 0 {
            return Err(InstanceError::EmptyHorizon);
        }
        if front.len() != m || front.iter().any(|row| row.len() != m) {
            return Err(InstanceError::FrontShape { expected: m });
        }
        let mut seen = HashMap::with_capacity(m);
        for (x, job) in jobs.iter().enumerate() {
            if job.duration == 0 {
                return Err(InstanceError::ZeroDuration { id: job.id.clone() });
            }
            if seen.insert(job.id.as_str(), x).is_some() {
                return Err(InstanceError::DuplicateJob(job.id.clone()));
            }
            if front[x][x] {
                return Err(InstanceError::SelfPrecedence(job.id.clone()));
            }
        }
        Ok(Self {
            jobs,
            horizon,
            front: front.into_iter().flatten().collect(),
        })
    }

    /// Builds an instance from `(predecessor, successor)` pairs of 1-based job indices.
    pub fn with_precedence(
        jobs: Vec<Job>,
        horizon: usize,
        pairs: &[(usize, usize)],
    ) -> Result<Self, InstanceError> {
        let m = jobs.len();
        let mut front = vec![vec![false; m]; m];
        for &(pred, succ) in pairs {
            let name = |x: usize| {
                jobs.get(x.wrapping_sub(1))
                    .map_or_else(|| format!("#{x}"), |j| j.id.clone())
            };
            if pred == 0 || pred > m {
                return Err(InstanceError::UnknownJob(name(pred)));
            }
            if succ == 0 || succ > m {
                return Err(InstanceError::UnknownJob(name(succ)));
            }
            if pred == succ {
                return Err(InstanceError::SelfPrecedence(name(pred)));
            }
            front[succ - 1][pred - 1] = true;
        }
        Self::new(jobs, horizon, front)
    }

    pub fn from_document(doc: InstanceDocument) -> Result<Self, InstanceError> {
        let index: HashMap<&str, usize> = doc
            .jobs
            .iter()
            .enumerate()
            .map(|(x, j)| (j.id.as_str(), x + 1))
            .collect();
        let lookup = |id: &String| {
            index
                .get(id.as_str())
                .copied()
                .ok_or_else(|| InstanceError::UnknownJob(id.clone()))
        };
        let mut pairs = Vec::with_capacity(doc.precedence.len());
        for [pred, succ] in &doc.precedence {
            pairs.push((lookup(pred)?, lookup(succ)?));
        }
        Self::with_precedence(doc.jobs, doc.horizon as usize, &pairs)
    }

    pub fn to_document(&self) -> InstanceDocument {
        let mut precedence = Vec::new();
        for succ in 1..=self.job_count() {
            for pred in 1..=self.job_count() {
                if self.front(succ, pred) {
                    precedence.push([self.job(pred).id.clone(), self.job(succ).id.clone()]);
                }
            }
        }
        InstanceDocument {
            horizon: self.horizon as u32,
            jobs: self.jobs.clone(),
            precedence,
        }
    }

    pub fn jobs(&self) -> &[Job] {
        &self.jobs
    }

    /// Job `x`, 1-based.
    pub fn job(&self, x: usize) -> &Job {
        &self.jobs[x - 1]
    }

    pub fn job_count(&self) -> usize {
        self.jobs.len()
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    /// `true` when job `y` must come before job `x` (both 1-based).
    pub fn front(&self, x: usize, y: usize) -> bool {
        self.front[(x - 1) * self.jobs.len() + (y - 1)]
    }

    /// Iterates `(x, y)` over every set entry of the front table, 1-based.
    pub fn front_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let m = self.jobs.len();
        self.front
            .iter()
            .enumerate()
            .filter(|(_, &set)| set)
            .map(move |(k, _)| (k / m + 1, k % m + 1))
    }

    pub fn has_precedence(&self) -> bool {
        self.front.iter().any(|&b| b)
    }

    /// Total resource-days spread evenly over the horizon.
    pub fn average_demand(&self) -> f64 {
        let total: u64 = self
            .jobs
            .iter()
            .map(|j| u64::from(j.demand) * u64::from(j.duration))
            .sum();
        total as f64 / self.horizon as f64
    }

    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        for job in &self.jobs {
            if job.duration as usize > self.horizon {
                out.push(Diagnostic::fatal(format!(
                    "job {:?} duration {} exceeds horizon {}",
                    job.id, job.duration, self.horizon
                )));
            }
        }

        let order = self.topological_order();
        if order.len() < self.job_count() {
            let mut stuck: Vec<&str> = (1..=self.job_count())
                .filter(|x| !order.contains(x))
                .map(|x| self.job(x).id.as_str())
                .collect();
            stuck.sort_unstable();
            out.push(Diagnostic::warning(format!(
                "precedence cycle among jobs {}",
                stuck.join(", ")
            )));
        }

        if let Some((days, chain)) = self.longest_strict_chain(&order) {
            if days > self.horizon && chain.len() > 1 {
                let names: Vec<&str> = chain.iter().map(|&x| self.job(x).id.as_str()).collect();
                out.push(Diagnostic::warning(format!(
                    "strict precedence may be unsatisfiable: chain {} needs {} days > horizon {}",
                    names.join(" -> "),
                    days,
                    self.horizon
                )));
            }
        }
        out
    }

    /// Kahn order over edges predecessor -> successor; jobs on cycles are left out.
    fn topological_order(&self) -> Vec<usize> {
        let m = self.job_count();
        let mut indegree = vec![0usize; m + 1];
        for (succ, _) in self.front_pairs() {
            indegree[succ] += 1;
        }
        let mut queue: VecDeque<usize> = (1..=m).filter(|&x| indegree[x] == 0).collect();
        let mut order = Vec::with_capacity(m);
        while let Some(pred) = queue.pop_front() {
            order.push(pred);
            for (succ, deg) in indegree.iter_mut().enumerate().skip(1) {
                if self.front(succ, pred) {
                    *deg -= 1;
                    if *deg == 0 {
                        queue.push_back(succ);
                    }
                }
            }
        }
        order
    }

    /// Longest duration-weighted chain through the acyclic part of the table.
    fn longest_strict_chain(&self, order: &[usize]) -> Option<(usize, Vec<usize>)> {
        let m = self.job_count();
        let mut length = vec![0usize; m + 1];
        let mut parent = vec![0usize; m + 1];
        for &x in order {
            length[x] += self.job(x).duration as usize;
            for succ in 1..=m {
                if self.front(succ, x) && length[x] > length[succ] {
                    length[succ] = length[x];
                    parent[succ] = x;
                }
            }
        }
        let &end = order
            .iter()
            .max_by_key(|&&x| (length[x], std::cmp::Reverse(x)))?;
        let mut chain = vec![end];
        let mut cur = end;
        while parent[cur] != 0 {
            cur = parent[cur];
            chain.push(cur);
        }
        chain.reverse();
        Some((length[end], chain))
    }
}

/// Reads an instance document and rejects anything `validate` would call fatal.
pub fn parse_instance(text: &str) -> Result<ProjectInstance, InstanceError> {
    let instance = parse_instance_unchecked(text)?;
    if let Some(job) = instance
        .jobs()
        .iter()
        .find(|j| j.duration as usize > instance.horizon())
    {
        return Err(InstanceError::DurationExceedsHorizon {
            id: job.id.clone(),
            duration: job.duration,
            horizon: instance.horizon() as u32,
        });
    }
    Ok(instance)
}

/// Structural parse only; durations longer than the horizon are kept so that
/// [`ProjectInstance::validate`] can report them.
pub fn parse_instance_unchecked(text: &str) -> Result<ProjectInstance, InstanceError> {
    let doc: InstanceDocument = serde_json::from_str(text)?;
    ProjectInstance::from_document(doc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Warning,
    Fatal,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn warning(message: String) -> Self {
        Self {
            severity: Severity::Warning,
            message,
        }
    }

    fn fatal(message: String) -> Self {
        Self {
            severity: Severity::Fatal,
            message,
        }
    }

    pub fn is_fatal(&self) -> bool {
        self.severity == Severity::Fatal
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.severity {
            Severity::Warning => write!(f, "warning: {}", self.message),
            Severity::Fatal => write!(f, "error: {}", self.message),
        }
    }
}

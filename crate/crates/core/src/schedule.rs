//! Augmented permute matrices and the metrics read off them.
//!
//! A [`ScheduleMatrix`] has one row per job and one column per day. Unlike a
//! permutation matrix, any number of cells in a row or column may be set. All
//! row and column arguments are 1-based.

use std::fmt;

use crate::error::{DimensionMismatch, ScheduleError};
use crate::instance::ProjectInstance;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScheduleMatrix {
    rows: usize,
    cols: usize,
    bits: Vec<u8>,
}

impl ScheduleMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            bits: vec![0; rows * cols],
        }
    }

    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, ScheduleError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.is_empty() || cols == 0 {
            return Err(ScheduleError::Empty);
        }
        let mut bits = Vec::with_capacity(rows.len() * cols);
        for (x, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(ScheduleError::Ragged);
            }
            for (i, &value) in row.iter().enumerate() {
                if value > 1 {
                    return Err(ScheduleError::NotBinary {
                        row: x + 1,
                        col: i + 1,
                        value,
                    });
                }
            }
            bits.extend_from_slice(row);
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            bits,
        })
    }

    /// Each row `x` holds one run of `lengths[x]` ones starting at day `starts[x]`.
    /// Runs that would pass the last day are clipped.
    pub fn from_runs(cols: usize, starts: &[usize], lengths: &[usize]) -> Self {
        let mut s = Self::zeros(starts.len(), cols);
        for (x, (&start, &len)) in starts.iter().zip(lengths).enumerate() {
            for i in start..(start + len).min(cols + 1) {
                s.set(x + 1, i, true);
            }
        }
        s
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, x: usize, i: usize) -> bool {
        self.bits[self.offset(x, i)] == 1
    }

    pub fn set(&mut self, x: usize, i: usize, on: bool) {
        let k = self.offset(x, i);
        self.bits[k] = u8::from(on);
    }

    pub fn flip(&mut self, x: usize, i: usize) {
        let k = self.offset(x, i);
        self.bits[k] ^= 1;
    }

    /// Row `x` as a 0/1 slice.
    pub fn row(&self, x: usize) -> &[u8] {
        &self.bits[(x - 1) * self.cols..x * self.cols]
    }

    /// All cells in row-major order; position `k` is neuron `k + 1`.
    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn row_sum(&self, x: usize) -> usize {
        self.row(x).iter().map(|&b| b as usize).sum()
    }

    pub fn active_count(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    pub fn check_shape(&self, instance: &ProjectInstance) -> Result<(), DimensionMismatch> {
        if self.rows == instance.job_count() && self.cols == instance.horizon() {
            Ok(())
        } else {
            Err(DimensionMismatch {
                rows: self.rows,
                cols: self.cols,
                jobs: instance.job_count(),
                days: instance.horizon(),
            })
        }
    }

    /// Day of the first active cell in row `x`, or `cols + 1` for an empty row.
    pub fn first_active_day(&self, x: usize) -> Result<usize, ScheduleError> {
        if x == 0 || x > self.rows {
            return Err(ScheduleError::RowOutOfRange {
                row: x,
                rows: self.rows,
            });
        }
        Ok(self.pos(x))
    }

    pub(crate) fn pos(&self, x: usize) -> usize {
        self.row(x)
            .iter()
            .position(|&b| b == 1)
            .map_or(self.cols + 1, |i| i + 1)
    }

    /// Number of maximal runs of ones in row `x` when day `n` wraps to day 1.
    /// A full row counts as zero runs, matching the circular difference penalty.
    pub fn circular_runs(&self, x: usize) -> usize {
        let row = self.row(x);
        let n = row.len();
        (0..n)
            .filter(|&i| row[i] == 1 && row[(i + 1) % n] == 0)
            .count()
    }

    /// Number of maximal runs of ones in row `x` with no wrap-around.
    pub fn linear_runs(&self, x: usize) -> usize {
        let row = self.row(x);
        (0..row.len())
            .filter(|&i| row[i] == 1 && (i == 0 || row[i - 1] == 0))
            .count()
    }

    #[inline]
    fn offset(&self, x: usize, i: usize) -> usize {
        debug_assert!(x >= 1 && x <= self.rows && i >= 1 && i <= self.cols);
        (x - 1) * self.cols + (i - 1)
    }
}

impl fmt::Debug for ScheduleMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ScheduleMatrix {}x{}", self.rows, self.cols)?;
        for x in 1..=self.rows {
            let line: String = self
                .row(x)
                .iter()
                .map(|&b| if b == 1 { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Daily resource load.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ResourceProfile {
    pub daily: Vec<u64>,
}

impl ResourceProfile {
    pub fn new(daily: Vec<u64>) -> Self {
        Self { daily }
    }

    pub fn total(&self) -> u64 {
        self.daily.iter().sum()
    }

    /// Population variance of the daily loads.
    pub fn variance(&self) -> Result<f64, ScheduleError> {
        variance(&self.daily)
    }

    /// `n^2` times the population variance, computed exactly.
    pub fn scaled_variance(&self) -> u128 {
        scaled_variance(&self.daily)
    }
}

pub fn profile(
    schedule: &ScheduleMatrix,
    instance: &ProjectInstance,
) -> Result<ResourceProfile, DimensionMismatch> {
    schedule.check_shape(instance)?;
    let mut daily = vec![0u64; schedule.cols()];
    for (x, job) in instance.jobs().iter().enumerate() {
        for (load, &bit) in daily.iter_mut().zip(schedule.row(x + 1)) {
            *load += u64::from(job.demand) * u64::from(bit);
        }
    }
    Ok(ResourceProfile { daily })
}

/// Population variance `(1/n) * sum (d_i - mean)^2`.
pub fn variance(daily: &[u64]) -> Result<f64, ScheduleError> {
    if daily.is_empty() {
        return Err(ScheduleError::EmptyProfile);
    }
    let n = daily.len() as f64;
    Ok(scaled_variance(daily) as f64 / (n * n))
}

// n * sum d^2 - (sum d)^2 = n^2 * variance; exact in integers.
fn scaled_variance(daily: &[u64]) -> u128 {
    let n = daily.len() as u128;
    let sum: u128 = daily.iter().map(|&d| d as u128).sum();
    let sum_sq: u128 = daily.iter().map(|&d| (d as u128) * (d as u128)).sum();
    n * sum_sq - sum * sum
}

/// Start/finish view of a schedule with feasibility flags.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodedSchedule {
    /// First active day per job; `n + 1` for a job with no active day.
    pub starts: Vec<usize>,
    /// Last active day per job; `0` for a job with no active day.
    pub finishes: Vec<usize>,
    /// Every row is a single run of ones that does not wrap past the last day.
    pub rows_contiguous_linear: bool,
    pub durations_match: bool,
    /// `pos_y <= pos_x` for every `front(x, y)`.
    pub precedence_paper_mode: bool,
    /// `pos_y + duration_y <= pos_x` for every `front(x, y)`.
    pub precedence_strict: bool,
}

impl DecodedSchedule {
    /// Duration-exact, unbroken rows with start-order precedence respected.
    pub fn is_feasible(&self) -> bool {
        self.rows_contiguous_linear && self.durations_match && self.precedence_paper_mode
    }
}

pub fn decode(
    schedule: &ScheduleMatrix,
    instance: &ProjectInstance,
) -> Result<DecodedSchedule, DimensionMismatch> {
    schedule.check_shape(instance)?;
    let m = instance.job_count();
    let starts: Vec<usize> = (1..=m).map(|x| schedule.pos(x)).collect();
    let finishes: Vec<usize> = (1..=m)
        .map(|x| {
            schedule
                .row(x)
                .iter()
                .rposition(|&b| b == 1)
                .map_or(0, |i| i + 1)
        })
        .collect();
    let rows_contiguous_linear = (1..=m).all(|x| schedule.linear_runs(x) == 1);
    let durations_match = instance
        .jobs()
        .iter()
        .enumerate()
        .all(|(x, job)| schedule.row_sum(x + 1) == job.duration as usize);
    let precedence_paper_mode = instance
        .front_pairs()
        .all(|(x, y)| starts[y - 1] <= starts[x - 1]);
    let precedence_strict = instance
        .front_pairs()
        .all(|(x, y)| starts[y - 1] + instance.job(y).duration as usize <= starts[x - 1]);
    Ok(DecodedSchedule {
        starts,
        finishes,
        rows_contiguous_linear,
        durations_match,
        precedence_paper_mode,
        precedence_strict,
    })
}

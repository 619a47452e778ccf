//! Penalty energy of a schedule.
//!
//! The total is the sum of four terms:
//!
//! * load smoothing: `(M/2) * sum_i (sum_x Q_x v_xi - Qm)^2`
//! * duration: `(A/2) * sum_x (sum_i v_xi - J_x)^2`
//! * non-interrupt: `(F/2) * sum_x sum_i (v_xi - v_x,next(i))^2`, where day `n`
//!   wraps to day 1
//! * precedence: `J * sum_{x,y} (pos_y - pos_x) * sgn(pos_y - pos_x) * front(x,y)`
//!   with `sgn(d) = 1` for `d >= 0`, else `0`
//!
//! `pos_x` is the first active day of row `x` (`n + 1` when the row is empty).

use crate::error::DimensionMismatch;
use crate::instance::ProjectInstance;
use crate::schedule::ScheduleMatrix;

/// Penalty coefficients and the target daily load.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PenaltyParams {
    /// `M`, weight of the load-smoothing term.
    pub load: f64,
    /// `A`, weight of the duration term.
    pub duration: f64,
    /// `F`, weight of the non-interrupt term.
    pub continuity: f64,
    /// `J`, weight of the precedence term.
    pub precedence: f64,
    /// Accepted for parity with published parameter sets; multiplies nothing.
    pub z: f64,
    /// `Qm`, the target daily load.
    pub average_demand: f64,
}

impl PenaltyParams {
    /// Published coefficients (`M=1, A=300, F=200, J=200, Z=200`) with `Qm`
    /// taken from the instance.
    pub fn for_instance(instance: &ProjectInstance) -> Self {
        Self {
            load: 1.0,
            duration: 300.0,
            continuity: 200.0,
            precedence: 200.0,
            z: 200.0,
            average_demand: instance.average_demand(),
        }
    }

    pub fn zero() -> Self {
        Self {
            load: 0.0,
            duration: 0.0,
            continuity: 0.0,
            precedence: 0.0,
            z: 0.0,
            average_demand: 0.0,
        }
    }

    /// Multiplies every penalty coefficient by `factor`; `Qm` is untouched.
    pub fn scaled(self, factor: f64) -> Self {
        Self {
            load: self.load * factor,
            duration: self.duration * factor,
            continuity: self.continuity * factor,
            precedence: self.precedence * factor,
            ..self
        }
    }

    pub fn check(&self) -> Result<(), String> {
        let named = [
            ("M", self.load),
            ("A", self.duration),
            ("F", self.continuity),
            ("J", self.precedence),
            ("Qm", self.average_demand),
        ];
        for (name, value) in named {
            if !(value.is_finite() && value >= 0.0) {
                return Err(format!(
                    "{name} must be a finite nonnegative number, got {value}"
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EnergyBreakdown {
    pub load: f64,
    pub duration: f64,
    pub continuity: f64,
    pub precedence: f64,
    pub total: f64,
}

impl EnergyBreakdown {
    fn from_terms(load: f64, duration: f64, continuity: f64, precedence: f64) -> Self {
        Self {
            load,
            duration,
            continuity,
            precedence,
            total: load + duration + continuity + precedence,
        }
    }
}

pub fn load_energy(
    schedule: &ScheduleMatrix,
    instance: &ProjectInstance,
    params: &PenaltyParams,
) -> Result<f64, DimensionMismatch> {
    schedule.check_shape(instance)?;
    Ok(load_term(schedule, instance, params))
}

pub fn duration_energy(
    schedule: &ScheduleMatrix,
    instance: &ProjectInstance,
    params: &PenaltyParams,
) -> Result<f64, DimensionMismatch> {
    schedule.check_shape(instance)?;
    Ok(duration_term(schedule, instance, params))
}

pub fn continuity_energy(
    schedule: &ScheduleMatrix,
    instance: &ProjectInstance,
    params: &PenaltyParams,
) -> Result<f64, DimensionMismatch> {
    schedule.check_shape(instance)?;
    Ok(continuity_term(schedule, params))
}

pub fn precedence_energy(
    schedule: &ScheduleMatrix,
    instance: &ProjectInstance,
    params: &PenaltyParams,
) -> Result<f64, DimensionMismatch> {
    schedule.check_shape(instance)?;
    Ok(precedence_term(schedule, instance, params))
}

pub fn total_energy(
    schedule: &ScheduleMatrix,
    instance: &ProjectInstance,
    params: &PenaltyParams,
) -> Result<EnergyBreakdown, DimensionMismatch> {
    schedule.check_shape(instance)?;
    Ok(EnergyBreakdown::from_terms(
        load_term(schedule, instance, params),
        duration_term(schedule, instance, params),
        continuity_term(schedule, params),
        precedence_term(schedule, instance, params),
    ))
}

fn column_load(schedule: &ScheduleMatrix, instance: &ProjectInstance, i: usize) -> f64 {
    instance
        .jobs()
        .iter()
        .enumerate()
        .filter(|(x, _)| schedule.get(x + 1, i))
        .map(|(_, job)| f64::from(job.demand))
        .sum()
}

fn load_term(schedule: &ScheduleMatrix, instance: &ProjectInstance, params: &PenaltyParams) -> f64 {
    if params.load == 0.0 {
        return 0.0;
    }
    let sum: f64 = (1..=schedule.cols())
        .map(|i| {
            let d = column_load(schedule, instance, i) - params.average_demand;
            d * d
        })
        .sum();
    0.5 * params.load * sum
}

fn duration_term(
    schedule: &ScheduleMatrix,
    instance: &ProjectInstance,
    params: &PenaltyParams,
) -> f64 {
    let sum: f64 = instance
        .jobs()
        .iter()
        .enumerate()
        .map(|(x, job)| {
            let d = schedule.row_sum(x + 1) as f64 - f64::from(job.duration);
            d * d
        })
        .sum();
    0.5 * params.duration * sum
}

// Each circular run contributes two unit transitions, so the term is F per run.
fn continuity_term(schedule: &ScheduleMatrix, params: &PenaltyParams) -> f64 {
    let runs: usize = (1..=schedule.rows())
        .map(|x| schedule.circular_runs(x))
        .sum();
    params.continuity * runs as f64
}

fn precedence_term(
    schedule: &ScheduleMatrix,
    instance: &ProjectInstance,
    params: &PenaltyParams,
) -> f64 {
    let lateness: usize = instance
        .front_pairs()
        .map(|(x, y)| start_gap(schedule.pos(x), schedule.pos(y)))
        .sum();
    params.precedence * lateness as f64
}

/// `(pos_y - pos_x) * sgn(pos_y - pos_x)` with `sgn(0) = 1`.
#[inline]
fn start_gap(pos_x: usize, pos_y: usize) -> usize {
    pos_y.saturating_sub(pos_x)
}

/// One neuron, addressed by 1-based job row and day column.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct NeuronIndex {
    pub row: usize,
    pub col: usize,
}

impl NeuronIndex {
    pub fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// 1-based linear index `(row - 1) * n + col`.
    pub fn linear(&self, n: usize) -> usize {
        (self.row - 1) * n + self.col
    }

    /// Inverse of [`NeuronIndex::linear`].
    pub fn from_linear(linear: usize, n: usize) -> Self {
        Self {
            row: (linear - 1) / n + 1,
            col: (linear - 1) % n + 1,
        }
    }

    pub(crate) fn offset(&self, n: usize) -> usize {
        self.linear(n) - 1
    }
}

/// Change in total energy if `neuron` were flipped.
///
/// Only the touched column load, row sum, circular neighbours and the
/// precedence pairs involving the row are evaluated.
pub fn delta_energy(
    schedule: &ScheduleMatrix,
    instance: &ProjectInstance,
    params: &PenaltyParams,
    neuron: NeuronIndex,
) -> f64 {
    let NeuronIndex { row: x, col: i } = neuron;
    let n = schedule.cols();
    let was_on = schedule.get(x, i);
    // +1 when switching on, -1 when switching off
    let sign = if was_on { -1.0 } else { 1.0 };
    let job = instance.job(x);

    let mut delta = 0.0;

    if params.load != 0.0 {
        let q = f64::from(job.demand);
        let before = column_load(schedule, instance, i) - params.average_demand;
        let after = before + sign * q;
        delta += 0.5 * params.load * (after * after - before * before);
    }

    {
        let before = schedule.row_sum(x) as f64 - f64::from(job.duration);
        let after = before + sign;
        delta += 0.5 * params.duration * (after * after - before * before);
    }

    if params.continuity != 0.0 && n > 1 {
        let prev = if i == 1 { n } else { i - 1 };
        let next = if i == n { 1 } else { i + 1 };
        let v = u8::from(was_on) as i32;
        let neighbours = [schedule.get(x, prev), schedule.get(x, next)];
        let mut transitions = 0i32;
        for nb in neighbours {
            let nb = u8::from(nb) as i32;
            // |1 - v - nb| - |v - nb|
            transitions += ((1 - v) - nb).abs() - (v - nb).abs();
        }
        delta += 0.5 * params.continuity * f64::from(transitions);
    }

    if params.precedence != 0.0 {
        let old_pos = schedule.pos(x);
        let new_pos = if was_on {
            if old_pos == i {
                schedule.row(x)[i..]
                    .iter()
                    .position(|&b| b == 1)
                    .map_or(n + 1, |k| i + 1 + k)
            } else {
                old_pos
            }
        } else {
            old_pos.min(i)
        };
        if new_pos != old_pos {
            let mut change: i64 = 0;
            for y in 1..=instance.job_count() {
                if y == x {
                    continue;
                }
                let pos_y = if instance.front(x, y) || instance.front(y, x) {
                    schedule.pos(y)
                } else {
                    continue;
                };
                if instance.front(x, y) {
                    change += start_gap(new_pos, pos_y) as i64 - start_gap(old_pos, pos_y) as i64;
                }
                if instance.front(y, x) {
                    change += start_gap(pos_y, new_pos) as i64 - start_gap(pos_y, old_pos) as i64;
                }
            }
            delta += params.precedence * change as f64;
        }
    }

    delta
}

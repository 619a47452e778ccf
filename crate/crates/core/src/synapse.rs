//! Hopfield weights and biases derived from the load, duration and
//! non-interrupt terms.
//!
//! For neurons `a = (x, i)` and `b = (y, j)`:
//!
//! ```text
//! T[a][b] = -M Q_x Q_y d(i,j) - A d(x,y) - F d(x,y) d(i,j) + 2F d(x,y) d(j, next(i))
//! I[a]    =  M Q_x Qm + A J_x                 (faithful)
//! I[a]    =  M Q_x Qm + A J_x - F/2           (corrected)
//! ```
//!
//! The precedence term has no weights or biases. `T` is not symmetric.

use crate::energy::{NeuronIndex, PenaltyParams};
use crate::error::DimensionMismatch;
use crate::instance::ProjectInstance;
use crate::schedule::ScheduleMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SynapseMode {
    /// Biases exactly as published.
    #[default]
    Faithful,
    /// Biases shifted by `-F/2` so the quadratic form reproduces the
    /// non-interrupt term up to a constant.
    Corrected,
}

impl std::str::FromStr for SynapseMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "faithful" => Ok(Self::Faithful),
            "corrected" => Ok(Self::Corrected),
            other => Err(format!(
                "unknown synapse mode {other:?} (expected faithful|corrected)"
            )),
        }
    }
}

/// Dense `(m n) x (m n)` weight matrix plus bias vector, row-major over
/// neuron offsets `linear - 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SynapticSystem {
    rows: usize,
    cols: usize,
    weights: Vec<f64>,
    biases: Vec<f64>,
    mode: SynapseMode,
}

impl SynapticSystem {
    pub fn build(instance: &ProjectInstance, params: &PenaltyParams, mode: SynapseMode) -> Self {
        let m = instance.job_count();
        let n = instance.horizon();
        let size = m * n;
        let mut weights = vec![0.0; size * size];
        let mut biases = vec![0.0; size];

        let next = |i: usize| i % n + 1;
        let demand = |x: usize| f64::from(instance.job(x).demand);

        for x in 1..=m {
            for i in 1..=n {
                let a = NeuronIndex::new(x, i).offset(n);
                let row = &mut weights[a * size..(a + 1) * size];
                // load coupling: same day, every job pair
                for y in 1..=m {
                    row[NeuronIndex::new(y, i).offset(n)] -= params.load * demand(x) * demand(y);
                }
                // duration coupling: same job, every day pair
                for j in 1..=n {
                    row[NeuronIndex::new(x, j).offset(n)] -= params.duration;
                }
                row[a] -= params.continuity;
                row[NeuronIndex::new(x, next(i)).offset(n)] += 2.0 * params.continuity;

                let mut bias = params.load * demand(x) * params.average_demand
                    + params.duration * f64::from(instance.job(x).duration);
                if mode == SynapseMode::Corrected {
                    bias -= 0.5 * params.continuity;
                }
                biases[a] = bias;
            }
        }

        Self {
            rows: m,
            cols: n,
            weights,
            biases,
            mode,
        }
    }

    pub fn mode(&self) -> SynapseMode {
        self.mode
    }

    pub fn neuron_count(&self) -> usize {
        self.biases.len()
    }

    /// Weight between neurons `a` and `b`.
    pub fn weight(&self, a: NeuronIndex, b: NeuronIndex) -> f64 {
        let size = self.neuron_count();
        self.weights[a.offset(self.cols) * size + b.offset(self.cols)]
    }

    pub fn bias(&self, a: NeuronIndex) -> f64 {
        self.biases[a.offset(self.cols)]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn biases(&self) -> &[f64] {
        &self.biases
    }

    fn check_shape(&self, schedule: &ScheduleMatrix) -> Result<(), DimensionMismatch> {
        if schedule.rows() == self.rows && schedule.cols() == self.cols {
            Ok(())
        } else {
            Err(DimensionMismatch {
                rows: schedule.rows(),
                cols: schedule.cols(),
                jobs: self.rows,
                days: self.cols,
            })
        }
    }

    /// `-(1/2) sum_ab T_ab v_a v_b - sum_a I_a v_a` over all ordered pairs.
    pub fn quadratic_energy(&self, schedule: &ScheduleMatrix) -> Result<f64, DimensionMismatch> {
        self.check_shape(schedule)?;
        let size = self.neuron_count();
        let v = schedule.as_slice();
        let mut pair = 0.0;
        let mut linear = 0.0;
        for a in (0..size).filter(|&a| v[a] == 1) {
            let row = &self.weights[a * size..(a + 1) * size];
            pair += row
                .iter()
                .zip(v)
                .filter(|(_, &vb)| vb == 1)
                .map(|(t, _)| t)
                .sum::<f64>();
            linear += self.biases[a];
        }
        Ok(-0.5 * pair - linear)
    }

    /// `h_a = sum_b T_ab v_b + I_a`, including the self weight.
    pub fn local_field(&self, schedule: &ScheduleMatrix, neuron: NeuronIndex) -> f64 {
        let size = self.neuron_count();
        let a = neuron.offset(self.cols);
        let row = &self.weights[a * size..(a + 1) * size];
        let input: f64 = row
            .iter()
            .zip(schedule.as_slice())
            .filter(|(_, &vb)| vb == 1)
            .map(|(t, _)| t)
            .sum();
        input + self.biases[a]
    }
}

/// Constant dropped by the quadratic form: `(M/2) n Qm^2 + (A/2) sum_x J_x^2`.
pub fn quadratic_offset(instance: &ProjectInstance, params: &PenaltyParams) -> f64 {
    let durations: f64 = instance
        .jobs()
        .iter()
        .map(|j| f64::from(j.duration).powi(2))
        .sum();
    0.5 * params.load * instance.horizon() as f64 * params.average_demand.powi(2)
        + 0.5 * params.duration * durations
}

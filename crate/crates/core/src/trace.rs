use std::io::{self, Write};

/// One inner step of an annealing run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    /// Outer iteration, starting at 0.
    pub outer: usize,
    pub temperature: f64,
    /// Global inner-step counter, starting at 1.
    pub step: u64,
    /// Energy of the current state after the acceptance decision.
    pub energy: f64,
    pub best_energy: f64,
    pub accepted: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct EnergyTrace {
    /// Energy of the initial state.
    pub initial_energy: f64,
    pub records: Vec<TraceRecord>,
}

impl EnergyTrace {
    pub const CSV_HEADER: &'static str = "outer,temperature,step,energy,best_energy,accepted";

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Steps that were accepted and raised the energy.
    pub fn uphill_accepted(&self) -> impl Iterator<Item = &TraceRecord> + '_ {
        let previous =
            std::iter::once(self.initial_energy).chain(self.records.iter().map(|r| r.energy));
        self.records
            .iter()
            .zip(previous)
            .filter(|(r, prev)| r.accepted && r.energy > *prev)
            .map(|(r, _)| r)
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "{}", Self::CSV_HEADER)?;
        for r in &self.records {
            writeln!(
                out,
                "{},{:.9e},{},{:.9e},{:.9e},{}",
                r.outer,
                r.temperature,
                r.step,
                r.energy,
                r.best_energy,
                u8::from(r.accepted)
            )?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is ascii")
    }
}

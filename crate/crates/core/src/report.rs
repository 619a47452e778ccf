//! Fixed-width text reports.
//!
//! Every rendering is a pure function of its inputs. Wall-clock time is only
//! printed when explicitly requested.

use std::fmt::Write as _;

use crate::batch::BatchSummary;
use crate::energy::{EnergyBreakdown, PenaltyParams};
use crate::instance::{Diagnostic, ProjectInstance};
use crate::oracle::OracleReport;
use crate::schedule::{profile, DecodedSchedule, ResourceProfile};
use crate::solver::{SolverConfig, TrialResult};

/// Day-by-day load table: a `Day` header row and one row per labelled profile.
pub fn profile_table(rows: &[(&str, &ResourceProfile)]) -> String {
    let days = rows.first().map_or(0, |(_, p)| p.daily.len());
    let label_width = rows.iter().map(|(l, _)| l.len()).max().unwrap_or(0).max(8);
    let mut out = String::new();
    let _ = write!(out, "{:<label_width$}", "Day");
    for d in 1..=days {
        let _ = write!(out, " {d:>4}");
    }
    out.push_str("  Variance\n");
    for (label, p) in rows {
        let _ = write!(out, "{label:<label_width$}");
        for load in &p.daily {
            let _ = write!(out, " {load:>4}");
        }
        let variance = p.variance().unwrap_or(0.0);
        let _ = writeln!(out, "  {variance:>8.2}");
    }
    out
}

fn energy_line(e: &EnergyBreakdown) -> String {
    format!(
        "energy   total {:.3}  e0 {:.3}  e1 {:.3}  e2 {:.3}  e3 {:.3}\n",
        e.total, e.load, e.duration, e.continuity, e.precedence
    )
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn starts_line(instance: &ProjectInstance, d: &DecodedSchedule) -> String {
    let parts: Vec<String> = instance
        .jobs()
        .iter()
        .zip(&d.starts)
        .map(|(j, s)| format!("{}={}", j.id, s))
        .collect();
    format!("starts   {}\n", parts.join(" "))
}

fn flags_line(d: &DecodedSchedule) -> String {
    format!(
        "flags    durations_match={} contiguous={} precedence_paper={} precedence_strict={}\n",
        yes_no(d.durations_match),
        yes_no(d.rows_contiguous_linear),
        yes_no(d.precedence_paper_mode),
        yes_no(d.precedence_strict)
    )
}

pub fn params_line(params: &PenaltyParams, config: &SolverConfig) -> String {
    format!(
        "params   M={} A={} F={} J={} Z={} (unused) Qm={:.4} K={} T0={} a={} L={} Estop={} max_outer={} seed={}\n",
        params.load,
        params.duration,
        params.continuity,
        params.precedence,
        params.z,
        params.average_demand,
        config.metropolis_scale,
        config.initial_temperature,
        config.cooling_rate,
        config.chain_length,
        config.stop_temperature,
        config.max_outer,
        config.seed,
    )
}

/// Summary of a single trial.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub profile: ResourceProfile,
    pub variance: f64,
    pub energy: EnergyBreakdown,
    pub decoded: DecodedSchedule,
    pub steps: u64,
    pub outer_iterations: usize,
    /// Best feasible state, when it differs from the lowest-energy state.
    pub feasible: Option<(ResourceProfile, DecodedSchedule)>,
}

impl RunReport {
    pub fn from_trial(instance: &ProjectInstance, result: &TrialResult) -> Self {
        let feasible = result
            .best_feasible
            .as_ref()
            .filter(|f| f.schedule != result.best_schedule)
            .map(|f| {
                (
                    profile(&f.schedule, instance).expect("shape checked"),
                    f.decoded.clone(),
                )
            });
        Self {
            profile: profile(&result.best_schedule, instance).expect("shape checked"),
            variance: result.best_variance,
            energy: result.best_energy,
            decoded: result.decoded.clone(),
            steps: result.iteration_steps,
            outer_iterations: result.outer_iterations,
            feasible,
        }
    }

    pub fn render(&self, instance: &ProjectInstance) -> String {
        let mut rows = vec![("DHNN-SA", &self.profile)];
        if let Some((p, _)) = &self.feasible {
            rows.push(("feasible", p));
        }
        let mut out = profile_table(&rows);
        out.push_str(&energy_line(&self.energy));
        let _ = writeln!(
            out,
            "steps    {} ({} outer iterations)",
            self.steps, self.outer_iterations
        );
        out.push_str(&starts_line(instance, &self.decoded));
        out.push_str(&flags_line(&self.decoded));
        if let Some((_, d)) = &self.feasible {
            out.push_str("feasible state:\n");
            out.push_str(&starts_line(instance, d));
        } else if !self.decoded.is_feasible() {
            out.push_str("no feasible state visited\n");
        }
        out
    }
}

/// Per-trial rows and the averages row. Times are shown only when `timing` is set.
pub fn render_batch(summary: &BatchSummary, timing: bool) -> String {
    let mut out = String::new();
    if timing {
        out.push_str("No     Seed     Steps   Time(s)    Min-Energy  Variance\n");
    } else {
        out.push_str("No     Seed     Steps    Min-Energy  Variance\n");
    }
    for row in &summary.rows {
        let _ = write!(out, "{:<4} {:>6} {:>9}", row.index + 1, row.seed, row.steps);
        if timing {
            let _ = write!(out, " {:>9.3}", row.wall_time.as_secs_f64());
        }
        let _ = writeln!(out, " {:>13.2} {:>9.2}", row.min_energy, row.variance);
    }
    let avg = &summary.averages;
    let _ = write!(out, "{:<4} {:>6} {:>9.0}", "Avg", "", avg.steps);
    if timing {
        let _ = write!(out, " {:>9.3}", avg.wall_time.as_secs_f64());
    }
    let _ = writeln!(out, " {:>13.2} {:>9.2}", avg.min_energy, avg.variance);
    out
}

pub fn render_oracle(instance: &ProjectInstance, report: &OracleReport) -> String {
    let p = profile(&report.optimal_schedule, instance).expect("oracle builds matching shape");
    let mut out = String::new();
    let _ = writeln!(out, "mode {}", report.precedence_mode);
    let _ = writeln!(
        out,
        "optimal_variance {:.2}, feasible {}",
        report.optimal_variance, report.feasible_count
    );
    let parts: Vec<String> = instance
        .jobs()
        .iter()
        .zip(&report.optimal_starts)
        .map(|(j, s)| format!("{}={}", j.id, s))
        .collect();
    let _ = writeln!(out, "starts   {}", parts.join(" "));
    out.push_str(&profile_table(&[("Oracle", &p)]));
    out
}

pub fn render_diagnostics(diagnostics: &[Diagnostic]) -> String {
    if diagnostics.is_empty() {
        return "OK\n".to_string();
    }
    diagnostics.iter().map(|d| format!("{d}\n")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_layout() {
        let original =
            ResourceProfile::new(vec![14, 14, 19, 19, 20, 8, 12, 12, 12, 12, 9, 5, 5, 5]);
        let table = profile_table(&[("Original", &original)]);
        let lines: Vec<&str> = table.lines().collect();
        assert!(lines[0].starts_with("Day"));
        assert!(lines[0].ends_with("Variance"));
        assert!(lines[1].starts_with("Original"));
        assert!(lines[1].ends_with("24.41"));
        let sum: u64 = lines[1]
            .split_whitespace()
            .skip(1)
            .take(14)
            .map(|t| t.parse::<u64>().unwrap())
            .sum();
        assert_eq!(sum, original.total());
    }

    #[test]
    fn diagnostics_ok() {
        assert_eq!(render_diagnostics(&[]), "OK\n");
    }
}

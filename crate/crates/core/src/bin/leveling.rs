use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use hopfield_leveling::instance::{parse_instance, parse_instance_unchecked};
use hopfield_leveling::report::{
    params_line, render_batch, render_diagnostics, render_oracle, RunReport,
};
use hopfield_leveling::{
    optimal_variance, run, run_batch_with_workers, InitStrategy, OracleError, PenaltyParams,
    PrecedenceMode, ProjectInstance, SolverConfig, SolverError, SynapseMode,
};

const EXIT_INVALID: u8 = 1;
const EXIT_INFEASIBLE: u8 = 2;

/// Resource leveling with a Hopfield-generated annealing search.
#[derive(Debug, Parser)]
#[command(name = "leveling", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run one annealing trial and print the best schedule.
    Solve {
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
        /// Write the per-step energy trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Run several trials with consecutive seeds.
    Batch {
        instance: PathBuf,
        #[command(flatten)]
        solver: SolverFlags,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Worker thread cap.
        #[arg(long)]
        jobs: Option<usize>,
        /// Include wall-clock columns (output is then no longer reproducible).
        #[arg(long)]
        timing: bool,
    },
    /// Exhaustively find the minimum-variance schedule.
    Oracle {
        instance: PathBuf,
        #[arg(long, default_value = "paper")]
        mode: PrecedenceMode,
    },
    /// Validate an instance file.
    Check { instance: PathBuf },
}

#[derive(Debug, Args)]
struct SolverFlags {
    #[arg(long = "M", default_value_t = 1.0)]
    m: f64,
    #[arg(long = "A", default_value_t = 300.0)]
    a_weight: f64,
    #[arg(long = "F", default_value_t = 200.0)]
    f: f64,
    #[arg(long = "J", default_value_t = 200.0)]
    j: f64,
    /// Accepted and echoed; no energy term uses it.
    #[arg(long = "Z", default_value_t = 200.0)]
    z: f64,
    #[arg(long = "K", default_value_t = 1.0)]
    k: f64,
    #[arg(long = "T0", default_value_t = 100.0)]
    t0: f64,
    /// Cooling rate.
    #[arg(long = "a", default_value_t = 0.90)]
    a: f64,
    /// Markov chain length per temperature.
    #[arg(long = "L", default_value_t = 1000)]
    l: usize,
    #[arg(long = "Estop", default_value_t = 0.01)]
    estop: f64,
    #[arg(long = "max-outer", default_value_t = 200)]
    max_outer: usize,
    #[arg(long, default_value = "random")]
    init: InitStrategy,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "faithful")]
    synapses: SynapseMode,
}

impl SolverFlags {
    fn params(&self, instance: &ProjectInstance) -> PenaltyParams {
        PenaltyParams {
            load: self.m,
            duration: self.a_weight,
            continuity: self.f,
            precedence: self.j,
            z: self.z,
            average_demand: instance.average_demand(),
        }
    }

    fn config(&self) -> SolverConfig {
        SolverConfig {
            initial_temperature: self.t0,
            cooling_rate: self.a,
            chain_length: self.l,
            metropolis_scale: self.k,
            stop_temperature: self.estop,
            max_outer: self.max_outer,
            init: self.init,
            seed: self.seed,
            synapse_mode: self.synapses,
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn invalid(message: impl ToString) -> Self {
        Self {
            code: EXIT_INVALID,
            message: message.to_string(),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        Self::invalid(e)
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        Self {
            code: EXIT_INFEASIBLE,
            message: e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<ProjectInstance, Failure> {
    parse_instance(&read(path)?).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

fn execute(command: Command) -> Result<String, Failure> {
    match command {
        Command::Solve {
            instance,
            solver,
            trace,
        } => {
            let inst = load(&instance)?;
            let params = solver.params(&inst);
            let config = solver.config();
            let (result, energy_trace) = run(&inst, &params, &config)?;
            if let Some(path) = trace {
                let file = fs::File::create(&path)
                    .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
                energy_trace
                    .write_csv(std::io::BufWriter::new(file))
                    .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
            }
            let mut out = params_line(&params, &config);
            out.push_str(&RunReport::from_trial(&inst, &result).render(&inst));
            Ok(out)
        }
        Command::Batch {
            instance,
            solver,
            trials,
            jobs,
            timing,
        } => {
            if jobs == Some(0) {
                return Err(Failure::invalid("--jobs must be at least 1"));
            }
            let inst = load(&instance)?;
            let params = solver.params(&inst);
            let config = solver.config();
            let summary = run_batch_with_workers(&inst, &params, &config, trials, jobs)?;
            let mut out = params_line(&params, &config);
            out.push_str(&render_batch(&summary, timing));
            Ok(out)
        }
        Command::Oracle { instance, mode } => {
            let inst = load(&instance)?;
            match optimal_variance(&inst, mode) {
                Ok(report) => Ok(render_oracle(&inst, &report)),
                Err(OracleError::Infeasible) => Err(Failure {
                    code: EXIT_INFEASIBLE,
                    message: format!("infeasible: no {mode}-mode schedule fits the horizon"),
                }),
                Err(e) => Err(e.into()),
            }
        }
        Command::Check { instance } => {
            let inst = parse_instance_unchecked(&read(&instance)?)
                .map_err(|e| Failure::invalid(format!("{}: {e}", instance.display())))?;
            let diagnostics = inst.validate();
            let text = render_diagnostics(&diagnostics);
            if diagnostics.iter().any(|d| d.is_fatal()) {
                Err(Failure::invalid(text.trim_end()))
            } else {
                Ok(text)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli.command) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            eprintln!("{}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 for usage errors, 1 for numerical or domain
//! errors (with a one-line diagnostic on stderr).

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::build_generator;
use crate::info::{phi_mi_against, shannon_entropy, standard_mutual_information, Divergence};
use crate::oracle::{sample_steady, TrajectoryStats, DEFAULT_BURN_IN};
use crate::params::{Param, SystemParams};
use crate::solver::{auto_time_step, evolve, StateDistribution};
use crate::sweep::{
    emit_csv, figure_preset, linear_grid, run_sweep, Binding, Disconnection, Figure, SweepSpec,
};

#[derive(Debug, Parser)]
#[command(
    name = "dqd",
    version,
    about = "Coupled double quantum dot: steady states, integrated information, sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Steady states p and q and the divergence between them, as JSON on stdout.
    Steady {
        #[arg(long)]
        params: PathBuf,
        /// Binding such as `mu_d=eps_x+u/2`; may be repeated.
        #[arg(long = "bind")]
        bindings: Vec<String>,
        /// How the u = 0 reference treats bound parameters: rebind or keep.
        #[arg(long, default_value = "rebind")]
        disconnect: String,
    },
    /// Sweep one parameter and write a CSV table.
    Sweep {
        #[arg(long)]
        params: PathBuf,
        #[arg(long = "var")]
        var: String,
        #[arg(long, allow_hyphen_values = true)]
        from: f64,
        #[arg(long, allow_hyphen_values = true)]
        to: f64,
        #[arg(long)]
        step: f64,
        #[arg(long = "bind")]
        bindings: Vec<String>,
        #[arg(long, default_value = "rebind")]
        disconnect: String,
        /// Output CSV path, `-` for stdout.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write every curve of a figure preset as `<figure>_<label>.csv`.
    Figure {
        name: String,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Kinetic Monte Carlo estimate of the stationary occupation.
    Sample {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        events: u64,
        #[arg(long, default_value_t = DEFAULT_BURN_IN)]
        burn_in: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Integrate the master equation from the uniform distribution.
    Evolve {
        #[arg(long)]
        params: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        t_end: f64,
        #[arg(long, allow_hyphen_values = true)]
        dt: Option<f64>,
        #[arg(long)]
        out: PathBuf,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn cli_main<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match run(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {}", e.to_string().replace('\n', " "));
            match e {
                Error::Usage(_) => 2,
                _ => 1,
            }
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Steady {
            params,
            bindings,
            disconnect,
        } => {
            let params = read_params(&params)?;
            let spec = build_spec(params, Param::U, vec![params.u], &bindings, &disconnect)?;
            let connected = spec.connected(params.u);
            let disconnected = spec.disconnected(params.u);
            connected.validate()?;
            let result = phi_mi_against(&connected, &disconnected)?;
            let report = SteadyReport {
                params: connected,
                disconnected_params: disconnected,
                p: result.p,
                q: result.q,
                phi: result.phi,
                per_state_terms: result.per_state_terms,
                entropy_p: shannon_entropy(&result.p),
                standard_mi: standard_mutual_information(&result.p),
            };
            let stdout = io::stdout();
            let mut out = stdout.lock();
            write_json(&report, &mut out)
        }
        Command::Sweep {
            params,
            var,
            from,
            to,
            step,
            bindings,
            disconnect,
            out,
        } => {
            let params = read_params(&params)?;
            let swept: Param = var.parse()?;
            let grid = linear_grid(from, to, step)?;
            let spec = build_spec(params, swept, grid, &bindings, &disconnect)?;
            let records = run_sweep(&spec)?;
            if out.as_os_str() == "-" {
                let stdout = io::stdout();
                let mut lock = stdout.lock();
                emit_csv(&records, &mut lock)
            } else {
                let mut file = BufWriter::new(File::create(&out)?);
                emit_csv(&records, &mut file)?;
                file.flush()?;
                Ok(())
            }
        }
        Command::Figure { name, out_dir } => {
            let figure: Figure = name.parse()?;
            fs::create_dir_all(&out_dir)?;
            for member in figure_preset(figure) {
                let records = run_sweep(&member.spec)?;
                let path = out_dir.join(member.file_name(figure));
                let mut file = BufWriter::new(File::create(&path)?);
                emit_csv(&records, &mut file)?;
                file.flush()?;
            }
            Ok(())
        }
        Command::Sample {
            params,
            seed,
            events,
            burn_in,
            out,
        } => {
            let params = read_params(&params)?;
            if events == 0 {
                return Err(Error::Usage("--events must be positive".into()));
            }
            let stats = sample_steady(&params, seed, events, burn_in)?;
            write_json_file(&SampleReport { stats, burn_in }, &out)
        }
        Command::Evolve {
            params,
            t_end,
            dt,
            out,
        } => {
            let params = read_params(&params)?;
            let generator = build_generator(&params)?;
            let p0 = StateDistribution::uniform();
            let p = evolve(&generator, &p0, t_end, dt)?;
            let report = EvolveReport {
                t_end,
                dt: dt.unwrap_or_else(|| auto_time_step(&generator)),
                p0,
                p,
            };
            write_json_file(&report, &out)
        }
    }
}

#[derive(Serialize)]
struct SteadyReport {
    params: SystemParams,
    disconnected_params: SystemParams,
    p: StateDistribution,
    q: StateDistribution,
    phi: Divergence,
    per_state_terms: [f64; 4],
    entropy_p: f64,
    standard_mi: f64,
}

#[derive(Serialize)]
struct SampleReport {
    #[serde(flatten)]
    stats: TrajectoryStats,
    burn_in: u64,
}

#[derive(Serialize)]
struct EvolveReport {
    t_end: f64,
    /// Requested step; the integrator may shrink it to land on `t_end`.
    dt: f64,
    p0: StateDistribution,
    p: StateDistribution,
}

fn build_spec(
    params: SystemParams,
    swept: Param,
    grid: Vec<f64>,
    bindings: &[String],
    disconnect: &str,
) -> Result<SweepSpec> {
    let mut spec = SweepSpec::new(params, swept, grid);
    spec.disconnection = disconnect.parse::<Disconnection>()?;
    for b in bindings {
        spec = spec.with_binding(b.parse::<Binding>()?);
    }
    spec.validate()?;
    Ok(spec)
}

fn read_params(path: &Path) -> Result<SystemParams> {
    let text = fs::read_to_string(path)?;
    SystemParams::from_json_str(&text)
}

fn write_json<T: Serialize, W: Write>(value: &T, out: &mut W) -> Result<()> {
    serde_json::to_writer_pretty(&mut *out, value)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn write_json_file<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut file = BufWriter::new(File::create(path)?);
    write_json(value, &mut file)?;
    file.flush()?;
    Ok(())
}

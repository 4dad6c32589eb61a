//! `hedrop`: tables and figure datasets for levitated helium drops.

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Args, Parser, Subcommand};

use config::{Format, RunConfig};
use error::CliResult;

#[derive(Debug, Parser)]
#[command(name = "hedrop", version, about = "Optomechanics of levitated superfluid-helium drops")]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

/// Settings shared by every subcommand. Flags override the config file.
#[derive(Debug, Args)]
struct GlobalArgs {
    /// Flat `key = value` configuration file
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Directory holding the property tables (falls back to HEDROP_DATA_DIR, then the bundled copy)
    #[arg(long, global = true, value_name = "PATH")]
    data_dir: Option<PathBuf>,
    /// Output file (a directory for `figures`); stdout when absent
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// he3 or he4
    #[arg(long, global = true)]
    isotope: Option<String>,
    /// Drop radius, m
    #[arg(long, global = true)]
    radius: Option<f64>,
    /// Drop temperature, K
    #[arg(long, global = true)]
    temperature: Option<f64>,
    /// Optical wavelength, m
    #[arg(long, global = true)]
    wavelength: Option<f64>,
    /// Laser input power, W
    #[arg(long, global = true)]
    power: Option<f64>,
    /// Constant heat load, W
    #[arg(long, global = true)]
    heat_load: Option<f64>,
    /// Optical quality factor of the readout mode
    #[arg(long, global = true)]
    q_opt: Option<f64>,
}

impl GlobalArgs {
    fn config(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        if let Some(iso) = &self.isotope {
            cfg.set("isotope", iso)?;
        }
        let numbers = [
            (self.radius, &mut cfg.radius),
            (self.temperature, &mut cfg.temperature),
            (self.wavelength, &mut cfg.wavelength),
            (self.power, &mut cfg.input_power),
            (self.heat_load, &mut cfg.heat_load),
            (self.q_opt, &mut cfg.q_opt),
        ];
        for (flag, field) in numbers {
            if let Some(v) = flag {
                *field = v;
            }
        }
        if self.data_dir.is_some() {
            cfg.data_dir.clone_from(&self.data_dir);
        }
        if self.out.is_some() {
            cfg.output.clone_from(&self.out);
        }
        if self.format.is_some() {
            cfg.format = self.format;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Thermodynamic properties over a temperature sweep
    Props {
        /// Lower sweep end, K (defaults to the configured temperature)
        #[arg(long)]
        t_min: Option<f64>,
        /// Upper sweep end, K
        #[arg(long)]
        t_max: Option<f64>,
        /// Log-spaced sweep points
        #[arg(long, default_value_t = 1)]
        points: u32,
    },
    /// Surface and compressional mode frequencies
    Spectrum {
        #[arg(long, default_value_t = 10)]
        l_max: u32,
        #[arg(long, default_value_t = 3)]
        n_max: u32,
    },
    /// Optomechanical and rotational coupling constants
    Couplings {
        /// Static l = 2 distortion as a fraction of R, for the multiplet splitting
        #[arg(long, default_value_t = 0.01)]
        distortion: f64,
    },
    /// Optical and mechanical quality factors
    Qfactors {
        /// Also evaluate the surface-scattering integral numerically
        #[arg(long)]
        quadrature: bool,
    },
    /// Evaporative cooling trajectory
    Cool {
        /// Initial temperature, K (4.0 for He4, 2.5 for He3)
        #[arg(long)]
        t_start: Option<f64>,
        #[arg(long, default_value_t = 60.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, default_value_t = 10)]
        per_decade: u32,
    },
    /// Rotation readout budget and noise terms
    #[command(group(ArgGroup::new("spin").required(true).args(["omega", "lz"])))]
    Qnd {
        /// Spin rate, rad/s
        #[arg(long)]
        omega: Option<f64>,
        /// Angular momentum, J s
        #[arg(long)]
        lz: Option<f64>,
        /// Fraction of photons scattered out of the mode
        #[arg(long, default_value_t = hedrop::rotation::DEFAULT_SCATTER_FRACTION)]
        scatter: f64,
    },
    /// Coupled rotation and l = 2 vibration in radius units
    Rovib {
        /// Initial state JSON; the zero state when absent
        #[arg(long, value_name = "PATH")]
        state: Option<PathBuf>,
        /// Duration in units of sqrt(rho R^3 / sigma)
        #[arg(long, default_value_t = 100.0)]
        t_end: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// Report the small-oscillation spectrum about the spinning equilibrium
        #[arg(long)]
        linearize: bool,
        /// Spin rate for --linearize, in units of the vibration frequency
        #[arg(long, default_value_t = 1e-3)]
        omega: f64,
    },
    /// Writes table1.json, fig2.csv, fig3.csv and fig4.csv into --out (default: current directory)
    Figures,
}

fn run(cli: Cli) -> CliResult<()> {
    let cfg = cli.global.config()?;
    match cli.command {
        Command::Props { t_min, t_max, points } => commands::props(&cfg, t_min, t_max, points),
        Command::Spectrum { l_max, n_max } => commands::spectrum(&cfg, l_max, n_max),
        Command::Couplings { distortion } => commands::couplings(&cfg, distortion),
        Command::Qfactors { quadrature } => commands::qfactors(&cfg, quadrature),
        Command::Cool {
            t_start,
            t_end,
            tol,
            per_decade,
        } => commands::cool::run(&cfg, t_start, t_end, tol, per_decade),
        Command::Qnd { omega, lz, scatter } => commands::qnd::run(&cfg, omega, lz, scatter),
        Command::Rovib {
            state,
            t_end,
            tol,
            samples,
            linearize,
            omega,
        } => commands::rovib::run(&cfg, state.as_deref(), t_end, tol, samples, linearize.then_some(omega)),
        Command::Figures => commands::figures::run(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(64) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("hedrop: {e}");
            e.exit_code()
        }
    }
}


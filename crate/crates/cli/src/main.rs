use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use cntflow_cli::{cmd_mesh_study, cmd_solve, cmd_sweep, cmd_validate, CliError, RunConfig, SweepSpec};

/// Boundary-layer solver for nanotube nanofluid flow over an exponentially
/// stretching sheet.
#[derive(Parser, Debug)]
#[command(name = "cntflow", version, about)]
struct Cli {
    /// Increase log verbosity (-v info, -vv debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Solve one configuration and write profile.csv.
    Solve(RunArgs),
    /// Compare clean-case wall heat flux with reference values.
    Validate {
        /// Absolute tolerance applied to every row instead of the defaults.
        #[arg(long = "abs-tol")]
        abs_tol: Option<f64>,
    },
    /// Vary parameters one at a time over the table baseline.
    Sweep {
        /// `name=v1,v2,...`; repeat to sweep several parameters.
        #[arg(long = "param", required = true)]
        params: Vec<String>,
        /// Particle set: swcnt, mwcnt, both, or density,specific_heat,conductivity.
        #[arg(long, default_value = "both")]
        particles: String,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Richardson convergence ratios from solves at h, h/2 and h/4.
    MeshStudy {
        #[command(flatten)]
        run: RunArgs,
        /// Adds bias*h to the wall values (detector self-check only).
        #[arg(long, hide = true, default_value_t = 0.0)]
        first_order_bias: f64,
    },
}

/// Flags mirror the config-file keys; flags win over file values.
#[derive(Args, Debug, Default)]
struct RunArgs {
    /// File of `key = value` lines using the flag names below.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    phi: Option<String>,
    #[arg(long = "porosity_k", alias = "porosity-k")]
    porosity_k: Option<String>,
    #[arg(long = "forchheimer_fr", alias = "forchheimer-fr")]
    forchheimer_fr: Option<String>,
    #[arg(long = "magnetic_m", alias = "magnetic-m")]
    magnetic_m: Option<String>,
    #[arg(long = "radiation_r", alias = "radiation-r")]
    radiation_r: Option<String>,
    #[arg(long)]
    prandtl: Option<String>,
    #[arg(long = "suction_s", alias = "suction-s", allow_hyphen_values = true)]
    suction_s: Option<String>,
    #[arg(long = "velocity_slip", alias = "velocity-slip")]
    velocity_slip: Option<String>,
    #[arg(long = "thermal_slip", alias = "thermal-slip")]
    thermal_slip: Option<String>,
    /// literal or restated form of the radiative conduction coefficient.
    #[arg(long = "energy_form", alias = "energy-form")]
    energy_form: Option<String>,
    /// swcnt, mwcnt, kerosene, or density,specific_heat,conductivity.
    #[arg(long)]
    particle: Option<String>,
    #[arg(long)]
    base: Option<String>,
    #[arg(long = "eta_max", alias = "eta-max")]
    eta_max: Option<String>,
    #[arg(long = "n_nodes", alias = "n-nodes")]
    n_nodes: Option<String>,
    #[arg(long)]
    tolerance: Option<String>,
    /// kellerbox, shooting or both.
    #[arg(long)]
    solver: Option<String>,
    /// Output directory.
    #[arg(long)]
    out: Option<String>,
}

impl RunArgs {
    fn build(&self, mut config: RunConfig) -> Result<RunConfig, CliError> {
        if let Some(path) = &self.config {
            config.apply_file(path)?;
        }
        let flags = [
            ("phi", &self.phi),
            ("porosity_k", &self.porosity_k),
            ("forchheimer_fr", &self.forchheimer_fr),
            ("magnetic_m", &self.magnetic_m),
            ("radiation_r", &self.radiation_r),
            ("prandtl", &self.prandtl),
            ("suction_s", &self.suction_s),
            ("velocity_slip", &self.velocity_slip),
            ("thermal_slip", &self.thermal_slip),
            ("energy_form", &self.energy_form),
            ("particle", &self.particle),
            ("base", &self.base),
            ("eta_max", &self.eta_max),
            ("n_nodes", &self.n_nodes),
            ("tolerance", &self.tolerance),
            ("solver", &self.solver),
            ("out", &self.out),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        Ok(config)
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let code = match cli.command {
        Command::Solve(args) => {
            let config = args.build(RunConfig::default())?;
            cmd_solve(&config, &mut out)?.exit_code()
        }
        Command::Validate { abs_tol } => cmd_validate(abs_tol, &mut out)?.exit_code(),
        Command::Sweep { params, particles, run } => {
            let baseline = run.build(RunConfig::table_baseline())?;
            let spec = SweepSpec::parse(&params, &particles)?;
            cmd_sweep(&spec, &baseline, &mut out)?.exit_code()
        }
        Command::MeshStudy { run, first_order_bias } => {
            let config = run.build(RunConfig::default())?;
            cmd_mesh_study(&config, first_order_bias, &mut out)?.exit_code()
        }
    };
    out.flush().ok();
    Ok(code)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // Usage errors share the invalid-input code; 2 means non-convergence.
            return ExitCode::from(if e.use_stderr() {
                cntflow_cli::EXIT_INVALID as u8
            } else {
                0
            });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let code = match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}

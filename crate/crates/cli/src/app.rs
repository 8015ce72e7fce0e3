use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde_json::Value;

use crate::checks::{run_check, CHECKS};
use crate::commands::{self, Composition, Output};
use crate::config::{parse_list, CheckConfig};
use crate::error::CliError;
use crate::family::FamilySpec;

#[derive(Debug, Parser)]
#[command(name = "ncps", version, about = "Exact and numerical spectral checks for Dirac operators on noncommutative tori")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args, Default)]
struct Common {
    /// Write the JSON report to this path ("-" for stdout).
    #[arg(long, global = true)]
    json: Option<String>,
    #[arg(long, global = true)]
    dim: Option<usize>,
    #[arg(long = "t-order", global = true)]
    t_order: Option<u32>,
    /// Lowest symbol degree kept.
    #[arg(long, global = true, allow_hyphen_values = true)]
    floor: Option<i32>,
    /// Lattice cutoff L of the mode box |k|_inf <= L.
    #[arg(long, global = true)]
    cutoff: Option<i64>,
    /// Upper-triangle entries of Theta, e.g. "0.37" or "0.3,0.1,0.2".
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the named checks.
    List,
    /// Run a named check.
    Verify {
        name: String,
        /// Lattice vector of the unitary, e.g. "1,0,0".
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        level: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        family: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Residue density of a symbol built from a family.
    Wres {
        #[arg(long)]
        family: Option<PathBuf>,
        /// sign, abs-inverse or dirac.
        #[arg(long, default_value = "sign")]
        compose: String,
        #[command(flatten)]
        common: Common,
    },
    /// Heat coefficients of D^2.
    Heat {
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        orders: usize,
        /// Element multiplying the density before the trace, e.g. "[h]".
        #[arg(long)]
        localizer: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Conformal anomaly density per t-grade.
    Anomaly {
        #[command(flatten)]
        common: Common,
    },
    /// Induced Chern-Simons density of the coupled family.
    CsDensity {
        #[command(flatten)]
        common: Common,
    },
    /// Numerical computations on truncated mode boxes.
    Num {
        #[command(subcommand)]
        command: NumCommand,
    },
}

#[derive(Debug, Subcommand)]
enum NumCommand {
    /// Eigenvalues of a truncated operator.
    Spectrum {
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        t: f64,
        #[arg(long)]
        csv: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Spectral flow over t in [0, 1].
    Flow {
        #[arg(long)]
        family: Option<PathBuf>,
        #[arg(long, allow_hyphen_values = true)]
        u: Option<String>,
        #[arg(long)]
        grid: Option<usize>,
        #[arg(long, allow_hyphen_values = true)]
        level: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Lattice heat trace of the free operator.
    Heat {
        #[arg(long, allow_hyphen_values = true)]
        t: f64,
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    fn config(&self) -> Result<CheckConfig, CliError> {
        Ok(CheckConfig {
            dim: self.dim,
            t_order: self.t_order,
            floor: self.floor,
            cutoff: self.cutoff,
            theta: self.theta.as_deref().map(|s| parse_list::<f64>("--theta", s)).transpose()?,
            ..CheckConfig::default()
        })
    }
}

fn load(path: &Option<PathBuf>) -> Result<Option<FamilySpec>, CliError> {
    path.as_deref().map(FamilySpec::load).transpose()
}

/// Writes to stdout, ignoring a closed pipe (`ncps list | head`).
fn say(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

fn emit_json(target: &Option<String>, value: &Value) -> Result<(), CliError> {
    let Some(path) = target else { return Ok(()) };
    let text = serde_json::to_string_pretty(value).expect("serializable") + "\n";
    if path == "-" {
        say(&text);
        return Ok(());
    }
    std::fs::File::create(path)
        .and_then(|mut f| f.write_all(text.as_bytes()))
        .map_err(|source| CliError::Output { path: path.clone(), source })
}

fn finish(common: &Common, out: Output) -> Result<i32, CliError> {
    if common.json.as_deref() != Some("-") {
        say(&out.text);
    }
    emit_json(&common.json, &out.json)?;
    Ok(0)
}

fn execute(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::List => {
            let width = CHECKS.iter().map(|c| c.name.len()).max().unwrap_or(0);
            for c in CHECKS {
                say(&format!("{:width$}  {}\n", c.name, c.statement, width = width));
            }
            Ok(0)
        }
        Command::Verify { name, u, grid, level, seed, family, common } => {
            let mut config = common.config()?;
            config.u = u.as_deref().map(|s| parse_list::<i64>("--u", s)).transpose()?;
            config.grid = grid;
            config.level = level;
            config.seed = seed;
            config.family = load(&family)?;
            let report = run_check(&name, &config)?;
            if common.json.as_deref() != Some("-") {
                say(&report.to_string());
            }
            emit_json(&common.json, &serde_json::to_value(&report).expect("serializable"))?;
            Ok(report.status.exit_code())
        }
        Command::Wres { family, compose, common } => {
            let spec = load(&family)?;
            let out = commands::wres_command(spec.as_ref(), Composition::parse(&compose)?, &common.config()?)?;
            finish(&common, out)
        }
        Command::Heat { family, orders, localizer, common } => {
            let spec = load(&family)?;
            let out = commands::heat_command(spec.as_ref(), orders, localizer.as_deref(), &common.config()?)?;
            finish(&common, out)
        }
        Command::Anomaly { common } => finish(&common, commands::anomaly_command(&common.config()?)?),
        Command::CsDensity { common } => finish(&common, commands::cs_density_command()?),
        Command::Num { command } => match command {
            NumCommand::Spectrum { family, t, csv, common } => {
                let spec = load(&family)?;
                finish(&common, commands::num_spectrum(spec.as_ref(), t, csv, &common.config()?)?)
            }
            NumCommand::Flow { family, u, grid, level, common } => {
                let spec = load(&family)?;
                let mut config = common.config()?;
                config.u = u.as_deref().map(|s| parse_list::<i64>("--u", s)).transpose()?;
                config.grid = grid;
                config.level = level;
                finish(&common, commands::num_flow(spec.as_ref(), &config)?)
            }
            NumCommand::Heat { t, common } => finish(&common, commands::num_heat(t, &common.config()?)?),
        },
    }
}

/// Parses `args` (program name first) and runs; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("ncps: {}", e);
            e.exit_code()
        }
    }
}

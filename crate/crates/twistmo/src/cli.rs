use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{Map, Value};

use crate::commands::{self, Outcome, TrilinearPreset};
use crate::config::{read_config_file, resolve, Patch};
use crate::output::{emit, to_json};
use crate::pool::{resolve_threads, Rayon};
use crate::CliError;

/// Numerical experiments on twisted moments of ζ and Kloosterman-fraction sums.
///
/// Parameters resolve as built-in defaults, then `--config`, then flags.
/// Exit codes: 0 success, 2 invalid configuration, 3 numerical failure,
/// 4 size guard tripped.
#[derive(Debug, Parser)]
#[command(name = "twistmo", version)]
pub struct Cli {
    /// JSON parameter block for the subcommand
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// JSON report destination (stdout when absent)
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    /// CSV grid destination
    #[arg(long, global = true, value_name = "PATH")]
    pub csv: Option<PathBuf>,
    /// worker threads; falls back to TWISTMO_THREADS, then the hardware count
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Direct twisted second moment against the main term
    TwistedMoment(TwistedMomentArgs),
    /// Approximate functional equation against |ζ|² at random heights
    AfeCheck(AfeArgs),
    /// Main-term sum alone
    MainTerm(PolynomialArgs),
    /// Diagonal term and the A₀ contour that closes it onto the main term
    Diagonal(PolynomialArgs),
    /// Third moment on and off the critical line over a grid of heights
    ThirdMoment(ThirdMomentArgs),
    /// Trilinear Kloosterman-fraction sums
    Trilinear(TrilinearArgs),
    /// Prime-indicator lower-bound construction over a grid
    LowerBound(LowerBoundArgs),
    /// Partition, residue and Mellin-weight identities
    WeightsSelftest(SelftestArgs),
}

fn model_value(text: &str) -> Result<Value, String> {
    let t = text.trim();
    if t.starts_with('{') {
        serde_json::from_str(t).map_err(|e| e.to_string())
    } else {
        Ok(serde_json::json!({ "kind": t }))
    }
}

#[derive(Debug, Args)]
pub struct TwistedMomentArgs {
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// coefficient model: a kind name or a JSON object
    #[arg(long, value_parser = model_value, conflicts_with = "unit")]
    pub model: Option<Value>,
    /// shorthand for `--model unit`
    #[arg(long)]
    pub unit: bool,
    #[arg(long)]
    pub rel_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AfeArgs {
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub w_tol: Option<f64>,
}

#[derive(Debug, Args)]
pub struct PolynomialArgs {
    #[arg(long = "T")]
    pub t: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_parser = model_value, conflicts_with = "unit")]
    pub model: Option<Value>,
    #[arg(long)]
    pub unit: bool,
}

#[derive(Debug, Args)]
pub struct ThirdMomentArgs {
    /// comma-separated heights
    #[arg(long = "T", value_delimiter = ',')]
    pub t: Option<Vec<f64>>,
    #[arg(long)]
    pub sigma_offset: Option<f64>,
}

#[derive(Debug, Args)]
pub struct TrilinearArgs {
    #[arg(long, value_enum)]
    pub preset: Option<TrilinearPreset>,
    #[arg(long = "A")]
    pub a: Option<u64>,
    #[arg(long = "M")]
    pub m: Option<u64>,
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long)]
    pub trials: Option<usize>,
    #[arg(long, value_parser = model_value)]
    pub model: Option<Value>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub epsilon: Option<f64>,
    #[arg(long = "K")]
    pub k: Option<f64>,
}

#[derive(Debug, Args)]
pub struct LowerBoundArgs {
    #[arg(long = "A")]
    pub a: Option<u64>,
    #[arg(long = "M")]
    pub m: Option<u64>,
    #[arg(long = "N")]
    pub n: Option<u64>,
    #[arg(long = "K")]
    pub k: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long)]
    pub partition_points: Option<usize>,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::TwistedMoment(_) => "twisted-moment",
            Command::AfeCheck(_) => "afe-check",
            Command::MainTerm(_) => "main-term",
            Command::Diagonal(_) => "diagonal",
            Command::ThirdMoment(_) => "third-moment",
            Command::Trilinear(_) => "trilinear",
            Command::LowerBound(_) => "lower-bound",
            Command::WeightsSelftest(_) => "weights-selftest",
        }
    }

    fn patch(&self) -> Patch {
        let mut p = Patch::default();
        match self {
            Command::TwistedMoment(a) => {
                let model = if a.unit { Some(serde_json::json!({ "kind": "unit" })) } else { a.model.clone() };
                p.set("T", a.t).set("theta", a.theta).set("trials", a.trials).set("seed", a.seed).set("model", model);
                p.set("quadrature.rel_tol", a.rel_tol);
            }
            Command::AfeCheck(a) => {
                p.set("T", a.t).set("samples", a.samples).set("seed", a.seed).set("afe.w_tol", a.w_tol);
            }
            Command::MainTerm(a) | Command::Diagonal(a) => {
                let model = if a.unit { Some(serde_json::json!({ "kind": "unit" })) } else { a.model.clone() };
                p.set("T", a.t).set("theta", a.theta).set("N", a.n).set("seed", a.seed).set("model", model);
            }
            Command::ThirdMoment(a) => {
                p.set("T_grid", a.t.clone()).set("sigma_offset", a.sigma_offset);
            }
            Command::Trilinear(a) => {
                p.set("preset", a.preset).set("A", a.a).set("M", a.m).set("N", a.n).set("trials", a.trials);
                p.set("model", a.model.clone()).set("seed", a.seed).set("epsilon", a.epsilon).set("K", a.k);
            }
            Command::LowerBound(a) => {
                p.set("A", a.a).set("M", a.m).set("N", a.n).set("K", a.k);
            }
            Command::WeightsSelftest(a) => {
                p.set("partition_points", a.partition_points);
            }
        }
        p
    }
}

/// A finished run: the JSON report and the CSV grid, if the command has one.
#[derive(Debug, Clone)]
pub struct Report {
    pub json: Value,
    pub csv: Option<String>,
}

fn resolved<P, F>(defaults: P, file: Option<Value>, flags: Map<String, Value>, f: F) -> Result<(Value, Outcome), CliError>
where
    P: Serialize + DeserializeOwned,
    F: FnOnce(&P) -> Result<Outcome, CliError>,
{
    let params = resolve(&defaults, file, flags)?;
    let outcome = f(&params)?;
    Ok((serde_json::to_value(&params)?, outcome))
}

/// Resolves the parameters of `cmd` over `file` and runs it on `exec`.
pub fn execute(cmd: &Command, file: Option<Value>, exec: &Rayon) -> Result<Report, CliError> {
    let file = match file {
        Some(Value::Object(mut map)) => {
            if let Some(named) = map.remove("command") {
                if named.as_str() != Some(cmd.name()) {
                    return Err(CliError::ConfigInvalid(format!("config is for command {named}, not {}", cmd.name())));
                }
            }
            Some(Value::Object(map))
        }
        Some(_) => return Err(CliError::ConfigInvalid("config must be a JSON object".into())),
        None => None,
    };
    let flags = cmd.patch().0;
    let start = Instant::now();
    let (config, outcome) = match cmd {
        Command::TwistedMoment(_) => resolved(commands::twisted_moment_defaults(), file, flags, |p| commands::twisted_moment(exec, p))?,
        Command::AfeCheck(_) => resolved(commands::AfeCheckParams::default(), file, flags, |p| commands::afe(exec, p))?,
        Command::MainTerm(_) => resolved(commands::PolynomialParams::default(), file, flags, |p| commands::main_term_cmd(exec, p))?,
        Command::Diagonal(_) => resolved(commands::PolynomialParams::default(), file, flags, |p| commands::diagonal_cmd(exec, p))?,
        Command::ThirdMoment(_) => resolved(commands::ThirdMomentParams::default(), file, flags, |p| commands::third_moment_cmd(exec, p))?,
        Command::Trilinear(_) => resolved(commands::TrilinearParams::default(), file, flags, |p| commands::trilinear(exec, p))?,
        Command::LowerBound(_) => resolved(commands::LowerBoundParams::default(), file, flags, |p| commands::lower_bound(exec, p))?,
        Command::WeightsSelftest(_) => resolved(commands::WeightsSelftestParams::default(), file, flags, |p| commands::weights_selftest(exec, p))?,
    };
    let wall_time = start.elapsed().as_secs_f64();
    let mut json = outcome.fields;
    json.insert("command".into(), Value::from(cmd.name()));
    json.insert("config".into(), config);
    json.insert("wall_time".into(), Value::from(wall_time));
    Ok(Report { json: Value::Object(json), csv: outcome.csv })
}

/// Full command-line run: configuration, execution and output files.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let file = cli.config.as_deref().map(read_config_file).transpose()?;
    if cli.csv.is_some() && matches!(cli.command, Command::MainTerm(_) | Command::Diagonal(_) | Command::WeightsSelftest(_)) {
        return Err(CliError::ConfigInvalid(format!("{} produces no CSV grid", cli.command.name())));
    }
    let exec = Rayon::new(resolve_threads(cli.threads));
    let report = execute(&cli.command, file, &exec)?;
    emit(cli.report.as_deref(), &to_json(&report.json)?)?;
    if let (Some(path), Some(csv)) = (cli.csv.as_deref(), report.csv.as_deref()) {
        std::fs::write(path, csv)?;
    }
    Ok(())
}

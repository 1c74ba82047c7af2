use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qslnoise::channels::{AmplitudeVariant, MemoryMix, RtnParams};
use qslnoise::config::{
    channel_sweep_config, lindblad_sweep_config, load_config, parse_family, KeyValues, Layered,
    CONFIG_ENV,
};
use qslnoise::lindblad::{AtomicModel, ThermalBath};
use qslnoise::report::{validate_channel, validate_lindblad, ValidationReport};
use qslnoise::sweep::{
    sweep_channel, sweep_lindblad, write_channel_csv, write_lindblad_csv, Execution,
};

const EXIT_FINDINGS: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser, Debug)]
#[command(
    name = "qslnoise",
    version,
    about = "Quantum speed limits under correlated two-qubit noise"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sweep tau for a Kraus channel family and write the speed-limit ratio.
    #[command(
        after_help = "CSV columns: tau,t_eval,phi,p,denom_uncorrelated,denom_correlated,ratio_R\n\
        ratio_R = tau_cor / tau_un = denom_uncorrelated / denom_correlated (\"inf\" if unbounded).\n\
        Numbers carry 12 significant digits."
    )]
    SweepChannel(ChannelArgs),
    /// Sweep the collective coupling a for the two-atom master equation.
    #[command(
        after_help = "CSV columns: a,gamma,n_bar,x,ratio,lower_bound,upper_bound\n\
        ratio = ||L_un(rho0)|| / ||L_un(rho0) + L_cor(rho0)||, bounds 1/(1+x) and 1/|1-x|\n\
        (\"inf\" at x = 1). Numbers carry 12 significant digits."
    )]
    SweepLindblad(LindbladArgs),
    /// Check CPTP conditions (channels) or trace preservation (lindblad) at one point.
    Validate(ValidateArgs),
}

#[derive(Args, Debug)]
struct Common {
    /// Flat `key = value` config file; falls back to $QSLNOISE_CONFIG.
    #[arg(long, env = CONFIG_ENV)]
    config: Option<PathBuf>,
    /// Output path (default stdout).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Schedule grid points on one thread.
    #[arg(long)]
    sequential: bool,
}

#[derive(Args, Debug)]
struct ChannelArgs {
    /// rtn-product | phase-damping | amplitude-damping
    #[arg(long)]
    family: Option<String>,
    /// standard | paper-literal (amplitude-damping only)
    #[arg(long)]
    variant: Option<String>,
    #[arg(long)]
    tau_min: Option<f64>,
    #[arg(long)]
    tau_max: Option<f64>,
    #[arg(long)]
    tau_steps: Option<String>,
    /// Evaluation time t.
    #[arg(long)]
    time: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    /// Memory parameter of the correlated side.
    #[arg(long)]
    mu: Option<f64>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct LindbladArgs {
    #[arg(long)]
    a_min: Option<f64>,
    #[arg(long)]
    a_max: Option<f64>,
    #[arg(long)]
    a_steps: Option<String>,
    /// Decay rate(s), comma separated.
    #[arg(long)]
    gamma: Option<String>,
    /// Bath occupancy value(s), comma separated.
    #[arg(long)]
    nbar: Option<String>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    theta: Option<f64>,
    /// fixture (printed matrices) | derived (first-principles generators)
    #[arg(long)]
    mode: Option<String>,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    /// rtn-product | phase-damping | amplitude-damping | lindblad
    #[arg(long)]
    family: String,
    #[arg(long, default_value = "standard")]
    variant: String,
    #[arg(long, default_value_t = 0.2)]
    tau: f64,
    #[arg(long, default_value_t = 0.1)]
    time: f64,
    #[arg(long, default_value_t = 0.0)]
    mu: f64,
    #[arg(long, default_value_t = 1.0)]
    gamma: f64,
    #[arg(long)]
    nbar: Option<f64>,
    #[arg(long)]
    omega: Option<f64>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    a: f64,
    /// Scale the first Kraus operator (test hook).
    #[arg(long, hide = true)]
    corrupt_scale: Option<f64>,
}

fn flags(pairs: &[(&str, Option<String>)]) -> KeyValues {
    pairs
        .iter()
        .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
        .collect()
}

fn layered(flag_values: KeyValues, common: &Common) -> Result<Layered, String> {
    let file = match &common.config {
        Some(path) => load_config(path)?,
        None => KeyValues::new(),
    };
    Ok(Layered::new(flag_values, file))
}

fn execution(common: &Common) -> Execution {
    if common.sequential {
        Execution::Sequential
    } else {
        Execution::default()
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, String> {
    Ok(match path {
        Some(p) => {
            Box::new(BufWriter::new(File::create(p).map_err(|e| {
                format!("output: cannot create {}: {e}", p.display())
            })?))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn s<T: ToString>(v: &Option<T>) -> Option<String> {
    v.as_ref().map(ToString::to_string)
}

fn run_sweep_channel(args: &ChannelArgs) -> Result<(), String> {
    let fv = flags(&[
        ("family", args.family.clone()),
        ("variant", args.variant.clone()),
        ("tau-min", s(&args.tau_min)),
        ("tau-max", s(&args.tau_max)),
        ("tau-steps", args.tau_steps.clone()),
        ("time", s(&args.time)),
        ("theta", s(&args.theta)),
        ("mu", s(&args.mu)),
    ]);
    let config = channel_sweep_config(&layered(fv, &args.common)?)?;
    let rows = sweep_channel(&config, execution(&args.common)).map_err(|e| e.to_string())?;
    let mut out = open_output(&args.common.output)?;
    write_channel_csv(&rows, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| format!("output: {e}"))
}

fn run_sweep_lindblad(args: &LindbladArgs) -> Result<(), String> {
    let fv = flags(&[
        ("a-min", s(&args.a_min)),
        ("a-max", s(&args.a_max)),
        ("a-steps", args.a_steps.clone()),
        ("gamma", args.gamma.clone()),
        ("nbar", args.nbar.clone()),
        ("omega", s(&args.omega)),
        ("temperature", s(&args.temperature)),
        ("theta", s(&args.theta)),
        ("mode", args.mode.clone()),
    ]);
    let config = lindblad_sweep_config(&layered(fv, &args.common)?)?;
    let rows = sweep_lindblad(&config, execution(&args.common)).map_err(|e| e.to_string())?;
    let mut out = open_output(&args.common.output)?;
    write_lindblad_csv(&rows, &mut out)
        .and_then(|_| out.flush())
        .map_err(|e| format!("output: {e}"))
}

fn run_validate(args: &ValidateArgs) -> Result<ValidationReport, String> {
    let variant: AmplitudeVariant = args.variant.parse().map_err(|e| format!("variant: {e}"))?;
    match parse_family(&args.family, variant)? {
        Some(family) => {
            let rtn = RtnParams::new(args.tau, args.time).map_err(|e| e.to_string())?;
            let mix = MemoryMix::new(args.mu).map_err(|e| e.to_string())?;
            let mut k = family.build(&rtn, mix).map_err(|e| e.to_string())?;
            if let Some(f) = args.corrupt_scale {
                k = k.scale_operator(0, f);
            }
            Ok(validate_channel(&k))
        }
        None => {
            let bath = match (args.nbar, args.omega, args.temperature) {
                (Some(n), None, None) => ThermalBath::from_occupancy(n),
                (None, Some(w), Some(t)) => ThermalBath::from_temperature(w, t),
                (None, None, None) => ThermalBath::from_occupancy(1.0),
                _ => return Err("nbar: give either --nbar or --omega with --temperature".into()),
            }
            .map_err(|e| e.to_string())?;
            let model =
                AtomicModel::symmetric(args.gamma, args.a, bath).map_err(|e| e.to_string())?;
            validate_lindblad(&model).map_err(|e| e.to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::SweepChannel(a) => run_sweep_channel(a).map(|_| true),
        Command::SweepLindblad(a) => run_sweep_lindblad(a).map(|_| true),
        Command::Validate(a) => run_validate(a).map(|report| {
            print!("{}", report.render());
            report.passed
        }),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_FINDINGS),
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use qec_esd::cli::{
    default_code, default_out_dir, execute, parse_angle, run_figure, Command, OutputFormat, RunConfig,
};
use qec_esd::pipeline::{ChannelKind, CodeKind, Family};
use qec_esd::{Error, Result};

/// Entanglement of noisy qubit pairs with and without local error correction.
#[derive(Parser)]
#[command(name = "qec-esd", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Concurrence and fidelity, uncorrected and corrected, over p in [0, 1].
    Sweep {
        #[command(flatten)]
        common: Common,
        /// Mixing angle in radians; accepts `pi/N`, `kpi/N`.
        #[arg(long, default_value = "pi/4", value_parser = angle)]
        alpha: f64,
        /// Number of probabilities.
        #[arg(long, default_value_t = 101)]
        grid: usize,
    },
    /// Sudden-death onset probability for a range of mixing angles.
    Onset {
        #[command(flatten)]
        common: Common,
        /// Number of angles, evenly spaced inside (0, pi/2).
        #[arg(long, default_value_t = 15)]
        grid: usize,
    },
    /// Writes the data series of one figure (1-8) as `fig<N>.csv`.
    Figure {
        id: u32,
        /// Output directory (default: $QEC_ESD_OUT_DIR or the working directory).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Number of probabilities (figures 1-6) or angles (7-8).
        #[arg(long)]
        grid: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long, default_value = "ad", value_parser = parsed::<ChannelKind>)]
    channel: ChannelKind,
    #[arg(long, default_value = "phi", value_parser = parsed::<Family>)]
    family: Family,
    /// Ratio of phase- to amplitude-damping rates for combined noise.
    #[arg(long, default_value_t = 1.0)]
    kappa: f64,
    /// Defaults to leung4 for ad, phase3 for pd, laflamme5 for combined.
    #[arg(long, value_parser = parsed::<CodeKind>)]
    code: Option<CodeKind>,
    #[arg(long, default_value = "csv", value_parser = parsed::<OutputFormat>)]
    format: OutputFormat,
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parsed<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn angle(s: &str) -> std::result::Result<f64, String> {
    parse_angle(s).map_err(|e| e.to_string())
}

fn config(command: Command, common: Common, alpha: f64, grid: usize) -> RunConfig {
    RunConfig {
        command,
        channel_kind: common.channel,
        family: common.family,
        alpha,
        kappa: common.kappa,
        code: common.code.unwrap_or_else(|| default_code(common.channel)),
        grid_size: grid,
        output_path: common.out,
        format: common.format,
    }
}

fn emit(text: &str) -> Result<()> {
    std::io::stdout()
        .lock()
        .write_all(text.as_bytes())
        .map_err(|source| Error::Io {
            path: PathBuf::from("<stdout>"),
            source,
        })
}

fn run(cli: Cli) -> Result<()> {
    let cfg = match cli.command {
        Cmd::Sweep { common, alpha, grid } => config(Command::Sweep, common, alpha, grid),
        Cmd::Onset { common, grid } => config(Command::Onset, common, 0.0, grid),
        Cmd::Figure { id, out, grid } => {
            let dir = out.unwrap_or_else(default_out_dir);
            let files = run_figure(id, &dir, grid)?;
            let listing: String = files.iter().map(|f| format!("{}\n", f.display())).collect();
            return emit(&listing);
        }
    };
    let text = execute(&cfg)?;
    if cfg.output_path.is_none() {
        emit(&text)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("qec-esd: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

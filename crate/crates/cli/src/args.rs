use std::path::PathBuf;

use bqst_core::optimizer::GridAxis;
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "bqst",
    version,
    about = "Ballistic state transfer through quasi-uniform hopping chains"
)]
pub struct Cli {
    /// Write results here instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    pub output: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,

    /// Worker threads for grid scans (default: all cores). BQST_THREADS
    /// overrides this.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal modes: momentum, frequency, density and group velocity.
    Spectrum(Boundary),
    /// End-to-end amplitude trace and its arrival peak.
    Amplitude(AmplitudeArgs),
    /// Optimal boundary couplings for a chain length.
    Optimize(OptimizeArgs),
    /// Average fidelity at arrival over an (x, y) grid.
    FidelityMap(MapArgs),
    /// Infinite-chain amplitude limit and scaling constants.
    Asymptotic(AsymptoticArgs),
    /// Wavepacket |u_i(t)| over all sites.
    Dynamics(DynamicsArgs),
    /// Cross-check the spectral route against dense diagonalization.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct Boundary {
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub x: f64,
    #[arg(long)]
    pub y: f64,
}

#[derive(Debug, Args)]
pub struct AmplitudeArgs {
    #[command(flatten)]
    pub chain: Boundary,
    /// Search window for the arrival peak.
    #[arg(long, value_name = "A,B", value_parser = parse_window)]
    pub window: Option<(f64, f64)>,
}

#[derive(Debug, Args)]
pub struct OptimizeArgs {
    #[arg(long)]
    pub n: usize,
    /// Keep y fixed at this value.
    #[arg(long, value_name = "V", conflicts_with = "constrain_y")]
    pub fix_y: Option<f64>,
    /// Restrict y to the bimodal threshold Y(x).
    #[arg(long = "constrain-Y")]
    pub constrain_y: bool,
    /// Include the visited points (JSON output only).
    #[arg(long)]
    pub trace: bool,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_name = "A:B:STEPS", value_parser = parse_axis)]
    pub x: GridAxis,
    #[arg(long, value_name = "A:B:STEPS", value_parser = parse_axis)]
    pub y: GridAxis,
}

#[derive(Debug, Args)]
pub struct AsymptoticArgs {
    #[arg(long, requires = "sigma", conflicts_with = "optimize")]
    pub tau: Option<f64>,
    #[arg(long, requires = "tau", conflicts_with = "optimize")]
    pub sigma: Option<f64>,
    /// Locate the maximum over (tau, sigma); the default without --tau.
    #[arg(long)]
    pub optimize: bool,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("profile").required(true).args(["x", "perfect", "uniform"])))]
pub struct DynamicsArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, requires = "y")]
    pub x: Option<f64>,
    #[arg(long, requires = "x")]
    pub y: Option<f64>,
    /// Perfect-transfer couplings.
    #[arg(long)]
    pub perfect: bool,
    /// All couplings equal to one.
    #[arg(long)]
    pub uniform: bool,
    /// Last frame time (default: end of the arrival search window).
    #[arg(long)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 1.0)]
    pub dt: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Largest chain in the sampled cases.
    #[arg(long, default_value_t = 200)]
    pub n_max: usize,
    #[arg(long, default_value_t = 50)]
    pub cases: usize,
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected A,B")?;
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((p(a)?, p(b)?))
}

fn parse_axis(s: &str) -> Result<GridAxis, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, k] = parts[..] else {
        return Err("expected START:END:STEPS".into());
    };
    let p = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    let steps = k
        .trim()
        .parse::<usize>()
        .map_err(|e| format!("{k:?}: {e}"))?;
    Ok(GridAxis::new(p(a)?, p(b)?, steps))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parsers() {
        assert_eq!(parse_window("300, 420.5"), Ok((300.0, 420.5)));
        assert!(parse_window("300").is_err());
        assert_eq!(parse_axis("0.1:1:5"), Ok(GridAxis::new(0.1, 1.0, 5)));
        assert!(parse_axis("0.1:1").is_err());
        assert!(parse_axis("0.1:1:2.5").is_err());
    }

    #[test]
    fn definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}

//! `billiards`: crossing numbers of the diagonal billiard in a box.

mod commands;
mod svg;

use std::process::ExitCode;

use billiards::{Caps, Rational64};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "billiards", version, about = "Crossing numbers of billiard trajectories in commensurable boxes")]
pub struct Cli {
    /// Largest trajectory length ℓ the simulator will walk.
    #[arg(long, global = true, env = "BILLIARD_SIM_CAP", default_value_t = Caps::DEFAULT_SIMULATION)]
    pub sim_cap: u64,

    /// Largest number of lattice points an exhaustive scan will visit.
    #[arg(long, global = true, env = "BILLIARD_ENUM_CAP", default_value_t = Caps::DEFAULT_LATTICE)]
    pub enum_cap: u64,

    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn caps(&self) -> Caps {
        Caps {
            simulation: self.sim_cap,
            lattice: self.enum_cap,
            ..Caps::default()
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Walk the trajectory and print its vertices and visits.
    Simulate(SimulateArgs),
    /// Crossing number of one point.
    Crossing(QueryArgs),
    /// Steps at which a point is crossed.
    Times(QueryArgs),
    /// Cross-check analytic counts against simulation over a family of boxes.
    Verify(VerifyArgs),
    /// Number of crossed lattice points touching exactly k walls.
    Bounce(BounceArgs),
    /// Time the analytic query against a full simulation.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Svg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QueryMethod {
    Analytic,
    Simulate,
    Both,
}

/// Comma-separated `int` or `int/int` tokens.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalList(pub Vec<Rational64>);

pub fn parse_rationals(s: &str) -> Result<RationalList, String> {
    s.split(',')
        .map(|t| t.parse::<Rational64>().map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()
        .map(RationalList)
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_parser = parse_rationals)]
    pub sides: RationalList,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// svg: also draw the unfolded trajectory on the doubled box.
    #[arg(long)]
    pub unfolded: bool,
    /// svg: color corresponding segments of both trajectories alike.
    #[arg(long)]
    pub colored: bool,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[arg(long, value_parser = parse_rationals)]
    pub sides: RationalList,
    #[arg(long, value_parser = parse_rationals)]
    pub point: RationalList,
    #[arg(long, value_enum, default_value_t = QueryMethod::Analytic)]
    pub method: QueryMethod,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Explicit box; repeat for several.
    #[arg(long, value_parser = parse_rationals, conflicts_with_all = ["max_dim", "max_side", "max_lcm"])]
    pub sides: Vec<RationalList>,
    #[arg(long)]
    pub max_dim: Option<usize>,
    #[arg(long)]
    pub max_side: Option<u64>,
    #[arg(long)]
    pub max_lcm: Option<u64>,
}

#[derive(Debug, Args)]
pub struct BounceArgs {
    #[arg(long, value_parser = parse_rationals)]
    pub sides: RationalList,
    /// Compute both the closed form and the lattice scan and compare.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long, value_parser = parse_rationals)]
    pub sides: RationalList,
    #[arg(long, value_parser = parse_rationals)]
    pub point: RationalList,
    /// Repetitions of the analytic query; the median is reported.
    #[arg(long, default_value_t = 101)]
    pub repeat: usize,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(commands::EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let out = commands::run(&cli);
    match out {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(failure) => {
            if let Some(payload) = failure.payload() {
                print!("{payload}");
            }
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}

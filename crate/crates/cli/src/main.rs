use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qkdroute_core::adversary::Construction;
use qkdroute_core::online::Strategy;
use qkdroute_core::plan::ObjectiveKind;

mod commands;

/// Route planning and online routing for QKD networks.
#[derive(Debug, Parser)]
#[command(name = "qkdroute", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Search budget for the planner and the offline optimum.
    #[arg(long)]
    budget: Option<u64>,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Plan one path and a fair grant per contract.
    Plan {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        contracts: PathBuf,
        #[arg(long)]
        max_hops: Option<usize>,
        #[arg(long)]
        objective: Option<ObjectiveKind>,
        #[command(flatten)]
        common: Common,
    },
    /// Replay a request trace with an online strategy.
    Simulate {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        strategy: Option<Strategy>,
        /// Also compute the offline optimum and the competitive ratio.
        #[arg(long)]
        opt: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Generate a worst-case instance (network, trace and manifest).
    Adversary {
        #[arg(long)]
        construction: Construction,
        #[arg(long)]
        edges: u64,
        #[arg(long)]
        beta: u64,
        #[arg(long)]
        mu: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check simulated ratios against the closed forms over a parameter grid (CSV).
    Verify {
        #[arg(long)]
        construction: Construction,
        /// Semicolon-separated `edges,beta,mu` tuples, e.g. "7,4,2;5,6,3".
        #[arg(long, default_value = "")]
        grid: String,
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Dump the enumerated simple paths between two nodes.
    Paths {
        #[arg(long)]
        network: PathBuf,
        #[arg(long)]
        src: String,
        #[arg(long)]
        dst: String,
        #[arg(long)]
        max_hops: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Plan {
            network,
            contracts,
            max_hops,
            objective,
            common,
        } => commands::plan(&network, &contracts, max_hops, objective, &common.into()),
        Command::Simulate {
            network,
            trace,
            strategy,
            opt,
            common,
        } => commands::simulate(&network, &trace, strategy, opt, &common.into()),
        Command::Adversary {
            construction,
            edges,
            beta,
            mu,
            out,
        } => commands::adversary(construction, edges, beta, mu, &out),
        Command::Verify {
            construction,
            grid,
            budget,
        } => commands::verify(construction, &grid, budget),
        Command::Paths {
            network,
            src,
            dst,
            max_hops,
        } => commands::paths(&network, &src, &dst, max_hops),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

impl From<Common> for commands::Shared {
    fn from(c: Common) -> Self {
        commands::Shared {
            config: c.config,
            budget: c.budget,
            out: c.out,
        }
    }
}

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use floquet_lab::manifest::with_manifest;
use floquet_lab::{commands, Command, Params};

#[derive(Parser)]
#[command(name = "floquet-lab", version, about = "Simulations of the perturbed honeycomb Floquet code")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// G(t) for one (L, p_M, p_S) point.
    Gt(Params),
    /// G(t) and its Fourier components over an L × p_M × p_S grid.
    Sweep(Params),
    /// Tripartite entanglement entropy after the last cycle.
    Tee(Params),
    /// Ancilla purification after random scrambling.
    Purify(Params),
    /// Wrapping-threshold estimate for bond percolation.
    Percolate(Params),
    /// Channel probabilities and transfer-matrix predictions.
    Markov(Params),
    /// Finite-size-scaling collapse of a CSV of (L, p, y, sigma).
    Collapse(Params),
    /// G_π and TEE over a p_M × p_S grid.
    PhaseDiagram(Params),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, flags) = match cli.cmd {
        Cmd::Gt(p) => (Command::Gt, p),
        Cmd::Sweep(p) => (Command::Sweep, p),
        Cmd::Tee(p) => (Command::Tee, p),
        Cmd::Purify(p) => (Command::Purify, p),
        Cmd::Percolate(p) => (Command::Percolate, p),
        Cmd::Markov(p) => (Command::Markov, p),
        Cmd::Collapse(p) => (Command::Collapse, p),
        Cmd::PhaseDiagram(p) => (Command::PhaseDiagram, p),
    };
    let dir = flags.out_dir();
    let params = match flags.clone().resolve() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            // the manifest still records the failure, with the flags as given
            let _ = with_manifest(cmd.name(), &flags, &dir, || Err(e));
            return ExitCode::FAILURE;
        }
    };
    let dir = params.out_dir();
    match with_manifest(cmd.name(), &params, &dir, || commands::run(cmd, &params)) {
        Ok(m) => {
            for path in &m.outputs {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

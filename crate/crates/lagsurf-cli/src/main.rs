//! lagsurf: build the circle-foliated and ruled Lagrangian surface families,
//! verify their defining residuals, integrate profile curves and export
//! meshes.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage/config error.

mod commands;
mod config;
mod mesh;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "lagsurf",
    version,
    about = "Cyclic and ruled Lagrangian surfaces in C^2: catalog, residual \
             verification, profile curves, meshes and algebraic certificates"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the built-in surfaces.
    Catalog {
        /// Emit a machine-readable JSON index.
        #[arg(long)]
        json: bool,
    },
    /// Run the residual checks requested by a JSON config file.
    Verify {
        /// Path to the scene config (see README for the schema).
        #[arg(long)]
        config: std::path::PathBuf,
        /// Print the full JSON report to stdout.
        #[arg(long)]
        json: bool,
    },
    /// Integrate the profile system and write a CSV table.
    Profile {
        /// Flux constant C (requires |C| > 2).
        #[arg(long = "C", conflicts_with = "pq")]
        c: Option<f64>,
        /// Winding data p q (coprime positive integers).
        #[arg(long, num_args = 2, value_names = ["P", "Q"])]
        pq: Option<Vec<u32>>,
        #[arg(long)]
        out: std::path::PathBuf,
        /// Number of radial periods to integrate (C mode).
        #[arg(long, default_value_t = 3)]
        periods: u32,
        /// Output rows per period.
        #[arg(long, default_value_t = 256)]
        samples: usize,
    },
    /// Sample a surface and write a Wavefront OBJ mesh.
    Mesh {
        #[arg(long)]
        config: std::path::PathBuf,
        /// Output path (overrides the config's output.path).
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Run the quaternion and polynomial certificate suite.
    Certify,
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("LAGSURF_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n.max(1))
                .build_global();
        }
    }
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Catalog { json } => commands::cmd_catalog(json),
        Command::Verify { config, json } => commands::cmd_verify(&config, json),
        Command::Profile {
            c,
            pq,
            out,
            periods,
            samples,
        } => commands::cmd_profile(c, pq.as_deref(), &out, periods, samples),
        Command::Mesh { config, out } => commands::cmd_mesh(&config, out.as_deref()),
        Command::Certify => commands::cmd_certify(),
    };
    match outcome {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

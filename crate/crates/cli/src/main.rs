//! `jacobi`: reduce diagrams, dump quotient bases, invert linking matrices,
//! run the Aarhus pairing, evaluate the sl2 weight system, print the tables,
//! and rerun the reproduction checks.
//!
//! Exit codes: 0 success, 1 a check failed, 2 bad input, 3 resource cutoff.

mod commands;
mod report;
mod reproduce;

use std::ops::RangeInclusive;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{Ctx, Failure};
use report::Format;
use reproduce::Section;

#[derive(Parser)]
#[command(name = "jacobi", version, about = "Exact Jacobi diagram computations")]
struct Cli {
    /// Degree (or series order) cutoff.
    #[arg(long, global = true, default_value_t = 7)]
    truncate: usize,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Largest diagram (or twice the largest degree) accepted.
    #[arg(long, global = true, default_value_t = 12)]
    max_vertices: usize,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Coordinates of the sum of the diagrams in a file in a quotient basis.
    Reduce {
        #[arg(long)]
        file: PathBuf,
        /// Space id such as `B@x`, `Bn:2@h`, `A_line@x`.
        #[arg(long)]
        space: String,
        #[arg(long)]
        degree: usize,
    },
    Spaces {
        #[command(subcommand)]
        cmd: SpacesCmd,
    },
    Linking {
        #[command(subcommand)]
        cmd: LinkingCmd,
    },
    Aarhus {
        #[command(subcommand)]
        cmd: AarhusCmd,
    },
    Weights {
        #[command(subcommand)]
        cmd: WeightsCmd,
    },
    Tables {
        #[command(subcommand)]
        cmd: TablesCmd,
    },
    /// Rerun one block of checks; exits 1 if any fails.
    Reproduce {
        #[arg(value_enum)]
        section: Section,
    },
}

#[derive(Subcommand)]
enum SpacesCmd {
    /// Dimensions and basis diagrams of a quotient.
    Dump {
        #[arg(long)]
        space: String,
        #[arg(long)]
        degree: usize,
    },
}

#[derive(Subcommand)]
enum LinkingCmd {
    /// Inverse of the surgery matrix built from integer blocks `U`, `V`, `W`.
    Invert {
        #[arg(long)]
        g: Option<usize>,
        #[arg(long = "U")]
        u: String,
        #[arg(long = "V")]
        v: String,
        #[arg(long = "W")]
        w: String,
    },
}

#[derive(Subcommand)]
enum AarhusCmd {
    /// Pairs a diagram file against the Gaussian of a linking file.
    Integrate {
        /// JSON file `{"U": [[..]], "V": [[..]], "W": [[..]]}`.
        #[arg(long)]
        linking: PathBuf,
        #[arg(long)]
        p: PathBuf,
        /// Keep only connected parts with this many loops.
        #[arg(long = "loop")]
        loops: Option<usize>,
    },
    /// Difference term of a clasper with legs on `x_{2g+1}` and `x_{3g+1}`.
    Clasper {
        #[arg(long)]
        linking: PathBuf,
        #[arg(long)]
        clasper: PathBuf,
    },
}

#[derive(Subcommand)]
enum WeightsCmd {
    /// sl2 weights of the diagrams in a file.
    Sl2 {
        #[arg(long)]
        diagram: PathBuf,
        /// Also contract the tensors directly and compare.
        #[arg(long)]
        oracle: bool,
    },
}

#[derive(Subcommand)]
enum TablesCmd {
    TwoLoop {
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, allow_hyphen_values = true)]
        b1: String,
        #[arg(long, allow_hyphen_values = true)]
        b2: String,
    },
    ThetaCount {
        /// `1..5` (inclusive) or a single value.
        #[arg(long, value_parser = parse_range)]
        g: RangeInclusive<usize>,
    },
    Xset,
    CrudeBound {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = parse_range)]
        g: RangeInclusive<usize>,
    },
}

fn parse_range(s: &str) -> Result<RangeInclusive<usize>, String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("{x:?}: {e}"));
    let r = match s.split_once("..") {
        Some((a, b)) => num(a)?..=num(b.trim_start_matches('='))?,
        None => num(s)?..=num(s)?,
    };
    if r.is_empty() {
        return Err(format!("empty range {s}"));
    }
    Ok(r)
}

fn dispatch(cli: &Cli, ctx: &Ctx) -> Result<report::RunReport, Failure> {
    match &cli.cmd {
        Cmd::Reduce { file, space, degree } => commands::reduce(ctx, file, space, *degree),
        Cmd::Spaces { cmd: SpacesCmd::Dump { space, degree } } => commands::spaces_dump(ctx, space, *degree),
        Cmd::Linking { cmd: LinkingCmd::Invert { g, u, v, w } } => commands::linking_invert(ctx, *g, u, v, w),
        Cmd::Aarhus { cmd: AarhusCmd::Integrate { linking, p, loops } } => commands::aarhus_integrate(ctx, linking, p, *loops),
        Cmd::Aarhus { cmd: AarhusCmd::Clasper { linking, clasper } } => commands::aarhus_clasper(ctx, linking, clasper),
        Cmd::Weights { cmd: WeightsCmd::Sl2 { diagram, oracle } } => commands::weights_sl2(ctx, diagram, *oracle),
        Cmd::Tables { cmd } => match cmd {
            TablesCmd::TwoLoop { a, b1, b2 } => commands::two_loop(ctx, *a, b1, b2),
            TablesCmd::ThetaCount { g } => commands::theta_count(ctx, g.clone()),
            TablesCmd::Xset => commands::xset(ctx),
            TablesCmd::CrudeBound { n, g } => commands::crude_bounds(ctx, *n, g.clone()),
        },
        Cmd::Reproduce { section } => reproduce::run(ctx, *section),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let start = Instant::now();
    let ctx = Ctx {
        command: std::env::args().skip(1).collect(),
        seed: cli.seed,
        truncate: cli.truncate,
        max_vertices: cli.max_vertices,
    };
    let result = dispatch(&cli, &ctx);
    let code = match result {
        Ok(report) => {
            print!("{}", report.render(cli.format));
            if report.all_pass() {
                0
            } else {
                1
            }
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(Failure::Resource(msg)) => {
            eprintln!("resource cutoff: {msg}");
            3
        }
    };
    eprintln!("wall time: {:.3}s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}

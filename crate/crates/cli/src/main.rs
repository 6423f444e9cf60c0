use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use onepath::config::load_config;
use onepath::error::{io_err, Result};
use onepath::gcode::emit_gcode;
use onepath::model_io::load_model;
use onepath::pipeline::{run_pipeline, PipelineRun, RunOptions};
use onepath::render::{render_plan, render_stage, Stage};
use onepath_core::flat::exact_min_path_cover;
use onepath_core::geometry::ModelMode;
use onepath_core::graph::text::parse_text;
use onepath_core::plan::PlanOptions;
use onepath_core::PrinterConfig;

#[derive(Parser)]
#[command(name = "onepath", version, about = "Plan continuous extrusion toolpaths for shell models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline and write G-code, SVG and a JSON report.
    Plan {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Run the full pipeline and print the report.
    Stats {
        #[command(flatten)]
        run: RunArgs,
        /// Drop wall-clock timings so output is reproducible.
        #[arg(long)]
        no_timings: bool,
    },
    /// Draw one pipeline stage as SVG.
    Visualize {
        #[arg(value_enum)]
        stage: StageArg,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        out: PathBuf,
    },
    /// Exact minimum path cover of a small graph file.
    Oracle {
        graph: PathBuf,
        /// Also print one optimal cover.
        #[arg(long)]
        paths: bool,
    },
}

#[derive(Args)]
struct RunArgs {
    /// A .profile, .stl or .obj file, or `fixture:<name>`.
    model: String,
    /// Preset name (ceramic, fdm) or TOML file.
    #[arg(long, default_value = "ceramic")]
    config: String,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    beam_width: Option<usize>,
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Try this many orientations for support feasibility.
    #[arg(long, default_value_t = 0)]
    orient: usize,
    /// Disable curved-layer merging.
    #[arg(long)]
    no_curving: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Profile2d,
    Mesh3d,
}

#[derive(Clone, Copy, ValueEnum)]
enum StageArg {
    Layers,
    Dep,
    Init,
    Opps,
    Plan,
}

impl From<StageArg> for Stage {
    fn from(s: StageArg) -> Self {
        match s {
            StageArg::Layers => Stage::Layers,
            StageArg::Dep => Stage::Dep,
            StageArg::Init => Stage::Init,
            StageArg::Opps => Stage::Opps,
            StageArg::Plan => Stage::Plan,
        }
    }
}

fn execute(args: &RunArgs) -> Result<(String, PrinterConfig, PipelineRun)> {
    let mut cfg = load_config(&args.config)?;
    if let Some(s) = args.seed {
        cfg.rng_seed = s;
    }
    if let Some(w) = args.beam_width {
        cfg.beam_width = w;
    }
    let (name, model) = load_model(&args.model)?;
    let opts = RunOptions {
        mode: args.mode.map(|m| match m {
            ModeArg::Profile2d => ModelMode::Profile2d,
            ModeArg::Mesh3d => ModelMode::Mesh3d,
        }),
        plan: PlanOptions {
            curving: args.no_curving.then_some(false),
            orientations: args.orient,
            ..PlanOptions::default()
        },
    };
    let run = run_pipeline(&name, &model, &cfg, &opts)?;
    Ok((name, cfg, run))
}

fn write(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(io_err(path))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Plan { run, out } => {
            let (name, cfg, r) = execute(&run)?;
            fs::create_dir_all(&out).map_err(io_err(&out))?;
            let files = [
                (out.join(format!("{name}.gcode")), emit_gcode(&r.output.plan, &cfg).to_string()),
                (out.join(format!("{name}.svg")), render_plan(&r.output.plan).to_string()),
                (out.join(format!("{name}.report.json")), r.report.to_json()),
            ];
            for (path, text) in &files {
                write(path, text)?;
                println!("wrote {}", path.display());
            }
            println!("#OF {} #OO {} transfers {}", r.report.flat_opps, r.report.curved_opps, r.report.transfer_count);
        }
        Command::Stats { run, no_timings } => {
            let (_, _, r) = execute(&run)?;
            let report = if no_timings { r.report.without_timings() } else { r.report };
            println!("{}", report.to_json());
        }
        Command::Visualize { stage, run, out } => {
            let (_, cfg, r) = execute(&run)?;
            write(&out, &render_stage(&r.output, &cfg, stage.into()).to_string())?;
            println!("wrote {}", out.display());
        }
        Command::Oracle { graph, paths } => {
            let text = fs::read_to_string(&graph).map_err(io_err(&graph))?;
            let g = parse_text(&text)?;
            let (count, cover) = exact_min_path_cover(&g.dag)?;
            println!("{count}");
            if paths {
                for p in cover {
                    let ids: Vec<String> = p.iter().map(usize::to_string).collect();
                    println!("{}", ids.join(" "));
                }
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

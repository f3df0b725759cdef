use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use swarmtopo::io::{
    self, Command, Overrides, ReplayOutcome, RunManifest, RunRequest, Stage, StageError,
};
use swarmtopo::scenario::StaticZeroing;
use swarmtopo::Error;

/// Topological mapping from the encounter log of a leader-guided swarm.
#[derive(Parser)]
#[command(name = "swarmtopo", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Simulate the swarm and write the encounter and static-interval logs.
    Simulate {
        #[command(flatten)]
        run: RunArgs,
        /// Also write ground-truth trajectories.
        #[arg(long)]
        trajectories: bool,
    },
    /// Map previously simulated logs.
    Map {
        #[command(flatten)]
        run: RunArgs,
        /// Directory with events.csv and static.csv.
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        svg: SvgArgs,
    },
    /// Simulate, map every window and seam, and stitch the global map.
    Pipeline {
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        trajectories: bool,
        #[command(flatten)]
        svg: SvgArgs,
    },
    /// Re-run a recorded run and check that every artifact is reproduced.
    Replay {
        /// Manifest of the run to replay.
        #[arg(long)]
        manifest: PathBuf,
        /// Output directory; defaults to `replay/` next to the manifest.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Run again with another seed instead of verifying.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Draw the SVG sketches of a finished map or pipeline run.
    Render {
        /// Run directory containing manifest.json.
        #[arg(long)]
        run: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    scenario: PathBuf,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: PathBuf,
    /// Number of windows N.
    #[arg(long)]
    windows: Option<usize>,
    /// Overlap between consecutive windows, seconds.
    #[arg(long)]
    overlap: Option<f64>,
    /// Single-linkage cutoff for seam clustering, seconds.
    #[arg(long)]
    cutoff: Option<f64>,
    /// Absolute persistence lifetime threshold, seconds.
    #[arg(long)]
    persistence_threshold: Option<f64>,
    /// strict | same_static_interval
    #[arg(long, value_parser = parse_zeroing)]
    static_zeroing: Option<StaticZeroing>,
}

#[derive(Args)]
struct SvgArgs {
    /// Write SVG sketches (default).
    #[arg(long, overrides_with = "no_svg")]
    svg: bool,
    #[arg(long, overrides_with = "svg")]
    no_svg: bool,
}

fn parse_zeroing(s: &str) -> Result<StaticZeroing, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

impl RunArgs {
    fn request(
        self,
        command: Command,
        input_dir: Option<PathBuf>,
        svg: bool,
        trajectories: bool,
    ) -> RunRequest {
        RunRequest {
            command,
            scenario: self.scenario,
            seed: self.seed,
            out_dir: self.out,
            input_dir,
            overrides: Overrides {
                windows: self.windows,
                overlap: self.overlap,
                cutoff: self.cutoff,
                persistence_threshold: self.persistence_threshold,
                static_zeroing: self.static_zeroing,
            },
            svg,
            trajectories,
        }
    }
}

fn exit_code(e: &StageError) -> u8 {
    match (&e.error, e.stage) {
        (Error::ReplayMismatch(_), _) => 3,
        (Error::InvalidScenario(_) | Error::ScenarioSyntax(_), _) => 1,
        (Error::InvalidArgument(_) | Error::Parse { .. }, Stage::Load) => 1,
        _ => 2,
    }
}

fn report(manifest: &RunManifest) {
    println!(
        "wrote {} artifacts to {}",
        manifest.artifacts.len(),
        manifest.output_dir.display()
    );
    if manifest.artifacts.contains_key("global_map.json") {
        if let Ok(g) = io::maps::read_json::<io::maps::GlobalMapFile>(
            &manifest.output_dir.join("global_map.json"),
        ) {
            let g = g.map;
            println!(
                "global map: {} component(s), {} hole(s) ({} from seams, {} local), {} nodes, {} edges",
                g.betti0,
                g.betti1,
                g.cycle_rank,
                g.local_holes,
                g.nodes.len(),
                g.edges.len()
            );
            for w in &g.warnings {
                eprintln!("warning: {w}");
            }
        }
    }
}

fn run(cmd: Cmd) -> Result<(), StageError> {
    match cmd {
        Cmd::Simulate { run, trajectories } => report(&io::execute(&run.request(
            Command::Simulate,
            None,
            false,
            trajectories,
        ))?),
        Cmd::Map { run, input, svg } => report(&io::execute(&run.request(
            Command::Map,
            Some(input),
            !svg.no_svg,
            false,
        ))?),
        Cmd::Pipeline {
            run,
            trajectories,
            svg,
        } => report(&io::execute(&run.request(
            Command::Pipeline,
            None,
            !svg.no_svg,
            trajectories,
        ))?),
        Cmd::Replay {
            manifest,
            out,
            seed,
        } => match io::replay(&manifest, out.as_deref(), seed)? {
            ReplayOutcome::Verified(m) => {
                println!(
                    "replay verified: {} artifacts reproduced in {}",
                    m.artifacts.len(),
                    m.output_dir.display()
                )
            }
            ReplayOutcome::NewRun(m) => {
                println!("new run with seed {}", m.seed);
                report(&m);
            }
        },
        Cmd::Render { run } => {
            let m = io::render(&run)?;
            let n = m.artifacts.keys().filter(|k| k.ends_with(".svg")).count();
            println!("rendered {n} SVG files in {}", run.display());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

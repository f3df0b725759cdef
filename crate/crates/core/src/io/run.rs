//! Run orchestration: stages, artifacts, manifests, replay and rendering.

use super::logs::{events_csv, read_events, read_statics, statics_csv, trajectories_csv};
use super::maps::{
    dendrogram_csv, diagram_csv, points_csv, read_diagram, read_json, read_points, seam_cloud_csv,
    to_json, GlobalMapFile, MapsSummary, SeamSummary, WindowSummary,
};
use super::svg::{diagram_svg, global_map_svg, local_map_svg, WindowSketch};
use super::text::write_file;
use crate::error::{Error, Result};
use crate::mapping::{stitch, MapParams};
use crate::pipeline::{map_seams, map_windows};
use crate::scenario::{ScenarioConfig, StaticZeroing};
use crate::sim;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

pub const MANIFEST: &str = "manifest.json";
pub const TIMINGS: &str = "timings.json";
pub const PARTIAL: &str = ".partial";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Hash of the effective configuration, written into every artifact.
pub fn config_hash(config: &ScenarioConfig) -> String {
    sha256_hex(config.to_toml().as_bytes())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Command {
    Simulate,
    Map,
    Pipeline,
}

impl Command {
    fn simulates(self) -> bool {
        matches!(self, Command::Simulate | Command::Pipeline)
    }

    fn maps(self) -> bool {
        matches!(self, Command::Map | Command::Pipeline)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Load,
    Simulate,
    LocalMaps,
    Seams,
    Stitch,
    Write,
    Render,
    Verify,
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Stage::Load => "load",
            Stage::Simulate => "simulate",
            Stage::LocalMaps => "local_maps",
            Stage::Seams => "seams",
            Stage::Stitch => "stitch",
            Stage::Write => "write",
            Stage::Render => "render",
            Stage::Verify => "verify",
        })
    }
}

#[derive(Debug)]
pub struct StageError {
    pub stage: Stage,
    pub error: Error,
}

impl std::fmt::Display for StageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "stage `{}` failed: {}", self.stage, self.error)
    }
}

impl std::error::Error for StageError {}

trait AtStage<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError>;
}

impl<T> AtStage<T> for Result<T> {
    fn at(self, stage: Stage) -> std::result::Result<T, StageError> {
        self.map_err(|error| StageError { stage, error })
    }
}

/// Command-line overrides of scenario parameters.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Overrides {
    pub windows: Option<usize>,
    pub overlap: Option<f64>,
    pub cutoff: Option<f64>,
    pub persistence_threshold: Option<f64>,
    pub static_zeroing: Option<StaticZeroing>,
}

impl Overrides {
    pub fn apply(&self, config: &mut ScenarioConfig) {
        if let Some(n) = self.windows {
            config.windows.count = n;
        }
        if let Some(dt) = self.overlap {
            config.windows.overlap = dt;
        }
        if let Some(c) = self.cutoff {
            config.windows.cluster_cutoff = c;
        }
        if let Some(t) = self.persistence_threshold {
            config.tda.persistence_threshold = Some(t);
        }
        if let Some(z) = self.static_zeroing {
            config.tda.static_zeroing = z;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRequest {
    pub command: Command,
    pub scenario: PathBuf,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// Directory holding `events.csv` and `static.csv`; `map` only.
    pub input_dir: Option<PathBuf>,
    pub overrides: Overrides,
    pub svg: bool,
    pub trajectories: bool,
}

/// Everything needed to reproduce a run. Timings live in a separate
/// `timings.json` so that repeated runs produce identical manifests.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: Command,
    pub scenario_path: PathBuf,
    pub scenario_sha256: String,
    pub seed: u64,
    pub config_hash: String,
    pub overrides: Overrides,
    /// Effective parameters after overrides.
    pub parameters: ScenarioConfig,
    pub output_dir: PathBuf,
    pub input_dir: Option<PathBuf>,
    /// Hashes of the input logs of a `map` run.
    pub inputs: BTreeMap<String, String>,
    pub svg: bool,
    pub trajectories: bool,
    /// File name to sha256 of every artifact written.
    pub artifacts: BTreeMap<String, String>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        read_json(path)
    }

    fn request(&self) -> RunRequest {
        RunRequest {
            command: self.command,
            scenario: self.scenario_path.clone(),
            seed: self.seed,
            out_dir: self.output_dir.clone(),
            input_dir: self.input_dir.clone(),
            overrides: self.overrides.clone(),
            svg: self.svg,
            trajectories: self.trajectories,
        }
    }
}

struct Artifacts<'d> {
    dir: &'d Path,
    hashes: BTreeMap<String, String>,
}

impl Artifacts<'_> {
    fn put(&mut self, name: String, contents: &str) -> Result<()> {
        write_file(&self.dir.join(&name), contents)?;
        self.hashes.insert(name, sha256_hex(contents.as_bytes()));
        Ok(())
    }
}

fn mark(dir: &Path, text: &str) -> Result<()> {
    write_file(&dir.join(PARTIAL), text)
}

fn read_bytes(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::io(format!("reading {}", path.display()), e))
}

fn canonical(path: &Path) -> Result<PathBuf> {
    std::fs::canonicalize(path).map_err(|e| Error::io(format!("resolving {}", path.display()), e))
}

/// Loads, overrides and validates the scenario of a request.
pub fn effective_config(
    scenario: &Path,
    overrides: &Overrides,
) -> Result<(ScenarioConfig, Vec<u8>)> {
    let bytes = read_bytes(scenario)?;
    let text = String::from_utf8(bytes.clone())
        .map_err(|_| Error::ScenarioSyntax(format!("{} is not UTF-8", scenario.display())))?;
    let mut config = ScenarioConfig::from_toml(&text)?;
    overrides.apply(&mut config);
    config.ensure_valid()?;
    Ok((config, bytes))
}

/// Runs `simulate`, `map` or `pipeline`. Artifacts are written as stages
/// finish; a failure leaves them in place next to a `.partial` marker naming
/// the stage. The manifest is written last.
pub fn execute(req: &RunRequest) -> std::result::Result<RunManifest, StageError> {
    let (config, scenario_bytes) =
        effective_config(&req.scenario, &req.overrides).at(Stage::Load)?;
    let scenario_path = canonical(&req.scenario).at(Stage::Load)?;
    if req.command == Command::Map && req.input_dir.is_none() {
        return Err(Error::InvalidArgument(
            "`map` needs an input directory".into(),
        ))
        .at(Stage::Load);
    }
    std::fs::create_dir_all(&req.out_dir)
        .map_err(|e| Error::io(format!("creating {}", req.out_dir.display()), e))
        .at(Stage::Load)?;
    let out_dir = canonical(&req.out_dir).at(Stage::Load)?;
    mark(&out_dir, "stage=load\n").at(Stage::Load)?;

    let mut stage = Stage::Load;
    let mut timings = BTreeMap::new();
    let result = run_stages(req, &config, &out_dir, &mut stage, &mut timings);
    match result {
        Ok((artifacts, inputs)) => {
            let manifest = RunManifest {
                tool_version: env!("CARGO_PKG_VERSION").into(),
                command: req.command,
                scenario_path,
                scenario_sha256: sha256_hex(&scenario_bytes),
                seed: req.seed,
                config_hash: config_hash(&config),
                overrides: req.overrides.clone(),
                parameters: config,
                output_dir: out_dir.clone(),
                input_dir: req
                    .input_dir
                    .as_deref()
                    .map(canonical)
                    .transpose()
                    .at(Stage::Write)?,
                inputs,
                svg: req.svg,
                trajectories: req.trajectories,
                artifacts,
            };
            write_file(&out_dir.join(TIMINGS), &to_json(&timings)).at(Stage::Write)?;
            write_file(&out_dir.join(MANIFEST), &to_json(&manifest)).at(Stage::Write)?;
            std::fs::remove_file(out_dir.join(PARTIAL))
                .map_err(|e| Error::io("removing the .partial marker", e))
                .at(Stage::Write)?;
            Ok(manifest)
        }
        Err(error) => {
            // Best effort: the original error matters more than the marker.
            let _ = mark(&out_dir, &format!("failed_stage={stage}\nerror={error}\n"));
            Err(StageError { stage, error })
        }
    }
}

type Written = (BTreeMap<String, String>, BTreeMap<String, String>);

fn run_stages(
    req: &RunRequest,
    config: &ScenarioConfig,
    dir: &Path,
    stage: &mut Stage,
    timings: &mut BTreeMap<String, f64>,
) -> Result<Written> {
    let hash = config_hash(config);
    let mut out = Artifacts {
        dir,
        hashes: BTreeMap::new(),
    };
    let mut inputs = BTreeMap::new();

    let (events, statics) = if req.command.simulates() {
        *stage = Stage::Simulate;
        mark(dir, "stage=simulate\n")?;
        let t = Instant::now();
        let sim_out = sim::run(config, req.seed, req.trajectories)?;
        timings.insert(Stage::Simulate.to_string(), t.elapsed().as_secs_f64());
        *stage = Stage::Write;
        out.put("events.csv".into(), &events_csv(&hash, &sim_out.events))?;
        out.put("static.csv".into(), &statics_csv(&hash, &sim_out.statics))?;
        if let Some(rows) = &sim_out.trajectories {
            out.put("trajectories.csv".into(), &trajectories_csv(&hash, rows))?;
        }
        (sim_out.events, sim_out.statics)
    } else {
        *stage = Stage::Load;
        let input = req.input_dir.as_deref().expect("checked by execute");
        for name in ["events.csv", "static.csv"] {
            inputs.insert(
                name.to_string(),
                sha256_hex(&read_bytes(&input.join(name))?),
            );
        }
        let (events, _) = read_events(&input.join("events.csv"))?;
        let (statics, _) = read_statics(&input.join("static.csv"))?;
        (events, statics)
    };
    if !req.command.maps() {
        return Ok((out.hashes, inputs));
    }

    let params = MapParams::from_config(config);
    *stage = Stage::LocalMaps;
    mark(dir, "stage=local_maps\n")?;
    let t = Instant::now();
    let local_maps = map_windows(&events, &statics, &params)?;
    timings.insert(Stage::LocalMaps.to_string(), t.elapsed().as_secs_f64());

    *stage = Stage::Seams;
    mark(dir, "stage=seams\n")?;
    let t = Instant::now();
    let seams = map_seams(&events, &statics, &params)?;
    timings.insert(Stage::Seams.to_string(), t.elapsed().as_secs_f64());

    *stage = Stage::Stitch;
    let t = Instant::now();
    let global = stitch(&local_maps, &seams)?;
    timings.insert(Stage::Stitch.to_string(), t.elapsed().as_secs_f64());

    *stage = Stage::Write;
    mark(dir, "stage=write\n")?;
    let t = Instant::now();
    for m in &local_maps {
        out.put(
            format!("window_{}_points.csv", m.window),
            &points_csv(&hash, m),
        )?;
        out.put(
            format!("window_{}_diagram.csv", m.window),
            &diagram_csv(&hash, m),
        )?;
    }
    for s in &seams {
        out.put(
            format!("seam_{}_cloud.csv", s.seam),
            &seam_cloud_csv(&hash, s),
        )?;
        out.put(
            format!("seam_{}_dendrogram.csv", s.seam),
            &dendrogram_csv(&hash, s),
        )?;
    }
    let summary = MapsSummary {
        config_hash: hash.clone(),
        windows: local_maps.iter().map(WindowSummary::new).collect(),
        seams: seams.iter().map(SeamSummary::new).collect(),
    };
    out.put("maps.json".into(), &to_json(&summary))?;
    out.put(
        "global_map.json".into(),
        &to_json(&GlobalMapFile {
            config_hash: hash.clone(),
            map: global.clone(),
        }),
    )?;
    timings.insert(Stage::Write.to_string(), t.elapsed().as_secs_f64());

    if req.svg {
        *stage = Stage::Render;
        mark(dir, "stage=render\n")?;
        let t = Instant::now();
        let sketches: Vec<WindowSketch> = local_maps.iter().map(WindowSketch::from_map).collect();
        for (name, svg) in svg_files(&sketches, &global, &hash) {
            out.put(name, &svg)?;
        }
        timings.insert(Stage::Render.to_string(), t.elapsed().as_secs_f64());
    }
    Ok((out.hashes, inputs))
}

fn svg_files(
    sketches: &[WindowSketch],
    global: &crate::mapping::GlobalMap,
    hash: &str,
) -> Vec<(String, String)> {
    let mut files = Vec::new();
    for s in sketches {
        files.push((format!("window_{}.svg", s.window), local_map_svg(s, hash)));
        files.push((
            format!("window_{}_diagram.svg", s.window),
            diagram_svg(s, hash),
        ));
    }
    files.push((
        "global_map.svg".into(),
        global_map_svg(sketches, global, hash),
    ));
    files
}

/// Renders the SVG sketches of a finished `map` or `pipeline` run from its
/// artifacts and records them in its manifest.
pub fn render(dir: &Path) -> std::result::Result<RunManifest, StageError> {
    let manifest_path = dir.join(MANIFEST);
    let mut manifest = RunManifest::load(&manifest_path).at(Stage::Load)?;
    if !manifest.command.maps() {
        return Err(Error::InvalidArgument(format!(
            "{} holds no maps to render",
            dir.display()
        )))
        .at(Stage::Load);
    }
    for (name, expected) in &manifest.artifacts {
        if name.ends_with(".svg") {
            continue;
        }
        let actual = sha256_hex(&read_bytes(&dir.join(name)).at(Stage::Load)?);
        if &actual != expected {
            return Err(Error::ReplayMismatch(format!(
                "{name} changed since the run"
            )))
            .at(Stage::Load);
        }
    }
    let summary: MapsSummary = read_json(&dir.join("maps.json")).at(Stage::Load)?;
    let global: GlobalMapFile = read_json(&dir.join("global_map.json")).at(Stage::Load)?;
    let hash = manifest.config_hash.clone();
    let mut sketches = Vec::new();
    for w in &summary.windows {
        let points =
            read_points(&dir.join(format!("window_{}_points.csv", w.window))).at(Stage::Load)?;
        let diagram =
            read_diagram(&dir.join(format!("window_{}_diagram.csv", w.window))).at(Stage::Load)?;
        sketches.push(WindowSketch::from_rows(w, &points, &diagram).at(Stage::Render)?);
    }
    let mut out = Artifacts {
        dir,
        hashes: BTreeMap::new(),
    };
    for (name, svg) in svg_files(&sketches, &global.map, &hash) {
        out.put(name, &svg).at(Stage::Render)?;
    }
    manifest.artifacts.extend(out.hashes);
    manifest.svg = true;
    write_file(&manifest_path, &to_json(&manifest)).at(Stage::Write)?;
    Ok(manifest)
}

#[derive(Debug, Clone, PartialEq)]
pub enum ReplayOutcome {
    /// Every artifact was regenerated with its recorded hash.
    Verified(RunManifest),
    /// A seed override produced a new run.
    NewRun(RunManifest),
}

/// Re-executes the run recorded in a manifest into `out_dir` (by default
/// `replay/` next to the manifest) and checks the artifact hashes. A changed
/// scenario file or input log is a mismatch. With `seed` set to a different
/// value the replay is a new run with its own manifest.
pub fn replay(
    manifest_path: &Path,
    out_dir: Option<&Path>,
    seed: Option<u64>,
) -> std::result::Result<ReplayOutcome, StageError> {
    let recorded = RunManifest::load(manifest_path).at(Stage::Load)?;
    let scenario = read_bytes(&recorded.scenario_path).at(Stage::Load)?;
    if sha256_hex(&scenario) != recorded.scenario_sha256 {
        return Err(Error::ReplayMismatch(format!(
            "scenario file {} differs from the one recorded in the manifest",
            recorded.scenario_path.display()
        )))
        .at(Stage::Verify);
    }
    if let Some(input) = &recorded.input_dir {
        for (name, expected) in &recorded.inputs {
            let actual = sha256_hex(&read_bytes(&input.join(name)).at(Stage::Load)?);
            if &actual != expected {
                return Err(Error::ReplayMismatch(format!(
                    "input {name} differs from the recorded one"
                )))
                .at(Stage::Verify);
            }
        }
    }
    let mut req = recorded.request();
    req.out_dir = match out_dir {
        Some(d) => d.to_path_buf(),
        None => manifest_path
            .parent()
            .unwrap_or(Path::new("."))
            .join("replay"),
    };
    let new_seed = seed.filter(|&s| s != recorded.seed);
    if let Some(s) = new_seed {
        req.seed = s;
    }
    let fresh = execute(&req)?;
    if new_seed.is_some() {
        return Ok(ReplayOutcome::NewRun(fresh));
    }
    if fresh.config_hash != recorded.config_hash {
        return Err(Error::ReplayMismatch(
            "effective configuration hash differs".into(),
        ))
        .at(Stage::Verify);
    }
    let names: std::collections::BTreeSet<&String> = recorded
        .artifacts
        .keys()
        .chain(fresh.artifacts.keys())
        .collect();
    let differing: Vec<&str> = names
        .into_iter()
        .filter(|n| recorded.artifacts.get(*n) != fresh.artifacts.get(*n))
        .map(|n| n.as_str())
        .collect();
    if !differing.is_empty() {
        return Err(Error::ReplayMismatch(format!(
            "artifacts differ: {}",
            differing.join(", ")
        )))
        .at(Stage::Verify);
    }
    Ok(ReplayOutcome::Verified(fresh))
}

//! Batch front-end: argument parsing, input loading, output files and the
//! run manifest.
//!
//! Every run writes its outputs into `--out` and finishes with
//! `manifest.json`, which lists each output with its SHA-256. The manifest
//! is written first with `"complete": false` and rewritten at the end, so an
//! interrupted run leaves a manifest marked incomplete.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::embed::{
    certificate_from_spectral_gap, cut_cone_lp, l1_poincare_value, max_separation_sdp,
    poincare_value, EmbedError,
};
use crate::groups::{box_space_build, FiltrationSpec, GroupError};
use crate::metric::{coarse_disjoint_union, BlockMeta, BlockSpace, FiniteMetricSpace, MetricError};
use crate::scan::{ce_at_infinity_profile, generalized_expander_search, ExclusionRule, ScanError};
use crate::sdp::SolveStatus;
use crate::spectral::{cubic_graph, spectral_report, FiniteGraph, SpectralError};
use crate::warp::{warp_metric, NetSpec, WarpError};

/// Exit status for solver results that did not reach the gap tolerance.
pub const EXIT_MARGINAL: i32 = 2;
/// Exit status for unreadable or invalid input.
pub const EXIT_INPUT: i32 = 1;
/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "COARSE_LAB_THREADS";

const DEFAULT_MAX_ELEMENTS: usize = 100_000;

#[derive(Debug, Parser, Serialize)]
#[command(name = "coarse-lab", version, about = "Finite coarse geometry toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Output directory (created if missing).
    #[arg(long, global = true, default_value = "out")]
    #[serde(skip)]
    pub out: PathBuf,
    /// Seed recorded in the manifest for randomized harnesses.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Build a coarse disjoint union from a filtration, graphs, or spaces.
    Build(BuildArgs),
    /// Spectral gap of graphs, or of every block of a union.
    Spectrum(SpectrumArgs),
    /// Optimal separation of one finite metric space at scale R.
    Embed(EmbedArgs),
    /// Spectral-gap certificate of a graph, or a certificate search over a union.
    Certify(CertifyArgs),
    /// Separation profile of a union over a list of scales.
    Scan(ScanArgs),
    /// Warped metric on a cone net.
    Warp(WarpArgs),
}

/// Graph source: an edge-list path, or `cubic:N`, `cycle:N`, `complete:N`, `path:N`.
#[derive(Debug, Args, Serialize)]
pub struct BuildArgs {
    #[arg(long)]
    pub filtration: Option<PathBuf>,
    /// Graph blocks, in order.
    #[arg(long)]
    pub graph: Vec<String>,
    /// Metric-space blocks (JSON), in order.
    #[arg(long)]
    pub space: Vec<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_MAX_ELEMENTS)]
    pub max_elements: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct SpectrumArgs {
    #[arg(long)]
    pub graph: Vec<String>,
    /// A union whose blocks carry graphs.
    #[arg(long)]
    pub space: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Hilbert,
    L1,
}

#[derive(Debug, Args, Serialize)]
pub struct EmbedArgs {
    #[arg(long)]
    pub space: PathBuf,
    #[arg(long = "R")]
    pub r: f64,
    #[arg(long, value_enum, default_value_t = Target::Hilbert)]
    pub target: Target,
}

#[derive(Debug, Args, Serialize)]
pub struct CertifyArgs {
    #[arg(long)]
    pub graph: Option<String>,
    /// A union to search for a uniform certificate family.
    #[arg(long)]
    pub space: Option<PathBuf>,
    /// `r:R` pairs separated by commas, or a JSON file of `[[r, R], …]`.
    #[arg(long)]
    pub schedule: Option<String>,
    /// Largest admissible constant; defaults to `2·k0/min λ1` over the blocks.
    #[arg(long)]
    pub c_max: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ScanArgs {
    #[arg(long)]
    pub space: Option<PathBuf>,
    #[arg(long)]
    pub filtration: Option<PathBuf>,
    /// Comma-separated increasing scales.
    #[arg(long = "R")]
    pub r: Option<String>,
    /// Alternative to `--R`: the `R` entries of a schedule.
    #[arg(long)]
    pub schedule: Option<String>,
    /// `inj`, `fixed:N`, or `table:R1=N1,R2=N2,…`.
    #[arg(long, default_value = "inj")]
    pub exclusion_rule: String,
    #[arg(long, default_value_t = DEFAULT_MAX_ELEMENTS)]
    pub max_elements: usize,
}

#[derive(Debug, Args, Serialize)]
pub struct WarpArgs {
    #[arg(long)]
    pub net: PathBuf,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{context}: {source}")]
    Metric {
        context: String,
        source: MetricError,
    },
    #[error("{context}: {source}")]
    Group { context: String, source: GroupError },
    #[error("{context}: {source}")]
    Spectral {
        context: String,
        source: SpectralError,
    },
    #[error("{context}: {source}")]
    Embed { context: String, source: EmbedError },
    #[error("{context}: {source}")]
    Scan { context: String, source: ScanError },
    #[error("{context}: {source}")]
    Warp { context: String, source: WarpError },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }
}

/// What a successful run produced.
#[derive(Debug, Clone)]
pub struct RunReport {
    pub outputs: Vec<PathBuf>,
    pub marginal: bool,
    pub summary: String,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        if self.marginal {
            EXIT_MARGINAL
        } else {
            0
        }
    }
}

#[derive(Serialize)]
struct ManifestEntry {
    file: String,
    bytes: usize,
    sha256: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a Command,
    seed: u64,
    complete: bool,
    marginal: bool,
    outputs: Vec<ManifestEntry>,
}

struct OutDir {
    dir: PathBuf,
    written: Vec<(String, Vec<u8>)>,
}

impl OutDir {
    fn new(dir: &Path) -> Result<Self, CliError> {
        fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.display().to_string(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    fn write_raw(&self, name: &str, bytes: &[u8]) -> Result<(), CliError> {
        let path = self.dir.join(name);
        let tmp = self.dir.join(format!(".{name}.tmp"));
        let io = |source| CliError::Io {
            path: path.display().to_string(),
            source,
        };
        fs::write(&tmp, bytes).map_err(io)?;
        fs::rename(&tmp, &path).map_err(io)
    }

    fn write(&mut self, name: &str, bytes: Vec<u8>) -> Result<(), CliError> {
        self.write_raw(name, &bytes)?;
        self.written.push((name.to_string(), bytes));
        Ok(())
    }

    fn json<T: Serialize + ?Sized>(&mut self, name: &str, value: &T) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(value).expect("outputs serialize");
        text.push('\n');
        self.write(name, text.into_bytes())
    }

    fn manifest(&self, cli: &Cli, complete: bool, marginal: bool) -> Result<(), CliError> {
        let outputs = self
            .written
            .iter()
            .map(|(file, bytes)| ManifestEntry {
                file: file.clone(),
                bytes: bytes.len(),
                sha256: hex::encode(Sha256::digest(bytes)),
            })
            .collect();
        let m = Manifest {
            tool: "coarse-lab",
            version: env!("CARGO_PKG_VERSION"),
            command: &cli.command,
            seed: cli.seed,
            complete,
            marginal,
            outputs,
        };
        let mut text = serde_json::to_string_pretty(&m).expect("manifest serializes");
        text.push('\n');
        self.write_raw("manifest.json", text.as_bytes())
    }
}

fn read_text(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

/// Loads a union; a plain metric space becomes a one-block union.
fn read_block_space(path: &Path) -> Result<BlockSpace, CliError> {
    let text = read_text(path)?;
    let parse_err = |e: serde_json::Error| CliError::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let value: serde_json::Value = serde_json::from_str(&text).map_err(parse_err)?;
    if value.get("blocks").is_some() {
        serde_json::from_str(&text).map_err(parse_err)
    } else {
        let single: FiniteMetricSpace = serde_json::from_str(&text).map_err(parse_err)?;
        coarse_disjoint_union(vec![single]).map_err(|source| CliError::Metric {
            context: path.display().to_string(),
            source,
        })
    }
}

/// Resolves a graph source string.
pub fn load_graph(source: &str) -> Result<FiniteGraph, CliError> {
    let usage = |msg: &str| CliError::Usage(format!("--graph {source}: {msg}"));
    if let Some((kind, n)) = source.split_once(':') {
        if matches!(kind, "cubic" | "cycle" | "complete" | "path") {
            let n: usize = n.parse().map_err(|_| usage("expected a vertex count"))?;
            return match kind {
                "cubic" if n >= 4 && n % 2 == 0 => Ok(cubic_graph(n)),
                "cubic" => Err(usage("3-regular graphs need an even count >= 4")),
                "cycle" if n >= 3 => Ok(FiniteGraph::cycle(n)),
                "cycle" => Err(usage("cycles need at least 3 vertices")),
                "complete" if n >= 1 => Ok(FiniteGraph::complete(n)),
                "path" if n >= 1 => Ok(FiniteGraph::path(n)),
                _ => Err(usage("need at least one vertex")),
            };
        }
    }
    let text = read_text(Path::new(source))?;
    FiniteGraph::from_edge_list(&text, None).map_err(|source_err| CliError::Spectral {
        context: source.to_string(),
        source: source_err,
    })
}

fn graph_block(source: &str, g: FiniteGraph) -> Result<(FiniteMetricSpace, BlockMeta), CliError> {
    let metric = g.metric().map_err(|e| CliError::Spectral {
        context: source.to_string(),
        source: e,
    })?;
    Ok((
        metric,
        BlockMeta {
            injectivity_radius: None,
            graph: Some(g),
        },
    ))
}

/// Parses `1,2,4` into increasing scales.
pub fn parse_scales(text: &str) -> Result<Vec<f64>, CliError> {
    text.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| CliError::Usage(format!("--R: cannot parse {t:?} as a number")))
        })
        .collect()
}

/// Parses `r:R,r:R` or reads a JSON file of `[[r, R], …]`.
pub fn parse_schedule(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    let path = Path::new(text);
    if path.exists() {
        return read_json(path);
    }
    text.split(',')
        .map(|item| {
            let bad = || CliError::Usage(format!("--schedule: cannot parse {item:?} as r:R"));
            let (a, b) = item.split_once(':').ok_or_else(bad)?;
            Ok((
                a.trim().parse().map_err(|_| bad())?,
                b.trim().parse().map_err(|_| bad())?,
            ))
        })
        .collect()
}

fn fmt_status(s: SolveStatus) -> &'static str {
    match s {
        SolveStatus::Optimal => "optimal",
        SolveStatus::NumericallyMarginal => "numerically marginal",
    }
}

/// Executes a parsed command line.
pub fn run(cli: &Cli) -> Result<RunReport, CliError> {
    let mut out = OutDir::new(&cli.out)?;
    out.manifest(cli, false, false)?;
    let (marginal, summary) = match &cli.command {
        Command::Build(a) => run_build(a, &mut out)?,
        Command::Spectrum(a) => run_spectrum(a, &mut out)?,
        Command::Embed(a) => run_embed(a, &mut out)?,
        Command::Certify(a) => run_certify(a, &mut out)?,
        Command::Scan(a) => run_scan(a, &mut out)?,
        Command::Warp(a) => run_warp(a, &mut out)?,
    };
    out.manifest(cli, true, marginal)?;
    let mut outputs: Vec<PathBuf> = out.written.iter().map(|(f, _)| cli.out.join(f)).collect();
    outputs.push(cli.out.join("manifest.json"));
    Ok(RunReport {
        outputs,
        marginal,
        summary,
    })
}

fn build_space(
    filtration: Option<&Path>,
    graphs: &[String],
    spaces: &[PathBuf],
    max_elements: usize,
) -> Result<BlockSpace, CliError> {
    let sources = usize::from(filtration.is_some()) + usize::from(!graphs.is_empty()) + usize::from(!spaces.is_empty());
    if sources != 1 {
        return Err(CliError::Usage(
            "give exactly one of --filtration, --graph, or --space".into(),
        ));
    }
    if let Some(path) = filtration {
        let spec: FiltrationSpec = read_json(path)?;
        let (space, _) = box_space_build(&spec, max_elements).map_err(|source| CliError::Group {
            context: path.display().to_string(),
            source,
        })?;
        return Ok(space);
    }
    let mut blocks = Vec::new();
    let mut meta = Vec::new();
    for g in graphs {
        let (b, m) = graph_block(g, load_graph(g)?)?;
        blocks.push(b);
        meta.push(m);
    }
    for p in spaces {
        blocks.push(read_json(p)?);
        meta.push(BlockMeta::default());
    }
    let metric_err = |source| CliError::Metric {
        context: "union".into(),
        source,
    };
    coarse_disjoint_union(blocks)
        .map_err(metric_err)?
        .with_meta(meta)
        .map_err(metric_err)
}

fn run_build(a: &BuildArgs, out: &mut OutDir) -> Result<(bool, String), CliError> {
    let space = build_space(a.filtration.as_deref(), &a.graph, &a.space, a.max_elements)?;
    out.json("space.json", &space)?;
    let mut csv = String::from("block,n,diam,offset,injectivity_radius\n");
    for (k, b) in space.blocks().iter().enumerate() {
        let inj = space.meta()[k]
            .injectivity_radius
            .map(|r| r.to_string())
            .unwrap_or_default();
        csv.push_str(&format!("{k},{},{},{},{inj}\n", b.len(), b.diameter(), space.offsets()[k]));
    }
    out.write("blocks.csv", csv.into_bytes())?;
    Ok((
        false,
        format!("built {} blocks, {} points", space.num_blocks(), space.num_points()),
    ))
}

#[derive(Serialize)]
struct SpectrumEntry {
    source: String,
    n: usize,
    k0: usize,
    lambda1: f64,
    diam: usize,
}

fn run_spectrum(a: &SpectrumArgs, out: &mut OutDir) -> Result<(bool, String), CliError> {
    let mut graphs: Vec<(String, FiniteGraph)> = Vec::new();
    for g in &a.graph {
        graphs.push((g.clone(), load_graph(g)?));
    }
    if let Some(path) = &a.space {
        let space = read_block_space(path)?;
        for (k, m) in space.meta().iter().enumerate() {
            let g = m.graph.clone().ok_or(CliError::Spectral {
                context: path.display().to_string(),
                source: SpectralError::MissingGraph(k),
            })?;
            graphs.push((format!("block {k}"), g));
        }
    }
    if graphs.is_empty() {
        return Err(CliError::Usage("spectrum needs --graph or --space".into()));
    }
    let mut entries = Vec::new();
    for (source, g) in graphs {
        let r = spectral_report(&g).map_err(|e| CliError::Spectral {
            context: source.clone(),
            source: e,
        })?;
        entries.push(SpectrumEntry {
            source,
            n: r.n,
            k0: r.k0,
            lambda1: r.lambda1,
            diam: r.diam,
        });
    }
    let mut csv = String::from("block,n,k0,lambda1\n");
    for (k, e) in entries.iter().enumerate() {
        csv.push_str(&format!("{k},{},{},{:.12}\n", e.n, e.k0, e.lambda1));
    }
    let summary = entries
        .iter()
        .map(|e| format!("{}: lambda1 = {:.10}", e.source, e.lambda1))
        .collect::<Vec<_>>()
        .join("\n");
    out.json("spectrum.json", &entries)?;
    out.write("spectrum.csv", csv.into_bytes())?;
    Ok((false, summary))
}

fn run_embed(a: &EmbedArgs, out: &mut OutDir) -> Result<(bool, String), CliError> {
    let space: FiniteMetricSpace = read_json(&a.space)?;
    let context = a.space.display().to_string();
    let embed_err = |source| CliError::Embed {
        context: context.clone(),
        source,
    };
    let (result, check) = match a.target {
        Target::Hilbert => {
            let res = max_separation_sdp(&space, a.r).map_err(embed_err)?;
            let pv = poincare_value(&space, &res.certificate).map_err(embed_err)?;
            (res, pv)
        }
        Target::L1 => {
            let res = cut_cone_lp(&space, a.r).map_err(embed_err)?;
            let pv = l1_poincare_value(&space, &res.certificate.pairs).map_err(embed_err)?;
            (res, pv)
        }
    };
    out.json("embed.json", &result)?;
    let summary = format!(
        "s_star = {:.10} ({}), certificate c = {:.10}, recomputed value = {:.10}",
        result.s_star,
        fmt_status(result.status),
        result.certificate.c,
        check
    );
    Ok((result.status == SolveStatus::NumericallyMarginal, summary))
}

#[derive(Serialize)]
struct SpectralCheck<'a> {
    #[serde(flatten)]
    certificate: &'a crate::embed::SpectralCertificate,
    poincare_value: f64,
}

fn run_certify(a: &CertifyArgs, out: &mut OutDir) -> Result<(bool, String), CliError> {
    match (&a.graph, &a.space) {
        (Some(source), None) => {
            let g = load_graph(source)?;
            let embed_err = |e| CliError::Embed {
                context: source.clone(),
                source: e,
            };
            let cert = certificate_from_spectral_gap(&g).map_err(embed_err)?;
            let metric = g.metric().map_err(|e| CliError::Spectral {
                context: source.clone(),
                source: e,
            })?;
            let pv = poincare_value(&metric, &cert.measure).map_err(embed_err)?;
            out.json(
                "certificate.json",
                &SpectralCheck {
                    certificate: &cert,
                    poincare_value: pv,
                },
            )?;
            Ok((
                false,
                format!(
                    "lambda1 = {:.10}, bound 2k0/lambda1 = {:.10}, tight value = {:.10}{}",
                    cert.lambda1,
                    cert.bound,
                    pv,
                    if cert.all_pairs { " (all distinct pairs)" } else { "" }
                ),
            ))
        }
        (None, Some(path)) => {
            let space = read_block_space(path)?;
            let schedule = parse_schedule(
                a.schedule
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("certify --space needs --schedule".into()))?,
            )?;
            let c_max = match a.c_max {
                Some(c) => c,
                None => default_c_max(&space, path)?,
            };
            let search = generalized_expander_search(&space, &schedule, c_max).map_err(|e| {
                CliError::Scan {
                    context: path.display().to_string(),
                    source: e,
                }
            })?;
            out.json("search.json", &search)?;
            let filled = search.slots.iter().filter(|s| s.found.is_some()).count();
            Ok((
                false,
                format!(
                    "{filled}/{} slots certified with c <= {c_max:.6} ({})",
                    search.slots.len(),
                    search.label
                ),
            ))
        }
        _ => Err(CliError::Usage(
            "certify needs exactly one of --graph or --space".into(),
        )),
    }
}

fn default_c_max(space: &BlockSpace, path: &Path) -> Result<f64, CliError> {
    let mut worst: f64 = 0.0;
    for (k, m) in space.meta().iter().enumerate() {
        let g = m.graph.as_ref().ok_or_else(|| {
            CliError::Usage(format!(
                "{}: block {k} has no graph; pass --c-max",
                path.display()
            ))
        })?;
        let r = spectral_report(g).map_err(|e| CliError::Spectral {
            context: format!("{} block {k}", path.display()),
            source: e,
        })?;
        worst = worst.max(2.0 * r.k0 as f64 / r.lambda1);
    }
    Ok(worst)
}

fn run_scan(a: &ScanArgs, out: &mut OutDir) -> Result<(bool, String), CliError> {
    let space = match (&a.space, &a.filtration) {
        (Some(p), None) => read_block_space(p)?,
        (None, Some(f)) => build_space(Some(f), &[], &[], a.max_elements)?,
        _ => {
            return Err(CliError::Usage(
                "scan needs exactly one of --space or --filtration".into(),
            ))
        }
    };
    let scales = match (&a.r, &a.schedule) {
        (Some(r), None) => parse_scales(r)?,
        (None, Some(s)) => parse_schedule(s)?.into_iter().map(|(_, big)| big).collect(),
        _ => return Err(CliError::Usage("scan needs exactly one of --R or --schedule".into())),
    };
    let rule = ExclusionRule::parse(&a.exclusion_rule).map_err(|e| CliError::Usage(e.to_string()))?;
    let profile = ce_at_infinity_profile(&space, &scales, &rule).map_err(|e| CliError::Scan {
        context: "scan".into(),
        source: e,
    })?;
    out.write("profile.csv", profile.to_csv().into_bytes())?;
    out.json("profile_summary.json", &profile.summary())?;
    out.json("profile.json", &profile)?;
    let mut rho_csv = String::from("R,excluded,windows,rho_minus\n");
    for e in &profile.per_scale {
        let rho = e.rho_minus.map(|v| format!("{v:.12}")).unwrap_or_default();
        rho_csv.push_str(&format!("{},{},{},{rho}\n", e.r, e.excluded, e.windows.len()));
    }
    out.write("rho_minus.csv", rho_csv.into_bytes())?;
    let summary = profile
        .per_scale
        .iter()
        .map(|e| match e.rho_minus {
            Some(v) => format!("R = {}: rho_minus = {v:.10}", e.r),
            None => format!("R = {}: no windows", e.r),
        })
        .collect::<Vec<_>>()
        .join("\n");
    Ok((profile.any_marginal(), format!("{summary}\n({})", profile.label)))
}

#[derive(Serialize)]
struct WarpMeta {
    points: usize,
    levels: Vec<f64>,
    snap_errors: Vec<f64>,
    exact: bool,
}

fn run_warp(a: &WarpArgs, out: &mut OutDir) -> Result<(bool, String), CliError> {
    let spec: NetSpec = read_json(&a.net)?;
    let context = a.net.display().to_string();
    let warp_err = |source| CliError::Warp {
        context: context.clone(),
        source,
    };
    let net = spec.build().map_err(warp_err)?;
    let warped = warp_metric(&net).map_err(warp_err)?;
    let intrinsic = net.intrinsic_metric().map_err(warp_err)?;
    let meta = WarpMeta {
        points: net.len(),
        levels: net.levels.clone(),
        snap_errors: net.generators.iter().map(|g| g.snap_error).collect(),
        exact: net.generators.iter().all(|g| g.is_exact()),
    };
    out.json("warp.json", &warped)?;
    out.json("intrinsic.json", &intrinsic)?;
    out.json("net_meta.json", &meta)?;
    let mut summary = format!("{} points, diameter {}", net.len(), warped.diameter());
    if !meta.exact {
        summary.push_str(&format!(
            "\nwarning: rotation is not a net shift; snap errors {:?}",
            meta.snap_errors
        ));
    }
    Ok((false, summary))
}

/// Sizes the global worker pool from [`THREADS_ENV`], if set.
pub fn configure_threads() -> Result<(), CliError> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV}={v:?} is not a positive integer")))?;
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    Ok(())
}

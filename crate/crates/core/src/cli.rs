//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 no consent-surface root,
//! 4 at least one censored audit (reports still written), 64 usage error.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::archetype::{canonical_calibration, generate_archetype, generate_corpus, ArchetypeKind, ArchetypeParams, CorpusSpec, Provenance};
use crate::detector::{Detector, LabelLexicon};
use crate::error::{AuditError, SnapshotError};
use crate::fixtures::{evaluate, ground_truth, load_fixture_corpus, predict, DetectorEvaluation, Verdict};
use crate::report::{canonical_json, evidence_svg, render_summary, render_text, run_audit, summarize_corpus, AuditConfig, AuditReport, PolicySelection, RunRecord};
use crate::scoring::{named_profile, parse_profile, WeightProfile};
use crate::sensitivity::{audit_corpus, canonical_snapshots, component_shares, perturbation_table, rank_stability, sample_weight_profiles, PerturbationSpec};
use crate::snapshot::{parse_snapshot, Snapshot};
use crate::state::Policy;
use crate::stats::{cohen_kappa, power_sample_size, precision_recall, Confusion2x2};
use crate::traversal::{Budget, TimingConstants};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_NO_ROOT: i32 = 3;
pub const EXIT_CENSORED: i32 = 4;
pub const EXIT_USAGE: i32 = 64;

const DEFAULT_SEED: u64 = 42;

#[derive(Debug, Parser)]
#[command(name = "psi-audit", version, about = "Deterministic burden audits of consent-surface snapshots")]
pub struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Traversal policy: pointer, keyboard or both.
    #[arg(long, global = true, default_value = "both")]
    policy: PolicySelection,
    /// Comma-separated profile names (default, accessibility, delay, disclosure) or custom:a,b,g,d.
    #[arg(long, global = true, default_value = "default")]
    profile: String,
    /// Viewport: desktop, mobile or WIDTHxHEIGHT.
    #[arg(long, global = true)]
    breakpoint: Option<String>,
    /// Replacement label lexicon (JSON).
    #[arg(long, global = true)]
    lexicon: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output file or directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "report")]
    format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Report,
    Text,
}

#[derive(Debug, Args, Default)]
struct EngineArgs {
    #[arg(long)]
    max_interactions: Option<u32>,
    #[arg(long)]
    max_pane_depth: Option<u32>,
    #[arg(long)]
    wait_budget_ms: Option<u32>,
    /// Seconds per primary interaction.
    #[arg(long)]
    handling_s: Option<f64>,
    /// Seconds per scrolled viewport.
    #[arg(long)]
    scroll_s_per_viewport: Option<f64>,
    /// Seconds per tab stop in a focus loop.
    #[arg(long)]
    focus_step_s: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Audit one or more snapshots.
    Audit {
        #[arg(long = "snapshot", required = true, num_args = 1..)]
        snapshots: Vec<PathBuf>,
        /// Directory for evidence overlays (SVG).
        #[arg(long)]
        svg: Option<PathBuf>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Emit one archetype snapshot, or a seeded corpus directory with a manifest.
    Generate {
        /// scroll_wall, accordion, multi_step or co_present. Omit for a corpus.
        #[arg(long)]
        archetype: Option<ArchetypeKind>,
        /// Use the bundled calibration for the archetype.
        #[arg(long)]
        calibrated: bool,
        #[arg(long)]
        scroll_depth_vh: Option<f64>,
        #[arg(long)]
        reveal_count: Option<u32>,
        #[arg(long)]
        pane_count: Option<u32>,
        #[arg(long)]
        animation_ms: Option<u32>,
        #[arg(long)]
        settle_ms: Option<u32>,
        #[arg(long)]
        focus_trap: bool,
        /// Items per archetype (corpus mode).
        #[arg(long)]
        count: Option<u32>,
        /// Corpus spec JSON (corpus mode).
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Audit a corpus directory (or the default synthetic corpus) and summarize it.
    Corpus {
        /// Directory written by `generate`; omitted means generate in memory.
        #[arg(long)]
        snapshots: Option<PathBuf>,
        #[arg(long)]
        count: Option<u32>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Perturbation grid on the calibrated archetypes and weight-profile robustness.
    Sensitivity {
        #[arg(long, default_value_t = 1000)]
        profiles: usize,
        #[arg(long)]
        constrained: bool,
        #[arg(long, default_value_t = 1.0)]
        concentration: f64,
        #[arg(long)]
        count: Option<u32>,
    },
    /// Median/IQR tables from a directory of reports.
    Summarize {
        #[arg(long)]
        reports: PathBuf,
    },
    /// Detector precision/recall/kappa against labels.
    Eval {
        /// Label file: item id -> {visible, actionable}. Defaults to the bundled corpus.
        #[arg(long)]
        labels: Option<PathBuf>,
        /// Prediction file of the same shape. Defaults to running the detector.
        #[arg(long)]
        predictions: Option<PathBuf>,
    },
    /// Participants needed to detect a correlation.
    Power {
        #[arg(long)]
        r: f64,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 0.80)]
        power: f64,
    },
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invalid(String),
    NoRoot(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::NoRoot(_) => EXIT_NO_ROOT,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Invalid(m) | CliError::NoRoot(m) => m,
        }
    }
}

impl From<AuditError> for CliError {
    fn from(e: AuditError) -> Self {
        match e {
            AuditError::InvalidParams(_) | AuditError::UnknownProfile { .. } => CliError::Usage(e.to_string()),
            other => CliError::Invalid(other.to_string()),
        }
    }
}

fn snapshot_error(path: &Path, e: SnapshotError) -> CliError {
    let msg = format!("{}: {e}", path.display());
    match e {
        SnapshotError::NoSurfaceRoot(_) => CliError::NoRoot(msg),
        _ => CliError::Invalid(msg),
    }
}

type CliResult = Result<i32, CliError>;

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{text}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{text}");
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write) -> CliResult {
    let g = &cli.global;
    match &cli.command {
        Command::Audit { snapshots, svg, engine } => cmd_audit(g, snapshots, svg.as_deref(), engine, stdout),
        Command::Generate {
            archetype,
            calibrated,
            scroll_depth_vh,
            reveal_count,
            pane_count,
            animation_ms,
            settle_ms,
            focus_trap,
            count,
            spec,
        } => match archetype {
            Some(kind) => {
                let mut params = if *calibrated {
                    canonical_calibration().remove(kind).expect("every kind is calibrated")
                } else {
                    ArchetypeParams::default()
                };
                if let Some(v) = scroll_depth_vh {
                    params.scroll_depth_vh = *v;
                }
                if let Some(v) = reveal_count {
                    params.reveal_count = *v;
                }
                if let Some(v) = pane_count {
                    params.pane_count = *v;
                }
                if let Some(v) = animation_ms {
                    params.animation_ms_per_gate = *v;
                }
                if let Some(v) = settle_ms {
                    params.choice_settle_ms = *v;
                }
                params.focus_trap |= *focus_trap;
                if let Some(bp) = &g.breakpoint {
                    params.breakpoint = bp.clone();
                }
                let snap = generate_archetype(*kind, &params, g.seed.unwrap_or(DEFAULT_SEED))?;
                emit(g.out.as_deref(), &snap.to_canonical_json(), stdout)?;
                Ok(EXIT_OK)
            }
            None => cmd_generate_corpus(g, *count, spec.as_deref(), stdout),
        },
        Command::Corpus { snapshots, count, engine } => cmd_corpus(g, snapshots.as_deref(), *count, engine, stdout),
        Command::Sensitivity {
            profiles,
            constrained,
            concentration,
            count,
        } => cmd_sensitivity(g, *profiles, *constrained, *concentration, *count, stdout),
        Command::Summarize { reports } => cmd_summarize(g, reports, stdout),
        Command::Eval { labels, predictions } => cmd_eval(g, labels.as_deref(), predictions.as_deref(), stdout),
        Command::Power { r, alpha, power } => {
            let n = power_sample_size(*r, *alpha, *power).map_err(|e| CliError::Usage(e.to_string()))?;
            let text = match g.format {
                Format::Text => format!("n = {n}\n"),
                Format::Report => canonical_json(&serde_json::json!({"r": r, "alpha": alpha, "power": power, "n": n})),
            };
            emit(g.out.as_deref(), &text, stdout)?;
            Ok(EXIT_OK)
        }
    }
}

/// Splits a profile list, keeping the commas inside `custom:a,b,g,d`.
pub fn parse_profiles(spec: &str) -> Result<Vec<WeightProfile>, AuditError> {
    let tokens: Vec<&str> = spec.split(',').map(str::trim).collect();
    let mut out: Vec<WeightProfile> = Vec::new();
    let mut i = 0;
    while i < tokens.len() {
        let p = if tokens[i].starts_with("custom:") {
            let end = (i + 4).min(tokens.len());
            let joined = tokens[i..end].join(",");
            i = end;
            parse_profile(&joined)?
        } else {
            i += 1;
            named_profile(tokens[i - 1])?
        };
        if !out.iter().any(|q| q.name == p.name) {
            out.push(p);
        }
    }
    if out.is_empty() {
        return Err(AuditError::InvalidParams("no profile given".into()));
    }
    Ok(out)
}

fn detector(g: &GlobalArgs) -> Result<Detector, CliError> {
    match &g.lexicon {
        None => Ok(Detector::default()),
        Some(path) => {
            let text = read(path)?;
            Ok(Detector::new(LabelLexicon::from_json(&text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))?))
        }
    }
}

fn config(g: &GlobalArgs, engine: &EngineArgs) -> Result<AuditConfig, CliError> {
    let mut budget = Budget::default();
    if let Some(v) = engine.max_interactions {
        budget.max_interactions = v;
    }
    if let Some(v) = engine.max_pane_depth {
        budget.max_pane_depth = v;
    }
    if let Some(v) = engine.wait_budget_ms {
        budget.wait_budget_ms = v;
    }
    let mut timing = TimingConstants::default();
    if let Some(v) = engine.handling_s {
        timing.handling_s = v;
    }
    if let Some(v) = engine.scroll_s_per_viewport {
        timing.scroll_s_per_viewport = v;
    }
    if let Some(v) = engine.focus_step_s {
        timing.focus_step_s = v;
    }
    let cfg = AuditConfig {
        policy: g.policy,
        profiles: parse_profiles(&g.profile)?,
        breakpoint: g.breakpoint.clone(),
        budget,
        timing,
        lexicon: g.lexicon.as_ref().map(|p| p.display().to_string()),
        seed: g.seed,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).map_err(|e| CliError::Invalid(format!("{}: {e}", parent.display())))?;
    }
    fs::write(path, text).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => write_file(p, text),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Invalid(format!("stdout: {e}"))),
    }
}

fn load_snapshot(path: &Path) -> Result<Snapshot, CliError> {
    parse_snapshot(&read(path)?).map_err(|e| snapshot_error(path, e))
}

fn snapshot_id(path: &Path) -> String {
    let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    for suffix in [".snapshot.json", ".json", ".snapshot"] {
        if let Some(stem) = name.strip_suffix(suffix) {
            return stem.to_string();
        }
    }
    name
}

/// Order-preserving map over scoped worker threads.
fn par_map<T: Sync, R: Send>(items: &[T], f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get()).min(items.len().max(1));
    let chunk = items.len().div_ceil(workers).max(1);
    std::thread::scope(|s| {
        let handles: Vec<_> = items
            .chunks(chunk)
            .map(|c| {
                let f = &f;
                s.spawn(move || c.iter().map(f).collect::<Vec<R>>())
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("audit worker panicked"))
            .collect()
    })
}

fn cmd_audit(g: &GlobalArgs, paths: &[PathBuf], svg: Option<&Path>, engine: &EngineArgs, stdout: &mut dyn Write) -> CliResult {
    let cfg = config(g, engine)?;
    let det = detector(g)?;
    let snaps = paths
        .iter()
        .map(|p| Ok((snapshot_id(p), load_snapshot(p)?)))
        .collect::<Result<Vec<_>, CliError>>()?;
    let reports = par_map(&snaps, |(id, s)| run_audit(s, id, None, &cfg, &det))
        .into_iter()
        .collect::<Result<Vec<AuditReport>, AuditError>>()?;

    let render = |r: &AuditReport| match g.format {
        Format::Report => r.to_canonical_json(),
        Format::Text => render_text(r),
    };
    let ext = if g.format == Format::Text { "txt" } else { "report.json" };
    match &g.out {
        Some(out) if reports.len() > 1 || out.is_dir() => {
            for r in &reports {
                write_file(&out.join(format!("{}.{ext}", r.snapshot.id)), &render(r))?;
            }
        }
        Some(out) => write_file(out, &render(&reports[0]))?,
        None if reports.len() == 1 || g.format == Format::Text => {
            for r in &reports {
                emit(None, &render(r), stdout)?;
            }
        }
        None => emit(None, &canonical_json(&reports), stdout)?,
    }
    if let Some(dir) = svg {
        for ((_, snap), r) in snaps.iter().zip(&reports) {
            for res in &r.results {
                if let Some(frame) = &res.evidence {
                    write_file(&dir.join(format!("{}-{}.svg", r.snapshot.id, res.policy)), &evidence_svg(snap, frame))?;
                }
            }
        }
    }
    Ok(if reports.iter().any(AuditReport::any_censored) { EXIT_CENSORED } else { EXIT_OK })
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct CorpusManifest {
    seed: u64,
    spec: CorpusSpec,
    items: Vec<ManifestItem>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
struct ManifestItem {
    snapshot: String,
    provenance: Provenance,
}

fn corpus_spec(g: &GlobalArgs, count: Option<u32>, spec: Option<&Path>) -> Result<CorpusSpec, CliError> {
    let mut s = match spec {
        Some(p) => serde_json::from_str(&read(p)?).map_err(|e| CliError::Invalid(format!("{}: {e}", p.display())))?,
        None => CorpusSpec::default(),
    };
    if let Some(c) = count {
        s.count_per_archetype = c;
    }
    if let Some(seed) = g.seed {
        s.seed = seed;
    }
    if let Some(bp) = &g.breakpoint {
        s.breakpoints = vec![bp.clone()];
    }
    s.validate()?;
    Ok(s)
}

fn cmd_generate_corpus(g: &GlobalArgs, count: Option<u32>, spec: Option<&Path>, stdout: &mut dyn Write) -> CliResult {
    let spec = corpus_spec(g, count, spec)?;
    let out = g
        .out
        .as_deref()
        .ok_or_else(|| CliError::Usage("corpus generation needs --out DIR".into()))?;
    let items = generate_corpus(&spec)?;
    let mut manifest = CorpusManifest {
        seed: spec.seed,
        spec: spec.clone(),
        items: Vec::new(),
    };
    for item in &items {
        let file = format!("{}.snapshot.json", item.provenance.item_id);
        write_file(&out.join(&file), &item.snapshot.to_canonical_json())?;
        manifest.items.push(ManifestItem {
            snapshot: file,
            provenance: item.provenance.clone(),
        });
    }
    write_file(&out.join("manifest.json"), &canonical_json(&manifest))?;
    let _ = writeln!(stdout, "wrote {} snapshots to {}", items.len(), out.display());
    Ok(EXIT_OK)
}

fn cmd_corpus(g: &GlobalArgs, dir: Option<&Path>, count: Option<u32>, engine: &EngineArgs, stdout: &mut dyn Write) -> CliResult {
    let cfg = config(g, engine)?;
    let det = detector(g)?;
    let inputs: Vec<(String, Snapshot, Option<ArchetypeKind>)> = match dir {
        Some(d) => {
            let manifest_path = d.join("manifest.json");
            if manifest_path.exists() {
                let m: CorpusManifest = serde_json::from_str(&read(&manifest_path)?)
                    .map_err(|e| CliError::Invalid(format!("{}: {e}", manifest_path.display())))?;
                m.items
                    .iter()
                    .map(|it| Ok((it.provenance.item_id.clone(), load_snapshot(&d.join(&it.snapshot))?, Some(it.provenance.kind))))
                    .collect::<Result<_, CliError>>()?
            } else {
                list_files(d, ".json")?
                    .into_iter()
                    .map(|p| Ok((snapshot_id(&p), load_snapshot(&p)?, None)))
                    .collect::<Result<_, CliError>>()?
            }
        }
        None => generate_corpus(&corpus_spec(g, count, None)?)?
            .into_iter()
            .map(|it| (it.provenance.item_id, it.snapshot, Some(it.provenance.kind)))
            .collect(),
    };
    let reports = par_map(&inputs, |(id, s, kind)| run_audit(s, id, *kind, &cfg, &det))
        .into_iter()
        .collect::<Result<Vec<AuditReport>, AuditError>>()?;
    if let Some(out) = &g.out {
        for r in &reports {
            write_file(&out.join(format!("{}.report.json", r.snapshot.id)), &r.to_canonical_json())?;
        }
    }
    let runs: Vec<RunRecord> = reports.iter().flat_map(RunRecord::from_report).collect();
    let summary = summarize_corpus(&runs, &cfg.profiles)?;
    let text = match g.format {
        Format::Text => render_summary(&summary),
        Format::Report => canonical_json(&summary),
    };
    emit(None, &text, stdout)?;
    Ok(if reports.iter().any(AuditReport::any_censored) { EXIT_CENSORED } else { EXIT_OK })
}

fn list_files(dir: &Path, suffix: &str) -> Result<Vec<PathBuf>, CliError> {
    let mut out = Vec::new();
    let entries = fs::read_dir(dir).map_err(|e| CliError::Invalid(format!("{}: {e}", dir.display())))?;
    for entry in entries {
        let path = entry.map_err(|e| CliError::Invalid(e.to_string()))?.path();
        if path.is_dir() {
            out.extend(list_files(&path, suffix)?);
        } else if path.file_name().is_some_and(|n| n.to_string_lossy().ends_with(suffix)) && !path.ends_with("manifest.json") {
            out.push(path);
        }
    }
    out.sort();
    Ok(out)
}

fn cmd_summarize(g: &GlobalArgs, dir: &Path, stdout: &mut dyn Write) -> CliResult {
    let profiles = parse_profiles(&g.profile)?;
    let files = list_files(dir, ".report.json")?;
    if files.is_empty() {
        return Err(CliError::Invalid(format!("no reports under {}", dir.display())));
    }
    let mut runs = Vec::new();
    for f in files {
        let r: AuditReport =
            serde_json::from_str(&read(&f)?).map_err(|e| CliError::Invalid(format!("{}: {e}", f.display())))?;
        runs.extend(RunRecord::from_report(&r));
    }
    let summary = summarize_corpus(&runs, &profiles).map_err(|e| CliError::Invalid(e.to_string()))?;
    let text = match g.format {
        Format::Text => render_summary(&summary),
        Format::Report => canonical_json(&summary),
    };
    emit(g.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct SensitivityOutput {
    seed: u64,
    perturbation: Vec<crate::sensitivity::PerturbationRow>,
    robustness: crate::sensitivity::RobustnessReport,
    component_shares: BTreeMap<ArchetypeKind, Option<[f64; 4]>>,
}

fn cmd_sensitivity(
    g: &GlobalArgs,
    n: usize,
    constrained: bool,
    concentration: f64,
    count: Option<u32>,
    stdout: &mut dyn Write,
) -> CliResult {
    let det = detector(g)?;
    let profile = parse_profiles(&g.profile)?.remove(0);
    let seed = g.seed.unwrap_or(DEFAULT_SEED);
    let policy = match g.policy {
        PolicySelection::Keyboard => Policy::Keyboard,
        _ => Policy::Pointer,
    };
    let perturbation = perturbation_table(
        &canonical_snapshots(seed)?,
        &PerturbationSpec::default(),
        &profile,
        policy,
        &det,
        Budget::default(),
    )?;
    let spec = corpus_spec(g, count, None)?;
    let items = generate_corpus(&spec)?;
    let results = audit_corpus(&items, &spec.policies, &det, Budget::default())?;
    let sample = sample_weight_profiles(n, seed, constrained, concentration)?;
    let out = SensitivityOutput {
        seed,
        perturbation,
        robustness: rank_stability(&results, &sample),
        component_shares: component_shares(&results, &profile),
    };
    let text = match g.format {
        Format::Report => canonical_json(&out),
        Format::Text => {
            let mut t = String::new();
            for row in &out.perturbation {
                t.push_str(&format!(
                    "{:<12} vh x{:.1} +{}ms  PSI {:.3}\n",
                    row.kind.as_str(),
                    row.viewport_factor,
                    row.delta_ms,
                    row.psi
                ));
            }
            for c in &out.robustness.claims {
                let s = c.support.map_or("not evaluable".to_string(), |v| format!("{v:.3}"));
                t.push_str(&format!("{:<24} {s}\n", c.claim));
            }
            t
        }
    };
    emit(g.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
struct MetricBlock {
    confusion: Confusion2x2,
    precision: Option<f64>,
    recall: Option<f64>,
    kappa: Option<f64>,
}

impl MetricBlock {
    fn of(c: Confusion2x2) -> MetricBlock {
        let (precision, recall) = precision_recall(&c);
        MetricBlock {
            confusion: c,
            precision,
            recall,
            kappa: cohen_kappa(&c).ok(),
        }
    }
}

fn read_verdicts(path: &Path) -> Result<BTreeMap<String, Verdict>, CliError> {
    serde_json::from_str(&read(path)?).map_err(|e| CliError::Invalid(format!("{}: {e}", path.display())))
}

fn cmd_eval(g: &GlobalArgs, labels: Option<&Path>, predictions: Option<&Path>, stdout: &mut dyn Write) -> CliResult {
    let (truth, pred) = match (labels, predictions) {
        (Some(l), Some(p)) => (read_verdicts(l)?, read_verdicts(p)?),
        (None, None) => {
            let fixtures = load_fixture_corpus()?;
            (ground_truth(&fixtures), predict(&fixtures, &detector(g)?)?)
        }
        _ => return Err(CliError::Usage("--labels and --predictions go together".into())),
    };
    let ev: DetectorEvaluation = evaluate(&truth, &pred);
    let blocks = [("visibility", MetricBlock::of(ev.visibility)), ("actionability", MetricBlock::of(ev.actionability))];
    let text = match g.format {
        Format::Report => canonical_json(&serde_json::json!({
            "items": truth.len(),
            "missing": ev.missing,
            "visibility": blocks[0].1,
            "actionability": blocks[1].1,
        })),
        Format::Text => {
            let f = |v: Option<f64>| v.map_or("undefined".to_string(), |x| format!("{x:.3}"));
            let mut t = format!("items {} (missing predictions {})\n", truth.len(), ev.missing);
            for (name, b) in &blocks {
                t.push_str(&format!(
                    "{name:<14} precision {} recall {} kappa {}\n",
                    f(b.precision),
                    f(b.recall),
                    f(b.kappa)
                ));
            }
            t
        }
    };
    emit(g.out.as_deref(), &text, stdout)?;
    Ok(EXIT_OK)
}

//! The `ftsurf` command line.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::analysis::memory::CSV_HEADER;
use crate::analysis::{
    fit_resource_curve, lambda_sweep, qubits_to_target, resource_scan, CombinedResult, MemoryConfig, Prepared,
    ResourcePoint, ThresholdScan,
};
use crate::circuit::{build_memory_circuit, Ordering, Style};
use crate::config::RunConfig;
use crate::decoder::{Decoder, Method, PushRule};
use crate::dem::sample::{sample, ShotBatch};
use crate::dem::{build_dem, decompose_dem, DetectorErrorModel};
use crate::error::{Error, Result};
use crate::layout::{build_layout, CodeKind, PauliType};
use crate::noise::{enumerate_faults, NoiseKind};
use crate::verify::{check_layout, memory_fault_distance, verify_witness, Budget};

#[derive(Debug, Parser)]
#[command(name = "ftsurf", version, about = "Surface-code memory experiments with CZ and CZZ stabilizer circuits")]
pub struct Cli {
    /// Worker threads; results do not depend on it.
    #[arg(long, env = "FTSURF_THREADS", global = true)]
    pub threads: Option<usize>,
    /// Re-run a configuration written next to an earlier output.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Clone, Debug, Subcommand, Serialize, Deserialize)]
#[serde(tag = "subcommand", content = "args", rename_all = "kebab-case")]
pub enum Command {
    /// Qubit coordinates, stabilizers and logicals as JSON.
    Layout(LayoutArgs),
    /// Memory-experiment circuit in text form.
    Circuit(CircuitCmd),
    /// Distinguishability of fault paths, optionally the fault distance.
    VerifyFt(VerifyArgs),
    /// Detector error model text, optionally with its decomposition.
    Dem(DemCmd),
    /// Sample detector and observable flips from a model file.
    Sample(SampleArgs),
    /// Decode sampled shots.
    Decode(DecodeCmd),
    /// Memory experiment; one CSV row per basis.
    Memory(MemoryCmd),
    /// Threshold scan and finite-size-scaling fit.
    Threshold(ScanCmd),
    /// Logical error rate against qubit count and qubits needed for a target.
    Resources(ResourcesCmd),
    /// CZZ strength sweep against a CZ baseline.
    SweepLambda(SweepCmd),
    /// CSV bundles for plotting.
    PlotData(PlotCmd),
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct LayoutArgs {
    #[arg(long)]
    pub kind: CodeKind,
    #[arg(long)]
    pub d: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct CodeArgs {
    #[arg(long)]
    pub kind: CodeKind,
    #[arg(long)]
    pub d: usize,
    #[arg(long, default_value = "czz")]
    pub style: Style,
    /// Defaults to `default` for CZ and `24` for CZZ.
    #[arg(long)]
    pub ordering: Option<String>,
    /// Build schedules that are known not to be fault-tolerant.
    #[arg(long)]
    pub allow_non_ft: bool,
}

impl CodeArgs {
    fn ordering_name(&self) -> String {
        default_ordering(self.style, self.ordering.as_deref())
    }
}

fn default_ordering(style: Style, given: Option<&str>) -> String {
    match (given, style) {
        (Some(o), _) => o.to_string(),
        (None, Style::Cz) => "default".into(),
        (None, Style::Czz) => "24".into(),
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct NoiseArgs {
    #[arg(long, default_value = "NI")]
    pub noise: NoiseKind,
    #[arg(long, default_value_t = 0.001)]
    pub p: f64,
    #[arg(long, default_value_t = 1.0)]
    pub lambda_czz: f64,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct DecoderArgs {
    #[arg(long, default_value = "pm")]
    pub method: Method,
    /// Defaults to the code distance.
    #[arg(long)]
    pub bp_iters: Option<usize>,
    #[arg(long, default_value = "xor")]
    pub push: PushRule,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct CircuitCmd {
    #[command(flatten)]
    pub code: CodeArgs,
    #[arg(long, default_value = "Z")]
    pub basis: PauliType,
    /// Defaults to `d`.
    #[arg(long)]
    pub rounds: Option<usize>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Largest fault-path order to check (1 or 2).
    #[arg(long, default_value_t = 1)]
    pub t: usize,
    /// Also search the memory-circuit fault distance up to this weight.
    #[arg(long)]
    pub w_max: Option<usize>,
    /// Stabilizer rounds of the checked circuit.
    #[arg(long, default_value_t = 1)]
    pub rounds: usize,
    #[arg(long, default_value_t = 2048)]
    pub budget_mb: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct DemCmd {
    #[command(flatten)]
    pub circuit: CircuitCmd,
    /// Write the graphlike decomposition instead of the plain model.
    #[arg(long)]
    pub decompose: bool,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SampleArgs {
    #[arg(long)]
    pub dem: PathBuf,
    #[arg(long)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Prefix of `.dets.b8`, `.obs.b8` and `.json`.
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct DecodeCmd {
    #[arg(long)]
    pub dem: PathBuf,
    /// Prefix written by `sample`.
    #[arg(long)]
    pub shots: PathBuf,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct MemoryCmd {
    #[command(flatten)]
    pub code: CodeArgs,
    /// Both bases when absent.
    #[arg(long)]
    pub basis: Option<PauliType>,
    #[arg(long)]
    pub rounds: Option<usize>,
    #[command(flatten)]
    pub noise: NoiseArgs,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    #[arg(long, default_value_t = 10_000)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ScanArgs {
    #[arg(long, default_value = "unrotated")]
    pub kind: CodeKind,
    #[arg(long, default_value = "czz")]
    pub style: Style,
    #[arg(long)]
    pub ordering: Option<String>,
    #[arg(long, default_value = "NI")]
    pub noise: NoiseKind,
    #[arg(long, default_value_t = 1.0)]
    pub lambda_czz: f64,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub ds: Vec<usize>,
    /// Shots per point per basis.
    #[arg(long, default_value_t = 10_000)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl ScanArgs {
    fn base(&self, ps: &[f64]) -> MemoryConfig {
        let mut c = MemoryConfig::new(
            self.kind,
            self.ds.first().copied().unwrap_or(3),
            self.style,
            &default_ordering(self.style, self.ordering.as_deref()),
            self.noise,
            ps.first().copied().unwrap_or(0.0),
        );
        c.lambda_czz = self.lambda_czz;
        c.method = self.decoder.method;
        c.bp_iterations = self.decoder.bp_iters;
        c.push = self.decoder.push;
        c.shots = self.shots;
        c.seed = self.seed;
        c
    }
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ScanCmd {
    #[command(flatten)]
    pub scan: ScanArgs,
    #[arg(long, value_delimiter = ',', default_value = "0.005,0.0065,0.008,0.0095,0.011,0.0125,0.014")]
    pub ps: Vec<f64>,
    /// Also write every memory run as CSV.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct ResourcesCmd {
    #[command(flatten)]
    pub scan: ScanArgs,
    #[arg(long, value_delimiter = ',', default_value = "0.002,0.003,0.004")]
    pub ps: Vec<f64>,
    #[arg(long, default_value_t = 1e-6)]
    pub target: f64,
    /// Physical rate at which to invert the curve; defaults to the median of `ps`.
    #[arg(long)]
    pub at: Option<f64>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct SweepCmd {
    #[arg(long, default_value = "unrotated")]
    pub kind: CodeKind,
    #[arg(long, default_value_t = 3)]
    pub d: usize,
    #[arg(long, default_value = "24")]
    pub ordering: String,
    #[arg(long, default_value = "default")]
    pub cz_ordering: String,
    #[arg(long, default_value = "SI")]
    pub noise: NoiseKind,
    #[arg(long, default_value_t = 0.003)]
    pub p: f64,
    #[arg(long, value_delimiter = ',', default_value = "1,1.25,1.5,1.75,2")]
    pub lambdas: Vec<f64>,
    #[command(flatten)]
    pub decoder: DecoderArgs,
    #[arg(long, default_value_t = 10_000)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    /// Logical error rate against physical rate for both code kinds and styles.
    Memory,
    /// Qubits needed per target logical error rate.
    Resources,
    /// Threshold curves and their collapse.
    Threshold,
    All,
}

#[derive(Clone, Debug, Args, Serialize, Deserialize)]
pub struct PlotCmd {
    #[arg(long, value_enum, default_value = "all")]
    pub figure: Figure,
    #[arg(long, value_delimiter = ',', default_value = "3,5,7")]
    pub ds: Vec<usize>,
    #[arg(long, default_value_t = 10_000)]
    pub shots: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out_dir: PathBuf,
}

type Config = RunConfig<Command>;

/// Parses `argv` (program name first), runs it and returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let command = match (cli.command, &cli.config) {
        (Some(c), None) => c,
        (None, Some(path)) => match fs::read_to_string(path)
            .map_err(Error::from)
            .and_then(|t| read_config(&t))
        {
            Ok(c) => c.command,
            Err(e) => return domain_error(&e),
        },
        _ => {
            eprintln!("error: give exactly one of a subcommand or --config\n\nFor more information, try '--help'.");
            return 2;
        }
    };
    let config = RunConfig::new(command);
    let result = match cli.threads {
        Some(0) => {
            eprintln!("error: --threads must be at least 1");
            return 2;
        }
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| execute(&config)),
            Err(e) => Err(Error::Analysis(format!("cannot start {n} threads: {e}"))),
        },
        None => execute(&config),
    };
    match result {
        Ok(()) => 0,
        Err(e) => domain_error(&e),
    }
}

/// Accepts a bare configuration or a sidecar holding one under `config`.
fn read_config(text: &str) -> Result<Config> {
    let mut v: serde_json::Value = serde_json::from_str(text)?;
    if let Some(inner) = v.get_mut("config") {
        v = inner.take();
    }
    Ok(serde_json::from_value(v)?)
}

fn domain_error(e: &Error) -> i32 {
    let report = json!({"error": {"module": e.module(), "message": e.to_string()}});
    eprintln!("{report}");
    1
}

/// Writes `payload` to `path` with a `<path>.config.json` sidecar, or to stdout.
fn emit(path: Option<&Path>, payload: &str, config: &Config) -> Result<()> {
    match path {
        Some(p) => {
            fs::write(p, payload)?;
            write_sidecar(p, config)
        }
        None => {
            print!("{payload}");
            Ok(())
        }
    }
}

fn sidecar_path(p: &Path) -> PathBuf {
    let mut s = p.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}

fn write_sidecar(p: &Path, config: &Config) -> Result<()> {
    let doc = json!({"config_hash": config.hash()?, "config": config});
    fs::write(sidecar_path(p), serde_json::to_string_pretty(&doc)? + "\n")?;
    Ok(())
}

/// JSON result wrapped with its configuration.
fn emit_json(path: Option<&Path>, result: serde_json::Value, config: &Config) -> Result<()> {
    let doc = json!({"config_hash": config.hash()?, "config": config, "result": result});
    emit(path, &(serde_json::to_string_pretty(&doc)? + "\n"), config)
}

fn execute(config: &Config) -> Result<()> {
    match &config.command {
        Command::Layout(a) => cmd_layout(a, config),
        Command::Circuit(a) => {
            let circuit = build_circuit(a)?;
            emit(a.output.as_deref(), &circuit.to_text(), config)
        }
        Command::VerifyFt(a) => cmd_verify(a, config),
        Command::Dem(a) => cmd_dem(a, config),
        Command::Sample(a) => cmd_sample(a, config),
        Command::Decode(a) => cmd_decode(a, config),
        Command::Memory(a) => cmd_memory(a, config),
        Command::Threshold(a) => cmd_threshold(a, config),
        Command::Resources(a) => cmd_resources(a, config),
        Command::SweepLambda(a) => cmd_sweep(a, config),
        Command::PlotData(a) => cmd_plot(a, config),
    }
}

fn cmd_layout(a: &LayoutArgs, config: &Config) -> Result<()> {
    let l = build_layout(a.kind, a.d)?;
    let stabilizers: Vec<_> = l
        .stabilizers
        .iter()
        .map(|s| {
            json!({
                "type": s.pauli_type,
                "ancilla": s.ancilla,
                "neighbors": s.neighbors.iter().map(|(d, q)| json!({"direction": d, "qubit": q})).collect::<Vec<_>>(),
            })
        })
        .collect();
    let result = json!({
        "kind": l.kind,
        "d": l.d,
        "n_qubits": l.n_qubits(),
        "coords": l.coords,
        "data_qubits": l.data_qubits,
        "stabilizers": stabilizers,
        "logical_x": l.logical_x.to_string(),
        "logical_z": l.logical_z.to_string(),
    });
    emit_json(a.output.as_deref(), result, config)
}

fn build_circuit(a: &CircuitCmd) -> Result<crate::circuit::Circuit> {
    let layout = build_layout(a.code.kind, a.code.d)?;
    let ordering = Ordering::parse(a.code.style, &a.code.ordering_name())?;
    build_memory_circuit(
        &layout,
        a.basis,
        a.rounds.unwrap_or(a.code.d),
        &ordering,
        a.code.allow_non_ft,
    )
}

fn cmd_verify(a: &VerifyArgs, config: &Config) -> Result<()> {
    let layout = build_layout(a.code.kind, a.code.d)?;
    let ordering = Ordering::parse(a.code.style, &a.code.ordering_name())?;
    let budget = Budget {
        max_bytes: a.budget_mb << 20,
    };
    // known non-FT schedules are exactly what this command is for
    let (circuit, report) = check_layout(&layout, &ordering, a.rounds, a.t, budget)?;
    let replays = match &report.witness {
        Some(w) => Some(verify_witness(&circuit, &layout, w)?),
        None => None,
    };
    let mut result = json!({
        "kind": a.code.kind,
        "d": a.code.d,
        "style": a.code.style,
        "ordering": ordering.name(),
        "t": a.t,
        "largest": report.largest_distinguishable_order,
        "witness_replays": replays,
        "report": report,
    });
    if let Some(w) = a.w_max {
        let fd = memory_fault_distance(&layout, &ordering, a.code.d, w, budget)?;
        result["fault_distance"] = serde_json::to_value(&fd)?;
    }
    emit_json(a.output.as_deref(), result, config)
}

fn memory_config(a: &CircuitCmd) -> MemoryConfig {
    let mut c = MemoryConfig::new(
        a.code.kind,
        a.code.d,
        a.code.style,
        &a.code.ordering_name(),
        a.noise.noise,
        a.noise.p,
    );
    c.basis = a.basis;
    c.rounds = a.rounds;
    c.lambda_czz = a.noise.lambda_czz;
    c.allow_non_ft = a.code.allow_non_ft;
    c
}

fn cmd_dem(a: &DemCmd, config: &Config) -> Result<()> {
    let circuit = build_circuit(&a.circuit)?;
    let noise = memory_config(&a.circuit).noise_model();
    let dem = build_dem(&circuit, &enumerate_faults(&circuit, &noise)?)?;
    let text = if a.decompose {
        let ddem = decompose_dem(&dem);
        ddem.check_residue(&dem)?;
        ddem.to_text(&dem)
    } else {
        dem.to_text()
    };
    emit(a.circuit.output.as_deref(), &text, config)
}

fn batch_paths(prefix: &Path) -> (PathBuf, PathBuf, PathBuf) {
    let with = |ext: &str| {
        let mut s = prefix.as_os_str().to_owned();
        s.push(ext);
        PathBuf::from(s)
    };
    (with(".dets.b8"), with(".obs.b8"), with(".json"))
}

fn read_dem(path: &Path) -> Result<DetectorErrorModel> {
    DetectorErrorModel::from_text(&fs::read_to_string(path)?)
}

fn cmd_sample(a: &SampleArgs, config: &Config) -> Result<()> {
    let dem = read_dem(&a.dem)?;
    let batch = sample(&dem, a.shots, a.seed);
    let (dets, obs) = batch.to_b8();
    let (dp, op, jp) = batch_paths(&a.output);
    fs::write(dp, dets)?;
    fs::write(op, obs)?;
    let meta = json!({
        "shots": batch.shots,
        "n_detectors": batch.n_detectors,
        "n_observables": batch.n_observables,
        "seed": a.seed,
        "config_hash": config.hash()?,
        "config": config,
    });
    fs::write(jp, serde_json::to_string_pretty(&meta)? + "\n")?;
    Ok(())
}

fn cmd_decode(a: &DecodeCmd, config: &Config) -> Result<()> {
    let dem = read_dem(&a.dem)?;
    let (dp, op, _) = batch_paths(&a.shots);
    let batch = ShotBatch::from_b8(&fs::read(dp)?, &fs::read(op)?, dem.n_detectors, dem.n_observables)?;
    let ddem = decompose_dem(&dem);
    ddem.check_residue(&dem)?;
    // distance is unknown here; fall back to a fixed round count
    let mut bp = crate::decoder::BpConfig::new(a.decoder.bp_iters.unwrap_or(5));
    bp.push = a.decoder.push;
    let decoder = Decoder::new(a.decoder.method, &dem, &ddem, bp)?;
    let predictions: Vec<u64> = (0..batch.shots)
        .into_par_iter()
        .map(|s| {
            let flagged = batch.flagged(s);
            if flagged.is_empty() {
                Ok(0)
            } else {
                decoder.decode(&flagged).map(|p| p.observables)
            }
        })
        .collect::<Result<_>>()?;
    let mut out = String::from("shot,predicted,observed\n");
    let mut failures = 0;
    for (s, &p) in predictions.iter().enumerate() {
        let o = batch.observable_mask(s);
        failures += usize::from(p != o);
        writeln!(out, "{s},{p},{o}").unwrap();
    }
    let rate = crate::analysis::stats::rate(failures, batch.shots);
    let se = crate::analysis::stats::standard_error(failures, batch.shots);
    let summary = format!(
        "failures={failures} shots={} rate={rate:.6e} stderr={se:.3e}\n",
        batch.shots
    );
    match &a.output {
        Some(p) => {
            emit(Some(p), &out, config)?;
            print!("{summary}");
        }
        None => print!("{out}{summary}"),
    }
    Ok(())
}

fn cmd_memory(a: &MemoryCmd, config: &Config) -> Result<()> {
    let bases = match a.basis {
        Some(b) => vec![b],
        None => vec![PauliType::X, PauliType::Z],
    };
    let mut out = format!("{CSV_HEADER}\n");
    for basis in bases {
        let mut c = MemoryConfig::new(
            a.code.kind,
            a.code.d,
            a.code.style,
            &a.code.ordering_name(),
            a.noise.noise,
            a.noise.p,
        );
        c.basis = basis;
        c.rounds = a.rounds;
        c.lambda_czz = a.noise.lambda_czz;
        c.method = a.decoder.method;
        c.bp_iterations = a.decoder.bp_iters;
        c.push = a.decoder.push;
        c.shots = a.shots;
        c.seed = a.seed;
        c.allow_non_ft = a.code.allow_non_ft;
        if c.shots == 0 {
            return Err(Error::Analysis("a memory run needs at least one shot".into()));
        }
        let r = Prepared::new(&c)?.run()?;
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    emit(a.output.as_deref(), &out, config)
}

fn runs_csv(runs: &[CombinedResult]) -> String {
    let mut out = format!("{CSV_HEADER}\n");
    for r in runs {
        for m in [&r.x, &r.z] {
            out.push_str(&m.csv_row());
            out.push('\n');
        }
    }
    out
}

fn cmd_threshold(a: &ScanCmd, config: &Config) -> Result<()> {
    let scan = ThresholdScan::run(&a.scan.base(&a.ps), &a.scan.ds, &a.ps)?;
    if let Some(p) = &a.csv {
        fs::write(p, runs_csv(&scan.runs))?;
        write_sidecar(p, config)?;
    }
    let fit = scan.fit(a.scan.seed)?;
    let result = json!({
        "kind": a.scan.kind,
        "style": a.scan.style,
        "noise": a.scan.noise,
        "method": a.scan.decoder.method,
        "fit": fit,
        "curves": scan.curves,
    });
    emit_json(a.output.as_deref(), result, config)
}

fn median(ps: &[f64]) -> f64 {
    let mut v = ps.to_vec();
    v.sort_by(f64::total_cmp);
    v[v.len() / 2]
}

fn cmd_resources(a: &ResourcesCmd, config: &Config) -> Result<()> {
    if a.ps.is_empty() {
        return Err(Error::Analysis("no physical rates given".into()));
    }
    let points = resource_scan(&a.scan.base(&a.ps), &a.scan.ds, &a.ps)?;
    let fit = fit_resource_curve(a.scan.kind, &points)?;
    let at = a.at.unwrap_or_else(|| median(&a.ps));
    let (d, n) = qubits_to_target(&fit, at, a.target)?;
    let result = json!({
        "kind": a.scan.kind,
        "style": a.scan.style,
        "fit": fit,
        "at": at,
        "target": a.target,
        "d": d,
        "n": n,
        "points": points,
    });
    emit_json(a.output.as_deref(), result, config)
}

fn cmd_sweep(a: &SweepCmd, config: &Config) -> Result<()> {
    let mut c = MemoryConfig::new(a.kind, a.d, Style::Czz, &a.ordering, a.noise, a.p);
    c.method = a.decoder.method;
    c.bp_iterations = a.decoder.bp_iters;
    c.push = a.decoder.push;
    c.shots = a.shots;
    c.seed = a.seed;
    let sweep = lambda_sweep(&c, &a.lambdas, &a.cz_ordering)?;
    emit_json(a.output.as_deref(), serde_json::to_value(&sweep)?, config)
}

fn write_bundle(dir: &Path, name: &str, body: &str) -> Result<()> {
    fs::write(dir.join(name), body)?;
    Ok(())
}

fn cmd_plot(a: &PlotCmd, config: &Config) -> Result<()> {
    fs::create_dir_all(&a.out_dir)?;
    let doc = json!({"config_hash": config.hash()?, "config": config});
    write_bundle(&a.out_dir, "config.json", &(serde_json::to_string_pretty(&doc)? + "\n"))?;
    let all = a.figure == Figure::All;
    let scan = |kind, style, noise| ScanArgs {
        kind,
        style,
        ordering: None,
        noise,
        lambda_czz: 1.0,
        decoder: DecoderArgs {
            method: Method::Pm,
            bp_iters: None,
            push: PushRule::Xor,
        },
        ds: a.ds.clone(),
        shots: a.shots,
        seed: a.seed,
    };
    if all || a.figure == Figure::Memory {
        // columns: kind style d p pL stderr
        let ps = [0.001, 0.002, 0.003, 0.004, 0.006, 0.008, 0.01];
        let mut combined = String::from("kind,style,d,p,pL,stderr\n");
        let mut runs = Vec::new();
        for kind in [CodeKind::Rotated, CodeKind::Unrotated] {
            for style in [Style::Cz, Style::Czz] {
                let s = scan(kind, style, NoiseKind::NI);
                let t = ThresholdScan::run(&s.base(&ps), &s.ds, &ps)?;
                for c in &t.curves {
                    for pt in &c.points {
                        writeln!(combined, "{kind},{style},{},{},{},{}", c.d, pt.p, pt.p_l, pt.stderr).unwrap();
                    }
                }
                runs.extend(t.runs);
            }
        }
        write_bundle(&a.out_dir, "memory.csv", &combined)?;
        write_bundle(&a.out_dir, "memory_runs.csv", &runs_csv(&runs))?;
    }
    if all || a.figure == Figure::Resources {
        let ps = [0.001, 0.002, 0.003, 0.004];
        let mut pts = String::from("kind,style,p,d,n,pL,stderr\n");
        let mut fits = String::from("kind,style,c0,c1,c2,p_min,p_max,error\n");
        let mut targets = String::from("kind,style,p,target,d,n\n");
        for (kind, style) in [(CodeKind::Rotated, Style::Cz), (CodeKind::Unrotated, Style::Czz)] {
            let s = scan(kind, style, NoiseKind::NI);
            let points: Vec<ResourcePoint> = resource_scan(&s.base(&ps), &s.ds, &ps)?;
            for pt in &points {
                writeln!(pts, "{kind},{style},{},{},{},{},{}", pt.p, pt.d, pt.n, pt.p_l, pt.stderr).unwrap();
            }
            let fit = match fit_resource_curve(kind, &points) {
                Ok(f) => f,
                Err(e) => {
                    writeln!(fits, "{kind},{style},,,,,,\"{e}\"").unwrap();
                    continue;
                }
            };
            writeln!(fits, "{kind},{style},{},{},{},{},{},", fit.c0, fit.c1, fit.c2, fit.p_min, fit.p_max).unwrap();
            for &p in &ps {
                for e in 3..=12 {
                    let target = 10f64.powi(-e);
                    if let Ok((d, n)) = qubits_to_target(&fit, p, target) {
                        writeln!(targets, "{kind},{style},{p},{target:e},{d},{n}").unwrap();
                    }
                }
            }
        }
        write_bundle(&a.out_dir, "resources_points.csv", &pts)?;
        write_bundle(&a.out_dir, "resources_fits.csv", &fits)?;
        write_bundle(&a.out_dir, "resources_targets.csv", &targets)?;
    }
    if all || a.figure == Figure::Threshold {
        let ps = [0.005, 0.0065, 0.008, 0.0095, 0.011, 0.0125, 0.014];
        let mut pts = String::from("style,d,p,pL,stderr,x\n");
        let mut fits = serde_json::Map::new();
        for style in [Style::Cz, Style::Czz] {
            let s = scan(CodeKind::Unrotated, style, NoiseKind::NI);
            let t = ThresholdScan::run(&s.base(&ps), &s.ds, &ps)?;
            let fit = t.fit(a.seed);
            for c in &t.curves {
                for pt in &c.points {
                    let x = fit.as_ref().map_or(f64::NAN, |f| f.collapse_x(pt.p, c.d));
                    writeln!(pts, "{style},{},{},{},{},{x}", c.d, pt.p, pt.p_l, pt.stderr).unwrap();
                }
            }
            let entry = match fit {
                Ok(f) => serde_json::to_value(&f)?,
                Err(e) => json!({"error": e.to_string()}),
            };
            fits.insert(style.to_string(), entry);
        }
        write_bundle(&a.out_dir, "threshold_points.csv", &pts)?;
        write_bundle(
            &a.out_dir,
            "threshold_fits.json",
            &(serde_json::to_string_pretty(&fits)? + "\n"),
        )?;
    }
    Ok(())
}

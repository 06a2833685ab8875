//! `qsynth` subcommands. Exit status is 0 on success, 2 for bad input and 1
//! for internal failures.

use std::fs;
use std::hash::BuildHasher;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use qsynth_core::pmf::{gen_parametric_pmf, normalize_amplitudes};
use qsynth_core::sim::{noisy_sample, sample, statevector};
use qsynth_core::stats::{build_report, chi2_sf, select_shots, ShotSelectionConfig, StatsError};
use qsynth_core::synth::{circuit_metrics, compile, CompileOptions};
use qsynth_core::{
    AmplitudeVector, DistributionKind, Gateset, Histogram, NoiseModel, NormalizationMode, PmfError,
    PmfTable, QuantumCircuit, SimError, SynthError,
};
use thiserror::Error;

use crate::{
    emit_qasm, parse_histogram, parse_noise_model, parse_pmf_table, parse_qasm, serialize_histogram,
    serialize_pmf_table, serialize_report, FormatError, PmfFormat, QasmError,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Format { path: PathBuf, source: FormatError },
    #[error("{path}: {source}")]
    Qasm { path: PathBuf, source: QasmError },
    #[error(transparent)]
    Pmf(#[from] PmfError),
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Stats(#[from] StatsError),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Write { .. } => 1,
            CliError::Synth(SynthError::NotRepresentable(_) | SynthError::LoweringRequired) => 1,
            CliError::Stats(StatsError::ShotSelectionDiverged { .. } | StatsError::Sampling(_)) => 1,
            _ => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "qsynth", version, about = "Compile a PMF into a state-preparation circuit, run it, and check the samples")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a built-in parametric PMF table.
    GenPmf(GenPmfArgs),
    /// Synthesize an OpenQASM 2.0 circuit and print `gates=<n> depth=<n>`.
    Compile(CompileArgs),
    /// Sample a circuit and write a `state,count` histogram.
    Run(RunArgs),
    /// Compare a histogram against a PMF and print `g_paper=<v> p=<v>`.
    Validate(ValidateArgs),
    /// Pick a shot count whose sampling error is below threshold.
    Shots(ShotsArgs),
}

#[derive(Debug, Args)]
pub struct GenPmfArgs {
    /// uniform, binomial, triangle, bimodal-demo or arbitrary-demo.
    #[arg(value_parser = parse_kind)]
    pub kind: DistributionKind,
    #[arg(long, default_value_t = 32)]
    pub bins: usize,
    /// Output path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Where the PMF comes from.
#[derive(Debug, Args)]
pub struct PmfSource {
    /// PMF table file (`.csv` with a `bin,height` header, otherwise one value per line).
    #[arg(long, conflicts_with = "dist")]
    pub pmf: Option<PathBuf>,
    /// Built-in distribution, sized by `--qubits`.
    #[arg(long, value_parser = parse_kind)]
    pub dist: Option<DistributionKind>,
    #[arg(long)]
    pub qubits: Option<u32>,
    #[arg(long, value_enum, default_value_t = Normalization::Probabilities)]
    pub normalization: Normalization,
    /// Zero-pad the table up to the next power of two.
    #[arg(long)]
    pub pad_to_pow2: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum Normalization {
    Amplitudes,
    Probabilities,
}

impl From<Normalization> for NormalizationMode {
    fn from(n: Normalization) -> Self {
        match n {
            Normalization::Amplitudes => NormalizationMode::HeightsAsAmplitudes,
            Normalization::Probabilities => NormalizationMode::HeightsAsProbabilities,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum GatesetArg {
    HRyCx,
    U3Cx,
}

impl From<GatesetArg> for Gateset {
    fn from(g: GatesetArg) -> Self {
        match g {
            GatesetArg::HRyCx => Gateset::HRyCx,
            GatesetArg::U3Cx => Gateset::U3Cx,
        }
    }
}

#[derive(Debug, Args)]
pub struct CompileArgs {
    #[command(flatten)]
    pub source: PmfSource,
    #[arg(long, value_enum, default_value_t = GatesetArg::HRyCx)]
    pub gateset: GatesetArg,
    /// QASM output path; only metrics are printed when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Leave out the final `measure` statements.
    #[arg(long)]
    pub no_measure: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotsArg {
    Count(u64),
    Auto,
}

impl FromStr for ShotsArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "auto" {
            return Ok(ShotsArg::Auto);
        }
        match s.parse::<u64>() {
            Ok(0) => Err("shot count must be positive".into()),
            Ok(n) => Ok(ShotsArg::Count(n)),
            Err(_) => Err(format!("`{s}` is neither a shot count nor `auto`")),
        }
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Circuit to run; otherwise the PMF source is compiled first.
    #[arg(long, conflicts_with_all = ["pmf", "dist"])]
    pub qasm: Option<PathBuf>,
    #[command(flatten)]
    pub source: PmfSource,
    #[arg(long, default_value = "auto")]
    pub shots: ShotsArg,
    /// Master seed; drawn from system entropy and logged when omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Noise model file with `p1`, `p2` and `readout_flip` entries.
    #[arg(long)]
    pub noise: Option<PathBuf>,
    /// Histogram output path; standard output when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    /// Histogram CSV produced by `run`.
    #[arg(long)]
    pub histogram: PathBuf,
    #[command(flatten)]
    pub source: PmfSource,
    /// Full divergence report output path.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ShotsArgs {
    #[command(flatten)]
    pub source: PmfSource,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, default_value_t = ShotSelectionConfig::default().threshold)]
    pub threshold: f64,
}

fn parse_kind(s: &str) -> Result<DistributionKind, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = DistributionKind::ALL.iter().map(|k| k.name()).collect();
        format!("unknown distribution `{s}` (expected one of {})", names.join(", "))
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Read { path: path.into(), source })
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Write { path: path.into(), source }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Write { path: "<stdout>".into(), source }),
    }
}

fn resolve_seed(seed: Option<u64>) -> u64 {
    seed.unwrap_or_else(|| {
        let nanos = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
        let seed = std::collections::hash_map::RandomState::new().hash_one(nanos);
        info!("seed={seed}");
        seed
    })
}

fn round_stat(v: f64) -> f64 {
    if v.is_finite() { (v * 1e10).round() / 1e10 + 0.0 } else { v }
}

/// Round to 10 decimals and print the shortest form, so exact values stay
/// short (`0`, `1`).
fn format_stat(v: f64) -> String {
    let rounded = round_stat(v);
    if rounded.is_infinite() { "inf".into() } else { format!("{rounded}") }
}

/// `g_paper=<v> p=<v>` where `p` is the tail of the printed `g_paper`, so
/// roundoff below the printed precision does not move `p`.
fn g_line(g_paper: f64) -> String {
    let g = round_stat(g_paper);
    format!("g_paper={} p={}", format_stat(g), format_stat(chi2_sf(g, 1)))
}

impl PmfSource {
    fn has_table(&self) -> bool {
        self.pmf.is_some() || self.dist.is_some()
    }

    fn table(&self) -> Result<PmfTable, CliError> {
        let table = match (&self.pmf, self.dist) {
            (Some(path), _) => parse_pmf_table(&read(path)?, PmfFormat::from_path(path))
                .map_err(|source| CliError::Format { path: path.clone(), source })?,
            (None, Some(kind)) => {
                let qubits = self.qubits.ok_or_else(|| CliError::Usage("--dist needs --qubits".into()))?;
                if qubits == 0 || qubits > 30 {
                    return Err(CliError::Usage(format!("--qubits must be in 1..=30, got {qubits}")));
                }
                gen_parametric_pmf(kind, 1usize << qubits)?
            }
            (None, None) => return Err(CliError::Usage("one of --pmf or --dist is required".into())),
        };
        let table = if self.pad_to_pow2 { table.pad_to_pow2() } else { table };
        if let Some(qubits) = self.qubits {
            let bins = table.num_bins();
            if qubits >= usize::BITS || bins != 1usize << qubits {
                return Err(CliError::Usage(format!("{bins} bins do not match --qubits {qubits}")));
            }
        }
        Ok(table)
    }

    fn amplitudes(&self) -> Result<AmplitudeVector, CliError> {
        Ok(normalize_amplitudes(&self.table()?, self.normalization.into())?)
    }
}

fn compile_source(source: &PmfSource, gateset: Gateset) -> Result<(AmplitudeVector, QuantumCircuit), CliError> {
    let amps = source.amplitudes()?;
    let options = CompileOptions { gateset, ..CompileOptions::default() };
    let circuit = compile(&amps, &options)?;
    Ok((amps, circuit))
}

fn gen_pmf(args: GenPmfArgs) -> Result<(), CliError> {
    let table = gen_parametric_pmf(args.kind, args.bins)?;
    write_output(args.out.as_deref(), &serialize_pmf_table(&table))
}

fn compile_cmd(args: CompileArgs) -> Result<(), CliError> {
    let (_, mut circuit) = compile_source(&args.source, args.gateset.into())?;
    circuit.measured = !args.no_measure;
    let metrics = circuit_metrics(&circuit)?;
    if let Some(path) = &args.out {
        let doc = emit_qasm(&circuit, circuit.measured).map_err(|source| CliError::Qasm { path: path.clone(), source })?;
        write_output(Some(path), doc.as_str())?;
    }
    println!("gates={} depth={}", metrics.gate_count, metrics.depth);
    Ok(())
}

fn run_cmd(args: RunArgs) -> Result<(), CliError> {
    let circuit = match &args.qasm {
        Some(path) => parse_qasm(&read(path)?).map_err(|source| CliError::Qasm { path: path.clone(), source })?,
        None if args.source.has_table() => compile_source(&args.source, Gateset::HRyCx)?.1,
        None => return Err(CliError::Usage("one of --qasm, --pmf or --dist is required".into())),
    };
    let noise = match &args.noise {
        Some(path) => {
            parse_noise_model(&read(path)?).map_err(|source| CliError::Format { path: path.clone(), source })?
        }
        None => NoiseModel::ideal(),
    };
    let ideal = statevector(&circuit)?;
    let seed = resolve_seed(args.seed);
    let shots = match args.shots {
        ShotsArg::Count(n) => n,
        ShotsArg::Auto => {
            let theory = ideal.probabilities();
            let selection = select_shots(&theory, |n, s| sample(&ideal, n, s), &ShotSelectionConfig::default(), seed)?;
            info!("shots={} (g_paper={} at {} shots)", selection.shots, selection.g_paper, selection.passing_shots);
            selection.shots
        }
    };
    let histogram = if noise == NoiseModel::ideal() {
        sample(&ideal, shots, seed)?
    } else {
        noisy_sample(&circuit, &noise, shots, seed)?
    };
    write_output(args.out.as_deref(), &serialize_histogram(&histogram))
}

fn validate_cmd(args: ValidateArgs) -> Result<(), CliError> {
    let theory = args.source.amplitudes()?.probabilities();
    let histogram: Histogram = parse_histogram(&read(&args.histogram)?, Some(theory.len()))
        .map_err(|source| CliError::Format { path: args.histogram.clone(), source })?;
    let report = build_report(&histogram, &theory)?;
    if let Some(path) = &args.out {
        write_output(Some(path), &serialize_report(&report))?;
    }
    println!("{}", g_line(report.g_paper));
    Ok(())
}

fn shots_cmd(args: ShotsArgs) -> Result<(), CliError> {
    let amps = args.source.amplitudes()?;
    let circuit = compile(&amps, &CompileOptions::default())?;
    let ideal = statevector(&circuit)?;
    let theory = amps.probabilities();
    let config = ShotSelectionConfig { threshold: args.threshold, ..ShotSelectionConfig::default() };
    let seed = resolve_seed(args.seed);
    let selection = select_shots(&theory, |n, s| sample(&ideal, n, s), &config, seed)?;
    println!(
        "shots={} passing_shots={} {}",
        selection.shots,
        selection.passing_shots,
        g_line(selection.g_paper)
    );
    Ok(())
}

pub fn execute(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::GenPmf(a) => gen_pmf(a),
        Command::Compile(a) => compile_cmd(a),
        Command::Run(a) => run_cmd(a),
        Command::Validate(a) => validate_cmd(a),
        Command::Shots(a) => shots_cmd(a),
    }
}

/// Parse the process arguments, run, and return the exit status.
pub fn main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .format_target(false)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

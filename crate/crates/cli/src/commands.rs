//! Command implementations. Inputs are read and outputs written on the
//! calling thread; the numerical work runs inside the configured rayon pool.

use std::fs;
use std::io::{Read, Write};
use std::time::Instant;

use kadison_core::barrier::{build_certificate, BarrierCertificate, Probe};
use kadison_core::mixedchar::{expected_char_poly_bruteforce, mixed_char_poly, MixedInstance};
use kadison_core::realpoly::{laguerre_expected_roots, RealRootedness, RootFinder};
use kadison_core::weaver::{
    gen_diagonal, gen_from_graph, gen_gaussian, partition, random_partition_experiment, repair, spectral_cross_check,
    validate, Graph, PartSpectrum, ValidationReport, WeaverInstance,
};
use kadison_core::NumericPolicy;
use serde::{Deserialize, Serialize};

use crate::cli::{
    CertifyArgs, ChernoffArgs, Cli, Command, ExperimentCommand, GenCommand, LaguerreArgs, MixedArgs, PartitionArgs,
};
use crate::error::CliError;
use crate::files::{read_json, read_policy, write_json, AnyInput, InstanceFileV1, ReportFileV1};

/// Body of a `partition` report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionBody {
    pub validation: ValidationReport,
    pub repaired: bool,
    /// The partition report; `trace` is present only when requested.
    pub partition: serde_json::Value,
    /// `G` against each part, for instances generated from a graph.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectral: Option<Vec<PartSpectrum>>,
}

/// Body of a `mixed` report. Coefficients are listed by ascending power.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MixedBody {
    pub dim: usize,
    pub vectors: usize,
    pub coefficients: Vec<f64>,
    pub real_rooted: RealRootedness,
    pub largest_root: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleComparison>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleComparison {
    pub coefficients: Vec<f64>,
    pub max_rel_deviation: f64,
}

/// One `experiment laguerre` row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaguerreRow {
    pub n: usize,
    pub delta: f64,
    pub m: usize,
    pub applications: usize,
    /// Derivative scale `δ/n`: the covariance of each vector is `(δ/n) I`.
    pub scale: f64,
    pub smallest_root: f64,
    pub largest_root: f64,
    /// `½(1 − √(2δ))²`.
    pub lower: f64,
    /// `½(1 + √(2δ))²`.
    pub upper: f64,
    pub smallest_within: bool,
    pub largest_within: bool,
    /// Largest root with derivative scale `δ` instead of `δ/n`.
    pub unnormalized_largest_root: f64,
}

const CHERNOFF_HEADER: [&str; 3] = ["trial", "max_norm", "first_part_norm"];
const LAGUERRE_HEADER: [&str; 12] = [
    "n",
    "delta",
    "m",
    "applications",
    "scale",
    "smallest_root",
    "largest_root",
    "lower",
    "upper",
    "smallest_within",
    "largest_within",
    "unnormalized_largest_root",
];

/// Policy and thread pool shared by every command.
pub struct Engine {
    pub policy: NumericPolicy,
    pool: Option<rayon::ThreadPool>,
}

impl Engine {
    pub fn new(policy: NumericPolicy, threads: Option<usize>) -> Result<Self, CliError> {
        let pool = threads
            .map(|n| {
                rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .map_err(|e| CliError::Usage(format!("cannot start {n} threads: {e}")))
            })
            .transpose()?;
        Ok(Self { policy, pool })
    }

    /// Runs `f` on the pool and reports its wall time in seconds.
    pub fn compute<R: Send>(&self, f: impl FnOnce(&NumericPolicy) -> R + Send) -> (R, f64) {
        let start = Instant::now();
        let policy = &self.policy;
        let out = match &self.pool {
            Some(pool) => pool.install(|| f(policy)),
            None => f(policy),
        };
        (out, start.elapsed().as_secs_f64())
    }
}

/// Standard streams; `-` paths refer to them.
pub struct Streams<'a> {
    pub stdin: &'a mut dyn Read,
    pub stdout: &'a mut dyn Write,
}

impl Streams<'_> {
    fn read(&mut self, path: &str) -> Result<Vec<u8>, CliError> {
        let mut buf = Vec::new();
        if path == "-" {
            self.stdin.read_to_end(&mut buf).map_err(CliError::stdio)?;
            Ok(buf)
        } else {
            fs::read(path).map_err(|source| CliError::Io {
                path: path.into(),
                source,
            })
        }
    }

    fn write(&mut self, path: &str, bytes: &[u8]) -> Result<(), CliError> {
        if path == "-" {
            self.stdout.write_all(bytes).map_err(CliError::stdio)?;
            self.stdout.flush().map_err(CliError::stdio)
        } else {
            fs::write(path, bytes).map_err(|source| CliError::Io {
                path: path.into(),
                source,
            })
        }
    }
}

fn json_bytes<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut buf = Vec::new();
    write_json(&mut buf, value)?;
    Ok(buf)
}

/// Parses the policy file, builds the pool and dispatches.
pub fn run(cli: &Cli, streams: &mut Streams<'_>) -> Result<(), CliError> {
    let policy = match &cli.numeric_policy {
        Some(path) => read_policy(&streams.read(&path.to_string_lossy())?[..])?,
        None => NumericPolicy::default(),
    };
    let engine = Engine::new(policy, cli.threads)?;
    match &cli.command {
        Command::Gen(cmd) => cmd_gen(&engine, cmd, streams),
        Command::Partition(args) => cmd_partition(&engine, args, streams),
        Command::Mixed(args) => cmd_mixed(&engine, args, streams),
        Command::Certify(args) => cmd_certify(&engine, args, streams),
        Command::Experiment(ExperimentCommand::Chernoff(args)) => cmd_chernoff(&engine, args, streams),
        Command::Experiment(ExperimentCommand::Laguerre(args)) => cmd_laguerre(&engine, args, streams),
    }
}

pub fn cmd_gen(engine: &Engine, cmd: &GenCommand, streams: &mut Streams<'_>) -> Result<(), CliError> {
    let (file, out) = match cmd {
        GenCommand::Diagonal { n, delta, out } => (InstanceFileV1::from_instance(&gen_diagonal(*n, *delta)?), &out.out),
        GenCommand::Gaussian { n, delta, seed, out } => {
            let (inst, _) = engine.compute(|policy| gen_gaussian(*n, *delta, seed.seed, policy));
            (InstanceFileV1::from_instance(&inst?), &out.out)
        }
        GenCommand::Graph { edges, out } => {
            let text = String::from_utf8(streams.read(edges)?)
                .map_err(|e| CliError::Format(format!("edge list is not UTF-8: {e}")))?;
            let g = Graph::parse_edge_list(&text)?;
            let (generated, _) = engine.compute(|policy| gen_from_graph(&g, policy));
            (
                InstanceFileV1::from_instance(&generated?.instance).with_graph(&g),
                &out.out,
            )
        }
    };
    streams.write(out, &json_bytes(&file)?)
}

pub fn cmd_partition(engine: &Engine, args: &PartitionArgs, streams: &mut Streams<'_>) -> Result<(), CliError> {
    let file: InstanceFileV1 = read_json(&streams.read(&args.input.path)?[..])?;
    let mut inst = file.to_instance()?;
    let graph = file.to_graph()?;
    let validation = validate(&inst, &engine.policy);
    let repaired = args.repair && !validation.isotropic;
    if repaired {
        inst = repair(&inst, &engine.policy)?;
    }
    let (result, wall) = engine.compute(|policy| {
        let report = partition(&inst, args.r, policy)?;
        let spectral = graph
            .as_ref()
            .map(|g| spectral_cross_check(g, &report, policy))
            .transpose()?;
        Ok::<_, kadison_core::Error>((report, spectral))
    });
    let (report, spectral) = result?;
    let mut value = serde_json::to_value(&report)?;
    if !args.trace {
        if let Some(obj) = value.as_object_mut() {
            obj.remove("trace");
        }
    }
    let body = PartitionBody {
        validation,
        repaired,
        partition: value,
        spectral,
    };
    let file = ReportFileV1::new("partition", None, &engine.policy, wall, body);
    streams.write(&args.out.out, &json_bytes(&file)?)?;
    if report.within_bound {
        Ok(())
    } else {
        Err(CliError::Bound(format!(
            "max part norm {} exceeds the bound {}",
            report.max_norm, report.bound_general
        )))
    }
}

pub fn cmd_mixed(engine: &Engine, args: &MixedArgs, streams: &mut Streams<'_>) -> Result<(), CliError> {
    let input = AnyInput::from_reader(&streams.read(&args.input.path)?[..])?;
    let ensemble = input.to_ensemble(&engine.policy)?;
    let (result, wall) = engine.compute(|policy| {
        let mu = mixed_char_poly(&MixedInstance::from_ensemble(&ensemble), policy)?;
        let finder = RootFinder::from_policy(policy);
        let oracle = if args.oracle {
            let brute = expected_char_poly_bruteforce(&ensemble, policy)?;
            Some(OracleComparison {
                max_rel_deviation: mu.max_rel_deviation(&brute),
                coefficients: brute.into_coeffs(),
            })
        } else {
            None
        };
        Ok::<_, kadison_core::Error>(MixedBody {
            dim: ensemble.dim(),
            vectors: ensemble.len(),
            real_rooted: finder.is_real_rooted(&mu),
            largest_root: finder.largest_root(&mu).ok(),
            coefficients: mu.into_coeffs(),
            oracle,
        })
    });
    let file = ReportFileV1::new("mixed", None, &engine.policy, wall, result?);
    streams.write(&args.out.out, &json_bytes(&file)?)
}

pub fn cmd_certify(engine: &Engine, args: &CertifyArgs, streams: &mut Streams<'_>) -> Result<(), CliError> {
    let input = AnyInput::from_reader(&streams.read(&args.input.path)?[..])?;
    let inst = MixedInstance::from_ensemble(&input.to_ensemble(&engine.policy)?);
    let probe = Probe {
        rays: args.rays,
        seed: args.seed.seed,
        ..Probe::default()
    };
    let (cert, wall) = engine.compute(|policy| build_certificate(&inst, args.epsilon, &probe, policy));
    let cert: BarrierCertificate = cert?;
    let valid = cert.valid;
    let (bound, root) = (cert.bound, cert.mixed_root);
    let file = ReportFileV1::new("certify", Some(args.seed.seed), &engine.policy, wall, cert);
    streams.write(&args.out.out, &json_bytes(&file)?)?;
    if valid {
        Ok(())
    } else {
        Err(CliError::Bound(format!(
            "certificate failed (bound {bound}, largest root {root})"
        )))
    }
}

fn csv_bytes<R: Serialize>(header: &[&str], rows: &[R]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header)?;
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| CliError::Usage(format!("CSV buffer: {e}")))
}

/// Writes the CSV and the summary: CSV to `--csv` (stdout when `-`), the
/// summary to `--out`, or to stdout unless the CSV went there.
fn emit_experiment(
    streams: &mut Streams<'_>,
    csv_path: Option<&str>,
    out: Option<&str>,
    csv: Vec<u8>,
    summary: Vec<u8>,
) -> Result<(), CliError> {
    if let Some(path) = csv_path {
        streams.write(path, &csv)?;
    }
    match (out, csv_path) {
        (Some(path), _) => streams.write(path, &summary),
        (None, Some("-")) => Ok(()),
        (None, _) => streams.write("-", &summary),
    }
}

fn chernoff_instance(args: &ChernoffArgs, streams: &mut Streams<'_>) -> Result<WeaverInstance, CliError> {
    if args.diagonal {
        let (n, delta) = args
            .n
            .zip(args.delta)
            .ok_or_else(|| CliError::Usage("--diagonal needs --n and --delta".into()))?;
        return Ok(gen_diagonal(n, delta)?);
    }
    if args.n.is_some() || args.delta.is_some() {
        return Err(CliError::Usage("--n and --delta only apply with --diagonal".into()));
    }
    let path = args.input.as_deref().unwrap_or("-");
    read_json::<InstanceFileV1>(&streams.read(path)?[..])?.to_instance()
}

pub fn cmd_chernoff(engine: &Engine, args: &ChernoffArgs, streams: &mut Streams<'_>) -> Result<(), CliError> {
    let inst = chernoff_instance(args, streams)?;
    let seed = args.seed.seed;
    let (stats, wall) =
        engine.compute(|policy| random_partition_experiment(&inst, args.r, args.trials, seed, args.threshold, policy));
    let stats = stats?;
    let csv = csv_bytes(&CHERNOFF_HEADER, &stats.samples)?;
    let mut body = serde_json::to_value(&stats)?;
    if let Some(obj) = body.as_object_mut() {
        obj.remove("samples");
        obj.insert("trials".into(), args.trials.into());
        obj.insert("dim".into(), inst.dim().into());
        obj.insert("vectors".into(), inst.len().into());
    }
    let summary = json_bytes(&ReportFileV1::new("chernoff", Some(seed), &engine.policy, wall, body))?;
    emit_experiment(streams, args.csv.as_deref(), args.out.as_deref(), csv, summary)
}

/// Rows of the Laguerre root scan.
pub fn laguerre_rows(n: usize, delta: f64, steps: usize, eta: f64) -> Result<Vec<LaguerreRow>, CliError> {
    if n == 0 || steps == 0 || !(delta > 0.0) || !delta.is_finite() {
        return Err(CliError::Usage(format!(
            "need n ≥ 1, steps ≥ 1 and δ > 0 (got n = {n}, steps = {steps}, δ = {delta})"
        )));
    }
    let lower = 0.5 * (1.0 - (2.0 * delta).sqrt()).powi(2);
    let upper = 0.5 * (1.0 + (2.0 * delta).sqrt()).powi(2);
    (1..=steps)
        .map(|k| {
            let n = (n * k).div_ceil(steps);
            let m = (n as f64 / delta).round() as usize;
            let applications = m / 2;
            let scale = delta / n as f64;
            let roots = laguerre_expected_roots(n, applications, scale)?;
            let unnormalized = laguerre_expected_roots(n, applications, delta)?;
            let smallest_root = roots[0];
            let largest_root = roots[roots.len() - 1];
            let inside = |x: f64| lower - eta <= x && x <= upper + eta;
            Ok(LaguerreRow {
                n,
                delta,
                m,
                applications,
                scale,
                smallest_root,
                largest_root,
                lower,
                upper,
                smallest_within: inside(smallest_root),
                largest_within: inside(largest_root),
                unnormalized_largest_root: unnormalized[unnormalized.len() - 1],
            })
        })
        .collect()
}

pub fn cmd_laguerre(engine: &Engine, args: &LaguerreArgs, streams: &mut Streams<'_>) -> Result<(), CliError> {
    let (rows, wall) = engine.compute(|_| laguerre_rows(args.n, args.delta, args.steps, args.eta));
    let rows = rows?;
    let csv = csv_bytes(&LAGUERRE_HEADER, &rows)?;
    let summary = json_bytes(&ReportFileV1::new("laguerre", None, &engine.policy, wall, &rows))?;
    emit_experiment(streams, args.csv.as_deref(), args.out.as_deref(), csv, summary)
}

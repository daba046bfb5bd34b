//! Command-line front end.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use maxineq_core::inequalities::{InequalityId, MarkovCheckId, VerificationRecord, DEFAULT_TOL};
use maxineq_core::markov::{
    check_conditions, make_chain, random_chain, random_disconnected_chain, random_observable, spectral_measure,
    ChainModel, MarkovInstance, Observable, RandomFamily, ReversibleChain,
};
use maxineq_core::seed::mix;
use maxineq_core::simulate::{as_convergence_diagnostic, dyadic_checkpoints, SimConfig};
use maxineq_core::weights::WeightSequence;
use serde_json::json;

use crate::batch::{self, FiltrationBatch, MarkovBatch};
use crate::error::{CliError, CliResult};
use crate::formats::{read_json, write_json, ChainFile, InstanceFile, ObservableFile};
use crate::report::{self, ReportRow};
use crate::sidecar::{Sidecar, TOOL, VERSION};
use crate::weightspec::parse_weight_spec;

const FILE_FORMATS: &str = "\
FILE FORMATS

  Instance JSON (verify --instance):
    {\"probs\": [p_0, ...], \"partitions\": [[[atom, ...], ...], ...], \"dim\": d,
     \"terms\": [[[x_1(atom 0) ...], ...], ...]}
    Atoms are 0-based. Probabilities must be positive and sum to 1 within
    1e-9. partitions[0] is the finest level and each later level coarsens the
    previous one. terms[j] holds one d-vector per atom and must be constant on
    the blocks of partitions[j]. Errors name the offending field, e.g.
    partitions[2][1].

  Chain JSON:
    {\"states\": [name, ...], \"pi\": [optional stationary law], \"Q\": [[row], ...]}
    Rows must sum to 1 within 1e-12 and satisfy detailed balance within
    1e-10. Without pi the stationary law is computed from Q.

  Observable JSON:
    {\"dim\": d, \"values\": [[f(state 0) ...], ...]}

  Weight specs (--weights):
    constant:C  power:ALPHA  explicit:@file.json  alternating:SPEC
    explicit reads a JSON array [a_1, a_2, ...]; alternating flips the sign
    of every even-indexed weight of SPEC.

OUTPUTS

  verify, verify-markov  CSV id,p,seed,atoms,n,dim,lhs,rhs,ratio,constant,pass
  spectrum               CSV lambda,mass
  check-conditions       JSON: the five condition booleans and diagnostics
  simulate               CSV checkpoint,median_osc,q95_osc
                         --trajectories: CSV trial,k,T_k
                         --mc: CSV n,trials,estimate,standard_error
  report                 gnuplot data (# header, blank lines between groups)

  Every output file OUT gets a sidecar OUT.meta.json recording the tool
  version, command line, seeds and tolerance.

EXIT CODES

  0  all checks pass
  1  at least one inequality or equivalence violation
  2  input or validation error
";

#[derive(Debug, Parser)]
#[command(name = "maxineq", version, about = "Exact and simulated checks of maximal inequalities", after_long_help = FILE_FORMATS)]
pub struct Cli {
    /// Master seed for every random item of the run.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0 = one per core). Never changes the output.
    #[arg(long, global = true, default_value_t = 0)]
    pub threads: usize,
    /// Replace the default pass tolerance 1e-12. Expert use only.
    #[arg(long, global = true)]
    pub tol_override: Option<f64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a reversible chain (and optionally an observable) as JSON.
    GenChain(GenChainArgs),
    /// Spectral measure of an observable as CSV.
    Spectrum(SpectrumArgs),
    /// Evaluate the five equivalent variance conditions.
    CheckConditions(CheckConditionsArgs),
    /// Check the filtration inequalities on random or given instances.
    Verify(VerifyArgs),
    /// Check the chain inequalities on random or given chains.
    VerifyMarkov(VerifyMarkovArgs),
    /// Simulate stationary trajectories of a weighted series.
    Simulate(SimulateArgs),
    /// Convert a CSV report to gnuplot data.
    Report(ReportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelKind {
    TwoState,
    BirthDeath,
    LazyRing,
    WeightedGraph,
    Metropolis,
    Random,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FamilyKind {
    WeightedGraph,
    BirthDeath,
    Metropolis,
    Disconnected,
}

#[derive(Debug, Args)]
pub struct GenChainArgs {
    #[arg(long, value_enum)]
    pub model: ModelKind,
    /// two-state: probability of leaving state 0.
    #[arg(long)]
    pub p: Option<f64>,
    /// two-state: probability of leaving state 1.
    #[arg(long)]
    pub q: Option<f64>,
    /// birth-death: Q(i, i+1), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub up: Vec<f64>,
    /// birth-death: Q(i+1, i), comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub down: Vec<f64>,
    /// lazy-ring: number of states.
    #[arg(long)]
    pub m: Option<usize>,
    /// lazy-ring: holding probability.
    #[arg(long)]
    pub laziness: Option<f64>,
    /// weighted-graph: JSON file with a symmetric weight matrix.
    #[arg(long)]
    pub weights_file: Option<PathBuf>,
    /// metropolis: target law, comma separated.
    #[arg(long, value_delimiter = ',')]
    pub target: Vec<f64>,
    /// metropolis: JSON file with a symmetric proposal matrix.
    #[arg(long)]
    pub proposal_file: Option<PathBuf>,
    /// random: number of states.
    #[arg(long, default_value_t = 8)]
    pub states: usize,
    /// random: generator family.
    #[arg(long, value_enum, default_value_t = FamilyKind::WeightedGraph)]
    pub family: FamilyKind,
    /// Also write a random observable here.
    #[arg(long)]
    pub observable_out: Option<PathBuf>,
    /// Dimension of the random observable.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Subtract the stationary mean from the random observable.
    #[arg(long)]
    pub centered: bool,
    /// Output file (stdout when absent).
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    pub chain: PathBuf,
    pub observable: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckConditionsArgs {
    pub chain: PathBuf,
    pub observable: PathBuf,
    /// Largest n on the dyadic probe grid.
    #[arg(long, default_value_t = 1024)]
    pub probe: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Inequality id or `all`.
    #[arg(long, default_value = "all")]
    pub id: String,
    /// Exponents, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "1.5,2,3")]
    pub p: Vec<f64>,
    /// Number of random instances.
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    /// Check this instance instead of random ones.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    #[arg(long, default_value = "power:-0.5", allow_hyphen_values = true)]
    pub weights: String,
    #[arg(long, default_value_t = 16)]
    pub max_atoms: usize,
    #[arg(long, default_value_t = 8)]
    pub max_n: usize,
    #[arg(long, default_value_t = 3)]
    pub max_dim: usize,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyMarkovArgs {
    /// Check id or `all`.
    #[arg(long, default_value = "all")]
    pub id: String,
    #[arg(long, default_value_t = 100)]
    pub instances: usize,
    /// Check this chain instead of random ones (needs --observable and --n).
    #[arg(long, requires_all = ["observable", "n"])]
    pub chain: Option<PathBuf>,
    #[arg(long, requires = "chain")]
    pub observable: Option<PathBuf>,
    #[arg(long, requires = "chain")]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 20)]
    pub max_states: usize,
    #[arg(long, default_value_t = 64)]
    pub max_n: usize,
    /// Observable dimension for the ids that accept vectors.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    /// Weights for the theorem check.
    #[arg(long, default_value = "power:-0.5", allow_hyphen_values = true)]
    pub weights: String,
    /// Add inspection rows with the literal weights j^{1/2}.
    #[arg(long)]
    pub literal_sqrt: bool,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    pub chain: PathBuf,
    pub observable: PathBuf,
    #[arg(long, default_value = "power:-0.5", allow_hyphen_values = true)]
    pub weights: String,
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    /// Trajectory length; oscillation checkpoints run up to horizon / 2.
    #[arg(long, default_value_t = 1024)]
    pub horizon: usize,
    /// Estimate E max_{k<=horizon} T_k^2 instead of oscillations.
    #[arg(long)]
    pub mc: bool,
    /// Also write every path as trial,k,T_k.
    #[arg(long)]
    pub trajectories: Option<PathBuf>,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    pub input: PathBuf,
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

/// Outcome of a successful run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Violation,
}

impl Status {
    pub fn code(self) -> i32 {
        match self {
            Self::Pass => 0,
            Self::Violation => 1,
        }
    }
}

/// Parses `argv` (including the program name), runs it and returns the
/// exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let command_line = argv.iter().map(|a| a.to_string_lossy().into_owned()).collect();
    match execute(&cli, command_line) {
        Ok(status) => status.code(),
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}

struct Context {
    command_line: Vec<String>,
    seed: u64,
    threads: usize,
    tol: f64,
    tol_override: bool,
}

impl Context {
    fn sidecar(&self, subcommand: &str, outputs: Vec<PathBuf>, item_seeds: Vec<u64>, details: serde_json::Value) -> Sidecar {
        Sidecar {
            tool: TOOL,
            version: VERSION,
            command_line: self.command_line.clone(),
            subcommand: subcommand.to_string(),
            master_seed: self.seed,
            item_seeds,
            tol: self.tol,
            tol_override: self.tol_override,
            outputs,
            details,
        }
    }

    /// Writes `bytes` to `path` (with its sidecar) or to stdout.
    fn emit(&self, path: Option<&Path>, bytes: &[u8], sidecar: impl FnOnce(Vec<PathBuf>) -> Sidecar) -> CliResult<()> {
        match path {
            Some(path) => {
                fs::write(path, bytes).map_err(|e| CliError::io(path, e))?;
                sidecar(vec![path.to_path_buf()]).write(&Sidecar::path_for(path))
            }
            None => {
                let mut out = std::io::stdout().lock();
                out.write_all(bytes).and_then(|_| out.flush()).map_err(|e| CliError::io("<stdout>", e))
            }
        }
    }
}

fn execute(cli: &Cli, command_line: Vec<String>) -> CliResult<Status> {
    let tol = match cli.tol_override {
        Some(t) if !(t.is_finite() && t >= 0.0) => {
            return Err(CliError::Usage(format!("--tol-override must be a finite non-negative number, got {t}")));
        }
        Some(t) => {
            eprintln!("WARNING: pass tolerance overridden: {t:e} replaces the default {DEFAULT_TOL:e}. Results are not comparable with default runs.");
            t
        }
        None => DEFAULT_TOL,
    };
    let ctx = Context {
        command_line,
        seed: cli.seed,
        threads: cli.threads,
        tol,
        tol_override: cli.tol_override.is_some(),
    };
    match &cli.command {
        Command::GenChain(a) => gen_chain(&ctx, a),
        Command::Spectrum(a) => spectrum(&ctx, a),
        Command::CheckConditions(a) => conditions(&ctx, a),
        Command::Verify(a) => verify(&ctx, a),
        Command::VerifyMarkov(a) => verify_markov(&ctx, a),
        Command::Simulate(a) => simulate(&ctx, a),
        Command::Report(a) => report_cmd(&ctx, a),
    }
}

fn need<T: Copy>(value: Option<T>, flag: &str, model: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("--model {model} requires --{flag}")))
}

fn required_path<'a>(value: &'a Option<PathBuf>, flag: &str, model: &str) -> CliResult<&'a Path> {
    value
        .as_deref()
        .ok_or_else(|| CliError::Usage(format!("--model {model} requires --{flag}")))
}

fn build_chain(ctx: &Context, a: &GenChainArgs) -> CliResult<ReversibleChain> {
    let model = match a.model {
        ModelKind::TwoState => ChainModel::TwoState {
            p: need(a.p, "p", "two-state")?,
            q: need(a.q, "q", "two-state")?,
        },
        ModelKind::BirthDeath => ChainModel::BirthDeath {
            up: a.up.clone(),
            down: a.down.clone(),
        },
        ModelKind::LazyRing => ChainModel::LazyRing {
            m: need(a.m, "m", "lazy-ring")?,
            laziness: need(a.laziness, "laziness", "lazy-ring")?,
        },
        ModelKind::WeightedGraph => ChainModel::WeightedGraph {
            weights: read_json(required_path(&a.weights_file, "weights-file", "weighted-graph")?)?,
        },
        ModelKind::Metropolis => ChainModel::Metropolis {
            target: a.target.clone(),
            proposal: read_json(required_path(&a.proposal_file, "proposal-file", "metropolis")?)?,
        },
        ModelKind::Random => {
            let family = match a.family {
                FamilyKind::WeightedGraph => RandomFamily::WeightedGraph,
                FamilyKind::BirthDeath => RandomFamily::BirthDeath,
                FamilyKind::Metropolis => RandomFamily::Metropolis,
                FamilyKind::Disconnected => return Ok(random_disconnected_chain(ctx.seed, a.states)?),
            };
            return Ok(random_chain(ctx.seed, a.states, family)?);
        }
    };
    Ok(make_chain(&model)?)
}

fn json_bytes<T: serde::Serialize>(value: &T) -> Vec<u8> {
    let mut text = serde_json::to_string_pretty(value).expect("plain data serializes");
    text.push('\n');
    text.into_bytes()
}

fn gen_chain(ctx: &Context, a: &GenChainArgs) -> CliResult<Status> {
    let chain = build_chain(ctx, a)?;
    if !chain.is_irreducible() {
        eprintln!("note: chain has {} communicating classes; the eigenvalue 1 is repeated", chain.components().len());
    }
    let mut outputs = Vec::new();
    if let Some(path) = &a.observable_out {
        let f = random_observable(mix(ctx.seed, 1), chain.states(), a.dim.max(1));
        let f = if a.centered { chain.center(&f) } else { f };
        write_json(path, &ObservableFile::from_observable(&f))?;
        outputs.push(path.clone());
    }
    let details = json!({"model": format!("{:?}", a.model), "states": chain.states(), "centered": a.centered});
    ctx.emit(a.output.as_deref(), &json_bytes(&ChainFile::from_chain(&chain)), |mut o| {
        o.extend(outputs);
        ctx.sidecar("gen-chain", o, Vec::new(), details)
    })?;
    Ok(Status::Pass)
}

fn load_pair(chain: &Path, observable: &Path) -> CliResult<(ReversibleChain, Observable)> {
    let c = ChainFile::load(chain)?;
    let f = ObservableFile::load(observable, &c)?;
    Ok((c, f))
}

fn spectrum(ctx: &Context, a: &SpectrumArgs) -> CliResult<Status> {
    let (chain, f) = load_pair(&a.chain, &a.observable)?;
    let sm = spectral_measure(&chain, &f)?;
    let mut bytes = Vec::new();
    report::write_spectrum_csv(&mut bytes, &sm)?;
    let details = json!({"chain": a.chain, "observable": a.observable, "atoms": sm.atoms().len(), "total_mass": sm.total_mass()});
    ctx.emit(a.output.as_deref(), &bytes, |o| ctx.sidecar("spectrum", o, Vec::new(), details))?;
    Ok(Status::Pass)
}

fn conditions(ctx: &Context, a: &CheckConditionsArgs) -> CliResult<Status> {
    let (chain, f) = load_pair(&a.chain, &a.observable)?;
    let r = check_conditions(&chain, &f, a.probe)?;
    let value = report::condition_report_json(&r);
    let details = json!({"chain": a.chain, "observable": a.observable, "probe": a.probe});
    ctx.emit(a.output.as_deref(), &json_bytes(&value), |o| ctx.sidecar("check-conditions", o, Vec::new(), details))?;
    if r.all_agree() {
        Ok(Status::Pass)
    } else {
        eprintln!("VIOLATION: condition booleans disagree: {:?}", r.flags());
        Ok(Status::Violation)
    }
}

fn parse_ids<T: Copy + std::str::FromStr>(spec: &str, all: &[T], kind: &str, names: impl Fn(T) -> &'static str) -> CliResult<Vec<T>> {
    if spec == "all" {
        return Ok(all.to_vec());
    }
    spec.split(',')
        .map(|s| {
            s.trim().parse::<T>().map_err(|_| {
                let known: Vec<_> = all.iter().map(|&i| names(i)).collect();
                CliError::Usage(format!("unknown {kind} id `{s}` (known: all, {})", known.join(", ")))
            })
        })
        .collect()
}

fn rows_status(rows: &[ReportRow]) -> Status {
    let failures = rows.iter().filter(|r| r.failed()).count();
    if failures == 0 {
        Status::Pass
    } else {
        eprintln!("VIOLATION: {failures} of {} checks failed", rows.len());
        Status::Violation
    }
}

fn emit_rows(ctx: &Context, path: Option<&Path>, rows: &[ReportRow], subcommand: &str, seeds: Vec<u64>, details: serde_json::Value) -> CliResult<Status> {
    let mut bytes = Vec::new();
    report::write_verify_csv(&mut bytes, rows)?;
    let status = rows_status(rows);
    let details = json!({"config": details, "rows": rows.len(), "failures": rows.iter().filter(|r| r.failed()).count()});
    ctx.emit(path, &bytes, |o| ctx.sidecar(subcommand, o, seeds, details))?;
    Ok(status)
}

fn records_to_rows(records: &[VerificationRecord]) -> Vec<ReportRow> {
    records.iter().map(ReportRow::from).collect()
}

fn verify(ctx: &Context, a: &VerifyArgs) -> CliResult<Status> {
    let ids = parse_ids(&a.id, &InequalityId::ALL, "inequality", InequalityId::as_str)?;
    let weights = parse_weight_spec(&a.weights, Path::new("."))?;
    let batch = FiltrationBatch {
        ids,
        ps: a.p.clone(),
        instances: a.instances,
        master_seed: ctx.seed,
        max_atoms: a.max_atoms,
        max_n: a.max_n,
        max_dim: a.max_dim,
        weights,
        tol: ctx.tol,
    };
    let grid = batch.grid();
    if grid.is_empty() {
        return Err(CliError::Usage(format!("no requested id accepts any of the exponents {:?}", a.p)));
    }
    let pool = batch::thread_pool(ctx.threads)?;
    let details = json!({"ids": a.id, "p": a.p, "instances": a.instances, "instance": a.instance, "weights": a.weights,
        "max_atoms": a.max_atoms, "max_n": a.max_n, "max_dim": a.max_dim});
    let (records, seeds) = match &a.instance {
        Some(path) => {
            let instance = InstanceFile::load(path)?;
            let records = batch::par_map(&pool, grid.len(), |g| {
                let (id, p) = grid[g];
                batch::verify_one(id, &instance, p, &batch.weights, batch.tol)
            })?;
            (records, Vec::new())
        }
        None => (batch::verify_batch(&pool, &batch)?, batch.instance_seeds()),
    };
    emit_rows(ctx, a.output.as_deref(), &records_to_rows(&records), "verify", seeds, details)
}

fn verify_markov(ctx: &Context, a: &VerifyMarkovArgs) -> CliResult<Status> {
    let ids = parse_ids(&a.id, &MarkovCheckId::ALL, "chain check", MarkovCheckId::as_str)?;
    let weights = parse_weight_spec(&a.weights, Path::new("."))?;
    let details = json!({"ids": a.id, "instances": a.instances, "chain": a.chain, "observable": a.observable, "n": a.n,
        "max_states": a.max_states, "max_n": a.max_n, "dim": a.dim, "weights": a.weights, "literal_sqrt": a.literal_sqrt});
    let pool = batch::thread_pool(ctx.threads)?;
    if let (Some(chain_path), Some(obs_path), Some(n)) = (&a.chain, &a.observable, a.n) {
        let (chain, observable) = load_pair(chain_path, obs_path)?;
        let instance = MarkovInstance {
            chain,
            observable,
            seed: ctx.seed,
        };
        let explicit = a.id != "all";
        let ids: Vec<_> = ids
            .into_iter()
            .filter(|id| explicit || id.accepts_vector() || instance.observable.dim() == 1)
            .collect();
        let mut rows = Vec::new();
        for id in ids {
            let w = (id == MarkovCheckId::Thm41).then_some(&weights);
            let record = maxineq_core::markov::verify_markov_inequality(id, &instance, n, w, ctx.tol)?;
            rows.push(ReportRow::from(&record));
            if a.literal_sqrt && id == MarkovCheckId::Cor42Sqrt {
                rows.push(batch::literal_row(&instance.chain, &instance.observable, &record)?);
            }
        }
        return emit_rows(ctx, a.output.as_deref(), &rows, "verify-markov", Vec::new(), details);
    }
    let batch = MarkovBatch {
        ids,
        instances: a.instances,
        master_seed: ctx.seed,
        max_states: a.max_states,
        max_n: a.max_n,
        dim: a.dim.max(1),
        weights,
        tol: ctx.tol,
        literal_sqrt: a.literal_sqrt,
    };
    let rows = batch::markov_batch(&pool, &batch)?;
    emit_rows(ctx, a.output.as_deref(), &rows, "verify-markov", batch.instance_seeds(), details)
}

fn simulate(ctx: &Context, a: &SimulateArgs) -> CliResult<Status> {
    let (chain, f) = load_pair(&a.chain, &a.observable)?;
    let weights: WeightSequence = parse_weight_spec(&a.weights, Path::new("."))?;
    let config = SimConfig {
        master_seed: ctx.seed,
        trials: a.trials,
        horizon: a.horizon,
        threads: ctx.threads,
    };
    let pool = batch::thread_pool(ctx.threads)?;
    let seeds: Vec<u64> = (0..a.trials).map(|t| config.trial_seed(t)).collect();
    let base = json!({"chain": a.chain, "observable": a.observable, "weights": a.weights, "trials": a.trials, "horizon": a.horizon});
    if a.mc {
        let est = batch::mc_batch(&pool, &chain, &f, &weights, a.horizon, &config)?;
        let mut bytes = Vec::new();
        report::write_mc_csv(&mut bytes, a.horizon, &est)?;
        let details = json!({"config": base, "mode": "mc", "estimate": est.estimate, "standard_error": est.standard_error});
        ctx.emit(a.output.as_deref(), &bytes, |o| ctx.sidecar("simulate", o, seeds, details))?;
        return Ok(Status::Pass);
    }
    let paths = batch::paths_batch(&pool, &chain, &f, &weights, &config)?;
    let checkpoints = dyadic_checkpoints(a.horizon / 2);
    let table = as_convergence_diagnostic(&paths, &checkpoints)?;
    let mut outputs = Vec::new();
    if let Some(path) = &a.trajectories {
        let file = fs::File::create(path).map_err(|e| CliError::io(path, e))?;
        report::write_trajectories_csv(std::io::BufWriter::new(file), &paths)?;
        outputs.push(path.clone());
    }
    let mut bytes = Vec::new();
    report::write_diagnostics_csv(&mut bytes, &table)?;
    let verdict = if table.consistent_with_convergence {
        "consistent with a.s. convergence"
    } else {
        "not consistent with a.s. convergence"
    };
    eprintln!("oscillation trend: {verdict} (95% quantile must drop by {} at each of the last two dyadic steps)", maxineq_core::simulate::DECAY_FACTOR);
    let details = json!({"config": base, "mode": "oscillation", "checkpoints": checkpoints,
        "consistent_with_convergence": table.consistent_with_convergence});
    ctx.emit(a.output.as_deref(), &bytes, |mut o| {
        o.extend(outputs);
        ctx.sidecar("simulate", o, seeds, details)
    })?;
    Ok(Status::Pass)
}

fn report_cmd(ctx: &Context, a: &ReportArgs) -> CliResult<Status> {
    let file = fs::File::open(&a.input).map_err(|e| CliError::io(&a.input, e))?;
    let mut bytes = Vec::new();
    let rows = report::csv_to_gnuplot(std::io::BufReader::new(file), &mut bytes)?;
    let details = json!({"input": a.input, "rows": rows});
    ctx.emit(a.output.as_deref(), &bytes, |o| ctx.sidecar("report", o, Vec::new(), details))?;
    Ok(Status::Pass)
}

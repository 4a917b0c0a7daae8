//! `pdc`: command-line driver for the planted dense cycle experiments.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use planted_cycle::geometry::{geometric_graph, LatentAssignment};
use planted_cycle::harness::{
    self, lowdeg_rows, oracle::oracle_check, rho_rows, ExperimentConfig, ModeName, Statistic,
};
use planted_cycle::lowdeg::{advantage_sq, corr_bound_from_table, rho_table};
use planted_cycle::recovery::{kappa_threshold, reconstruct_geometry, recovery_error};
use planted_cycle::{derive_stream, sample_null, sample_planted, Graph, Label, RandomStream, Result};

#[derive(Parser)]
#[command(name = "pdc", version, about = "Planted dense cycle simulations and diagnostics")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Draw one graph and its latent positions.
    Sample(SampleArgs),
    /// Paired planted/null trials of a detection statistic.
    DetectPower(DetectArgs),
    /// Planted trials of the pairwise walk estimator.
    Recover(RecoverArgs),
    /// Estimate the whole proximity graph of a given graph.
    Reconstruct(ReconstructArgs),
    /// Detection and recovery over a grid of exponents.
    SweepPhase(SweepArgs),
    /// Truncated advantage and correlation bound by shape.
    LowdegDiag(LowdegArgs),
    /// Fast evaluators against brute-force enumeration.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct ModelArgs {
    /// TOML config; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    tau: Option<f64>,
}

impl ModelArgs {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        let m = &mut cfg.model;
        m.n = self.n.unwrap_or(m.n);
        m.p = self.p.unwrap_or(m.p);
        m.q = self.q.unwrap_or(m.q);
        m.tau = self.tau.unwrap_or(m.tau);
        Ok(cfg)
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long)]
    seed: u64,
    #[arg(long)]
    trials: usize,
    /// Output CSV, or `-` for stdout.
    #[arg(long)]
    out: PathBuf,
}

impl RunArgs {
    fn apply(&self, cfg: &mut ExperimentConfig) {
        cfg.experiment.seed = self.seed;
        cfg.experiment.trials = self.trials;
    }
}

#[derive(Args)]
struct DetectionFlags {
    /// triangle, clique4 or clique5.
    #[arg(long)]
    statistic: Option<String>,
    #[arg(long)]
    pilot_fraction: Option<f64>,
    /// Draw both arms from the null.
    #[arg(long)]
    null_control: bool,
}

impl DetectionFlags {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        if let Some(s) = &self.statistic {
            cfg.experiment.statistic = Statistic::parse(s)?;
        }
        if let Some(f) = self.pilot_fraction {
            cfg.experiment.pilot_fraction = f;
        }
        cfg.experiment.null_control |= self.null_control;
        Ok(())
    }
}

#[derive(Args)]
struct RecoveryFlags {
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    delta: Option<f64>,
    #[arg(long)]
    epsilon: Option<f64>,
    /// exact, mc or auto.
    #[arg(long)]
    mode: Option<String>,
    #[arg(long)]
    mc_samples: Option<u64>,
    /// Largest `(n − 2)^ℓ` enumerated exactly.
    #[arg(long)]
    budget: Option<f64>,
}

impl RecoveryFlags {
    fn apply(&self, cfg: &mut ExperimentConfig) -> Result<()> {
        let r = &mut cfg.recovery;
        r.ell = self.ell.unwrap_or(r.ell);
        r.delta = self.delta.or(r.delta);
        r.epsilon = self.epsilon.or(r.epsilon);
        r.mc_samples = self.mc_samples.unwrap_or(r.mc_samples);
        r.budget = self.budget.unwrap_or(r.budget);
        if let Some(mode) = &self.mode {
            r.mode = match mode.as_str() {
                "exact" => ModeName::Exact,
                "mc" => ModeName::Mc,
                "auto" => ModeName::Auto,
                other => return Err(planted_cycle::Error::Validation(format!("unknown mode `{other}` (expected exact, mc or auto)"))),
            };
        }
        Ok(())
    }
}

#[derive(Args)]
struct SampleArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    seed: u64,
    /// Draw from the null instead of the planted model.
    #[arg(long)]
    null: bool,
    /// Edge list output, or `-` for stdout.
    #[arg(long)]
    out: PathBuf,
    /// Latent positions output (planted model only).
    #[arg(long)]
    latents_out: Option<PathBuf>,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    detection: DetectionFlags,
}

#[derive(Args)]
struct RecoverArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    recovery: RecoveryFlags,
}

#[derive(Args)]
struct ReconstructArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    recovery: RecoveryFlags,
    /// Edge list to reconstruct; its vertex count overrides `n`.
    #[arg(long)]
    graph: PathBuf,
    /// True latent positions, to report the reconstruction error.
    #[arg(long)]
    latents: Option<PathBuf>,
    #[arg(long)]
    seed: u64,
    /// Edge list of the estimated proximity graph, or `-` for stdout.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[command(flatten)]
    run: RunArgs,
    #[command(flatten)]
    detection: DetectionFlags,
    #[command(flatten)]
    recovery: RecoveryFlags,
    /// Edge-density exponents, `p = n^{−a}`.
    #[arg(long, value_delimiter = ',')]
    a: Option<Vec<f64>>,
    /// Bandwidth exponents, `τ = n^{−b}`.
    #[arg(long, value_delimiter = ',')]
    b: Option<Vec<f64>>,
    #[arg(long = "sizes", value_delimiter = ',')]
    sizes: Option<Vec<usize>>,
    #[arg(long)]
    q_ratio: Option<f64>,
    #[arg(long)]
    detection_only: bool,
    /// Run grid cells concurrently.
    #[arg(long)]
    parallel_cells: bool,
}

#[derive(Args)]
struct LowdegArgs {
    #[command(flatten)]
    model: ModelArgs,
    #[arg(long)]
    seed: u64,
    /// Shape breakdown CSV, or `-` for stdout.
    #[arg(long)]
    out: PathBuf,
    /// Also write the ρ table here.
    #[arg(long)]
    rho_out: Option<PathBuf>,
    #[arg(long)]
    max_degree: Option<usize>,
    #[arg(long)]
    mc_samples: Option<u64>,
    /// Plain latent sampling instead of importance sampling.
    #[arg(long)]
    no_importance: bool,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    graphs: usize,
}

fn create(path: &Path) -> Result<Box<dyn Write>> {
    if path == Path::new("-") {
        Ok(Box::new(io::stdout().lock()))
    } else {
        Ok(Box::new(BufWriter::new(File::create(path)?)))
    }
}

fn sample(args: &SampleArgs) -> Result<()> {
    let cfg = args.model.load()?;
    let params = cfg.model.params()?;
    let mut rng = derive_stream(args.seed, &[Label::Tag("sample")]);
    let (graph, latents) = if args.null { (sample_null(&params, &mut rng), None) } else {
        let (g, z) = sample_planted(&params, &mut rng)?;
        (g, Some(z))
    };
    let mut out = create(&args.out)?;
    graph.write_edge_list(&mut out)?;
    out.flush()?;
    match (&args.latents_out, latents) {
        (Some(path), Some(z)) => {
            let mut w = create(path)?;
            z.write(&mut w)?;
            w.flush()?;
        }
        (Some(_), None) => eprintln!("note: null graphs have no latent positions; --latents-out ignored"),
        _ => {}
    }
    Ok(())
}

fn detect(args: &DetectArgs) -> Result<()> {
    let mut cfg = args.model.load()?;
    args.run.apply(&mut cfg);
    args.detection.apply(&mut cfg)?;
    let row = harness::run_detection(&cfg)?;
    eprintln!(
        "separation ratio {:.3}, held-out error {:.3} (type I {:.3}, type II {:.3})",
        row.separation_ratio.unwrap_or(f64::NAN),
        row.holdout_error.unwrap_or(f64::NAN),
        row.type_i.unwrap_or(f64::NAN),
        row.type_ii.unwrap_or(f64::NAN)
    );
    harness::write_results(create(&args.run.out)?, &[row])
}

fn recover(args: &RecoverArgs) -> Result<()> {
    let mut cfg = args.model.load()?;
    args.run.apply(&mut cfg);
    args.recovery.apply(&mut cfg)?;
    let row = harness::run_recovery(&cfg)?;
    eprintln!(
        "error rate {:.4} ± {:.4}, ratio to trivial {:.3} ± {:.3}",
        row.error_rate.unwrap_or(f64::NAN),
        row.error_rate_stderr.unwrap_or(f64::NAN),
        row.ratio_to_trivial.unwrap_or(f64::NAN),
        row.ratio_stderr.unwrap_or(f64::NAN)
    );
    harness::write_results(create(&args.run.out)?, &[row])
}

fn reconstruct(args: &ReconstructArgs) -> Result<()> {
    let mut cfg = args.model.load()?;
    args.recovery.apply(&mut cfg)?;
    let graph = Graph::read_edge_list(BufReader::new(File::open(&args.graph)?))?;
    cfg.model.n = graph.n();
    let params = cfg.model.params()?;
    let rcfg = cfg.recovery.config(&params)?.seed(args.seed);
    eprintln!("threshold kappa = {:.6e}", kappa_threshold(&params, rcfg.ell(), rcfg.epsilon())?);
    let xhat = reconstruct_geometry(&graph, &params, &rcfg)?;
    if let Some(path) = &args.latents {
        let z = LatentAssignment::read(BufReader::new(File::open(path)?))?;
        let truth = geometric_graph(&z, params.tau())?;
        let (frob, rate) = recovery_error(&xhat, &truth)?;
        let trivial = recovery_error(&Graph::empty(graph.n()), &truth)?.0;
        eprintln!("squared Frobenius error {frob} ({rate:.4} of entries); all-zero estimate {trivial}");
    }
    let mut out = create(&args.out)?;
    xhat.write_edge_list(&mut out)?;
    out.flush()?;
    Ok(())
}

fn sweep(args: &SweepArgs) -> Result<()> {
    let mut cfg = args.model.load()?;
    args.run.apply(&mut cfg);
    args.detection.apply(&mut cfg)?;
    args.recovery.apply(&mut cfg)?;
    let s = &mut cfg.sweep;
    s.a = args.a.clone().unwrap_or(std::mem::take(&mut s.a));
    s.b = args.b.clone().unwrap_or(std::mem::take(&mut s.b));
    s.n = args.sizes.clone().unwrap_or(std::mem::take(&mut s.n));
    s.q_ratio = args.q_ratio.unwrap_or(s.q_ratio);
    s.detection_only |= args.detection_only;
    s.parallel_cells |= args.parallel_cells;
    let rows = harness::phase_sweep(&cfg)?;
    for row in &rows {
        eprintln!(
            "{:<24} sep {:>8.3}  err/tau {:>7.3}  {}",
            row.cell,
            row.separation_ratio.unwrap_or(f64::NAN),
            row.ratio_to_trivial.unwrap_or(f64::NAN),
            row.status
        );
    }
    harness::write_results(create(&args.run.out)?, &rows)
}

fn lowdeg(args: &LowdegArgs) -> Result<()> {
    let mut cfg = args.model.load()?;
    let l = &mut cfg.lowdeg;
    l.max_degree = args.max_degree.unwrap_or(l.max_degree);
    l.mc_samples = args.mc_samples.unwrap_or(l.mc_samples);
    l.importance_sampling &= !args.no_importance;
    cfg.validate()?;
    let params = cfg.model.params()?;
    let rng = RandomStream::from_seed(args.seed);
    let adv = advantage_sq(&params, &cfg.lowdeg, &rng.split("advantage"))?;
    eprintln!("Adv^2 (D = {}) = {:.6e} ± {:.1e}", cfg.lowdeg.max_degree, adv.estimate, adv.stderr);
    if let Some(top) = adv.dominant() {
        eprintln!("dominant shape {} contributes {:.6e}", top.shape.id(), top.contribution);
    }
    harness::write_lowdeg(create(&args.out)?, &lowdeg_rows(&adv))?;
    if let Some(path) = &args.rho_out {
        let table = rho_table(&params, &cfg.lowdeg, &rng.split("rho"))?;
        let bound = corr_bound_from_table(params.lambda(), &table);
        eprintln!(
            "Corr^2 bound {:.6e} ± {:.1e}, MMSE lower bound {:.6e}",
            bound.corr_sq_bound, bound.stderr, bound.mmse_lower_bound
        );
        harness::write_rho(create(path)?, &rho_rows(&table))?;
    }
    Ok(())
}

fn oracle(args: &OracleArgs) -> Result<bool> {
    let report = oracle_check(args.seed, args.graphs)?;
    let count = |kind: &str| report.cases.iter().filter(|c| c.kind == kind).count();
    println!(
        "{} triangle and {} walk cases, max relative error {:.3e}: {}",
        count("triangle"),
        count("saw"),
        report.max_rel_error,
        if report.passed { "PASS" } else { "FAIL" }
    );
    Ok(report.passed)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Sample(a) => sample(a).map(|_| true),
        Command::DetectPower(a) => detect(a).map(|_| true),
        Command::Recover(a) => recover(a).map(|_| true),
        Command::Reconstruct(a) => reconstruct(a).map(|_| true),
        Command::SweepPhase(a) => sweep(a).map(|_| true),
        Command::LowdegDiag(a) => lowdeg(a).map(|_| true),
        Command::OracleCheck(a) => oracle(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("pdc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

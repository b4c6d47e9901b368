//! Command-line driver: one subcommand per experiment. Every run reads an
//! optional JSON config, writes CSV/JSON artifacts and a manifest into the
//! output directory, and exits non-zero if any check fails.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bias::fixed_point_residual;
use crate::error::{PolyaError, Result};
use crate::interarrival::{make_interarrival, InterArrivalDescriptor};
use crate::moments::{estimate_limit_moments, write_moments_csv, StdErrorMethod};
use crate::pa::{correspondence_exact, correspondence_mc, simulate_pa_snapshots, write_degree_csv, SeedGraph};
use crate::reference::{
    bernoulli_moments, bernoulli_pi_from_a, bernoulli_scan, kummer_reflection_residual, non_closure_checks,
    powerlaw_reference, powerlaw_urn_experiment,
};
use crate::report::fmt_f64;
use crate::rng::{derive_seed, stream, with_threads};
use crate::stats::{empirical_moments, ks_critical_99};
use crate::ul::{limit_check, suite_specs, Coefficients, LimitCheckConfig, ULDescriptor, ULSpec};
use crate::urn::{exact_pmf, simulate_batch, write_batch_csv, UrnConfig, UrnConfigDescriptor};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "polya", version, about = "Polya urns with immigration: simulation and verification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// JSON config; defaults are used when omitted.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 1)]
    pub seed: u64,
    /// Worker threads; falls back to POLYA_THREADS, then to all cores.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Output directory; defaults to `out/<subcommand>`.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Batches of urn paths.
    Simulate,
    /// Exact law of X_n for tiny instances.
    Oracle,
    /// Limit moment estimates.
    Moments,
    /// Density, samples and moment recursion of a UL law.
    Ul,
    /// Fixed-point residual of a UL law.
    Fixedpoint,
    /// End-to-end limit check against scaled urn draws.
    Theorem2,
    /// Two-point inter-arrival example.
    Bernoulli,
    /// Power-law inter-arrival example (partly exploratory).
    Powerlaw,
    /// Preferential attachment correspondence.
    Pa,
    /// Moment bounds, tail bounds and non-closure examples.
    Props,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::Oracle => "oracle",
            Command::Moments => "moments",
            Command::Ul => "ul",
            Command::Fixedpoint => "fixedpoint",
            Command::Theorem2 => "theorem2",
            Command::Bernoulli => "bernoulli",
            Command::Powerlaw => "powerlaw",
            Command::Pa => "pa",
            Command::Props => "props",
        }
    }
}

/// One named pass/fail assertion of a run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub threads: usize,
    pub config_sha256: String,
    pub config: serde_json::Value,
    pub artifacts: Vec<String>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

/// Collects the artifacts and checks of one run.
pub struct Run {
    dir: PathBuf,
    seed: u64,
    artifacts: Vec<String>,
    checks: Vec<Check>,
}

impl Run {
    fn new(dir: &Path, seed: u64) -> Result<Self> {
        fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
        Ok(Self { dir: dir.to_path_buf(), seed, artifacts: Vec::new(), checks: Vec::new() })
    }

    fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn write(&mut self, name: &str, body: impl FnOnce(&mut Vec<u8>) -> std::io::Result<()>) -> Result<()> {
        let mut buf = Vec::new();
        body(&mut buf).map_err(|e| io_error(Path::new(name), e))?;
        let path = self.dir.join(name);
        fs::write(&path, buf).map_err(|e| io_error(&path, e))?;
        self.artifacts.push(name.into());
        Ok(())
    }

    fn json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<()> {
        let text = serde_json::to_string_pretty(value).map_err(|e| PolyaError::Config(e.to_string()))?;
        self.write(name, |w| writeln!(w, "{text}"))
    }
}

fn io_error(path: &Path, e: std::io::Error) -> PolyaError {
    PolyaError::Config(format!("{}: {e}", path.display()))
}

/// Compact float for check messages; artifacts keep full precision.
fn short(x: f64) -> String {
    format!("{x:.4e}")
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| io_error(p, e))?;
            serde_json::from_str(&text).map_err(|e| PolyaError::Config(format!("{}: {e}", p.display())))
        }
    }
}

/// SHA-256 of the canonical JSON form of a config.
pub fn config_hash<T: Serialize>(config: &T) -> String {
    let bytes = serde_json::to_vec(config).expect("configs serialize");
    Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
}

/// `--threads`, then `POLYA_THREADS`, then the number of cores.
pub fn resolve_threads(flag: Option<usize>) -> usize {
    flag.or_else(|| std::env::var("POLYA_THREADS").ok().and_then(|v| v.parse().ok()))
        .filter(|&t| t > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
}

fn exp1() -> ULDescriptor {
    ULDescriptor { v: 1.0, coefficients: Coefficients::Polynomial { a: vec![1.0] } }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateConfig {
    pub b: u64,
    pub w: u64,
    pub pi: InterArrivalDescriptor,
    pub n: u64,
    pub paths: usize,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self { b: 1, w: 1, pi: InterArrivalDescriptor::Deterministic { k: 1 }, n: 1000, paths: 1000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleConfig {
    pub b: u64,
    pub w: u64,
    pub pi: InterArrivalDescriptor,
    pub n: u64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self { b: 1, w: 1, pi: InterArrivalDescriptor::Deterministic { k: 1 }, n: 2 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MomentsConfig {
    pub b: u64,
    pub w: u64,
    pub pi: InterArrivalDescriptor,
    pub n: u64,
    pub paths: usize,
    pub k_max: u32,
    #[serde(default)]
    pub std_error: StdErrorMethod,
}

impl Default for MomentsConfig {
    fn default() -> Self {
        Self {
            b: 1,
            w: 1,
            pi: InterArrivalDescriptor::Geometric { p: 0.5, support_start: 1 },
            n: 1000,
            paths: 1000,
            k_max: 3,
            std_error: StdErrorMethod::Clt,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UlConfig {
    pub spec: ULDescriptor,
    pub samples: usize,
    /// Recursion residuals are checked for `k = 0..=max_k`.
    pub max_k: usize,
    /// Terms kept before the separately evaluated tail (geometric only).
    pub truncation: usize,
    pub grid_points: usize,
}

impl Default for UlConfig {
    fn default() -> Self {
        Self { spec: exp1(), samples: 10_000, max_k: 6, truncation: 64, grid_points: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FixedPointConfig {
    pub spec: ULDescriptor,
    pub n: usize,
    pub repetitions: usize,
    /// Smallest share of repetitions that must stay below the critical value.
    pub min_pass_share: f64,
}

impl Default for FixedPointConfig {
    fn default() -> Self {
        Self { spec: exp1(), n: 100_000, repetitions: 1, min_pass_share: 0.95 }
    }
}

impl Default for LimitCheckConfig {
    fn default() -> Self {
        Self {
            b: 2,
            w: 1,
            pi: InterArrivalDescriptor::Finite { probs: vec![(0, 0.5), (1, 0.5)] },
            moment_n: 10_000,
            moment_paths: 1000,
            n: 10_000,
            paths: 2000,
            kind: crate::moments::MomentKind::Raw,
            threshold: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BernoulliConfig {
    pub w: u64,
    pub a1: f64,
    pub a2: f64,
    /// `a_1² / a_2` values for the `π_0` scan (with `a_2 = 1`).
    pub scan_ratios: Vec<f64>,
}

impl Default for BernoulliConfig {
    fn default() -> Self {
        let scan_ratios = (-12..=12).map(|i| 10f64.powf(f64::from(i) / 2.0)).collect();
        Self { w: 2, a1: 1.0, a2: 1.0, scan_ratios }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerLawConfig {
    pub alpha: f64,
    pub beta: f64,
    pub w: u64,
    pub pmf_terms: u64,
    pub samples: usize,
    /// Exploratory urn experiment; skipped when `urn_paths` is 0.
    pub urn_n: u64,
    pub urn_paths: usize,
}

impl Default for PowerLawConfig {
    fn default() -> Self {
        Self { alpha: 1.0, beta: 1.0, w: 1, pmf_terms: 1000, samples: 100_000, urn_n: 10_000, urn_paths: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PaMode {
    Exact,
    Montecarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PaConfig {
    pub degrees: Vec<u64>,
    pub pi: InterArrivalDescriptor,
    pub k: usize,
    pub n: u64,
    pub mode: PaMode,
    pub paths: usize,
    /// Steps at which the degree snapshot of one path is written.
    pub checkpoints: Vec<u64>,
}

impl Default for PaConfig {
    fn default() -> Self {
        Self {
            degrees: vec![1, 1],
            pi: InterArrivalDescriptor::Deterministic { k: 1 },
            k: 1,
            n: 4,
            mode: PaMode::Exact,
            paths: 10_000,
            checkpoints: vec![0, 4],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropsConfig {
    pub m_max: usize,
    pub mills_alpha: f64,
    pub mills_points: usize,
}

impl Default for PropsConfig {
    fn default() -> Self {
        Self { m_max: 8, mills_alpha: 0.5, mills_points: 100 }
    }
}

/// Parse arguments, run, and map the outcome to an exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(manifest) => {
            for c in &manifest.checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if manifest.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e @ PolyaError::Config(_)) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_RUNTIME
        }
    }
}

/// Run one subcommand and write its manifest.
pub fn run(cli: &Cli) -> Result<Manifest> {
    let threads = resolve_threads(cli.common.threads);
    let dir = cli.common.out.clone().unwrap_or_else(|| Path::new("out").join(cli.command.name()));
    let config = cli.common.config.as_deref();
    let seed = cli.common.seed;
    with_threads(threads, || {
        let mut run = Run::new(&dir, seed)?;
        let config_json = match cli.command {
            Command::Simulate => dispatch(config, &mut run, simulate)?,
            Command::Oracle => dispatch(config, &mut run, oracle)?,
            Command::Moments => dispatch(config, &mut run, moments)?,
            Command::Ul => dispatch(config, &mut run, ul)?,
            Command::Fixedpoint => dispatch(config, &mut run, fixedpoint)?,
            Command::Theorem2 => dispatch(config, &mut run, theorem2)?,
            Command::Bernoulli => dispatch(config, &mut run, bernoulli)?,
            Command::Powerlaw => dispatch(config, &mut run, powerlaw)?,
            Command::Pa => dispatch(config, &mut run, pa)?,
            Command::Props => dispatch(config, &mut run, props)?,
        };
        let manifest = Manifest {
            command: cli.command.name().into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed,
            threads,
            config_sha256: config_json.1,
            config: config_json.0,
            artifacts: run.artifacts.clone(),
            passed: run.checks.iter().all(|c| c.passed),
            checks: run.checks.clone(),
        };
        run.json("manifest.json", &manifest)?;
        Ok(manifest)
    })
}

fn dispatch<T>(
    path: Option<&Path>,
    run: &mut Run,
    body: fn(&T, &mut Run) -> Result<()>,
) -> Result<(serde_json::Value, String)>
where
    T: DeserializeOwned + Serialize + Default,
{
    let config: T = load_config(path)?;
    let hash = config_hash(&config);
    body(&config, run)?;
    let value = serde_json::to_value(&config).map_err(|e| PolyaError::Config(e.to_string()))?;
    Ok((value, hash))
}

fn simulate(c: &SimulateConfig, run: &mut Run) -> Result<()> {
    let config = UrnConfig::from_descriptor(&UrnConfigDescriptor { b: c.b, w: c.w, pi: c.pi.clone(), n: c.n })?;
    let results = simulate_batch(&config, run.seed, c.paths);
    let balanced = results.iter().all(|r| r.white + r.black == c.b + c.w + c.n + r.arrivals);
    run.check("ball-count", balanced, "white + black = b + w + n + N_n on every path");
    let mean = config.pi.mean();
    run.write("batch.csv", |w| write_batch_csv(w, &results, c.n, mean))
}

fn oracle(c: &OracleConfig, run: &mut Run) -> Result<()> {
    let config = UrnConfig::from_descriptor(&UrnConfigDescriptor { b: c.b, w: c.w, pi: c.pi.clone(), n: c.n })?;
    let pmf = exact_pmf(&config)?;
    let total = pmf.total();
    run.check("normalized", (total - 1.0).abs() < 1e-12, format!("total mass {}", short(total)));
    let map: serde_json::Map<String, serde_json::Value> =
        pmf.probs.iter().map(|(x, p)| (x.to_string(), serde_json::json!(p))).collect();
    run.json("pmf.json", &map)
}

fn moments(c: &MomentsConfig, run: &mut Run) -> Result<()> {
    let pi = make_interarrival(&c.pi)?;
    let estimates = estimate_limit_moments(c.k_max, c.b, c.w, &pi, c.n, c.paths, run.seed, c.std_error)?;
    let positive = estimates.iter().all(|e| e.factorial > 0.0 && e.raw > 0.0);
    run.check("positive", positive, format!("{} moments", estimates.len()));
    run.write("moments.csv", |w| write_moments_csv(w, &estimates))
}

fn ul(c: &UlConfig, run: &mut Run) -> Result<()> {
    let spec = ULSpec::from_descriptor(&c.spec)?;
    let norm = spec.normalization_error()?;
    run.check("normalization", norm < 1e-8, format!("|int u - 1| = {}", short(norm)));
    let residuals =
        (0..=c.max_k).map(|k| spec.moment_recursion_residual(k, c.truncation)).collect::<Result<Vec<_>>>()?;
    let worst = residuals.iter().map(|r| r.residual.abs()).fold(0.0, f64::max);
    run.check("recursion", worst <= 1e-6, format!("largest residual {}", short(worst)));
    let upper = if spec.rho().is_finite() { spec.rho() } else { spec.moment(1)? * 6.0 };
    let grid: Vec<f64> = (1..=c.grid_points).map(|i| upper * i as f64 / (c.grid_points + 1) as f64).collect();
    let rows = grid.iter().map(|&x| Ok((x, spec.density(x), spec.cdf(x)?))).collect::<Result<Vec<_>>>()?;
    run.write("density.csv", |w| {
        writeln!(w, "x,density,cdf")?;
        for (x, d, f) in &rows {
            writeln!(w, "{},{},{}", fmt_f64(*x), fmt_f64(*d), fmt_f64(*f))?;
        }
        Ok(())
    })?;
    let batch = spec.sample(c.samples, run.seed, "ul")?;
    run.write("samples.csv", |w| {
        writeln!(w, "index,value")?;
        for (i, x) in batch.values.iter().enumerate() {
            writeln!(w, "{i},{}", fmt_f64(*x))?;
        }
        Ok(())
    })?;
    let report = serde_json::json!({
        "normalization_error": norm,
        "moments": spec.moments(),
        "recursion": residuals,
        "sample_moments": empirical_moments(&batch.values, 4)?,
    });
    run.json("report.json", &report)
}

fn fixedpoint(c: &FixedPointConfig, run: &mut Run) -> Result<()> {
    let spec = ULSpec::from_descriptor(&c.spec)?;
    let psi = spec.psi()?;
    let critical = ks_critical_99(c.n, c.n);
    let reports = (0..c.repetitions)
        .map(|r| {
            let seed = derive_seed(run.seed, &format!("rep-{r}"));
            let batch = spec.sample(c.n, seed, "fixedpoint")?;
            fixed_point_residual(&batch, spec.v(), &psi, seed)
        })
        .collect::<Result<Vec<_>>>()?;
    let below = reports.iter().filter(|r| r.ks < critical).count();
    let share = below as f64 / c.repetitions.max(1) as f64;
    run.check(
        "fixed-point",
        share >= c.min_pass_share,
        format!("{below}/{} repetitions below {}", c.repetitions, short(critical)),
    );
    run.json("report.json", &serde_json::json!({ "critical_99": critical, "repetitions": reports }))
}

fn theorem2(c: &LimitCheckConfig, run: &mut Run) -> Result<()> {
    let (report, samples) = limit_check(c, run.seed)?;
    run.check("limit-ks", report.passed, format!("KS {} vs threshold {}", short(report.ks), short(report.threshold)));
    run.write("samples.csv", |w| {
        writeln!(w, "index,urn_scaled,limit")?;
        for (i, (u, l)) in samples.urn.iter().zip(&samples.limit).enumerate() {
            writeln!(w, "{i},{},{}", fmt_f64(*u), fmt_f64(*l))?;
        }
        Ok(())
    })?;
    run.json("report.json", &report)
}

fn bernoulli(c: &BernoulliConfig, run: &mut Run) -> Result<()> {
    let pi = bernoulli_pi_from_a(c.w, c.a1, c.a2)?;
    run.check("routes-agree", true, format!("gap {}", short((pi.middle - pi.right).abs())));
    let (ez, ez2) = bernoulli_moments(c.w, c.a1, c.a2)?;
    let sum = c.a1 * ez + c.a2 * ez2;
    run.check("sums-to-one", (sum - 1.0).abs() < 1e-8, format!("a1 EZ + a2 EZ^2 = {}", short(sum)));
    let z = c.w as f64 * c.a1 * c.a1 / (2.0 * c.a2);
    let h = c.w as f64 / 2.0;
    let reflection = kummer_reflection_residual(h + 1.0, 1.5, z)?.max(kummer_reflection_residual(h, 0.5, z)?);
    run.check("kummer-reflection", reflection < 1e-8, format!("relative residual {}", short(reflection)));
    let scan = bernoulli_scan(c.w, &c.scan_ratios)?;
    let monotone = scan.windows(2).all(|p| (p[1].ratio > p[0].ratio) == (p[1].pi0 > p[0].pi0));
    run.check("scan-monotone", monotone, format!("{} points", scan.len()));
    run.write("scan.csv", |w| {
        writeln!(w, "ratio,pi0")?;
        for p in &scan {
            writeln!(w, "{},{}", fmt_f64(p.ratio), fmt_f64(p.pi0))?;
        }
        Ok(())
    })?;
    run.json("report.json", &serde_json::json!({ "pi": pi, "ez": ez, "ez2": ez2 }))
}

fn powerlaw(c: &PowerLawConfig, run: &mut Run) -> Result<()> {
    let r = powerlaw_reference(c.alpha, c.beta, c.w as f64)?;
    let head: f64 = (0..c.pmf_terms).map(|j| r.pi(j)).sum();
    let total = head + r.pi_survival(c.pmf_terms);
    run.check("pmf-sums", (total - 1.0).abs() < 1e-10, format!("head + tail = {}", short(total)));
    let batch = r.sample(c.samples, run.seed)?;
    let m = &empirical_moments(&batch.values, 1)?[0];
    run.check(
        "beta-mean",
        (m.mean - r.moment(1)).abs() < 4.0 * m.se,
        format!("sample {} vs {}", short(m.mean), short(r.moment(1))),
    );
    run.write("pmf.csv", |w| {
        writeln!(w, "j,pi")?;
        for j in 0..c.pmf_terms {
            writeln!(w, "{j},{}", fmt_f64(r.pi(j)))?;
        }
        Ok(())
    })?;
    let exploratory = if c.urn_paths > 0 {
        Some(powerlaw_urn_experiment(c.alpha, c.beta, c.w, c.urn_n, c.urn_paths, derive_seed(run.seed, "urn"))?)
    } else {
        None
    };
    let mu = match r.mu() {
        crate::interarrival::Mean::Finite(mu) => serde_json::json!(mu),
        crate::interarrival::Mean::Infinite => serde_json::json!("infinite"),
    };
    run.json(
        "report.json",
        &serde_json::json!({ "mu": mu, "moments": (1..=4).map(|j| r.moment(j)).collect::<Vec<_>>(), "exploratory": exploratory }),
    )
}

fn pa(c: &PaConfig, run: &mut Run) -> Result<()> {
    let graph = SeedGraph::new(&c.degrees)?;
    let pi = make_interarrival(&c.pi)?;
    match c.mode {
        PaMode::Exact => {
            let report = correspondence_exact(&graph, &pi, c.k, c.n)?;
            run.check("exact-correspondence", report.max_gap < 1e-10, format!("max gap {}", short(report.max_gap)));
            run.json("report.json", &report)?;
        }
        PaMode::Montecarlo => {
            let report = correspondence_mc(&graph, &pi, c.k, c.n, c.paths, run.seed)?;
            run.check(
                "mc-correspondence",
                report.passed,
                format!("KS {} vs {}", short(report.ks), short(report.critical_99)),
            );
            run.json("report.json", &report)?;
        }
    }
    let (_, snapshots) =
        simulate_pa_snapshots(&graph, &pi, c.n, &c.checkpoints, &mut stream(derive_seed(run.seed, "snapshot"), 0));
    run.write("degrees.csv", |w| write_degree_csv(w, &snapshots))
}

fn props(c: &PropsConfig, run: &mut Run) -> Result<()> {
    let mut rows = Vec::new();
    for (name, spec) in suite_specs()? {
        let mut worst: f64 = 0.0;
        for m in 1..=c.m_max {
            worst = worst.max(spec.moment(m)? / spec.moment_upper_bound(m));
        }
        // the bound is attained by one-coefficient laws, so allow rounding
        run.check(
            &format!("moment-bound-{name}"),
            worst <= 1.0 + 1e-9,
            format!("largest mu_m / bound {}", short(worst)),
        );
        let mills = spec.mills_check(c.mills_alpha, c.mills_points)?;
        run.check(&format!("mills-{name}"), mills.holds, format!("largest ratio {}", short(mills.worst_ratio)));
        rows.push(serde_json::json!({ "spec": name, "moment_bound_ratio": worst, "mills": mills }));
    }
    let nc = non_closure_checks()?;
    for &(x, _, ratio) in &nc.log_divergence {
        if x == 1e-4 {
            run.check(
                "log-divergence",
                (0.95..=1.05).contains(&ratio),
                format!("density / -ln x = {} at x = 1e-4", short(ratio)),
            );
        }
    }
    run.check(
        "erfc-fourth",
        nc.erfc_error() < 1e-4 && nc.erfc_fourth < 0.0,
        format!("{} vs {}", short(nc.erfc_fourth), short(nc.erfc_target)),
    );
    run.json("report.json", &serde_json::json!({ "specs": rows, "non_closure": nc }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_in(dir: &Path, args: &[&str]) -> (i32, Manifest) {
        let mut full = vec!["polya"];
        full.extend_from_slice(args);
        let out = dir.to_str().unwrap();
        full.extend_from_slice(&["--out", out]);
        let code = main_with_args(full);
        let text = fs::read_to_string(dir.join("manifest.json")).unwrap();
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let manifest = Manifest {
            command: value["command"].as_str().unwrap().into(),
            version: value["version"].as_str().unwrap().into(),
            seed: value["seed"].as_u64().unwrap(),
            threads: value["threads"].as_u64().unwrap() as usize,
            config_sha256: value["config_sha256"].as_str().unwrap().into(),
            config: value["config"].clone(),
            artifacts: Vec::new(),
            checks: Vec::new(),
            passed: value["passed"].as_bool().unwrap(),
        };
        (code, manifest)
    }

    #[test]
    fn oracle_default_matches_hand_values() {
        let dir = tempfile::tempdir().unwrap();
        let (code, manifest) = run_in(dir.path(), &["oracle", "--seed", "3"]);
        assert_eq!(code, EXIT_OK);
        assert_eq!(manifest.seed, 3);
        assert_eq!(manifest.config_sha256.len(), 64);
        let pmf: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(dir.path().join("pmf.json")).unwrap()).unwrap();
        assert_eq!(pmf, serde_json::json!({"1": 0.375, "2": 0.375, "3": 0.25}));
    }

    #[test]
    fn ul_recursion_on_exp() {
        let dir = tempfile::tempdir().unwrap();
        let (code, manifest) = run_in(dir.path(), &["ul"]);
        assert_eq!(code, EXIT_OK);
        assert!(manifest.passed);
    }

    #[test]
    fn bad_config_is_a_config_error() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = dir.path().join("bad.json");
        fs::write(&cfg, r#"{"b": 1, "bogus": 2}"#).unwrap();
        let code = main_with_args([
            "polya",
            "oracle",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code, EXIT_CONFIG);
        assert_eq!(main_with_args(["polya", "nonsense"]), EXIT_CONFIG);
    }

    #[test]
    fn reruns_are_byte_identical_across_threads() {
        let cfg_dir = tempfile::tempdir().unwrap();
        let cfg = cfg_dir.path().join("sim.json");
        fs::write(&cfg, r#"{"b":1,"w":2,"pi":{"kind":"geometric","p":0.5,"support_start":0},"n":300,"paths":500}"#)
            .unwrap();
        let outputs: Vec<Vec<u8>> = ["1", "1", "3"]
            .iter()
            .map(|t| {
                let dir = tempfile::tempdir().unwrap();
                let (code, _) =
                    run_in(dir.path(), &["simulate", "--config", cfg.to_str().unwrap(), "--seed", "9", "--threads", t]);
                assert_eq!(code, EXIT_OK);
                fs::read(dir.path().join("batch.csv")).unwrap()
            })
            .collect();
        assert_eq!(outputs[0], outputs[1]);
        assert_eq!(outputs[0], outputs[2]);
    }

    #[test]
    fn threads_fall_back_to_env() {
        assert_eq!(resolve_threads(Some(3)), 3);
        assert!(resolve_threads(None) >= 1);
    }

    #[test]
    fn config_hash_is_stable() {
        let a = config_hash(&OracleConfig::default());
        assert_eq!(a, config_hash(&OracleConfig::default()));
        assert_ne!(a, config_hash(&OracleConfig { n: 3, ..OracleConfig::default() }));
    }
}

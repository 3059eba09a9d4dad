//! Command line front end: configuration parsing, orchestration and output.

mod output;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

pub use output::{sha256_hex, FileEntry, OutputSet, RunManifest};

use crate::error::{Error, Result};
use crate::experiments::{records_to_csv, run_experiment, EstimateRecord, ExperimentConfig, ExperimentKind, ExperimentOutput};
use crate::verify::{run_verify, VerifySuite};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "CGM_OUT_DIR";
const DEFAULT_OUT_DIR: &str = "cgm-out";

#[derive(Debug, Parser)]
#[command(name = "cornergrowth", version, about = "Corner growth model simulations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    /// Master seed; overrides the config file.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads (0 = one per core).
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    /// Output directory [default: $CGM_OUT_DIR or ./cgm-out].
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ConfigArgs {
    /// TOML experiment configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Experiment kind when no config file is given.
    #[arg(long, value_enum)]
    pub experiment: Option<KindArg>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long = "n", alias = "N")]
    pub n: Option<u64>,
    /// Comma separated parameter grid.
    #[arg(long, value_delimiter = ',')]
    pub grid: Option<Vec<f64>>,
    #[arg(long)]
    pub replicas: Option<u64>,
    #[arg(long)]
    pub far_multiplier: Option<f64>,
    /// Write measured wall time to the CSV instead of 0.
    #[arg(long)]
    pub timing: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    CoalSlow,
    CoalFast,
    CoalCorner,
    ExitTail,
    ExitShifted,
    ExitSmall,
    Fluctuation,
    VarianceIdentity,
    RwBound,
    RadonNikodym,
    DualityCheck,
}

impl From<KindArg> for ExperimentKind {
    fn from(k: KindArg) -> Self {
        ExperimentKind::ALL[k as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Exact,
    Appendix,
    All,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one experiment.
    Simulate {
        #[command(flatten)]
        config: ConfigArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run the exact identity suite and the appendix checks.
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: SuiteArg,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run every `[[run]]` table of a TOML file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        far_multiplier: Option<f64>,
        #[arg(long)]
        timing: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Turn an estimate CSV into two-column data files, one per curve.
    Plotdata {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// What a command did.
#[derive(Debug, Clone, PartialEq)]
pub struct CommandOutcome {
    /// False when an asserted check failed.
    pub passed: bool,
    pub written: Vec<PathBuf>,
    pub lines: Vec<String>,
}

/// Process exit status for an error.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Capacity { .. } => 3,
        _ => 1,
    }
}

fn out_dir(explicit: Option<&PathBuf>) -> PathBuf {
    explicit
        .cloned()
        .or_else(|| std::env::var_os(OUT_DIR_ENV).map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from(DEFAULT_OUT_DIR))
}

fn read_text(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))
}

/// Builds and validates a configuration from a file and/or flags; flags win.
/// Returns the config and the text echoed into the manifest.
pub fn parse_config(args: &ConfigArgs, seed: Option<u64>) -> Result<(ExperimentConfig, String)> {
    let (mut config, text) = match (&args.config, args.experiment) {
        (Some(path), _) => {
            let text = read_text(path)?;
            let config: ExperimentConfig = toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
            (config, text)
        }
        (None, Some(kind)) => (ExperimentConfig::new(kind.into(), 0.5, 0, Vec::new(), 1000, 0), String::new()),
        (None, None) => return Err(Error::Config("either --config or --experiment is required".into())),
    };
    if let Some(kind) = args.experiment {
        config.experiment = kind.into();
    }
    if let Some(rho) = args.rho {
        config.rho = rho;
    }
    if let Some(n) = args.n {
        config.n = n;
    }
    if let Some(grid) = &args.grid {
        config.grid = grid.clone();
    }
    if let Some(r) = args.replicas {
        config.replicas = r;
    }
    if let Some(f) = args.far_multiplier {
        config.far_multiplier = f;
    }
    if let Some(s) = seed {
        config.master_seed = s;
    }
    config.validate()?;
    let text = if text.is_empty() {
        toml::to_string(&config).map_err(|e| Error::Config(e.to_string()))?
    } else {
        text
    };
    Ok((config, text))
}

#[derive(Serialize)]
struct Summary<'a> {
    config: &'a ExperimentConfig,
    passed: bool,
    #[serde(flatten)]
    output: &'a ExperimentOutput,
}

fn summary_lines(out: &ExperimentOutput) -> Vec<String> {
    let mut lines: Vec<String> = out
        .records
        .iter()
        .map(|r| {
            format!(
                "{} {}={} p_hat={:.6} [{:.6}, {:.6}] hits={}/{}",
                r.experiment, r.param_name, r.param_value, r.p_hat, r.ci_lo, r.ci_hi, r.hits, r.replicas
            )
        })
        .collect();
    for f in &out.fits {
        lines.push(format!(
            "fit {} {:?}: slope={:.4} intercept={:.4} r2={:.4}",
            f.family, f.fit.transform, f.fit.slope, f.fit.intercept, f.fit.r_squared
        ));
    }
    for c in &out.checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        let kind = if c.asserted { "" } else { " (diagnostic)" };
        lines.push(format!("{tag} {}{kind}: {} [{}]", c.name, c.detail, c.tolerance));
    }
    lines
}

fn simulate(config: &ConfigArgs, common: &CommonArgs) -> Result<CommandOutcome> {
    let started = output::unix_now();
    let (cfg, text) = parse_config(config, common.seed)?;
    let out = run_experiment(&cfg, common.workers)?;
    let name = cfg.experiment.name();
    let csv = records_to_csv(&out.records, config.timing)?;
    let passed = out.passed();
    let summary = Summary { config: &cfg, passed, output: &out };
    let mut files = OutputSet::new();
    files.add(format!("{name}.csv"), csv.clone());
    files.add(
        format!("{name}.summary.json"),
        serde_json::to_string_pretty(&summary).expect("summary serializes") + "\n",
    );
    let mut manifest = RunManifest::new("simulate", text, cfg.master_seed, common.workers, started);
    manifest.add_csv_rows(&csv);
    let written = files.publish(&out_dir(common.out.as_ref()), &format!("{name}.manifest.json"), manifest)?;
    Ok(CommandOutcome { passed, written, lines: summary_lines(&out) })
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SweepFile {
    run: Vec<ExperimentConfig>,
}

fn sweep(path: &Path, far: Option<f64>, timing: bool, common: &CommonArgs) -> Result<CommandOutcome> {
    let started = output::unix_now();
    let text = read_text(path)?;
    let mut file: SweepFile = toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    if file.run.is_empty() {
        return Err(Error::Config("sweep needs at least one [[run]] table".into()));
    }
    for cfg in &mut file.run {
        if let Some(s) = common.seed {
            cfg.master_seed = s;
        }
        if let Some(f) = far {
            cfg.far_multiplier = f;
        }
        cfg.validate()?;
    }
    let mut records = Vec::new();
    let mut summaries = Vec::new();
    let mut lines = Vec::new();
    let mut passed = true;
    for cfg in &file.run {
        let out = run_experiment(cfg, common.workers)?;
        passed &= out.passed();
        lines.extend(summary_lines(&out));
        records.extend(out.records.iter().cloned());
        summaries.push(serde_json::to_value(Summary { config: cfg, passed: out.passed(), output: &out }).expect("summary serializes"));
    }
    let csv = records_to_csv(&records, timing)?;
    let mut files = OutputSet::new();
    files.add("sweep.csv", csv.clone());
    files.add("sweep.summary.json", serde_json::to_string_pretty(&summaries).expect("summary serializes") + "\n");
    let seed = file.run[0].master_seed;
    let mut manifest = RunManifest::new("sweep", text, seed, common.workers, started);
    manifest.add_csv_rows(&csv);
    let written = files.publish(&out_dir(common.out.as_ref()), "sweep.manifest.json", manifest)?;
    Ok(CommandOutcome { passed, written, lines })
}

fn verify(suite: SuiteArg, common: &CommonArgs) -> Result<CommandOutcome> {
    let started = output::unix_now();
    let suite = match suite {
        SuiteArg::Exact => VerifySuite::Exact,
        SuiteArg::Appendix => VerifySuite::Appendix,
        SuiteArg::All => VerifySuite::All,
    };
    let seed = common.seed.unwrap_or(0);
    let outcome = run_verify(suite, seed, common.workers)?;
    let passed = outcome.passed();
    let lines = outcome
        .checks
        .iter()
        .map(|c| format!("{} {}: {} [{}]", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail, c.tolerance))
        .collect();
    let mut files = OutputSet::new();
    let body = serde_json::json!({ "suite": suite, "passed": passed, "lemma_checks": outcome.lemma_checks, "checks": outcome.checks });
    files.add("verify.summary.json", serde_json::to_string_pretty(&body).expect("summary serializes") + "\n");
    let echo = format!("suite = {:?}\nmaster_seed = {seed}\n", suite).to_lowercase();
    let manifest = RunManifest::new("verify", echo, seed, common.workers, started);
    let written = files.publish(&out_dir(common.out.as_ref()), "verify.manifest.json", manifest)?;
    Ok(CommandOutcome { passed, written, lines })
}

/// Which transformed coordinates make a family's curve straight.
fn transform_for(experiment: &str, family: &str) -> Option<(&'static str, fn(f64, f64) -> Option<(f64, f64)>)> {
    fn loglog(t: f64, p: f64) -> Option<(f64, f64)> {
        (t > 0.0 && p > 0.0).then(|| (t.ln(), p.ln()))
    }
    fn cubic(t: f64, p: f64) -> Option<(f64, f64)> {
        (p > 0.0).then(|| (t.powi(3), -p.ln()))
    }
    match (experiment, family) {
        ("coal_slow" | "exit_small" | "fluctuation" | "coal_corner", "delta") => Some(("loglog", loglog)),
        ("coal_fast" | "exit_tail" | "coal_corner", "r") => Some(("cubic", cubic)),
        _ => None,
    }
}

fn plotdata(input: &Path, out: Option<&PathBuf>) -> Result<CommandOutcome> {
    let started = output::unix_now();
    let text = read_text(input)?;
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut curves: BTreeMap<(String, String), Vec<EstimateRecord>> = BTreeMap::new();
    for row in reader.deserialize::<EstimateRecord>() {
        let r = row.map_err(|e| Error::Config(format!("{}: {e}", input.display())))?;
        curves.entry((r.experiment.clone(), r.param_name.clone())).or_default().push(r);
    }
    if curves.is_empty() {
        return Err(Error::Config(format!("{} holds no records", input.display())));
    }
    let mut files = OutputSet::new();
    let mut lines = Vec::new();
    for ((exp, fam), mut recs) in curves {
        recs.sort_by(|a, b| a.param_value.total_cmp(&b.param_value));
        let mut body = format!("# {exp} {fam}: {fam} p_hat\n");
        for r in &recs {
            body.push_str(&format!("{:.16e} {:.16e}\n", r.param_value, r.p_hat));
        }
        let name = format!("{exp}_{fam}.dat");
        lines.push(format!("{name}: {} points", recs.len()));
        files.add(name, body);
        if let Some((tag, f)) = transform_for(&exp, &fam) {
            let mut body = format!("# {exp} {fam}: {tag} coordinates\n");
            for (x, y) in recs.iter().filter_map(|r| f(r.param_value, r.p_hat)) {
                body.push_str(&format!("{x:.16e} {y:.16e}\n"));
            }
            files.add(format!("{exp}_{fam}_{tag}.dat"), body);
        }
    }
    let manifest = RunManifest::new("plotdata", input.display().to_string(), 0, 1, started);
    let written = files.publish(&out_dir(out), "plotdata.manifest.json", manifest)?;
    Ok(CommandOutcome { passed: true, written, lines })
}

/// Executes a parsed command line.
pub fn execute(cli: &Cli) -> Result<CommandOutcome> {
    match &cli.command {
        Command::Simulate { config, common } => simulate(config, common),
        Command::Verify { suite, common } => verify(*suite, common),
        Command::Sweep { config, far_multiplier, timing, common } => sweep(config, *far_multiplier, *timing, common),
        Command::Plotdata { input, out } => plotdata(input, out.as_ref()),
    }
}

/// Entry point for the binary: parses `std::env::args`, runs, prints, and
/// maps the outcome to an exit status.
pub fn main_entry() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(outcome) => {
            for line in &outcome.lines {
                println!("{line}");
            }
            for p in &outcome.written {
                println!("wrote {}", p.display());
            }
            if outcome.passed {
                ExitCode::SUCCESS
            } else {
                eprintln!("verification failed");
                ExitCode::from(2)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

//! The `closeness` command line.
//!
//! `test` exits 0 for "equal" and 1 for "far"; the other subcommands exit 0
//! when every check passes and 1 otherwise. Usage and data errors exit 2.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::distributions::{read_distribution, read_samples, tv_distance, DiscreteDistribution, SampleBatch};
use crate::error::{Error, Result};
use crate::gap::{
    cf_binomial, cf_poisson, exact_gap_binomial, exact_gap_poisson, lower_bound_binomial, lower_bound_poisson,
    zolotarev_gap, PanelRule, QuadratureConfig,
};
use crate::harness::output::write_file;
use crate::harness::{
    concentration_profile, format_sig, run_experiment, verify_grids, write_grid, write_trials, ExperimentSpec,
    GridConfig, GridFamily, RateTest, RATE_TEST_ALPHA,
};
use crate::rng::RngStream;
use crate::tester::{complexity_terms, delta_star_branch, make_plan, run_test, Decision, TestParams, Verdict};

pub const SEED_ENV: &str = "CLOSENESS_SEED";

const TEST_STREAM: u64 = 0;

#[derive(Debug, Parser)]
#[command(
    name = "closeness",
    version,
    about = "Two-sample closeness testing for discrete distributions"
)]
pub struct Cli {
    /// Base seed of every random stream.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 0)]
    pub seed: u64,

    /// Worker threads for experiments and grids (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    /// Print results as CSV (header and one row) instead of a table.
    #[arg(long, global = true)]
    pub csv: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide whether two sample files come from the same distribution.
    Test(TestArgs),
    /// Expectation gap of one symbol's counts.
    Gap {
        #[command(subcommand)]
        mode: GapMode,
    },
    /// Certified sample size and the three asymptotic terms.
    Samplesize(PlanArgs),
    /// Repeat the test on known distributions and check the error rate.
    Simulate(SimulateArgs),
    /// Check the gap bounds and phase inequalities over their grids.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, Args)]
pub struct PlanArgs {
    /// Domain size.
    #[arg(short = 'k', long)]
    pub k: usize,
    /// Distance parameter in (0, 1].
    #[arg(short = 'e', long, visible_alias = "eps")]
    pub epsilon: f64,
    /// Error probability in (0, 1].
    #[arg(short = 'd', long)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Samples of p, one symbol in 1..=k per line.
    pub p_samples: PathBuf,
    /// Samples of q.
    pub q_samples: PathBuf,
    #[command(flatten)]
    pub plan: PlanArgs,
    /// Use this per-batch size instead of the certified one.
    #[arg(short = 'n', long)]
    pub n: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum RuleArg {
    GaussKronrod,
    Simpson,
}

#[derive(Debug, Args)]
pub struct LawArgs {
    /// Binomial counts Bin(n, p) vs Bin(n, q).
    #[arg(long, conflicts_with = "poisson", required_unless_present = "poisson")]
    pub binomial: bool,
    /// Poisson counts Poi(mu) vs Poi(lambda).
    #[arg(long)]
    pub poisson: bool,
    #[arg(short = 'n', long)]
    pub n: Option<u64>,
    #[arg(short = 'p', long, allow_negative_numbers = true)]
    pub p: Option<f64>,
    #[arg(short = 'q', long, allow_negative_numbers = true)]
    pub q: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub lambda: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum GapMode {
    /// Exact gap of Bin(n, p) vs Bin(n, q) by enumeration.
    BinomialExact {
        #[arg(short = 'n', long)]
        n: u64,
        #[arg(short = 'p', long, allow_negative_numbers = true)]
        p: f64,
        #[arg(short = 'q', long, allow_negative_numbers = true)]
        q: f64,
    },
    /// Exact gap of Poi(mu) vs Poi(lambda) by truncated enumeration.
    PoissonExact {
        #[arg(long, allow_negative_numbers = true)]
        mu: f64,
        #[arg(long, allow_negative_numbers = true)]
        lambda: f64,
    },
    /// Gap from the characteristic-function integral.
    Zolotarev {
        #[command(flatten)]
        law: LawArgs,
        /// Absolute quadrature tolerance.
        #[arg(long, default_value_t = 1e-8)]
        tolerance: f64,
        #[arg(long, value_enum, default_value_t = RuleArg::GaussKronrod)]
        rule: RuleArg,
        /// Explicit 2π translates in the folded kernel.
        #[arg(long, default_value_t = 64)]
        fold_terms: usize,
    },
    /// Closed-form three-term lower bound.
    Bound {
        #[command(flatten)]
        law: LawArgs,
    },
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub plan: PlanArgs,
    /// q = p; checks the rate of "far" verdicts.
    #[arg(long, conflicts_with = "far", required_unless_present = "far")]
    pub null: bool,
    /// q at distance at least epsilon from p; checks the rate of "equal" verdicts.
    #[arg(long)]
    pub far: bool,
    #[arg(long, default_value_t = 200)]
    pub trials: u64,
    /// Use this per-batch size instead of the certified one.
    #[arg(short = 'n', long)]
    pub n: Option<u64>,
    /// Distribution file for p (default: uniform on k symbols).
    #[arg(long = "p-dist")]
    pub p_dist: Option<PathBuf>,
    /// Distribution file for q under --far (default: paired perturbation of
    /// the uniform distribution at distance --tv).
    #[arg(long = "q-dist")]
    pub q_dist: Option<PathBuf>,
    #[arg(long, default_value_t = 0.5)]
    pub tv: f64,
    /// Also report the empirical concentration of Z.
    #[arg(long)]
    pub profile: bool,
    /// Per-trial CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Run every grid family (the default when no --family is given).
    #[arg(long, conflicts_with = "family")]
    pub all: bool,
    /// Restrict to these families.
    #[arg(long, value_parser = parse_family)]
    pub family: Vec<GridFamily>,
    /// Per-point CSV output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Violations listed in the summary.
    #[arg(long, default_value_t = 20)]
    pub show: usize,
}

fn parse_family(s: &str) -> std::result::Result<GridFamily, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parses `args` (program name first), runs the command and returns the
/// exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                write!(out, "{text}")
            } else {
                write!(err, "{text}")
            };
            return if code == 0 { 0 } else { 2 };
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            2
        }
    }
}

/// Runs `cli`; warnings go to `err` even when the command fails.
pub fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let mut warnings = Vec::new();
    let outcome = match cli.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::Domain(format!("cannot start {threads} threads: {e}")))
            .and_then(|pool| pool.install(|| dispatch(cli, &mut warnings))),
        None => dispatch(cli, &mut warnings),
    };
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    let (code, report) = outcome?;
    report.emit(out)?;
    Ok(code)
}

fn dispatch(cli: &Cli, warnings: &mut Vec<String>) -> Result<(i32, Report)> {
    let mut report = Report::new(cli.csv);
    let code = match &cli.command {
        Command::Test(args) => cmd_test(args, cli.seed, &mut report, warnings)?,
        Command::Gap { mode } => cmd_gap(mode, &mut report)?,
        Command::Samplesize(args) => cmd_samplesize(args, &mut report)?,
        Command::Simulate(args) => cmd_simulate(args, cli.seed, &mut report, warnings)?,
        Command::Verify(args) => cmd_verify(args, cli.seed, &mut report)?,
    };
    Ok((code, report))
}

/// Named results, printed as an aligned table or as a one-row CSV.
struct Report {
    csv: bool,
    fields: Vec<(String, String)>,
    notes: Vec<String>,
}

impl Report {
    fn new(csv: bool) -> Self {
        Self {
            csv,
            fields: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn num(&mut self, key: &str, x: f64) {
        self.text(key, format_sig(x));
    }

    fn int(&mut self, key: &str, x: impl ToString) {
        self.text(key, x.to_string());
    }

    fn text(&mut self, key: &str, value: impl Into<String>) {
        self.fields.push((key.to_string(), value.into()));
    }

    /// Table-mode extra line; omitted from CSV.
    fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    fn emit(&self, out: &mut dyn Write) -> Result<()> {
        let mut text = String::new();
        if self.csv {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(self.fields.iter().map(|(k, _)| k))?;
            w.write_record(self.fields.iter().map(|(_, v)| v))?;
            let bytes = w.into_inner().map_err(|e| Error::io("<stdout>", e.into_error()))?;
            text = String::from_utf8(bytes).expect("CSV of UTF-8 fields is UTF-8");
        } else {
            let width = self.fields.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
            for (k, v) in &self.fields {
                text.push_str(&format!("{k:<width$}  {v}\n"));
            }
            for line in &self.notes {
                text.push_str(line);
                text.push('\n');
            }
        }
        out.write_all(text.as_bytes()).map_err(|e| Error::io("<stdout>", e))
    }
}

/// Keeps the first `need` samples of `batch`.
fn take_samples(
    batch: SampleBatch,
    need: usize,
    n: u64,
    path: &Path,
    warnings: &mut Vec<String>,
) -> Result<SampleBatch> {
    let which = path.display().to_string();
    if batch.len() < need {
        return Err(Error::InsufficientSamples {
            which,
            required: need,
            n: n as usize,
            found: batch.len(),
        });
    }
    if batch.len() > need {
        warnings.push(format!(
            "{which} has {} samples; using the first 2n = {need}",
            batch.len()
        ));
        return Ok(batch.truncated(need));
    }
    Ok(batch)
}

pub fn cmd_test_verdict(args: &TestArgs, seed: u64, warnings: &mut Vec<String>) -> Result<Verdict> {
    let params = TestParams::new(args.plan.k, args.plan.epsilon, args.plan.delta)?;
    let plan = make_plan(params, args.n)?;
    let need = plan.samples_per_side();
    let p = take_samples(
        read_samples(&args.p_samples, params.k)?,
        need,
        plan.n,
        &args.p_samples,
        warnings,
    )?;
    let q = take_samples(
        read_samples(&args.q_samples, params.k)?,
        need,
        plan.n,
        &args.q_samples,
        warnings,
    )?;
    let mut rng = RngStream::new(seed, TEST_STREAM).generator();
    run_test(&plan, &p, &q, &mut rng)
}

fn cmd_test(args: &TestArgs, seed: u64, report: &mut Report, warnings: &mut Vec<String>) -> Result<i32> {
    let v = cmd_test_verdict(args, seed, warnings)?;
    report.text("decision", v.decision.as_str());
    report.num("z", v.z_value);
    report.num("threshold", v.threshold);
    report.int("n", v.plan.n);
    report.int("samples_per_side", v.plan.samples_per_side());
    report.num("delta_star", v.plan.delta_star);
    report.int("seed", seed);
    Ok(match v.decision {
        Decision::Equal => 0,
        Decision::Far => 1,
    })
}

fn required<T: Copy>(x: Option<T>, name: &str, law: &str) -> Result<T> {
    x.ok_or_else(|| Error::Domain(format!("--{law} needs --{name}")))
}

enum Law {
    Binomial { n: u64, p: f64, q: f64 },
    Poisson { mu: f64, lambda: f64 },
}

impl LawArgs {
    fn resolve(&self) -> Result<Law> {
        if self.binomial {
            Ok(Law::Binomial {
                n: required(self.n, "n", "binomial")?,
                p: required(self.p, "p", "binomial")?,
                q: required(self.q, "q", "binomial")?,
            })
        } else {
            Ok(Law::Poisson {
                mu: required(self.mu, "mu", "poisson")?,
                lambda: required(self.lambda, "lambda", "poisson")?,
            })
        }
    }
}

fn law_fields(report: &mut Report, law: &Law) {
    match *law {
        Law::Binomial { n, p, q } => {
            report.text("law", "binomial");
            report.int("n", n);
            report.num("p", p);
            report.num("q", q);
        }
        Law::Poisson { mu, lambda } => {
            report.text("law", "poisson");
            report.num("mu", mu);
            report.num("lambda", lambda);
        }
    }
}

fn cmd_gap(mode: &GapMode, report: &mut Report) -> Result<i32> {
    match mode {
        GapMode::BinomialExact { n, p, q } => {
            let law = Law::Binomial { n: *n, p: *p, q: *q };
            let gap = exact_gap_binomial(*n, *p, *q)?;
            law_fields(report, &law);
            report.num("gap", gap);
        }
        GapMode::PoissonExact { mu, lambda } => {
            let gap = exact_gap_poisson(*mu, *lambda)?;
            law_fields(
                report,
                &Law::Poisson {
                    mu: *mu,
                    lambda: *lambda,
                },
            );
            report.num("gap", gap);
        }
        GapMode::Zolotarev {
            law,
            tolerance,
            rule,
            fold_terms,
        } => {
            let config = QuadratureConfig {
                abs_tolerance: *tolerance,
                fold_terms: *fold_terms,
                panel_rule: match rule {
                    RuleArg::GaussKronrod => PanelRule::GaussKronrod,
                    RuleArg::Simpson => PanelRule::AdaptiveSimpson,
                },
                ..QuadratureConfig::default()
            };
            config.validate()?;
            let law = law.resolve()?;
            let gap = match law {
                Law::Binomial { n, p, q } => {
                    for (name, x) in [("p", p), ("q", q)] {
                        if !(0.0..=1.0).contains(&x) {
                            return Err(Error::Domain(format!("{name} = {x} not in [0, 1]")));
                        }
                    }
                    zolotarev_gap(|t| cf_binomial(n, p, t), |t| cf_binomial(n, q, t), &config)?
                }
                Law::Poisson { mu, lambda } => {
                    for (name, x) in [("mu", mu), ("lambda", lambda)] {
                        if !x.is_finite() || x < 0.0 {
                            return Err(Error::Domain(format!("{name} = {x} must be finite and >= 0")));
                        }
                    }
                    zolotarev_gap(|t| cf_poisson(mu, t), |t| cf_poisson(lambda, t), &config)?
                }
            };
            law_fields(report, &law);
            report.num("gap", gap);
        }
        GapMode::Bound { law } => {
            let law = law.resolve()?;
            let bound = match law {
                Law::Binomial { n, p, q } => lower_bound_binomial(n, p, q)?,
                Law::Poisson { mu, lambda } => lower_bound_poisson(mu, lambda)?,
            };
            law_fields(report, &law);
            report.num("bound", bound.value);
            report.text("regime", bound.regime.as_str());
            report.num("small_mass_term", bound.terms[0]);
            report.num("large_separation_term", bound.terms[1]);
            report.num("clt_term", bound.terms[2]);
        }
    }
    Ok(0)
}

fn cmd_samplesize(args: &PlanArgs, report: &mut Report) -> Result<i32> {
    let params = TestParams::new(args.k, args.epsilon, args.delta)?;
    let plan = make_plan(params, None)?;
    let terms = complexity_terms(&params);
    report.int("k", params.k);
    report.num("epsilon", params.epsilon);
    report.num("delta", params.delta);
    report.int("n", plan.n);
    report.int("samples_per_side", plan.samples_per_side());
    report.num("delta_star", plan.delta_star);
    report.num("threshold", plan.threshold);
    report.text(
        "active_floor_term",
        delta_star_branch(plan.n, plan.effective_k, params.epsilon).as_str(),
    );
    report.num("log_term", terms.log);
    report.num("k_two_thirds_term", terms.k_two_thirds);
    report.num("k_half_term", terms.k_half);
    report.text("dominant", terms.dominant.as_str());
    Ok(0)
}

fn cmd_simulate(args: &SimulateArgs, seed: u64, report: &mut Report, warnings: &mut Vec<String>) -> Result<i32> {
    let params = TestParams::new(args.plan.k, args.plan.epsilon, args.plan.delta)?;
    let plan = make_plan(params, args.n)?;
    let p = match &args.p_dist {
        Some(path) => read_distribution(path)?,
        None => DiscreteDistribution::uniform(params.k)?,
    };
    let q = if args.null {
        if args.q_dist.is_some() {
            warnings.push("--q-dist is ignored under --null".into());
        }
        p.clone()
    } else {
        match &args.q_dist {
            Some(path) => read_distribution(path)?,
            None if args.p_dist.is_none() => DiscreteDistribution::paired_perturbation(params.k, args.tv)?,
            None => return Err(Error::Domain("--far with --p-dist also needs --q-dist".into())),
        }
    };
    let tv = tv_distance(&p, &q)?;
    if args.far && tv < params.epsilon - 1e-12 {
        return Err(Error::Domain(format!(
            "--far needs TV(p, q) >= epsilon, got TV = {} < {}",
            format_sig(tv),
            format_sig(params.epsilon)
        )));
    }
    let spec = ExperimentSpec::new(p, q, plan, args.trials, seed)?;
    let result = run_experiment(&spec)?;
    let (label, errors) = if args.null {
        ("far", result.far_count)
    } else {
        ("equal", result.equal_count())
    };
    let check = RateTest::new(errors, result.trials, params.delta, RATE_TEST_ALPHA)?;

    report.text("hypothesis", if args.null { "null" } else { "far" });
    report.num("tv", tv);
    report.int("k", params.k);
    report.int("n", plan.n);
    report.num("threshold", plan.threshold);
    report.int("trials", result.trials);
    report.int("seed", seed);
    report.int("far_count", result.far_count);
    report.num("far_rate", result.far_rate);
    report.num("z_mean", result.z_mean);
    report.num("z_stddev", result.z_stddev);
    report.text("error_verdict", label);
    report.int("error_count", errors);
    report.num("error_p_value", check.p_value);
    report.text("check", if check.passes() { "pass" } else { "fail" });
    if args.profile {
        let profile = concentration_profile(&spec, 20)?;
        report.num("tail_rate", profile.tail_rate);
        report.num("concentration_bound", profile.bound);
        report.text(
            "concentration_check",
            if profile.within_bound() { "pass" } else { "fail" },
        );
    }
    report.note(format!("wall time {:.3} s", result.wall_time.as_secs_f64()));

    if let Some(path) = &args.out {
        let records = result.records.as_deref().unwrap_or_default();
        write_file(path, |w| write_trials(w, records))?;
    }
    Ok(if check.passes() { 0 } else { 1 })
}

fn cmd_verify(args: &VerifyArgs, seed: u64, report: &mut Report) -> Result<i32> {
    let families = if args.all || args.family.is_empty() {
        GridFamily::ALL.to_vec()
    } else {
        args.family.clone()
    };
    let config = GridConfig {
        families,
        seed,
        ..GridConfig::default()
    };
    let grid = verify_grids(&config);
    let mut families = config.families.clone();
    families.sort();
    families.dedup();
    for f in &families {
        let (rows, bad) = grid.family_counts(*f);
        report.text(f.as_str(), format!("{rows} rows, {bad} violations"));
    }
    report.int("rows", grid.rows.len());
    report.int("violations", grid.violation_count());
    for v in grid.violations().take(args.show) {
        let coords: Vec<String> = [
            ("n", v.n.map(|x| x.to_string())),
            ("k", v.k.map(|x| x.to_string())),
            ("p", v.p.map(format_sig)),
            ("q", v.q.map(format_sig)),
            ("mu", v.mu.map(format_sig)),
            ("lambda", v.lambda.map(format_sig)),
            ("t", v.t.map(format_sig)),
            ("epsilon", v.epsilon.map(format_sig)),
        ]
        .into_iter()
        .filter_map(|(name, x)| x.map(|x| format!("{name}={x}")))
        .collect();
        report.note(format!(
            "violation {} #{}: {} value={} bound={} margin={}",
            v.family,
            v.index,
            coords.join(" "),
            format_sig(v.value),
            format_sig(v.bound),
            format_sig(v.margin)
        ));
    }
    report.note(format!("{} violations", grid.violation_count()));
    if let Some(path) = &args.out {
        write_file(path, |w| write_grid(w, &grid.rows))?;
    }
    Ok(if grid.violation_count() == 0 { 0 } else { 1 })
}

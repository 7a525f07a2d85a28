//! Argument parsing and command execution for the `mimo-dof` binary.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mimo_dof_core::rates::IaParams;
use mimo_dof_core::sim::db_to_linear;
use mimo_dof_core::slope::verify_coordinates;
use mimo_dof_core::{
    bc_csit_region, bc_region, fit_slope, ic_classify, ic_csit_region, BcConfig, DofRegion,
    Halfspace, IcConfig, RateTrace, SchemeSpec, SlopeEstimate, SnrGrid, Topology, Verdict,
};
use serde_json::{json, Value};

use crate::json::{
    to_pretty, ClassificationJson, ComparisonJson, ConfigJson, RegionJson, RegionOutput,
    VerdictReport,
};
use crate::parallel::{simulate_parallel, with_thread_pool};
use crate::trace_csv::write_trace;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_OUTSIDE: i32 = 2;
pub const EXIT_INVALID: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "mimo-dof", version, about = "DoF regions of 2-user MIMO channels without CSIT")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the DoF region of a configuration.
    Region(RegionArgs),
    /// Classify an interference channel and print all its regions.
    Classify(ChannelArgs),
    /// Run a Monte Carlo rate simulation and fit DoF slopes.
    Simulate(SimulateArgs),
    /// Simulate and check the fitted DoF against a region.
    Verify(SimulateArgs),
    /// Compare the regions with and without CSIT.
    Compare(ChannelArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Channel {
    Bc,
    Ic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum YesNo {
    Yes,
    No,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeKind {
    P2p,
    Tdm,
    Zf,
    Ia,
    IsotropicBc,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Against {
    Inner,
    Outer,
    Exact,
}

impl Against {
    fn as_str(&self) -> &'static str {
        match self {
            Against::Inner => "inner",
            Against::Outer => "outer",
            Against::Exact => "exact",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct ChannelArgs {
    #[arg(long, value_enum)]
    pub channel: Channel,
    /// Antenna counts: M,N1,N2 for bc or M1,M2,N1,N2 for ic.
    #[arg(long, value_delimiter = ',', required = true)]
    pub antennas: Vec<u32>,
    /// Output path (default stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct RegionArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum, default_value = "no")]
    pub csit: YesNo,
}

/// SNR grid `start:stop:step` in dB, both ends included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

fn parse_grid(s: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, step] = parts[..] else {
        return Err("expected start:stop:step".into());
    };
    let num = |v: &str| v.trim().parse::<f64>().map_err(|e| format!("{v:?}: {e}"));
    let grid = GridSpec {
        start: num(start)?,
        stop: num(stop)?,
        step: num(step)?,
    };
    SnrGrid::range(grid.start, grid.stop, grid.step).map_err(|e| e.to_string())?;
    Ok(grid)
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub channel: ChannelArgs,
    #[arg(long, value_enum)]
    pub scheme: SchemeKind,
    /// Time fraction of user 1 (tdm default 0.5; isotropic-bc runs single-user corners when absent).
    #[arg(long)]
    pub tau: Option<f64>,
    /// User 2 transmits at P^e in tdm and isotropic-bc.
    #[arg(long, default_value_t = 1.0)]
    pub user2_exponent: f64,
    /// Zero-forcing streams s1,s2.
    #[arg(long, value_delimiter = ',', default_value = "1,1")]
    pub streams: Vec<u32>,
    /// Interference-alignment beams of transmitter 2 (default M2).
    #[arg(long)]
    pub beams: Option<u32>,
    /// Interference-alignment power exponent of transmitter 2.
    #[arg(long, default_value_t = 0.5)]
    pub power_exponent: f64,
    #[arg(long, value_parser = parse_grid, default_value = "30:70:10")]
    pub snr_db: GridSpec,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of top SNR points used by the slope fit.
    #[arg(long, default_value_t = mimo_dof_core::slope::DEFAULT_WINDOW)]
    pub window: usize,
    /// Verdict tolerance in DoF.
    #[arg(long, default_value_t = mimo_dof_core::slope::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    /// Also write the estimate JSON here.
    #[arg(long)]
    pub estimate_out: Option<PathBuf>,
    /// Region to verify against (`verify` defaults to outer).
    #[arg(long, value_enum)]
    pub verify_against: Option<Against>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Invalid(_) => EXIT_INVALID,
            CliError::Io { .. } => EXIT_IO,
        }
    }
}

fn invalid(e: impl std::fmt::Display) -> CliError {
    CliError::Invalid(e.to_string())
}

/// Result of a command before anything is written.
#[derive(Debug, Clone, PartialEq)]
pub struct Rendered {
    /// Main document, for `--out` or stdout.
    pub primary: String,
    /// Estimate document for `--estimate-out` (or stderr in CSV mode).
    pub estimate: Option<String>,
    pub exit_code: i32,
}

impl Rendered {
    fn document(primary: String) -> Self {
        Self {
            primary,
            estimate: None,
            exit_code: EXIT_OK,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Config {
    Bc(BcConfig),
    Ic(IcConfig),
}

impl Config {
    fn parse(args: &ChannelArgs) -> Result<Self, CliError> {
        let a = &args.antennas;
        match (args.channel, a.len()) {
            (Channel::Bc, 3) => BcConfig::new(a[0], a[1], a[2]).map(Config::Bc).map_err(invalid),
            (Channel::Ic, 4) => IcConfig::new(a[0], a[1], a[2], a[3]).map(Config::Ic).map_err(invalid),
            (Channel::Bc, n) => Err(CliError::Invalid(format!("bc needs 3 antenna counts M,N1,N2, got {n}"))),
            (Channel::Ic, n) => Err(CliError::Invalid(format!("ic needs 4 antenna counts M1,M2,N1,N2, got {n}"))),
        }
    }

    fn json(&self) -> ConfigJson {
        match self {
            Config::Bc(c) => ConfigJson {
                channel: "bc".into(),
                antennas: vec![c.tx(), c.rx1(), c.rx2()],
            },
            Config::Ic(c) => ConfigJson {
                channel: "ic".into(),
                antennas: c.as_array().to_vec(),
            },
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code; `--help` and `--version` exit 0 and
/// parse errors exit [`EXIT_INVALID`].
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("mimo-dof: {e}");
            e.exit_code()
        }
    }
}

/// Runs a parsed command, writing its outputs.
pub fn execute(cli: &Cli) -> Result<i32, CliError> {
    let rendered = render(cli)?;
    let (out, estimate_out, format) = match &cli.command {
        Command::Region(a) => (&a.channel.out, &None, Format::Json),
        Command::Classify(a) | Command::Compare(a) => (&a.out, &None, Format::Json),
        Command::Simulate(a) => (&a.channel.out, &a.estimate_out, a.format),
        Command::Verify(a) => (&a.channel.out, &None, Format::Json),
    };
    write_output(out.as_deref(), &rendered.primary)?;
    if let Some(estimate) = &rendered.estimate {
        match estimate_out {
            Some(path) => write_output(Some(path), estimate)?,
            None if format == Format::Csv => eprint!("{estimate}"),
            None => {}
        }
    }
    Ok(rendered.exit_code)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

/// Runs a parsed command without writing anything.
pub fn render(cli: &Cli) -> Result<Rendered, CliError> {
    match &cli.command {
        Command::Region(a) => cmd_region(a).map(Rendered::document),
        Command::Classify(a) => cmd_classify(a).map(Rendered::document),
        Command::Compare(a) => cmd_compare(a).map(Rendered::document),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Verify(a) => cmd_verify(a),
    }
}

pub fn cmd_region(args: &RegionArgs) -> Result<String, CliError> {
    let csit = args.csit == YesNo::Yes;
    let output = match Config::parse(&args.channel)? {
        Config::Bc(c) if csit => RegionOutput::Single(RegionJson::from_region(&bc_csit_region(&c))),
        Config::Bc(c) => RegionOutput::Single(RegionJson::from_region(&bc_region(&c))),
        Config::Ic(c) if csit => RegionOutput::Single(RegionJson::from_region(&ic_csit_region(&c))),
        Config::Ic(c) => {
            let r = ic_classify(&c);
            match &r.no_csit {
                Some(exact) => RegionOutput::Single(RegionJson::from_region(exact)),
                None => RegionOutput::Bounds {
                    inner: RegionJson::from_region(&r.inner),
                    outer: RegionJson::from_region(&r.outer),
                    csit: RegionJson::from_region(&r.csit),
                },
            }
        }
    };
    Ok(to_pretty(&output))
}

pub fn cmd_classify(args: &ChannelArgs) -> Result<String, CliError> {
    let config = Config::parse(args)?;
    let Config::Ic(c) = config else {
        return Err(CliError::Invalid("classify applies to interference channels".into()));
    };
    Ok(to_pretty(&ClassificationJson::new(config.json(), &ic_classify(&c))))
}

pub fn cmd_compare(args: &ChannelArgs) -> Result<String, CliError> {
    let config = Config::parse(args)?;
    let doc = match config {
        Config::Bc(c) => {
            let exact = bc_region(&c);
            ComparisonJson::new(config.json(), Some(&exact), &exact, &exact, &bc_csit_region(&c))
        }
        Config::Ic(c) => {
            let r = ic_classify(&c);
            ComparisonJson::new(config.json(), r.no_csit.as_ref(), &r.inner, &r.outer, &r.csit)
        }
    };
    Ok(to_pretty(&doc))
}

/// Regions a simulated scheme can be checked against.
struct Targets {
    exact: Option<DofRegion>,
    inner: DofRegion,
    outer: DofRegion,
}

impl Targets {
    fn of(config: Config) -> Self {
        match config {
            Config::Bc(c) => {
                let r = bc_region(&c);
                Targets {
                    exact: Some(r.clone()),
                    inner: r.clone(),
                    outer: r,
                }
            }
            Config::Ic(c) => {
                let r = ic_classify(&c);
                Targets {
                    exact: r.no_csit,
                    inner: r.inner,
                    outer: r.outer,
                }
            }
        }
    }

    fn single(region: DofRegion) -> Self {
        Targets {
            exact: Some(region.clone()),
            inner: region.clone(),
            outer: region,
        }
    }

    fn select(&self, against: Against) -> Result<&DofRegion, CliError> {
        match against {
            Against::Inner => Ok(&self.inner),
            Against::Outer => Ok(&self.outer),
            Against::Exact => self
                .exact
                .as_ref()
                .ok_or_else(|| CliError::Invalid("the exact region of this configuration is not known".into())),
        }
    }
}

/// How fitted slopes map to DoF points.
#[derive(Debug, Clone, Copy, PartialEq)]
enum PointMode {
    /// `(d1, d2)` is one achievable pair.
    Joint,
    /// Each user was simulated alone: the pairs are `(d1, 0)` and `(0, d2)`.
    Corners { rx: [u32; 2] },
}

struct Plan {
    config: Config,
    spec: SchemeSpec,
    scheme: Value,
    targets: Targets,
    mode: PointMode,
}

fn plan(args: &SimulateArgs) -> Result<Plan, CliError> {
    let config = Config::parse(&args.channel)?;
    let wrong_channel = |name: &str, needed: &str| {
        Err(CliError::Invalid(format!("scheme {name} needs --channel {needed}")))
    };
    let (spec, scheme, targets, mode) = match (args.scheme, config) {
        (SchemeKind::P2p, c) => {
            let (rx, tx) = match c {
                Config::Bc(c) => (c.rx1(), c.tx()),
                Config::Ic(c) => (c.rx1(), c.tx1()),
            };
            let region = DofRegion::from_halfspaces(vec![
                Halfspace::d1_at_most(rx.min(tx)),
                Halfspace::d2_at_most(0),
            ])
            .map_err(invalid)?
            .with_tag("point-to-point");
            (
                SchemeSpec::PointToPoint { rx, tx },
                json!({"name": "p2p", "rx": rx, "tx": tx}),
                Targets::single(region),
                PointMode::Joint,
            )
        }
        (SchemeKind::Tdm, c) => {
            let tau = args.tau.unwrap_or(0.5);
            let topology = match c {
                Config::Bc(c) => Topology::Bc(c),
                Config::Ic(c) => Topology::Ic(c),
            };
            (
                SchemeSpec::TimeDivision {
                    topology,
                    tau,
                    user2_power_exponent: args.user2_exponent,
                },
                json!({"name": "tdm", "tau": tau, "user2_exponent": args.user2_exponent}),
                Targets::of(c),
                PointMode::Joint,
            )
        }
        (SchemeKind::Zf, Config::Ic(c)) => {
            let [s1, s2] = args.streams[..] else {
                return Err(CliError::Invalid("--streams needs two counts s1,s2".into()));
            };
            (
                SchemeSpec::ReceiverZf {
                    config: c,
                    streams1: s1,
                    streams2: s2,
                },
                json!({"name": "zf", "streams": [s1, s2]}),
                Targets::of(config),
                PointMode::Joint,
            )
        }
        (SchemeKind::Ia, Config::Ic(c)) => {
            let params = IaParams {
                beams: args.beams.unwrap_or(IaParams::standard(&c).beams),
                exponent: args.power_exponent,
            };
            (
                SchemeSpec::IaPowerScaling { config: c, params },
                json!({"name": "ia", "beams": params.beams, "power_exponent": params.exponent}),
                Targets::of(config),
                PointMode::Joint,
            )
        }
        (SchemeKind::IsotropicBc, Config::Bc(c)) => {
            let topology = Topology::IsotropicBc(c);
            let (spec, mode) = match args.tau {
                Some(tau) => (
                    SchemeSpec::TimeDivision {
                        topology,
                        tau,
                        user2_power_exponent: args.user2_exponent,
                    },
                    PointMode::Joint,
                ),
                None => (
                    SchemeSpec::SoloLinks {
                        topology,
                        user2_power_exponent: args.user2_exponent,
                    },
                    PointMode::Corners {
                        rx: [c.rx1(), c.rx2()],
                    },
                ),
            };
            let scheme = json!({
                "name": "isotropic-bc",
                "mode": if args.tau.is_some() { "time-shared" } else { "single-user" },
                "tau": args.tau,
                "user2_exponent": args.user2_exponent,
            });
            (spec, scheme, Targets::of(config), mode)
        }
        (SchemeKind::Zf, _) => return wrong_channel("zf", "ic"),
        (SchemeKind::Ia, _) => return wrong_channel("ia", "ic"),
        (SchemeKind::IsotropicBc, _) => return wrong_channel("isotropic-bc", "bc"),
    };
    spec.validate().map_err(invalid)?;
    Ok(Plan {
        config,
        spec,
        scheme,
        targets,
        mode,
    })
}

struct SimRun {
    plan: Plan,
    trace: RateTrace,
    estimate: SlopeEstimate,
}

fn run_simulation(args: &SimulateArgs) -> Result<SimRun, CliError> {
    let plan = plan(args)?;
    let g = args.snr_db;
    let grid = SnrGrid::range(g.start, g.stop, g.step).map_err(invalid)?;
    let trace = with_thread_pool(|| simulate_parallel(&plan.spec, &grid, args.trials, args.seed)).map_err(invalid)?;
    let estimate = fit_slope(&trace, args.window).map_err(invalid)?;
    Ok(SimRun { plan, trace, estimate })
}

fn points(run: &SimRun) -> Vec<(&'static str, (f64, f64))> {
    let (d1, d2) = run.estimate.point();
    match run.plan.mode {
        PointMode::Joint => vec![("joint", (d1, d2))],
        PointMode::Corners { .. } => vec![("user1", (d1, 0.0)), ("user2", (0.0, d2))],
    }
}

/// Worst verdict over the scheme's DoF points.
fn check(run: &SimRun, region: &DofRegion, tol: f64) -> (Verdict, Vec<Value>) {
    let mut worst = Verdict::Inside;
    let mut details = Vec::new();
    for (label, p) in points(run) {
        let v = verify_coordinates(p, region, tol);
        worst = match (worst, v) {
            (Verdict::Outside, _) | (_, Verdict::Outside) => Verdict::Outside,
            (Verdict::Boundary, _) | (_, Verdict::Boundary) => Verdict::Boundary,
            _ => Verdict::Inside,
        };
        details.push(json!({"label": label, "point": [p.0, p.1], "verdict": v.as_str()}));
    }
    (worst, details)
}

/// Monte Carlo rate minus `n log2(1 + P)` per SNR point for each user.
fn capacity_gap(trace: &RateTrace, rx: [u32; 2]) -> Vec<Value> {
    trace
        .snr_db
        .iter()
        .enumerate()
        .map(|(k, &db)| {
            let reference = (1.0 + db_to_linear(db)).log2();
            json!({
                "snr_db": db,
                "user1": trace.rate1[k] - f64::from(rx[0]) * reference,
                "user2": trace.rate2[k] - f64::from(rx[1]) * reference,
            })
        })
        .collect()
}

fn estimate_json(e: &SlopeEstimate) -> Value {
    json!({
        "d1": e.d1,
        "d2": e.d2,
        "ci": e.ci,
        "snr_window": [e.snr_window.0, e.snr_window.1],
    })
}

fn region_tag(region: &DofRegion) -> String {
    region.tag().unwrap_or_default().to_string()
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<Rendered, CliError> {
    let run = run_simulation(args)?;
    let g = args.snr_db;
    let mut doc = json!({
        "command": "simulate",
        "config": run.plan.config.json(),
        "scheme": run.plan.scheme,
        "snr_db": {"start": g.start, "stop": g.stop, "step": g.step},
        "trials": args.trials,
        "seed": args.seed,
        "window": args.window,
        "tol": args.tol,
        "estimate": estimate_json(&run.estimate),
    });
    if let PointMode::Corners { rx } = run.plan.mode {
        doc["capacity_gap"] = Value::Array(capacity_gap(&run.trace, rx));
    }
    let mut exit_code = EXIT_OK;
    if let Some(against) = args.verify_against {
        let region = run.plan.targets.select(against)?;
        let (verdict, details) = check(&run, region, args.tol);
        if verdict == Verdict::Outside {
            exit_code = EXIT_OUTSIDE;
        }
        doc["verification"] = json!({
            "against": against.as_str(),
            "region_tag": region_tag(region),
            "verdict": verdict.as_str(),
            "points": details,
        });
    }
    let estimate = to_pretty(&doc);
    let primary = match args.format {
        Format::Json => {
            doc["trace"] = json!({
                "snr_db": run.trace.snr_db,
                "rate1": run.trace.rate1,
                "stderr1": run.trace.stderr1,
                "rate2": run.trace.rate2,
                "stderr2": run.trace.stderr2,
            });
            to_pretty(&doc)
        }
        Format::Csv => {
            let mut buf = Vec::new();
            write_trace(&run.trace, &mut buf).map_err(invalid)?;
            String::from_utf8(buf).expect("CSV output is ASCII")
        }
    };
    Ok(Rendered {
        primary,
        estimate: Some(estimate),
        exit_code,
    })
}

pub fn cmd_verify(args: &SimulateArgs) -> Result<Rendered, CliError> {
    let run = run_simulation(args)?;
    let against = args.verify_against.unwrap_or(Against::Outer);
    let region = run.plan.targets.select(against)?;
    let (verdict, _) = check(&run, region, args.tol);
    let report = VerdictReport {
        config: run.plan.config.json(),
        scheme: run.plan.scheme.clone(),
        estimate: [run.estimate.d1, run.estimate.d2],
        ci: run.estimate.ci,
        region_tag: region_tag(region),
        verdict: verdict.as_str().to_string(),
    };
    Ok(Rendered {
        primary: to_pretty(&report),
        estimate: None,
        exit_code: if verdict == Verdict::Outside { EXIT_OUTSIDE } else { EXIT_OK },
    })
}

//! Command-line front end.
//!
//! Each subcommand writes one data file (CSV with a `#` units line, or
//! JSON matching a schema in `schemas/`) and prints a one-line summary.
//! Exit codes: 0 success, 1 computation error or failed check, 2 usage
//! error. `NONCLASSICALITY_THREADS` caps the worker pool.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Display;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::Error;
use crate::gaussian::{
    dynamics_csv, optomech_dynamics, sweep_steady_state, DynamicsConfig, DynamicsSeries,
    OptomechParams, SweepGrid, SweepTable, FIG4_POWERS_MW,
};
use crate::measures::discord_deficit;
use crate::protocol::{
    instrumental_state, load_scenario, run_detection, scenario_counterexample,
    scenario_gain_example, sec_detection, theorem_property_suite, DetectionConfig,
    DetectionReport, SuiteConfig,
};

pub const THREADS_ENV: &str = "NONCLASSICALITY_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "nonclassicality",
    version,
    about = "Entanglement-gain witnesses of mediator nonclassicality"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Output file; standard output when absent.
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Seed for every randomized optimizer and generator.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Configuration override, e.g. `ree.restarts=32` or `finesse_a=2e4`.
    #[arg(long = "override", global = true, value_name = "KEY=VALUE")]
    pub overrides: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entanglement gain from a discordant mediator (sigma_x sigma_x couplings).
    GainExample,
    /// Gain without mediator discord from initially correlated probes.
    Counterexample,
    /// Full protocol with the entanglement-breaking measurement on A.
    Detect(ScenarioArgs),
    /// Protocol without the breaking measurement.
    SecDetect(ScenarioArgs),
    /// Randomized checks on classical-mediator dynamics.
    TheoremSuite {
        #[arg(long, default_value_t = 50)]
        trials: usize,
        /// Sample times per trial, including t = 0.
        #[arg(long, default_value_t = 4)]
        samples: usize,
    },
    /// Covariance-matrix dynamics for one parameter set.
    OptomechDynamics(OptomechArgs),
    /// Steady-state entanglement over a (P_b, Delta_b) grid.
    OptomechSweep(SweepArgs),
    /// Time series for the preset membrane setup.
    Fig4 {
        /// Cavity-b drive power in mW; repeatable, all four preset values by default.
        #[arg(long = "pb-mw")]
        pb_mw: Vec<f64>,
    },
    /// The 40 x 40 steady-state grid for the preset membrane setup.
    Fig5,
}

#[derive(Debug, Args)]
pub struct ScenarioArgs {
    /// Scenario JSON file.
    #[arg(long, value_name = "PATH")]
    pub scenario: PathBuf,
}

#[derive(Debug, Args)]
pub struct OptomechArgs {
    /// Parameter JSON file; the preset setup when absent.
    #[arg(long, value_name = "PATH")]
    pub params: Option<PathBuf>,
    #[arg(long = "pb-mw")]
    pub pb_mw: Option<f64>,
    #[arg(long = "delta-b-omega-c", allow_hyphen_values = true)]
    pub delta_b_omega_c: Option<f64>,
    #[arg(long = "t-max-omega-c")]
    pub t_max_omega_c: Option<f64>,
    #[arg(long = "dt-omega-c")]
    pub dt_omega_c: Option<f64>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Parameter JSON file; the preset setup when absent.
    #[arg(long, value_name = "PATH")]
    pub params: Option<PathBuf>,
    #[arg(long = "pb-min-mw", default_value_t = 2.5)]
    pub pb_min_mw: f64,
    #[arg(long = "pb-max-mw", default_value_t = 100.0)]
    pub pb_max_mw: f64,
    #[arg(long = "pb-steps", default_value_t = 40)]
    pub pb_steps: usize,
    #[arg(long = "delta-b-min-omega-c", default_value_t = -2.0, allow_hyphen_values = true)]
    pub delta_b_min_omega_c: f64,
    #[arg(long = "delta-b-max-omega-c", default_value_t = 2.0, allow_hyphen_values = true)]
    pub delta_b_max_omega_c: f64,
    #[arg(long = "delta-b-steps", default_value_t = 40)]
    pub delta_b_steps: usize,
}

/// Why a command did not succeed.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Compute(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Compute(_) => 1,
        }
    }
}

impl Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Compute(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Compute(e.to_string())
    }
}

/// Result of a command: the data file, a summary line and whether every
/// check passed.
pub struct Outcome {
    pub data: String,
    pub summary: String,
    pub ok: bool,
}

struct Overrides(BTreeMap<String, String>);

impl Overrides {
    fn parse(raw: &[String]) -> Result<Self, Failure> {
        let mut map = BTreeMap::new();
        for item in raw {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Failure::Usage(format!("override `{item}` is not KEY=VALUE")))?;
            map.insert(k.trim().to_string(), v.trim().to_string());
        }
        Ok(Self(map))
    }

    fn take<T: FromStr>(&mut self, key: &str) -> Result<Option<T>, Failure> {
        match self.0.remove(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Failure::Usage(format!("cannot parse override {key}={v}"))),
        }
    }

    fn apply<T: FromStr>(&mut self, key: &str, slot: &mut T) -> Result<(), Failure> {
        if let Some(v) = self.take(key)? {
            *slot = v;
        }
        Ok(())
    }

    fn apply_detection(&mut self, cfg: &mut DetectionConfig) -> Result<(), Failure> {
        self.apply("ree.restarts", &mut cfg.ree.restarts)?;
        self.apply("ree.max_iters", &mut cfg.ree.max_iters)?;
        self.apply("ree.seed", &mut cfg.ree.seed)?;
        if let Some(c) = self.take("ree.components")? {
            cfg.ree.components = Some(c);
        }
        self.apply("discord.grid", &mut cfg.discord.grid)?;
        self.apply("discord.restarts", &mut cfg.discord.restarts)?;
        self.apply("discord.max_evals", &mut cfg.discord.max_evals)?;
        self.apply("discord.seed", &mut cfg.discord.seed)?;
        if let Some(dt) = self.take("max_dt")? {
            cfg.max_dt = Some(dt);
        }
        Ok(())
    }

    fn apply_params(&mut self, p: &mut OptomechParams) -> Result<(), Failure> {
        for (k, v) in std::mem::take(&mut self.0) {
            let value: f64 = v
                .parse()
                .map_err(|_| Failure::Usage(format!("cannot parse override {k}={v}")))?;
            p.set(&k, value).map_err(|e| Failure::Usage(e.to_string()))?;
        }
        Ok(())
    }

    fn finish(self) -> Result<(), Failure> {
        match self.0.keys().next() {
            None => Ok(()),
            Some(k) => Err(Failure::Usage(format!("unknown override key `{k}`"))),
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    serde_json::to_string_pretty(value)
        .map(|s| s + "\n")
        .map_err(|e| Failure::Compute(e.to_string()))
}

fn detection_config(common: &CommonArgs, ov: &mut Overrides) -> Result<DetectionConfig, Failure> {
    let mut cfg = DetectionConfig::default();
    if let Some(seed) = common.seed {
        cfg.ree.seed = seed;
        cfg.discord.seed = seed;
    }
    ov.apply_detection(&mut cfg)?;
    Ok(cfg)
}

fn detection_outcome(
    report: &DetectionReport,
    format: Format,
    extra: String,
) -> Result<Outcome, Failure> {
    let data = match format {
        Format::Csv => report.to_csv(),
        Format::Json => to_json(report)?,
    };
    let summary = format!(
        "{}: verdict={} gain={:.6} max_discord={:.3e} converged={}{extra}",
        report.scenario, report.verdict, report.gain, report.max_discord, report.converged
    );
    Ok(Outcome {
        data,
        summary,
        ok: report.converged,
    })
}

fn load_params(path: Option<&Path>) -> Result<OptomechParams, Failure> {
    match path {
        None => Ok(OptomechParams::fig4(40.0)),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))
        }
    }
}

fn dynamics_config(ov: &mut Overrides) -> Result<DynamicsConfig, Failure> {
    let mut cfg = DynamicsConfig::default();
    ov.apply("dt_omega_c", &mut cfg.dt_omega_c)?;
    ov.apply("t_max_omega_c", &mut cfg.t_max_omega_c)?;
    ov.apply("sample_every", &mut cfg.sample_every)?;
    ov.apply("settle_tol", &mut cfg.settle_tol)?;
    ov.apply("growth_cap", &mut cfg.growth_cap)?;
    Ok(cfg)
}

fn series_summary(s: &DynamicsSeries) -> String {
    match s.steady {
        Some(st) => format!(
            "P_b={}mW stable E_ab={:.6} E_abc={:.6} stop={:?}",
            s.power_b_mw, st.e_ab, st.e_abc, s.stop_reason
        ),
        None => format!(
            "P_b={}mW unstable max_re={:.3e} stop={:?}",
            s.power_b_mw, s.max_real_eigenvalue, s.stop_reason
        ),
    }
}

fn dynamics_outcome(series: Vec<DynamicsSeries>, format: Format) -> Result<Outcome, Failure> {
    let data = match format {
        Format::Csv => dynamics_csv(&series),
        Format::Json => to_json(&series)?,
    };
    let summary = series.iter().map(series_summary).collect::<Vec<_>>().join("; ");
    let ok = series.iter().all(|s| s.all_physical());
    Ok(Outcome { data, summary, ok })
}

fn sweep_outcome(table: &SweepTable, format: Format) -> Result<Outcome, Failure> {
    let data = match format {
        Format::Csv => table.to_csv(),
        Format::Json => to_json(table)?,
    };
    let summary = format!(
        "sweep: points={} unstable={} unstable_regions={} max_E_ab={:.6} max_E_abc={:.3e}",
        table.points.len(),
        table.unstable_count(),
        table.unstable_components(),
        table.max_e_ab(),
        table.max_e_abc()
    );
    Ok(Outcome {
        data,
        summary,
        ok: true,
    })
}

fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64)
            .collect(),
    }
}

/// Runs a parsed command without touching the filesystem for output.
pub fn execute(cli: &Cli) -> Result<Outcome, Failure> {
    let common = &cli.common;
    let format = common.format;
    let mut ov = Overrides::parse(&common.overrides)?;
    let outcome = match &cli.command {
        Command::GainExample => {
            let cfg = detection_config(common, &mut ov)?;
            let s = scenario_gain_example();
            let report = sec_detection(&s, &cfg)?;
            let t_end = *s.sample_times.last().expect("non-empty");
            let d_prime = discord_deficit(&instrumental_state(&s, t_end)?, "C", &cfg.discord)?;
            let last = report.e_abc.last().expect("non-empty");
            let extra = format!(
                " E_A:BC(end)=[{:.4},{:.4}] instrumental_discord={:.6}",
                last.lower, last.upper, d_prime.value
            );
            detection_outcome(&report, format, extra)?
        }
        Command::Counterexample => {
            let cfg = detection_config(common, &mut ov)?;
            let report = sec_detection(&scenario_counterexample(), &cfg)?;
            detection_outcome(&report, format, String::new())?
        }
        Command::Detect(a) | Command::SecDetect(a) => {
            let cfg = detection_config(common, &mut ov)?;
            let s = load_scenario(&a.scenario)
                .map_err(|e| Failure::Usage(format!("{}: {e}", a.scenario.display())))?;
            let report = match cli.command {
                Command::Detect(_) => run_detection(&s, &cfg)?,
                _ => sec_detection(&s, &cfg)?,
            };
            detection_outcome(&report, format, String::new())?
        }
        Command::TheoremSuite { trials, samples } => {
            let mut cfg = SuiteConfig {
                trials: *trials,
                samples: *samples,
                ..SuiteConfig::default()
            };
            if let Some(seed) = common.seed {
                cfg.seed = seed;
            }
            cfg.detection = detection_config(common, &mut ov)?;
            if *trials == 0 || *samples < 2 {
                return Err(Failure::Usage("need --trials >= 1 and --samples >= 2".into()));
            }
            let report = theorem_property_suite(&cfg)?;
            let data = match format {
                Format::Csv => report.to_csv(),
                Format::Json => to_json(&report)?,
            };
            let summary = format!(
                "theorem-suite: trials={} seed={} violating={} {}",
                report.trials,
                report.seed,
                report.violating_trials,
                if report.passed { "PASS" } else { "FAIL" }
            );
            Outcome {
                data,
                summary,
                ok: report.passed,
            }
        }
        Command::OptomechDynamics(a) => {
            let mut cfg = dynamics_config(&mut ov)?;
            if let Some(dt) = a.dt_omega_c {
                cfg.dt_omega_c = dt;
            }
            if let Some(t) = a.t_max_omega_c {
                cfg.t_max_omega_c = t;
            }
            let mut p = load_params(a.params.as_deref())?;
            if let Some(pb) = a.pb_mw {
                p.power_b_mw = pb;
            }
            if let Some(db) = a.delta_b_omega_c {
                p.detuning_b_rad_per_s = db * p.omega_c_rad_per_s;
            }
            ov.apply_params(&mut p)?;
            dynamics_outcome(vec![optomech_dynamics(&p, &cfg)?], format)?
        }
        Command::Fig4 { pb_mw } => {
            let cfg = dynamics_config(&mut ov)?;
            let powers = if pb_mw.is_empty() { FIG4_POWERS_MW.to_vec() } else { pb_mw.clone() };
            let mut base = OptomechParams::fig4(0.0);
            ov.apply_params(&mut base)?;
            let series = powers
                .iter()
                .map(|&pb| optomech_dynamics(&OptomechParams { power_b_mw: pb, ..base }, &cfg))
                .collect::<crate::Result<Vec<_>>>()?;
            dynamics_outcome(series, format)?
        }
        Command::OptomechSweep(a) => {
            let mut p = load_params(a.params.as_deref())?;
            ov.apply_params(&mut p)?;
            let grid = SweepGrid {
                power_b_mw: linspace(a.pb_min_mw, a.pb_max_mw, a.pb_steps),
                delta_b_over_omega_c: linspace(
                    a.delta_b_min_omega_c,
                    a.delta_b_max_omega_c,
                    a.delta_b_steps,
                ),
            };
            if grid.power_b_mw.iter().chain(&grid.delta_b_over_omega_c).any(|v| !v.is_finite()) {
                return Err(Failure::Usage("grid bounds must be finite".into()));
            }
            sweep_outcome(&sweep_steady_state(&p, &grid)?, format)?
        }
        Command::Fig5 => {
            let mut p = OptomechParams::fig4(0.0);
            ov.apply_params(&mut p)?;
            sweep_outcome(&sweep_steady_state(&p, &SweepGrid::fig5())?, format)?
        }
    };
    ov.finish()?;
    Ok(outcome)
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got `{raw}`")))?;
    // A second call in the same process keeps the first pool.
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}

fn write_output(out: Option<&Path>, data: &str) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, data)
            .map_err(|e| Failure::Compute(format!("{}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(data.as_bytes())
            .map_err(|e| Failure::Compute(e.to_string())),
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let result = configure_threads().and_then(|()| {
        let outcome = execute(&cli)?;
        write_output(cli.common.out.as_deref(), &outcome.data)?;
        Ok(outcome)
    });
    match result {
        Ok(outcome) => {
            if cli.common.out.is_some() {
                println!("{}", outcome.summary);
            } else {
                eprintln!("{}", outcome.summary);
            }
            if outcome.ok {
                0
            } else {
                1
            }
        }
        Err(f) => {
            eprintln!("{f}");
            f.exit_code()
        }
    }
}

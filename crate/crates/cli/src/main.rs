//! `harvest`: correlations harvested by two Unruh–DeWitt detectors.
//!
//! Exit status: 0 on success, 1 on a numerical or I/O failure (reported as
//! one JSON line on stderr) or a failed verification, 2 on invalid usage.

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use harvest_core::thermality::{single_detector_equivalence_report, Family};
use harvest_core::{
    harvest, series_in_temperature, DetectorParams, FieldState, HarvestResult64, LocalRoute, Numerics64, Scenario,
    ScenarioConfig, SeriesPolicy,
};
use harvest_sweep::verify;
use harvest_sweep::{run_sweep, Grid, SweepSpec, WORKERS_ENV};

#[derive(Parser)]
#[command(
    name = "harvest",
    version,
    about = "Mutual information and concurrence harvested by Unruh-DeWitt detectors"
)]
#[command(after_help = "All quantities are in units of the switching width sigma.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one configuration and print the density-matrix elements,
    /// mutual information and concurrence.
    Point(PointArgs),
    /// Run a parameter sweep from flags and/or a TOML file and write CSV.
    Sweep(SweepArgs),
    /// Run the oracle and identity suites; exits 1 if any check fails.
    Verify(VerifyArgs),
    /// Print the thermality comparison tables.
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Route {
    ClosedForm,
    Quadrature,
}

impl From<Route> for LocalRoute {
    fn from(r: Route) -> Self {
        match r {
            Route::ClosedForm => LocalRoute::ClosedForm,
            Route::Quadrature => LocalRoute::Quadrature,
        }
    }
}

impl Route {
    fn name(self) -> &'static str {
        match self {
            Route::ClosedForm => "closed-form",
            Route::Quadrature => "quadrature",
        }
    }
}

#[derive(Args)]
struct PointArgs {
    /// inertial, parallel, anti-parallel or perpendicular.
    #[arg(long)]
    scenario: Scenario,
    /// Acceleration a·σ (0 for the inertial scenario).
    #[arg(long, default_value_t = 0.0)]
    a: f64,
    /// Energy gap Ω·σ.
    #[arg(long)]
    omega: f64,
    /// Separation L/σ.
    #[arg(long = "L")]
    separation: f64,
    /// Coupling λ.
    #[arg(long, default_value_t = harvest_sweep::DEFAULT_COUPLING)]
    lambda: f64,
    /// Temperature T·σ of a thermal field state (inertial detectors only).
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long, value_enum, default_value = "closed-form")]
    route: Route,
    /// Print one JSON object instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// TOML sweep definition; flags given here override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Scenario names, comma-separated.
    #[arg(long, value_delimiter = ',')]
    scenario: Vec<Scenario>,
    /// Acceleration grid: start:stop:step or a comma-separated list.
    #[arg(long)]
    a: Option<Grid>,
    /// Gap grid Ω·σ.
    #[arg(long)]
    omega: Option<Grid>,
    /// Separation grid L/σ.
    #[arg(long = "L")]
    separation: Option<Grid>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long, value_enum)]
    route: Option<Route>,
    /// Output CSV; written to stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads.
    #[arg(long, env = WORKERS_ENV)]
    workers: Option<usize>,
    /// Record wall times and a timestamp (the output is then not
    /// reproducible byte for byte).
    #[arg(long)]
    record_timing: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Check the single point a·σ = 1, Ω·σ = 1 instead of the full grid.
    #[arg(long)]
    quick: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Csv,
}

#[derive(Args)]
struct ReportArgs {
    /// Accelerations a·σ.
    #[arg(long, default_value = "0.5,1,2")]
    a: Grid,
    /// Gaps Ω·σ.
    #[arg(long, default_value = "0.5,1,2")]
    omega: Grid,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// A failure reported as one JSON line.
#[derive(Debug)]
struct Failure {
    kind: &'static str,
    message: String,
}

impl From<harvest_core::Error> for Failure {
    fn from(e: harvest_core::Error) -> Self {
        Failure {
            kind: "numerics",
            message: e.to_string(),
        }
    }
}

impl From<harvest_sweep::SweepError> for Failure {
    fn from(e: harvest_sweep::SweepError) -> Self {
        Failure {
            kind: e.kind(),
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure {
            kind: "io",
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Point(args) => point(args),
        Command::Sweep(args) => sweep(args),
        Command::Verify(args) => verify(args),
        Command::Report(args) => report(args),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let line = serde_json::json!({ "error": f.kind, "message": f.message });
            eprintln!("{line}");
            ExitCode::FAILURE
        }
    }
}

fn point(args: PointArgs) -> Result<ExitCode, Failure> {
    let cfg = ScenarioConfig::new(args.scenario, args.a, args.separation)?;
    let det = DetectorParams::new(args.lambda, args.omega)?;
    let state = match args.temperature {
        Some(t) => FieldState::thermal_at_temperature(t)?,
        None => FieldState::MinkowskiVacuum,
    };
    let result = harvest(&cfg, &det, &state, &Numerics64::default(), args.route.into())?;
    let text = if args.json {
        point_json(&result).to_string()
    } else {
        point_text(&result)
    };
    println!("{text}");
    Ok(ExitCode::SUCCESS)
}

fn point_json(r: &HarvestResult64) -> serde_json::Value {
    let e = &r.elements;
    serde_json::json!({
        "scenario": r.scenario.scenario(),
        "a_sigma": r.scenario.acceleration(),
        "omega_sigma": r.detectors.gap(),
        "L_sigma": r.scenario.separation(),
        "lambda": r.detectors.coupling(),
        "state": r.state,
        "L_AA": { "value": e.l_aa.value, "error": e.l_aa.error },
        "L_BB": { "value": e.l_bb.value, "error": e.l_bb.error },
        "L_AB": { "re": e.l_ab.value.re, "im": e.l_ab.value.im, "error": e.l_ab.error },
        "M": { "re": e.m.value.re, "im": e.m.value.im, "error": e.m.error },
        "L_plus": r.l_plus,
        "L_minus": r.l_minus,
        "mutual_info": { "value": r.mutual_information, "error": r.mutual_information_error },
        "concurrence": { "value": r.concurrence, "error": r.concurrence_error },
    })
}

fn point_text(r: &HarvestResult64) -> String {
    let e = &r.elements;
    let state = match r.state {
        FieldState::ThermalKms { beta } => format!("thermal, T = {}", beta.recip()),
        other => other.name().to_string(),
    };
    [
        format!(
            "{} a = {}, omega = {}, L = {}, lambda = {} ({state})",
            r.scenario.scenario(),
            r.scenario.acceleration(),
            r.detectors.gap(),
            r.scenario.separation(),
            r.detectors.coupling()
        ),
        format!("L_AA         {:>22.12e}  +- {:.1e}", e.l_aa.value, e.l_aa.error),
        format!("L_BB         {:>22.12e}  +- {:.1e}", e.l_bb.value, e.l_bb.error),
        format!(
            "L_AB         {:>22.12e} {:+.12e}i  +- {:.1e}",
            e.l_ab.value.re, e.l_ab.value.im, e.l_ab.error
        ),
        format!(
            "M            {:>22.12e} {:+.12e}i  +- {:.1e}",
            e.m.value.re, e.m.value.im, e.m.error
        ),
        format!("L_+          {:>22.12e}", r.l_plus),
        format!("L_-          {:>22.12e}", r.l_minus),
        format!(
            "mutual info  {:>22.12e}  +- {:.1e}",
            r.mutual_information, r.mutual_information_error
        ),
        format!("concurrence  {:>22.12e}  +- {:.1e}", r.concurrence, r.concurrence_error),
    ]
    .join("\n")
}

/// Builds the specification: config file first, then each given flag.
fn sweep_spec(args: &SweepArgs) -> Result<SweepSpec, Failure> {
    let mut table = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure {
                kind: "io",
                message: format!("{}: {e}", path.display()),
            })?;
            text.parse::<toml::Table>().map_err(|e| Failure {
                kind: "config",
                message: format!("{}: {e}", path.display()),
            })?
        }
        None => toml::Table::new(),
    };
    let mut set = |key: &str, value: toml::Value| {
        table.insert(key.to_string(), value);
    };
    if !args.scenario.is_empty() {
        set(
            "scenario",
            toml::Value::Array(args.scenario.iter().map(|s| toml::Value::from(s.name())).collect()),
        );
    }
    for (key, grid) in [("a", &args.a), ("omega", &args.omega), ("L", &args.separation)] {
        if let Some(g) = grid {
            set(key, toml::Value::from(g.to_string()));
        }
    }
    if let Some(v) = args.lambda {
        set("lambda", v.into());
    }
    if let Some(v) = args.temperature {
        set("temperature", v.into());
    }
    if let Some(r) = args.route {
        set("route", r.name().into());
    }
    if let Some(p) = &args.out {
        set("out", p.display().to_string().into());
    }
    if let Some(w) = args.workers {
        set("workers", toml::Value::Integer(w as i64));
    }
    if args.record_timing {
        set("record_timing", true.into());
    }
    let text = toml::to_string(&table).map_err(|e| Failure {
        kind: "config",
        message: e.to_string(),
    })?;
    Ok(SweepSpec::from_toml_str(&text)?)
}

fn sweep(args: SweepArgs) -> Result<ExitCode, Failure> {
    let spec = sweep_spec(&args)?;
    let table = run_sweep(&spec)?;
    if spec.out.is_none() {
        let bytes = table.to_csv_bytes(&spec, None)?;
        std::io::stdout().write_all(&bytes)?;
    }
    for f in &table.failures {
        let r = &table.rows[f.row];
        eprintln!(
            "warning: {} a={} omega={} L={} failed: {}",
            r.scenario, r.a_sigma, r.omega_sigma, r.l_sigma, f.message
        );
    }
    eprintln!(
        "{} rows, {} failed{}",
        table.rows.len(),
        table.failures.len(),
        spec.out
            .as_ref()
            .map(|p| format!(", written to {}", p.display()))
            .unwrap_or_default()
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(args: VerifyArgs) -> Result<ExitCode, Failure> {
    let numerics = Numerics64::default();
    let checks = if args.quick {
        let mut c = vec![
            verify::rest_limit(),
            verify::dual_route(&[1.0], &[1.0], &numerics),
            verify::thermal_identity(&[1.0], &[1.0], &numerics),
        ];
        c.extend(verify::series_coefficients(&SeriesPolicy::default()));
        c
    } else {
        verify::run_all(&numerics)
    };
    for c in &checks {
        println!("{c}");
    }
    let failed = checks.iter().filter(|c| !c.passed).count();
    println!("{} checks, {failed} failed", checks.len());
    Ok(if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn report(args: ReportArgs) -> Result<ExitCode, Failure> {
    let numerics = Numerics64::default();
    let rep = single_detector_equivalence_report(&args.a.values(), &args.omega.values(), &numerics)?;
    let policy = SeriesPolicy::default();
    let families = [
        Family::Thermal { dt: 0.3, r: 0.7 },
        Family::AcceleratedSingle { dtau: 0.8 },
        Family::AcceleratedPair {
            scenario: Scenario::Parallel,
            separation: 1.0,
            tau_a: 0.4,
            tau_b: -0.3,
        },
        Family::AcceleratedPair {
            scenario: Scenario::AntiParallel,
            separation: 1.0,
            tau_a: 0.4,
            tau_b: -0.3,
        },
        Family::AcceleratedPair {
            scenario: Scenario::Perpendicular,
            separation: 1.0,
            tau_a: 0.4,
            tau_b: -0.3,
        },
        Family::DeSitter {
            dt: 0.5,
            dplus_t: 0.3,
            separation: 1.0,
        },
    ];
    let mut series = Vec::new();
    for f in &families {
        let name = match f {
            Family::AcceleratedPair { scenario, .. } => format!("{}-pair", scenario.name()),
            other => other.name().to_string(),
        };
        series.push((name, series_in_temperature(f, 3, &policy)?));
    }
    match args.format {
        Format::Csv => {
            print!("{}", rep.to_csv());
            println!();
            println!("family,c1_re,c1_im,c2_re,c2_im,c3_re,c3_im");
            for (name, c) in &series {
                let v: Vec<String> = (1..=3)
                    .flat_map(|k| [format!("{:e}", c.get(k).re), format!("{:e}", c.get(k).im)])
                    .collect();
                println!("{name},{}", v.join(","));
            }
        }
        Format::Text => {
            println!("Transition probability (lambda = 1): accelerated in vacuum vs at rest at T = a/2pi");
            println!("{rep}");
            println!();
            println!("Low-temperature coefficients of W(T) - W(0) = c1 T + c2 T^2 + c3 T^3 + ...");
            println!("(sample points: thermal dt=0.3 r=0.7; single dtau=0.8; pairs L=1 tau_A=0.4 tau_B=-0.3; de Sitter dt=0.5 dt+=0.3 L=1)");
            println!("{:<22} {:>24} {:>24} {:>24}", "family", "c1", "c2", "c3");
            for (name, c) in &series {
                let cell = |k: usize| format!("{:.6e}{:+.1e}i", c.get(k).re, c.get(k).im);
                println!("{name:<22} {:>24} {:>24} {:>24}", cell(1), cell(2), cell(3));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn command_line_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_override_config() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.toml");
        std::fs::write(
            &path,
            "scenario = \"parallel\"\na = \"0.1:1:0.1\"\nomega = 0.5\nL = 1\nlambda = 0.05\n",
        )
        .unwrap();
        let cli = Cli::try_parse_from([
            "harvest",
            "sweep",
            "--config",
            path.to_str().unwrap(),
            "--L",
            "7",
            "--scenario",
            "anti-parallel,perpendicular",
        ])
        .unwrap();
        let Command::Sweep(args) = cli.command else {
            unreachable!()
        };
        let spec = sweep_spec(&args).unwrap();
        assert_eq!(spec.separation, Grid::single(7.0));
        assert_eq!(spec.scenario, vec![Scenario::AntiParallel, Scenario::Perpendicular]);
        assert_eq!(spec.lambda, 0.05);
        assert_eq!(spec.a.values().len(), 10);
    }
}

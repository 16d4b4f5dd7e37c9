//! Command-line front end.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deploygrip_core::cycle::simulate_cycle;
use deploygrip_core::units::mm;

use crate::commands;
use crate::config::{FileConfig, Model};
use crate::error::{CliError, CliResult};
use crate::optimize::{optimize, write_candidate, Bounds, Objective, OptimizeSpec};
use crate::params::Metric;
use crate::sweep::{fmt_num, run_sweep, write_sweep, Axis, SweepSpec};
use crate::validate::{compare, write_report, Table};

#[derive(Debug, Parser)]
#[command(name = "deploygrip", version, about = "Design analysis for deployable suction grippers")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Global {
    /// TOML design/scenario file; every key is optional
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write CSV here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Azimuthal stations for the effective-area quadrature
    #[arg(long, global = true)]
    pub stations: Option<usize>,
    /// Simulation output interval in seconds
    #[arg(long, global = true)]
    pub timestep: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Picking-distance range of the design
    Range,
    /// Body, cup and picking force over distance
    ForceProfile {
        /// First distance in mm (default d_min)
        #[arg(long)]
        from: Option<f64>,
        /// Last distance in mm (default d_max)
        #[arg(long)]
        to: Option<f64>,
        #[arg(long, default_value_t = 50)]
        points: usize,
    },
    /// Effective body area at spring lengths
    Area {
        /// Spring length in mm; repeatable (default free length)
        #[arg(long = "length")]
        lengths: Vec<f64>,
        /// Per-station film solution (phi, state, r, theta, d) at the first length
        #[arg(long, conflicts_with = "compare_closed_forms")]
        dump_stations: bool,
        /// Tangency thresholds beside the quoted closed forms at the first length
        #[arg(long)]
        compare_closed_forms: bool,
    },
    /// One pick-and-place cycle
    Simulate {
        /// Emit per-cycle outcome rows instead of the trace
        #[arg(long)]
        summary: bool,
        /// Replay the cycle this many times (implies --summary when > 1)
        #[arg(long, default_value_t = 1)]
        repeat: usize,
    },
    /// Two-axis parameter sweep as long-format CSV
    Sweep {
        /// name=v1,v2,... or name=from:to:count
        #[arg(long)]
        axis1: String,
        #[arg(long)]
        axis2: String,
        /// Comma-separated metric names
        #[arg(long, value_delimiter = ',', required = true)]
        metrics: Vec<String>,
    },
    /// Grid search for the best design
    Optimize {
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        /// Distance in mm for max-force-at-distance
        #[arg(long)]
        distance: Option<f64>,
        /// Smallest acceptable picking force in N
        #[arg(long)]
        required_force: Option<f64>,
        /// Where the force constraint is checked, in mm (default mid-range)
        #[arg(long)]
        force_distance: Option<f64>,
        /// Largest acceptable d_min in mm
        #[arg(long)]
        max_d_min: Option<f64>,
        /// Wire diameter in mm: min:max or v1,v2,...
        #[arg(long)]
        wire_diameter: Option<String>,
        /// Stiffness in N/m: min:max or v1,v2,...
        #[arg(long)]
        spring_constant: Option<String>,
        /// Flow rate in L/min: min:max or v1,v2,...
        #[arg(long)]
        flow_rate: Option<String>,
        /// Grid points per interval axis
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Residuals of a model CSV against an experiment CSV
    Validate {
        #[arg(long)]
        model: PathBuf,
        #[arg(long)]
        experiment: PathBuf,
        /// Join key columns
        #[arg(long, value_delimiter = ',', required = true)]
        keys: Vec<String>,
        /// Value columns to compare (default: every shared non-key column)
        #[arg(long, value_delimiter = ',')]
        columns: Vec<String>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ObjectiveArg {
    MaxRange,
    MaxForceAtDistance,
}

fn load_model(g: &Global) -> CliResult<Model> {
    let config = match &g.config {
        Some(path) => FileConfig::load(path)?,
        None => FileConfig::default(),
    };
    if let Some(dt) = g.timestep {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(CliError::input("timestep", format!("{dt} is not > 0")));
        }
    }
    config.resolve(g.stations, g.timestep)
}

/// Runs `cli`, writing CSV to `--out` or `stdout` and notes to `stderr`.
pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> CliResult<()> {
    let mut file;
    let out: &mut dyn Write = match &cli.global.out {
        Some(path) => {
            file = BufWriter::new(File::create(path)?);
            &mut file
        }
        None => stdout,
    };
    dispatch(cli, out, stderr)?;
    out.flush()?;
    Ok(())
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    let g = &cli.global;
    match &cli.command {
        Command::Range => commands::range(out, &load_model(g)?),
        Command::ForceProfile { from, to, points } => {
            commands::force(out, &load_model(g)?, from.map(mm), to.map(mm), *points)
        }
        Command::Area { lengths, dump_stations, compare_closed_forms } => {
            let m = load_model(g)?;
            let lengths: Vec<f64> = lengths.iter().map(|&l| mm(l)).collect();
            let first = lengths.first().copied().unwrap_or(m.design.outer_spring.free_length);
            if *dump_stations {
                commands::dump_stations(out, &m, first)
            } else if *compare_closed_forms {
                commands::compare_closed_forms(out, &m, first)
            } else {
                commands::area(out, &m, &lengths)
            }
        }
        Command::Simulate { summary, repeat } => {
            let m = load_model(g)?;
            if !*summary && *repeat == 1 {
                let trace = simulate_cycle(&m.design, &m.line, &m.scenario, &m.sim)?;
                writeln!(err, "outcome {}, cycle_time {} s", trace.outcome.as_str(), fmt_num(trace.cycle_time))?;
                commands::write_trace(out, &trace)
            } else {
                commands::simulate(out, &m, true, *repeat)
            }
        }
        Command::Sweep { axis1, axis2, metrics } => {
            let m = load_model(g)?;
            let metrics = metrics.iter().map(|s| s.trim().parse::<Metric>()).collect::<CliResult<Vec<_>>>()?;
            let spec = SweepSpec::new(axis1.parse::<Axis>()?, axis2.parse::<Axis>()?, metrics)?;
            let (rows, warnings) = run_sweep(&m, &spec);
            for w in &warnings {
                writeln!(
                    err,
                    "warning: {}={} {}={}: {}",
                    spec.axis1.param,
                    fmt_num(w.axis1),
                    spec.axis2.param,
                    fmt_num(w.axis2),
                    w.message
                )?;
            }
            write_sweep(out, &spec, &rows)
        }
        Command::Optimize {
            objective,
            distance,
            required_force,
            force_distance,
            max_d_min,
            wire_diameter,
            spring_constant,
            flow_rate,
            points,
        } => {
            let m = load_model(g)?;
            let objective = match objective {
                ObjectiveArg::MaxRange => Objective::MaxRange,
                ObjectiveArg::MaxForceAtDistance => Objective::MaxForceAtDistance(mm(distance
                    .ok_or_else(|| CliError::input("distance", "required with --objective max-force-at-distance"))?)),
            };
            let bounds = |key: &str, v: &Option<String>| v.as_deref().map(|s| Bounds::parse(key, s)).transpose();
            let mut spec = OptimizeSpec::new(objective);
            spec.required_force = *required_force;
            spec.force_distance = force_distance.map(mm);
            spec.max_d_min = max_d_min.map(mm);
            spec.wire_diameter = bounds("wire_diameter", wire_diameter)?;
            spec.spring_constant = bounds("spring_constant", spring_constant)?;
            spec.flow_rate = bounds("flow_rate", flow_rate)?;
            spec.points = *points;
            let best = optimize(&m, &spec)?;
            write_candidate(out, &spec, &best)
        }
        Command::Validate { model, experiment, keys, columns } => {
            let mt = Table::read(model)?;
            let et = Table::read(experiment)?;
            let cols = if columns.is_empty() { None } else { Some(columns.as_slice()) };
            let report = compare(&mt, &et, keys, cols)?;
            for s in &report.summary {
                writeln!(
                    err,
                    "{}: {} rows, max |residual| {}, mean |residual| {}",
                    s.column,
                    s.count,
                    fmt_num(s.max_abs),
                    fmt_num(s.mean_abs)
                )?;
            }
            write_report(out, &report)
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args(args: impl IntoIterator<Item = std::ffi::OsString>) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let stdout = io::stdout();
    let stderr = io::stderr();
    match run(&cli, &mut stdout.lock(), &mut stderr.lock()) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

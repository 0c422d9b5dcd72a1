//! The `cqed` command line.
//!
//! Exit codes: 0 success, 1 output I/O failure, 2 malformed input or
//! configuration, 3 physical invariant violated by the input, 4 integrator
//! or numerical convergence failure, 5 closed-form domain failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use num_complex::Complex64;

use crate::closed_form::{discrepancy_report, sweep_points, Variant};
use crate::concurrence::{
    concurrence_mixed_printed, concurrence_mixed_wootters, concurrence_pure, TwoQubitDensity,
    TwoQubitPure,
};
use crate::config::RunConfig;
use crate::dynamics::{
    crossover_time, decoherence_envelope, gaussian_phase_average, gaussian_phase_decay,
    simulate_ensemble, with_thread_pool,
};
use crate::error::Error;
use crate::tensor::ComplexMatrix;

#[derive(Debug, Parser)]
#[command(
    name = "cqed",
    version,
    about = "Two-atom cavity entanglement under a random classical coordinate"
)]
pub struct Cli {
    /// Run configuration (key=value lines)
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Overrides process.seed
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Closed-form variant
    #[arg(long, global = true, value_parser = ["printed", "repaired"])]
    pub variant: Option<String>,
    /// Output directory, overrides `output`
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Concurrence of a state vector or density matrix file
    Concurrence {
        /// File with a "4" or "4 4" header followed by "re im" lines
        input: PathBuf,
    },
    /// Trajectory ensemble: populations.csv, concurrence.csv, concurrence_wootters.csv
    Simulate,
    /// Phase-average decay against the analytic envelope: envelope.csv
    Envelope,
    /// Closed-form populations over n̄: sweep.csv and discrepancies.md
    Sweep,
}

/// A failed command: message for stderr plus exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure {
            code: exit_code(&e),
            message: e.to_string(),
        }
    }
}

fn io_failure(path: &Path, e: std::io::Error) -> Failure {
    Failure {
        code: 1,
        message: format!("{}: {e}", path.display()),
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidParameters(_) | Error::DimensionMismatch { .. } => 2,
        Error::NonHermitian { .. }
        | Error::NegativeEigenvalue { .. }
        | Error::NotNormalized { .. } => 3,
        Error::StepTooLarge { .. }
        | Error::NoConvergence { .. }
        | Error::FactorizationFailure { .. }
        | Error::GridMismatch => 4,
        Error::Overflow { .. } | Error::NonPositiveWeight { .. } => 5,
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code. Diagnostics go to stderr.
pub fn run<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(&cli) {
        Ok(text) => {
            print!("{text}");
            0
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<String, Failure> {
    let variant = cli
        .variant
        .as_deref()
        .map(str::parse::<Variant>)
        .transpose()?;
    if let Command::Concurrence { input } = &cli.command {
        return cmd_concurrence(input, variant.unwrap_or_default());
    }
    let mut cfg = load_config(cli.config.as_deref())?;
    if let Some(seed) = cli.seed {
        cfg.process.seed = seed;
    }
    if let Some(v) = variant {
        cfg.variant = v;
    }
    if let Some(out) = &cli.out {
        cfg.output = out.clone();
    }
    match cli.command {
        Command::Simulate => cmd_simulate(&cfg, cli.threads),
        Command::Envelope => cmd_envelope(&cfg, cli.threads),
        Command::Sweep => cmd_sweep(&cfg),
        Command::Concurrence { .. } => unreachable!(),
    }
}

fn load_config(path: Option<&Path>) -> Result<RunConfig, Failure> {
    let Some(path) = path else {
        return Ok(RunConfig::default());
    };
    let text = fs::read_to_string(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(RunConfig::parse(&text)?)
}

/// A parsed state or density file.
#[derive(Debug, Clone, PartialEq)]
pub enum QubitInput {
    State([Complex64; 4]),
    Density(ComplexMatrix),
}

/// Reads the `"4"` / `"4 4"` header format; anything else is a shape error.
pub fn parse_qubit_input(text: &str) -> crate::Result<QubitInput> {
    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
    let header = lines.next().unwrap_or("");
    let dims: Vec<&str> = header.split_whitespace().collect();
    let expected = || "\"4\" (state vector) or \"4 4\" (density matrix)".to_string();
    let count = match dims[..] {
        ["4"] => 4,
        ["4", "4"] => 16,
        _ => {
            return Err(Error::DimensionMismatch {
                expected: expected(),
                found: format!("{header:?}"),
            })
        }
    };
    let values: Vec<Complex64> = lines
        .map(|l| {
            let parts: Vec<&str> = l.split_whitespace().collect();
            match parts[..] {
                [re, im] => match (re.parse(), im.parse()) {
                    (Ok(re), Ok(im)) => Ok(Complex64::new(re, im)),
                    _ => Err(Error::InvalidParameters(format!(
                        "cannot parse {l:?} as \"re im\""
                    ))),
                },
                _ => Err(Error::InvalidParameters(format!(
                    "expected \"re im\", got {l:?}"
                ))),
            }
        })
        .collect::<crate::Result<_>>()?;
    if values.len() != count {
        return Err(Error::DimensionMismatch {
            expected: format!("{count} entries after header {header:?}"),
            found: format!("{} entries", values.len()),
        });
    }
    Ok(if count == 4 {
        QubitInput::State([values[0], values[1], values[2], values[3]])
    } else {
        QubitInput::Density(ComplexMatrix::from_vec(4, 4, values)?)
    })
}

pub fn cmd_concurrence(input: &Path, variant: Variant) -> Result<String, Failure> {
    let text = fs::read_to_string(input).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", input.display()),
    })?;
    let c = match parse_qubit_input(&text)? {
        QubitInput::State(a) => concurrence_pure(&TwoQubitPure::new(a)?)?,
        QubitInput::Density(m) => {
            let rho = TwoQubitDensity::new(m)?;
            match variant {
                Variant::Repaired => concurrence_mixed_wootters(&rho)?,
                Variant::Printed => concurrence_mixed_printed(&rho)?,
            }
        }
    };
    Ok(format!("{c:.12}\n"))
}

fn fmt_row(values: &[f64]) -> String {
    let cells: Vec<String> = values.iter().map(|v| format!("{v:.16e}")).collect();
    cells.join(",")
}

fn write_file(dir: &Path, name: &str, content: &str) -> Result<(), Failure> {
    let path = dir.join(name);
    fs::write(&path, content).map_err(|e| io_failure(&path, e))
}

fn prepare_dir(dir: &Path) -> Result<(), Failure> {
    fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))
}

pub fn cmd_simulate(cfg: &RunConfig, threads: Option<usize>) -> Result<String, Failure> {
    cfg.validate()?;
    let initial = cfg.initial_state()?;
    let avg = simulate_ensemble(&cfg.model, &cfg.process, &initial, threads)?;
    let alpha0 = cfg.process.alpha0;

    let mut pops = String::from("t,w00,w01,w10,w11,offdiag_mag,envelope_analytic\n");
    let mut conc = String::from("t,c_pure_regime,c_averaged\n");
    let mut woot = String::from("t,c_wootters,c_wootters_printed\n");
    let offdiag = avg.offdiag_magnitude();
    let averaged = avg.averaged_concurrence();
    for (i, &t) in avg.times.iter().enumerate() {
        let w = &avg.populations[i];
        let _ = writeln!(
            pops,
            "{}",
            fmt_row(&[
                t,
                w.w00,
                w.w01,
                w.w10,
                w.w11,
                offdiag[i],
                decoherence_envelope(t, alpha0)
            ])
        );
        let _ = writeln!(
            conc,
            "{}",
            fmt_row(&[t, avg.mean_pure_concurrence[i], averaged[i]])
        );
        let m = &avg.densities[i];
        let rho = TwoQubitDensity::new(m.scale(Complex64::new(1.0 / m.trace().re, 0.0)))?;
        let _ = writeln!(
            woot,
            "{}",
            fmt_row(&[
                t,
                concurrence_mixed_wootters(&rho)?,
                concurrence_mixed_printed(&rho)?
            ])
        );
    }

    let dir = &cfg.output;
    prepare_dir(dir)?;
    write_file(dir, "populations.csv", &pops)?;
    write_file(dir, "concurrence.csv", &conc)?;
    write_file(dir, "concurrence_wootters.csv", &woot)?;

    let mut summary = format!(
        "trajectories: {}\nmax norm drift: {:.3e}\ncrossover time: {:.6}\n",
        avg.runs,
        avg.max_norm_drift,
        crossover_time(alpha0)
    );
    // late-time plateau check: compare populations at 3/4 and at the end
    let n = avg.times.len();
    if n >= 4 {
        let (a, b) = (&avg.populations[3 * (n - 1) / 4], &avg.populations[n - 1]);
        let shift = a
            .as_array()
            .iter()
            .zip(b.as_array())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let _ = writeln!(summary, "late-time population shift: {shift:.3e}");
    }
    let _ = writeln!(summary, "wrote {}", dir.display());
    Ok(summary)
}

pub fn cmd_envelope(cfg: &RunConfig, threads: Option<usize>) -> Result<String, Failure> {
    cfg.process.validate()?;
    let alpha0 = cfg.process.alpha0;
    let mc = with_thread_pool(threads, || gaussian_phase_average(&cfg.process))?;
    let mut csv = String::from(
        "t,envelope_analytic,phase_decay_exact,phase_average_mc,phase_average_stderr\n",
    );
    for (i, &t) in mc.times.iter().enumerate() {
        let _ = writeln!(
            csv,
            "{}",
            fmt_row(&[
                t,
                decoherence_envelope(t, alpha0),
                gaussian_phase_decay(t, alpha0),
                mc.mean[i].norm(),
                mc.stderr[i],
            ])
        );
    }
    prepare_dir(&cfg.output)?;
    write_file(&cfg.output, "envelope.csv", &csv)?;
    Ok(format!(
        "trajectories: {}\ncrossover time: {:.6}\nwrote {}\n",
        mc.n_traj,
        crossover_time(alpha0),
        cfg.output.display()
    ))
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<String, Failure> {
    let grid = cfg.sweep.values()?;
    let points = sweep_points(&grid, cfg.variant)?;
    let mut report = discrepancy_report(&grid, cfg.process.alpha0)?;

    let mut csv = String::from("nbar,c_squared,w00,w01,w10,w11,c_mixed,variant\n");
    let mut failures = Vec::new();
    for (nbar, r) in &points {
        match r {
            Ok(c) => {
                let w = &c.w;
                let _ = writeln!(
                    csv,
                    "{},{}",
                    fmt_row(&[c.nbar, c.c_squared, w.w00, w.w01, w.w10, w.w11, c.c_mixed]),
                    c.variant
                );
            }
            Err(e) => failures.push((*nbar, e.clone())),
        }
    }
    let _ = writeln!(
        report,
        "\n## Sweep failures under variant {}\n",
        cfg.variant
    );
    if failures.is_empty() {
        report.push_str("none\n");
    }
    for (nbar, e) in &failures {
        let _ = writeln!(report, "- n = {nbar}: {e}");
    }

    prepare_dir(&cfg.output)?;
    write_file(&cfg.output, "sweep.csv", &csv)?;
    write_file(&cfg.output, "discrepancies.md", &report)?;

    match failures.first() {
        Some((_, e)) => Err(Failure {
            code: exit_code(e),
            message: format!(
                "{} of {} sweep points failed under variant {} (first: {e}); see discrepancies.md",
                failures.len(),
                points.len(),
                cfg.variant
            ),
        }),
        None => Ok(format!(
            "{} points\nwrote {}\n",
            points.len(),
            cfg.output.display()
        )),
    }
}

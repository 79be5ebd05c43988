//! `usprep`: synthesize, verify, count and sample uniform-superposition circuits.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage or input
//! errors.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};

use usprep::analytics;
use usprep::builder::{build_general, build_uniform};
use usprep::lowering::lower_circuit;
use usprep::planner::BitPlan;
use usprep::qasm::{to_qasm, EmitOptions};
use usprep::simulator::Simulator;
use usprep::verify::{verify_general, verify_uniform, DEFAULT_TOLERANCE};
use usprep::Circuit;

const EXIT_VERIFY_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "usprep", version, about = "Uniform superposition state preparation circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Write the circuit for M as OpenQASM 2.0 or JSON
    Synth(SynthArgs),
    /// Simulate circuits and compare with the expected amplitudes
    Verify(VerifyArgs),
    /// Gate and CNOT counts for a range of M, as CSV or JSON
    Counts(CountsArgs),
    /// Basis-state probabilities of the prepared state, as CSV
    Probs(ProbsArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Number of basis states in the superposition
    #[arg(long)]
    m: u64,

    /// Register width (defaults to ceil(log2 M))
    #[arg(long)]
    n: Option<usize>,

    /// Comma-separated rotation angles in radians, one per rotation gate
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "zero_angle_at")]
    angles: Option<Vec<f64>>,

    /// Keep the default angles but set the rotation with this index to 0
    #[arg(long)]
    zero_angle_at: Option<usize>,
}

impl StateArgs {
    /// Rotation angles to use, or `None` for the uniform circuit.
    fn angles(&self) -> anyhow::Result<Option<Vec<f64>>> {
        if let Some(angles) = &self.angles {
            return Ok(Some(angles.clone()));
        }
        match self.zero_angle_at {
            Some(s) => {
                let plan = BitPlan::new(self.m, self.n)?;
                let mut angles = plan.thetas().to_vec();
                if s >= angles.len() {
                    bail!("--zero-angle-at {s} out of range: M = {} has {} rotations", self.m, angles.len());
                }
                angles[s] = 0.0;
                Ok(Some(angles))
            }
            None => Ok(None),
        }
    }

    fn circuit(&self) -> anyhow::Result<Circuit> {
        Ok(match self.angles()? {
            Some(angles) => build_general(self.m, &angles, self.n)?,
            None => build_uniform(self.m, self.n)?,
        })
    }
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CircuitFormat {
    Qasm,
    Json,
}

#[derive(Args)]
struct SynthArgs {
    #[command(flatten)]
    state: StateArgs,

    #[arg(long, value_enum, default_value = "qasm")]
    format: CircuitFormat,

    /// Output file (stdout when omitted)
    #[arg(long)]
    out: Option<PathBuf>,

    /// QASM: precede each lowered controlled gate with a comment naming it
    #[arg(long)]
    raw: bool,

    /// JSON: write the CNOT-basis circuit instead of the gate-level one
    #[arg(long)]
    lowered: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, required_unless_present = "range", conflicts_with = "range")]
    m: Option<u64>,

    /// Inclusive range LO:HI
    #[arg(long, value_parser = parse_range)]
    range: Option<(u64, u64)>,

    #[arg(long)]
    n: Option<usize>,

    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, requires = "m")]
    angles: Option<Vec<f64>>,

    /// Largest allowed per-amplitude deviation
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ReportFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct CountsArgs {
    /// Inclusive range LO:HI
    #[arg(long, value_parser = parse_range)]
    range: (u64, u64),

    #[arg(long)]
    out: Option<PathBuf>,

    #[arg(long, value_enum, default_value = "csv")]
    format: ReportFormat,
}

#[derive(Args)]
struct ProbsArgs {
    #[command(flatten)]
    state: StateArgs,

    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_range(s: &str) -> Result<(u64, u64), String> {
    let (lo, hi) = s.split_once(':').ok_or_else(|| format!("expected LO:HI, got {s:?}"))?;
    let lo: u64 = lo.trim().parse().map_err(|_| format!("bad lower bound {lo:?}"))?;
    let hi: u64 = hi.trim().parse().map_err(|_| format!("bad upper bound {hi:?}"))?;
    if lo < 2 || lo > hi {
        return Err(format!("range must satisfy 2 <= LO <= HI, got {lo}:{hi}"));
    }
    Ok((lo, hi))
}

fn open_output(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn synth(args: &SynthArgs) -> anyhow::Result<u8> {
    let circuit = args.state.circuit()?;
    let mut out = open_output(args.out.as_deref())?;
    match args.format {
        CircuitFormat::Qasm => out.write_all(to_qasm(&circuit, EmitOptions { raw: args.raw }).as_bytes())?,
        CircuitFormat::Json => {
            let circuit = if args.lowered { lower_circuit(&circuit) } else { circuit };
            serde_json::to_writer_pretty(&mut out, &circuit)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(0)
}

fn verify(args: &VerifyArgs) -> anyhow::Result<u8> {
    let sim = Simulator::from_env()?;
    let results = match (args.m, args.range) {
        (Some(m), _) => vec![match &args.angles {
            Some(angles) => verify_general(&sim, m, angles, args.n, args.tol)?,
            None => verify_uniform(&sim, m, args.n, args.tol)?,
        }],
        (None, Some((lo, hi))) => {
            if args.n.is_some() {
                bail!("--n applies to a single --m only");
            }
            usprep::verify::verify_range(&sim, lo, hi, args.tol)?
        }
        (None, None) => unreachable!("clap requires --m or --range"),
    };

    let mut stdout = io::stdout().lock();
    let mut failed = 0;
    for v in &results {
        let status = if v.passed { "pass" } else { "fail" };
        failed += usize::from(!v.passed);
        writeln!(stdout, "m={} {status} max_dev={:.3e}", v.m, v.max_deviation)?;
    }
    writeln!(stdout, "{}/{} passed (tol {:e})", results.len() - failed, results.len(), args.tol)?;
    Ok(if failed == 0 { 0 } else { EXIT_VERIFY_FAILED })
}

fn counts(args: &CountsArgs) -> anyhow::Result<u8> {
    let (lo, hi) = args.range;
    let reports = analytics::sweep(lo, hi)?;
    let mut out = open_output(args.out.as_deref())?;
    match args.format {
        ReportFormat::Csv => analytics::write_csv(&reports, &mut out)?,
        ReportFormat::Json => {
            analytics::write_json(&reports, &mut out)?;
            writeln!(out)?;
        }
    }
    out.flush()?;
    Ok(0)
}

fn probs(args: &ProbsArgs) -> anyhow::Result<u8> {
    let sim = Simulator::from_env()?;
    let circuit = args.state.circuit()?;
    let probabilities = sim.run(&circuit, None)?.probabilities();
    let mut out = open_output(args.out.as_deref())?;
    writeln!(out, "basis_index,probability")?;
    for (j, p) in probabilities.iter().enumerate() {
        writeln!(out, "{j},{p}")?;
    }
    out.flush()?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::try_parse().unwrap_or_else(|e| e.exit());
    let result = match &cli.command {
        Command::Synth(a) => synth(a),
        Command::Verify(a) => verify(a),
        Command::Counts(a) => counts(a),
        Command::Probs(a) => probs(a),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}

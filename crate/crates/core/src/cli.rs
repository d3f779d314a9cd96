//! The `trimux` command line. Data goes to `out`, diagnostics to `err`.
//!
//! Exit codes: 0 success, 1 verification or simulation failure, 2 usage or
//! parse error.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::arithmetic::word_comparison;
use crate::graph::{table_text, verify_builtin, AdderKind, SupplyMode};
use crate::logic::{level_to_voltage, voltage_to_level, Level, Radix};
use crate::metrics::{count_transistors, ratio_report, FaVersion};
use crate::netlist_io::{parse_bytes, validate, NetlistDocument, Severity};
use crate::switch::{solve, standard_sweep, NodeState, Oracle, SolveError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "trimux",
    version,
    about = "Ternary MUX adder simulator, verifier and cost calculator"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Supply {
    Two,
    One,
}

impl From<Supply> for SupplyMode {
    fn from(s: Supply) -> Self {
        match s {
            Supply::Two => SupplyMode::TwoSupplies,
            Supply::One => SupplyMode::OneSupply,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Version {
    V1,
    V2,
}

impl From<Version> for FaVersion {
    fn from(v: Version) -> Self {
        match v {
            Version::V1 => FaVersion::V1,
            Version::V2 => FaVersion::V2,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exhaustively check a built-in adder against integer addition.
    Verify { circuit: AdderKind },
    /// Print the truth table of a built-in circuit.
    Table {
        circuit: AdderKind,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Transistor count breakdown.
    Count {
        circuit: AdderKind,
        #[arg(long, value_enum, default_value = "two")]
        supply: Supply,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Ternary/binary cost ratios and an n-bit word comparison.
    Compare {
        #[arg(long, default_value_t = 8, value_parser = clap::value_parser!(u32).range(1..=63))]
        bits: u32,
        #[arg(long, value_enum, default_value = "two")]
        supply: Supply,
        #[arg(long = "fa-version", value_enum, default_value = "v2")]
        fa_version: Version,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Solve a .tnl netlist for the given input levels.
    Simulate {
        file: PathBuf,
        /// Input level as `name=0|1|2`.
        #[arg(long = "in", value_parser = parse_assignment)]
        inputs: Vec<(String, Level)>,
    },
    /// Sweep a .tnl netlist against a behavioral function.
    Sweep {
        file: PathBuf,
        #[arg(long)]
        oracle: Oracle,
    },
}

fn parse_assignment(s: &str) -> Result<(String, Level), String> {
    let (name, level) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=level, got `{s}`"))?;
    let level = level
        .parse::<u8>()
        .ok()
        .and_then(|v| Level::new(v).ok())
        .ok_or_else(|| format!("`{level}` is not a level (0, 1 or 2)"))?;
    Ok((name.to_string(), level))
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

type CmdResult = Result<i32, Box<dyn std::error::Error>>;

fn execute(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match cmd {
        Command::Verify { circuit } => {
            let report = verify_builtin(circuit);
            writeln!(out, "{circuit}: {}", report.summary())?;
            for c in report.mismatches() {
                let show =
                    |v: &[Level]| v.iter().map(Level::to_string).collect::<Vec<_>>().join(" ");
                writeln!(
                    out,
                    "mismatch: {} = {} -> expected {}, got {}",
                    report.input_names.join(" "),
                    show(&c.inputs),
                    show(&c.expected),
                    show(&c.actual)
                )?;
            }
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
        Command::Table { circuit, format } => {
            match format {
                Format::Text => out.write_all(table_text(&circuit.build())?.as_bytes())?,
                Format::Csv => out.write_all(verify_builtin(circuit).to_csv().as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Count {
            circuit,
            supply,
            format,
        } => {
            let b = count_transistors(&circuit.build(), supply.into())?;
            match format {
                Format::Text => out.write_all(b.to_text().as_bytes())?,
                Format::Csv => out.write_all(b.to_csv().as_bytes())?,
            }
            Ok(EXIT_OK)
        }
        Command::Compare {
            bits,
            supply,
            fa_version,
            format,
        } => {
            let headline = ratio_report();
            let word = word_comparison(bits, supply.into(), fa_version.into())?;
            match format {
                Format::Text => {
                    out.write_all(headline.to_text().as_bytes())?;
                    writeln!(out)?;
                    out.write_all(word.to_text().as_bytes())?;
                }
                Format::Csv => {
                    out.write_all(headline.to_csv().as_bytes())?;
                    // Same columns; skip the repeated header.
                    let csv = word.to_csv();
                    out.write_all(csv.split_once('\n').map_or("", |(_, rest)| rest).as_bytes())?;
                }
            }
            Ok(EXIT_OK)
        }
        Command::Simulate { file, inputs } => {
            let Some(doc) = load(&file, err)? else {
                return Ok(EXIT_USAGE);
            };
            let mut drive = BTreeMap::new();
            for (name, level) in inputs {
                drive.insert(name, level_to_voltage(level, Radix::Ternary)?);
            }
            let result = match solve(&doc.netlist, &drive) {
                Ok(r) => r,
                Err(e @ SolveError::OscillationDetected(_)) => {
                    writeln!(err, "error: {e}")?;
                    return Ok(EXIT_FAILURE);
                }
                Err(e) => return Err(e.into()),
            };
            let mut code = EXIT_OK;
            for o in doc.netlist.outputs() {
                let state = result.state(o).unwrap_or(NodeState::Unknown);
                match state {
                    NodeState::Resolved(v) => {
                        let level = voltage_to_level(v, Radix::Ternary)?;
                        let note = if result.static_power_nodes.contains(o) {
                            " (static power)"
                        } else {
                            ""
                        };
                        writeln!(out, "{o} = {level}{note}")?;
                    }
                    other => {
                        writeln!(out, "{o} = {other}")?;
                        writeln!(err, "error: output `{o}` is {other}")?;
                        code = EXIT_FAILURE;
                    }
                }
            }
            Ok(code)
        }
        Command::Sweep { file, oracle } => {
            let Some(doc) = load(&file, err)? else {
                return Ok(EXIT_USAGE);
            };
            let report = standard_sweep(&doc.netlist, oracle)?;
            writeln!(
                out,
                "{} vs {}: {}",
                report.netlist,
                oracle.name(),
                report.summary()
            )?;
            for c in report.mismatches() {
                let ins: Vec<String> = report
                    .input_names
                    .iter()
                    .zip(&c.inputs)
                    .map(|(n, l)| format!("{n}={l}"))
                    .collect();
                let expected = voltage_to_level(c.expected, Radix::Ternary)?;
                let got = match c.output_state(&report.output) {
                    Some(NodeState::Resolved(v)) => {
                        voltage_to_level(v, Radix::Ternary)?.to_string()
                    }
                    Some(other) => other.to_string(),
                    None => match &c.result {
                        Err(e) => e.to_string(),
                        Ok(_) => "missing".into(),
                    },
                };
                writeln!(
                    out,
                    "mismatch at {}: expected {expected}, got {got}",
                    ins.join(" ")
                )?;
            }
            Ok(if report.clean() {
                EXIT_OK
            } else {
                EXIT_FAILURE
            })
        }
    }
}

/// Reads, parses and validates a netlist file. Returns `None` after
/// reporting a validation error.
fn load(
    path: &PathBuf,
    err: &mut dyn Write,
) -> Result<Option<NetlistDocument>, Box<dyn std::error::Error>> {
    let bytes = std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    let doc = parse_bytes(&bytes).map_err(|e| format!("{}:{e}", path.display()))?;
    let diags = validate(&doc);
    for d in &diags {
        writeln!(err, "{}:{d}", path.display())?;
    }
    Ok(diags
        .iter()
        .all(|d| d.severity != Severity::Error)
        .then_some(doc))
}

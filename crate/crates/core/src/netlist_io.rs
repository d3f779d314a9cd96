//! Line-oriented `.tnl` text format for switch-level netlists.
//!
//! ```text
//! circuit ni
//! supply one
//! rail vdd vdd
//! rail gnd 0
//! input in
//! output out
//! dev m_n N gate=in a=out b=gnd vth=0.25
//! dev m_p P gate=in a=vdd b=out vth=0.25
//! end
//! ```
//!
//! `#` starts a comment. `rail` levels are `0`, `half` or `vdd`; a trailing
//! `res` marks a resistive device.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fmt::Write as _;

use thiserror::Error;

use crate::graph::SupplyMode;
use crate::logic::Voltage;
use crate::switch::{threshold_in_range, valid_name, Device, Polarity, Rail, SwitchNetlist};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: syntax error: {message}")]
    SyntaxError { line: usize, message: String },
    #[error("line {line}: duplicate name `{name}`")]
    DuplicateName { line: usize, name: String },
    #[error("line {line}: unresolved reference `{name}`")]
    UnresolvedReference { line: usize, name: String },
    #[error("line {line}: invalid threshold `{value}`, expected a decimal in (0, 1)")]
    InvalidThreshold { line: usize, value: String },
    #[error("line {line}: rail `{rail}` at half needs `supply two`")]
    SupplyModeViolation { line: usize, rail: String },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::SyntaxError { line, .. }
            | ParseError::DuplicateName { line, .. }
            | ParseError::UnresolvedReference { line, .. }
            | ParseError::InvalidThreshold { line, .. }
            | ParseError::SupplyModeViolation { line, .. } => *line,
        }
    }
}

/// 1-based source position.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NetlistDocument {
    pub netlist: SwitchNetlist,
    /// Location of the `circuit` header.
    pub header: Location,
    /// Declaration site of every rail and node, keyed by name.
    pub locations: BTreeMap<String, Location>,
    /// Declaration site of every device, keyed by id.
    pub device_locations: BTreeMap<String, Location>,
}

impl NetlistDocument {
    pub fn location(&self, name: &str) -> Location {
        self.locations.get(name).copied().unwrap_or(self.header)
    }

    pub fn device_location(&self, id: &str) -> Location {
        self.device_locations
            .get(id)
            .copied()
            .unwrap_or(self.header)
    }
}

fn syntax(line: usize, message: impl Into<String>) -> ParseError {
    ParseError::SyntaxError {
        line,
        message: message.into(),
    }
}

pub fn parse_bytes(bytes: &[u8]) -> Result<NetlistDocument, ParseError> {
    match std::str::from_utf8(bytes) {
        Ok(text) => parse(text),
        Err(e) => {
            let line = 1 + bytes[..e.valid_up_to()]
                .iter()
                .filter(|&&b| b == b'\n')
                .count();
            Err(syntax(line, "invalid UTF-8"))
        }
    }
}

struct RawDevice {
    line: usize,
    device: Device,
}

pub fn parse(text: &str) -> Result<NetlistDocument, ParseError> {
    let mut name: Option<(String, Location)> = None;
    let mut supply: Option<SupplyMode> = None;
    let mut rails = Vec::new();
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut nodes = Vec::new();
    let mut devices: Vec<RawDevice> = Vec::new();
    let mut locations = BTreeMap::new();
    let mut device_locations = BTreeMap::new();
    let mut ended = false;
    let mut last_line = 1;

    for (idx, raw) in text.split('\n').enumerate() {
        let line = idx + 1;
        last_line = line;
        let raw = raw.strip_suffix('\r').unwrap_or(raw);
        let content = raw.split('#').next().unwrap_or("");
        let mut tokens = Vec::new();
        let mut rest = content;
        while let Some(start) = rest.find(|c: char| !c.is_whitespace()) {
            let after = &rest[start..];
            let len = after.find(char::is_whitespace).unwrap_or(after.len());
            let column = content.len() - rest.len() + start + 1;
            tokens.push((&after[..len], column));
            rest = &after[len..];
        }
        let Some(&(keyword, kw_col)) = tokens.first() else {
            continue;
        };
        if ended {
            return Err(syntax(line, "content after `end`"));
        }
        let args = &tokens[1..];
        if name.is_none() && keyword != "circuit" {
            return Err(syntax(line, "expected `circuit <name>` header"));
        }
        let declare = |map: &mut BTreeMap<String, Location>,
                       n: &str,
                       column: usize|
         -> Result<(), ParseError> {
            if !valid_name(n) {
                return Err(syntax(line, format!("invalid name `{n}`")));
            }
            if map
                .insert(n.to_string(), Location { line, column })
                .is_some()
            {
                return Err(ParseError::DuplicateName {
                    line,
                    name: n.to_string(),
                });
            }
            Ok(())
        };
        match keyword {
            "circuit" => {
                if name.is_some() {
                    return Err(syntax(line, "second `circuit` header"));
                }
                let [(n, _)] = args else {
                    return Err(syntax(line, "expected `circuit <name>`"));
                };
                if !valid_name(n) {
                    return Err(syntax(line, format!("invalid name `{n}`")));
                }
                name = Some((
                    n.to_string(),
                    Location {
                        line,
                        column: kw_col,
                    },
                ));
            }
            "supply" => {
                if supply.is_some() {
                    return Err(syntax(line, "second `supply` line"));
                }
                supply = Some(match args {
                    [("two", _)] => SupplyMode::TwoSupplies,
                    [("one", _)] => SupplyMode::OneSupply,
                    _ => return Err(syntax(line, "expected `supply two|one`")),
                });
            }
            "rail" => {
                let Some(mode) = supply else {
                    return Err(syntax(line, "`rail` before `supply`"));
                };
                let [(n, col), (level, _)] = args else {
                    return Err(syntax(line, "expected `rail <name> 0|half|vdd`"));
                };
                let level = match *level {
                    "0" => Voltage::GND,
                    "half" => Voltage::HALF,
                    "vdd" => Voltage::VDD,
                    other => return Err(syntax(line, format!("unknown rail level `{other}`"))),
                };
                declare(&mut locations, n, *col)?;
                if level == Voltage::HALF && mode == SupplyMode::OneSupply {
                    return Err(ParseError::SupplyModeViolation {
                        line,
                        rail: n.to_string(),
                    });
                }
                rails.push(Rail {
                    name: n.to_string(),
                    level,
                });
            }
            "input" | "output" | "node" => {
                if args.is_empty() {
                    return Err(syntax(line, format!("`{keyword}` needs at least one name")));
                }
                let list = match keyword {
                    "input" => &mut inputs,
                    "output" => &mut outputs,
                    _ => &mut nodes,
                };
                for (n, col) in args {
                    declare(&mut locations, n, *col)?;
                    list.push(n.to_string());
                }
            }
            "dev" => {
                let device = parse_device(line, args)?;
                declare(&mut device_locations, &device.id, args[0].1)?;
                devices.push(RawDevice { line, device });
            }
            "end" => {
                if !args.is_empty() {
                    return Err(syntax(line, "unexpected tokens after `end`"));
                }
                ended = true;
            }
            other => return Err(syntax(line, format!("unknown declaration `{other}`"))),
        }
    }

    let Some((name, header)) = name else {
        return Err(syntax(1, "missing `circuit` header"));
    };
    if !ended {
        return Err(syntax(last_line, "missing `end`"));
    }
    let Some(supply) = supply else {
        return Err(syntax(last_line, "missing `supply` line"));
    };
    let terminals: BTreeSet<&str> = rails
        .iter()
        .map(|r| r.name.as_str())
        .chain(
            inputs
                .iter()
                .chain(&outputs)
                .chain(&nodes)
                .map(String::as_str),
        )
        .collect();
    for d in &devices {
        for t in [&d.device.gate, &d.device.a, &d.device.b] {
            if !terminals.contains(t.as_str()) {
                return Err(ParseError::UnresolvedReference {
                    line: d.line,
                    name: t.clone(),
                });
            }
        }
    }
    let netlist = SwitchNetlist::new(
        &name,
        supply,
        rails,
        inputs,
        outputs,
        nodes,
        devices.into_iter().map(|d| d.device).collect(),
    )
    .map_err(|e| syntax(header.line, e.to_string()))?;
    Ok(NetlistDocument {
        netlist,
        header,
        locations,
        device_locations,
    })
}

fn parse_device(line: usize, args: &[(&str, usize)]) -> Result<Device, ParseError> {
    let usage = "expected `dev <id> <N|P> gate=<ref> a=<ref> b=<ref> vth=<decimal> [res]`";
    let [(id, _), (pol, _), rest @ ..] = args else {
        return Err(syntax(line, usage));
    };
    let polarity = match *pol {
        "N" => Polarity::N,
        "P" => Polarity::P,
        other => return Err(syntax(line, format!("unknown polarity `{other}`"))),
    };
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    let mut resistive = false;
    for (tok, _) in rest {
        if *tok == "res" {
            if resistive {
                return Err(syntax(line, "repeated `res`"));
            }
            resistive = true;
            continue;
        }
        let Some((key, value)) = tok.split_once('=') else {
            return Err(syntax(line, format!("unexpected token `{tok}`")));
        };
        if !matches!(key, "gate" | "a" | "b" | "vth") {
            return Err(syntax(line, format!("unknown field `{key}`")));
        }
        if fields.insert(key, value).is_some() {
            return Err(syntax(line, format!("repeated field `{key}`")));
        }
    }
    let field = |k: &str| fields.get(k).copied().ok_or_else(|| syntax(line, usage));
    let (gate, a, b, vth_text) = (field("gate")?, field("a")?, field("b")?, field("vth")?);
    let vth = Voltage::parse_decimal(vth_text)
        .filter(|&v| threshold_in_range(v))
        .ok_or_else(|| ParseError::InvalidThreshold {
            line,
            value: vth_text.to_string(),
        })?;
    let device = Device::new(id, polarity, gate, a, b, vth);
    Ok(if resistive {
        device.resistive()
    } else {
        device
    })
}

fn rail_keyword(level: Voltage) -> &'static str {
    if level == Voltage::GND {
        "0"
    } else if level == Voltage::HALF {
        "half"
    } else {
        "vdd"
    }
}

/// Canonical text: fixed declaration order, devices sorted by id, single
/// spaces, `\n` line endings.
pub fn serialize(n: &SwitchNetlist) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "circuit {}", n.name());
    let _ = writeln!(out, "supply {}", n.supply_mode());
    for r in n.rails() {
        let _ = writeln!(out, "rail {} {}", r.name, rail_keyword(r.level));
    }
    for (kw, names) in [
        ("input", n.inputs()),
        ("output", n.outputs()),
        ("node", n.nodes()),
    ] {
        if !names.is_empty() {
            let _ = writeln!(out, "{kw} {}", names.join(" "));
        }
    }
    for d in n.sorted_devices() {
        let pol = match d.polarity {
            Polarity::N => "N",
            Polarity::P => "P",
        };
        let vth = d
            .vth
            .to_decimal()
            .expect("netlist thresholds have a decimal form");
        let _ = write!(
            out,
            "dev {} {pol} gate={} a={} b={} vth={vth}",
            d.id, d.gate, d.a, d.b
        );
        out.push_str(if d.resistive { " res\n" } else { "\n" });
    }
    out.push_str("end\n");
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Warning,
    Error,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DiagnosticKind {
    /// Declared internal node that no device touches.
    UnusedNode(String),
    /// Output with no device channel attached.
    UndrivenOutput(String),
    Invariant(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub kind: DiagnosticKind,
    pub location: Location,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Warning => "warning",
            Severity::Error => "error",
        };
        match &self.kind {
            DiagnosticKind::UnusedNode(n) => write!(
                f,
                "{}: {sev}: node `{n}` is not used by any device",
                self.location
            ),
            DiagnosticKind::UndrivenOutput(n) => write!(
                f,
                "{}: {sev}: output `{n}` is not driven by any device",
                self.location
            ),
            DiagnosticKind::Invariant(m) => write!(f, "{}: {sev}: {m}", self.location),
        }
    }
}

pub fn validate(d: &NetlistDocument) -> Vec<Diagnostic> {
    let n = &d.netlist;
    let mut diags = Vec::new();
    if let Err(e) = SwitchNetlist::new(
        n.name(),
        n.supply_mode(),
        n.rails().to_vec(),
        n.inputs().to_vec(),
        n.outputs().to_vec(),
        n.nodes().to_vec(),
        n.devices().to_vec(),
    ) {
        diags.push(Diagnostic {
            severity: Severity::Error,
            kind: DiagnosticKind::Invariant(e.to_string()),
            location: d.header,
        });
    }
    let touched: BTreeSet<&str> = n
        .devices()
        .iter()
        .flat_map(|dev| [dev.gate.as_str(), dev.a.as_str(), dev.b.as_str()])
        .collect();
    let channels: BTreeSet<&str> = n
        .devices()
        .iter()
        .flat_map(|dev| [dev.a.as_str(), dev.b.as_str()])
        .collect();
    for node in n.nodes() {
        if !touched.contains(node.as_str()) {
            diags.push(Diagnostic {
                severity: Severity::Warning,
                kind: DiagnosticKind::UnusedNode(node.clone()),
                location: d.location(node),
            });
        }
    }
    for out in n.outputs() {
        if !channels.contains(out.as_str()) {
            diags.push(Diagnostic {
                severity: Severity::Error,
                kind: DiagnosticKind::UndrivenOutput(out.clone()),
                location: d.location(out),
            });
        }
    }
    diags
}

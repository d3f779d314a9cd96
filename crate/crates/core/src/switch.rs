//! Switch-level netlists and a steady-state solver over exact voltages.
//!
//! Devices are ideal threshold switches: an N device conducts when its gate is
//! at or above `vth`, a P device when its gate is at or below `vth`. A
//! conducting channel passes its source voltage unchanged. Devices flagged
//! `resistive` model the weak "resistor-like" transistors of a voltage
//! divider; any strong path beats any weak one.
//!
//! [`solve`] iterates a three-valued fixpoint. A device whose gate is not yet
//! resolved is *possibly* conducting, and a node stays `Unknown` until its
//! classification no longer depends on such devices. Once a node leaves
//! `Unknown` its state is final.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::graph::{Domain, SupplyMode};
use crate::logic::{self, level_to_voltage, BinaryLevel, Level, Radix, Voltage};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NetlistError {
    #[error("`{0}` is not a valid name")]
    InvalidName(String),
    #[error("duplicate name `{0}`")]
    DuplicateName(String),
    #[error("device `{device}` references undeclared `{name}`")]
    UnresolvedReference { device: String, name: String },
    #[error(
        "device `{device}` has threshold {vth} outside (0, 1) or without an exact decimal form"
    )]
    InvalidThreshold { device: String, vth: Voltage },
    #[error("rail `{0}` at Vdd/2 needs two supplies")]
    SupplyModeViolation(String),
    #[error("rail `{0}` is not at a quiescent level")]
    IllegalRailLevel(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("no fixpoint after {0} iterations")]
    OscillationDetected(usize),
    #[error("input `{node}` driven at {voltage}, not a quiescent level")]
    IllegalInputVoltage { node: String, voltage: Voltage },
    #[error("input `{0}` is not driven")]
    MissingInput(String),
    #[error("`{0}` is not an input node")]
    UnknownInput(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Polarity {
    N,
    P,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Device {
    pub id: String,
    pub polarity: Polarity,
    pub gate: String,
    pub a: String,
    pub b: String,
    pub vth: Voltage,
    pub resistive: bool,
}

impl Device {
    pub fn new(id: &str, polarity: Polarity, gate: &str, a: &str, b: &str, vth: Voltage) -> Self {
        Device {
            id: id.to_string(),
            polarity,
            gate: gate.to_string(),
            a: a.to_string(),
            b: b.to_string(),
            vth,
            resistive: false,
        }
    }

    pub fn resistive(mut self) -> Self {
        self.resistive = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rail {
    pub name: String,
    pub level: Voltage,
}

/// Names are single tokens of the netlist text format.
pub(crate) fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| !c.is_whitespace() && !c.is_control() && c != '=' && c != '#')
}

#[derive(Debug, Clone, Eq)]
pub struct SwitchNetlist {
    name: String,
    supply_mode: SupplyMode,
    rails: Vec<Rail>,
    inputs: Vec<String>,
    outputs: Vec<String>,
    nodes: Vec<String>,
    devices: Vec<Device>,
}

/// Device order is not significant.
impl PartialEq for SwitchNetlist {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
            && self.supply_mode == other.supply_mode
            && self.rails == other.rails
            && self.inputs == other.inputs
            && self.outputs == other.outputs
            && self.nodes == other.nodes
            && self.sorted_devices() == other.sorted_devices()
    }
}

impl SwitchNetlist {
    pub fn new(
        name: &str,
        supply_mode: SupplyMode,
        rails: Vec<Rail>,
        inputs: Vec<String>,
        outputs: Vec<String>,
        nodes: Vec<String>,
        devices: Vec<Device>,
    ) -> Result<Self, NetlistError> {
        if !valid_name(name) {
            return Err(NetlistError::InvalidName(name.to_string()));
        }
        let mut names = BTreeSet::new();
        let declared = rails
            .iter()
            .map(|r| &r.name)
            .chain(&inputs)
            .chain(&outputs)
            .chain(&nodes);
        for n in declared {
            if !valid_name(n) {
                return Err(NetlistError::InvalidName(n.clone()));
            }
            if !names.insert(n.as_str()) {
                return Err(NetlistError::DuplicateName(n.clone()));
            }
        }
        for r in &rails {
            if !r.level.is_quiescent() {
                return Err(NetlistError::IllegalRailLevel(r.name.clone()));
            }
            if r.level == Voltage::HALF && supply_mode == SupplyMode::OneSupply {
                return Err(NetlistError::SupplyModeViolation(r.name.clone()));
            }
        }
        let mut ids = BTreeSet::new();
        for d in &devices {
            if !valid_name(&d.id) {
                return Err(NetlistError::InvalidName(d.id.clone()));
            }
            if !ids.insert(d.id.as_str()) {
                return Err(NetlistError::DuplicateName(d.id.clone()));
            }
            for t in [&d.gate, &d.a, &d.b] {
                if !names.contains(t.as_str()) {
                    return Err(NetlistError::UnresolvedReference {
                        device: d.id.clone(),
                        name: t.clone(),
                    });
                }
            }
            if !threshold_in_range(d.vth) || d.vth.to_decimal().is_none() {
                return Err(NetlistError::InvalidThreshold {
                    device: d.id.clone(),
                    vth: d.vth,
                });
            }
        }
        Ok(SwitchNetlist {
            name: name.to_string(),
            supply_mode,
            rails,
            inputs,
            outputs,
            nodes,
            devices,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn supply_mode(&self) -> SupplyMode {
        self.supply_mode
    }

    pub fn rails(&self) -> &[Rail] {
        &self.rails
    }

    pub fn inputs(&self) -> &[String] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    /// Internal nodes.
    pub fn nodes(&self) -> &[String] {
        &self.nodes
    }

    pub fn devices(&self) -> &[Device] {
        &self.devices
    }

    pub fn device_count(&self) -> usize {
        self.devices.len()
    }

    /// Inputs, outputs and internal nodes; rails excluded.
    pub fn node_count(&self) -> usize {
        self.inputs.len() + self.outputs.len() + self.nodes.len()
    }

    pub fn sorted_devices(&self) -> Vec<&Device> {
        let mut v: Vec<&Device> = self.devices.iter().collect();
        v.sort_by(|x, y| x.id.cmp(&y.id));
        v
    }

    /// Same netlist with devices in the given order; used to check that
    /// solving does not depend on declaration order.
    pub fn with_device_order(&self, order: &[usize]) -> SwitchNetlist {
        let mut n = self.clone();
        n.devices = order.iter().map(|&i| self.devices[i].clone()).collect();
        n
    }

    pub fn iteration_bound(&self) -> usize {
        4 + 2 * self.node_count()
    }
}

pub(crate) fn threshold_in_range(v: Voltage) -> bool {
    v > Voltage::GND && v < Voltage::VDD
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NodeState {
    Resolved(Voltage),
    Unknown,
    Floating,
    Contention,
}

impl fmt::Display for NodeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeState::Resolved(v) => write!(f, "{v}"),
            NodeState::Unknown => f.write_str("unknown"),
            NodeState::Floating => f.write_str("floating"),
            NodeState::Contention => f.write_str("contention"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub states: BTreeMap<String, NodeState>,
    /// Nodes held at Vdd/2 by a conducting resistive path between Vdd and ground.
    pub static_power_nodes: BTreeSet<String>,
    pub iterations: usize,
}

impl SolveResult {
    pub fn state(&self, node: &str) -> Option<NodeState> {
        self.states.get(node).copied()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Conduction {
    On,
    Off,
    Maybe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Strength {
    None,
    Weak,
    Strong,
}

// Best path strength to each of the three quiescent levels.
type Reach = [Strength; 3];

fn slot(v: Voltage) -> usize {
    if v == Voltage::GND {
        0
    } else if v == Voltage::HALF {
        1
    } else {
        2
    }
}

const SLOT_VOLTAGE: [Voltage; 3] = [Voltage::GND, Voltage::HALF, Voltage::VDD];

// Resolution of a node from its path classification; the flag marks a
// resistive Vdd-to-ground divider.
fn classify(reach: &Reach) -> (NodeState, bool) {
    let strong: Vec<usize> = (0..3).filter(|&i| reach[i] == Strength::Strong).collect();
    match strong.len() {
        1 => return (NodeState::Resolved(SLOT_VOLTAGE[strong[0]]), false),
        n if n >= 2 => return (NodeState::Contention, false),
        _ => {}
    }
    let weak: Vec<usize> = (0..3).filter(|&i| reach[i] == Strength::Weak).collect();
    match weak.as_slice() {
        [] => (NodeState::Floating, false),
        [only] => (NodeState::Resolved(SLOT_VOLTAGE[*only]), false),
        [0, 2] => (NodeState::Resolved(Voltage::HALF), true),
        _ => (NodeState::Contention, false),
    }
}

struct Indexed {
    names: Vec<String>,
    // Fixed voltage for rails and inputs.
    source: Vec<Option<Voltage>>,
    terminals: Vec<(usize, usize, usize)>,
}

fn index(n: &SwitchNetlist, inputs: &BTreeMap<String, Voltage>) -> Result<Indexed, SolveError> {
    for name in inputs.keys() {
        if !n.inputs.contains(name) {
            return Err(SolveError::UnknownInput(name.clone()));
        }
    }
    let mut names = Vec::new();
    let mut source = Vec::new();
    for r in &n.rails {
        names.push(r.name.clone());
        source.push(Some(r.level));
    }
    for i in &n.inputs {
        let v = *inputs
            .get(i)
            .ok_or_else(|| SolveError::MissingInput(i.clone()))?;
        if !v.is_quiescent() {
            return Err(SolveError::IllegalInputVoltage {
                node: i.clone(),
                voltage: v,
            });
        }
        names.push(i.clone());
        source.push(Some(v));
    }
    for o in n.outputs.iter().chain(&n.nodes) {
        names.push(o.clone());
        source.push(None);
    }
    let pos: HashMap<&str, usize> = names
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let terminals = n
        .devices
        .iter()
        .map(|d| (pos[d.gate.as_str()], pos[d.a.as_str()], pos[d.b.as_str()]))
        .collect();
    Ok(Indexed {
        names,
        source,
        terminals,
    })
}

/// Path strength from every source to every node, through devices accepted by
/// `conducts`. Paths do not pass through other sources.
fn reach(ix: &Indexed, n: &SwitchNetlist, conducts: &[bool]) -> Vec<Reach> {
    let count = ix.names.len();
    let mut adj: Vec<Vec<(usize, bool)>> = vec![Vec::new(); count];
    for (d, &(_, a, b)) in ix.terminals.iter().enumerate() {
        if conducts[d] && a != b {
            let r = n.devices[d].resistive;
            adj[a].push((b, r));
            adj[b].push((a, r));
        }
    }
    let mut out = vec![[Strength::None; 3]; count];
    for (s, level) in ix.source.iter().enumerate() {
        let Some(level) = level else { continue };
        // 0-1 BFS on the number of resistive devices along the path.
        let mut dist = vec![usize::MAX; count];
        let mut queue = VecDeque::new();
        dist[s] = 0;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            if u != s && ix.source[u].is_some() {
                continue;
            }
            for &(v, r) in &adj[u] {
                let w = dist[u] + r as usize;
                if w < dist[v] {
                    dist[v] = w;
                    if r {
                        queue.push_back(v);
                    } else {
                        queue.push_front(v);
                    }
                }
            }
        }
        let k = slot(*level);
        for (node, &d) in dist.iter().enumerate() {
            if node == s || ix.source[node].is_some() || d == usize::MAX {
                continue;
            }
            let strength = if d == 0 {
                Strength::Strong
            } else {
                Strength::Weak
            };
            out[node][k] = out[node][k].max(strength);
        }
    }
    out
}

/// Steady-state node values for the given input voltages.
pub fn solve(
    n: &SwitchNetlist,
    inputs: &BTreeMap<String, Voltage>,
) -> Result<SolveResult, SolveError> {
    let ix = index(n, inputs)?;
    let count = ix.names.len();
    let mut state: Vec<NodeState> = ix
        .source
        .iter()
        .map(|s| s.map_or(NodeState::Unknown, NodeState::Resolved))
        .collect();
    let mut divider = vec![false; count];
    let bound = n.iteration_bound();
    let mut iterations = 0;

    loop {
        iterations += 1;
        if iterations > bound {
            return Err(SolveError::OscillationDetected(bound));
        }
        let conduction: Vec<Conduction> = ix
            .terminals
            .iter()
            .enumerate()
            .map(|(d, &(g, _, _))| {
                let dev = &n.devices[d];
                match state[g] {
                    NodeState::Resolved(v) => {
                        let on = match dev.polarity {
                            Polarity::N => v >= dev.vth,
                            Polarity::P => v <= dev.vth,
                        };
                        if on {
                            Conduction::On
                        } else {
                            Conduction::Off
                        }
                    }
                    _ => Conduction::Maybe,
                }
            })
            .collect();
        let definite: Vec<bool> = conduction.iter().map(|c| *c == Conduction::On).collect();
        let possible: Vec<bool> = conduction.iter().map(|c| *c != Conduction::Off).collect();
        let sure = reach(&ix, n, &definite);
        let maybe = reach(&ix, n, &possible);

        let mut next = state.clone();
        for node in 0..count {
            if ix.source[node].is_some() {
                continue;
            }
            if sure[node] == maybe[node] {
                let (s, div) = classify(&sure[node]);
                next[node] = s;
                divider[node] = div;
            } else {
                next[node] = NodeState::Unknown;
                divider[node] = false;
            }
        }
        if next == state {
            break;
        }
        state = next;
    }

    let first_node = n.rails.len();
    let states = (first_node..count)
        .map(|i| (ix.names[i].clone(), state[i]))
        .collect();
    let static_power_nodes = (first_node..count)
        .filter(|&i| divider[i])
        .map(|i| ix.names[i].clone())
        .collect();
    Ok(SolveResult {
        states,
        static_power_nodes,
        iterations,
    })
}

fn v(numer: i64, denom: i64) -> Voltage {
    Voltage::new(numer, denom).expect("constant voltage in range")
}

fn names(list: &[&str]) -> Vec<String> {
    list.iter().map(|s| s.to_string()).collect()
}

fn vdd_gnd() -> Vec<Rail> {
    vec![
        Rail {
            name: "vdd".into(),
            level: Voltage::VDD,
        },
        Rail {
            name: "gnd".into(),
            level: Voltage::GND,
        },
    ]
}

fn rails_for(mode: SupplyMode) -> Vec<Rail> {
    let mut rails = vdd_gnd();
    if mode == SupplyMode::TwoSupplies {
        rails.insert(
            1,
            Rail {
                name: "half".into(),
                level: Voltage::HALF,
            },
        );
    }
    rails
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InverterKind {
    NotBin,
    Ni,
    Pi,
}

impl InverterKind {
    /// Switching point: binary inverters at Vdd/2, NI at Vdd/4, PI at 3Vdd/4.
    pub fn threshold(self) -> Voltage {
        match self {
            InverterKind::NotBin => v(1, 2),
            InverterKind::Ni => v(1, 4),
            InverterKind::Pi => v(3, 4),
        }
    }

    fn name(self) -> &'static str {
        match self {
            InverterKind::NotBin => "not",
            InverterKind::Ni => "ni",
            InverterKind::Pi => "pi",
        }
    }
}

fn inverter_devices(prefix: &str, input: &str, output: &str, vth: Voltage) -> [Device; 2] {
    [
        Device::new(
            &format!("{prefix}_p"),
            Polarity::P,
            input,
            "vdd",
            output,
            vth,
        ),
        Device::new(
            &format!("{prefix}_n"),
            Polarity::N,
            input,
            output,
            "gnd",
            vth,
        ),
    ]
}

/// Complementary two-device inverter on input `in`, output `out`.
pub fn netlist_inverter(kind: InverterKind) -> SwitchNetlist {
    SwitchNetlist::new(
        kind.name(),
        SupplyMode::OneSupply,
        vdd_gnd(),
        names(&["in"]),
        names(&["out"]),
        vec![],
        inverter_devices("m", "in", "out", kind.threshold()).to_vec(),
    )
    .expect("reference inverter is valid")
}

// Transmission gate: N device on `on_high`, P device on `on_low`.
fn transmission_gate(prefix: &str, on_high: &str, on_low: &str, a: &str, b: &str) -> [Device; 2] {
    let half = v(1, 2);
    [
        Device::new(&format!("{prefix}_n"), Polarity::N, on_high, a, b, half),
        Device::new(&format!("{prefix}_p"), Polarity::P, on_low, a, b, half),
    ]
}

/// Transmission-gate MUX2. Inputs: control `c`, its complement `cn`, data
/// `a0` and `a1`.
pub fn netlist_mux2() -> SwitchNetlist {
    let mut devices = Vec::new();
    devices.extend(transmission_gate("tg0", "cn", "c", "a0", "out"));
    devices.extend(transmission_gate("tg1", "c", "cn", "a1", "out"));
    SwitchNetlist::new(
        "mux2",
        SupplyMode::OneSupply,
        vdd_gnd(),
        names(&["c", "cn", "a0", "a1"]),
        names(&["out"]),
        vec![],
        devices,
    )
    .expect("reference mux2 is valid")
}

/// Ternary MUX driven by the threshold decode of its control: `ni` = NI(s),
/// `pi` = PI(s). Internally it builds the complements and a one-hot select for
/// the middle input (`sel1` = NOR(ni, !pi)), then steers one of three
/// transmission gates onto `out`.
pub fn netlist_mux3() -> SwitchNetlist {
    let half = v(1, 2);
    let mut devices = Vec::new();
    devices.extend(inverter_devices("inv_ni", "ni", "nin", half));
    devices.extend(inverter_devices("inv_pi", "pi", "pin", half));
    devices.push(Device::new(
        "nor_pa",
        Polarity::P,
        "ni",
        "vdd",
        "nor_x",
        half,
    ));
    devices.push(Device::new(
        "nor_pb",
        Polarity::P,
        "pin",
        "nor_x",
        "sel1",
        half,
    ));
    devices.push(Device::new(
        "nor_na",
        Polarity::N,
        "ni",
        "sel1",
        "gnd",
        half,
    ));
    devices.push(Device::new(
        "nor_nb",
        Polarity::N,
        "pin",
        "sel1",
        "gnd",
        half,
    ));
    devices.extend(inverter_devices("inv_sel1", "sel1", "sel1n", half));
    devices.extend(transmission_gate("tg0", "ni", "nin", "a0", "out"));
    devices.extend(transmission_gate("tg1", "sel1", "sel1n", "a1", "out"));
    devices.extend(transmission_gate("tg2", "pin", "pi", "a2", "out"));
    SwitchNetlist::new(
        "mux3",
        SupplyMode::OneSupply,
        vdd_gnd(),
        names(&["ni", "pi", "a0", "a1", "a2"]),
        names(&["out"]),
        names(&["nin", "pin", "nor_x", "sel1", "sel1n"]),
        devices,
    )
    .expect("reference mux3 is valid")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Rotation {
    Succ,
    Pred,
}

// Decode inputs: A = NI(Y), B = PI(Y). Exactly one of the three output paths
// conducts for each Y; in one-supply mode the middle level comes from a gated
// resistive divider.
fn rotation_core(rot: Rotation, mode: SupplyMode) -> SwitchNetlist {
    let half = v(1, 2);
    let (name, mut devices, mid_switch) = match rot {
        // Y=0 -> 1, Y=1 -> 2, Y=2 -> 0.
        Rotation::Succ => (
            "succ",
            vec![
                Device::new("up_n", Polarity::N, "B", "vdd", "m", half),
                Device::new("up_p", Polarity::P, "A", "m", "out", half),
                Device::new("dn", Polarity::P, "B", "out", "gnd", half),
            ],
            (Polarity::N, "A"),
        ),
        // Y=0 -> 2, Y=1 -> 0, Y=2 -> 1.
        Rotation::Pred => (
            "pred",
            vec![
                Device::new("up", Polarity::N, "A", "vdd", "out", half),
                Device::new("dn_n", Polarity::N, "B", "out", "m", half),
                Device::new("dn_p", Polarity::P, "A", "m", "gnd", half),
            ],
            (Polarity::P, "B"),
        ),
    };
    let (pol, gate) = mid_switch;
    let mut nodes = names(&["m"]);
    match mode {
        SupplyMode::TwoSupplies => {
            devices.push(Device::new("mid", pol, gate, "half", "out", half));
        }
        SupplyMode::OneSupply => {
            devices.push(Device::new("div_sw_hi", pol, gate, "vdd", "div_hi", half));
            devices.push(
                Device::new("div_r_hi", Polarity::N, "vdd", "div_hi", "out", half).resistive(),
            );
            devices.push(
                Device::new("div_r_lo", Polarity::N, "vdd", "out", "div_lo", half).resistive(),
            );
            devices.push(Device::new("div_sw_lo", pol, gate, "div_lo", "gnd", half));
            nodes.extend(names(&["div_hi", "div_lo"]));
        }
    }
    let suffix = match mode {
        SupplyMode::TwoSupplies => "2ps",
        SupplyMode::OneSupply => "1ps",
    };
    SwitchNetlist::new(
        &format!("{name}_core_{suffix}"),
        mode,
        rails_for(mode),
        names(&["A", "B"]),
        names(&["out"]),
        nodes,
        devices,
    )
    .expect("reference rotation netlist is valid")
}

/// Successor switch network with external decode inputs `A` = NI(Y) and
/// `B` = PI(Y). 4 devices with two supplies, 7 with one.
pub fn netlist_succ(mode: SupplyMode) -> SwitchNetlist {
    rotation_core(Rotation::Succ, mode)
}

/// Predecessor counterpart of [`netlist_succ`].
pub fn netlist_pred(mode: SupplyMode) -> SwitchNetlist {
    rotation_core(Rotation::Pred, mode)
}

/// Adds the NI/PI threshold detectors in front of a rotation network so the
/// circuit takes the ternary input `Y` directly.
pub fn with_threshold_decode(core: &SwitchNetlist, name: &str) -> SwitchNetlist {
    let mut devices = core.devices.clone();
    devices.extend(inverter_devices(
        "det_ni",
        "Y",
        "A",
        InverterKind::Ni.threshold(),
    ));
    devices.extend(inverter_devices(
        "det_pi",
        "Y",
        "B",
        InverterKind::Pi.threshold(),
    ));
    let mut nodes = names(&["A", "B"]);
    nodes.extend(core.nodes.iter().cloned());
    SwitchNetlist::new(
        name,
        core.supply_mode,
        core.rails.clone(),
        names(&["Y"]),
        core.outputs.clone(),
        nodes,
        devices,
    )
    .expect("decoded rotation netlist is valid")
}

pub fn netlist_succ_decoded(mode: SupplyMode) -> SwitchNetlist {
    let name = match mode {
        SupplyMode::TwoSupplies => "succ_2ps",
        SupplyMode::OneSupply => "succ_1ps",
    };
    with_threshold_decode(&netlist_succ(mode), name)
}

pub fn netlist_pred_decoded(mode: SupplyMode) -> SwitchNetlist {
    let name = match mode {
        SupplyMode::TwoSupplies => "pred_2ps",
        SupplyMode::OneSupply => "pred_1ps",
    };
    with_threshold_decode(&netlist_pred(mode), name)
}

/// Every reference netlist, named as in the shipped `.tnl` files.
pub fn reference_netlists() -> Vec<(Oracle, SwitchNetlist)> {
    use SupplyMode::*;
    vec![
        (Oracle::Ni, netlist_inverter(InverterKind::Ni)),
        (Oracle::Pi, netlist_inverter(InverterKind::Pi)),
        (Oracle::Not, netlist_inverter(InverterKind::NotBin)),
        (Oracle::Mux2, netlist_mux2()),
        (Oracle::Mux3, netlist_mux3()),
        (Oracle::Succ, netlist_succ(TwoSupplies)),
        (Oracle::Succ, netlist_succ(OneSupply)),
        (Oracle::Pred, netlist_pred(TwoSupplies)),
        (Oracle::Pred, netlist_pred(OneSupply)),
        (Oracle::Succ, netlist_succ_decoded(TwoSupplies)),
        (Oracle::Succ, netlist_succ_decoded(OneSupply)),
        (Oracle::Pred, netlist_pred_decoded(TwoSupplies)),
        (Oracle::Pred, netlist_pred_decoded(OneSupply)),
    ]
}

/// Behavioral functions a netlist can be swept against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Oracle {
    Ni,
    Pi,
    Not,
    Succ,
    Pred,
    Mux2,
    Mux3,
}

impl Oracle {
    pub const ALL: [Oracle; 7] = [
        Oracle::Ni,
        Oracle::Pi,
        Oracle::Not,
        Oracle::Succ,
        Oracle::Pred,
        Oracle::Mux2,
        Oracle::Mux3,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Oracle::Ni => "ni",
            Oracle::Pi => "pi",
            Oracle::Not => "not",
            Oracle::Succ => "succ",
            Oracle::Pred => "pred",
            Oracle::Mux2 => "mux2",
            Oracle::Mux3 => "mux3",
        }
    }

    /// Behavioral inputs, in evaluation order.
    pub fn inputs(self) -> &'static [(&'static str, Domain)] {
        use Domain::*;
        match self {
            Oracle::Ni | Oracle::Pi => &[("in", Ternary)],
            Oracle::Not => &[("in", Binary)],
            Oracle::Succ | Oracle::Pred => &[("Y", Ternary)],
            Oracle::Mux2 => &[("c", Binary), ("a0", Ternary), ("a1", Ternary)],
            Oracle::Mux3 => &[
                ("s", Ternary),
                ("a0", Ternary),
                ("a1", Ternary),
                ("a2", Ternary),
            ],
        }
    }

    pub fn eval(self, x: &[Level]) -> Level {
        match self {
            Oracle::Ni => logic::ni(x[0]).level(),
            Oracle::Pi => logic::pi(x[0]).level(),
            Oracle::Not => logic::not_bin(x[0]).expect("binary domain"),
            Oracle::Succ => logic::succ(x[0]),
            Oracle::Pred => logic::pred(x[0]),
            Oracle::Mux2 => logic::mux2(x[0], x[1], x[2]).expect("binary control"),
            Oracle::Mux3 => logic::mux3(x[0], x[1], x[2], x[3]),
        }
    }

    /// Voltages for the behavioral inputs plus the auxiliary control signals
    /// netlists may expose: `A`..`D` (NI, PI of `Y` and complements), `cn`,
    /// and `ni`/`pi`/`nin`/`pin` for a MUX3 control.
    pub fn standard_decode(self, x: &[Level]) -> BTreeMap<String, Voltage> {
        let volts = |l: Level| level_to_voltage(l, Radix::Ternary).expect("ternary levels map");
        let bin = |b: BinaryLevel| volts(b.level());
        let mut m: BTreeMap<String, Voltage> = self
            .inputs()
            .iter()
            .zip(x)
            .map(|((name, _), &l)| (name.to_string(), volts(l)))
            .collect();
        match self {
            Oracle::Succ | Oracle::Pred => {
                let (n, p) = (logic::ni(x[0]), logic::pi(x[0]));
                m.insert("A".into(), bin(n));
                m.insert("B".into(), bin(p));
                m.insert("C".into(), bin(!n));
                m.insert("D".into(), bin(!p));
            }
            Oracle::Mux2 => {
                let c = BinaryLevel::try_from(x[0]).expect("binary control");
                m.insert("cn".into(), bin(!c));
            }
            Oracle::Mux3 => {
                let (n, p) = (logic::ni(x[0]), logic::pi(x[0]));
                m.insert("ni".into(), bin(n));
                m.insert("pi".into(), bin(p));
                m.insert("nin".into(), bin(!n));
                m.insert("pin".into(), bin(!p));
            }
            _ => {}
        }
        m
    }

    fn input_space(self) -> Vec<Vec<Level>> {
        let mut combos = vec![Vec::new()];
        for (_, dom) in self.inputs() {
            combos = combos
                .into_iter()
                .flat_map(|prefix: Vec<Level>| {
                    dom.levels().iter().map(move |&l| {
                        let mut row = prefix.clone();
                        row.push(l);
                        row
                    })
                })
                .collect();
        }
        combos
    }
}

impl std::str::FromStr for Oracle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Oracle::ALL
            .into_iter()
            .find(|o| o.name() == s)
            .ok_or_else(|| format!("unknown oracle `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SweepError {
    #[error("netlist input `{0}` is not supplied by the decode")]
    UnmappedInput(String),
    #[error("netlist `{0}` must have exactly one output")]
    OutputCount(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepCase {
    pub inputs: Vec<Level>,
    pub expected: Voltage,
    pub result: Result<SolveResult, SolveError>,
}

impl SweepCase {
    pub fn output_state(&self, output: &str) -> Option<NodeState> {
        self.result.as_ref().ok().and_then(|r| r.state(output))
    }

    fn any_node(&self, want: NodeState) -> bool {
        self.result
            .as_ref()
            .map(|r| r.states.values().any(|s| *s == want))
            .unwrap_or(false)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub netlist: String,
    pub oracle: Oracle,
    pub output: String,
    pub input_names: Vec<String>,
    pub cases: Vec<SweepCase>,
}

impl EquivalenceReport {
    pub fn cases_checked(&self) -> usize {
        self.cases.len()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &SweepCase> {
        self.cases
            .iter()
            .filter(|c| c.output_state(&self.output) != Some(NodeState::Resolved(c.expected)))
    }

    pub fn mismatch_count(&self) -> usize {
        self.mismatches().count()
    }

    /// Cases where some node, internal or not, is in contention.
    pub fn contention_count(&self) -> usize {
        self.cases
            .iter()
            .filter(|c| c.any_node(NodeState::Contention))
            .count()
    }

    pub fn floating_count(&self) -> usize {
        self.cases
            .iter()
            .filter(|c| c.any_node(NodeState::Floating))
            .count()
    }

    pub fn oscillation_count(&self) -> usize {
        self.cases
            .iter()
            .filter(|c| matches!(c.result, Err(SolveError::OscillationDetected(_))))
            .count()
    }

    pub fn max_iterations(&self) -> usize {
        self.cases
            .iter()
            .filter_map(|c| c.result.as_ref().ok().map(|r| r.iterations))
            .max()
            .unwrap_or(0)
    }

    pub fn clean(&self) -> bool {
        self.mismatch_count() == 0
            && self.contention_count() == 0
            && self.floating_count() == 0
            && self.oscillation_count() == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{} cases, {} mismatches",
            self.cases_checked(),
            self.mismatch_count()
        )
    }
}

/// Solves `n` on every legal input of `oracle` and compares its single output
/// with the behavioral function.
pub fn equivalence_sweep(
    n: &SwitchNetlist,
    oracle: Oracle,
    decode: &dyn Fn(&[Level]) -> BTreeMap<String, Voltage>,
) -> Result<EquivalenceReport, SweepError> {
    let [output] = n.outputs() else {
        return Err(SweepError::OutputCount(n.name.clone()));
    };
    let mut cases = Vec::new();
    for ins in oracle.input_space() {
        let signals = decode(&ins);
        let drive = n
            .inputs
            .iter()
            .map(|i| {
                signals
                    .get(i)
                    .map(|v| (i.clone(), *v))
                    .ok_or_else(|| SweepError::UnmappedInput(i.clone()))
            })
            .collect::<Result<BTreeMap<_, _>, _>>()?;
        let expected = level_to_voltage(oracle.eval(&ins), Radix::Ternary).expect("levels map");
        cases.push(SweepCase {
            inputs: ins,
            expected,
            result: solve(n, &drive),
        });
    }
    Ok(EquivalenceReport {
        netlist: n.name.clone(),
        oracle,
        output: output.clone(),
        input_names: oracle.inputs().iter().map(|(s, _)| s.to_string()).collect(),
        cases,
    })
}

pub fn standard_sweep(n: &SwitchNetlist, oracle: Oracle) -> Result<EquivalenceReport, SweepError> {
    equivalence_sweep(n, oracle, &|x| oracle.standard_decode(x))
}

/// Input combination and the nodes held by a divider at it.
pub type PowerScan = Vec<(Vec<Level>, BTreeSet<String>)>;

/// Static-power nodes for every legal input combination.
pub fn static_power_scan(
    n: &SwitchNetlist,
    oracle: Oracle,
    decode: &dyn Fn(&[Level]) -> BTreeMap<String, Voltage>,
) -> Result<PowerScan, SweepError> {
    let report = equivalence_sweep(n, oracle, decode)?;
    Ok(report
        .cases
        .into_iter()
        .map(|c| {
            let nodes = c.result.map(|r| r.static_power_nodes).unwrap_or_default();
            (c.inputs, nodes)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn drive(pairs: &[(&str, Voltage)]) -> BTreeMap<String, Voltage> {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn ni_inverter_at_middle_level() {
        let n = netlist_inverter(InverterKind::Ni);
        assert!(n.devices().iter().all(|d| d.vth == v(1, 4)));
        let r = solve(&n, &drive(&[("in", Voltage::HALF)])).unwrap();
        assert_eq!(r.state("out"), Some(NodeState::Resolved(Voltage::GND)));
    }

    #[test]
    fn inverter_sweeps() {
        let sweep = |k: InverterKind| -> Vec<Voltage> {
            let n = netlist_inverter(k);
            [Voltage::GND, Voltage::HALF, Voltage::VDD]
                .iter()
                .map(
                    |&x| match solve(&n, &drive(&[("in", x)])).unwrap().state("out") {
                        Some(NodeState::Resolved(v)) => v,
                        other => panic!("{other:?}"),
                    },
                )
                .collect()
        };
        use Voltage as V;
        assert_eq!(sweep(InverterKind::Ni), [V::VDD, V::GND, V::GND]);
        assert_eq!(sweep(InverterKind::Pi), [V::VDD, V::VDD, V::GND]);
    }

    #[test]
    fn contention_when_both_networks_conduct() {
        // Binary inverter fed Vdd/2: both devices conduct.
        let n = netlist_inverter(InverterKind::NotBin);
        let r = solve(&n, &drive(&[("in", Voltage::HALF)])).unwrap();
        assert_eq!(r.state("out"), Some(NodeState::Contention));
    }

    #[test]
    fn divider_output_flags_static_power() {
        let n = netlist_succ_decoded(SupplyMode::OneSupply);
        let r = solve(&n, &drive(&[("Y", Voltage::GND)])).unwrap();
        assert_eq!(r.state("out"), Some(NodeState::Resolved(Voltage::HALF)));
        assert_eq!(r.static_power_nodes, BTreeSet::from(["out".to_string()]));
    }

    #[test]
    fn floating_and_unknown_states() {
        let half = v(1, 2);
        // `out` hangs off a switch that is off.
        let n = SwitchNetlist::new(
            "float",
            SupplyMode::OneSupply,
            vdd_gnd(),
            names(&["g"]),
            names(&["out"]),
            vec![],
            vec![Device::new("m", Polarity::N, "g", "vdd", "out", half)],
        )
        .unwrap();
        let r = solve(&n, &drive(&[("g", Voltage::GND)])).unwrap();
        assert_eq!(r.state("out"), Some(NodeState::Floating));

        // Gate driven by a floating node: conduction can never be decided.
        let n = SwitchNetlist::new(
            "unknown",
            SupplyMode::OneSupply,
            vdd_gnd(),
            names(&["g"]),
            names(&["out"]),
            names(&["x"]),
            vec![
                Device::new("m0", Polarity::N, "g", "vdd", "x", half),
                Device::new("m1", Polarity::N, "x", "vdd", "out", half),
            ],
        )
        .unwrap();
        let r = solve(&n, &drive(&[("g", Voltage::GND)])).unwrap();
        assert_eq!(r.state("x"), Some(NodeState::Floating));
        assert_eq!(r.state("out"), Some(NodeState::Unknown));
    }

    #[test]
    fn weak_paths_to_one_level_do_not_dissipate() {
        let half = v(1, 2);
        let n = SwitchNetlist::new(
            "pullups",
            SupplyMode::OneSupply,
            vdd_gnd(),
            vec![],
            names(&["out"]),
            vec![],
            vec![
                Device::new("r0", Polarity::N, "vdd", "vdd", "out", half).resistive(),
                Device::new("r1", Polarity::N, "vdd", "vdd", "out", half).resistive(),
            ],
        )
        .unwrap();
        let r = solve(&n, &BTreeMap::new()).unwrap();
        assert_eq!(r.state("out"), Some(NodeState::Resolved(Voltage::VDD)));
        assert!(r.static_power_nodes.is_empty());
    }

    #[test]
    fn input_validation() {
        let n = netlist_inverter(InverterKind::Ni);
        assert_eq!(
            solve(&n, &BTreeMap::new()),
            Err(SolveError::MissingInput("in".into()))
        );
        let bad = v(3, 10);
        assert_eq!(
            solve(&n, &drive(&[("in", bad)])),
            Err(SolveError::IllegalInputVoltage {
                node: "in".into(),
                voltage: bad
            })
        );
        assert_eq!(
            solve(&n, &drive(&[("in", Voltage::GND), ("zz", Voltage::GND)])),
            Err(SolveError::UnknownInput("zz".into()))
        );
    }

    #[test]
    fn construction_checks() {
        let half = v(1, 2);
        let one_with_half = SwitchNetlist::new(
            "x",
            SupplyMode::OneSupply,
            rails_for(SupplyMode::TwoSupplies),
            vec![],
            names(&["out"]),
            vec![],
            vec![],
        );
        assert_eq!(
            one_with_half,
            Err(NetlistError::SupplyModeViolation("half".into()))
        );
        let bad_vth = SwitchNetlist::new(
            "x",
            SupplyMode::OneSupply,
            vdd_gnd(),
            names(&["in"]),
            names(&["out"]),
            vec![],
            vec![Device::new(
                "m",
                Polarity::N,
                "in",
                "out",
                "gnd",
                Voltage::VDD,
            )],
        );
        assert!(matches!(
            bad_vth,
            Err(NetlistError::InvalidThreshold { .. })
        ));
        let dangling = SwitchNetlist::new(
            "x",
            SupplyMode::OneSupply,
            vdd_gnd(),
            names(&["in"]),
            names(&["out"]),
            vec![],
            vec![Device::new("m", Polarity::N, "in", "out", "GNDD", half)],
        );
        assert!(matches!(
            dangling,
            Err(NetlistError::UnresolvedReference { .. })
        ));
        let dup = SwitchNetlist::new(
            "x",
            SupplyMode::OneSupply,
            vdd_gnd(),
            names(&["in"]),
            names(&["in"]),
            vec![],
            vec![],
        );
        assert_eq!(dup, Err(NetlistError::DuplicateName("in".into())));
    }

    #[test]
    fn device_counts() {
        use SupplyMode::*;
        assert_eq!(netlist_inverter(InverterKind::Ni).device_count(), 2);
        assert_eq!(netlist_mux2().device_count(), 4);
        assert_eq!(netlist_mux3().device_count(), 16);
        assert_eq!(netlist_succ(TwoSupplies).device_count(), 4);
        assert_eq!(netlist_succ(OneSupply).device_count(), 7);
        assert_eq!(netlist_pred(TwoSupplies).device_count(), 4);
        assert_eq!(netlist_pred(OneSupply).device_count(), 7);
        assert_eq!(netlist_succ_decoded(OneSupply).device_count(), 11);
    }

    #[test]
    fn reference_netlists_are_equivalent() {
        for (oracle, n) in reference_netlists() {
            let r = standard_sweep(&n, oracle).unwrap();
            assert!(
                r.clean(),
                "{}: {} ({} contention, {} floating)",
                n.name(),
                r.summary(),
                r.contention_count(),
                r.floating_count()
            );
            assert!(r.max_iterations() <= n.iteration_bound());
        }
    }

    #[test]
    fn mux_sweeps_cover_the_full_domain() {
        assert_eq!(
            standard_sweep(&netlist_mux3(), Oracle::Mux3)
                .unwrap()
                .cases_checked(),
            81
        );
        assert_eq!(
            standard_sweep(&netlist_mux2(), Oracle::Mux2)
                .unwrap()
                .cases_checked(),
            18
        );
        let n = netlist_mux2();
        let r = solve(
            &n,
            &drive(&[
                ("c", Voltage::VDD),
                ("cn", Voltage::GND),
                ("a0", Voltage::HALF),
                ("a1", Voltage::VDD),
            ]),
        )
        .unwrap();
        assert_eq!(r.state("out"), Some(NodeState::Resolved(Voltage::VDD)));
    }

    #[test]
    fn corrupted_threshold_is_detected() {
        // The core only sees full-swing gates, so corrupt the NI detector.
        let good = netlist_succ_decoded(SupplyMode::TwoSupplies);
        let mut devices = good.devices().to_vec();
        let det = devices.iter_mut().find(|d| d.id == "det_ni_n").unwrap();
        det.vth = v(9, 10);
        let bad = SwitchNetlist::new(
            good.name(),
            good.supply_mode(),
            good.rails().to_vec(),
            good.inputs().to_vec(),
            good.outputs().to_vec(),
            good.nodes().to_vec(),
            devices,
        )
        .unwrap();
        let r = standard_sweep(&bad, Oracle::Succ).unwrap();
        assert!(r.mismatch_count() + r.floating_count() >= 1);
    }

    #[test]
    fn static_power_is_confined_to_single_supply_middle_level() {
        use SupplyMode::*;
        let scan = |n: &SwitchNetlist, o: Oracle| -> Vec<u8> {
            static_power_scan(n, o, &|x| o.standard_decode(x))
                .unwrap()
                .into_iter()
                .filter(|(_, nodes)| !nodes.is_empty())
                .map(|(ins, _)| ins[0].value())
                .collect()
        };
        assert_eq!(scan(&netlist_succ(OneSupply), Oracle::Succ), [0]);
        assert_eq!(scan(&netlist_pred(OneSupply), Oracle::Pred), [2]);
        assert!(scan(&netlist_succ(TwoSupplies), Oracle::Succ).is_empty());
        assert!(scan(&netlist_pred(TwoSupplies), Oracle::Pred).is_empty());
    }

    #[test]
    fn sweep_rejects_unmapped_inputs() {
        let err = standard_sweep(&netlist_mux2(), Oracle::Succ).unwrap_err();
        assert_eq!(err, SweepError::UnmappedInput("c".into()));
    }
}

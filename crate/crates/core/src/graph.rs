//! Behavioral gate graphs, the adder builders, evaluation and exhaustive
//! verification against [`add_digits`].

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::io;

use thiserror::Error;

use crate::logic::{self, add_digits, Level, LogicError, Radix};
use crate::table::TruthTable;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("input port `{0}` is not bound")]
    MissingInput(String),
    #[error("`{0}` is not an input port")]
    UnknownInput(String),
    #[error("domain violation at `{at}`: {source}")]
    DomainViolation {
        at: String,
        #[source]
        source: LogicError,
    },
    #[error("combinational cycle through {0:?}")]
    CycleDetected(Vec<String>),
    #[error("duplicate net name `{0}`")]
    DuplicateName(String),
    #[error("gate `{gate}` reads undriven net `{net}`")]
    UndrivenNet { gate: String, net: String },
    #[error("output `{port}` is driven by unknown net `{net}`")]
    UndrivenOutput { port: String, net: String },
    #[error("gate `{gate}` expects {expected} inputs, got {got}")]
    ArityMismatch {
        gate: String,
        expected: usize,
        got: usize,
    },
    #[error("binary input {port} of gate `{gate}` is driven by ternary net `{net}`")]
    BinaryDomain {
        gate: String,
        port: usize,
        net: String,
    },
    #[error("port signature mismatch: {0}")]
    PortSignatureMismatch(String),
    #[error("circuit has no outputs")]
    NoOutputs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Domain {
    Binary,
    Ternary,
}

impl Domain {
    pub fn levels(self) -> &'static [Level] {
        match self {
            Domain::Binary => Radix::Binary.levels(),
            Domain::Ternary => Radix::Ternary.levels(),
        }
    }

    pub fn of_radix(radix: Radix) -> Self {
        match radix {
            Radix::Binary => Domain::Binary,
            Radix::Ternary => Domain::Ternary,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SupplyMode {
    /// `Vdd` and `Vdd/2` rails; the middle level comes straight from a rail.
    TwoSupplies,
    /// `Vdd` only; the middle level comes from a resistive divider.
    OneSupply,
}

impl fmt::Display for SupplyMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SupplyMode::TwoSupplies => "two",
            SupplyMode::OneSupply => "one",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Ni,
    Pi,
    NotBin,
    Succ,
    Pred,
    /// Inputs: ternary control, then three data inputs.
    Mux3,
    /// Inputs: binary control, then two data inputs.
    Mux2,
    Const(Level),
}

impl GateKind {
    pub fn arity(self) -> usize {
        match self {
            GateKind::Ni | GateKind::Pi | GateKind::NotBin | GateKind::Succ | GateKind::Pred => 1,
            GateKind::Mux3 => 4,
            GateKind::Mux2 => 3,
            GateKind::Const(_) => 0,
        }
    }

    /// Domain demanded by each input port. Data inputs of the multiplexers
    /// accept either domain.
    pub fn input_domain(self, port: usize) -> Domain {
        match (self, port) {
            (GateKind::NotBin, 0) | (GateKind::Mux2, 0) => Domain::Binary,
            _ => Domain::Ternary,
        }
    }

    fn output_domain(self, inputs: &[Domain]) -> Domain {
        match self {
            GateKind::Ni | GateKind::Pi | GateKind::NotBin => Domain::Binary,
            GateKind::Succ | GateKind::Pred => Domain::Ternary,
            GateKind::Mux3 | GateKind::Mux2 => {
                if inputs[1..].iter().all(|d| *d == Domain::Binary) {
                    Domain::Binary
                } else {
                    Domain::Ternary
                }
            }
            GateKind::Const(l) if l.is_binary() => Domain::Binary,
            GateKind::Const(_) => Domain::Ternary,
        }
    }

    pub fn eval(self, inputs: &[Level]) -> Result<Level, LogicError> {
        Ok(match self {
            GateKind::Ni => logic::ni(inputs[0]).level(),
            GateKind::Pi => logic::pi(inputs[0]).level(),
            GateKind::NotBin => logic::not_bin(inputs[0])?,
            GateKind::Succ => logic::succ(inputs[0]),
            GateKind::Pred => logic::pred(inputs[0]),
            GateKind::Mux3 => logic::mux3(inputs[0], inputs[1], inputs[2], inputs[3]),
            GateKind::Mux2 => logic::mux2(inputs[0], inputs[1], inputs[2])?,
            GateKind::Const(l) => l,
        })
    }

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::Ni => "NI",
            GateKind::Pi => "PI",
            GateKind::NotBin => "NOT",
            GateKind::Succ => "SUCC",
            GateKind::Pred => "PRED",
            GateKind::Mux3 => "MUX3",
            GateKind::Mux2 => "MUX2",
            GateKind::Const(_) => "CONST",
        }
    }
}

/// The adders this crate knows how to build. Cost accounting uses this tag to
/// attribute a circuit to its published transistor-count table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AdderKind {
    TernaryHa,
    TernaryFaV1,
    TernaryFaV2,
    BinaryHaMux,
    BinaryHaStd14,
    BinaryFaMux,
    BinaryFaStd28,
}

impl AdderKind {
    pub const ALL: [AdderKind; 7] = [
        AdderKind::TernaryHa,
        AdderKind::TernaryFaV1,
        AdderKind::TernaryFaV2,
        AdderKind::BinaryHaMux,
        AdderKind::BinaryHaStd14,
        AdderKind::BinaryFaMux,
        AdderKind::BinaryFaStd28,
    ];

    pub fn id(self) -> &'static str {
        match self {
            AdderKind::TernaryHa => "ternary-ha",
            AdderKind::TernaryFaV1 => "ternary-fa-v1",
            AdderKind::TernaryFaV2 => "ternary-fa-v2",
            AdderKind::BinaryHaMux => "binary-ha-mux",
            AdderKind::BinaryHaStd14 => "binary-ha-std",
            AdderKind::BinaryFaMux => "binary-fa-mux",
            AdderKind::BinaryFaStd28 => "binary-fa-std",
        }
    }

    pub fn radix(self) -> Radix {
        match self {
            AdderKind::TernaryHa | AdderKind::TernaryFaV1 | AdderKind::TernaryFaV2 => {
                Radix::Ternary
            }
            _ => Radix::Binary,
        }
    }

    pub fn has_carry_in(self) -> bool {
        matches!(
            self,
            AdderKind::TernaryFaV1
                | AdderKind::TernaryFaV2
                | AdderKind::BinaryFaMux
                | AdderKind::BinaryFaStd28
        )
    }

    pub fn build(self) -> CircuitGraph {
        match self {
            AdderKind::TernaryHa => build_ternary_ha(),
            AdderKind::TernaryFaV1 => build_ternary_fa_v1(),
            AdderKind::TernaryFaV2 => build_ternary_fa_v2(),
            AdderKind::BinaryHaMux => build_binary_ha_mux(),
            AdderKind::BinaryHaStd14 => build_binary_ha_std14(),
            AdderKind::BinaryFaMux => build_binary_fa_mux(),
            AdderKind::BinaryFaStd28 => build_binary_fa_std28(),
        }
    }
}

impl std::str::FromStr for AdderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        AdderKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| format!("unknown circuit `{s}`"))
    }
}

impl fmt::Display for AdderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Net {
    Input(usize),
    Gate(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Port {
    pub name: String,
    pub domain: Domain,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub id: String,
    pub kind: GateKind,
    pub inputs: Vec<Net>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OutputPort {
    pub name: String,
    pub domain: Domain,
    pub net: Net,
}

/// Collects named inputs, gates and outputs; nets are referenced by name so
/// gates may be added in any order.
#[derive(Debug, Clone)]
pub struct CircuitBuilder {
    name: String,
    inputs: Vec<Port>,
    gates: Vec<(String, GateKind, Vec<String>)>,
    outputs: Vec<(String, String)>,
    kind: Option<AdderKind>,
}

impl CircuitBuilder {
    pub fn new(name: impl Into<String>) -> Self {
        CircuitBuilder {
            name: name.into(),
            inputs: Vec::new(),
            gates: Vec::new(),
            outputs: Vec::new(),
            kind: None,
        }
    }

    pub fn input(&mut self, name: &str, domain: Domain) -> &mut Self {
        self.inputs.push(Port {
            name: name.to_string(),
            domain,
        });
        self
    }

    pub fn gate(&mut self, id: &str, kind: GateKind, inputs: &[&str]) -> &mut Self {
        self.gates.push((
            id.to_string(),
            kind,
            inputs.iter().map(|s| s.to_string()).collect(),
        ));
        self
    }

    pub fn output(&mut self, name: &str, net: &str) -> &mut Self {
        self.outputs.push((name.to_string(), net.to_string()));
        self
    }

    pub fn kind(&mut self, kind: AdderKind) -> &mut Self {
        self.kind = Some(kind);
        self
    }

    pub fn build(&self) -> Result<CircuitGraph, GraphError> {
        let mut names: HashMap<&str, Net> = HashMap::new();
        for (i, p) in self.inputs.iter().enumerate() {
            if names.insert(&p.name, Net::Input(i)).is_some() {
                return Err(GraphError::DuplicateName(p.name.clone()));
            }
        }
        for (i, (id, _, _)) in self.gates.iter().enumerate() {
            if names.insert(id, Net::Gate(i)).is_some() {
                return Err(GraphError::DuplicateName(id.clone()));
            }
        }

        let mut gates = Vec::with_capacity(self.gates.len());
        for (id, kind, ins) in &self.gates {
            if ins.len() != kind.arity() {
                return Err(GraphError::ArityMismatch {
                    gate: id.clone(),
                    expected: kind.arity(),
                    got: ins.len(),
                });
            }
            let inputs = ins
                .iter()
                .map(|n| {
                    names
                        .get(n.as_str())
                        .copied()
                        .ok_or_else(|| GraphError::UndrivenNet {
                            gate: id.clone(),
                            net: n.clone(),
                        })
                })
                .collect::<Result<Vec<_>, _>>()?;
            gates.push(Gate {
                id: id.clone(),
                kind: *kind,
                inputs,
            });
        }

        let order = topological_order(&gates)?;

        // Domain inference doubles as the static binary-domain check.
        let mut gate_domain = vec![Domain::Ternary; gates.len()];
        let net_domain = |net: Net, gd: &[Domain]| match net {
            Net::Input(i) => self.inputs[i].domain,
            Net::Gate(g) => gd[g],
        };
        for &g in &order {
            let gate = &gates[g];
            let doms: Vec<Domain> = gate
                .inputs
                .iter()
                .map(|&n| net_domain(n, &gate_domain))
                .collect();
            for (port, d) in doms.iter().enumerate() {
                if gate.kind.input_domain(port) == Domain::Binary && *d != Domain::Binary {
                    return Err(GraphError::BinaryDomain {
                        gate: gate.id.clone(),
                        port,
                        net: net_name(&self.inputs, &gates, gate.inputs[port]).to_string(),
                    });
                }
            }
            gate_domain[g] = gate.kind.output_domain(&doms);
        }

        if self.outputs.is_empty() {
            return Err(GraphError::NoOutputs);
        }
        let mut outputs = Vec::with_capacity(self.outputs.len());
        for (port, net) in &self.outputs {
            let n = names
                .get(net.as_str())
                .copied()
                .ok_or_else(|| GraphError::UndrivenOutput {
                    port: port.clone(),
                    net: net.clone(),
                })?;
            outputs.push(OutputPort {
                name: port.clone(),
                domain: net_domain(n, &gate_domain),
                net: n,
            });
        }

        Ok(CircuitGraph {
            name: self.name.clone(),
            inputs: self.inputs.clone(),
            gates,
            outputs,
            order,
            kind: self.kind,
        })
    }
}

fn net_name<'a>(inputs: &'a [Port], gates: &'a [Gate], net: Net) -> &'a str {
    match net {
        Net::Input(i) => &inputs[i].name,
        Net::Gate(g) => &gates[g].id,
    }
}

fn topological_order(gates: &[Gate]) -> Result<Vec<usize>, GraphError> {
    let mut indegree = vec![0usize; gates.len()];
    let mut fanout: Vec<Vec<usize>> = vec![Vec::new(); gates.len()];
    for (g, gate) in gates.iter().enumerate() {
        for net in &gate.inputs {
            if let Net::Gate(src) = *net {
                indegree[g] += 1;
                fanout[src].push(g);
            }
        }
    }
    let mut ready: std::collections::VecDeque<usize> =
        (0..gates.len()).filter(|&g| indegree[g] == 0).collect();
    let mut order = Vec::with_capacity(gates.len());
    while let Some(g) = ready.pop_front() {
        order.push(g);
        for &next in &fanout[g] {
            indegree[next] -= 1;
            if indegree[next] == 0 {
                ready.push_back(next);
            }
        }
    }
    if order.len() != gates.len() {
        let mut stuck: Vec<String> = (0..gates.len())
            .filter(|&g| indegree[g] > 0)
            .map(|g| gates[g].id.clone())
            .collect();
        stuck.sort();
        return Err(GraphError::CycleDetected(stuck));
    }
    Ok(order)
}

/// An immutable, acyclic behavioral circuit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CircuitGraph {
    name: String,
    inputs: Vec<Port>,
    gates: Vec<Gate>,
    outputs: Vec<OutputPort>,
    order: Vec<usize>,
    kind: Option<AdderKind>,
}

impl CircuitGraph {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn inputs(&self) -> &[Port] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[OutputPort] {
        &self.outputs
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn kind(&self) -> Option<AdderKind> {
        self.kind
    }

    /// Evaluates with inputs given positionally, in declaration order.
    pub fn evaluate_ports(&self, inputs: &[Level]) -> Result<Vec<Level>, GraphError> {
        if inputs.len() != self.inputs.len() {
            let missing = self
                .inputs
                .get(inputs.len())
                .map(|p| p.name.clone())
                .unwrap_or_default();
            return Err(GraphError::MissingInput(missing));
        }
        for (port, &v) in self.inputs.iter().zip(inputs) {
            if port.domain == Domain::Binary && !v.is_binary() {
                return Err(GraphError::DomainViolation {
                    at: port.name.clone(),
                    source: LogicError::DomainViolation(v.value()),
                });
            }
        }
        let mut values = vec![Level::ZERO; self.gates.len()];
        let mut args = Vec::with_capacity(4);
        for &g in &self.order {
            let gate = &self.gates[g];
            args.clear();
            args.extend(gate.inputs.iter().map(|&n| match n {
                Net::Input(i) => inputs[i],
                Net::Gate(src) => values[src],
            }));
            values[g] = gate
                .kind
                .eval(&args)
                .map_err(|source| GraphError::DomainViolation {
                    at: gate.id.clone(),
                    source,
                })?;
        }
        Ok(self
            .outputs
            .iter()
            .map(|o| match o.net {
                Net::Input(i) => inputs[i],
                Net::Gate(g) => values[g],
            })
            .collect())
    }

    pub fn evaluate(
        &self,
        inputs: &BTreeMap<String, Level>,
    ) -> Result<BTreeMap<String, Level>, GraphError> {
        if let Some(extra) = inputs
            .keys()
            .find(|k| !self.inputs.iter().any(|p| &p.name == *k))
        {
            return Err(GraphError::UnknownInput(extra.clone()));
        }
        let ordered = self
            .inputs
            .iter()
            .map(|p| {
                inputs
                    .get(&p.name)
                    .copied()
                    .ok_or_else(|| GraphError::MissingInput(p.name.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let outs = self.evaluate_ports(&ordered)?;
        Ok(self
            .outputs
            .iter()
            .map(|o| o.name.clone())
            .zip(outs)
            .collect())
    }

    /// Every legal input combination, first input most significant.
    pub fn input_space(&self) -> Vec<Vec<Level>> {
        let mut combos = vec![Vec::new()];
        for port in &self.inputs {
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    port.domain.levels().iter().map(move |&v| {
                        let mut row = prefix.clone();
                        row.push(v);
                        row
                    })
                })
                .collect();
        }
        combos
    }
}

pub fn evaluate(
    c: &CircuitGraph,
    inputs: &BTreeMap<String, Level>,
) -> Result<BTreeMap<String, Level>, GraphError> {
    c.evaluate(inputs)
}

pub fn exhaustive_table(c: &CircuitGraph) -> Result<TruthTable, GraphError> {
    let rows = c
        .input_space()
        .into_iter()
        .map(|ins| c.evaluate_ports(&ins).map(|outs| (ins, outs)))
        .collect::<Result<Vec<_>, _>>()?;
    let domains: Vec<&[Level]> = c.inputs.iter().map(|p| p.domain.levels()).collect();
    Ok(TruthTable::new(
        c.inputs.iter().map(|p| p.name.clone()).collect(),
        c.outputs.iter().map(|p| p.name.clone()).collect(),
        &domains,
        rows,
    )
    .expect("input_space enumerates the full domain"))
}

/// Text truth table with binary inputs and outputs shown as bits.
pub fn table_text(c: &CircuitGraph) -> Result<String, GraphError> {
    let bits: Vec<bool> = c
        .inputs
        .iter()
        .map(|p| p.domain)
        .chain(c.outputs.iter().map(|p| p.domain))
        .map(|d| d == Domain::Binary)
        .collect();
    Ok(exhaustive_table(c)?.to_text_with_bits(&bits))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Case {
    pub inputs: Vec<Level>,
    pub expected: Vec<Level>,
    pub actual: Vec<Level>,
}

impl Case {
    pub fn matches(&self) -> bool {
        self.expected == self.actual
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationReport {
    pub circuit: String,
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    pub cases: Vec<Case>,
}

impl VerificationReport {
    pub fn cases_checked(&self) -> usize {
        self.cases.len()
    }

    pub fn mismatches(&self) -> impl Iterator<Item = &Case> {
        self.cases.iter().filter(|c| !c.matches())
    }

    pub fn mismatch_count(&self) -> usize {
        self.mismatches().count()
    }

    pub fn passed(&self) -> bool {
        self.mismatch_count() == 0
    }

    pub fn summary(&self) -> String {
        format!(
            "{} cases, {} mismatches",
            self.cases_checked(),
            self.mismatch_count()
        )
    }

    /// Columns: inputs, actual outputs, `<output>_expected`, `match`.
    pub fn write_csv<W: io::Write>(&self, w: W) -> csv::Result<()> {
        let mut wtr = csv::Writer::from_writer(w);
        let mut header: Vec<String> = self.input_names.clone();
        header.extend(self.output_names.iter().cloned());
        header.extend(self.output_names.iter().map(|n| format!("{n}_expected")));
        header.push("match".to_string());
        wtr.write_record(&header)?;
        for case in &self.cases {
            let mut rec: Vec<String> = case
                .inputs
                .iter()
                .chain(&case.actual)
                .chain(&case.expected)
                .map(|l| l.to_string())
                .collect();
            rec.push(case.matches().to_string());
            wtr.write_record(&rec)?;
        }
        wtr.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)
            .expect("writing to a Vec cannot fail");
        String::from_utf8(buf).expect("csv output is UTF-8")
    }
}

fn check_adder_signature(c: &CircuitGraph, radix: Radix, with_cin: bool) -> Result<(), GraphError> {
    let data = Domain::of_radix(radix);
    let mut want_in = vec![("X", data), ("Y", data)];
    if with_cin {
        want_in.push(("CIN", Domain::Binary));
    }
    let want_out = [("SUM", data), ("COUT", Domain::Binary)];
    let got_in: Vec<(&str, Domain)> = c
        .inputs
        .iter()
        .map(|p| (p.name.as_str(), p.domain))
        .collect();
    let got_out: Vec<(&str, Domain)> = c
        .outputs
        .iter()
        .map(|p| (p.name.as_str(), p.domain))
        .collect();
    if got_in != want_in || got_out != want_out {
        return Err(GraphError::PortSignatureMismatch(format!(
            "`{}` has inputs {:?} and outputs {:?}, expected {:?} -> {:?}",
            c.name, got_in, got_out, want_in, want_out
        )));
    }
    Ok(())
}

/// Compares the circuit against digit addition on every legal input.
pub fn exhaustive_verify(
    c: &CircuitGraph,
    radix: Radix,
    with_cin: bool,
) -> Result<VerificationReport, GraphError> {
    check_adder_signature(c, radix, with_cin)?;
    let to_digit = |l: Level| {
        radix
            .level_to_digit(l)
            .expect("signature check fixes port domains")
    };
    let mut cases = Vec::new();
    for ins in c.input_space() {
        let cin = with_cin && ins[2] == Level::TWO;
        let (sum, cout) = add_digits(to_digit(ins[0]), to_digit(ins[1]), cin, radix)
            .expect("port domains bound the digits");
        let expected = vec![
            radix.digit_to_level(sum).expect("sum is a digit"),
            crate::logic::BinaryLevel::from_bool(cout).level(),
        ];
        let actual = c.evaluate_ports(&ins)?;
        cases.push(Case {
            inputs: ins,
            expected,
            actual,
        });
    }
    Ok(VerificationReport {
        circuit: c.name.clone(),
        input_names: c.inputs.iter().map(|p| p.name.clone()).collect(),
        output_names: c.outputs.iter().map(|p| p.name.clone()).collect(),
        cases,
    })
}

/// Verifies a built-in adder with the signature its kind implies.
pub fn verify_builtin(kind: AdderKind) -> VerificationReport {
    exhaustive_verify(&kind.build(), kind.radix(), kind.has_carry_in())
        .expect("built-in adders have the standard signature")
}

// Shared half-adder core: sum `sum_ha` and carry `cout_ha` from X, Y, plus the
// Y threshold decode that the full adders reuse for their second carry.
fn ternary_ha_core(b: &mut CircuitBuilder) {
    b.input("X", Domain::Ternary).input("Y", Domain::Ternary);
    b.gate("succ0", GateKind::Succ, &["Y"])
        .gate("pred0", GateKind::Pred, &["Y"])
        .gate("sum_ha", GateKind::Mux3, &["X", "Y", "succ0", "pred0"])
        .gate("ni_y", GateKind::Ni, &["Y"])
        .gate("pi_y", GateKind::Pi, &["Y"])
        .gate("not_ni_y", GateKind::NotBin, &["ni_y"])
        .gate("not_pi_y", GateKind::NotBin, &["pi_y"])
        .gate("zero", GateKind::Const(Level::ZERO), &[])
        .gate(
            "cout_ha",
            GateKind::Mux3,
            &["X", "zero", "not_pi_y", "not_ni_y"],
        );
}

// Carry of a full adder: select between the half-adder carry and the carry
// produced when the incoming carry is set.
fn ternary_fa_carry(b: &mut CircuitBuilder) {
    b.gate("two", GateKind::Const(Level::TWO), &[])
        .gate(
            "cout1",
            GateKind::Mux3,
            &["X", "not_pi_y", "not_ni_y", "two"],
        )
        .gate("cout_fa", GateKind::Mux2, &["CIN", "cout_ha", "cout1"]);
}

pub fn build_ternary_ha() -> CircuitGraph {
    let mut b = CircuitBuilder::new("ternary-ha");
    ternary_ha_core(&mut b);
    b.output("SUM", "sum_ha")
        .output("COUT", "cout_ha")
        .kind(AdderKind::TernaryHa);
    b.build().expect("ternary half adder is well formed")
}

pub fn build_ternary_fa_v1() -> CircuitGraph {
    let mut b = CircuitBuilder::new("ternary-fa-v1");
    ternary_ha_core(&mut b);
    b.input("CIN", Domain::Binary);
    b.gate("succ1", GateKind::Succ, &["sum_ha"]).gate(
        "sum_fa",
        GateKind::Mux2,
        &["CIN", "sum_ha", "succ1"],
    );
    ternary_fa_carry(&mut b);
    b.output("SUM", "sum_fa")
        .output("COUT", "cout_fa")
        .kind(AdderKind::TernaryFaV1);
    b.build().expect("ternary full adder v1 is well formed")
}

pub fn build_ternary_fa_v2() -> CircuitGraph {
    let mut b = CircuitBuilder::new("ternary-fa-v2");
    ternary_ha_core(&mut b);
    b.input("CIN", Domain::Binary);
    b.gate("sel_x0", GateKind::Mux2, &["CIN", "Y", "succ0"])
        .gate("sel_x1", GateKind::Mux2, &["CIN", "succ0", "pred0"])
        .gate("sel_x2", GateKind::Mux2, &["CIN", "pred0", "Y"])
        .gate(
            "sum_fa",
            GateKind::Mux3,
            &["X", "sel_x0", "sel_x1", "sel_x2"],
        );
    ternary_fa_carry(&mut b);
    b.output("SUM", "sum_fa")
        .output("COUT", "cout_fa")
        .kind(AdderKind::TernaryFaV2);
    b.build().expect("ternary full adder v2 is well formed")
}

fn binary_ha(name: &str, kind: AdderKind) -> CircuitGraph {
    let mut b = CircuitBuilder::new(name);
    b.input("X", Domain::Binary).input("Y", Domain::Binary);
    b.gate("not_y", GateKind::NotBin, &["Y"])
        .gate("xor", GateKind::Mux2, &["X", "Y", "not_y"])
        .gate("zero", GateKind::Const(Level::ZERO), &[])
        .gate("and", GateKind::Mux2, &["X", "zero", "Y"]);
    b.output("SUM", "xor").output("COUT", "and").kind(kind);
    b.build().expect("binary half adder is well formed")
}

fn binary_fa(name: &str, kind: AdderKind) -> CircuitGraph {
    let mut b = CircuitBuilder::new(name);
    b.input("X", Domain::Binary)
        .input("Y", Domain::Binary)
        .input("CIN", Domain::Binary);
    b.gate("not_y", GateKind::NotBin, &["Y"])
        .gate("xor", GateKind::Mux2, &["X", "Y", "not_y"])
        .gate("xnor", GateKind::Mux2, &["X", "not_y", "Y"])
        .gate("zero", GateKind::Const(Level::ZERO), &[])
        .gate("two", GateKind::Const(Level::TWO), &[])
        .gate("and", GateKind::Mux2, &["X", "zero", "Y"])
        .gate("or", GateKind::Mux2, &["X", "Y", "two"])
        .gate("sum", GateKind::Mux2, &["CIN", "xor", "xnor"])
        .gate("cout", GateKind::Mux2, &["CIN", "and", "or"]);
    b.output("SUM", "sum").output("COUT", "cout").kind(kind);
    b.build().expect("binary full adder is well formed")
}

pub fn build_binary_ha_mux() -> CircuitGraph {
    binary_ha("binary-ha-mux", AdderKind::BinaryHaMux)
}

/// Same function as the MUX half adder; only the cost annotation differs.
pub fn build_binary_ha_std14() -> CircuitGraph {
    binary_ha("binary-ha-std", AdderKind::BinaryHaStd14)
}

pub fn build_binary_fa_mux() -> CircuitGraph {
    binary_fa("binary-fa-mux", AdderKind::BinaryFaMux)
}

pub fn build_binary_fa_std28() -> CircuitGraph {
    binary_fa("binary-fa-std", AdderKind::BinaryFaStd28)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(v: u8) -> Level {
        Level::new(v).unwrap()
    }

    fn eval(c: &CircuitGraph, ins: &[u8]) -> Vec<u8> {
        let ins: Vec<Level> = ins.iter().map(|&v| l(v)).collect();
        c.evaluate_ports(&ins)
            .unwrap()
            .iter()
            .map(|v| v.value())
            .collect()
    }

    #[test]
    fn ternary_half_adder_cells() {
        let ha = build_ternary_ha();
        assert_eq!(eval(&ha, &[2, 1]), [0, 2]);
        assert_eq!(eval(&ha, &[0, 2]), [2, 0]);
        assert_eq!(eval(&ha, &[1, 2]), [0, 2]);
    }

    #[test]
    fn ternary_full_adder_cells() {
        let v1 = build_ternary_fa_v1();
        let v2 = build_ternary_fa_v2();
        assert_eq!(eval(&v1, &[0, 2, 2]), [0, 2]);
        assert_eq!(eval(&v1, &[2, 0, 2]), [0, 2]);
        assert_eq!(eval(&v2, &[1, 1, 2]), [0, 2]);
        assert_eq!(eval(&v2, &[2, 2, 0]), [1, 2]);
        assert_eq!(eval(&v2, &[2, 1, 2]), [1, 2]);
    }

    #[test]
    fn binary_adder_cells() {
        let ha = build_binary_ha_mux();
        assert_eq!(eval(&ha, &[2, 2]), [0, 2]);
        assert_eq!(eval(&ha, &[0, 2]), [2, 0]);
        let fa = build_binary_fa_mux();
        assert_eq!(eval(&fa, &[2, 2, 2]), [2, 2]);
        assert_eq!(eval(&fa, &[0, 0, 0]), [0, 0]);
    }

    #[test]
    fn named_evaluation_and_errors() {
        let ha = build_ternary_ha();
        let mut ins = BTreeMap::new();
        ins.insert("X".to_string(), l(1));
        assert_eq!(ha.evaluate(&ins), Err(GraphError::MissingInput("Y".into())));
        ins.insert("Y".to_string(), l(2));
        let out = evaluate(&ha, &ins).unwrap();
        assert_eq!(out["SUM"], l(0));
        assert_eq!(out["COUT"], l(2));
        ins.insert("Z".to_string(), l(0));
        assert_eq!(ha.evaluate(&ins), Err(GraphError::UnknownInput("Z".into())));

        let fa = build_ternary_fa_v1();
        let err = fa.evaluate_ports(&[l(0), l(0), l(1)]).unwrap_err();
        assert!(matches!(err, GraphError::DomainViolation { ref at, .. } if at == "CIN"));
    }

    #[test]
    fn all_builtins_verify() {
        let expected_cases = [9, 18, 18, 4, 4, 8, 8];
        for (kind, n) in AdderKind::ALL.into_iter().zip(expected_cases) {
            let r = verify_builtin(kind);
            assert_eq!(r.cases_checked(), n, "{kind}");
            assert!(r.passed(), "{kind}: {}", r.summary());
        }
    }

    #[test]
    fn swapped_successor_and_predecessor_are_caught() {
        let mut b = CircuitBuilder::new("bad-ha");
        b.input("X", Domain::Ternary).input("Y", Domain::Ternary);
        b.gate("succ0", GateKind::Succ, &["Y"])
            .gate("pred0", GateKind::Pred, &["Y"])
            .gate("sum", GateKind::Mux3, &["X", "Y", "pred0", "succ0"])
            .gate("ni_y", GateKind::Ni, &["Y"])
            .gate("pi_y", GateKind::Pi, &["Y"])
            .gate("not_ni_y", GateKind::NotBin, &["ni_y"])
            .gate("not_pi_y", GateKind::NotBin, &["pi_y"])
            .gate("zero", GateKind::Const(Level::ZERO), &[])
            .gate(
                "cout",
                GateKind::Mux3,
                &["X", "zero", "not_pi_y", "not_ni_y"],
            );
        b.output("SUM", "sum").output("COUT", "cout");
        let report = exhaustive_verify(&b.build().unwrap(), Radix::Ternary, false).unwrap();
        assert_eq!(report.cases_checked(), 9);
        assert_eq!(report.mismatch_count(), 6);
    }

    #[test]
    fn signature_mismatch_is_rejected() {
        let err = exhaustive_verify(&build_ternary_ha(), Radix::Ternary, true).unwrap_err();
        assert!(matches!(err, GraphError::PortSignatureMismatch(_)));
        let err = exhaustive_verify(&build_binary_ha_mux(), Radix::Ternary, false).unwrap_err();
        assert!(matches!(err, GraphError::PortSignatureMismatch(_)));
    }

    #[test]
    fn construction_errors() {
        let mut b = CircuitBuilder::new("loop");
        b.input("a", Domain::Ternary);
        b.gate("s", GateKind::Succ, &["p"])
            .gate("p", GateKind::Pred, &["s"]);
        b.output("y", "s");
        assert_eq!(
            b.build(),
            Err(GraphError::CycleDetected(vec!["p".into(), "s".into()]))
        );

        let mut b = CircuitBuilder::new("ternary-into-binary");
        b.input("a", Domain::Ternary);
        b.gate("n", GateKind::NotBin, &["a"]);
        b.output("y", "n");
        assert!(matches!(
            b.build(),
            Err(GraphError::BinaryDomain { port: 0, .. })
        ));

        let mut b = CircuitBuilder::new("dangling");
        b.input("a", Domain::Ternary);
        b.gate("s", GateKind::Succ, &["nope"]);
        b.output("y", "s");
        assert!(matches!(b.build(), Err(GraphError::UndrivenNet { .. })));

        let mut b = CircuitBuilder::new("arity");
        b.input("a", Domain::Ternary);
        b.gate("m", GateKind::Mux2, &["a"]);
        b.output("y", "m");
        assert!(matches!(
            b.build(),
            Err(GraphError::ArityMismatch {
                expected: 3,
                got: 1,
                ..
            })
        ));

        let mut b = CircuitBuilder::new("undriven-out");
        b.input("a", Domain::Ternary);
        b.output("y", "ghost");
        assert!(matches!(b.build(), Err(GraphError::UndrivenOutput { .. })));
    }

    #[test]
    fn truth_tables_have_full_domain() {
        assert_eq!(exhaustive_table(&build_ternary_ha()).unwrap().len(), 9);
        assert_eq!(exhaustive_table(&build_ternary_fa_v1()).unwrap().len(), 18);
        assert_eq!(exhaustive_table(&build_binary_ha_mux()).unwrap().len(), 4);
    }

    #[test]
    fn csv_export_layout() {
        let csv = verify_builtin(AdderKind::BinaryHaMux).to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "X,Y,SUM,COUT,SUM_expected,COUT_expected,match");
        assert_eq!(lines.len(), 5);
        assert_eq!(lines[4], "2,2,0,2,0,2,true");
    }
}

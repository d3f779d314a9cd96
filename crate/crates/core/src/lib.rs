//! Simulation, verification and transistor-cost analysis for ternary adders
//! built from threshold inverters, successor/predecessor circuits and
//! multiplexers, alongside their binary counterparts.
//!
//! - [`logic`]: levels, voltages and the primitive ternary functions.
//! - [`graph`]: behavioral gate graphs and exhaustive verification.
//! - [`switch`]: switch-level netlists and the steady-state solver.
//! - [`metrics`]: transistor counts and ternary/binary comparisons.
//! - [`arithmetic`]: multi-digit ripple-carry adders.
//! - [`netlist_io`]: the `.tnl` netlist text format.
//! - [`cli`]: the `trimux` command line.

pub mod arithmetic;
pub mod cli;
pub mod graph;
pub mod logic;
pub mod metrics;
pub mod netlist_io;
pub mod switch;
pub mod table;

pub use arithmetic::{build_ripple_adder, oracle_check, word_comparison, DigitVector, RippleAdder};
pub use graph::{
    exhaustive_table, exhaustive_verify, AdderKind, CircuitBuilder, CircuitGraph, Domain, GateKind,
    SupplyMode,
};
pub use logic::{BinaryLevel, Level, Radix, Voltage};
pub use metrics::{count_transistors, equivalent_trits, CostBreakdown, FaVersion};
pub use netlist_io::{parse, serialize, validate, NetlistDocument};
pub use switch::{solve, NodeState, Oracle, SwitchNetlist};
pub use table::TruthTable;

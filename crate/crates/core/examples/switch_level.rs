//! Solves the reference transistor netlists and sweeps each one against its
//! behavioral function.

use std::collections::BTreeMap;

use trimux::graph::SupplyMode;
use trimux::logic::{level_to_voltage, Level, Radix};
use trimux::switch::{
    netlist_succ_decoded, reference_netlists, solve, standard_sweep, static_power_scan, Oracle,
};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for (oracle, n) in reference_netlists() {
        let r = standard_sweep(&n, oracle)?;
        println!(
            "{:<14} {:>2} devices  vs {:<5} {}  max iterations {}/{}",
            n.name(),
            n.device_count(),
            oracle.name(),
            r.summary(),
            r.max_iterations(),
            n.iteration_bound()
        );
    }

    println!();
    for mode in [SupplyMode::TwoSupplies, SupplyMode::OneSupply] {
        let n = netlist_succ_decoded(mode);
        for y in Level::ALL {
            let drive = BTreeMap::from([("Y".to_string(), level_to_voltage(y, Radix::Ternary)?)]);
            let r = solve(&n, &drive)?;
            let flag = if r.static_power_nodes.contains("out") {
                "  (static power)"
            } else {
                ""
            };
            println!("{}: Y={y} -> out = {}{flag}", n.name(), r.states["out"]);
        }
        let scan = static_power_scan(&n, Oracle::Succ, &|x| Oracle::Succ.standard_decode(x))?;
        let flagged: Vec<String> = scan
            .iter()
            .filter(|(_, s)| !s.is_empty())
            .map(|(i, _)| i[0].to_string())
            .collect();
        println!(
            "{}: static power at Y in {{{}}}",
            n.name(),
            flagged.join(", ")
        );
    }
    Ok(())
}

//! Transistor count breakdowns for the ternary cells and the prior designs
//! they are compared against.

use trimux::graph::SupplyMode;
use trimux::metrics::{
    binary_baseline_costs, fa_cost_table, ha_cost_table, prior_work_tables, FaVersion,
};

fn main() {
    for mode in [SupplyMode::TwoSupplies, SupplyMode::OneSupply] {
        println!("{}", ha_cost_table(mode).to_text());
        for v in [FaVersion::V1, FaVersion::V2] {
            println!("{}", fa_cost_table(v, mode).to_text());
        }
    }

    println!("binary cells");
    for (name, count) in binary_baseline_costs() {
        println!("  {name:<16} {count:>3}");
    }

    println!("\nprior designs");
    for e in prior_work_tables() {
        let supply = e
            .supply_mode
            .map(|m| format!("{m} supply"))
            .unwrap_or_default();
        let mark = if e.proposed { "*" } else { " " };
        println!(
            "  {mark} {:<10} {:?} {:>4}  {supply}",
            e.citation, e.class, e.count
        );
    }
}

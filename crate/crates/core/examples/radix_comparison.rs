//! Ternary against binary: per-cell cost ratios and word-level comparisons.

use trimux::arithmetic::word_comparison;
use trimux::graph::SupplyMode;
use trimux::metrics::{equivalent_trits, range_equivalent_trits, ratio_report, FaVersion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    print!("{}", ratio_report().to_text());

    println!("\nbits  trits  range trits");
    for bits in [1, 4, 8, 16, 32, 64] {
        println!(
            "{bits:>4}  {:>5}  {:>11}",
            equivalent_trits(bits),
            range_equivalent_trits(bits)
        );
    }

    for mode in [SupplyMode::TwoSupplies, SupplyMode::OneSupply] {
        for bits in [8, 16, 32] {
            println!();
            print!("{}", word_comparison(bits, mode, FaVersion::V2)?.to_text());
        }
    }
    Ok(())
}

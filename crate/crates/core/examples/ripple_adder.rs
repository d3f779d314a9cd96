//! Multi-trit ripple-carry addition checked against integers, with a stuck
//! carry to show the oracle catching it.

use trimux::arithmetic::{build_ripple_adder, oracle_check, CarryFault, DigitVector};
use trimux::graph::SupplyMode;
use trimux::logic::Radix;
use trimux::metrics::FaVersion;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let adder = build_ripple_adder(Radix::Ternary, 5, FaVersion::V2)?;
    let a = DigitVector::from_value(Radix::Ternary, 5, 200)?;
    let b = DigitVector::from_value(Radix::Ternary, 5, 42)?;
    let (sum, carry) = adder.add(&a, &b)?;
    let msb_first = |v: &DigitVector| {
        v.digits()
            .iter()
            .rev()
            .map(u8::to_string)
            .collect::<String>()
    };
    println!(
        "{} + {} = {} carry {}",
        msb_first(&a),
        msb_first(&b),
        msb_first(&sum),
        carry as u8
    );
    println!("{} + {} = {}", a.value(), b.value(), sum.value());
    println!(
        "cost: {} (two supplies), {} (one supply)",
        adder.cost(SupplyMode::TwoSupplies),
        adder.cost(SupplyMode::OneSupply)
    );

    for width in 1..=4 {
        let r = oracle_check(
            &build_ripple_adder(Radix::Ternary, width, FaVersion::V1)?,
            10_000,
        )?;
        println!("{}", r.summary());
    }
    println!("{}", oracle_check(&adder, 10_000)?.summary());
    println!(
        "{}",
        oracle_check(
            &build_ripple_adder(Radix::Binary, 8, FaVersion::V2)?,
            10_000
        )?
        .summary()
    );

    let faulty = adder.with_carry_fault(2, CarryFault::StuckAt(false))?;
    let r = oracle_check(&faulty, 10_000)?;
    println!("carry into stage 2 stuck at 0: {}", r.summary());
    if let Some(c) = r.mismatches().next() {
        println!(
            "  e.g. {} + {} gave {}, expected {}",
            c.a, c.b, c.sum, c.expected_sum
        );
    }
    Ok(())
}

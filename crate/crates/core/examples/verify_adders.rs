//! Exhaustively checks every built-in cell against integer addition, then
//! shows what a wiring mistake looks like.

use trimux::graph::{
    exhaustive_verify, verify_builtin, AdderKind, CircuitBuilder, Domain, GateKind,
};
use trimux::logic::Radix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    for kind in AdderKind::ALL {
        println!("{kind:<14} {}", verify_builtin(kind).summary());
    }

    // Half adder with the successor and predecessor swapped.
    let swapped = CircuitBuilder::new("swapped-ha")
        .input("X", Domain::Ternary)
        .input("Y", Domain::Ternary)
        .gate("succ0", GateKind::Pred, &["Y"])
        .gate("pred0", GateKind::Succ, &["Y"])
        .gate("sum_ha", GateKind::Mux3, &["X", "Y", "succ0", "pred0"])
        .gate("ni_y", GateKind::Ni, &["Y"])
        .gate("pi_y", GateKind::Pi, &["Y"])
        .gate("not_ni_y", GateKind::NotBin, &["ni_y"])
        .gate("not_pi_y", GateKind::NotBin, &["pi_y"])
        .gate("zero", GateKind::Const(trimux::Level::ZERO), &[])
        .gate(
            "cout_ha",
            GateKind::Mux3,
            &["X", "zero", "not_pi_y", "not_ni_y"],
        )
        .output("SUM", "sum_ha")
        .output("COUT", "cout_ha")
        .build()?;
    let report = exhaustive_verify(&swapped, Radix::Ternary, false)?;
    println!("\n{}: {}", swapped.name(), report.summary());
    print!("{}", report.to_csv());
    Ok(())
}

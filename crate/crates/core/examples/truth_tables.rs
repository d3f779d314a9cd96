//! Prints the half adder table, the carry-in slice of both full adders and
//! the primitive functions they are built from.

use trimux::graph::{exhaustive_table, table_text, AdderKind};
use trimux::logic::{ni, pi, pred, succ, Level};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    println!("{}", AdderKind::TernaryHa);
    print!("{}", table_text(&AdderKind::TernaryHa.build())?);

    for kind in [AdderKind::TernaryFaV1, AdderKind::TernaryFaV2] {
        let slice = exhaustive_table(&kind.build())?
            .slice("CIN", Level::TWO)
            .expect("full adders have a CIN input");
        println!("\n{kind}, CIN = 1");
        for name in ["SUM", "COUT"] {
            let grid = slice.grid(name).expect("two ternary inputs");
            println!("{name:<4} X/Y  0 1 2");
            for (x, row) in grid.iter().enumerate() {
                // Carries are binary levels; show them as bits.
                let cells: Vec<String> = row
                    .iter()
                    .map(|&v| if name == "COUT" { v / 2 } else { v }.to_string())
                    .collect();
                println!("     {x}    {}", cells.join(" "));
            }
        }
    }

    println!("\n y  NI PI succ pred");
    for y in Level::ALL {
        println!(
            " {y}   {}  {}    {}    {}",
            ni(y).level(),
            pi(y).level(),
            succ(y),
            pred(y)
        );
    }
    Ok(())
}

//! Parses a `.tnl` netlist, reports diagnostics and prints its canonical form.
//!
//! Usage: `cargo run --example netlist_roundtrip [FILE]`

use trimux::netlist_io::{parse_bytes, serialize, validate};
use trimux::switch::netlist_mux2;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = match std::env::args().nth(1) {
        Some(path) => std::fs::read(path)?,
        None => serialize(&netlist_mux2()).into_bytes(),
    };
    let doc = match parse_bytes(&text) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };
    for d in validate(&doc) {
        eprintln!("{d}");
    }
    let canonical = serialize(&doc.netlist);
    print!("{canonical}");
    let again = serialize(&trimux::parse(&canonical)?.netlist);
    assert_eq!(canonical, again);
    eprintln!(
        "{} devices, canonical form is stable",
        doc.netlist.device_count()
    );
    Ok(())
}

//! Parse a CDL file, print what it declares, and render it back to text.
//!
//! cargo run --example parse_and_render [FILE.cdl]

use std::process::ExitCode;

use tecs_rustgen::frontend::{parse_unit, render_unit};
use tecs_rustgen::model::validate_unit;

fn main() -> ExitCode {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/samples/sensor.cdl").into());
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("{path}: {e}");
            return ExitCode::from(2);
        }
    };
    let parsed = parse_unit(&text, &path);
    for d in &parsed.diagnostics {
        eprintln!("{d}");
    }
    let Some(unit) = parsed.unit else {
        return ExitCode::from(1);
    };
    for d in validate_unit(&unit) {
        eprintln!("{d}");
    }

    for s in unit.signatures() {
        println!("signature {} ({} function(s))", s.name, s.functions.len());
    }
    for ct in unit.celltypes() {
        println!(
            "celltype  {} ({} call, {} entry)",
            ct.name,
            ct.call_ports.len(),
            ct.entry_ports.len()
        );
    }
    for cell in unit.cells() {
        println!("cell      {} : {}", cell.name, cell.celltype_name);
    }
    println!("\n{}", render_unit(&unit));
    ExitCode::SUCCESS
}
